//! Exponent calculus for dilations on modulation spaces.
//!
//! Points of the index square are stored as reciprocals `(1/p, 1/q)` so that
//! `p = ∞` is the exact value `0.0` and conjugation `1/p ↦ 1 - 1/p` is total.
//!
//! The six index regions overlap on their boundaries. [`classify_region`]
//! reports every region a point belongs to, and [`mu1`]/[`mu2`] evaluate every
//! applicable branch and insist that they agree.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Branch values closer than this are treated as equal.
pub const BRANCH_TOL: f64 = 1e-12;

/// A Lebesgue exponent pair `(p, q)` stored as `(1/p, 1/q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub inv_p: f64,
    pub inv_q: f64,
}

impl ExponentPair {
    pub fn from_reciprocals(inv_p: f64, inv_q: f64) -> Result<Self> {
        for (name, v) in [("1/p", inv_p), ("1/q", inv_q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} outside [0, 1]"
                )));
            }
        }
        Ok(Self { inv_p, inv_q })
    }

    /// Builds the pair from exponents in `[1, ∞]`; `f64::INFINITY` is allowed.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Self::from_reciprocals(reciprocal(p)?, reciprocal(q)?)
    }

    pub fn p(&self) -> f64 {
        inverse_or_inf(self.inv_p)
    }

    pub fn q(&self) -> f64 {
        inverse_or_inf(self.inv_q)
    }

    /// The conjugate pair `(p', q')`.
    pub fn conj(&self) -> Self {
        Self {
            inv_p: 1.0 - self.inv_p,
            inv_q: 1.0 - self.inv_q,
        }
    }
}

fn reciprocal(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Lebesgue exponent {p} outside [1, inf]"
        )));
    }
    Ok(if p.is_infinite() { 0.0 } else { 1.0 / p })
}

fn inverse_or_inf(r: f64) -> f64 {
    if r == 0.0 {
        f64::INFINITY
    } else {
        1.0 / r
    }
}

/// Formats a Lebesgue exponent, spelling infinity as `inf`.
pub fn format_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else if (p - p.round()).abs() < 1e-12 {
        format!("{}", p.round() as i64)
    } else {
        format!("{p}")
    }
}

/// Parses a Lebesgue exponent; accepts `inf`/`infinity` for ∞.
pub fn parse_exponent(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    let p = match t.as_str() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        _ => t
            .parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse exponent '{s}'")))?,
    };
    reciprocal(p)?;
    Ok(p)
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_exponent(self.p()),
            format_exponent(self.q())
        )
    }
}

/// Region flags of a point of the index square; `*_s` is the starred set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionMembership {
    pub in_i1: bool,
    pub in_i1s: bool,
    pub in_i2: bool,
    pub in_i2s: bool,
    pub in_i3: bool,
    pub in_i3s: bool,
}

impl RegionMembership {
    pub fn unstarred_count(&self) -> usize {
        [self.in_i1, self.in_i2, self.in_i3]
            .iter()
            .filter(|b| **b)
            .count()
    }

    pub fn starred_count(&self) -> usize {
        [self.in_i1s, self.in_i2s, self.in_i3s]
            .iter()
            .filter(|b| **b)
            .count()
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (flag, name) in [
            (self.in_i1, "I1"),
            (self.in_i1s, "I1*"),
            (self.in_i2, "I2"),
            (self.in_i2s, "I2*"),
            (self.in_i3, "I3"),
            (self.in_i3s, "I3*"),
        ] {
            if flag {
                out.push(name);
            }
        }
        out
    }
}

/// Evaluates the six inequality systems at `e`.
pub fn classify_region(e: ExponentPair) -> RegionMembership {
    let x = e.inv_p;
    let xc = 1.0 - e.inv_p;
    let y = e.inv_q;
    RegionMembership {
        in_i1: x.max(xc) <= y,
        in_i1s: x.min(xc) >= y,
        in_i2: y.max(0.5) <= xc,
        in_i2s: y.min(0.5) >= xc,
        in_i3: y.max(0.5) <= x,
        in_i3s: y.min(0.5) >= x,
    }
}

fn agree(name: &str, e: ExponentPair, branches: &[(bool, f64)]) -> Result<f64> {
    let mut value: Option<f64> = None;
    for &(applies, v) in branches {
        if !applies {
            continue;
        }
        match value {
            None => value = Some(v),
            Some(prev) if (prev - v).abs() > BRANCH_TOL => {
                return Err(Error::Inconsistent(format!(
                    "{name} branches disagree at {e}: {prev} vs {v}"
                )))
            }
            Some(_) => {}
        }
    }
    value.ok_or_else(|| Error::Inconsistent(format!("{name}: no region contains {e}")))
}

/// Upper dilation index μ₁, defined piecewise on the starred regions.
pub fn mu1(e: ExponentPair) -> Result<f64> {
    let r = classify_region(e);
    let (x, y) = (e.inv_p, e.inv_q);
    agree(
        "mu1",
        e,
        &[
            (r.in_i1s, -x),
            (r.in_i2s, y - 1.0),
            (r.in_i3s, -2.0 * x + y),
        ],
    )
}

/// Lower dilation index μ₂, defined piecewise on the unstarred regions.
pub fn mu2(e: ExponentPair) -> Result<f64> {
    let r = classify_region(e);
    let (x, y) = (e.inv_p, e.inv_q);
    agree(
        "mu2",
        e,
        &[
            (r.in_i1, -x),
            (r.in_i2, y - 1.0),
            (r.in_i3, -2.0 * x + y),
        ],
    )
}

/// ν₁ = μ₁ + 1/p.
pub fn nu1(e: ExponentPair) -> Result<f64> {
    Ok(mu1(e)? + e.inv_p)
}

/// ν₂ = μ₂ + 1/p.
pub fn nu2(e: ExponentPair) -> Result<f64> {
    Ok(mu2(e)? + e.inv_p)
}

/// Residuals of the duality relations
/// `μ₁(p',q') = -1 - μ₂(p,q)` and `μ₂(p',q') = -1 - μ₁(p,q)`.
pub fn duality_check(e: ExponentPair) -> Result<(f64, f64)> {
    let c = e.conj();
    Ok((mu1(c)? + 1.0 + mu2(e)?, mu2(c)? + 1.0 + mu1(e)?))
}

/// Polynomial weight exponents: `t` on the time variable, `s` on frequency.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightSpec {
    pub t: f64,
    pub s: f64,
}

impl WeightSpec {
    pub fn new(t: f64, s: f64) -> Result<Self> {
        if !t.is_finite() || !s.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "weights must be finite, got t={t}, s={s}"
            )));
        }
        Ok(Self { t, s })
    }

    pub fn unweighted() -> Self {
        Self::default()
    }

    pub fn time(t: f64) -> Self {
        Self { t, s: 0.0 }
    }

    pub fn freq(s: f64) -> Self {
        Self { t: 0.0, s }
    }
}

/// Which dilation regime a law or sweep refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// λ ≥ 1
    LambdaGE1,
    /// 0 < λ ≤ 1
    LambdaLE1,
}

impl Regime {
    pub fn flip(self) -> Self {
        match self {
            Regime::LambdaGE1 => Regime::LambdaLE1,
            Regime::LambdaLE1 => Regime::LambdaGE1,
        }
    }

    pub fn contains(self, lambda: f64) -> bool {
        match self {
            Regime::LambdaGE1 => lambda >= 1.0,
            Regime::LambdaLE1 => lambda > 0.0 && lambda <= 1.0,
        }
    }
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ge1" | "large" | "lambda>=1" => Ok(Regime::LambdaGE1),
            "le1" | "small" | "lambda<=1" => Ok(Regime::LambdaLE1),
            other => Err(Error::InvalidParameter(format!("unknown regime '{other}'"))),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::LambdaGE1 => "ge1",
            Regime::LambdaLE1 => "le1",
        })
    }
}

/// The function spaces whose dilation behaviour is tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceTag {
    /// `M^{p,q}_{t,0}`
    ModSpaceTime,
    /// `M^{p,q}_{0,s}`
    ModFreq,
    /// `M^{p,q}_{t,s}` with separable weights
    ModBoth,
    /// `M^{p,q}_{v_s}` with the joint weight `<(x, ω)>^s`
    ModRadial,
    /// `W(FL^p_s, L^q_t)`
    WienerAmalgam,
    /// `B^{p,q}_s`
    Besov,
}

impl FromStr for SpaceTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mod-time" | "modspacetime" => Ok(SpaceTag::ModSpaceTime),
            "mod-freq" | "modfreq" => Ok(SpaceTag::ModFreq),
            "mod-both" | "modboth" => Ok(SpaceTag::ModBoth),
            "mod-radial" | "modradial" => Ok(SpaceTag::ModRadial),
            "wiener" | "wieneramalgam" => Ok(SpaceTag::WienerAmalgam),
            "besov" => Ok(SpaceTag::Besov),
            other => Err(Error::Unsupported(format!("space kind '{other}'"))),
        }
    }
}

/// A space together with its weight parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpaceKind {
    ModSpaceTime { t: f64 },
    ModFreq { s: f64 },
    ModBoth { t: f64, s: f64 },
    ModRadial { s: f64 },
    WienerAmalgam { t: f64, s: f64 },
    Besov { s: f64 },
}

impl SpaceKind {
    /// Attaches weights to a space tag, rejecting weights the space does not carry.
    pub fn with_weights(tag: SpaceTag, w: WeightSpec) -> Result<Self> {
        let reject = |what: &str| {
            Err(Error::Unsupported(format!(
                "{tag:?} carries no {what} weight (got t={}, s={})",
                w.t, w.s
            )))
        };
        match tag {
            SpaceTag::ModSpaceTime if w.s != 0.0 => reject("frequency"),
            SpaceTag::ModSpaceTime => Ok(SpaceKind::ModSpaceTime { t: w.t }),
            SpaceTag::ModFreq if w.t != 0.0 => reject("time"),
            SpaceTag::ModFreq => Ok(SpaceKind::ModFreq { s: w.s }),
            SpaceTag::ModBoth => Ok(SpaceKind::ModBoth { t: w.t, s: w.s }),
            SpaceTag::ModRadial if w.t != 0.0 => reject("separate time"),
            SpaceTag::ModRadial => Ok(SpaceKind::ModRadial { s: w.s }),
            SpaceTag::WienerAmalgam => Ok(SpaceKind::WienerAmalgam { t: w.t, s: w.s }),
            SpaceTag::Besov if w.t != 0.0 => reject("time"),
            SpaceTag::Besov => Ok(SpaceKind::Besov { s: w.s }),
        }
    }
}

/// Predicted dilation law of `‖f_λ‖ / ‖f‖` in one regime.
///
/// `lower_bound_exponent` and `upper_bound_exponent` are the powers of λ in
/// `C⁻¹ λ^a ‖f‖ ≤ ‖f_λ‖ ≤ C λ^b ‖f‖`. For λ ≥ 1 a log–log slope of any
/// sweep must lie in `[a, b]`; for λ ≤ 1 in `[b, a]`. `lower_exponent` and
/// `upper_exponent` hold that slope interval, so they are ordered in both
/// regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingLaw {
    pub space_kind: SpaceKind,
    pub regime: Regime,
    pub dim: usize,
    pub lower_bound_exponent: f64,
    pub upper_bound_exponent: f64,
    pub lower_exponent: f64,
    pub upper_exponent: f64,
}

/// `λ^a · max{1, λ^b}` as a single power of λ within the regime.
fn max_factor(regime: Regime, b: f64) -> f64 {
    match regime {
        Regime::LambdaGE1 => b.max(0.0),
        Regime::LambdaLE1 => b.min(0.0),
    }
}

/// `λ^a · min{1, λ^b}` as a single power of λ within the regime.
fn min_factor(regime: Regime, b: f64) -> f64 {
    match regime {
        Regime::LambdaGE1 => b.min(0.0),
        Regime::LambdaLE1 => b.max(0.0),
    }
}

/// Predicted exponents of the dilation bounds for `space` at `e` in `regime`.
///
/// For modulation spaces the λ ≥ 1 bounds use `dμ₂` (lower) and `dμ₁` (upper);
/// the λ ≤ 1 bounds swap the indices. Wiener amalgams use the indices at the
/// conjugate pair. Besov spaces follow `λ^{-d/p} min/max{1, λ^s}`.
pub fn predicted_law(
    tag: SpaceTag,
    weights: WeightSpec,
    e: ExponentPair,
    regime: Regime,
    dim: usize,
) -> Result<ScalingLaw> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let kind = SpaceKind::with_weights(tag, weights)?;
    let d = dim as f64;
    let (small_idx, large_idx) = match kind {
        SpaceKind::WienerAmalgam { .. } => (mu2(e.conj())?, mu1(e.conj())?),
        SpaceKind::Besov { .. } => (-e.inv_p, -e.inv_p),
        _ => (mu2(e)?, mu1(e)?),
    };
    let (small_idx, large_idx) = (d * small_idx, d * large_idx);
    // Base exponents: upper bound uses μ₁ for λ ≥ 1 and μ₂ for λ ≤ 1.
    let (base_lower, base_upper) = match regime {
        Regime::LambdaGE1 => (small_idx, large_idx),
        Regime::LambdaLE1 => (large_idx, small_idx),
    };
    // Weight factors: the upper bound carries max{...}, the lower bound min{...}.
    let weight_bs: Vec<f64> = match kind {
        SpaceKind::ModSpaceTime { t } => vec![-t],
        SpaceKind::ModFreq { s } => vec![s],
        SpaceKind::ModBoth { t, s } => vec![-t, s],
        SpaceKind::WienerAmalgam { t, s } => vec![t, -s],
        SpaceKind::Besov { s } => vec![s],
        SpaceKind::ModRadial { .. } => vec![],
    };
    let mut upper = base_upper;
    let mut lower = base_lower;
    for b in &weight_bs {
        upper += max_factor(regime, *b);
        lower += min_factor(regime, *b);
    }
    if let SpaceKind::ModRadial { s } = kind {
        // max{λ^{-s}, λ^s} and min{λ^{-s}, λ^s}
        let a = s.abs();
        match regime {
            Regime::LambdaGE1 => {
                upper += a;
                lower -= a;
            }
            Regime::LambdaLE1 => {
                upper -= a;
                lower += a;
            }
        }
    }
    Ok(ScalingLaw {
        space_kind: kind,
        regime,
        dim,
        lower_bound_exponent: lower,
        upper_bound_exponent: upper,
        lower_exponent: lower.min(upper),
        upper_exponent: lower.max(upper),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(ip: f64, iq: f64) -> ExponentPair {
        ExponentPair::from_reciprocals(ip, iq).unwrap()
    }

    #[test]
    fn region_truth_tables() {
        // (1/p, 1/q) = (0, 1)
        let r = classify_region(ep(0.0, 1.0));
        assert_eq!(
            (r.in_i1, r.in_i1s, r.in_i2, r.in_i2s, r.in_i3, r.in_i3s),
            (true, false, true, false, false, true)
        );
        // (1, 1)
        let r = classify_region(ep(1.0, 1.0));
        assert_eq!(
            (r.in_i1, r.in_i1s, r.in_i2, r.in_i2s, r.in_i3, r.in_i3s),
            (true, false, false, true, true, false)
        );
        // center point saturates everything
        let r = classify_region(ep(0.5, 0.5));
        assert_eq!(r.labels().len(), 6);
    }

    #[test]
    fn mu_at_wave_point() {
        let e = ExponentPair::new(f64::INFINITY, 1.0).unwrap();
        assert_eq!(mu1(e).unwrap(), 1.0);
        assert_eq!(mu2(e).unwrap(), 0.0);
    }

    #[test]
    fn mu_center_and_corner() {
        let e = ExponentPair::new(2.0, 2.0).unwrap();
        assert_eq!(mu1(e).unwrap(), -0.5);
        assert_eq!(mu2(e).unwrap(), -0.5);
        assert_eq!(nu2(e).unwrap(), 0.0);
        // (1,1) lies in I1 (-1/p) and I3 (-2/p + 1/q), both equal to -1
        let e = ep(1.0, 1.0);
        let r = classify_region(e);
        assert!(r.in_i1 && r.in_i3 && !r.in_i2);
        assert_eq!(mu2(e).unwrap(), -1.0);
    }

    #[test]
    fn nu1_on_conjugate_line() {
        for k in 0..=20 {
            let x = 0.5 + 0.5 * k as f64 / 20.0; // 1 <= p <= 2
            assert!(nu1(ep(x, 1.0 - x)).unwrap().abs() < 1e-15);
            let x = 0.5 * k as f64 / 20.0; // 2 <= p <= inf
            let expected = (1.0 - x) - x;
            assert!((nu1(ep(x, 1.0 - x)).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn duality_examples() {
        assert_eq!(duality_check(ep(0.5, 0.5)).unwrap(), (0.0, 0.0));
        let e = ExponentPair::new(f64::INFINITY, 1.0).unwrap();
        assert_eq!(mu1(e.conj()).unwrap(), -1.0);
        assert_eq!(mu2(e.conj()).unwrap(), -2.0);
        assert_eq!(duality_check(e).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn laws_examples() {
        let e = ExponentPair::new(2.0, 2.0).unwrap();
        for regime in [Regime::LambdaGE1, Regime::LambdaLE1] {
            for d in [1usize, 2] {
                let law =
                    predicted_law(SpaceTag::ModSpaceTime, WeightSpec::unweighted(), e, regime, d)
                        .unwrap();
                assert_eq!(law.lower_exponent, -(d as f64) / 2.0);
                assert_eq!(law.upper_exponent, -(d as f64) / 2.0);
            }
        }
        // ModFreq, s >= 0, lambda >= 1 on I2*: d(1/q - 1) + s
        let e = ExponentPair::new(1.0, 2.0).unwrap();
        assert!(classify_region(e).in_i2s);
        let law =
            predicted_law(SpaceTag::ModFreq, WeightSpec::freq(0.7), e, Regime::LambdaGE1, 1)
                .unwrap();
        assert!((law.upper_bound_exponent - (-0.5 + 0.7)).abs() < 1e-15);
        // Wiener amalgam at (inf, 1): indices at (1, inf)
        let e = ExponentPair::new(f64::INFINITY, 1.0).unwrap();
        let law = predicted_law(
            SpaceTag::WienerAmalgam,
            WeightSpec::unweighted(),
            e,
            Regime::LambdaGE1,
            3,
        )
        .unwrap();
        // (1, inf): mu1 = -1 on I1*, mu2 = -2 on I3
        assert_eq!(law.upper_bound_exponent, -3.0);
        assert_eq!(law.lower_bound_exponent, -6.0);
    }

    #[test]
    fn rejects_foreign_weights() {
        let e = ExponentPair::new(2.0, 2.0).unwrap();
        let err = predicted_law(
            SpaceTag::ModSpaceTime,
            WeightSpec::new(0.0, 1.0).unwrap(),
            e,
            Regime::LambdaGE1,
            1,
        );
        assert!(matches!(err, Err(Error::Unsupported(_))));
        assert!("sobolev".parse::<SpaceTag>().is_err());
    }

    #[test]
    fn exponent_parsing() {
        assert!(parse_exponent("inf").unwrap().is_infinite());
        assert_eq!(parse_exponent("2").unwrap(), 2.0);
        assert!(parse_exponent("0.5").is_err());
        assert!(ExponentPair::new(0.9, 2.0).is_err());
        assert_eq!(format_exponent(f64::INFINITY), "inf");
        let e = ExponentPair::new(f64::INFINITY, 4.0).unwrap();
        assert_eq!(e.conj().conj(), e);
        assert_eq!(e.to_string(), "(inf, 4)");
    }

    #[test]
    fn grid_branches_agree_and_cover() {
        let n = 200;
        let mut violations = 0;
        for i in 0..=n {
            for j in 0..=n {
                let e = ep(i as f64 / n as f64, j as f64 / n as f64);
                let r = classify_region(e);
                if r.unstarred_count() == 0 || r.starred_count() == 0 {
                    violations += 1;
                }
                if mu1(e).is_err() || mu2(e).is_err() {
                    violations += 1;
                }
            }
        }
        assert_eq!(violations, 0);
    }

    fn brute_mu(x: f64, y: f64, starred: bool) -> f64 {
        // the index is the extreme branch value: max for μ₁, min for μ₂
        let b = [-x, y - 1.0, -2.0 * x + y];
        if starred {
            b.into_iter().fold(f64::NEG_INFINITY, f64::max)
        } else {
            b.into_iter().fold(f64::INFINITY, f64::min)
        }
    }

    #[test]
    fn mu_is_extreme_branch() {
        let n = 64;
        for i in 0..=n {
            for j in 0..=n {
                let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
                let e = ep(x, y);
                assert!((mu1(e).unwrap() - brute_mu(x, y, true)).abs() < 1e-15, "{e}");
                assert!((mu2(e).unwrap() - brute_mu(x, y, false)).abs() < 1e-15, "{e}");
            }
        }
    }

    use proptest::prelude::*;

    fn any_pair() -> impl Strategy<Value = ExponentPair> {
        (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(x, y)| ep(x, y))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn duality_residual_vanishes(e in any_pair()) {
            let (a, b) = duality_check(e).unwrap();
            prop_assert!(a.abs() <= 4.0 * f64::EPSILON && b.abs() <= 4.0 * f64::EPSILON, "{e}: {a} {b}");
        }

        #[test]
        fn mu_ordered(e in any_pair()) {
            prop_assert!(mu2(e).unwrap() <= mu1(e).unwrap());
        }
    }

    proptest! {
        #[test]
        fn regimes_swap_unweighted_bounds(e in any_pair(), d in 1usize..=3) {
            for tag in [SpaceTag::ModSpaceTime, SpaceTag::WienerAmalgam] {
                let w = WeightSpec::unweighted();
                let ge = predicted_law(tag, w, e, Regime::LambdaGE1, d).unwrap();
                let le = predicted_law(tag, w, e, Regime::LambdaLE1, d).unwrap();
                prop_assert_eq!(ge.lower_bound_exponent, le.upper_bound_exponent);
                prop_assert_eq!(ge.upper_bound_exponent, le.lower_bound_exponent);
            }
        }

        #[test]
        fn zero_weight_reduces_to_unweighted(e in any_pair(), d in 1usize..=3, ge in any::<bool>()) {
            let regime = if ge { Regime::LambdaGE1 } else { Regime::LambdaLE1 };
            let base = predicted_law(SpaceTag::ModSpaceTime, WeightSpec::time(0.0), e, regime, d).unwrap();
            for (tag, w) in [
                (SpaceTag::ModFreq, WeightSpec::freq(0.0)),
                (SpaceTag::ModBoth, WeightSpec::unweighted()),
            ] {
                let l = predicted_law(tag, w, e, regime, d).unwrap();
                prop_assert_eq!(l.lower_bound_exponent, base.lower_bound_exponent);
                prop_assert_eq!(l.upper_bound_exponent, base.upper_bound_exponent);
            }
        }

        #[test]
        fn slope_interval_ordered(e in any_pair(), t in -2.0..2.0f64, s in -2.0..2.0f64, ge in any::<bool>()) {
            let regime = if ge { Regime::LambdaGE1 } else { Regime::LambdaLE1 };
            let l = predicted_law(SpaceTag::ModBoth, WeightSpec::new(t, s).unwrap(), e, regime, 1).unwrap();
            prop_assert!(l.lower_exponent <= l.upper_exponent);
        }
    }
}
