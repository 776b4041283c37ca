//! Registry of the extremal function families used for the sharpness sweeps.
//!
//! Each family is a λ-dependent function `f` (often a truncated lattice sum of
//! Gaussians or bumps) together with its dilate `f_λ = U_λ f`. Lattice sums
//! over `ℤ \ {0}` are truncated at `|k| ≤ K(λ)`; the truncation grows with the
//! scale at which the lower-bound mechanism of the family operates, so that the
//! terms that matter at a given λ are present.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::index::{classify_region, ExponentPair, Regime};
use crate::signal::{self, AnalyticSignal, Atom, Base, Descriptor};

/// Names of the registered families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyName {
    Gaussian,
    TransGauss,
    Istar1A,
    Istar1B,
    LatticePsiQ,
    LatticePsiInf,
    I3negA,
    I3negB,
    ModGauss,
    Fistar2A,
    Fistar2B,
    LatticePsiFreqQ,
    LatticePsiFreqInf,
    I3posFreq,
    InftynegA,
    InftynegB,
    InftynegC,
    InftynegD,
    CompactTime,
    CompactFreq,
}

impl FamilyName {
    pub const ALL: [FamilyName; 20] = [
        FamilyName::Gaussian,
        FamilyName::TransGauss,
        FamilyName::Istar1A,
        FamilyName::Istar1B,
        FamilyName::LatticePsiQ,
        FamilyName::LatticePsiInf,
        FamilyName::I3negA,
        FamilyName::I3negB,
        FamilyName::ModGauss,
        FamilyName::Fistar2A,
        FamilyName::Fistar2B,
        FamilyName::LatticePsiFreqQ,
        FamilyName::LatticePsiFreqInf,
        FamilyName::I3posFreq,
        FamilyName::InftynegA,
        FamilyName::InftynegB,
        FamilyName::InftynegC,
        FamilyName::InftynegD,
        FamilyName::CompactTime,
        FamilyName::CompactFreq,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyName::Gaussian => "GAUSSIAN",
            FamilyName::TransGauss => "TRANS_GAUSS",
            FamilyName::Istar1A => "ISTAR1_A",
            FamilyName::Istar1B => "ISTAR1_B",
            FamilyName::LatticePsiQ => "LATTICE_PSI_Q",
            FamilyName::LatticePsiInf => "LATTICE_PSI_INF",
            FamilyName::I3negA => "I3NEG_A",
            FamilyName::I3negB => "I3NEG_B",
            FamilyName::ModGauss => "MOD_GAUSS",
            FamilyName::Fistar2A => "FISTAR2_A",
            FamilyName::Fistar2B => "FISTAR2_B",
            FamilyName::LatticePsiFreqQ => "LATTICE_PSI_FREQ_Q",
            FamilyName::LatticePsiFreqInf => "LATTICE_PSI_FREQ_INF",
            FamilyName::I3posFreq => "I3POS_FREQ",
            FamilyName::InftynegA => "INFTYNEG_A",
            FamilyName::InftynegB => "INFTYNEG_B",
            FamilyName::InftynegC => "INFTYNEG_C",
            FamilyName::InftynegD => "INFTYNEG_D",
            FamilyName::CompactTime => "COMPACT_TIME",
            FamilyName::CompactFreq => "COMPACT_FREQ",
        }
    }

    /// The λ-regime in which the family's lower bound is stated.
    pub fn regime(&self) -> Option<Regime> {
        use FamilyName::*;
        match self {
            Gaussian => None,
            TransGauss | Istar1A | Istar1B | Fistar2A | Fistar2B | InftynegA | InftynegB
            | InftynegC | InftynegD | CompactTime => Some(Regime::LambdaGE1),
            LatticePsiQ | LatticePsiInf | I3negA | I3negB | ModGauss | LatticePsiFreqQ
            | LatticePsiFreqInf | I3posFreq | CompactFreq => Some(Regime::LambdaLE1),
        }
    }

    /// Families whose `f` does not depend on λ; only `f_λ` does.
    pub fn lambda_free_body(&self) -> bool {
        use FamilyName::*;
        matches!(
            self,
            Gaussian | CompactTime | CompactFreq | Istar1B | LatticePsiQ | LatticePsiInf
                | LatticePsiFreqQ | LatticePsiFreqInf
        )
    }

    /// Families whose body depends on an integer `N`.
    pub fn uses_n(&self) -> bool {
        use FamilyName::*;
        matches!(
            self,
            I3negB | Fistar2B | I3posFreq | InftynegA | InftynegB | InftynegD
        )
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        FamilyName::ALL
            .iter()
            .find(|f| f.as_str() == norm)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family '{s}'")))
    }
}

/// Lattice truncation `K(λ) = clamp(⌈factor · λ^power⌉, min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub factor: f64,
    pub power: f64,
    pub min: usize,
    pub max: usize,
}

impl Truncation {
    pub fn fixed(k: usize) -> Self {
        Self {
            factor: k as f64,
            power: 0.0,
            min: k,
            max: k,
        }
    }

    pub fn at(&self, lambda: f64) -> usize {
        let k = (self.factor * lambda.powf(self.power)).ceil();
        (k.max(self.min as f64) as usize).min(self.max)
    }
}

/// A family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub d: usize,
    pub e: ExponentPair,
    pub t: f64,
    pub s: f64,
    pub eps: f64,
    /// The integer `N` of the families that use one.
    pub n: Option<u32>,
    pub truncation: Truncation,
}

/// Default ε slack of the lattice families.
pub const DEFAULT_EPS: f64 = 0.05;

impl FamilySpec {
    /// Spec with ε = 0.05, the smallest admissible `N` and the default truncation.
    pub fn new(name: FamilyName, e: ExponentPair, t: f64, s: f64) -> Result<Self> {
        let mut spec = Self {
            name,
            d: 1,
            e,
            t,
            s,
            eps: DEFAULT_EPS,
            n: None,
            truncation: default_truncation(name, None),
        };
        if name.uses_n() {
            let n = smallest_n(&spec)?;
            spec.n = Some(n);
            spec.truncation = default_truncation(name, Some(n));
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_dim(mut self, d: usize) -> Result<Self> {
        self.d = d;
        self.validate()?;
        Ok(self)
    }

    pub fn with_truncation(mut self, k: Truncation) -> Self {
        self.truncation = k;
        self
    }

    /// For λ-free bodies, fixes `K` to the largest truncation over `lambdas`
    /// so that every λ of a sweep dilates the same function.
    pub fn for_grid(mut self, lambdas: &[f64]) -> Self {
        if self.name.lambda_free_body() {
            let k = lambdas.iter().map(|l| self.truncation.at(*l)).max().unwrap_or(0);
            self.truncation = Truncation::fixed(k);
        }
        self
    }

    /// Checks the lemma's hypotheses and names the violated inequality.
    pub fn validate(&self) -> Result<()> {
        use FamilyName::*;
        let d = self.d as f64;
        let p = self.e.p();
        let q = self.e.q();
        let (t, s) = (self.t, self.s);
        let r = classify_region(self.e);
        let fail = |what: &str| -> Result<()> {
            Err(Error::Precondition(format!(
                "{}: requires {what} (p={}, q={}, t={t}, s={s}, N={:?})",
                self.name,
                crate::index::format_exponent(p),
                crate::index::format_exponent(q),
                self.n
            )))
        };
        if !(1..=2).contains(&self.d) {
            return fail("d in {1, 2}");
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return fail("eps > 0");
        }
        let lattice = !matches!(self.name, Gaussian | TransGauss | ModGauss | CompactTime | CompactFreq);
        if lattice && self.d != 1 {
            return Err(Error::Unsupported(format!(
                "{}: lattice families are built in d = 1 only",
                self.name
            )));
        }
        let n = self.n.map(|n| n as f64);
        if self.name.uses_n() && n.is_none_or(|n| n < 1.0) {
            return fail("a positive integer N");
        }
        let nn = n.unwrap_or(1.0);
        match self.name {
            Gaussian | CompactTime | CompactFreq => Ok(()),
            TransGauss if t > 0.0 => fail("t <= 0"),
            TransGauss => Ok(()),
            Istar1A if !r.in_i1s => fail("(1/p,1/q) in I1*"),
            Istar1A if t < 0.0 => fail("t >= 0"),
            Istar1A => Ok(()),
            Istar1B if !r.in_i1s => fail("(1/p,1/q) in I1*"),
            Istar1B if t > 0.0 => fail("t <= 0"),
            Istar1B => Ok(()),
            LatticePsiQ if q.is_infinite() => fail("q < inf"),
            LatticePsiQ | LatticePsiInf if t < 0.0 => fail("t >= 0"),
            LatticePsiInf if q.is_finite() => fail("q = inf"),
            LatticePsiQ | LatticePsiInf => Ok(()),
            I3negA if !r.in_i3 => fail("(1/p,1/q) in I3"),
            I3negA if t > -d => fail("t <= -d"),
            I3negA => Ok(()),
            I3negB if !r.in_i3 => fail("(1/p,1/q) in I3"),
            I3negB if !(t > -d && t < 0.0) => fail("-d < t < 0"),
            I3negB if p.is_finite() && 1.0 / nn >= (p - 1.0) / 2.0 - p * t / (2.0 * d) => {
                fail("1/N < (p-1)/2 - pt/(2d)")
            }
            I3negB => Ok(()),
            ModGauss if s > 0.0 => fail("s <= 0"),
            ModGauss => Ok(()),
            Fistar2A if !r.in_i2s => fail("(1/p,1/q) in I2*"),
            Fistar2A if s > 0.0 => fail("s <= 0"),
            Fistar2A if q < 2.0 && s > -d => fail("q >= 2, or 1 <= q <= 2 with s <= -d"),
            Fistar2A => Ok(()),
            Fistar2B if !r.in_i2s => fail("(1/p,1/q) in I2*"),
            Fistar2B if q > 2.0 => fail("1 <= q <= 2"),
            Fistar2B if !(s > -d && s < 0.0) => fail("-d < s < 0"),
            Fistar2B if 1.0 / nn >= -s * q / d => fail("1/N < -sq/d"),
            Fistar2B => Ok(()),
            LatticePsiFreqQ if q.is_infinite() => fail("q < inf"),
            LatticePsiFreqQ | LatticePsiFreqInf if s > 0.0 => fail("s <= 0"),
            LatticePsiFreqInf if q.is_finite() => fail("q = inf"),
            LatticePsiFreqQ | LatticePsiFreqInf => Ok(()),
            I3posFreq if !r.in_i3 => fail("(1/p,1/q) in I3"),
            I3posFreq if s < 0.0 => fail("s >= 0"),
            I3posFreq if p <= 1.0 => fail("p > 1"),
            I3posFreq if p.is_finite() && 1.0 / nn >= (p - 1.0) / 2.0 => fail("1/N < (p-1)/2"),
            I3posFreq => Ok(()),
            InftynegA | InftynegB | InftynegC | InftynegD if p.is_finite() => fail("p = inf"),
            InftynegA | InftynegB | InftynegC | InftynegD if !r.in_i3s => {
                fail("(1/p,1/q) in I3*")
            }
            InftynegA | InftynegB | InftynegC | InftynegD if s > 0.0 => fail("s <= 0"),
            InftynegA if !(q > 1.0 && q < 2.0) => fail("1 < q < 2"),
            InftynegA if 3.0 / nn >= q - 1.0 => fail("3/N < q - 1"),
            InftynegB if !(q >= 2.0 && q.is_finite()) => fail("2 <= q < inf"),
            InftynegB if nn <= 2.0 + q => fail("N > 2 + q"),
            InftynegC | InftynegD if q != 1.0 => fail("q = 1"),
            InftynegC if s > -d => fail("s <= -d"),
            InftynegD if !(s > -d && s < 0.0) => fail("-d < s < 0"),
            InftynegD if 1.0 / nn >= -s / (2.0 * d) => fail("1/N < -s/(2d)"),
            InftynegA | InftynegB | InftynegC | InftynegD => Ok(()),
        }
    }

    fn descriptor(&self) -> Descriptor {
        let mut d = Descriptor::named(self.name.as_str())
            .with("p_inv", self.e.inv_p)
            .with("q_inv", self.e.inv_q)
            .with("t", self.t)
            .with("s", self.s)
            .with("eps", self.eps);
        if let Some(n) = self.n {
            d = d.with("N", n as f64);
        }
        d
    }
}

/// Smallest `N ≥ 1` satisfying the family's inequality.
pub fn smallest_n(spec: &FamilySpec) -> Result<u32> {
    for n in 1..=64u32 {
        let mut trial = *spec;
        trial.n = Some(n);
        match trial.validate() {
            Ok(()) => return Ok(n),
            Err(Error::Precondition(msg)) if msg.contains("N") => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Precondition(format!(
        "{}: no admissible N <= 64",
        spec.name
    )))
}

/// Default truncation per family: `K` tracks the scale `λ^{±power}` at which
/// the family's lower-bound sum is cut off in the corresponding lemma.
pub fn default_truncation(name: FamilyName, n: Option<u32>) -> Truncation {
    use FamilyName::*;
    let n = n.unwrap_or(1) as f64;
    let t = |factor: f64, power: f64, min: usize| Truncation {
        factor,
        power,
        min,
        max: 1 << 16,
    };
    match name {
        Gaussian | TransGauss | ModGauss | CompactTime | CompactFreq => Truncation::fixed(0),
        Istar1A | Fistar2A => t(4.0, 1.0, 8),
        Istar1B => t(8.0, 1.0, 16),
        LatticePsiQ | LatticePsiInf | LatticePsiFreqQ | LatticePsiFreqInf => t(2.0, -1.0, 8),
        I3negA => t(2.0, -2.0, 8),
        I3negB | I3posFreq => t(2.0, -n, 8),
        Fistar2B | InftynegA | InftynegB | InftynegD => t(2.0, n, 8),
        InftynegC => t(2.0, 2.0, 8),
    }
}

/// One member of a family at a given λ.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInstance {
    pub lambda: f64,
    pub f: AnalyticSignal,
    pub f_lambda: AnalyticSignal,
    pub truncation: Option<usize>,
    /// Relative ℓ² mass of the dropped coefficients, when finite.
    pub tail: Option<f64>,
}

/// `Σ_{k > K} k^b / Σ_{1 ≤ k ≤ K} k^b`, with the tail bounded by an integral.
fn power_tail(b: f64, k: usize) -> Option<f64> {
    if b >= -1.0 {
        return None;
    }
    let kept: f64 = (1..=k).map(|j| (j as f64).powf(b)).sum();
    let tail = (k as f64 + 0.5).powf(b + 1.0) / (-b - 1.0);
    Some(tail / kept)
}

/// `Σ_{0<|k|≤K} |k|^a · (atom at lattice point k)` in d = 1.
fn lattice(
    k_max: usize,
    amp: f64,
    a: f64,
    mut atom: impl FnMut(f64) -> Atom,
) -> (Vec<Atom>, Option<f64>) {
    let mut atoms = Vec::with_capacity(2 * k_max);
    for j in 1..=k_max {
        for sgn in [-1.0, 1.0] {
            let k = sgn * j as f64;
            let mut at = atom(k);
            at.coef *= amp * (j as f64).powf(a);
            atoms.push(at);
        }
    }
    (atoms, power_tail(2.0 * a, k_max))
}

fn gauss_at(center: f64, freq: f64) -> Atom {
    Atom {
        coef: Complex64::new(1.0, 0.0),
        base: Base::Gaussian,
        scale: 1.0,
        center: [center, 0.0],
        freq: [freq, 0.0],
    }
}

/// `M_k T_k ψ`: a bump at `k` modulated by `e^{2πi k x}`.
fn psi_mt(k: f64) -> Atom {
    let mut a = gauss_at(k, k);
    a.base = Base::Bump;
    // M_k T_k ψ(x) = e^{2πikx} ψ(x − k); the atom phase convention matches
    a
}

/// Builds `f` and `f_λ` for the family at `lambda`.
pub fn build_family(spec: &FamilySpec, lambda: f64) -> Result<FamilyInstance> {
    use FamilyName::*;
    spec.validate()?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dilation factor {lambda} must be positive"
        )));
    }
    let d = spec.d as f64;
    let dim = spec.d;
    let ip = spec.e.inv_p;
    let iq = spec.e.inv_q;
    let (t, s, eps) = (spec.t, spec.s, spec.eps);
    let n = spec.n.unwrap_or(1) as f64;
    let k = spec.truncation.at(lambda);
    let desc = spec.descriptor();
    let one = Complex64::new(1.0, 0.0);

    let single = |f: AnalyticSignal| -> Result<FamilyInstance> {
        let f_lambda = signal::dilate(&f, lambda)?;
        Ok(FamilyInstance {
            lambda,
            f,
            f_lambda,
            truncation: None,
            tail: None,
        })
    };
    let with_desc = |mut f: AnalyticSignal| {
        f.descriptor = desc.clone();
        f
    };

    let (atoms, tail) = match spec.name {
        Gaussian => return single(with_desc(AnalyticSignal::gaussian(dim))),
        CompactTime => return single(with_desc(AnalyticSignal::bump(dim))),
        CompactFreq => return single(with_desc(AnalyticSignal::band_bump(dim))),
        TransGauss => {
            let mut e1 = vec![0.0; dim];
            e1[0] = lambda;
            let f = signal::translate(&AnalyticSignal::gaussian(dim), &e1)
                .scaled(one * lambda.powf(-t));
            return single(with_desc(f));
        }
        ModGauss => {
            let mut e1 = vec![0.0; dim];
            e1[0] = 1.0 / lambda;
            let f = signal::modulate(&AnalyticSignal::gaussian(dim), &e1)
                .scaled(one * lambda.powf(s));
            return single(with_desc(f));
        }
        Istar1A => lattice(k, 1.0, -d * ip - eps, |l| gauss_at(0.0, l / lambda)),
        Istar1B => lattice(k, 1.0, -d * ip - eps - t, |k| gauss_at(k, 0.0)),
        LatticePsiQ => lattice(k, 1.0, -d * iq - eps - t, psi_mt),
        LatticePsiInf => lattice(k, 1.0, -t, psi_mt),
        I3negA => lattice(
            k,
            lambda.powf(d * iq - 2.0 * d * ip + 2.0 * d),
            -eps / 2.0,
            |k| gauss_at(lambda * lambda * k, 0.0),
        ),
        I3negB | I3posFreq => lattice(
            k,
            lambda.powf(d * iq),
            d * (2.0 * ip / n - 1.0) - eps / n,
            |k| gauss_at(lambda.powf(n) * k, 0.0),
        ),
        Fistar2A => lattice(k, 1.0, d * (iq - 1.0) - eps, |l| gauss_at(0.0, l / lambda)),
        Fistar2B => lattice(k, 1.0, d * (iq / n - 1.0) - eps / n, |l| {
            gauss_at(0.0, l * lambda.powf(-n))
        }),
        LatticePsiFreqQ => lattice(k, 1.0, -d * iq - eps - s, psi_mt),
        LatticePsiFreqInf => lattice(k, 1.0, -s, psi_mt),
        InftynegA => lattice(
            k,
            lambda.powf(d * (1.0 - 2.0 * iq)),
            d * (3.0 * iq / n - 1.0) - eps / n,
            |l| gauss_at(0.0, l * lambda.powf(-n)),
        ),
        InftynegB => lattice(
            k,
            lambda.powf(d + d * (2.0 - n) * iq),
            d * ((n - 1.0) * iq / n - 1.0) - eps / n,
            |l| gauss_at(0.0, l * lambda.powf(-n)),
        ),
        InftynegC => lattice(k, 1.0, -eps / 2.0, |l| gauss_at(0.0, l / (lambda * lambda))),
        InftynegD => lattice(k, 1.0, d * (2.0 / n - 1.0) - eps / n, |l| {
            gauss_at(0.0, l * lambda.powf(-n))
        }),
    };
    let mut descriptor = desc;
    descriptor.truncation = Some(k);
    descriptor.tail_estimate = tail;
    let f = AnalyticSignal::new(dim, atoms, descriptor)?;
    let f_lambda = signal::dilate(&f, lambda)?;
    Ok(FamilyInstance {
        lambda,
        f,
        f_lambda,
        truncation: Some(k),
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ep(p: f64, q: f64) -> ExponentPair {
        ExponentPair::new(p, q).unwrap()
    }

    #[test]
    fn gaussian_at_one_is_phi() {
        let spec = FamilySpec::new(FamilyName::Gaussian, ep(2.0, 2.0), 0.0, 0.0).unwrap();
        let inst = build_family(&spec, 1.0).unwrap();
        for x in [-1.0, 0.0, 0.3, 2.0] {
            assert_eq!(inst.f_lambda.eval(&[x]).re, (-PI * x * x).exp());
        }
    }

    #[test]
    fn trans_gauss_peak() {
        let spec = FamilySpec::new(FamilyName::TransGauss, ep(1.0, 2.0), -1.0, 0.0).unwrap();
        let inst = build_family(&spec, 3.0).unwrap();
        assert!((inst.f.eval(&[3.0]).re - 3.0).abs() < 1e-15);
        // f_λ(x) = λ^{-t} φ_λ(x − e₁)
        assert!((inst.f_lambda.eval(&[1.0]).re - 3.0).abs() < 1e-15);
        assert!(FamilySpec::new(FamilyName::TransGauss, ep(1.0, 2.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn istar1a_coefficient() {
        // p = inf, eps = 0.1, ℓ = 2 → 2^{-0.1}
        let mut spec = FamilySpec::new(FamilyName::Istar1A, ep(f64::INFINITY, f64::INFINITY), 0.0, 0.0)
            .unwrap();
        spec.eps = 0.1;
        let inst = build_family(&spec, 4.0).unwrap();
        let atom = inst
            .f
            .atoms
            .iter()
            .find(|a| (a.freq[0] - 2.0 / 4.0).abs() < 1e-15)
            .unwrap();
        assert!((atom.coef.re - 2f64.powf(-0.1)).abs() < 1e-15);
    }

    #[test]
    fn parameter_constraints_named() {
        // I3NEG_B needs 1/N < (p-1)/2 - pt/(2d)
        let mut spec = FamilySpec::new(FamilyName::I3negB, ep(2.0, 2.0), -0.75, 0.0).unwrap();
        assert_eq!(spec.n, Some(1));
        spec.t = -0.1; // (p-1)/2 - pt/2 = 0.6 → N = 2
        assert_eq!(smallest_n(&spec).unwrap(), 2);
        spec.n = Some(1);
        let err = spec.validate().unwrap_err().to_string();
        assert!(err.contains("1/N < (p-1)/2 - pt/(2d)"), "{err}");
        // FISTAR2_B needs 1/N < -sq/d
        let spec = FamilySpec::new(FamilyName::Fistar2B, ep(1.0, 1.0), 0.0, -0.75).unwrap();
        assert_eq!(spec.n, Some(2));
        let mut bad = spec;
        bad.n = Some(1);
        assert!(bad.validate().unwrap_err().to_string().contains("1/N < -sq/d"));
        // region checks
        assert!(FamilySpec::new(FamilyName::Istar1A, ep(1.0, 2.0), 1.0, 0.0).is_err());
        assert!(FamilySpec::new(FamilyName::I3posFreq, ep(1.0, 2.0), 0.0, 1.0).is_err());
        assert_eq!(
            FamilySpec::new(FamilyName::I3posFreq, ep(2.0, 2.0), 0.0, 1.0).unwrap().n,
            Some(3)
        );
        assert_eq!(
            FamilySpec::new(FamilyName::InftynegC, ep(f64::INFINITY, 1.0), 0.0, -1.0)
                .unwrap()
                .n,
            None
        );
    }

    #[test]
    fn infty_families_pick_smallest_n() {
        let inf = f64::INFINITY;
        assert_eq!(FamilySpec::new(FamilyName::InftynegA, ep(inf, 1.5), 0.0, -0.5).unwrap().n, Some(7));
        assert_eq!(FamilySpec::new(FamilyName::InftynegB, ep(inf, 2.0), 0.0, -0.5).unwrap().n, Some(5));
        assert_eq!(FamilySpec::new(FamilyName::InftynegD, ep(inf, 1.0), 0.0, -0.5).unwrap().n, Some(5));
    }

    #[test]
    fn lattice_sum_matches_direct_formula() {
        // LATTICE_PSI_Q: Σ |k|^{-1/q-ε-t} e^{2πikx} ψ(x − k)
        let spec = FamilySpec::new(FamilyName::LatticePsiQ, ep(1.0, 2.0), 1.0, 0.0)
            .unwrap()
            .with_truncation(Truncation::fixed(5));
        let inst = build_family(&spec, 0.5).unwrap();
        for x in [-3.1, -0.7, 1.2, 2.05, 4.9] {
            let mut want = Complex64::new(0.0, 0.0);
            for k in (-5i32..=5).filter(|k| *k != 0) {
                let kf = k as f64;
                let c = kf.abs().powf(-0.5 - 0.05 - 1.0);
                want += Complex64::from_polar(c * signal::bump(x - kf), 2.0 * PI * kf * x);
            }
            assert!((inst.f.eval(&[x]) - want).norm() < 1e-14);
            // dilation is exact
            assert!((inst.f_lambda.eval(&[x]) - inst.f.eval(&[0.5 * x])).norm() < 1e-14);
        }
    }

    #[test]
    fn i3neg_a_body() {
        let spec = FamilySpec::new(FamilyName::I3negA, ep(2.0, 2.0), -1.5, 0.0)
            .unwrap()
            .with_truncation(Truncation::fixed(3));
        let lam: f64 = 0.5;
        let inst = build_family(&spec, lam).unwrap();
        let x = 0.3;
        let amp = lam.powf(0.5 - 1.0 + 2.0);
        let mut want = 0.0;
        for k in [-3.0f64, -2.0, -1.0, 1.0, 2.0, 3.0] {
            want += amp * k.abs().powf(-0.025) * (-PI * (x - lam * lam * k).powi(2)).exp();
        }
        assert!((inst.f.eval(&[x]).re - want).abs() < 1e-14);
    }

    #[test]
    fn truncation_policy() {
        let k = default_truncation(FamilyName::Istar1A, None);
        assert_eq!(k.at(2.0), 8);
        assert_eq!(k.at(64.0), 256);
        let k = default_truncation(FamilyName::I3negA, None);
        assert_eq!(k.at(1.0 / 16.0), 512);
        assert!(power_tail(-0.5, 10).is_none());
        let t = power_tail(-4.0, 10).unwrap();
        assert!(t > 0.0 && t < 1e-3);
    }

    #[test]
    fn grid_truncation_is_shared() {
        let spec = FamilySpec::new(FamilyName::LatticePsiQ, ep(1.0, 2.0), 1.0, 0.0).unwrap();
        let g = spec.for_grid(&[1.0 / 64.0, 0.5]);
        assert_eq!(g.truncation.at(0.5), 128);
        let spec = FamilySpec::new(FamilyName::Istar1A, ep(2.0, f64::INFINITY), 1.0, 0.0).unwrap();
        assert_eq!(spec.for_grid(&[2.0, 64.0]).truncation.at(2.0), 8);
    }

    #[test]
    fn names_roundtrip() {
        for f in FamilyName::ALL {
            assert_eq!(f.as_str().parse::<FamilyName>().unwrap(), f);
        }
        assert_eq!("lattice-psi-q".parse::<FamilyName>().unwrap(), FamilyName::LatticePsiQ);
        assert!("nope".parse::<FamilyName>().is_err());
    }
}
