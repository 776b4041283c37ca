//! λ-sweeps of modulation norms over the extremal families, log–log slope
//! fits and the sharpness case table.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::{build_family, FamilyName, FamilySpec, DEFAULT_EPS};
use crate::index::{predicted_law, ExponentPair, Regime, SpaceKind, SpaceTag, WeightSpec};
use crate::signal::{self, AnalyticSignal, Base};
use crate::stft::{self, NormOptions, NormSpec, GABOR_A};

/// Norm estimator used by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Continuous,
    Frame,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Continuous => "continuous",
            Backend::Frame => "frame",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "continuous" | "stft" => Ok(Backend::Continuous),
            "frame" | "gabor" => Ok(Backend::Frame),
            _ => Err(Error::InvalidParameter(format!("unknown backend '{s}'"))),
        }
    }
}

/// Geometric grid `lo, 2lo, …, hi` (ratio 2; `hi/lo` must be a power of two).
pub fn lambda_grid(lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad λ range [{lo}, {hi}]")));
    }
    let steps = (hi / lo).log2().round() as i32;
    if ((hi / lo).log2() - steps as f64).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "λ range [{lo}, {hi}] is not a power-of-two ratio"
        )));
    }
    Ok((0..=steps).map(|k| lo * 2f64.powi(k)).collect())
}

/// Default grid of a regime: `[2, 64]` or `[1/64, 1/2]`.
pub fn default_grid(regime: Regime) -> Vec<f64> {
    match regime {
        Regime::LambdaGE1 => lambda_grid(2.0, 64.0),
        Regime::LambdaLE1 => lambda_grid(1.0 / 64.0, 0.5),
    }
    .expect("static grid")
}

/// Measured norms at one λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub lambda: f64,
    /// `‖f_λ‖`.
    pub norm: Option<f64>,
    /// `‖f‖` of the (possibly λ-dependent) undilated member.
    pub norm_f: Option<f64>,
    pub grid_n: usize,
    pub half_width: f64,
    pub truncation: Option<usize>,
    pub tail: Option<f64>,
    /// Why this λ was aborted, if it was.
    pub error: Option<String>,
}

impl SweepPoint {
    pub fn ratio(&self) -> Option<f64> {
        Some(self.norm? / self.norm_f?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub family: Option<FamilySpec>,
    pub space: SpaceKind,
    pub e: ExponentPair,
    pub backend: Backend,
    pub points: Vec<SweepPoint>,
}

/// Quantity a slope is fitted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    /// `‖f_λ‖`.
    Dilated,
    /// `‖f_λ‖ / ‖f‖`.
    Ratio,
    /// `‖f‖`.
    Undilated,
}

impl SweepResult {
    pub fn series(&self, which: Series) -> (Vec<f64>, Vec<f64>) {
        self.points
            .iter()
            .filter_map(|p| {
                let y = match which {
                    Series::Dilated => p.norm,
                    Series::Ratio => p.ratio(),
                    Series::Undilated => p.norm_f,
                }?;
                Some((p.lambda, y))
            })
            .unzip()
    }

    pub fn failed_points(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }

    /// CSV rows `lambda,norm,norm_f,backend,grid_n,L,K,tail,error`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["lambda", "norm", "norm_f", "backend", "grid_n", "L", "K", "tail", "error"])?;
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.17e}"));
        for p in &self.points {
            wr.write_record([
                format!("{:.17e}", p.lambda),
                opt(p.norm),
                opt(p.norm_f),
                self.backend.to_string(),
                p.grid_n.to_string(),
                format!("{}", p.half_width),
                p.truncation.map_or(String::new(), |k| k.to_string()),
                opt(p.tail),
                p.error.clone().unwrap_or_default(),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

fn check_space(tag: SpaceTag, w: WeightSpec) -> Result<SpaceKind> {
    let kind = SpaceKind::with_weights(tag, w)?;
    match kind {
        SpaceKind::ModSpaceTime { .. } | SpaceKind::ModFreq { .. } | SpaceKind::ModBoth { .. } => {
            Ok(kind)
        }
        other => Err(Error::Unsupported(format!(
            "sweeps measure modulation norms only, not {other:?}"
        ))),
    }
}

fn measure(f: &AnalyticSignal, spec: NormSpec, backend: Backend, opts: &NormOptions) -> Result<f64> {
    let v = match backend {
        Backend::Continuous => stft::mod_norms_continuous(f, &[spec], opts)?,
        Backend::Frame => stft::mod_norms_frame(f, &[spec], GABOR_A, opts)?,
    };
    Ok(v[0])
}

/// Norms of `f_λ` and `f` for the family over `lambdas`.
///
/// A λ whose signal does not fit its grid is recorded with its error and
/// skipped; parameter errors abort the sweep.
pub fn sweep_norm(
    spec: &FamilySpec,
    tag: SpaceTag,
    w: WeightSpec,
    e: ExponentPair,
    lambdas: &[f64],
    backend: Backend,
    opts: &NormOptions,
) -> Result<SweepResult> {
    let space = check_space(tag, w)?;
    spec.validate()?;
    let spec = &spec.for_grid(lambdas);
    if let Some(regime) = spec.name.regime() {
        if let Some(bad) = lambdas.iter().find(|l| !regime.contains(**l)) {
            return Err(Error::Precondition(format!(
                "{}: λ={bad} lies outside its regime {regime}",
                spec.name
            )));
        }
    }
    let ns = NormSpec::new(e, w);
    let mut cache: HashMap<String, f64> = HashMap::new();
    let mut points = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let inst = build_family(spec, lambda)?;
        let grid = opts.grid_for(&inst.f_lambda);
        let mut pt = SweepPoint {
            lambda,
            norm: None,
            norm_f: None,
            grid_n: grid.as_ref().map_or(0, |g| g.n),
            half_width: grid.as_ref().map_or(0.0, |g| g.half_width),
            truncation: inst.truncation,
            tail: inst.tail,
            error: None,
        };
        let key = format!("{:?}", inst.f.atoms);
        let res = measure(&inst.f_lambda, ns, backend, opts).and_then(|n| {
            let nf = match cache.get(&key) {
                Some(v) => *v,
                None => {
                    let v = measure(&inst.f, ns, backend, opts)?;
                    cache.insert(key, v);
                    v
                }
            };
            Ok((n, nf))
        });
        match res {
            Ok((n, nf)) => {
                pt.norm = Some(n);
                pt.norm_f = Some(nf);
            }
            Err(err) if err.is_numerical() || matches!(err, Error::TailCheck(_)) => {
                pt.error = Some(err.to_string());
            }
            Err(err) => return Err(err),
        }
        points.push(pt);
    }
    Ok(SweepResult {
        family: Some(*spec),
        space,
        e,
        backend,
        points,
    })
}

/// Norms of `u_λ` for a fixed signal; `norm_f` holds `‖u‖`.
pub fn sweep_signal(
    u: &AnalyticSignal,
    tag: SpaceTag,
    w: WeightSpec,
    e: ExponentPair,
    lambdas: &[f64],
    backend: Backend,
    opts: &NormOptions,
) -> Result<SweepResult> {
    let space = check_space(tag, w)?;
    let ns = NormSpec::new(e, w);
    let base = measure(u, ns, backend, opts)?;
    let mut points = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let ul = signal::dilate(u, lambda)?;
        let grid = opts.grid_for(&ul);
        let mut pt = SweepPoint {
            lambda,
            norm: None,
            norm_f: Some(base),
            grid_n: grid.as_ref().map_or(0, |g| g.n),
            half_width: grid.as_ref().map_or(0.0, |g| g.half_width),
            truncation: None,
            tail: None,
            error: None,
        };
        match measure(&ul, ns, backend, opts) {
            Ok(n) => pt.norm = Some(n),
            Err(err) if err.is_numerical() || matches!(err, Error::TailCheck(_)) => {
                pt.error = Some(err.to_string())
            }
            Err(err) => return Err(err),
        }
        points.push(pt);
    }
    Ok(SweepResult {
        family: None,
        space,
        e,
        backend,
        points,
    })
}

/// Least-squares line through `(ln λ, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub n_points: usize,
}

pub fn fit_loglog(lambdas: &[f64], values: &[f64]) -> Result<FitResult> {
    if lambdas.len() != values.len() {
        return Err(Error::InvalidParameter("abscissa/ordinate length mismatch".into()));
    }
    if lambdas.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "{} points; at least 4 are needed",
            lambdas.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::DegenerateFit(format!("non-positive value {v}")));
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-24 * n {
        return Err(Error::DegenerateFit("zero-variance abscissa".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(FitResult {
        slope,
        intercept,
        max_residual,
        lambda_min: lambdas.iter().cloned().fold(f64::INFINITY, f64::min),
        lambda_max: lambdas.iter().cloned().fold(0.0, f64::max),
        n_points: lambdas.len(),
    })
}

/// Fits the chosen series over the points with λ in `subrange` (inclusive).
pub fn fit_slope(sweep: &SweepResult, which: Series, subrange: Option<(f64, f64)>) -> Result<FitResult> {
    let (l, v) = sweep.series(which);
    let (l, v): (Vec<f64>, Vec<f64>) = l
        .into_iter()
        .zip(v)
        .filter(|(l, _)| subrange.is_none_or(|(a, b)| *l >= a * (1.0 - 1e-12) && *l <= b * (1.0 + 1e-12)))
        .unzip();
    fit_loglog(&l, &v)
}

// ---------------------------------------------------------------------------
// case table

/// Which weight the case concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightSide {
    Time,
    Frequency,
}

/// One configuration run for a case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantDef {
    pub family: FamilyName,
    pub p: f64,
    pub q: f64,
    /// `t` for time cases, `s` for frequency cases.
    pub weight: f64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseDef {
    pub id: &'static str,
    pub side: WeightSide,
    pub number: u8,
    pub region: &'static str,
    pub weight_nonneg: bool,
    pub regime: Regime,
    /// Id of the case this one is the dual of.
    pub dual_of: Option<&'static str>,
    pub variants: &'static [VariantDef],
}

const INF: f64 = f64::INFINITY;
const GE: (f64, f64) = (2.0, 64.0);
const LE: (f64, f64) = (1.0 / 64.0, 0.5);

const fn v(family: FamilyName, p: f64, q: f64, weight: f64, range: (f64, f64)) -> VariantDef {
    VariantDef {
        family,
        p,
        q,
        weight,
        lambda_lo: range.0,
        lambda_hi: range.1,
    }
}

#[allow(clippy::too_many_arguments)]
const fn case(
    id: &'static str,
    side: WeightSide,
    number: u8,
    region: &'static str,
    weight_nonneg: bool,
    regime: Regime,
    dual_of: Option<&'static str>,
    variants: &'static [VariantDef],
) -> CaseDef {
    CaseDef {
        id,
        side,
        number,
        region,
        weight_nonneg,
        regime,
        dual_of,
        variants,
    }
}

use FamilyName as F;
use Regime::{LambdaGE1 as G1, LambdaLE1 as L1};
use WeightSide::{Frequency as Fr, Time as Ti};

/// The 24 proof cases; the dual ones carry no variants of their own.
pub const CASES: [CaseDef; 24] = [
    case("I2s_tpos", Ti, 1, "I2*", true, G1, None, &[v(F::Gaussian, 1.0, 2.0, 1.0, GE)]),
    case("I2_tneg", Ti, 2, "I2", false, L1, Some("I2s_tpos"), &[]),
    case(
        "I3_tpos",
        Ti,
        3,
        "I3",
        true,
        L1,
        None,
        &[
            v(F::LatticePsiQ, 1.0, 2.0, 1.0, LE),
            v(F::LatticePsiInf, 1.0, INF, 1.0, LE),
        ],
    ),
    case("I3s_tneg", Ti, 4, "I3*", false, G1, Some("I3_tpos"), &[]),
    case("I1s_tneg", Ti, 5, "I1*", false, G1, None, &[v(F::Istar1B, 2.0, INF, -1.0, GE)]),
    case("I1_tpos", Ti, 6, "I1", true, L1, Some("I1s_tneg"), &[]),
    case("I1s_tpos", Ti, 7, "I1*", true, G1, None, &[v(F::Istar1A, 2.0, INF, 1.0, GE)]),
    case("I1_tneg", Ti, 8, "I1", false, L1, Some("I1s_tpos"), &[]),
    case("I2s_tneg", Ti, 9, "I2*", false, G1, None, &[v(F::TransGauss, 1.0, 2.0, -1.0, GE)]),
    case("I2_tpos", Ti, 10, "I2", true, L1, Some("I2s_tneg"), &[]),
    case(
        "I3_tneg",
        Ti,
        11,
        "I3",
        false,
        L1,
        None,
        &[
            v(F::I3negA, 2.0, 2.0, -1.5, LE),
            v(F::I3negB, 2.0, 2.0, -0.75, LE),
        ],
    ),
    case("I3s_tpos", Ti, 12, "I3*", true, G1, Some("I3_tneg"), &[]),
    case("I1_spos", Fr, 1, "I1", true, L1, None, &[v(F::Gaussian, 2.0, 1.0, 1.0, LE)]),
    case("I1_sneg", Fr, 2, "I1", false, L1, None, &[v(F::ModGauss, 2.0, 1.0, -1.0, LE)]),
    // the ⟨ω⟩ weight only bites once the band of φ_λ exceeds √(4π)
    case("I2s_spos", Fr, 3, "I2*", true, G1, None, &[v(F::Gaussian, 1.0, 2.0, 1.0, (8.0, 256.0))]),
    case(
        "I2s_sneg",
        Fr,
        4,
        "I2*",
        false,
        G1,
        None,
        &[
            v(F::Fistar2A, 1.0, 2.0, -1.0, GE),
            v(F::Fistar2B, 1.0, 1.0, -0.75, GE),
        ],
    ),
    case(
        "I3_spos",
        Fr,
        5,
        "I3",
        true,
        L1,
        None,
        &[
            v(F::I3posFreq, 2.0, 2.0, 1.0, (1.0 / 16.0, 0.5)),
            // p = 1 is handled at the dual point (∞, q′)
            v(F::InftynegC, INF, 1.0, -1.0, GE),
        ],
    ),
    case(
        "I3_sneg",
        Fr,
        6,
        "I3",
        false,
        L1,
        None,
        &[
            v(F::LatticePsiFreqQ, 1.0, 2.0, -1.0, LE),
            v(F::LatticePsiFreqInf, 1.0, INF, -1.0, LE),
        ],
    ),
    case("I1s_sneg", Fr, 7, "I1*", false, G1, Some("I1_spos"), &[]),
    case("I1s_spos", Fr, 8, "I1*", true, G1, Some("I1_sneg"), &[]),
    case("I2_sneg", Fr, 9, "I2", false, L1, Some("I2s_spos"), &[]),
    case("I2_spos", Fr, 10, "I2", true, L1, Some("I2s_sneg"), &[]),
    case("I3s_sneg", Fr, 11, "I3*", false, G1, Some("I3_spos"), &[]),
    case("I3s_spos", Fr, 12, "I3*", true, G1, Some("I3_sneg"), &[]),
];

pub fn find_case(id: &str) -> Result<&'static CaseDef> {
    CASES
        .iter()
        .find(|c| c.id.eq_ignore_ascii_case(id.trim()))
        .ok_or_else(|| {
            let ids: Vec<&str> = CASES.iter().map(|c| c.id).collect();
            Error::InvalidParameter(format!("unknown case '{id}'; known: {}", ids.join(", ")))
        })
}

/// Pass tolerances of the sharpness suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseTolerance {
    /// Slack on the sharp exponent for lattice families, before ε.
    pub lattice: f64,
    /// Slack on the sharp exponent for single Gaussian families.
    pub gaussian: f64,
    /// Slack on the upper envelope.
    pub upper: f64,
}

impl Default for CaseTolerance {
    fn default() -> Self {
        Self {
            lattice: 0.15,
            gaussian: 0.05,
            upper: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseOptions {
    pub backend: Backend,
    pub norm: NormOptions,
    pub tol: CaseTolerance,
    pub eps: f64,
}

impl Default for CaseOptions {
    fn default() -> Self {
        Self {
            backend: Backend::Continuous,
            norm: NormOptions::default(),
            tol: CaseTolerance::default(),
            eps: DEFAULT_EPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantReport {
    pub family: FamilyName,
    pub p: String,
    pub q: String,
    pub t: f64,
    pub s: f64,
    pub eps: f64,
    pub n: Option<u32>,
    pub regime: Regime,
    /// Sharp exponent: the upper-envelope exponent of the predicted law.
    pub predicted_exponent: f64,
    pub tolerance: f64,
    /// Fit of `‖f_λ‖`.
    pub fit: FitResult,
    /// Fit of `‖f_λ‖/‖f‖`.
    pub ratio_fit: FitResult,
    /// Fit of `‖f‖`; near 0 when the family is uniformly bounded.
    pub undilated_fit: Option<FitResult>,
    /// Positive when the sharp exponent is reached.
    pub sharp_margin: f64,
    /// Positive when the ratio respects the upper envelope.
    pub upper_margin: f64,
    pub pass: bool,
    pub sweep: SweepResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    VerifiedViaDual,
    FailedViaDual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_id: String,
    pub side: WeightSide,
    pub number: u8,
    pub region: String,
    pub regime: Regime,
    pub dual_of: Option<String>,
    pub verdict: Verdict,
    pub variants: Vec<VariantReport>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::VerifiedViaDual)
    }
}

fn is_gaussian_family(f: FamilyName) -> bool {
    matches!(f, F::Gaussian | F::TransGauss | F::ModGauss)
}

/// Runs one variant and grades it against the predicted law.
pub fn run_variant(side: WeightSide, def: &VariantDef, opts: &CaseOptions) -> Result<VariantReport> {
    let e = ExponentPair::new(def.p, def.q)?;
    let (t, s, tag) = match side {
        WeightSide::Time => (def.weight, 0.0, SpaceTag::ModSpaceTime),
        WeightSide::Frequency => (0.0, def.weight, SpaceTag::ModFreq),
    };
    let w = WeightSpec::new(t, s)?;
    let mut spec = FamilySpec::new(def.family, e, t, s)?;
    spec.eps = opts.eps;
    spec.validate()?;
    let regime = def
        .family
        .regime()
        .unwrap_or(if def.lambda_hi <= 1.0 { Regime::LambdaLE1 } else { Regime::LambdaGE1 });
    let law = predicted_law(tag, w, e, regime, spec.d)?;
    let predicted = law.upper_bound_exponent;
    let lambdas = lambda_grid(def.lambda_lo, def.lambda_hi)?;
    let sweep = sweep_norm(&spec, tag, w, e, &lambdas, opts.backend, &opts.norm)?;
    let fit = fit_slope(&sweep, Series::Dilated, None)?;
    let ratio_fit = fit_slope(&sweep, Series::Ratio, None)?;
    let undilated_fit = fit_slope(&sweep, Series::Undilated, None).ok();
    let tolerance = if is_gaussian_family(def.family) {
        opts.tol.gaussian
    } else {
        opts.tol.lattice + spec.eps
    };
    // λ ≥ 1: the family must reach λ^{S}; the ratio must stay below λ^{U}.
    // λ ≤ 1: both inequalities reverse.
    let (sharp_margin, upper_margin) = match regime {
        Regime::LambdaGE1 => (
            fit.slope - (predicted - tolerance),
            (predicted + opts.tol.upper) - ratio_fit.slope,
        ),
        Regime::LambdaLE1 => (
            (predicted + tolerance) - fit.slope,
            ratio_fit.slope - (predicted - opts.tol.upper),
        ),
    };
    let pass = sharp_margin >= 0.0 && upper_margin >= 0.0 && sweep.failed_points() == 0;
    Ok(VariantReport {
        family: def.family,
        p: crate::index::format_exponent(e.p()),
        q: crate::index::format_exponent(e.q()),
        t,
        s,
        eps: spec.eps,
        n: spec.n,
        regime,
        predicted_exponent: predicted,
        tolerance,
        fit,
        ratio_fit,
        undilated_fit,
        sharp_margin,
        upper_margin,
        pass,
        sweep,
    })
}

/// Runs the designated families of a case. Dual cases run their primary
/// counterpart and are reported as derived by duality.
pub fn verify_case(case_id: &str, opts: &CaseOptions) -> Result<CaseReport> {
    let def = find_case(case_id)?;
    let (runner, dual) = match def.dual_of {
        Some(primary) => (find_case(primary)?, true),
        None => (def, false),
    };
    let variants = runner
        .variants
        .iter()
        .map(|v| run_variant(runner.side, v, opts))
        .collect::<Result<Vec<_>>>()?;
    let ok = variants.iter().all(|v| v.pass);
    let verdict = match (dual, ok) {
        (false, true) => Verdict::Pass,
        (false, false) => Verdict::Fail,
        (true, true) => Verdict::VerifiedViaDual,
        (true, false) => Verdict::FailedViaDual,
    };
    Ok(CaseReport {
        case_id: def.id.to_string(),
        side: def.side,
        number: def.number,
        region: def.region.to_string(),
        regime: def.regime,
        dual_of: def.dual_of.map(str::to_string),
        verdict,
        variants,
    })
}

// ---------------------------------------------------------------------------
// compact support

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportKind {
    Time,
    Frequency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactReport {
    pub kind: SupportKind,
    /// Exponent of the lower envelope within the regime.
    pub envelope_exponent: f64,
    /// `min_λ ‖u_λ‖ / λ^{envelope}`.
    pub constant: f64,
    pub fit: Option<FitResult>,
    pub slope_margin: Option<f64>,
    pub pass: bool,
    pub sweep: SweepResult,
}

/// Checks `‖u_λ‖ ≥ c λ^{-d(1-1/q)} min{1, λ^{-t}}` (time, λ ≥ 1) or
/// `‖u_λ‖ ≥ c λ^{-d/p} min{1, λ^s}` (frequency, λ ≤ 1).
#[allow(clippy::too_many_arguments)]
pub fn compact_support_lower_check(
    kind: SupportKind,
    u: &AnalyticSignal,
    e: ExponentPair,
    w: WeightSpec,
    lambdas: &[f64],
    backend: Backend,
    opts: &NormOptions,
    tol: f64,
) -> Result<CompactReport> {
    let want = match kind {
        SupportKind::Time => Base::Bump,
        SupportKind::Frequency => Base::BandBump,
    };
    if u.atoms.is_empty() || u.atoms.iter().any(|a| a.base != want) {
        return Err(Error::Precondition(format!(
            "{kind:?}-kind check needs a signal built from {want:?} atoms only"
        )));
    }
    let d = u.dim as f64;
    let (envelope, regime, tag) = match kind {
        SupportKind::Time => (
            -d * (1.0 - e.inv_q) + (-w.t).min(0.0),
            Regime::LambdaGE1,
            SpaceTag::ModSpaceTime,
        ),
        SupportKind::Frequency => (-d * e.inv_p + w.s.max(0.0), Regime::LambdaLE1, SpaceTag::ModFreq),
    };
    if let Some(bad) = lambdas.iter().find(|l| !regime.contains(**l)) {
        return Err(Error::Precondition(format!("λ={bad} outside {regime}")));
    }
    let wk = match kind {
        SupportKind::Time => WeightSpec::time(w.t),
        SupportKind::Frequency => WeightSpec::freq(w.s),
    };
    let sweep = sweep_signal(u, tag, wk, e, lambdas, backend, opts)?;
    let constant = sweep
        .points
        .iter()
        .filter_map(|p| Some(p.norm? / p.lambda.powf(envelope)))
        .fold(f64::INFINITY, f64::min);
    let fit = fit_slope(&sweep, Series::Dilated, None).ok();
    // λ ≥ 1: slope ≥ envelope; λ ≤ 1: slope ≤ envelope.
    let slope_margin = fit.map(|f| match regime {
        Regime::LambdaGE1 => f.slope - (envelope - tol),
        Regime::LambdaLE1 => (envelope + tol) - f.slope,
    });
    let pass = constant.is_finite()
        && constant > 0.0
        && sweep.failed_points() == 0
        && slope_margin.is_none_or(|m| m >= 0.0);
    Ok(CompactReport {
        kind,
        envelope_exponent: envelope,
        constant,
        fit,
        slope_margin,
        pass,
        sweep,
    })
}

/// Regime symmetry: with `g = f_λ` dilated back by `1/λ`, the sweep of
/// `‖g_{1/λ}‖/‖g‖` against `1/λ` has the slope of `‖f_λ‖/‖f‖` against λ.
/// Returns the forward and reciprocal fits.
pub fn reciprocal_check(
    spec: &FamilySpec,
    tag: SpaceTag,
    w: WeightSpec,
    e: ExponentPair,
    lambdas: &[f64],
    opts: &NormOptions,
) -> Result<(FitResult, FitResult)> {
    let fwd = sweep_norm(spec, tag, w, e, lambdas, Backend::Continuous, opts)?;
    let ns = NormSpec::new(e, w);
    let mut inv_l = Vec::new();
    let mut inv_r = Vec::new();
    for &lambda in lambdas {
        let inst = build_family(spec, lambda)?;
        let g = inst.f_lambda;
        let back = signal::dilate(&g, 1.0 / lambda)?;
        let ng = measure(&g, ns, Backend::Continuous, opts)?;
        let nb = measure(&back, ns, Backend::Continuous, opts)?;
        inv_l.push(1.0 / lambda);
        inv_r.push(nb / ng);
    }
    Ok((fit_slope(&fwd, Series::Ratio, None)?, fit_loglog(&inv_l, &inv_r)?))
}
