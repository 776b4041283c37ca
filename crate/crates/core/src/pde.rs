//! Fourier-multiplier propagators for the wave and vibrating-plate equations
//! and modulation-norm growth tracking of their solutions.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::index::{format_exponent, ExponentPair, WeightSpec};
use crate::lab::{fit_loglog, FitResult};
use crate::signal::{self, Domain, SampledSignal};
use crate::stft::{self, NormSpec, StftOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    /// `∂²_t u − Δu = 0`.
    Wave,
    /// `∂²_t u + Δ²u = 0`.
    Plate,
}

impl Equation {
    /// Angular frequency `ω(ξ)`: `2π|ξ|` or `4π²|ξ|²`.
    pub fn omega(&self, r: f64) -> f64 {
        use std::f64::consts::PI;
        match self {
            Equation::Wave => 2.0 * PI * r,
            Equation::Plate => 4.0 * PI * PI * r * r,
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::Wave => "wave",
            Equation::Plate => "plate",
        })
    }
}

impl FromStr for Equation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wave" => Ok(Equation::Wave),
            "plate" => Ok(Equation::Plate),
            _ => Err(Error::InvalidParameter(format!("unknown equation '{s}'"))),
        }
    }
}

/// Initial position and velocity on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    pub u0: SampledSignal,
    pub u1: SampledSignal,
    pub equation: Equation,
}

impl CauchyData {
    pub fn new(u0: SampledSignal, u1: SampledSignal, equation: Equation) -> Result<Self> {
        if u0.grid != u1.grid {
            return Err(Error::Precondition("u0 and u1 live on different grids".into()));
        }
        if u0.domain != Domain::Time || u1.domain != Domain::Time {
            return Err(Error::Precondition("Cauchy data must be time-domain samples".into()));
        }
        Ok(Self { u0, u1, equation })
    }
}

fn radius(p: [f64; 2], d: usize) -> f64 {
    if d == 1 {
        p[0].abs()
    } else {
        p[0].hypot(p[1])
    }
}

/// `H_σ f`: inverse transform of `σ(ξ) f̂(ξ)`.
pub fn apply_multiplier<S>(sigma: S, f: &SampledSignal) -> Result<SampledSignal>
where
    S: Fn(&[f64]) -> Complex64,
{
    let mut fh = signal::dft(f)?;
    let d = fh.grid.d;
    for i in 0..fh.values.len() {
        let xi = fh.grid.point(i);
        let s = sigma(&xi[..d]);
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::NonFinite {
                point: xi[..d].to_vec(),
                detail: "multiplier symbol".into(),
            });
        }
        fh.values[i] *= s;
    }
    signal::idft(&fh)
}

/// `(u(t), ∂_t u(t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub u: SampledSignal,
    pub ut: SampledSignal,
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time t={t} must be finite and >= 0")));
    }
    Ok(())
}

/// Exact spectral propagation of the full state:
/// `û(t) = cos(ωt)û₀ + sin(ωt)/ω û₁`, `∂_t û(t) = −ω sin(ωt)û₀ + cos(ωt)û₁`,
/// with `sin(ωt)/ω := t` at `ω = 0`.
pub fn propagate_state(data: &CauchyData, t: f64) -> Result<State> {
    check_time(t)?;
    let h0 = signal::dft(&data.u0)?;
    let h1 = signal::dft(&data.u1)?;
    let d = h0.grid.d;
    let mut u = h0.clone();
    let mut ut = h0.clone();
    for i in 0..h0.values.len() {
        let w = data.equation.omega(radius(h0.grid.point(i), d));
        let (s, c) = (w * t).sin_cos();
        let sinc = if w == 0.0 { t } else { s / w };
        u.values[i] = h0.values[i] * c + h1.values[i] * sinc;
        ut.values[i] = -h0.values[i] * (w * s) + h1.values[i] * c;
    }
    Ok(State {
        u: signal::idft(&u)?,
        ut: signal::idft(&ut)?,
    })
}

fn propagate_as(data: &CauchyData, t: f64, eq: Equation) -> Result<SampledSignal> {
    if data.equation != eq {
        return Err(Error::Precondition(format!(
            "{eq} propagator called on {} data",
            data.equation
        )));
    }
    check_time(t)?;
    if t == 0.0 {
        return Ok(data.u0.clone());
    }
    Ok(propagate_state(data, t)?.u)
}

/// `u(t) = H_{cos(2πt|ξ|)} u₀ + H_{sin(2πt|ξ|)/(2π|ξ|)} u₁`.
pub fn wave_propagate(data: &CauchyData, t: f64) -> Result<SampledSignal> {
    propagate_as(data, t, Equation::Wave)
}

/// `u(t) = H_{cos(4π²t|ξ|²)} u₀ + H_{sin(4π²t|ξ|²)/(4π²|ξ|²)} u₁`.
pub fn plate_propagate(data: &CauchyData, t: f64) -> Result<SampledSignal> {
    propagate_as(data, t, Equation::Plate)
}

/// Spectral energy `‖ω û‖₂² + ‖∂_t û‖₂²`.
pub fn energy(state: &State, equation: Equation) -> Result<f64> {
    let uh = signal::dft(&state.u)?;
    let vh = signal::dft(&state.ut)?;
    let d = uh.grid.d;
    let cell = uh.grid.cell();
    let mut e = 0.0;
    for i in 0..uh.values.len() {
        let w = equation.omega(radius(uh.grid.point(i), d));
        e += (w * w) * uh.values[i].norm_sqr() + vh.values[i].norm_sqr();
    }
    Ok(e * cell)
}

/// Fraction of the half width treated as the wrap guard strip.
pub const WRAP_STRIP: f64 = 0.1;
/// Relative amplitude in the strip that flags a run.
pub const WRAP_THRESHOLD: f64 = 1e-6;

/// True when `u` carries more than `WRAP_THRESHOLD` of its peak amplitude
/// within `WRAP_STRIP·L` of the periodic boundary.
pub fn touches_boundary(u: &SampledSignal) -> bool {
    let g = &u.grid;
    let edge = (1.0 - WRAP_STRIP) * g.half_width;
    let mut peak: f64 = 0.0;
    let mut rim: f64 = 0.0;
    for (i, v) in u.values.iter().enumerate() {
        let p = g.point(i);
        let a = v.norm();
        peak = peak.max(a);
        if p[..g.d].iter().any(|x| x.abs() >= edge) {
            rim = rim.max(a);
        }
    }
    peak > 0.0 && rim > WRAP_THRESHOLD * peak
}

/// Radius beyond which a unit Gaussian datum is negligible.
const DATUM_RADIUS: f64 = 4.0;
/// Plate runs have no finite speed, so they use one large domain.
pub const PLATE_HALF_WIDTH: f64 = 512.0;

/// Half width for a run up to `t_max`: the wave front travels at speed 1,
/// so the domain grows linearly and keeps the front outside the guard strip.
pub fn domain_half_width(equation: Equation, t_max: f64) -> f64 {
    match equation {
        Equation::Wave => ((t_max + DATUM_RADIUS) / (1.0 - WRAP_STRIP)).max(8.0).log2().ceil().exp2(),
        Equation::Plate => PLATE_HALF_WIDTH,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub equation: Equation,
    pub p: String,
    pub q: String,
    pub t_weight: f64,
    pub s_weight: f64,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// Runs whose solution reached the wrap guard strip.
    pub flagged: Vec<bool>,
}

impl GrowthSeries {
    /// CSV rows `t,norm,flagged`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["t", "norm", "flagged"])?;
        for ((t, n), f) in self.times.iter().zip(&self.norms).zip(&self.flagged) {
            wr.write_record([format!("{t}"), format!("{n:.17e}"), f.to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Modulation norms of `u(t)` at each of `times`.
pub fn growth_track(
    data: &CauchyData,
    e: ExponentPair,
    w: WeightSpec,
    times: &[f64],
    stft_opts: Option<StftOptions>,
) -> Result<GrowthSeries> {
    if times.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter("times must be strictly increasing".into()));
    }
    if times.first() != Some(&0.0) {
        return Err(Error::InvalidParameter("times must start at 0".into()));
    }
    for t in times {
        check_time(*t)?;
    }
    let spec = NormSpec::new(e, w);
    let rows: Vec<(f64, bool)> = times
        .par_iter()
        .map(|&t| {
            let u = if t == 0.0 { data.u0.clone() } else { propagate_state(data, t)?.u };
            let n = stft::mod_norms_sampled(&u, &[spec], stft_opts)?[0];
            if !n.is_finite() {
                return Err(Error::NonFinite { point: vec![t], detail: "growth norm".into() });
            }
            Ok((n, touches_boundary(&u)))
        })
        .collect::<Result<_>>()?;
    let (norms, flagged) = rows.into_iter().unzip();
    Ok(GrowthSeries {
        equation: data.equation,
        p: format_exponent(e.p()),
        q: format_exponent(e.q()),
        t_weight: w.t,
        s_weight: w.s,
        times: times.to_vec(),
        norms,
        flagged,
    })
}

/// Which initial datum is non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Datum {
    U0,
    U1,
    /// Both data non-zero; graded against the larger of the two bounds.
    Mixed,
}

impl FromStr for Datum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "u0" => Ok(Datum::U0),
            "u1" => Ok(Datum::U1),
            "mixed" => Ok(Datum::Mixed),
            _ => Err(Error::InvalidParameter(format!("unknown datum '{s}' (u0, u1, mixed)"))),
        }
    }
}

/// Growth exponent of the bound `(1+t)^a` for the datum, in dimension `d`.
/// The `u₁` branch counts `t(1+t)^b` as `(1+t)^b`.
pub fn bound_exponent(equation: Equation, datum: Datum, d: usize) -> f64 {
    let d = d as f64;
    match (equation, datum) {
        (Equation::Wave, _) => d + 1.0,
        (Equation::Plate, Datum::U0) => d / 2.0,
        (Equation::Plate, Datum::U1 | Datum::Mixed) => d / 2.0 + 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub equation: Equation,
    pub datum: Datum,
    pub fit: FitResult,
    /// `exp(intercept)`: the constant in `norm ≈ C (1+t)^a`.
    pub constant: f64,
    pub bound_exponent: f64,
    pub tolerance: f64,
    pub excluded_flagged: usize,
    pub pass: bool,
}

/// Fits `log norm` against `log(1+t)` over `t ∈ window`, skipping flagged runs,
/// and passes when the exponent stays below the bound plus `tol`.
pub fn bound_check(
    series: &GrowthSeries,
    datum: Datum,
    d: usize,
    window: (f64, f64),
    tol: f64,
) -> Result<BoundReport> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = 0;
    for ((t, n), f) in series.times.iter().zip(&series.norms).zip(&series.flagged) {
        if *t < window.0 || *t > window.1 {
            continue;
        }
        if *f {
            excluded += 1;
            continue;
        }
        xs.push(1.0 + t);
        ys.push(*n);
    }
    let fit = fit_loglog(&xs, &ys)?;
    let bound = bound_exponent(series.equation, datum, d);
    Ok(BoundReport {
        equation: series.equation,
        datum,
        fit,
        constant: fit.intercept.exp(),
        bound_exponent: bound,
        tolerance: tol,
        excluded_flagged: excluded,
        pass: fit.slope <= bound + tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{AnalyticSignal, GridSpec};
    use std::f64::consts::PI;

    fn grid(n: usize, l: f64) -> GridSpec {
        GridSpec::new(1, n, l).unwrap()
    }

    fn gauss_on(g: &GridSpec) -> SampledSignal {
        signal::sample(&AnalyticSignal::gaussian(1), g).unwrap()
    }

    fn max_diff(a: &SampledSignal, b: &SampledSignal) -> f64 {
        a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_symbol() {
        let f = gauss_on(&grid(1024, 8.0));
        let g = apply_multiplier(|_| Complex64::new(1.0, 0.0), &f).unwrap();
        assert!(max_diff(&f, &g) < 1e-12);
    }

    #[test]
    fn shift_symbol() {
        let g = grid(1024, 8.0);
        let f = gauss_on(&g);
        let x0 = 1.5;
        let out = apply_multiplier(|xi| Complex64::from_polar(1.0, 2.0 * PI * xi[0] * x0), &f).unwrap();
        // e^{2πiξx₀} f̂ is the transform of f(· + x₀)
        let want = signal::sample(&signal::translate(&AnalyticSignal::gaussian(1), &[-x0]), &g).unwrap();
        assert!(max_diff(&out, &want) < 1e-8);
    }

    #[test]
    fn contraction_and_rejection() {
        let f = gauss_on(&grid(1024, 8.0));
        let out = apply_multiplier(|xi| Complex64::new((xi[0] * 3.0).cos(), 0.0), &f).unwrap();
        assert!(signal::lp_norm(&out, 2.0, 0.0) <= signal::lp_norm(&f, 2.0, 0.0) * (1.0 + 1e-12));
        let bad = apply_multiplier(|xi| Complex64::new(1.0 / xi[0], 0.0), &f);
        assert!(matches!(bad, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn wave_initial_time_exact() {
        let g = grid(1024, 8.0);
        let data = CauchyData::new(gauss_on(&g), gauss_on(&g), Equation::Wave).unwrap();
        assert_eq!(wave_propagate(&data, 0.0).unwrap(), data.u0);
        assert!(wave_propagate(&data, -1.0).is_err());
        assert!(plate_propagate(&data, 1.0).is_err());
    }

    #[test]
    fn dalembert() {
        let g = grid(2048, 16.0);
        let u0 = gauss_on(&g);
        let data = CauchyData::new(u0.clone(), SampledSignal::zeros(g), Equation::Wave).unwrap();
        for t in [0.5, 1.0, 2.5, 4.0] {
            let u = wave_propagate(&data, t).unwrap();
            let phi = |x: f64| (-PI * x * x).exp();
            let err = (0..g.n)
                .map(|j| {
                    let x = g.node(j);
                    (u.values[j] - Complex64::new(0.5 * (phi(x - t) + phi(x + t)), 0.0)).norm()
                })
                .fold(0.0, f64::max);
            assert!(err < 1e-6, "t={t}: {err}");
        }
    }

    #[test]
    fn energies_conserved() {
        let g = grid(2048, 32.0);
        let u0 = signal::sample(&signal::modulate(&AnalyticSignal::gaussian(1), &[1.0]), &g).unwrap();
        let u1 = signal::sample(&signal::translate(&AnalyticSignal::gaussian(1), &[2.0]), &g).unwrap();
        for eq in [Equation::Wave, Equation::Plate] {
            let data = CauchyData::new(u0.clone(), u1.clone(), eq).unwrap();
            let e0 = energy(&State { u: u0.clone(), ut: u1.clone() }, eq).unwrap();
            for t in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let e = energy(&propagate_state(&data, t).unwrap(), eq).unwrap();
                assert!((e / e0 - 1.0).abs() < 1e-8, "{eq} t={t}");
            }
        }
    }

    #[test]
    fn plate_l2_contraction() {
        let g = grid(4096, 64.0);
        let u0 = gauss_on(&g);
        let data = CauchyData::new(u0.clone(), SampledSignal::zeros(g), Equation::Plate).unwrap();
        let n0 = signal::lp_norm(&u0, 2.0, 0.0);
        for t in [0.1, 1.0, 3.0] {
            let u = plate_propagate(&data, t).unwrap();
            assert!(signal::lp_norm(&u, 2.0, 0.0) <= n0 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn full_state_composes() {
        let g = grid(2048, 32.0);
        let u0 = gauss_on(&g);
        for eq in [Equation::Wave, Equation::Plate] {
            let data = CauchyData::new(u0.clone(), SampledSignal::zeros(g), eq).unwrap();
            let mid = propagate_state(&data, 1.25).unwrap();
            let again = CauchyData::new(mid.u, mid.ut, eq).unwrap();
            let two = propagate_state(&again, 0.75).unwrap();
            let direct = propagate_state(&data, 2.0).unwrap();
            assert!(max_diff(&two.u, &direct.u) < 1e-6, "{eq}");
        }
    }

    #[test]
    fn real_even_data_stay_real() {
        let g = grid(1024, 16.0);
        let u0 = gauss_on(&g);
        let u1 = signal::sample(&signal::dilate(&AnalyticSignal::gaussian(1), 2.0).unwrap(), &g).unwrap();
        for eq in [Equation::Wave, Equation::Plate] {
            let data = CauchyData::new(u0.clone(), u1.clone(), eq).unwrap();
            let u = propagate_state(&data, 1.7).unwrap().u;
            let im = u.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
            assert!(im < 1e-10, "{eq}: {im}");
        }
    }

    #[test]
    fn wave_domain_grows() {
        assert_eq!(domain_half_width(Equation::Wave, 0.0), 8.0);
        assert_eq!(domain_half_width(Equation::Wave, 16.0), 32.0);
        assert_eq!(domain_half_width(Equation::Wave, 40.0), 64.0);
        assert_eq!(domain_half_width(Equation::Plate, 1.0), PLATE_HALF_WIDTH);
    }

    #[test]
    fn wrap_guard() {
        let g = grid(1024, 8.0);
        let data = CauchyData::new(gauss_on(&g), SampledSignal::zeros(g), Equation::Wave).unwrap();
        assert!(!touches_boundary(&data.u0));
        assert!(touches_boundary(&wave_propagate(&data, 7.5).unwrap()));
    }

    #[test]
    fn constant_series_exponent() {
        let g = grid(2048, 32.0);
        let data = CauchyData::new(gauss_on(&g), SampledSignal::zeros(g), Equation::Wave).unwrap();
        let e = ExponentPair::new(2.0, 2.0).unwrap();
        let times = [0.0, 1.0, 2.0, 4.0, 8.0];
        let s = growth_track(&data, e, WeightSpec::unweighted(), &times, None).unwrap();
        // at t = 0 the tracked norm is that of u₀
        let n0 = stft::mod_norms_sampled(&data.u0, &[NormSpec::new(e, WeightSpec::unweighted())], None).unwrap()[0];
        assert_eq!(s.norms[0], n0);
        let r = bound_check(&s, Datum::U0, 1, (1.0, 8.0), 0.3).unwrap();
        assert!(r.fit.slope.abs() < 0.05, "{r:?}");
        assert!(r.pass);
    }
}
