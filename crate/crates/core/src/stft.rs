//! Short-time Fourier transform, Gabor coefficients and mixed-norm estimators.
//!
//! The transform is computed with local frames: for every time position the
//! windowed signal is cut to a frame of duration `T` and transformed with an
//! FFT of `T/dx` points, which puts the frequencies on the lattice `ℓ/T`.
//! Norm estimators stream over time positions and keep one accumulator per
//! frequency bin, so the full time–frequency matrix is never stored. Time
//! positions are processed in fixed blocks in parallel; block results are
//! merged in block order, so every reduction is deterministic.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::fft;
use crate::index::{ExponentPair, WeightSpec};
use crate::signal::{
    self, auto_grid, weight_eval, AnalyticSignal, GridOptions, GridSpec, SampledSignal,
    GAUSS_RADIUS,
};

const BLOCK: usize = 16;
const WINDOW_REACH: f64 = 4.0;

/// Gaussian analysis window `amp · e^{−π |scale·x|²}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub amp: f64,
    pub scale: f64,
}

impl Window {
    /// The unit Gaussian φ.
    pub fn gaussian() -> Self {
        Self {
            amp: 1.0,
            scale: 1.0,
        }
    }

    /// φ normalized in `L²(ℝ^d)`.
    pub fn normalized(d: usize) -> Self {
        Self {
            amp: 2f64.powf(d as f64 / 4.0),
            scale: 1.0,
        }
    }

    /// `φ(x/σ)` normalized in `L²(ℝ^d)`; `σ` is the width.
    pub fn normalized_width(d: usize, width: f64) -> Self {
        Self {
            amp: 2f64.powf(d as f64 / 4.0) * width.powf(-(d as f64) / 2.0),
            scale: 1.0 / width,
        }
    }

    fn eval(&self, u: f64) -> f64 {
        let v = self.scale * u;
        (-PI * v * v).exp()
    }

    fn reach(&self) -> f64 {
        WINDOW_REACH / self.scale
    }

    /// Band beyond which the window spectrum is negligible.
    pub fn band(&self) -> f64 {
        GAUSS_RADIUS * self.scale
    }

    /// Time radius beyond which the window is negligible.
    pub fn radius(&self) -> f64 {
        GAUSS_RADIUS / self.scale
    }
}

/// Time positions, frame duration and frequency stride of a local-frame STFT.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfPlan {
    /// Positions along each axis (the same on both axes in d = 2).
    pub positions: Vec<f64>,
    /// Frame duration `T`; frequencies are `ℓ/T`.
    pub frame_len: f64,
    /// Only bins with `ℓ ≡ 0 (mod stride)` are kept.
    pub stride: usize,
}

struct Frame {
    m: usize,
    kept: Vec<i64>,
    twiddle: Vec<Complex64>,
}

impl Frame {
    fn new(grid: &GridSpec, plan: &TfPlan, window: &Window) -> Result<Self> {
        let dx = grid.dx();
        let mf = plan.frame_len / dx;
        let m = mf.round() as usize;
        if m < 2 || (mf - m as f64).abs() > 1e-9 {
            return Err(Error::Precondition(format!(
                "frame length {} is not a multiple of the grid step {dx}",
                plan.frame_len
            )));
        }
        if plan.frame_len < 2.0 * window.reach() {
            return Err(Error::Precondition(format!(
                "frame length {} shorter than the window reach {}",
                plan.frame_len,
                2.0 * window.reach()
            )));
        }
        if plan.stride == 0 || plan.stride > m {
            return Err(Error::InvalidParameter(format!(
                "frequency stride {} outside 1..={m}",
                plan.stride
            )));
        }
        let half = (m / 2) as i64;
        let st = plan.stride as i64;
        let lo = -half + (-half).rem_euclid(st);
        let kept: Vec<i64> = (lo..half).step_by(plan.stride).collect();
        let twiddle = (0..m)
            .map(|r| Complex64::from_polar(1.0, -2.0 * PI * r as f64 / m as f64))
            .collect();
        Ok(Self { m, kept, twiddle })
    }

    fn freqs(&self, frame_len: f64) -> Vec<f64> {
        self.kept.iter().map(|&l| l as f64 / frame_len).collect()
    }
}

/// Time-domain footprint check for positions: the STFT only sees the grid.
fn validate_positions(grid: &GridSpec, plan: &TfPlan) -> Result<()> {
    if plan.positions.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite time position".into()));
    }
    if grid.d == 2 && plan.positions.len() > 4096 {
        return Err(Error::Precondition(format!(
            "{} positions per axis is beyond desk scale in d = 2",
            plan.positions.len()
        )));
    }
    Ok(())
}

/// Runs the local-frame STFT and feeds each time position to `fold`.
///
/// `fold(acc, k, x_k, row)` receives the flat position index, its coordinates
/// and the kept frequency bins (row-major over bins in d = 2).
fn run<A, I, F>(
    f: &SampledSignal,
    window: &Window,
    plan: &TfPlan,
    init: I,
    fold: F,
) -> Result<(Vec<A>, Vec<f64>)>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, usize, [f64; 2], &[Complex64]) + Sync,
{
    let grid = f.grid;
    validate_positions(&grid, plan)?;
    if window.amp == 0.0 || !(window.scale.is_finite() && window.scale > 0.0) {
        return Err(Error::InvalidParameter("zero window".into()));
    }
    let frame = Frame::new(&grid, plan, window)?;
    let freqs = frame.freqs(plan.frame_len);
    let np = plan.positions.len();
    let total = if grid.d == 1 { np } else { np * np };
    let blocks: Vec<usize> = (0..total.div_ceil(BLOCK)).collect();
    let accs: Vec<A> = blocks
        .par_iter()
        .map(|&b| {
            let mut acc = init();
            let m = frame.m;
            let mut buf = vec![Complex64::new(0.0, 0.0); m.pow(grid.d as u32)];
            let mut row = vec![Complex64::new(0.0, 0.0); frame.kept.len().pow(grid.d as u32)];
            for k in b * BLOCK..((b + 1) * BLOCK).min(total) {
                let x = if grid.d == 1 {
                    [plan.positions[k], 0.0]
                } else {
                    [plan.positions[k / np], plan.positions[k % np]]
                };
                if grid.d == 1 {
                    shift_1d(f, window, &frame, plan.frame_len, x[0], &mut buf, &mut row);
                } else {
                    shift_2d(f, window, &frame, plan.frame_len, x, &mut buf, &mut row);
                }
                fold(&mut acc, k, x, &row);
            }
            acc
        })
        .collect();
    Ok((accs, freqs))
}

/// Frame start index and the index range where the window is non-negligible.
fn frame_range(grid: &GridSpec, window: &Window, frame_len: f64, x: f64, m: usize) -> (i64, usize, usize) {
    let dx = grid.dx();
    let l = grid.half_width;
    let n = grid.n as i64;
    let j0 = ((x - 0.5 * frame_len + l) / dx).round() as i64;
    let r = window.reach();
    let wlo = ((x - r + l) / dx).ceil() as i64;
    let whi = ((x + r + l) / dx).floor() as i64 + 1;
    let lo = j0.max(wlo).max(0);
    let hi = (j0 + m as i64).min(whi).min(n);
    if hi <= lo {
        return (j0, 0, 0);
    }
    ((j0), (lo - j0) as usize, (hi - j0) as usize)
}

fn shift_1d(
    f: &SampledSignal,
    window: &Window,
    frame: &Frame,
    frame_len: f64,
    x: f64,
    buf: &mut [Complex64],
    row: &mut [Complex64],
) {
    let grid = &f.grid;
    let m = frame.m;
    let zero = Complex64::new(0.0, 0.0);
    let (j0, lo, hi) = frame_range(grid, window, frame_len, x, m);
    if lo == hi {
        row.fill(zero);
        return;
    }
    buf.fill(zero);
    let mut any = false;
    for (i, slot) in buf.iter_mut().enumerate().take(hi).skip(lo) {
        let j = (j0 + i as i64) as usize;
        let v = f.values[j];
        if v != zero {
            *slot = v * (window.amp * window.eval(grid.node(j) - x));
            any = true;
        }
    }
    if !any {
        row.fill(zero);
        return;
    }
    fft::rows(buf, m, false);
    let jj = j0 - (grid.n / 2) as i64;
    let dx = grid.dx();
    let mi = m as i64;
    for (out, &l) in row.iter_mut().zip(&frame.kept) {
        let idx = l.rem_euclid(mi) as usize;
        let ph = ((l * jj).rem_euclid(mi)) as usize;
        *out = buf[idx] * frame.twiddle[ph] * dx;
    }
}

fn shift_2d(
    f: &SampledSignal,
    window: &Window,
    frame: &Frame,
    frame_len: f64,
    x: [f64; 2],
    buf: &mut [Complex64],
    row: &mut [Complex64],
) {
    let grid = &f.grid;
    let n = grid.n;
    let m = frame.m;
    let zero = Complex64::new(0.0, 0.0);
    let (j0a, loa, hia) = frame_range(grid, window, frame_len, x[0], m);
    let (j0b, lob, hib) = frame_range(grid, window, frame_len, x[1], m);
    if loa == hia || lob == hib {
        row.fill(zero);
        return;
    }
    buf.fill(zero);
    let wb: Vec<f64> = (lob..hib)
        .map(|i| window.eval(grid.node((j0b + i as i64) as usize) - x[1]))
        .collect();
    let mut any = false;
    for ia in loa..hia {
        let ja = (j0a + ia as i64) as usize;
        let wa = window.amp * window.eval(grid.node(ja) - x[0]);
        for (ib, w) in (lob..hib).zip(&wb) {
            let jb = (j0b + ib as i64) as usize;
            let v = f.values[ja * n + jb];
            if v != zero {
                buf[ia * m + ib] = v * (wa * w);
                any = true;
            }
        }
    }
    if !any {
        row.fill(zero);
        return;
    }
    fft::transform_2d(buf, m, false);
    let half = (n / 2) as i64;
    let (ja, jb) = (j0a - half, j0b - half);
    let cell = grid.cell();
    let mi = m as i64;
    let nk = frame.kept.len();
    for (a, &la) in frame.kept.iter().enumerate() {
        let ia = la.rem_euclid(mi) as usize;
        for (b, &lb) in frame.kept.iter().enumerate() {
            let ib = lb.rem_euclid(mi) as usize;
            let ph = ((la * ja + lb * jb).rem_euclid(mi)) as usize;
            row[a * nk + b] = buf[ia * m + ib] * frame.twiddle[ph] * cell;
        }
    }
}

/// Sampled STFT values `V_g f(x_k, ω_ℓ)` on a rectangular lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct TFMatrix {
    pub d: usize,
    /// Time positions per axis.
    pub times: Vec<f64>,
    /// Frequencies per axis.
    pub freqs: Vec<f64>,
    /// Row-major `[k][ℓ]`; in d = 2 both `k` and `ℓ` are flattened pairs.
    pub values: Vec<Complex64>,
    /// Measure attached to one time cell (`Δt^d`, or 1 for sequences).
    pub time_cell: f64,
    /// Measure attached to one frequency cell (`Δω^d`, or 1 for sequences).
    pub freq_cell: f64,
    pub grid: GridSpec,
}

impl TFMatrix {
    pub fn n_times(&self) -> usize {
        self.times.len().pow(self.d as u32)
    }

    pub fn n_freqs(&self) -> usize {
        self.freqs.len().pow(self.d as u32)
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.values[k * self.n_freqs() + l]
    }

    fn point(axis: &[f64], d: usize, i: usize) -> [f64; 2] {
        if d == 1 {
            [axis[i], 0.0]
        } else {
            [axis[i / axis.len()], axis[i % axis.len()]]
        }
    }

    pub fn time_point(&self, k: usize) -> [f64; 2] {
        Self::point(&self.times, self.d, k)
    }

    pub fn freq_point(&self, l: usize) -> [f64; 2] {
        Self::point(&self.freqs, self.d, l)
    }

    /// CSV with columns `k, l, x_k, omega_l, re, im, abs` (coordinates
    /// joined by `;` in d = 2), preceded by a `#` metadata line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# d={} grid_n={} half_width={} time_cell={} freq_cell={} n_times={} n_freqs={}",
            self.d,
            self.grid.n,
            self.grid.half_width,
            self.time_cell,
            self.freq_cell,
            self.times.len(),
            self.freqs.len()
        )?;
        writeln!(w, "k,l,x_k,omega_l,re,im,abs")?;
        let coord = |p: [f64; 2]| {
            if self.d == 1 {
                format!("{}", p[0])
            } else {
                format!("{};{}", p[0], p[1])
            }
        };
        for k in 0..self.n_times() {
            for l in 0..self.n_freqs() {
                let v = self.get(k, l);
                writeln!(
                    w,
                    "{k},{l},{},{},{:e},{:e},{:e}",
                    coord(self.time_point(k)),
                    coord(self.freq_point(l)),
                    v.re,
                    v.im,
                    v.norm()
                )?;
            }
        }
        Ok(())
    }
}

/// Default continuous-estimator lattice: time step and frame duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StftOptions {
    pub time_step: f64,
    pub frame_len: f64,
}

impl StftOptions {
    /// `Δt = 1/16, T = 16` in d = 1; `Δt = 1/4, T = 8` in d = 2.
    pub fn for_dim(d: usize) -> Self {
        if d == 1 {
            Self {
                time_step: 1.0 / 16.0,
                frame_len: 16.0,
            }
        } else {
            Self {
                time_step: 0.25,
                frame_len: 8.0,
            }
        }
    }

    fn plan(&self, grid: &GridSpec) -> TfPlan {
        let step = self.time_step.max(grid.dx());
        let count = (2.0 * grid.half_width / step).round() as usize;
        TfPlan {
            positions: (0..count).map(|k| -grid.half_width + k as f64 * step).collect(),
            frame_len: self.frame_len,
            stride: 1,
        }
    }
}

/// Full STFT `V_g f` on the time positions `−L + k·Δt` and frequencies `ℓ/T`.
///
/// `time_step` is raised to the grid step when the grid is coarser.
pub fn stft(f: &SampledSignal, window: &Window, opts: &StftOptions) -> Result<TFMatrix> {
    let plan = opts.plan(&f.grid);
    let step = plan.positions.get(1).map_or(1.0, |b| b - plan.positions[0]);
    collect(f, window, &plan, step.powi(f.grid.d as i32), (1.0 / opts.frame_len).powi(f.grid.d as i32))
}

fn collect(
    f: &SampledSignal,
    window: &Window,
    plan: &TfPlan,
    time_cell: f64,
    freq_cell: f64,
) -> Result<TFMatrix> {
    let (blocks, freqs) = run(
        f,
        window,
        plan,
        Vec::new,
        |acc: &mut Vec<Complex64>, _k, _x, row| acc.extend_from_slice(row),
    )?;
    let values: Vec<Complex64> = blocks.into_iter().flatten().collect();
    Ok(TFMatrix {
        d: f.grid.d,
        times: plan.positions.clone(),
        freqs,
        values,
        time_cell,
        freq_cell,
        grid: f.grid,
    })
}

/// Exponents and weights of one mixed norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub e: ExponentPair,
    pub w: WeightSpec,
}

impl NormSpec {
    pub fn new(e: ExponentPair, w: WeightSpec) -> Self {
        Self { e, w }
    }
}

/// Per-bin accumulators `Σ_k |c_kℓ|^p v_t(x_k)^p` (or maxima) for many specs.
#[derive(Debug, Clone)]
struct MixedAcc {
    sums: Vec<Vec<f64>>,
}

impl MixedAcc {
    fn new(n_specs: usize, bins: usize) -> Self {
        Self {
            sums: vec![vec![0.0; bins]; n_specs],
        }
    }

    fn add_row(&mut self, specs: &[NormSpec], x: &[f64], row: &[Complex64]) {
        for (spec, sums) in specs.iter().zip(self.sums.iter_mut()) {
            let vt = weight_eval(x, spec.w.t);
            let ip = spec.e.inv_p;
            if ip == 0.0 {
                for (s, v) in sums.iter_mut().zip(row) {
                    *s = s.max(v.norm() * vt);
                }
            } else if ip == 1.0 {
                for (s, v) in sums.iter_mut().zip(row) {
                    *s += v.norm() * vt;
                }
            } else if ip == 0.5 {
                let vt2 = vt * vt;
                for (s, v) in sums.iter_mut().zip(row) {
                    *s += v.norm_sqr() * vt2;
                }
            } else {
                let p = 1.0 / ip;
                for (s, v) in sums.iter_mut().zip(row) {
                    let a = v.norm();
                    if a > 0.0 {
                        *s += (a * vt).powf(p);
                    }
                }
            }
        }
    }

    fn merge(&mut self, other: &MixedAcc, specs: &[NormSpec]) {
        for ((spec, a), b) in specs.iter().zip(self.sums.iter_mut()).zip(&other.sums) {
            if spec.e.inv_p == 0.0 {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = x.max(*y);
                }
            } else {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
        }
    }

    fn finish(
        &self,
        specs: &[NormSpec],
        freq_points: &dyn Fn(usize) -> [f64; 2],
        d: usize,
        time_cell: f64,
        freq_cell: f64,
    ) -> Vec<f64> {
        specs
            .iter()
            .zip(&self.sums)
            .map(|(spec, sums)| {
                let ip = spec.e.inv_p;
                let iq = spec.e.inv_q;
                let mut outer = 0.0_f64;
                for (l, s) in sums.iter().enumerate() {
                    let inner = if ip == 0.0 {
                        *s
                    } else {
                        (s * time_cell).powf(ip)
                    };
                    if inner == 0.0 {
                        continue;
                    }
                    let vs = weight_eval(&freq_points(l)[..d], spec.w.s);
                    if iq == 0.0 {
                        outer = outer.max(inner * vs);
                    } else {
                        outer += (inner * vs).powf(1.0 / iq);
                    }
                }
                if iq == 0.0 {
                    outer
                } else {
                    (outer * freq_cell).powf(iq)
                }
            })
            .collect()
    }
}

/// Weighted mixed `L^{p,q}` norm of a TF matrix: inner p over time weighted by
/// `v_t(x_k)`, outer q over frequency weighted by `v_s(ω_ℓ)`, with the
/// matrix's cell measures.
pub fn mixed_lpq_norm(m: &TFMatrix, e: ExponentPair, w: WeightSpec) -> f64 {
    let specs = [NormSpec::new(e, w)];
    let nf = m.n_freqs();
    let mut acc = MixedAcc::new(1, nf);
    for k in 0..m.n_times() {
        acc.add_row(&specs, &m.time_point(k)[..m.d], &m.values[k * nf..(k + 1) * nf]);
    }
    acc.finish(&specs, &|l| m.freq_point(l), m.d, m.time_cell, m.freq_cell)[0]
}

/// Weighted `ℓ^{p,q}_{t,s}` norm of coefficients, with weights at the lattice
/// positions stored in the matrix and no cell measure.
pub fn lpq_sequence_norm(c: &TFMatrix, e: ExponentPair, w: WeightSpec) -> f64 {
    let mut unit = c.clone();
    unit.time_cell = 1.0;
    unit.freq_cell = 1.0;
    mixed_lpq_norm(&unit, e, w)
}

fn streamed_norms(
    f: &SampledSignal,
    window: &Window,
    plan: &TfPlan,
    specs: &[NormSpec],
    time_cell: f64,
    freq_cell: f64,
) -> Result<Vec<f64>> {
    let d = f.grid.d;
    let frame = Frame::new(&f.grid, plan, window)?;
    let bins = frame.kept.len().pow(d as u32);
    let (blocks, freqs) = run(
        f,
        window,
        plan,
        || MixedAcc::new(specs.len(), bins),
        |acc, _k, x, row| acc.add_row(specs, &x[..d], row),
    )?;
    let mut total = MixedAcc::new(specs.len(), bins);
    for b in &blocks {
        total.merge(b, specs);
    }
    let point = |l: usize| TFMatrix::point(&freqs, d, l);
    let out = total.finish(specs, &point, d, time_cell, freq_cell);
    if let Some(i) = out.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            point: vec![],
            detail: format!("norm {i} evaluated to {}", out[i]),
        });
    }
    Ok(out)
}

/// Grid and lattice choices for the norm estimators.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NormOptions {
    /// Fixed grid; when `None` a grid is chosen from the signal footprint.
    pub grid: Option<GridSpec>,
    pub grid_opts: GridOptions,
    pub stft: Option<StftOptions>,
}

impl NormOptions {
    /// Grid on which `f` will be sampled. A fixed grid must resolve the band of `f`.
    pub fn grid_for(&self, f: &AnalyticSignal) -> Result<GridSpec> {
        let fp = f.footprint();
        match self.grid {
            Some(g) if fp.band(f.dim) > g.nyquist() => Err(Error::Aliasing(format!(
                "signal band {:.3} exceeds the Nyquist frequency {} of the fixed grid",
                fp.band(f.dim),
                g.nyquist()
            ))),
            Some(g) => Ok(g),
            None => auto_grid(&fp, f.dim, &self.grid_opts),
        }
    }
}

/// Weighted modulation norms `‖V_g f‖_{L^{p,q}_{t,s}}` with the
/// L²-normalized Gaussian window, for several specs from one STFT pass.
pub fn mod_norms_continuous(
    f: &AnalyticSignal,
    specs: &[NormSpec],
    opts: &NormOptions,
) -> Result<Vec<f64>> {
    let grid = opts.grid_for(f)?;
    let sampled = signal::sample(f, &grid)?;
    mod_norms_sampled(&sampled, specs, opts.stft)
}

/// As [`mod_norms_continuous`] for an already sampled signal.
pub fn mod_norms_sampled(
    f: &SampledSignal,
    specs: &[NormSpec],
    stft_opts: Option<StftOptions>,
) -> Result<Vec<f64>> {
    let d = f.grid.d;
    let opts = stft_opts.unwrap_or_else(|| StftOptions::for_dim(d));
    let plan = opts.plan(&f.grid);
    let step = plan.positions.get(1).map_or(1.0, |b| b - plan.positions[0]);
    streamed_norms(
        f,
        &Window::normalized(d),
        &plan,
        specs,
        step.powi(d as i32),
        (1.0 / opts.frame_len).powi(d as i32),
    )
}

/// Single-spec convenience wrapper.
pub fn mod_norm_continuous(
    f: &AnalyticSignal,
    e: ExponentPair,
    w: WeightSpec,
    opts: &NormOptions,
) -> Result<f64> {
    Ok(mod_norms_continuous(f, &[NormSpec::new(e, w)], opts)?[0])
}

/// Frequency step `b` of the Gabor lattices used here.
pub const GABOR_B: f64 = 1.0;
/// Default time step `a` of the frame backend.
pub const GABOR_A: f64 = 0.5;

fn gabor_plan(grid: &GridSpec, a: f64, b: f64) -> Result<TfPlan> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(format!("lattice parameter a={a} must be positive")));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidParameter(format!("lattice parameter b={b} must be positive")));
    }
    // frame duration: smallest multiple of 1/b covering 16 that is a whole number of samples
    let dx = grid.dx();
    let mut mult = (16.0 * b).ceil().max(1.0);
    let frame_len = loop {
        let t = mult / b;
        if ((t / dx) - (t / dx).round()).abs() < 1e-9 {
            break t;
        }
        mult += 1.0;
        if mult > 1e6 {
            return Err(Error::Precondition(format!(
                "frequency step b={b} incommensurate with grid step {dx}"
            )));
        }
    };
    let kmax = (grid.half_width / a).floor() as i64;
    let positions: Vec<f64> = (-kmax..=kmax)
        .map(|k| k as f64 * a)
        .filter(|x| *x < grid.half_width)
        .collect();
    Ok(TfPlan {
        positions,
        frame_len,
        stride: mult as usize,
    })
}

/// Gabor coefficients `⟨f, M_{bℓ} T_{ak} φ⟩` over the lattice covering the grid.
///
/// Any `a > 0` is accepted here; frame-based norms reject `a ≥ 1`.
pub fn gabor_coeffs(f: &SampledSignal, a: f64, b: f64) -> Result<TFMatrix> {
    let plan = gabor_plan(&f.grid, a, b)?;
    collect(f, &Window::gaussian(), &plan, 1.0, 1.0)
}

/// Frame-based norms `‖(⟨f, M_{bℓ}T_{ak}φ⟩)‖_{ℓ^{p,q}}` with weights
/// `v_t(ak)`, `v_s(bℓ)` and `b = 1`.
///
/// Equivalent to, not equal to, the continuous norm.
pub fn mod_norms_frame(
    f: &AnalyticSignal,
    specs: &[NormSpec],
    a: f64,
    opts: &NormOptions,
) -> Result<Vec<f64>> {
    let grid = opts.grid_for(f)?;
    let sampled = signal::sample(f, &grid)?;
    mod_norms_frame_sampled(&sampled, specs, a)
}

pub fn mod_norms_frame_sampled(f: &SampledSignal, specs: &[NormSpec], a: f64) -> Result<Vec<f64>> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Precondition(format!(
            "frame-based norms need 0 < a < 1 (got a={a}); the Gaussian lattice is not a frame otherwise"
        )));
    }
    let plan = gabor_plan(&f.grid, a, GABOR_B)?;
    streamed_norms(f, &Window::gaussian(), &plan, specs, 1.0, 1.0)
}

pub fn mod_norm_frame(
    f: &AnalyticSignal,
    e: ExponentPair,
    w: WeightSpec,
    a: f64,
    opts: &NormOptions,
) -> Result<f64> {
    Ok(mod_norms_frame(f, &[NormSpec::new(e, w)], a, opts)?[0])
}

/// Estimated frame bounds of `𝒢(φ, a, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub a_lower: f64,
    pub b_upper: f64,
    pub lattice_a: f64,
    /// `B/A`.
    pub condition: f64,
    /// True when the lower bound has collapsed relative to the upper one.
    pub not_a_frame: bool,
}

/// `B/A` above this marks a numerically degenerate frame.
///
/// Calibrated on [`frame_test_set`]: about 2.4 for `a ≤ 0.9`, 2.6 at
/// `a = 0.95`, above 200 at `a = 1`.
pub const NOT_A_FRAME_CONDITION: f64 = 10.0;

const ZAK_BUMP_SCALE: f64 = 16.0;
const ZAK_ENVELOPE_WIDTH: f64 = 24.0;

/// Test functions for Rayleigh-quotient frame bounds.
///
/// Random wave packets probe the bulk of the spectrum of the frame operator;
/// the Zak-localized sums `Σ_j w(j) e^{2πi j ω₀} h(x − j − x₀)` concentrate
/// the Zak transform near `(x₀, ω₀)`, where the Gaussian's Zak transform
/// vanishes for `(x₀, ω₀) = (1/2, 1/2)`.
pub fn frame_test_set(seed: u64, n_random: usize) -> Vec<AnalyticSignal> {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..n_random {
        let terms = rng.gen_range(1..=3);
        let mut f = AnalyticSignal::zero(1);
        for _ in 0..terms {
            let g = signal::dilate(&AnalyticSignal::gaussian(1), rng.gen_range(0.5..2.0))
                .expect("positive scale");
            let g = signal::modulate(
                &signal::translate(&g, &[rng.gen_range(-4.0..4.0)]),
                &[rng.gen_range(-4.0..4.0)],
            )
            .scaled(Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            f = f.plus(&g).expect("same dimension");
        }
        f.descriptor = signal::Descriptor::named("wave_packet");
        out.push(f);
    }
    // the Rayleigh quotient near a simple zero falls like (bump width)² + 1/envelope²
    let h = signal::dilate(&AnalyticSignal::gaussian(1), ZAK_BUMP_SCALE).expect("positive scale");
    for (x0, w0) in [(0.5, 0.5), (0.0, 0.5), (0.5, 0.0), (0.25, 0.25)] {
        let width = ZAK_ENVELOPE_WIDTH;
        let k = (4.0 * width) as i32;
        let mut f = AnalyticSignal::zero(1);
        for j in -k..=k {
            let wj = (-PI * (j as f64 / width).powi(2)).exp();
            let c = Complex64::from_polar(wj, 2.0 * PI * j as f64 * w0);
            f = f
                .plus(&signal::translate(&h, &[j as f64 + x0]).scaled(c))
                .expect("same dimension");
        }
        f.descriptor = signal::Descriptor::named("zak_localized")
            .with("x0", x0)
            .with("omega0", w0);
        out.push(f);
    }
    out
}

/// `Σ|⟨f, M_ℓ T_{ak} φ⟩|² / ‖f‖₂²`.
pub fn frame_quotient(f: &AnalyticSignal, a: f64) -> Result<f64> {
    let s = signal::sample_auto(f, &GridOptions::default())?;
    let energy = signal::lp_norm(&s, 2.0, 0.0).powi(2);
    let c = gabor_coeffs(&s, a, GABOR_B)?;
    Ok(c.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / energy)
}

/// Min/max of [`frame_quotient`] over [`frame_test_set`].
pub fn frame_bounds_estimate(a: f64, seed: u64) -> Result<FrameBounds> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidParameter(format!("lattice parameter a={a} outside (0, 1]")));
    }
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for f in &frame_test_set(seed, 24) {
        let r = frame_quotient(f, a)?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let condition = hi / lo;
    Ok(FrameBounds {
        a_lower: lo,
        b_upper: hi,
        lattice_a: a,
        condition,
        not_a_frame: !(condition.is_finite() && condition < NOT_A_FRAME_CONDITION),
    })
}
