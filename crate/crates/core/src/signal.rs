//! Sampling grids, analytic signals built from atoms, and discrete transforms.
//!
//! An [`AnalyticSignal`] is a finite sum of atoms
//! `c · e^{2πi ω·x} · base(s (x − b))` with a separable base profile. Dilation,
//! translation and modulation act exactly on the atom parameters, so a dilated
//! signal is evaluated from its formula and never resampled.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::fft;

/// `e^{−π r²}` at this radius is about 1e−14; used for footprints.
pub const GAUSS_RADIUS: f64 = 3.2;
/// Atoms are evaluated out to this radius (`e^{−π r²}` ≈ 1e−22).
const GAUSS_SAMPLE_RADIUS: f64 = 4.0;
/// Beyond this radius `|ψ̂|` stays below 1e−6 of `ψ̂(0)` (checked in tests).
/// The exp-type transition only gives stretched-exponential decay.
pub const BUMP_BAND: f64 = 64.0;

/// A uniform grid on `[−L, L)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub d: usize,
    pub n: usize,
    pub half_width: f64,
}

impl GridSpec {
    pub fn new(d: usize, n: usize, half_width: f64) -> Result<Self> {
        if !(1..=2).contains(&d) {
            return Err(Error::InvalidParameter(format!(
                "dimension {d} not supported (1 or 2)"
            )));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid size {n} must be a power of two >= 16"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "half width {half_width} must be positive"
            )));
        }
        Ok(Self { d, n, half_width })
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Node coordinate `−L + j·dx`.
    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequency spacing `1/(2L)`.
    pub fn freq_step(&self) -> f64 {
        1.0 / (2.0 * self.half_width)
    }

    /// Nyquist frequency `n/(4L)`.
    pub fn nyquist(&self) -> f64 {
        self.n as f64 / (4.0 * self.half_width)
    }

    /// The grid on which the centred DFT of this grid lives.
    pub fn dual(&self) -> GridSpec {
        GridSpec {
            d: self.d,
            n: self.n,
            half_width: self.nyquist(),
        }
    }

    /// Volume element `dx^d`.
    pub fn cell(&self) -> f64 {
        self.dx().powi(self.d as i32)
    }

    /// Coordinates of flat index `i` (row-major, axis 0 slowest).
    pub fn point(&self, i: usize) -> [f64; 2] {
        match self.d {
            1 => [self.node(i), 0.0],
            _ => [self.node(i / self.n), self.node(i % self.n)],
        }
    }
}

/// Time and frequency boxes that contain a signal to negligible tails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Footprint {
    pub time: [(f64, f64); 2],
    pub freq: [(f64, f64); 2],
}

impl Footprint {
    fn empty() -> Self {
        let e = (f64::INFINITY, f64::NEG_INFINITY);
        Self {
            time: [e, e],
            freq: [e, e],
        }
    }

    fn include(&mut self, other: &Footprint) {
        for a in 0..2 {
            self.time[a].0 = self.time[a].0.min(other.time[a].0);
            self.time[a].1 = self.time[a].1.max(other.time[a].1);
            self.freq[a].0 = self.freq[a].0.min(other.freq[a].0);
            self.freq[a].1 = self.freq[a].1.max(other.freq[a].1);
        }
    }

    /// Largest `|x|` over the used axes.
    pub fn time_radius(&self, d: usize) -> f64 {
        (0..d)
            .map(|a| self.time[a].0.abs().max(self.time[a].1.abs()))
            .fold(0.0, f64::max)
    }

    /// Largest `|ω|` over the used axes.
    pub fn band(&self, d: usize) -> f64 {
        (0..d)
            .map(|a| self.freq[a].0.abs().max(self.freq[a].1.abs()))
            .fold(0.0, f64::max)
    }
}

/// Separable base profile of an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Base {
    /// `φ(x) = e^{−π|x|²}`
    Gaussian,
    /// The compactly supported bump ψ; see [`bump`].
    Bump,
    /// The band-limited profile `ψ̌`, whose spectrum is ψ.
    BandBump,
}

/// One term `coef · e^{2πi freq·x} · base(scale·(x − center))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub coef: Complex64,
    pub base: Base,
    pub scale: f64,
    pub center: [f64; 2],
    pub freq: [f64; 2],
}

impl Atom {
    pub fn gaussian(coef: Complex64) -> Self {
        Self {
            coef,
            base: Base::Gaussian,
            scale: 1.0,
            center: [0.0; 2],
            freq: [0.0; 2],
        }
    }

    fn base_1d(&self, u: f64) -> f64 {
        match self.base {
            Base::Gaussian => (-PI * u * u).exp(),
            Base::Bump => bump(u),
            Base::BandBump => band_bump(u),
        }
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        let mut amp = 1.0;
        let mut phase = 0.0;
        for (a, xa) in x.iter().enumerate() {
            amp *= self.base_1d(self.scale * (xa - self.center[a]));
            phase += self.freq[a] * xa;
        }
        if amp == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coef * Complex64::from_polar(amp, 2.0 * PI * phase)
    }

    /// Radius (in `x`) outside which the atom is treated as zero when sampling.
    fn sample_radius(&self) -> Option<f64> {
        match self.base {
            Base::Gaussian => Some(GAUSS_SAMPLE_RADIUS / self.scale),
            Base::Bump => Some(0.5 / self.scale),
            Base::BandBump => None,
        }
    }

    fn footprint(&self, d: usize) -> Footprint {
        let (tr, fr) = match self.base {
            Base::Gaussian => (GAUSS_RADIUS / self.scale, GAUSS_RADIUS * self.scale),
            Base::Bump => (0.5 / self.scale, BUMP_BAND * self.scale),
            Base::BandBump => (BUMP_BAND / self.scale, 0.5 * self.scale),
        };
        let mut fp = Footprint::empty();
        for a in 0..d {
            fp.time[a] = (self.center[a] - tr, self.center[a] + tr);
            fp.freq[a] = (self.freq[a] - fr, self.freq[a] + fr);
        }
        for a in d..2 {
            fp.time[a] = (0.0, 0.0);
            fp.freq[a] = (0.0, 0.0);
        }
        fp
    }
}

/// Smooth step from 0 (at `u ≤ 0`) to 1 (at `u ≥ 1`) built from `e^{−1/u}`.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / u).exp();
        let b = (-1.0 / (1.0 - u)).exp();
        a / (a + b)
    }
}

/// One-dimensional ψ: 1 on `[−1/4, 1/4]`, 0 outside `(−1/2, 1/2)`, C^∞.
pub fn bump(u: f64) -> f64 {
    smooth_step((0.5 - u.abs()) * 4.0)
}

const BAND_QUAD: usize = 2048;

/// `ψ̌(x) = ∫ ψ(ξ) e^{2πi xξ} dξ`, real and even since ψ is.
///
/// The plateau contributes `sin(πx/2)/(πx)` exactly; the two transition
/// bands are integrated with composite Simpson.
pub fn band_bump(x: f64) -> f64 {
    let plateau = if x.abs() < 1e-12 {
        0.5
    } else {
        (0.5 * PI * x).sin() / (PI * x)
    };
    let h = 0.25 / BAND_QUAD as f64;
    let mut acc = 0.0;
    for i in 0..=BAND_QUAD {
        let xi = 0.25 + i as f64 * h;
        let w = if i == 0 || i == BAND_QUAD {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * bump(xi) * (2.0 * PI * x * xi).cos();
    }
    plateau + 2.0 * acc * h / 3.0
}

/// Structured provenance of an analytic signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptor {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    /// Product of all dilations applied after construction.
    pub dilation: f64,
    /// Lattice truncation radius, when the family is a truncated sum.
    pub truncation: Option<usize>,
    /// Estimated relative size of the dropped lattice terms.
    pub tail_estimate: Option<f64>,
}

impl Descriptor {
    pub fn named(family: &str) -> Self {
        Self {
            family: family.to_string(),
            params: BTreeMap::new(),
            dilation: 1.0,
            truncation: None,
            tail_estimate: None,
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// A finite sum of atoms with an exact pointwise evaluator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSignal {
    pub dim: usize,
    pub atoms: Vec<Atom>,
    pub descriptor: Descriptor,
}

impl AnalyticSignal {
    pub fn new(dim: usize, atoms: Vec<Atom>, descriptor: Descriptor) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidParameter(format!(
                "dimension {dim} not supported (1 or 2)"
            )));
        }
        for a in &atoms {
            if !(a.scale.is_finite() && a.scale > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "atom scale {} must be positive",
                    a.scale
                )));
            }
        }
        Ok(Self {
            dim,
            atoms,
            descriptor,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            atoms: Vec::new(),
            descriptor: Descriptor::named("zero"),
        }
    }

    /// `φ(x) = e^{−π|x|²}`.
    pub fn gaussian(dim: usize) -> Self {
        Self {
            dim,
            atoms: vec![Atom::gaussian(Complex64::new(1.0, 0.0))],
            descriptor: Descriptor::named("gaussian"),
        }
    }

    /// The bump ψ as a signal.
    pub fn bump(dim: usize) -> Self {
        let mut a = Atom::gaussian(Complex64::new(1.0, 0.0));
        a.base = Base::Bump;
        Self {
            dim,
            atoms: vec![a],
            descriptor: Descriptor::named("psi"),
        }
    }

    /// The band-limited profile `ψ̌`.
    pub fn band_bump(dim: usize) -> Self {
        let mut a = Atom::gaussian(Complex64::new(1.0, 0.0));
        a.base = Base::BandBump;
        Self {
            dim,
            atoms: vec![a],
            descriptor: Descriptor::named("psi_check"),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let x = &x[..self.dim];
        self.atoms.iter().map(|a| a.eval(x)).sum()
    }

    pub fn footprint(&self) -> Footprint {
        let mut fp = Footprint::empty();
        for a in &self.atoms {
            fp.include(&a.footprint(self.dim));
        }
        if self.atoms.is_empty() {
            fp = Atom::gaussian(Complex64::new(0.0, 0.0)).footprint(self.dim);
        }
        fp
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for a in &mut self.atoms {
            a.coef *= c;
        }
        self
    }

    pub fn plus(mut self, other: &AnalyticSignal) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::InvalidParameter("dimension mismatch in sum".into()));
        }
        self.atoms.extend_from_slice(&other.atoms);
        Ok(self)
    }
}

/// `U_λ f(x) = f(λx)`, applied to the atom parameters.
pub fn dilate(f: &AnalyticSignal, lambda: f64) -> Result<AnalyticSignal> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dilation factor {lambda} must be positive"
        )));
    }
    let mut g = f.clone();
    for a in &mut g.atoms {
        a.scale *= lambda;
        for k in 0..2 {
            a.center[k] /= lambda;
            a.freq[k] *= lambda;
        }
    }
    g.descriptor.dilation *= lambda;
    Ok(g)
}

/// `T_{x₀} f(x) = f(x − x₀)`.
pub fn translate(f: &AnalyticSignal, x0: &[f64]) -> AnalyticSignal {
    let mut g = f.clone();
    for a in &mut g.atoms {
        let mut phase = 0.0;
        for (k, shift) in x0.iter().take(f.dim).enumerate() {
            phase += a.freq[k] * shift;
            a.center[k] += shift;
        }
        a.coef *= Complex64::from_polar(1.0, -2.0 * PI * phase);
    }
    g
}

/// `M_{ω₀} f(x) = e^{2πi ω₀·x} f(x)`.
pub fn modulate(f: &AnalyticSignal, w0: &[f64]) -> AnalyticSignal {
    let mut g = f.clone();
    for a in &mut g.atoms {
        for (k, w) in w0.iter().take(f.dim).enumerate() {
            a.freq[k] += w;
        }
    }
    g
}

/// Polynomial weight `v_s(x) = (1 + |x|²)^{s/2}`.
pub fn weight_eval(x: &[f64], s: f64) -> f64 {
    if s == 0.0 {
        return 1.0;
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    (1.0 + r2).powf(0.5 * s)
}

/// Whether samples live on the time grid or on the dual frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Time,
    Frequency,
}

/// Values of a signal on the nodes of a grid (row-major in d = 2).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub grid: GridSpec,
    pub domain: Domain,
    pub values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        Self::with_domain(grid, Domain::Time, values)
    }

    pub fn with_domain(grid: GridSpec, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "{} samples do not match a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite {
                point: grid.point(i)[..grid.d].to_vec(),
                detail: "sample is not finite".into(),
            });
        }
        Ok(Self {
            grid,
            domain,
            values,
        })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            domain: Domain::Time,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Sample spacing of whichever grid the values live on.
    pub fn spacing(&self) -> f64 {
        self.grid.dx()
    }
}

/// Options for [`auto_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Extra half width reserved around the signal (STFT window reach).
    pub time_pad: f64,
    /// Extra band reserved on top of the signal band (window band).
    pub band_pad: f64,
    /// Nyquist must exceed `margin × (band + band_pad)`.
    pub margin: f64,
    /// Largest admissible number of nodes per axis.
    pub max_n: usize,
    pub min_half_width: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            time_pad: GAUSS_RADIUS,
            band_pad: GAUSS_RADIUS,
            margin: 1.1,
            max_n: 1 << 20,
            min_half_width: 8.0,
        }
    }
}

/// Smallest power-of-two grid that holds the footprint with the given pads.
pub fn auto_grid(fp: &Footprint, d: usize, opts: &GridOptions) -> Result<GridSpec> {
    let need_nyq = opts.margin * (fp.band(d) + opts.band_pad);
    // dx = 2^{-k}, Nyquist = 1/(2 dx)
    let mut dx = 0.125_f64;
    while 0.5 / dx < need_nyq {
        dx *= 0.5;
    }
    let need_l = (fp.time_radius(d) + opts.time_pad).max(opts.min_half_width);
    let mut l = 1.0_f64;
    while l < need_l {
        l *= 2.0;
    }
    let n = (2.0 * l / dx).round() as usize;
    if n > opts.max_n {
        return Err(Error::Precondition(format!(
            "required grid of {n} nodes per axis (L={l}, dx={dx}) exceeds limit {}",
            opts.max_n
        )));
    }
    GridSpec::new(d, n.max(16), l)
}

/// Evaluates `f` on the nodes of `grid`.
///
/// Atoms only touch the nodes inside their support radius, so lattice sums
/// of many narrow atoms cost little more than their total support.
pub fn sample(f: &AnalyticSignal, grid: &GridSpec) -> Result<SampledSignal> {
    if f.dim != grid.d {
        return Err(Error::InvalidParameter(format!(
            "signal of dimension {} sampled on a {}-d grid",
            f.dim, grid.d
        )));
    }
    let n = grid.n;
    let dx = grid.dx();
    let l = grid.half_width;
    let fp = f.footprint();
    for a in 0..grid.d {
        if fp.time[a].0 < -l || fp.time[a].1 > l {
            return Err(Error::TailCheck(format!(
                "signal footprint [{:.3}, {:.3}] exceeds grid [-{l}, {l})",
                fp.time[a].0, fp.time[a].1
            )));
        }
    }
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    let range = |c: f64, r: Option<f64>| -> (usize, usize) {
        match r {
            None => (0, n),
            Some(r) => {
                let lo = ((c - r + l) / dx).floor().max(0.0) as usize;
                let hi = (((c + r + l) / dx).ceil() as usize + 1).min(n);
                (lo.min(n), hi)
            }
        }
    };
    let mut fac0: Vec<Complex64> = Vec::with_capacity(n);
    let mut fac1: Vec<Complex64> = Vec::with_capacity(n);
    for atom in &f.atoms {
        let r = atom.sample_radius();
        let axis = |a: usize, buf: &mut Vec<Complex64>| -> (usize, usize) {
            let (lo, hi) = range(atom.center[a], r);
            buf.clear();
            for j in lo..hi {
                let x = grid.node(j);
                let amp = atom.base_1d(atom.scale * (x - atom.center[a]));
                buf.push(Complex64::from_polar(amp, 2.0 * PI * atom.freq[a] * x));
            }
            (lo, hi)
        };
        let (lo0, hi0) = axis(0, &mut fac0);
        if grid.d == 1 {
            for (j, v) in (lo0..hi0).zip(&fac0) {
                values[j] += atom.coef * v;
            }
        } else {
            let (lo1, hi1) = axis(1, &mut fac1);
            for (j0, v0) in (lo0..hi0).zip(&fac0) {
                let c = atom.coef * v0;
                let row = &mut values[j0 * n..(j0 + 1) * n];
                for (j1, v1) in (lo1..hi1).zip(&fac1) {
                    row[j1] += c * v1;
                }
            }
        }
    }
    SampledSignal::new(*grid, values)
}

/// Samples `f` on an automatically chosen grid.
pub fn sample_auto(f: &AnalyticSignal, opts: &GridOptions) -> Result<SampledSignal> {
    let grid = auto_grid(&f.footprint(), f.dim, opts)?;
    sample(f, &grid)
}

fn sign(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Centred DFT approximating `f̂(ξ) = ∫ f(x) e^{−2πi x·ξ} dx` on the dual grid
/// `ξ_m = m/(2L)`, `m = −n/2 … n/2−1`.
///
/// With the Riemann weights `dx^d` (time) and `(1/2L)^d` (frequency) the
/// transform is unitary.
pub fn dft(f: &SampledSignal) -> Result<SampledSignal> {
    if f.domain != Domain::Time {
        return Err(Error::Precondition("dft expects time-domain samples".into()));
    }
    let grid = f.grid;
    let n = grid.n;
    let half = (n / 2) as i64;
    let scale = grid.cell();
    let mut data = f.values.clone();
    transform(&mut data, grid.d, n, false);
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    let src = |i: usize| -> (usize, f64) {
        let m = i as i64 - half;
        (m.rem_euclid(n as i64) as usize, sign(m))
    };
    for (i, slot) in out.iter_mut().enumerate() {
        let (idx, sg) = if grid.d == 1 {
            src(i)
        } else {
            let (a, sa) = src(i / n);
            let (b, sb) = src(i % n);
            (a * n + b, sa * sb)
        };
        *slot = data[idx] * (scale * sg);
    }
    SampledSignal::with_domain(grid.dual(), Domain::Frequency, out)
}

/// Inverse of [`dft`].
pub fn idft(fh: &SampledSignal) -> Result<SampledSignal> {
    if fh.domain != Domain::Frequency {
        return Err(Error::Precondition(
            "idft expects frequency-domain samples".into(),
        ));
    }
    let dual = fh.grid;
    let n = dual.n;
    let half = (n / 2) as i64;
    // time grid: L = n / (4 · nyquist)
    let time = GridSpec::new(dual.d, n, n as f64 / (4.0 * dual.half_width))?;
    let scale = dual.cell();
    let mut data = vec![Complex64::new(0.0, 0.0); fh.values.len()];
    let dst = |i: usize| -> (usize, f64) {
        let m = i as i64 - half;
        (m.rem_euclid(n as i64) as usize, sign(m))
    };
    for i in 0..data.len() {
        let (idx, sg) = if dual.d == 1 {
            dst(i)
        } else {
            let (a, sa) = dst(i / n);
            let (b, sb) = dst(i % n);
            (a * n + b, sa * sb)
        };
        data[idx] = fh.values[i] * (scale * sg);
    }
    transform(&mut data, dual.d, n, true);
    SampledSignal::new(time, data)
}

fn transform(data: &mut [Complex64], d: usize, n: usize, inverse: bool) {
    if d == 1 {
        fft::rows(data, n, inverse);
    } else {
        fft::transform_2d(data, n, inverse);
    }
}

/// Riemann-sum weighted Lebesgue norm `(Σ |f|^p v_s^p dx^d)^{1/p}`.
pub fn lp_norm(f: &SampledSignal, p: f64, s: f64) -> f64 {
    let g = &f.grid;
    if p.is_infinite() {
        return f
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v.norm() * weight_eval(&g.point(i)[..g.d], s))
            .fold(0.0, f64::max);
    }
    let sum: f64 = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (v.norm() * weight_eval(&g.point(i)[..g.d], s)).powf(p))
        .sum();
    (sum * g.cell()).powf(1.0 / p)
}

/// Writes `index,re,im` rows preceded by a `#` header echoing the grid.
pub fn write_csv<W: Write>(f: &SampledSignal, mut w: W) -> Result<()> {
    writeln!(
        w,
        "# d={} n={} half_width={} domain={:?}",
        f.grid.d, f.grid.n, f.grid.half_width, f.domain
    )?;
    writeln!(w, "index,re,im")?;
    for (i, v) in f.values.iter().enumerate() {
        writeln!(w, "{i},{:e},{:e}", v.re, v.im)?;
    }
    Ok(())
}

/// Reads the format produced by [`write_csv`].
pub fn read_csv<R: BufRead>(r: R) -> Result<SampledSignal> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Io("empty signal file".into()))??;
    let mut d = None;
    let mut n = None;
    let mut l = None;
    let mut domain = Domain::Time;
    for tok in header.trim_start_matches('#').split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Io(format!("bad header token '{tok}'")))?;
        let bad = |_| Error::Io(format!("bad header value '{tok}'"));
        match k {
            "d" => d = Some(v.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "n" => n = Some(v.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "half_width" => l = Some(v.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "domain" => {
                domain = if v == "Frequency" {
                    Domain::Frequency
                } else {
                    Domain::Time
                }
            }
            _ => {}
        }
    }
    let grid = match (d, n, l) {
        (Some(d), Some(n), Some(l)) => GridSpec::new(d, n, l)?,
        _ => return Err(Error::Io("signal header lacks d, n or half_width".into())),
    };
    let rest: Vec<String> = lines.collect::<std::io::Result<_>>()?;
    let body = rest.join("\n");
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for rec in rdr.records() {
        let rec = rec?;
        let parse = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Io(format!("malformed row {:?}", rec)))
        };
        let i = parse(0)? as usize;
        if i >= values.len() {
            return Err(Error::Io(format!("row index {i} out of range")));
        }
        values[i] = Complex64::new(parse(1)?, parse(2)?);
    }
    SampledSignal::with_domain(grid, domain, values)
}

const MAGIC: &[u8; 8] = b"DILABSG1";

/// Flat little-endian binary: magic, d, n, L, domain, then interleaved re/im.
pub fn write_binary<W: Write>(f: &SampledSignal, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(f.grid.d as u64).to_le_bytes())?;
    w.write_all(&(f.grid.n as u64).to_le_bytes())?;
    w.write_all(&f.grid.half_width.to_le_bytes())?;
    w.write_all(&[(f.domain == Domain::Frequency) as u8])?;
    for v in &f.values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<SampledSignal> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Io("not a sampled-signal file".into()));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let d = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let l = f64::from_le_bytes(b8);
    let mut b1 = [0u8; 1];
    r.read_exact(&mut b1)?;
    let grid = GridSpec::new(d, n, l)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        values.push(Complex64::new(re, f64::from_le_bytes(b8)));
    }
    let domain = if b1[0] == 1 {
        Domain::Frequency
    } else {
        Domain::Time
    };
    SampledSignal::with_domain(grid, domain, values)
}
