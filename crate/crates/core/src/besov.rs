//! Littlewood–Paley Besov norms, the Besov dilation law and embedding checks
//! between Besov and modulation spaces.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{format_exponent, ExponentPair, Regime, WeightSpec};
use crate::lab::{fit_loglog, FitResult};
use crate::signal::{
    self, AnalyticSignal, Atom, Base, Descriptor, Domain, GridOptions, GridSpec, SampledSignal,
};
use crate::stft::{self, NormOptions, NormSpec};

/// Fraction of the Nyquist band treated as unreliable.
pub const ALIAS_MARGIN: f64 = 0.1;
/// Relative spectral energy beyond `(1 − margin)·Nyquist` that flags aliasing.
pub const ALIAS_THRESHOLD: f64 = 1e-6;

/// `χ(r)`: 1 on `r ≤ 1`, 0 on `r ≥ 3/2`, C^∞ in between (same transition as ψ).
pub fn lp_profile(r: f64) -> f64 {
    1.0 - signal::smooth_step(2.0 * (r - 1.0))
}

/// Dyadic partition `θ₀ = χ(|ξ|)`, `θ_j = χ(|ξ|/2^j) − χ(|ξ|/2^{j−1})`, with
/// the top block `θ_J = 1 − χ(|ξ|/2^{J−1})` absorbing the rest of the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyadicPartition {
    /// Index of the top block; there are `J + 1` blocks.
    pub top: usize,
    pub nyquist: f64,
}

impl DyadicPartition {
    /// Smallest partition whose top annulus `[2^{J−1}, 2^{J+1}]` reaches Nyquist.
    pub fn for_grid(grid: &GridSpec) -> Self {
        let nyq = grid.nyquist();
        let top = (nyq.log2().ceil() as i64 - 1).max(1) as usize;
        Self { top, nyquist: nyq }
    }

    pub fn blocks(&self) -> usize {
        self.top + 1
    }

    /// `θ_j(ξ)` at radius `r = |ξ|`.
    pub fn theta(&self, j: usize, r: f64) -> f64 {
        let chi = |k: usize| lp_profile(r / 2f64.powi(k as i32));
        match j {
            0 => chi(0),
            j if j < self.top => chi(j) - chi(j - 1),
            j if j == self.top => 1.0 - chi(j - 1),
            _ => 0.0,
        }
    }

    fn check(&self, grid: &GridSpec) -> Result<()> {
        if (grid.nyquist() - self.nyquist).abs() > 1e-12 * self.nyquist {
            return Err(Error::Precondition(format!(
                "partition built for Nyquist {} used on a grid with Nyquist {}",
                self.nyquist,
                grid.nyquist()
            )));
        }
        Ok(())
    }
}

fn radius(p: [f64; 2], d: usize) -> f64 {
    if d == 1 {
        p[0].abs()
    } else {
        p[0].hypot(p[1])
    }
}

/// Besov norm with its block breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesovNorm {
    pub value: f64,
    /// `‖Δ_j f‖_p` per block.
    pub blocks: Vec<f64>,
    /// Relative spectral energy beyond `(1 − ALIAS_MARGIN)·Nyquist`.
    pub alias_mass: f64,
    pub aliasing: bool,
    pub grid_n: usize,
    pub half_width: f64,
}

/// Block pieces `Δ_j f` in the time domain.
pub fn blocks(f: &SampledSignal, part: &DyadicPartition) -> Result<Vec<SampledSignal>> {
    part.check(&f.grid)?;
    let fh = signal::dft(f)?;
    let d = fh.grid.d;
    (0..part.blocks())
        .into_par_iter()
        .map(|j| {
            let vals: Vec<Complex64> = fh
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| v * part.theta(j, radius(fh.grid.point(i), d)))
                .collect();
            signal::idft(&SampledSignal::with_domain(fh.grid, Domain::Frequency, vals)?)
        })
        .collect()
}

fn alias_mass(fh: &SampledSignal) -> f64 {
    let cut = (1.0 - ALIAS_MARGIN) * fh.grid.half_width;
    let d = fh.grid.d;
    let (mut out, mut total) = (0.0, 0.0);
    for (i, v) in fh.values.iter().enumerate() {
        let e = v.norm_sqr();
        total += e;
        if radius(fh.grid.point(i), d) > cut {
            out += e;
        }
    }
    if total > 0.0 {
        out / total
    } else {
        0.0
    }
}

/// `(Σ_j (2^{js}‖Δ_j f‖_p)^q)^{1/q}`, sup at `q = ∞`.
pub fn besov_norm(f: &SampledSignal, e: ExponentPair, s: f64, part: &DyadicPartition) -> Result<BesovNorm> {
    let pieces = blocks(f, part)?;
    let p = e.p();
    let norms: Vec<f64> = pieces.iter().map(|b| signal::lp_norm(b, p, 0.0)).collect();
    let terms = norms.iter().enumerate().map(|(j, n)| 2f64.powf(j as f64 * s) * n);
    let value = if e.inv_q == 0.0 {
        terms.fold(0.0, f64::max)
    } else {
        let q = e.q();
        terms.map(|t| t.powf(q)).sum::<f64>().powf(1.0 / q)
    };
    if !value.is_finite() {
        return Err(Error::NonFinite {
            point: vec![e.inv_p, e.inv_q, s],
            detail: "Besov norm".into(),
        });
    }
    let alias = alias_mass(&signal::dft(f)?);
    Ok(BesovNorm {
        value,
        blocks: norms,
        alias_mass: alias,
        aliasing: alias > ALIAS_THRESHOLD,
        grid_n: f.grid.n,
        half_width: f.grid.half_width,
    })
}

/// Samples `f` on its automatic grid and evaluates the Besov norm there.
pub fn besov_norm_signal(f: &AnalyticSignal, e: ExponentPair, s: f64, opts: &GridOptions) -> Result<BesovNorm> {
    let sampled = signal::sample_auto(f, opts)?;
    let part = DyadicPartition::for_grid(&sampled.grid);
    besov_norm(&sampled, e, s, &part)
}

/// Per-λ Besov norms and the fits over the λ ≥ 1 and λ ≤ 1 sub-grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesovDilation {
    pub p: String,
    pub q: String,
    pub s: f64,
    pub lambdas: Vec<f64>,
    pub norms: Vec<f64>,
    pub aliasing: Vec<bool>,
    pub alias_mass: Vec<f64>,
    pub grid_n: Vec<usize>,
    pub half_width: Vec<f64>,
    pub ge1: Option<FitResult>,
    pub le1: Option<FitResult>,
    /// `[−d/p + min(0,s), −d/p + max(0,s)]`.
    pub envelope: (f64, f64),
}

impl BesovDilation {
    /// Both fitted slopes lie in the envelope widened by `tol`.
    pub fn within(&self, tol: f64) -> bool {
        let (lo, hi) = self.envelope;
        [self.ge1, self.le1]
            .iter()
            .flatten()
            .all(|f| f.slope >= lo - tol && f.slope <= hi + tol)
    }

    /// Which envelope exponent a fit tracks more closely.
    pub fn tracks(&self, regime: Regime) -> Option<f64> {
        let fit = match regime {
            Regime::LambdaGE1 => self.ge1?,
            Regime::LambdaLE1 => self.le1?,
        };
        let (lo, hi) = self.envelope;
        Some(if (fit.slope - lo).abs() <= (fit.slope - hi).abs() { lo } else { hi })
    }

    /// Rows in the sweep schema `lambda,norm,norm_f,backend,grid_n,L,K,tail,error`;
    /// `tail` holds the alias mass and `norm_f` the λ = 1 norm when sampled.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["lambda", "norm", "norm_f", "backend", "grid_n", "L", "K", "tail", "error"])?;
        let base = self
            .lambdas
            .iter()
            .position(|l| *l == 1.0)
            .map_or(String::new(), |i| format!("{:.17e}", self.norms[i]));
        for i in 0..self.lambdas.len() {
            wr.write_record([
                format!("{:.17e}", self.lambdas[i]),
                format!("{:.17e}", self.norms[i]),
                base.clone(),
                "littlewood-paley".to_string(),
                self.grid_n[i].to_string(),
                format!("{}", self.half_width[i]),
                String::new(),
                format!("{:.17e}", self.alias_mass[i]),
                if self.aliasing[i] { "aliasing".into() } else { String::new() },
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Fits `‖f_λ‖_{B^{p,q}_s}` over the λ ≥ 1 and λ ≤ 1 parts of `lambdas`;
/// aliased points are left out of the fits.
pub fn besov_dilation_check(
    f: &AnalyticSignal,
    e: ExponentPair,
    s: f64,
    lambdas: &[f64],
    opts: &GridOptions,
) -> Result<BesovDilation> {
    let d = f.dim as f64;
    let runs = lambdas
        .iter()
        .map(|&l| besov_norm_signal(&signal::dilate(f, l)?, e, s, opts))
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<f64> = runs.iter().map(|b| b.value).collect();
    let aliasing: Vec<bool> = runs.iter().map(|b| b.aliasing).collect();
    let fit = |keep: &dyn Fn(f64) -> bool| -> Option<FitResult> {
        let (l, v): (Vec<f64>, Vec<f64>) = lambdas
            .iter()
            .zip(&norms)
            .zip(&aliasing)
            .filter(|((l, _), a)| keep(**l) && !**a)
            .map(|((l, v), _)| (*l, *v))
            .unzip();
        fit_loglog(&l, &v).ok()
    };
    let base = -d * e.inv_p;
    Ok(BesovDilation {
        p: format_exponent(e.p()),
        q: format_exponent(e.q()),
        s,
        lambdas: lambdas.to_vec(),
        ge1: fit(&|l| l >= 1.0),
        le1: fit(&|l| l <= 1.0),
        alias_mass: runs.iter().map(|b| b.alias_mass).collect(),
        grid_n: runs.iter().map(|b| b.grid_n).collect(),
        half_width: runs.iter().map(|b| b.half_width).collect(),
        norms,
        aliasing,
        envelope: (base + s.min(0.0), base + s.max(0.0)),
    })
}

// ---------------------------------------------------------------------------
// corpus

/// Version tag of the embedding corpus.
pub const CORPUS_VERSION: &str = "v1";
/// Seed of the random coefficients in the versioned corpus.
pub const CORPUS_SEED: u64 = 20_100_701;

fn named(mut f: AnalyticSignal, name: &str) -> AnalyticSignal {
    f.descriptor = Descriptor::named(name);
    f
}

fn gauss_atom(c: Complex64, x: f64, w: f64, scale: f64) -> Atom {
    Atom {
        coef: c,
        base: Base::Gaussian,
        scale,
        center: [x, 0.0],
        freq: [w, 0.0],
    }
}

/// The 20-signal d = 1 corpus: Gaussians, translates and modulates, bumps,
/// lattice sums, their dilates at λ ∈ [1/8, 8] and random wave packets.
pub fn corpus(seed: u64) -> Vec<AnalyticSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coef = |rng: &mut ChaCha8Rng| {
        Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..std::f64::consts::TAU))
    };
    let phi = AnalyticSignal::gaussian(1);
    let dil = |f: &AnalyticSignal, l: f64| signal::dilate(f, l).expect("positive dilation");
    let mut out = vec![named(phi.clone(), "gauss")];
    for l in [0.125, 0.25, 0.5, 2.0, 4.0, 8.0] {
        out.push(named(dil(&phi, l), &format!("gauss_dil_{l}")));
    }
    out.push(named(signal::translate(&phi, &[3.0]), "gauss_T3"));
    out.push(named(signal::modulate(&phi, &[2.0]), "gauss_M2"));
    out.push(named(
        signal::modulate(&signal::translate(&phi, &[1.5]), &[-3.0]),
        "gauss_M-3_T1.5",
    ));
    out.push(named(signal::modulate(&dil(&phi, 0.5), &[4.0]), "gauss_dil_0.5_M4"));
    out.push(named(AnalyticSignal::bump(1), "bump"));
    out.push(named(dil(&AnalyticSignal::bump(1), 0.25), "bump_dil_0.25"));
    out.push(named(AnalyticSignal::band_bump(1), "band_bump"));
    let tsum: Vec<Atom> = (-4..=4).map(|k| gauss_atom(coef(&mut rng), 2.0 * k as f64, 0.0, 1.0)).collect();
    let tsum = AnalyticSignal::new(1, tsum, Descriptor::named("lattice_T")).expect("atoms");
    let msum: Vec<Atom> = (-4..=4).map(|l| gauss_atom(coef(&mut rng), 0.0, l as f64, 1.0)).collect();
    let msum = AnalyticSignal::new(1, msum, Descriptor::named("lattice_M")).expect("atoms");
    let psum: Vec<Atom> = (-3..=3)
        .map(|k| {
            let mut a = gauss_atom(coef(&mut rng), k as f64, k as f64, 1.0);
            a.base = Base::Bump;
            a
        })
        .collect();
    let psum = AnalyticSignal::new(1, psum, Descriptor::named("lattice_MT_psi")).expect("atoms");
    out.push(named(dil(&tsum, 4.0), "lattice_T_dil_4"));
    out.push(named(dil(&msum, 0.25), "lattice_M_dil_0.25"));
    out.push(tsum);
    out.push(msum);
    out.push(psum);
    let packets: Vec<Atom> = (0..3)
        .map(|_| {
            let c = coef(&mut rng);
            gauss_atom(c, rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(0.5..2.0))
        })
        .collect();
    out.push(AnalyticSignal::new(1, packets, Descriptor::named("wave_packets")).expect("atoms"));
    out
}

// ---------------------------------------------------------------------------
// embeddings

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    BesovIntoMod,
    ModIntoBesov,
}

/// `B^{p,q}_s` and `M^{p₂,q₂}` paired in one embedding statement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    pub label: &'static str,
    pub direction: Direction,
    pub besov: ExponentPair,
    pub s: f64,
    pub modulation: ExponentPair,
}

impl EmbeddingConfig {
    /// Checks the parameter region of the theorem behind `label`.
    pub fn validate(&self) -> Result<()> {
        let d = 1.0;
        let (ip, s) = (self.besov.inv_p, self.s);
        let fail = |what: &str| Err(Error::Precondition(format!("{}: requires {what}", self.label)));
        let same = self.besov == self.modulation;
        match self.label {
            "incl_i" => {
                if !same || self.direction != Direction::BesovIntoMod {
                    return fail("B^{p,q}_s into M^{p,q}");
                }
                if s < d * crate::index::nu1(self.besov)? - 1e-12 {
                    return fail("s >= d nu1(p,q)");
                }
            }
            "incl_ii" => {
                if !same || self.direction != Direction::ModIntoBesov {
                    return fail("M^{p,q} into B^{p,q}_s");
                }
                if s > d * crate::index::nu2(self.besov)? + 1e-12 {
                    return fail("s <= d nu2(p,q)");
                }
            }
            "besov_mp" => {
                let m = self.modulation;
                if ip < 0.5 || m.inv_p != ip || m.inv_q != ip {
                    return fail("1 <= p <= 2 and target M^{p,p}");
                }
                let crit = d * (2.0 * ip - 1.0);
                let ok = (s >= crit - 1e-12 && self.besov.inv_q >= ip) || s > crit;
                if !ok {
                    return fail("s >= d(1/p-1/p') with q <= p, or s > d(1/p-1/p')");
                }
            }
            "besov_mpp" => {
                let m = self.modulation;
                if m.inv_p != ip || (m.inv_q - (1.0 - ip)).abs() > 1e-15 {
                    return fail("target M^{p,p'}");
                }
                let ok = if ip >= 0.5 { s > 0.0 } else { s > d * (1.0 - 2.0 * ip) };
                if !ok {
                    return fail("s > 0 (p <= 2) or s > d(1/p'-1/p) (p >= 2)");
                }
            }
            other => return Err(Error::InvalidParameter(format!("unknown embedding '{other}'"))),
        }
        Ok(())
    }
}

fn pair(p: f64, q: f64) -> ExponentPair {
    ExponentPair::new(p, q).expect("static exponents")
}

/// Three sample points per embedding theorem.
pub fn embedding_samples() -> Vec<EmbeddingConfig> {
    use Direction::*;
    let inf = f64::INFINITY;
    let c = |label, direction, b: ExponentPair, s, m: ExponentPair| EmbeddingConfig {
        label,
        direction,
        besov: b,
        s,
        modulation: m,
    };
    vec![
        c("incl_i", BesovIntoMod, pair(2.0, 2.0), 0.0, pair(2.0, 2.0)),
        c("incl_i", BesovIntoMod, pair(1.0, 1.0), 1.0, pair(1.0, 1.0)),
        c("incl_ii", ModIntoBesov, pair(1.0, inf), -1.0, pair(1.0, inf)),
        c("besov_mp", BesovIntoMod, pair(2.0, 2.0), 0.0, pair(2.0, 2.0)),
        c("besov_mp", BesovIntoMod, pair(1.0, 1.0), 1.0, pair(1.0, 1.0)),
        c("besov_mp", BesovIntoMod, pair(1.5, 1.0), 1.0 / 3.0, pair(1.5, 1.5)),
        c("besov_mpp", BesovIntoMod, pair(2.0, inf), 0.5, pair(2.0, 2.0)),
        c("besov_mpp", BesovIntoMod, pair(1.0, 1.0), 0.5, pair(1.0, inf)),
        c("besov_mpp", BesovIntoMod, pair(4.0, 2.0), 0.6, pair(4.0, 4.0 / 3.0)),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub label: String,
    pub direction: Direction,
    pub besov_p: String,
    pub besov_q: String,
    pub s: f64,
    pub mod_p: String,
    pub mod_q: String,
    /// `‖f‖_target / ‖f‖_source` per corpus entry.
    pub ratios: Vec<f64>,
    pub names: Vec<String>,
    pub max_ratio: f64,
    pub median_ratio: f64,
    /// `max ≤ bound_factor · median`.
    pub bounded: bool,
}

/// Ratios `‖f‖_target/‖f‖_source` over the corpus; bounded when no ratio
/// exceeds `bound_factor` times the median.
pub fn embedding_check(
    cfg: &EmbeddingConfig,
    corpus: &[AnalyticSignal],
    bound_factor: f64,
) -> Result<EmbeddingReport> {
    cfg.validate()?;
    let opts = NormOptions::default();
    let spec = NormSpec::new(cfg.modulation, WeightSpec::unweighted());
    let ratios = corpus
        .iter()
        .map(|f| {
            let m = stft::mod_norms_continuous(f, &[spec], &opts)?[0];
            let b = besov_norm_signal(f, cfg.besov, cfg.s, &opts.grid_opts)?.value;
            Ok(match cfg.direction {
                Direction::BesovIntoMod => m / b,
                Direction::ModIntoBesov => b / m,
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.is_empty() {
        f64::NAN
    } else if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let max = sorted.last().copied().unwrap_or(f64::NAN);
    Ok(EmbeddingReport {
        label: cfg.label.to_string(),
        direction: cfg.direction,
        besov_p: format_exponent(cfg.besov.p()),
        besov_q: format_exponent(cfg.besov.q()),
        s: cfg.s,
        mod_p: format_exponent(cfg.modulation.p()),
        mod_q: format_exponent(cfg.modulation.q()),
        names: corpus.iter().map(|f| f.descriptor.family.clone()).collect(),
        ratios,
        max_ratio: max,
        median_ratio: median,
        bounded: max.is_finite() && max <= bound_factor * median,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ep(p: f64, q: f64) -> ExponentPair {
        ExponentPair::new(p, q).unwrap()
    }

    fn grid() -> GridSpec {
        GridSpec::new(1, 1024, 8.0).unwrap()
    }

    #[test]
    fn partition_of_unity_and_support() {
        let part = DyadicPartition::for_grid(&grid());
        assert_eq!(part.nyquist, 32.0);
        for i in 0..4000 {
            let r = i as f64 * part.nyquist / 4000.0;
            let sum: f64 = (0..part.blocks()).map(|j| part.theta(j, r)).sum();
            assert!((sum - 1.0).abs() < 1e-12, "r={r}: {sum}");
            for j in 1..part.blocks() {
                let t = part.theta(j, r);
                assert!(t >= -1e-15);
                let lo = 2f64.powi(j as i32 - 1);
                if r < lo || (j < part.top && r > 1.5 * 2f64.powi(j as i32)) {
                    assert_eq!(t, 0.0, "θ_{j}({r})");
                }
            }
        }
    }

    #[test]
    fn blocks_reconstruct() {
        let f = signal::sample(&signal::modulate(&AnalyticSignal::gaussian(1), &[5.0]), &grid()).unwrap();
        let part = DyadicPartition::for_grid(&f.grid);
        let pieces = blocks(&f, &part).unwrap();
        let mut err = 0.0;
        let mut tot = 0.0;
        for i in 0..f.values.len() {
            let s: Complex64 = pieces.iter().map(|b| b.values[i]).sum();
            err += (s - f.values[i]).norm_sqr();
            tot += f.values[i].norm_sqr();
        }
        assert!((err / tot).sqrt() < 1e-8);
    }

    #[test]
    fn single_block_signal() {
        // band-limited bump of band < 1/2 lives in θ₀ only: norm = ‖f‖_p for any s,
        // up to the truncated tail of ψ̌ on the finite grid
        let f = signal::dilate(&AnalyticSignal::band_bump(1), 1.0).unwrap();
        let g = signal::sample(&f, &GridSpec::new(1, 4096, 64.0).unwrap()).unwrap();
        let part = DyadicPartition::for_grid(&g.grid);
        for s in [-1.0, 0.0, 2.0] {
            let b = besov_norm(&g, ep(2.0, 1.0), s, &part).unwrap();
            let l2 = signal::lp_norm(&g, 2.0, 0.0);
            assert!((b.value - l2).abs() < 1e-7 * l2, "s={s}: {} vs {l2}", b.value);
        }
    }

    #[test]
    fn l2_center_point() {
        // ‖f‖²_{B^{2,2}_0} = ∫ Σθ_j² |f̂|² and ½ ≤ Σθ_j² ≤ 1, so the ratio to ‖f‖₂
        // lies in [2^{-1/2}, 1]; block overlaps cost up to 5% on this corpus
        for f in corpus(CORPUS_SEED) {
            let g = signal::sample_auto(&f, &GridOptions::default()).unwrap();
            let part = DyadicPartition::for_grid(&g.grid);
            let b = besov_norm(&g, ep(2.0, 2.0), 0.0, &part).unwrap().value;
            let r = b / signal::lp_norm(&g, 2.0, 0.0);
            assert!(r >= 0.5f64.sqrt() && r <= 1.0 + 1e-9, "{}: {r}", f.descriptor.family);
            assert!(r > 0.95, "{}: {r}", f.descriptor.family);
        }
    }

    #[test]
    fn gaussian_sobolev_oracle() {
        // H¹ norm from the closed form of φ̂: ∫ (1+ξ²) e^{-2πξ²} dξ = 2^{-1/2}(1 + 1/(4π))
        let h1 = (2f64.powf(-0.5) * (1.0 + 1.0 / (4.0 * PI))).sqrt();
        let b = besov_norm_signal(&AnalyticSignal::gaussian(1), ep(2.0, 2.0), 1.0, &GridOptions::default())
            .unwrap()
            .value;
        assert!((b / h1 - 1.0).abs() < 0.05, "{b} vs {h1}");
    }

    #[test]
    fn monotone_in_s() {
        let f = signal::modulate(&AnalyticSignal::gaussian(1), &[6.0]);
        let mut prev = 0.0;
        for s in [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
            let v = besov_norm_signal(&f, ep(1.0, 2.0), s, &GridOptions::default()).unwrap().value;
            assert!(v >= prev * (1.0 - 1e-12), "s={s}");
            prev = v;
        }
    }

    #[test]
    fn aliasing_flagged() {
        let f = signal::modulate(&AnalyticSignal::gaussian(1), &[30.0]);
        let g = signal::sample(&f, &GridSpec::new(1, 1024, 8.0).unwrap());
        // the sampler refuses the footprint outright, or the norm flags it
        if let Ok(g) = g {
            let part = DyadicPartition::for_grid(&g.grid);
            assert!(besov_norm(&g, ep(2.0, 2.0), 0.0, &part).unwrap().aliasing);
        }
        let ok = besov_norm_signal(&AnalyticSignal::gaussian(1), ep(2.0, 2.0), 0.0, &GridOptions::default()).unwrap();
        assert!(!ok.aliasing);
    }

    #[test]
    fn wrong_partition_rejected() {
        let f = signal::sample(&AnalyticSignal::gaussian(1), &grid()).unwrap();
        let part = DyadicPartition::for_grid(&GridSpec::new(1, 2048, 8.0).unwrap());
        assert!(matches!(besov_norm(&f, ep(2.0, 2.0), 0.0, &part), Err(Error::Precondition(_))));
    }

    #[test]
    fn dilation_unweighted_gaussian() {
        let l = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
        let r = besov_dilation_check(&AnalyticSignal::gaussian(1), ep(2.0, 2.0), 0.0, &l, &GridOptions::default())
            .unwrap();
        assert!((r.ge1.unwrap().slope + 0.5).abs() < 0.1, "{r:?}");
        assert!((r.le1.unwrap().slope + 0.5).abs() < 0.1, "{r:?}");
    }

    #[test]
    fn corpus_is_versioned() {
        let a = corpus(CORPUS_SEED);
        let b = corpus(CORPUS_SEED);
        assert_eq!(a.len(), 20);
        assert_eq!(a, b);
        assert_ne!(a, corpus(CORPUS_SEED + 1));
    }

    #[test]
    fn embedding_samples_in_region() {
        for c in embedding_samples() {
            c.validate().unwrap();
        }
        let mut bad = embedding_samples()[0];
        bad.s = -0.5;
        assert!(bad.validate().is_err());
    }
}
