use anyhow::{Context, Result};
use serde::Serialize;
use std::fs::File;
use std::io::BufReader;

use dilab_core::besov::{self, EmbeddingReport};
use dilab_core::families::{FamilyName, FamilySpec};
use dilab_core::index::{
    self, classify_region, format_exponent, predicted_law, ExponentPair, Regime, ScalingLaw, SpaceTag,
    WeightSpec,
};
use dilab_core::lab::{self, Backend, CaseOptions, CaseReport, FitResult, Series};
use dilab_core::pde::{self, BoundReport, CauchyData, Datum};
use dilab_core::signal::{self, AnalyticSignal, GridOptions, GridSpec, SampledSignal};
use dilab_core::stft::{self, NormOptions, NormSpec, GABOR_A};

use crate::artifacts::Artifacts;
use crate::{status, BesovArgs, Cli, Command, EmbedArgs, Failure, Global, IndexArgs, NormArgs, PdeArgs};
use crate::{ScalingArgs, Space, VerifyArgs};

pub fn run(cli: &Cli, hash: String) -> Result<u8> {
    let g = &cli.global;
    let mut art = Artifacts::new(&g.out, hash)?;
    let code = match &cli.command {
        Command::Index(a) => index_cmd(a, &mut art)?,
        Command::Norm(a) => norm_cmd(a, g, &mut art)?,
        Command::Scaling(a) => scaling_cmd(a, g, &mut art)?,
        Command::Verify(a) => verify_cmd(a, g, &mut art)?,
        Command::Besov(a) => besov_cmd(a, g, &mut art)?,
        Command::Pde(a) => pde_cmd(a, g, &mut art)?,
        Command::Embed(a) => embed_cmd(a, g, &mut art)?,
    };
    let hash = art.hash().to_string();
    let files = art.finish()?;
    say!("artifacts: {} file(s) in {} (config {})", files.len(), g.out.display(), &hash[..12]);
    Ok(code)
}

fn verdict(pass: bool, flagged: usize) -> u8 {
    match (pass, flagged) {
        (true, _) => status::PASS,
        (false, 0) => status::VERIFICATION,
        (false, _) => status::NUMERICAL,
    }
}

fn word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn fixed_grid(g: &Global, d: usize) -> Result<Option<GridSpec>> {
    match (g.grid_n, g.half_width) {
        (None, None) => Ok(None),
        (Some(n), Some(l)) => Ok(Some(GridSpec::new(d, n, l)?)),
        _ => Err(Failure::Config("--grid-n and --half-width go together".into()).into()),
    }
}

fn norm_options(g: &Global, d: usize) -> Result<NormOptions> {
    Ok(NormOptions {
        grid: fixed_grid(g, d)?,
        ..NormOptions::default()
    })
}

fn pair(p: f64, q: f64) -> Result<ExponentPair> {
    Ok(ExponentPair::new(p, q)?)
}

fn corpus_signal(name: &str, seed: u64) -> Result<AnalyticSignal> {
    let corpus = besov::corpus(seed);
    corpus
        .iter()
        .find(|f| f.descriptor.family == name)
        .cloned()
        .ok_or_else(|| {
            let names: Vec<&str> = corpus.iter().map(|f| f.descriptor.family.as_str()).collect();
            Failure::Config(format!("unknown signal '{name}'; corpus has {}", names.join(", "))).into()
        })
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct IndexReport {
    p: String,
    q: String,
    d: usize,
    mu1: f64,
    mu2: f64,
    nu1: f64,
    nu2: f64,
    regions: Vec<&'static str>,
    duality_residual: (f64, f64),
}

/// Drops the sign of a zero so `−0` prints as `0`.
fn unsigned_zero(x: f64) -> f64 {
    x + 0.0
}

fn index_cmd(a: &IndexArgs, art: &mut Artifacts) -> Result<u8> {
    let e = pair(a.p, a.q)?;
    let r = IndexReport {
        p: format_exponent(e.p()),
        q: format_exponent(e.q()),
        d: a.d,
        mu1: unsigned_zero(index::mu1(e)?),
        mu2: unsigned_zero(index::mu2(e)?),
        nu1: unsigned_zero(index::nu1(e)?),
        nu2: unsigned_zero(index::nu2(e)?),
        regions: classify_region(e).labels(),
        duality_residual: index::duality_check(e)?,
    };
    say!("(p,q) = {e}");
    say!("mu1 = {}  mu2 = {}", r.mu1, r.mu2);
    say!("nu1 = {}  nu2 = {}", r.nu1, r.nu2);
    say!("regions: {}", r.regions.join(" "));
    say!("duality residuals: {:e} {:e}", r.duality_residual.0, r.duality_residual.1);
    art.json("index.json", &r)?;
    Ok(status::PASS)
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct NormReport {
    signal: String,
    lambda: f64,
    p: String,
    q: String,
    t: f64,
    s: f64,
    backend: Backend,
    grid_n: usize,
    half_width: f64,
    norm: f64,
}

fn norm_cmd(a: &NormArgs, g: &Global, art: &mut Artifacts) -> Result<u8> {
    let sp = &a.space;
    let e = pair(sp.p, sp.q)?;
    let w = WeightSpec::new(sp.t, sp.s)?;
    let spec = [NormSpec::new(e, w)];
    let (name, sampled) = match &a.input {
        Some(path) => {
            let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let s = signal::read_csv(BufReader::new(f))?;
            (path.display().to_string(), s)
        }
        None => {
            let f = signal::dilate(&corpus_signal(&a.signal, g.seed)?, a.lambda)?;
            let opts = norm_options(g, f.dim)?;
            let grid = opts.grid_for(&f)?;
            (a.signal.clone(), signal::sample(&f, &grid)?)
        }
    };
    let norm = match g.backend {
        Backend::Continuous => stft::mod_norms_sampled(&sampled, &spec, None)?[0],
        Backend::Frame => stft::mod_norms_frame_sampled(&sampled, &spec, GABOR_A)?[0],
    };
    let r = NormReport {
        signal: name,
        lambda: a.lambda,
        p: format_exponent(e.p()),
        q: format_exponent(e.q()),
        t: sp.t,
        s: sp.s,
        backend: g.backend,
        grid_n: sampled.grid.n,
        half_width: sampled.grid.half_width,
        norm,
    };
    say!(
        "{} (lambda={}) in M^{{{},{}}}_{{{},{}}} [{}]: {:.10e}",
        r.signal, r.lambda, r.p, r.q, r.t, r.s, r.backend, r.norm
    );
    art.json("norm.json", &r)?;
    Ok(status::PASS)
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ScalingReport {
    family: FamilyName,
    law: ScalingLaw,
    fit: FitResult,
    ratio_fit: FitResult,
    tolerance: f64,
    failed_points: usize,
    pass: bool,
}

fn space_tag(sp: &Space) -> Result<SpaceTag> {
    match (sp.t != 0.0, sp.s != 0.0) {
        (_, false) => Ok(SpaceTag::ModSpaceTime),
        (false, true) => Ok(SpaceTag::ModFreq),
        (true, true) => Ok(SpaceTag::ModBoth),
    }
}

fn scaling_cmd(a: &ScalingArgs, g: &Global, art: &mut Artifacts) -> Result<u8> {
    let sp = &a.space;
    let e = pair(sp.p, sp.q)?;
    let w = WeightSpec::new(sp.t, sp.s)?;
    let name: FamilyName = a.family.parse()?;
    let spec = FamilySpec::new(name, e, sp.t, sp.s)?;
    let regime = name.regime().unwrap_or(match a.lambda_hi {
        Some(hi) if hi <= 1.0 => Regime::LambdaLE1,
        _ => Regime::LambdaGE1,
    });
    let lambdas = match (a.lambda_lo, a.lambda_hi) {
        (None, None) => lab::default_grid(regime),
        (lo, hi) => {
            let def = lab::default_grid(regime);
            lab::lambda_grid(lo.unwrap_or(def[0]), hi.unwrap_or(def[def.len() - 1]))?
        }
    };
    let tag = space_tag(sp)?;
    let law = predicted_law(tag, w, e, regime, spec.d)?;
    let opts = norm_options(g, spec.d)?;
    let sweep = lab::sweep_norm(&spec, tag, w, e, &lambdas, g.backend, &opts)?;
    art.csv("sweep.csv", |b| sweep.write_csv(b))?;
    let (xs, ys) = sweep.series(Series::Dilated);
    let rows: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
    art.plot("sweep", &format!("{name} in M^{{{},{}}}", format_exponent(e.p()), format_exponent(e.q())), ("lambda", "norm"), &rows, true)?;
    let fit = lab::fit_slope(&sweep, Series::Dilated, None)?;
    let ratio_fit = lab::fit_slope(&sweep, Series::Ratio, None)?;
    let tol = g.tol.unwrap_or(0.15);
    let pass = ratio_fit.slope >= law.lower_exponent - tol && ratio_fit.slope <= law.upper_exponent + tol;
    let r = ScalingReport {
        family: name,
        law,
        fit,
        ratio_fit,
        tolerance: tol,
        failed_points: sweep.failed_points(),
        pass,
    };
    say!("family {name}  (p,q)={e}  t={} s={}  regime {regime}  backend {}", sp.t, sp.s, g.backend);
    say!(
        "predicted slope interval [{:.4}, {:.4}]  fitted {:.4} (ratio {:.4}, max residual {:.2e})  {}",
        law.lower_exponent,
        law.upper_exponent,
        fit.slope,
        ratio_fit.slope,
        ratio_fit.max_residual,
        word(pass)
    );
    art.json("scaling.json", &r)?;
    Ok(verdict(pass, r.failed_points))
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CaseSummary {
    case_id: String,
    verdict: lab::Verdict,
    variants: Vec<VariantSummary>,
}

#[derive(Serialize)]
struct VariantSummary {
    family: FamilyName,
    predicted_exponent: f64,
    fitted_slope: f64,
    ratio_slope: f64,
    max_residual: f64,
    sharp_margin: f64,
    upper_margin: f64,
    pass: bool,
}

fn verify_cmd(a: &VerifyArgs, g: &Global, art: &mut Artifacts) -> Result<u8> {
    let ids: Vec<String> = if a.all {
        lab::CASES.iter().map(|c| c.id.to_string()).collect()
    } else {
        a.cases.clone()
    };
    let mut opts = CaseOptions {
        backend: g.backend,
        norm: norm_options(g, 1)?,
        ..CaseOptions::default()
    };
    if let Some(t) = g.tol {
        opts.tol.lattice = t;
    }
    let mut summary = Vec::new();
    let mut flagged = 0;
    say!("{:<10} {:<22} {:>9} {:>9} {:>8} {:>8}  verdict", "case", "family", "sharp", "fitted", "m_sharp", "m_upper");
    for id in &ids {
        let rep: CaseReport = lab::verify_case(id, &opts)?;
        for v in &rep.variants {
            flagged += v.sweep.failed_points();
            say!(
                "{:<10} {:<22} {:>9.4} {:>9.4} {:>8.4} {:>8.4}  {}",
                rep.case_id,
                v.family.to_string(),
                v.predicted_exponent,
                v.fit.slope,
                v.sharp_margin,
                v.upper_margin,
                word(v.pass)
            );
            let stem = format!("sweep_{}_{}", rep.case_id, v.family.as_str().to_ascii_lowercase());
            art.csv(&format!("{stem}.csv"), |b| v.sweep.write_csv(b))?;
            let (xs, ys) = v.sweep.series(Series::Dilated);
            let rows: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
            art.plot(&stem, &format!("{} {}", rep.case_id, v.family), ("lambda", "norm"), &rows, true)?;
        }
        say!("{:<10} => {:?}", rep.case_id, rep.verdict);
        art.json(&format!("verify_{}.json", rep.case_id), &rep)?;
        summary.push(CaseSummary {
            case_id: rep.case_id.clone(),
            verdict: rep.verdict,
            variants: rep
                .variants
                .iter()
                .map(|v| VariantSummary {
                    family: v.family,
                    predicted_exponent: v.predicted_exponent,
                    fitted_slope: v.fit.slope,
                    ratio_slope: v.ratio_fit.slope,
                    max_residual: v.fit.max_residual,
                    sharp_margin: v.sharp_margin,
                    upper_margin: v.upper_margin,
                    pass: v.pass,
                })
                .collect(),
        });
    }
    let pass = summary
        .iter()
        .all(|c| matches!(c.verdict, lab::Verdict::Pass | lab::Verdict::VerifiedViaDual));
    art.json("verify_summary.json", &summary)?;
    Ok(verdict(pass, flagged))
}

// ---------------------------------------------------------------------------

fn besov_cmd(a: &BesovArgs, g: &Global, art: &mut Artifacts) -> Result<u8> {
    let e = pair(a.p, a.q)?;
    let f = corpus_signal(&a.signal, g.seed)?;
    let lambdas = lab::lambda_grid(a.lambda_lo, a.lambda_hi)?;
    let rep = besov::besov_dilation_check(&f, e, a.s, &lambdas, &GridOptions::default())?;
    let tol = g.tol.unwrap_or(0.15);
    let pass = (rep.ge1.is_some() || rep.le1.is_some()) && rep.within(tol);
    art.csv("besov.csv", |b| rep.write_csv(b))?;
    let rows: Vec<(f64, f64)> = rep.lambdas.iter().copied().zip(rep.norms.iter().copied()).collect();
    art.plot("besov", &format!("{} in B^{{{},{}}}_{}", a.signal, rep.p, rep.q, a.s), ("lambda", "norm"), &rows, true)?;
    #[derive(Serialize)]
    struct Out<'a> {
        signal: &'a str,
        tolerance: f64,
        pass: bool,
        dilation: &'a besov::BesovDilation,
    }
    art.json(
        "besov.json",
        &Out {
            signal: &a.signal,
            tolerance: tol,
            pass,
            dilation: &rep,
        },
    )?;
    let slope = |f: Option<FitResult>| f.map_or("n/a".to_string(), |f| format!("{:.4}", f.slope));
    say!("{} in B^{{{},{}}}_{}: envelope [{:.4}, {:.4}] +- {tol}", a.signal, rep.p, rep.q, a.s, rep.envelope.0, rep.envelope.1);
    say!(
        "slope lambda>=1: {}  lambda<=1: {}  aliased points: {}  {}",
        slope(rep.ge1),
        slope(rep.le1),
        rep.aliasing.iter().filter(|x| **x).count(),
        word(pass)
    );
    let flagged = rep.aliasing.iter().filter(|x| **x).count();
    Ok(verdict(pass, flagged))
}

// ---------------------------------------------------------------------------

fn pde_cmd(a: &PdeArgs, g: &Global, art: &mut Artifacts) -> Result<u8> {
    let sp = &a.space;
    let e = pair(sp.p, sp.q)?;
    let w = WeightSpec::new(sp.t, sp.s)?;
    if !(a.dt > 0.0 && a.t_max > a.fit_from) {
        return Err(Failure::Config("need dt > 0 and t-max > fit-from".into()).into());
    }
    let grid = match fixed_grid(g, 1)? {
        Some(gr) => gr,
        None => {
            let l = pde::domain_half_width(a.equation, a.t_max);
            GridSpec::new(1, (32.0 * l) as usize, l)?
        }
    };
    let gauss = signal::sample(&AnalyticSignal::gaussian(1), &grid)?;
    let zero = SampledSignal::zeros(grid);
    let (u0, u1) = match a.datum {
        Datum::U0 => (gauss, zero),
        Datum::U1 => (zero, gauss),
        Datum::Mixed => (gauss.clone(), gauss),
    };
    let data = CauchyData::new(u0, u1, a.equation)?;
    let steps = (a.t_max / a.dt).round() as usize;
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * a.dt).collect();
    let series = pde::growth_track(&data, e, w, &times, None)?;
    let tol = g.tol.unwrap_or(0.3);
    let rep: BoundReport = pde::bound_check(&series, a.datum, 1, (a.fit_from, a.t_max), tol)?;
    art.csv("growth.csv", |b| series.write_csv(b))?;
    let rows: Vec<(f64, f64)> = series.times.iter().copied().zip(series.norms.iter().copied()).collect();
    art.plot("growth", &format!("{} {:?}", a.equation, a.datum), ("t", "norm"), &rows, false)?;
    let logs: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(_, n)| *n > 0.0)
        .map(|(t, n)| ((1.0 + t).ln(), n.ln()))
        .collect();
    art.plot("growth_log", &format!("{} {:?} log-log", a.equation, a.datum), ("log(1+t)", "log norm"), &logs, false)?;
    art.json("pde.json", &rep)?;
    say!(
            "{} datum {:?} in M^{{{},{}}}: growth exponent {:.4} (C = {:.4e}) vs bound {} + {tol}; {} flagged; {}",
            a.equation,
            a.datum,
            series.p,
            series.q,
            rep.fit.slope,
            rep.constant,
            rep.bound_exponent,
            rep.excluded_flagged,
            word(rep.pass)
        );
    Ok(verdict(rep.pass, rep.excluded_flagged))
}

// ---------------------------------------------------------------------------

fn embed_cmd(a: &EmbedArgs, g: &Global, art: &mut Artifacts) -> Result<u8> {
    let corpus = besov::corpus(g.seed);
    let configs: Vec<_> = besov::embedding_samples()
        .into_iter()
        .filter(|c| a.label.as_deref().is_none_or(|l| l == c.label))
        .collect();
    if configs.is_empty() {
        return Err(Failure::Config(format!("no embedding labelled {:?}", a.label)).into());
    }
    let mut reports: Vec<EmbeddingReport> = Vec::new();
    say!("{:<10} {:<22} {:<14} {:>10} {:>10}  bounded", "theorem", "besov", "modulation", "median", "max");
    for c in &configs {
        let r = besov::embedding_check(c, &corpus, a.factor)?;
        say!(
            "{:<10} {:<22} {:<14} {:>10.4} {:>10.4}  {}",
            r.label,
            format!("B^({},{})_{:.3}", r.besov_p, r.besov_q, r.s),
            format!("M^({},{})", r.mod_p, r.mod_q),
            r.median_ratio,
            r.max_ratio,
            word(r.bounded)
        );
        reports.push(r);
    }
    let mut csv = String::from("label,besov_p,besov_q,s,mod_p,mod_q,signal,ratio\n");
    for r in &reports {
        for (n, v) in r.names.iter().zip(&r.ratios) {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{:.17e}\n",
                r.label, r.besov_p, r.besov_q, r.s, r.mod_p, r.mod_q, n, v
            ));
        }
    }
    art.csv("embed.csv", |b| {
        b.extend_from_slice(csv.as_bytes());
        Ok(())
    })?;
    art.json("embed.json", &reports)?;
    let pass = reports.iter().all(|r| r.bounded);
    Ok(verdict(pass, 0))
}
