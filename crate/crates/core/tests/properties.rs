use dilab_core::besov::{besov_norm, DyadicPartition};
use dilab_core::index::{ExponentPair, WeightSpec};
use dilab_core::lab::fit_loglog;
use dilab_core::pde::{energy, propagate_state, CauchyData, Equation, State};
use dilab_core::signal::{self, AnalyticSignal, GridSpec, SampledSignal};
use dilab_core::stft::{mod_norm_continuous, NormOptions};
use num_complex::Complex64;
use proptest::prelude::*;

fn packet(x0: f64, w0: f64, scale: f64, c: (f64, f64)) -> AnalyticSignal {
    let g = signal::dilate(&AnalyticSignal::gaussian(1), scale).unwrap();
    signal::modulate(&signal::translate(&g, &[x0]), &[w0]).scaled(Complex64::new(c.0, c.1))
}

fn packet_strategy() -> impl Strategy<Value = AnalyticSignal> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.5..2.0f64, (0.2..1.5f64, -1.0..1.0f64))
        .prop_map(|(x, w, s, c)| packet(x, w, s, c))
}

fn l2(f: &SampledSignal) -> f64 {
    signal::lp_norm(f, 2.0, 0.0)
}

fn exponent_strategy() -> impl Strategy<Value = ExponentPair> {
    prop_oneof![Just(0.0), Just(0.25), Just(0.5), Just(1.0)]
        .prop_flat_map(|x| (Just(x), prop_oneof![Just(0.0), Just(0.5), Just(1.0)]))
        .prop_map(|(x, y)| ExponentPair::from_reciprocals(x, y).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dft_round_trip_and_plancherel(f in packet_strategy()) {
        let g = GridSpec::new(1, 512, 16.0).unwrap();
        let s = signal::sample(&f, &g).unwrap();
        let fh = signal::dft(&s).unwrap();
        let back = signal::idft(&fh).unwrap();
        let err = s.values.iter().zip(&back.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
        prop_assert!((l2(&s) - l2(&fh)).abs() < 1e-12 * l2(&s).max(1.0));
    }

    #[test]
    fn dilation_scales_l2(lambda in 0.5..4.0f64) {
        let g = GridSpec::new(1, 2048, 32.0).unwrap();
        let phi = AnalyticSignal::gaussian(1);
        let a = l2(&signal::sample(&phi, &g).unwrap());
        let b = l2(&signal::sample(&signal::dilate(&phi, lambda).unwrap(), &g).unwrap());
        prop_assert!((b / a - lambda.powf(-0.5)).abs() < 1e-6);
    }

    #[test]
    fn modulation_norm_homogeneous(f in packet_strategy(), c in 0.1..10.0f64, e in exponent_strategy()) {
        let opts = NormOptions::default();
        let w = WeightSpec::unweighted();
        let a = mod_norm_continuous(&f, e, w, &opts).unwrap();
        let b = mod_norm_continuous(&f.clone().scaled(Complex64::new(0.0, c)), e, w, &opts).unwrap();
        prop_assert!((b / (c * a) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn modulation_norm_triangle(f in packet_strategy(), g in packet_strategy(), e in exponent_strategy()) {
        let opts = NormOptions::default();
        let w = WeightSpec::new(0.5, -0.5).unwrap();
        let a = mod_norm_continuous(&f, e, w, &opts).unwrap();
        let b = mod_norm_continuous(&g, e, w, &opts).unwrap();
        let s = mod_norm_continuous(&f.plus(&g).unwrap(), e, w, &opts).unwrap();
        prop_assert!(s <= (a + b) * (1.0 + 1e-9));
    }

    #[test]
    fn unweighted_norm_shift_invariant(f in packet_strategy(), x0 in -3.0..3.0f64, w0 in -3.0..3.0f64, e in exponent_strategy()) {
        let opts = NormOptions::default();
        let w = WeightSpec::unweighted();
        let a = mod_norm_continuous(&f, e, w, &opts).unwrap();
        let moved = signal::modulate(&signal::translate(&f, &[x0]), &[w0]);
        let b = mod_norm_continuous(&moved, e, w, &opts).unwrap();
        prop_assert!((b / a - 1.0).abs() < 0.02, "{a} {b}");
    }

    #[test]
    fn besov_norm_monotone_in_s(f in packet_strategy(), s in -1.0..1.0f64, ds in 0.05..1.0f64) {
        let g = GridSpec::new(1, 1024, 16.0).unwrap();
        let x = signal::sample(&f, &g).unwrap();
        let part = DyadicPartition::for_grid(&g);
        let e = ExponentPair::new(2.0, 1.0).unwrap();
        let lo = besov_norm(&x, e, s, &part).unwrap().value;
        let hi = besov_norm(&x, e, s + ds, &part).unwrap().value;
        prop_assert!(lo <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn propagation_conserves_energy(f in packet_strategy(), g in packet_strategy(), t in 0.0..8.0f64, plate in any::<bool>()) {
        let grid = GridSpec::new(1, 2048, 64.0).unwrap();
        let eq = if plate { Equation::Plate } else { Equation::Wave };
        let u0 = signal::sample(&f, &grid).unwrap();
        let u1 = signal::sample(&g, &grid).unwrap();
        let e0 = energy(&State { u: u0.clone(), ut: u1.clone() }, eq).unwrap();
        let st = propagate_state(&CauchyData::new(u0, u1, eq).unwrap(), t).unwrap();
        prop_assert!((energy(&st, eq).unwrap() / e0 - 1.0).abs() < 1e-8);
    }
}

proptest! {
    #[test]
    fn power_laws_fit_exactly(a in -3.0..3.0f64, c in 0.01..100.0f64, lo in -6i32..0, len in 4usize..10) {
        let xs: Vec<f64> = (0..len).map(|k| 2f64.powi(lo + k as i32)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| c * x.powf(a)).collect();
        let fit = fit_loglog(&xs, &ys).unwrap();
        prop_assert!((fit.slope - a).abs() < 1e-10);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-9);
        prop_assert!(fit.max_residual < 1e-9);
    }
}
