mod common;

use common::*;
use dephasing_core::single_qubit::{dephase, non_markovianity_single_auto, scaled_non_markovianity, SingleQubitKraus};
use dephasing_core::two_qubit::{
    apply_kraus, bell_chsh, concurrence, concurrence_wootters, dephase_two, non_markovianity_two_auto, two_qubit_kraus,
};
use dephasing_core::{build, MaxNorm, NoiseParams};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params() -> impl Strategy<Value = NoiseParams> {
    (0.2f64..5.0, 0.1f64..5.0, 0.2f64..5.0, -1.0f64..=1.0)
        .prop_map(|(eta, ratio, kappa, a0)| NoiseParams::new(eta, eta * ratio, kappa, a0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coherence_is_contractive(p in params(), x in 0.0f64..1.0) {
        let df = build(&p);
        let t = x * 40.0 / p.eta();
        prop_assert!(df.evaluate(t).norm() <= 1.0 + 1e-9);
    }

    #[test]
    fn spectral_sums_are_real(p in params(), x in 0.0f64..1.0) {
        let df = build(&p);
        let t = x * 20.0 / p.eta();
        let mut re = Complex64::new(0.0, 0.0);
        let mut im = Complex64::new(0.0, 0.0);
        for term in df.terms() {
            let e = (term.root * t).exp();
            let poly = |c: &[Complex64]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, v| acc * t + v);
            re += poly(&term.real) * e;
            im += poly(&term.imag) * e;
        }
        prop_assert!(re.im.abs() < 1e-10 && im.im.abs() < 1e-10);
    }

    #[test]
    fn residue_identities_hold(p in params()) {
        let ids = build(&p).residue_identities();
        let chi = p.chi();
        prop_assert!((ids.sum_real - 1.0).norm() < 1e-11);
        prop_assert!(ids.sum_imag.norm() < 1e-11);
        prop_assert!(ids.moment_real.norm() < 1e-9 * chi);
        prop_assert!((ids.moment_imag - p.a0() * chi).norm() < 1e-9 * chi);
    }

    #[test]
    fn roots_are_stable(p in params()) {
        prop_assert!(build(&p).roots().iter().all(|r| r.re <= 1e-12));
    }

    #[test]
    fn initial_decay_rate_vanishes(p in params()) {
        let rates = build(&p).rates(0.0).unwrap();
        prop_assert!(rates.gamma.abs() < 1e-9 * p.chi());
    }

    #[test]
    fn channel_equals_kraus(p in params(), x in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let df = build(&p);
        let d = df.evaluate(x * 20.0 / p.eta());
        let s1 = random_single_state(&mut rng);
        prop_assert!((SingleQubitKraus::new(d).apply(s1.matrix()) - dephase(&s1, d).matrix()).max_norm() < 1e-12);
        let s2 = random_two_state(&mut rng);
        prop_assert!((apply_kraus(&two_qubit_kraus(d), s2.matrix()) - dephase_two(&s2, d).matrix()).max_norm() < 1e-12);
    }

    #[test]
    fn x_structure_is_preserved(p in params(), x in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_x_state(&mut rng);
        let out = dephase_two(&s, build(&p).evaluate(x * 20.0 / p.eta()));
        prop_assert!(out.is_x_structured(1e-14));
        prop_assert!((concurrence(&out) - concurrence_wootters(&out)).abs() < 1e-10);
    }

    #[test]
    fn measures_are_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_two_state(&mut rng);
        let c = concurrence(&s);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        prop_assert!(bell_chsh(&s) <= 2.0 * 2f64.sqrt() + 1e-9);
    }

    #[test]
    fn scaled_measure_in_unit_interval(n in 0.0f64..1e6) {
        let s = scaled_non_markovianity(n).unwrap();
        prop_assert!((0.0..1.0).contains(&s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn measures_are_ordered(p in params()) {
        let df = build(&p);
        let ns = non_markovianity_single_auto(&df, 1e-9).unwrap();
        let nt = non_markovianity_two_auto(&df, 1e-9).unwrap();
        prop_assert!(ns >= 0.0 && nt >= 0.0);
        if ns > 1e-8 {
            prop_assert!(2.0 * ns - nt > 1e-10, "N_S = {}, N_T = {}", ns, nt);
        }
    }
}

#[test]
fn memoryless_weak_coupling_rate_is_nonnegative() {
    for a0 in [-1.0, -0.3, 0.0, 0.5, 1.0] {
        let df = build(&NoiseParams::memoryless(1.0, 0.8, a0).unwrap());
        for t in grid(30.0, 3001) {
            assert!(df.rates(t).unwrap().gamma >= -1e-10, "a0={a0} t={t}");
        }
    }
}
