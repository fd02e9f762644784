use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use densecode::search::objective;
use densecode::{lambda_gram, message_state, verify_family, EncodingFamily64, SchmidtSpectrum64, UnitaryMatrix64};

fn spectrum_strategy() -> impl Strategy<Value = SchmidtSpectrum64> {
    (2usize..=5).prop_flat_map(|d| prop::collection::vec(0.01f64..1.0, d)).prop_map(|mut w| {
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        w.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let drift = 1.0 - w.iter().sum::<f64>();
        w[0] += drift;
        SchmidtSpectrum64::new(w).unwrap()
    })
}

fn unitaries(d: usize, n: usize, seed: u64) -> Vec<UnitaryMatrix64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| UnitaryMatrix64::random(d, &mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_matches_message_state_overlap(s in spectrum_strategy(), seed in any::<u64>()) {
        let u = unitaries(s.d(), 2, seed);
        let a = message_state(&u[0], &s).unwrap();
        let b = message_state(&u[1], &s).unwrap();
        let inner: Complex<f64> = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum();
        let g = lambda_gram(&u[0], &u[1], &s).unwrap();
        prop_assert!((inner - g).norm() <= 1e-12);
        prop_assert!((a.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn objective_invariant_under_common_transforms(s in spectrum_strategy(), seed in any::<u64>(), phases in prop::collection::vec(0.0f64..6.3, 5)) {
        let d = s.d();
        let mut members = unitaries(d, 4, seed);
        let base = objective(&EncodingFamily64::new(s.clone(), members.clone()).unwrap());
        let v = unitaries(d, 1, seed ^ 0x5a5a)[0].clone();
        let dg = UnitaryMatrix64::diagonal_phases(&phases[..d]);
        for m in members.iter_mut() {
            *m = v.mul(m).unwrap().mul(&dg).unwrap();
        }
        let moved = objective(&EncodingFamily64::new(s, members).unwrap());
        prop_assert!((base - moved).abs() <= 1e-12);
    }

    #[test]
    fn verification_is_unchanged_by_relabeling(s in spectrum_strategy(), seed in any::<u64>()) {
        let members = unitaries(s.d(), 3, seed);
        let mut reversed = members.clone();
        reversed.reverse();
        let a = verify_family(&EncodingFamily64::new(s.clone(), members).unwrap(), 1e-9);
        let b = verify_family(&EncodingFamily64::new(s, reversed).unwrap(), 1e-9);
        prop_assert!((a.worst_residual - b.worst_residual).abs() <= 1e-15);
        prop_assert_eq!(a.passed, b.passed);
    }
}
