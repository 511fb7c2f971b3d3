use ballplate::continuation::{check_lipschitz, CheckStatus, Sample};
use ballplate::determinants::{det2, neumann_matrix_from, BallProblem};
use ballplate::ritz::{ritz_values, TrialBasis};
use ballplate::roots::scan_roots;
use ballplate::special_fn::ultraspherical_bundle;
use ballplate::spectrum::assemble_spectrum;
use ballplate::{BesselBundle, Error};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn scaling_never_changes_the_sign(n in 2usize..5, l in 0usize..7, z in 0.05f64..6.0, sigma in 0.0f64..=1.0) {
        let b = ultraspherical_bundle(n, l, z).unwrap();
        let scaled = BallProblem::neumann(n, sigma).unwrap().eval_at(l, z).unwrap();
        let raw = det2(&neumann_matrix_from(&BesselBundle { i_scaled: b.i_unscaled(), ..b }, sigma));
        prop_assume!(scaled.equilibrated.abs() > 1e-10);
        prop_assert_eq!(scaled.equilibrated > 0.0, scaled.value_scaled > 0.0);
        prop_assert_eq!(scaled.value_scaled > 0.0, raw > 0.0);
    }

    #[test]
    fn halving_the_step_keeps_every_root(n in 2usize..4, l in 0usize..5, sigma in 0.0f64..=1.0) {
        let p = BallProblem::neumann(n, sigma).unwrap();
        let a = scan_roots(&p, l, 3000.0, 1e-2).unwrap();
        let b = scan_roots(&p, l, 3000.0, 5e-3).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.lambda - y.lambda).abs() <= 1e-9 * y.lambda);
        }
    }

    #[test]
    fn spectrum_is_ordered_and_contiguous(n in 2usize..5, sigma in 0.0f64..1.0, count in 1usize..25) {
        // at least 25 eigenvalues lie below 5000 for N <= 4
        let s = match assemble_spectrum(&BallProblem::neumann(n, sigma).unwrap(), 5000.0, 12, count, 1e-2) {
            Err(Error::LMaxTooSmall { .. }) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert!(s.complete);
        prop_assert_eq!(s.total(), count);
        let mut next = 1;
        for w in s.entries.windows(2) {
            prop_assert!(w[0].lambda <= w[1].lambda);
        }
        for e in &s.entries {
            prop_assert_eq!(e.j_first, next);
            prop_assert_eq!(e.j_last + 1 - e.j_first, e.multiplicity);
            next = e.j_last + 1;
        }
        let zeros = s.ordinal_values().iter().filter(|&&x| x == 0.0).count();
        prop_assert_eq!(zeros, count.min(n + 1));
    }

    #[test]
    fn enlarging_the_basis_lowers_ritz_values(
        l_max in 1usize..5, m_max in 0usize..4, dl in 0usize..3, dm in 0usize..3, sigma in 0.0f64..0.99,
    ) {
        let small = ritz_values(&TrialBasis::polynomial(l_max, m_max), sigma).unwrap();
        let large = ritz_values(&TrialBasis::polynomial(l_max + dl, m_max + dm), sigma).unwrap();
        for (a, b) in large.iter().zip(&small) {
            prop_assert!(*a <= b + 1e-10 * b.max(1.0));
        }
    }

    #[test]
    fn lipschitz_check_is_scale_invariant(
        values in prop::collection::vec(0.1f64..100.0, 2..30), scale in 0.01f64..100.0,
    ) {
        let samples: Vec<Sample> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| Sample { sigma: i as f64 / 40.0, lambda: v, residual: 0.0 })
            .collect();
        let scaled: Vec<Sample> = samples.iter().map(|s| Sample { lambda: s.lambda * scale, ..*s }).collect();
        let a = check_lipschitz(2, &samples);
        let b = check_lipschitz(2, &scaled);
        prop_assert!((a.worst_ratio - b.worst_ratio).abs() <= 1e-9 * a.worst_ratio.max(1.0));
        if a.worst_ratio < 0.999 || a.worst_ratio > 1.001 {
            prop_assert_eq!(a.status, b.status);
        }
        prop_assert_eq!(a.status == CheckStatus::Pass, a.violations == 0);
    }
}
