use ballplate::continuation::{
    check_decay, default_sigma_grid, ordinal_curves, trace_branch, BranchStatus, CheckStatus, TraceOptions,
};
use ballplate::determinants::{BallProblem, BoundaryKind};
use ballplate::ritz::{ritz_upper_bounds, TrialBasis};
use ballplate::roots::scan_roots;
use ballplate::spectrum::assemble_spectrum;

const MU_1: f64 = 104.363_105_558_844_3;

#[test]
fn finer_grid_gives_the_same_branch() {
    let coarse: Vec<f64> = (0..=20).map(|i| i as f64 * 0.045).collect();
    let fine: Vec<f64> = (0..=40).map(|i| i as f64 * 0.0225).collect();
    let opts = TraceOptions::default();
    for l in 0..=3 {
        let a = trace_branch(BoundaryKind::Neumann, 2, l, 1, &coarse, &opts).unwrap();
        let b = trace_branch(BoundaryKind::Neumann, 2, l, 1, &fine, &opts).unwrap();
        assert_eq!(a.status, BranchStatus::Complete);
        for s in &a.samples {
            let other = b.lambda_at(s.sigma).expect("common sigma");
            assert!((s.lambda - other).abs() <= 1e-9 * other, "l={l} sigma={}", s.sigma);
        }
    }
}

#[test]
fn family_branches_rise_or_fall() {
    // l = 2 descends to zero; l = 0 rises to the first clamped eigenvalue
    let grid = default_sigma_grid();
    let opts = TraceOptions::default();
    let l2 = trace_branch(BoundaryKind::Neumann, 2, 2, 1, &grid, &opts).unwrap();
    let tail: Vec<f64> = l2.samples.iter().filter(|s| s.sigma >= 0.5).map(|s| s.lambda).collect();
    assert!(tail.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(check_decay(&l2.samples).status, CheckStatus::Pass);

    let l0 = trace_branch(BoundaryKind::Neumann, 2, 0, 1, &grid, &opts).unwrap();
    let end = l0.samples.last().unwrap();
    assert!((end.lambda - MU_1).abs() < 0.05 * MU_1);
    assert_eq!(check_decay(&l0.samples).status, CheckStatus::Fail);
}

#[test]
fn ordinal_curves_do_not_approach_clamped_values() {
    let curves = ordinal_curves(2, 4..=11, &default_sigma_grid(), 5000.0, 1e-2).unwrap();
    for c in &curves {
        let last = c.samples.last().unwrap();
        assert_eq!(last.sigma, 0.999);
        assert!(last.lambda < 0.5 * MU_1, "j={} ends at {}", c.j, last.lambda);
    }
}

#[test]
fn ritz_bounds_dominate_the_determinant() {
    for sigma in [0.0, 0.3, 0.7] {
        let det = assemble_spectrum(&BallProblem::neumann(2, sigma).unwrap(), 2000.0, 12, 8, 1e-2)
            .unwrap()
            .ordinal_values();
        for m_max in [2, 4, 6] {
            let ritz = ritz_upper_bounds(&TrialBasis::polynomial(8, m_max), sigma, 8).unwrap();
            for (d, r) in det.iter().zip(&ritz) {
                assert!(*r >= d * (1.0 - 1e-10) - 1e-10, "sigma={sigma} m_max={m_max}: {r} < {d}");
            }
        }
    }
}

#[test]
fn sigma_one_roots_are_clamped_roots() {
    for l in 0..=3 {
        let free = scan_roots(&BallProblem::neumann(2, 1.0).unwrap(), l, 20000.0, 1e-2).unwrap();
        let clamped = scan_roots(&BallProblem::dirichlet(2).unwrap(), l, 20000.0, 1e-2).unwrap();
        assert_eq!(free.len(), clamped.len());
        for (a, b) in free.iter().zip(&clamped) {
            assert!((a.lambda - b.lambda).abs() <= 1e-8 * b.lambda);
        }
    }
}
