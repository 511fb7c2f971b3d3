//! The identity and inequality suite.
//!
//! Each function runs one family of checks and returns [`CheckReport`]s.
//! For identity checks `worst_ratio` is the worst measured error divided by
//! its tolerance; for inequality checks it is the worst `lhs / rhs`.

use crate::continuation::{
    check_decay, check_lipschitz, default_sigma_grid, figure1_dataset, figure1_sigma_grid, ordinal_curves,
    trace_branch, CheckReport, CheckStatus, TraceOptions,
};
use crate::determinants::{neumann_det, BallProblem, BoundaryKind};
use crate::error::Result;
use crate::ritz::{est_conv_constant, ritz_upper_bounds, ritz_values, TrialBasis};
use crate::roots::{first_roots, scan_roots, DEFAULT_Z_STEP};
use crate::special_fn::{ultraspherical_bundle, CrossProducts};
use crate::spectrum::{assemble_spectrum, DEFAULT_L_MAX};

pub const IDENTITY_TOL: f64 = 1e-8;
pub const COLLAPSE_TOL: f64 = 1e-8;
pub const COINCIDENCE_TOL: f64 = 1e-8;
pub const GRID_TOL: f64 = 1e-9;
pub const SANDWICH_GAP: f64 = 0.05;
/// Relative slack for comparing two independently converged eigenvalues.
const ROOT_SLACK: f64 = 1e-10;

pub const IDENTITY_Z: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];
pub const COLLAPSE_LAMBDA: (f64, f64) = (1e-2, 1e5);
pub const COLLAPSE_POINTS: usize = 200;
/// Scan window for the first eight positive ordinals at every `sigma`.
pub const ORDINAL_WINDOW: f64 = 5000.0;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn status(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

/// Running maximum with the location where it occurred.
#[derive(Default)]
struct Worst {
    value: f64,
    at: Option<f64>,
}

impl Worst {
    fn see(&mut self, value: f64, at: f64) {
        if self.at.is_none() || value > self.value || value.is_nan() {
            self.value = if value.is_nan() { f64::INFINITY } else { value };
            self.at = Some(at);
        }
    }

    fn report(self, check: &str, tol: f64) -> CheckReport {
        let ratio = self.value / tol;
        CheckReport { check: check.into(), status: status(ratio <= 1.0), worst_ratio: ratio, location: self.at }
    }
}

/// The six cross products, computed from the bundle, against their closed
/// forms; `l <= 6`, `z` in [`IDENTITY_Z`].
pub fn identity_suite(n: usize) -> Result<CheckReport> {
    let mut worst = Worst::default();
    for l in 0..=6 {
        for &z in &IDENTITY_Z {
            let direct = CrossProducts::from_bundle(&ultraspherical_bundle(n, l, z)?);
            let closed = CrossProducts::closed_form(n, l, z)?;
            for k in 0..6 {
                worst.see(rel(direct.0[k], closed.0[k]), z);
            }
        }
    }
    Ok(worst.report(&format!("cross_product_identities N={n}"), IDENTITY_TOL))
}

pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points).map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp()).collect()
}

/// `det M(lambda, 1) = -lambda^(5/4) (j_l i_l' - i_l j_l')` on a log grid of
/// `lambda`, `l <= 8`. The error is measured against the size of the largest
/// term of the identity, which stays meaningful where both sides vanish.
pub fn collapse_suite(n: usize) -> Result<CheckReport> {
    let mut worst = Worst::default();
    for l in 0..=8 {
        for lambda in log_grid(COLLAPSE_LAMBDA.0, COLLAPSE_LAMBDA.1, COLLAPSE_POINTS) {
            let det = neumann_det(n, l, lambda, 1.0)?.value_scaled;
            let z = lambda.sqrt().sqrt();
            let b = ultraspherical_bundle(n, l, z)?;
            let z5 = z.powi(5);
            let short = -z5 * (b.j[0] * b.i_scaled[1] - b.i_scaled[0] * b.j[1]);
            let scale = (z5 * b.j[0] * b.i_scaled[1]).abs().max((z5 * b.i_scaled[0] * b.j[1]).abs());
            worst.see((det - short).abs() / scale.max(short.abs()), lambda);
        }
    }
    Ok(worst.report(&format!("sigma_one_collapse N={n}"), COLLAPSE_TOL))
}

/// First `count` positive roots of the `sigma = 1` free plate against the
/// clamped plate, `l <= l_max`.
pub fn coincidence_suite(n: usize, l_max: usize, count: usize) -> Result<CheckReport> {
    let free = BallProblem::neumann(n, 1.0)?;
    let clamped = BallProblem::dirichlet(n)?;
    let mut worst = Worst::default();
    for l in 0..=l_max {
        let a = first_roots(&free, l, count, DEFAULT_Z_STEP)?;
        let b = first_roots(&clamped, l, count, DEFAULT_Z_STEP)?;
        if a.len() != count || b.len() != count {
            worst.see(f64::INFINITY, l as f64);
            continue;
        }
        for (x, y) in a.iter().zip(&b) {
            worst.see(rel(x.lambda, y.lambda), y.lambda);
        }
    }
    Ok(worst.report(&format!("free_clamped_coincidence N={n}"), COINCIDENCE_TOL))
}

/// Ordinals of the first eight positive eigenvalues.
pub fn positive_ordinals(n: usize) -> std::ops::RangeInclusive<usize> {
    n + 2..=n + 9
}

/// Decay of the first eight positive ordinal curves: the tail factor test on
/// each, and (for `N = 2`) `lambda_j(sigma) <= C_j (1 - sigma)` at every grid point.
pub fn decay_suite(n: usize) -> Result<Vec<CheckReport>> {
    let grid = default_sigma_grid();
    let curves = ordinal_curves(n, positive_ordinals(n), &grid, ORDINAL_WINDOW, DEFAULT_Z_STEP)?;
    let mut out = Vec::new();
    for c in &curves {
        out.push(check_decay(&c.samples).report(format!("decay N={n} j={}", c.j)));
    }
    if n == 2 {
        let mut worst = 0.0_f64;
        let mut at = None;
        for c in &curves {
            let cj = est_conv_constant(c.j);
            for s in &c.samples {
                let r = s.lambda / (cj * (1.0 - s.sigma));
                if r > worst || at.is_none() {
                    worst = worst.max(r);
                    at = Some(s.sigma);
                }
            }
        }
        out.push(CheckReport {
            check: "eq1_ceiling N=2".into(),
            status: status(worst <= 1.0 + ROOT_SLACK),
            worst_ratio: worst,
            location: at,
        });
    }
    Ok(out)
}

/// Lipschitz bounds on the two lowest branches of each family `l <= 5` and
/// on the first eight positive ordinal curves.
pub fn lipschitz_suite(n: usize) -> Result<Vec<CheckReport>> {
    let grid = default_sigma_grid();
    let opts = TraceOptions { lambda_max: 20000.0, z_step: DEFAULT_Z_STEP };
    let mut out = Vec::new();
    let mut worst = 0.0_f64;
    let mut at = None;
    let mut violations = 0;
    for l in 0..=5 {
        for ordinal in 1..=2 {
            let b = trace_branch(BoundaryKind::Neumann, n, l, ordinal, &grid, &opts)?;
            let rep = check_lipschitz(n, &b.samples);
            violations += rep.violations;
            if rep.worst_ratio > worst || at.is_none() {
                worst = worst.max(rep.worst_ratio);
                at = rep.location;
            }
            if b.samples.len() != grid.len() {
                violations += 1;
            }
        }
    }
    out.push(CheckReport {
        check: format!("lipschitz_branches N={n}"),
        status: status(violations == 0),
        worst_ratio: worst,
        location: at,
    });
    for c in ordinal_curves(n, positive_ordinals(n), &grid, ORDINAL_WINDOW, DEFAULT_Z_STEP)? {
        out.push(check_lipschitz(n, &c.samples).report(format!("lipschitz N={n} j={}", c.j)));
    }
    Ok(out)
}

/// Relative Ritz-minus-determinant gap for ordinals `1..=count` at `sigma`.
pub fn ritz_gaps(sigma: f64, m_max: usize, count: usize) -> Result<Vec<f64>> {
    let det = assemble_spectrum(&BallProblem::neumann(2, sigma)?, 2000.0, DEFAULT_L_MAX, count, DEFAULT_Z_STEP)?
        .ordinal_values();
    let ritz = ritz_upper_bounds(&TrialBasis::polynomial(8, m_max), sigma, count)?;
    Ok(det
        .iter()
        .zip(&ritz)
        .map(|(&d, &r)| if d == 0.0 { r.abs() } else { (r - d) / d })
        .collect())
}

/// Determinant eigenvalues bounded by Ritz values, with the gap shrinking as
/// the basis grows and small at `m_max = 6`.
pub fn sandwich_suite() -> Result<Vec<CheckReport>> {
    let count = 8;
    let mut bound = CheckReport {
        check: "ritz_upper_bound N=2".into(),
        status: CheckStatus::Pass,
        worst_ratio: 0.0,
        location: None,
    };
    let mut shrink = CheckReport { check: "ritz_gap_shrinks N=2".into(), ..bound.clone() };
    let mut small = CheckReport { check: "ritz_gap_small N=2".into(), ..bound.clone() };
    for sigma in [0.0, 0.3, 0.7] {
        let gaps: Vec<Vec<f64>> = [2, 4, 6].iter().map(|&m| ritz_gaps(sigma, m, count)).collect::<Result<_>>()?;
        for g in &gaps {
            for &x in g {
                // negative gap means the bound is violated
                if x < -ROOT_SLACK {
                    bound.status = CheckStatus::Fail;
                }
                if -x > bound.worst_ratio {
                    bound.worst_ratio = -x;
                    bound.location = Some(sigma);
                }
            }
        }
        for w in gaps.windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                if *b > a + ROOT_SLACK {
                    shrink.status = CheckStatus::Fail;
                }
                if *a > 0.0 && b / a > shrink.worst_ratio {
                    shrink.worst_ratio = b / a;
                    shrink.location = Some(sigma);
                }
            }
        }
        for &x in gaps[2].iter().take(6) {
            let r = x / SANDWICH_GAP;
            if r > small.worst_ratio {
                small.worst_ratio = r;
                small.location = Some(sigma);
            }
            if r > 1.0 {
                small.status = CheckStatus::Fail;
            }
        }
    }
    Ok(vec![bound, shrink, small])
}

/// The spectrum starts with exactly `N + 1` zeros; at `N = 2` the Ritz kernel
/// has dimension 3.
pub fn zero_mode_suite(n: usize) -> Result<Vec<CheckReport>> {
    let mut ok = true;
    for sigma in [0.0, 0.5, 0.9] {
        let v = assemble_spectrum(&BallProblem::neumann(n, sigma)?, 5000.0, DEFAULT_L_MAX, n + 2, DEFAULT_Z_STEP)?
            .ordinal_values();
        ok &= v.len() == n + 2 && v[..=n].iter().all(|&x| x == 0.0) && v[n + 1] > 0.0;
    }
    let mut out = vec![CheckReport {
        check: format!("zero_modes N={n}"),
        status: status(ok),
        worst_ratio: if ok { 0.0 } else { 1.0 },
        location: None,
    }];
    if n == 2 {
        let mut ok = true;
        for sigma in [0.0, 0.5, 0.9] {
            let v = ritz_values(&TrialBasis::polynomial(4, 3), sigma)?;
            ok &= v.iter().filter(|&&x| x < 1e-8).count() == 3;
        }
        out.push(CheckReport {
            check: "ritz_kernel N=2".into(),
            status: status(ok),
            worst_ratio: if ok { 0.0 } else { 1.0 },
            location: None,
        });
    }
    Ok(out)
}

pub const FIGURE1_CAP: f64 = 500.0;
pub const FIGURE1_L_MAX: usize = 9;

/// Figure dataset checks: every family present, `lambda(0.99) < lambda(0.5)`
/// on every branch, and branch counts at `sigma = 0.01` against a finer scan.
pub fn figure1_suite() -> Result<Vec<CheckReport>> {
    let grid = figure1_sigma_grid();
    let data = figure1_dataset(2, FIGURE1_CAP, FIGURE1_L_MAX, &grid, DEFAULT_Z_STEP)?;
    let present = (0..=FIGURE1_L_MAX).filter(|&l| data.rows.iter().any(|r| r.l == l)).count();
    let mut out = vec![CheckReport {
        check: "figure1_nonempty".into(),
        status: status(present == FIGURE1_L_MAX + 1),
        worst_ratio: (FIGURE1_L_MAX + 1 - present) as f64,
        location: None,
    }];

    let mut bad = 0usize;
    let mut worst = 0.0_f64;
    let mut at = None;
    for b in &data.branches {
        let (mid, end) = (b.lambda_at(0.5), b.lambda_at(0.99));
        match (mid, end) {
            (Some(m), Some(e)) => {
                if e / m > worst {
                    worst = e / m;
                    at = Some(b.l as f64);
                }
                if e >= m {
                    bad += 1;
                }
            }
            // entered through the cap after 0.5
            (None, Some(_)) => {}
            // left through the cap or was lost
            (Some(_), None) => bad += 1,
            (None, None) => {}
        }
    }
    out.push(CheckReport {
        check: "figure1_branches_descend".into(),
        // only the limit is proven, not monotonicity
        status: if bad == 0 { CheckStatus::Pass } else { CheckStatus::Warn },
        worst_ratio: worst,
        location: at,
    });

    let start = BallProblem::neumann(2, grid[0])?;
    let mut mismatched = 0;
    for l in 0..=FIGURE1_L_MAX {
        let traced = data.branches.iter().filter(|b| b.l == l && b.lambda_at(grid[0]).is_some()).count();
        let scanned = scan_roots(&start, l, FIGURE1_CAP, 0.5 * DEFAULT_Z_STEP)?.len();
        if traced != scanned {
            mismatched += 1;
        }
    }
    out.push(CheckReport {
        check: "figure1_counts_at_0.01".into(),
        status: status(mismatched == 0),
        worst_ratio: mismatched as f64,
        location: Some(grid[0]),
    });
    Ok(out)
}

/// Halving the scan step changes no root count and no root beyond [`GRID_TOL`].
pub fn grid_independence_suite(n: usize) -> Result<CheckReport> {
    let mut problems = vec![BallProblem::dirichlet(n)?];
    for sigma in [0.0, 0.3, 0.7, 0.99, 1.0] {
        problems.push(BallProblem::neumann(n, sigma)?);
    }
    let mut worst = Worst::default();
    for p in &problems {
        for l in 0..=DEFAULT_L_MAX {
            let a = scan_roots(p, l, 5000.0, DEFAULT_Z_STEP)?;
            let b = scan_roots(p, l, 5000.0, 0.5 * DEFAULT_Z_STEP)?;
            if a.len() != b.len() {
                worst.see(f64::INFINITY, l as f64);
                continue;
            }
            for (x, y) in a.iter().zip(&b) {
                worst.see(rel(x.lambda, y.lambda), y.lambda);
            }
        }
    }
    Ok(worst.report(&format!("grid_independence N={n}"), GRID_TOL))
}

/// Everything `ballplate verify --dim n` runs.
pub fn full_suite(n: usize) -> Result<Vec<CheckReport>> {
    let mut out = vec![identity_suite(n)?, collapse_suite(n)?, coincidence_suite(n, 5, 10)?];
    out.extend(decay_suite(n)?);
    out.extend(lipschitz_suite(n)?);
    Ok(out)
}
