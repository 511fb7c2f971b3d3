//! Eigenvalue branches `sigma -> lambda(sigma)` and the inequalities they obey.
//!
//! Two kinds of curves are followed:
//!
//! - per-family branches: one root of `det M(lambda, sigma)` for fixed `l`,
//!   continued by linear prediction and a bracketing search in `z`;
//! - ordinal curves: `sigma -> lambda_j(sigma)`, the `j`-th entry of the
//!   ordered spectrum at each `sigma`.
//!
//! Every fixed ordinal `lambda_j` tends to zero as `sigma -> 1`. Individual
//! family branches need not: the `l = 0` and `l = 1` branches, for instance,
//! rise towards clamped-plate eigenvalues. Nothing here assumes monotonicity.

use serde::Serialize;

use crate::determinants::{BallProblem, BoundaryKind};
use crate::error::{domain, Error, Result};
use crate::roots::{refine_bracket, scan_roots, RootRecord, DEFAULT_Z_STEP, Z_MIN};
use crate::special_fn::Z_MAX;
use crate::spectrum::{assemble_spectrum, DEFAULT_L_MAX};

/// Relative half-widths (in `z`) of the successive search windows.
const WINDOWS: [f64; 3] = [0.02, 0.08, 0.32];
const MIN_SUBINTERVALS: usize = 16;
/// Two roots closer than this (relative) are the same root.
const SAME_ROOT_REL: f64 = 1e-7;
/// Allowed factor between `lambda/(1-sigma)` on the tail and at `sigma = 0.9`.
pub const DECAY_FACTOR: f64 = 3.0;
pub const DECAY_TAIL_START: f64 = 0.9;
pub const DECAY_REQUIRED_SIGMA: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub sigma: f64,
    pub lambda: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchStatus {
    Complete,
    Lost,
    MergedWindow,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub n: usize,
    pub l: usize,
    pub kind: BoundaryKind,
    /// Root ordinal within the family at the starting `sigma` (1-based). In
    /// figure datasets it is the order of appearance within the family.
    pub branch_ordinal: usize,
    pub samples: Vec<Sample>,
    pub status: BranchStatus,
}

impl Branch {
    pub fn lambda_at(&self, sigma: f64) -> Option<f64> {
        self.samples.iter().find(|s| (s.sigma - sigma).abs() < 1e-12).map(|s| s.lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Window for locating the starting root.
    pub lambda_max: f64,
    pub z_step: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { lambda_max: 500.0, z_step: DEFAULT_Z_STEP }
    }
}

/// `0, 0.01, ..., 0.99` followed by the tail point `0.999`.
pub fn default_sigma_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=99).map(|i| i as f64 / 100.0).collect();
    grid.push(0.999);
    grid
}

/// `0.01, 0.02, ..., 0.99`.
pub fn figure1_sigma_grid() -> Vec<f64> {
    (1..=99).map(|i| i as f64 / 100.0).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return domain("sigma grid is empty");
    }
    if grid.iter().any(|s| !(0.0..1.0).contains(s)) {
        return domain("sigma grid must lie in [0, 1)");
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("sigma grid must be strictly increasing");
    }
    Ok(())
}

fn problem_for(kind: BoundaryKind, n: usize, sigma: f64) -> Result<BallProblem> {
    match kind {
        BoundaryKind::Neumann => BallProblem::neumann(n, sigma),
        BoundaryKind::Dirichlet => BallProblem::dirichlet(n),
    }
}

/// `d lambda / d sigma` along the root curve through `(sigma, lambda)`, from
/// `F(z, sigma) = 0` with central differences of the equilibrated determinant.
fn tangent_slope(kind: BoundaryKind, n: usize, l: usize, s: &Sample) -> Result<f64> {
    if kind == BoundaryKind::Dirichlet {
        return Ok(0.0);
    }
    let z = s.lambda.sqrt().sqrt();
    let f = |z: f64, sigma: f64| -> Result<f64> { Ok(BallProblem::neumann(n, sigma)?.eval_at(l, z)?.equilibrated) };
    let hz = 1e-6 * z;
    let f_z = (f(z + hz, s.sigma)? - f(z - hz, s.sigma)?) / (2.0 * hz);
    let (lo, hi) = ((s.sigma - 1e-6).max(0.0), (s.sigma + 1e-6).min(1.0));
    let f_s = (f(z, hi)? - f(z, lo)?) / (hi - lo);
    if f_z == 0.0 || !f_z.is_finite() || !f_s.is_finite() {
        return Ok(0.0);
    }
    Ok(-4.0 * z * z * z * f_s / f_z)
}

/// Linear prediction of `lambda` at `sigma`: secant through the last two
/// samples, or the tangent at a lone sample. Falls back to half the last
/// value when the line crosses zero.
fn predict(kind: BoundaryKind, n: usize, l: usize, samples: &[Sample], sigma: f64) -> Result<f64> {
    let (last, slope) = match samples {
        [] => unreachable!("prediction needs a sample"),
        [only] => (only, tangent_slope(kind, n, l, only)?),
        [.., a, b] => (b, (b.lambda - a.lambda) / (b.sigma - a.sigma)),
    };
    let p = last.lambda + slope * (sigma - last.sigma);
    Ok(if p > 0.0 { p } else { 0.5 * last.lambda })
}

/// Root of the family nearest to `z_pred`, searched in growing windows.
/// The flag is set when the accepting window held more than one root.
fn continue_root(
    problem: &BallProblem,
    l: usize,
    z_pred: f64,
    z_step: f64,
) -> Result<Option<(RootRecord, bool)>> {
    for w in WINDOWS {
        let lo = (z_pred * (1.0 - w)).max(Z_MIN);
        let hi = (z_pred * (1.0 + w)).min(Z_MAX);
        if hi <= lo {
            continue;
        }
        let pieces = MIN_SUBINTERVALS.max(((hi - lo) / z_step).ceil() as usize);
        let h = (hi - lo) / pieces as f64;
        let mut prev = (lo, problem.eval_at(l, lo)?.equilibrated);
        let mut changes = Vec::new();
        for k in 1..=pieces {
            let z = if k == pieces { hi } else { lo + k as f64 * h };
            let cur = (z, problem.eval_at(l, z)?.equilibrated);
            if (prev.1 < 0.0) != (cur.1 < 0.0) {
                changes.push((prev, cur));
            }
            prev = cur;
        }
        let Some(&(a, b)) = changes.iter().min_by(|x, y| {
            let dx = (0.5 * (x.0 .0 + x.1 .0) - z_pred).abs();
            let dy = (0.5 * (y.0 .0 + y.1 .0) - z_pred).abs();
            dx.total_cmp(&dy)
        }) else {
            continue;
        };
        return Ok(Some((refine_bracket(problem, l, a, b)?, changes.len() > 1)));
    }
    Ok(None)
}

fn sample_of(sigma: f64, r: &RootRecord) -> Sample {
    Sample { sigma, lambda: r.lambda, residual: r.residual }
}

/// Follows the `ordinal`-th root (1-based) of family `l` along `grid`.
pub fn trace_branch(
    kind: BoundaryKind,
    n: usize,
    l: usize,
    ordinal: usize,
    grid: &[f64],
    opts: &TraceOptions,
) -> Result<Branch> {
    check_grid(grid)?;
    let start = problem_for(kind, n, grid[0])?;
    let roots = scan_roots(&start, l, opts.lambda_max, opts.z_step)?;
    let first = ordinal
        .checked_sub(1)
        .and_then(|i| roots.get(i))
        .ok_or(Error::StartingRootMissing { l, ordinal, sigma: grid[0] })?;

    let mut branch = Branch {
        n,
        l,
        kind,
        branch_ordinal: ordinal,
        samples: vec![sample_of(grid[0], first)],
        status: BranchStatus::Complete,
    };
    for &sigma in &grid[1..] {
        let problem = problem_for(kind, n, sigma)?;
        let z_pred = predict(kind, n, l, &branch.samples, sigma)?.sqrt().sqrt();
        match continue_root(&problem, l, z_pred, opts.z_step)? {
            Some((root, merged)) => {
                if merged {
                    branch.status = BranchStatus::MergedWindow;
                }
                branch.samples.push(sample_of(sigma, &root));
            }
            None => {
                branch.status = BranchStatus::Lost;
                break;
            }
        }
    }
    Ok(branch)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Warn,
    Inconclusive,
}

/// Serialized as `{check, status, worst_ratio, location}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: CheckStatus,
    pub worst_ratio: f64,
    /// `sigma` at which the worst ratio occurs.
    pub location: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayReport {
    pub status: CheckStatus,
    /// `sup lambda/(1 - sigma)` over all samples.
    pub sup_ratio: f64,
    /// `lambda/(1 - sigma)` at the last sample.
    pub tail_ratio: f64,
    /// `lambda/(1 - sigma)` at the first sample with `sigma >= 0.9`.
    pub base_ratio: f64,
    /// Largest tail ratio divided by `base_ratio`.
    pub worst_ratio: f64,
    pub location: f64,
}

impl DecayReport {
    pub fn report(&self, check: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            status: self.status,
            worst_ratio: self.worst_ratio,
            location: Some(self.location),
        }
    }
}

/// `lambda(sigma) <= C (1 - sigma)` in operational form: over `sigma >= 0.9`
/// the ratio `lambda/(1-sigma)` stays within [`DECAY_FACTOR`] of its value
/// at the start of the tail.
pub fn check_decay(samples: &[Sample]) -> DecayReport {
    let ratio = |s: &Sample| s.lambda / (1.0 - s.sigma);
    let sup = samples.iter().map(ratio).fold(0.0, f64::max);
    let tail = samples.last().map_or(f64::NAN, ratio);
    let reaches = samples.iter().any(|s| s.sigma >= DECAY_REQUIRED_SIGMA - 1e-12);
    let base = samples.iter().find(|s| s.sigma >= DECAY_TAIL_START - 1e-12);
    let (Some(base), true) = (base, reaches) else {
        return DecayReport {
            status: CheckStatus::Inconclusive,
            sup_ratio: sup,
            tail_ratio: tail,
            base_ratio: f64::NAN,
            worst_ratio: f64::NAN,
            location: f64::NAN,
        };
    };
    let base_ratio = ratio(base);
    let (worst_ratio, location) = samples
        .iter()
        .filter(|s| s.sigma >= base.sigma)
        .map(|s| (ratio(s) / base_ratio, s.sigma))
        .fold((0.0, base.sigma), |acc, x| if x.0 > acc.0 { x } else { acc });
    DecayReport {
        status: if worst_ratio <= DECAY_FACTOR { CheckStatus::Pass } else { CheckStatus::Fail },
        sup_ratio: sup,
        tail_ratio: tail,
        base_ratio,
        worst_ratio,
        location,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzReport {
    pub status: CheckStatus,
    /// Adjacent pairs meeting `(1+N)|s1 - s2| < 1 - min(s1, s2)`.
    pub pairs_global: usize,
    /// Adjacent pairs with both `sigma` in `(1/2, 1)`.
    pub pairs_refined: usize,
    pub violations: usize,
    /// Largest `|lambda_1 - lambda_2| / bound` over all checked pairs.
    pub worst_ratio: f64,
    pub location: Option<f64>,
}

impl LipschitzReport {
    pub fn report(&self, check: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            status: self.status,
            worst_ratio: self.worst_ratio,
            location: self.location,
        }
    }
}

/// Checks, on adjacent samples, `|dl| <= (1+N) l(s_min)/(1-s_min) |ds|` where
/// applicable and, for `s > 1/2`, the sharper bound without the `(1+N)`.
pub fn check_lipschitz(n: usize, samples: &[Sample]) -> LipschitzReport {
    let mut rep = LipschitzReport {
        status: CheckStatus::Pass,
        pairs_global: 0,
        pairs_refined: 0,
        violations: 0,
        worst_ratio: 0.0,
        location: None,
    };
    let factor = 1.0 + n as f64;
    for w in samples.windows(2) {
        let (a, b) = if w[0].sigma <= w[1].sigma { (w[0], w[1]) } else { (w[1], w[0]) };
        let ds = b.sigma - a.sigma;
        let dl = (b.lambda - a.lambda).abs();
        let slope = a.lambda / (1.0 - a.sigma);
        // root-level floating noise
        let slack = 1e-10 * a.lambda.max(b.lambda);
        let mut bounds = Vec::new();
        if factor * ds < 1.0 - a.sigma {
            rep.pairs_global += 1;
            bounds.push(factor * slope * ds);
        }
        if a.sigma > 0.5 && b.sigma < 1.0 {
            rep.pairs_refined += 1;
            bounds.push(slope * ds);
        }
        for bound in bounds {
            let r = if bound > 0.0 { dl / bound } else if dl > 0.0 { f64::INFINITY } else { 0.0 };
            if r > rep.worst_ratio || rep.location.is_none() {
                rep.worst_ratio = rep.worst_ratio.max(r);
                if r >= rep.worst_ratio {
                    rep.location = Some(a.sigma);
                }
            }
            if dl > bound + slack {
                rep.violations += 1;
            }
        }
    }
    if rep.violations > 0 {
        rep.status = CheckStatus::Fail;
    }
    rep
}

/// `sigma -> lambda_j(sigma)` for one ordinal `j` of the full spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrdinalCurve {
    pub n: usize,
    pub j: usize,
    pub samples: Vec<Sample>,
}

/// Ordinal curves `j in ordinals` of the free-plate spectrum on `grid`.
pub fn ordinal_curves(
    n: usize,
    ordinals: std::ops::RangeInclusive<usize>,
    grid: &[f64],
    lambda_max: f64,
    z_step: f64,
) -> Result<Vec<OrdinalCurve>> {
    check_grid(grid)?;
    let count = *ordinals.end();
    let mut curves: Vec<OrdinalCurve> =
        ordinals.clone().map(|j| OrdinalCurve { n, j, samples: Vec::new() }).collect();
    for &sigma in grid {
        let spec = assemble_spectrum(&BallProblem::neumann(n, sigma)?, lambda_max, DEFAULT_L_MAX, count, z_step)?;
        if !spec.complete {
            return domain(format!(
                "lambda_max = {lambda_max} holds only {} ordinals at sigma = {sigma}",
                spec.total()
            ));
        }
        for c in curves.iter_mut() {
            let lambda = spec.lambda(c.j).expect("complete spectrum");
            c.samples.push(Sample { sigma, lambda, residual: 0.0 });
        }
    }
    Ok(curves)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure1Row {
    pub n: usize,
    pub l: usize,
    pub branch: usize,
    pub sigma: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Data {
    pub rows: Vec<Figure1Row>,
    /// Canonical order: by `l`, then branch label.
    pub branches: Vec<Branch>,
}

/// Every branch of every family `l <= l_max` that enters
/// `(sigma, lambda) in grid x (0, lambda_cap)`.
///
/// Existing branches are continued from one grid point to the next; a full
/// scan at each `sigma` starts a new branch for any root below the cap not
/// already accounted for (a branch descending into the window). A branch
/// leaving the window through the cap is closed.
pub fn figure1_dataset(
    n: usize,
    lambda_cap: f64,
    l_max: usize,
    grid: &[f64],
    z_step: f64,
) -> Result<Figure1Data> {
    check_grid(grid)?;
    let mut branches = Vec::new();
    for l in 0..=l_max {
        let mut active: Vec<Branch> = Vec::new();
        let mut done: Vec<Branch> = Vec::new();
        let mut next_label = 1;
        for (k, &sigma) in grid.iter().enumerate() {
            let problem = BallProblem::neumann(n, sigma)?;
            let mut still = Vec::new();
            for mut b in active.drain(..) {
                let z_pred = predict(BoundaryKind::Neumann, n, l, &b.samples, sigma)?.sqrt().sqrt();
                match continue_root(&problem, l, z_pred, z_step)? {
                    Some((root, merged)) if root.lambda < lambda_cap => {
                        if merged {
                            b.status = BranchStatus::MergedWindow;
                        }
                        b.samples.push(sample_of(sigma, &root));
                        still.push(b);
                    }
                    Some(_) => done.push(b),
                    None => {
                        b.status = BranchStatus::Lost;
                        done.push(b);
                    }
                }
            }
            // two branches landing on one root: keep the first
            let mut kept: Vec<Branch> = Vec::new();
            for mut b in still {
                let lam = b.samples.last().expect("sample").lambda;
                let clash = kept.iter().any(|o| {
                    (o.samples.last().expect("sample").lambda - lam).abs() <= SAME_ROOT_REL * lam
                });
                if clash {
                    b.samples.pop();
                    b.status = BranchStatus::MergedWindow;
                    done.push(b);
                } else {
                    kept.push(b);
                }
            }
            for root in scan_roots(&problem, l, lambda_cap, z_step)? {
                let known = kept.iter().any(|b| {
                    let s = b.samples.last().expect("sample");
                    s.sigma == sigma && (s.lambda - root.lambda).abs() <= SAME_ROOT_REL * root.lambda
                });
                if !known {
                    kept.push(Branch {
                        n,
                        l,
                        kind: BoundaryKind::Neumann,
                        branch_ordinal: next_label,
                        samples: vec![sample_of(sigma, &root)],
                        status: BranchStatus::Complete,
                    });
                    next_label += 1;
                }
            }
            active = kept;
            if k + 1 == grid.len() {
                done.append(&mut active);
            }
        }
        done.sort_by_key(|b| b.branch_ordinal);
        branches.extend(done);
    }
    let rows = branches
        .iter()
        .flat_map(|b| {
            b.samples.iter().map(move |s| Figure1Row {
                n: b.n,
                l: b.l,
                branch: b.branch_ordinal,
                sigma: s.sigma,
                lambda: s.lambda,
            })
        })
        .collect();
    Ok(Figure1Data { rows, branches })
}
