//! Zeros of the boundary determinants for one angular family.
//!
//! The equilibrated determinant is sampled on a uniform grid in
//! `z = lambda^(1/4)`; each sign change is refined by bisection and a final
//! secant step that is kept only if it lands inside the bracket.

use serde::Serialize;

use crate::determinants::{BallProblem, BoundaryKind};
use crate::error::{domain, Result};
use crate::special_fn::Z_MAX;

/// Lower end of every scan; excludes the removable degeneracy at `lambda = 0`.
pub const Z_MIN: f64 = 1e-2;
pub const DEFAULT_Z_STEP: f64 = 1e-2;
/// Largest accepted `|equilibrated det|` at a reported root.
pub const TOL_DET: f64 = 1e-8;

const MAX_BISECTIONS: usize = 200;
const BRACKET_REL: f64 = 1e-12;
const DEDUP_Z: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootRecord {
    pub n: usize,
    pub l: usize,
    pub kind: BoundaryKind,
    /// `None` for Dirichlet.
    pub sigma: Option<f64>,
    pub lambda: f64,
    pub z: f64,
    /// `(z_lo, z_hi)` with opposite determinant signs.
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
}

fn same_sign(a: f64, b: f64) -> bool {
    (a < 0.0) == (b < 0.0)
}

/// Refines a sign-change bracket `[lo, hi]` of the equilibrated determinant.
pub fn refine_bracket(
    problem: &BallProblem,
    l: usize,
    (mut lo, mut f_lo): (f64, f64),
    (mut hi, mut f_hi): (f64, f64),
) -> Result<RootRecord> {
    let f = |z: f64| problem.eval_at(l, z).map(|d| d.equilibrated);
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS && hi - lo > BRACKET_REL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        iterations += 1;
        if same_sign(f_mid, f_lo) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    let z = if secant > lo && secant < hi { secant } else { 0.5 * (lo + hi) };
    Ok(RootRecord {
        n: problem.n,
        l,
        kind: problem.kind,
        sigma: problem.sigma(),
        lambda: z.powi(4),
        z,
        bracket: (lo, hi),
        residual: f(z)?.abs(),
        iterations,
    })
}

/// Sign-change scan of `[z_lo, z_hi]`, stopping early after `limit` roots.
pub fn scan_window(
    problem: &BallProblem,
    l: usize,
    z_lo: f64,
    z_hi: f64,
    z_step: f64,
    limit: Option<usize>,
) -> Result<Vec<RootRecord>> {
    problem.validate()?;
    if !(z_step > 0.0) || !z_step.is_finite() {
        return domain(format!("z_step must be > 0, got {z_step}"));
    }
    if !(z_lo > 0.0) || !(z_hi > z_lo) || z_hi > Z_MAX {
        return domain(format!("empty or unsupported window z in [{z_lo}, {z_hi}]"));
    }
    let f = |z: f64| problem.eval_at(l, z).map(|d| d.equilibrated);

    let mut roots: Vec<RootRecord> = Vec::new();
    let mut prev = (z_lo, f(z_lo)?);
    let mut k = 1usize;
    loop {
        let z = (z_lo + k as f64 * z_step).min(z_hi);
        let cur = (z, f(z)?);
        if !same_sign(prev.1, cur.1) {
            let root = refine_bracket(problem, l, prev, cur)?;
            if roots.last().is_none_or(|r| (root.z - r.z).abs() >= DEDUP_Z) {
                roots.push(root);
            }
            if limit.is_some_and(|m| roots.len() >= m) {
                break;
            }
        }
        if z >= z_hi {
            break;
        }
        prev = cur;
        k += 1;
    }
    Ok(roots)
}

/// All roots with `lambda` in `[Z_MIN^4, lambda_max]`, ascending.
pub fn scan_roots(
    problem: &BallProblem,
    l: usize,
    lambda_max: f64,
    z_step: f64,
) -> Result<Vec<RootRecord>> {
    if !(lambda_max > 0.0) {
        return domain(format!("lambda_max must be > 0, got {lambda_max}"));
    }
    let z_max = lambda_max.sqrt().sqrt();
    if z_max > Z_MAX {
        return domain(format!("lambda_max = {lambda_max} exceeds Z_MAX^4"));
    }
    scan_window(problem, l, Z_MIN, z_max, z_step, None)
}

/// The first `count` roots of the family, scanning up to `Z_MAX` as needed.
pub fn first_roots(
    problem: &BallProblem,
    l: usize,
    count: usize,
    z_step: f64,
) -> Result<Vec<RootRecord>> {
    scan_window(problem, l, Z_MIN, Z_MAX, z_step, Some(count))
}
