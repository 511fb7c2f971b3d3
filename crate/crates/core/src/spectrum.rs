//! Ordered spectrum: per-family roots merged with spherical-harmonic
//! multiplicities, plus the structural zero modes of the free plate.

use serde::Serialize;

use crate::determinants::{BallProblem, BoundaryKind};
use crate::error::{domain, Error, Result};
use crate::roots::scan_roots;

pub const DEFAULT_L_MAX: usize = 12;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Dimension of the spherical harmonics of degree `l` on the sphere in R^N.
pub fn harmonic_multiplicity(n: usize, l: usize) -> usize {
    let all = binomial(n + l - 1, l);
    let lower = if l >= 2 { binomial(n + l - 3, l - 2) } else { 0 };
    (all - lower) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub l: usize,
    /// Number of ordinals this entry covers (reduced if truncated at `count`).
    pub multiplicity: usize,
    pub j_first: usize,
    pub j_last: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub problem: BallProblem,
    pub entries: Vec<SpectrumEntry>,
    /// The last entry was cut mid-multiplicity to end exactly at `count`.
    pub truncated: bool,
    /// False when the window held fewer than `count` ordinals.
    pub complete: bool,
    /// Set for the degenerate free plate (`sigma = 1`), whose zero eigenspace
    /// (all harmonic functions) is not listed.
    pub infinite_zero_eigenspace: bool,
}

impl Spectrum {
    pub fn total(&self) -> usize {
        self.entries.last().map_or(0, |e| e.j_last)
    }

    /// Eigenvalue with ordinal `j` (1-based).
    pub fn lambda(&self, j: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.j_first <= j && j <= e.j_last)
            .map(|e| e.lambda)
    }

    /// One value per ordinal, repeated according to multiplicity.
    pub fn ordinal_values(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.lambda, e.multiplicity))
            .collect()
    }
}

pub fn assemble_spectrum(
    problem: &BallProblem,
    lambda_max: f64,
    l_max: usize,
    count: usize,
    z_step: f64,
) -> Result<Spectrum> {
    problem.validate()?;
    if count == 0 {
        return domain("count must be positive");
    }
    let n = problem.n;
    let mut found: Vec<(f64, usize)> = Vec::new();
    for l in 0..=l_max {
        found.extend(scan_roots(problem, l, lambda_max, z_step)?.iter().map(|r| (r.lambda, l)));
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let zero_modes = problem.kind == BoundaryKind::Neumann && problem.sigma < 1.0;
    let mut raw: Vec<(f64, usize, usize)> = Vec::new();
    if zero_modes {
        // constants (l = 0) and the N coordinate functions (l = 1)
        raw.push((0.0, 0, 1));
        raw.push((0.0, 1, n));
    }
    raw.extend(found.iter().map(|&(lambda, l)| (lambda, l, harmonic_multiplicity(n, l))));

    let mut entries = Vec::new();
    let mut next = 1;
    let mut truncated = false;
    for (lambda, l, mult) in raw {
        if next > count {
            break;
        }
        let take = mult.min(count + 1 - next);
        truncated = take < mult;
        entries.push(SpectrumEntry { lambda, l, multiplicity: take, j_first: next, j_last: next + take - 1 });
        next += take;
    }
    let complete = next > count;

    let largest = entries.last().map_or(0.0, |e| e.lambda);
    if let Some(&(lambda, _)) = found.iter().find(|&&(lam, l)| l == l_max && lam <= largest) {
        return Err(Error::LMaxTooSmall { l_max, lambda, largest });
    }

    Ok(Spectrum {
        problem: *problem,
        entries,
        truncated,
        complete,
        infinite_zero_eigenspace: problem.kind == BoundaryKind::Neumann && problem.sigma >= 1.0,
    })
}
