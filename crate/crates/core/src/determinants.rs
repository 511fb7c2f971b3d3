//! Boundary-condition determinants on the unit ball.
//!
//! Separated solutions are `u = U_l(r) H_l(theta)` with
//! `U_l(r) = alpha j_l(z r) + beta i_l(z r)`, `z = lambda^(1/4)`. Imposing the
//! two boundary conditions at `r = 1` gives a 2x2 system whose determinant
//! vanishes exactly at the eigenvalues. The second (`i_l`) column is always
//! assembled from the scaled bundle, so every determinant here equals the true
//! one times `e^{-z}`; the sign is unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::special_fn::{ultraspherical_bundle, BesselBundle, CrossProducts, Z_MAX};

pub type Matrix2 = [[f64; 2]; 2];

/// Singular-value ratio below which a matrix is accepted as singular.
pub const NULL_VECTOR_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Neumann,
    Dirichlet,
}

impl std::fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundaryKind::Neumann => "neumann",
            BoundaryKind::Dirichlet => "dirichlet",
        })
    }
}

/// Dimension, Poisson ratio and boundary kind. `sigma` is ignored for Dirichlet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallProblem {
    pub n: usize,
    pub sigma: f64,
    pub kind: BoundaryKind,
}

impl BallProblem {
    pub fn neumann(n: usize, sigma: f64) -> Result<Self> {
        let p = BallProblem { n, sigma, kind: BoundaryKind::Neumann };
        p.validate()?;
        Ok(p)
    }

    pub fn dirichlet(n: usize) -> Result<Self> {
        let p = BallProblem { n, sigma: 0.0, kind: BoundaryKind::Dirichlet };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return domain(format!("dimension must be >= 2, got {}", self.n));
        }
        if self.kind == BoundaryKind::Neumann && !(0.0..=1.0).contains(&self.sigma) {
            return domain(format!("sigma must lie in [0, 1], got {}", self.sigma));
        }
        Ok(())
    }

    /// `sigma` for Neumann, `None` for Dirichlet.
    pub fn sigma(&self) -> Option<f64> {
        match self.kind {
            BoundaryKind::Neumann => Some(self.sigma),
            BoundaryKind::Dirichlet => None,
        }
    }

    /// The scaled boundary matrix at `z = lambda^(1/4)`.
    pub fn matrix_at(&self, l: usize, z: f64) -> Result<Matrix2> {
        let b = ultraspherical_bundle(self.n, l, z)?;
        Ok(match self.kind {
            BoundaryKind::Neumann => neumann_matrix_from(&b, self.sigma),
            BoundaryKind::Dirichlet => dirichlet_matrix_from(&b),
        })
    }

    /// Determinant evaluation at `z`; the root solver works on this directly.
    pub fn eval_at(&self, l: usize, z: f64) -> Result<DetEval> {
        if !(z > 0.0) || z > Z_MAX {
            return domain(format!("z = {z} outside (0, {Z_MAX}]"));
        }
        let m = self.matrix_at(l, z)?;
        Ok(DetEval {
            l,
            lambda: z.powi(4),
            z,
            value_scaled: det2(&m),
            equilibrated: equilibrated_det(&m),
            scale_exponent: z,
        })
    }
}

/// A determinant value at one eigenvalue candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetEval {
    pub l: usize,
    pub lambda: f64,
    pub z: f64,
    /// Determinant with the `i_l` column multiplied by `e^{-z}`.
    pub value_scaled: f64,
    /// Determinant after dividing each row by its largest magnitude; used for
    /// sign tests and residuals.
    pub equilibrated: f64,
    pub scale_exponent: f64,
}

pub fn det2(m: &Matrix2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn equilibrate(m: &Matrix2) -> Matrix2 {
    m.map(|row| {
        let s = row[0].abs().max(row[1].abs());
        if s > 0.0 {
            [row[0] / s, row[1] / s]
        } else {
            row
        }
    })
}

pub fn equilibrated_det(m: &Matrix2) -> f64 {
    det2(&equilibrate(m))
}

fn lambda_to_z(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return domain(format!("lambda must be > 0, got {lambda}"));
    }
    let z = lambda.sqrt().sqrt();
    if z > Z_MAX {
        return domain(format!("lambda = {lambda} exceeds Z_MAX^4 = {}", Z_MAX.powi(4)));
    }
    Ok(z)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&sigma) {
        return domain(format!("sigma must lie in [0, 1], got {sigma}"));
    }
    Ok(())
}

/// Rows `[W(1), W'(1)]` for `W = alpha j_l + beta i_l` (Dirichlet conditions).
pub fn dirichlet_matrix_from(b: &BesselBundle) -> Matrix2 {
    [[b.j[0], b.i_scaled[0]], [b.j[1], b.i_scaled[1]]]
}

/// Neumann boundary rows at `r = 1` for one radial profile `f` with derivatives
/// `f = [f, f', f'', f''']` evaluated at `z`.
fn neumann_rows(n: usize, l: usize, z: f64, sigma: f64, f: &[f64; 4]) -> [f64; 2] {
    let nf = n as f64;
    let lf = l as f64;
    let ll = lf * (lf + nf - 2.0);
    let (z2, z3) = (z * z, z * z * z);
    let first = z2 * f[2] + (nf - 1.0) * z * sigma * f[1] - ll * sigma * f[0];
    let second = z3 * f[3]
        + (nf - 1.0) * z2 * f[2]
        + z * (1.0 - nf + lf * (sigma - 2.0) * (nf + lf - 2.0)) * f[1]
        - ll * (sigma - 3.0) * f[0];
    [first, second]
}

/// `M(lambda, sigma)` with the `i_l` column scaled by `e^{-z}`.
pub fn neumann_matrix_from(b: &BesselBundle, sigma: f64) -> Matrix2 {
    let cj = neumann_rows(b.n, b.l, b.z, sigma, &b.j);
    let ci = neumann_rows(b.n, b.l, b.z, sigma, &b.i_scaled);
    [[cj[0], ci[0]], [cj[1], ci[1]]]
}

pub fn neumann_matrix(n: usize, l: usize, lambda: f64, sigma: f64) -> Result<Matrix2> {
    check_sigma(sigma)?;
    let z = lambda_to_z(lambda)?;
    Ok(neumann_matrix_from(&ultraspherical_bundle(n, l, z)?, sigma))
}

pub fn neumann_det(n: usize, l: usize, lambda: f64, sigma: f64) -> Result<DetEval> {
    check_sigma(sigma)?;
    let z = lambda_to_z(lambda)?;
    BallProblem::neumann(n, sigma)?.eval_at(l, z)
}

/// Scaled `j_l(z) i_l'(z) - i_l(z) j_l'(z)` at `z = mu^(1/4)`.
pub fn dirichlet_det(n: usize, l: usize, mu: f64) -> Result<DetEval> {
    let z = lambda_to_z(mu)?;
    BallProblem::dirichlet(n)?.eval_at(l, z)
}

/// `det M(lambda, 1)` expanded term by term in the six cross products.
pub fn f_long_from(n: usize, l: usize, z: f64, x: &CrossProducts) -> f64 {
    let nf = n as f64;
    let lf = l as f64;
    let ll = lf * (lf + nf - 2.0);
    let (z2, z3, z4, z5) = (z * z, z.powi(3), z.powi(4), z.powi(5));
    z * lf * (lf - 1.0) * (lf + nf - 2.0) * (lf + nf - 1.0) * x.get(0, 1)
        - z2 * ll * (nf + 1.0) * x.get(0, 2)
        + z3 * (nf * (nf - 1.0) + ll) * x.get(1, 2)
        - z3 * ll * x.get(0, 3)
        + (nf - 1.0) * z4 * x.get(1, 3)
        + z5 * x.get(2, 3)
}

/// `F(lambda)` assembled from the bundle's own cross products (scaled).
pub fn f_long(n: usize, l: usize, lambda: f64) -> Result<f64> {
    let z = lambda_to_z(lambda)?;
    let b = ultraspherical_bundle(n, l, z)?;
    Ok(f_long_from(n, l, z, &CrossProducts::from_bundle(&b)))
}

/// Collapsed form `det M(lambda, 1) = -lambda^{5/4} (j_l i_l' - i_l j_l')` (scaled).
pub fn f_short(n: usize, l: usize, lambda: f64) -> Result<f64> {
    let z = lambda_to_z(lambda)?;
    let b = ultraspherical_bundle(n, l, z)?;
    Ok(-z.powi(5) * (b.j[0] * b.i_scaled[1] - b.i_scaled[0] * b.j[1]))
}

/// Unit kernel direction of a 2x2 matrix and the ratio `s_min / s_max`.
///
/// The direction is the smallest right singular vector, from the closed-form
/// eigen-decomposition of `M^T M`.
pub fn null_direction(m: &Matrix2) -> ([f64; 2], f64) {
    let a = m[0][0] * m[0][0] + m[1][0] * m[1][0];
    let c = m[0][1] * m[0][1] + m[1][1] * m[1][1];
    let b = m[0][0] * m[0][1] + m[1][0] * m[1][1];
    // dominant right singular direction at angle theta
    let theta = 0.5 * (2.0 * b).atan2(a - c);
    let v = [-theta.sin(), theta.cos()];
    let smax_sq = 0.5 * (a + c) + (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let ratio = if smax_sq > 0.0 { det2(m).abs() / smax_sq } else { 0.0 };
    (v, ratio)
}

/// Radial factor `U_l(r) = alpha j_l(z r) + beta_scaled e^{-z} i_l(z r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEigenfunction {
    pub n: usize,
    pub l: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub beta_scaled: f64,
    /// `|M v| / |M|` for the scaled matrix at the eigenvalue.
    pub residual: f64,
}

impl RadialEigenfunction {
    /// `[U, U', U'', U''']` with respect to `r`, for `0 < r <= 1`.
    pub fn profile(&self, r: f64) -> Result<[f64; 4]> {
        let z = lambda_to_z(self.lambda)?;
        let b = ultraspherical_bundle(self.n, self.l, z * r)?;
        // bundle carries e^{-z r}; the coefficient refers to e^{-z}
        let shift = (z * r - z).exp();
        let mut out = [0.0; 4];
        let mut zk = 1.0;
        for k in 0..4 {
            out[k] = zk * (self.alpha * b.j[k] + self.beta_scaled * shift * b.i_scaled[k]);
            zk *= z;
        }
        Ok(out)
    }
}

/// Kernel vector of the boundary matrix at an eigenvalue of `problem`.
pub fn null_vector(problem: &BallProblem, l: usize, lambda: f64) -> Result<RadialEigenfunction> {
    problem.validate()?;
    let z = lambda_to_z(lambda)?;
    let m = problem.matrix_at(l, z)?;
    let (v, ratio) = null_direction(&equilibrate(&m));
    if ratio > NULL_VECTOR_TOL {
        return Err(Error::NotAnEigenvalue { ratio, tol: NULL_VECTOR_TOL });
    }
    let mv = [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ];
    let norm_m = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let residual = (mv[0] * mv[0] + mv[1] * mv[1]).sqrt() / norm_m;
    Ok(RadialEigenfunction {
        n: problem.n,
        l,
        lambda,
        alpha: v[0],
        beta_scaled: v[1],
        residual,
    })
}
