//! Eigenvalues of the biharmonic operator on the unit ball of R^N.
//!
//! Free-plate (Neumann, Poisson ratio `sigma` in `[0, 1]`) and clamped-plate
//! (Dirichlet) eigenvalues are computed as zeros of 2x2 Bessel determinants,
//! merged into an ordered spectrum with spherical-harmonic multiplicities,
//! followed along `sigma`, and cross-checked against a Rayleigh-Ritz upper
//! bound built directly from the variational form.
//!
//! Module map:
//!
//! - [`special_fn`]: `J_nu`, scaled `I_nu`, the ultraspherical bundles `j_l`, `i_l`
//!   with three derivatives, and the Wronskian-type cross-product identities.
//! - [`determinants`]: Dirichlet cross-product, the Neumann matrix `M(lambda, sigma)`,
//!   and the `sigma = 1` collapse.
//! - [`roots`]: sign-change scanning in `z = lambda^(1/4)` with bisection.
//! - [`spectrum`]: ordered spectrum with multiplicities and structural zero modes.
//! - [`continuation`]: branch tracing in `sigma` and the decay/Lipschitz checks.
//! - [`ritz`]: Rayleigh-Ritz bounds on the disk (N = 2).
//! - [`verify`]: the identity and inequality suite run by `ballplate verify`.
//! - [`cli`]: command-line front end and output formats.

// `!(x > 0.0)` guards reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod continuation;
pub mod determinants;
mod error;
pub mod format;
pub mod ritz;
pub mod roots;
pub mod special_fn;
pub mod spectrum;
pub mod verify;

pub use determinants::{BallProblem, BoundaryKind, DetEval, RadialEigenfunction};
pub use error::{Error, Result};
pub use roots::RootRecord;
pub use spectrum::{Spectrum, SpectrumEntry};
pub use special_fn::{BesselBundle, Order};

