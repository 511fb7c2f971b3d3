//! Rayleigh-Ritz upper bounds for the free plate on the unit disk.
//!
//! Trial functions are `r^(l+2m) cos(l theta)` and `r^(l+2m) sin(l theta)`.
//! All form entries are rational multiples of `pi`; `pi` cancels in the
//! generalized eigenproblem, so the mass matrix is factored exactly in
//! rationals and only the final congruence is rounded to `f64`.

mod exact;
pub mod jacobi;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{domain, Error, Result};
use exact::{congruence, ldl, FormRatios};
use jacobi::symmetric_eigenvalues;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialBasis {
    entries: Vec<(usize, usize)>,
}

impl TrialBasis {
    /// `(l, m)` pairs. Must contain `(0, 0)` and `(1, 0)` so that `1, x, y`
    /// are representable.
    pub fn new(entries: Vec<(usize, usize)>) -> Result<Self> {
        if !entries.contains(&(0, 0)) || !entries.contains(&(1, 0)) {
            return domain("trial basis must contain (0, 0) and (1, 0)");
        }
        Ok(TrialBasis { entries })
    }

    /// All `(l, m)` with `l <= l_max`, `m <= m_max`.
    pub fn polynomial(l_max: usize, m_max: usize) -> Self {
        let entries = (0..=l_max.max(1)).flat_map(|l| (0..=m_max).map(move |m| (l, m))).collect();
        TrialBasis { entries }
    }

    /// Harmonic trials `Re z^l`, `Im z^l` for `l <= l_max`.
    pub fn harmonic(l_max: usize) -> Self {
        TrialBasis { entries: (0..=l_max.max(1)).map(|l| (l, 0)).collect() }
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Number of trial functions (two angular factors for `l >= 1`).
    pub fn size(&self) -> usize {
        self.entries.iter().map(|&(l, _)| if l == 0 { 1 } else { 2 }).sum()
    }

    /// Radial exponents grouped by `l`, in entry order.
    fn blocks(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        for &(l, m) in &self.entries {
            match out.iter_mut().find(|(bl, _)| *bl == l) {
                Some((_, ms)) => ms.push(m),
                None => out.push((l, vec![m])),
            }
        }
        out.sort_by_key(|b| b.0);
        out
    }
}

fn require_disk(n: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::Unsupported(format!("Ritz bounds are implemented for N = 2 only, got N = {n}")));
    }
    Ok(())
}

fn require_sigma(sigma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&sigma) {
        return domain(format!("sigma must lie in [0, 1), got {sigma}"));
    }
    Ok(())
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("finite rational")
}

/// `(a, b)`: the form `(1-sigma) D2u:D2v + sigma Lap u Lap v` and the mass
/// `u v`, integrated over the disk, for two trials sharing `l` and angular
/// factor.
pub fn polar_form_integrals(n: usize, l: usize, m1: usize, m2: usize, sigma: f64) -> Result<(f64, f64)> {
    require_disk(n)?;
    let r = FormRatios::new(l, m1, m2);
    let pi = std::f64::consts::PI;
    let a = (1.0 - sigma) * (pi * to_f64(&r.hess)) + sigma * (pi * to_f64(&r.lap));
    Ok((a, pi * to_f64(&r.mass)))
}

/// Dense form matrices over the expanded basis; `a(sigma)` is affine.
#[derive(Debug, Clone, PartialEq)]
pub struct FormMatrices {
    /// `(l, m, odd)` per row; `odd` marks the `sin` factor.
    pub functions: Vec<(usize, usize, bool)>,
    pub hessian: Vec<Vec<f64>>,
    pub laplacian: Vec<Vec<f64>>,
    pub mass: Vec<Vec<f64>>,
}

impl FormMatrices {
    pub fn assemble(basis: &TrialBasis) -> Self {
        let functions: Vec<(usize, usize, bool)> = basis
            .entries()
            .iter()
            .flat_map(|&(l, m)| {
                let odd = if l == 0 { None } else { Some((l, m, true)) };
                std::iter::once((l, m, false)).chain(odd)
            })
            .collect();
        let size = functions.len();
        let pi = std::f64::consts::PI;
        let mut hessian = vec![vec![0.0; size]; size];
        let mut laplacian = vec![vec![0.0; size]; size];
        let mut mass = vec![vec![0.0; size]; size];
        for (i, &(li, mi, oi)) in functions.iter().enumerate() {
            for (j, &(lj, mj, oj)) in functions.iter().enumerate() {
                if li != lj || oi != oj {
                    continue;
                }
                let r = FormRatios::new(li, mi, mj);
                hessian[i][j] = pi * to_f64(&r.hess);
                laplacian[i][j] = pi * to_f64(&r.lap);
                mass[i][j] = pi * to_f64(&r.mass);
            }
        }
        FormMatrices { functions, hessian, laplacian, mass }
    }

    pub fn a(&self, sigma: f64) -> Vec<Vec<f64>> {
        self.hessian
            .iter()
            .zip(&self.laplacian)
            .map(|(h, d)| h.iter().zip(d).map(|(x, y)| (1.0 - sigma) * x + sigma * y).collect())
            .collect()
    }
}

/// Ritz values of one `l` block (each counted once).
fn block_ritz_values(l: usize, ms: &[usize], sigma: f64) -> Result<Vec<f64>> {
    let k = ms.len();
    let ratios: Vec<Vec<FormRatios>> =
        ms.iter().map(|&a| ms.iter().map(|&b| FormRatios::new(l, a, b)).collect()).collect();
    let pick = |f: fn(&FormRatios) -> &BigRational| -> Vec<Vec<BigRational>> {
        ratios.iter().map(|row| row.iter().map(|r| f(r).clone()).collect()).collect()
    };
    let (lower, pivots) = ldl(&pick(|r| &r.mass)).ok_or(Error::SingularMass)?;
    let scale: Vec<f64> = pivots.iter().map(|d| to_f64(d).sqrt()).collect();
    let reduce = |a: Vec<Vec<BigRational>>| -> Vec<Vec<f64>> {
        let c = congruence(&lower, &a);
        (0..k).map(|i| (0..k).map(|j| to_f64(&c[i][j]) / (scale[i] * scale[j])).collect()).collect()
    };
    let kh = reduce(pick(|r| &r.hess));
    let kd = reduce(pick(|r| &r.lap));
    let a: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| (1.0 - sigma) * kh[i][j] + sigma * kd[i][j]).collect())
        .collect();
    Ok(symmetric_eigenvalues(&a))
}

/// All Ritz values of the basis at `sigma`, ascending, with multiplicity.
pub fn ritz_values(basis: &TrialBasis, sigma: f64) -> Result<Vec<f64>> {
    require_sigma(sigma)?;
    let mut all = Vec::with_capacity(basis.size());
    for (l, ms) in basis.blocks() {
        let vals = block_ritz_values(l, &ms, sigma)?;
        let copies = if l == 0 { 1 } else { 2 };
        for v in vals {
            all.extend(std::iter::repeat_n(v, copies));
        }
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// The first `count` Ritz values: upper bounds for `lambda_1..lambda_count`.
pub fn ritz_upper_bounds(basis: &TrialBasis, sigma: f64, count: usize) -> Result<Vec<f64>> {
    if count > basis.size() {
        return domain(format!("count {count} exceeds basis size {}", basis.size()));
    }
    let mut v = ritz_values(basis, sigma)?;
    v.truncate(count);
    Ok(v)
}

/// Angular degree of the `i`-th harmonic trial in `1, x, y, Re z^2, Im z^2, ...`.
fn harmonic_degree(i: usize) -> usize {
    i / 2
}

/// `C_j = j max_{i <= j} int |D2 u_i|^2` over the first `j` harmonic trials,
/// each normalized in `L^2`; `lambda_j(sigma) <= C_j (1 - sigma)`.
pub fn est_conv_constant(j: usize) -> f64 {
    (1..=j)
        .map(|i| {
            let r = FormRatios::new(harmonic_degree(i), 0, 0);
            to_f64(&(r.hess / r.mass))
        })
        .fold(0.0, f64::max)
        * j as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn r_squared_and_affine_examples() {
        for sigma in [0.0, 0.3, 0.5, 0.9] {
            let (a, b) = polar_form_integrals(2, 0, 1, 1, sigma).unwrap();
            assert!((a - PI * ((1.0 - sigma) * 8.0 + sigma * 16.0)).abs() < 1e-13);
            assert!((b - PI / 3.0).abs() < 1e-15);
            // u = x
            assert_eq!(polar_form_integrals(2, 1, 0, 0, sigma).unwrap().0, 0.0);
            assert_eq!(polar_form_integrals(2, 0, 0, 0, sigma).unwrap().0, 0.0);
        }
        assert!(matches!(polar_form_integrals(3, 0, 1, 1, 0.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn affine_in_sigma() {
        let f = FormMatrices::assemble(&TrialBasis::polynomial(3, 3));
        let a = f.a(0.25);
        for i in 0..a.len() {
            for j in 0..a.len() {
                assert_eq!(a[i][j], 0.75 * f.hessian[i][j] + 0.25 * f.laplacian[i][j]);
                assert_eq!(a[i][j], a[j][i]);
                assert_eq!(f.mass[i][j], f.mass[j][i]);
            }
        }
        let (l, m1, o1) = f.functions[5];
        let (_, m2, _) = f.functions[f.functions.iter().rposition(|&(ll, _, oo)| ll == l && oo == o1).unwrap()];
        let direct = polar_form_integrals(2, l, m1, m2, 0.25).unwrap().0;
        let i = 5;
        let j = f.functions.iter().position(|&x| x == (l, m2, o1)).unwrap();
        assert!((a[i][j] - direct).abs() <= 1e-14 * direct.abs().max(1.0));
    }

    #[test]
    fn kernel_is_affine_functions() {
        let basis = TrialBasis::polynomial(4, 3);
        for sigma in [0.0, 0.5, 0.9, 0.999] {
            let v = ritz_values(&basis, sigma).unwrap();
            assert_eq!(v.iter().filter(|&&x| x < 1e-8).count(), 3, "sigma={sigma}");
            assert!(v.iter().all(|&x| x > -1e-10));
        }
        let b = ritz_upper_bounds(&basis, 0.5, 3).unwrap();
        assert!(b.iter().all(|x| x.abs() <= 1e-10));
    }

    #[test]
    fn duplicate_entries_are_singular() {
        let basis = TrialBasis::new(vec![(0, 0), (1, 0), (2, 1), (2, 1)]).unwrap();
        assert_eq!(ritz_values(&basis, 0.3), Err(Error::SingularMass));
        assert!(TrialBasis::new(vec![(0, 0), (2, 0)]).is_err());
    }

    #[test]
    fn arguments_checked() {
        let basis = TrialBasis::harmonic(2);
        assert_eq!(basis.size(), 5);
        assert!(ritz_upper_bounds(&basis, 0.5, 6).is_err());
        assert!(ritz_upper_bounds(&basis, 1.0, 3).is_err());
        assert!(ritz_upper_bounds(&basis, -0.1, 3).is_err());
    }

    #[test]
    fn basis_monotonicity() {
        for sigma in [0.0, 0.3, 0.7] {
            let mut prev: Option<Vec<f64>> = None;
            for m_max in 0..=6 {
                let v = ritz_values(&TrialBasis::polynomial(5, m_max), sigma).unwrap();
                if let Some(p) = &prev {
                    for (j, (a, b)) in v.iter().zip(p).enumerate() {
                        assert!(*a <= b + 1e-10 * b.max(1.0), "j={j} m_max={m_max}: {a} > {b}");
                    }
                }
                prev = Some(v);
            }
        }
    }

    #[test]
    fn harmonic_trials_give_step_one_estimate() {
        assert_eq!(est_conv_constant(1), 0.0);
        assert_eq!(est_conv_constant(3), 0.0);
        // int |D2 Re z^2|^2 = 8 pi, int (Re z^2)^2 = pi / 6
        assert!((est_conv_constant(4) - 192.0).abs() < 1e-12);
        for j in 1..=13 {
            let l: usize = j / 2;
            let closed = (4 * l * l * (l * l).saturating_sub(1)) as f64;
            assert!((est_conv_constant(j) - j as f64 * closed).abs() < 1e-9 * closed.max(1.0));
        }
        let basis = TrialBasis::harmonic(6);
        for sigma in [0.0, 0.3, 0.7, 0.95] {
            let b = ritz_upper_bounds(&basis, sigma, 13).unwrap();
            for (k, v) in b.iter().enumerate() {
                let j = k + 1;
                assert!(*v <= est_conv_constant(j) * (1.0 - sigma) * (1.0 + 1e-12) + 1e-12, "j={j}");
            }
        }
    }

    /// `u = sum c_k r^(l+2m) trig(l theta)` evaluated in Cartesian form.
    fn cartesian_trial(terms: &[(f64, usize, usize, bool)], x: f64, y: f64) -> f64 {
        terms
            .iter()
            .map(|&(c, l, m, odd)| {
                let (mut re, mut im) = (1.0, 0.0);
                for _ in 0..l {
                    (re, im) = (re * x - im * y, re * y + im * x);
                }
                c * (x * x + y * y).powi(m as i32) * if odd { im } else { re }
            })
            .sum()
    }

    /// `int |D2 u|^2` over the disk: central-difference Hessian in `x, y`,
    /// composite Simpson in `r`, uniform rule in `theta`.
    fn cartesian_hessian_energy(terms: &[(f64, usize, usize, bool)]) -> f64 {
        let h = 1e-3;
        let u = |x: f64, y: f64| cartesian_trial(terms, x, y);
        let (nr, nt) = (200, 128);
        let mut total = 0.0;
        for i in 0..=nr {
            let r = i as f64 / nr as f64;
            let w = if i == 0 || i == nr { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let mut ring = 0.0;
            for k in 0..nt {
                let t = 2.0 * PI * k as f64 / nt as f64;
                let (x, y) = (r * t.cos(), r * t.sin());
                let c = u(x, y);
                let uxx = (u(x + h, y) - 2.0 * c + u(x - h, y)) / (h * h);
                let uyy = (u(x, y + h) - 2.0 * c + u(x, y - h)) / (h * h);
                let uxy = (u(x + h, y + h) - u(x + h, y - h) - u(x - h, y + h) + u(x - h, y - h)) / (4.0 * h * h);
                ring += uxx * uxx + uyy * uyy + 2.0 * uxy * uxy;
            }
            total += w * r * ring * 2.0 * PI / nt as f64;
        }
        total / (3.0 * nr as f64)
    }

    #[test]
    fn polar_hessian_matches_cartesian_quadrature() {
        let f = FormMatrices::assemble(&TrialBasis::polynomial(3, 2));
        // fixed pseudo-random coefficients
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..5 {
            let coef: Vec<f64> = f.functions.iter().map(|_| next()).collect();
            let polar: f64 = (0..coef.len())
                .flat_map(|i| (0..coef.len()).map(move |j| (i, j)))
                .map(|(i, j)| coef[i] * f.hessian[i][j] * coef[j])
                .sum();
            let terms: Vec<(f64, usize, usize, bool)> =
                f.functions.iter().zip(&coef).map(|(&(l, m, o), &c)| (c, l, m, o)).collect();
            let cart = cartesian_hessian_energy(&terms);
            assert!((polar - cart).abs() <= 1e-5 * cart, "polar {polar} vs cartesian {cart}");
        }
        // r^2 alone
        let cart = cartesian_hessian_energy(&[(1.0, 0, 1, false)]);
        assert!((cart - 8.0 * PI).abs() < 1e-5 * 8.0 * PI);
    }
}
