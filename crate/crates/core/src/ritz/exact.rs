//! Exact rational form entries and the congruence `L^-1 A L^-T`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Form entries divided by `pi` for `r^p trig(l theta)` and `r^q trig(l theta)`,
/// `p = l + 2 m1`, `q = l + 2 m2`.
#[derive(Debug, Clone, PartialEq)]
pub(super) struct FormRatios {
    pub hess: BigRational,
    pub lap: BigRational,
    pub mass: BigRational,
}

impl FormRatios {
    pub fn new(l: usize, m1: usize, m2: usize) -> Self {
        let (l, p, q) = (l as i64, (l + 2 * m1) as i64, (l + 2 * m2) as i64);
        // angular integral of trig^2 is 2 pi for l = 0, pi otherwise
        let c = if l == 0 { 2 } else { 1 };
        let l2 = l * l;
        let mass = rat(c, p + q + 2);
        if p + q <= 2 {
            return FormRatios { hess: BigRational::zero(), lap: BigRational::zero(), mass };
        }
        let hess = c * (p * (p - 1) * q * (q - 1) + (p - l2) * (q - l2)) + 2 * l2 * (p - 1) * (q - 1);
        let lap = c * (p * p - l2) * (q * q - l2);
        FormRatios { hess: rat(hess, p + q - 2), lap: rat(lap, p + q - 2), mass }
    }
}

/// `M = L D L^T` with unit lower `L`; `None` on a zero pivot.
pub(super) fn ldl(m: &[Vec<BigRational>]) -> Option<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let k = m.len();
    let mut l = vec![vec![BigRational::zero(); k]; k];
    let mut d: Vec<BigRational> = Vec::with_capacity(k);
    for j in 0..k {
        let mut dj = m[j][j].clone();
        for s in 0..j {
            dj -= &l[j][s] * &l[j][s] * &d[s];
        }
        if dj.is_zero() {
            return None;
        }
        l[j][j] = rat(1, 1);
        for i in j + 1..k {
            let mut v = m[i][j].clone();
            for s in 0..j {
                v -= &l[i][s] * &l[j][s] * &d[s];
            }
            l[i][j] = v / &dj;
        }
        d.push(dj);
    }
    Some((l, d))
}

/// `L^-1 x` for unit lower triangular `L`.
fn forward(l: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    let mut y: Vec<BigRational> = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let mut v = x[i].clone();
        for s in 0..i {
            v -= &l[i][s] * &y[s];
        }
        y.push(v);
    }
    y
}

/// `L^-1 A L^-T` for symmetric `A`.
pub(super) fn congruence(l: &[Vec<BigRational>], a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let k = a.len();
    let col = |m: &[Vec<BigRational>], j: usize| -> Vec<BigRational> { (0..k).map(|i| m[i][j].clone()).collect() };
    // Y = L^-1 A, column by column
    let y_cols: Vec<Vec<BigRational>> = (0..k).map(|j| forward(l, &col(a, j))).collect();
    // C = L^-1 Y^T; row i of Y is entry i of each column
    let yt_cols: Vec<Vec<BigRational>> = (0..k).map(|i| (0..k).map(|j| y_cols[j][i].clone()).collect()).collect();
    let c_cols: Vec<Vec<BigRational>> = yt_cols.iter().map(|v| forward(l, v)).collect();
    (0..k).map(|i| (0..k).map(|j| c_cols[j][i].clone()).collect()).collect()
}
