//! Bessel functions of real order and the ultraspherical families built on them.
//!
//! `J_nu` and `I_nu` come from the ascending power series, summed in
//! double-double arithmetic so that the alternating `J` series keeps full
//! double accuracy up to [`Z_MAX`] despite term growth of order `e^z`.
//! The `I` family is always returned multiplied by `e^{-z}`.

use twofloat::TwoFloat;

use crate::error::{domain, Result};

/// Largest supported argument `z = lambda^(1/4)`, i.e. `lambda <= Z_MAX^4 ~ 5.3e6`.
pub const Z_MAX: f64 = 48.0;

const MAX_TERMS: usize = 600;
const TRUNCATION: f64 = 1e-17;

/// Bessel order `nu = N/2 - 1 + l`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu >= 0.0) || !nu.is_finite() {
            return domain(format!("order must be finite and >= 0, got {nu}"));
        }
        Ok(Order(nu))
    }

    /// Order of `j_l`, `i_l` in dimension `n`.
    pub fn ultraspherical(n: usize, l: usize) -> Result<Self> {
        if n < 2 {
            return domain(format!("dimension must be >= 2, got {n}"));
        }
        Ok(Order(n as f64 / 2.0 - 1.0 + l as f64))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_half_integer(self) -> bool {
        self.0.fract() == 0.5
    }
}

/// `ln Gamma(x)` for `x > 0` (Lanczos, g = 671/128, 14 terms).
#[allow(clippy::excessive_precision)]
pub fn gamma_ln(x: f64) -> Result<f64> {
    const COF: [f64; 14] = [
        57.156_235_665_862_923_5,
        -59.597_960_355_475_491_2,
        14.136_097_974_741_747_1,
        -0.491_913_816_097_620_199,
        0.339_946_499_848_118_887e-4,
        0.465_236_289_270_485_756e-4,
        -0.983_744_753_048_795_646e-4,
        0.158_088_703_224_912_494e-3,
        -0.210_264_441_724_104_883e-3,
        0.217_439_618_115_212_643e-3,
        -0.164_318_106_536_763_890e-3,
        0.844_182_239_838_527_433e-4,
        -0.261_908_384_015_814_087e-4,
        0.368_991_826_595_316_234e-5,
    ];
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("gamma_ln needs a finite x > 0, got {x}"));
    }
    let mut tmp = x + 5.242_187_5;
    tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    let mut y = x;
    for c in COF {
        y += 1.0;
        ser += c / y;
    }
    Ok(tmp + (2.506_628_274_631_000_5 * ser / x).ln())
}

fn check_argument(z: f64) -> Result<()> {
    if !(0.0..=Z_MAX).contains(&z) {
        return domain(format!("argument z = {z} outside [0, {Z_MAX}]"));
    }
    Ok(())
}

/// `sum_k (+-1)^k (z^2/4)^k / (k! (nu+1)_k)`, summed in double-double.
fn hypergeometric_sum(nu: f64, z: f64, alternating: bool) -> f64 {
    let x = TwoFloat::new_mul(z, z) / 4.0;
    let mut term = TwoFloat::from(1.0);
    let mut sum = term;
    for k in 1..=MAX_TERMS {
        let kf = k as f64;
        let prev = term.hi().abs();
        term = term * x / (kf * (nu + kf));
        if alternating {
            term = -term;
        }
        sum += term;
        let t = term.hi().abs();
        if t == 0.0 || (t < prev && t < TRUNCATION * sum.hi().abs()) {
            break;
        }
    }
    f64::from(sum)
}

/// `(z/2)^nu / Gamma(nu+1) * e^{-shift}`, computed in log space.
fn leading_factor(nu: f64, z: f64, shift: f64) -> f64 {
    let log = nu * (0.5 * z).ln() - gamma_ln(nu + 1.0).expect("nu + 1 > 0") - shift;
    log.exp()
}

/// Bessel function of the first kind `J_nu(z)`, `0 <= z <= Z_MAX`.
pub fn bessel_j(nu: Order, z: f64) -> Result<f64> {
    check_argument(z)?;
    let nu = nu.value();
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(leading_factor(nu, z, 0.0) * hypergeometric_sum(nu, z, true))
}

/// `e^{-z} I_nu(z)`, `0 <= z <= Z_MAX`.
pub fn bessel_i_scaled(nu: Order, z: f64) -> Result<f64> {
    check_argument(z)?;
    let nu = nu.value();
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(leading_factor(nu, z, z) * hypergeometric_sum(nu, z, false))
}

/// Values and first three derivatives of `j_l` and of `e^{-z} i_l` at `z`.
///
/// `i_scaled[k]` is `e^{-z}` times the true `k`-th derivative of `i_l`; the
/// removed exponent is kept in `scale_exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselBundle {
    pub n: usize,
    pub l: usize,
    pub z: f64,
    pub j: [f64; 4],
    pub i_scaled: [f64; 4],
    pub scale_exponent: f64,
}

impl BesselBundle {
    /// True (unscaled) `i_l` derivatives. Overflows for large `z`; tests only.
    pub fn i_unscaled(&self) -> [f64; 4] {
        let s = self.scale_exponent.exp();
        self.i_scaled.map(|v| v * s)
    }
}

/// Coefficients of `f^(k)(z) = z^p [A_k(1/z) F_nu(z) + B_k(1/z) F_{nu+1}(z)]`,
/// as polynomials in `w = 1/z` of degree at most three.
#[derive(Debug, Clone, Copy)]
struct DerivativeForm {
    a: [f64; 4],
    b: [f64; 4],
}

impl DerivativeForm {
    /// `F_nu' = (nu/z) F_nu - F_{nu+1}` (J) or `+ F_{nu+1}` (I), and
    /// `F_{nu+1}' = F_nu - ((nu+1)/z) F_{nu+1}` in both cases.
    fn differentiate(&self, p: f64, nu: f64, modified: bool) -> Self {
        let mut a = [0.0; 4];
        let mut b = [0.0; 4];
        let cross = if modified { 1.0 } else { -1.0 };
        for k in 0..4 {
            // d/dz w^k = -k w^{k+1}
            if k + 1 < 4 {
                a[k + 1] += -(k as f64) * self.a[k] + (p + nu) * self.a[k];
                b[k + 1] += -(k as f64) * self.b[k] + (p - nu - 1.0) * self.b[k];
            }
            a[k] += self.b[k];
            b[k] += cross * self.a[k];
        }
        DerivativeForm { a, b }
    }

    fn eval(&self, w: f64, lower: f64, upper: f64) -> f64 {
        let poly = |c: &[f64; 4]| ((c[3] * w + c[2]) * w + c[1]) * w + c[0];
        poly(&self.a) * lower + poly(&self.b) * upper
    }
}

fn derivative_forms(p: f64, nu: f64, modified: bool) -> [DerivativeForm; 4] {
    let f0 = DerivativeForm { a: [1.0, 0.0, 0.0, 0.0], b: [0.0; 4] };
    let f1 = f0.differentiate(p, nu, modified);
    let f2 = f1.differentiate(p, nu, modified);
    let f3 = f2.differentiate(p, nu, modified);
    [f0, f1, f2, f3]
}

/// `j_l(z) = z^{1-N/2} J_{N/2-1+l}(z)` and `i_l` (scaled by `e^{-z}`) with
/// derivatives to third order, all reduced to the pairs `(J_nu, J_{nu+1})`
/// and `(I_nu, I_{nu+1})`.
pub fn ultraspherical_bundle(n: usize, l: usize, z: f64) -> Result<BesselBundle> {
    let order = Order::ultraspherical(n, l)?;
    if !(z > 0.0) {
        return domain(format!("bundle argument must be > 0, got {z}"));
    }
    let nu = order.value();
    let upper = Order(nu + 1.0);
    let (ja, jb) = (bessel_j(order, z)?, bessel_j(upper, z)?);
    let (ia, ib) = (bessel_i_scaled(order, z)?, bessel_i_scaled(upper, z)?);

    let p = 1.0 - n as f64 / 2.0;
    let zp = z.powf(p);
    let w = 1.0 / z;
    let jf = derivative_forms(p, nu, false);
    let if_ = derivative_forms(p, nu, true);
    Ok(BesselBundle {
        n,
        l,
        z,
        j: jf.map(|f| zp * f.eval(w, ja, jb)),
        i_scaled: if_.map(|f| zp * f.eval(w, ia, ib)),
        scale_exponent: z,
    })
}

/// Index pairs `(p, q)` of the six cross products `j^(p) i^(q) - i^(p) j^(q)`.
pub const CROSS_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)];

/// The six cross products of `j_l` and the scaled `i_l`, in [`CROSS_PAIRS`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossProducts(pub [f64; 6]);

impl CrossProducts {
    pub fn from_bundle(b: &BesselBundle) -> Self {
        CrossProducts(CROSS_PAIRS.map(|(p, q)| b.j[p] * b.i_scaled[q] - b.i_scaled[p] * b.j[q]))
    }

    /// Closed forms in terms of `C^+-_l = I_{nu+1} J_nu +- I_nu J_{nu+1}`,
    /// `I_nu J_nu` and `I_{nu+1} J_{nu+1}` (I scaled by `e^{-z}`).
    pub fn closed_form(n: usize, l: usize, z: f64) -> Result<Self> {
        let order = Order::ultraspherical(n, l)?;
        if !(z > 0.0) {
            return domain(format!("cross products need z > 0, got {z}"));
        }
        let upper = Order(order.value() + 1.0);
        let (ja, jb) = (bessel_j(order, z)?, bessel_j(upper, z)?);
        let (ia, ib) = (bessel_i_scaled(order, z)?, bessel_i_scaled(upper, z)?);
        let cp = ib * ja + ia * jb;
        let cm = ib * ja - ia * jb;
        let pa = ia * ja;
        let pb = ib * jb;

        let nf = n as f64;
        let lf = l as f64;
        let ll = lf * (lf + nf - 2.0);
        let zn = z.powi(-(n as i32));
        let (z2, z3, z4) = (z * z, z * z * z, z * z * z * z);

        let x01 = z2 * zn * cp;
        let x02 = z * zn * (2.0 * z * pa - (nf - 1.0) * cp);
        let x12 = zn * (z2 * cm + 2.0 * lf * z * pa - ll * cp);
        let x03 = zn * (z2 * cm + 2.0 * (1.0 - nf + lf) * z * pa + (nf * (nf - 1.0) + ll) * cp);
        let x13 = zn / z
            * (-2.0 * z3 * pb
                + (1.0 - nf + 2.0 * lf) * z2 * cm
                + 2.0 * lf * (1.0 - nf + lf) * z * pa
                + ll * (nf + 1.0) * cp);
        let x23 = zn / z2
            * (-z4 * cp + 2.0 * (nf - 1.0) * z3 * pb
                - (nf - 1.0) * (2.0 * lf + 1.0) * z2 * cm
                - 2.0 * (nf - 3.0) * (lf - 1.0) * lf * z * pa
                + lf * (lf - 1.0) * (lf + nf - 2.0) * (lf + nf - 1.0) * cp);
        Ok(CrossProducts([x01, x02, x12, x03, x13, x23]))
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        let idx = CROSS_PAIRS
            .iter()
            .position(|&pq| pq == (p, q))
            .unwrap_or_else(|| panic!("no cross product ({p}, {q})"));
        self.0[idx]
    }
}
