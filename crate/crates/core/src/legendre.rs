//! Evaluation of the renormalized associated Legendre function
//! `psi_n(x, z) = Gamma(1 - z) P_n^z(tanh x)`, its exact characteristic
//! polynomial, and the bound-state normalization constants.
//!
//! The normalization is chosen so that the terminating hypergeometric sum
//!
//! ```text
//! psi_n(x, z) = e^{zx} (1 + e^{-2x})^{-n}
//!               sum_{m=0}^{n} e^{-2mx} C(n,m) prod_{j=1}^{m} (z+n+1-j)/(z-j)
//! ```
//!
//! carries no gamma factors: the function is rational in the order `z` with
//! simple poles only at `z = 1, ..., n`, and the gamma function is never
//! evaluated numerically. The rational product is accumulated incrementally
//! per term, which keeps the pole structure explicit.

use crate::error::{Error, Result};
use crate::real::{fi, fp, Real};

/// Guard radius around the poles `z = 1, ..., n`.
pub const POLE_GUARD: f64 = 1e-12;

/// Largest degree for which the exact characteristic-polynomial table fits
/// in checked 128-bit integers.
pub const MAX_EXACT_DEGREE: usize = 24;

/// Largest degree supported by the exact normalization constants.
pub const MAX_NORM_DEGREE: usize = 30;

/// Parameters of one evaluation point.
#[derive(Clone, Copy, Debug)]
pub struct LegendreParams<F: Real = f64> {
    /// Degree, `n >= 1`.
    pub n: usize,
    /// Argument parameter; the Legendre argument is `y = tanh x`.
    pub x: F,
    /// Order.
    pub z: F,
}

impl<F: Real> LegendreParams<F> {
    pub fn new(n: usize, x: F, z: F) -> Self {
        LegendreParams { n, x, z }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("degree must be at least 1".into()));
        }
        if !self.x.is_finite() || !self.z.is_finite() {
            return Err(Error::InvalidInput("x and z must be finite".into()));
        }
        check_pole(self.n, self.z)
    }
}

/// Rejects orders within [`POLE_GUARD`] of the simple poles `z = 1, ..., n`.
fn check_pole<F: Real>(n: usize, z: F) -> Result<()> {
    let zr = z.round();
    if zr >= F::one() && zr <= fi(n) && (z - zr).abs() <= fp(POLE_GUARD) {
        return Err(Error::Pole(format!(
            "z = {z} lies within {POLE_GUARD:e} of the pole at z = {zr}"
        )));
    }
    Ok(())
}

/// Series weights `e^{-2mx} / (1 + e^{-2x})^n` for `m = 0..=n`, computed on
/// whichever side of `x = 0` keeps every intermediate bounded.
fn series_weights<F: Real>(n: usize, x: F) -> Vec<F> {
    let two = fp::<F>(2.0);
    if x >= F::zero() {
        let u = (-two * x).exp();
        let denom = (F::one() + u).powi(n as i32);
        let mut w = Vec::with_capacity(n + 1);
        let mut um = F::one();
        for _ in 0..=n {
            w.push(um / denom);
            um = um * u;
        }
        w
    } else {
        // e^{-2mx}/(1+e^{-2x})^n = v^{n-m}/(1+v)^n with v = e^{2x} < 1.
        let v = (two * x).exp();
        let denom = (F::one() + v).powi(n as i32);
        let mut w = vec![F::zero(); n + 1];
        let mut vp = F::one();
        for m in (0..=n).rev() {
            w[m] = vp / denom;
            vp = vp * v;
        }
        w
    }
}

/// Evaluates `psi_n(x, z)` through the terminating series.
///
/// Fails with a pole error for `z` within [`POLE_GUARD`] of `{1, ..., n}`
/// and with a range error when `e^{zx}` overflows the scalar type (the
/// series prefactor is then not representable; evaluate in log scale
/// externally if that regime is needed).
pub fn eval_psi<F: Real>(p: &LegendreParams<F>) -> Result<F> {
    p.validate()?;
    let n = p.n;
    let w = series_weights(n, p.x);
    let mut acc = F::zero();
    let mut rational = F::one();
    let mut binom = F::one();
    for m in 0..=n {
        if m > 0 {
            // Incremental factor for step m: (z + n + 1 - m) / (z - m).
            rational = rational * (p.z + fi(n) + F::one() - fi(m)) / (p.z - fi(m));
            binom = binom * fi(n - m + 1) / fi(m);
        }
        acc = acc + w[m] * binom * rational;
    }
    let prefactor = (p.z * p.x).exp();
    if !prefactor.is_finite() {
        return Err(Error::Range(format!(
            "exp(z*x) overflows for z = {}, x = {}; evaluate in log scale",
            p.z, p.x
        )));
    }
    let value = prefactor * acc;
    if !value.is_finite() {
        return Err(Error::Range("psi evaluation overflowed".into()));
    }
    Ok(value)
}

/// Closed form of `psi_n(0, z) = prod_{j=1}^{n} (z+n+1-2j)/(z-j)`.
pub fn eval_psi_at_zero<F: Real>(n: usize, z: F) -> Result<F> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    check_pole(n, z)?;
    let mut prod = F::one();
    for j in 1..=n {
        prod = prod * (z + fi(n) + F::one() - fp::<F>(2.0) * fi(j)) / (z - fi(j));
    }
    Ok(prod)
}

/// Exact bivariate table of the characteristic polynomial
/// `det(zI - Z(x)) = sum_m u^m C(n,m) prod_{j<=m}(z+n+1-j) prod_{k>m}(z-k)`
/// with `u = e^{-2x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCharPoly {
    /// Degree.
    pub n: usize,
    /// `table[m][k]` is the exact integer coefficient of `u^m z^k`.
    pub table: Vec<Vec<i128>>,
}

impl ExactCharPoly {
    /// Evaluates the table at `(u, z)` in the scalar type.
    pub fn eval<F: Real>(&self, u: F, z: F) -> F {
        let mut acc = F::zero();
        let mut um = F::one();
        for row in &self.table {
            // Horner in z.
            let mut v = F::zero();
            for &c in row.iter().rev() {
                v = v * z + fp(c as f64);
            }
            acc = acc + um * v;
            um = um * u;
        }
        acc
    }
}

/// Exact binomial coefficient in checked 128-bit arithmetic.
pub(crate) fn binom_i128(n: usize, k: usize) -> Option<i128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 1..=k {
        // r = C(n-k+i-1, i-1) * (n-k+i) / i is exact at every step.
        r = r.checked_mul((n - k + i) as i128)?;
        r /= i as i128;
    }
    Some(r)
}

/// Multiplies the polynomial (degree `deg`, coefficients in `poly`) by the
/// monic linear factor `z + c` in place. Returns `None` on overflow.
fn mul_linear_checked(poly: &mut [i128], deg: usize, c: i128) -> Option<()> {
    for i in (0..=deg + 1).rev() {
        let shifted = if i > 0 { poly[i - 1] } else { 0 };
        let scaled = if i <= deg { c.checked_mul(poly[i])? } else { 0 };
        poly[i] = shifted.checked_add(scaled)?;
    }
    Some(())
}

fn expand_rows_checked(n: usize) -> Option<Vec<Vec<i128>>> {
    let mut table = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut row = vec![0i128; n + 1];
        row[0] = binom_i128(n, m)?;
        let mut deg = 0usize;
        for j in 1..=m {
            mul_linear_checked(&mut row, deg, (n + 1 - j) as i128)?;
            deg += 1;
        }
        for k in (m + 1)..=n {
            mul_linear_checked(&mut row, deg, -(k as i128))?;
            deg += 1;
        }
        table.push(row);
    }
    Some(table)
}

/// Expands the characteristic polynomial exactly over the integers.
///
/// Every row `m` is the expansion of
/// `C(n,m) prod_{j=1}^{m}(z+n+1-j) prod_{k=m+1}^{n}(z-k)`; the arithmetic is
/// overflow-checked and fails with a capacity error beyond
/// [`MAX_EXACT_DEGREE`].
pub fn charpoly_exact(n: usize) -> Result<ExactCharPoly> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    match expand_rows_checked(n) {
        Some(table) => Ok(ExactCharPoly { n, table }),
        None => Err(Error::Capacity {
            requested: n,
            max: MAX_EXACT_DEGREE,
        }),
    }
}

/// Real coefficient vector of `det(zI - Z(x))` at fixed `x`.
#[derive(Clone, Debug)]
pub struct CharPoly<F: Real = f64> {
    /// Degree.
    pub n: usize,
    /// `u = e^{-2x}`.
    pub u: F,
    /// `coeffs[k]` multiplies `z^k`; the leading coefficient is `(1+u)^n`.
    pub coeffs: Vec<F>,
}

impl<F: Real> CharPoly<F> {
    /// Horner evaluation at `z`.
    pub fn eval(&self, z: F) -> F {
        let mut v = F::zero();
        for &c in self.coeffs.iter().rev() {
            v = v * z + c;
        }
        v
    }
}

/// Collapses the exact table at `u = e^{-2x}`.
///
/// Rejects `x < -300`, where `u` itself (and the coefficients with it)
/// leaves the double range; callers cover that regime through the
/// antisymmetric mirror of the zero set instead.
pub fn charpoly_at<F: Real>(n: usize, x: F) -> Result<CharPoly<F>> {
    if !x.is_finite() {
        return Err(Error::InvalidInput("x must be finite".into()));
    }
    if x < fp(-300.0) {
        return Err(Error::Range(format!(
            "u = exp(-2x) overflows for x = {x}; use the antisymmetric mirror"
        )));
    }
    let exact = charpoly_exact(n)?;
    let u = (fp::<F>(-2.0) * x).exp();
    let mut coeffs = vec![F::zero(); n + 1];
    let mut um = F::one();
    for row in &exact.table {
        for (k, &c) in row.iter().enumerate() {
            coeffs[k] = coeffs[k] + um * fp(c as f64);
        }
        um = um * u;
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Range(format!(
            "characteristic polynomial coefficients overflow at x = {x}"
        )));
    }
    Ok(CharPoly { n, u, coeffs })
}

/// Evaluates the characteristic polynomial at `(x, z)` in factored form,
/// term by term:
///
/// ```text
/// sum_m u^m C(n,m) prod_{j<=m} (z+n+1-j) prod_{k>m} (z-k),  u = e^{-2x}.
/// ```
///
/// Unlike Horner on the expanded coefficients this never cancels
/// catastrophically at large `|z|`, so it serves as the reference value for
/// determinant comparisons. It also has no integer-capacity limit.
pub fn charpoly_value<F: Real>(n: usize, x: F, z: F) -> Result<F> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if !x.is_finite() || !z.is_finite() {
        return Err(Error::InvalidInput("x and z must be finite".into()));
    }
    if x < fp(-300.0) {
        return Err(Error::Range(format!(
            "u = exp(-2x) overflows for x = {x}; use the antisymmetric mirror"
        )));
    }
    let u = (fp::<F>(-2.0) * x).exp();
    let mut acc = F::zero();
    let mut um = F::one();
    let mut binom = F::one();
    for m in 0..=n {
        if m > 0 {
            um = um * u;
            binom = binom * fi(n - m + 1) / fi(m);
        }
        let mut term = um * binom;
        for j in 1..=m {
            term = term * (z + fi(n + 1 - j));
        }
        for k in (m + 1)..=n {
            term = term * (z - fi(k));
        }
        acc = acc + term;
    }
    if !acc.is_finite() {
        return Err(Error::Range(format!(
            "characteristic polynomial value overflows at x = {x}, z = {z}"
        )));
    }
    Ok(acc)
}

/// Bound-state normalization constants `nu_j`, exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormConstants {
    /// Degree.
    pub n: usize,
    /// `nu[j-1]` is the constant for the bound state at `z = -j`.
    pub nu: Vec<i128>,
}

/// Form A of the normalization constants: `nu_j = j C(2j,j) C(n+j,n-j)`.
pub(crate) fn nu_exact(n: usize) -> Result<Vec<i128>> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if n > MAX_NORM_DEGREE {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_NORM_DEGREE,
        });
    }
    let mut nu = Vec::with_capacity(n);
    for j in 1..=n {
        let v = binom_i128(2 * j, j)
            .and_then(|a| binom_i128(n + j, n - j).and_then(|b| a.checked_mul(b)))
            .and_then(|ab| ab.checked_mul(j as i128))
            .ok_or(Error::Capacity {
                requested: n,
                max: MAX_NORM_DEGREE,
            })?;
        nu.push(v);
    }
    Ok(nu)
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Form B: `nu_j = (-1)^{n-j} 2j prod_{k != j} (j+k)/(j-k)`, accumulated as
/// an exact fraction with per-step reduction.
fn nu_product_form(n: usize, j: usize) -> Result<i128> {
    let mut num: i128 = 2 * j as i128;
    let mut den: i128 = 1;
    for k in 1..=n {
        if k == j {
            continue;
        }
        num = num.checked_mul((j + k) as i128).ok_or(Error::Capacity {
            requested: n,
            max: MAX_NORM_DEGREE,
        })?;
        den = den
            .checked_mul(j as i128 - k as i128)
            .expect("denominator factors stay small");
        let g = gcd_i128(num, den);
        num /= g;
        den /= g;
    }
    if den.abs() != 1 {
        return Err(Error::Internal(format!(
            "normalization product form did not reduce to an integer for n={n}, j={j}"
        )));
    }
    let mut v = num / den;
    if (n - j) % 2 == 1 {
        v = -v;
    }
    Ok(v)
}

/// Computes the normalization constants through both closed forms and
/// insists they agree exactly.
pub fn norm_constants(n: usize) -> Result<NormConstants> {
    let form_a = nu_exact(n)?;
    for (idx, &a) in form_a.iter().enumerate() {
        let b = nu_product_form(n, idx + 1)?;
        if a != b {
            return Err(Error::Internal(format!(
                "normalization constant mismatch at n={n}, j={}: {a} vs {b}",
                idx + 1
            )));
        }
    }
    Ok(NormConstants { n, nu: form_a })
}
