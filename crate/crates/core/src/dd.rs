//! Double-word (compensated) arithmetic.
//!
//! The scattering weights `nu_j e^{-2jx}` span many orders of magnitude, so
//! rounding the spectral matrices to working precision already perturbs the
//! Cayley transform at the `eps * |Nt|` level, which is fatal near `x = 0`
//! for larger degrees. Assembling those matrices in double-word precision
//! and refining the solves against double-word residuals removes that error
//! without leaving the scalar type: each `Dd<F>` value carries an unevaluated
//! high/low sum with roughly twice the significand of `F`.

use crate::error::{Error, Result};
use crate::numkit::{solve_linear, Matrix};
use crate::real::Real;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd<F: Real> {
    hi: F,
    lo: F,
}

#[inline]
fn two_sum<F: Real>(a: F, b: F) -> (F, F) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum<F: Real>(a: F, b: F) -> (F, F) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod<F: Real>(a: F, b: F) -> (F, F) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl<F: Real> Dd<F> {
    pub fn zero() -> Self {
        Dd {
            hi: F::zero(),
            lo: F::zero(),
        }
    }

    pub fn one() -> Self {
        Dd {
            hi: F::one(),
            lo: F::zero(),
        }
    }

    pub fn from_f(v: F) -> Self {
        Dd {
            hi: v,
            lo: F::zero(),
        }
    }

    /// Exact embedding of a 128-bit integer (up to the precision of two
    /// `F` words).
    pub fn from_i128(v: i128) -> Self {
        let hi64 = v as f64;
        let back = hi64 as i128;
        let lo64 = (v - back) as f64;
        let hi = F::from_f64(hi64).expect("convertible");
        let lo = F::from_f64(lo64).expect("convertible");
        let (h, l) = two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn hi(self) -> F {
        self.hi
    }

    pub fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r1 = self.sub(o.mul(Dd::from_f(q1)));
        let q2 = r1.hi / o.hi;
        let r2 = r1.sub(o.mul(Dd::from_f(q2)));
        let q3 = r2.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }

    pub fn sqrt(self) -> Self {
        let s = self.hi.sqrt();
        if s == F::zero() || !s.is_finite() {
            return Dd::from_f(s);
        }
        // One Newton step in double-word arithmetic.
        let sd = Dd::from_f(s);
        let half = F::from_f64(0.5).expect("convertible");
        self.div(sd).add(sd).mul(Dd::from_f(half))
    }
}

/// Solves `a * X = b` where both sides are held in double-word precision:
/// the working-precision LU factorization is corrected by iterative
/// refinement against double-word residuals, giving entrywise accuracy near
/// `ulp(F)` for the condition numbers the spectral route produces.
///
/// Rows are equilibrated to unit max-norm first (which leaves the solution
/// unchanged): the spectral systems are strongly graded, and without the
/// scaling their legitimately small pivots would trip the relative pivot
/// floor of the factorization.
pub(crate) fn solve_dd<F: Real>(a: &[Dd<F>], b: &[Dd<F>], n: usize, m: usize) -> Result<Vec<F>> {
    if a.len() != n * n || b.len() != n * m {
        return Err(Error::InvalidInput(
            "double-word solve shape mismatch".into(),
        ));
    }
    let mut row_scale = vec![F::one(); n];
    for i in 0..n {
        let mut biggest = F::zero();
        for j in 0..n {
            biggest = biggest.max(a[i * n + j].hi().abs());
        }
        if biggest > F::zero() && biggest.is_finite() {
            row_scale[i] = biggest;
        }
    }
    let a_s: Vec<Dd<F>> = (0..n * n)
        .map(|idx| a[idx].div(Dd::from_f(row_scale[idx / n])))
        .collect();
    let b_s: Vec<Dd<F>> = (0..n * m)
        .map(|idx| b[idx].div(Dd::from_f(row_scale[idx / m])))
        .collect();

    let a_f = Matrix::from_fn(n, n, |r, c| a_s[r * n + c].hi());
    let b_f = Matrix::from_fn(n, m, |r, c| b_s[r * m + c].hi());
    let mut x = solve_linear(&a_f, &b_f)?;
    for _ in 0..3 {
        let mut residual = Matrix::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                let mut acc = b_s[i * m + j];
                for k in 0..n {
                    acc = acc.sub(a_s[i * n + k].mul(Dd::from_f(x.get(k, j))));
                }
                residual.set(i, j, acc.hi());
            }
        }
        let correction = solve_linear(&a_f, &residual)?;
        for i in 0..n {
            for j in 0..m {
                x.set(i, j, x.get(i, j) + correction.get(i, j));
            }
        }
    }
    Ok((0..n * m).map(|idx| x.get(idx / m, idx % m)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_cancellation() {
        // (1e16 + 1) - 1e16 collapses in f64 but survives in Dd.
        let big = Dd::<f64>::from_f(1e16);
        let one = Dd::<f64>::one();
        let diff = big.add(one).sub(big);
        assert_eq!(diff.hi(), 1.0);
    }

    #[test]
    fn dd_i128_embedding_is_exact() {
        let v: i128 = 123_456_789_012_345_678_901_234_567;
        let d = Dd::<f64>::from_i128(v);
        let reconstructed = d.hi as i128 + d.lo as i128;
        assert_eq!(reconstructed, v);
    }

    #[test]
    fn dd_sqrt_squares_back() {
        let two = Dd::<f64>::from_f(2.0);
        let r = two.sqrt();
        let sq = r.mul(r).sub(two);
        assert!(sq.hi().abs() < 1e-30, "{}", sq.hi());
    }

    #[test]
    fn dd_division_round_trips() {
        let a = Dd::<f64>::from_f(1.0);
        let b = Dd::<f64>::from_f(3.0);
        let q = a.div(b);
        let back = q.mul(b).sub(a);
        assert!(back.hi().abs() < 1e-30);
    }
}
