//! The algebraic characterization of the zeros: the rational system
//!
//! ```text
//! prod_{j=1}^{n} (l - z_j)/(l + z_j) = (-1)^{n-l} e^{-2lx},   l = 1..n,
//! ```
//!
//! its residuals, and Newton refinement on the logarithmic form. The raw
//! products span many orders of magnitude in `l`, so Newton works on
//! `L_l = sum_j ln|(l - z_j)/(l + z_j)| + 2lx` with the sign pattern tracked
//! separately; the Jacobian of the log form is the Cauchy-type matrix
//! `dL_l/dz_j = -2l/(l^2 - z_j^2)`.
//!
//! This module never solves the system from scratch: seeds come from the
//! spectral route or from continuation, and Newton's role is refinement and
//! independent verification.

use crate::error::{Error, Result};
use crate::numkit::{solve_linear, Matrix};
use crate::real::{fi, fp, Real};

/// Guard radius around the residual poles at `z_j = -l`.
pub const BETHE_POLE_GUARD: f64 = 1e-12;

/// Damping budget: the full Newton step is halved at most this many times.
const MAX_HALVINGS: usize = 8;

/// The `n` real zeros of `psi_n(x, .)` at a fixed `x`, stored in strictly
/// descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSet<F: Real = f64> {
    /// Degree (and number of zeros).
    pub n: usize,
    /// Argument parameter.
    pub x: F,
    /// Zeros, strictly descending.
    pub zeros: Vec<F>,
}

impl<F: Real> ZeroSet<F> {
    /// Validates and wraps a zero set.
    ///
    /// Checks length, finiteness, strictly descending order and the proven
    /// branch ranges `z_l in (-l - 1/2, n + 3/2 - l)` (half-unit slack
    /// around the exact limits).
    pub fn new(n: usize, x: F, zeros: Vec<F>) -> Result<Self> {
        if n == 0 || zeros.len() != n {
            return Err(Error::InvalidInput(format!(
                "expected {n} zeros, got {}",
                zeros.len()
            )));
        }
        if !x.is_finite() || zeros.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("non-finite zero set".into()));
        }
        for i in 1..n {
            if !(zeros[i - 1] > zeros[i]) {
                return Err(Error::InvalidInput(format!(
                    "zeros not strictly descending at position {i}"
                )));
            }
        }
        let half = fp::<F>(0.5);
        for (i, &z) in zeros.iter().enumerate() {
            let l = fi::<F>(i + 1);
            let lo = -l - half;
            let hi = fi::<F>(n) + F::one() + half - l;
            if !(z > lo && z < hi) {
                return Err(Error::InvalidInput(format!(
                    "zero {} = {z} outside branch range ({}, {})",
                    i + 1,
                    lo,
                    hi
                )));
            }
        }
        Ok(ZeroSet { n, x, zeros })
    }

    /// The antisymmetric image: the zeros at `-x` are the negated, reversed
    /// zeros at `x` (exact under the algebraic system).
    pub fn mirrored(&self) -> ZeroSet<F> {
        let zeros = self.zeros.iter().rev().map(|&z| -z).collect();
        ZeroSet {
            n: self.n,
            x: -self.x,
            zeros,
        }
    }
}

/// Componentwise residual of the algebraic system.
#[derive(Clone, Debug)]
pub struct BetheResidual<F: Real = f64> {
    /// `values[l-1] = prod_j (l-z_j)/(l+z_j) - (-1)^{n-l} e^{-2lx}`.
    pub values: Vec<F>,
}

fn pole_scan<F: Real>(zs: &ZeroSet<F>) -> Result<()> {
    for l in 1..=zs.n {
        for (j, &z) in zs.zeros.iter().enumerate() {
            if (z + fi(l)).abs() <= fp(BETHE_POLE_GUARD) {
                return Err(Error::Pole(format!(
                    "zero {} = {z} within {BETHE_POLE_GUARD:e} of -{l} (l = {l}, j = {})",
                    j + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Evaluates the raw residual of the algebraic system.
pub fn bethe_residual<F: Real>(zs: &ZeroSet<F>) -> Result<BetheResidual<F>> {
    pole_scan(zs)?;
    let two = fp::<F>(2.0);
    let mut values = Vec::with_capacity(zs.n);
    for l in 1..=zs.n {
        let lf = fi::<F>(l);
        let mut prod = F::one();
        for &z in &zs.zeros {
            prod = prod * (lf - z) / (lf + z);
        }
        let mut rhs = (-two * lf * zs.x).exp();
        if (zs.n - l) % 2 == 1 {
            rhs = -rhs;
        }
        values.push(prod - rhs);
    }
    Ok(BetheResidual { values })
}

/// Logarithmic residual `L_l = sum_j ln|(l-z_j)/(l+z_j)| + 2lx` together
/// with a flag telling whether the sign of each product matches the
/// `(-1)^{n-l}` pattern of the right-hand side.
#[derive(Clone, Debug)]
pub struct LogResidual<F: Real = f64> {
    /// Per-`l` residual of the log form.
    pub values: Vec<F>,
    /// Per-`l` sign agreement with `(-1)^{n-l}`.
    pub signs_ok: Vec<bool>,
}

impl<F: Real> LogResidual<F> {
    /// Largest residual magnitude.
    pub fn max_abs(&self) -> F {
        self.values
            .iter()
            .fold(F::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn all_signs_ok(&self) -> bool {
        self.signs_ok.iter().all(|&s| s)
    }
}

/// Evaluates the logarithmic residual with separately tracked signs.
pub fn log_residual<F: Real>(zs: &ZeroSet<F>) -> Result<LogResidual<F>> {
    pole_scan(zs)?;
    let two = fp::<F>(2.0);
    let mut values = Vec::with_capacity(zs.n);
    let mut signs_ok = Vec::with_capacity(zs.n);
    for l in 1..=zs.n {
        let lf = fi::<F>(l);
        let mut log_sum = two * lf * zs.x;
        let mut negative_factors = 0usize;
        for &z in &zs.zeros {
            let a = lf - z;
            let b = lf + z;
            log_sum = log_sum + (a.abs() / b.abs()).ln();
            if a < F::zero() {
                negative_factors += 1;
            }
            if b < F::zero() {
                negative_factors += 1;
            }
        }
        values.push(log_sum);
        signs_ok.push(negative_factors % 2 == (zs.n - l) % 2);
    }
    Ok(LogResidual { values, signs_ok })
}

/// One damped Newton step restricted to the given rows of the system and
/// the given (unfrozen) variables; rows and variables must be equinumerous.
fn damped_step<F: Real>(zs: &ZeroSet<F>, rows: &[usize], vars: &[usize]) -> Result<ZeroSet<F>> {
    let current = log_residual(zs)?;
    let dim = rows.len();
    if dim == 0 || dim != vars.len() {
        return Err(Error::NonConvergence(format!(
            "Newton system degenerate at x = {}: {} resolvable rows for {} free zeros",
            zs.x,
            dim,
            vars.len()
        )));
    }
    let two = fp::<F>(2.0);
    let jac = Matrix::from_fn(dim, dim, |r, c| {
        let lf = fi::<F>(rows[r] + 1);
        let z = zs.zeros[vars[c]];
        -two * lf / (lf * lf - z * z)
    });
    let rhs = Matrix::from_fn(dim, 1, |r, _| -current.values[rows[r]]);
    let delta = solve_linear(&jac, &rhs)?;
    let residual_over_rows = |res: &LogResidual<F>| {
        rows.iter()
            .fold(F::zero(), |acc, &r| acc.max(res.values[r].abs()))
    };
    let reference = residual_over_rows(&current);

    let mut scale = F::one();
    for _ in 0..=MAX_HALVINGS {
        let mut zeros = zs.zeros.clone();
        for (c, &j) in vars.iter().enumerate() {
            zeros[j] = zeros[j] + scale * delta.get(c, 0);
        }
        if let Ok(candidate) = ZeroSet::new(zs.n, zs.x, zeros) {
            if let Ok(next) = log_residual(&candidate) {
                if residual_over_rows(&next) < reference {
                    return Ok(candidate);
                }
            }
        }
        scale = scale / two;
    }
    Err(Error::NonConvergence(format!(
        "Newton step stalled at x = {}: log-residual {:e} would not decrease",
        zs.x,
        reference.to_f64().unwrap_or(f64::NAN)
    )))
}

/// One damped Newton step on the full log form of the algebraic system.
///
/// Exposed as a building block so convergence behaviour can be observed
/// iterate by iterate; most callers want [`refine_newton`], which also
/// handles the saturated regime by freezing unresolvable rows.
pub fn newton_step<F: Real>(zs: &ZeroSet<F>) -> Result<ZeroSet<F>> {
    let rows: Vec<usize> = (0..zs.n).collect();
    damped_step(zs, &rows, &rows)
}

/// Per-component resolution floor of the log residual: how much `L_l` moves
/// under one-ulp changes of the zeros. Where trajectories saturate towards
/// their integer limits the factors `l - z_j` underflow the significand
/// long before the residual reaches any fixed tolerance, so convergence
/// targets `max(tol, floor)` componentwise.
fn log_residual_floor<F: Real>(zs: &ZeroSet<F>) -> Vec<F> {
    let eps = F::epsilon();
    // Zeros arrive with a few-ulp errors that grow with the system size.
    let spread = fp::<F>(2.0 * zs.n as f64).max(fp(8.0));
    (1..=zs.n)
        .map(|l| {
            let lf = fi::<F>(l);
            let mut acc = F::zero();
            for &z in &zs.zeros {
                let gap = (lf * lf - z * z).abs().max(F::min_positive_value());
                acc = acc + fp::<F>(2.0) * lf * (z.abs() + F::one()) / gap;
            }
            spread * eps * acc
        })
        .collect()
}

/// A product factor smaller than a few ulps of its operands carries no
/// information: its magnitude and sign are rounding artifacts. Rows of the
/// system containing such a factor can neither be measured nor improved at
/// working precision.
pub(crate) fn row_resolvable<F: Real>(zs: &ZeroSet<F>, l: usize) -> bool {
    let lf = fi::<F>(l);
    let eps = fp::<F>(8.0) * F::epsilon();
    zs.zeros.iter().all(|&z| {
        (lf - z).abs() > eps * (z.abs() + F::one()) && (lf + z).abs() > eps * (z.abs() + F::one())
    })
}

/// A zero within a few ulps of a nonzero integer limit cannot move in the
/// scalar type; refinement freezes it.
fn variable_saturated<F: Real>(n: usize, z: F) -> bool {
    let m = z.round();
    let eps = fp::<F>(8.0) * F::epsilon();
    m != F::zero() && m.abs() <= fi(n) && (z - m).abs() <= eps * (z.abs() + F::one())
}

/// Refines a zero set by damped Newton iteration on the log form.
///
/// The input must already lie in the Newton basin (in practice: spectral
/// output or continuation from a neighbouring `x`). Convergence means every
/// resolvable component of the log-form residual is within `tol`, saturated
/// at the working-precision resolution of the residual itself: where a
/// trajectory has reached its integer limit to within rounding, that row of
/// the system can neither be measured nor improved, and the corresponding
/// zero is frozen. The `(-1)^{n-l}` sign pattern is validated over the
/// resolvable rows at the solution; a mismatch reports a wrong-branch
/// error.
pub fn refine_newton<F: Real>(zs: &ZeroSet<F>, tol: F, max_iter: usize) -> Result<ZeroSet<F>> {
    if !(tol > F::zero()) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if max_iter == 0 {
        return Err(Error::InvalidInput("max_iter must be at least 1".into()));
    }
    let mut current = zs.clone();
    let mut steps = 0usize;
    loop {
        let res = log_residual(&current)?;
        let floor = log_residual_floor(&current);
        let rows: Vec<usize> = (0..current.n)
            .filter(|&r| row_resolvable(&current, r + 1))
            .collect();
        let converged = rows
            .iter()
            .all(|&r| res.values[r].abs() <= tol.max(floor[r]));
        if converged {
            if !rows.iter().all(|&r| res.signs_ok[r]) {
                return Err(Error::WrongBranch(format!(
                    "sign pattern of the algebraic system broken at x = {}",
                    current.x
                )));
            }
            return Ok(current);
        }
        if steps == max_iter {
            return Err(Error::NonConvergence(format!(
                "Newton refinement: log-residual {:e} above {:e} after {max_iter} iterations",
                res.max_abs().to_f64().unwrap_or(f64::NAN),
                tol.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let vars: Vec<usize> = (0..current.n)
            .filter(|&j| !variable_saturated(current.n, current.zeros[j]))
            .collect();
        current = damped_step(&current, &rows, &vars)?;
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n2_closed_form(x: f64) -> ZeroSet<f64> {
        // Roots of (1+u)^2 z^2 - 3(1-u^2) z + 2(1 - 4u + u^2) at u = e^{-2x}.
        let u = (-2.0 * x).exp();
        let a = (1.0 + u).powi(2);
        let b = -3.0 * (1.0 - u * u);
        let c = 2.0 * (1.0 - 4.0 * u + u * u);
        let disc = (b * b - 4.0 * a * c).sqrt();
        let z1 = (-b + disc) / (2.0 * a);
        let z2 = (-b - disc) / (2.0 * a);
        ZeroSet::new(2, x, vec![z1, z2]).unwrap()
    }

    #[test]
    fn residual_vanishes_for_degree_one() {
        // (1 - tanh x)/(1 + tanh x) = e^{-2x} as an algebraic identity; in
        // floating point the quotient amplifies the rounding of tanh by
        // 1/(1 + tanh x), so the contract bound is 1e-10 (1 + e^{-2x}) while
        // moderate x stays at rounding level.
        for &x in &[-3.0f64, -0.2, 0.0, 0.5, 4.0] {
            let zs = ZeroSet::new(1, x, vec![x.tanh()]).unwrap();
            let r = bethe_residual(&zs).unwrap();
            assert!(
                r.values[0].abs() <= 1e-10 * (1.0 + (-2.0 * x).exp()),
                "x={x}"
            );
        }
        for &x in &[0.0f64, 0.5, 4.0] {
            let zs = ZeroSet::new(1, x, vec![x.tanh()]).unwrap();
            let r = bethe_residual(&zs).unwrap();
            assert!(
                r.values[0].abs() <= 1e-15 * (1.0 + (-2.0 * x).exp()),
                "x={x}"
            );
        }
    }

    #[test]
    fn residual_vanishes_for_degree_two_closed_form() {
        let x = 0.5 * 2.0f64.ln();
        let zs = n2_closed_form(x);
        assert!((zs.zeros[0] + zs.zeros[1] - 1.0).abs() < 1e-14);
        assert!((zs.zeros[0] * zs.zeros[1] + 2.0 / 3.0).abs() < 1e-14);
        let r = bethe_residual(&zs).unwrap();
        for (l, v) in r.values.iter().enumerate() {
            assert!(v.abs() < 1e-14, "l={} residual={v}", l + 1);
        }
        // Hand check of the l = 1 product: (1 - S + P)/(1 + S + P) = -1/2.
        let (s, p) = (zs.zeros[0] + zs.zeros[1], zs.zeros[0] * zs.zeros[1]);
        assert!(((1.0 - s + p) / (1.0 + s + p) + 0.5).abs() < 1e-14);
    }

    #[test]
    fn perturbed_input_fails_the_system() {
        // {1.1, -1} puts a zero exactly on the l = 1 pole, which the
        // residual contract rejects by name.
        let zs = ZeroSet::new(2, 0.0f64, vec![1.1, -1.0]).unwrap();
        match bethe_residual(&zs) {
            Err(Error::Pole(msg)) => assert!(msg.contains("l = 1"), "{msg}"),
            other => panic!("expected pole error, got {other:?}"),
        }
        // A perturbation clear of the poles must leave a visible residual.
        let zs = ZeroSet::new(2, 0.0f64, vec![1.1, -0.95]).unwrap();
        let r = bethe_residual(&zs).unwrap();
        assert!(r.values.iter().any(|v| v.abs() >= 0.02), "{:?}", r.values);
    }

    #[test]
    fn exact_zeros_are_a_fixed_point() {
        let x = 0.5 * 2.0f64.ln();
        let zs = n2_closed_form(x);
        let refined = refine_newton(&zs, 1e-12, 50).unwrap();
        assert_eq!(refined.zeros, zs.zeros);
    }

    #[test]
    fn newton_converges_from_a_coarse_seed() {
        let x = 0.5 * 2.0f64.ln();
        let seed = ZeroSet::new(2, x, vec![1.4, -0.5]).unwrap();
        let refined = refine_newton(&seed, 1e-12, 5).unwrap();
        let exact = n2_closed_form(x);
        for (a, b) in refined.zeros.iter().zip(&exact.zeros) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn newton_quadratic_convergence_ratio() {
        let x = 0.5 * 2.0f64.ln();
        let exact = n2_closed_form(x);
        let mut current = ZeroSet::new(2, x, vec![1.4, -0.5]).unwrap();
        let err = |zs: &ZeroSet<f64>| -> f64 {
            zs.zeros
                .iter()
                .zip(&exact.zeros)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        let mut prev = err(&current);
        let mut ratios = Vec::new();
        for _ in 0..4 {
            current = newton_step(&current).unwrap();
            let e = err(&current);
            if e > 1e-14 && prev > 1e-14 {
                ratios.push(e / (prev * prev));
            }
            prev = e;
        }
        // Observed bound for the n = 2 closed-form case, frozen as a
        // regression value: the quadratic ratio stays below 2.
        assert!(!ratios.is_empty());
        for r in ratios {
            assert!(r < 2.0, "quadratic ratio {r}");
        }
    }

    #[test]
    fn exhausted_budget_reports_nonconvergence() {
        let x = 0.5 * 2.0f64.ln();
        let seed = ZeroSet::new(2, x, vec![2.2, -1.4]).unwrap();
        match refine_newton(&seed, 1e-14, 1) {
            Err(Error::NonConvergence(msg)) => assert!(msg.contains("1 iterations"), "{msg}"),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn wrong_order_is_rejected() {
        assert!(ZeroSet::new(2, 0.0f64, vec![-1.0, 1.0]).is_err());
        assert!(ZeroSet::new(2, 0.0f64, vec![1.0, 1.0]).is_err());
        assert!(ZeroSet::new(2, 0.0f64, vec![9.0, -1.0]).is_err());
    }

    #[test]
    fn mirror_negates_and_reverses() {
        let zs = ZeroSet::new(2, 0.7f64, vec![1.5, -0.3]).unwrap();
        let m = zs.mirrored();
        assert_eq!(m.x, -0.7);
        assert_eq!(m.zeros, vec![0.3, -1.5]);
    }
}
