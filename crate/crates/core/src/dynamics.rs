//! The differential characterization: tracking the zeros in `x` from the
//! exact initial configuration `z_l(0) = n + 1 - 2l` with the closed-form
//! initial slopes.
//!
//! The zeros satisfy the first-order system
//!
//! ```text
//! z_l'(x) = prod_{j=1}^{n} (j^2 - z_l^2) / prod_{j != l} (z_j^2 - z_l^2),
//! ```
//!
//! but that product form cannot be integrated pointwise: along the true
//! flow the squares of two zeros coincide whenever one zero crosses an
//! integer `m` while another crosses `-m` (for n = 4 this first happens
//! near x = 0.398 with z_2 = -z_4 = 2), and the formula degenerates to a
//! removable 0/0 there; at `x = 0` itself every zero is paired with its
//! negative. The tracker therefore advances the equivalent second-order
//! (particle-dynamics) form
//!
//! ```text
//! z_l'' + 2 z_l z_l' = sum_{j != l} 2 z_l' z_j' / (z_l - z_j),
//! ```
//!
//! whose denominators `z_l - z_j` stay bounded away from zero for all real
//! `x` (the zeros never cross), seeding the velocities with the closed-form
//! slopes. The first-order structure is not lost: the linear identity
//! `sum_j z_j'/(l^2 - z_j^2) = 1` behind it is a per-step invariant of the
//! tracked flow, and [`rs_residual`] checks the second-order equations
//! independently with finite differences of spectrally computed
//! trajectories.

use crate::bethe::ZeroSet;
use crate::error::{Error, Result};
use crate::real::{fp, Real};
use crate::spectral::zeros_spectral;

/// Initial trial step.
const INITIAL_STEP: f64 = 1e-4;

/// Smallest step before the integrator reports stiffness.
const MIN_STEP: f64 = 1e-10;

/// Rejection guard on the gap between adjacent zeros; the true flow keeps
/// gaps of order 1, so a near-crossing only ever signals integration error.
const CROSSING_GUARD: f64 = 1e-10;

/// Largest `|x|` the tracker will integrate to; beyond it the zeros sit
/// within 1e-40 of their integer limits and callers should clamp.
pub const MAX_TRACK_X: f64 = 50.0;

/// Admissible integration tolerances.
pub const TOL_RANGE: (f64, f64) = (1e-12, 1e-4);

/// Exact initial configuration and slopes at `x = 0`.
///
/// `zeros[l-1] = n + 1 - 2l` descending, and the slopes follow the closed
/// form with numerator `-prod_{j != |n+1-2l|} ((n+1-2l)^2 - j^2)` over
/// `2^{n-1} prod_{j != l, n+1-l} 2(l-j)^2`.
pub fn initial_conditions<F: Real>(n: usize) -> Result<(Vec<F>, Vec<F>)> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let mut zeros = Vec::with_capacity(n);
    let mut slopes = Vec::with_capacity(n);
    for l in 1..=n {
        let z0 = n as i64 + 1 - 2 * l as i64;
        zeros.push(fp::<F>(z0 as f64));

        let skip = z0.unsigned_abs() as usize;
        let mut numerator = F::one();
        for j in 1..=n {
            if j == skip {
                continue;
            }
            numerator = numerator * fp::<F>((z0 * z0 - (j * j) as i64) as f64);
        }
        numerator = -numerator;

        let mut denominator = fp::<F>(2.0).powi(n as i32 - 1);
        for j in 1..=n {
            if j == l || j == n + 1 - l {
                continue;
            }
            let d = l as i64 - j as i64;
            denominator = denominator * fp::<F>(2.0 * (d * d) as f64);
        }
        slopes.push(numerator / denominator);
    }
    Ok((zeros, slopes))
}

/// Acceleration of the second-order system; `None` when two zeros sit
/// within the crossing guard (which the true flow forbids).
fn accelerations<F: Real>(n: usize, z: &[F], v: &[F]) -> Option<Vec<F>> {
    let guard = fp::<F>(CROSSING_GUARD);
    let two = fp::<F>(2.0);
    let mut out = Vec::with_capacity(n);
    for l in 0..n {
        let mut coupling = F::zero();
        for j in 0..n {
            if j == l {
                continue;
            }
            let gap = z[l] - z[j];
            if gap.abs() < guard {
                return None;
            }
            coupling = coupling + two * v[l] * v[j] / gap;
        }
        out.push(coupling - two * z[l] * v[l]);
    }
    Some(out)
}

/// Dormand-Prince 5(4) coefficients.
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights (the last stage row of `DP_A` plus a zero).
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Embedded fourth-order weights.
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive tracker state: position, zeros with their velocities, and the
/// current trial step.
#[derive(Clone, Debug)]
pub struct OdeState<F: Real = f64> {
    n: usize,
    x: F,
    zeros: Vec<F>,
    velocities: Vec<F>,
    step: F,
}

impl<F: Real> OdeState<F> {
    /// State at `x = 0`: the exact configuration with its exact slopes.
    pub fn initial(n: usize) -> Result<Self> {
        let (zeros, velocities) = initial_conditions(n)?;
        Ok(OdeState {
            n,
            x: F::zero(),
            zeros,
            velocities,
            step: fp(INITIAL_STEP),
        })
    }

    pub fn x(&self) -> F {
        self.x
    }

    pub fn zeros(&self) -> &[F] {
        &self.zeros
    }

    pub fn step(&self) -> F {
        self.step
    }

    /// Velocities `z_l'(x)` carried along the flow.
    pub fn slopes(&self) -> &[F] {
        &self.velocities
    }

    /// Takes one accepted Dormand-Prince step of size at most `h_max` and
    /// returns its length. Local error is controlled to `tol` per unit `x`
    /// on the max norm of the embedded estimate over positions and
    /// velocities.
    pub fn try_step(&mut self, h_max: F, tol: F) -> Result<F> {
        let n = self.n;
        let mut h = self.step.min(h_max);
        let floor = fp::<F>(MIN_STEP);
        loop {
            if h < floor {
                return Err(Error::Stiffness(format!(
                    "step collapsed below {MIN_STEP:e} at x = {}",
                    self.x
                )));
            }
            // Stage derivatives for positions (kz) and velocities (kv).
            let mut kz: Vec<Vec<F>> = Vec::with_capacity(7);
            let mut kv: Vec<Vec<F>> = Vec::with_capacity(7);
            let mut rejected = false;
            for s in 0..7 {
                let mut zs = self.zeros.clone();
                let mut vs = self.velocities.clone();
                for (j, (kzj, kvj)) in kz.iter().zip(&kv).enumerate() {
                    let a = fp::<F>(DP_A[s][j]);
                    if a != F::zero() {
                        for i in 0..n {
                            zs[i] = zs[i] + h * a * kzj[i];
                            vs[i] = vs[i] + h * a * kvj[i];
                        }
                    }
                }
                match accelerations(n, &zs, &vs) {
                    Some(acc) => {
                        kz.push(vs);
                        kv.push(acc);
                    }
                    None => {
                        rejected = true;
                        break;
                    }
                }
            }
            if rejected {
                h = h * fp(0.5);
                continue;
            }

            let mut err = F::zero();
            let mut next_z = self.zeros.clone();
            let mut next_v = self.velocities.clone();
            for i in 0..n {
                let mut dz5 = F::zero();
                let mut dz4 = F::zero();
                let mut dv5 = F::zero();
                let mut dv4 = F::zero();
                for s in 0..7 {
                    let b5 = fp::<F>(DP_B5[s]);
                    let b4 = fp::<F>(DP_B4[s]);
                    dz5 = dz5 + b5 * kz[s][i];
                    dz4 = dz4 + b4 * kz[s][i];
                    dv5 = dv5 + b5 * kv[s][i];
                    dv4 = dv4 + b4 * kv[s][i];
                }
                next_z[i] = next_z[i] + h * dz5;
                next_v[i] = next_v[i] + h * dv5;
                err = err.max((h * (dz5 - dz4)).abs());
                err = err.max((h * (dv5 - dv4)).abs());
            }
            let allowed = tol * h;
            if err <= allowed {
                self.x = self.x + h;
                self.zeros = next_z;
                self.velocities = next_v;
                let grow = if err > F::zero() {
                    fp::<F>(0.9) * (allowed / err).powf(fp(0.2))
                } else {
                    fp(5.0)
                };
                self.step = h * grow.max(fp(0.2)).min(fp(5.0));
                return Ok(h);
            }
            let shrink = fp::<F>(0.9) * (allowed / err).powf(fp(0.2));
            h = h * shrink.max(fp(0.2)).min(fp(1.0));
        }
    }

    /// Continuation to `target >= x`, accepting steps until it is reached.
    pub fn advance_to(&mut self, target: F, tol: F) -> Result<()> {
        if target < self.x {
            return Err(Error::InvalidInput(format!(
                "continuation runs in increasing x: at {}, asked for {target}",
                self.x
            )));
        }
        check_tol(tol)?;
        let tiny = fp::<F>(1e-15);
        while self.x < target {
            let remaining = target - self.x;
            if remaining <= tiny * F::one().max(target.abs()) {
                self.x = target;
                break;
            }
            self.try_step(remaining, tol)?;
        }
        Ok(())
    }

    /// Current state as a validated zero set.
    pub fn zero_set(&self) -> Result<ZeroSet<F>> {
        ZeroSet::new(self.n, self.x, self.zeros.clone())
    }
}

fn check_tol<F: Real>(tol: F) -> Result<()> {
    if !(tol >= fp(TOL_RANGE.0) && tol <= fp(TOL_RANGE.1)) {
        return Err(Error::InvalidInput(format!(
            "integration tolerance {tol} outside [{:e}, {:e}]",
            TOL_RANGE.0, TOL_RANGE.1
        )));
    }
    Ok(())
}

/// Tracks the zeros from the exact `x = 0` configuration to `x_target`.
///
/// Negative targets integrate to `|x_target|` and apply the antisymmetric
/// mirror. Targets beyond [`MAX_TRACK_X`] in magnitude report a range
/// error: the zeros are already within 1e-40 of their integer limits
/// there, so clamp instead of integrating further.
pub fn integrate_to<F: Real>(n: usize, x_target: F, tol: F) -> Result<ZeroSet<F>> {
    check_tol(tol)?;
    if !x_target.is_finite() || x_target.abs() > fp(MAX_TRACK_X) {
        return Err(Error::Range(format!(
            "|x_target| = {} beyond {MAX_TRACK_X}; clamp to the integer limits instead",
            x_target.abs()
        )));
    }
    if x_target < F::zero() {
        return Ok(integrate_to(n, -x_target, tol)?.mirrored());
    }
    let mut state = OdeState::initial(n)?;
    if x_target == F::zero() {
        return state.zero_set();
    }
    state.advance_to(x_target, tol)?;
    state.zero_set()
}

/// Tracks through an ascending list of nonnegative targets in one
/// continuation sweep, recording the zeros at each.
pub fn integrate_path<F: Real>(n: usize, targets: &[F], tol: F) -> Result<Vec<Vec<F>>> {
    check_tol(tol)?;
    for w in targets.windows(2) {
        if w[1] < w[0] {
            return Err(Error::InvalidInput("targets must ascend".into()));
        }
    }
    if targets
        .iter()
        .any(|t| *t < F::zero() || *t > fp(MAX_TRACK_X))
    {
        return Err(Error::Range(format!(
            "targets must lie in [0, {MAX_TRACK_X}]"
        )));
    }
    let mut state = OdeState::initial(n)?;
    let mut out = Vec::with_capacity(targets.len());
    for &t in targets {
        state.advance_to(t, tol)?;
        out.push(state.zeros().to_vec());
    }
    Ok(out)
}

/// Finite-difference residual of the second-order system at `x`, with
/// derivatives taken from spectrally computed trajectories at `x - h`, `x`,
/// `x + h`. Independent of the tracker: the data comes from the eigenvalue
/// route.
pub fn rs_residual<F: Real>(n: usize, x: F, h: F) -> Result<Vec<F>> {
    if !(x > fp::<F>(2.0) * h && h > F::zero()) {
        return Err(Error::InvalidInput("rs_residual needs x > 2h > 0".into()));
    }
    let tol = fp::<F>(1e-12);
    let zm = zeros_spectral(n, x - h, tol)?;
    let z0 = zeros_spectral(n, x, tol)?;
    let zp = zeros_spectral(n, x + h, tol)?;
    let two = fp::<F>(2.0);
    let mut vel = Vec::with_capacity(n);
    let mut acc = Vec::with_capacity(n);
    for i in 0..n {
        vel.push((zp.zeros[i] - zm.zeros[i]) / (two * h));
        acc.push((zp.zeros[i] - two * z0.zeros[i] + zm.zeros[i]) / (h * h));
    }
    let mut residual = Vec::with_capacity(n);
    for l in 0..n {
        let mut coupling = F::zero();
        for j in 0..n {
            if j != l {
                coupling = coupling + two * vel[l] * vel[j] / (z0.zeros[l] - z0.zeros[j]);
            }
        }
        residual.push(acc[l] + two * z0.zeros[l] * vel[l] - coupling);
    }
    Ok(residual)
}
