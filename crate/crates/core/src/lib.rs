//! Zeros of the integral-degree associated Legendre functions with respect
//! to the order.
//!
//! For integral degree `n` the renormalized associated Legendre function
//! `psi_n(x, z) = Gamma(1 - z) P_n^z(tanh x)` is rational in the order `z`
//! and has exactly `n` real simple zeros `z_1(x) > ... > z_n(x)`. This crate
//! computes and cross-validates those zeros through three independent
//! characterizations:
//!
//! * [`spectral`] — the zeros as eigenvalues of an explicit `n x n`
//!   trajectory matrix built from the scattering data of the Poeschl-Teller
//!   potential (the primary, non-iterative route);
//! * [`bethe`] — the coupled rational (Bethe-type) system the zeros satisfy
//!   at each `x`, with Newton refinement on its logarithmic form;
//! * [`dynamics`] — the coupled ODE systems governing the motion of the
//!   zeros in `x`, tracked from the exact `x = 0` configuration and slopes.
//!
//! [`legendre`] evaluates `psi_n` itself through the terminating
//! hypergeometric sum, expands the characteristic polynomial of the
//! trajectory matrix in exact integer arithmetic, and produces the
//! bound-state normalization constants in two closed forms. [`trajectory`]
//! samples whole zero trajectories over an `x` grid and serializes them to
//! CSV/JSON. [`verify`] bundles the cross-method consistency checks behind
//! a single entry point.
//!
//! ```
//! use legzeros::dynamics::integrate_to;
//! use legzeros::{refine_newton, zeros_spectral};
//!
//! # fn main() -> legzeros::Result<()> {
//! let spectral = zeros_spectral(5, 0.7_f64, 1e-12)?;
//! let refined = refine_newton(&spectral, 1e-12, 50)?; // algebraic route
//! let tracked = integrate_to(5, 0.7_f64, 1e-9)?; // differential route
//! for ((a, b), c) in spectral
//!     .zeros
//!     .iter()
//!     .zip(&refined.zeros)
//!     .zip(&tracked.zeros)
//! {
//!     assert!((a - b).abs() < 1e-10 && (a - c).abs() < 1e-7);
//! }
//! # Ok(())
//! # }
//! ```
//!
//! All numeric routines are generic over the scalar type via [`Real`];
//! every public type defaults to `f64`.

// Indexed loops mirror the matrix formulas; negated comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod bethe;
pub(crate) mod dd;
pub mod dynamics;
pub mod error;
pub mod legendre;
pub mod numkit;
pub mod real;
pub mod spectral;
pub mod trajectory;
pub mod util;
pub mod verify;

pub use bethe::{bethe_residual, log_residual, refine_newton, BetheResidual, ZeroSet};
pub use dynamics::{initial_conditions, integrate_to, rs_residual, OdeState};
pub use error::{Error, Result};
pub use legendre::{
    charpoly_at, charpoly_exact, eval_psi, eval_psi_at_zero, norm_constants, CharPoly,
    ExactCharPoly, LegendreParams, NormConstants,
};
pub use numkit::{solve_linear, sym_eigenvalues, EigenResult, Matrix};
pub use real::Real;
pub use spectral::{build_bundle, eigen_consistency, zeros_spectral, SpectralBundle};
pub use trajectory::{sample, write_csv, write_json, Method, Sample, TrajectoryTable};

/// Double-precision aliases for the common instantiation.
pub type Matrix64 = numkit::Matrix<f64>;
/// Double-precision zero set.
pub type ZeroSet64 = bethe::ZeroSet<f64>;
/// Double-precision trajectory table.
pub type Table64 = trajectory::TrajectoryTable<f64>;
