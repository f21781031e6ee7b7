//! Whole-trajectory sampling over an `x` grid (the data behind the zero
//! trajectory plots) and CSV/JSON serialization.
//!
//! Branches are identified by sorted order alone: the zeros stay simple for
//! all real `x`, so trajectories never cross and no matching step is
//! needed. Negative `x` is covered by the exact antisymmetric mirror.

use std::io::Write;

use crate::bethe::{refine_newton, ZeroSet};
use crate::dynamics::integrate_path;
use crate::error::{Error, Result};
use crate::real::{fp, Real};
use crate::spectral::zeros_spectral;

/// Largest admissible sample count.
pub const MAX_SAMPLES: usize = 1_000_000;

/// How a trajectory table was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Eigenvalues of the symmetric trajectory matrix (pointwise).
    Spectral,
    /// Spectral seed plus Newton refinement of the algebraic system.
    Newton,
    /// Continuation along the differential system of the zero motion.
    Ode,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::Newton => "newton",
            Method::Ode => "ode",
        }
    }

    /// Monotonicity slack appropriate to the accuracy of the method.
    fn monotone_slack(self) -> f64 {
        match self {
            Method::Spectral | Method::Newton => 1e-8,
            Method::Ode => 1e-3,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "newton" => Ok(Method::Newton),
            "ode" => Ok(Method::Ode),
            other => Err(Error::InvalidInput(format!(
                "unknown method '{other}' (expected spectral, newton or ode)"
            ))),
        }
    }
}

/// One grid point: `x`, the Legendre argument `y = tanh x`, and the zeros
/// in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<F: Real = f64> {
    pub x: F,
    pub y: F,
    pub zeros: Vec<F>,
}

/// A branch-continuous table of zero trajectories.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryTable<F: Real = f64> {
    /// Degree (and zeros per sample).
    pub n: usize,
    /// Method that produced the table.
    pub method: Method,
    /// Samples with strictly increasing `x`.
    pub samples: Vec<Sample<F>>,
}

impl<F: Real> TrajectoryTable<F> {
    /// Checks the structural invariants: non-empty, strictly increasing
    /// `x`, finite entries, descending zeros per sample and per-branch
    /// monotonicity across samples (within the method's accuracy slack).
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("table degree must be >= 1".into()));
        }
        if self.samples.is_empty() {
            return Err(Error::InvalidInput("table has no samples".into()));
        }
        let slack = fp::<F>(self.method.monotone_slack());
        for (i, s) in self.samples.iter().enumerate() {
            if !s.x.is_finite() || !s.y.is_finite() || s.zeros.iter().any(|z| !z.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite sample {i}")));
            }
            if s.zeros.len() != self.n {
                return Err(Error::InvalidInput(format!(
                    "sample {i} carries {} zeros, expected {}",
                    s.zeros.len(),
                    self.n
                )));
            }
            for l in 1..self.n {
                if !(s.zeros[l - 1] > s.zeros[l]) {
                    return Err(Error::InvalidInput(format!(
                        "sample {i}: zeros not strictly descending"
                    )));
                }
            }
            if i > 0 {
                let prev = &self.samples[i - 1];
                if !(s.x > prev.x) {
                    return Err(Error::InvalidInput(format!(
                        "x not strictly increasing at sample {i}"
                    )));
                }
                for l in 0..self.n {
                    if s.zeros[l] < prev.zeros[l] - slack {
                        return Err(Error::InvalidInput(format!(
                            "branch {} decreases between samples {} and {i}",
                            l + 1,
                            i - 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Computes the zero set at one point by the requested method.
///
/// All three methods handle negative `x` through the exact antisymmetric
/// mirror. At exactly `x = 0` the newton method returns its spectral seed
/// unrefined: the algebraic system degenerates there (the initial zeros
/// coincide with the poles `-l` of the residual), while the seed already
/// carries the exact initial configuration.
pub fn zeros_by_method<F: Real>(n: usize, x: F, method: Method, tol: F) -> Result<ZeroSet<F>> {
    match method {
        Method::Spectral => zeros_spectral(n, x, tol),
        Method::Newton => {
            if x < F::zero() {
                return Ok(zeros_by_method(n, -x, method, tol)?.mirrored());
            }
            let seed_tol = tol.min(fp(1e-12));
            let seed = zeros_spectral(n, x, seed_tol)?;
            if x == F::zero() {
                return Ok(seed);
            }
            refine_newton(&seed, tol, 50)
        }
        Method::Ode => {
            let clamped = tol
                .max(fp(crate::dynamics::TOL_RANGE.0))
                .min(fp(crate::dynamics::TOL_RANGE.1));
            crate::dynamics::integrate_to(n, x, clamped)
        }
    }
}

/// Samples the trajectories on the uniform inclusive grid
/// `x_min, ..., x_max` with `count` points.
///
/// Pointwise methods evaluate the grid independently; the ode method runs
/// one continuation sweep over the needed `|x|` targets and mirrors the
/// negative half.
pub fn sample<F: Real>(
    n: usize,
    x_min: F,
    x_max: F,
    count: usize,
    method: Method,
    tol: F,
) -> Result<TrajectoryTable<F>> {
    if !(x_min < x_max) {
        return Err(Error::InvalidInput(format!(
            "need x_min < x_max, got {x_min} and {x_max}"
        )));
    }
    if !(2..=MAX_SAMPLES).contains(&count) {
        return Err(Error::InvalidInput(format!(
            "sample count {count} outside [2, {MAX_SAMPLES}]"
        )));
    }
    let step = (x_max - x_min) / fp::<F>((count - 1) as f64);
    let mut grid = Vec::with_capacity(count);
    for i in 0..count {
        let x = if i == count - 1 {
            x_max
        } else {
            x_min + fp::<F>(i as f64) * step
        };
        grid.push(x);
    }

    let zero_rows: Vec<Vec<F>> = match method {
        Method::Spectral | Method::Newton => {
            let mut rows = Vec::with_capacity(count);
            for &x in &grid {
                let zs = zeros_by_method(n, x, method, tol).map_err(|e| annotate(e, x))?;
                rows.push(zs.zeros);
            }
            rows
        }
        Method::Ode => {
            let clamped = tol
                .max(fp(crate::dynamics::TOL_RANGE.0))
                .min(fp(crate::dynamics::TOL_RANGE.1));
            let mut targets: Vec<F> = grid.iter().map(|x| x.abs()).collect();
            targets.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
            targets.dedup();
            let path = integrate_path(n, &targets, clamped)?;
            let mut rows = Vec::with_capacity(count);
            for &x in &grid {
                let idx = targets
                    .binary_search_by(|t| t.partial_cmp(&x.abs()).expect("finite"))
                    .map_err(|_| Error::Internal(format!("target lookup failed at x = {x}")))?;
                let zeros = if x < F::zero() {
                    path[idx].iter().rev().map(|&z| -z).collect()
                } else {
                    path[idx].clone()
                };
                rows.push(zeros);
            }
            rows
        }
    };

    let samples = grid
        .into_iter()
        .zip(zero_rows)
        .map(|(x, zeros)| Sample {
            x,
            y: x.tanh(),
            zeros,
        })
        .collect();
    let table = TrajectoryTable { n, method, samples };
    table.validate()?;
    Ok(table)
}

fn annotate<F: Real>(e: Error, x: F) -> Error {
    match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("at x = {x}: {m}")),
        Error::Pole(m) => Error::Pole(format!("at x = {x}: {m}")),
        Error::Range(m) => Error::Range(format!("at x = {x}: {m}")),
        Error::Singular(m) => Error::Singular(format!("at x = {x}: {m}")),
        Error::NonConvergence(m) => Error::NonConvergence(format!("at x = {x}: {m}")),
        Error::WrongBranch(m) => Error::WrongBranch(format!("at x = {x}: {m}")),
        Error::Stiffness(m) => Error::Stiffness(format!("at x = {x}: {m}")),
        other => other,
    }
}

/// Writes the table as CSV: header `x,y,z1,...,zn`, one row per sample,
/// comma separator, LF line endings, no quoting. Numbers use the shortest
/// decimal that round-trips, so reading the file back reproduces every
/// value bit-identically.
pub fn write_csv<F: Real, W: Write>(table: &TrajectoryTable<F>, out: &mut W) -> Result<()> {
    table.validate()?;
    let mut header = String::from("x,y");
    for i in 1..=table.n {
        header.push_str(&format!(",z{i}"));
    }
    header.push('\n');
    out.write_all(header.as_bytes())?;
    for s in &table.samples {
        let mut row = format!("{},{}", s.x, s.y);
        for z in &s.zeros {
            row.push_str(&format!(",{z}"));
        }
        row.push('\n');
        out.write_all(row.as_bytes())?;
    }
    Ok(())
}

/// Writes the table as compact JSON with the schema
/// `{"n": int, "method": string, "samples": [{"x", "y", "zeros"}...]}`,
/// numbers serialized with round-trip precision.
pub fn write_json<F: Real, W: Write>(table: &TrajectoryTable<F>, out: &mut W) -> Result<()> {
    table.validate()?;
    let mut text = format!(
        "{{\"n\":{},\"method\":\"{}\",\"samples\":[",
        table.n, table.method
    );
    for (i, s) in table.samples.iter().enumerate() {
        if i > 0 {
            text.push(',');
        }
        text.push_str(&format!("{{\"x\":{},\"y\":{},\"zeros\":[", s.x, s.y));
        for (j, z) in s.zeros.iter().enumerate() {
            if j > 0 {
                text.push(',');
            }
            text.push_str(&format!("{z}"));
        }
        text.push_str("]}");
    }
    text.push_str("]}\n");
    out.write_all(text.as_bytes())?;
    Ok(())
}
