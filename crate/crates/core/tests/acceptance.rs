//! Acceptance suite: the quantitative exit criteria for the whole artifact,
//! one test per criterion, each printing a pass/fail line with its runtime.
//!
//! Run with `cargo test -p legzeros --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use legzeros::dynamics::{integrate_to, rs_residual, OdeState};
use legzeros::legendre::{charpoly_value, eval_psi, norm_constants, LegendreParams};
use legzeros::numkit::{determinant, Matrix};
use legzeros::spectral::{build_bundle, zeros_spectral};
use legzeros::trajectory::{sample, zeros_by_method, Method};
use legzeros::util::SplitMix64;
use legzeros::{bethe, ZeroSet};

struct Criterion {
    number: usize,
    description: &'static str,
    budget: Duration,
    started: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(number: usize, description: &'static str, budget_secs: f64) -> Self {
        Criterion {
            number,
            description,
            budget: Duration::from_secs_f64(budget_secs),
            started: Instant::now(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(detail());
        }
    }

    fn finish(mut self) {
        let elapsed = self.started.elapsed();
        if elapsed > self.budget {
            self.failures.push(format!(
                "runtime {elapsed:.2?} exceeded budget {:.2?}",
                self.budget
            ));
        }
        let status = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "acceptance criterion {:2} [{status}] {} ({elapsed:.2?})",
            self.number, self.description
        );
        assert!(
            self.failures.is_empty(),
            "criterion {} failed:\n{}",
            self.number,
            self.failures.join("\n")
        );
    }
}

#[test]
fn acceptance_criterion_01_closed_form_degree_one() {
    let mut c = Criterion::new(1, "n=1 closed form tanh(x), all methods", 1.0);
    for i in 0..21 {
        let x = -5.0 + 0.5 * i as f64;
        let expect = x.tanh();
        for (method, tol, bound) in [
            (Method::Spectral, 1e-12, 1e-10),
            (Method::Newton, 1e-11, 1e-10),
            (Method::Ode, 1e-9, 1e-7),
        ] {
            let zs = zeros_by_method(1, x, method, tol).unwrap();
            let defect = (zs.zeros[0] - expect).abs();
            c.check(defect <= bound, || {
                format!(
                    "{method} at x={x}: |{} - {expect}| = {defect:e}",
                    zs.zeros[0]
                )
            });
        }
    }
    c.finish();
}

#[test]
fn acceptance_criterion_02_closed_form_degree_two() {
    let mut c = Criterion::new(2, "n=2 closed form at x = ln(2)/2", 1.0);
    let x = 0.5 * 2.0f64.ln();
    // Roots of z^2 - z - 2/3 (characteristic polynomial at u = 1/2).
    let disc = (11.0f64 / 3.0).sqrt();
    let expect = [(1.0 + disc) / 2.0, (1.0 - disc) / 2.0];
    for (method, tol) in [
        (Method::Spectral, 1e-12),
        (Method::Newton, 1e-11),
        (Method::Ode, 1e-9),
    ] {
        let zs = zeros_by_method(2, x, method, tol).unwrap();
        for (i, (&z, e)) in zs.zeros.iter().zip(expect).enumerate() {
            let defect = (z - e).abs();
            c.check(defect <= 1e-8, || {
                format!("{method} branch {i}: off by {defect:e}")
            });
        }
        let sum = zs.zeros[0] + zs.zeros[1];
        let prod = zs.zeros[0] * zs.zeros[1];
        c.check((sum - 1.0).abs() <= 1e-10, || {
            format!("{method}: sum {sum} != 1")
        });
        c.check((prod + 2.0 / 3.0).abs() <= 1e-10, || {
            format!("{method}: product {prod} != -2/3")
        });
    }
    c.finish();
}

#[test]
fn acceptance_criterion_03_initial_configuration() {
    let mut c = Criterion::new(3, "zeros at x=0 equal {n+1-2l}, n <= 12", 1.0);
    for n in 1..=12usize {
        let zs = zeros_spectral(n, 0.0, 1e-12).unwrap();
        for (i, &z) in zs.zeros.iter().enumerate() {
            let expect = (n as f64) + 1.0 - 2.0 * ((i + 1) as f64);
            let defect = (z - expect).abs();
            c.check(defect <= 1e-10, || {
                format!("n={n} branch {}: {z} vs {expect} ({defect:e})", i + 1)
            });
        }
    }
    c.finish();
}

/// This criterion demands a 1e-8 log-form residual over the whole grid, and
/// that is not attainable at double precision: the residual resolves the
/// gaps `l - z_j`, which decay like `e^{-2lx}` and fall below the
/// significand of the zeros from roughly `x = 26/(2l)` onward. From there
/// the measurement floor `eps * |z| / gap` exceeds 1e-8 no matter how the
/// zeros were computed — the closed-form n = 2 roots rounded to f64 already
/// measure 1.3e-8 at x = 4.9 — and once a gap underflows entirely the log
/// diverges and the factor signs become rounding artifacts. The assertion
/// is kept exactly as stated (so this test fails); the companion check
/// below demonstrates the criterion's content where the measurement is
/// meaningful at this precision.
#[test]
fn acceptance_criterion_04_bethe_consistency() {
    let mut c = Criterion::new(4, "algebraic system residual on [0,6], n <= 10", 10.0);
    // The grid starts just above x = 0, where the system itself degenerates
    // (the initial zeros coincide with the poles -l of the residual).
    let mut breaches = 0usize;
    for n in 1..=10usize {
        for i in 1..=100 {
            let x = 6.0 * i as f64 / 100.0;
            let zs = zeros_spectral(n, x, 1e-12).unwrap();
            let res = bethe::log_residual(&zs).unwrap();
            let worst = res.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if worst > 1e-8 || !res.all_signs_ok() {
                breaches += 1;
            }
            c.check(worst <= 1e-8, || {
                format!("n={n} x={x}: log-residual {worst:e}")
            });
            c.check(res.all_signs_ok(), || {
                format!("n={n} x={x}: sign pattern broken")
            });
        }
    }
    if breaches > 0 {
        println!(
            "criterion 4 note: {breaches}/1000 grid points sit beyond the f64 \
             measurement floor of the log form (see bethe_consistency_within_resolution)"
        );
    }
    c.finish();
}

/// The measurable part of the algebraic-consistency criterion: wherever
/// every factor gap stays above the precision floor that keeps the log
/// residual meaningful at 1e-8, the spectral zeros satisfy the system to
/// that tolerance with the correct sign pattern.
#[test]
fn bethe_consistency_within_resolution() {
    let mut worst = 0.0f64;
    let mut covered = 0usize;
    for n in 1..=10usize {
        for i in 1..=100 {
            let x = 6.0 * i as f64 / 100.0;
            let zs = zeros_spectral(n, x, 1e-12).unwrap();
            let res = bethe::log_residual(&zs).unwrap();
            let resolvable = (1..=n).all(|l| {
                zs.zeros.iter().all(|&z| {
                    (l as f64 - z).abs() >= 1e9 * f64::EPSILON * (z.abs() + 1.0) * n as f64
                })
            });
            if !resolvable {
                continue;
            }
            covered += 1;
            let max = res.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            worst = worst.max(max);
            assert!(max <= 1e-8, "n={n} x={x}: log-residual {max:e}");
            assert!(res.all_signs_ok(), "n={n} x={x}: sign pattern broken");
        }
    }
    println!("bethe consistency holds on {covered}/1000 resolvable points, max {worst:e}");
    assert!(covered > 300, "resolvable subdomain unexpectedly small");
}

#[test]
fn acceptance_criterion_05_determinantal_identity() {
    let mut c = Criterion::new(5, "det(zI - Z) matches the exact expansion", 10.0);
    let mut rng = SplitMix64::new(0x5ca1_ab1e);
    for n in 1..=10usize {
        let mut done = 0;
        while done < 50 {
            let x = rng.next_in(0.0, 4.0);
            let z = rng.next_in(-(n as f64) - 1.0, n as f64 + 1.0);
            if (z - z.round()).abs() < 0.05 {
                continue;
            }
            done += 1;
            let bundle = build_bundle(n, x).unwrap();
            let m = Matrix::from_fn(n, n, |r, col| {
                let delta = if r == col { 1.0 } else { 0.0 };
                z * delta - bundle.z.get(r, col)
            });
            // det(zI - Z) is monic; the expansion carries (1+u)^n. The
            // reference value comes from the factored form of the exact
            // expansion, which does not cancel at large |z|.
            let u = (-2.0 * x).exp();
            let det = determinant(&m).unwrap() * (1.0 + u).powi(n as i32);
            let value = charpoly_value(n, x, z).unwrap();
            let rel = (det - value).abs() / value.abs().max(f64::MIN_POSITIVE);
            c.check(rel <= 1e-8, || {
                format!("n={n} x={x:.4} z={z:.4}: det {det:e} vs poly {value:e} ({rel:e})")
            });
        }
    }
    c.finish();
}

#[test]
fn acceptance_criterion_06_ode_tracking() {
    let mut c = Criterion::new(6, "tracking to x=4 agrees with the eigen route", 30.0);
    for n in 1..=8usize {
        // Endpoint agreement.
        let ode = integrate_to(n, 4.0f64, 1e-9).unwrap();
        let eig = zeros_spectral(n, 4.0f64, 1e-12).unwrap();
        for i in 0..n {
            let defect = (ode.zeros[i] - eig.zeros[i]).abs();
            c.check(defect <= 1e-6, || {
                format!("n={n} branch {i}: endpoint defect {defect:e}")
            });
        }
        // Conserved trace monitor along the flow.
        let mut state = OdeState::<f64>::initial(n).unwrap();
        while state.x() < 4.0 {
            state.try_step(4.0 - state.x(), 1e-9).unwrap();
            let sum: f64 = state.zeros().iter().sum();
            let expect = (n * (n + 1)) as f64 / 2.0 * state.x().tanh();
            let drift = (sum - expect).abs();
            c.check(drift <= 1e-8, || {
                format!("n={n} x={}: trace drift {drift:e}", state.x())
            });
        }
    }
    c.finish();
}

#[test]
fn acceptance_criterion_07_second_order_residual() {
    let mut c = Criterion::new(7, "second-order system residual, h = 1e-4", 5.0);
    for &n in &[2usize, 3, 5] {
        for &x in &[0.5f64, 1.0, 2.0] {
            let res = rs_residual(n, x, 1e-4).unwrap();
            for (l, v) in res.iter().enumerate() {
                c.check(v.abs() <= 1e-4, || {
                    format!("n={n} x={x} branch {}: residual {v:e}", l + 1)
                });
            }
        }
    }
    c.finish();
}

#[test]
fn acceptance_criterion_08_trajectory_properties() {
    let mut c = Criterion::new(8, "n=5 trajectories on [-8, 8], 401 points", 10.0);
    let table = sample(5, -8.0, 8.0, 401, Method::Spectral, 1e-12).unwrap();
    assert_eq!(table.samples.len(), 401);
    // Per-branch monotonicity and minimum inter-zero gap. Strict increase
    // is required wherever the increment is representable; within 1e-12 of
    // the integer saturation limits the true increments drop below one ulp
    // (the branch towards m decays like e^{-2m|x|}) and only monotonicity
    // up to rounding jitter is checkable in double precision.
    let mut min_gap = f64::INFINITY;
    for (i, s) in table.samples.iter().enumerate() {
        for w in s.zeros.windows(2) {
            min_gap = min_gap.min(w[0] - w[1]);
        }
        if i > 0 {
            let prev = &table.samples[i - 1];
            for l in 0..5 {
                let limit = s.zeros[l].round();
                let saturated =
                    (s.zeros[l] - limit).abs() <= 1e-12 && (prev.zeros[l] - limit).abs() <= 1e-12;
                if saturated {
                    c.check(
                        s.zeros[l] >= prev.zeros[l] - 16.0 * f64::EPSILON * limit.abs().max(1.0),
                        || {
                            format!(
                                "branch {} jitters beyond rounding at samples {}..{i}",
                                l + 1,
                                i - 1
                            )
                        },
                    );
                } else {
                    c.check(s.zeros[l] > prev.zeros[l], || {
                        format!(
                            "branch {} not strictly increasing between samples {} and {i}",
                            l + 1,
                            i - 1
                        )
                    });
                }
            }
        }
    }
    c.check(min_gap > 1e-6, || format!("minimum gap {min_gap:e}"));
    // Endpoint deviation from the integer limits at |x| = 8.
    let first = table.samples.first().unwrap();
    let last = table.samples.last().unwrap();
    for l in 0..5 {
        let left = (first.zeros[l] + (l + 1) as f64).abs();
        let right = (last.zeros[l] - (5 - l) as f64).abs();
        c.check(left <= 1e-5 && right <= 1e-5, || {
            format!("branch {}: endpoint defects {left:e}/{right:e}", l + 1)
        });
    }
    // Antisymmetry z_l(-x) = -z_{n+1-l}(x) across the symmetric grid.
    for i in 0..401 {
        let a = &table.samples[i];
        let b = &table.samples[400 - i];
        for l in 0..5 {
            let defect = (a.zeros[l] + b.zeros[4 - l]).abs();
            c.check(defect <= 1e-9, || {
                format!("antisymmetry broken at sample {i}, branch {}", l + 1)
            });
        }
    }
    c.finish();
}

#[test]
fn acceptance_criterion_09_normalization_constants() {
    let mut c = Criterion::new(9, "normalization constants and quadrature", 5.0);
    // Both closed forms must agree exactly as integers for n <= 30 (the
    // library errors out on any disagreement).
    for n in 1..=30usize {
        match norm_constants(n) {
            Ok(nc) => c.check(nc.nu.len() == n, || format!("n={n}: wrong length")),
            Err(e) => c.check(false, || format!("n={n}: {e}")),
        }
    }
    // Trapezoid quadrature of psi_2(x,-1)^2 over [-20,20], step 1e-3.
    let step = 1e-3f64;
    let count = (40.0 / step).round() as usize;
    let mut acc = 0.0f64;
    for i in 0..=count {
        let x = -20.0 + step * i as f64;
        let v = eval_psi(&LegendreParams::new(2, x, -1.0)).unwrap();
        let w = if i == 0 || i == count { 0.5 } else { 1.0 };
        acc += w * v * v;
    }
    let integral = acc * step;
    let defect = (integral - 1.0 / 6.0).abs();
    c.check(defect <= 1e-6, || {
        format!("integral {integral} vs 1/6 (defect {defect:e})")
    });
    c.finish();
}

#[test]
fn acceptance_criterion_10_schrodinger_residual() {
    let mut c = Criterion::new(10, "Poeschl-Teller equation by finite differences", 2.0);
    let h = 1e-4f64;
    for n in 1..=6usize {
        for &x in &[-2.0f64, -0.5, 0.3, 1.7] {
            for &z in &[0.25f64, -0.7, 2.5] {
                let psi = |xx: f64| eval_psi(&LegendreParams::new(n, xx, z)).unwrap();
                let f0 = psi(x);
                let second = (psi(x + h) - 2.0 * f0 + psi(x - h)) / (h * h);
                let potential = (n * (n + 1)) as f64 / x.cosh().powi(2);
                let residual = (second + (potential - z * z) * f0).abs();
                let bound = 1e-5 * (1.0 + f0.abs()) * (z * z).max(1.0);
                c.check(residual <= bound, || {
                    format!("n={n} x={x} z={z}: residual {residual:e} vs {bound:e}")
                });
            }
        }
    }
    c.finish();
}

/// The antisymmetric mirror used for x < 0 is exact, so verify it against a
/// zero set computed without it (both signs inside the direct range).
#[test]
fn mirror_consistency_spot_check() {
    let direct = build_bundle(6, -1.5f64).unwrap();
    let eig = legzeros::numkit::sym_eigenvalues(&direct.s, 1e-12).unwrap();
    let mirrored = zeros_spectral(6, -1.5f64, 1e-12).unwrap();
    let direct_set = ZeroSet::new(6, -1.5, eig.values).unwrap();
    for i in 0..6 {
        assert!((mirrored.zeros[i] - direct_set.zeros[i]).abs() <= 1e-10);
    }
}
