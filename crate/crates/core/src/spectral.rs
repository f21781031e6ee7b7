//! The spectral characterization: the zeros are the real eigenvalues of the
//! trajectory matrix
//!
//! ```text
//! Z(x) = K (I - e^{-2xK} N)(I + e^{-2xK} N)^{-1},
//! K = diag(1..n),   N_{jk} = C(2j,j) C(n+j,n-j) j/(j+k) = nu_j/(j+k).
//! ```
//!
//! `Z(x)` is similar, through a diagonal transformation, to the symmetric
//! matrix
//!
//! ```text
//! S(x) = K^{1/2} (I - Nt)(I + Nt)^{-1} K^{1/2},
//! Nt_{jk} = sqrt(nu_j nu_k) e^{-(j+k)x} / (j+k),
//! ```
//!
//! which is the route actually diagonalized: symmetric eigensolvers are
//! unconditionally stable and guarantee real output. `Z(x)` is built for
//! consistency testing only.

use crate::bethe::ZeroSet;
use crate::dd::{solve_dd, Dd};
use crate::error::{Error, Result};
use crate::legendre::{charpoly_at, nu_exact};
use crate::numkit::{sym_eigenvalues, Matrix};
use crate::real::{fi, fp, Real};

/// Default eigensolver tolerance.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-12;

/// The matrices of the spectral route at one `(n, x)`.
#[derive(Clone, Debug)]
pub struct SpectralBundle<F: Real = f64> {
    /// Degree.
    pub n: usize,
    /// Argument parameter.
    pub x: F,
    /// `diag(1..n)`.
    pub k: Matrix<F>,
    /// Scattering matrix `N`.
    pub n_mat: Matrix<F>,
    /// `diag(e^{-2x}, e^{-4x}, ..., e^{-2nx})`.
    pub e: Matrix<F>,
    /// Trajectory matrix `Z(x)` (not symmetric).
    pub z: Matrix<F>,
    /// Symmetrized scattering data `Nt`.
    pub n_tilde: Matrix<F>,
    /// Symmetric similarity form `S(x)`; its eigenvalues are the zeros.
    pub s: Matrix<F>,
    /// Largest asymmetry of the Cayley transform before averaging with its
    /// transpose; a health indicator for the linear solve.
    pub cayley_asymmetry: F,
}

/// Smallest `x` at which the weights `nu_j e^{-2jx}` stay below `1e300`.
pub fn x_min(n: usize) -> Result<f64> {
    let nu = nu_exact(n)?;
    let ln_cap = 300.0 * std::f64::consts::LN_10;
    let mut lo = f64::NEG_INFINITY;
    for (idx, &v) in nu.iter().enumerate() {
        let j = (idx + 1) as f64;
        lo = lo.max(((v as f64).ln() - ln_cap) / (2.0 * j));
    }
    Ok(lo)
}

/// Builds every matrix of the spectral route at `(n, x)`.
///
/// Requires `x >= x_min(n)` so the weights `nu_j e^{-2jx}` are
/// representable; for smaller `x` use the antisymmetric mirror (negate and
/// reverse the zeros computed at `|x|`), which is exact.
pub fn build_bundle<F: Real>(n: usize, x: F) -> Result<SpectralBundle<F>> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if !x.is_finite() {
        return Err(Error::InvalidInput("x must be finite".into()));
    }
    let nu = nu_exact(n)?;
    let two = fp::<F>(2.0);

    let e_diag: Vec<F> = (1..=n).map(|j| (-two * fi::<F>(j) * x).exp()).collect();
    let nu_t: Vec<F> = nu
        .iter()
        .zip(&e_diag)
        .map(|(&v, &e)| fp::<F>(v as f64) * e)
        .collect();
    if nu_t.iter().any(|v| !v.is_finite()) || nu_t.iter().any(|v| *v > fp(1e300)) {
        return Err(Error::Range(format!(
            "scattering weights nu_j e^(-2jx) overflow at x = {x}; \
             compute at |x| and apply the antisymmetric mirror"
        )));
    }

    let k = Matrix::from_diag(&(1..=n).map(fi::<F>).collect::<Vec<_>>());
    let n_mat = Matrix::from_fn(n, n, |r, c| fp::<F>(nu[r] as f64) / fi::<F>(r + c + 2));
    let e = Matrix::from_diag(&e_diag);

    // Everything downstream of the exponential weights is assembled in
    // double-word precision: powers of one rounded base w = e^{-x} keep the
    // weights coherent (they are the exact weights of a nearby x), and the
    // refined solves keep the Cayley transforms at working accuracy even
    // where nu_j e^{-2jx} reaches 1e10.
    let w = Dd::from_f((-x).exp());
    let mut w_pow = vec![Dd::<F>::one(); 2 * n + 1];
    for s in 1..=2 * n {
        w_pow[s] = w_pow[s - 1].mul(w);
    }
    let nu_dd: Vec<Dd<F>> = nu.iter().map(|&v| Dd::from_i128(v)).collect();

    // Z = K (I - EN)(I + EN)^{-1}; the two factors commute, so one solve
    // with (I + EN) suffices.
    let mut plus = vec![Dd::<F>::zero(); n * n];
    let mut minus = vec![Dd::<F>::zero(); n * n];
    for r in 0..n {
        for c in 0..n {
            let en = nu_dd[r]
                .mul(w_pow[2 * (r + 1)])
                .div(Dd::from_f(fi::<F>(r + c + 2)));
            let (p, m) = if r == c {
                (Dd::one().add(en), Dd::one().sub(en))
            } else {
                (en, en.neg())
            };
            plus[r * n + c] = p;
            minus[r * n + c] = m;
        }
    }
    let cz = solve_dd(&plus, &minus, n, n)?;
    let z = k.mul(&Matrix::from_fn(n, n, |r, c| cz[r * n + c]));

    let sqrt_nu_t: Vec<Dd<F>> = (0..n)
        .map(|j| nu_dd[j].mul(w_pow[2 * (j + 1)]).sqrt())
        .collect();
    let n_tilde = Matrix::from_fn(n, n, |r, c| {
        (sqrt_nu_t[r].mul(sqrt_nu_t[c])).hi() / fi::<F>(r + c + 2)
    });
    let mut plus_t = vec![Dd::<F>::zero(); n * n];
    let mut minus_t = vec![Dd::<F>::zero(); n * n];
    for r in 0..n {
        for c in 0..n {
            let nt = sqrt_nu_t[r]
                .mul(sqrt_nu_t[c])
                .div(Dd::from_f(fi::<F>(r + c + 2)));
            let (p, m) = if r == c {
                (Dd::one().add(nt), Dd::one().sub(nt))
            } else {
                (nt, nt.neg())
            };
            plus_t[r * n + c] = p;
            minus_t[r * n + c] = m;
        }
    }
    let cayley = solve_dd(&plus_t, &minus_t, n, n)?;

    let mut cayley_asymmetry = F::zero();
    for r in 0..n {
        for c in (r + 1)..n {
            let gap: F = (cayley[r * n + c] - cayley[c * n + r]).abs();
            cayley_asymmetry = cayley_asymmetry.max(gap);
        }
    }
    // Averaging with the transpose removes rounding-induced asymmetry
    // without changing the spectrum at first order.
    let half = fp::<F>(0.5);
    let sqrt_k: Vec<F> = (1..=n).map(|j| fi::<F>(j).sqrt()).collect();
    let s = Matrix::from_fn(n, n, |r, c| {
        let sym = half * (cayley[r * n + c] + cayley[c * n + r]);
        sqrt_k[r] * sym * sqrt_k[c]
    });

    Ok(SpectralBundle {
        n,
        x,
        k,
        n_mat,
        e,
        z,
        n_tilde,
        s,
        cayley_asymmetry,
    })
}

/// Computes the zero set at `(n, x)` as the eigenvalues of `S(x)`.
///
/// Negative `x` is handled by the exact antisymmetric mirror: compute at
/// `|x|`, negate and reverse. The result is strictly descending.
pub fn zeros_spectral<F: Real>(n: usize, x: F, tol: F) -> Result<ZeroSet<F>> {
    if x < F::zero() {
        return Ok(zeros_spectral(n, -x, tol)?.mirrored());
    }
    let bundle = build_bundle(n, x)?;
    let eig = sym_eigenvalues(&bundle.s, tol)?;
    ZeroSet::new(n, x, eig.values)
}

/// Cross-validates the two spectral forms against the exact characteristic
/// polynomial: evaluates `det(zI - Z(x))`, through its exact expansion, at
/// every eigenvalue of `S(x)` and returns the largest normalized residual
/// `|p(z_j)| / ((1+u)^n n^n)`.
pub fn eigen_consistency<F: Real>(n: usize, x: F) -> Result<F> {
    let bundle = build_bundle(n, x)?;
    let eig = sym_eigenvalues(&bundle.s, fp(DEFAULT_SPECTRAL_TOL))?;
    let poly = charpoly_at(n, x)?;
    let norm = (F::one() + poly.u).powi(n as i32) * fi::<F>(n).powi(n as i32);
    let mut worst = F::zero();
    for &z in &eig.values {
        worst = worst.max(poly.eval(z).abs() / norm);
    }
    Ok(worst)
}
