//! Principal matrix square root and logarithm (inverse scaling and squaring).

use num_complex::Complex64;

use super::quadrature::gauss_legendre_interval;
use super::{c, eigen_decompose, inverse_checked, mat_exp, max_abs, norm1, CMatrix};
use crate::error::{Error, Result};

/// Distance to the negative real axis below which the principal branch is refused.
pub const BRANCH_TOL: f64 = 1e-8;

fn check_spectrum(a: &CMatrix) -> Result<()> {
    let dec = eigen_decompose(a)?;
    for l in &dec.values {
        if l.norm() < 1e-14 * norm1(a).max(1.0) {
            return Err(Error::Singular { what: "matrix logarithm".into(), rcond: 0.0 });
        }
        if l.re < 0.0 && l.im.abs() <= BRANCH_TOL * l.norm().max(1.0) {
            return Err(Error::Branch(format!("eigenvalue {l} lies on the negative real axis")));
        }
    }
    Ok(())
}

/// Denman-Beavers iteration for the principal square root.
pub fn sqrt_principal(a: &CMatrix) -> Result<CMatrix> {
    check_spectrum(a)?;
    db_sqrt(a)
}

/// Product-free Denman-Beavers with determinant scaling while far from
/// convergence; stops at the tolerance or when rounding stalls the updates.
fn db_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = CMatrix::identity(n, n);
    let mut prev = f64::INFINITY;
    for _ in 0..100 {
        let yi = inverse_checked(&y, "square-root iteration")?;
        let zi = inverse_checked(&z, "square-root iteration")?;
        let mu = if prev > 1e-2 {
            let d = (y.determinant() * z.determinant()).norm();
            if d.is_finite() && d > 0.0 { d.powf(-0.5 / n as f64) } else { 1.0 }
        } else {
            1.0
        };
        let y1 = (&y * c(mu, 0.0) + zi * c(1.0 / mu, 0.0)) * c(0.5, 0.0);
        let z1 = (&z * c(mu, 0.0) + yi * c(1.0 / mu, 0.0)) * c(0.5, 0.0);
        let scale = max_abs(&y1).max(1.0);
        let delta = max_abs(&(&y1 - &y)) / scale;
        y = y1;
        z = z1;
        if delta <= 1e-14 || (delta <= 1e-9 && delta >= prev) {
            return Ok(y);
        }
        prev = delta;
    }
    Err(Error::Convergence("matrix square root".into()))
}

/// Principal logarithm; fails with a branch error when an eigenvalue sits on
/// the negative real axis.
pub fn log_principal(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension("log needs a square matrix".into()));
    }
    check_spectrum(a)?;
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    let mut x = a.clone();
    let mut k = 0;
    while norm1(&(&x - &id)) > 0.25 {
        if k >= 64 {
            return Err(Error::Convergence("logarithm square-root stage".into()));
        }
        x = db_sqrt(&x)?;
        k += 1;
    }
    let e = &x - &id;
    let (nodes, weights) = gauss_legendre_interval(10, 0.0, 1.0);
    let mut l = CMatrix::zeros(n, n);
    for (s, w) in nodes.iter().zip(&weights) {
        let r = inverse_checked(&(&id + &e * c(*s, 0.0)), "logarithm quadrature")?;
        l += &e * r * c(*w, 0.0);
    }
    let l = l * Complex64::new(2f64.powi(k), 0.0);
    let back = mat_exp(&l, 1.0)?;
    if max_abs(&(back - a)) > 1e-8 * max_abs(a).max(1.0) {
        return Err(Error::Branch("logarithm failed the exponential round trip".into()));
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat_exp, I};

    #[test]
    fn log_inverts_exp() {
        let a = CMatrix::from_fn(3, 3, |i, j| c(0.2 * i as f64 - 0.1 * j as f64, 0.15 * (i + j) as f64));
        let e = mat_exp(&a, 1.0).unwrap();
        let l = log_principal(&e).unwrap();
        assert!(max_abs(&(l - a)) < 1e-11);
    }

    #[test]
    fn rotation_log() {
        let mut r = CMatrix::zeros(2, 2);
        let th: f64 = 2.0;
        r[(0, 0)] = c(th.cos(), 0.0);
        r[(0, 1)] = c(th.sin(), 0.0);
        r[(1, 0)] = c(-th.sin(), 0.0);
        r[(1, 1)] = c(th.cos(), 0.0);
        let l = log_principal(&r).unwrap();
        assert!((l[(0, 1)] - th).norm() < 1e-11 && (l[(1, 0)] + th).norm() < 1e-11);
        assert!(l[(0, 0)].norm() < 1e-11);
    }

    #[test]
    fn negative_axis_is_branch_error() {
        let m = -CMatrix::identity(2, 2);
        assert!(matches!(log_principal(&m), Err(Error::Branch(_))));
        let mut d = CMatrix::identity(2, 2);
        d[(0, 0)] = I;
        assert!(log_principal(&d).is_ok());
    }

    #[test]
    fn sqrt_squares_back() {
        let a = CMatrix::from_fn(3, 3, |i, j| if i == j { c(2.0 + i as f64, 0.5) } else { c(0.3, -0.1 * j as f64) });
        let s = sqrt_principal(&a).unwrap();
        assert!(max_abs(&(&s * &s - a)) < 1e-12);
    }
}
