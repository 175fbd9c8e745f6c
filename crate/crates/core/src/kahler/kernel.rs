use nalgebra::{Cholesky, Schur};
use num_complex::Complex64;

use super::check_weight;
use crate::domains::{EtaBallPoint, JacobiBallPoint};
use crate::error::{Error, Result};
use crate::linalg::{all_finite, conj, conj_vec, identity, inverse_checked, CMatrix, CVector};

/// Below this margin of `I − W W̄` the kernel is reported as ill-conditioned.
const BOUNDARY_WARN: f64 = 1e-8;

/// `(M, ln det(I − W W̄))` with `M = (I − W W̄)⁻¹`, by Cholesky.
pub(crate) fn resolvent_logdet(w: &CMatrix) -> Result<(CMatrix, f64)> {
    let n = w.nrows();
    let a = identity(n) - w * conj(w);
    let a = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    if !all_finite(&a) {
        return Err(Error::NonFinite("I - W conj(W)".into()));
    }
    let chol = Cholesky::new(a).ok_or_else(|| Error::Domain("I - W conj(W) is not positive definite".into()))?;
    let l = chol.l_dirty();
    let mut logdet = 0.0;
    let mut min_pivot = f64::INFINITY;
    for i in 0..n {
        let d = l[(i, i)].re;
        min_pivot = min_pivot.min(d * d);
        logdet += 2.0 * d.ln();
    }
    if min_pivot < BOUNDARY_WARN {
        log::warn!("kernel evaluated near the ball boundary (pivot {min_pivot:.3e})");
    }
    Ok((chol.inverse(), logdet))
}

/// Exponent `F` of the diagonal kernel:
/// `2F = 2 z̄ᵗMz + zᵗW̄Mz + z̄ᵗMWz̄`.
pub(crate) fn exponent(z: &CVector, w: &CMatrix, m: &CMatrix) -> Complex64 {
    let zb = conj_vec(z);
    let mz = m * z;
    let two_f = zb.dot(&mz) * 2.0 + z.dot(&(conj(w) * &mz)) + zb.dot(&(m * w * &zb));
    two_f * 0.5
}

/// Log of the diagonal kernel from raw `(z, W)`.
pub(crate) fn potential_raw(z: &CVector, w: &CMatrix, k: f64) -> Result<f64> {
    let (m, logdet) = resolvent_logdet(w)?;
    let f = exponent(z, w, &m);
    let scale = 1.0 + f.norm();
    if f.im.abs() > 1e-10 * scale {
        log::warn!("kernel exponent has imaginary part {:.3e}", f.im);
    }
    Ok(-0.5 * k * logdet + f.re)
}

/// Kähler potential `f = ln K(x, x) = (k/2) ln det M + F`.
pub fn kahler_potential(x: &JacobiBallPoint, k: f64) -> Result<f64> {
    let k = check_weight(k)?;
    potential_raw(&x.z, x.w.matrix(), k)
}

/// `K(x, x) = det(M)^{k/2} exp(F)`.
pub fn kernel_diag(x: &JacobiBallPoint, k: f64) -> Result<f64> {
    let v = kahler_potential(x, k)?.exp();
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::NonFinite("diagonal kernel".into()));
    }
    Ok(v)
}

/// `K(x₁; x₂) = det(I − W₂W̄₁)^{−k/2} exp F`, antiholomorphic in `x₁` and
/// holomorphic in `x₂`. The power uses the sum of principal logarithms of
/// the eigenvalues of `I − W₂W̄₁`, which all have positive real part on the
/// ball, so the branch is the one continuous from the origin.
pub fn kernel_two_point(x1: &JacobiBallPoint, x2: &JacobiBallPoint, k: f64) -> Result<Complex64> {
    let k = check_weight(k)?;
    if x1.dim() != x2.dim() {
        return Err(Error::Dimension(format!("points of rank {} and {}", x1.dim(), x2.dim())));
    }
    let n = x1.dim();
    let (x, v) = (&x1.z, x1.w.matrix());
    let (y, w) = (&x2.z, x2.w.matrix());
    let a = identity(n) - w * conj(v);
    let u = inverse_checked(&a, "(I - W conj(V))")?;
    let t = Schur::new(a).unpack().1;
    let logdet: Complex64 = (0..n).map(|i| t[(i, i)].ln()).sum();
    let xb = conj_vec(x);
    let uy = &u * y;
    let two_f = xb.dot(&uy) * 2.0 + (conj(v) * y).dot(&uy) + xb.dot(&(&u * w * &xb));
    let val = (two_f * 0.5 - logdet * (0.5 * k)).exp();
    if !val.re.is_finite() || !val.im.is_finite() {
        return Err(Error::NonFinite("two-point kernel".into()));
    }
    Ok(val)
}

/// Kernel in FC coordinates: `det(M)^{k/2} exp(η̄ᵗη − ½ηᵗW̄η − ½η̄ᵗWη̄)`.
pub fn kernel_eta(p: &EtaBallPoint, k: f64) -> Result<f64> {
    let k = check_weight(k)?;
    let (_, logdet) = resolvent_logdet(p.w.matrix())?;
    let eta = &p.eta;
    let eb = conj_vec(eta);
    let w = p.w.matrix();
    let f = eb.dot(eta) - eta.dot(&(conj(w) * eta)) * 0.5 - eb.dot(&(w * &eb)) * 0.5;
    let v = (-0.5 * k * logdet + f.re).exp();
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::NonFinite("FC kernel".into()));
    }
    Ok(v)
}
