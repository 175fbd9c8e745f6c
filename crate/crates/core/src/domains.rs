//! Points of the Siegel ball / upper half plane and their Jacobi extensions,
//! with the transforms relating the charts.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::linalg::{
    all_finite, all_finite_vec, c, conj, conj_vec, identity, imag_part, inverse_checked, max_abs, min_hermitian_eigenvalue,
    right_divide, solve_vec_checked, symmetrize, symmetry_residual, CMatrix, CVector, DEFAULT_TOL, I,
};

/// Default margin for `λ_min(I − W W̄)` when constructing ball points.
pub const DEFAULT_BALL_MARGIN: f64 = 1e-8;

/// `λ_min(I − W W̄)` for a symmetric W, i.e. `1 − ‖W‖₂²`.
pub fn ball_margin(w: &CMatrix) -> f64 {
    let n = w.nrows();
    min_hermitian_eigenvalue(&(identity(n) - w * conj(w)))
}

/// Symmetry and strict positivity of `I − W W̄` with the given margin.
pub fn ball_contains(w: &CMatrix, margin: f64) -> bool {
    w.is_square()
        && all_finite(w)
        && symmetry_residual(w) <= DEFAULT_TOL * 1f64.max(max_abs(w))
        && ball_margin(w) > 0.0
        && ball_margin(w) >= margin
}

/// Smallest eigenvalue of the real symmetric `Im v`.
pub fn upper_margin(v: &CMatrix) -> f64 {
    let r = imag_part(v);
    let r = (&r + r.transpose()) * 0.5;
    SymmetricEigen::new(r).eigenvalues.iter().fold(f64::INFINITY, |a, b| a.min(*b))
}

pub fn upper_contains(v: &CMatrix, margin: f64) -> bool {
    v.is_square()
        && all_finite(v)
        && symmetry_residual(v) <= DEFAULT_TOL * 1f64.max(max_abs(v))
        && upper_margin(v) > margin
}

fn check_vector(v: &CVector, n: usize, what: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::Dimension(format!("{what} has length {}, expected {n}", v.len())));
    }
    if !all_finite_vec(v) {
        return Err(Error::NonFinite(what.to_string()));
    }
    Ok(())
}

/// Symmetric W with `I − W W̄ > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelBallPoint {
    w: CMatrix,
}

impl SiegelBallPoint {
    pub fn new(w: CMatrix) -> Result<Self> {
        Self::with_margin(w, DEFAULT_BALL_MARGIN)
    }

    pub fn with_margin(w: CMatrix, margin: f64) -> Result<Self> {
        if !w.is_square() {
            return Err(Error::Dimension("ball point must be square".into()));
        }
        if !all_finite(&w) {
            return Err(Error::NonFinite("ball point".into()));
        }
        let sym = symmetry_residual(&w);
        if sym > DEFAULT_TOL * 1f64.max(max_abs(&w)) {
            return Err(Error::Domain(format!("W is not symmetric (residual {sym:.3e})")));
        }
        let m = ball_margin(&w);
        if m <= 0.0 || m < margin {
            return Err(Error::Domain(format!("I - W conj(W) has smallest eigenvalue {m:.3e}")));
        }
        Ok(Self { w: symmetrize(&w) })
    }

    /// Accepts any point strictly inside the ball; used for transform outputs
    /// whose membership is guaranteed analytically.
    pub(crate) fn interior(w: CMatrix) -> Result<Self> {
        Self::with_margin(w, 0.0)
    }

    pub fn origin(n: usize) -> Self {
        Self { w: CMatrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.w
    }

    pub fn into_matrix(self) -> CMatrix {
        self.w
    }

    pub fn margin(&self) -> f64 {
        ball_margin(&self.w)
    }

    /// `M = (I − W W̄)⁻¹`.
    pub fn resolvent(&self) -> Result<CMatrix> {
        inverse_checked(&(identity(self.dim()) - &self.w * conj(&self.w)), "(I - W conj(W))")
    }
}

impl TryFrom<CMatrix> for SiegelBallPoint {
    type Error = Error;
    fn try_from(w: CMatrix) -> Result<Self> {
        Self::new(w)
    }
}

impl From<SiegelBallPoint> for CMatrix {
    fn from(p: SiegelBallPoint) -> CMatrix {
        p.w
    }
}

/// Symmetric `v = s + i r` with `r > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelUpperPoint {
    v: CMatrix,
}

impl SiegelUpperPoint {
    pub fn new(v: CMatrix) -> Result<Self> {
        Self::with_margin(v, 0.0)
    }

    pub fn with_margin(v: CMatrix, margin: f64) -> Result<Self> {
        if !v.is_square() {
            return Err(Error::Dimension("upper point must be square".into()));
        }
        if !all_finite(&v) {
            return Err(Error::NonFinite("upper point".into()));
        }
        let sym = symmetry_residual(&v);
        if sym > DEFAULT_TOL * 1f64.max(max_abs(&v)) {
            return Err(Error::Domain(format!("v is not symmetric (residual {sym:.3e})")));
        }
        let m = upper_margin(&v);
        if m <= margin {
            return Err(Error::Domain(format!("Im v has smallest eigenvalue {m:.3e}")));
        }
        Ok(Self { v: symmetrize(&v) })
    }

    /// `v = i I`.
    pub fn base(n: usize) -> Self {
        Self { v: identity(n) * I }
    }

    pub fn dim(&self) -> usize {
        self.v.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.v
    }

    pub fn into_matrix(self) -> CMatrix {
        self.v
    }

    pub fn real_part(&self) -> crate::linalg::RMatrix {
        crate::linalg::real_part(&self.v)
    }

    pub fn imag_part(&self) -> crate::linalg::RMatrix {
        imag_part(&self.v)
    }
}

impl TryFrom<CMatrix> for SiegelUpperPoint {
    type Error = Error;
    fn try_from(v: CMatrix) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SiegelUpperPoint> for CMatrix {
    fn from(p: SiegelUpperPoint) -> CMatrix {
        p.v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiBallPoint {
    pub z: CVector,
    pub w: SiegelBallPoint,
}

impl JacobiBallPoint {
    pub fn new(z: CVector, w: SiegelBallPoint) -> Result<Self> {
        check_vector(&z, w.dim(), "z")?;
        Ok(Self { z, w })
    }

    pub fn origin(n: usize) -> Self {
        Self { z: CVector::zeros(n), w: SiegelBallPoint::origin(n) }
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiUpperPoint {
    pub u: CVector,
    pub v: SiegelUpperPoint,
}

impl JacobiUpperPoint {
    pub fn new(u: CVector, v: SiegelUpperPoint) -> Result<Self> {
        check_vector(&u, v.dim(), "u")?;
        Ok(Self { u, v })
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }
}

/// Point of `ℂⁿ × 𝒟ₙ` in the coordinates that split the Kähler form.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaBallPoint {
    pub eta: CVector,
    pub w: SiegelBallPoint,
}

impl EtaBallPoint {
    pub fn new(eta: CVector, w: SiegelBallPoint) -> Result<Self> {
        check_vector(&eta, w.dim(), "eta")?;
        Ok(Self { eta, w })
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }
}

/// `W = (v − iI)(v + iI)⁻¹`.
pub fn cayley(v: &SiegelUpperPoint) -> Result<SiegelBallPoint> {
    let n = v.dim();
    let id = identity(n) * I;
    let w = right_divide(&(v.matrix() - &id), &(v.matrix() + &id), "(v + iI)")?;
    SiegelBallPoint::interior(w)
}

/// `v = i (I − W)⁻¹ (I + W)`.
pub fn cayley_inv(w: &SiegelBallPoint) -> Result<SiegelUpperPoint> {
    let n = w.dim();
    let id = identity(n);
    let inv = inverse_checked(&(&id - w.matrix()), "(I - W)")?;
    let v = inv * (&id + w.matrix()) * I;
    SiegelUpperPoint::new(v)
}

/// `(u, v) ↦ (z, W)` with `W = cayley(v)`, `z = 2i (v + iI)⁻¹ u`.
pub fn partial_cayley(x: &JacobiUpperPoint) -> Result<JacobiBallPoint> {
    let n = x.dim();
    let w = cayley(&x.v)?;
    let z = solve_vec_checked(&(x.v.matrix() + identity(n) * I), &x.u, "(v + iI)")? * c(0.0, 2.0);
    JacobiBallPoint::new(z, w)
}

/// `(z, W) ↦ (u, v)` with `v = cayley_inv(W)`, `u = (I − W)⁻¹ z`.
pub fn partial_cayley_inv(x: &JacobiBallPoint) -> Result<JacobiUpperPoint> {
    let n = x.dim();
    let v = cayley_inv(&x.w)?;
    let u = solve_vec_checked(&(identity(n) - x.w.matrix()), &x.z, "(I - W)")?;
    JacobiUpperPoint::new(u, v)
}

/// `z = η − W η̄`.
pub fn fc(p: &EtaBallPoint) -> JacobiBallPoint {
    let z = &p.eta - p.w.matrix() * conj_vec(&p.eta);
    JacobiBallPoint { z, w: p.w.clone() }
}

/// `η = (I − W W̄)⁻¹ (z + W z̄)`.
pub fn fc_inv(x: &JacobiBallPoint) -> Result<EtaBallPoint> {
    let n = x.dim();
    let w = x.w.matrix();
    let rhs = &x.z + w * conj_vec(&x.z);
    let eta = solve_vec_checked(&(identity(n) - w * conj(w)), &rhs, "(I - W conj(W))")?;
    Ok(EtaBallPoint { eta, w: x.w.clone() })
}

/// `u = ((v + iI) η − (v − iI) η̄) / 2i`.
pub fn fc1(eta: &CVector, v: &SiegelUpperPoint) -> Result<JacobiUpperPoint> {
    check_vector(eta, v.dim(), "eta")?;
    let n = v.dim();
    let id = identity(n) * I;
    let u = ((v.matrix() + &id) * eta - (v.matrix() - &id) * conj_vec(eta)) * c(0.0, -0.5);
    JacobiUpperPoint::new(u, v.clone())
}

/// Inverse of [`fc1`]:
/// `η = (v̄ − iI)(v̄ − v)⁻¹(v − iI)[(v − iI)⁻¹ u − (v̄ − iI)⁻¹ ū]`,
/// evaluated as `(v̄ − iI)(v̄ − v)⁻¹[u − (v − iI)(v̄ − iI)⁻¹ ū]` so that no
/// inverse of `v − iI` (singular at `v = iI`) is needed.
pub fn fc1_inv(x: &JacobiUpperPoint) -> Result<CVector> {
    let n = x.dim();
    let id = identity(n) * I;
    let v = x.v.matrix();
    let vb = conj(v);
    let b = solve_vec_checked(&(&vb - &id), &conj_vec(&x.u), "(conj(v) - iI)")?;
    let inner = &x.u - (v - &id) * b;
    let mid = solve_vec_checked(&(&vb - v), &inner, "(conj(v) - v)")?;
    Ok((&vb - &id) * mid)
}
