//! Jacobi group elements in real and complexified form, their composition
//! laws, and their actions on the coordinate charts.

use num_complex::Complex64;

use crate::domains::{EtaBallPoint, JacobiBallPoint, JacobiUpperPoint, SiegelBallPoint, SiegelUpperPoint};
use crate::error::{Error, Result};
use crate::linalg::{
    blocks, c, complexify, conj_vec, identity, is_sp_complex, j_matrix, k_matrix,
    right_divide, solve_vec_checked, symplectic_residual_real, to_complex, CMatrix, CVector, RMatrix, RVector,
    DEFAULT_TOL, I,
};

/// `(g, α, t)` with `g ∈ Sp(n,ℝ)_ℂ` in block form `[[p, q], [q̄, p̄]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiElementC {
    g: CMatrix,
    alpha: CVector,
    t: f64,
}

impl JacobiElementC {
    pub fn new(g: CMatrix, alpha: CVector, t: f64) -> Result<Self> {
        Self::with_tolerance(g, alpha, t, DEFAULT_TOL)
    }

    pub fn with_tolerance(g: CMatrix, alpha: CVector, t: f64, tol: f64) -> Result<Self> {
        if g.nrows() != 2 * alpha.len() || !g.is_square() {
            return Err(Error::Dimension(format!(
                "group element: g is {}x{}, alpha has length {}",
                g.nrows(),
                g.ncols(),
                alpha.len()
            )));
        }
        let scale = 1f64.max(crate::linalg::max_abs(&g)).powi(2);
        if !is_sp_complex(&g, tol * scale)? {
            return Err(Error::Domain("g is not in Sp(n,R)_C".into()));
        }
        if !t.is_finite() || !crate::linalg::all_finite_vec(&alpha) {
            return Err(Error::NonFinite("group element".into()));
        }
        Ok(Self { g, alpha, t })
    }

    pub fn identity(n: usize) -> Self {
        Self { g: identity(2 * n), alpha: CVector::zeros(n), t: 0.0 }
    }

    pub fn translation(alpha: CVector) -> Self {
        let n = alpha.len();
        Self { g: identity(2 * n), alpha, t: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn g(&self) -> &CMatrix {
        &self.g
    }

    pub fn alpha(&self) -> &CVector {
        &self.alpha
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn p(&self) -> CMatrix {
        blocks(&self.g).0
    }

    pub fn q(&self) -> CMatrix {
        blocks(&self.g).1
    }

    /// `g⁻¹·α = p* α − qᵗ ᾱ`.
    fn inverse_action_on(&self, alpha: &CVector) -> CVector {
        self.p().adjoint() * alpha - self.q().transpose() * conj_vec(alpha)
    }

    /// `h₁ ∘ h₂ = (g₁g₂, g₂⁻¹·α₁ + α₂, t₁ + t₂ + Im(g₂⁻¹·α₁ · ᾱ₂))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("composing elements of different rank".into()));
        }
        let beta = other.inverse_action_on(&self.alpha);
        let central = beta.iter().zip(other.alpha.iter()).map(|(b, a)| b * a.conj()).sum::<Complex64>().im;
        Ok(Self { g: &self.g * &other.g, alpha: &beta + &other.alpha, t: self.t + other.t + central })
    }

    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let k = to_complex(&k_matrix(n));
        let ginv = &k * self.g.adjoint() * &k;
        let beta = {
            let (p, q, _, _) = blocks(&ginv);
            p.adjoint() * &self.alpha - q.transpose() * conj_vec(&self.alpha)
        };
        Self { g: ginv, alpha: -beta, t: -self.t }
    }
}

/// `(M, (n, m), κ)` with `M` real symplectic; `shift` stores `(n; m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiElementR {
    g: RMatrix,
    shift: RVector,
    kappa: f64,
}

impl JacobiElementR {
    pub fn new(g: RMatrix, shift: RVector, kappa: f64) -> Result<Self> {
        Self::with_tolerance(g, shift, kappa, DEFAULT_TOL)
    }

    pub fn with_tolerance(g: RMatrix, shift: RVector, kappa: f64, tol: f64) -> Result<Self> {
        if !g.is_square() || g.nrows() != shift.len() || shift.len() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "real group element: g is {}x{}, shift has length {}",
                g.nrows(),
                g.ncols(),
                shift.len()
            )));
        }
        let scale = 1f64.max(g.amax()).powi(2);
        let res = symplectic_residual_real(&g)?;
        if res > tol * scale {
            return Err(Error::Domain(format!("g is not symplectic (residual {res:.3e})")));
        }
        if !kappa.is_finite() || shift.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("real group element".into()));
        }
        Ok(Self { g, shift, kappa })
    }

    pub fn identity(n: usize) -> Self {
        Self { g: RMatrix::identity(2 * n, 2 * n), shift: RVector::zeros(2 * n), kappa: 0.0 }
    }

    /// Pure translation by `(n, m)`.
    pub fn translation(n_part: &RVector, m_part: &RVector) -> Self {
        let n = n_part.len();
        let mut shift = RVector::zeros(2 * n);
        shift.rows_mut(0, n).copy_from(n_part);
        shift.rows_mut(n, n).copy_from(m_part);
        Self { g: RMatrix::identity(2 * n, 2 * n), shift, kappa: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.shift.len() / 2
    }

    pub fn g(&self) -> &RMatrix {
        &self.g
    }

    pub fn shift(&self) -> &RVector {
        &self.shift
    }

    pub fn n_part(&self) -> RVector {
        self.shift.rows(0, self.dim()).clone_owned()
    }

    pub fn m_part(&self) -> RVector {
        self.shift.rows(self.dim(), self.dim()).clone_owned()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `(M₁M₂, X₁M₂ + X₂, κ₁ + κ₂ + X₁M₂JX₂ᵗ)` with X as row vectors.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("composing elements of different rank".into()));
        }
        let x1m2 = other.g.transpose() * &self.shift;
        let central = x1m2.dot(&(j_matrix(self.dim()) * &other.shift));
        Ok(Self { g: &self.g * &other.g, shift: &x1m2 + &other.shift, kappa: self.kappa + other.kappa + central })
    }

    pub fn inverse(&self) -> Self {
        let j = j_matrix(self.dim());
        let ginv = -(&j * self.g.transpose() * &j);
        let shift = -(ginv.transpose() * &self.shift);
        Self { g: ginv, shift, kappa: -self.kappa }
    }
}

/// Isomorphism from the real to the complexified Jacobi group:
/// symplectic part by complexification, `α = m + i n`.
pub fn theta(h: &JacobiElementR) -> Result<JacobiElementC> {
    let g = complexify(&h.g)?;
    let alpha = h.m_part().map(|x| c(x, 0.0)) + h.n_part().map(|x| c(0.0, x));
    JacobiElementC::with_tolerance(g, alpha, h.kappa, 1e-8)
}

/// `W₁ = (pW + q)(q̄W + p̄)⁻¹`.
pub fn act_siegel_ball(g: &CMatrix, w: &SiegelBallPoint) -> Result<SiegelBallPoint> {
    let (p, q, qb, pb) = blocks(g);
    let w1 = right_divide(&(&p * w.matrix() + &q), &(&qb * w.matrix() + &pb), "(conj(q) W + conj(p))")?;
    SiegelBallPoint::interior(w1)
}

/// Action on the Siegel-Jacobi ball:
/// `z₁ = (Wq* + p*)⁻¹ (z + α − W ᾱ)`, `W₁` as in [`act_siegel_ball`].
pub fn act_ball(h: &JacobiElementC, x: &JacobiBallPoint) -> Result<JacobiBallPoint> {
    check_rank(h.dim(), x.dim())?;
    let (p, q) = (h.p(), h.q());
    let w = x.w.matrix();
    let w1 = act_siegel_ball(&h.g, &x.w)?;
    let rhs = &x.z + &h.alpha - w * conj_vec(&h.alpha);
    let z1 = solve_vec_checked(&(w * q.adjoint() + p.adjoint()), &rhs, "(W q* + p*)")?;
    JacobiBallPoint::new(z1, w1)
}

/// Action on the Siegel-Jacobi upper half plane:
/// `v₁ = (av + b)(cv + d)⁻¹`, `u₁ = (v cᵗ + dᵗ)⁻¹ (u + v n + m)`.
pub fn act_upper(h: &JacobiElementR, x: &JacobiUpperPoint) -> Result<JacobiUpperPoint> {
    check_rank(h.dim(), x.dim())?;
    let (a, b, cc, d) = blocks(&to_complex(&h.g));
    let v = x.v.matrix();
    let v1 = right_divide(&(&a * v + &b), &(&cc * v + &d), "(c v + d)")?;
    let rhs = &x.u + v * h.n_part().map(|t| c(t, 0.0)) + h.m_part().map(|t| c(t, 0.0));
    let u1 = solve_vec_checked(&(v * cc.transpose() + d.transpose()), &rhs, "(v c^t + d^t)")?;
    JacobiUpperPoint::new(u1, SiegelUpperPoint::new(v1)?)
}

/// Action in split coordinates: `η₁ = p(η + α) + q(η̄ + ᾱ)`.
pub fn act_eta(h: &JacobiElementC, x: &EtaBallPoint) -> Result<EtaBallPoint> {
    check_rank(h.dim(), x.dim())?;
    let s = &x.eta + &h.alpha;
    let eta1 = h.p() * &s + h.q() * conj_vec(&s);
    EtaBallPoint::new(eta1, act_siegel_ball(&h.g, &x.w)?)
}

fn check_rank(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("element of rank {a} acting on point of rank {b}")));
    }
    Ok(())
}

/// Value of the automorphy factor together with a flag raised when the
/// determinant sits on the branch cut of the fractional power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multiplier {
    pub value: Complex64,
    pub branch_ambiguous: bool,
}

/// `λ = det(Wq* + p*)^{−k/2} · exp(η̄ᵗz/2 − η̄₁ᵗz₁/2) · exp(i Im(α·η̄))`, where
/// `η` splits `x` and `η₁ = p(η + α) + q(η̄ + ᾱ)` splits `h·x`.
pub fn multiplier(h: &JacobiElementC, x: &JacobiBallPoint, k: f64) -> Result<Multiplier> {
    if !(k > 0.0) {
        return Err(Error::Parameter(format!("weight k = {k} must be positive")));
    }
    check_rank(h.dim(), x.dim())?;
    let (p, q) = (h.p(), h.q());
    let w = x.w.matrix();
    let det = (w * q.adjoint() + p.adjoint()).determinant();
    if det.norm() == 0.0 {
        return Err(Error::Singular { what: "(W q* + p*)".into(), rcond: 0.0 });
    }
    let branch_ambiguous = det.re < 0.0 && det.im.abs() <= 1e-12 * det.norm();
    let eta = crate::domains::fc_inv(x)?.eta;
    let x1 = act_ball(h, x)?;
    let s = &eta + &h.alpha;
    let eta1 = &p * &s + &q * conj_vec(&s);
    let dot = |a: &CVector, b: &CVector| a.iter().zip(b.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>();
    let phase = h.alpha.iter().zip(eta.iter()).map(|(a, e)| a * e.conj()).sum::<Complex64>().im;
    let log_val = -0.5 * k * det.ln() + 0.5 * dot(&eta, &x.z) - 0.5 * dot(&eta1, &x1.z) + I * phase;
    Ok(Multiplier { value: log_val.exp(), branch_ambiguous })
}

/// Inverse of a complexified symplectic matrix, `K g* K`.
pub fn sp_complex_inverse(g: &CMatrix) -> CMatrix {
    let k = to_complex(&k_matrix(g.nrows() / 2));
    &k * g.adjoint() * &k
}

/// Real symplectic inverse `−J Mᵗ J`.
pub fn sp_real_inverse(m: &RMatrix) -> RMatrix {
    let j = j_matrix(m.nrows() / 2);
    -(&j * m.transpose() * &j)
}
