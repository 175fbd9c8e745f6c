//! Energy function of a linear Hamiltonian in coherent states.
//!
//! Both forms are evaluated at the conjugate point, which is the convention
//! under which the coupled ball flow conserves them.

use num_complex::Complex64;

use super::metric::metric;
use super::{coordinates, unpack_coordinates};
use crate::domains::{fc_inv, EtaBallPoint, JacobiBallPoint};
use crate::dynamics::{ball_velocity, LinearHamiltonian};
use crate::error::{Error, Result};
use crate::linalg::{conj, conj_vec, identity, inverse_checked, CMatrix, CVector, I};

fn check_rank(point: usize, h: &LinearHamiltonian) -> Result<()> {
    if point != h.dim() {
        return Err(Error::Dimension(format!("point of rank {point} with Hamiltonian of rank {}", h.dim())));
    }
    Ok(())
}

fn sym(a: &CMatrix) -> CMatrix {
    (a + a.transpose()) * Complex64::new(0.5, 0.0)
}

fn real_part(v: Complex64, what: &str) -> f64 {
    if v.im.abs() > 1e-9 * (1.0 + v.re.abs()) {
        log::warn!("{what} has imaginary part {:.3e}", v.im);
    }
    v.re
}

/// `(ℋ_η, ℋ_w)`:
/// `ℋ_η = εᵗη̄ + ε̄ᵗη + ½(η̄ᵗε₋η̄ + ηᵗε₊η + ηᵗε₀η̄)`,
/// `ℋ_w = (k/4) tr ε₀ + (k/2) tr[(W̄ε₋ + ε₊W + (ε₀W̄)ˢW)(I − W̄W)⁻¹]`.
pub fn energy_parts(p: &EtaBallPoint, h: &LinearHamiltonian) -> Result<(f64, f64)> {
    check_rank(p.dim(), h)?;
    let k = h.k();
    let (eps, e0, em, ep) = (h.eps(), h.eps0(), h.eps_minus(), h.eps_plus());
    let eta = &p.eta;
    let eb = conj_vec(eta);
    let w = p.w.matrix();
    let wb = conj(w);
    let he = eps.dot(&eb) + eps.conjugate().dot(eta) + (eb.dot(&(em * &eb)) + eta.dot(&(ep * eta)) + eta.dot(&(e0 * &eb))) * 0.5;
    let mb = inverse_checked(&(identity(p.dim()) - &wb * w), "(I - conj(W) W)")?;
    let inner = &wb * em + ep * w + sym(&(e0 * &wb)) * w;
    let hw = e0.trace() * (0.25 * k) + (inner * mb).trace() * (0.5 * k);
    Ok((real_part(he, "eta energy"), real_part(hw, "Siegel energy")))
}

/// `ℋ = ℋ_η + ℋ_w`.
pub fn energy(p: &EtaBallPoint, h: &LinearHamiltonian) -> Result<f64> {
    let (a, b) = energy_parts(p, h)?;
    Ok(a + b)
}

/// `ℋ₁ + ℋ₂` in the raw `(z, W)` variables.
fn energy_zw_raw(z: &CVector, w: &CMatrix, h: &LinearHamiltonian) -> Result<Complex64> {
    let k = h.k();
    let (eps, e0, em, ep) = (h.eps(), h.eps0(), h.eps_minus(), h.eps_plus());
    let m = inverse_checked(&(identity(z.len()) - w * conj(w)), "(I - W conj(W))")?;
    let x = conj(w) * &m;
    let eta = &m * (z + w * conj_vec(z));
    let eb = conj_vec(&eta);
    let h1 = eps.dot(z) + e0.trace() * (0.25 * k) + (em * w).trace() * (0.5 * k) + z.dot(&(em * z)) * 0.5;
    let lt = ep + sym(&(e0 * w)) + w * em * w;
    let h3 = ((&lt * &x).trace() * k + eb.dot(&(&lt * &eb))) * 0.5;
    let h2 = eps.dot(&(w * &eb)) + eps.conjugate().dot(&eb) + z.dot(&(e0.transpose() * &eb)) * 0.5
        + z.dot(&(em * w * &eb))
        + h3;
    Ok(h1 + h2)
}

/// Energy in `(z, W)` form; agrees with `energy(fc_inv(x))`.
pub fn energy_zw(x: &JacobiBallPoint, h: &LinearHamiltonian) -> Result<f64> {
    check_rank(x.dim(), h)?;
    let v = energy_zw_raw(&conj_vec(&x.z), &conj(x.w.matrix()), h)?;
    Ok(real_part(v, "energy"))
}

/// Antiholomorphic gradient `(∂ℋ/∂η̄, G_W)`:
/// `∂ℋ/∂η̄ = ε + ε₋η̄ + ½ε₀ᵗη`, `G_W = (k/2) M Λ M̄` with
/// `M = (I − W W̄)⁻¹`, `Λ = ε₋ + (Wε₀)ˢ + Wε₊W`.
/// For the packed coordinate `w_ij` the derivative `∂ℋ/∂w̄_ij` equals
/// `G_W[i, j]` on the diagonal and `2 G_W[i, j]` off it.
pub fn energy_gradient(p: &EtaBallPoint, h: &LinearHamiltonian) -> Result<(CVector, CMatrix)> {
    check_rank(p.dim(), h)?;
    let (eps, e0, em, ep) = (h.eps(), h.eps0(), h.eps_minus(), h.eps_plus());
    let eta = &p.eta;
    let w = p.w.matrix();
    let g_eta = eps + em * conj_vec(eta) + e0.transpose() * eta * Complex64::new(0.5, 0.0);
    let m = inverse_checked(&(identity(p.dim()) - w * conj(w)), "(I - W conj(W))")?;
    let lam = em + sym(&(w * e0)) + w * ep * w;
    let g_w = &m * lam * conj(&m) * Complex64::new(0.5 * h.k(), 0.0);
    Ok((g_eta, g_w))
}

/// Largest component of `i Ḡ ẋ − ∂ℋ/∂x̄` over the packed coordinates, with
/// `G` the finite-difference metric at `step`, `ẋ` the coupled ball
/// velocity and `∂ℋ/∂x̄` central differences of [`energy_zw`].
pub fn flow_relation_residual(x: &JacobiBallPoint, h: &LinearHamiltonian, step: f64) -> Result<f64> {
    check_rank(x.dim(), h)?;
    let n = x.dim();
    let g = metric(x, h.k(), step)?;
    let (zd, wd) = ball_velocity(h, &x.z, x.w.matrix());
    let xd = super::pack_coordinates(&zd, &wd);
    let x0 = coordinates(x);
    let f = |y: &CVector| -> Result<f64> {
        let (z, w) = unpack_coordinates(y, n)?;
        Ok(energy_zw_raw(&conj_vec(&z), &conj(&w), h)?.re)
    };
    let mut dbar = CVector::zeros(x0.len());
    for a in 0..x0.len() {
        let s = 1e-5 * x0[a].norm().max(1.0);
        let mut e = CVector::zeros(x0.len());
        e[a] = Complex64::new(s, 0.0);
        let dre = (f(&(&x0 + &e))? - f(&(&x0 - &e))?) / (2.0 * s);
        e[a] = Complex64::new(0.0, s);
        let dim = (f(&(&x0 + &e))? - f(&(&x0 - &e))?) / (2.0 * s);
        dbar[a] = Complex64::new(dre, dim) * 0.5;
    }
    let lhs = conj(&g.g) * xd * I;
    Ok((lhs - dbar).iter().fold(0f64, |acc, v| acc.max(v.norm())))
}

/// `ℋ` from a ball point through `fc_inv`; used by the phase integrals.
pub(crate) fn energy_at(x: &JacobiBallPoint, h: &LinearHamiltonian) -> Result<f64> {
    energy(&fc_inv(x)?, h)
}
