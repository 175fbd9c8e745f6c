//! Decoupled flat-factor equation `iη̇ = ε + ε₋η̄ + ½ε₀ᵗη`.

use super::{build_eta_system, LinearHamiltonian, OdeSystem};
use crate::error::{Error, Result};
use crate::linalg::{c, conj_vec, expm, quadrature::gauss_legendre_interval, real_part, CVector, RMatrix, RVector, I};

/// `η = ξ − iζ ↦ (ξ; ζ)`.
pub fn eta_to_real(eta: &CVector) -> RVector {
    let n = eta.len();
    RVector::from_fn(2 * n, |i, _| if i < n { eta[i].re } else { -eta[i - n].im })
}

pub fn eta_from_real(z: &RVector) -> CVector {
    let n = z.len() / 2;
    CVector::from_fn(n, |i, _| c(z[i], -z[n + i]))
}

/// `∫₀ᵗ e^{h s} ds · f` by composite Gauss-Legendre, refined until two
/// successive panel counts agree.
fn exp_integral(h: &RMatrix, t: f64, f: &RVector) -> Result<RVector> {
    const NODES: usize = 8;
    const TOL: f64 = 1e-13;
    let mut prev: Option<RVector> = None;
    let mut panels = 1usize;
    loop {
        let width = t / panels as f64;
        let (xs, ws) = gauss_legendre_interval(NODES, 0.0, width);
        let mut g = RVector::zeros(f.len());
        for (x, w) in xs.iter().zip(&ws) {
            g += expm(&(h * *x))? * f * *w;
        }
        let step = expm(&(h * width))?;
        let mut start = RMatrix::identity(h.nrows(), h.ncols());
        let mut acc = RMatrix::zeros(h.nrows(), h.ncols());
        for _ in 0..panels {
            acc += &start;
            start = &start * &step;
        }
        let cur = acc * g;
        if let Some(p) = &prev {
            if (&cur - p).amax() <= TOL * 1f64.max(cur.amax()) {
                return Ok(cur);
            }
        }
        if panels >= 1 << 14 {
            return Err(Error::Convergence("variation-of-constants quadrature".into()));
        }
        prev = Some(cur);
        panels *= 2;
    }
}

/// Variation of constants `Z(t) = e^{h t}Z₀ + ∫₀ᵗ e^{h(t−τ)} F dτ` on the real form.
pub fn solve_eta(eta0: &CVector, h: &LinearHamiltonian, t: f64) -> Result<CVector> {
    if eta0.len() != h.dim() {
        return Err(Error::Dimension(format!("eta has length {}, Hamiltonian rank {}", eta0.len(), h.dim())));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("time".into()));
    }
    if t == 0.0 {
        return Ok(eta0.clone());
    }
    let (lift, f) = build_eta_system(h);
    let hr = real_part(&lift.h);
    let z0 = eta_to_real(eta0);
    let homogeneous = expm(&(&hr * t))? * z0;
    let forced = if f.amax() == 0.0 {
        RVector::zeros(f.len())
    } else if t > 0.0 {
        exp_integral(&hr, t, &f)?
    } else {
        -exp_integral(&(-&hr), -t, &f)?
    };
    Ok(eta_from_real(&(homogeneous + forced)))
}

/// Complex form of the η equation for the oracle integrator.
pub struct EtaSystem<'a> {
    pub hamiltonian: &'a LinearHamiltonian,
}

impl OdeSystem for EtaSystem<'_> {
    fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }
    fn rhs(&self, _t: f64, eta: &CVector) -> CVector {
        let h = self.hamiltonian;
        (h.eps() + h.eps_minus() * conj_vec(eta) + h.eps0().transpose() * eta * c(0.5, 0.0)) * (-I)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate_oracle;
    use crate::linalg::{max_abs_vec, CMatrix};

    #[test]
    fn constant_force() {
        let z = CMatrix::zeros(1, 1);
        let h = LinearHamiltonian::new(CVector::from_element(1, c(1.0, 0.0)), z.clone(), z.clone(), z, 2.0).unwrap();
        for t in [0.0, 0.5, 3.0, -1.0] {
            let e = solve_eta(&CVector::zeros(1), &h, t).unwrap();
            assert!((e[0] - c(0.0, -t)).norm() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn real_form_roundtrip() {
        let e = CVector::from_vec(vec![c(0.3, -1.2), c(2.0, 0.7)]);
        assert_eq!(eta_from_real(&eta_to_real(&e)), e);
    }

    #[test]
    fn agrees_with_oracle() {
        let h = crate::random::random_hamiltonian(3, 5.0, 4, 0.7);
        let e0 = CVector::from_vec(vec![c(0.3, -1.2), c(2.0, 0.7), c(-0.4, 0.1)]);
        let tr = integrate_oracle(&EtaSystem { hamiltonian: &h }, &e0, 1.5, 1e-3).unwrap();
        let closed = solve_eta(&e0, &h, 1.5).unwrap();
        assert!(max_abs_vec(&(tr.last() - closed)) < 1e-10);
    }
}
