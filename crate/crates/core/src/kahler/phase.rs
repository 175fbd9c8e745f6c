use num_complex::Complex64;
use serde::Serialize;

use super::check_weight;
use super::energy::energy_at;
use super::kernel::resolvent_logdet;
use crate::domains::{fc_inv, JacobiBallPoint};
use crate::dynamics::LinearHamiltonian;
use crate::error::{Error, Result};
use crate::linalg::{conj, conj_vec, CMatrix, CVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseReport {
    pub berry: f64,
    pub dynamical: f64,
    pub total: f64,
}

/// Derivatives of the potential at a point: `(∂f/∂z, ∇_W f)` with
/// `∂f/∂z = η̄` and `∇_W f = ½(k W̄M + η̄η̄ᵗ)`.
struct Connection {
    dz: CVector,
    dw: CMatrix,
}

impl Connection {
    fn at(x: &JacobiBallPoint, k: f64) -> Result<Self> {
        let eb = conj_vec(&fc_inv(x)?.eta);
        let (m, _) = resolvent_logdet(x.w.matrix())?;
        let dw = (conj(x.w.matrix()) * m * Complex64::new(k, 0.0) + &eb * eb.transpose()) * Complex64::new(0.5, 0.0);
        Ok(Self { dz: eb, dw })
    }

    /// `∂f/∂z · dz + tr(∇_W f · dW)`.
    fn apply(&self, dz: &CVector, dw: &CMatrix) -> Complex64 {
        self.dz.dot(dz) + (&self.dw * dw).trace()
    }
}

/// Running Berry and dynamical phases along a sampled path; trapezoidal in
/// the samples, so contributions add over concatenated paths.
pub struct PhaseAccumulator {
    k: f64,
    hamiltonian: Option<LinearHamiltonian>,
    berry: f64,
    dynamical: f64,
    path: Vec<(f64, JacobiBallPoint)>,
    last: Option<(Connection, f64)>,
}

impl PhaseAccumulator {
    /// Berry phase only.
    pub fn new(k: f64) -> Result<Self> {
        Ok(Self { k: check_weight(k)?, hamiltonian: None, berry: 0.0, dynamical: 0.0, path: Vec::new(), last: None })
    }

    /// Berry and dynamical phases for `h` (weight taken from `h`).
    pub fn with_hamiltonian(h: LinearHamiltonian) -> Self {
        Self { k: h.k(), hamiltonian: Some(h), berry: 0.0, dynamical: 0.0, path: Vec::new(), last: None }
    }

    pub fn push(&mut self, t: f64, x: JacobiBallPoint) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::Path(format!("non-finite timestamp {t}")));
        }
        if let Some((t_prev, x_prev)) = self.path.last() {
            if !(t > *t_prev) {
                return Err(Error::Path(format!("timestamps must increase strictly ({t_prev} then {t})")));
            }
            if x_prev.dim() != x.dim() {
                return Err(Error::Dimension("path points change rank".into()));
            }
        }
        if let Some(h) = &self.hamiltonian {
            if h.dim() != x.dim() {
                return Err(Error::Dimension(format!("point of rank {} with Hamiltonian of rank {}", x.dim(), h.dim())));
            }
        }
        let conn = Connection::at(&x, self.k)?;
        let energy = match &self.hamiltonian {
            Some(h) => energy_at(&x, h)?,
            None => 0.0,
        };
        if let (Some((prev, e_prev)), Some((t_prev, x_prev))) = (&self.last, self.path.last()) {
            let dz = &x.z - &x_prev.z;
            let dw = x.w.matrix() - x_prev.w.matrix();
            let a = (prev.apply(&dz, &dw) + conn.apply(&dz, &dw)) * 0.5;
            self.berry -= a.im;
            self.dynamical -= 0.5 * (e_prev + energy) * (t - t_prev);
        }
        self.last = Some((conn, energy));
        self.path.push((t, x));
        Ok(())
    }

    pub fn berry(&self) -> f64 {
        self.berry
    }

    pub fn dynamical(&self) -> f64 {
        self.dynamical
    }

    pub fn total(&self) -> f64 {
        self.berry + self.dynamical
    }

    pub fn path(&self) -> &[(f64, JacobiBallPoint)] {
        &self.path
    }

    pub fn report(&self) -> PhaseReport {
        PhaseReport { berry: self.berry, dynamical: self.dynamical, total: self.total() }
    }
}

fn check_samples(path: &[(f64, JacobiBallPoint)]) -> Result<()> {
    if path.len() < 3 {
        return Err(Error::Path(format!("need at least 3 samples, got {}", path.len())));
    }
    Ok(())
}

/// `φ_B = −Im ∫ (∂f/∂z·dz + tr(∇_W f·dW))`, trapezoidal over the samples.
pub fn berry_phase(path: &[(f64, JacobiBallPoint)], k: f64) -> Result<f64> {
    check_samples(path)?;
    let mut acc = PhaseAccumulator::new(k)?;
    for (t, x) in path {
        acc.push(*t, x.clone())?;
    }
    Ok(acc.berry())
}

/// `φ_D = −∫ ℋ dt`, trapezoidal over the samples.
pub fn dynamical_phase(path: &[(f64, JacobiBallPoint)], h: &LinearHamiltonian) -> Result<f64> {
    check_samples(path)?;
    let mut acc = PhaseAccumulator::with_hamiltonian(h.clone());
    for (t, x) in path {
        acc.push(*t, x.clone())?;
    }
    Ok(acc.dynamical())
}
