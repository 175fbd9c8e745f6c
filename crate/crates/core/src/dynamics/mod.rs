//! Equations of motion generated by Hamiltonians linear in the Jacobi-algebra
//! generators, their linearization and closed-form solution.

mod critical;
mod eta;
mod floquet;
mod ode;
mod propagate;
mod riccati;

pub use critical::{critical_points, CriticalPoints};
pub use eta::{eta_from_real, eta_to_real, solve_eta, EtaSystem};
pub use floquet::{monodromy, FloquetReport, PeriodicLift, TimeDependence};
pub use ode::{integrate_oracle, integrate_oracle_with, FnSystem, OdeSystem, OracleOptions, Trajectory};
pub use propagate::{
    ball_velocity, pack_vec_mat, propagate_coupled_ball, propagate_coupled_upper, unpack_vec_mat, CoupledBallSystem,
    CoupledUpperSystem,
};
pub use riccati::{fundamental_matrix, riccati_rhs, riccati_solve_const, riccati_solve_diag};

use crate::error::{Error, Result};
use crate::linalg::{
    c, conj, conj_vec, from_blocks, hermitian_residual, imag_part, max_abs, real_part, symmetry_residual, to_complex,
    CMatrix, CVector, RMatrix, RVector, DEFAULT_TOL, I,
};

/// Coefficients `(ε, ε₀, ε₋, ε₊, k)` of a Hamiltonian linear in the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearHamiltonian {
    eps: CVector,
    eps0: CMatrix,
    epsm: CMatrix,
    epsp: CMatrix,
    k: f64,
}

impl LinearHamiltonian {
    pub fn new(eps: CVector, eps0: CMatrix, epsm: CMatrix, epsp: CMatrix, k: f64) -> Result<Self> {
        Self::with_tolerance(eps, eps0, epsm, epsp, k, DEFAULT_TOL)
    }

    /// Validates hermiticity: `ε₀ = ε₀*`, `ε₋ = ε₋ᵗ`, `ε₊ = ε̄₋`.
    pub fn with_tolerance(
        eps: CVector,
        eps0: CMatrix,
        epsm: CMatrix,
        epsp: CMatrix,
        k: f64,
        tol: f64,
    ) -> Result<Self> {
        let n = eps.len();
        for (name, m) in [("eps0", &eps0), ("epsm", &epsm), ("epsp", &epsp)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Dimension(format!("{name} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
            }
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Parameter(format!("weight k = {k} must be positive")));
        }
        let checks = [
            ("eps0 is not Hermitian", hermitian_residual(&eps0)),
            ("epsm is not symmetric", symmetry_residual(&epsm)),
            ("epsp is not symmetric", symmetry_residual(&epsp)),
            ("epsp differs from conj(epsm)", max_abs(&(&epsp - conj(&epsm)))),
        ];
        for (msg, r) in checks {
            if !(r <= tol) {
                return Err(Error::Domain(format!("{msg} (residual {r:.3e})")));
            }
        }
        Ok(Self { eps, eps0, epsm, epsp, k })
    }

    pub fn zero(n: usize, k: f64) -> Self {
        let z = CMatrix::zeros(n, n);
        Self { eps: CVector::zeros(n), eps0: z.clone(), epsm: z.clone(), epsp: z, k }
    }

    pub fn dim(&self) -> usize {
        self.eps.len()
    }

    pub fn eps(&self) -> &CVector {
        &self.eps
    }

    pub fn eps0(&self) -> &CMatrix {
        &self.eps0
    }

    pub fn eps_minus(&self) -> &CMatrix {
        &self.epsm
    }

    pub fn eps_plus(&self) -> &CMatrix {
        &self.epsp
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Real blocks `(m, n, p, q)` with `ε₋ = m + i n`, `ε₀ᵗ/2 = p + i q`.
    pub fn real_blocks(&self) -> (RMatrix, RMatrix, RMatrix, RMatrix) {
        let half = self.eps0.transpose() * c(0.5, 0.0);
        (real_part(&self.epsm), imag_part(&self.epsm), real_part(&half), imag_part(&half))
    }
}

/// Whether a lift lives in `sp(n,ℝ)` or in its complexified image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// Blocks of `Ẇ = AW + WD + B + WCW`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiSystem {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
    pub field: Field,
}

/// Linear system `[Ẋ; Ẏ] = h [X; Y]` with `h = [[A, B], [−C, −D]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedLinearSystem {
    pub h: CMatrix,
    pub field: Field,
}

/// Inhomogeneous part `ż = E + W F + (A + W C) z` of the vector equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Drift {
    pub e: CVector,
    pub f: CVector,
}

impl RiccatiSystem {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn lift(&self) -> LiftedLinearSystem {
        LiftedLinearSystem { h: from_blocks(&self.a, &self.b, &-&self.c, &-&self.d), field: self.field }
    }
}

impl LiftedLinearSystem {
    pub fn dim(&self) -> usize {
        self.h.nrows() / 2
    }
}

/// Ball chart: `A = −(i/2)ε₀ᵗ`, `B = −iε₋`, `C = −iε₊`, `D = Aᵗ`, `E = −iε`, `F = −iε̄`.
pub fn build_ball_system(h: &LinearHamiltonian) -> (RiccatiSystem, Drift) {
    let mi = -I;
    let a = h.eps0.transpose() * c(0.0, -0.5);
    let d = a.transpose();
    let sys = RiccatiSystem { a, b: &h.epsm * mi, c: &h.epsp * mi, d, field: Field::Complex };
    let drift = Drift { e: &h.eps * mi, f: conj_vec(&h.eps) * mi };
    (sys, drift)
}

/// Upper chart: `A = n + q`, `B = m − p`, `C = −(m + p)`, `D = n − q`,
/// `E = Im ε`, `F = −Re ε`.
pub fn build_upper_system(h: &LinearHamiltonian) -> (RiccatiSystem, Drift) {
    let (m, n, p, q) = h.real_blocks();
    let sys = RiccatiSystem {
        a: to_complex(&(&n + &q)),
        b: to_complex(&(&m - &p)),
        c: to_complex(&(-(&m + &p))),
        d: to_complex(&(&n - &q)),
        field: Field::Real,
    };
    let drift = Drift {
        e: h.eps.map(|x| c(x.im, 0.0)),
        f: h.eps.map(|x| c(-x.re, 0.0)),
    };
    (sys, drift)
}

/// Real form `Ż = h_r Z + F` of `iη̇ = ε + ε₋η̄ + ½ε₀ᵗη`, where
/// `η = ξ − iζ`, `Z = (ξ; ζ)`, `ε = b + i a`, `F = (a; b)`.
pub fn build_eta_system(h: &LinearHamiltonian) -> (LiftedLinearSystem, RVector) {
    let lift = build_upper_system(h).0.lift();
    let n = h.dim();
    let mut f = RVector::zeros(2 * n);
    for i in 0..n {
        f[i] = h.eps[i].im;
        f[n + i] = h.eps[i].re;
    }
    (lift, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{complexify, is_hamiltonian_real, is_sp_complex_algebra};

    fn tanh_h() -> LinearHamiltonian {
        let one = CMatrix::from_element(1, 1, c(1.0, 0.0));
        LinearHamiltonian::new(CVector::zeros(1), CMatrix::zeros(1, 1), one.clone(), one, 1.0).unwrap()
    }

    #[test]
    fn rejects_non_hermitian() {
        let e0 = CMatrix::from_element(1, 1, c(1.0, 0.5));
        let z = CMatrix::zeros(1, 1);
        let r = LinearHamiltonian::new(CVector::zeros(1), e0, z.clone(), z, 2.0);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn tanh_systems() {
        let (s, _) = build_ball_system(&tanh_h());
        assert_eq!(s.a[(0, 0)], c(0.0, 0.0));
        assert_eq!(s.b[(0, 0)], c(0.0, -1.0));
        assert_eq!(s.c[(0, 0)], c(0.0, -1.0));
        let (u, _) = build_upper_system(&tanh_h());
        assert_eq!((u.a[(0, 0)].re, u.b[(0, 0)].re, u.c[(0, 0)].re, u.d[(0, 0)].re), (0.0, 1.0, -1.0, 0.0));
    }

    #[test]
    fn zero_hamiltonian_gives_zero_system() {
        let (s, d) = build_ball_system(&LinearHamiltonian::zero(2, 3.0));
        assert!(max_abs(&s.lift().h) == 0.0 && d.e.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn lifts_are_related_by_complexification() {
        let h = crate::random::random_hamiltonian(3, 4.0, 17, 1.0);
        let hc = build_ball_system(&h).0.lift().h;
        let hr = real_part(&build_upper_system(&h).0.lift().h);
        assert!(is_hamiltonian_real(&hr, 1e-12).unwrap());
        assert!(is_sp_complex_algebra(&hc, 1e-12).unwrap());
        assert!(max_abs(&(complexify(&hr).unwrap() - hc)) < 1e-12);
    }
}
