//! Coupled vector/matrix flows on the ball and upper charts.

use super::{build_ball_system, build_upper_system, integrate_oracle_with, riccati_rhs, Drift, LinearHamiltonian};
use super::{OdeSystem, OracleOptions, RiccatiSystem};
use crate::domains::{
    ball_margin, upper_margin, JacobiBallPoint, JacobiUpperPoint, SiegelBallPoint, SiegelUpperPoint,
    DEFAULT_BALL_MARGIN,
};
use crate::error::{Error, Result};
use crate::linalg::{all_finite_vec, symmetrize, CMatrix, CVector};

/// `(x, M) ↦ [x; vec(M)]` with `M` stored column-major.
pub fn pack_vec_mat(x: &CVector, m: &CMatrix) -> CVector {
    let n = x.len();
    let mut y = CVector::zeros(n + m.len());
    y.rows_mut(0, n).copy_from(x);
    for (i, v) in m.iter().enumerate() {
        y[n + i] = *v;
    }
    y
}

pub fn unpack_vec_mat(y: &CVector, n: usize) -> (CVector, CMatrix) {
    let x = y.rows(0, n).clone_owned();
    let m = CMatrix::from_iterator(n, n, y.iter().skip(n).copied());
    (x, m)
}

fn vector_rhs(sys: &RiccatiSystem, drift: &Drift, x: &CVector, m: &CMatrix) -> CVector {
    &drift.e + m * &drift.f + (&sys.a + m * &sys.c) * x
}

/// Velocity `(ż, Ẇ)` of the coupled ball flow at `(z, W)`.
pub fn ball_velocity(h: &LinearHamiltonian, z: &CVector, w: &CMatrix) -> (CVector, CMatrix) {
    let (sys, drift) = build_ball_system(h);
    (vector_rhs(&sys, &drift, z, w), riccati_rhs(w, &sys))
}

/// `Ẇ = AW + WD + B + WCW`, `ż = E + WF + (A + WC)z` on the ball.
pub struct CoupledBallSystem {
    pub system: RiccatiSystem,
    pub drift: Drift,
    pub margin: f64,
}

impl CoupledBallSystem {
    pub fn new(h: &LinearHamiltonian) -> Self {
        let (system, drift) = build_ball_system(h);
        Self { system, drift, margin: DEFAULT_BALL_MARGIN }
    }
}

impl OdeSystem for CoupledBallSystem {
    fn dim(&self) -> usize {
        let n = self.system.dim();
        n + n * n
    }
    fn rhs(&self, _t: f64, y: &CVector) -> CVector {
        let (z, w) = unpack_vec_mat(y, self.system.dim());
        pack_vec_mat(&vector_rhs(&self.system, &self.drift, &z, &w), &riccati_rhs(&w, &self.system))
    }
    fn admissible(&self, y: &CVector) -> bool {
        let (_, w) = unpack_vec_mat(y, self.system.dim());
        all_finite_vec(y) && ball_margin(&w) > self.margin
    }
}

/// Same structure with the real upper-chart coefficients.
pub struct CoupledUpperSystem {
    pub system: RiccatiSystem,
    pub drift: Drift,
}

impl CoupledUpperSystem {
    pub fn new(h: &LinearHamiltonian) -> Self {
        let (system, drift) = build_upper_system(h);
        Self { system, drift }
    }
}

impl OdeSystem for CoupledUpperSystem {
    fn dim(&self) -> usize {
        let n = self.system.dim();
        n + n * n
    }
    fn rhs(&self, _t: f64, y: &CVector) -> CVector {
        let (u, v) = unpack_vec_mat(y, self.system.dim());
        pack_vec_mat(&vector_rhs(&self.system, &self.drift, &u, &v), &riccati_rhs(&v, &self.system))
    }
    fn admissible(&self, y: &CVector) -> bool {
        let (_, v) = unpack_vec_mat(y, self.system.dim());
        all_finite_vec(y) && upper_margin(&v) > 0.0
    }
}

fn check_rank(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("point of rank {a} with Hamiltonian of rank {b}")));
    }
    Ok(())
}

/// Joint oracle integration of `(z, W)`; returns timestamped ball points.
pub fn propagate_coupled_ball(
    x0: &JacobiBallPoint,
    h: &LinearHamiltonian,
    t: f64,
    dt: f64,
) -> Result<Vec<(f64, JacobiBallPoint)>> {
    check_rank(x0.dim(), h.dim())?;
    let n = x0.dim();
    let sys = CoupledBallSystem::new(h);
    let tr = integrate_oracle_with(&sys, &pack_vec_mat(&x0.z, x0.w.matrix()), t, OracleOptions::new(dt))?;
    tr.times
        .iter()
        .zip(&tr.states)
        .map(|(&s, y)| {
            let (z, w) = unpack_vec_mat(y, n);
            let w = SiegelBallPoint::with_margin(symmetrize(&w), 0.0).map_err(|_| Error::ChartEscape { time: s })?;
            Ok((s, JacobiBallPoint { z, w }))
        })
        .collect()
}

/// Joint oracle integration of `(u, v)` on the upper chart.
pub fn propagate_coupled_upper(
    x0: &JacobiUpperPoint,
    h: &LinearHamiltonian,
    t: f64,
    dt: f64,
) -> Result<Vec<(f64, JacobiUpperPoint)>> {
    check_rank(x0.dim(), h.dim())?;
    let n = x0.dim();
    let sys = CoupledUpperSystem::new(h);
    let tr = integrate_oracle_with(&sys, &pack_vec_mat(&x0.u, x0.v.matrix()), t, OracleOptions::new(dt))?;
    tr.times
        .iter()
        .zip(&tr.states)
        .map(|(&s, y)| {
            let (u, v) = unpack_vec_mat(y, n);
            let v = SiegelUpperPoint::new(symmetrize(&v)).map_err(|_| Error::ChartEscape { time: s })?;
            Ok((s, JacobiUpperPoint { u, v }))
        })
        .collect()
}
