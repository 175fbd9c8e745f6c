//! Monodromy of periodic linear lifts and Floquet stability.

use num_complex::Complex64;

use super::{integrate_oracle_with, FnSystem, Field, OracleOptions};
use crate::error::{Error, Result};
use crate::linalg::{
    c, eigen_decompose, j_matrix, log_principal, mat_exp, max_abs_real, real_part, realify, sp_complex_residual,
    symplectic_residual_real, to_complex, CMatrix, CVector, RMatrix,
};

/// Time dependence of lift coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeDependence {
    Constant,
    Periodic { period: f64 },
    General,
}

/// Coefficient callback `t ↦ h(t)` with its time-dependence tag.
pub struct PeriodicLift<'a> {
    pub field: Field,
    pub dependence: TimeDependence,
    pub h: Box<dyn Fn(f64) -> CMatrix + 'a>,
}

impl<'a> PeriodicLift<'a> {
    pub fn constant(h: CMatrix, field: Field) -> Self {
        Self { field, dependence: TimeDependence::Constant, h: Box::new(move |_| h.clone()) }
    }

    pub fn periodic(period: f64, field: Field, h: impl Fn(f64) -> CMatrix + 'a) -> Self {
        Self { field, dependence: TimeDependence::Periodic { period }, h: Box::new(h) }
    }
}

#[derive(Debug, Clone)]
pub struct FloquetReport {
    pub period: f64,
    pub monodromy: CMatrix,
    pub multipliers: Vec<Complex64>,
    /// `(1/T) log Δ(T)`, or `(1/2T) log Δ(T)²` when `log_period_doubled`.
    pub k_log: CMatrix,
    pub log_period_doubled: bool,
    pub symplectic_residual: f64,
    /// Distance of the real form of `k_log` from its Hamiltonian projection.
    pub hamiltonian_residual: f64,
    pub stable: bool,
    pub parametrically_stable: bool,
}

const UNIT_CIRCLE_TOL: f64 = 1e-8;

/// Δ(T) of `U̇ = h(t)U`, `U(0) = I`, its multipliers and logarithm.
pub fn monodromy(lift: &PeriodicLift, period: f64, steps: usize) -> Result<FloquetReport> {
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::Parameter(format!("period {period} must be positive")));
    }
    let h0 = (lift.h)(0.0);
    if !h0.is_square() || h0.nrows() % 2 != 0 {
        return Err(Error::Dimension("lift must be 2n x 2n".into()));
    }
    let m = h0.nrows();
    let delta = match lift.dependence {
        TimeDependence::Constant => mat_exp(&h0, period)?,
        TimeDependence::Periodic { period: p } => {
            if (p - period).abs() > 1e-12 * period {
                return Err(Error::Parameter(format!("coefficients have period {p}, requested {period}")));
            }
            integrate_fundamental(lift, m, period, steps)?
        }
        TimeDependence::General => {
            return Err(Error::Parameter("coefficients are not tagged periodic".into()));
        }
    };
    let real_form = |x: &CMatrix| -> Result<RMatrix> {
        match lift.field {
            Field::Real => Ok(real_part(x)),
            Field::Complex => realify(x, 1e-6),
        }
    };
    let symplectic_residual = match lift.field {
        Field::Real => symplectic_residual_real(&real_part(&delta))?,
        Field::Complex => sp_complex_residual(&delta)?,
    };
    let dec = eigen_decompose(&delta)?;
    let multipliers = dec.values.clone();
    let on_circle = multipliers.iter().all(|l| (l.norm() - 1.0).abs() <= UNIT_CIRCLE_TOL);
    let stable = on_circle && dec.is_certified();

    let (k_log, doubled) = match log_principal(&delta) {
        Ok(l) => (l * c(1.0 / period, 0.0), false),
        Err(Error::Branch(_)) => {
            let sq = &delta * &delta;
            let l = log_principal(&sq).map_err(|e| match e {
                Error::Branch(msg) => Error::Branch(format!("{msg}; no real logarithm over 2T either")),
                other => other,
            })?;
            (l * c(0.5 / period, 0.0), true)
        }
        Err(e) => return Err(e),
    };
    let k_real = real_form(&k_log)?;
    let j = j_matrix(m / 2);
    let projected = (&k_real + &j * k_real.transpose() * &j) * 0.5;
    let hamiltonian_residual = max_abs_real(&(&k_real - projected));
    let parametrically_stable = stable && krein_definite(&k_real)?;
    Ok(FloquetReport {
        period,
        monodromy: delta,
        multipliers,
        k_log,
        log_period_doubled: doubled,
        symplectic_residual,
        hamiltonian_residual,
        stable,
        parametrically_stable,
    })
}

fn integrate_fundamental(lift: &PeriodicLift, m: usize, period: f64, steps: usize) -> Result<CMatrix> {
    let steps = steps.max(1);
    let sys = FnSystem {
        dim: m * m,
        f: |t: f64, y: &CVector| {
            let u = CMatrix::from_column_slice(m, m, y.as_slice());
            let du = (lift.h)(t) * u;
            CVector::from_column_slice(du.as_slice())
        },
    };
    let y0 = CVector::from_column_slice(CMatrix::identity(m, m).as_slice());
    let mut opts = OracleOptions::new(period / steps as f64);
    opts.record_every = usize::MAX;
    let tr = integrate_oracle_with(&sys, &y0, period, opts)?;
    Ok(CMatrix::from_column_slice(m, m, tr.last().as_slice()))
}

/// Strong stability test on a real Hamiltonian `K = J S`: spectrum purely
/// imaginary and nonzero, diagonalizable, and `S` definite on every
/// eigenspace of `K` belonging to an eigenvalue `iα`, `α > 0`.
fn krein_definite(k: &RMatrix) -> Result<bool> {
    let kc = to_complex(k);
    let dec = eigen_decompose(&kc)?;
    if !dec.is_certified() {
        return Ok(false);
    }
    let scale = 1f64.max(max_abs_real(k));
    let tol = 1e-8 * scale;
    if dec.values.iter().any(|l| l.re.abs() > tol || l.norm() <= tol) {
        return Ok(false);
    }
    let s = to_complex(&(-(j_matrix(k.nrows() / 2) * k)));
    let mut done = vec![false; dec.values.len()];
    for i in 0..dec.values.len() {
        if done[i] || dec.values[i].im < 0.0 {
            continue;
        }
        let cluster: Vec<usize> = (0..dec.values.len())
            .filter(|&j| (dec.values[j] - dec.values[i]).norm() <= 1e-6 * scale)
            .collect();
        for &j in &cluster {
            done[j] = true;
        }
        let v = CMatrix::from_fn(k.nrows(), cluster.len(), |r, col| dec.vectors[(r, cluster[col])]);
        let form = v.adjoint() * &s * &v;
        let eig = nalgebra::SymmetricEigen::new((&form + form.adjoint()) * c(0.5, 0.0)).eigenvalues;
        let lo = eig.iter().fold(f64::INFINITY, |a, b| a.min(*b));
        let hi = eig.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b));
        if !(lo > 1e-10 || hi < -1e-10) {
            return Ok(false);
        }
    }
    Ok(true)
}
