//! Reproducing kernels, Kähler potential, metric and two-form, normalization
//! constants, energy function and phases on the Siegel-Jacobi ball.
//!
//! Tangent vectors and the metric use the packed coordinate list
//! `(z₁, …, zₙ, w₁₁, w₁₂, …, w₁ₙ, w₂₂, …, wₙₙ)`: the z-block followed by the
//! upper triangle of W in row-major order. Moving an off-diagonal `w_ij`
//! moves both `W_ij` and `W_ji`.

mod energy;
mod kernel;
mod metric;
mod normalization;
mod phase;

pub use energy::{energy, energy_gradient, energy_parts, energy_zw, flow_relation_residual};
pub use kernel::{kahler_potential, kernel_diag, kernel_eta, kernel_two_point};
pub use metric::{
    fc_pushforward, metric, origin_metric, pushforward, pushforward_action, two_form, two_form_from_metric,
    two_form_product_eta, MetricMatrix, DEFAULT_METRIC_STEP, PUSHFORWARD_STEP,
};
pub use normalization::{norm_const_j, norm_const_lambda};
pub use phase::{berry_phase, dynamical_phase, PhaseAccumulator, PhaseReport};

use crate::domains::{JacobiBallPoint, SiegelBallPoint};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

/// Representation weight `k` of the scalar holomorphic discrete series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    k: f64,
}

impl KernelParams {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Parameter(format!("weight k = {k} must be positive")));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

pub(crate) fn check_weight(k: f64) -> Result<f64> {
    KernelParams::new(k).map(|p| p.k())
}

/// Number of packed coordinates, `n(n+3)/2`.
pub fn coordinate_dim(n: usize) -> usize {
    n * (n + 3) / 2
}

/// `(i, j)` index pairs of the W-block, `i ≤ j`, row-major.
pub fn w_indices(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Names of the packed coordinates: `z1, …, zn, w11, w12, …, wnn` (1-based).
pub fn coordinate_labels(n: usize) -> Vec<String> {
    let mut out: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
    out.extend(w_indices(n).into_iter().map(|(i, j)| format!("w{}{}", i + 1, j + 1)));
    out
}

pub fn pack_coordinates(z: &CVector, w: &CMatrix) -> CVector {
    let n = z.len();
    let mut x = CVector::zeros(coordinate_dim(n));
    x.rows_mut(0, n).copy_from(z);
    for (a, (i, j)) in w_indices(n).into_iter().enumerate() {
        x[n + a] = w[(i, j)];
    }
    x
}

/// Inverse of [`pack_coordinates`]; the W-block is filled symmetrically.
pub fn unpack_coordinates(x: &CVector, n: usize) -> Result<(CVector, CMatrix)> {
    if x.len() != coordinate_dim(n) {
        return Err(Error::Dimension(format!(
            "coordinate vector has length {}, expected {} for n = {n}",
            x.len(),
            coordinate_dim(n)
        )));
    }
    let z = x.rows(0, n).clone_owned();
    let mut w = CMatrix::zeros(n, n);
    for (a, (i, j)) in w_indices(n).into_iter().enumerate() {
        w[(i, j)] = x[n + a];
        w[(j, i)] = x[n + a];
    }
    Ok((z, w))
}

pub fn coordinates(x: &JacobiBallPoint) -> CVector {
    pack_coordinates(&x.z, x.w.matrix())
}

/// Ball point from packed coordinates; fails outside the domain.
pub fn point_from_coordinates(x: &CVector, n: usize) -> Result<JacobiBallPoint> {
    let (z, w) = unpack_coordinates(x, n)?;
    JacobiBallPoint::new(z, SiegelBallPoint::interior(w)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn packing_round_trip() {
        let n = 3;
        let z = CVector::from_fn(n, |i, _| c(i as f64, 1.0));
        let w = CMatrix::from_fn(n, n, |i, j| c((i + j) as f64 * 0.01, (i * j) as f64 * 0.02));
        let x = pack_coordinates(&z, &w);
        assert_eq!(x.len(), 9);
        let (z2, w2) = unpack_coordinates(&x, n).unwrap();
        assert_eq!(z, z2);
        assert_eq!(w, w2);
        assert_eq!(coordinate_labels(2), vec!["z1", "z2", "w11", "w12", "w22"]);
    }

    #[test]
    fn wrong_length_is_rejected() {
        assert!(matches!(unpack_coordinates(&CVector::zeros(4), 2), Err(Error::Dimension(_))));
        assert!(KernelParams::new(0.0).is_err());
    }
}
