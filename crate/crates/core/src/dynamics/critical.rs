//! Stationary points of the matrix flow via invariant subspaces of the lift.

use super::riccati::index_subsets;
use super::{build_ball_system, riccati_rhs, LinearHamiltonian, RiccatiSystem};
use crate::domains::{ball_margin, SiegelBallPoint};
use crate::error::{Error, Result};
use crate::linalg::{eigen_decompose, inverse_checked, max_abs, right_divide, symmetrize, symmetry_residual, CMatrix, CVector};

#[derive(Debug, Clone)]
pub struct CriticalPoints {
    pub points: Vec<SiegelBallPoint>,
    pub candidates_examined: usize,
    /// Set when no admissible candidate survives.
    pub diagnostic: Option<String>,
}

/// Newton step for `R(W) = AW + WD + B + WCW`:
/// `(A + WC)δ + δ(D + CW) = −R`.
fn newton_polish(w: &CMatrix, sys: &RiccatiSystem) -> CMatrix {
    let n = w.nrows();
    let mut w = w.clone();
    let mut res = max_abs(&riccati_rhs(&w, sys));
    for _ in 0..4 {
        if res == 0.0 {
            break;
        }
        let p = &sys.a + &w * &sys.c;
        let q = &sys.d + &sys.c * &w;
        let mut big = CMatrix::zeros(n * n, n * n);
        for j in 0..n {
            for i in 0..n {
                let row = i + j * n;
                for k in 0..n {
                    big[(row, i + k * n)] += q[(k, j)];
                    big[(row, k + j * n)] += p[(i, k)];
                }
            }
        }
        let r = riccati_rhs(&w, sys);
        let rhs = -CVector::from_column_slice(r.as_slice());
        let Some(delta) = big.lu().solve(&rhs) else { break };
        let cand = symmetrize(&(&w + CMatrix::from_column_slice(n, n, delta.as_slice())));
        let cres = max_abs(&riccati_rhs(&cand, sys));
        if !(cres < res) {
            break;
        }
        w = cand;
        res = cres;
    }
    w
}

/// Zeros of `riccati_rhs` inside the ball: for every n-subset of lift
/// eigenvectors `[X; Y]` with invertible `Y`, the candidate `W = XY⁻¹`.
pub fn critical_points(h: &LinearHamiltonian) -> Result<CriticalPoints> {
    let (sys, _) = build_ball_system(h);
    let n = h.dim();
    let dec = eigen_decompose(&sys.lift().h)?;
    if !dec.is_certified() {
        return Err(Error::Defective { cond: dec.vector_cond });
    }
    let mut points: Vec<SiegelBallPoint> = Vec::new();
    let mut examined = 0;
    let mut rejected = Vec::new();
    for s in index_subsets(2 * n, n) {
        examined += 1;
        let x = CMatrix::from_fn(n, n, |i, j| dec.vectors[(i, s[j])]);
        let y = CMatrix::from_fn(n, n, |i, j| dec.vectors[(n + i, s[j])]);
        if inverse_checked(&y, "invariant subspace").is_err() {
            continue;
        }
        let Ok(w) = right_divide(&x, &y, "invariant subspace") else { continue };
        let scale = 1f64.max(max_abs(&w));
        if symmetry_residual(&w) > 1e-6 * scale {
            rejected.push("non-symmetric");
            continue;
        }
        let w = newton_polish(&symmetrize(&w), &sys);
        if ball_margin(&w) <= 1e-12 {
            rejected.push("outside the ball");
            continue;
        }
        if max_abs(&riccati_rhs(&w, &sys)) > 1e-9 {
            rejected.push("residual too large");
            continue;
        }
        if points.iter().any(|p| max_abs(&(p.matrix() - &w)) <= 1e-8) {
            continue;
        }
        points.push(SiegelBallPoint::with_margin(w, 0.0)?);
    }
    let diagnostic = if points.is_empty() {
        Some(format!(
            "no admissible critical point among {examined} invariant subspaces ({})",
            if rejected.is_empty() { "lower blocks singular".to_string() } else { rejected.join(", ") }
        ))
    } else {
        None
    };
    Ok(CriticalPoints { points, candidates_examined: examined, diagnostic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CVector};

    #[test]
    fn diagonal_hamiltonian_has_origin() {
        let mut e0 = CMatrix::zeros(2, 2);
        e0[(0, 0)] = c(1.0, 0.0);
        e0[(1, 1)] = c(2.5, 0.0);
        let z = CMatrix::zeros(2, 2);
        let h = LinearHamiltonian::new(CVector::zeros(2), e0, z.clone(), z, 3.0).unwrap();
        let cp = critical_points(&h).unwrap();
        assert_eq!(cp.points.len(), 1);
        assert!(max_abs(cp.points[0].matrix()) < 1e-12);
    }

    #[test]
    fn tanh_has_no_interior_point() {
        let one = CMatrix::from_element(1, 1, c(1.0, 0.0));
        let h = LinearHamiltonian::new(CVector::zeros(1), CMatrix::zeros(1, 1), one.clone(), one, 1.0).unwrap();
        let cp = critical_points(&h).unwrap();
        assert!(cp.points.is_empty());
        assert!(cp.diagnostic.is_some());
    }

    #[test]
    fn squeezed_oscillator_critical_point() {
        // ε₀ = 2, ε₋ = ε₊ = 0.5: Λ = 0.5 + 2W + 0.5W² = 0 → W = −2 + √3.
        let h = LinearHamiltonian::new(
            CVector::zeros(1),
            CMatrix::from_element(1, 1, c(2.0, 0.0)),
            CMatrix::from_element(1, 1, c(0.5, 0.0)),
            CMatrix::from_element(1, 1, c(0.5, 0.0)),
            2.0,
        )
        .unwrap();
        let cp = critical_points(&h).unwrap();
        assert_eq!(cp.points.len(), 1);
        assert!((cp.points[0].matrix()[(0, 0)] - c(3f64.sqrt() - 2.0, 0.0)).norm() < 1e-12);
    }
}
