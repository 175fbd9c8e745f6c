//! Closed-form Riccati solutions through the linear lift.

use num_complex::Complex64;

use super::{LiftedLinearSystem, RiccatiSystem};
use crate::error::{Error, Result};
use crate::linalg::{blocks, eigen_decompose, inverse_checked, mat_exp, right_divide, CMatrix};

/// Relative determinant threshold below which the Möbius projection is
/// declared to have left the chart.
pub const ESCAPE_THRESHOLD: f64 = 1e-12;

/// `Ẇ = AW + WD + B + WCW`.
pub fn riccati_rhs(w: &CMatrix, sys: &RiccatiSystem) -> CMatrix {
    &sys.a * w + w * &sys.d + &sys.b + w * &sys.c * w
}

/// `U(t, 0) = exp(t h)` for constant coefficients.
pub fn fundamental_matrix(lift: &LiftedLinearSystem, t: f64) -> Result<CMatrix> {
    mat_exp(&lift.h, t)
}

fn hadamard_bound(rows: &CMatrix) -> f64 {
    (0..rows.nrows()).map(|i| rows.row(i).norm()).product()
}

fn check_dims(w0: &CMatrix, sys: &RiccatiSystem) -> Result<()> {
    let n = sys.dim();
    if w0.nrows() != n || w0.ncols() != n {
        return Err(Error::Dimension(format!("W0 is {}x{}, system has rank {n}", w0.nrows(), w0.ncols())));
    }
    Ok(())
}

/// `W(t) = (U₁W₀ + U₂)(U₃W₀ + U₄)⁻¹`.
pub fn riccati_solve_const(w0: &CMatrix, sys: &RiccatiSystem, t: f64) -> Result<CMatrix> {
    check_dims(w0, sys)?;
    let u = fundamental_matrix(&sys.lift(), t)?;
    let (u1, u2, u3, u4) = blocks(&u);
    let num = &u1 * w0 + &u2;
    let den = &u3 * w0 + &u4;
    let n = sys.dim();
    let mut stacked = CMatrix::zeros(n, 2 * n);
    stacked.view_mut((0, 0), (n, n)).copy_from(&u3);
    stacked.view_mut((0, n), (n, n)).copy_from(&u4);
    let scale = (hadamard_bound(&stacked) * 1f64.max(w0.norm()).powi(n as i32)).max(f64::MIN_POSITIVE);
    if den.clone().determinant().norm() < ESCAPE_THRESHOLD * scale {
        return Err(Error::ChartEscape { time: t });
    }
    right_divide(&num, &den, "(U3 W0 + U4)").map_err(|e| match e {
        Error::Singular { .. } => Error::ChartEscape { time: t },
        other => other,
    })
}

fn min_singular(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().fold(f64::INFINITY, |a, b| a.min(*b))
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn index_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    subsets(m, k)
}

/// Solution through the eigenbasis of the lift: `V h V⁻¹ = diag(Λ₁, Λ₂)`,
/// `W′ = (V₁W + V₂)(V₃W + V₄)⁻¹` evolves as `e^{tΛ₁} W′₀ e^{−tΛ₂}`.
pub fn riccati_solve_diag(w0: &CMatrix, sys: &RiccatiSystem, t: f64) -> Result<CMatrix> {
    check_dims(w0, sys)?;
    let n = sys.dim();
    let lift = sys.lift();
    let dec = eigen_decompose(&lift.h)?;
    if !dec.is_certified() {
        return Err(Error::Defective { cond: dec.vector_cond });
    }
    let v_all = inverse_checked(&dec.vectors, "eigenvector matrix")?;
    let mut stacked = CMatrix::zeros(2 * n, n);
    stacked.view_mut((0, 0), (n, n)).copy_from(w0);
    stacked.view_mut((n, 0), (n, n)).fill_with_identity();
    // Rows of V paired with Y′ are chosen so that Y′(0) is best conditioned.
    let mut best: Option<(f64, Vec<usize>)> = None;
    for s in subsets(2 * n, n) {
        let mut rows = CMatrix::zeros(n, 2 * n);
        for (r, &i) in s.iter().enumerate() {
            let row = v_all.row(i);
            let nrm = row.norm();
            rows.row_mut(r).copy_from(&row.map(|x| x / nrm));
        }
        let score = min_singular(&(&rows * &stacked));
        if best.as_ref().map_or(true, |(b, _)| score > *b) {
            best = Some((score, s));
        }
    }
    let (_, y_rows) = best.expect("at least one subset");
    let x_rows: Vec<usize> = (0..2 * n).filter(|i| !y_rows.contains(i)).collect();
    let order: Vec<usize> = x_rows.iter().chain(y_rows.iter()).copied().collect();
    let v = CMatrix::from_fn(2 * n, 2 * n, |i, j| v_all[(order[i], j)]);
    let lam: Vec<Complex64> = order.iter().map(|&i| dec.values[i]).collect();
    let (v1, v2, v3, v4) = blocks(&v);
    let wp0 = right_divide(&(&v1 * w0 + &v2), &(&v3 * w0 + &v4), "(V3 W0 + V4)")?;
    let wp = CMatrix::from_fn(n, n, |i, j| (lam[i] * t).exp() * wp0[(i, j)] * (-lam[n + j] * t).exp());
    let lhs = &v1 - &wp * &v3;
    let rhs = &wp * &v4 - &v2;
    crate::linalg::solve_checked(&lhs, &rhs, "(V1 - W' V3)").map_err(|e| match e {
        Error::Singular { .. } => Error::ChartEscape { time: t },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_ball_system, LinearHamiltonian};
    use crate::linalg::{c, max_abs, CVector};

    fn tanh_sys() -> RiccatiSystem {
        let one = CMatrix::from_element(1, 1, c(1.0, 0.0));
        let h = LinearHamiltonian::new(CVector::zeros(1), CMatrix::zeros(1, 1), one.clone(), one, 1.0).unwrap();
        build_ball_system(&h).0
    }

    #[test]
    fn rhs_examples() {
        let s = tanh_sys();
        let r = riccati_rhs(&CMatrix::zeros(1, 1), &s);
        assert_eq!(r[(0, 0)], c(0.0, -1.0));
    }

    #[test]
    fn tanh_fundamental_matrix() {
        let t = 0.8_f64;
        let u = fundamental_matrix(&tanh_sys().lift(), t).unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[c(t.cosh(), 0.0), c(0.0, -t.sinh()), c(0.0, t.sinh()), c(t.cosh(), 0.0)]);
        assert!(max_abs(&(u - want)) < 1e-14);
    }

    #[test]
    fn tanh_closed_forms() {
        let s = tanh_sys();
        let w0 = CMatrix::zeros(1, 1);
        for i in 0..=20 {
            let t = 0.1 * i as f64;
            let want = c(0.0, -t.tanh());
            assert!((riccati_solve_const(&w0, &s, t).unwrap()[(0, 0)] - want).norm() < 1e-14);
            assert!((riccati_solve_diag(&w0, &s, t).unwrap()[(0, 0)] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn escape_is_detected() {
        // Ẇ = 1 + W² from W₀ = 0 reaches the pole tan(π/2).
        let s = RiccatiSystem {
            a: CMatrix::zeros(1, 1),
            b: CMatrix::from_element(1, 1, c(1.0, 0.0)),
            c: CMatrix::from_element(1, 1, c(1.0, 0.0)),
            d: CMatrix::zeros(1, 1),
            field: crate::dynamics::Field::Real,
        };
        let t = std::f64::consts::FRAC_PI_2;
        assert!(matches!(riccati_solve_const(&CMatrix::zeros(1, 1), &s, t), Err(Error::ChartEscape { .. })));
        let w = riccati_solve_const(&CMatrix::zeros(1, 1), &s, 1.0).unwrap();
        assert!((w[(0, 0)] - c(1f64.tan(), 0.0)).norm() < 1e-13);
    }
}
