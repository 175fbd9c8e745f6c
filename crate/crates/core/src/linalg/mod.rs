//! Dense matrix algebra for the symplectic setting: structural predicates,
//! the real/complex block isomorphism, exponential, logarithm and eigen data.

mod eigen;
mod expm;
mod logm;
pub mod quadrature;

pub use eigen::{eigen_decompose, eigen_structure, EigenDecomposition, EigenStructure, MatrixKind};
pub use expm::{expm, mat_exp, mat_exp_real};
pub use logm::{log_principal, sqrt_principal};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type CVector = DVector<Complex64>;
pub type RVector = DVector<f64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Default absolute tolerance on max-norm residuals of membership predicates.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Reciprocal condition number below which solves log a warning.
pub const WARN_RCOND: f64 = 1e-10;
/// Reciprocal condition number below which a matrix is treated as singular.
pub const SINGULAR_RCOND: f64 = 1e-15;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn to_complex_vec(v: &RVector) -> CVector {
    v.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|x| x.re)
}

pub fn imag_part(m: &CMatrix) -> RMatrix {
    m.map(|x| x.im)
}

pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|x| x.conj())
}

pub fn conj_vec(v: &CVector) -> CVector {
    v.map(|x| x.conj())
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Standard symplectic form `[[0, I], [-I, 0]]` of size 2n.
pub fn j_matrix(n: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// Signature matrix `diag(I, -I)` of size 2n.
pub fn k_matrix(n: usize) -> RMatrix {
    let mut k = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        k[(i, i)] = 1.0;
        k[(n + i, n + i)] = -1.0;
    }
    k
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

pub fn max_abs_real(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

/// Induced 1-norm (maximum absolute column sum).
pub fn norm1(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0, |acc: f64, s| acc.max(*s))
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

pub fn all_finite_vec(v: &CVector) -> bool {
    v.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.transpose()) * c(0.5, 0.0)
}

pub fn symmetry_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.transpose()))
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Smallest eigenvalue of the Hermitian part `(A + A*)/2`.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, x| acc.min(*x))
}

fn require_square(m_rows: usize, m_cols: usize, what: &str) -> Result<()> {
    if m_rows != m_cols {
        return Err(Error::Dimension(format!("{what}: {m_rows}x{m_cols} is not square")));
    }
    Ok(())
}

fn require_even_square(m_rows: usize, m_cols: usize, what: &str) -> Result<usize> {
    require_square(m_rows, m_cols, what)?;
    if m_rows % 2 != 0 {
        return Err(Error::Dimension(format!("{what}: odd dimension {m_rows}")));
    }
    Ok(m_rows / 2)
}

pub fn is_symmetric(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && symmetry_residual(m) <= tol
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && hermitian_residual(m) <= tol
}

/// `‖XᵗJ + JX‖_max`.
pub fn hamiltonian_residual_real(x: &RMatrix) -> Result<f64> {
    let n = require_even_square(x.nrows(), x.ncols(), "hamiltonian check")?;
    let j = j_matrix(n);
    Ok(max_abs_real(&(x.transpose() * &j + &j * x)))
}

/// `‖MᵗJM − J‖_max`.
pub fn symplectic_residual_real(m: &RMatrix) -> Result<f64> {
    let n = require_even_square(m.nrows(), m.ncols(), "symplectic check")?;
    let j = j_matrix(n);
    Ok(max_abs_real(&(m.transpose() * &j * m - &j)))
}

/// Larger of `‖gᵗJg − J‖_max` and `‖gKg* − K‖_max`.
pub fn sp_complex_residual(g: &CMatrix) -> Result<f64> {
    let n = require_even_square(g.nrows(), g.ncols(), "Sp(n,R)_C check")?;
    let j = to_complex(&j_matrix(n));
    let k = to_complex(&k_matrix(n));
    let r1 = max_abs(&(g.transpose() * &j * g - &j));
    let r2 = max_abs(&(g * &k * g.adjoint() - &k));
    Ok(r1.max(r2))
}

/// Residual of the Lie-algebra conditions `XᵗJ + JX = 0`, `X*K + KX = 0`.
pub fn sp_complex_algebra_residual(x: &CMatrix) -> Result<f64> {
    let n = require_even_square(x.nrows(), x.ncols(), "sp(n,R)_C check")?;
    let j = to_complex(&j_matrix(n));
    let k = to_complex(&k_matrix(n));
    let r1 = max_abs(&(x.transpose() * &j + &j * x));
    let r2 = max_abs(&(x.adjoint() * &k + &k * x));
    Ok(r1.max(r2))
}

pub fn is_hamiltonian_real(x: &RMatrix, tol: f64) -> Result<bool> {
    Ok(hamiltonian_residual_real(x)? <= tol)
}

pub fn is_symplectic_real(m: &RMatrix, tol: f64) -> Result<bool> {
    Ok(symplectic_residual_real(m)? <= tol)
}

pub fn is_sp_complex(g: &CMatrix, tol: f64) -> Result<bool> {
    Ok(sp_complex_residual(g)? <= tol)
}

pub fn is_sp_complex_algebra(x: &CMatrix, tol: f64) -> Result<bool> {
    Ok(sp_complex_algebra_residual(x)? <= tol)
}

/// `M_C = C⁻¹ M C`, blockwise `2p = a+d+i(b−c)`, `2q = a−d−i(b+c)`.
pub fn complexify(m: &RMatrix) -> Result<CMatrix> {
    let n = require_even_square(m.nrows(), m.ncols(), "complexify")?;
    let a = m.view((0, 0), (n, n));
    let b = m.view((0, n), (n, n));
    let cc = m.view((n, 0), (n, n));
    let d = m.view((n, n), (n, n));
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let p = c(0.5 * (a[(i, j)] + d[(i, j)]), 0.5 * (b[(i, j)] - cc[(i, j)]));
            let q = c(0.5 * (a[(i, j)] - d[(i, j)]), -0.5 * (b[(i, j)] + cc[(i, j)]));
            out[(i, j)] = p;
            out[(i, n + j)] = q;
            out[(n + i, j)] = q.conj();
            out[(n + i, n + j)] = p.conj();
        }
    }
    Ok(out)
}

/// Inverse of [`complexify`]; requires the block form `[[p, q], [q̄, p̄]]`.
pub fn realify(mc: &CMatrix, tol: f64) -> Result<RMatrix> {
    let n = require_even_square(mc.nrows(), mc.ncols(), "realify")?;
    let p = mc.view((0, 0), (n, n)).clone_owned();
    let q = mc.view((0, n), (n, n)).clone_owned();
    let r1 = max_abs(&(mc.view((n, 0), (n, n)) - conj(&q)));
    let r2 = max_abs(&(mc.view((n, n), (n, n)) - conj(&p)));
    let scale = 1.0_f64.max(max_abs(mc));
    if r1.max(r2) > tol * scale {
        return Err(Error::Structure(format!(
            "lower blocks deviate from conjugates of upper blocks by {:.3e}",
            r1.max(r2)
        )));
    }
    let mut out = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (pp, qq) = (p[(i, j)], q[(i, j)]);
            out[(i, j)] = pp.re + qq.re;
            out[(i, n + j)] = pp.im - qq.im;
            out[(n + i, j)] = -pp.im - qq.im;
            out[(n + i, n + j)] = pp.re - qq.re;
        }
    }
    Ok(out)
}

/// Split a 2n×2n matrix into its four n×n blocks.
pub fn blocks(m: &CMatrix) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
    let n = m.nrows() / 2;
    (
        m.view((0, 0), (n, n)).clone_owned(),
        m.view((0, n), (n, n)).clone_owned(),
        m.view((n, 0), (n, n)).clone_owned(),
        m.view((n, n), (n, n)).clone_owned(),
    )
}

pub fn from_blocks(a: &CMatrix, b: &CMatrix, cc: &CMatrix, d: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(cc);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// Checked inverse; warns when the reciprocal 1-norm condition estimate is small.
pub fn inverse_checked(a: &CMatrix, what: &str) -> Result<CMatrix> {
    require_square(a.nrows(), a.ncols(), what)?;
    let singular = |rcond: f64| Error::Singular { what: what.to_string(), rcond };
    let inv = a.clone().try_inverse().ok_or_else(|| singular(0.0))?;
    let rcond = 1.0 / (norm1(a) * norm1(&inv));
    if !rcond.is_finite() || rcond < SINGULAR_RCOND || !all_finite(&inv) {
        return Err(singular(if rcond.is_finite() { rcond } else { 0.0 }));
    }
    if rcond < WARN_RCOND {
        log::warn!("{what}: ill-conditioned solve (rcond {rcond:.3e})");
    }
    Ok(inv)
}

/// Solve `A X = B` by LU with the conditioning checks of [`inverse_checked`].
pub fn solve_checked(a: &CMatrix, b: &CMatrix, what: &str) -> Result<CMatrix> {
    inverse_checked(a, what)?;
    a.clone().lu().solve(b).ok_or_else(|| Error::Singular { what: what.to_string(), rcond: 0.0 })
}

pub fn solve_vec_checked(a: &CMatrix, b: &CVector, what: &str) -> Result<CVector> {
    inverse_checked(a, what)?;
    a.clone().lu().solve(b).ok_or_else(|| Error::Singular { what: what.to_string(), rcond: 0.0 })
}

/// Right division `A B⁻¹`, computed as `(B⁻ᵗ Aᵗ)ᵗ`.
pub fn right_divide(a: &CMatrix, b: &CMatrix, what: &str) -> Result<CMatrix> {
    Ok(solve_checked(&b.transpose(), &a.transpose(), what)?.transpose())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuredMatrixReport {
    pub is_symmetric: bool,
    pub is_hermitian: bool,
    pub is_symplectic: bool,
    pub is_hamiltonian: bool,
    pub is_sp_complex: bool,
    /// Largest residual among the tests that apply to the matrix shape.
    pub max_violation: f64,
}

/// Evaluate every structural predicate. Symplectic/Hamiltonian refer to the
/// real part when the matrix is real, otherwise to the realified matrix.
pub fn structured_report(m: &CMatrix, tol: f64) -> StructuredMatrixReport {
    let sym = if m.is_square() { symmetry_residual(m) } else { f64::INFINITY };
    let herm = if m.is_square() { hermitian_residual(m) } else { f64::INFINITY };
    let even = m.is_square() && m.nrows() % 2 == 0 && m.nrows() > 0;
    let real = max_abs(&to_complex(&imag_part(m))) == 0.0;
    let as_real = if !even {
        None
    } else if real {
        Some(real_part(m))
    } else {
        realify(m, tol).ok()
    };
    let (symp, ham) = match &as_real {
        Some(r) => (
            symplectic_residual_real(r).unwrap_or(f64::INFINITY),
            hamiltonian_residual_real(r).unwrap_or(f64::INFINITY),
        ),
        None => (f64::INFINITY, f64::INFINITY),
    };
    let spc = if even { sp_complex_residual(m).unwrap_or(f64::INFINITY) } else { f64::INFINITY };
    let residuals = [sym, herm, symp, ham, spc];
    let max_violation = residuals
        .iter()
        .filter(|r| r.is_finite())
        .fold(0.0_f64, |acc, r| acc.max(*r));
    StructuredMatrixReport {
        is_symmetric: sym <= tol,
        is_hermitian: herm <= tol,
        is_symplectic: symp <= tol,
        is_hamiltonian: ham <= tol,
        is_sp_complex: spc <= tol,
        max_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(n: usize, data: &[f64]) -> RMatrix {
        RMatrix::from_row_slice(n, n, data)
    }

    #[test]
    fn hamiltonian_examples() {
        assert!(is_hamiltonian_real(&rm(2, &[0.0, 1.0, -1.0, 0.0]), DEFAULT_TOL).unwrap());
        assert!(!is_hamiltonian_real(&RMatrix::identity(2, 2), DEFAULT_TOL).unwrap());
        assert!(is_hamiltonian_real(&rm(2, &[0.3, -1.2, 2.5, -0.3]), DEFAULT_TOL).unwrap());
        assert!(matches!(hamiltonian_residual_real(&RMatrix::identity(3, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn symplectic_examples() {
        assert!(is_symplectic_real(&RMatrix::identity(4, 4), DEFAULT_TOL).unwrap());
        assert!(!is_symplectic_real(&(RMatrix::identity(2, 2) * 2.0), DEFAULT_TOL).unwrap());
        let x = rm(2, &[0.3, -1.2, 2.5, -0.3]);
        let m = mat_exp_real(&x, 0.7).unwrap();
        assert!(is_symplectic_real(&m, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn sp_complex_examples() {
        assert!(is_sp_complex(&identity(4), DEFAULT_TOL).unwrap());
        let th: f64 = 0.8;
        let mut g = identity(2);
        g[(0, 0)] = Complex64::from_polar(1.0, th);
        g[(1, 1)] = Complex64::from_polar(1.0, -th);
        assert!(is_sp_complex(&g, DEFAULT_TOL).unwrap());
        let mut g = identity(2);
        g[(0, 0)] = c(2.0, 0.0);
        g[(1, 1)] = c(0.5, 0.0);
        assert!(!is_sp_complex(&g, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn complexify_of_j_is_diag_i_minus_i() {
        let jc = complexify(&j_matrix(1)).unwrap();
        assert!((jc[(0, 0)] - I).norm() < 1e-15);
        assert!((jc[(1, 1)] + I).norm() < 1e-15);
        assert!(jc[(0, 1)].norm() < 1e-15 && jc[(1, 0)].norm() < 1e-15);
        let back = realify(&jc, DEFAULT_TOL).unwrap();
        assert!(max_abs_real(&(back - j_matrix(1))) < 1e-15);
    }

    #[test]
    fn complexify_matches_conjugation_product() {
        let n = 2;
        let m = rm(4, &[
            0.1, 0.7, -0.3, 1.1, 0.4, -0.2, 0.9, 0.5, -1.3, 0.6, 0.2, 0.8, 0.3, -0.4, 1.5, -0.9,
        ]);
        let mut cm = CMatrix::zeros(4, 4);
        let mut cinv = CMatrix::zeros(4, 4);
        for i in 0..n {
            cm[(i, i)] = I;
            cm[(i, n + i)] = I;
            cm[(n + i, i)] = -ONE;
            cm[(n + i, n + i)] = ONE;
            cinv[(i, i)] = c(0.0, -0.5);
            cinv[(i, n + i)] = c(-0.5, 0.0);
            cinv[(n + i, i)] = c(0.0, -0.5);
            cinv[(n + i, n + i)] = c(0.5, 0.0);
        }
        assert!(max_abs(&(&cinv * &cm - identity(4))) < 1e-15);
        let direct = &cinv * to_complex(&m) * &cm;
        assert!(max_abs(&(direct - complexify(&m).unwrap())) < 1e-14);
    }

    #[test]
    fn realify_rejects_wrong_block_form() {
        let mut m = identity(2);
        m[(1, 1)] = c(3.0, 0.0);
        assert!(matches!(realify(&m, DEFAULT_TOL), Err(Error::Structure(_))));
    }

    #[test]
    fn structured_report_on_j() {
        let r = structured_report(&to_complex(&j_matrix(2)), DEFAULT_TOL);
        assert!(r.is_symplectic && r.is_hamiltonian && !r.is_symmetric && !r.is_hermitian);
        assert!(r.max_violation > 0.0);
    }

    #[test]
    fn inverse_checked_flags_singular() {
        let m = CMatrix::from_element(2, 2, ONE);
        assert!(matches!(inverse_checked(&m, "test"), Err(Error::Singular { .. })));
    }
}
