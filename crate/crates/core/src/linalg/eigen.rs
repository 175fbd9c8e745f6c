//! Eigen-decomposition via complex Schur form, and the quadruple structure of
//! Hamiltonian / symplectic spectra.

use nalgebra::Schur;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    hamiltonian_residual_real, imag_part, max_abs_real, real_part, realify, symplectic_residual_real, CMatrix,
    RMatrix,
};
use crate::error::{Error, Result};

/// Eigenvector-matrix condition number above which a basis is not certified.
pub const DEFECT_COND: f64 = 1e8;
/// Tolerance for matching partners inside a quadruple.
pub const PAIRING_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    /// Unit-norm right eigenvectors as columns.
    pub vectors: CMatrix,
    /// 2-norm condition number of `vectors`.
    pub vector_cond: f64,
}

impl EigenDecomposition {
    pub fn is_certified(&self) -> bool {
        self.vector_cond.is_finite() && self.vector_cond < DEFECT_COND
    }
}

pub fn eigen_decompose(a: &CMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::Dimension("eigen decomposition needs a square matrix".into()));
    }
    if !super::all_finite(a) {
        return Err(Error::NonFinite("eigen decomposition input".into()));
    }
    let m = a.nrows();
    if m == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: a.clone(), vector_cond: 1.0 });
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Convergence("Schur iteration".into()))?;
    let (q, t) = schur.unpack();
    let values: Vec<Complex64> = (0..m).map(|i| t[(i, i)]).collect();
    let tnorm = super::norm1(&t);
    let tnorm = if tnorm > 0.0 { tnorm } else { 1.0 };
    let small = f64::EPSILON * tnorm;
    let mut x = CMatrix::zeros(m, m);
    for k in 0..m {
        x[(k, k)] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for l in (j + 1)..=k {
                s += t[(j, l)] * x[(l, k)];
            }
            let mut den = t[(j, j)] - values[k];
            if den.norm() < small {
                den = Complex64::new(small, 0.0);
            }
            x[(j, k)] = if s.norm() == 0.0 { s } else { -s / den };
        }
    }
    let mut vectors = q * x;
    for k in 0..m {
        let nrm = vectors.column(k).norm();
        if nrm > 0.0 && nrm.is_finite() {
            vectors.column_mut(k).unscale_mut(nrm);
        }
    }
    let sv = vectors.clone().singular_values();
    let smax = sv.iter().fold(0.0_f64, |a, b| a.max(*b));
    let smin = sv.iter().fold(f64::INFINITY, |a, b| a.min(*b));
    let vector_cond = if smin > 0.0 && smin.is_finite() { smax / smin } else { f64::INFINITY };
    Ok(EigenDecomposition { values, vectors, vector_cond })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Hamiltonian,
    Symplectic,
}

#[derive(Debug, Clone)]
pub struct EigenStructure {
    pub eigenvalues: Vec<Complex64>,
    /// Index groups closed under the spectral symmetries of `kind`.
    pub quadruple_pairing: Vec<Vec<usize>>,
    pub defect_flag: bool,
    pub vector_cond: f64,
}

fn as_real_form(x: &CMatrix, tol: f64) -> Result<RMatrix> {
    if max_abs_real(&imag_part(x)) == 0.0 {
        Ok(real_part(x))
    } else {
        realify(x, tol)
    }
}

fn partners(l: Complex64, kind: MatrixKind) -> [Complex64; 3] {
    match kind {
        MatrixKind::Hamiltonian => [-l, l.conj(), -l.conj()],
        MatrixKind::Symplectic => [l.inv(), l.conj(), l.conj().inv()],
    }
}

/// Greedy grouping of eigenvalues into orbits of the spectral symmetry group.
pub fn pair_quadruples(values: &[Complex64], kind: MatrixKind, tol: f64) -> Result<Vec<Vec<usize>>> {
    let close = |a: Complex64, b: Complex64| (a - b).norm() <= tol * 1f64.max(a.norm());
    let mut used = vec![false; values.len()];
    let mut groups = Vec::new();
    for i in 0..values.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let l = values[i];
        let mut group = vec![i];
        let mut seen = vec![l];
        for target in partners(l, kind) {
            if seen.iter().any(|s| close(*s, target)) {
                continue;
            }
            seen.push(target);
            let best = (0..values.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| {
                    (values[a] - target).norm().total_cmp(&(values[b] - target).norm())
                });
            match best {
                Some(j) if close(values[j], target) => {
                    used[j] = true;
                    group.push(j);
                }
                _ => {
                    return Err(Error::Domain(format!(
                        "eigenvalue {l} has no partner near {target}"
                    )))
                }
            }
        }
        groups.push(group);
    }
    Ok(groups)
}

/// Spectrum of a Hamiltonian or symplectic matrix, given in real form or in
/// the complexified block form.
pub fn eigen_structure(x: &CMatrix, kind: MatrixKind, tol: f64) -> Result<EigenStructure> {
    let real = as_real_form(x, tol).map_err(|e| Error::Domain(format!("not a real or complexified matrix: {e}")))?;
    let scale = 1f64.max(max_abs_real(&real));
    let residual = match kind {
        MatrixKind::Hamiltonian => hamiltonian_residual_real(&real)?,
        MatrixKind::Symplectic => symplectic_residual_real(&real)? / scale,
    };
    if residual > tol * scale {
        return Err(Error::Domain(format!("{kind:?} membership fails (residual {residual:.3e})")));
    }
    let dec = eigen_decompose(x)?;
    let quadruple_pairing = pair_quadruples(&dec.values, kind, PAIRING_TOL)?;
    Ok(EigenStructure {
        defect_flag: !dec.is_certified(),
        vector_cond: dec.vector_cond,
        eigenvalues: dec.values,
        quadruple_pairing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, j_matrix, max_abs, to_complex, I};

    #[test]
    fn decomposition_backward_error() {
        let a = CMatrix::from_fn(5, 5, |i, j| c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64));
        let d = eigen_decompose(&a).unwrap();
        let lam = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.values.clone()));
        let r = max_abs(&(&a * &d.vectors - &d.vectors * lam));
        assert!(r <= 1e-12 * crate::linalg::norm1(&a), "{r}");
        assert!(d.is_certified());
    }

    #[test]
    fn j_is_self_paired() {
        let s = eigen_structure(&to_complex(&j_matrix(1)), MatrixKind::Hamiltonian, 1e-9).unwrap();
        assert_eq!(s.quadruple_pairing.len(), 1);
        let mut v = s.eigenvalues.clone();
        v.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((v[0] + I).norm() < 1e-14 && (v[1] - I).norm() < 1e-14);
        assert!(!s.defect_flag);
    }

    #[test]
    fn real_hyperbolic_pair() {
        let x = to_complex(&RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        let s = eigen_structure(&x, MatrixKind::Hamiltonian, 1e-9).unwrap();
        let mut re: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-14 && (re[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jordan_block_is_flagged() {
        let x = to_complex(&RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        let s = eigen_structure(&x, MatrixKind::Hamiltonian, 1e-9).unwrap();
        assert!(s.defect_flag);
    }

    #[test]
    fn membership_failure_is_domain_error() {
        let x = CMatrix::identity(2, 2);
        assert!(matches!(eigen_structure(&x, MatrixKind::Hamiltonian, 1e-9), Err(Error::Domain(_))));
    }
}
