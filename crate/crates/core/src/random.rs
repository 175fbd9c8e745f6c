//! Seeded generators for points, group elements and Hamiltonians.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domains::{EtaBallPoint, JacobiBallPoint, JacobiUpperPoint, SiegelBallPoint, SiegelUpperPoint};
use crate::dynamics::LinearHamiltonian;
use crate::group::{JacobiElementC, JacobiElementR};
use crate::linalg::{c, conj, j_matrix, mat_exp_real, spectral_norm, symmetrize, to_complex, CMatrix, CVector, RMatrix, RVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_vector<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CVector {
    CVector::from_fn(n, |_, _| c(scale * normal(rng), scale * normal(rng)))
}

pub fn complex_matrix<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c(scale * normal(rng), scale * normal(rng)))
}

pub fn real_symmetric<R: Rng>(rng: &mut R, n: usize, scale: f64) -> RMatrix {
    let a = RMatrix::from_fn(n, n, |_, _| scale * normal(rng));
    (&a + a.transpose()) * 0.5
}

/// Random real Hamiltonian matrix `J S` with `S` symmetric.
pub fn real_hamiltonian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> RMatrix {
    j_matrix(n) * real_symmetric(rng, 2 * n, scale)
}

/// W with spectral norm uniform in `[0, 1 − margin]`.
pub fn ball_point_with<R: Rng>(rng: &mut R, n: usize, margin: f64) -> SiegelBallPoint {
    let margin = margin.clamp(0.0, 1.0);
    let s = symmetrize(&complex_matrix(rng, n, 1.0));
    let radius = (1.0 - margin) * (1.0 - 1e-12) * rng.random::<f64>();
    let sigma = spectral_norm(&s);
    if sigma == 0.0 || radius == 0.0 {
        return SiegelBallPoint::origin(n);
    }
    let w = s * c(radius / sigma, 0.0);
    SiegelBallPoint::with_margin(w, 0.0).expect("scaled matrix lies inside the ball")
}

pub fn random_ball_point(n: usize, seed: u64, margin: f64) -> SiegelBallPoint {
    ball_point_with(&mut rng(seed), n, margin)
}

/// `v = s + i r` with `r = I + P`, `‖P‖₂ ≤ 1/2`.
pub fn upper_point_with<R: Rng>(rng: &mut R, n: usize) -> SiegelUpperPoint {
    let s = real_symmetric(rng, n, 1.0);
    let p = real_symmetric(rng, n, 1.0);
    let pn = spectral_norm(&to_complex(&p));
    let p = if pn > 0.0 { p * (0.5 * rng.random::<f64>() / pn) } else { p };
    let r = RMatrix::identity(n, n) + p;
    let v = CMatrix::from_fn(n, n, |i, j| c(s[(i, j)], r[(i, j)]));
    SiegelUpperPoint::new(v).expect("imaginary part is positive definite")
}

pub fn random_upper_point(n: usize, seed: u64) -> SiegelUpperPoint {
    upper_point_with(&mut rng(seed), n)
}

pub fn jacobi_ball_point_with<R: Rng>(rng: &mut R, n: usize, margin: f64) -> JacobiBallPoint {
    let w = ball_point_with(rng, n, margin);
    JacobiBallPoint { z: complex_vector(rng, n, 1.0), w }
}

pub fn eta_ball_point_with<R: Rng>(rng: &mut R, n: usize, margin: f64) -> EtaBallPoint {
    let w = ball_point_with(rng, n, margin);
    EtaBallPoint { eta: complex_vector(rng, n, 1.0), w }
}

pub fn jacobi_upper_point_with<R: Rng>(rng: &mut R, n: usize) -> JacobiUpperPoint {
    let v = upper_point_with(rng, n);
    JacobiUpperPoint { u: complex_vector(rng, n, 1.0), v }
}

/// Symplectic part `exp(X)` for a random Hamiltonian X with `‖X‖₂ ≤ 1`.
pub fn symplectic_with<R: Rng>(rng: &mut R, n: usize) -> RMatrix {
    let x = real_hamiltonian(rng, n, 1.0);
    let nrm = spectral_norm(&to_complex(&x));
    let x = if nrm > 0.0 { x * (rng.random::<f64>() / nrm) } else { x };
    mat_exp_real(&x, 1.0).expect("bounded exponent")
}

pub fn element_r_with<R: Rng>(rng: &mut R, n: usize) -> JacobiElementR {
    let g = symplectic_with(rng, n);
    let shift = RVector::from_fn(2 * n, |_, _| normal(rng));
    let kappa = normal(rng);
    JacobiElementR::new(g, shift, kappa).expect("exponential of a Hamiltonian matrix is symplectic")
}

pub fn element_c_with<R: Rng>(rng: &mut R, n: usize) -> JacobiElementC {
    let g = crate::linalg::complexify(&symplectic_with(rng, n)).expect("even dimension");
    let alpha = complex_vector(rng, n, 1.0);
    let t = normal(rng);
    JacobiElementC::new(g, alpha, t).expect("complexified symplectic matrix")
}

/// Hermitian coefficient set with entries of size `scale`.
pub fn hamiltonian_with<R: Rng>(rng: &mut R, n: usize, k: f64, scale: f64) -> LinearHamiltonian {
    let eps = complex_vector(rng, n, scale);
    let a = complex_matrix(rng, n, scale);
    let eps0 = (&a + a.adjoint()) * c(0.5, 0.0);
    let epsm = symmetrize(&complex_matrix(rng, n, scale));
    let epsp = conj(&epsm);
    LinearHamiltonian::new(eps, eps0, epsm, epsp, k).expect("hermitian by construction")
}

pub fn random_hamiltonian(n: usize, k: f64, seed: u64, scale: f64) -> LinearHamiltonian {
    hamiltonian_with(&mut rng(seed), n, k, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::ball_contains;

    #[test]
    fn margin_one_gives_origin() {
        let w = random_ball_point(3, 11, 1.0);
        assert_eq!(w, SiegelBallPoint::origin(3));
    }

    #[test]
    fn deterministic_under_seed() {
        assert_eq!(random_ball_point(2, 5, 0.1), random_ball_point(2, 5, 0.1));
        assert_eq!(random_upper_point(3, 9), random_upper_point(3, 9));
        assert_ne!(random_ball_point(2, 5, 0.1), random_ball_point(2, 6, 0.1));
    }

    #[test]
    fn samples_stay_inside() {
        let mut r = rng(1);
        for _ in 0..1000 {
            let w = ball_point_with(&mut r, 3, 1e-3);
            assert!(ball_contains(w.matrix(), 1e-3));
        }
    }
}
