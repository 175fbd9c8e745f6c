use num_complex::Complex64;

use super::kernel::{potential_raw, resolvent_logdet};
use super::{check_weight, coordinate_dim, coordinates, pack_coordinates, point_from_coordinates, unpack_coordinates};
use crate::domains::{fc, fc_inv, EtaBallPoint, JacobiBallPoint, SiegelBallPoint};
use crate::error::{Error, Result};
use crate::group::{act_ball, JacobiElementC};
use crate::linalg::{
    all_finite_vec, conj, conj_vec, hermitian_residual, min_hermitian_eigenvalue, CMatrix, CVector, RMatrix, I,
};

/// Relative finite-difference step of [`metric`].
pub const DEFAULT_METRIC_STEP: f64 = 1e-4;
/// Step of the central-difference pushforwards.
pub const PUSHFORWARD_STEP: f64 = 1e-5;
/// Largest relative disagreement tolerated between steps `h` and `2h`.
const RICHARDSON_TOL: f64 = 1e-4;

/// Hermitian matrix `G_ab = ∂_a ∂̄_b f` over the packed coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    pub g: CMatrix,
    pub n: usize,
    pub step: f64,
    /// Relative difference between the step-`h` and step-`2h` evaluations.
    pub step_disagreement: f64,
}

impl MetricMatrix {
    pub fn hermitian_residual(&self) -> f64 {
        hermitian_residual(&self.g)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&((&self.g + self.g.adjoint()) * Complex64::new(0.5, 0.0)))
    }

    pub fn is_positive_definite(&self) -> bool {
        self.min_eigenvalue() > 0.0
    }

    /// `t₁ᵗ G t̄₂`.
    pub fn contract(&self, t1: &CVector, t2: &CVector) -> Result<Complex64> {
        check_tangent(t1, self.n)?;
        check_tangent(t2, self.n)?;
        Ok(t1.dot(&(&self.g * conj_vec(t2))))
    }
}

fn check_tangent(t: &CVector, n: usize) -> Result<()> {
    if t.len() != coordinate_dim(n) {
        return Err(Error::Dimension(format!("tangent has length {}, expected {}", t.len(), coordinate_dim(n))));
    }
    if !all_finite_vec(t) {
        return Err(Error::NonFinite("tangent vector".into()));
    }
    Ok(())
}

/// Real variable `p` of a complex vector: real parts first, then imaginary.
fn shifted(x: &CVector, p: usize, d: f64) -> CVector {
    let n = x.len();
    let mut y = x.clone();
    if p < n {
        y[p] += d;
    } else {
        y[p - n] += I * d;
    }
    y
}

/// Real Hessian by central differences with per-variable steps.
fn real_hessian<F: Fn(&CVector) -> Result<f64>>(f: &F, x: &CVector, h: &[f64]) -> Result<RMatrix> {
    let m = 2 * x.len();
    let f0 = f(x)?;
    let mut hess = RMatrix::zeros(m, m);
    for p in 0..m {
        let fp = f(&shifted(x, p, h[p]))?;
        let fm = f(&shifted(x, p, -h[p]))?;
        hess[(p, p)] = (fp - 2.0 * f0 + fm) / (h[p] * h[p]);
        for q in 0..p {
            let pp = shifted(x, p, h[p]);
            let pm = shifted(x, p, -h[p]);
            let v = f(&shifted(&pp, q, h[q]))? - f(&shifted(&pp, q, -h[q]))? - f(&shifted(&pm, q, h[q]))?
                + f(&shifted(&pm, q, -h[q]))?;
            hess[(p, q)] = v / (4.0 * h[p] * h[q]);
            hess[(q, p)] = hess[(p, q)];
        }
    }
    Ok(hess)
}

/// `∂_a ∂̄_b f = ¼[H_xx + H_yy + i(H_xy − H_yx)]`.
fn levi_form<F: Fn(&CVector) -> Result<f64>>(f: &F, x: &CVector, rel_step: f64) -> Result<CMatrix> {
    let n = x.len();
    let h: Vec<f64> = (0..2 * n)
        .map(|p| {
            let v = if p < n { x[p].re } else { x[p - n].im };
            rel_step * v.abs().max(1.0)
        })
        .collect();
    let hess = real_hessian(f, x, &h)?;
    Ok(CMatrix::from_fn(n, n, |a, b| {
        Complex64::new(hess[(a, b)] + hess[(n + a, n + b)], hess[(a, n + b)] - hess[(n + a, b)]) * 0.25
    }))
}

/// Metric of the Kähler potential by finite differences at steps `h` and
/// `2h`; the two must agree, and their Richardson combination
/// `(4G_h − G_2h)/3` is returned.
pub fn metric(x: &JacobiBallPoint, k: f64, step: f64) -> Result<MetricMatrix> {
    let k = check_weight(k)?;
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Parameter(format!("finite-difference step {step} must be positive")));
    }
    let n = x.dim();
    let f = |y: &CVector| -> Result<f64> {
        let (z, w) = unpack_coordinates(y, n)?;
        potential_raw(&z, &w, k)
    };
    let x0 = coordinates(x);
    let g = levi_form(&f, &x0, step)?;
    let g2 = levi_form(&f, &x0, 2.0 * step)?;
    let scale = g.iter().fold(1f64, |a, v| a.max(v.norm()));
    let disagreement = (&g - &g2).iter().fold(0f64, |a, v| a.max(v.norm())) / scale;
    if !(disagreement <= RICHARDSON_TOL) {
        return Err(Error::Step(format!(
            "metric at steps {step:.1e} and {:.1e} disagree by {disagreement:.3e}",
            2.0 * step
        )));
    }
    let g = (g * Complex64::new(4.0, 0.0) - g2) / Complex64::new(3.0, 0.0);
    Ok(MetricMatrix { g, n, step, step_disagreement: disagreement })
}

/// Closed-form metric at the origin: identity on the z-block and `k/2`
/// times the Gram matrix of the packed W-directions (1 on the diagonal of
/// W, 2 off it).
pub fn origin_metric(n: usize, k: f64) -> CMatrix {
    let mut g = CMatrix::identity(coordinate_dim(n), coordinate_dim(n));
    for (a, (i, j)) in super::w_indices(n).into_iter().enumerate() {
        let mult = if i == j { 1.0 } else { 2.0 };
        g[(n + a, n + a)] = Complex64::new(0.5 * k * mult, 0.0);
    }
    g
}

/// `ω(T₁, T₂) = −2 Im(t₁ᵗ G t̄₂)`.
pub fn two_form_from_metric(g: &MetricMatrix, t1: &CVector, t2: &CVector) -> Result<f64> {
    Ok(-2.0 * g.contract(t1, t2)?.im)
}

/// `(k/2)[tr(B₁B̄₂) − tr(B₂B̄₁)]` with `B = M dW`.
fn siegel_part(m: &CMatrix, dw1: &CMatrix, dw2: &CMatrix, k: f64) -> Complex64 {
    let b1 = m * dw1;
    let b2 = m * dw2;
    ((&b1 * conj(&b2)).trace() - (&b2 * conj(&b1)).trace()) * (0.5 * k)
}

/// Closed-form two-form `ω = Re(i[(k/2)(tr B₁B̄₂ − tr B₂B̄₁) + a₁ᵗM̄ā₂ − a₂ᵗM̄ā₁])`
/// with `a = dz + dW η̄` and `B = M dW`.
pub fn two_form(x: &JacobiBallPoint, k: f64, t1: &CVector, t2: &CVector) -> Result<f64> {
    let k = check_weight(k)?;
    let n = x.dim();
    check_tangent(t1, n)?;
    check_tangent(t2, n)?;
    let (m, _) = resolvent_logdet(x.w.matrix())?;
    let eta_bar = conj_vec(&fc_inv(x)?.eta);
    let (dz1, dw1) = unpack_coordinates(t1, n)?;
    let (dz2, dw2) = unpack_coordinates(t2, n)?;
    let a1 = dz1 + &dw1 * &eta_bar;
    let a2 = dz2 + &dw2 * &eta_bar;
    let mb = conj(&m);
    let flat = a1.dot(&(&mb * conj_vec(&a2))) - a2.dot(&(&mb * conj_vec(&a1)));
    Ok(-(siegel_part(&m, &dw1, &dw2, k) + flat).im)
}

/// Product two-form in FC coordinates: the Siegel part plus the flat
/// `dηᵗ ∧ dη̄` pairing. Tangents are packed as `(dη, dW)`.
pub fn two_form_product_eta(p: &EtaBallPoint, k: f64, t1: &CVector, t2: &CVector) -> Result<f64> {
    let k = check_weight(k)?;
    let n = p.dim();
    check_tangent(t1, n)?;
    check_tangent(t2, n)?;
    let (m, _) = resolvent_logdet(p.w.matrix())?;
    let (de1, dw1) = unpack_coordinates(t1, n)?;
    let (de2, dw2) = unpack_coordinates(t2, n)?;
    let flat = de1.dot(&conj_vec(&de2)) - de2.dot(&conj_vec(&de1));
    Ok(-(siegel_part(&m, &dw1, &dw2, k) + flat).im)
}

/// Central-difference pushforward `(F(x + ht) − F(x − ht)) / 2h` of a map
/// between packed coordinate vectors.
pub fn pushforward<F: Fn(&CVector) -> Result<CVector>>(map: F, x: &CVector, t: &CVector, h: f64) -> Result<CVector> {
    if t.len() != x.len() {
        return Err(Error::Dimension(format!("tangent has length {}, point {}", t.len(), x.len())));
    }
    if !(h > 0.0) {
        return Err(Error::Parameter(format!("pushforward step {h} must be positive")));
    }
    let step = Complex64::new(h, 0.0);
    let fp = map(&(x + t * step))?;
    let fm = map(&(x - t * step))?;
    Ok((fp - fm) / Complex64::new(2.0 * h, 0.0))
}

/// Pushforward of a tangent at `x` under the action of `h`.
pub fn pushforward_action(h: &JacobiElementC, x: &JacobiBallPoint, t: &CVector) -> Result<CVector> {
    let n = x.dim();
    let map = |y: &CVector| Ok(coordinates(&act_ball(h, &point_from_coordinates(y, n)?)?));
    pushforward(map, &coordinates(x), t, PUSHFORWARD_STEP)
}

/// Pushforward of a `(dη, dW)` tangent at `p` through `fc`.
pub fn fc_pushforward(p: &EtaBallPoint, t: &CVector) -> Result<CVector> {
    let n = p.dim();
    let map = |y: &CVector| {
        let (eta, w) = unpack_coordinates(y, n)?;
        let q = EtaBallPoint::new(eta, SiegelBallPoint::interior(w)?)?;
        Ok(coordinates(&fc(&q)))
    };
    pushforward(map, &pack_coordinates(&p.eta, p.w.matrix()), t, PUSHFORWARD_STEP)
}
