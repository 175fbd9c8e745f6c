use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// `Jₙ(p) = ∫_{𝒟ₙ} det(I − W W̄)^p dW`
/// `= 2ⁿ π^{n(n+1)/2} ∏ᵢ Γ(2p + 2i) / Γ(2p + n + i + 1)`, for `p > −1`.
pub fn norm_const_j(n: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Dimension("rank must be at least 1".into()));
    }
    if !(p > -1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("exponent p = {p} must exceed -1")));
    }
    let nf = n as f64;
    let mut log = nf * 2f64.ln() + 0.5 * nf * (nf + 1.0) * PI.ln();
    for i in 1..=n {
        let i = i as f64;
        log += ln_gamma(2.0 * p + 2.0 * i) - ln_gamma(2.0 * p + nf + i + 1.0);
    }
    Ok(log.exp())
}

/// Normalization `Λₙ` of the coherent-state measure, for `k > 2n + 2`:
/// `(k−3)/(2π^{n(n+3)/2}) ∏_{i<n} ((k−3)/2 − n + i) Γ(k+i−2) / Γ(k+2(i−n−1))`.
pub fn norm_const_lambda(n: usize, k: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Dimension("rank must be at least 1".into()));
    }
    let nf = n as f64;
    if !(k > 2.0 * nf + 2.0) || !k.is_finite() {
        return Err(Error::Domain(format!("weight k = {k} must exceed 2n + 2 = {}", 2 * n + 2)));
    }
    let mut log = (k - 3.0).ln() - 2f64.ln() - 0.5 * nf * (nf + 3.0) * PI.ln();
    for i in 1..n {
        let i = i as f64;
        log += ((k - 3.0) / 2.0 - nf + i).ln() + ln_gamma(k + i - 2.0) - ln_gamma(k + 2.0 * (i - nf - 1.0));
    }
    Ok(log.exp())
}
