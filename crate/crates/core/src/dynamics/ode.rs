//! Fixed-step classical Runge-Kutta integrator with a half-step error estimate.

use crate::error::{Error, Result};
use crate::linalg::{all_finite_vec, c, max_abs_vec, CVector};

pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &CVector) -> CVector;
    /// Chart membership of a state; checked after every step.
    fn admissible(&self, _y: &CVector) -> bool {
        true
    }
}

/// Adapter turning a closure into an [`OdeSystem`] without a membership test.
pub struct FnSystem<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(f64, &CVector) -> CVector> OdeSystem for FnSystem<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn rhs(&self, t: f64, y: &CVector) -> CVector {
        (self.f)(t, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub t0: f64,
    pub dt: f64,
    /// Local error budget per step; `None` disables rejection.
    pub budget: Option<f64>,
    /// Keep every `record_every`-th state (the final state is always kept).
    pub record_every: usize,
}

impl OracleOptions {
    pub fn new(dt: f64) -> Self {
        Self { t0: 0.0, dt, budget: None, record_every: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    /// Largest per-step Richardson estimate `‖y_{h/2} − y_h‖/15`.
    pub max_error_estimate: f64,
}

impl Trajectory {
    pub fn last(&self) -> &CVector {
        self.states.last().expect("trajectory holds the initial state")
    }
}

fn rk4<S: OdeSystem + ?Sized>(sys: &S, t: f64, y: &CVector, h: f64) -> CVector {
    let hc = c(h, 0.0);
    let half = c(0.5 * h, 0.0);
    let k1 = sys.rhs(t, y);
    let k2 = sys.rhs(t + 0.5 * h, &(y + &k1 * half));
    let k3 = sys.rhs(t + 0.5 * h, &(y + &k2 * half));
    let k4 = sys.rhs(t + h, &(y + &k3 * hc));
    y + (k1 + (k2 + k3) * c(2.0, 0.0) + k4) * c(h / 6.0, 0.0)
}

/// Integrate from 0 to `t_end` with step close to `dt`, recording every step.
pub fn integrate_oracle<S: OdeSystem + ?Sized>(sys: &S, y0: &CVector, t_end: f64, dt: f64) -> Result<Trajectory> {
    integrate_oracle_with(sys, y0, t_end, OracleOptions::new(dt))
}

/// The interval is split into `⌈(t_end − t0)/dt⌉` equal steps. Each step is
/// taken once with `h` and twice with `h/2`; the half-step result is kept.
pub fn integrate_oracle_with<S: OdeSystem + ?Sized>(
    sys: &S,
    y0: &CVector,
    t_end: f64,
    opts: OracleOptions,
) -> Result<Trajectory> {
    if !(opts.dt > 0.0) || !opts.dt.is_finite() {
        return Err(Error::Parameter(format!("step dt = {} must be positive", opts.dt)));
    }
    if y0.len() != sys.dim() {
        return Err(Error::Dimension(format!("state has length {}, system expects {}", y0.len(), sys.dim())));
    }
    if !(t_end >= opts.t0) {
        return Err(Error::Parameter(format!("end time {t_end} precedes start {}", opts.t0)));
    }
    if !sys.admissible(y0) {
        return Err(Error::Domain("initial state outside the chart".into()));
    }
    let span = t_end - opts.t0;
    let steps = if span == 0.0 { 0 } else { (span / opts.dt).ceil().max(1.0) as usize };
    let h = if steps == 0 { 0.0 } else { span / steps as f64 };
    let every = opts.record_every.max(1);
    let mut times = vec![opts.t0];
    let mut states = vec![y0.clone()];
    let mut y = y0.clone();
    let mut max_err = 0.0_f64;
    for i in 0..steps {
        let t = opts.t0 + i as f64 * h;
        let full = rk4(sys, t, &y, h);
        let mid = rk4(sys, t, &y, 0.5 * h);
        let fine = rk4(sys, t + 0.5 * h, &mid, 0.5 * h);
        let est = max_abs_vec(&(&fine - &full)) / 15.0;
        let t_next = if i + 1 == steps { t_end } else { opts.t0 + (i + 1) as f64 * h };
        if !all_finite_vec(&fine) {
            return Err(Error::NonFinite(format!("state at t = {t_next}")));
        }
        if let Some(budget) = opts.budget {
            if est > budget {
                return Err(Error::StepRejected { time: t, estimate: est, budget });
            }
        }
        if !sys.admissible(&fine) {
            return Err(Error::ChartEscape { time: t_next });
        }
        max_err = max_err.max(est);
        y = fine;
        if (i + 1) % every == 0 || i + 1 == steps {
            times.push(t_next);
            states.push(y.clone());
        }
    }
    Ok(Trajectory { times, states, max_error_estimate: max_err })
}
