//! `analyze`: Floquet report, energies, critical points, kernel/metric values
//! and phase totals for one Hamiltonian.

use std::f64::consts::TAU;

use serde_json::{json, Value};
use siegel_jacobi::domains::{EtaBallPoint, JacobiBallPoint};
use siegel_jacobi::dynamics::{build_ball_system, critical_points, monodromy, Field, LinearHamiltonian, PeriodicLift};
use siegel_jacobi::kahler::{energy_parts, energy_zw, kahler_potential, kernel_diag, metric, DEFAULT_METRIC_STEP};
use siegel_jacobi::linalg::{c, CVector};

use crate::config::Settings;
use crate::error::CliError;
use crate::output::emit_json;
use crate::propagate::{closed_form, phases, time_grid};
use crate::schema::{entries, Entry, read_hamiltonian, read_point, rows, Point};

fn floquet(h: &LinearHamiltonian, s: &Settings) -> Result<Value, CliError> {
    let period = s.period.unwrap_or(s.horizon);
    let h0 = build_ball_system(h).0.lift().h;
    let lift = match &s.modulation {
        Some(path) => {
            let h1 = read_hamiltonian(path, s.tol)?;
            if h1.dim() != h.dim() {
                return Err(CliError::Invariant(format!("modulation has rank {}, Hamiltonian {}", h1.dim(), h.dim())));
            }
            let m1 = build_ball_system(&h1).0.lift().h;
            PeriodicLift::periodic(period, Field::Complex, move |t| &h0 + &m1 * c((TAU * t / period).cos(), 0.0))
        }
        None => PeriodicLift::constant(h0, Field::Complex),
    };
    let r = monodromy(&lift, period, s.floquet_steps)?;
    let multipliers: Vec<Entry> = r.multipliers.iter().map(|&x| x.into()).collect();
    Ok(json!({
        "period": r.period,
        "modulated": s.modulation.is_some(),
        "monodromy": rows(&r.monodromy),
        "multipliers": multipliers,
        "stable": r.stable,
        "parametrically_stable": r.parametrically_stable,
        "symplectic_residual": r.symplectic_residual,
        "hamiltonian_residual": r.hamiltonian_residual,
        "log_period_doubled": r.log_period_doubled,
    }))
}

fn point_values(source: &str, x: &JacobiBallPoint, h: &LinearHamiltonian) -> Result<Value, CliError> {
    let k = h.k();
    let g = metric(x, k, DEFAULT_METRIC_STEP)?;
    Ok(json!({
        "source": source,
        "z": entries(&x.z),
        "w": rows(x.w.matrix()),
        "energy": energy_zw(x, h)?,
        "potential": kahler_potential(x, k)?,
        "kernel": kernel_diag(x, k)?,
        "metric": rows(&g.g),
        "metric_min_eigenvalue": g.min_eigenvalue(),
    }))
}

pub fn run(s: &Settings) -> Result<(), CliError> {
    let h = s.hamiltonian()?;
    let n = h.dim();
    let x0 = s.initial_point(n)?;
    if x0.dim() != n {
        return Err(CliError::Invariant(format!("initial point has rank {}, Hamiltonian rank {n}", x0.dim())));
    }

    let origin = JacobiBallPoint::origin(n);
    let mut points = vec![point_values("origin", &origin, &h)?];
    points.push(point_values("initial", &x0.to_jacobi_ball()?, &h)?);
    for path in &s.points {
        let p: Point = read_point(path)?;
        points.push(point_values(&path.display().to_string(), &p.to_jacobi_ball()?, &h)?);
    }

    let crit = critical_points(&h)?;
    let mut crit_points = Vec::new();
    for w in &crit.points {
        let p = EtaBallPoint { eta: CVector::zeros(n), w: w.clone() };
        crit_points.push(json!({ "w": rows(w.matrix()), "energy_w": energy_parts(&p, &h)?.1 }));
    }

    let grid = time_grid(s.horizon, s.step, s.record_every);
    let times: Vec<f64> = grid.iter().map(|g| g.1).collect();
    let path = closed_form(&x0, &h, &times)?;
    let phase = phases(&h, &times, &path)?;

    let report = json!({
        "command": "analyze",
        "n": n,
        "k": h.k(),
        "floquet": floquet(&h, s)?,
        "energy_origin": energy_zw(&origin, &h)?,
        "points": points,
        "critical_points": {
            "count": crit.points.len(),
            "candidates_examined": crit.candidates_examined,
            "diagnostic": crit.diagnostic,
            "points": crit_points,
        },
        "phases": {
            "chart": x0.chart(),
            "horizon": s.horizon,
            "samples": times.len(),
            "berry": phase.berry,
            "dynamical": phase.dynamical,
            "total": phase.total,
        },
    });
    emit_json(s.out.as_deref(), &report)
}
