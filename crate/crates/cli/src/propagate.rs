//! `propagate`: closed-form and oracle trajectories in the ball, upper and η charts.

use std::io::Write;

use serde::Serialize;
use siegel_jacobi::domains::{
    fc, fc1, fc1_inv, fc_inv, partial_cayley_inv, EtaBallPoint, JacobiBallPoint, SiegelBallPoint, SiegelUpperPoint,
};
use siegel_jacobi::dynamics::{
    build_ball_system, build_upper_system, integrate_oracle, pack_vec_mat, propagate_coupled_ball,
    propagate_coupled_upper, riccati_rhs, riccati_solve_const, solve_eta, unpack_vec_mat, EtaSystem, FnSystem,
    LinearHamiltonian, OdeSystem,
};
use siegel_jacobi::kahler::{coordinate_labels, pack_coordinates, PhaseAccumulator, PhaseReport};
use siegel_jacobi::linalg::{max_abs_vec, symmetrize, CMatrix, CVector};
use siegel_jacobi::Error;

use crate::config::{Method, Settings};
use crate::error::CliError;
use crate::output::{emit_json, open_output};
use crate::schema::{Chart, Point, PointDoc};

/// The point `x` written in `chart`.
pub fn express(x: &JacobiBallPoint, chart: Chart) -> Result<Point, CliError> {
    Ok(match chart {
        Chart::JacobiBall => Point::JacobiBall(x.clone()),
        Chart::EtaBall => Point::EtaBall(fc_inv(x)?),
        Chart::JacobiUpper => Point::JacobiUpper(partial_cayley_inv(x)?),
        other => return Err(CliError::Invariant(format!("cannot express a Jacobi point in chart {}", other.tag()))),
    })
}

/// Sample times of the oracle grid: `⌈T/dt⌉` equal steps, every `every`-th kept,
/// the final time always kept. Returned as (step index, time).
pub fn time_grid(horizon: f64, step: f64, every: usize) -> Vec<(usize, f64)> {
    let steps = (horizon / step).ceil().max(1.0) as usize;
    let h = horizon / steps as f64;
    (0..=steps)
        .filter(|&i| i % every == 0 || i == steps)
        .map(|i| (i, if i == steps { horizon } else { i as f64 * h }))
        .collect()
}

fn ball_at(w: CMatrix, time: f64) -> Result<SiegelBallPoint, Error> {
    SiegelBallPoint::with_margin(symmetrize(&w), 0.0).map_err(|_| Error::ChartEscape { time })
}

fn upper_at(v: CMatrix, time: f64) -> Result<SiegelUpperPoint, Error> {
    SiegelUpperPoint::with_margin(symmetrize(&v), 0.0).map_err(|_| Error::ChartEscape { time })
}

fn eta_ball_closed(p0: &EtaBallPoint, h: &LinearHamiltonian, t: f64) -> Result<EtaBallPoint, Error> {
    let (sys, _) = build_ball_system(h);
    let w = ball_at(riccati_solve_const(p0.w.matrix(), &sys, t)?, t)?;
    Ok(EtaBallPoint { eta: solve_eta(&p0.eta, h, t)?, w })
}

/// Matrix part from the linearized Riccati flow, vector part from the
/// decoupled η solution mapped back into the chart.
pub fn closed_form(x0: &Point, h: &LinearHamiltonian, times: &[f64]) -> Result<Vec<Point>, CliError> {
    let mut out = Vec::with_capacity(times.len());
    match x0 {
        Point::JacobiBall(x) => {
            let p0 = fc_inv(x)?;
            for &t in times {
                out.push(Point::JacobiBall(fc(&eta_ball_closed(&p0, h, t)?)));
            }
        }
        Point::EtaBall(p0) => {
            for &t in times {
                out.push(Point::EtaBall(eta_ball_closed(p0, h, t)?));
            }
        }
        Point::JacobiUpper(x) => {
            let eta0 = fc1_inv(x)?;
            let (sys, _) = build_upper_system(h);
            for &t in times {
                let v = upper_at(riccati_solve_const(x.v.matrix(), &sys, t)?, t)?;
                out.push(Point::JacobiUpper(fc1(&solve_eta(&eta0, h, t)?, &v)?));
            }
        }
        other => return Err(CliError::Invariant(format!("chart {} cannot be propagated", other.chart().tag()))),
    }
    Ok(out)
}

/// Runge-Kutta oracle on the full grid, subsampled to `keep` step indices.
pub fn oracle(x0: &Point, h: &LinearHamiltonian, horizon: f64, step: f64, keep: &[usize]) -> Result<Vec<Point>, CliError> {
    let all: Vec<Point> = match x0 {
        Point::JacobiBall(x) => {
            propagate_coupled_ball(x, h, horizon, step)?.into_iter().map(|(_, x)| Point::JacobiBall(x)).collect()
        }
        Point::JacobiUpper(x) => {
            propagate_coupled_upper(x, h, horizon, step)?.into_iter().map(|(_, x)| Point::JacobiUpper(x)).collect()
        }
        Point::EtaBall(p0) => {
            let n = p0.dim();
            let (sys, _) = build_ball_system(h);
            let eta_sys = EtaSystem { hamiltonian: h };
            let joint = FnSystem {
                dim: n + n * n,
                f: |t: f64, y: &CVector| {
                    let (eta, w) = unpack_vec_mat(y, n);
                    pack_vec_mat(&eta_sys.rhs(t, &eta), &riccati_rhs(&w, &sys))
                },
            };
            let tr = integrate_oracle(&joint, &pack_vec_mat(&p0.eta, p0.w.matrix()), horizon, step)?;
            tr.times
                .iter()
                .zip(&tr.states)
                .map(|(&t, y)| {
                    let (eta, w) = unpack_vec_mat(y, n);
                    Ok(Point::EtaBall(EtaBallPoint { eta, w: ball_at(w, t)? }))
                })
                .collect::<Result<_, Error>>()?
        }
        other => return Err(CliError::Invariant(format!("chart {} cannot be propagated", other.chart().tag()))),
    };
    Ok(keep.iter().map(|&i| all[i].clone()).collect())
}

fn flat(p: &Point) -> CVector {
    let (v, m) = p.components();
    pack_coordinates(v.expect("propagated charts carry a vector"), m)
}

pub fn max_deviation(a: &[Point], b: &[Point]) -> f64 {
    a.iter().zip(b).map(|(x, y)| max_abs_vec(&(flat(x) - flat(y)))).fold(0.0, f64::max)
}

/// Berry and dynamical phases of a sampled path, evaluated in the ball chart.
pub fn phases(h: &LinearHamiltonian, times: &[f64], path: &[Point]) -> Result<PhaseReport, CliError> {
    let mut acc = PhaseAccumulator::with_hamiltonian(h.clone());
    for (&t, p) in times.iter().zip(path) {
        acc.push(t, p.to_jacobi_ball()?)?;
    }
    Ok(acc.report())
}

pub fn csv_header(chart: Chart, n: usize) -> Vec<String> {
    let (vname, mname) = chart.component_names();
    let vname = vname.unwrap_or("x");
    let mut header = vec!["t".to_string()];
    for label in coordinate_labels(n) {
        let (head, tail) = label.split_at(1);
        let name = if head == "z" { format!("{vname}{tail}") } else { format!("{mname}{tail}") };
        header.push(format!("{name}_re"));
        header.push(format!("{name}_im"));
    }
    header
}

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(out: W, chart: Chart, n: usize, times: &[f64], path: &[Point]) -> Result<(), CliError> {
    let io_err = |e: csv::Error| CliError::Io { path: "trajectory".into(), source: e.into() };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(chart, n)).map_err(io_err)?;
    for (&t, p) in times.iter().zip(path) {
        let mut row = vec![num(t)];
        for x in flat(p).iter() {
            row.push(num(x.re));
            row.push(num(x.im));
        }
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush().map_err(|source| CliError::Io { path: "trajectory".into(), source })
}

#[derive(Debug, Serialize)]
struct Comparison {
    max_deviation: f64,
}

#[derive(Debug, Serialize)]
struct PropagateReport {
    command: &'static str,
    chart: Chart,
    method: Method,
    n: usize,
    k: f64,
    horizon: f64,
    step: f64,
    samples: usize,
    trajectory: Option<String>,
    final_point: PointDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    phases: Option<PhaseReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
    /// `max |fc_inv(z, W) − η|` between the coupled oracle and the closed-form η.
    #[serde(skip_serializing_if = "Option::is_none")]
    decoupling_deviation: Option<f64>,
}

pub fn run(s: &Settings) -> Result<(), CliError> {
    let h = s.hamiltonian()?;
    let n = h.dim();
    let x0 = s.initial_point(n)?;
    if x0.chart() != s.chart {
        return Err(CliError::Invariant(format!(
            "initial point is in chart {}, configured chart is {}",
            x0.chart().tag(),
            s.chart.tag()
        )));
    }
    if x0.dim() != n {
        return Err(CliError::Invariant(format!("initial point has rank {}, Hamiltonian rank {n}", x0.dim())));
    }
    let grid = time_grid(s.horizon, s.step, s.record_every);
    let times: Vec<f64> = grid.iter().map(|&(_, t)| t).collect();
    let keep: Vec<usize> = grid.iter().map(|&(i, _)| i).collect();
    log::info!("propagating {} samples in chart {} ({})", times.len(), s.chart.tag(), s.method.tag());

    let closed = match s.method {
        Method::ClosedForm | Method::Both => Some(closed_form(&x0, &h, &times)?),
        Method::Oracle => None,
    };
    let numeric = match s.method {
        Method::Oracle | Method::Both => Some(oracle(&x0, &h, s.horizon, s.step, &keep)?),
        Method::ClosedForm => None,
    };
    let comparison = match (&closed, &numeric) {
        (Some(a), Some(b)) => Some(Comparison { max_deviation: max_deviation(a, b) }),
        _ => None,
    };
    let decoupling_deviation = match (&x0, &numeric) {
        (Point::JacobiBall(x), Some(path)) => {
            let eta0 = fc_inv(x)?.eta;
            let mut worst = 0.0_f64;
            for (&t, p) in times.iter().zip(path) {
                let eta = fc_inv(&p.to_jacobi_ball()?)?.eta;
                worst = worst.max(max_abs_vec(&(eta - solve_eta(&eta0, &h, t)?)));
            }
            Some(worst)
        }
        _ => None,
    };
    let path = closed.or(numeric).expect("at least one method runs");
    let phases = if s.phases { Some(phases(&h, &times, &path)?) } else { None };

    let out_name = s.out.as_ref().map(|p| p.display().to_string());
    let report = PropagateReport {
        command: "propagate",
        chart: s.chart,
        method: s.method,
        n,
        k: h.k(),
        horizon: s.horizon,
        step: s.step,
        samples: times.len(),
        trajectory: out_name,
        final_point: path.last().expect("grid is non-empty").to_doc(),
        phases,
        comparison,
        decoupling_deviation,
    };
    match &s.out {
        Some(p) => {
            write_csv(open_output(p)?, s.chart, n, &times, &path)?;
            emit_json(None, &report)
        }
        None => {
            write_csv(std::io::stdout().lock(), s.chart, n, &times, &path)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            eprintln!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_ends_at_horizon() {
        let g = time_grid(1.0, 0.3, 1);
        assert_eq!(g.len(), 5);
        assert_eq!(g.last().unwrap(), &(4, 1.0));
        let g = time_grid(1.0, 0.1, 3);
        let idx: Vec<usize> = g.iter().map(|x| x.0).collect();
        assert_eq!(idx, vec![0, 3, 6, 9, 10]);
    }

    #[test]
    fn header_follows_coordinate_order() {
        let h = csv_header(Chart::JacobiUpper, 2);
        assert_eq!(h[..5], ["t", "u1_re", "u1_im", "u2_re", "u2_im"]);
        assert_eq!(h[5..7], ["v11_re", "v11_im"]);
        assert_eq!(h.len(), 1 + 2 * 5);
        assert_eq!(csv_header(Chart::EtaBall, 1), ["t", "eta1_re", "eta1_im", "w11_re", "w11_im"]);
    }

    #[test]
    fn upper_closed_form_matches_oracle() {
        use siegel_jacobi::random::{hamiltonian_with, jacobi_ball_point_with, rng};
        let mut r = rng(5);
        let h = hamiltonian_with(&mut r, 2, 4.0, 0.5);
        let x = jacobi_ball_point_with(&mut r, 2, 0.3);
        let grid = time_grid(1.0, 1e-3, 50);
        let times: Vec<f64> = grid.iter().map(|g| g.1).collect();
        let keep: Vec<usize> = grid.iter().map(|g| g.0).collect();
        for chart in [Chart::JacobiBall, Chart::EtaBall, Chart::JacobiUpper] {
            let x0 = express(&x, chart).unwrap();
            let a = closed_form(&x0, &h, &times).unwrap();
            let b = oracle(&x0, &h, 1.0, 1e-3, &keep).unwrap();
            let d = max_deviation(&a, &b);
            assert!(d < 1e-8, "{chart:?}: {d}");
        }
    }
}
