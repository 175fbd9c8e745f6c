//! `check`: structural predicates on matrices, chart membership of points,
//! hermiticity of Hamiltonians.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use siegel_jacobi::domains::{ball_margin, upper_margin};
use siegel_jacobi::linalg::{all_finite_vec, max_abs, structured_report, symmetry_residual, to_complex, CMatrix};
use siegel_jacobi::random::{hamiltonian_with, jacobi_ball_point_with, rng, symplectic_with};

use crate::error::CliError;
use crate::output::emit_json;
use crate::schema::{matrix, read_document, Chart, Document, HamiltonianDoc, MatrixDoc, PointDoc, Property};

struct Outcome {
    pass: bool,
    detail: Value,
}

fn check_matrix(doc: &MatrixDoc, tol: f64) -> Result<Outcome, CliError> {
    let m = matrix(&doc.rows, doc.n, "rows")?;
    let expect = if !doc.expect.is_empty() {
        doc.expect.clone()
    } else if doc.n % 2 == 0 {
        vec![Property::Symplectic]
    } else {
        return Err(CliError::Usage("odd-size matrix: list the expected properties in `expect`".into()));
    };
    Ok(matrix_outcome(&m, &expect, tol))
}

fn matrix_outcome(m: &CMatrix, expect: &[Property], tol: f64) -> Outcome {
    let r = structured_report(m, tol);
    let holds = |p: Property| match p {
        Property::Symmetric => r.is_symmetric,
        Property::Hermitian => r.is_hermitian,
        Property::Symplectic => r.is_symplectic,
        Property::Hamiltonian => r.is_hamiltonian,
        Property::SpComplex => r.is_sp_complex,
    };
    let failed: Vec<Property> = expect.iter().copied().filter(|&p| !holds(p)).collect();
    Outcome {
        pass: failed.is_empty(),
        detail: json!({ "n": m.nrows(), "expect": expect, "failed": failed, "report": r }),
    }
}

fn check_point(doc: &PointDoc, tol: f64) -> Outcome {
    let raw = match doc.raw() {
        Ok(raw) => raw,
        Err(e) => return Outcome { pass: false, detail: json!({ "chart": doc.chart, "error": e.to_string() }) },
    };
    let m = &raw.matrix;
    let sym = symmetry_residual(m);
    let symmetric = sym <= tol * 1f64.max(max_abs(m));
    let ball = matches!(raw.chart, Chart::SiegelBall | Chart::JacobiBall | Chart::EtaBall);
    let margin = if ball { ball_margin(m) } else { upper_margin(m) };
    let finite = raw.vector.as_ref().map_or(true, all_finite_vec);
    let domain = if ball { "ball: I - W conj(W) > 0" } else { "upper half space: Im v > 0" };
    Outcome {
        pass: symmetric && margin > 0.0 && finite,
        detail: json!({
            "chart": raw.chart,
            "n": doc.n,
            "domain": domain,
            "symmetry_residual": sym,
            "margin": margin,
            "vector_finite": finite,
        }),
    }
}

fn check_hamiltonian(doc: &HamiltonianDoc, tol: f64) -> Outcome {
    match doc.build(tol) {
        Ok(_) => Outcome { pass: true, detail: json!({ "n": doc.n, "k": doc.k }) },
        Err(e) => Outcome { pass: false, detail: json!({ "n": doc.n, "k": doc.k, "error": e.to_string() }) },
    }
}

fn entry(source: &str, kind: &str, o: Outcome) -> (bool, Value) {
    (o.pass, json!({ "source": source, "kind": kind, "pass": o.pass, "detail": o.detail }))
}

/// Seeded fixtures: a symplectic matrix, a Hamiltonian and a ball point.
fn generated(seed: u64, n: usize, tol: f64) -> Vec<(bool, Value)> {
    let mut r = rng(seed);
    let s = to_complex(&symplectic_with(&mut r, n));
    let h = HamiltonianDoc::from_hamiltonian(&hamiltonian_with(&mut r, n, 4.0, 1.0));
    let x = jacobi_ball_point_with(&mut r, n, 0.1);
    let p = PointDoc::new(Chart::JacobiBall, Some(&x.z), x.w.matrix());
    vec![
        entry("generated:symplectic", "matrix", matrix_outcome(&s, &[Property::Symplectic], tol)),
        entry("generated:hamiltonian", "hamiltonian", check_hamiltonian(&h, tol)),
        entry("generated:point", "point", check_point(&p, tol)),
    ]
}

pub fn run(files: &[PathBuf], seed: Option<u64>, n: usize, tol: f64, out: Option<&Path>) -> Result<(), CliError> {
    let results = match (files.is_empty(), seed) {
        (false, _) => {
            let mut v = Vec::new();
            for f in files {
                let source = f.display().to_string();
                v.push(match read_document(f)? {
                    Document::Matrix(d) => entry(&source, "matrix", check_matrix(&d, tol)?),
                    Document::Point(d) => entry(&source, "point", check_point(&d, tol)),
                    Document::Hamiltonian(d) => entry(&source, "hamiltonian", check_hamiltonian(&d, tol)),
                });
            }
            v
        }
        (true, Some(seed)) => {
            if n == 0 {
                return Err(CliError::Usage("rank must be at least 1".into()));
            }
            generated(seed, n, tol)
        }
        (true, None) => return Err(CliError::Usage("check needs input files or --seed".into())),
    };
    let failures = results.iter().filter(|(p, _)| !p).count();
    let report = json!({
        "command": "check",
        "tol": tol,
        "seed": seed,
        "pass": failures == 0,
        "results": results.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
    });
    emit_json(out, &report)?;
    if failures > 0 {
        return Err(CliError::ChecksFailed(failures));
    }
    Ok(())
}
