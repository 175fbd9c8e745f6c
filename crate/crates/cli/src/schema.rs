//! On-disk document formats: complex entries are `{re, im}` objects, matrices
//! are row lists, points carry a chart tag.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use siegel_jacobi::domains::{
    fc, partial_cayley, EtaBallPoint, JacobiBallPoint, JacobiUpperPoint, SiegelBallPoint, SiegelUpperPoint,
};
use siegel_jacobi::dynamics::LinearHamiltonian;
use siegel_jacobi::linalg::{CMatrix, CVector};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Entry {
    fn from(x: Complex64) -> Self {
        Self { re: x.re, im: x.im }
    }
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        Complex64::new(e.re, e.im)
    }
}

pub type Rows = Vec<Vec<Entry>>;

pub fn entries(v: &CVector) -> Vec<Entry> {
    v.iter().map(|&x| x.into()).collect()
}

pub fn rows(m: &CMatrix) -> Rows {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect()).collect()
}

pub fn vector(e: &[Entry], n: usize, what: &str) -> Result<CVector, CliError> {
    if e.len() != n {
        return Err(CliError::Invariant(format!("{what} has {} entries, expected {n}", e.len())));
    }
    Ok(CVector::from_iterator(n, e.iter().map(|&x| x.into())))
}

pub fn matrix(r: &Rows, n: usize, what: &str) -> Result<CMatrix, CliError> {
    if r.len() != n || r.iter().any(|row| row.len() != n) {
        return Err(CliError::Invariant(format!("{what} must be {n}x{n}")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| r[i][j].into()))
}

/// Coordinate chart of a point document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Chart {
    SiegelBall,
    SiegelUpper,
    JacobiBall,
    JacobiUpper,
    EtaBall,
    EtaUpper,
}

impl Chart {
    pub fn tag(self) -> &'static str {
        match self {
            Chart::SiegelBall => "siegel_ball",
            Chart::SiegelUpper => "siegel_upper",
            Chart::JacobiBall => "jacobi_ball",
            Chart::JacobiUpper => "jacobi_upper",
            Chart::EtaBall => "eta_ball",
            Chart::EtaUpper => "eta_upper",
        }
    }

    /// Names of the vector and matrix components (`None` for the Siegel charts' vector).
    pub fn component_names(self) -> (Option<&'static str>, &'static str) {
        match self {
            Chart::SiegelBall => (None, "w"),
            Chart::SiegelUpper => (None, "v"),
            Chart::JacobiBall => (Some("z"), "w"),
            Chart::JacobiUpper => (Some("u"), "v"),
            Chart::EtaBall => (Some("eta"), "w"),
            Chart::EtaUpper => (Some("eta"), "v"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub chart: Chart,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Rows>,
}

/// Components of a point document before any domain validation.
pub struct RawPoint {
    pub chart: Chart,
    pub vector: Option<CVector>,
    pub matrix: CMatrix,
}

impl PointDoc {
    pub fn new(chart: Chart, vector: Option<&CVector>, matrix: &CMatrix) -> Self {
        let mut doc = Self { chart, n: matrix.nrows(), z: None, u: None, eta: None, w: None, v: None };
        let (vname, mname) = chart.component_names();
        let ve = vector.map(entries);
        match vname {
            Some("z") => doc.z = ve,
            Some("u") => doc.u = ve,
            Some(_) => doc.eta = ve,
            None => {}
        }
        if mname == "w" {
            doc.w = Some(rows(matrix));
        } else {
            doc.v = Some(rows(matrix));
        }
        doc
    }

    pub fn raw(&self) -> Result<RawPoint, CliError> {
        let (vname, mname) = self.chart.component_names();
        let slots: [(&str, bool); 5] = [
            ("z", self.z.is_some()),
            ("u", self.u.is_some()),
            ("eta", self.eta.is_some()),
            ("w", self.w.is_some()),
            ("v", self.v.is_some()),
        ];
        for (name, present) in slots {
            let wanted = Some(name) == vname || name == mname;
            if present != wanted {
                let state = if present { "unexpected" } else { "missing" };
                return Err(CliError::Invariant(format!("chart {}: {state} field {name}", self.chart.tag())));
            }
        }
        let m = if mname == "w" { self.w.as_ref() } else { self.v.as_ref() };
        let matrix = matrix(m.expect("presence checked"), self.n, mname)?;
        let vector = match vname {
            Some(name) => {
                let e = [&self.z, &self.u, &self.eta].into_iter().flatten().next().expect("presence checked");
                Some(vector(e, self.n, name)?)
            }
            None => None,
        };
        Ok(RawPoint { chart: self.chart, vector, matrix })
    }
}

/// A validated point in one of the charts.
#[derive(Debug, Clone)]
pub enum Point {
    SiegelBall(SiegelBallPoint),
    SiegelUpper(SiegelUpperPoint),
    JacobiBall(JacobiBallPoint),
    JacobiUpper(JacobiUpperPoint),
    EtaBall(EtaBallPoint),
    EtaUpper(CVector, SiegelUpperPoint),
}

impl Point {
    pub fn from_raw(raw: RawPoint) -> Result<Self, CliError> {
        let vec = || raw.vector.clone().expect("vector charts carry a vector");
        Ok(match raw.chart {
            Chart::SiegelBall => Point::SiegelBall(SiegelBallPoint::new(raw.matrix)?),
            Chart::SiegelUpper => Point::SiegelUpper(SiegelUpperPoint::new(raw.matrix)?),
            Chart::JacobiBall => Point::JacobiBall(JacobiBallPoint::new(vec(), SiegelBallPoint::new(raw.matrix)?)?),
            Chart::JacobiUpper => Point::JacobiUpper(JacobiUpperPoint::new(vec(), SiegelUpperPoint::new(raw.matrix)?)?),
            Chart::EtaBall => Point::EtaBall(EtaBallPoint::new(vec(), SiegelBallPoint::new(raw.matrix)?)?),
            Chart::EtaUpper => Point::EtaUpper(vec(), SiegelUpperPoint::new(raw.matrix)?),
        })
    }

    pub fn chart(&self) -> Chart {
        match self {
            Point::SiegelBall(_) => Chart::SiegelBall,
            Point::SiegelUpper(_) => Chart::SiegelUpper,
            Point::JacobiBall(_) => Chart::JacobiBall,
            Point::JacobiUpper(_) => Chart::JacobiUpper,
            Point::EtaBall(_) => Chart::EtaBall,
            Point::EtaUpper(..) => Chart::EtaUpper,
        }
    }

    pub fn dim(&self) -> usize {
        self.components().1.nrows()
    }

    pub fn components(&self) -> (Option<&CVector>, &CMatrix) {
        match self {
            Point::SiegelBall(w) => (None, w.matrix()),
            Point::SiegelUpper(v) => (None, v.matrix()),
            Point::JacobiBall(x) => (Some(&x.z), x.w.matrix()),
            Point::JacobiUpper(x) => (Some(&x.u), x.v.matrix()),
            Point::EtaBall(p) => (Some(&p.eta), p.w.matrix()),
            Point::EtaUpper(eta, v) => (Some(eta), v.matrix()),
        }
    }

    pub fn to_doc(&self) -> PointDoc {
        let (v, m) = self.components();
        PointDoc::new(self.chart(), v, m)
    }

    /// Image in the `(z, W)` ball chart, for charts that carry a vector part.
    pub fn to_jacobi_ball(&self) -> Result<JacobiBallPoint, CliError> {
        match self {
            Point::JacobiBall(x) => Ok(x.clone()),
            Point::EtaBall(p) => Ok(fc(p)),
            Point::JacobiUpper(x) => Ok(partial_cayley(x)?),
            Point::EtaUpper(eta, v) => Ok(partial_cayley(&siegel_jacobi::domains::fc1(eta, v)?)?),
            other => Err(CliError::Invariant(format!(
                "chart {} has no vector part; expected jacobi_ball, jacobi_upper, eta_ball or eta_upper",
                other.chart().tag()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianDoc {
    pub n: usize,
    pub k: f64,
    pub eps: Vec<Entry>,
    pub eps0: Rows,
    pub epsm: Rows,
    pub epsp: Rows,
}

impl HamiltonianDoc {
    pub fn from_hamiltonian(h: &LinearHamiltonian) -> Self {
        Self {
            n: h.dim(),
            k: h.k(),
            eps: entries(h.eps()),
            eps0: rows(h.eps0()),
            epsm: rows(h.eps_minus()),
            epsp: rows(h.eps_plus()),
        }
    }

    /// Hermiticity is validated at tolerance `tol`, never repaired.
    pub fn build(&self, tol: f64) -> Result<LinearHamiltonian, CliError> {
        let n = self.n;
        Ok(LinearHamiltonian::with_tolerance(
            vector(&self.eps, n, "eps")?,
            matrix(&self.eps0, n, "eps0")?,
            matrix(&self.epsm, n, "epsm")?,
            matrix(&self.epsp, n, "epsp")?,
            self.k,
            tol,
        )?)
    }
}

/// Structural property a matrix document is expected to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Symmetric,
    Hermitian,
    Symplectic,
    Hamiltonian,
    SpComplex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub n: usize,
    pub rows: Rows,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect: Vec<Property>,
}

/// Any input accepted by `check`, classified by its distinguishing field.
pub enum Document {
    Matrix(MatrixDoc),
    Point(PointDoc),
    Hamiltonian(HamiltonianDoc),
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, value: serde_json::Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Parse { path: path.display().to_string(), msg: e.to_string() })
}

pub fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse { path: path.display().to_string(), msg: e.to_string() })?;
    let has = |key: &str| value.get(key).is_some();
    if has("chart") {
        Ok(Document::Point(parse(path, value)?))
    } else if has("eps") {
        Ok(Document::Hamiltonian(parse(path, value)?))
    } else if has("rows") {
        Ok(Document::Matrix(parse(path, value)?))
    } else {
        Err(CliError::Parse {
            path: path.display().to_string(),
            msg: "not a point (chart), Hamiltonian (eps) or matrix (rows) document".into(),
        })
    }
}

pub fn read_point(path: &Path) -> Result<Point, CliError> {
    match read_document(path)? {
        Document::Point(doc) => Point::from_raw(doc.raw()?),
        _ => Err(CliError::Parse { path: path.display().to_string(), msg: "expected a point document".into() }),
    }
}

pub fn read_hamiltonian(path: &Path, tol: f64) -> Result<LinearHamiltonian, CliError> {
    match read_document(path)? {
        Document::Hamiltonian(doc) => doc.build(tol),
        _ => Err(CliError::Parse { path: path.display().to_string(), msg: "expected a Hamiltonian document".into() }),
    }
}
