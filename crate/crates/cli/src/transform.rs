//! `transform`: coordinate changes between charts.

use std::path::Path;

use siegel_jacobi::domains::{cayley, cayley_inv, fc, fc1, fc1_inv, fc_inv, partial_cayley, partial_cayley_inv};

use crate::error::CliError;
use crate::output::emit_json;
use crate::schema::{read_point, Chart, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Transform {
    Cayley,
    CayleyInv,
    PartialCayley,
    PartialCayleyInv,
    Fc,
    FcInv,
    Fc1,
    Fc1Inv,
}

impl Transform {
    pub fn source(self) -> Chart {
        match self {
            Transform::Cayley => Chart::SiegelUpper,
            Transform::CayleyInv => Chart::SiegelBall,
            Transform::PartialCayley => Chart::JacobiUpper,
            Transform::PartialCayleyInv => Chart::JacobiBall,
            Transform::Fc => Chart::EtaBall,
            Transform::FcInv => Chart::JacobiBall,
            Transform::Fc1 => Chart::EtaUpper,
            Transform::Fc1Inv => Chart::JacobiUpper,
        }
    }

    pub fn apply(self, p: &Point) -> Result<Point, CliError> {
        Ok(match (self, p) {
            (Transform::Cayley, Point::SiegelUpper(v)) => Point::SiegelBall(cayley(v)?),
            (Transform::CayleyInv, Point::SiegelBall(w)) => Point::SiegelUpper(cayley_inv(w)?),
            (Transform::PartialCayley, Point::JacobiUpper(x)) => Point::JacobiBall(partial_cayley(x)?),
            (Transform::PartialCayleyInv, Point::JacobiBall(x)) => Point::JacobiUpper(partial_cayley_inv(x)?),
            (Transform::Fc, Point::EtaBall(q)) => Point::JacobiBall(fc(q)),
            (Transform::FcInv, Point::JacobiBall(x)) => Point::EtaBall(fc_inv(x)?),
            (Transform::Fc1, Point::EtaUpper(eta, v)) => Point::JacobiUpper(fc1(eta, v)?),
            (Transform::Fc1Inv, Point::JacobiUpper(x)) => Point::EtaUpper(fc1_inv(x)?, x.v.clone()),
            (t, p) => {
                return Err(CliError::Invariant(format!(
                    "chart mismatch: transform expects {}, point is {}",
                    t.source().tag(),
                    p.chart().tag()
                )))
            }
        })
    }
}

pub fn run(transform: Transform, input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let p = read_point(input)?;
    emit_json(out, &transform.apply(&p)?.to_doc())
}
