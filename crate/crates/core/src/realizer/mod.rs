//! Numerical realization of combinatorial candidates as acute spherical
//! triangulations of a lune, plus a strict certificate checker.
//!
//! Pole A sits at the north pole, side A on the meridian of longitude 0 and
//! side B on the meridian of longitude `delta`, so the lune interior is the
//! longitude range `(0, delta)` and faces run counter-clockwise seen from
//! outside the sphere.

mod penalty;
mod solve;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::CombError;
use crate::sphere::SpherePoint;

pub use penalty::{penalty, PenaltyBreakdown, PenaltyWeights};
pub use solve::{
    heuristic_layout, initialize, search_order, solve, CandidateReport, DeltaMode,
    FeasibilityReport, SearchReport, SolverConfig, Status,
};
pub use verify::{verify_realization, Element, VerificationReport, Violation, ViolationCode};

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error("candidate fails constraints: {0}")]
    InvalidCandidate(String),
    #[error("realization does not match the subdivision: {0}")]
    ParameterMismatch(String),
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error("invalid realization JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Vertex positions of a subdivided lune with angle `delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub delta: f64,
    /// Indexed by vertex id.
    pub positions: Vec<SpherePoint>,
}

/// JSON form; positions are keyed by vertex id and kept as raw vectors so
/// that a damaged certificate is reported rather than silently renormalised.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationJson {
    pub delta: f64,
    pub positions: BTreeMap<usize, [f64; 3]>,
    pub candidate_code: String,
}

impl Realization {
    pub fn to_json(&self, candidate_code: &[u8]) -> RealizationJson {
        RealizationJson {
            delta: self.delta,
            positions: self
                .positions
                .iter()
                .map(|p| p.vec().to_array())
                .enumerate()
                .collect(),
            candidate_code: hex::encode(candidate_code),
        }
    }

    pub fn from_json(json: &RealizationJson) -> Result<Self, RealizeError> {
        let n = json.positions.len();
        if json.positions.keys().copied().ne(0..n) {
            return Err(RealizeError::ParameterMismatch(
                "vertex ids must be 0..n".into(),
            ));
        }
        let positions = json
            .positions
            .iter()
            .map(|(&v, &[x, y, z])| {
                SpherePoint::new(x, y, z).or_else(|_| {
                    let n = (x * x + y * y + z * z).sqrt();
                    if (n - 1.0).abs() <= 1e-9 {
                        Ok(SpherePoint::from_vec([x, y, z].into()).expect("non-zero"))
                    } else {
                        Err(RealizeError::ParameterMismatch(format!(
                            "vertex {v} has norm {n}, not a unit vector"
                        )))
                    }
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Realization {
            delta: json.delta,
            positions,
        })
    }
}
