//! JSON result document written by `separate` and read by `verify`.
//!
//! Rationals are strings `p/q`. Vertex sets are sorted id lists.

use cheapsep::engine::params::LevelParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub separator: Vec<usize>,
    pub outliers: Vec<usize>,
    pub nonoutlier_cost: String,
    /// `w` of each component of `G - separator`, listed by smallest vertex.
    pub component_weights: Vec<String>,
    pub schedule: Vec<LevelDoc>,
    pub trace_path: Option<String>,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub t: u64,
    pub m: u64,
    pub l: u64,
    /// Decimal string; may exceed 64 bits.
    pub b: String,
    /// Decimal string; may exceed 64 bits.
    pub n: String,
    pub r: u64,
    pub omega_hat: u64,
}

impl From<&LevelParams> for LevelDoc {
    fn from(p: &LevelParams) -> Self {
        LevelDoc {
            t: p.t,
            m: p.engine_m,
            l: p.l,
            b: p.b.to_string(),
            n: p.n.to_string(),
            r: p.r,
            omega_hat: p.omega_hat,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub weights: String,
    pub costs: String,
    pub t: u64,
    pub a: usize,
    pub ordering: String,
    pub restarts: usize,
    /// `ρ(G)/t`, the cheapness budget.
    pub budget: String,
}
