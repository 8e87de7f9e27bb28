//! Transmission plans for reconstruction and repair on the ring.
//!
//! Data only moves downstream: node `N_j` sends to `N_{j−1}` (indices mod
//! `n`), and the node a user is attached to hands the final payload to that
//! user. A plan lists, hop by hop, the transmitted vectors; for data `X`
//! each vector `v` stands for the transmitted symbol `X · v`.

mod flow;
mod greedy;
mod reconstruct;
mod repair;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::{solve, FieldMatrix, FieldOrder, GaloisError};
use crate::scheme::{OrdssReport, SchemeError};

pub use flow::{build_flow_graph, flow_mincut, FlowGraph, FlowNode};
pub use greedy::plan_greedy;
pub use reconstruct::plan_reconstruction;
pub use repair::plan_repair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("scheme is not an ORDSS ({0})")]
    NotOrdss(OrdssReport),
    #[error("repair needs k = {k} helpers distinct from the failed node, but n = {n}")]
    TooFewHelpers { k: usize, n: usize },
    #[error("generator columns only reach rank {rank} < M = {m_size}")]
    RankDeficient { rank: usize, m_size: usize },
    #[error("received vectors do not determine the data")]
    Undecodable,
    #[error("malformed plan file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Field(#[from] GaloisError),
}

/// One end of a hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    /// Storage node `N_i`.
    Node(usize),
    /// User `U_i`, attached to `N_i`.
    User(usize),
    /// The newcomer `N′_i` replacing a failed `N_i`.
    Substitute(usize),
}

impl Endpoint {
    pub fn index(self) -> usize {
        match self {
            Endpoint::Node(i) | Endpoint::User(i) | Endpoint::Substitute(i) => i,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Node(i) => write!(f, "N{i}"),
            Endpoint::User(i) => write!(f, "U{i}"),
            Endpoint::Substitute(i) => write!(f, "N{i}'"),
        }
    }
}

impl FromStr for Endpoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad endpoint {s:?}");
        let (ctor, rest): (fn(usize) -> Endpoint, &str) = if let Some(r) = s.strip_prefix('U') {
            (Endpoint::User, r)
        } else if let Some(r) = s.strip_prefix('N') {
            match r.strip_suffix('\'') {
                Some(r) => (Endpoint::Substitute, r),
                None => (Endpoint::Node, r),
            }
        } else {
            return Err(bad());
        };
        let i: usize = rest.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        Ok(ctor(i))
    }
}

impl Serialize for Endpoint {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Vectors sent over one ring edge (or the final edge to a user or newcomer).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hop {
    pub from: Endpoint,
    pub to: Endpoint,
    pub vectors: Vec<Vec<u32>>,
}

impl Hop {
    pub fn size(&self) -> usize {
        self.vectors.len()
    }
}

/// How a user at `user` collects everything it needs, farthest hop first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionPlan {
    pub user: usize,
    pub order: FieldOrder,
    pub m_size: usize,
    pub hops: Vec<Hop>,
}

impl ReconstructionPlan {
    pub fn total_bandwidth(&self) -> usize {
        self.hops.iter().map(Hop::size).sum()
    }

    /// Payload sizes, farthest hop first.
    pub fn payload_sizes(&self) -> Vec<usize> {
        self.hops.iter().map(Hop::size).collect()
    }

    /// Vectors on the final hop, i.e. what the user ends up holding.
    pub fn delivered(&self) -> &[Vec<u32>] {
        self.hops.last().map_or(&[], |h| h.vectors.as_slice())
    }

    pub fn to_json(&self) -> String {
        PlanFile::new(PlanKind::Reconstruct, self.user, &self.hops).to_json()
    }
}

/// How the newcomer replacing `failed` gets its exact symbols back.
///
/// The newcomer receives the hop payload `R` and recovers its stored symbols
/// as `(X·R) · decoding`. In the multi-helper case `R = T·A` for the failed
/// node's vectors `T` and the invertible `basis_change` `A`, so
/// `decoding = A⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairPlan {
    pub failed: usize,
    pub order: FieldOrder,
    pub m_size: usize,
    pub hops: Vec<Hop>,
    pub basis_change: FieldMatrix,
    pub decoding: FieldMatrix,
}

impl RepairPlan {
    pub fn total_bandwidth(&self) -> usize {
        self.hops.iter().map(Hop::size).sum()
    }

    pub fn payload_sizes(&self) -> Vec<usize> {
        self.hops.iter().map(Hop::size).collect()
    }

    pub fn delivered(&self) -> &[Vec<u32>] {
        self.hops.last().map_or(&[], |h| h.vectors.as_slice())
    }

    /// The vectors the newcomer ends up storing: `delivered · decoding`.
    pub fn restored_vectors(&self) -> Result<Vec<Vec<u32>>, PlanError> {
        let r = FieldMatrix::from_columns(self.order, self.m_size, self.delivered())?;
        Ok(r.mul(&self.decoding)?.columns().collect())
    }

    pub fn to_json(&self) -> String {
        PlanFile::new(PlanKind::Repair, self.failed, &self.hops).to_json()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanKind {
    Reconstruct,
    Repair,
}

/// Interchange form of either plan kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub kind: PlanKind,
    pub index: usize,
    pub edges: Vec<Hop>,
    pub total: usize,
}

impl PlanFile {
    fn new(kind: PlanKind, index: usize, hops: &[Hop]) -> Self {
        PlanFile {
            kind,
            index,
            edges: hops.to_vec(),
            total: hops.iter().map(Hop::size).sum(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plan serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, PlanError> {
        let file: PlanFile = serde_json::from_str(text).map_err(|e| PlanError::Malformed(e.to_string()))?;
        let sum: usize = file.edges.iter().map(Hop::size).sum();
        if sum != file.total {
            return Err(PlanError::Malformed(format!(
                "total {} disagrees with edge sizes summing to {sum}",
                file.total
            )));
        }
        Ok(file)
    }
}

/// Recovers `X` from `M` received vectors and the matching symbols `X · v`.
pub fn decode(order: FieldOrder, vectors: &[Vec<u32>], symbols: &[u32]) -> Result<Vec<u32>, PlanError> {
    let m = vectors.first().map_or(0, Vec::len);
    if symbols.len() != vectors.len() {
        return Err(PlanError::Undecodable);
    }
    // X · R = y  <=>  Rᵀ · Xᵀ = yᵀ
    let r = FieldMatrix::from_columns(order, m, vectors)?;
    if r.rank() != m {
        return Err(PlanError::Undecodable);
    }
    let y = FieldMatrix::from_columns(order, symbols.len(), &[symbols.to_vec()])?;
    let x = solve(&r.transpose(), &y)?.ok_or(PlanError::Undecodable)?;
    Ok(x.column(0))
}

fn downstream_target(user_side: Endpoint, chain: &[usize], j: usize) -> Endpoint {
    if j == 0 {
        user_side
    } else {
        Endpoint::Node(chain[j - 1])
    }
}
