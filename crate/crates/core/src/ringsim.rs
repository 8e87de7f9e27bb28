//! Hop-by-hop execution of plans on the ring.
//!
//! Every node only works with what it holds: its own stored symbols and the
//! symbols it has received on the current operation. Each transmitted
//! symbol is recomputed from that local knowledge, so a plan that asks a node
//! for something it cannot derive fails loudly instead of being simulated
//! from the global data vector.
//!
//! Time is logical: each hop takes one tick. Payload digests are 64-bit
//! FNV-1a over the payload's symbol values, each written as a 4-byte
//! little-endian integer, in payload order.

use std::collections::BTreeMap;
use std::hash::Hasher;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::{solve, FieldMatrix, GaloisError};
use crate::planner::{decode, plan_reconstruction, plan_repair, Endpoint, Hop, PlanError, ReconstructionPlan};
use crate::scheme::{DataVector, Scheme, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("node N{0} is failed; its user cannot be served before repair")]
    RequestAtFailedNode(usize),
    #[error("reconstruction for U{user} needs failed node N{failed}")]
    ChainThroughFailedNode { user: usize, failed: usize },
    #[error("node N{0} is alive; nothing to repair")]
    RepairAliveNode(usize),
    #[error("node N{pending} is still awaiting repair; N{requested} cannot fail concurrently")]
    ConcurrentFailure { pending: usize, requested: usize },
    #[error("node index {index} is outside 1..={n}")]
    NodeIndex { index: usize, n: usize },
    #[error("hop {from} -> {to} runs against the ring direction")]
    DirectionViolation { from: Endpoint, to: Endpoint },
    #[error("{node} cannot derive a transmitted vector from what it holds")]
    NotComputable { node: Endpoint },
    #[error("U{0} decoded the wrong data")]
    DecodeMismatch(usize),
    #[error("substitute N{0}' does not hold the original symbols")]
    RepairMismatch(usize),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Field(#[from] GaloisError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    UserRequest { node: usize },
    NodeFailure { node: usize },
    Repair { node: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Alive,
    Failed,
    Substitute,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub tick: u64,
    pub from: Endpoint,
    pub to: Endpoint,
    pub symbols: usize,
    pub digest: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub per_link: BTreeMap<String, usize>,
}

#[derive(Serialize)]
struct TraceSummary<'a> {
    per_link: &'a BTreeMap<String, usize>,
    total: usize,
}

impl Trace {
    pub fn total(&self) -> usize {
        self.records.iter().map(|r| r.symbols).sum()
    }

    fn push(&mut self, record: TraceRecord) {
        *self
            .per_link
            .entry(format!("{}->{}", record.from, record.to))
            .or_default() += record.symbols;
        self.records.push(record);
    }

    /// One line per hop: `tick <t>: <from> -> <to>: <c> symbols`.
    pub fn to_text(&self) -> String {
        self.records
            .iter()
            .map(|r| format!("tick {}: {} -> {}: {} symbols\n", r.tick, r.from, r.to, r.symbols))
            .collect()
    }

    /// `{"per_link": {...}, "total": n}`
    pub fn summary_json(&self) -> String {
        serde_json::to_string(&TraceSummary {
            per_link: &self.per_link,
            total: self.total(),
        })
        .expect("summary serializes")
    }
}

pub fn payload_digest(symbols: &[u32]) -> u64 {
    let mut h = FnvHasher::default();
    for &s in symbols {
        h.write(&s.to_le_bytes());
    }
    h.finish()
}

/// Ring of storage nodes holding real symbols for one data vector.
#[derive(Debug, Clone)]
pub struct RingState {
    scheme: Scheme,
    data: DataVector,
    stores: Vec<Vec<u32>>,
    status: Vec<NodeStatus>,
    tick: u64,
}

impl RingState {
    pub fn new(scheme: Scheme, data: DataVector) -> Result<Self, SimError> {
        let n = scheme.params().n();
        let stores = (1..=n)
            .map(|i| scheme.node_values(&data, i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RingState {
            scheme,
            data,
            stores,
            status: vec![NodeStatus::Alive; n],
            tick: 0,
        })
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn stores(&self) -> &[Vec<u32>] {
        &self.stores
    }

    pub fn status(&self) -> &[NodeStatus] {
        &self.status
    }

    pub fn run(&mut self, events: &[Event]) -> Result<Trace, SimError> {
        let mut trace = Trace::default();
        for &event in events {
            self.apply(event, &mut trace)?;
        }
        Ok(trace)
    }

    fn check_node(&self, index: usize) -> Result<(), SimError> {
        let n = self.status.len();
        if index == 0 || index > n {
            Err(SimError::NodeIndex { index, n })
        } else {
            Ok(())
        }
    }

    fn failed_node(&self) -> Option<usize> {
        self.status.iter().position(|&s| s == NodeStatus::Failed).map(|i| i + 1)
    }

    pub fn apply(&mut self, event: Event, trace: &mut Trace) -> Result<(), SimError> {
        match event {
            Event::UserRequest { node } => self.serve(node, trace),
            Event::NodeFailure { node } => {
                self.check_node(node)?;
                if let Some(pending) = self.failed_node() {
                    return Err(SimError::ConcurrentFailure {
                        pending,
                        requested: node,
                    });
                }
                self.status[node - 1] = NodeStatus::Failed;
                self.stores[node - 1].clear();
                Ok(())
            }
            Event::Repair { node } => self.repair(node, trace),
        }
    }

    fn serve(&mut self, user: usize, trace: &mut Trace) -> Result<(), SimError> {
        self.check_node(user)?;
        if self.status[user - 1] == NodeStatus::Failed {
            return Err(SimError::RequestAtFailedNode(user));
        }
        let plan = plan_reconstruction(&self.scheme, user)?;
        self.execute_reconstruction(&plan, trace)
    }

    /// Runs a reconstruction plan produced by any planner and checks the
    /// user decodes the stored data.
    pub fn run_reconstruction(&mut self, plan: &ReconstructionPlan) -> Result<Trace, SimError> {
        let mut trace = Trace::default();
        self.check_node(plan.user)?;
        if self.status[plan.user - 1] == NodeStatus::Failed {
            return Err(SimError::RequestAtFailedNode(plan.user));
        }
        self.execute_reconstruction(plan, &mut trace)?;
        Ok(trace)
    }

    fn execute_reconstruction(&mut self, plan: &ReconstructionPlan, trace: &mut Trace) -> Result<(), SimError> {
        let user = plan.user;
        if let Some(failed) = self.failed_node() {
            if plan.hops.iter().any(|h| h.from == Endpoint::Node(failed)) {
                return Err(SimError::ChainThroughFailedNode { user, failed });
            }
        }
        let (vectors, symbols) = self.execute(&plan.hops, trace)?;
        let x = decode(self.scheme.order(), &vectors, &symbols)?;
        if x != self.data.coords() {
            return Err(SimError::DecodeMismatch(user));
        }
        Ok(())
    }

    fn repair(&mut self, node: usize, trace: &mut Trace) -> Result<(), SimError> {
        self.check_node(node)?;
        if self.status[node - 1] != NodeStatus::Failed {
            return Err(SimError::RepairAliveNode(node));
        }
        let plan = plan_repair(&self.scheme, node)?;
        let (_, symbols) = self.execute(&plan.hops, trace)?;
        let received = FieldMatrix::from_rows(self.scheme.order(), &[symbols])?;
        let restored = received.mul(&plan.decoding)?.row(0).to_vec();
        if restored != self.scheme.node_values(&self.data, node)? {
            return Err(SimError::RepairMismatch(node));
        }
        self.stores[node - 1] = restored;
        self.status[node - 1] = NodeStatus::Substitute;
        Ok(())
    }

    fn check_direction(&self, hop: &Hop) -> Result<(), SimError> {
        let n = self.status.len();
        let ok = match (hop.from, hop.to) {
            (Endpoint::Node(j), Endpoint::Node(i)) | (Endpoint::Node(j), Endpoint::Substitute(i)) => {
                i == (j + n - 2) % n + 1
            }
            (Endpoint::Node(j), Endpoint::User(i)) => i == j,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(SimError::DirectionViolation {
                from: hop.from,
                to: hop.to,
            })
        }
    }

    /// Runs a chain of hops; returns what the last receiver holds.
    fn execute(&mut self, hops: &[Hop], trace: &mut Trace) -> Result<(Vec<Vec<u32>>, Vec<u32>), SimError> {
        let order = self.scheme.order();
        let m = self.scheme.params().m_size();
        let mut inbox: (Vec<Vec<u32>>, Vec<u32>) = (Vec::new(), Vec::new());
        for hop in hops {
            self.check_direction(hop)?;
            let Endpoint::Node(sender) = hop.from else {
                unreachable!("direction check admits only storage senders")
            };
            let mut known_vectors = self.scheme.node_vectors(sender)?;
            let mut known_symbols = self.stores[sender - 1].clone();
            known_vectors.extend(inbox.0.iter().cloned());
            known_symbols.extend(inbox.1.iter().copied());

            let knowledge = FieldMatrix::from_columns(order, m, &known_vectors)?;
            let wanted = FieldMatrix::from_columns(order, m, &hop.vectors)?;
            let coeffs = solve(&knowledge, &wanted)?.ok_or(SimError::NotComputable { node: hop.from })?;
            let held = FieldMatrix::from_rows(order, &[known_symbols])?;
            let sent = held.mul(&coeffs)?.row(0).to_vec();

            self.tick += 1;
            trace.push(TraceRecord {
                tick: self.tick,
                from: hop.from,
                to: hop.to,
                symbols: sent.len(),
                digest: payload_digest(&sent),
            });
            inbox = (hop.vectors.clone(), sent);
        }
        Ok(inbox)
    }
}

/// Runs `events` against a fresh ring storing `x` under `s`.
pub fn simulate(s: &Scheme, x: &DataVector, events: &[Event]) -> Result<Trace, SimError> {
    RingState::new(s.clone(), x.clone())?.run(events)
}
