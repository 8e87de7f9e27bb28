//! Erasure-coded storage over unidirectional ring networks.
//!
//! `n` storage nodes sit on a directed ring and each stores `α` linear
//! combinations of the `M` original symbols. A user attached to one node
//! collects the data by having upstream nodes forward symbols along the ring;
//! a failed node is rebuilt the same way. This crate builds schemes that make
//! both operations as cheap as the ring allows, plans the transfers, and
//! replays them on a simulated ring.
//!
//! * [`galois`]: prime-field arithmetic, rank, solving, cyclic windows.
//! * [`edmatrix`]: Euclidean-division matrices and the weakly MDS check.
//! * [`scheme`]: parameters, the ED and MDS constructions, validation, bounds.
//! * [`planner`]: reconstruction, repair and greedy plans, plus max-flow.
//! * [`ringsim`]: hop-by-hop execution with bandwidth accounting.
//! * [`cli`]: the `ringstore` command.
//!
//! ```
//! use ringstore::planner::{plan_reconstruction, plan_repair};
//! use ringstore::scheme::{build_ed_scheme, reconstruct_bound};
//!
//! let scheme = build_ed_scheme(4, 2, 5).unwrap();
//! assert_eq!(reconstruct_bound(scheme.params()), 9);
//! assert_eq!(plan_reconstruction(&scheme, 1).unwrap().total_bandwidth(), 9);
//! assert_eq!(plan_repair(&scheme, 2).unwrap().total_bandwidth(), 5);
//! ```

pub mod cli;
pub mod edmatrix;
pub mod galois;
pub mod planner;
pub mod ringsim;
pub mod scheme;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/ed-matrices.md")]
    mod ed_matrices {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/reconstruction.md")]
    mod reconstruction {}
    #[doc = include_str!("../../../book/src/repair.md")]
    mod repair {}
    #[doc = include_str!("../../../book/src/flow.md")]
    mod flow {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
