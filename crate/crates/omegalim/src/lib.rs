//! Exact orbit analysis over finite partitions.
//!
//! Given a self-map of a state space and a finite partition of that space,
//! this crate computes the set of blocks an orbit visits infinitely often,
//! manipulates the refinement order on partitions (projections, joins,
//! monotone chains over index posets), and constructs and enumerates the
//! threads of the induced inverse systems of visit sets.
//!
//! Two backends are supported end to end: explicit finite spaces, where sets
//! are bit vectors and maps are image tables, and the naturals, where sets are
//! ultimately periodic and maps are drawn from a small symbolic class. All
//! computations are exact; nothing is sampled or approximated.

pub mod chains;
pub mod config;
pub mod inverse_limit;
pub mod partitions;
pub mod report;
pub mod runner;
pub mod sampling;
pub mod scenarios;
pub mod set_algebra;
pub mod state_space;
pub mod visit_analysis;

/// A point of a state space. Finite backends use `0..size`; the symbolic
/// backend uses arbitrary naturals.
pub type State = u64;

pub use chains::{FilterProxy, IndexPoset, RefinementChain};
pub use inverse_limit::{build_system, FiniteInverseSystem, InverseSystem, Thread};
pub use partitions::{join, psi, refines, Partition, PartitionError, ProjectionMap};
pub use set_algebra::{FiniteSet, SetError, StateSet, UPSet};
pub use state_space::{
    MapDescriptor, OrbitDescriptor, OrbitTail, StateSpace, StateSpaceError, TailMap,
};
pub use visit_analysis::{delta, VisitSet};
