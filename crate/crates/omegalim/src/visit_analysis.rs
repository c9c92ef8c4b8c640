//! The visit set of an orbit: which partition blocks the iterate sequence
//! enters infinitely often, computed exactly from the orbit descriptor, plus
//! the intersection trend of chosen blocks along a refinement chain.

use std::fmt;

use thiserror::Error;

use crate::chains::RefinementChain;
use crate::partitions::{Partition, PartitionError};
use crate::set_algebra::{StateSet, UPSet};
use crate::state_space::{MapDescriptor, OrbitTail, StateSpaceError};
use crate::State;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VisitError {
    #[error(transparent)]
    Space(#[from] StateSpaceError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("partition lives on {partition} but the map acts on {map}")]
    SpaceMismatch { partition: String, map: String },
    #[error("selected block {block} at chain position {position} is not in the visit set there")]
    InvalidSelection { position: usize, block: usize },
    #[error("explicit selection has {got} entries for {want} chain positions")]
    SelectionLength { got: usize, want: usize },
}

/// The blocks of one partition that an orbit visits infinitely often.
/// Guaranteed nonempty: a finite partition always has such a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitSet {
    point: State,
    block_ids: Vec<usize>,
}

impl VisitSet {
    pub fn point(&self) -> State {
        self.point
    }

    /// IDs of the infinitely visited blocks, ascending.
    pub fn block_ids(&self) -> &[usize] {
        &self.block_ids
    }

    /// The multiplicity `m`: how many blocks are visited infinitely often.
    pub fn count(&self) -> usize {
        self.block_ids.len()
    }

    pub fn contains(&self, block_id: usize) -> bool {
        self.block_ids.binary_search(&block_id).is_ok()
    }

    /// Least block ID in the visit set (the canonical tie-break choice).
    pub fn least(&self) -> usize {
        self.block_ids[0]
    }
}

/// Does the arithmetic progression `{first + k*stride}` meet the periodic
/// tail of `block` infinitely often? Equivalent to some residue of the block
/// agreeing with `first` modulo `gcd(stride, period)`.
fn progression_meets_tail(block: &UPSet, first: u64, stride: u64) -> bool {
    let g = num_integer::gcd(stride, block.period());
    block.residues().iter().any(|&r| r % g == first % g)
}

/// The visit set of `x` under `map`, relative to `partition`: exactly the
/// blocks containing infinitely many iterates `T^n(x)`, `n >= 1`.
///
/// Orbits that fall into a cycle visit a block infinitely often iff the block
/// contains a cycle state; orbits running along an arithmetic progression
/// visit a block infinitely often iff the progression meets the block's
/// periodic tail. Transient states never contribute.
pub fn delta(partition: &Partition, map: &MapDescriptor, x: State) -> Result<VisitSet, VisitError> {
    if partition.space() != map.space() {
        return Err(VisitError::SpaceMismatch {
            partition: partition.space().to_string(),
            map: map.space().to_string(),
        });
    }
    if !partition.space().contains(x) {
        return Err(PartitionError::PointOutsideSpace {
            state: x,
            space: partition.space().to_string(),
        }
        .into());
    }
    let orbit = map.orbit_descriptor(x)?;
    let block_ids: Vec<usize> = match orbit.tail() {
        OrbitTail::Cycle(cycle) => partition
            .blocks()
            .iter()
            .enumerate()
            .filter(|(_, block)| {
                cycle
                    .iter()
                    .any(|&s| block.member(s).expect("cycle stays in the space"))
            })
            .map(|(id, _)| id)
            .collect(),
        OrbitTail::Arithmetic { first, stride } => partition
            .blocks()
            .iter()
            .enumerate()
            .filter(|(_, block)| match block {
                StateSet::Nat(u) => progression_meets_tail(u, *first, *stride),
                StateSet::Finite(_) => {
                    unreachable!("arithmetic tails only arise on the nat backend")
                }
            })
            .map(|(id, _)| id)
            .collect(),
    };
    assert!(
        !block_ids.is_empty(),
        "some block of a finite partition recurs infinitely often"
    );
    Ok(VisitSet {
        point: x,
        block_ids,
    })
}

/// How to pick one visited block per chain position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    /// Least block ID of each visit set.
    LeastBlock,
    /// Explicit block ID per chain position.
    Explicit(Vec<usize>),
}

/// Trend of the prefix intersections of the chosen blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectionVerdict {
    /// Some finite prefix already intersects to the empty set.
    EmptyAtDepth { depth: usize },
    /// The intersections stopped shrinking at `since` and are nonempty.
    NonemptyStabilized { since: usize },
    /// Strictly increasing minima all the way down: the full intersection is
    /// empty although every finite prefix is not.
    EmptyInTheLimit,
    /// Still strictly shrinking with no monotone minima pattern; undetermined
    /// at this depth.
    StillShrinking,
}

impl fmt::Display for IntersectionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntersectionVerdict::EmptyAtDepth { depth } => {
                write!(f, "empty at finite depth {depth}")
            }
            IntersectionVerdict::NonemptyStabilized { since } => {
                write!(f, "nonempty (stabilized at position {since})")
            }
            IntersectionVerdict::EmptyInTheLimit => {
                write!(f, "empty in the limit (witnessed by unbounded minima)")
            }
            IntersectionVerdict::StillShrinking => write!(f, "still shrinking (undetermined)"),
        }
    }
}

/// Prefix intersections of one chosen visited block per chain position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionReport {
    /// `(position label, chosen block id)` per prefix position.
    pub chosen: Vec<(String, usize)>,
    /// Least element of each prefix intersection.
    pub minima: Vec<Option<State>>,
    /// The last prefix intersection.
    pub final_set: StateSet,
    pub verdict: IntersectionVerdict,
}

/// Intersects chosen visited blocks along the first `depth + 1` positions of
/// a chain and classifies the trend of the prefix intersections.
pub fn chain_block_intersection(
    chain: &RefinementChain,
    map: &MapDescriptor,
    x: State,
    selection: &Selection,
    depth: usize,
) -> Result<IntersectionReport, VisitError> {
    let positions = depth.min(chain.len() - 1) + 1;
    if let Selection::Explicit(ids) = selection {
        if ids.len() != positions {
            return Err(VisitError::SelectionLength {
                got: ids.len(),
                want: positions,
            });
        }
    }

    let mut chosen = Vec::with_capacity(positions);
    let mut sets: Vec<StateSet> = Vec::with_capacity(positions);
    let mut minima = Vec::with_capacity(positions);
    let mut running: Option<StateSet> = None;

    for position in 0..positions {
        let visits = delta(chain.partition(position), map, x)?;
        let block = match selection {
            Selection::LeastBlock => visits.least(),
            Selection::Explicit(ids) => {
                let id = ids[position];
                if !visits.contains(id) {
                    return Err(VisitError::InvalidSelection {
                        position,
                        block: id,
                    });
                }
                id
            }
        };
        chosen.push((chain.index().label(position), block));
        let block_set = chain.partition(position).block(block);
        let next = match &running {
            None => block_set.clone(),
            Some(acc) => acc.intersect(block_set).expect("chain shares one space"),
        };
        minima.push(next.min_element());
        sets.push(next.clone());
        running = Some(next);
    }

    let final_set = sets.last().expect("at least one position").clone();
    let last = sets.len() - 1;
    let verdict = if final_set.is_empty() {
        let depth = sets
            .iter()
            .position(StateSet::is_empty)
            .expect("final set is empty");
        IntersectionVerdict::EmptyAtDepth { depth }
    } else {
        // prefix intersections only shrink, so the first prefix equal to the
        // final one marks the stabilization point
        let since = sets
            .iter()
            .position(|s| s == &final_set)
            .expect("final set present");
        if since < last {
            IntersectionVerdict::NonemptyStabilized { since }
        } else if minima.len() >= 2
            && minima.windows(2).all(|w| match (w[0], w[1]) {
                (Some(a), Some(b)) => a < b,
                _ => false,
            })
        {
            IntersectionVerdict::EmptyInTheLimit
        } else {
            IntersectionVerdict::StillShrinking
        }
    };

    Ok(IntersectionReport {
        chosen,
        minima,
        final_set,
        verdict,
    })
}
