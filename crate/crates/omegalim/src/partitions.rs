//! Finite partitions of a state space, the refinement partial order, the
//! block projection maps it induces, and the join (coarsest common
//! refinement).
//!
//! Partitions are canonical: blocks are sorted by least element, so block IDs
//! are stable across runs and equality is plain structural equality.

use std::fmt;

use thiserror::Error;

use crate::set_algebra::StateSet;
use crate::state_space::StateSpace;
use crate::State;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("block {index} is empty")]
    EmptyBlock { index: usize },
    #[error("blocks {first} and {second} overlap (witness element {witness})")]
    Overlap {
        first: usize,
        second: usize,
        witness: State,
    },
    #[error("blocks do not cover the space (witness element {witness})")]
    Uncovered { witness: State },
    #[error("block {index} does not belong to the space {space}")]
    BlockSpaceMismatch { index: usize, space: String },
    #[error("partitions live on different spaces: {0} vs {1}")]
    SpaceMismatch(String, String),
    #[error("not a refinement: fine block {fine_block} is not contained in any coarse block")]
    NotARefinement { fine_block: usize },
    #[error("projection maps do not compose: inner target differs from outer source")]
    CompositionMismatch,
    #[error("point {state} lies outside the space {space}")]
    PointOutsideSpace { state: State, space: String },
}

/// A finite partition: disjoint nonempty blocks covering the space, in
/// canonical order (ascending least element). Block IDs are list positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    space: StateSpace,
    blocks: Vec<StateSet>,
}

impl Partition {
    /// Validates candidate blocks and returns the canonical partition.
    pub fn new(space: StateSpace, blocks: Vec<StateSet>) -> Result<Self, PartitionError> {
        for (index, block) in blocks.iter().enumerate() {
            let fits = match (&space, block) {
                (StateSpace::Finite { size }, StateSet::Finite(s)) => s.size() == *size,
                (StateSpace::Nat, StateSet::Nat(_)) => true,
                _ => false,
            };
            if !fits {
                return Err(PartitionError::BlockSpaceMismatch {
                    index,
                    space: space.to_string(),
                });
            }
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock { index });
            }
        }
        for (i, a) in blocks.iter().enumerate() {
            for (j, b) in blocks.iter().enumerate().skip(i + 1) {
                let common = a.intersect(b).expect("blocks share the space backend");
                if let Some(witness) = common.min_element() {
                    return Err(PartitionError::Overlap {
                        first: i,
                        second: j,
                        witness,
                    });
                }
            }
        }
        let mut union = space.empty_set();
        for block in &blocks {
            union = union.union(block).expect("blocks share the space backend");
        }
        if let Some(witness) = union.complement().min_element() {
            return Err(PartitionError::Uncovered { witness });
        }
        let mut blocks = blocks;
        blocks.sort_by_key(|b| b.min_element().expect("blocks are nonempty"));
        Ok(Partition { space, blocks })
    }

    /// The one-block partition `{X}`.
    pub fn trivial(space: StateSpace) -> Self {
        Partition {
            space,
            blocks: vec![space.full_set()],
        }
    }

    pub fn space(&self) -> StateSpace {
        self.space
    }

    pub fn blocks(&self) -> &[StateSet] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &StateSet {
        &self.blocks[id]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a partition has at least one block
    }

    /// ID of the unique block containing `x`.
    pub fn block_containing(&self, x: State) -> Result<usize, PartitionError> {
        if !self.space.contains(x) {
            return Err(PartitionError::PointOutsideSpace {
                state: x,
                space: self.space.to_string(),
            });
        }
        Ok(self
            .blocks
            .iter()
            .position(|b| b.member(x).expect("x is in the space"))
            .expect("partition covers the space"))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{ ")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, " }}")
    }
}

fn require_same_space(a: &Partition, b: &Partition) -> Result<(), PartitionError> {
    if a.space != b.space {
        return Err(PartitionError::SpaceMismatch(
            a.space.to_string(),
            b.space.to_string(),
        ));
    }
    Ok(())
}

/// Whether `fine` refines `coarse`: every block of `fine` is contained in some
/// block of `coarse`. Containment is decided by `A' ∩ A = A'`.
pub fn refines(coarse: &Partition, fine: &Partition) -> Result<bool, PartitionError> {
    require_same_space(coarse, fine)?;
    'outer: for fine_block in &fine.blocks {
        for coarse_block in &coarse.blocks {
            if fine_block.is_subset(coarse_block).expect("same space") {
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// The unique map sending each block of the finer partition to the block of
/// the coarser one that contains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionMap {
    source: Partition,
    target: Partition,
    table: Vec<usize>,
}

impl ProjectionMap {
    pub fn source(&self) -> &Partition {
        &self.source
    }

    pub fn target(&self) -> &Partition {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Image of a source block ID.
    pub fn map(&self, source_block: usize) -> usize {
        self.table[source_block]
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.table.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ inner`: apply `inner` first. `inner` must land in `self`'s
    /// source partition.
    pub fn compose(&self, inner: &ProjectionMap) -> Result<ProjectionMap, PartitionError> {
        if inner.target != self.source {
            return Err(PartitionError::CompositionMismatch);
        }
        Ok(ProjectionMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            table: inner.table.iter().map(|&mid| self.table[mid]).collect(),
        })
    }
}

/// The projection from a finer partition onto a coarser one. Fails with
/// `NotARefinement` when some fine block is split across coarse blocks.
pub fn psi(fine: &Partition, coarse: &Partition) -> Result<ProjectionMap, PartitionError> {
    require_same_space(fine, coarse)?;
    let mut table = Vec::with_capacity(fine.len());
    for (fine_id, fine_block) in fine.blocks.iter().enumerate() {
        let target = coarse
            .blocks
            .iter()
            .position(|c| fine_block.is_subset(c).expect("same space"))
            .ok_or(PartitionError::NotARefinement {
                fine_block: fine_id,
            })?;
        table.push(target);
    }
    Ok(ProjectionMap {
        source: fine.clone(),
        target: coarse.clone(),
        table,
    })
}

/// Coarsest common refinement: all nonempty pairwise block intersections.
pub fn join(a: &Partition, b: &Partition) -> Result<Partition, PartitionError> {
    require_same_space(a, b)?;
    let mut blocks = Vec::new();
    for block_a in &a.blocks {
        for block_b in &b.blocks {
            let common = block_a.intersect(block_b).expect("same space");
            if !common.is_empty() {
                blocks.push(common);
            }
        }
    }
    Partition::new(a.space, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set_algebra::{FiniteSet, UPSet};
    use proptest::prelude::*;

    fn nat(space_sets: Vec<UPSet>) -> Result<Partition, PartitionError> {
        Partition::new(
            StateSpace::Nat,
            space_sets.into_iter().map(StateSet::Nat).collect(),
        )
    }

    fn evens_odds() -> Partition {
        nat(vec![UPSet::residue_class(0, 2), UPSet::residue_class(1, 2)]).unwrap()
    }

    /// `{ {0}, .., {depth-1}, [depth, ∞) }`
    fn segments(depth: u64) -> Partition {
        let mut blocks: Vec<UPSet> = (0..depth).map(UPSet::singleton).collect();
        blocks.push(UPSet::ray(depth));
        nat(blocks).unwrap()
    }

    #[test]
    fn parity_partition_is_valid() {
        assert_eq!(evens_odds().len(), 2);
    }

    #[test]
    fn segment_partition_is_valid() {
        let p = segments(2);
        assert_eq!(p.len(), 3);
        assert_eq!(p.block(0).to_string(), "finite{0}");
        assert_eq!(p.block(2).to_string(), "ap(2, 1)");
    }

    #[test]
    fn overlap_reports_least_witness() {
        let err = nat(vec![UPSet::residue_class(0, 2), UPSet::ray(4)]).unwrap_err();
        assert_eq!(
            err,
            PartitionError::Overlap {
                first: 0,
                second: 1,
                witness: 4
            }
        );
    }

    #[test]
    fn empty_block_rejected() {
        let err = nat(vec![UPSet::all(), UPSet::empty()]).unwrap_err();
        assert_eq!(err, PartitionError::EmptyBlock { index: 1 });
    }

    #[test]
    fn uncovered_reports_least_witness() {
        let err = nat(vec![UPSet::residue_class(0, 2)]).unwrap_err();
        assert_eq!(err, PartitionError::Uncovered { witness: 1 });
    }

    #[test]
    fn trivial_partition_is_coarsest() {
        let trivial = Partition::trivial(StateSpace::Nat);
        assert!(refines(&trivial, &evens_odds()).unwrap());
        assert!(refines(&trivial, &segments(5)).unwrap());
    }

    #[test]
    fn segment_chain_refines() {
        assert!(refines(&segments(1), &segments(2)).unwrap());
        assert!(!refines(&segments(2), &segments(1)).unwrap());
    }

    #[test]
    fn parity_does_not_coarsen_segments() {
        // the ray block meets both parity classes
        assert!(!refines(&evens_odds(), &segments(2)).unwrap());
    }

    #[test]
    fn psi_on_segments() {
        let map = psi(&segments(2), &segments(1)).unwrap();
        assert_eq!(map.table(), &[0, 1, 1]);
    }

    #[test]
    fn psi_to_self_is_identity() {
        let p = segments(3);
        assert!(psi(&p, &p).unwrap().is_identity());
    }

    #[test]
    fn psi_to_trivial_sends_everything_to_the_space() {
        let map = psi(&segments(2), &Partition::trivial(StateSpace::Nat)).unwrap();
        assert_eq!(map.table(), &[0, 0, 0]);
    }

    #[test]
    fn psi_rejects_non_refinement() {
        let err = psi(&evens_odds(), &segments(2)).unwrap_err();
        assert!(matches!(err, PartitionError::NotARefinement { .. }));
    }

    #[test]
    fn join_of_parity_and_split_ray() {
        let low_high = nat(vec![UPSet::finite([0, 1, 2, 3, 4]), UPSet::ray(5)]).unwrap();
        let joined = join(&evens_odds(), &low_high).unwrap();
        assert_eq!(joined.len(), 4);
        assert_eq!(joined.block(0), &StateSet::Nat(UPSet::finite([0, 2, 4])));
        assert_eq!(joined.block(1), &StateSet::Nat(UPSet::finite([1, 3])));
        assert_eq!(
            joined.block(2),
            &StateSet::Nat(UPSet::ray(5).intersect(&UPSet::residue_class(1, 2)))
        );
        assert_eq!(
            joined.block(3),
            &StateSet::Nat(UPSet::ray(5).intersect(&UPSet::residue_class(0, 2)))
        );
    }

    #[test]
    fn join_is_idempotent_with_identity_element() {
        let p = segments(3);
        assert_eq!(join(&p, &p).unwrap(), p);
        assert_eq!(join(&p, &Partition::trivial(StateSpace::Nat)).unwrap(), p);
    }

    #[test]
    fn block_containing_finds_ids() {
        let p = segments(3);
        assert_eq!(p.block_containing(1).unwrap(), 1);
        assert_eq!(p.block_containing(9).unwrap(), 3);
    }

    #[test]
    fn block_ids_are_stable_under_revalidation() {
        let p = segments(4);
        let revalidated = Partition::new(p.space(), p.blocks().to_vec()).unwrap();
        assert_eq!(revalidated, p);
        let mut shuffled = p.blocks().to_vec();
        shuffled.reverse();
        assert_eq!(Partition::new(p.space(), shuffled).unwrap(), p);
    }

    /// Random finite partition: assign each point a group, drop empty groups.
    fn partition_from_assignment(assignment: &[usize]) -> Partition {
        let size = assignment.len();
        let groups = assignment.iter().max().unwrap() + 1;
        let blocks: Vec<StateSet> = (0..groups)
            .map(|g| {
                let members = assignment
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a == g)
                    .map(|(i, _)| i as State);
                StateSet::Finite(FiniteSet::from_members(size, members).unwrap())
            })
            .filter(|b| !b.is_empty())
            .collect();
        Partition::new(StateSpace::Finite { size }, blocks).unwrap()
    }

    fn arb_assignment(size: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(0..4usize, size)
    }

    /// A partition together with one refining it, built by splitting blocks.
    fn arb_refinement_pair() -> impl Strategy<Value = (Partition, Partition)> {
        (4usize..24).prop_flat_map(|size| {
            (
                arb_assignment(size),
                proptest::collection::vec(0..2usize, size),
            )
                .prop_map(move |(base, split)| {
                    let coarse = partition_from_assignment(&base);
                    let fine_assignment: Vec<usize> =
                        base.iter().zip(&split).map(|(&b, &s)| 2 * b + s).collect();
                    let fine = partition_from_assignment(&fine_assignment);
                    (coarse, fine)
                })
        })
    }

    proptest! {
        #[test]
        fn refines_is_reflexive(assignment in arb_assignment(12)) {
            let p = partition_from_assignment(&assignment);
            prop_assert!(refines(&p, &p).unwrap());
        }

        #[test]
        fn refines_is_antisymmetric((coarse, fine) in arb_refinement_pair()) {
            if refines(&fine, &coarse).unwrap() {
                prop_assert_eq!(coarse, fine);
            }
        }

        #[test]
        fn refinement_pairs_refine((coarse, fine) in arb_refinement_pair()) {
            prop_assert!(refines(&coarse, &fine).unwrap());
        }

        #[test]
        fn refines_is_transitive(
            (base, split1, split2) in (4usize..16).prop_flat_map(|size| {
                (arb_assignment(size),
                 proptest::collection::vec(0..2usize, size),
                 proptest::collection::vec(0..2usize, size))
            })
        ) {
            let coarse = partition_from_assignment(&base);
            let mid_assignment: Vec<usize> = base.iter().zip(&split1).map(|(&b, &s)| 2 * b + s).collect();
            let mid = partition_from_assignment(&mid_assignment);
            let fine_assignment: Vec<usize> =
                mid_assignment.iter().zip(&split2).map(|(&b, &s)| 2 * b + s).collect();
            let fine = partition_from_assignment(&fine_assignment);
            prop_assert!(refines(&coarse, &mid).unwrap());
            prop_assert!(refines(&mid, &fine).unwrap());
            prop_assert!(refines(&coarse, &fine).unwrap());
            // functor laws along the triple
            let fine_to_mid = psi(&fine, &mid).unwrap();
            let mid_to_coarse = psi(&mid, &coarse).unwrap();
            let fine_to_coarse = psi(&fine, &coarse).unwrap();
            prop_assert_eq!(mid_to_coarse.compose(&fine_to_mid).unwrap(), fine_to_coarse);
        }

        #[test]
        fn join_is_least_upper_bound(
            (a, b, c) in (4usize..16).prop_flat_map(|size| {
                (arb_assignment(size), arb_assignment(size), arb_assignment(size))
            })
        ) {
            let a = partition_from_assignment(&a);
            let b = partition_from_assignment(&b);
            let c = partition_from_assignment(&c);
            let j = join(&a, &b).unwrap();
            prop_assert!(refines(&a, &j).unwrap());
            prop_assert!(refines(&b, &j).unwrap());
            // any common upper bound sits above the join
            let upper = join(&j, &c).unwrap();
            prop_assert!(refines(&a, &upper).unwrap());
            prop_assert!(refines(&b, &upper).unwrap());
            prop_assert!(refines(&j, &upper).unwrap());
        }

        #[test]
        fn psi_containment_certified((coarse, fine) in arb_refinement_pair()) {
            let map = psi(&fine, &coarse).unwrap();
            for (fine_id, fine_block) in fine.blocks().iter().enumerate() {
                let target = coarse.block(map.map(fine_id));
                prop_assert!(fine_block.is_subset(target).unwrap());
            }
        }
    }
}
