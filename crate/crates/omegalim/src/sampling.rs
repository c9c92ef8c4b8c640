//! Seeded random instance generators: image-table maps, finite and symbolic
//! partitions, refinement steps, monotone chains, and join-closed directed
//! families. Used by the property and acceptance suites; deterministic under
//! a fixed RNG seed.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chains::{IndexPoset, Provenance, RefinementChain};
use crate::partitions::{join, Partition};
use crate::set_algebra::{FiniteSet, StateSet, UPSet};
use crate::state_space::{MapDescriptor, StateSpace, TailMap};
use crate::State;

/// Random total image table over `{0, .., size-1}`.
pub fn random_table_map<R: Rng>(rng: &mut R, size: usize) -> MapDescriptor {
    let images = (0..size).map(|_| rng.gen_range(0..size as u64)).collect();
    MapDescriptor::table(images).expect("images drawn in range")
}

/// Random symbolic map: shift, identity, constant, or a small override map.
pub fn random_symbolic_map<R: Rng>(rng: &mut R) -> MapDescriptor {
    match rng.gen_range(0..4) {
        0 => MapDescriptor::shift(rng.gen_range(1..5)),
        1 => MapDescriptor::Identity,
        2 => MapDescriptor::Constant(rng.gen_range(0..12)),
        _ => {
            let tail = match rng.gen_range(0..3) {
                0 => TailMap::Shift(rng.gen_range(1..4)),
                1 => TailMap::Identity,
                _ => TailMap::Constant(rng.gen_range(0..8)),
            };
            let overrides = (0..rng.gen_range(0..4))
                .map(|_| (rng.gen_range(0..16u64), rng.gen_range(0..16u64)))
                .collect();
            MapDescriptor::FiniteOverride { overrides, tail }
        }
    }
}

fn partition_from_assignment(assignment: &[usize]) -> Partition {
    let size = assignment.len();
    let groups = assignment.iter().max().expect("nonempty assignment") + 1;
    let blocks: Vec<StateSet> = (0..groups)
        .map(|g| {
            let members = assignment
                .iter()
                .enumerate()
                .filter(|(_, &a)| a == g)
                .map(|(i, _)| i as State);
            StateSet::Finite(FiniteSet::from_members(size, members).expect("in range"))
        })
        .filter(|b| !b.is_empty())
        .collect();
    Partition::new(StateSpace::Finite { size }, blocks).expect("assignment partitions the space")
}

fn assignment_of(partition: &Partition) -> Vec<usize> {
    let StateSpace::Finite { size } = partition.space() else {
        panic!("assignment view needs a finite space");
    };
    (0..size as u64)
        .map(|x| partition.block_containing(x).expect("covered"))
        .collect()
}

/// Random partition of `{0, .., size-1}` into at most `max_blocks` groups.
pub fn random_finite_partition<R: Rng>(rng: &mut R, size: usize, max_blocks: usize) -> Partition {
    let assignment: Vec<usize> = (0..size).map(|_| rng.gen_range(0..max_blocks)).collect();
    partition_from_assignment(&assignment)
}

/// Refinement step: every block is independently split in two (when the coin
/// says so and the block has two members to separate).
pub fn refine_finite_partition<R: Rng>(rng: &mut R, partition: &Partition) -> Partition {
    let base = assignment_of(partition);
    let split: Vec<usize> = base.iter().map(|_| rng.gen_range(0..2)).collect();
    let fine: Vec<usize> = base.iter().zip(&split).map(|(&b, &s)| 2 * b + s).collect();
    partition_from_assignment(&fine)
}

/// Random monotone chain over the truncated total order: a coarse random
/// partition repeatedly refined.
pub fn random_monotone_chain<R: Rng>(rng: &mut R, size: usize, length: usize) -> RefinementChain {
    assert!(length >= 1);
    let mut partitions = vec![random_finite_partition(rng, size, 3)];
    while partitions.len() < length {
        let next = refine_finite_partition(rng, partitions.last().expect("nonempty"));
        partitions.push(next);
    }
    RefinementChain::try_new(
        IndexPoset::total(length - 1),
        partitions,
        Provenance::Explicit,
    )
    .expect("iterated refinement is monotone")
}

/// Random directed family: two or three random base partitions closed under
/// join, with the trivial partition as bottom, ordered by refinement. Join
/// closure makes the poset directed; the family has at most eight members.
pub fn random_directed_family<R: Rng>(rng: &mut R, size: usize) -> RefinementChain {
    let bases: Vec<Partition> = (0..rng.gen_range(2..=3))
        .map(|_| random_finite_partition(rng, size, 3))
        .collect();
    let mut family = vec![Partition::trivial(StateSpace::Finite { size })];
    for base in bases {
        if !family.contains(&base) {
            family.push(base);
        }
    }
    loop {
        let mut added = false;
        let snapshot = family.clone();
        for a in &snapshot {
            for b in &snapshot {
                let j = join(a, b).expect("same space");
                if !family.contains(&j) {
                    family.push(j);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    RefinementChain::from_family(family, Provenance::Explicit)
        .expect("distinct canonical partitions order by refinement")
}

/// Random ultimately periodic set from raw parts (canonicalized).
pub fn random_upset<R: Rng>(rng: &mut R) -> UPSet {
    let threshold = rng.gen_range(0..10u64);
    let period = rng.gen_range(1..8u64);
    let residues: Vec<u64> = (0..period).filter(|_| rng.gen_bool(0.5)).collect();
    let exceptions: Vec<u64> = (0..threshold).filter(|_| rng.gen_bool(0.3)).collect();
    UPSet::from_parts(threshold, period, residues, exceptions)
}

/// Random partition of the naturals: residue classes modulo a small period,
/// grouped into blocks, with a few leading points carved out as singletons.
pub fn random_upset_partition<R: Rng>(rng: &mut R) -> Partition {
    let period = rng.gen_range(1..=6u64);
    let groups = rng.gen_range(1..=3usize);
    let grouping: Vec<usize> = (0..period).map(|_| rng.gen_range(0..groups)).collect();
    let carve: Vec<u64> = {
        let mut pool: Vec<u64> = (0..8).collect();
        pool.shuffle(rng);
        pool.truncate(rng.gen_range(0..3));
        pool
    };
    let carved = UPSet::finite(carve.iter().cloned());
    let mut blocks: Vec<UPSet> = (0..groups)
        .map(|g| {
            (0..period)
                .filter(|&r| grouping[r as usize] == g)
                .map(|r| UPSet::residue_class(r, period))
                .fold(UPSet::empty(), |acc, class| acc.union(&class))
                .difference(&carved)
        })
        .filter(|b| !b.is_empty())
        .collect();
    for &c in &carve {
        blocks.push(UPSet::singleton(c));
    }
    Partition::new(
        StateSpace::Nat,
        blocks.into_iter().map(StateSet::Nat).collect(),
    )
    .expect("residue grouping partitions the naturals")
}

/// Refinement step on the symbolic backend: parity-split each infinite block
/// when possible, and carve the least element off blocks the coin picks.
pub fn refine_upset_partition<R: Rng>(rng: &mut R, partition: &Partition) -> Partition {
    let mut blocks: Vec<UPSet> = Vec::new();
    for block in partition.blocks() {
        let StateSet::Nat(u) = block else {
            panic!("symbolic refinement needs nat blocks");
        };
        match rng.gen_range(0..3) {
            0 => {
                let evens = u.intersect(&UPSet::residue_class(0, 2));
                let odds = u.intersect(&UPSet::residue_class(1, 2));
                if evens.is_empty() || odds.is_empty() {
                    blocks.push(u.clone());
                } else {
                    blocks.push(evens);
                    blocks.push(odds);
                }
            }
            1 => {
                let least = UPSet::singleton(u.min_element().expect("nonempty block"));
                let rest = u.difference(&least);
                if rest.is_empty() {
                    blocks.push(u.clone());
                } else {
                    blocks.push(least);
                    blocks.push(rest);
                }
            }
            _ => blocks.push(u.clone()),
        }
    }
    Partition::new(
        StateSpace::Nat,
        blocks.into_iter().map(StateSet::Nat).collect(),
    )
    .expect("splitting blocks preserves the partition laws")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::refines;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let size = rng.gen_range(2..32);
            let p = random_finite_partition(&mut rng, size, 4);
            let q = refine_finite_partition(&mut rng, &p);
            assert!(refines(&p, &q).unwrap());
            let length = rng.gen_range(1..6);
            let chain = random_monotone_chain(&mut rng, size, length);
            assert!(chain.check_monotone().passed());
        }
    }

    #[test]
    fn directed_families_are_directed_and_join_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let size = rng.gen_range(3..16);
            let family = random_directed_family(&mut rng, size);
            assert!(family.len() <= 8);
            assert!(family.index().is_directed());
            for a in family.partitions() {
                for b in family.partitions() {
                    let j = join(a, b).unwrap();
                    assert!(family.partitions().contains(&j));
                }
            }
        }
    }

    #[test]
    fn symbolic_generators_produce_valid_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let p = random_upset_partition(&mut rng);
            let q = refine_upset_partition(&mut rng, &p);
            assert!(refines(&p, &q).unwrap());
        }
    }
}
