//! Shared helpers for the integration suites: brute-force oracles that stay
//! independent of the library's closed-form visit-set computation, and the
//! hand-built negative fixture.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use omegalim::chains::{ExplicitPoset, IndexPoset};
use omegalim::inverse_limit::FiniteInverseSystem;
use omegalim::{MapDescriptor, Partition, StateSet};

/// Brute-force visit oracle for finite maps: simulate `2 * size` steps and
/// record the blocks hit during the second half. Transient plus period never
/// exceeds the space size, so steps `size+1 ..= 2*size` lie on the cycle and
/// cover at least one full period of it.
pub fn second_half_visits(
    partition: &Partition,
    map: &MapDescriptor,
    x: u64,
    size: usize,
) -> Vec<usize> {
    let mut hit = BTreeSet::new();
    for n in (size as u64 + 1)..=(2 * size as u64) {
        let y = map.iterate(x, n).expect("finite orbit stays in range");
        hit.insert(
            partition
                .block_containing(y)
                .expect("partition covers the space"),
        );
    }
    hit.into_iter().collect()
}

/// Sampling visit oracle for symbolic maps: past every block threshold the
/// block pattern along the orbit repeats with period dividing the lcm of the
/// block periods, so a window of `4 * lcm * stride` iterates starting at
/// `t_max + lcm` determines the visit set exactly.
pub fn sampled_visits(partition: &Partition, map: &MapDescriptor, x: u64) -> Vec<usize> {
    let mut l = 1u64;
    let mut t_max = 0u64;
    for block in partition.blocks() {
        if let StateSet::Nat(u) = block {
            l = num_integer::lcm(l, u.period());
            t_max = t_max.max(u.threshold());
        }
    }
    let stride = match map {
        MapDescriptor::Shift(d) => *d,
        _ => 1,
    };
    let start = t_max + l;
    let mut hit = BTreeSet::new();
    for n in start..=start + 4 * l * stride {
        let y = map.iterate(x, n).expect("symbolic iterate is total");
        hit.insert(
            partition
                .block_containing(y)
                .expect("partition covers the space"),
        );
    }
    hit.into_iter().collect()
}

/// The crown system: two bottoms `u, v` below two incomparable tops `a, b`,
/// two labels per level, three identity tables and one swap. Every level is
/// nonempty and every table surjective, yet no compatible choice exists: the
/// tops would have to agree through `u` and disagree through `v`.
pub fn crown_fixture() -> FiniteInverseSystem {
    let poset = IndexPoset::Explicit(
        ExplicitPoset::new(
            vec!["u".into(), "v".into(), "a".into(), "b".into()],
            &[(0, 2), (0, 3), (1, 2), (1, 3)],
        )
        .expect("crown relation is a partial order"),
    );
    let identity = BTreeMap::from([(0, 0), (1, 1)]);
    let swap = BTreeMap::from([(0, 1), (1, 0)]);
    let maps = BTreeMap::from([
        ((0usize, 2usize), identity.clone()),
        ((0, 3), identity.clone()),
        ((1, 2), identity),
        ((1, 3), swap),
    ]);
    FiniteInverseSystem::new(poset, vec![vec![0, 1]; 4], maps).expect("crown tables are total")
}
