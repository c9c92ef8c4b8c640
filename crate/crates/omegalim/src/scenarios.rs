//! Built-in worked scenarios: small systems whose exact visit sets, chain
//! intersections, and threads are known in closed form. The `examples` CLI
//! command runs all of them and diffs computed results against the frozen
//! expectations; every scenario must reproduce its values exactly.

use crate::chains::{filter_family_chain, initial_segments_chain, FilterProxy};
use crate::inverse_limit::build_system;
use crate::partitions::Partition;
use crate::set_algebra::{StateSet, UPSet};
use crate::state_space::{MapDescriptor, StateSpace};
use crate::visit_analysis::{chain_block_intersection, delta, IntersectionVerdict, Selection};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &str, result: Result<String, String>) -> ScenarioOutcome {
    match result {
        Ok(detail) => ScenarioOutcome {
            name: name.into(),
            passed: true,
            detail,
        },
        Err(detail) => ScenarioOutcome {
            name: name.into(),
            passed: false,
            detail,
        },
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

/// `{ {0,1}, evens from 2, odds from 3 }` — one finite and two infinite blocks.
fn mixed_partition() -> Partition {
    Partition::new(
        StateSpace::Nat,
        vec![
            StateSet::Nat(UPSet::finite([0, 1])),
            StateSet::Nat(UPSet::residue_class(0, 2).intersect(&UPSet::ray(2))),
            StateSet::Nat(UPSet::residue_class(1, 2).intersect(&UPSet::ray(3))),
        ],
    )
    .expect("mixed partition is valid")
}

fn shift_visits_infinite_blocks() -> Result<String, String> {
    let p = mixed_partition();
    let infinite: Vec<usize> = (0..p.len()).filter(|&i| p.block(i).is_infinite()).collect();
    for x in [0u64, 5, 17] {
        let visits = delta(&p, &MapDescriptor::Shift(1), x).map_err(|e| e.to_string())?;
        expect(
            &format!("visit set at {x}"),
            visits.block_ids().to_vec(),
            infinite.clone(),
        )?;
    }
    Ok("under the shift, the visit set is exactly the infinite blocks {1, 2}".into())
}

fn identity_visits_home_block() -> Result<String, String> {
    let p = mixed_partition();
    for (x, home) in [(5u64, 2usize), (0, 0), (4, 1)] {
        let visits = delta(&p, &MapDescriptor::Identity, x).map_err(|e| e.to_string())?;
        expect(
            &format!("visit set at {x}"),
            visits.block_ids().to_vec(),
            vec![home],
        )?;
    }
    Ok("under the identity, the visit set is the singleton home block of the point".into())
}

fn constant_visits_target_block() -> Result<String, String> {
    let p = mixed_partition();
    for x in [0u64, 9, 3] {
        let visits = delta(&p, &MapDescriptor::Constant(3), x).map_err(|e| e.to_string())?;
        expect(
            &format!("visit set at {x}"),
            visits.block_ids().to_vec(),
            vec![2],
        )?;
    }
    Ok("under a constant map, the visit set is the block of the target point".into())
}

fn segment_chain_visit_sets() -> Result<String, String> {
    let chain = initial_segments_chain(10);
    for level in 0..=10usize {
        let visits = delta(chain.partition(level), &MapDescriptor::Shift(1), 0)
            .map_err(|e| e.to_string())?;
        expect(
            &format!("visit set at index {level}"),
            visits.block_ids().to_vec(),
            vec![level],
        )?;
        expect(&format!("count at index {level}"), visits.count(), 1)?;
        expect(
            &format!("block at index {level}"),
            chain.partition(level).block(level).clone(),
            StateSet::Nat(UPSet::ray(level as u64)),
        )?;
    }
    Ok("every level's visit set is the single ray block [level, ∞)".into())
}

fn segment_chain_empty_limit() -> Result<String, String> {
    let chain = initial_segments_chain(10);
    let report = chain_block_intersection(
        &chain,
        &MapDescriptor::Shift(1),
        0,
        &Selection::LeastBlock,
        10,
    )
    .map_err(|e| e.to_string())?;
    let want_minima: Vec<Option<u64>> = (0..=10).map(Some).collect();
    expect("prefix minima", report.minima.clone(), want_minima)?;
    expect(
        "verdict",
        report.verdict.clone(),
        IntersectionVerdict::EmptyInTheLimit,
    )?;
    Ok("chosen-ray intersections shrink with minima 0..=10; empty in the limit".into())
}

fn segment_chain_unique_thread_shift() -> Result<String, String> {
    let chain = initial_segments_chain(10);
    let system = build_system(&chain, &MapDescriptor::Shift(1), 0).map_err(|e| e.to_string())?;
    let threads = system.enumerate_threads();
    expect("thread count", threads.len(), 1)?;
    let want: Vec<usize> = (0..=10).collect();
    expect("thread choices", threads[0].choices().to_vec(), want)?;
    let built = system
        .build_thread_along_chain()
        .map_err(|e| e.to_string())?;
    expect("built thread", built.thread.clone(), threads[0].clone())?;
    let certificate = built
        .certificate
        .ok_or("missing extendability certificate")?;
    if !certificate.surjectivity_verified {
        return Err("surjectivity not verified on the truncated chain".into());
    }
    Ok("exactly one thread (the ray at each level); construction reproduces it".into())
}

fn segment_chain_identity_thread_and_intersection() -> Result<String, String> {
    let chain = initial_segments_chain(10);
    let system = build_system(&chain, &MapDescriptor::Identity, 5).map_err(|e| e.to_string())?;
    let threads = system.enumerate_threads();
    expect("thread count", threads.len(), 1)?;
    expect(
        "thread choices",
        threads[0].choices().to_vec(),
        vec![0, 1, 2, 3, 4, 5, 5, 5, 5, 5, 5],
    )?;
    let report = chain_block_intersection(
        &chain,
        &MapDescriptor::Identity,
        5,
        &Selection::LeastBlock,
        10,
    )
    .map_err(|e| e.to_string())?;
    expect(
        "final set",
        report.final_set.clone(),
        StateSet::Nat(UPSet::singleton(5)),
    )?;
    expect(
        "verdict",
        report.verdict.clone(),
        IntersectionVerdict::NonemptyStabilized { since: 6 },
    )?;
    Ok("one thread ending in the singleton {5}; intersections stabilize at {5}".into())
}

fn segment_chain_constant_thread_and_intersection() -> Result<String, String> {
    let chain = initial_segments_chain(10);
    let map = MapDescriptor::Constant(3);
    let system = build_system(&chain, &map, 7).map_err(|e| e.to_string())?;
    let threads = system.enumerate_threads();
    expect("thread count", threads.len(), 1)?;
    expect(
        "thread choices",
        threads[0].choices().to_vec(),
        vec![0, 1, 2, 3, 3, 3, 3, 3, 3, 3, 3],
    )?;
    let report = chain_block_intersection(&chain, &map, 7, &Selection::LeastBlock, 10)
        .map_err(|e| e.to_string())?;
    expect(
        "final set",
        report.final_set.clone(),
        StateSet::Nat(UPSet::singleton(3)),
    )?;
    expect(
        "verdict",
        report.verdict.clone(),
        IntersectionVerdict::NonemptyStabilized { since: 4 },
    )?;
    Ok("one thread ending in the singleton {3}; intersections stabilize at {3}".into())
}

fn filter_family_distinguished_block_recurs() -> Result<String, String> {
    let evens = UPSet::residue_class(0, 2);
    let proxy = FilterProxy::new(evens.clone()).map_err(|e| e.to_string())?;
    let chain = filter_family_chain(&proxy, 3).map_err(|e| e.to_string())?;
    for (index, p) in chain.partitions().iter().enumerate() {
        let distinguished = p
            .blocks()
            .iter()
            .position(|b| b == &StateSet::Nat(evens.clone()))
            .ok_or(format!("member {index} lost the distinguished block"))?;
        for x in [0u64, 3] {
            let visits = delta(p, &MapDescriptor::Shift(1), x).map_err(|e| e.to_string())?;
            if !visits.contains(distinguished) {
                return Err(format!(
                    "distinguished block not visited infinitely often at member {index}, x={x}"
                ));
            }
        }
    }
    Ok(format!(
        "all {} family members carry the distinguished infinite block, and the shift revisits it forever",
        chain.len()
    ))
}

fn filter_family_visits_are_the_infinite_blocks() -> Result<String, String> {
    let proxy = FilterProxy::new(UPSet::residue_class(0, 2)).map_err(|e| e.to_string())?;
    let chain = filter_family_chain(&proxy, 3).map_err(|e| e.to_string())?;
    for (index, p) in chain.partitions().iter().enumerate() {
        let infinite: Vec<usize> = (0..p.len()).filter(|&i| p.block(i).is_infinite()).collect();
        for x in [0u64, 7] {
            let visits = delta(p, &MapDescriptor::Shift(1), x).map_err(|e| e.to_string())?;
            expect(
                &format!("visit set of member {index} at {x}"),
                visits.block_ids().to_vec(),
                infinite.clone(),
            )?;
        }
    }
    Ok("for every family member, the shift's visit set is exactly its infinite blocks".into())
}

/// Runs every built-in scenario.
pub fn run_all() -> Vec<ScenarioOutcome> {
    vec![
        outcome(
            "shift_visits_infinite_blocks",
            shift_visits_infinite_blocks(),
        ),
        outcome("identity_visits_home_block", identity_visits_home_block()),
        outcome(
            "constant_visits_target_block",
            constant_visits_target_block(),
        ),
        outcome("segment_chain_visit_sets", segment_chain_visit_sets()),
        outcome("segment_chain_empty_limit", segment_chain_empty_limit()),
        outcome(
            "segment_chain_unique_thread_shift",
            segment_chain_unique_thread_shift(),
        ),
        outcome(
            "segment_chain_identity_thread_and_intersection",
            segment_chain_identity_thread_and_intersection(),
        ),
        outcome(
            "segment_chain_constant_thread_and_intersection",
            segment_chain_constant_thread_and_intersection(),
        ),
        outcome(
            "filter_family_distinguished_block_recurs",
            filter_family_distinguished_block_recurs(),
        ),
        outcome(
            "filter_family_visits_are_the_infinite_blocks",
            filter_family_visits_are_the_infinite_blocks(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_passes() {
        for outcome in run_all() {
            assert!(outcome.passed, "{}: {}", outcome.name, outcome.detail);
        }
    }

    #[test]
    fn scenario_names_are_unique() {
        let outcomes = run_all();
        let mut names: Vec<&str> = outcomes.iter().map(|o| o.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), outcomes.len());
    }
}
