//! Inverse systems of visit sets over an index poset and their threads.
//!
//! A thread picks one visited block per index so that every projection map
//! between comparable indices sends the higher choice to the lower one. The
//! module enumerates all threads of a finite system, constructs one thread
//! along a total chain by pushing a top choice downward, and extends a chain
//! thread to a whole directed poset through a cofinal chain.
//!
//! The combinatorial core ([`FiniteInverseSystem`]) works over bare levels
//! and tables, independent of partitions. That is deliberate: systems whose
//! maps are block projections always have a thread, so the classical empty
//! inverse limit over a non-directed poset can only be exhibited by a
//! hand-built table system (see the crown fixture in the tests).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::chains::{ChainError, IndexPoset, RefinementChain};
use crate::partitions::{psi, PartitionError};
use crate::state_space::MapDescriptor;
use crate::visit_analysis::{delta, VisitError, VisitSet};
use crate::State;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InverseLimitError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Visit(#[from] VisitError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("missing projection table for comparable pair ({lo}, {hi})")]
    MissingMap { lo: usize, hi: usize },
    #[error("unexpected projection table for non-comparable pair ({lo}, {hi})")]
    UnexpectedMap { lo: usize, hi: usize },
    #[error("projection table for ({lo}, {hi}) is not total on its source level")]
    MapNotTotal { lo: usize, hi: usize },
    #[error("projection table for ({lo}, {hi}) maps outside its target level")]
    MapOutsideLevel { lo: usize, hi: usize },
    #[error("level count {levels} does not match poset size {poset}")]
    LevelCountMismatch { levels: usize, poset: usize },
    #[error("index poset is not a total chain")]
    NotATotalOrder,
    #[error("chain position {position} repeats or decreases")]
    ChainNotIncreasing { position: usize },
    #[error("element {element} is not dominated by any chain element")]
    NoDominatingChainElement { element: usize },
    #[error("pushforward to element {element} depends on the dominating chain element")]
    AmbiguousPushforward { element: usize },
    #[error("the supplied chain choices are not compatible with each other")]
    ChainChoicesIncompatible,
    #[error("selection at chain position {position} is not a member of that level")]
    ChoiceOutsideLevel { position: usize },
    #[error("selection has {got} entries for a chain of length {want}")]
    SelectionLengthMismatch { got: usize, want: usize },
    #[error("level at element {element} is empty")]
    EmptyLevel { element: usize },
    #[error("map space {map} does not match chain space {chain}")]
    SpaceMismatch { map: String, chain: String },
}

/// One compatible choice per poset element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Thread {
    choices: Vec<usize>,
}

impl Thread {
    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    pub fn choice(&self, element: usize) -> usize {
        self.choices[element]
    }
}

/// Outcome of one law check over a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawOutcome {
    /// How many instances (pairs, triples, or levels) were checked.
    pub checked: usize,
    /// Human-readable description of the first violation, if any.
    pub witness: Option<String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// An inverse system of finite sets over a finite index poset, given by bare
/// data: a label list per element and a total table per comparable pair,
/// mapping labels at the higher element to labels at the lower one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteInverseSystem {
    poset: IndexPoset,
    levels: Vec<Vec<usize>>,
    maps: BTreeMap<(usize, usize), BTreeMap<usize, usize>>,
}

impl FiniteInverseSystem {
    /// Validates that maps exist exactly for the comparable pairs, are total
    /// on their source level, and land in their target level. Empty levels
    /// are representable; partition-backed systems never produce them.
    pub fn new(
        poset: IndexPoset,
        levels: Vec<Vec<usize>>,
        maps: BTreeMap<(usize, usize), BTreeMap<usize, usize>>,
    ) -> Result<Self, InverseLimitError> {
        if levels.len() != poset.len() {
            return Err(InverseLimitError::LevelCountMismatch {
                levels: levels.len(),
                poset: poset.len(),
            });
        }
        let mut levels = levels;
        for level in &mut levels {
            level.sort_unstable();
            level.dedup();
        }
        for &(lo, hi) in maps.keys() {
            if lo == hi || lo >= poset.len() || hi >= poset.len() || !poset.leq(lo, hi) {
                return Err(InverseLimitError::UnexpectedMap { lo, hi });
            }
        }
        for (lo, hi) in poset.comparable_pairs() {
            let table = maps
                .get(&(lo, hi))
                .ok_or(InverseLimitError::MissingMap { lo, hi })?;
            for label in &levels[hi] {
                let image = table
                    .get(label)
                    .ok_or(InverseLimitError::MapNotTotal { lo, hi })?;
                if levels[lo].binary_search(image).is_err() {
                    return Err(InverseLimitError::MapOutsideLevel { lo, hi });
                }
            }
        }
        Ok(FiniteInverseSystem {
            poset,
            levels,
            maps,
        })
    }

    pub fn poset(&self) -> &IndexPoset {
        &self.poset
    }

    pub fn level(&self, element: usize) -> &[usize] {
        &self.levels[element]
    }

    /// Projection table for a comparable pair `lo < hi`.
    pub fn table(&self, lo: usize, hi: usize) -> &BTreeMap<usize, usize> {
        &self.maps[&(lo, hi)]
    }

    /// Image of `label` (living at `hi`) at the lower element `lo`; identity
    /// when the elements coincide.
    fn push_down(&self, lo: usize, hi: usize, label: usize) -> usize {
        if lo == hi {
            label
        } else {
            self.maps[&(lo, hi)][&label]
        }
    }

    pub fn is_compatible(&self, choices: &[usize]) -> bool {
        choices.len() == self.poset.len()
            && self
                .poset
                .comparable_pairs()
                .into_iter()
                .all(|(lo, hi)| self.push_down(lo, hi, choices[hi]) == choices[lo])
    }

    /// Every thread, in lexicographic order of the choice tuples.
    pub fn enumerate_threads(&self) -> Vec<Thread> {
        let mut out = Vec::new();
        let mut partial: Vec<usize> = Vec::with_capacity(self.poset.len());
        self.search(&mut partial, &mut out);
        out.sort();
        out.into_iter().map(|choices| Thread { choices }).collect()
    }

    fn search(&self, partial: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let element = partial.len();
        if element == self.poset.len() {
            out.push(partial.clone());
            return;
        }
        'candidates: for &candidate in &self.levels[element] {
            for (earlier, &chosen) in partial.iter().enumerate() {
                let fits = if self.poset.leq(earlier, element) {
                    self.push_down(earlier, element, candidate) == chosen
                } else if self.poset.leq(element, earlier) {
                    self.push_down(element, earlier, chosen) == candidate
                } else {
                    true
                };
                if !fits {
                    continue 'candidates;
                }
            }
            partial.push(candidate);
            self.search(partial, out);
            partial.pop();
        }
    }

    /// Composition law: projecting in one step equals projecting in two, on
    /// every comparable triple `lo <= mid <= hi` of distinct elements.
    pub fn check_composition(&self) -> LawOutcome {
        let n = self.poset.len();
        let mut checked = 0;
        for (lo, hi) in self.poset.comparable_pairs() {
            for mid in 0..n {
                if mid == lo || mid == hi || !self.poset.leq(lo, mid) || !self.poset.leq(mid, hi) {
                    continue;
                }
                checked += 1;
                for &label in &self.levels[hi] {
                    let direct = self.push_down(lo, hi, label);
                    let via_mid = self.push_down(lo, mid, self.push_down(mid, hi, label));
                    if direct != via_mid {
                        return LawOutcome {
                            checked,
                            witness: Some(format!(
                                "label {label} at element {hi}: direct image {direct} at {lo}, \
                                 image via {mid} is {via_mid}"
                            )),
                        };
                    }
                }
            }
        }
        LawOutcome {
            checked,
            witness: None,
        }
    }

    /// Restricted surjectivity: every label at the lower element of a
    /// comparable pair has a preimage at the higher one.
    pub fn check_surjectivity(&self) -> LawOutcome {
        let mut checked = 0;
        for (lo, hi) in self.poset.comparable_pairs() {
            checked += 1;
            for &target in &self.levels[lo] {
                let covered = self.levels[hi]
                    .iter()
                    .any(|&b| self.push_down(lo, hi, b) == target);
                if !covered {
                    return LawOutcome {
                        checked,
                        witness: Some(format!(
                            "label {target} at element {lo} has no preimage at element {hi}"
                        )),
                    };
                }
            }
        }
        LawOutcome {
            checked,
            witness: None,
        }
    }

    /// Positions of the whole poset sorted into a total chain; fails when two
    /// elements are incomparable.
    fn linearize_total(&self) -> Result<Vec<usize>, InverseLimitError> {
        if !self.poset.is_total() {
            return Err(InverseLimitError::NotATotalOrder);
        }
        let mut order: Vec<usize> = (0..self.poset.len()).collect();
        order.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if self.poset.leq(a, b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        Ok(order)
    }

    /// One choice per chain position: the least label at the top chain
    /// element, pushed down through the chain. Consecutive chain elements may
    /// repeat; they only have to be ordered. Compatibility along the chain is
    /// automatic from composition of the tables.
    pub fn thread_on_chain(&self, chain: &[usize]) -> Result<Vec<usize>, InverseLimitError> {
        for (k, window) in chain.windows(2).enumerate() {
            if !self.poset.leq(window[0], window[1]) {
                return Err(InverseLimitError::ChainNotIncreasing { position: k + 1 });
            }
        }
        let top = *chain
            .last()
            .ok_or(InverseLimitError::SelectionLengthMismatch { got: 0, want: 1 })?;
        let top_choice = *self.levels[top]
            .first()
            .ok_or(InverseLimitError::EmptyLevel { element: top })?;
        Ok(chain
            .iter()
            .map(|&e| self.push_down(e, top, top_choice))
            .collect())
    }

    /// A thread of a totally ordered system, built top-down without
    /// enumeration.
    pub fn thread_along_total_order(&self) -> Result<Thread, InverseLimitError> {
        let order = self.linearize_total()?;
        let on_chain = self.thread_on_chain(&order)?;
        let mut choices = vec![0; self.poset.len()];
        for (position, &element) in order.iter().enumerate() {
            choices[element] = on_chain[position];
        }
        debug_assert!(self.is_compatible(&choices));
        Ok(Thread { choices })
    }

    /// Extends choices fixed on an increasing cofinal chain to a thread on
    /// the whole directed poset: each element receives the pushforward of the
    /// choice at a dominating chain element. The pushforward is computed for
    /// every dominating chain element and must not depend on which one is
    /// used; this well-definedness check is where directedness earns its
    /// keep, so it is executed, not assumed.
    pub fn extend_from_chain(
        &self,
        chain: &[usize],
        choices_on_chain: &[usize],
    ) -> Result<Thread, InverseLimitError> {
        if choices_on_chain.len() != chain.len() {
            return Err(InverseLimitError::SelectionLengthMismatch {
                got: choices_on_chain.len(),
                want: chain.len(),
            });
        }
        for (position, (&element, &label)) in chain.iter().zip(choices_on_chain).enumerate() {
            if self.levels[element].binary_search(&label).is_err() {
                return Err(InverseLimitError::ChoiceOutsideLevel { position });
            }
        }
        let mut choices = Vec::with_capacity(self.poset.len());
        for element in 0..self.poset.len() {
            let mut pushed: Option<usize> = None;
            for (position, &chain_element) in chain.iter().enumerate() {
                if !self.poset.leq(element, chain_element) {
                    continue;
                }
                let value = self.push_down(element, chain_element, choices_on_chain[position]);
                match pushed {
                    None => pushed = Some(value),
                    Some(prior) if prior != value => {
                        return Err(InverseLimitError::AmbiguousPushforward { element });
                    }
                    Some(_) => {}
                }
            }
            choices.push(pushed.ok_or(InverseLimitError::NoDominatingChainElement { element })?);
        }
        if !self.is_compatible(&choices) {
            // only reachable when the supplied chain choices were themselves
            // incompatible in a way the per-element pushforwards cannot see
            return Err(InverseLimitError::ChainChoicesIncompatible);
        }
        Ok(Thread { choices })
    }
}

/// Report of the three structural laws of an inverse system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemReport {
    pub identity: LawOutcome,
    pub composition: LawOutcome,
    pub surjectivity: LawOutcome,
}

impl SystemReport {
    pub fn all_passed(&self) -> bool {
        self.identity.passed() && self.composition.passed() && self.surjectivity.passed()
    }
}

/// A thread together with the extendability certificate attached when the
/// underlying chain is a truncation of the infinite total order: restricted
/// surjectivity at every level guarantees the finite thread extends past any
/// truncation depth, without claiming a completed infinite object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltThread {
    pub thread: Thread,
    pub certificate: Option<ExtendabilityNote>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendabilityNote {
    pub depth: usize,
    pub surjectivity_verified: bool,
}

/// The inverse system of visit sets of one point under one map, over a
/// refinement chain: per-index visit sets and, for every comparable index
/// pair, the block projection restricted to them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSystem {
    chain: RefinementChain,
    map: MapDescriptor,
    point: State,
    visits: Vec<VisitSet>,
    core: FiniteInverseSystem,
}

/// Materializes the system: visit sets per index, restricted projections per
/// comparable pair. Containment of each restricted image inside the lower
/// visit set is certified during construction.
pub fn build_system(
    chain: &RefinementChain,
    map: &MapDescriptor,
    point: State,
) -> Result<InverseSystem, InverseLimitError> {
    if chain.space() != map.space() {
        return Err(InverseLimitError::SpaceMismatch {
            map: map.space().to_string(),
            chain: chain.space().to_string(),
        });
    }
    let visits: Vec<VisitSet> = (0..chain.len())
        .map(|i| delta(chain.partition(i), map, point))
        .collect::<Result<_, _>>()?;

    let mut maps = BTreeMap::new();
    for (lo, hi) in chain.index().comparable_pairs() {
        let full = psi(chain.partition(hi), chain.partition(lo))?;
        let mut restricted = BTreeMap::new();
        for &block in visits[hi].block_ids() {
            let image = full.map(block);
            assert!(
                visits[lo].contains(image),
                "projection of an infinitely visited block is infinitely visited"
            );
            restricted.insert(block, image);
        }
        maps.insert((lo, hi), restricted);
    }
    let levels = visits.iter().map(|v| v.block_ids().to_vec()).collect();
    let core = FiniteInverseSystem::new(chain.index().clone(), levels, maps)?;
    Ok(InverseSystem {
        chain: chain.clone(),
        map: map.clone(),
        point,
        visits,
        core,
    })
}

impl InverseSystem {
    pub fn chain(&self) -> &RefinementChain {
        &self.chain
    }

    pub fn map(&self) -> &MapDescriptor {
        &self.map
    }

    pub fn point(&self) -> State {
        self.point
    }

    pub fn visit_set(&self, element: usize) -> &VisitSet {
        &self.visits[element]
    }

    pub fn len(&self) -> usize {
        self.visits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    /// The bare levels-and-tables view of this system.
    pub fn core(&self) -> &FiniteInverseSystem {
        &self.core
    }

    /// Verifies the identity law (the projection of a partition onto itself
    /// restricts to the identity on its visit set), the composition law on
    /// comparable triples, and restricted surjectivity on comparable pairs.
    pub fn check(&self) -> SystemReport {
        let mut identity = LawOutcome {
            checked: 0,
            witness: None,
        };
        for element in 0..self.chain.len() {
            identity.checked += 1;
            let p = self.chain.partition(element);
            let self_map = psi(p, p).expect("a partition refines itself");
            if !self_map.is_identity() {
                identity.witness = Some(format!(
                    "projection of index {element} onto itself is not the identity"
                ));
                break;
            }
            if let Some(&block) = self.visits[element]
                .block_ids()
                .iter()
                .find(|&&b| self_map.map(b) != b)
            {
                identity.witness = Some(format!(
                    "restricted self-projection moves block {block} at index {element}"
                ));
                break;
            }
        }
        SystemReport {
            identity,
            composition: self.core.check_composition(),
            surjectivity: self.core.check_surjectivity(),
        }
    }

    /// All threads, lexicographic in (element order, block ID).
    pub fn enumerate_threads(&self) -> Vec<Thread> {
        self.core.enumerate_threads()
    }

    /// Thread of a totally ordered system: least block at the top index,
    /// pushed down. For truncations of the infinite total order the result
    /// carries an extendability certificate backed by a surjectivity check.
    pub fn build_thread_along_chain(&self) -> Result<BuiltThread, InverseLimitError> {
        let thread = self.core.thread_along_total_order()?;
        let certificate = match self.chain.index() {
            IndexPoset::TruncatedOmega { depth } => Some(ExtendabilityNote {
                depth: *depth,
                surjectivity_verified: self.core.check_surjectivity().passed(),
            }),
            IndexPoset::Explicit(_) => None,
        };
        Ok(BuiltThread {
            thread,
            certificate,
        })
    }

    /// Choices along an increasing chain of poset elements (least block at
    /// the chain top, pushed down the chain).
    pub fn thread_on_chain(&self, chain: &[usize]) -> Result<Vec<usize>, InverseLimitError> {
        self.core.thread_on_chain(chain)
    }

    /// Extends chain choices to the whole directed poset; see
    /// [`FiniteInverseSystem::extend_from_chain`].
    pub fn extend_thread_to_directed(
        &self,
        chain: &[usize],
        choices_on_chain: &[usize],
    ) -> Result<Thread, InverseLimitError> {
        self.core.extend_from_chain(chain, choices_on_chain)
    }
}
