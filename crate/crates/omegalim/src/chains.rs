//! Index posets, monotone assignments of partitions to them (refinement
//! chains), cofinal chain extraction from directed posets, and the built-in
//! chain generators used by the CLI.

use std::fmt;

use thiserror::Error;

use crate::partitions::{join, refines, Partition, PartitionError};
use crate::set_algebra::{StateSet, UPSet};
use crate::state_space::StateSpace;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("{partitions} partitions assigned to {indices} indices")]
    LengthMismatch { partitions: usize, indices: usize },
    #[error("partitions in a chain must share one space")]
    MixedSpaces,
    #[error("not monotone: partition at index {lo} does not coarsen partition at index {hi} (fine block {fine_block})")]
    NotMonotone {
        lo: usize,
        hi: usize,
        fine_block: usize,
    },
    #[error(
        "relation closure is not antisymmetric: elements {a} and {b} are mutually below each other"
    )]
    NotAPartialOrder { a: usize, b: usize },
    #[error("relation references element {element} outside 0..{len}")]
    ElementOutOfRange { element: usize, len: usize },
    #[error("poset is not directed: elements {a} and {b} have no upper bound")]
    NotDirected { a: usize, b: usize },
    #[error("subset is not cofinal: element {witness} is not dominated by the extracted chain")]
    NotCofinal { witness: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
    #[error("filter proxy must be an infinite set with infinite complement")]
    BadFilterProxy,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Finite poset given by an explicit relation, closed reflexively and
/// transitively at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitPoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl ExplicitPoset {
    /// Builds the poset on `labels.len()` elements from the given `lo <= hi`
    /// pairs. The relation is closed under reflexivity and transitivity;
    /// antisymmetry of the closure is checked.
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, ChainError> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(lo, hi) in pairs {
            for e in [lo, hi] {
                if e >= n {
                    return Err(ChainError::ElementOutOfRange { element: e, len: n });
                }
            }
            leq[lo][hi] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    leq[i][j] = leq[i][j] || (leq[i][k] && leq[k][j]);
                }
            }
        }
        for (i, row) in leq.iter().enumerate() {
            for (j, &below) in row.iter().enumerate().skip(i + 1) {
                if below && leq[j][i] {
                    return Err(ChainError::NotAPartialOrder { a: i, b: j });
                }
            }
        }
        Ok(ExplicitPoset { labels, leq })
    }
}

/// The index poset of a refinement chain: either an explicit finite poset or
/// the truncated total order `0 <= 1 <= .. <= depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexPoset {
    Explicit(ExplicitPoset),
    TruncatedOmega { depth: usize },
}

impl IndexPoset {
    pub fn total(depth: usize) -> Self {
        IndexPoset::TruncatedOmega { depth }
    }

    pub fn len(&self) -> usize {
        match self {
            IndexPoset::Explicit(p) => p.labels.len(),
            IndexPoset::TruncatedOmega { depth } => depth + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn leq(&self, lo: usize, hi: usize) -> bool {
        match self {
            IndexPoset::Explicit(p) => p.leq[lo][hi],
            IndexPoset::TruncatedOmega { .. } => lo <= hi,
        }
    }

    pub fn label(&self, i: usize) -> String {
        match self {
            IndexPoset::Explicit(p) => p.labels[i].clone(),
            IndexPoset::TruncatedOmega { .. } => i.to_string(),
        }
    }

    /// All ordered comparable pairs `(lo, hi)` with `lo <= hi` and `lo != hi`.
    pub fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut pairs = Vec::new();
        for lo in 0..n {
            for hi in 0..n {
                if lo != hi && self.leq(lo, hi) {
                    pairs.push((lo, hi));
                }
            }
        }
        pairs
    }

    /// First element (in construction order) above both arguments.
    pub fn upper_bound(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.len()).find(|&k| self.leq(a, k) && self.leq(b, k))
    }

    pub fn is_directed(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a..n).all(|b| self.upper_bound(a, b).is_some()))
    }

    /// Witness for non-directedness, if any.
    pub fn undirected_pair(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in a..n {
                if self.upper_bound(a, b).is_none() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_total(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a..n).all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&i| (0..n).all(|j| i == j || !self.leq(i, j) || self.leq(j, i)))
            .collect()
    }
}

/// A cofinal increasing chain through a directed poset: starts at the first
/// distinguished element and repeatedly steps to an upper bound of the chain
/// head and the next distinguished element (first such in construction
/// order). Every distinguished element ends up below some chain member by
/// construction; cofinality is certified on the result, which must dominate
/// every element of the poset.
pub fn extract_cofinal_chain(
    poset: &IndexPoset,
    cofinal: &[usize],
) -> Result<Vec<usize>, ChainError> {
    if cofinal.is_empty() {
        return Err(ChainError::InvalidParameters(
            "cofinal subset is empty".into(),
        ));
    }
    for &e in cofinal {
        if e >= poset.len() {
            return Err(ChainError::ElementOutOfRange {
                element: e,
                len: poset.len(),
            });
        }
    }
    if let Some((a, b)) = poset.undirected_pair() {
        return Err(ChainError::NotDirected { a, b });
    }
    let mut chain = vec![cofinal[0]];
    for &next in &cofinal[1..] {
        let head = *chain.last().expect("nonempty");
        let ub = poset
            .upper_bound(head, next)
            .expect("directed poset has upper bounds");
        if ub != head {
            chain.push(ub);
        }
    }
    if let Some(witness) = (0..poset.len()).find(|&e| !chain.iter().any(|&c| poset.leq(e, c))) {
        return Err(ChainError::NotCofinal { witness });
    }
    Ok(chain)
}

/// Where a chain came from; carried along for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Explicit,
    Generated { name: String, params: String },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Explicit => write!(f, "explicit"),
            Provenance::Generated { name, params } => write!(f, "builtin {name}({params})"),
        }
    }
}

/// Outcome of the monotonicity check of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneReport {
    pub checked_pairs: usize,
    pub violation: Option<MonotoneViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneViolation {
    /// Position of the coarser-indexed partition.
    pub lo: usize,
    /// Position of the finer-indexed partition.
    pub hi: usize,
    /// Block of the partition at `hi` contained in no block of the one at `lo`.
    pub fine_block: usize,
}

impl MonotoneReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks monotonicity of an assignment of partitions to poset elements:
/// comparable indices must map to comparable partitions. Explicit posets are
/// checked on every comparable pair; the truncated total order is checked on
/// consecutive pairs, which transitivity of refinement extends to all pairs.
pub fn check_monotone(
    index: &IndexPoset,
    partitions: &[Partition],
) -> Result<MonotoneReport, ChainError> {
    if partitions.len() != index.len() {
        return Err(ChainError::LengthMismatch {
            partitions: partitions.len(),
            indices: index.len(),
        });
    }
    let pairs: Vec<(usize, usize)> = match index {
        IndexPoset::TruncatedOmega { depth } => (0..*depth).map(|i| (i, i + 1)).collect(),
        IndexPoset::Explicit(_) => index.comparable_pairs(),
    };
    let mut checked = 0;
    for (lo, hi) in pairs {
        checked += 1;
        if !refines(&partitions[lo], &partitions[hi])? {
            let fine_block = (0..partitions[hi].len())
                .find(|&b| {
                    let block = partitions[hi].block(b);
                    !partitions[lo]
                        .blocks()
                        .iter()
                        .any(|coarse| block.is_subset(coarse).expect("same space"))
                })
                .expect("a non-refinement has a witness block");
            return Ok(MonotoneReport {
                checked_pairs: checked,
                violation: Some(MonotoneViolation { lo, hi, fine_block }),
            });
        }
    }
    Ok(MonotoneReport {
        checked_pairs: checked,
        violation: None,
    })
}

/// A monotone assignment of finite partitions to an index poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementChain {
    index: IndexPoset,
    partitions: Vec<Partition>,
    provenance: Provenance,
}

impl RefinementChain {
    /// Validates lengths, shared space, and monotonicity.
    pub fn try_new(
        index: IndexPoset,
        partitions: Vec<Partition>,
        provenance: Provenance,
    ) -> Result<Self, ChainError> {
        if partitions.is_empty() {
            return Err(ChainError::InvalidParameters(
                "chain needs at least one partition".into(),
            ));
        }
        let space = partitions[0].space();
        if partitions.iter().any(|p| p.space() != space) {
            return Err(ChainError::MixedSpaces);
        }
        let report = check_monotone(&index, &partitions)?;
        if let Some(v) = report.violation {
            return Err(ChainError::NotMonotone {
                lo: v.lo,
                hi: v.hi,
                fine_block: v.fine_block,
            });
        }
        Ok(RefinementChain {
            index,
            partitions,
            provenance,
        })
    }

    /// Builds a chain from a family of distinct partitions ordered by
    /// refinement itself (the identity assignment): element `i` is below
    /// element `j` exactly when partition `i` coarsens partition `j`.
    pub fn from_family(
        partitions: Vec<Partition>,
        provenance: Provenance,
    ) -> Result<Self, ChainError> {
        let mut pairs = Vec::new();
        for i in 0..partitions.len() {
            for j in 0..partitions.len() {
                if i != j && refines(&partitions[i], &partitions[j])? {
                    pairs.push((i, j));
                }
            }
        }
        let labels = (0..partitions.len()).map(|i| i.to_string()).collect();
        let poset = ExplicitPoset::new(labels, &pairs)?;
        RefinementChain::try_new(IndexPoset::Explicit(poset), partitions, provenance)
    }

    pub fn index(&self) -> &IndexPoset {
        &self.index
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition(&self, i: usize) -> &Partition {
        &self.partitions[i]
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn space(&self) -> StateSpace {
        self.partitions[0].space()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn check_monotone(&self) -> MonotoneReport {
        check_monotone(&self.index, &self.partitions).expect("lengths agree by construction")
    }
}

/// Stand-in for a free ultrafilter member: a fixed infinite set with infinite
/// complement. Everything the filter-family construction needs from an
/// ultrafilter member is exactly these two properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterProxy {
    set: UPSet,
}

impl FilterProxy {
    pub fn new(set: UPSet) -> Result<Self, ChainError> {
        if !set.is_infinite() || !set.complement().is_infinite() {
            return Err(ChainError::BadFilterProxy);
        }
        Ok(FilterProxy { set })
    }

    pub fn set(&self) -> &UPSet {
        &self.set
    }
}

/// The chain `λ -> { {0}, .., {λ-1}, [λ, ∞) }` for `λ = 0..=depth`, over the
/// total index order.
pub fn initial_segments_chain(depth: usize) -> RefinementChain {
    let partitions: Vec<Partition> = (0..=depth as u64)
        .map(|level| {
            let mut blocks: Vec<StateSet> = (0..level)
                .map(|k| StateSet::Nat(UPSet::singleton(k)))
                .collect();
            blocks.push(StateSet::Nat(UPSet::ray(level)));
            Partition::new(StateSpace::Nat, blocks).expect("segments partition the naturals")
        })
        .collect();
    RefinementChain::try_new(
        IndexPoset::total(depth),
        partitions,
        Provenance::Generated {
            name: "initial_segments".into(),
            params: format!("depth {depth}"),
        },
    )
    .expect("segment chain is monotone")
}

/// A finite directed, join-closed family of partitions that all carry the
/// filter proxy's distinguished set as a block, ordered by refinement with the
/// identity assignment. Two refinement directions are generated (splitting
/// the complement into leading singletons, and splitting it by residue), then
/// closed under join; `depth` bounds the singleton direction.
pub fn filter_family_chain(
    proxy: &FilterProxy,
    depth: usize,
) -> Result<RefinementChain, ChainError> {
    let u = proxy.set().clone();
    let v = u.complement();

    let base = Partition::new(
        StateSpace::Nat,
        vec![StateSet::Nat(u.clone()), StateSet::Nat(v.clone())],
    )?;

    let mut family = vec![base];

    // first `depth` members of the complement, each split off as a singleton
    let mut leading: Vec<u64> = Vec::new();
    let mut n = 0u64;
    while leading.len() < depth {
        if v.contains(n) {
            leading.push(n);
        }
        n += 1;
    }
    for i in 1..=depth {
        let mut blocks: Vec<StateSet> = vec![StateSet::Nat(u.clone())];
        let mut rest = v.clone();
        for &m in &leading[..i] {
            blocks.push(StateSet::Nat(UPSet::singleton(m)));
            rest = rest.difference(&UPSet::singleton(m));
        }
        blocks.push(StateSet::Nat(rest));
        family.push(Partition::new(StateSpace::Nat, blocks)?);
    }

    // residue split of the complement, when it genuinely splits
    let residue_pieces: Vec<UPSet> = (0..4)
        .map(|r| v.intersect(&UPSet::residue_class(r, 4)))
        .filter(|p| !p.is_empty())
        .collect();
    if residue_pieces.len() >= 2 {
        let mut blocks: Vec<StateSet> = vec![StateSet::Nat(u.clone())];
        blocks.extend(residue_pieces.into_iter().map(StateSet::Nat));
        family.push(Partition::new(StateSpace::Nat, blocks)?);
    }

    // close under join
    loop {
        let mut added = false;
        let snapshot = family.clone();
        for a in &snapshot {
            for b in &snapshot {
                let j = join(a, b)?;
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

    RefinementChain::from_family(
        family,
        Provenance::Generated {
            name: "filter_family".into(),
            params: format!("u {u}, depth {depth}"),
        },
    )
}

/// Dispatcher for the config schema's `builtin` chains.
pub fn builtin_chain(
    name: &str,
    set: Option<&UPSet>,
    depth: usize,
) -> Result<RefinementChain, ChainError> {
    match name {
        "initial_segments" | "example2" => {
            if set.is_some() {
                return Err(ChainError::InvalidParameters(
                    "initial_segments takes no set parameter".into(),
                ));
            }
            Ok(initial_segments_chain(depth))
        }
        "filter_family" => {
            let set = set.ok_or_else(|| {
                ChainError::InvalidParameters("filter_family needs a set parameter `u`".into())
            })?;
            filter_family_chain(&FilterProxy::new(set.clone())?, depth)
        }
        other => Err(ChainError::InvalidParameters(format!(
            "unknown builtin chain `{other}`"
        ))),
    }
}

/// All partitions of the finite space `{0, .., size-1}`, enumerated by
/// restricted growth strings. Sizes beyond a desk-scale bound are rejected.
pub fn all_partitions(size: usize) -> Result<Vec<Partition>, ChainError> {
    use crate::set_algebra::FiniteSet;
    if size == 0 || size > 8 {
        return Err(ChainError::InvalidParameters(
            "all_partitions supports sizes 1..=8".into(),
        ));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; size];
    loop {
        let groups = rgs.iter().max().unwrap() + 1;
        let blocks: Vec<StateSet> = (0..groups)
            .map(|g| {
                let members = rgs
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a == g)
                    .map(|(i, _)| i as u64);
                StateSet::Finite(FiniteSet::from_members(size, members).expect("in range"))
            })
            .collect();
        out.push(Partition::new(StateSpace::Finite { size }, blocks).expect("valid partition"));

        // next restricted growth string
        let mut i = size;
        loop {
            if i == 1 {
                return Ok(out);
            }
            i -= 1;
            let cap = rgs[..i].iter().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{psi, refines};

    fn evens_odds() -> Partition {
        Partition::new(
            StateSpace::Nat,
            vec![
                StateSet::Nat(UPSet::residue_class(0, 2)),
                StateSet::Nat(UPSet::residue_class(1, 2)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn segment_chain_levels() {
        let chain = initial_segments_chain(3);
        assert_eq!(chain.len(), 4);
        assert_eq!(chain.partition(0), &Partition::trivial(StateSpace::Nat));
        let level3 = chain.partition(3);
        assert_eq!(level3.len(), 4);
        assert_eq!(level3.block(0), &StateSet::Nat(UPSet::singleton(0)));
        assert_eq!(level3.block(1), &StateSet::Nat(UPSet::singleton(1)));
        assert_eq!(level3.block(2), &StateSet::Nat(UPSet::singleton(2)));
        assert_eq!(level3.block(3), &StateSet::Nat(UPSet::ray(3)));
    }

    #[test]
    fn segment_chain_is_monotone() {
        assert!(initial_segments_chain(5).check_monotone().passed());
    }

    #[test]
    fn constant_chain_is_monotone() {
        let p = evens_odds();
        let chain = RefinementChain::try_new(
            IndexPoset::total(3),
            vec![p.clone(), p.clone(), p.clone(), p],
            Provenance::Explicit,
        );
        assert!(chain.is_ok());
    }

    #[test]
    fn coarsening_step_fails_with_witness() {
        let report = check_monotone(
            &IndexPoset::total(1),
            &[evens_odds(), Partition::trivial(StateSpace::Nat)],
        )
        .unwrap();
        let violation = report.violation.expect("trivial does not refine parity");
        assert_eq!((violation.lo, violation.hi), (0, 1));
        // the whole space is the offending fine block
        assert_eq!(violation.fine_block, 0);
    }

    #[test]
    fn cofinal_chain_on_total_order() {
        let poset = IndexPoset::total(4);
        assert_eq!(extract_cofinal_chain(&poset, &[4]).unwrap(), vec![4]);
    }

    #[test]
    fn cofinal_chain_on_diamond() {
        // 0=bottom, 1,2=middle, 3=top
        let poset = IndexPoset::Explicit(
            ExplicitPoset::new(
                vec!["bot".into(), "a".into(), "b".into(), "top".into()],
                &[(0, 1), (0, 2), (1, 3), (2, 3)],
            )
            .unwrap(),
        );
        let chain = extract_cofinal_chain(&poset, &[1, 2]).unwrap();
        assert_eq!(chain, vec![1, 3]);
    }

    #[test]
    fn cofinal_chain_over_all_partitions_of_three() {
        let family = all_partitions(3).unwrap();
        assert_eq!(family.len(), 5);
        let chain = RefinementChain::from_family(family.clone(), Provenance::Explicit).unwrap();
        let finest = family
            .iter()
            .position(|p| p.len() == 3)
            .expect("discrete partition present");
        let extracted = extract_cofinal_chain(chain.index(), &[finest]).unwrap();
        assert_eq!(extracted, vec![finest]);
        // the discrete partition sits above everything
        for i in 0..chain.len() {
            assert!(chain.index().leq(i, finest));
        }
    }

    #[test]
    fn undirected_poset_rejected() {
        let poset =
            IndexPoset::Explicit(ExplicitPoset::new(vec!["a".into(), "b".into()], &[]).unwrap());
        assert_eq!(
            extract_cofinal_chain(&poset, &[0]),
            Err(ChainError::NotDirected { a: 0, b: 1 })
        );
    }

    #[test]
    fn non_cofinal_subset_rejected() {
        let poset = IndexPoset::total(4);
        assert_eq!(
            extract_cofinal_chain(&poset, &[2]),
            Err(ChainError::NotCofinal { witness: 3 })
        );
    }

    #[test]
    fn cofinal_extraction_absorbs_redundant_entries() {
        // 2 is already below the chain head 4, so no new entry is emitted
        let poset = IndexPoset::total(4);
        assert_eq!(extract_cofinal_chain(&poset, &[4, 2]).unwrap(), vec![4]);
    }

    #[test]
    fn antisymmetry_violation_rejected() {
        let err = ExplicitPoset::new(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(err, ChainError::NotAPartialOrder { a: 0, b: 1 });
    }

    #[test]
    fn filter_proxy_requires_infinite_and_coinfinite() {
        assert!(FilterProxy::new(UPSet::residue_class(0, 2)).is_ok());
        assert_eq!(
            FilterProxy::new(UPSet::finite([1, 2])),
            Err(ChainError::BadFilterProxy)
        );
        assert_eq!(
            FilterProxy::new(UPSet::ray(5)),
            Err(ChainError::BadFilterProxy)
        );
    }

    #[test]
    fn filter_family_members_carry_the_distinguished_block() {
        let proxy = FilterProxy::new(UPSet::residue_class(0, 2)).unwrap();
        let chain = filter_family_chain(&proxy, 3).unwrap();
        assert!(chain.len() > 4);
        for p in chain.partitions() {
            assert!(
                p.blocks().contains(&StateSet::Nat(proxy.set().clone())),
                "missing distinguished block in {p}"
            );
        }
    }

    #[test]
    fn filter_family_is_directed_and_join_closed() {
        let proxy = FilterProxy::new(UPSet::residue_class(0, 3)).unwrap();
        let chain = filter_family_chain(&proxy, 2).unwrap();
        assert!(chain.index().is_directed());
        for a in chain.partitions() {
            for b in chain.partitions() {
                let j = join(a, b).unwrap();
                assert!(chain.partitions().contains(&j), "join escapes the family");
            }
        }
    }

    #[test]
    fn family_order_matches_refinement() {
        let proxy = FilterProxy::new(UPSet::residue_class(0, 2)).unwrap();
        let chain = filter_family_chain(&proxy, 2).unwrap();
        for i in 0..chain.len() {
            for j in 0..chain.len() {
                assert_eq!(
                    chain.index().leq(i, j),
                    i == j || refines(chain.partition(i), chain.partition(j)).unwrap()
                );
            }
        }
    }

    #[test]
    fn builtin_dispatcher() {
        assert!(builtin_chain("initial_segments", None, 4).is_ok());
        assert!(builtin_chain("example2", None, 4).is_ok());
        assert!(builtin_chain("filter_family", Some(&UPSet::residue_class(0, 2)), 2).is_ok());
        assert!(builtin_chain("filter_family", None, 2).is_err());
        assert!(builtin_chain("nope", None, 2).is_err());
    }

    #[test]
    fn all_partitions_counts_match_bell_numbers() {
        assert_eq!(all_partitions(1).unwrap().len(), 1);
        assert_eq!(all_partitions(2).unwrap().len(), 2);
        assert_eq!(all_partitions(3).unwrap().len(), 5);
        assert_eq!(all_partitions(4).unwrap().len(), 15);
    }

    #[test]
    fn generated_chains_pass_monotone_check() {
        assert!(initial_segments_chain(6).check_monotone().passed());
        let proxy = FilterProxy::new(UPSet::residue_class(1, 2)).unwrap();
        assert!(filter_family_chain(&proxy, 3)
            .unwrap()
            .check_monotone()
            .passed());
    }

    #[test]
    fn consecutive_monotonicity_extends_to_all_pairs() {
        // the truncated total order is validated on consecutive pairs only;
        // transitivity of refinement must reach every comparable pair
        let chain = initial_segments_chain(6);
        for lo in 0..chain.len() {
            for hi in lo..chain.len() {
                assert!(refines(chain.partition(lo), chain.partition(hi)).unwrap());
            }
        }
    }

    #[test]
    fn psi_along_generated_chain_exists() {
        let chain = initial_segments_chain(4);
        for (lo, hi) in chain.index().comparable_pairs() {
            assert!(psi(chain.partition(hi), chain.partition(lo)).is_ok());
        }
    }
}
