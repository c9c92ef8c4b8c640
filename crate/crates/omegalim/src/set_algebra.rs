//! Exact boolean algebra over the representable subsets of a state space.
//!
//! Two backends: [`FiniteSet`] (bit vector over `0..size`) for finite spaces,
//! and [`UPSet`] (ultimately periodic subset of the naturals) for the symbolic
//! backend. Both are closed under intersection, union and complement, have
//! decidable emptiness/infiniteness, and carry a canonical form so that
//! structural equality coincides with extensional equality.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::State;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetError {
    #[error("mixed set backends: {0} vs {1}")]
    BackendMismatch(&'static str, &'static str),
    #[error("finite sets over different space sizes: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("state {state} out of range for space of size {size}")]
    OutOfRange { state: State, size: usize },
}

fn lcm(a: u64, b: u64) -> u64 {
    let g = num_integer::gcd(a, b);
    (a / g)
        .checked_mul(b)
        .expect("period overflow in set operation")
}

/// Subset of a finite space `{0, .., size-1}`, stored as a bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    size: usize,
    words: Vec<u64>,
}

impl FiniteSet {
    pub fn empty(size: usize) -> Self {
        FiniteSet {
            size,
            words: vec![0; size.div_ceil(64)],
        }
    }

    pub fn full(size: usize) -> Self {
        let mut s = FiniteSet::empty(size);
        for x in 0..size {
            s.insert(x as State).expect("in range");
        }
        s
    }

    pub fn from_members<I: IntoIterator<Item = State>>(
        size: usize,
        members: I,
    ) -> Result<Self, SetError> {
        let mut s = FiniteSet::empty(size);
        for x in members {
            s.insert(x)?;
        }
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn insert(&mut self, x: State) -> Result<(), SetError> {
        if x >= self.size as u64 {
            return Err(SetError::OutOfRange {
                state: x,
                size: self.size,
            });
        }
        self.words[(x / 64) as usize] |= 1 << (x % 64);
        Ok(())
    }

    /// Membership; `x` outside `0..size` is simply not a member.
    pub fn contains(&self, x: State) -> bool {
        x < self.size as u64 && self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    fn check_size(&self, other: &Self) -> Result<(), SetError> {
        if self.size != other.size {
            return Err(SetError::SizeMismatch(self.size, other.size));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, SetError> {
        self.check_size(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Ok(FiniteSet {
            size: self.size,
            words,
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self, SetError> {
        self.check_size(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        Ok(FiniteSet {
            size: self.size,
            words,
        })
    }

    pub fn complement(&self) -> Self {
        let mut s = FiniteSet {
            size: self.size,
            words: self.words.iter().map(|w| !w).collect(),
        };
        // clear padding bits past `size`
        let tail = self.size % 64;
        if tail != 0 {
            if let Some(last) = s.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn min_element(&self) -> Option<State> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i as u64 * 64 + w.trailing_zeros() as u64);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.size as u64).filter(|&x| self.contains(x))
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "finite{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Ultimately periodic subset of the naturals.
///
/// Membership of `n >= threshold` is `n mod period ∈ residues`; membership of
/// `n < threshold` is `n ∈ exceptions`. Every value of this type is kept in
/// canonical form: the period is the minimal period of the tail pattern, the
/// threshold is the least point from which the tail rule is exact, and the
/// exceptions are precisely the members below the threshold. Two `UPSet`s are
/// extensionally equal iff they are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPSet {
    threshold: u64,
    period: u64,
    residues: BTreeSet<u64>,
    exceptions: BTreeSet<u64>,
}

impl UPSet {
    /// Builds the canonical set with the given raw fields.
    ///
    /// Residue entries outside `0..period` and exception entries `>= threshold`
    /// have no semantic weight and are dropped. `period` must be positive.
    pub fn from_parts<R, E>(threshold: u64, period: u64, residues: R, exceptions: E) -> Self
    where
        R: IntoIterator<Item = u64>,
        E: IntoIterator<Item = u64>,
    {
        assert!(period >= 1, "UPSet period must be positive");
        let residues: BTreeSet<u64> = residues.into_iter().filter(|&r| r < period).collect();
        let exceptions: BTreeSet<u64> = exceptions.into_iter().filter(|&e| e < threshold).collect();

        // minimal period: smallest divisor d of period with R shift-invariant mod d
        let min_period = (1..=period)
            .filter(|d| period.is_multiple_of(*d))
            .find(|&d| {
                residues
                    .iter()
                    .all(|&r| residues.contains(&((r + d) % period)))
            })
            .expect("period divides itself");
        let residues: BTreeSet<u64> = residues.iter().map(|&r| r % min_period).collect();

        // minimal threshold: walk down while the tail rule already matches the
        // recorded membership. With a nonempty residue set each agreeing step
        // either skips a non-member gap (< period of them in a row) or consumes
        // an exception, so the walk terminates quickly.
        let mut t = threshold;
        if residues.is_empty() {
            t = exceptions.iter().next_back().map_or(0, |&m| m + 1);
        } else {
            while t > 0 {
                let n = t - 1;
                let tail_member = residues.contains(&(n % min_period));
                if tail_member == exceptions.contains(&n) {
                    t -= 1;
                } else {
                    break;
                }
            }
        }
        let exceptions = exceptions.range(..t).cloned().collect();
        UPSet {
            threshold: t,
            period: min_period,
            residues,
            exceptions,
        }
    }

    /// Re-derives the canonical form from this set's own fields. Values of this
    /// type are canonical by construction, so this is the identity; it exists
    /// so canonical-form idempotence is a testable operation.
    pub fn canonicalize(&self) -> Self {
        UPSet::from_parts(
            self.threshold,
            self.period,
            self.residues.iter().cloned(),
            self.exceptions.iter().cloned(),
        )
    }

    pub fn empty() -> Self {
        UPSet::from_parts(0, 1, [], [])
    }

    /// The whole of the naturals.
    pub fn all() -> Self {
        UPSet::from_parts(0, 1, [0], [])
    }

    pub fn singleton(x: u64) -> Self {
        UPSet::finite([x])
    }

    pub fn finite<I: IntoIterator<Item = u64>>(members: I) -> Self {
        let members: BTreeSet<u64> = members.into_iter().collect();
        let bound = members.iter().next_back().map_or(0, |&m| m + 1);
        UPSet::from_parts(bound, 1, [], members)
    }

    /// The ray `{start, start+1, ...}`.
    pub fn ray(start: u64) -> Self {
        UPSet::from_parts(start, 1, [0], [])
    }

    /// The arithmetic progression `{first, first+stride, ...}`.
    pub fn arithmetic(first: u64, stride: u64) -> Self {
        assert!(
            stride >= 1,
            "arithmetic progression stride must be positive"
        );
        UPSet::from_parts(first, stride, [first % stride], [])
    }

    /// All naturals congruent to `r` modulo `modulus`.
    pub fn residue_class(r: u64, modulus: u64) -> Self {
        UPSet::arithmetic(r % modulus, modulus)
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn exceptions(&self) -> &BTreeSet<u64> {
        &self.exceptions
    }

    pub fn contains(&self, n: u64) -> bool {
        if n < self.threshold {
            self.exceptions.contains(&n)
        } else {
            self.residues.contains(&(n % self.period))
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let p = lcm(self.period, other.period);
        let t = self.threshold.max(other.threshold);
        let residues = (0..p).filter(|&r| {
            self.residues.contains(&(r % self.period))
                && other.residues.contains(&(r % other.period))
        });
        // Any member below t lies below one of the thresholds, so it is an
        // exception of that side; the union of exception sets covers all
        // candidates.
        let exceptions = self
            .exceptions
            .iter()
            .chain(other.exceptions.iter())
            .cloned()
            .filter(|&n| n < t && self.contains(n) && other.contains(n));
        UPSet::from_parts(t, p, residues, exceptions)
    }

    pub fn union(&self, other: &Self) -> Self {
        let p = lcm(self.period, other.period);
        let t = self.threshold.max(other.threshold);
        let residues = (0..p).filter(|&r| {
            self.residues.contains(&(r % self.period))
                || other.residues.contains(&(r % other.period))
        });
        let exceptions = (0..t).filter(|&n| self.contains(n) || other.contains(n));
        UPSet::from_parts(t, p, residues, exceptions)
    }

    pub fn complement(&self) -> Self {
        let residues = (0..self.period).filter(|r| !self.residues.contains(r));
        let exceptions = (0..self.threshold).filter(|n| !self.exceptions.contains(n));
        UPSet::from_parts(self.threshold, self.period, residues, exceptions)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.exceptions.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    pub fn min_element(&self) -> Option<u64> {
        if let Some(&e) = self.exceptions.iter().next() {
            return Some(e);
        }
        (self.threshold..self.threshold + self.period)
            .find(|&n| self.residues.contains(&(n % self.period)))
    }

    /// Members strictly below `bound`, in increasing order.
    pub fn members_below(&self, bound: u64) -> Vec<u64> {
        (0..bound).filter(|&n| self.contains(n)).collect()
    }
}

impl fmt::Display for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.exceptions.is_empty() || self.is_empty() {
            let listed: Vec<String> = self.exceptions.iter().map(|e| e.to_string()).collect();
            parts.push(format!("finite{{{}}}", listed.join(", ")));
        }
        for &r in &self.residues {
            let first = (self.threshold..self.threshold + self.period)
                .find(|&n| n % self.period == r)
                .expect("nonempty residue window");
            parts.push(format!("ap({first}, {})", self.period));
        }
        write!(f, "{}", parts.join(" ∪ "))
    }
}

/// A representable subset of either backend's state space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StateSet {
    Finite(FiniteSet),
    Nat(UPSet),
}

impl StateSet {
    fn backend_name(&self) -> &'static str {
        match self {
            StateSet::Finite(_) => "finite",
            StateSet::Nat(_) => "nat",
        }
    }

    pub fn member(&self, x: State) -> Result<bool, SetError> {
        match self {
            StateSet::Finite(s) => {
                if x >= s.size() as u64 {
                    return Err(SetError::OutOfRange {
                        state: x,
                        size: s.size(),
                    });
                }
                Ok(s.contains(x))
            }
            StateSet::Nat(s) => Ok(s.contains(x)),
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, SetError> {
        match (self, other) {
            (StateSet::Finite(a), StateSet::Finite(b)) => Ok(StateSet::Finite(a.intersect(b)?)),
            (StateSet::Nat(a), StateSet::Nat(b)) => Ok(StateSet::Nat(a.intersect(b))),
            _ => Err(SetError::BackendMismatch(
                self.backend_name(),
                other.backend_name(),
            )),
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self, SetError> {
        match (self, other) {
            (StateSet::Finite(a), StateSet::Finite(b)) => Ok(StateSet::Finite(a.union(b)?)),
            (StateSet::Nat(a), StateSet::Nat(b)) => Ok(StateSet::Nat(a.union(b))),
            _ => Err(SetError::BackendMismatch(
                self.backend_name(),
                other.backend_name(),
            )),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            StateSet::Finite(s) => StateSet::Finite(s.complement()),
            StateSet::Nat(s) => StateSet::Nat(s.complement()),
        }
    }

    /// `self ⊆ other`, decided by `self ∩ other = self`.
    pub fn is_subset(&self, other: &Self) -> Result<bool, SetError> {
        Ok(self.intersect(other)? == *self)
    }

    pub fn is_empty(&self) -> bool {
        match self {
            StateSet::Finite(s) => s.is_empty(),
            StateSet::Nat(s) => s.is_empty(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        match self {
            StateSet::Finite(_) => false,
            StateSet::Nat(s) => s.is_infinite(),
        }
    }

    pub fn min_element(&self) -> Option<State> {
        match self {
            StateSet::Finite(s) => s.min_element(),
            StateSet::Nat(s) => s.min_element(),
        }
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSet::Finite(s) => s.fmt(f),
            StateSet::Nat(s) => s.fmt(f),
        }
    }
}

impl From<FiniteSet> for StateSet {
    fn from(s: FiniteSet) -> Self {
        StateSet::Finite(s)
    }
}

impl From<UPSet> for StateSet {
    fn from(s: UPSet) -> Self {
        StateSet::Nat(s)
    }
}
