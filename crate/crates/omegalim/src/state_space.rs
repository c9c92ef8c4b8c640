//! State spaces, self-maps, and exact closed-form orbit descriptors.
//!
//! A space is either an explicit finite set `{0, .., size-1}` or the naturals.
//! Self-maps on the finite backend are full image tables; on the symbolic
//! backend they are drawn from a small closed class (identity, constant,
//! shift, and finitely many overrides over one of those tails) for which the
//! long-run behaviour of every orbit is decidable.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::set_algebra::{FiniteSet, StateSet, UPSet};
use crate::State;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StateSpaceError {
    #[error("state {state} out of range for finite space of size {size}")]
    OutOfRange { state: State, size: usize },
    #[error("image table entry {image} out of range for finite space of size {size}")]
    BadImage { image: State, size: usize },
    #[error("finite space must have at least one state")]
    EmptySpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateSpace {
    Finite { size: usize },
    Nat,
}

impl StateSpace {
    pub fn contains(&self, x: State) -> bool {
        match self {
            StateSpace::Finite { size } => x < *size as u64,
            StateSpace::Nat => true,
        }
    }

    /// The whole space as a set value of the matching backend.
    pub fn full_set(&self) -> StateSet {
        match self {
            StateSpace::Finite { size } => StateSet::Finite(FiniteSet::full(*size)),
            StateSpace::Nat => StateSet::Nat(UPSet::all()),
        }
    }

    pub fn empty_set(&self) -> StateSet {
        match self {
            StateSpace::Finite { size } => StateSet::Finite(FiniteSet::empty(*size)),
            StateSpace::Nat => StateSet::Nat(UPSet::empty()),
        }
    }
}

impl fmt::Display for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpace::Finite { size } => write!(f, "finite({size})"),
            StateSpace::Nat => write!(f, "nat"),
        }
    }
}

/// Tail behaviour of a symbolic map outside its finite override region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailMap {
    Identity,
    Constant(State),
    Shift(u64),
}

impl TailMap {
    fn apply(&self, x: State) -> State {
        match self {
            TailMap::Identity => x,
            TailMap::Constant(c) => *c,
            TailMap::Shift(d) => x + d,
        }
    }
}

impl fmt::Display for TailMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailMap::Identity => write!(f, "identity"),
            TailMap::Constant(c) => write!(f, "constant({c})"),
            TailMap::Shift(d) => write!(f, "shift({d})"),
        }
    }
}

/// A self-map of a state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapDescriptor {
    /// Total image table over a finite space; `table[x]` is the image of `x`.
    Table(Vec<State>),
    Identity,
    Constant(State),
    /// `x -> x + stride` on the naturals; stride is positive.
    Shift(u64),
    /// Finitely many explicit images over one of the symbolic tails.
    FiniteOverride {
        overrides: std::collections::BTreeMap<State, State>,
        tail: TailMap,
    },
}

impl MapDescriptor {
    /// Validated table constructor: nonempty, all images in range.
    pub fn table(images: Vec<State>) -> Result<Self, StateSpaceError> {
        if images.is_empty() {
            return Err(StateSpaceError::EmptySpace);
        }
        let size = images.len();
        for &im in &images {
            if im >= size as u64 {
                return Err(StateSpaceError::BadImage { image: im, size });
            }
        }
        Ok(MapDescriptor::Table(images))
    }

    pub fn shift(stride: u64) -> Self {
        assert!(stride >= 1, "shift stride must be positive");
        MapDescriptor::Shift(stride)
    }

    pub fn space(&self) -> StateSpace {
        match self {
            MapDescriptor::Table(t) => StateSpace::Finite { size: t.len() },
            _ => StateSpace::Nat,
        }
    }

    /// One application of the map.
    pub fn apply(&self, x: State) -> Result<State, StateSpaceError> {
        match self {
            MapDescriptor::Table(t) => {
                let size = t.len();
                if x >= size as u64 {
                    return Err(StateSpaceError::OutOfRange { state: x, size });
                }
                Ok(t[x as usize])
            }
            MapDescriptor::Identity => Ok(x),
            MapDescriptor::Constant(c) => Ok(*c),
            MapDescriptor::Shift(d) => Ok(x + d),
            MapDescriptor::FiniteOverride { overrides, tail } => {
                Ok(overrides.get(&x).copied().unwrap_or_else(|| tail.apply(x)))
            }
        }
    }

    /// `n`-fold application; `n = 0` returns `x`.
    pub fn iterate(&self, x: State, n: u64) -> Result<State, StateSpaceError> {
        match self {
            MapDescriptor::Identity => Ok(x),
            MapDescriptor::Constant(c) => Ok(if n == 0 { x } else { *c }),
            MapDescriptor::Shift(d) => Ok(x + n * d),
            _ => {
                let mut y = x;
                for _ in 0..n {
                    y = self.apply(y)?;
                }
                Ok(y)
            }
        }
    }

    /// Exact closed form of the orbit `T(x), T^2(x), ...`.
    pub fn orbit_descriptor(&self, x: State) -> Result<OrbitDescriptor, StateSpaceError> {
        match self {
            MapDescriptor::Table(t) => {
                if x >= t.len() as u64 {
                    return Err(StateSpaceError::OutOfRange {
                        state: x,
                        size: t.len(),
                    });
                }
                for &im in t {
                    if im >= t.len() as u64 {
                        return Err(StateSpaceError::BadImage {
                            image: im,
                            size: t.len(),
                        });
                    }
                }
                let step = |y: State| t[y as usize];
                let (mu, lam) = brent(x, step);
                let values: Vec<State> = std::iter::successors(Some(x), |&y| Some(step(y)))
                    .take(mu + lam)
                    .collect();
                Ok(descriptor_from_cycle(x, &values, mu, lam))
            }
            MapDescriptor::Identity => Ok(OrbitDescriptor {
                start: x,
                transient: Vec::new(),
                tail: OrbitTail::Cycle(vec![x]),
            }),
            MapDescriptor::Constant(c) => Ok(OrbitDescriptor {
                start: x,
                transient: Vec::new(),
                tail: OrbitTail::Cycle(vec![*c]),
            }),
            MapDescriptor::Shift(d) => Ok(OrbitDescriptor {
                start: x,
                transient: Vec::new(),
                tail: OrbitTail::Arithmetic {
                    first: x + d,
                    stride: *d,
                },
            }),
            MapDescriptor::FiniteOverride { overrides, tail } => {
                Ok(override_orbit(x, overrides, *tail))
            }
        }
    }
}

impl fmt::Display for MapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapDescriptor::Table(t) => {
                let entries: Vec<String> = t.iter().map(|v| v.to_string()).collect();
                write!(f, "table[{}]", entries.join(", "))
            }
            MapDescriptor::Identity => write!(f, "identity"),
            MapDescriptor::Constant(c) => write!(f, "constant({c})"),
            MapDescriptor::Shift(d) => write!(f, "shift({d})"),
            MapDescriptor::FiniteOverride { overrides, tail } => {
                let entries: Vec<String> =
                    overrides.iter().map(|(k, v)| format!("{k}: {v}")).collect();
                write!(f, "override{{{}; {tail}}}", entries.join(", "))
            }
        }
    }
}

/// Eventual behaviour of an orbit: either it falls into a cycle or it runs
/// along an arithmetic progression forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrbitTail {
    /// Minimal cycle, listed in orbit order starting with the first in-cycle
    /// iterate.
    Cycle(Vec<State>),
    /// `first, first+stride, first+2*stride, ...`
    Arithmetic { first: State, stride: u64 },
}

/// Exact presentation of the iterate sequence of one point: the values
/// `T(x), .., T^t(x)` that precede the tail, followed by the tail itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitDescriptor {
    start: State,
    transient: Vec<State>,
    tail: OrbitTail,
}

impl OrbitDescriptor {
    pub fn start(&self) -> State {
        self.start
    }

    pub fn transient(&self) -> &[State] {
        &self.transient
    }

    pub fn tail(&self) -> &OrbitTail {
        &self.tail
    }

    /// Reconstructs `T^n(x)`; `n = 0` returns the start point.
    pub fn state_at(&self, n: u64) -> State {
        if n == 0 {
            return self.start;
        }
        let t = self.transient.len() as u64;
        if n <= t {
            return self.transient[(n - 1) as usize];
        }
        let k = n - t - 1;
        match &self.tail {
            OrbitTail::Cycle(c) => c[(k % c.len() as u64) as usize],
            OrbitTail::Arithmetic { first, stride } => first + k * stride,
        }
    }
}

/// Brent's cycle detection over an eventually periodic sequence; returns the
/// transient length `mu` (index of the first in-cycle value, counting the
/// start as 0) and the minimal period `lam`. Constant memory.
fn brent<F: Fn(State) -> State>(x0: State, f: F) -> (usize, usize) {
    let mut power = 1usize;
    let mut lam = 1usize;
    let mut tortoise = x0;
    let mut hare = f(x0);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = f(hare);
        lam += 1;
    }
    let mut mu = 0usize;
    tortoise = x0;
    hare = (0..lam).fold(x0, |y, _| f(y));
    while tortoise != hare {
        tortoise = f(tortoise);
        hare = f(hare);
        mu += 1;
    }
    (mu, lam)
}

/// Builds the descriptor for an orbit that enters a cycle, from the simulated
/// values `values[i] = T^i(x)` for `i < mu + lam`.
///
/// The descriptor indexes iterates from 1, so when the start point itself is
/// on the cycle (`mu = 0`) the cycle list is rotated to begin at `T(x)`.
fn descriptor_from_cycle(start: State, values: &[State], mu: usize, lam: usize) -> OrbitDescriptor {
    let first_tail = mu.max(1);
    let transient = values[1..first_tail].to_vec();
    let cycle: Vec<State> = (0..lam)
        .map(|i| {
            let idx = first_tail + i;
            if idx < mu + lam {
                values[idx]
            } else {
                values[idx - lam]
            }
        })
        .collect();
    OrbitDescriptor {
        start,
        transient,
        tail: OrbitTail::Cycle(cycle),
    }
}

/// Simulates an override map until the orbit either revisits a state (cycle)
/// or escapes above every override key under a shift tail (arithmetic). Both
/// happen after finitely many steps: with an identity or constant tail the
/// reachable values are confined to the overrides plus at most two more
/// states, and with a shift tail the pre-escape values are bounded by the
/// largest override key plus the stride.
fn override_orbit(
    x: State,
    overrides: &std::collections::BTreeMap<State, State>,
    tail: TailMap,
) -> OrbitDescriptor {
    let max_key = overrides.keys().next_back().copied();
    let step = |y: State| overrides.get(&y).copied().unwrap_or_else(|| tail.apply(y));

    let mut values = vec![x];
    let mut seen: HashMap<State, usize> = HashMap::from([(x, 0)]);
    loop {
        let current = *values.last().expect("nonempty");
        if let TailMap::Shift(d) = tail {
            let escaped = max_key.is_none_or(|m| current > m);
            if escaped {
                // From here on the orbit is pure shift. The tail starts at the
                // first iterate at or after the current position, then absorbs
                // any earlier iterates that already follow the progression.
                let n = values.len() - 1;
                let (mut transient, mut first) = if n == 0 {
                    (Vec::new(), x + d)
                } else {
                    (values[1..n].to_vec(), values[n])
                };
                while transient.last().is_some_and(|&last| last + d == first) {
                    first = transient.pop().expect("nonempty");
                }
                return OrbitDescriptor {
                    start: x,
                    transient,
                    tail: OrbitTail::Arithmetic { first, stride: d },
                };
            }
        }
        let next = step(current);
        if let Some(&i) = seen.get(&next) {
            let lam = values.len() - i;
            return descriptor_from_cycle(x, &values, i, lam);
        }
        seen.insert(next, values.len());
        values.push(next);
    }
}
