//! Classical two-valued states and everything derived from them.
//!
//! Type I assignments are only counted. Type II states are enumerated
//! exhaustively. Type III is the partial-assignment calculus driven by
//! [`propagate`].

mod classify;
mod enumerate;
mod propagate;
mod properties;

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::cloud::{Cloud, CloudError};

pub use classify::{
    classify_iii, classify_pair, classify_pair_with, classify_with_states, ks_check,
    relation_pairs, tits_pairs, KsCheck, Relation,
};
pub use enumerate::{enumerate_states, enumerate_states_with, first_state, Limits};
pub use propagate::{
    propagate, propagate_indices, propagate_scheduled, Contradiction, Propagation, Rule, Step,
    Witness,
};
pub use properties::{state_properties, PropertyReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatesError {
    #[error(transparent)]
    Cloud(#[from] CloudError),
    #[error("cloud has {count} vertices, above the cap of {cap}")]
    TooManyVertices { count: usize, cap: usize },
    #[error("more than {cap} two-valued states; raise the state cap to continue")]
    TooManyStates { cap: usize },
    #[error("terminals must differ, got `{0}` twice")]
    SamePair(String),
    #[error("state set was produced for a different cloud ({expected} vertices, got {got})")]
    WrongCloud { expected: usize, got: usize },
}

/// Which notion of classical truth assignment is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    I,
    II,
    III,
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "1" => Ok(Kind::I),
            "II" | "2" => Ok(Kind::II),
            "III" | "3" => Ok(Kind::III),
            _ => Err(format!("unknown state type `{s}` (expected I, II or III)")),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::I => "I",
            Kind::II => "II",
            Kind::III => "III",
        })
    }
}

/// Truth assignment over the vertex order of a cloud; `None` is undefined.
///
/// Ordering is lexicographic with `0 < 1`, which is the canonical state order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoValuedState {
    values: Vec<Option<bool>>,
}

impl TwoValuedState {
    pub fn undefined(n: usize) -> Self {
        TwoValuedState {
            values: vec![None; n],
        }
    }

    pub fn from_values(values: Vec<Option<bool>>) -> Self {
        TwoValuedState { values }
    }

    pub fn total(values: impl IntoIterator<Item = bool>) -> Self {
        TwoValuedState {
            values: values.into_iter().map(Some).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<bool> {
        self.values[v]
    }

    pub fn is_one(&self, v: usize) -> bool {
        self.values[v] == Some(true)
    }

    pub fn set(&mut self, v: usize, value: Option<bool>) {
        self.values[v] = value;
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == Some(true))
            .map(|(i, _)| i)
    }

    /// Exactly one 1 in every context, all vertices defined.
    pub fn is_type_ii(&self, cloud: &Cloud) -> bool {
        self.is_total()
            && cloud
                .contexts()
                .iter()
                .all(|c| c.members().iter().filter(|&&v| self.is_one(v)).count() == 1)
    }

    /// Parses the `0`/`1`/`-` string form.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(Some(false)),
                '1' => Some(Some(true)),
                '-' => Some(None),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(TwoValuedState::from_values)
    }

    /// `name=value` pairs for the defined vertices.
    pub fn describe(&self, cloud: &Cloud) -> String {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| format!("{}={}", cloud.vertex(i), u8::from(b))))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for TwoValuedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            f.write_str(match v {
                Some(true) => "1",
                Some(false) => "0",
                None => "-",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for TwoValuedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoValuedState({self})")
    }
}

/// A duplicate-free, canonically ordered set of states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet {
    kind: Kind,
    vertex_count: usize,
    states: Vec<TwoValuedState>,
}

impl StateSet {
    /// Sorts and deduplicates `states`.
    pub fn new(kind: Kind, vertex_count: usize, mut states: Vec<TwoValuedState>) -> Self {
        states.sort_unstable();
        states.dedup();
        StateSet {
            kind,
            vertex_count,
            states,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn states(&self) -> &[TwoValuedState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TwoValuedState> {
        self.states.iter()
    }
}

impl<'a> IntoIterator for &'a StateSet {
    type Item = &'a TwoValuedState;
    type IntoIter = std::slice::Iter<'a, TwoValuedState>;

    fn into_iter(self) -> Self::IntoIter {
        self.states.iter()
    }
}

/// Number of type-I assignments, `2^n`.
pub fn count_type_i(cloud: &Cloud) -> BigUint {
    BigUint::from(1u8) << cloud.vertex_count()
}
