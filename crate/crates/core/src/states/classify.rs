//! Terminal-pair relations ("if a is true, then b is ...").

use std::fmt;

use rayon::prelude::*;

use super::{
    enumerate_states_with, first_state, propagate_indices, Kind, Limits, StateSet, StatesError,
    TwoValuedState,
};
use crate::cloud::Cloud;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    NoStateWithATrue,
    /// True implies false.
    Tifs,
    /// True implies true.
    Tits,
    Equivalent,
    Opposite,
    Independent,
    /// Type III only: with a = 1 neither value of b is consistent.
    ValueIndefinite,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::NoStateWithATrue,
        Relation::Tifs,
        Relation::Tits,
        Relation::Equivalent,
        Relation::Opposite,
        Relation::Independent,
        Relation::ValueIndefinite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::NoStateWithATrue => "NO_STATE_WITH_A_TRUE",
            Relation::Tifs => "TIFS",
            Relation::Tits => "TITS",
            Relation::Equivalent => "EQUIVALENT",
            Relation::Opposite => "OPPOSITE",
            Relation::Independent => "INDEPENDENT",
            Relation::ValueIndefinite => "VALUE_INDEFINITE",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown relation `{s}`"))
    }
}

/// Classifies the ordered pair `(a, b)`.
///
/// Kind I is unconstrained, so every pair is independent there.
pub fn classify_pair(cloud: &Cloud, a: &str, b: &str, kind: Kind) -> Result<Relation, StatesError> {
    classify_pair_with(cloud, a, b, kind, &Limits::default())
}

pub fn classify_pair_with(
    cloud: &Cloud,
    a: &str,
    b: &str,
    kind: Kind,
    limits: &Limits,
) -> Result<Relation, StatesError> {
    let ia = cloud.require(a)?;
    let ib = cloud.require(b)?;
    if ia == ib {
        return Err(StatesError::SamePair(a.to_string()));
    }
    Ok(match kind {
        Kind::I => Relation::Independent,
        Kind::II => classify_with_states(&enumerate_states_with(cloud, limits)?, ia, ib),
        Kind::III => classify_iii(cloud, ia, ib),
    })
}

/// Type-II relation of `(a, b)` read off an enumerated state set.
pub fn classify_with_states(states: &StateSet, a: usize, b: usize) -> Relation {
    let with_a: Vec<&TwoValuedState> = states.iter().filter(|s| s.is_one(a)).collect();
    if with_a.is_empty() {
        return Relation::NoStateWithATrue;
    }
    if states.iter().all(|s| s.get(a) == s.get(b)) {
        return Relation::Equivalent;
    }
    if states.iter().all(|s| s.get(a) != s.get(b)) {
        return Relation::Opposite;
    }
    let b_one = with_a.iter().filter(|s| s.is_one(b)).count();
    if b_one == 0 {
        Relation::Tifs
    } else if b_one == with_a.len() {
        Relation::Tits
    } else {
        Relation::Independent
    }
}

/// Type-III relation through propagation consistency.
pub fn classify_iii(cloud: &Cloud, a: usize, b: usize) -> Relation {
    if !propagate_indices(cloud, &[(a, true)]).is_consistent() {
        return Relation::NoStateWithATrue;
    }
    let both = propagate_indices(cloud, &[(a, true), (b, true)]).is_consistent();
    let a_not_b = propagate_indices(cloud, &[(a, true), (b, false)]).is_consistent();
    match (both, a_not_b) {
        (false, true) => Relation::Tifs,
        (true, false) => Relation::Tits,
        (true, true) => Relation::Independent,
        (false, false) => Relation::ValueIndefinite,
    }
}

/// Ordered nonadjacent pairs `(x, y)` classified as `relation`, in index
/// order. Adjacent pairs are skipped because they are trivially TIFS.
pub fn relation_pairs(
    cloud: &Cloud,
    kind: Kind,
    relation: Relation,
    limits: &Limits,
) -> Result<Vec<(usize, usize)>, StatesError> {
    let g = cloud.skeleton();
    let n = cloud.vertex_count();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| x != y && !g.has_edge(x, y))
        .collect();
    let out = match kind {
        Kind::I => {
            if relation == Relation::Independent {
                pairs
            } else {
                Vec::new()
            }
        }
        Kind::II => {
            let states = enumerate_states_with(cloud, limits)?;
            pairs
                .into_par_iter()
                .filter(|&(x, y)| classify_with_states(&states, x, y) == relation)
                .collect()
        }
        Kind::III => pairs
            .into_par_iter()
            .filter(|&(x, y)| classify_iii(cloud, x, y) == relation)
            .collect(),
    };
    Ok(out)
}

pub fn tits_pairs(cloud: &Cloud, kind: Kind) -> Result<Vec<(usize, usize)>, StatesError> {
    relation_pairs(cloud, kind, Relation::Tits, &Limits::default())
}

/// Outcome of the Kochen–Specker test: no type-II state at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsCheck {
    pub kochen_specker: bool,
    pub witness: Option<TwoValuedState>,
}

pub fn ks_check(cloud: &Cloud) -> KsCheck {
    let witness = first_state(cloud);
    KsCheck {
        kochen_specker: witness.is_none(),
        witness,
    }
}
