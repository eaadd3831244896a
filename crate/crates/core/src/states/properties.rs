//! Unital / separating / full, plus forced values.

use std::fmt;

use super::{StateSet, StatesError};
use crate::cloud::Cloud;

/// Richness of a state set.
///
/// The lists are the literal findings. The flags are graded so that
/// `full ⇒ separating ⇒ unital` always holds: `separating` also requires
/// unitality and `full` also requires separation. The raw predicates alone do
/// not form that chain on every hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub count: usize,
    pub unital: bool,
    pub separating: bool,
    pub full: bool,
    /// Vertices that are 1 in no state.
    pub never_one: Vec<usize>,
    /// Distinct pairs `(x, y)`, `x < y`, on which every state agrees.
    pub unseparated: Vec<(usize, usize)>,
    /// Nonadjacent pairs `(x, y)`, `x < y`, never jointly 1.
    pub never_jointly_one: Vec<(usize, usize)>,
    pub forced_zero: Vec<usize>,
    pub forced_one: Vec<usize>,
}

impl PropertyReport {
    /// Every distinct pair is separated by some state.
    pub fn separating_raw(&self) -> bool {
        self.count > 0 && self.unseparated.is_empty()
    }

    pub fn is_unseparated(&self, x: usize, y: usize) -> bool {
        let p = if x < y { (x, y) } else { (y, x) };
        self.unseparated.binary_search(&p).is_ok()
    }

    pub fn render(&self, cloud: &Cloud) -> String {
        let name = |v: &usize| cloud.vertex(*v).to_string();
        let names = |vs: &[usize]| vs.iter().map(name).collect::<Vec<_>>().join(" ");
        let pairs = |ps: &[(usize, usize)]| {
            ps.iter()
                .map(|(x, y)| format!("{}-{}", cloud.vertex(*x), cloud.vertex(*y)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::new();
        out.push_str(&format!("states {}\n", self.count));
        if self.count == 0 {
            out.push_str("note empty state set\n");
        }
        out.push_str(&format!("unital {}\n", self.unital));
        out.push_str(&format!("separating {}\n", self.separating));
        out.push_str(&format!("full {}\n", self.full));
        out.push_str(&format!("never_one {}\n", names(&self.never_one)));
        out.push_str(&format!("forced_zero {}\n", names(&self.forced_zero)));
        out.push_str(&format!("forced_one {}\n", names(&self.forced_one)));
        out.push_str(&format!("unseparated {}\n", pairs(&self.unseparated)));
        out.push_str(&format!(
            "never_jointly_one {}\n",
            pairs(&self.never_jointly_one)
        ));
        out
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "states={} unital={} separating={} full={}",
            self.count, self.unital, self.separating, self.full
        )
    }
}

pub fn state_properties(cloud: &Cloud, states: &StateSet) -> Result<PropertyReport, StatesError> {
    let n = cloud.vertex_count();
    if states.vertex_count() != n {
        return Err(StatesError::WrongCloud {
            expected: n,
            got: states.vertex_count(),
        });
    }
    let value = |s: &super::TwoValuedState, v| s.get(v).unwrap_or(false);
    let never_one: Vec<usize> = (0..n)
        .filter(|&v| !states.iter().any(|s| s.is_one(v)))
        .collect();
    let forced_zero = if states.is_empty() {
        Vec::new()
    } else {
        (0..n)
            .filter(|&v| states.iter().all(|s| s.get(v) == Some(false)))
            .collect()
    };
    let forced_one = if states.is_empty() {
        Vec::new()
    } else {
        (0..n)
            .filter(|&v| states.iter().all(|s| s.is_one(v)))
            .collect()
    };
    let mut unseparated = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if !states.iter().any(|s| value(s, x) != value(s, y)) {
                unseparated.push((x, y));
            }
        }
    }
    let g = cloud.skeleton();
    let never_jointly_one: Vec<(usize, usize)> = g
        .nonadjacent_pairs()
        .into_iter()
        .filter(|&(x, y)| !states.iter().any(|s| s.is_one(x) && s.is_one(y)))
        .collect();
    let nonempty = !states.is_empty();
    let unital = nonempty && never_one.is_empty();
    let separating = unital && unseparated.is_empty();
    let full = separating && never_jointly_one.is_empty();
    Ok(PropertyReport {
        count: states.len(),
        unital,
        separating,
        full,
        never_one,
        unseparated,
        never_jointly_one,
        forced_zero,
        forced_one,
    })
}
