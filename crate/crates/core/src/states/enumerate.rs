//! Exhaustive type-II enumeration.
//!
//! Depth-first over contexts, always branching on the context with the fewest
//! undecided members ("which member is the 1?"), with unit propagation after
//! every choice. Branches are disjoint, so no state is produced twice.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use super::{Kind, StateSet, StatesError, TwoValuedState};
use crate::cloud::Cloud;

/// Resource guards for exponential searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub vertex_cap: usize,
    pub state_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            vertex_cap: 128,
            state_cap: 1_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with the state cap overridden by `CLOUDLAB_STATE_CAP` if set.
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        if let Some(cap) = std::env::var("CLOUDLAB_STATE_CAP")
            .ok()
            .and_then(|s| s.trim().parse().ok())
        {
            l.state_cap = cap;
        }
        l
    }
}

pub fn enumerate_states(cloud: &Cloud) -> Result<StateSet, StatesError> {
    enumerate_states_with(cloud, &Limits::default())
}

pub fn enumerate_states_with(cloud: &Cloud, limits: &Limits) -> Result<StateSet, StatesError> {
    let n = cloud.vertex_count();
    if n > limits.vertex_cap {
        return Err(StatesError::TooManyVertices {
            count: n,
            cap: limits.vertex_cap,
        });
    }
    let search = Search {
        cloud,
        found: AtomicUsize::new(0),
        overflow: AtomicBool::new(false),
        cap: limits.state_cap,
        isolated: (0..n)
            .filter(|&v| cloud.contexts_of(v).is_empty())
            .collect(),
    };
    let root = vec![None; n];
    let states = match search.pick_context(&root) {
        None => {
            let mut out = Vec::new();
            search.leaf(&root, &mut out);
            out
        }
        Some(ci) => {
            let branches: Vec<Vec<Option<bool>>> = search.branches(&root, ci).collect();
            let parts: Vec<Vec<TwoValuedState>> = branches
                .into_par_iter()
                .map(|st| {
                    let mut out = Vec::new();
                    search.descend(st, &mut out);
                    out
                })
                .collect();
            parts.into_iter().flatten().collect()
        }
    };
    if search.overflow.load(Ordering::Relaxed) {
        return Err(StatesError::TooManyStates {
            cap: limits.state_cap,
        });
    }
    Ok(StateSet::new(Kind::II, n, states))
}

/// Some type-II state, if any exists. Deterministic, and does not enumerate
/// beyond the first hit.
pub fn first_state(cloud: &Cloud) -> Option<TwoValuedState> {
    let search = Search {
        cloud,
        found: AtomicUsize::new(0),
        overflow: AtomicBool::new(false),
        cap: 1,
        isolated: Vec::new(),
    };
    fn go(search: &Search<'_>, st: Vec<Option<bool>>) -> Option<Vec<Option<bool>>> {
        match search.pick_context(&st) {
            None => Some(st),
            Some(ci) => {
                let children: Vec<_> = search.branches(&st, ci).collect();
                children.into_iter().find_map(|child| go(search, child))
            }
        }
    }
    go(&search, vec![None; cloud.vertex_count()]).map(|st| {
        // Vertices outside every context are set to 0.
        TwoValuedState::from_values(st.into_iter().map(|v| Some(v.unwrap_or(false))).collect())
    })
}

struct Search<'a> {
    cloud: &'a Cloud,
    found: AtomicUsize,
    overflow: AtomicBool,
    cap: usize,
    isolated: Vec<usize>,
}

impl Search<'_> {
    /// Undecided context with the fewest free members; `None` when every
    /// context already holds its 1.
    fn pick_context(&self, st: &[Option<bool>]) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (ci, c) in self.cloud.contexts().iter().enumerate() {
            if c.members().iter().any(|&m| st[m] == Some(true)) {
                continue;
            }
            let free = c.members().iter().filter(|&&m| st[m].is_none()).count();
            if best.is_none_or(|(_, f)| free < f) {
                best = Some((ci, free));
            }
        }
        best.map(|(ci, _)| ci)
    }

    fn branches<'s>(
        &'s self,
        st: &'s [Option<bool>],
        ci: usize,
    ) -> impl Iterator<Item = Vec<Option<bool>>> + 's {
        self.cloud.contexts()[ci]
            .members()
            .iter()
            .filter(move |&&m| st[m].is_none())
            .filter_map(move |&m| {
                let mut next = st.to_vec();
                close(self.cloud, &mut next, m).then_some(next)
            })
    }

    fn descend(&self, st: Vec<Option<bool>>, out: &mut Vec<TwoValuedState>) {
        if self.overflow.load(Ordering::Relaxed) {
            return;
        }
        match self.pick_context(&st) {
            None => self.leaf(&st, out),
            Some(ci) => {
                let children: Vec<_> = self.branches(&st, ci).collect();
                for child in children {
                    self.descend(child, out);
                }
            }
        }
    }

    /// Emits the completed state, expanding free isolated vertices both ways.
    fn leaf(&self, st: &[Option<bool>], out: &mut Vec<TwoValuedState>) {
        let k = self.isolated.len();
        if k >= usize::BITS as usize - 1 {
            self.overflow.store(true, Ordering::Relaxed);
            return;
        }
        for mask in 0..1usize << k {
            if self.found.fetch_add(1, Ordering::Relaxed) >= self.cap {
                self.overflow.store(true, Ordering::Relaxed);
                return;
            }
            let mut s = st.to_vec();
            for (bit, &v) in self.isolated.iter().enumerate() {
                s[v] = Some(mask >> bit & 1 == 1);
            }
            out.push(TwoValuedState::from_values(s));
        }
    }
}

/// Sets `v` to 1 and propagates in place; false on contradiction.
fn close(cloud: &Cloud, st: &mut [Option<bool>], v: usize) -> bool {
    st[v] = Some(true);
    let mut pending = vec![v];
    while let Some(u) = pending.pop() {
        for &ci in cloud.contexts_of(u) {
            let members = cloud.contexts()[ci].members();
            let mut ones = members.iter().filter(|&&m| st[m] == Some(true));
            if ones.next().is_some() {
                if ones.next().is_some() {
                    return false;
                }
                for &m in members {
                    if st[m].is_none() {
                        st[m] = Some(false);
                        pending.push(m);
                    }
                }
            } else {
                let mut free = members.iter().filter(|&&m| st[m].is_none());
                match (free.next(), free.next()) {
                    (None, _) => return false,
                    (Some(&last), None) => {
                        st[last] = Some(true);
                        pending.push(last);
                    }
                    _ => {}
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(contexts: &[&[&str]]) -> Cloud {
        let mut b = Cloud::builder("t");
        for c in contexts {
            b.context(c).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn single_context_has_unit_states() {
        let s = enumerate_states(&cloud(&[&["x", "y", "z"]])).unwrap();
        let text: Vec<String> = s.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["001", "010", "100"]);
    }

    #[test]
    fn firefly_has_five_states() {
        let s = enumerate_states(&cloud(&[&["a", "v2", "v3"], &["v3", "v4", "b"]])).unwrap();
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn triangle_has_none() {
        let s = enumerate_states(&cloud(&[&["x", "y"], &["y", "z"], &["z", "x"]])).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn isolated_vertices_are_free() {
        let mut b = Cloud::builder("t");
        b.vertex("w", None).unwrap();
        b.context(&["x", "y"]).unwrap();
        let s = enumerate_states(&b.build().unwrap()).unwrap();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn first_state_is_a_member() {
        let c = cloud(&[&["a", "v2", "v3"], &["v3", "v4", "b"]]);
        let all = enumerate_states(&c).unwrap();
        assert!(all.states().contains(&first_state(&c).unwrap()));
        assert!(first_state(&cloud(&[&["x", "y"], &["y", "z"], &["z", "x"]])).is_none());
    }

    #[test]
    fn caps_are_enforced() {
        let c = cloud(&[&["x", "y", "z"]]);
        let tight = Limits {
            vertex_cap: 128,
            state_cap: 2,
        };
        assert_eq!(
            enumerate_states_with(&c, &tight),
            Err(StatesError::TooManyStates { cap: 2 })
        );
        let small = Limits {
            vertex_cap: 2,
            state_cap: 10,
        };
        assert!(matches!(
            enumerate_states_with(&c, &small),
            Err(StatesError::TooManyVertices { count: 3, cap: 2 })
        ));
    }
}
