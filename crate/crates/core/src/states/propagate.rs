//! Type-III propagation: the least fixpoint of
//! "a 1 forces 0 on all context-mates" and
//! "when all members but one are 0 the last one is 1".

use std::collections::VecDeque;
use std::fmt;

use super::{StatesError, TwoValuedState};
use crate::cloud::Cloud;

/// Why a value was assigned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Seed,
    /// `by` is 1 in `context`, so every mate is 0.
    ExclusiveOne {
        context: usize,
        by: usize,
    },
    /// Every other member of `context` is 0.
    LastFree {
        context: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub vertex: usize,
    pub value: bool,
    pub rule: Rule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    TwoOnes {
        context: usize,
        x: usize,
        y: usize,
    },
    AllZero {
        context: usize,
    },
    /// The seed itself gives one vertex both values.
    SeedConflict {
        vertex: usize,
    },
}

impl Witness {
    pub fn context(&self) -> Option<usize> {
        match *self {
            Witness::TwoOnes { context, .. } | Witness::AllZero { context } => Some(context),
            Witness::SeedConflict { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contradiction {
    pub witness: Witness,
    pub derivation: Vec<Step>,
}

impl Contradiction {
    /// Whether the derivation assigns `value` to `vertex`.
    pub fn assigns(&self, vertex: usize, value: bool) -> bool {
        self.derivation
            .iter()
            .any(|s| s.vertex == vertex && s.value == value)
    }

    /// Replays the derivation and checks that it ends in the witness.
    pub fn replays(&self, cloud: &Cloud) -> bool {
        let mut st = TwoValuedState::undefined(cloud.vertex_count());
        for step in &self.derivation {
            if st.get(step.vertex).is_some() {
                return false;
            }
            let ok = match step.rule {
                Rule::Seed => true,
                Rule::ExclusiveOne { context, by } => {
                    !step.value
                        && st.is_one(by)
                        && cloud.contexts()[context].contains(by)
                        && cloud.contexts()[context].contains(step.vertex)
                }
                Rule::LastFree { context } => {
                    let c = &cloud.contexts()[context];
                    step.value
                        && c.contains(step.vertex)
                        && c.members()
                            .iter()
                            .all(|&m| m == step.vertex || st.get(m) == Some(false))
                }
            };
            if !ok {
                return false;
            }
            st.set(step.vertex, Some(step.value));
        }
        match self.witness {
            Witness::TwoOnes { context, x, y } => {
                let c = &cloud.contexts()[context];
                x != y && c.contains(x) && c.contains(y) && st.is_one(x) && st.is_one(y)
            }
            Witness::AllZero { context } => cloud.contexts()[context]
                .members()
                .iter()
                .all(|&m| st.get(m) == Some(false)),
            Witness::SeedConflict { vertex } => self
                .derivation
                .iter()
                .any(|s| s.vertex == vertex && s.rule == Rule::Seed),
        }
    }

    pub fn describe(&self, cloud: &Cloud) -> String {
        let mut out = String::new();
        for s in &self.derivation {
            let why = match s.rule {
                Rule::Seed => "seed".to_string(),
                Rule::ExclusiveOne { context, by } => {
                    format!("{}=1 in {}", cloud.vertex(by), context_text(cloud, context))
                }
                Rule::LastFree { context } => {
                    format!("last free in {}", context_text(cloud, context))
                }
            };
            out.push_str(&format!(
                "{}={} ({why})\n",
                cloud.vertex(s.vertex),
                u8::from(s.value)
            ));
        }
        match self.witness {
            Witness::TwoOnes { context, x, y } => out.push_str(&format!(
                "contradiction: {} and {} both 1 in {}\n",
                cloud.vertex(x),
                cloud.vertex(y),
                context_text(cloud, context)
            )),
            Witness::AllZero { context } => out.push_str(&format!(
                "contradiction: {} entirely 0\n",
                context_text(cloud, context)
            )),
            Witness::SeedConflict { vertex } => out.push_str(&format!(
                "contradiction: seed sets {} both ways\n",
                cloud.vertex(vertex)
            )),
        }
        out
    }
}

fn context_text(cloud: &Cloud, c: usize) -> String {
    let names: Vec<&str> = cloud.context_names(c).iter().map(|v| v.as_str()).collect();
    format!("{{{}}}", names.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    Consistent {
        state: TwoValuedState,
        derivation: Vec<Step>,
    },
    Contradiction(Contradiction),
}

impl Propagation {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Propagation::Consistent { .. })
    }

    pub fn state(&self) -> Option<&TwoValuedState> {
        match self {
            Propagation::Consistent { state, .. } => Some(state),
            Propagation::Contradiction(_) => None,
        }
    }

    pub fn contradiction(&self) -> Option<&Contradiction> {
        match self {
            Propagation::Contradiction(c) => Some(c),
            Propagation::Consistent { .. } => None,
        }
    }
}

impl fmt::Display for Propagation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Propagation::Consistent { state, .. } => write!(f, "{state}"),
            Propagation::Contradiction(c) => match c.witness.context() {
                Some(ci) => write!(f, "contradiction in context #{ci}"),
                None => write!(f, "contradictory seed"),
            },
        }
    }
}

/// Propagates a seed given by vertex names.
pub fn propagate(cloud: &Cloud, seed: &[(&str, bool)]) -> Result<Propagation, StatesError> {
    let mut idx = Vec::with_capacity(seed.len());
    for &(name, value) in seed {
        idx.push((cloud.require(name)?, value));
    }
    Ok(propagate_indices(cloud, &idx))
}

/// Propagates with a first-in first-out worklist.
pub fn propagate_indices(cloud: &Cloud, seed: &[(usize, bool)]) -> Propagation {
    propagate_scheduled(cloud, seed, |_| 0)
}

/// Propagates, letting `pick(len)` choose which pending vertex to process
/// next (an index below `len`). The outcome does not depend on the choices;
/// only the derivation order does.
pub fn propagate_scheduled(
    cloud: &Cloud,
    seed: &[(usize, bool)],
    mut pick: impl FnMut(usize) -> usize,
) -> Propagation {
    let mut st = TwoValuedState::undefined(cloud.vertex_count());
    let mut derivation = Vec::new();
    let mut pending: VecDeque<usize> = VecDeque::new();
    let contradiction = |witness, derivation| {
        Propagation::Contradiction(Contradiction {
            witness,
            derivation,
        })
    };

    for &(v, value) in seed {
        match st.get(v) {
            Some(old) if old != value => {
                return contradiction(Witness::SeedConflict { vertex: v }, derivation);
            }
            Some(_) => {}
            None => {
                st.set(v, Some(value));
                derivation.push(Step {
                    vertex: v,
                    value,
                    rule: Rule::Seed,
                });
                pending.push_back(v);
            }
        }
    }

    while !pending.is_empty() {
        let i = pick(pending.len()).min(pending.len() - 1);
        let v = pending.remove(i).expect("index in range");
        for &ci in cloud.contexts_of(v) {
            let members = cloud.contexts()[ci].members();
            let mut ones = members.iter().copied().filter(|&m| st.is_one(m));
            if let Some(x) = ones.next() {
                if let Some(y) = ones.next() {
                    return contradiction(Witness::TwoOnes { context: ci, x, y }, derivation);
                }
                for &m in members {
                    if st.get(m).is_none() {
                        st.set(m, Some(false));
                        derivation.push(Step {
                            vertex: m,
                            value: false,
                            rule: Rule::ExclusiveOne { context: ci, by: x },
                        });
                        pending.push_back(m);
                    }
                }
            } else {
                let mut free = members.iter().copied().filter(|&m| st.get(m).is_none());
                match (free.next(), free.next()) {
                    (None, _) => {
                        return contradiction(Witness::AllZero { context: ci }, derivation);
                    }
                    (Some(last), None) => {
                        st.set(last, Some(true));
                        derivation.push(Step {
                            vertex: last,
                            value: true,
                            rule: Rule::LastFree { context: ci },
                        });
                        pending.push_back(last);
                    }
                    _ => {}
                }
            }
        }
    }
    Propagation::Consistent {
        state: st,
        derivation,
    }
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
    fn triangle_with_one_true_vertex_contradicts() {
        let c = cloud(&[&["x", "y"], &["y", "z"], &["z", "x"]]);
        let p = propagate(&c, &[("x", true)]).unwrap();
        let k = p.contradiction().expect("contradiction");
        assert!(k.replays(&c));
    }

    #[test]
    fn firefly_a_true_leaves_far_side_undefined() {
        let c = cloud(&[&["a", "v2", "v3"], &["v3", "v4", "b"]]);
        let p = propagate(&c, &[("a", true)]).unwrap();
        assert_eq!(p.state().unwrap().to_string(), "100--");
    }

    #[test]
    fn last_free_member_becomes_true() {
        let c = cloud(&[&["x", "y", "z"]]);
        let p = propagate(&c, &[("x", false), ("y", false)]).unwrap();
        assert_eq!(p.state().unwrap().to_string(), "001");
    }

    #[test]
    fn conflicting_seed_is_a_contradiction() {
        let c = cloud(&[&["x", "y"]]);
        assert!(!propagate(&c, &[("x", true), ("x", false)])
            .unwrap()
            .is_consistent());
        assert!(!propagate(&c, &[("x", true), ("y", true)])
            .unwrap()
            .is_consistent());
    }

    #[test]
    fn unknown_seed_vertex_is_an_error() {
        let c = cloud(&[&["x", "y"]]);
        assert!(propagate(&c, &[("q", true)]).is_err());
    }
}
