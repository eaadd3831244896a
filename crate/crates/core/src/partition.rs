//! Set representations built from a family of two-valued states: each
//! vertex becomes the set of states that make it true.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::cloud::{Cloud, VertexId};
use crate::states::{Kind, StateSet, TwoValuedState};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("no two-valued states; nothing to partition")]
    Empty,
    #[error("partition logics need type II states, got type {0}")]
    WrongKind(Kind),
    #[error("states cover {got} vertices, the cloud has {expected}")]
    WrongCloud { expected: usize, got: usize },
    #[error("state {0} is not total")]
    Partial(usize),
}

/// Ground set `0..ground_size()` (state indices) and, per vertex, the
/// ascending list of states assigning it 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionLogic {
    ground: usize,
    names: Vec<VertexId>,
    atoms: Vec<Vec<usize>>,
}

impl PartitionLogic {
    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn atom(&self, v: usize) -> &[usize] {
        &self.atoms[v]
    }

    pub fn atom_of(&self, name: &str) -> Option<&[usize]> {
        let i = self.names.iter().position(|n| n.as_str() == name)?;
        Some(&self.atoms[i])
    }

    pub fn vertex_count(&self) -> usize {
        self.atoms.len()
    }

    /// State `i` assigns 1 to `v` iff `i` is in the atom of `v`.
    pub fn read_back(&self) -> StateSet {
        let n = self.atoms.len();
        let mut values = vec![vec![false; n]; self.ground];
        for (v, atom) in self.atoms.iter().enumerate() {
            for &i in atom {
                values[i][v] = true;
            }
        }
        StateSet::new(
            Kind::II,
            n,
            values.into_iter().map(TwoValuedState::total).collect(),
        )
    }

    /// Ball types are ground indices, colors are contexts; each cell holds
    /// the member of the context whose atom contains the ball.
    pub fn urn_table(&self, cloud: &Cloud) -> String {
        let mut out = String::from("ball");
        for c in 0..cloud.context_count() {
            let _ = write!(out, "\tC{}", c + 1);
        }
        out.push('\n');
        for i in 0..self.ground {
            let _ = write!(out, "{i}");
            for ctx in cloud.contexts() {
                let cell = ctx
                    .members()
                    .iter()
                    .find(|&&m| self.atoms[m].binary_search(&i).is_ok())
                    .map_or("?", |&m| self.names[m].as_str());
                let _ = write!(out, "\t{cell}");
            }
            out.push('\n');
        }
        out
    }
}

/// `vertex: {i,j,...}` lines.
impl fmt::Display for PartitionLogic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, atom) in self.names.iter().zip(&self.atoms) {
            let items: Vec<String> = atom.iter().map(usize::to_string).collect();
            writeln!(f, "{name}: {{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

pub fn build_partition_logic(
    cloud: &Cloud,
    states: &StateSet,
) -> Result<PartitionLogic, PartitionError> {
    if states.kind() != Kind::II {
        return Err(PartitionError::WrongKind(states.kind()));
    }
    if states.vertex_count() != cloud.vertex_count() {
        return Err(PartitionError::WrongCloud {
            expected: cloud.vertex_count(),
            got: states.vertex_count(),
        });
    }
    if states.is_empty() {
        return Err(PartitionError::Empty);
    }
    let mut atoms = vec![Vec::new(); cloud.vertex_count()];
    for (i, s) in states.iter().enumerate() {
        if !s.is_total() {
            return Err(PartitionError::Partial(i));
        }
        for v in s.ones() {
            atoms[v].push(i);
        }
    }
    Ok(PartitionLogic {
        ground: states.len(),
        names: cloud.vertices().to_vec(),
        atoms,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetRepresentationReport {
    /// `(context, ball)` where the ball is in no atom or in several atoms
    /// of the context.
    pub partition_failures: Vec<(usize, usize)>,
    /// Distinct vertices with equal atoms.
    pub collisions: Vec<(VertexId, VertexId)>,
}

impl SetRepresentationReport {
    pub fn partitions_hold(&self) -> bool {
        self.partition_failures.is_empty()
    }

    pub fn injective(&self) -> bool {
        self.collisions.is_empty()
    }

    pub fn set_representable(&self) -> bool {
        self.partitions_hold() && self.injective()
    }
}

impl fmt::Display for SetRepresentationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, i) in &self.partition_failures {
            writeln!(f, "context C{} does not partition at ball {i}", c + 1)?;
        }
        for (x, y) in &self.collisions {
            writeln!(f, "collision {x} {y}")?;
        }
        writeln!(
            f,
            "{}",
            if self.set_representable() {
                "set-representable"
            } else {
                "not set-representable"
            }
        )
    }
}

pub fn verify_set_representation(pl: &PartitionLogic, cloud: &Cloud) -> SetRepresentationReport {
    let mut partition_failures = Vec::new();
    for (ci, ctx) in cloud.contexts().iter().enumerate() {
        let mut hits = vec![0usize; pl.ground];
        for &m in ctx.members() {
            for &i in pl.atom(m) {
                hits[i] += 1;
            }
        }
        partition_failures.extend(
            hits.iter()
                .enumerate()
                .filter(|(_, &h)| h != 1)
                .map(|(i, _)| (ci, i)),
        );
    }
    let mut by_atom: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for v in 0..pl.vertex_count() {
        by_atom.entry(pl.atom(v)).or_default().push(v);
    }
    let mut collisions = Vec::new();
    for x in 0..pl.vertex_count() {
        for &y in &by_atom[pl.atom(x)] {
            if y > x {
                collisions.push((pl.names[x].clone(), pl.names[y].clone()));
            }
        }
    }
    SetRepresentationReport {
        partition_failures,
        collisions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::{dataset, load};
    use crate::states::{enumerate_states, state_properties};

    fn logic(name: &str) -> (Cloud, StateSet, PartitionLogic) {
        let c = load(name).unwrap().cloud;
        let s = enumerate_states(&c).unwrap();
        let pl = build_partition_logic(&c, &s).unwrap();
        (c, s, pl)
    }

    #[test]
    fn single_context_gives_delta_atoms() {
        let (_, _, pl) = logic("single(3)");
        assert_eq!(pl.to_string(), "x1: {2}\nx2: {1}\nx3: {0}\n");
    }

    #[test]
    fn firefly_is_set_representable() {
        let (c, s, pl) = logic("firefly");
        assert_eq!(pl.ground_size(), 5);
        let r = verify_set_representation(&pl, &c);
        assert!(r.set_representable(), "{r}");
        assert_eq!(pl.read_back(), s);
        let table = pl.urn_table(&c);
        assert_eq!(table.lines().count(), 6);
        assert!(table.starts_with("ball\tC1\tC2\n"));
    }

    #[test]
    fn tifs38_collisions_match_unseparated_pairs() {
        let (c, s, pl) = logic("tifs38");
        let r = verify_set_representation(&pl, &c);
        assert!(r.partitions_hold());
        assert!(!r.set_representable());
        let props = state_properties(&c, &s).unwrap();
        let mut want: Vec<(String, String)> = props
            .unseparated
            .iter()
            .map(|&(x, y)| (c.vertex(x).to_string(), c.vertex(y).to_string()))
            .collect();
        let mut got: Vec<(String, String)> = r
            .collisions
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        want.sort();
        got.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn hh10_is_set_representable() {
        let c = dataset("hh10", &[]).unwrap().cloud;
        let s = enumerate_states(&c).unwrap();
        let pl = build_partition_logic(&c, &s).unwrap();
        assert!(verify_set_representation(&pl, &c).set_representable());
    }

    #[test]
    fn errors() {
        let c = load("triangle").unwrap().cloud;
        let s = enumerate_states(&c).unwrap();
        assert_eq!(build_partition_logic(&c, &s), Err(PartitionError::Empty));
        let f = load("firefly").unwrap().cloud;
        let s = enumerate_states(&f).unwrap();
        assert!(matches!(
            build_partition_logic(&c, &s),
            Err(PartitionError::WrongCloud { .. })
        ));
    }
}
