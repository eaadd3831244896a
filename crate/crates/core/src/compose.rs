//! Pasting clouds along identified vertices, and the cross-product
//! extension that turns a true-implies-false pair into a true-implies-true
//! pair.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::cloud::{Cloud, CloudError, VertexId};
use crate::geometry::{
    standard_construction, verify_representation, GeometryError, Ray, Representation, Violation,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComposeError {
    #[error(transparent)]
    Cloud(#[from] CloudError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("identification maps `{0}` more than once")]
    RepeatedSource(String),
    #[error("identification is not injective: `{0}` is hit twice")]
    NotInjective(String),
    #[error("malformed identification `{0}`; expected `b_vertex=a_vertex`")]
    Malformed(String),
    #[error("terminals `{0}` and `{1}` are orthogonal; the construction degenerates")]
    OrthogonalTerminals(String, String),
}

/// Vertices of the second cloud mapped onto vertices of the first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Identification {
    pairs: Vec<(VertexId, VertexId)>,
}

impl Identification {
    /// `(b_vertex, a_vertex)` pairs.
    pub fn new<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self, ComposeError> {
        let mut from = HashSet::new();
        let mut to = HashSet::new();
        let mut out = Vec::with_capacity(pairs.len());
        for (b, a) in pairs {
            let (b, a) = (VertexId::new(b.as_ref())?, VertexId::new(a.as_ref())?);
            if !from.insert(b.clone()) {
                return Err(ComposeError::RepeatedSource(b.to_string()));
            }
            if !to.insert(a.clone()) {
                return Err(ComposeError::NotInjective(a.to_string()));
            }
            out.push((b, a));
        }
        Ok(Identification { pairs: out })
    }

    /// `b1=a1,b2=a2`; whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self, ComposeError> {
        let mut pairs = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (b, a) = item
                .split_once('=')
                .ok_or_else(|| ComposeError::Malformed(item.to_string()))?;
            pairs.push((b.trim(), a.trim()));
        }
        Identification::new(&pairs)
    }

    pub fn pairs(&self) -> &[(VertexId, VertexId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn image(&self, b: &str) -> Option<&VertexId> {
        self.pairs
            .iter()
            .find(|(x, _)| x.as_str() == b)
            .map(|(_, a)| a)
    }
}

/// Result of [`paste_with`].
#[derive(Clone, Debug)]
pub struct Pasted {
    pub cloud: Cloud,
    /// Name in the result for every vertex of the second cloud, in its
    /// vertex order.
    pub mapping: Vec<(VertexId, VertexId)>,
    /// Contexts of the second cloud that coincided with an existing context
    /// after renaming and were dropped.
    pub merged_contexts: Vec<Vec<VertexId>>,
}

impl Pasted {
    /// Carries the second cloud's rays over to the pasted names.
    pub fn map_representation(&self, rep: &Representation) -> Representation {
        let map: HashMap<&str, &VertexId> = self
            .mapping
            .iter()
            .map(|(from, to)| (from.as_str(), to))
            .collect();
        rep.rename(|v| {
            map.get(v.as_str())
                .map_or_else(|| v.clone(), |t| (*t).clone())
        })
    }
}

/// [`paste_with`] using the suffix `'`.
pub fn paste(a: &Cloud, b: &Cloud, ident: &Identification) -> Result<Cloud, ComposeError> {
    Ok(paste_with(a, b, ident, "'")?.cloud)
}

/// Glues `b` onto `a`. Identified vertices of `b` take their image's name;
/// the others get `suffix` appended (repeatedly, until the name is free).
/// Contexts that become equal as sets are merged. The result keeps `a`'s
/// terminals.
pub fn paste_with(
    a: &Cloud,
    b: &Cloud,
    ident: &Identification,
    suffix: &str,
) -> Result<Pasted, ComposeError> {
    for (x, y) in ident.pairs() {
        b.require(x.as_str())?;
        a.require(y.as_str())?;
    }
    let mut taken: HashSet<String> = a.vertices().iter().map(|v| v.to_string()).collect();
    let mut mapping = Vec::with_capacity(b.vertex_count());
    for v in b.vertices() {
        let target = match ident.image(v.as_str()) {
            Some(t) => t.clone(),
            None => {
                let mut name = format!("{v}{suffix}");
                while taken.contains(&name) {
                    name.push_str(if suffix.is_empty() { "'" } else { suffix });
                }
                taken.insert(name.clone());
                VertexId::new(name)?
            }
        };
        mapping.push((v.clone(), target));
    }
    let mut builder = a.to_builder();
    builder.name(format!("{}_{}", a.name(), b.name()));
    let mut seen: HashSet<BTreeSet<String>> = (0..a.context_count())
        .map(|c| {
            a.context_names(c)
                .into_iter()
                .map(|v| v.to_string())
                .collect()
        })
        .collect();
    let mut merged_contexts = Vec::new();
    for (i, v) in b.vertices().iter().enumerate() {
        if let Some(l) = b.label(i) {
            if ident.image(v.as_str()).is_none() {
                builder.vertex(mapping[i].1.as_str(), Some(l))?;
            }
        }
    }
    for ctx in b.contexts() {
        let names: Vec<&VertexId> = ctx.members().iter().map(|&m| &mapping[m].1).collect();
        let set: BTreeSet<String> = names.iter().map(|v| v.to_string()).collect();
        if !seen.insert(set) {
            merged_contexts.push(names.into_iter().cloned().collect());
            continue;
        }
        builder.context(&names.iter().map(|v| v.as_str()).collect::<Vec<_>>())?;
    }
    // Isolated vertices of `b` still belong to the result.
    for (i, (_, to)) in mapping.iter().enumerate() {
        if b.contexts_of(i).is_empty() && !builder.has_vertex(to.as_str()) {
            builder.vertex(to.as_str(), None)?;
        }
    }
    Ok(Pasted {
        cloud: builder.build()?,
        mapping,
        merged_contexts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    C,
    D,
    E,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::C => "c",
            Role::D => "d",
            Role::E => "e",
        })
    }
}

/// How each constructed ray found its vertex.
#[derive(Clone, Debug, PartialEq)]
pub enum Placement {
    /// The ray already belonged to this vertex.
    Collided(VertexId),
    /// This vertex had no ray and is adjacent to both construction partners;
    /// it takes the constructed ray.
    Adopted(VertexId),
    /// A fresh vertex.
    New(VertexId),
}

impl Placement {
    pub fn vertex(&self) -> &VertexId {
        match self {
            Placement::Collided(v) | Placement::Adopted(v) | Placement::New(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyReport {
    pub placements: Vec<(Role, Placement, Ray)>,
    pub new_contexts: Vec<Vec<VertexId>>,
    /// Construction contexts that were already present.
    pub existing_contexts: Vec<Vec<VertexId>>,
    /// Representation violations of the extended cloud.
    pub violations: Vec<Violation>,
}

impl DegeneracyReport {
    /// `(role, existing vertex)` for rays that were already present.
    pub fn collided(&self) -> Vec<(Role, &VertexId)> {
        self.placements
            .iter()
            .filter_map(|(r, p, _)| match p {
                Placement::Collided(v) => Some((*r, v)),
                _ => None,
            })
            .collect()
    }

    pub fn adopted(&self) -> Vec<(Role, &VertexId)> {
        self.placements
            .iter()
            .filter_map(|(r, p, _)| match p {
                Placement::Adopted(v) => Some((*r, v)),
                _ => None,
            })
            .collect()
    }

    pub fn new_vertices(&self) -> Vec<&VertexId> {
        self.placements
            .iter()
            .filter_map(|(_, p, _)| match p {
                Placement::New(v) => Some(v),
                _ => None,
            })
            .collect()
    }

    pub fn vertex(&self, role: Role) -> &VertexId {
        self.placements
            .iter()
            .find(|(r, _, _)| *r == role)
            .map(|(_, p, _)| p.vertex())
            .expect("all roles are placed")
    }
}

impl fmt::Display for DegeneracyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (role, p, ray) in &self.placements {
            let (how, v) = match p {
                Placement::Collided(v) => ("collides with", v),
                Placement::Adopted(v) => ("adopted by", v),
                Placement::New(v) => ("new vertex", v),
            };
            writeln!(f, "{role} = {ray} {how} {v}")?;
        }
        let join = |c: &[VertexId]| c.iter().map(VertexId::as_str).collect::<Vec<_>>().join(" ");
        for c in &self.new_contexts {
            writeln!(f, "context added: {}", join(c))?;
        }
        for c in &self.existing_contexts {
            writeln!(f, "context present: {}", join(c))?;
        }
        for v in &self.violations {
            writeln!(
                f,
                "violation {} {} {} dot={}",
                v.kind, v.x, v.y, v.inner_product
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Extension {
    pub cloud: Cloud,
    pub representation: Representation,
    pub report: DegeneracyReport,
}

/// Adds `c = a×b`, `d = b×c`, `e = a×c` and the contexts `{b, c, d}`,
/// `{a, e, c}`.
///
/// A constructed ray equal to one already in `rep` reuses that vertex. A
/// vertex without a ray that is adjacent to both partners of the new ray
/// (`a, b` for `c`; `b, c` for `d`; `a, c` for `e`) is adopted instead of
/// adding a fresh one. Fresh vertices are named `c`, `d`, `e`, primed until
/// unused.
pub fn extend_to_tits(
    cloud: &Cloud,
    rep: &Representation,
    a: &str,
    b: &str,
) -> Result<Extension, ComposeError> {
    cloud.require(a)?;
    cloud.require(b)?;
    for (v, _) in rep.iter() {
        cloud.require(v.as_str())?;
    }
    let k = standard_construction(rep, a, b)?;
    if k.degenerate {
        return Err(ComposeError::OrthogonalTerminals(a.into(), b.into()));
    }
    let mut builder = cloud.to_builder();
    let mut rep = rep.clone();
    let g = cloud.skeleton();
    let a_id = VertexId::new(a)?;
    let b_id = VertexId::new(b)?;
    let mut placements: Vec<(Role, Placement, Ray)> = Vec::new();
    for (role, ray) in [(Role::C, k.c), (Role::D, k.d), (Role::E, k.e)] {
        let partners: [&VertexId; 2] = match role {
            Role::C => [&a_id, &b_id],
            Role::D => [&b_id, placements[0].1.vertex()],
            Role::E => [&a_id, placements[0].1.vertex()],
        };
        let placement = if let Some(v) = rep.find(&ray) {
            Placement::Collided(v.clone())
        } else if let Some(v) = adoptable(cloud, &g, &rep, &partners) {
            Placement::Adopted(v)
        } else {
            let mut name = role.to_string();
            while builder.has_vertex(&name) {
                name.push('\'');
            }
            builder.vertex(&name, None)?;
            Placement::New(VertexId::new(name)?)
        };
        if !matches!(placement, Placement::Collided(_)) {
            rep.insert(placement.vertex().clone(), ray.clone())?;
        }
        placements.push((role, placement, ray));
    }
    let (c, d, e) = (
        placements[0].1.vertex().clone(),
        placements[1].1.vertex().clone(),
        placements[2].1.vertex().clone(),
    );
    let existing: HashSet<BTreeSet<&str>> = (0..cloud.context_count())
        .map(|i| {
            cloud
                .context_names(i)
                .into_iter()
                .map(VertexId::as_str)
                .collect()
        })
        .collect();
    let mut new_contexts = Vec::new();
    let mut existing_contexts = Vec::new();
    for ctx in [vec![b_id.clone(), c.clone(), d], vec![a_id.clone(), e, c]] {
        let set: BTreeSet<&str> = ctx.iter().map(VertexId::as_str).collect();
        if existing.contains(&set) {
            existing_contexts.push(ctx);
        } else {
            builder.context(&ctx.iter().map(VertexId::as_str).collect::<Vec<_>>())?;
            new_contexts.push(ctx);
        }
    }
    let extended = builder.build()?;
    let violations = verify_representation(&extended, &rep)?.violations;
    Ok(Extension {
        cloud: extended,
        representation: rep,
        report: DegeneracyReport {
            placements,
            new_contexts,
            existing_contexts,
            violations,
        },
    })
}

fn adoptable(
    cloud: &Cloud,
    g: &crate::cloud::SkeletonGraph,
    rep: &Representation,
    partners: &[&VertexId; 2],
) -> Option<VertexId> {
    let p: Vec<usize> = partners
        .iter()
        .map(|v| cloud.index_of(v.as_str()))
        .collect::<Option<_>>()?;
    (0..cloud.vertex_count())
        .filter(|&v| !p.contains(&v))
        .filter(|&v| rep.get(cloud.vertex(v).as_str()).is_none())
        .find(|&v| g.has_edge(v, p[0]) && g.has_edge(v, p[1]))
        .map(|v| cloud.vertex(v).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::dataset;
    use crate::states::{classify_pair, Kind, Relation};

    #[test]
    fn firefly_chain() {
        let f = dataset("firefly", &[]).unwrap().cloud;
        let p = paste(&f, &f, &Identification::parse("a=b").unwrap()).unwrap();
        assert_eq!(p.vertex_count(), 9);
        assert_eq!(p.context_count(), 4);
        assert!(p.index_of("v3'").is_some());
        assert_eq!(p.terminal_names().unwrap().1.as_str(), "b");
    }

    #[test]
    fn identical_contexts_merge() {
        let f = dataset("firefly", &[]).unwrap().cloud;
        let id = Identification::parse("a=a, v2=v2, v3=v3").unwrap();
        let p = paste_with(&f, &f, &id, "'").unwrap();
        assert_eq!(p.merged_contexts.len(), 1);
        assert_eq!(p.cloud.context_count(), 3);
        assert_eq!(p.cloud.vertex_count(), 7);
    }

    #[test]
    fn identification_errors() {
        assert!(matches!(
            Identification::parse("x=a, y=a"),
            Err(ComposeError::NotInjective(_))
        ));
        assert!(matches!(
            Identification::parse("x=a, x=b"),
            Err(ComposeError::RepeatedSource(_))
        ));
        assert!(Identification::parse("x").is_err());
        let f = dataset("firefly", &[]).unwrap().cloud;
        assert!(paste(&f, &f, &Identification::parse("zz=a").unwrap()).is_err());
        let t = dataset("triangle", &[]).unwrap().cloud;
        let p = paste(&t, &t, &Identification::parse("x=x, y=y, z=z").unwrap()).unwrap();
        assert_eq!(p.context_count(), 3);
    }

    #[test]
    fn renaming_avoids_clashes() {
        let mut b = Cloud::builder("u");
        b.context(&["p", "p'"]).unwrap();
        let u = b.build().unwrap();
        let p = paste(&u, &u, &Identification::default()).unwrap();
        let names: Vec<&str> = p.vertices().iter().map(VertexId::as_str).collect();
        assert_eq!(names, ["p", "p'", "p''", "p'''"]);
    }

    #[test]
    fn hh10_extension_reuses_u20_and_u3() {
        let h = dataset("hh10", &[("x", "1/2")]).unwrap();
        let ext =
            extend_to_tits(&h.cloud, h.representation.as_ref().unwrap(), "u1", "u22").unwrap();
        let r = &ext.report;
        assert_eq!(r.collided().len(), 2);
        assert_eq!(r.vertex(Role::D).as_str(), "u20");
        assert_eq!(r.vertex(Role::E).as_str(), "u3");
        assert_eq!(r.adopted(), vec![(Role::C, &VertexId::new("c").unwrap())]);
        assert!(r.new_vertices().is_empty());
        assert!(r.new_contexts.is_empty());
        assert_eq!(r.existing_contexts.len(), 2);
        assert!(r.violations.is_empty());
        assert_eq!(
            ext.representation.get("c").unwrap().to_string(),
            "(0, 0, 1)"
        );
    }

    #[test]
    fn tifs38_construction_lands_on_drawn_vertices() {
        let t = dataset("tifs38", &[]).unwrap();
        let ext = extend_to_tits(&t.cloud, t.representation.as_ref().unwrap(), "a", "b").unwrap();
        let r = &ext.report;
        let got: Vec<(Role, &str)> = r
            .adopted()
            .into_iter()
            .map(|(k, v)| (k, v.as_str()))
            .collect();
        assert_eq!(got, [(Role::C, "2"), (Role::D, "3"), (Role::E, "1")]);
        assert_eq!(r.placements[0].2.to_string(), "(0, 1, -1)");
        assert_eq!(r.placements[1].2.to_string(), "(1*r2, -1, -1)");
        assert!(r.new_contexts.is_empty());
        assert!(r.violations.is_empty());
    }

    #[test]
    fn fresh_tifs_gadget_gains_three_vertices() {
        let bug = dataset("bug", &[]).unwrap().cloud;
        let rep = Representation::exact()
            .with("a", Ray::ints([1, 0, 0]))
            .with("b", Ray::ints([1, 1, 1]));
        let ext = extend_to_tits(&bug, &rep, "a", "b").unwrap();
        assert_eq!(ext.cloud.vertex_count(), bug.vertex_count() + 3);
        assert_eq!(ext.cloud.context_count(), bug.context_count() + 2);
        assert_eq!(ext.report.new_vertices().len(), 3);
        let d = ext.report.vertex(Role::D).clone();
        assert_eq!(
            classify_pair(&ext.cloud, "a", d.as_str(), Kind::II).unwrap(),
            Relation::Tits
        );
    }

    #[test]
    fn orthogonal_terminals_are_refused() {
        let bug = dataset("bug", &[]).unwrap().cloud;
        let rep = Representation::exact()
            .with("a", Ray::ints([1, 0, 0]))
            .with("b", Ray::ints([0, 1, 0]));
        assert!(matches!(
            extend_to_tits(&bug, &rep, "a", "b"),
            Err(ComposeError::OrthogonalTerminals(..))
        ));
        let rep = Representation::exact().with("a", Ray::ints([1, 0, 0]));
        assert!(extend_to_tits(&bug, &rep, "a", "b").is_err());
    }
}
