//! The cloud data model: vertices, contexts and the skeleton graph.
//!
//! A cloud is a finite collection of contexts (cliques) that intertwine in
//! shared vertices. Everything downstream works on vertex indices; names are
//! kept only for input and output.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::bitset::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CloudError {
    #[error("invalid vertex name `{0}`")]
    InvalidName(String),
    #[error("context #{index} has {size} member(s); at least 2 are required")]
    ContextTooSmall { index: usize, size: usize },
    #[error("context #{index} lists vertex `{vertex}` more than once")]
    RepeatedMember { index: usize, vertex: String },
    #[error("context #{index} duplicates context #{first}")]
    DuplicateContext { index: usize, first: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("terminals must be two distinct vertices, got `{0}` twice")]
    DegenerateTerminals(String),
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(String),
}

/// Name of a vertex: a non-empty token of ASCII letters, digits, `_` and `'`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Result<Self, CloudError> {
        let name = name.into();
        if is_token(&name) {
            Ok(VertexId(name))
        } else {
            Err(CloudError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl std::borrow::Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A context as vertex indices into its cloud, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    members: Vec<usize>,
}

impl Context {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub(crate) fn sorted(&self) -> Vec<usize> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cloud {
    name: String,
    vertices: Vec<VertexId>,
    labels: BTreeMap<usize, String>,
    index: HashMap<VertexId, usize>,
    contexts: Vec<Context>,
    terminals: Option<(usize, usize)>,
    incidence: Vec<Vec<usize>>,
}

impl Cloud {
    pub fn builder(name: impl Into<String>) -> CloudBuilder {
        CloudBuilder::new(name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &VertexId {
        &self.vertices[i]
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.get(&i).map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, CloudError> {
        self.index_of(name)
            .ok_or_else(|| CloudError::UnknownVertex(name.to_string()))
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn context_count(&self) -> usize {
        self.contexts.len()
    }

    /// Indices of the contexts containing vertex `v`.
    pub fn contexts_of(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn terminals(&self) -> Option<(usize, usize)> {
        self.terminals
    }

    pub fn terminal_names(&self) -> Option<(&VertexId, &VertexId)> {
        self.terminals
            .map(|(a, b)| (&self.vertices[a], &self.vertices[b]))
    }

    /// Sizes of all contexts, if they agree.
    pub fn uniform_context_size(&self) -> Option<usize> {
        let first = self.contexts.first()?.len();
        self.contexts
            .iter()
            .all(|c| c.len() == first)
            .then_some(first)
    }

    pub fn max_context_size(&self) -> usize {
        self.contexts.iter().map(Context::len).max().unwrap_or(0)
    }

    pub fn context_names(&self, c: usize) -> Vec<&VertexId> {
        self.contexts[c]
            .members
            .iter()
            .map(|&v| &self.vertices[v])
            .collect()
    }

    pub fn skeleton(&self) -> SkeletonGraph {
        skeleton_graph(self)
    }

    /// Rebuilds the cloud under a new name, keeping everything else.
    pub fn renamed(&self, name: impl Into<String>) -> Cloud {
        let mut c = self.clone();
        c.name = name.into();
        c
    }

    /// A builder holding this cloud's vertices, labels, contexts and
    /// terminals, for extension.
    pub fn to_builder(&self) -> CloudBuilder {
        CloudBuilder {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            labels: self.labels.clone(),
            index: self.index.clone(),
            contexts: self.contexts.iter().map(|c| c.members.clone()).collect(),
            terminals: self
                .terminal_names()
                .map(|(a, b)| (a.to_string(), b.to_string())),
        }
    }

    /// Replaces the terminal pair.
    pub fn with_terminals(&self, a: &str, b: &str) -> Result<Cloud, CloudError> {
        let ia = self.require(a)?;
        let ib = self.require(b)?;
        if ia == ib {
            return Err(CloudError::DegenerateTerminals(a.to_string()));
        }
        let mut c = self.clone();
        c.terminals = Some((ia, ib));
        Ok(c)
    }
}

/// Incremental construction of a [`Cloud`]; vertices are created on first
/// mention.
#[derive(Debug, Clone)]
pub struct CloudBuilder {
    name: String,
    vertices: Vec<VertexId>,
    labels: BTreeMap<usize, String>,
    index: HashMap<VertexId, usize>,
    contexts: Vec<Vec<usize>>,
    terminals: Option<(String, String)>,
}

impl CloudBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CloudBuilder {
            name: name.into(),
            vertices: Vec::new(),
            labels: BTreeMap::new(),
            index: HashMap::new(),
            contexts: Vec::new(),
            terminals: None,
        }
    }

    pub fn name(&mut self, name: impl Into<String>) -> &mut Self {
        self.name = name.into();
        self
    }

    fn intern(&mut self, name: &str) -> Result<usize, CloudError> {
        if let Some(&i) = self.index.get(name) {
            return Ok(i);
        }
        let id = VertexId::new(name)?;
        let i = self.vertices.len();
        self.index.insert(id.clone(), i);
        self.vertices.push(id);
        Ok(i)
    }

    /// Declares a vertex explicitly, optionally with a label.
    pub fn vertex(&mut self, name: &str, label: Option<&str>) -> Result<usize, CloudError> {
        let i = self.intern(name)?;
        if let Some(l) = label {
            self.labels.insert(i, l.to_string());
        }
        Ok(i)
    }

    pub fn context<S: AsRef<str>>(&mut self, members: &[S]) -> Result<&mut Self, CloudError> {
        let mut idx = Vec::with_capacity(members.len());
        for m in members {
            idx.push(self.intern(m.as_ref())?);
        }
        self.contexts.push(idx);
        Ok(self)
    }

    pub fn terminals(&mut self, a: &str, b: &str) -> &mut Self {
        self.terminals = Some((a.to_string(), b.to_string()));
        self
    }

    pub fn has_vertex(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn build(&self) -> Result<Cloud, CloudError> {
        let n = self.vertices.len();
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut contexts = Vec::with_capacity(self.contexts.len());
        for (ci, members) in self.contexts.iter().enumerate() {
            if members.len() < 2 {
                return Err(CloudError::ContextTooSmall {
                    index: ci,
                    size: members.len(),
                });
            }
            let mut sorted = members.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(CloudError::RepeatedMember {
                    index: ci,
                    vertex: self.vertices[w[0]].to_string(),
                });
            }
            if let Some(&first) = seen.get(&sorted) {
                return Err(CloudError::DuplicateContext { index: ci, first });
            }
            seen.insert(sorted, ci);
            contexts.push(Context {
                members: members.clone(),
            });
        }
        let terminals = match &self.terminals {
            None => None,
            Some((a, b)) => {
                let ia = *self
                    .index
                    .get(a.as_str())
                    .ok_or_else(|| CloudError::UnknownVertex(a.clone()))?;
                let ib = *self
                    .index
                    .get(b.as_str())
                    .ok_or_else(|| CloudError::UnknownVertex(b.clone()))?;
                if ia == ib {
                    return Err(CloudError::DegenerateTerminals(a.clone()));
                }
                Some((ia, ib))
            }
        };
        let mut incidence = vec![Vec::new(); n];
        for (ci, c) in contexts.iter().enumerate() {
            for &v in &c.members {
                incidence[v].push(ci);
            }
        }
        Ok(Cloud {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            labels: self.labels.clone(),
            index: self.index.clone(),
            contexts,
            terminals,
            incidence,
        })
    }
}

/// Simple undirected graph on the vertices of a cloud.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonGraph {
    names: Vec<VertexId>,
    adjacency: Vec<VertexSet>,
}

impl SkeletonGraph {
    /// Graph with the given vertex names and edge list (indices).
    ///
    /// Self loops are ignored.
    pub fn from_edges(names: Vec<VertexId>, edges: &[(usize, usize)]) -> Self {
        let n = names.len();
        let mut adjacency = vec![VertexSet::new(n); n];
        for &(x, y) in edges {
            if x != y {
                adjacency[x].insert(y);
                adjacency[y].insert(x);
            }
        }
        SkeletonGraph { names, adjacency }
    }

    /// Graph on `n` vertices named `0..n`.
    pub fn anonymous(n: usize, edges: &[(usize, usize)]) -> Self {
        let names = (0..n)
            .map(|i| VertexId::new(i.to_string()).expect("digits are a token"))
            .collect();
        Self::from_edges(names, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[VertexId] {
        &self.names
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].contains(y)
    }

    pub fn neighbors(&self, x: usize) -> &VertexSet {
        &self.adjacency[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].count()
    }

    /// Edges `(x, y)` with `x < y`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.vertex_count() {
            out.extend(self.adjacency[x].iter().filter(|&y| y > x).map(|y| (x, y)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::count).sum::<usize>() / 2
    }

    /// Distinct nonadjacent pairs `(x, y)` with `x < y`.
    pub fn nonadjacent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                if !self.has_edge(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Copy of the graph with the extra edge `x`–`y`.
    pub fn with_edge(&self, x: usize, y: usize) -> SkeletonGraph {
        let mut g = self.clone();
        if x != y {
            g.adjacency[x].insert(y);
            g.adjacency[y].insert(x);
        }
        g
    }

    pub fn clique_number(&self) -> usize {
        max_clique(self).len()
    }
}

/// Skeleton of a cloud: `x ~ y` iff some context contains both.
pub fn skeleton_graph(cloud: &Cloud) -> SkeletonGraph {
    let n = cloud.vertex_count();
    let mut adjacency = vec![VertexSet::new(n); n];
    for c in cloud.contexts() {
        for &x in c.members() {
            for &y in c.members() {
                if x != y {
                    adjacency[x].insert(y);
                }
            }
        }
    }
    SkeletonGraph {
        names: cloud.vertices().to_vec(),
        adjacency,
    }
}

/// Size of the largest clique of the skeleton graph.
pub fn clique_number(cloud: &Cloud) -> usize {
    skeleton_graph(cloud).clique_number()
}

/// A maximum clique (vertex indices, ascending). Bron–Kerbosch with pivoting.
pub fn max_clique(g: &SkeletonGraph) -> Vec<usize> {
    fn expand(
        g: &SkeletonGraph,
        r: &mut Vec<usize>,
        mut p: VertexSet,
        mut x: VertexSet,
        best: &mut Vec<usize>,
    ) {
        if p.is_empty() {
            if x.is_empty() && r.len() > best.len() {
                *best = r.clone();
            }
            return;
        }
        if r.len() + p.count() <= best.len() {
            return;
        }
        let mut px = p.clone();
        px.union_with(&x);
        let pivot = px
            .iter()
            .max_by_key(|&u| (p.intersection(g.neighbors(u)).count(), std::cmp::Reverse(u)))
            .expect("nonempty");
        let candidates: Vec<usize> = p.difference(g.neighbors(pivot)).iter().collect();
        for v in candidates {
            r.push(v);
            expand(
                g,
                r,
                p.intersection(g.neighbors(v)),
                x.intersection(g.neighbors(v)),
                best,
            );
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    let n = g.vertex_count();
    let mut best = Vec::new();
    if n == 0 {
        return best;
    }
    expand(
        g,
        &mut Vec::new(),
        VertexSet::full(n),
        VertexSet::new(n),
        &mut best,
    );
    best.sort_unstable();
    best
}

/// Structural findings about a cloud; nothing here is fatal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub context_count: usize,
    pub isolated_vertices: Vec<VertexId>,
    /// Pairs of context indices with identical member sets.
    pub duplicate_contexts: Vec<(usize, usize)>,
    /// Pairs of contexts sharing two or more vertices, with the shared vertices.
    pub heavy_intersections: Vec<(usize, usize, Vec<VertexId>)>,
    /// Pairs `(inner, outer)` where context `inner` is a proper subset of `outer`.
    pub nested_contexts: Vec<(usize, usize)>,
    /// Context size → number of contexts of that size.
    pub size_histogram: BTreeMap<usize, usize>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.isolated_vertices.is_empty()
            && self.duplicate_contexts.is_empty()
            && self.heavy_intersections.is_empty()
            && self.nested_contexts.is_empty()
    }
}

pub fn validate(cloud: &Cloud) -> ValidationReport {
    let isolated_vertices = (0..cloud.vertex_count())
        .filter(|&v| cloud.contexts_of(v).is_empty())
        .map(|v| cloud.vertex(v).clone())
        .collect();
    let sorted: Vec<Vec<usize>> = cloud.contexts().iter().map(Context::sorted).collect();
    let mut duplicate_contexts = Vec::new();
    let mut heavy_intersections = Vec::new();
    let mut nested_contexts = Vec::new();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[i] == sorted[j] {
                duplicate_contexts.push((i, j));
                continue;
            }
            let shared: Vec<usize> = sorted[i]
                .iter()
                .copied()
                .filter(|v| sorted[j].binary_search(v).is_ok())
                .collect();
            if shared.len() >= 2 {
                heavy_intersections.push((
                    i,
                    j,
                    shared.iter().map(|&v| cloud.vertex(v).clone()).collect(),
                ));
            }
            if shared.len() == sorted[i].len() {
                nested_contexts.push((i, j));
            } else if shared.len() == sorted[j].len() {
                nested_contexts.push((j, i));
            }
        }
    }
    let mut size_histogram = BTreeMap::new();
    for c in cloud.contexts() {
        *size_histogram.entry(c.len()).or_insert(0) += 1;
    }
    ValidationReport {
        vertex_count: cloud.vertex_count(),
        context_count: cloud.context_count(),
        isolated_vertices,
        duplicate_contexts,
        heavy_intersections,
        nested_contexts,
        size_histogram,
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.vertex_count)?;
        writeln!(f, "contexts {}", self.context_count)?;
        let hist: Vec<String> = self
            .size_histogram
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        writeln!(f, "sizes {}", hist.join(" "))?;
        for v in &self.isolated_vertices {
            writeln!(f, "isolated {v}")?;
        }
        for (i, j) in &self.duplicate_contexts {
            writeln!(f, "duplicate #{i} #{j}")?;
        }
        for (i, j, shared) in &self.heavy_intersections {
            let s: Vec<&str> = shared.iter().map(VertexId::as_str).collect();
            writeln!(f, "intersect #{i} #{j} {}", s.join(" "))?;
        }
        for (i, j) in &self.nested_contexts {
            writeln!(f, "nested #{i} in #{j}")?;
        }
        Ok(())
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
    fn firefly_skeleton_has_two_triangles() {
        let c = cloud(&[&["a", "v2", "v3"], &["v3", "v4", "b"]]);
        let g = c.skeleton();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(clique_number(&c), 3);
        assert!(!g.has_edge(0, 4));
    }

    #[test]
    fn triangle_of_edges_is_k3() {
        let c = cloud(&[&["x", "y"], &["y", "z"], &["z", "x"]]);
        let g = c.skeleton();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(clique_number(&c), 3);
        assert_eq!(c.max_context_size(), 2);
    }

    #[test]
    fn single_context_clique_number_is_its_size() {
        for d in 2..7 {
            let names: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
            let mut b = Cloud::builder("single");
            b.context(&names).unwrap();
            let c = b.build().unwrap();
            assert_eq!(c.skeleton().edge_count(), d * (d - 1) / 2);
            assert_eq!(clique_number(&c), d);
        }
    }

    #[test]
    fn build_rejects_malformed_contexts() {
        let mut b = Cloud::builder("t");
        b.context(&["x"]).unwrap();
        assert!(matches!(b.build(), Err(CloudError::ContextTooSmall { .. })));

        let mut b = Cloud::builder("t");
        b.context(&["x", "y", "z"]).unwrap();
        b.context(&["z", "y", "x"]).unwrap();
        assert!(matches!(
            b.build(),
            Err(CloudError::DuplicateContext { index: 1, first: 0 })
        ));

        let mut b = Cloud::builder("t");
        b.context(&["x", "y", "x"]).unwrap();
        assert!(matches!(b.build(), Err(CloudError::RepeatedMember { .. })));

        let mut b = Cloud::builder("t");
        b.context(&["x", "y"]).unwrap();
        b.terminals("x", "q");
        assert_eq!(b.build(), Err(CloudError::UnknownVertex("q".into())));
    }

    #[test]
    fn vertex_names_are_tokens() {
        assert!(VertexId::new("u_12").is_ok());
        assert!(VertexId::new("c'").is_ok());
        assert!(VertexId::new("").is_err());
        assert!(VertexId::new("a-b").is_err());
    }

    #[test]
    fn validation_flags_isolated_and_heavy_intersections() {
        let mut b = Cloud::builder("t");
        b.vertex("lonely", None).unwrap();
        b.context(&["x", "y", "z"]).unwrap();
        b.context(&["x", "y", "w"]).unwrap();
        b.context(&["x", "y"]).unwrap();
        let r = validate(&b.build().unwrap());
        assert_eq!(r.isolated_vertices, vec![VertexId::new("lonely").unwrap()]);
        assert_eq!(r.heavy_intersections.len(), 3);
        assert_eq!(r.nested_contexts, vec![(2, 0), (2, 1)]);
        assert_eq!(r.size_histogram, BTreeMap::from([(2, 1), (3, 2)]));
        assert!(!r.is_clean());
    }
}
