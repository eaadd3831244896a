//! Exact proper colorings of skeleton graphs.
//!
//! The solver is DSATUR backtracking: a maximum clique is precolored
//! `1..=k`, then the uncolored vertex with the highest saturation (ties: higher
//! degree, then lower index) is branched on, never opening more than one new
//! color at a time.

use rayon::prelude::*;
use thiserror::Error;

use crate::cloud::{max_clique, Cloud, SkeletonGraph};
use crate::states::TwoValuedState;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("contexts have different sizes; projection needs a uniform size")]
    HeterogeneousContexts,
    #[error("cloud has no contexts")]
    NoContexts,
    #[error("projection needs exactly {needed} colors (the context size), coloring uses {got}")]
    PaletteMismatch { needed: usize, got: usize },
    #[error("coloring is not proper: {0} and {1} are adjacent and share a color")]
    Improper(String, String),
    #[error("color {color} is outside the palette 1..={palette}")]
    ColorOutOfRange { color: usize, palette: usize },
    #[error("context #{context} has no vertex of color {color}")]
    MissingColor { context: usize, color: usize },
    #[error("coloring has {got} entries, graph has {expected} vertices")]
    WrongSize { expected: usize, got: usize },
}

/// Vertex → color in `1..=palette`, in graph vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<usize>,
    palette: usize,
}

impl Coloring {
    /// The palette is the largest color used.
    pub fn new(colors: Vec<usize>) -> Self {
        let palette = colors.iter().copied().max().unwrap_or(0);
        Coloring { colors, palette }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    /// Number of distinct colors actually used.
    pub fn used(&self) -> usize {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    pub fn is_proper(&self, g: &SkeletonGraph) -> bool {
        self.colors.len() == g.vertex_count()
            && self.colors.iter().all(|&c| c >= 1)
            && g.edges()
                .iter()
                .all(|&(x, y)| self.colors[x] != self.colors[y])
    }

    /// `vertex=color` lines.
    pub fn render(&self, g: &SkeletonGraph) -> String {
        self.colors
            .iter()
            .enumerate()
            .map(|(v, c)| format!("{}={c}\n", g.names()[v]))
            .collect()
    }
}

struct Solver<'a> {
    g: &'a SkeletonGraph,
    t: usize,
    colors: Vec<usize>,
    /// `counts[v][c]`: colored neighbours of `v` with color `c`.
    counts: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    degree: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(g: &'a SkeletonGraph, t: usize) -> Self {
        let n = g.vertex_count();
        Solver {
            g,
            t,
            colors: vec![0; n],
            counts: vec![vec![0; t + 1]; n],
            saturation: vec![0; n],
            degree: (0..n).map(|v| g.degree(v)).collect(),
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = c;
        for u in self.g.neighbors(v).iter() {
            if self.counts[u][c] == 0 {
                self.saturation[u] += 1;
            }
            self.counts[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v];
        self.colors[v] = 0;
        for u in self.g.neighbors(v).iter() {
            self.counts[u][c] -= 1;
            if self.counts[u][c] == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    fn pick(&self) -> Option<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == 0)
            .max_by_key(|&v| (self.saturation[v], self.degree[v], std::cmp::Reverse(v)))
    }

    fn search(&mut self, used: usize) -> bool {
        let Some(v) = self.pick() else {
            return true;
        };
        if self.saturation[v] >= self.t {
            return false;
        }
        let top = (used + 1).min(self.t);
        for c in 1..=top {
            if self.counts[v][c] != 0 {
                continue;
            }
            self.assign(v, c);
            if self.search(used.max(c)) {
                return true;
            }
            self.unassign(v);
        }
        false
    }
}

/// A proper coloring with at most `t` colors, if one exists.
pub fn is_t_colorable(g: &SkeletonGraph, t: usize) -> Option<Coloring> {
    let n = g.vertex_count();
    if n == 0 {
        return Some(Coloring::new(Vec::new()));
    }
    if t == 0 {
        return None;
    }
    let clique = max_clique(g);
    if clique.len() > t {
        return None;
    }
    let mut s = Solver::new(g, t);
    for (i, &v) in clique.iter().enumerate() {
        s.assign(v, i + 1);
    }
    s.search(clique.len()).then(|| Coloring::new(s.colors))
}

/// Exact chromatic number with a witness. Zero for the empty graph.
pub fn chromatic_number(g: &SkeletonGraph) -> (usize, Coloring) {
    let lower = g.clique_number();
    for t in lower.max(1)..=g.vertex_count().max(1) {
        if let Some(c) = is_t_colorable(g, t) {
            return (c.palette(), c);
        }
    }
    (0, Coloring::new(Vec::new()))
}

/// Per nonadjacent pair, the least palette that colors `x` and `y`
/// differently, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCertificate {
    pub x: usize,
    pub y: usize,
    /// χ(G + xy); a separating coloring with one color fewer does not exist.
    pub palette: usize,
    pub coloring: Coloring,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparabilityCertificate {
    pub pairs: Vec<PairCertificate>,
}

impl SeparabilityCertificate {
    pub fn render(&self, g: &SkeletonGraph) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            out.push_str(&format!(
                "pair {} {} colors {} (not {})\n",
                g.names()[p.x],
                g.names()[p.y],
                p.palette,
                p.palette - 1
            ));
            out.push_str(&p.coloring.render(g));
        }
        out
    }
}

/// Least `t` for which proper `t`-colorings separate every nonadjacent pair:
/// the maximum of χ(G + xy), or χ(G) if every pair is adjacent.
pub fn separable_chromatic_number(g: &SkeletonGraph) -> (usize, SeparabilityCertificate) {
    let pairs: Vec<PairCertificate> = g
        .nonadjacent_pairs()
        .into_par_iter()
        .map(|(x, y)| {
            let (palette, coloring) = chromatic_number(&g.with_edge(x, y));
            PairCertificate {
                x,
                y,
                palette,
                coloring,
            }
        })
        .collect();
    let value = match pairs.iter().map(|p| p.palette).max() {
        Some(v) => v,
        None => chromatic_number(g).0,
    };
    (value, SeparabilityCertificate { pairs })
}

/// Projects a `d`-coloring of a uniform cloud of context size `d` to a
/// type-II state: `true_color` becomes 1, every other color 0.
pub fn coloring_to_state(
    cloud: &Cloud,
    coloring: &Coloring,
    true_color: usize,
) -> Result<TwoValuedState, ColoringError> {
    let d = match cloud.uniform_context_size() {
        Some(d) => d,
        None if cloud.context_count() == 0 => return Err(ColoringError::NoContexts),
        None => return Err(ColoringError::HeterogeneousContexts),
    };
    let g = cloud.skeleton();
    if coloring.colors().len() != g.vertex_count() {
        return Err(ColoringError::WrongSize {
            expected: g.vertex_count(),
            got: coloring.colors().len(),
        });
    }
    if let Some(&(x, y)) = g
        .edges()
        .iter()
        .find(|&&(x, y)| coloring.color(x) == coloring.color(y))
    {
        return Err(ColoringError::Improper(
            cloud.vertex(x).to_string(),
            cloud.vertex(y).to_string(),
        ));
    }
    if coloring.palette() != d {
        return Err(ColoringError::PaletteMismatch {
            needed: d,
            got: coloring.palette(),
        });
    }
    if !(1..=d).contains(&true_color) {
        return Err(ColoringError::ColorOutOfRange {
            color: true_color,
            palette: d,
        });
    }
    for (ci, c) in cloud.contexts().iter().enumerate() {
        if !c.members().iter().any(|&v| coloring.color(v) == true_color) {
            return Err(ColoringError::MissingColor {
                context: ci,
                color: true_color,
            });
        }
    }
    Ok(TwoValuedState::total(
        coloring.colors().iter().map(|&c| c == true_color),
    ))
}

/// Best-effort lift of a state to a coloring: the 1-vertices get color 1, the
/// rest are colored greedily in vertex order. Always proper.
pub fn lift_state(g: &SkeletonGraph, state: &TwoValuedState) -> Coloring {
    let n = g.vertex_count();
    let mut colors = vec![0usize; n];
    for v in state.ones() {
        if g.neighbors(v).iter().all(|u| colors[u] != 1) {
            colors[v] = 1;
        }
    }
    for v in 0..n {
        if colors[v] != 0 {
            continue;
        }
        let taken: Vec<usize> = g.neighbors(v).iter().map(|u| colors[u]).collect();
        colors[v] = (2..).find(|c| !taken.contains(c)).expect("unbounded");
    }
    Coloring::new(colors)
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
    fn k3_needs_three_colors() {
        let g = SkeletonGraph::anonymous(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(is_t_colorable(&g, 2).is_none());
        let c = is_t_colorable(&g, 3).unwrap();
        assert!(c.is_proper(&g));
        assert_eq!(chromatic_number(&g).0, 3);
    }

    #[test]
    fn odd_cycle_beats_clique_bound() {
        let g = SkeletonGraph::anonymous(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(g.clique_number(), 2);
        assert_eq!(chromatic_number(&g).0, 3);
    }

    #[test]
    fn firefly_is_three_chromatic_and_separable() {
        let c = cloud(&[&["a", "v2", "v3"], &["v3", "v4", "b"]]);
        let g = c.skeleton();
        let (chi, w) = chromatic_number(&g);
        assert_eq!(chi, 3);
        assert!(w.is_proper(&g));
        let (sep, cert) = separable_chromatic_number(&g);
        assert_eq!(sep, 3);
        for p in &cert.pairs {
            assert!(p.coloring.is_proper(&g));
            assert_ne!(p.coloring.color(p.x), p.coloring.color(p.y));
        }
    }

    #[test]
    fn complete_graph_separable_is_chromatic() {
        let edges: Vec<_> = (0..4)
            .flat_map(|x| (x + 1..4).map(move |y| (x, y)))
            .collect();
        let g = SkeletonGraph::anonymous(4, &edges);
        assert_eq!(separable_chromatic_number(&g).0, 4);
    }

    #[test]
    fn projection_of_a_single_context() {
        let c = cloud(&[&["x", "y", "z"]]);
        let s = coloring_to_state(&c, &Coloring::new(vec![1, 2, 3]), 2).unwrap();
        assert_eq!(s.to_string(), "010");
    }

    #[test]
    fn firefly_projection_puts_v3_true() {
        let c = cloud(&[&["a", "v2", "v3"], &["v3", "v4", "b"]]);
        let s = coloring_to_state(&c, &Coloring::new(vec![2, 3, 1, 2, 3]), 1).unwrap();
        assert_eq!(s.describe(&c), "a=0 v2=0 v3=1 v4=0 b=0");
        assert!(s.is_type_ii(&c));
    }

    #[test]
    fn triangle_projection_fails() {
        let c = cloud(&[&["x", "y"], &["y", "z"], &["z", "x"]]);
        let (chi, w) = chromatic_number(&c.skeleton());
        assert_eq!(chi, 3);
        assert_eq!(
            coloring_to_state(&c, &w, 1),
            Err(ColoringError::PaletteMismatch { needed: 2, got: 3 })
        );
    }

    #[test]
    fn lifted_state_is_proper() {
        let c = cloud(&[&["a", "v2", "v3"], &["v3", "v4", "b"]]);
        let g = c.skeleton();
        let s = TwoValuedState::parse("10001").unwrap();
        let col = lift_state(&g, &s);
        assert!(col.is_proper(&g));
        assert_eq!(col.color(0), 1);
        assert_eq!(col.color(4), 1);
    }
}
