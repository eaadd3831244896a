//! Graphviz export of the skeleton, one edge color per context.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cloud::Cloud;
use crate::coloring::Coloring;
use crate::states::TwoValuedState;

const PALETTE: &[&str] = &[
    "red",
    "blue",
    "darkgreen",
    "orange",
    "purple",
    "brown",
    "magenta",
    "cyan4",
    "gold3",
    "gray40",
    "navy",
    "olivedrab",
    "deeppink",
    "sienna",
    "teal",
    "crimson",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DotError {
    #[error("overlay covers {got} vertices, the cloud has {expected}")]
    OverlaySize { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug)]
pub enum Overlay<'a> {
    None,
    /// 1 as a filled red box, 0 as a filled circle, undefined as an open circle.
    State(&'a TwoValuedState),
    Coloring(&'a Coloring),
}

/// Deterministic DOT text. An edge lying in several contexts takes the
/// color of the first.
pub fn export_dot(cloud: &Cloud, overlay: Overlay<'_>) -> Result<String, DotError> {
    let n = cloud.vertex_count();
    let got = match overlay {
        Overlay::None => n,
        Overlay::State(s) => s.len(),
        Overlay::Coloring(c) => c.colors().len(),
    };
    if got != n {
        return Err(DotError::OverlaySize { expected: n, got });
    }
    let q = |i: usize| format!("\"{}\"", cloud.vertex(i));
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", cloud.name());
    let _ = writeln!(out, "  node [shape=circle];");
    for i in 0..n {
        let mut attrs: Vec<String> = Vec::new();
        if let Some(l) = cloud.label(i) {
            attrs.push(format!("label=\"{}\"", l.replace('"', "\\\"")));
        }
        match overlay {
            Overlay::None => {}
            Overlay::State(s) => attrs.push(
                match s.get(i) {
                    Some(true) => "shape=box, style=filled, fillcolor=red",
                    Some(false) => "style=filled, fillcolor=black, fontcolor=white",
                    None => "style=solid",
                }
                .to_string(),
            ),
            Overlay::Coloring(c) => {
                let k = c.color(i);
                attrs.push(format!(
                    "style=filled, fillcolor={}, xlabel=\"{k}\"",
                    PALETTE[(k - 1) % PALETTE.len()]
                ));
            }
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {};", q(i));
        } else {
            let _ = writeln!(out, "  {} [{}];", q(i), attrs.join(", "));
        }
    }
    let mut drawn = std::collections::HashSet::new();
    for (ci, ctx) in cloud.contexts().iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        let m = ctx.members();
        for (k, &x) in m.iter().enumerate() {
            for &y in &m[k + 1..] {
                if drawn.insert((x.min(y), x.max(y))) {
                    let _ = writeln!(
                        out,
                        "  {} -- {} [color={color}, context={}];",
                        q(x),
                        q(y),
                        ci + 1
                    );
                }
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::load;

    fn count(dot: &str, pat: &str) -> usize {
        dot.lines().filter(|l| l.contains(pat)).count()
    }

    #[test]
    fn firefly_plain() {
        let c = load("firefly").unwrap().cloud;
        let d = export_dot(&c, Overlay::None).unwrap();
        assert_eq!(count(&d, " -- "), 6);
        assert_eq!(
            d.lines().filter(|l| l.trim_end().ends_with("\";")).count(),
            5
        );
        let colors: std::collections::BTreeSet<&str> = d
            .lines()
            .filter(|l| l.contains(" -- "))
            .map(|l| l.split("color=").nth(1).unwrap().split(',').next().unwrap())
            .collect();
        assert_eq!(colors.len(), 2);
        assert_eq!(d, export_dot(&c, Overlay::None).unwrap());
    }

    #[test]
    fn state_overlay_boxes_true_vertices() {
        let c = load("firefly").unwrap().cloud;
        let s = TwoValuedState::parse("10001").unwrap();
        let d = export_dot(&c, Overlay::State(&s)).unwrap();
        assert!(d.contains("\"a\" [shape=box"));
        assert!(d.contains("\"v2\" [style=filled, fillcolor=black"));
        assert!(export_dot(&c, Overlay::State(&TwoValuedState::parse("10").unwrap())).is_err());
    }

    #[test]
    fn single_context() {
        let c = load("single(3)").unwrap().cloud;
        let d = export_dot(&c, Overlay::None).unwrap();
        assert_eq!(count(&d, " -- "), 3);
    }
}
