//! Orthogonality hypergraphs ("clouds") of intertwined quantum contexts and
//! their classical two-valued states.

pub mod bitset;
pub mod cli;
pub mod cloud;
pub mod coloring;
pub mod compose;
pub mod datasets;
pub mod dot;
pub mod geometry;
pub mod parse;
pub mod partition;
pub mod states;

pub use cloud::{Cloud, CloudBuilder, CloudError, Context, SkeletonGraph, VertexId};
pub use parse::{parse_cloud, parse_cloud_file, serialize, CloudFile, ParseError};
