//! Edge-cut width: computing it, turning it into tree decompositions, and
//! solving routing, coloring, constraint, matching and arborescence
//! problems by dynamic programming over a spanning tree of small width.

pub mod changeover;
pub mod coloring;
pub mod csp;
pub mod decomposition;
pub mod dp;
pub mod edp;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod roommates;
pub mod width;

pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, RootedSpanningTree};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/width.md")]
    mod width {}
    #[doc = include_str!("../../../book/src/decompositions.md")]
    mod decompositions {}
    #[doc = include_str!("../../../book/src/dynamic-programs.md")]
    mod dynamic_programs {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
