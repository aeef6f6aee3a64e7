//! Exact counting of spanning trees and separating spanning 2-forests in
//! multigraphs, and resistance distance computed from those counts, with a
//! divide-and-conquer engine that reduces along cut vertices and
//! 2-separators instead of expanding a full determinant.
//!
//! All primary arithmetic is exact (big integers and rationals).  Floating
//! point appears only in the pseudoinverse cross-check.

pub mod corpus;
pub mod count;
pub mod error;
pub mod exact;
pub mod families;
pub mod fib;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod resistance;
pub mod separation;

pub use error::{Error, Result};
pub use exact::{ratio, render_decimal, Count, IntMatrix, Ratio};
pub use graph::{MultiGraph, Side, SplitSpec, TwoSeparation, Vertex, VertexMap};
