//! Exact treewidth, bramble-order and divisorial-gonality computations for
//! grids, stacked prisms `Y_{m,n} = C_m x P_n` and toroidal grids
//! `T_{m,n} = C_m x C_n`, with serializable certificates.

pub mod error;
pub mod formats;
pub mod bramble;
pub mod certificate;
pub mod chipfire;
pub mod graph;
pub mod hitting;
pub mod treewidth;

pub use error::{Error, Result};
pub use graph::{FamilyKind, FamilyMeta, Graph, Line, MinorOp, VertexId, VertexSet};
