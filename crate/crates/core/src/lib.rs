//! Exact combinatorial and arithmetic kernels behind slope/genus bound
//! verification: finite multigraphs and short-subgraph (bigirth) extraction,
//! arc systems on compact orientable surfaces, the lattice-class tree over a
//! discretely valued field, balanced parallelogram norms in the plane, and
//! certified evaluators for the closed-form bounds — each constructive piece
//! paired with an independent brute-force oracle at desk scale.

pub mod arb;
pub mod arcsys;
pub mod bigirth;
pub mod bounds;
pub mod corpus;
pub mod error;
pub mod field;
pub mod graph;
pub mod norms;
pub mod par;
pub mod report;
pub mod tree;

pub use error::{Error, Result};
