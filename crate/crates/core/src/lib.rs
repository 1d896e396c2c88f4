//! Curvature conditions on closed-form metrics, with Newman-Penrose and spinor tooling.
//!
//! Metrics are given in closed form over a four-dimensional chart. From them
//! the crate computes curvature, Newman-Penrose data and Petrov types, tests
//! the semi-symmetry family of curvature conditions, and verifies the spinor
//! identities behind the type D / type N classification.

pub mod classify;
pub mod conventions;
pub mod corpus;
pub mod expr;
pub mod geometry;
pub mod jet;
pub mod metric_file;
pub mod np;
pub mod report;
pub mod spinor;
pub mod symmetry;
pub mod tensor;
