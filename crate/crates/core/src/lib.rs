//! Exact combinatorics of the McKay correspondence for finite subgroups of SL₂(ℂ).
//!
//! The crate computes character tables, McKay graphs and affine root data,
//! the Weyl-group actions on dimension, stability and deformation vectors,
//! the weight statistic and the components it indexes, a partition oracle
//! for cyclic groups, chamber geometry for stability parameters, and a
//! floating-point lab that checks the underlying linear-algebra identities.

pub mod cyclotomic;
pub mod error;
pub mod groups;
pub mod chambers;
pub mod mckay;
pub mod components;
pub mod cyclic_oracle;
pub mod report;
pub mod repspace;
pub mod weyl;

pub use error::{McKayError, Result};
