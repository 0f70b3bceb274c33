//! Squeezing functions, ball pinching radii and invariant-metric comparison
//! envelopes for bounded domains of C^n given by defining functions.
//!
//! Heavy loops go through [`exec`], which uses rayon when the `parallel`
//! feature is enabled and runs sequentially otherwise. Results are always
//! assembled in index order, so both paths give identical output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod comparisons;
pub mod diff;
pub mod domain;
pub mod embedding;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod metrics;
pub mod pinching;
pub mod point;
pub mod rng;
pub mod sampling;
pub mod squeeze;

pub use domain::{BoundingBox, DomainSpec, ExactModel, ExcludedSet};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use point::RealPoint;
pub use rng::SplitMix64;
