//! Star tracker image simulation with RSO streaks, dataset tooling and
//! detection scoring.
//!
//! The pipeline: catalogues ([`catalog`]) are propagated ([`propagation`]),
//! projected through the sensor model ([`sensor`]), converted to electrons
//! ([`photometry`]) and rasterized ([`render`]). [`simulate`] samples scenes
//! and writes datasets ([`dataset`]); [`detector`] and [`evaluation`] close
//! the benchmarking loop.

// Range checks are written `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod config;
pub mod dataset;
pub mod detector;
pub mod error;
pub mod evaluation;
pub mod photometry;
pub mod propagation;
pub mod render;
pub mod rng;
pub mod sensor;
pub mod simulate;
pub mod synthetic;
pub mod time;

pub use error::{Error, Result, TleError};
pub use time::Epoch;
