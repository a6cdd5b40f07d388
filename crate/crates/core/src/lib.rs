//! Fuzzy learning-assessment models.
//!
//! Cohort grade distributions are turned into plane figures (unit bars or
//! overlapping trapezoids) and summarized by their center of mass. The
//! [`comparison`] module ranks cohorts by those centroids, [`oracle`]
//! recomputes every closed form from raw geometry, [`voskoglou`] holds the
//! acquisition-profile relation, and [`ingestion`] turns score rosters into
//! level distributions.

// `!(x >= 0.0)` style checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparison;
pub mod error;
pub mod fuzzy_core;
pub mod ingestion;
pub mod oracle;
pub mod rational;
pub mod voskoglou;

pub use error::{Error, Result};
pub use fuzzy_core::{CentroidPoint, LevelDistribution, ModelKind, TrapezoidCell};
