//! Finite-scale coarse geometry.
//!
//! Metric spaces are either weighted graphs (typically king-move nets of
//! planar regions) or explicit planar point sets. On top of them the crate
//! evaluates Gromov products and four-point hyperbolicity, rough CAT(0)
//! comparison inequalities, truncated bouquets and their equivalences,
//! bouquet and Gromov sequences, schedule-relative graph ends, and the
//! neighbourhood sets of the bouquet boundary.

// `!(x > 0.0)` is used on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bouquet;
pub mod comparison;
pub mod ends;
pub mod error;
pub mod metric;
pub mod sampling;
pub mod sequences;
pub mod spaces;
pub mod tolerances;
pub mod topology;
pub mod verify;

pub use error::{GeomError, Result};
pub use metric::{MetricKind, MetricSpace, PathRec, PointId, Site};
