//! Finite metric spaces, paths, Gromov products and hyperbolicity.

mod hyperbolicity;
mod path;
mod products;
mod space;

pub use hyperbolicity::{
    four_point_delta, quadruple_defect, Budget, EstimatorRegistry, ExactEnumeration,
    HyperbolicityEstimator, HyperbolicityReport, SampledQuadruples, SubsetEnumeration,
};
pub use path::{point_at, PathRec};
pub use products::{gromov_product, h_bound, h_short_path, tripod_gap, vais_gap, VaisGap};
pub use space::{MetricKind, MetricSpace, PointId, Site, SpaceInfo};
