use serde::Serialize;

use super::path::PathRec;
use super::space::{MetricSpace, Site};
use crate::error::{GeomError, Result};

/// ⟨x,y;w⟩ = (d(x,w) + d(y,w) − d(x,y)) / 2.
pub fn gromov_product(
    space: &MetricSpace,
    x: impl Into<Site>,
    y: impl Into<Site>,
    w: impl Into<Site>,
) -> Result<f64> {
    let (x, y, w) = (x.into(), y.into(), w.into());
    let v = 0.5 * (space.dist(x, w)? + space.dist(y, w)? - space.dist(x, y)?);
    Ok(v.max(0.0))
}

/// 1 / (1 ∨ max pairwise distance): the largest slack admitted for a short
/// triangle on these vertices.
pub fn h_bound(
    space: &MetricSpace,
    x: impl Into<Site>,
    y: impl Into<Site>,
    z: impl Into<Site>,
) -> Result<f64> {
    let (x, y, z) = (x.into(), y.into(), z.into());
    let m = space.dist(x, y)?.max(space.dist(x, z)?).max(space.dist(y, z)?);
    Ok(1.0 / m.max(1.0))
}

/// An h-short path from `x` to `y`.
///
/// On nets (eps > 0) the request must satisfy h ≥ 4·eps: below that a graph
/// geodesic no longer certifies shortness against the region it samples.
pub fn h_short_path(
    space: &MetricSpace,
    x: impl Into<Site>,
    y: impl Into<Site>,
    h: f64,
) -> Result<PathRec> {
    if !(h > 0.0) {
        return Err(GeomError::OutOfRange {
            what: "h",
            value: h,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let floor = 4.0 * space.eps();
    if space.is_graph() && h < floor {
        return Err(GeomError::BelowResolution {
            requested: h,
            floor,
        });
    }
    let path = space.geodesic(x, y)?;
    debug_assert!(path.slack() <= h);
    Ok(path)
}

/// Distance from a point to a short path together with the Gromov product
/// of the path's endpoints based at that point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VaisGap {
    pub dist_to_path: f64,
    pub gromov_product: f64,
    pub slack: f64,
}

impl VaisGap {
    /// ⟨x,y;z⟩ − dist(z,λ) − h/2; nonpositive in every metric space.
    pub fn lower_excess(&self) -> f64 {
        self.gromov_product - self.dist_to_path - self.slack / 2.0
    }

    /// dist(z,λ) − ⟨x,y;z⟩ − h − 2δ; nonpositive in δ-hyperbolic spaces.
    pub fn upper_excess(&self, delta: f64) -> f64 {
        self.dist_to_path - self.gromov_product - self.slack - 2.0 * delta
    }
}

pub fn vais_gap(space: &MetricSpace, path: &PathRec, z: impl Into<Site>) -> Result<VaisGap> {
    let z = z.into();
    Ok(VaisGap {
        dist_to_path: space.dist_to_path(z, path)?,
        gromov_product: gromov_product(space, path.start(), path.end(), z)?,
        slack: path.slack(),
    })
}

/// d(p1(t), p2(t)) for two short paths from a common origin, at a parameter
/// not exceeding the Gromov product of their far endpoints.
pub fn tripod_gap(space: &MetricSpace, p1: &PathRec, p2: &PathRec, t: f64) -> Result<f64> {
    if space.dist(p1.start(), p2.start())? > 0.0 {
        return Err(GeomError::Precondition("paths have distinct origins".into()));
    }
    let limit = gromov_product(space, p1.end(), p2.end(), p1.start())?;
    let hi = limit.min(p1.length()).min(p2.length());
    let tol = space.tolerance() * (1.0 + hi);
    if !(t >= 0.0 && t <= hi + tol) {
        return Err(GeomError::OutOfRange {
            what: "t",
            value: t,
            lo: 0.0,
            hi,
        });
    }
    let t = t.min(p1.length()).min(p2.length());
    space.dist(space.locate(p1, t)?, space.locate(p2, t)?)
}
