//! Finite-scale neighbourhood sets of the bouquet bordification and the
//! separation of inequivalent bouquets.
//!
//! The sets quantify over every representative of a class; here they are
//! evaluated over caller-supplied families, so verdicts are three-valued.
//! When a rough CAT(0) constant C is known, unseen representatives are
//! covered by the bound d(β_n(t), β′_m(t)) ≤ 5C + 4 between
//! representatives of one class.

use serde::{Deserialize, Serialize};

use crate::bouquet::{certify_asymptotic, Bouquet, CertifyOptions};
use crate::error::{GeomError, Result};
use crate::metric::{MetricSpace, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Some pair of representatives is closer than r.
    S,
    /// Some pair of representatives coincides.
    S0,
    /// Every pair of representatives is closer than r.
    Sprime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tri {
    True,
    False,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodSpec {
    pub r: f64,
    /// 1-based path index.
    pub n: usize,
    pub t: f64,
    pub variant: Variant,
}

/// A candidate element: representatives of a boundary class, or a point
/// of the space (represented by one shortest path from the origin, so that
/// p_nt is the point itself once t ≥ its distance).
#[derive(Clone, Debug)]
pub enum Candidate<'a> {
    Bouquets(&'a [Bouquet]),
    Point(Site),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub verdict: Tri,
    /// (center representative, candidate representative, distance), 0-based,
    /// of the pair deciding the verdict.
    pub witness: Option<(usize, usize, f64)>,
    pub min_distance: f64,
    pub max_distance: f64,
    /// Net snapping tolerance added to r (2·eps on nets).
    pub snap: f64,
    /// 2(5C + 4) when C is supplied, covering unseen representatives.
    pub cover: Option<f64>,
}

fn snap(space: &MetricSpace) -> f64 {
    if space.is_graph() {
        2.0 * space.eps()
    } else {
        space.tolerance()
    }
}

/// β_n(t) for a representative; requires t ≤ L_n.
pub fn p_nt(space: &MetricSpace, b: &Bouquet, n: usize, t: f64) -> Result<Site> {
    let path = b.paths().get(n.wrapping_sub(1)).ok_or_else(|| {
        GeomError::Horizon(format!("path index {n} outside 1..={}", b.len()))
    })?;
    if t < 0.0 || t > path.length() + space.tolerance() * (1.0 + t) {
        return Err(GeomError::OutOfRange {
            what: "t",
            value: t,
            lo: 0.0,
            hi: path.length(),
        });
    }
    space.locate(path, t)
}

fn candidate_points(space: &MetricSpace, origin: Site, c: &Candidate, n: usize, t: f64) -> Result<Vec<Site>> {
    match c {
        Candidate::Bouquets(bs) => bs.iter().map(|b| p_nt(space, b, n, t)).collect(),
        Candidate::Point(y) => {
            let g = space.geodesic(origin, *y)?;
            Ok(vec![space.locate(&g, t.min(g.length()))?])
        }
    }
}

/// Three-valued membership of `y` in S(x, r; n, t), S₀(x; n, t) or
/// S′(x, r; n, t) where `centers` are representatives of x.
pub fn neighborhood_member(
    space: &MetricSpace,
    spec: &NeighborhoodSpec,
    centers: &[Bouquet],
    y: &Candidate,
    rcat: Option<f64>,
) -> Result<Membership> {
    if centers.is_empty() {
        return Err(GeomError::Invalid("no center representatives".into()));
    }
    if !(spec.r > 0.0) {
        return Err(GeomError::OutOfRange {
            what: "r",
            value: spec.r,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let xs = centers
        .iter()
        .map(|b| p_nt(space, b, spec.n, spec.t))
        .collect::<Result<Vec<_>>>()?;
    let ys = candidate_points(space, centers[0].origin(), y, spec.n, spec.t)?;
    if ys.is_empty() {
        return Err(GeomError::Invalid("no candidate representatives".into()));
    }
    let mut pairs = Vec::with_capacity(xs.len() * ys.len());
    for (i, &a) in xs.iter().enumerate() {
        for (j, &b) in ys.iter().enumerate() {
            pairs.push((i, j, space.dist(a, b)?));
        }
    }
    let closest = pairs.iter().copied().min_by(|a, b| a.2.total_cmp(&b.2)).expect("nonempty");
    let farthest = pairs.iter().copied().max_by(|a, b| a.2.total_cmp(&b.2)).expect("nonempty");
    let snap = snap(space);
    let cover = rcat.map(|c| 2.0 * (5.0 * c + 4.0));
    let r = spec.r;
    let (verdict, witness) = match spec.variant {
        Variant::S => {
            if closest.2 < r + snap {
                (Tri::True, Some(closest))
            } else if cover.is_some_and(|cv| closest.2 - cv >= r + snap) {
                (Tri::False, Some(closest))
            } else {
                (Tri::Unknown, Some(closest))
            }
        }
        Variant::S0 => {
            if closest.2 <= snap {
                (Tri::True, Some(closest))
            } else if cover.is_some_and(|cv| closest.2 - cv > snap) {
                (Tri::False, Some(closest))
            } else {
                (Tri::Unknown, Some(closest))
            }
        }
        Variant::Sprime => {
            if farthest.2 >= r + snap {
                (Tri::False, Some(farthest))
            } else if cover.is_some_and(|cv| farthest.2 + cv < r) {
                (Tri::True, Some(farthest))
            } else {
                (Tri::Unknown, Some(farthest))
            }
        }
    };
    Ok(Membership {
        verdict,
        witness,
        min_distance: closest.2,
        max_distance: farthest.2,
        snap,
        cover,
    })
}

/// Where the separating neighbourhoods S(·, 1; n, t) are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationTime {
    /// t = L_{n−1}.
    #[default]
    PreviousLength,
    /// t = L_n.
    Length,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    /// 15C + 14.
    pub threshold: f64,
    /// First 1-based n whose tip gap d(β¹_n(L_n), β²_n(L_n)) reaches the
    /// threshold.
    pub first_tip_n: usize,
    pub tip_gap: f64,
    /// First n ≥ `first_tip_n` where every supplied pair is at least the
    /// threshold apart at time t; None if the horizon runs out.
    pub disjoint_n: Option<usize>,
    pub t: Option<f64>,
    /// Smallest supplied-pair distance at (disjoint_n, t), or at the last n
    /// tried.
    pub min_gap: f64,
    pub time: SeparationTime,
    pub allowance: f64,
    pub passed: bool,
}

/// Exhibits disjoint neighbourhoods S(x, 1; n, t) and S(y, 1; n, t) of two
/// inequivalent classes. A point z in both would put some representatives
/// of x and y within 2 + 3(5C + 4) = 15C + 14 of each other at (n, t), so
/// it suffices that all supplied pairs are at least that far apart there.
pub fn separation_check(
    space: &MetricSpace,
    xs: &[Bouquet],
    ys: &[Bouquet],
    rcat: f64,
    time: SeparationTime,
) -> Result<SeparationReport> {
    let (x0, y0) = match (xs.first(), ys.first()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(GeomError::Invalid("both classes need a representative".into())),
    };
    let cert = certify_asymptotic(space, x0, y0, &CertifyOptions::default())?;
    if cert.verdict.is_equivalent() {
        return Err(GeomError::Precondition(format!(
            "representatives are not certified inequivalent: {:?}",
            cert.verdict
        )));
    }
    let threshold = 15.0 * rcat + 14.0;
    let tol = space.tolerance();
    let horizon = xs.iter().chain(ys).map(Bouquet::len).min().expect("nonempty");
    let mut first = None;
    for n in 1..=horizon {
        let gap = space.dist(x0.tips()[n - 1], y0.tips()[n - 1])?;
        if gap >= threshold - tol * (1.0 + gap) {
            first = Some((n, gap));
            break;
        }
    }
    let (first_tip_n, tip_gap) = first.ok_or_else(|| {
        GeomError::Horizon(format!("tip gap stays below 15C + 14 = {threshold} through n = {horizon}"))
    })?;
    let mut disjoint = None;
    let mut min_gap = f64::INFINITY;
    for n in first_tip_n.max(match time {
        SeparationTime::PreviousLength => 2,
        SeparationTime::Length => 1,
    })..=horizon
    {
        let t = xs
            .iter()
            .chain(ys)
            .map(|b| match time {
                SeparationTime::PreviousLength => b.lengths()[n - 2],
                SeparationTime::Length => b.lengths()[n - 1],
            })
            .fold(f64::INFINITY, f64::min);
        let mut gap = f64::INFINITY;
        for a in xs {
            let pa = p_nt(space, a, n, t)?;
            for b in ys {
                gap = gap.min(space.dist(pa, p_nt(space, b, n, t)?)?);
            }
        }
        min_gap = gap;
        if gap >= threshold - tol * (1.0 + gap) {
            disjoint = Some((n, t));
            break;
        }
    }
    Ok(SeparationReport {
        threshold,
        first_tip_n,
        tip_gap,
        disjoint_n: disjoint.map(|d| d.0),
        t: disjoint.map(|d| d.1),
        min_gap,
        time,
        allowance: space.allowance(),
        passed: disjoint.is_some(),
    })
}

/// Finite proxy for membership of `y` in the canonical neighbourhood
/// V(x, r): the smallest ⟨a_m, b_n; o⟩ over the later half of both index
/// ranges exceeds r. A point y is the constant sequence.
pub fn gromov_neighborhood_member(space: &MetricSpace, a: &[Site], b: &[Site], r: f64) -> Result<(bool, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(GeomError::Invalid("empty sequence".into()));
    }
    let o = space.basepoint();
    let mut low = f64::INFINITY;
    for &x in &a[a.len() / 2..] {
        for &y in &b[b.len() / 2..] {
            low = low.min(crate::metric::gromov_product(space, x, y, o)?);
        }
    }
    Ok((low > r, low))
}

/// Membership of `y` in the cone neighbourhood U(x, r, t) of the plane for
/// the ray from o in direction `dir`: d(o, y) ≥ t and the points at
/// distance t along the two rays are closer than r.
pub fn cone_neighborhood_member(
    space: &MetricSpace,
    dir: [f64; 2],
    y: Site,
    r: f64,
    t: f64,
) -> Result<(bool, f64)> {
    if space.is_graph() {
        return Err(GeomError::Precondition("cone neighbourhoods need explicit coordinates".into()));
    }
    let o = space.position(Site::Vertex(space.basepoint()))?;
    let p = space.position(y)?;
    let v = [p[0] - o[0], p[1] - o[1]];
    let len = v[0].hypot(v[1]);
    let dl = dir[0].hypot(dir[1]);
    if !(dl > 0.0) {
        return Err(GeomError::Invalid("zero direction".into()));
    }
    if len < t {
        return Ok((false, f64::INFINITY));
    }
    let px = [t * dir[0] / dl, t * dir[1] / dl];
    let py = [t * v[0] / len, t * v[1] / len];
    let d = (px[0] - py[0]).hypot(px[1] - py[1]);
    Ok((d < r, d))
}
