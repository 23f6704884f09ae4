use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::path::PathRec;
use crate::error::{GeomError, Result};
use crate::sampling;
use crate::tolerances::{FULL_MATRIX_LIMIT, ROW_CACHE_ENTRIES, TOL_EXACT};

/// Dense point index, `0..space.len()`.
pub type PointId = usize;

/// A location in a space: a stored point, or (explicit planar metrics only)
/// an arbitrary planar position such as the interior of a segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Site {
    Vertex(PointId),
    Planar([f64; 2]),
}

impl Site {
    pub fn vertex(self) -> Option<PointId> {
        match self {
            Site::Vertex(v) => Some(v),
            Site::Planar(_) => None,
        }
    }
}

impl From<PointId> for Site {
    fn from(v: PointId) -> Self {
        Site::Vertex(v)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Vertex(v) => write!(f, "#{v}"),
            Site::Planar([x, y]) => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Graph,
    ExplicitEuclidean,
}

/// Provenance of a generated space.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceInfo {
    pub generator: String,
    /// Additive rough CAT(0) constant appropriate for the underlying region.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rcat_constant: Option<f64>,
    /// Multiplicative distortion bound of the net against the region metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion: Option<f64>,
}

/// Finite metric space: a weighted graph with its path metric, or a planar
/// point set with the Euclidean metric. Immutable; distance rows are cached
/// on demand behind a lock.
pub struct MetricSpace {
    kind: MetricKind,
    coords: Vec<Option<[f64; 2]>>,
    adj: Vec<Vec<(PointId, f64)>>,
    edges: Vec<(PointId, PointId, f64)>,
    eps: f64,
    basepoint: PointId,
    max_edge: f64,
    info: Option<SpaceInfo>,
    cache: RowCache,
}

impl Clone for MetricSpace {
    fn clone(&self) -> Self {
        MetricSpace {
            kind: self.kind,
            coords: self.coords.clone(),
            adj: self.adj.clone(),
            edges: self.edges.clone(),
            eps: self.eps,
            basepoint: self.basepoint,
            max_edge: self.max_edge,
            info: self.info.clone(),
            cache: RowCache::new(self.coords.len()),
        }
    }
}

impl fmt::Debug for MetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricSpace")
            .field("kind", &self.kind)
            .field("points", &self.coords.len())
            .field("edges", &self.edges.len())
            .field("eps", &self.eps)
            .field("basepoint", &self.basepoint)
            .finish()
    }
}

impl MetricSpace {
    /// Graph path metric. Edge weights must be positive; parallel edges keep
    /// the lighter weight.
    pub fn graph(
        coords: Vec<Option<[f64; 2]>>,
        edges: Vec<(PointId, PointId, f64)>,
        eps: f64,
        basepoint: PointId,
    ) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(GeomError::Empty);
        }
        if basepoint >= n {
            return Err(GeomError::UnknownPoint(format!("basepoint {basepoint}")));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(GeomError::Invalid(format!("eps must be finite and >= 0, got {eps}")));
        }
        let mut best: HashMap<(PointId, PointId), f64> = HashMap::new();
        for &(a, b, w) in &edges {
            if a >= n || b >= n {
                return Err(GeomError::UnknownPoint(format!("edge endpoint {}", a.max(b))));
            }
            if a == b {
                return Err(GeomError::Invalid(format!("self-loop at {a}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(GeomError::Invalid(format!(
                    "edge ({a},{b}) has weight {w}; weights must be positive so distinct points stay apart"
                )));
            }
            let key = (a.min(b), a.max(b));
            let slot = best.entry(key).or_insert(w);
            if w < *slot {
                *slot = w;
            }
        }
        let mut edges: Vec<_> = best.into_iter().map(|((a, b), w)| (a, b, w)).collect();
        edges.sort_by_key(|e| (e.0, e.1));
        let mut adj = vec![Vec::new(); n];
        let mut max_edge: f64 = 0.0;
        for &(a, b, w) in &edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
            max_edge = max_edge.max(w);
        }
        for list in &mut adj {
            list.sort_by_key(|e| e.0);
        }
        Ok(MetricSpace {
            kind: MetricKind::Graph,
            cache: RowCache::new(n),
            coords,
            adj,
            edges,
            eps,
            basepoint,
            max_edge,
            info: None,
        })
    }

    /// Explicit planar point set with the Euclidean metric.
    pub fn euclidean(coords: Vec<[f64; 2]>, basepoint: PointId) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(GeomError::Empty);
        }
        if basepoint >= n {
            return Err(GeomError::UnknownPoint(format!("basepoint {basepoint}")));
        }
        if coords.iter().any(|c| !c[0].is_finite() || !c[1].is_finite()) {
            return Err(GeomError::Invalid("non-finite coordinate".into()));
        }
        Ok(MetricSpace {
            kind: MetricKind::ExplicitEuclidean,
            cache: RowCache::new(n),
            coords: coords.into_iter().map(Some).collect(),
            adj: Vec::new(),
            edges: Vec::new(),
            eps: 0.0,
            basepoint,
            max_edge: 0.0,
            info: None,
        })
    }

    /// The plane with only the origin stored; every other location is a
    /// planar site.
    pub fn plane() -> Self {
        MetricSpace::euclidean(vec![[0.0, 0.0]], 0).expect("one finite point")
    }

    pub fn with_info(mut self, info: SpaceInfo) -> Self {
        self.info = Some(info);
        self
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn is_graph(&self) -> bool {
        self.kind == MetricKind::Graph
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn basepoint(&self) -> PointId {
        self.basepoint
    }

    pub fn info(&self) -> Option<&SpaceInfo> {
        self.info.as_ref()
    }

    pub fn coords(&self, p: PointId) -> Option<[f64; 2]> {
        self.coords.get(p).copied().flatten()
    }

    pub fn edges(&self) -> &[(PointId, PointId, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, p: PointId) -> &[(PointId, f64)] {
        self.adj.get(p).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_edge_weight(&self) -> f64 {
        self.max_edge
    }

    /// Discretization slack added to assertions: 4·eps + 2·(max edge weight)
    /// on graphs, 0 for explicit metrics.
    pub fn allowance(&self) -> f64 {
        match self.kind {
            MetricKind::Graph => 4.0 * self.eps + 2.0 * self.max_edge,
            MetricKind::ExplicitEuclidean => 0.0,
        }
    }

    /// Tolerance for comparing two numbers computed from this metric.
    pub fn tolerance(&self) -> f64 {
        match self.kind {
            MetricKind::Graph => crate::tolerances::TOL_NET,
            MetricKind::ExplicitEuclidean => TOL_EXACT,
        }
    }

    pub fn check_site(&self, s: Site) -> Result<()> {
        match s {
            Site::Vertex(v) if v < self.len() => Ok(()),
            Site::Vertex(v) => Err(GeomError::UnknownPoint(v.to_string())),
            Site::Planar(xy) => {
                if self.kind == MetricKind::Graph {
                    Err(GeomError::UnknownPoint(format!(
                        "planar site ({}, {}) in a graph space",
                        xy[0], xy[1]
                    )))
                } else if xy[0].is_finite() && xy[1].is_finite() {
                    Ok(())
                } else {
                    Err(GeomError::Invalid("non-finite planar site".into()))
                }
            }
        }
    }

    /// Planar position of a site in an explicit space.
    pub fn position(&self, s: Site) -> Result<[f64; 2]> {
        self.check_site(s)?;
        match s {
            Site::Planar(xy) => Ok(xy),
            Site::Vertex(v) => self
                .coords(v)
                .ok_or_else(|| GeomError::Invalid(format!("point {v} has no coordinates"))),
        }
    }

    pub fn dist(&self, a: impl Into<Site>, b: impl Into<Site>) -> Result<f64> {
        let (a, b) = (a.into(), b.into());
        match self.kind {
            MetricKind::ExplicitEuclidean => {
                let (p, q) = (self.position(a)?, self.position(b)?);
                Ok((p[0] - q[0]).hypot(p[1] - q[1]))
            }
            MetricKind::Graph => {
                self.check_site(a)?;
                self.check_site(b)?;
                let (a, b) = (a.vertex().unwrap_or(0), b.vertex().unwrap_or(0));
                if a == b {
                    return Ok(0.0);
                }
                let d = match self.cache.peek(b) {
                    Some(row) => row[a],
                    None => self.row(a)?[b],
                };
                if d.is_finite() {
                    Ok(d)
                } else {
                    Err(GeomError::Disconnected(a, b))
                }
            }
        }
    }

    /// Distances from `src` to every stored point. Graph rows may contain
    /// infinities for unreachable points.
    pub fn row(&self, src: PointId) -> Result<Arc<[f64]>> {
        self.check_site(Site::Vertex(src))?;
        match self.kind {
            MetricKind::ExplicitEuclidean => {
                let p = self.coords[src].expect("explicit points carry coordinates");
                Ok(self
                    .coords
                    .iter()
                    .map(|q| {
                        let q = q.expect("explicit points carry coordinates");
                        (p[0] - q[0]).hypot(p[1] - q[1])
                    })
                    .collect())
            }
            MetricKind::Graph => {
                if let Some(row) = self.cache.peek(src) {
                    return Ok(row);
                }
                let row: Arc<[f64]> = self.dijkstra(src).into();
                self.cache.insert(src, row.clone());
                Ok(row)
            }
        }
    }

    fn dijkstra(&self, src: PointId) -> Vec<f64> {
        let n = self.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(Reverse((Key(0.0), src)));
        while let Some(Reverse((Key(d), u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((Key(nd), v)));
                }
            }
        }
        dist
    }

    /// Shortest path from `x` to `y`: the lexicographically smallest vertex
    /// sequence among graph geodesics, or the straight segment in explicit
    /// spaces.
    pub fn geodesic(&self, x: impl Into<Site>, y: impl Into<Site>) -> Result<PathRec> {
        let (x, y) = (x.into(), y.into());
        self.check_site(x)?;
        self.check_site(y)?;
        match self.kind {
            MetricKind::ExplicitEuclidean => {
                if self.dist(x, y)? == 0.0 {
                    PathRec::from_sites(self, vec![x])
                } else {
                    PathRec::from_sites(self, vec![x, y])
                }
            }
            MetricKind::Graph => {
                let (xv, yv) = (x.vertex().unwrap_or(0), y.vertex().unwrap_or(0));
                let to_y = self.row(yv)?;
                if !to_y[xv].is_finite() {
                    return Err(GeomError::Disconnected(xv, yv));
                }
                let mut walk = vec![xv];
                let mut u = xv;
                while u != yv {
                    let du = to_y[u];
                    let tol = 1e-12 * (1.0 + du);
                    let next = self.adj[u]
                        .iter()
                        .find(|&&(v, w)| w + to_y[v] <= du + tol)
                        .map(|&(v, _)| v)
                        .expect("a shortest-path predecessor always exists");
                    walk.push(next);
                    u = next;
                }
                PathRec::from_sites(self, walk.into_iter().map(Site::Vertex).collect())
            }
        }
    }

    /// Location at arclength `t`: nearest vertex on graphs (ties to the
    /// earlier one), linear interpolation in explicit spaces.
    pub fn locate(&self, path: &PathRec, t: f64) -> Result<Site> {
        Ok(self.locate_with_arclength(path, t)?.0)
    }

    /// As [`MetricSpace::locate`], also returning the arclength of the
    /// returned location along the path.
    pub fn locate_with_arclength(&self, path: &PathRec, t: f64) -> Result<(Site, f64)> {
        let len = path.length();
        let tol = TOL_EXACT * (1.0 + len);
        if !(t >= -tol && t <= len + tol) {
            return Err(GeomError::OutOfRange {
                what: "arclength",
                value: t,
                lo: 0.0,
                hi: len,
            });
        }
        let t = t.clamp(0.0, len);
        match self.kind {
            MetricKind::Graph => {
                let i = path.index_near(t);
                Ok((path.vertices()[i], path.cum_len()[i]))
            }
            MetricKind::ExplicitEuclidean => {
                let cum = path.cum_len();
                let i = cum.partition_point(|&c| c <= t).saturating_sub(1);
                if i + 1 >= cum.len() || cum[i] == t {
                    return Ok((path.vertices()[i], cum[i]));
                }
                let seg = cum[i + 1] - cum[i];
                let f = (t - cum[i]) / seg;
                let p = self.position(path.vertices()[i])?;
                let q = self.position(path.vertices()[i + 1])?;
                Ok((
                    Site::Planar([p[0] + f * (q[0] - p[0]), p[1] + f * (q[1] - p[1])]),
                    t,
                ))
            }
        }
    }

    /// Distance from `z` to the path: over vertices on graphs, over the
    /// segments in explicit spaces.
    pub fn dist_to_path(&self, z: impl Into<Site>, path: &PathRec) -> Result<f64> {
        let z = z.into();
        match self.kind {
            MetricKind::Graph => {
                let zv = z.vertex().ok_or_else(|| GeomError::UnknownPoint(z.to_string()))?;
                let row = self.row(zv)?;
                let mut best = f64::INFINITY;
                for s in path.vertices() {
                    best = best.min(row[s.vertex().unwrap_or(0)]);
                }
                if best.is_finite() {
                    Ok(best)
                } else {
                    Err(GeomError::Disconnected(zv, path.start().vertex().unwrap_or(0)))
                }
            }
            MetricKind::ExplicitEuclidean => {
                let p = self.position(z)?;
                let pts: Vec<[f64; 2]> = path
                    .vertices()
                    .iter()
                    .map(|&s| self.position(s))
                    .collect::<Result<_>>()?;
                if pts.len() == 1 {
                    return Ok((p[0] - pts[0][0]).hypot(p[1] - pts[0][1]));
                }
                Ok(pts
                    .windows(2)
                    .map(|w| point_segment_distance(p, w[0], w[1]))
                    .fold(f64::INFINITY, f64::min))
            }
        }
    }

    /// Samples triples and returns the largest violation of symmetry or the
    /// triangle inequality. Errors if it exceeds the metric's tolerance.
    pub fn spot_check(&self, triples: usize, seed: u64) -> Result<f64> {
        let mut rng = sampling::rng(seed);
        let n = self.len();
        let mut worst: f64 = 0.0;
        for _ in 0..triples {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let ab = self.dist(a, b)?;
            let ba = self.dist(b, a)?;
            let bc = self.dist(b, c)?;
            let ac = self.dist(a, c)?;
            let scale = 1.0 + ab.max(bc).max(ac);
            worst = worst.max((ab - ba).abs() / scale);
            worst = worst.max((ac - ab - bc) / scale);
            if a != b && ab <= 0.0 {
                return Err(GeomError::Invalid(format!("distinct points {a},{b} at distance 0")));
            }
        }
        if worst > TOL_EXACT {
            return Err(GeomError::Invalid(format!(
                "metric spot check violated by {worst:e}"
            )));
        }
        Ok(worst)
    }

    /// Copy of the space with points renumbered: new point `i` is old point
    /// `order[i]`.
    pub fn permuted(&self, order: &[PointId]) -> Result<Self> {
        let n = self.len();
        let mut inverse = vec![usize::MAX; n];
        if order.len() != n {
            return Err(GeomError::Invalid("permutation has the wrong length".into()));
        }
        for (new, &old) in order.iter().enumerate() {
            if old >= n || inverse[old] != usize::MAX {
                return Err(GeomError::Invalid("not a permutation".into()));
            }
            inverse[old] = new;
        }
        let coords = order.iter().map(|&o| self.coords[o]).collect();
        let space = match self.kind {
            MetricKind::Graph => MetricSpace::graph(
                coords,
                self.edges
                    .iter()
                    .map(|&(a, b, w)| (inverse[a], inverse[b], w))
                    .collect(),
                self.eps,
                inverse[self.basepoint],
            )?,
            MetricKind::ExplicitEuclidean => MetricSpace::euclidean(
                order.iter().map(|&o| self.coords[o].unwrap_or([0.0, 0.0])).collect(),
                inverse[self.basepoint],
            )?,
        };
        Ok(match &self.info {
            Some(info) => space.with_info(info.clone()),
            None => space,
        })
    }

    pub fn to_json(&self) -> String {
        let doc = SpaceJson {
            schema_version: 1,
            metric_kind: self.kind,
            points: self
                .coords
                .iter()
                .enumerate()
                .map(|(id, xy)| PointJson { id, xy: *xy })
                .collect(),
            edges: self.edges.clone(),
            eps: self.eps,
            basepoint: self.basepoint,
            info: self.info.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("space serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpaceJson = serde_json::from_str(text).map_err(GeomError::schema)?;
        if doc.schema_version != 1 {
            return Err(GeomError::Invalid(format!(
                "unsupported schema_version {}",
                doc.schema_version
            )));
        }
        let n = doc.points.len();
        let mut coords = vec![None; n];
        let mut seen = vec![false; n];
        for p in &doc.points {
            if p.id >= n || seen[p.id] {
                return Err(GeomError::Invalid(format!(
                    "point ids must be exactly 0..{n} without repeats (found {})",
                    p.id
                )));
            }
            seen[p.id] = true;
            coords[p.id] = p.xy;
        }
        let space = match doc.metric_kind {
            MetricKind::Graph => MetricSpace::graph(coords, doc.edges, doc.eps, doc.basepoint)?,
            MetricKind::ExplicitEuclidean => {
                if !doc.edges.is_empty() {
                    return Err(GeomError::Invalid(
                        "explicit-euclidean spaces take no edges".into(),
                    ));
                }
                let xy = coords
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.ok_or_else(|| GeomError::Invalid(format!("point {i} needs xy")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                MetricSpace::euclidean(xy, doc.basepoint)?
            }
        };
        Ok(match doc.info {
            Some(info) => space.with_info(info),
            None => space,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        MetricSpace::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

pub fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let f = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    (p[0] - a[0] - f * dx).hypot(p[1] - a[1] - f * dy)
}

fn one() -> u32 {
    1
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceJson {
    #[serde(default = "one")]
    schema_version: u32,
    metric_kind: MetricKind,
    points: Vec<PointJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    edges: Vec<(PointId, PointId, f64)>,
    eps: f64,
    basepoint: PointId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    info: Option<SpaceInfo>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    id: PointId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xy: Option<[f64; 2]>,
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Read-through cache of single-source distance rows, bounded so that large
/// spaces never hold a full matrix.
struct RowCache {
    capacity: usize,
    inner: Mutex<CacheInner>,
}

#[derive(Default)]
struct CacheInner {
    rows: HashMap<PointId, Arc<[f64]>>,
    order: VecDeque<PointId>,
}

impl RowCache {
    fn new(n: usize) -> Self {
        let capacity = if n < FULL_MATRIX_LIMIT {
            n.min(ROW_CACHE_ENTRIES / n.max(1)).max(1)
        } else {
            (ROW_CACHE_ENTRIES / n).max(16)
        };
        RowCache {
            capacity,
            inner: Mutex::new(CacheInner::default()),
        }
    }

    fn peek(&self, src: PointId) -> Option<Arc<[f64]>> {
        self.inner.lock().expect("cache lock").rows.get(&src).cloned()
    }

    fn insert(&self, src: PointId, row: Arc<[f64]>) {
        let mut inner = self.inner.lock().expect("cache lock");
        if inner.rows.contains_key(&src) {
            return;
        }
        while inner.rows.len() >= self.capacity {
            match inner.order.pop_front() {
                Some(old) => {
                    inner.rows.remove(&old);
                }
                None => break,
            }
        }
        inner.rows.insert(src, row);
        inner.order.push_back(src);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> MetricSpace {
        let coords = (0..n).map(|i| Some([i as f64, 0.0])).collect();
        let edges = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        MetricSpace::graph(coords, edges, 0.0, 0).unwrap()
    }

    #[test]
    fn graph_distances_follow_edges() {
        let g = path_graph(6);
        assert_eq!(g.dist(0, 5).unwrap(), 5.0);
        assert_eq!(g.dist(3, 1).unwrap(), 2.0);
        assert_eq!(g.dist(2, 2).unwrap(), 0.0);
    }

    #[test]
    fn disconnected_query_is_an_error() {
        let g = MetricSpace::graph(vec![None, None, None], vec![(0, 1, 1.0)], 0.0, 0).unwrap();
        assert!(matches!(g.dist(0, 2), Err(GeomError::Disconnected(_, _))));
    }

    #[test]
    fn zero_weight_edges_are_rejected() {
        assert!(MetricSpace::graph(vec![None, None], vec![(0, 1, 0.0)], 0.0, 0).is_err());
    }

    #[test]
    fn explicit_distance_is_planar() {
        let s = MetricSpace::euclidean(vec![[0.0, 0.0], [3.0, 4.0]], 0).unwrap();
        assert_eq!(s.dist(0, 1).unwrap(), 5.0);
        assert_eq!(s.dist(Site::Planar([0.0, 1.0]), 1).unwrap(), 3.0f64.hypot(3.0));
    }

    #[test]
    fn planar_sites_are_rejected_in_graphs() {
        let g = path_graph(3);
        assert!(g.dist(Site::Planar([0.5, 0.0]), 1).is_err());
    }

    #[test]
    fn geodesic_breaks_ties_lexicographically() {
        // A 4-cycle 0-1-3, 0-2-3 with equal weights: the walk goes through 1.
        let g = MetricSpace::graph(
            vec![None; 4],
            vec![(0, 1, 1.0), (1, 3, 1.0), (0, 2, 1.0), (2, 3, 1.0)],
            0.0,
            0,
        )
        .unwrap();
        let p = g.geodesic(0, 3).unwrap();
        assert_eq!(p.vertices(), &[Site::Vertex(0), Site::Vertex(1), Site::Vertex(3)]);
        assert_eq!(p.length(), 2.0);
        assert_eq!(p.slack(), 0.0);
    }

    #[test]
    fn locate_interpolates_only_in_explicit_spaces() {
        let s = MetricSpace::euclidean(vec![[0.0, 0.0], [4.0, 0.0]], 0).unwrap();
        let p = s.geodesic(0, 1).unwrap();
        assert_eq!(s.locate(&p, 1.5).unwrap(), Site::Planar([1.5, 0.0]));
        let g = path_graph(3);
        let q = g.geodesic(0, 2).unwrap();
        assert_eq!(g.locate(&q, 0.9).unwrap(), Site::Vertex(1));
    }

    #[test]
    fn distance_to_segment_in_the_plane() {
        let s = MetricSpace::euclidean(vec![[-5.0, 0.0], [5.0, 0.0], [0.0, 3.0]], 0).unwrap();
        let p = s.geodesic(0, 1).unwrap();
        assert!((s.dist_to_path(2, &p).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_preserves_distances() {
        let g = path_graph(4);
        let back = MetricSpace::from_json(&g.to_json()).unwrap();
        assert_eq!(back.dist(0, 3).unwrap(), 3.0);
        assert_eq!(back.basepoint(), 0);
    }

    #[test]
    fn corrupted_json_reports_line() {
        let text = "{\n  \"metric_kind\": \"graph\",\n  \"points\": [ oops ]\n}";
        match MetricSpace::from_json(text) {
            Err(GeomError::Schema { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn ids_must_be_dense() {
        let text = r#"{"metric_kind":"explicit-euclidean","points":[{"id":0,"xy":[0,0]},{"id":5,"xy":[1,0]}],"eps":0,"basepoint":0}"#;
        assert!(MetricSpace::from_json(text).is_err());
    }

    #[test]
    fn permutation_preserves_distances() {
        let g = path_graph(5);
        let p = g.permuted(&[4, 2, 0, 1, 3]).unwrap();
        // new 0 is old 4, new 2 is old 0.
        assert_eq!(p.dist(0, 2).unwrap(), 4.0);
        assert_eq!(p.basepoint(), 2);
    }

    #[test]
    fn spot_check_accepts_metrics() {
        assert!(path_graph(10).spot_check(100, 3).unwrap() <= TOL_EXACT);
    }

    #[test]
    fn bounded_cache_evicts_but_answers_stay_identical() {
        let cache = RowCache {
            capacity: 2,
            inner: Mutex::new(CacheInner::default()),
        };
        for i in 0..5 {
            cache.insert(i, vec![i as f64].into());
        }
        assert!(cache.peek(0).is_none());
        assert_eq!(cache.peek(4).unwrap()[0], 4.0);
    }
}
