//! Discretized planar regions and trees, built by named generators.
//!
//! Each region kind is a [`SpaceGenerator`] registered by name in a
//! [`GeneratorRegistry`]; [`generate`] dispatches on `RegionSpec::kind`.

mod examples;
mod net;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::metric::{MetricSpace, PointId, SpaceInfo};
use crate::sampling;
use crate::tolerances::KING_DISTORTION;
use net::{aligned_steps, euclidean_weight, halfplane_weight, steps, NetBuilder};

pub use examples::{explicit_example_points, ExampleName, ExamplePoints, MAX_EXAMPLE_INDEX};

/// Additive rough CAT(0) constant of a CAT(0) region.
pub const CAT0_RCAT_CONSTANT: f64 = 3.732_050_807_568_877; // 2 + √3

/// Parameters of a generated region. Fields a kind does not use are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub kind: String,
    pub eps: f64,
    pub extent: f64,
    /// Arm count of `star`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Side lengths of `rectangle`; both default to `extent`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    /// Vertex counts of `grid`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branching: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Vertex count of `random-tree`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RegionSpec {
    pub fn new(kind: &str, eps: f64, extent: f64) -> Self {
        RegionSpec {
            kind: kind.to_string(),
            eps,
            extent,
            k: None,
            width: None,
            height: None,
            w: None,
            h: None,
            branching: None,
            depth: None,
            vertices: None,
            seed: None,
        }
    }

    pub fn star(k: usize, eps: f64, extent: f64) -> Self {
        RegionSpec {
            k: Some(k),
            ..RegionSpec::new("star", eps, extent)
        }
    }

    pub fn rectangle(width: f64, height: f64, eps: f64) -> Self {
        RegionSpec {
            width: Some(width),
            height: Some(height),
            ..RegionSpec::new("rectangle", eps, width.max(height))
        }
    }

    pub fn tree(branching: usize, depth: usize, eps: f64, extent: f64) -> Self {
        RegionSpec {
            branching: Some(branching),
            depth: Some(depth),
            ..RegionSpec::new("tree", eps, extent)
        }
    }

    fn check(&self, extent_used: bool) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(GeomError::OutOfRange {
                what: "eps",
                value: self.eps,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        if extent_used && !(self.extent >= 4.0 * self.eps && self.extent.is_finite()) {
            return Err(GeomError::OutOfRange {
                what: "extent",
                value: self.extent,
                lo: 4.0 * self.eps,
                hi: f64::INFINITY,
            });
        }
        Ok(())
    }
}

/// A region kind that can be discretized into a [`MetricSpace`].
pub trait SpaceGenerator: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace>;
    /// Whether the underlying region is convex, which enables the
    /// chord-distance quality gate.
    fn convex(&self) -> bool {
        false
    }
    /// Whether `extent` shapes the region; the extent ≥ 4·eps precondition
    /// applies only then.
    fn uses_extent(&self, _spec: &RegionSpec) -> bool {
        true
    }
}

/// Name-indexed generator table.
#[derive(Clone, Default)]
pub struct GeneratorRegistry {
    entries: BTreeMap<&'static str, Arc<dyn SpaceGenerator>>,
}

impl GeneratorRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// All built-in generators.
    pub fn standard() -> Self {
        Self::empty()
            .with(Rectangle)
            .with(Grid)
            .with(SlitSquare)
            .with(Star)
            .with(Chain)
            .with(Strips)
            .with(Parabolic)
            .with(HalfplaneHyperbolic)
            .with(Tree)
            .with(RandomTree)
    }

    pub fn with(mut self, g: impl SpaceGenerator + 'static) -> Self {
        self.register(Arc::new(g));
        self
    }

    pub fn register(&mut self, g: Arc<dyn SpaceGenerator>) {
        self.entries.insert(g.name(), g);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn SpaceGenerator>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| GeomError::UnknownStrategy {
                kind: "generator",
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    /// Builds the space and runs the generation checks: metric spot check
    /// and, for convex regions, the net quality gate.
    pub fn generate(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let g = self.get(&spec.kind)?;
        spec.check(g.uses_extent(spec))?;
        let space = g.build(spec)?;
        let worst = space.spot_check(32, sampling::substream(spec.seed.unwrap_or(0), "spot"))?;
        if worst > space.tolerance() {
            return Err(GeomError::Resolution(format!(
                "triangle inequality violated by {worst}"
            )));
        }
        if g.convex() {
            quality_gate(&space, 24)?;
        }
        Ok(space)
    }
}

/// Generates `spec` with the standard registry.
pub fn generate(spec: &RegionSpec) -> Result<MetricSpace> {
    GeneratorRegistry::standard().generate(spec)
}

/// Samples vertex pairs and checks chord ≤ d ≤ κ·chord + 4·eps·(1 + chord),
/// κ being the king-move distortion.
pub fn quality_gate(space: &MetricSpace, pairs: usize) -> Result<()> {
    let n = space.len();
    let eps = space.eps();
    let mut rng = sampling::rng(sampling::substream(n as u64, "quality-gate"));
    for _ in 0..pairs {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (pa, pb) = match (space.coords(a), space.coords(b)) {
            (Some(pa), Some(pb)) => (pa, pb),
            _ => continue,
        };
        let chord = euclidean_weight(pa, pb);
        let d = space.dist(a, b)?;
        let hi = KING_DISTORTION * chord + 4.0 * eps * (1.0 + chord);
        if d < chord - 1e-9 * (1.0 + chord) || d > hi {
            return Err(GeomError::Resolution(format!(
                "pair ({a}, {b}): net distance {d} outside [{chord}, {hi}]"
            )));
        }
    }
    Ok(())
}

/// Vertex with coordinates nearest `xy`; ties go to the smaller id.
pub fn nearest_vertex(space: &MetricSpace, xy: [f64; 2]) -> Result<PointId> {
    let mut best: Option<(f64, PointId)> = None;
    for p in 0..space.len() {
        if let Some(c) = space.coords(p) {
            let d = euclidean_weight(c, xy);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, p));
            }
        }
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| GeomError::Invalid("space has no coordinates".into()))
}

fn info(generator: &str, rcat: Option<f64>, distortion: Option<f64>) -> SpaceInfo {
    SpaceInfo {
        generator: generator.to_string(),
        rcat_constant: rcat,
        distortion,
    }
}

fn planar_info(generator: &str) -> SpaceInfo {
    info(generator, Some(CAT0_RCAT_CONSTANT), Some(KING_DISTORTION))
}

/// Axis-parallel rectangle [0,width]×[0,height] with origin at the corner.
pub struct Rectangle;

impl SpaceGenerator for Rectangle {
    fn name(&self) -> &'static str {
        "rectangle"
    }
    fn summary(&self) -> &'static str {
        "closed rectangle [0,width]x[0,height], origin at (0,0)"
    }
    fn convex(&self) -> bool {
        true
    }
    fn uses_extent(&self, spec: &RegionSpec) -> bool {
        spec.width.is_none() || spec.height.is_none()
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let eps = spec.eps;
        let nx = steps(spec.width.unwrap_or(spec.extent), eps);
        let ny = steps(spec.height.unwrap_or(spec.extent), eps);
        lattice_box(nx, ny, eps, "rectangle")
    }
}

/// `w`×`h` lattice of vertices at spacing eps.
pub struct Grid;

impl SpaceGenerator for Grid {
    fn name(&self) -> &'static str {
        "grid"
    }
    fn summary(&self) -> &'static str {
        "w by h vertex lattice at spacing eps"
    }
    fn convex(&self) -> bool {
        true
    }
    fn uses_extent(&self, _spec: &RegionSpec) -> bool {
        false
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let (w, h) = (spec.w.unwrap_or(8), spec.h.unwrap_or(8));
        if w == 0 || h == 0 {
            return Err(GeomError::Invalid("grid needs w, h ≥ 1".into()));
        }
        lattice_box(w as i64 - 1, h as i64 - 1, spec.eps, "grid")
    }
}

fn lattice_box(nx: i64, ny: i64, eps: f64, name: &str) -> Result<MetricSpace> {
    if nx < 0 || ny < 0 {
        return Err(GeomError::Invalid("region is empty at this eps/extent".into()));
    }
    let mut b = NetBuilder::new(euclidean_weight);
    let p = b.piece();
    for i in 0..=nx {
        for j in 0..=ny {
            b.add(p, (i, j), [i as f64 * eps, j as f64 * eps]);
        }
    }
    Ok(b.finish(eps, 0)?.with_info(planar_info(name)))
}

/// Builds `k` half-open strips (0,1)×(0,extent] glued at a hub (0,0). Arm `a`
/// is drawn along the direction at angle π/2 + 2πa/k.
fn strips_at_hub(spec: &RegionSpec, k: usize, name: &str) -> Result<MetricSpace> {
    let eps = spec.eps;
    let across = steps(1.0, eps);
    let along = steps(spec.extent, eps);
    let across = if (across as f64 * eps - 1.0).abs() < 1e-9 { across - 1 } else { across };
    if across < 1 || along < 1 {
        return Err(GeomError::Invalid("region is empty at this eps/extent".into()));
    }
    let mut b = NetBuilder::new(euclidean_weight);
    let mut hub = None;
    for a in 0..k {
        let p = b.piece();
        let theta = PI / 2.0 + 2.0 * PI * a as f64 / k as f64;
        let dir = [theta.cos(), theta.sin()];
        let perp = [theta.sin(), -theta.cos()];
        match hub {
            None => hub = Some(b.add(p, (0, 0), [0.0, 0.0])),
            Some(h) => b.alias(p, (0, 0), h),
        }
        for i in 1..=across {
            for j in 1..=along {
                let (u, v) = (i as f64 * eps, j as f64 * eps);
                b.add(p, (i, j), [v * dir[0] + u * perp[0], v * dir[1] + u * perp[1]]);
            }
        }
    }
    Ok(b.finish(eps, 0)?.with_info(planar_info(name)))
}

/// {(0,0)} ∪ (0,1)×(0,extent].
pub struct SlitSquare;

impl SpaceGenerator for SlitSquare {
    fn name(&self) -> &'static str {
        "slit-square"
    }
    fn summary(&self) -> &'static str {
        "the origin together with the open strip (0,1)x(0,extent]"
    }
    fn convex(&self) -> bool {
        true
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        strips_at_hub(spec, 1, "slit-square")
    }
}

/// `k` copies of the slit square glued at their origins. Vertex 0 is the hub.
pub struct Star;

impl SpaceGenerator for Star {
    fn name(&self) -> &'static str {
        "star"
    }
    fn summary(&self) -> &'static str {
        "k strips (0,1)x(0,extent] glued at a common hub"
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let k = spec.k.unwrap_or(3);
        if k == 0 {
            return Err(GeomError::Invalid("star needs k ≥ 1".into()));
        }
        strips_at_hub(spec, k, "star")
    }
}

/// Open unit cells (i−1,i)×(0,1), i = 1..⌊extent⌋, joined by the corner
/// singletons (i,0). Requires 1/eps to be an integer.
pub struct Chain;

impl SpaceGenerator for Chain {
    fn name(&self) -> &'static str {
        "chain"
    }
    fn summary(&self) -> &'static str {
        "open unit cells glued in a row at shared corner points"
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let eps = spec.eps;
        let m = aligned_steps(1.0, eps, "the cell side")?;
        if m < 2 {
            return Err(GeomError::Invalid("region is empty at this eps/extent".into()));
        }
        let cells = (spec.extent + 1e-9).floor() as i64;
        let mut b = NetBuilder::new(euclidean_weight);
        let mut left = None;
        for c in 1..=cells {
            let p = b.piece();
            let x0 = (c - 1) as f64;
            match left {
                None => {
                    b.add(p, (0, 0), [0.0, 0.0]);
                }
                Some(id) => b.alias(p, (0, 0), id),
            }
            for i in 1..m {
                for j in 1..m {
                    b.add(p, (i, j), [x0 + i as f64 * eps, j as f64 * eps]);
                }
            }
            left = Some(b.add(p, (m, 0), [c as f64, 0.0]));
        }
        Ok(b.finish(eps, 0)?.with_info(planar_info("chain")))
    }
}

/// Cone {|y| ≤ x ≤ extent} cut into X₀ = {x ≤ 1} and
/// Xᵢ = {2^(i−1) ≤ x ≤ 2^i}; consecutive pieces are glued only along the
/// upper half of their common segment for odd i and the lower half for even
/// i. Requires 1/eps to be an integer.
pub struct Strips;

impl SpaceGenerator for Strips {
    fn name(&self) -> &'static str {
        "strips"
    }
    fn summary(&self) -> &'static str {
        "dyadic cone pieces glued along alternating half segments"
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let eps = spec.eps;
        let unit = aligned_steps(1.0, eps, "1")?;
        let xmax = steps(spec.extent, eps);
        let mut b = NetBuilder::new(euclidean_weight);
        let (mut lo, mut hi, mut i) = (0i64, unit, 0u32);
        while lo < xmax || (i == 0 && lo == 0) {
            let p = b.piece();
            let top = hi.min(xmax);
            for ix in lo..=top {
                for iy in -ix..=ix {
                    let glued = i > 0
                        && ix == lo
                        && if i % 2 == 1 { iy >= 0 } else { iy <= 0 };
                    if glued {
                        let id = b.lookup(p - 1, (ix, iy)).expect("previous piece boundary");
                        b.alias(p, (ix, iy), id);
                    } else {
                        b.add(p, (ix, iy), [ix as f64 * eps, iy as f64 * eps]);
                    }
                }
            }
            i += 1;
            lo = hi;
            hi *= 2;
        }
        Ok(b.finish(eps, 0)?.with_info(planar_info("strips")))
    }
}

/// {0 ≤ x ≤ extent, y² ≤ x}.
pub struct Parabolic;

impl SpaceGenerator for Parabolic {
    fn name(&self) -> &'static str {
        "parabolic"
    }
    fn summary(&self) -> &'static str {
        "parabolic region y^2 <= x, 0 <= x <= extent"
    }
    fn convex(&self) -> bool {
        true
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let eps = spec.eps;
        let mut b = NetBuilder::new(euclidean_weight);
        let p = b.piece();
        for ix in 0..=steps(spec.extent, eps) {
            let x = ix as f64 * eps;
            let r = steps(x.sqrt(), eps);
            for iy in -r..=r {
                b.add(p, (ix, iy), [x, iy as f64 * eps]);
            }
        }
        Ok(b.finish(eps, 0)?.with_info(planar_info("parabolic")))
    }
}

/// Patch [−5,5]×[0.2,10] of the upper half-plane with edge weights
/// |dz|/y at the edge midpoint. `extent` is not used.
pub struct HalfplaneHyperbolic;

impl SpaceGenerator for HalfplaneHyperbolic {
    fn name(&self) -> &'static str {
        "halfplane-hyperbolic"
    }
    fn summary(&self) -> &'static str {
        "upper half-plane patch [-5,5]x[0.2,10] with hyperbolic weights"
    }
    fn uses_extent(&self, _spec: &RegionSpec) -> bool {
        false
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let eps = spec.eps;
        let mut b = NetBuilder::new(halfplane_weight);
        let p = b.piece();
        for i in 0..=steps(10.0, eps) {
            for j in 0..=steps(9.8, eps) {
                b.add(p, (i, j), [-5.0 + i as f64 * eps, 0.2 + j as f64 * eps]);
            }
        }
        let space = b.finish(eps, 0)?;
        let o = nearest_vertex(&space, [0.0, 1.0])?;
        let coords = (0..space.len()).map(|v| space.coords(v)).collect();
        Ok(MetricSpace::graph(coords, space.edges().to_vec(), eps, o)?
            .with_info(info("halfplane-hyperbolic", None, None)))
    }
}

/// Complete tree with `branching` children per node and `depth` levels.
/// Every edge has length extent/depth and is subdivided at spacing ≈ eps.
/// Vertices are numbered in depth-first preorder from the root.
pub struct Tree;

impl SpaceGenerator for Tree {
    fn name(&self) -> &'static str {
        "tree"
    }
    fn summary(&self) -> &'static str {
        "complete b-ary tree of given depth, root to leaf length extent"
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let (b, depth) = (spec.branching.unwrap_or(2), spec.depth.unwrap_or(3));
        if b == 0 || depth == 0 {
            return Err(GeomError::Invalid("tree needs branching, depth ≥ 1".into()));
        }
        let nodes = (0..=depth as u32).map(|l| (b as f64).powi(l as i32)).sum::<f64>();
        let edge = spec.extent / depth as f64;
        let pieces = ((edge / spec.eps).round() as usize).max(1);
        if nodes * pieces as f64 > 5.0e6 {
            return Err(GeomError::TooLarge {
                needed: (nodes * pieces as f64) as u128,
                limit: 5_000_000,
            });
        }
        let step = edge / pieces as f64;
        build_tree_preorder(b, depth, pieces, step, spec.eps, "tree")
    }
}

fn build_tree_preorder(
    b: usize,
    depth: usize,
    pieces: usize,
    step: f64,
    eps: f64,
    name: &str,
) -> Result<MetricSpace> {
    fn grow(
        u: usize,
        left: usize,
        b: usize,
        pieces: usize,
        step: f64,
        count: &mut usize,
        edges: &mut Vec<(usize, usize, f64)>,
    ) {
        if left == 0 {
            return;
        }
        for _ in 0..b {
            let mut prev = u;
            for _ in 0..pieces {
                edges.push((prev, *count, step));
                prev = *count;
                *count += 1;
            }
            grow(prev, left - 1, b, pieces, step, count, edges);
        }
    }
    let mut count = 1;
    let mut edges = Vec::new();
    grow(0, depth, b, pieces, step, &mut count, &mut edges);
    let space = MetricSpace::graph(vec![None; count], edges, eps, 0)?;
    Ok(space.with_info(info(name, Some(2.0), None)))
}

/// Random weighted tree: vertex i > 0 attaches to a uniformly chosen earlier
/// vertex with weight in [0.5, 2]. Not a net, so its eps is 0.
pub struct RandomTree;

impl SpaceGenerator for RandomTree {
    fn name(&self) -> &'static str {
        "random-tree"
    }
    fn summary(&self) -> &'static str {
        "random recursive tree with weights in [0.5, 2]"
    }
    fn uses_extent(&self, _spec: &RegionSpec) -> bool {
        false
    }
    fn build(&self, spec: &RegionSpec) -> Result<MetricSpace> {
        let n = spec.vertices.unwrap_or(16);
        if n == 0 {
            return Err(GeomError::Empty);
        }
        let mut rng = sampling::rng(spec.seed.unwrap_or(sampling::DEFAULT_SEED));
        let edges = (1..n)
            .map(|i| (rng.gen_range(0..i), i, rng.gen_range(0.5..=2.0)))
            .collect();
        Ok(MetricSpace::graph(vec![None; n], edges, 0.0, 0)?
            .with_info(info("random-tree", Some(2.0), None)))
    }
}

#[cfg(test)]
mod tests {
    use std::collections::VecDeque;

    use super::*;

    fn components_without(space: &MetricSpace, removed: PointId) -> usize {
        let mut seen = vec![false; space.len()];
        seen[removed] = true;
        let mut parts = 0;
        for s in 0..space.len() {
            if seen[s] {
                continue;
            }
            parts += 1;
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &(v, _) in space.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        q.push_back(v);
                    }
                }
            }
        }
        parts
    }

    #[test]
    fn unit_square_at_half_has_nine_vertices() {
        let s = generate(&RegionSpec::rectangle(1.0, 1.0, 0.5)).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.basepoint(), 0);
        assert_eq!(s.coords(0), Some([0.0, 0.0]));
    }

    #[test]
    fn grid_counts() {
        let spec = RegionSpec {
            w: Some(5),
            h: Some(3),
            ..RegionSpec::new("grid", 1.0, 4.0)
        };
        assert_eq!(generate(&spec).unwrap().len(), 15);
    }

    #[test]
    fn star_arms_meet_at_the_hub() {
        for k in [1, 2, 3, 5] {
            let s = generate(&RegionSpec::star(k, 0.25, 5.0)).unwrap();
            assert_eq!(s.basepoint(), 0);
            assert_eq!(components_without(&s, 0), k);
            assert_eq!(s.neighbors(0).len(), k);
        }
    }

    #[test]
    fn star_arm_distances_pass_through_the_hub() {
        let s = generate(&RegionSpec::star(3, 0.25, 5.0)).unwrap();
        let tips: Vec<_> = (0..s.len()).filter(|&v| (s.dist(0, v).unwrap() - 5.0).abs() < 0.3).collect();
        let (a, b) = (tips[0], *tips.last().unwrap());
        let d = s.dist(a, b).unwrap();
        assert!((d - s.dist(a, 0).unwrap() - s.dist(0, b).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn parabolic_net_approximates_the_example_points() {
        let s = generate(&RegionSpec::new("parabolic", 0.5, 70.0)).unwrap();
        for n in 1..=3 {
            for k in -4..=4 {
                let t = k as f64 / 4.0;
                let x = [4f64.powi(n), 2f64.powi(n) * t];
                assert!(x[1] * x[1] <= x[0] + 1e-12);
                let v = nearest_vertex(&s, x).unwrap();
                let c = s.coords(v).unwrap();
                assert!(c[1] * c[1] <= c[0] + 1e-12);
                assert!(euclidean_weight(c, x) <= 0.5, "{x:?} -> {c:?}");
            }
        }
    }

    #[test]
    fn every_vertex_satisfies_its_region_predicate() {
        let p = generate(&RegionSpec::new("parabolic", 0.25, 8.0)).unwrap();
        for v in 0..p.len() {
            let [x, y] = p.coords(v).unwrap();
            assert!(y * y <= x + 1e-12 && (0.0..=8.0).contains(&x));
        }
        let c = generate(&RegionSpec::new("strips", 0.25, 8.0)).unwrap();
        for v in 0..c.len() {
            let [x, y] = c.coords(v).unwrap();
            assert!(y.abs() <= x + 1e-12 && x <= 8.0);
        }
        let sl = generate(&RegionSpec::new("slit-square", 0.25, 4.0)).unwrap();
        for v in 1..sl.len() {
            let [x, y] = sl.coords(v).unwrap();
            assert!(x > 0.0 && x < 1.0 && y > 0.0 && y <= 4.0 + 1e-12);
        }
    }

    #[test]
    fn chain_corners_are_cut_vertices() {
        let s = generate(&RegionSpec::new("chain", 0.25, 4.0)).unwrap();
        // 4 cells of 9 interior points plus 5 corners.
        assert_eq!(s.len(), 4 * 9 + 5);
        for c in 1..4 {
            let v = nearest_vertex(&s, [c as f64, 0.0]).unwrap();
            assert_eq!(s.coords(v), Some([c as f64, 0.0]));
            assert_eq!(components_without(&s, v), 2);
        }
        assert!(generate(&RegionSpec::new("chain", 0.3, 4.0)).is_err());
    }

    #[test]
    fn strip_pieces_only_touch_along_half_segments() {
        let s = generate(&RegionSpec::new("strips", 0.25, 8.0)).unwrap();
        // (1, -0.5) exists twice: once in each piece on either side of x = 1.
        let twins: Vec<_> = (0..s.len()).filter(|&v| s.coords(v) == Some([1.0, -0.5])).collect();
        assert_eq!(twins.len(), 2);
        assert!(s.dist(twins[0], twins[1]).unwrap() > 0.5);
        let glued: Vec<_> = (0..s.len()).filter(|&v| s.coords(v) == Some([1.0, 0.5])).collect();
        assert_eq!(glued.len(), 1);
        let lower: Vec<_> = (0..s.len()).filter(|&v| s.coords(v) == Some([2.0, -1.0])).collect();
        assert_eq!(lower.len(), 1);
    }

    #[test]
    fn halfplane_basepoint_and_weights() {
        let s = generate(&RegionSpec::new("halfplane-hyperbolic", 0.2, 10.0)).unwrap();
        let o = s.coords(s.basepoint()).unwrap();
        assert!(euclidean_weight(o, [0.0, 1.0]) < 1e-9);
        // Vertical distance between heights a < b approximates ln(b/a).
        let top = nearest_vertex(&s, [0.0, 8.2]).unwrap();
        let d = s.dist(s.basepoint(), top).unwrap();
        assert!((d - 8.2f64.ln()).abs() < 0.05, "{d}");
    }

    #[test]
    fn tree_is_numbered_depth_first() {
        let s = generate(&RegionSpec::tree(2, 2, 1.0, 4.0)).unwrap();
        // 6 edges of length 2, each split in two.
        assert_eq!(s.len(), 1 + 12);
        assert_eq!(s.dist(0, 4).unwrap(), 4.0);
        let path = s.geodesic(0, 4).unwrap();
        let ids: Vec<_> = path.vertices().iter().map(|v| v.vertex().unwrap()).collect();
        assert_eq!(ids, vec![0, 1, 2, 3, 4]);
        assert_eq!(s.info().unwrap().rcat_constant, Some(2.0));
    }

    #[test]
    fn random_trees_are_seeded() {
        let spec = RegionSpec {
            vertices: Some(30),
            seed: Some(9),
            ..RegionSpec::new("random-tree", 1.0, 4.0)
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.edges().len(), 29);
    }

    #[test]
    fn quality_gate_holds_at_fine_resolution() {
        for eps in [0.1, 0.05, 0.02] {
            let s = generate(&RegionSpec::rectangle(4.0, 3.0, eps)).unwrap();
            quality_gate(&s, 100).unwrap();
        }
    }

    #[test]
    fn bad_specs_are_rejected() {
        assert!(generate(&RegionSpec::new("rectangle", 0.0, 1.0)).is_err());
        assert!(generate(&RegionSpec::new("rectangle", 0.5, 2.0)).is_ok());
        assert!(generate(&RegionSpec::new("rectangle", 0.5, 1.9)).is_err());
        // Explicit sides replace the extent.
        assert!(generate(&RegionSpec::rectangle(1.0, 1.0, 0.5)).is_ok());
        assert!(matches!(
            generate(&RegionSpec::new("moebius", 0.5, 4.0)),
            Err(GeomError::UnknownStrategy { .. })
        ));
    }

    #[test]
    fn registry_lists_every_kind() {
        let names = GeneratorRegistry::standard().names();
        for k in [
            "chain",
            "grid",
            "halfplane-hyperbolic",
            "parabolic",
            "random-tree",
            "rectangle",
            "slit-square",
            "star",
            "strips",
            "tree",
        ] {
            assert!(names.contains(&k), "{k}");
        }
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = RegionSpec::star(3, 0.1, 20.0);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"kind":"star","eps":0.1,"extent":20.0,"k":3}"#);
        let back: RegionSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
