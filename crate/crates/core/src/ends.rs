//! Ends of graphs at finite radius: components outside balls, nested
//! chains over a radius schedule, and the map from bouquets to chains.

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::bouquet::{validate_bouquet, Bouquet};
use crate::error::{GeomError, Result};
use crate::metric::{MetricSpace, PointId, Site};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    /// Smallest point id in the component.
    pub id: PointId,
    pub size: usize,
}

/// Components of {x : d(o, x) > r}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Partition {
    pub radius: f64,
    /// Sorted by id.
    pub components: Vec<Component>,
    #[serde(skip)]
    labels: Vec<Option<PointId>>,
}

impl Partition {
    /// Component id of `p`, or None inside the closed ball.
    pub fn component_of(&self, p: PointId) -> Option<PointId> {
        self.labels.get(p).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

fn require_graph(space: &MetricSpace) -> Result<()> {
    if space.is_graph() {
        Ok(())
    } else {
        Err(GeomError::Precondition(
            "components need graph connectivity; explicit spaces have no edges".into(),
        ))
    }
}

/// Partition of the vertices farther than `r` from `o` into components of
/// the subgraph they induce.
pub fn components_outside_ball(space: &MetricSpace, o: PointId, r: f64) -> Result<Partition> {
    require_graph(space)?;
    let row = space.row(o)?;
    let tol = space.tolerance();
    let outside: Vec<bool> = row.iter().map(|&d| d > r + tol * (1.0 + r)).collect();
    let mut uf = UnionFind::<usize>::new(space.len());
    for &(a, b, _) in space.edges() {
        if outside[a] && outside[b] {
            uf.union(a, b);
        }
    }
    let mut smallest = vec![usize::MAX; space.len()];
    for p in (0..space.len()).filter(|&p| outside[p]) {
        let root = uf.find(p);
        smallest[root] = smallest[root].min(p);
    }
    let mut labels = vec![None; space.len()];
    let mut sizes = std::collections::BTreeMap::new();
    for p in (0..space.len()).filter(|&p| outside[p]) {
        let id = smallest[uf.find(p)];
        labels[p] = Some(id);
        *sizes.entry(id).or_insert(0usize) += 1;
    }
    Ok(Partition {
        radius: r,
        components: sizes.into_iter().map(|(id, size)| Component { id, size }).collect(),
        labels,
    })
}

/// One maximal nested chain of components over the schedule.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndChain {
    /// Component id at each radius the chain reaches.
    pub components: Vec<PointId>,
    pub sizes: Vec<usize>,
    /// The chain has no continuation at some radius of the schedule.
    pub finite: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndsReport {
    pub basepoint: PointId,
    pub schedule: Vec<f64>,
    pub partitions: Vec<Partition>,
    /// Chains reaching the last radius first, each group ordered by
    /// component ids.
    pub chains: Vec<EndChain>,
}

impl EndsReport {
    /// Chains that survive to the last radius of the schedule.
    pub fn live(&self) -> impl Iterator<Item = (usize, &EndChain)> {
        self.chains.iter().enumerate().filter(|(_, c)| !c.finite)
    }

    pub fn live_count(&self) -> usize {
        self.live().count()
    }
}

/// All maximal chains U_1 ⊃ U_2 ⊃ … of components of the complements of
/// the closed balls of the scheduled radii.
pub fn end_chains(space: &MetricSpace, o: PointId, schedule: &[f64]) -> Result<EndsReport> {
    require_graph(space)?;
    if schedule.is_empty() {
        return Err(GeomError::Invalid("empty radius schedule".into()));
    }
    if schedule.windows(2).any(|w| !(w[1] > w[0])) || !(schedule[0] >= 0.0) {
        return Err(GeomError::Invalid(format!("radius schedule {schedule:?} is not increasing")));
    }
    let partitions = schedule
        .iter()
        .map(|&r| components_outside_ball(space, o, r))
        .collect::<Result<Vec<_>>>()?;
    // parent[i][j]: index at level i of the component containing component j
    // of level i + 1.
    let mut parents: Vec<Vec<usize>> = Vec::new();
    for i in 0..partitions.len().saturating_sub(1) {
        let (outer, inner) = (&partitions[i], &partitions[i + 1]);
        let mut parent = Vec::with_capacity(inner.len());
        for c in &inner.components {
            let label = outer.component_of(c.id).ok_or_else(|| {
                GeomError::Invalid(format!("component {} at radius {} lies inside the smaller ball", c.id, inner.radius))
            })?;
            parent.push(outer.components.iter().position(|k| k.id == label).expect("label is a component"));
        }
        // Nesting: every point of an inner component carries the same outer label.
        for p in 0..space.len() {
            if let Some(id) = inner.component_of(p) {
                let j = inner.components.iter().position(|k| k.id == id).expect("label is a component");
                if outer.component_of(p) != Some(outer.components[parent[j]].id) {
                    return Err(GeomError::Invalid(format!(
                        "component {id} at radius {} is not nested in one component at radius {}",
                        inner.radius, outer.radius
                    )));
                }
            }
        }
        parents.push(parent);
    }
    let levels = partitions.len();
    let mut chains = Vec::new();
    // A chain ends at level i when its component has no child at level i + 1.
    for i in (0..levels).rev() {
        for j in 0..partitions[i].len() {
            let has_child = i + 1 < levels && parents[i].contains(&j);
            if has_child {
                continue;
            }
            let mut idx = vec![j];
            for l in (0..i).rev() {
                let up = parents[l][idx[0]];
                idx.insert(0, up);
            }
            chains.push(EndChain {
                components: idx.iter().enumerate().map(|(l, &k)| partitions[l].components[k].id).collect(),
                sizes: idx.iter().enumerate().map(|(l, &k)| partitions[l].components[k].size).collect(),
                finite: i + 1 < levels,
            });
        }
    }
    Ok(EndsReport {
        basepoint: o,
        schedule: schedule.to_vec(),
        partitions,
        chains,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaResult {
    /// Index into the report's chains.
    pub chain: usize,
    /// Component containing the sampled points at each radius.
    pub components: Vec<PointId>,
    /// t₀ = m + 3/2 + c/2 for each radius m.
    pub t0: Vec<f64>,
    pub samples: usize,
}

/// The chain of a bouquet: for each radius m, every sampled β_n(t) with
/// t₀ = m + 3/2 + c/2 < t ≤ L_n must fall in one component U_m.
pub fn eta_map(space: &MetricSpace, b: &Bouquet, ends: &EndsReport) -> Result<EtaResult> {
    require_graph(space)?;
    let c = b.bound().constant().ok_or_else(|| {
        GeomError::Precondition("the end map needs a bouquet with a constant bound".into())
    })?;
    let v = validate_bouquet(space, b, None)?;
    if !v.valid {
        return Err(GeomError::Precondition(format!("bouquet is invalid: {:?}", v.first_violation)));
    }
    if space.dist(b.origin(), ends.basepoint)? > space.tolerance() {
        return Err(GeomError::Precondition(format!(
            "bouquet origin {} differs from the chains' basepoint {}",
            b.origin(),
            ends.basepoint
        )));
    }
    let lengths = b.lengths();
    let step = v.spacing;
    let mut components = Vec::new();
    let mut t0s = Vec::new();
    let mut samples = 0;
    for part in &ends.partitions {
        let t0 = part.radius + 1.5 + c / 2.0;
        let mut seen: Option<PointId> = None;
        for (p, &l) in b.paths().iter().zip(&lengths) {
            if l <= t0 {
                continue;
            }
            let mut t = l;
            loop {
                let site = space.locate(p, t)?;
                let id = match site {
                    Site::Vertex(x) => part.component_of(x),
                    _ => None,
                }
                .ok_or_else(|| {
                    GeomError::Inadmissible(format!("β({t}) = {site} lies in the ball of radius {}", part.radius))
                })?;
                samples += 1;
                match seen {
                    None => seen = Some(id),
                    Some(s) if s != id => {
                        return Err(GeomError::Inadmissible(format!(
                            "samples beyond t₀ = {t0} split across components {s} and {id} at radius {}",
                            part.radius
                        )))
                    }
                    _ => {}
                }
                t -= step;
                if t <= t0 {
                    break;
                }
            }
        }
        let id = seen.ok_or_else(|| {
            GeomError::Horizon(format!(
                "no path is longer than t₀ = {t0} for radius {}; longest is {}",
                part.radius,
                lengths.last().copied().unwrap_or(0.0)
            ))
        })?;
        components.push(id);
        t0s.push(t0);
    }
    let chain = ends
        .chains
        .iter()
        .position(|ch| ch.components == components)
        .ok_or_else(|| GeomError::Invalid(format!("components {components:?} form no chain of the report")))?;
    Ok(EtaResult {
        chain,
        components,
        t0: t0s,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bouquet::{schedule, Bound, ShortFunction};
    use crate::spaces::{generate, RegionSpec};

    fn ray_graph(n: usize) -> MetricSpace {
        let edges = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
        MetricSpace::graph(vec![None; n], edges, 0.0, 0).unwrap()
    }

    #[test]
    fn ray_components() {
        let g = ray_graph(40);
        let p = components_outside_ball(&g, 0, 2.5).unwrap();
        assert_eq!(p.components, vec![Component { id: 3, size: 37 }]);
        assert!(components_outside_ball(&g, 0, 39.0).unwrap().is_empty());
        let e = end_chains(&g, 0, &[1.0, 2.0, 4.0, 8.0]).unwrap();
        assert_eq!(e.chains.len(), 1);
        assert!(!e.chains[0].finite);
        let b = Bouquet::ray(&g, 0, 39, &schedule(2.0, 5), Bound::Constant(0.0), ShortFunction::Standard).unwrap();
        assert_eq!(eta_map(&g, &b, &e).unwrap().chain, 0);
    }

    /// Three unit-weight rays of length 30 joined at vertex 0.
    fn tripod() -> MetricSpace {
        let mut edges = Vec::new();
        for arm in 0..3 {
            let base = 1 + arm * 30;
            edges.push((0, base, 1.0));
            for i in 0..29 {
                edges.push((base + i, base + i + 1, 1.0));
            }
        }
        MetricSpace::graph(vec![None; 91], edges, 0.0, 0).unwrap()
    }

    #[test]
    fn tripod_has_three_components_and_chains() {
        let g = tripod();
        let p = components_outside_ball(&g, 0, 5.0).unwrap();
        let ids: Vec<_> = p.components.iter().map(|c| (c.id, c.size)).collect();
        assert_eq!(ids, vec![(6, 25), (36, 25), (66, 25)]);
        let e = end_chains(&g, 0, &[2.0, 4.0, 8.0]).unwrap();
        assert_eq!(e.live_count(), 3);
        let mut seen = Vec::new();
        for arm in 0..3 {
            let b = Bouquet::ray(&g, 0, 30 + arm * 30, &schedule(2.0, 4), Bound::Constant(0.0), ShortFunction::Standard)
                .unwrap();
            seen.push(eta_map(&g, &b, &e).unwrap().chain);
        }
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn dead_branches_are_finite_chains() {
        // A ray of length 30 with a spur of length 3 at vertex 2.
        let mut edges: Vec<_> = (0..30).map(|i| (i, i + 1, 1.0)).collect();
        edges.extend([(2, 31, 1.0), (31, 32, 1.0), (32, 33, 1.0)]);
        let g = MetricSpace::graph(vec![None; 34], edges, 0.0, 0).unwrap();
        let e = end_chains(&g, 0, &[2.5, 4.5, 8.0]).unwrap();
        assert_eq!(e.live_count(), 1);
        let dead: Vec<_> = e.chains.iter().filter(|c| c.finite).collect();
        assert_eq!(dead.len(), 1);
        assert_eq!(dead[0].components, vec![31, 33]);
    }

    #[test]
    fn star_net_ends_match_arm_count() {
        let s = generate(&RegionSpec::star(3, 0.25, 12.0)).unwrap();
        let e = end_chains(&s, s.basepoint(), &[1.0, 2.0, 4.0]).unwrap();
        assert_eq!(e.live_count(), 3);
    }

    #[test]
    fn errors() {
        let g = ray_graph(5);
        assert!(end_chains(&g, 0, &[]).is_err());
        assert!(end_chains(&g, 0, &[2.0, 1.0]).is_err());
        let plane = MetricSpace::euclidean(vec![[0.0, 0.0], [1.0, 0.0]], 0).unwrap();
        assert!(components_outside_ball(&plane, 0, 0.5).is_err());
        let b = Bouquet::ray(&g, 0, 4, &[1.0, 2.0], Bound::Constant(0.0), ShortFunction::Standard).unwrap();
        let e = end_chains(&g, 0, &[1.0, 2.0]).unwrap();
        assert!(matches!(eta_map(&g, &b, &e), Err(GeomError::Horizon(_))));
    }
}
