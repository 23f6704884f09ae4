use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::space::{MetricSpace, PointId};
use crate::error::{GeomError, Result};
use crate::sampling;
use crate::tolerances::EXACT_LABELING_GUARD;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperbolicityReport {
    /// Largest four-point defect found, clamped at 0.
    pub delta: f64,
    pub witness_quadruple: [PointId; 4],
    /// Quadruples examined.
    pub samples: u64,
    /// True when every quadruple of the space was examined.
    pub exact: bool,
    pub method: String,
}

/// How much of the space `four_point_delta` examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    Exact,
    Samples(usize),
}

/// Strategy for estimating the four-point hyperbolicity constant.
pub trait HyperbolicityEstimator: Send + Sync {
    fn name(&self) -> &'static str;

    /// `budget` is interpreted by the strategy (sample count, subset size);
    /// exact enumeration ignores it.
    fn estimate(&self, space: &MetricSpace, budget: usize, seed: u64)
        -> Result<HyperbolicityReport>;
}

/// Maximum over labelings of ⟨x,y;w⟩ ∧ ⟨y,z;w⟩ − ⟨x,z;w⟩ for one quadruple,
/// computed from the three pair sums: half the gap between the largest and
/// the second largest.
pub fn quadruple_defect(d: impl Fn(PointId, PointId) -> f64, q: [PointId; 4]) -> f64 {
    let [a, b, c, e] = q;
    let mut s = [d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c)];
    s.sort_by(|x, y| y.total_cmp(x));
    ((s[0] - s[1]) / 2.0).max(0.0)
}

fn padded_witness(n: usize) -> [PointId; 4] {
    let last = n.saturating_sub(1);
    [0, 1.min(last), 2.min(last), 3.min(last)]
}

/// Full enumeration over the supplied points, using a dense distance
/// matrix. Returns the best defect, its quadruple and the count examined.
fn enumerate(points: &[PointId], matrix: &[f64]) -> (f64, [PointId; 4], u64) {
    let m = points.len();
    if m < 4 {
        return (0.0, padded_witness_of(points), 0);
    }
    let d = |i: usize, j: usize| matrix[i * m + j];
    // Per first index, the earliest lexicographic maximum.
    let best: Vec<(f64, [usize; 4])> = (0..m - 3)
        .into_par_iter()
        .map(|i| {
            let mut top = (-1.0, [i, i + 1, i + 2, i + 3]);
            for j in i + 1..m {
                for k in j + 1..m {
                    for l in k + 1..m {
                        let v = quadruple_defect(d, [i, j, k, l]);
                        if v > top.0 {
                            top = (v, [i, j, k, l]);
                        }
                    }
                }
            }
            top
        })
        .collect();
    let mut top = best[0];
    for cand in &best[1..] {
        if cand.0 > top.0 {
            top = *cand;
        }
    }
    let count = (m as u64) * (m as u64 - 1) * (m as u64 - 2) * (m as u64 - 3) / 24;
    let q = top.1.map(|i| points[i]);
    (top.0.max(0.0), q, count)
}

fn padded_witness_of(points: &[PointId]) -> [PointId; 4] {
    let w = padded_witness(points.len());
    w.map(|i| points.get(i).copied().unwrap_or(0))
}

fn dense_matrix(space: &MetricSpace, points: &[PointId]) -> Result<Vec<f64>> {
    let m = points.len();
    let mut out = vec![0.0; m * m];
    for (i, &p) in points.iter().enumerate() {
        let row = space.row(p)?;
        for (j, &q) in points.iter().enumerate() {
            let v = row[q];
            if !v.is_finite() {
                return Err(GeomError::Disconnected(p, q));
            }
            out[i * m + j] = v;
        }
    }
    Ok(out)
}

fn ordered_labelings(n: usize) -> u128 {
    let n = n as u128;
    if n < 4 {
        0
    } else {
        n * (n - 1) * (n - 2) * (n - 3)
    }
}

/// Every quadruple of the space.
#[derive(Default)]
pub struct ExactEnumeration;

impl HyperbolicityEstimator for ExactEnumeration {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn estimate(&self, space: &MetricSpace, _: usize, _: u64) -> Result<HyperbolicityReport> {
        let n = space.len();
        if n == 0 {
            return Err(GeomError::Empty);
        }
        let needed = ordered_labelings(n);
        if needed > EXACT_LABELING_GUARD {
            return Err(GeomError::TooLarge {
                needed,
                limit: EXACT_LABELING_GUARD,
            });
        }
        let points: Vec<PointId> = (0..n).collect();
        let matrix = dense_matrix(space, &points)?;
        let (delta, witness_quadruple, samples) = enumerate(&points, &matrix);
        Ok(HyperbolicityReport {
            delta,
            witness_quadruple,
            samples,
            exact: true,
            method: self.name().into(),
        })
    }
}

/// Independent uniform quadruples from a seeded stream; a larger budget
/// examines a superset of a smaller one.
#[derive(Default)]
pub struct SampledQuadruples;

impl HyperbolicityEstimator for SampledQuadruples {
    fn name(&self) -> &'static str {
        "sampled"
    }

    fn estimate(
        &self,
        space: &MetricSpace,
        budget: usize,
        seed: u64,
    ) -> Result<HyperbolicityReport> {
        let n = space.len();
        if n == 0 || budget == 0 {
            return Err(GeomError::Empty);
        }
        let mut rng = sampling::rng(seed);
        let mut top = (-1.0, padded_witness(n));
        for _ in 0..budget {
            let q = [
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            ];
            let row_a = space.row(q[0])?;
            let row_b = space.row(q[1])?;
            let row_c = space.row(q[2])?;
            let d = |i: PointId, j: PointId| {
                let r = if i == q[0] {
                    &row_a
                } else if i == q[1] {
                    &row_b
                } else {
                    &row_c
                };
                r[j]
            };
            // Lookups only ever start at one of the first three points.
            let v = quadruple_defect(d, q);
            if !v.is_finite() {
                return Err(GeomError::Disconnected(q[0], q[3]));
            }
            if v > top.0 {
                top = (v, q);
            }
        }
        Ok(HyperbolicityReport {
            delta: top.0.max(0.0),
            witness_quadruple: top.1,
            samples: budget as u64,
            exact: false,
            method: self.name().into(),
        })
    }
}

/// Exact enumeration restricted to a seeded random subset of `budget`
/// points; cheap on large nets because only `budget` distance rows are needed.
#[derive(Default)]
pub struct SubsetEnumeration;

impl HyperbolicityEstimator for SubsetEnumeration {
    fn name(&self) -> &'static str {
        "subset"
    }

    fn estimate(
        &self,
        space: &MetricSpace,
        budget: usize,
        seed: u64,
    ) -> Result<HyperbolicityReport> {
        let n = space.len();
        if n == 0 || budget == 0 {
            return Err(GeomError::Empty);
        }
        let m = budget.min(n);
        let needed = ordered_labelings(m);
        if needed > EXACT_LABELING_GUARD {
            return Err(GeomError::TooLarge {
                needed,
                limit: EXACT_LABELING_GUARD,
            });
        }
        let mut points = index::sample(&mut sampling::rng(seed), n, m).into_vec();
        points.sort_unstable();
        let matrix = dense_matrix(space, &points)?;
        let (delta, witness_quadruple, samples) = enumerate(&points, &matrix);
        Ok(HyperbolicityReport {
            delta,
            witness_quadruple,
            samples,
            exact: m == n,
            method: self.name().into(),
        })
    }
}

/// Name-indexed estimator constructors.
pub struct EstimatorRegistry(BTreeMap<&'static str, fn() -> Box<dyn HyperbolicityEstimator>>);

impl EstimatorRegistry {
    pub fn empty() -> Self {
        EstimatorRegistry(BTreeMap::new())
    }

    pub fn with<T: HyperbolicityEstimator + Default + 'static>(mut self) -> Self {
        let name = T::default().name();
        self.0.insert(name, || Box::new(T::default()));
        self
    }

    pub fn standard() -> Self {
        EstimatorRegistry::empty()
            .with::<ExactEnumeration>()
            .with::<SampledQuadruples>()
            .with::<SubsetEnumeration>()
    }

    pub fn build(&self, name: &str) -> Result<Box<dyn HyperbolicityEstimator>> {
        self.0
            .get(name)
            .map(|ctor| ctor())
            .ok_or_else(|| GeomError::UnknownStrategy {
                kind: "hyperbolicity estimator",
                name: name.into(),
                available: self.list().join(", "),
            })
    }

    pub fn list(&self) -> Vec<&'static str> {
        self.0.keys().copied().collect()
    }
}

/// Four-point δ with an exact or sampled budget.
pub fn four_point_delta(
    space: &MetricSpace,
    budget: Budget,
    seed: u64,
) -> Result<HyperbolicityReport> {
    match budget {
        Budget::Exact => ExactEnumeration.estimate(space, 0, seed),
        Budget::Samples(k) => SampledQuadruples.estimate(space, k, seed),
    }
}
