//! Truncated bouquets: finitely many short paths from a common origin with
//! increasing lengths and pairwise bounded divergence.

mod asymptotic;
mod construct;
mod short;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::metric::{MetricSpace, PathRec, Site};
use crate::sequences::{KindClaim, SeqRec};

pub use asymptotic::{
    certify_asymptotic, equivalence_spread, AsymptoticityCertificate, AsymptoticityVerdict, ASYMPTOTIC_PROXY,
    CertifyOptions, SpreadReport,
};
pub(crate) use asymptotic::judge_profile;
pub use construct::{rebase, tighten_loose_bouquet, RebaseOptions, RebaseResult, TargetRule, TightenResult};
pub use short::{LittleOWitness, ShortCheck, ShortFunction};

/// Truncation horizon used when none is given.
pub const DEFAULT_HORIZON: usize = 8;
/// Growth base of the default length schedule L_n = base^n.
pub const DEFAULT_BASE: f64 = 2.0;
/// Upper bound on t-samples per pair of paths.
pub const MAX_T_SAMPLES: usize = 256;

/// Divergence bound of a bouquet: a constant c or a little-o witness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Constant(f64),
    Loose(LittleOWitness),
}

impl Bound {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Bound::Constant(c) => *c,
            Bound::Loose(w) => w.eval(t),
        }
    }

    pub fn constant(&self) -> Option<f64> {
        match self {
            Bound::Constant(c) => Some(*c),
            Bound::Loose(w) if w.is_constant() => Some(w.k),
            Bound::Loose(_) => None,
        }
    }

    pub fn shifted(&self, by: f64) -> Bound {
        match self {
            Bound::Constant(c) => Bound::Constant(c + by),
            Bound::Loose(w) => Bound::Loose(w.shifted(by)),
        }
    }
}

/// L_n = base^n for n = 1..=horizon.
pub fn schedule(base: f64, horizon: usize) -> Vec<f64> {
    (1..=horizon as i32).map(|n| base.powi(n)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bouquet {
    origin: Site,
    paths: Vec<PathRec>,
    bound: Bound,
    short: ShortFunction,
    base: Option<f64>,
}

impl Bouquet {
    /// Wraps existing paths. Only structural requirements are enforced here;
    /// the bouquet axioms are checked by [`validate_bouquet`].
    pub fn new(
        origin: Site,
        paths: Vec<PathRec>,
        bound: Bound,
        short: ShortFunction,
        base: Option<f64>,
    ) -> Result<Self> {
        if paths.is_empty() {
            return Err(GeomError::Invalid("a bouquet needs at least one path".into()));
        }
        if let Bound::Loose(w) = &bound {
            w.check()?;
        }
        if let Bound::Constant(c) = bound {
            if !(c >= 0.0) {
                return Err(GeomError::Invalid(format!("bouquet constant {c} is negative")));
            }
        }
        Ok(Bouquet {
            origin,
            paths,
            bound,
            short,
            base,
        })
    }

    /// Shortest paths from `origin` to each target.
    pub fn from_targets(
        space: &MetricSpace,
        origin: impl Into<Site>,
        targets: &[Site],
        bound: Bound,
        short: ShortFunction,
    ) -> Result<Self> {
        let origin = origin.into();
        let paths = targets
            .iter()
            .map(|&t| space.geodesic(origin, t))
            .collect::<Result<Vec<_>>>()?;
        Bouquet::new(origin, paths, bound, short, None)
    }

    /// Truncations of one shortest path from `origin` to `far` at each
    /// scheduled length not exceeding its length.
    pub fn ray(
        space: &MetricSpace,
        origin: impl Into<Site>,
        far: impl Into<Site>,
        lengths: &[f64],
        bound: Bound,
        short: ShortFunction,
    ) -> Result<Self> {
        let origin = origin.into();
        let full = space.geodesic(origin, far)?;
        let tol = space.tolerance() * (1.0 + full.length());
        let paths = lengths
            .iter()
            .filter(|&&l| l <= full.length() + tol)
            .map(|&l| full.truncate(space, l))
            .collect::<Result<Vec<_>>>()?;
        if paths.is_empty() {
            return Err(GeomError::Horizon(format!(
                "path of length {} is shorter than the first scheduled length",
                full.length()
            )));
        }
        Bouquet::new(origin, paths, bound, short, None)
    }

    pub fn with_base(mut self, base: f64) -> Self {
        self.base = Some(base);
        self
    }

    pub fn origin(&self) -> Site {
        self.origin
    }
    pub fn paths(&self) -> &[PathRec] {
        &self.paths
    }
    pub fn bound(&self) -> Bound {
        self.bound
    }
    pub fn short(&self) -> &ShortFunction {
        &self.short
    }
    pub fn base(&self) -> Option<f64> {
        self.base
    }
    pub fn len(&self) -> usize {
        self.paths.len()
    }
    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
    pub fn lengths(&self) -> Vec<f64> {
        self.paths.iter().map(PathRec::length).collect()
    }
    pub fn tips(&self) -> Vec<Site> {
        self.paths.iter().map(PathRec::end).collect()
    }

    pub fn with_bound(mut self, bound: Bound) -> Self {
        self.bound = bound;
        self
    }

    /// Keeps the paths with the given indices, in order.
    pub fn subsequence(&self, keep: &[usize]) -> Result<Bouquet> {
        let paths = keep
            .iter()
            .map(|&i| {
                self.paths
                    .get(i)
                    .cloned()
                    .ok_or_else(|| GeomError::Invalid(format!("no path with index {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Bouquet::new(self.origin, paths, self.bound, self.short.clone(), self.base)
    }

    pub fn to_json(&self) -> String {
        let doc = BouquetJson {
            schema_version: 1,
            origin: self.origin,
            base: self.base,
            lengths: self.lengths(),
            paths: self.paths.iter().map(|p| p.vertices().to_vec()).collect(),
            c: self.bound.constant().filter(|_| matches!(self.bound, Bound::Constant(_))),
            witness: match self.bound {
                Bound::Loose(w) => Some(w),
                Bound::Constant(_) => None,
            },
            short: self.short.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("bouquet serializes")
    }

    pub fn from_json(space: &MetricSpace, text: &str) -> Result<Self> {
        let doc: BouquetJson = serde_json::from_str(text).map_err(GeomError::schema)?;
        if doc.schema_version != 1 {
            return Err(GeomError::Invalid(format!(
                "unsupported schema_version {}",
                doc.schema_version
            )));
        }
        let bound = match (doc.c, doc.witness) {
            (Some(c), None) => Bound::Constant(c),
            (None, Some(w)) => Bound::Loose(w),
            _ => {
                return Err(GeomError::Invalid(
                    "exactly one of `c` and `witness` must be given".into(),
                ))
            }
        };
        let paths = doc
            .paths
            .into_iter()
            .map(|v| PathRec::from_sites(space, v))
            .collect::<Result<Vec<_>>>()?;
        if doc.lengths.len() != paths.len() {
            return Err(GeomError::Invalid(format!(
                "{} lengths for {} paths",
                doc.lengths.len(),
                paths.len()
            )));
        }
        for (i, (l, p)) in doc.lengths.iter().zip(&paths).enumerate() {
            if (l - p.length()).abs() > space.tolerance() * (1.0 + l) {
                return Err(GeomError::Invalid(format!(
                    "path {i} has length {} but {l} is declared",
                    p.length()
                )));
            }
        }
        if let ShortFunction::CustomTable { values } = &doc.short {
            ShortFunction::custom(values.clone())?;
        }
        Bouquet::new(doc.origin, paths, bound, doc.short, doc.base)
    }

    pub fn load(space: &MetricSpace, path: &Path) -> Result<Self> {
        Bouquet::from_json(space, &std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BouquetJson {
    schema_version: u32,
    origin: Site,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<f64>,
    lengths: Vec<f64>,
    paths: Vec<Vec<Site>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<LittleOWitness>,
    short: ShortFunction,
}

/// Sample parameters in [0, limit]: multiples of `spacing`, the two points
/// `spacing/2` and `spacing/4` before the end, and the end itself.
pub(crate) fn sample_ts(limit: f64, spacing: f64) -> Vec<f64> {
    let mut ts = Vec::new();
    let mut k = 0usize;
    loop {
        let t = k as f64 * spacing;
        if t > limit {
            break;
        }
        ts.push(t);
        k += 1;
    }
    for t in [limit - spacing / 2.0, limit - spacing / 4.0, limit] {
        if t >= 0.0 {
            ts.push(t);
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// Default spacing: shortest length / 8, coarsened so that the longest
/// range holds at most [`MAX_T_SAMPLES`] samples.
pub(crate) fn default_spacing(shortest: f64, longest: f64) -> f64 {
    let mut g = shortest / 8.0;
    if !(g > 0.0) {
        g = longest.max(1.0) / MAX_T_SAMPLES as f64;
    }
    if longest / g > MAX_T_SAMPLES as f64 {
        g = longest / MAX_T_SAMPLES as f64;
    }
    g
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BouquetViolation {
    Origin { n: usize, start: Site },
    Lengths { n: usize, previous: f64, length: f64 },
    Shortness { n: usize, slack: f64, allowed: f64 },
    Divergence { m: usize, n: usize, t: f64, gap: f64, bound: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BouquetValidation {
    pub valid: bool,
    pub paths: usize,
    pub origin_ok: bool,
    pub lengths_increasing: bool,
    pub short_ok: bool,
    pub divergence_ok: bool,
    /// Largest d(β_m(t), β_n(t)) − bound(t) over the samples.
    pub worst_excess: f64,
    pub worst_at: Option<(usize, usize, f64)>,
    pub max_gap: f64,
    pub first_violation: Option<BouquetViolation>,
    pub samples: usize,
    pub spacing: f64,
    pub allowance: f64,
}

/// Checks the bouquet axioms: common origin, strictly increasing lengths,
/// D-shortness of each path, and d(β_m(t), β_n(t)) ≤ bound(t) + allowance
/// for m < n on the t-grid. Indices in the report are 1-based.
pub fn validate_bouquet(
    space: &MetricSpace,
    b: &Bouquet,
    spacing: Option<f64>,
) -> Result<BouquetValidation> {
    let lengths = b.lengths();
    let allowance = space.allowance();
    let tol = space.tolerance();
    let g = spacing.unwrap_or_else(|| default_spacing(lengths[0], *lengths.last().expect("nonempty")));
    if !(g > 0.0) {
        return Err(GeomError::OutOfRange {
            what: "grid spacing",
            value: g,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let mut first: Option<BouquetViolation> = None;
    let note = |v: BouquetViolation, first: &mut Option<BouquetViolation>| {
        if first.is_none() {
            *first = Some(v);
        }
    };
    let mut origin_ok = true;
    for (i, p) in b.paths.iter().enumerate() {
        if space.dist(p.start(), b.origin)? > tol {
            origin_ok = false;
            note(BouquetViolation::Origin { n: i + 1, start: p.start() }, &mut first);
        }
    }
    let mut lengths_increasing = true;
    for i in 1..lengths.len() {
        if lengths[i] <= lengths[i - 1] {
            lengths_increasing = false;
            note(
                BouquetViolation::Lengths {
                    n: i + 1,
                    previous: lengths[i - 1],
                    length: lengths[i],
                },
                &mut first,
            );
        }
    }
    let mut short_ok = true;
    for (i, p) in b.paths.iter().enumerate() {
        let allowed = b.short.eval(space.dist(p.start(), p.end())?);
        if p.slack() > allowed + tol * (1.0 + p.length()) {
            short_ok = false;
            note(
                BouquetViolation::Shortness {
                    n: i + 1,
                    slack: p.slack(),
                    allowed,
                },
                &mut first,
            );
        }
    }
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_at = None;
    let mut max_gap: f64 = 0.0;
    let mut samples = 0;
    let mut divergence_ok = true;
    for m in 0..b.paths.len() {
        for t in sample_ts(lengths[m], g) {
            let u = space.locate(&b.paths[m], t)?;
            let row = match u {
                Site::Vertex(v) if space.is_graph() => Some(space.row(v)?),
                _ => None,
            };
            for n in m + 1..b.paths.len() {
                let v = space.locate(&b.paths[n], t.min(lengths[n]))?;
                let gap = match (&row, v) {
                    (Some(row), Site::Vertex(w)) => row[w],
                    _ => space.dist(u, v)?,
                };
                samples += 1;
                let bound = b.bound.eval(t);
                max_gap = max_gap.max(gap);
                if gap - bound > worst_excess {
                    worst_excess = gap - bound;
                    worst_at = Some((m + 1, n + 1, t));
                }
                if gap > bound + allowance + tol * (1.0 + t) {
                    if divergence_ok {
                        note(
                            BouquetViolation::Divergence {
                                m: m + 1,
                                n: n + 1,
                                t,
                                gap,
                                bound,
                            },
                            &mut first,
                        );
                    }
                    divergence_ok = false;
                }
            }
        }
    }
    if samples == 0 {
        worst_excess = 0.0;
    }
    Ok(BouquetValidation {
        valid: origin_ok && lengths_increasing && short_ok && divergence_ok,
        paths: b.paths.len(),
        origin_ok,
        lengths_increasing,
        short_ok,
        divergence_ok,
        worst_excess,
        worst_at,
        max_gap,
        first_violation: first,
        samples,
        spacing: g,
        allowance,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pruned {
    pub bouquet: Bouquet,
    /// The pruned lengths fail to increase strictly, so the result is not a
    /// bouquet.
    pub non_bouquet: bool,
    /// A valid pruning by a constant factor is equivalent to the source.
    pub equivalent_to_source: bool,
}

/// Truncates path n to α_n·L_n. A single α is applied to every path.
pub fn prune(space: &MetricSpace, b: &Bouquet, alphas: &[f64]) -> Result<Pruned> {
    if alphas.is_empty() {
        return Err(GeomError::Invalid("prune needs at least one factor".into()));
    }
    if alphas.len() != 1 && alphas.len() != b.len() {
        return Err(GeomError::Invalid(format!(
            "{} factors for {} paths",
            alphas.len(),
            b.len()
        )));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
        return Err(GeomError::OutOfRange {
            what: "pruning factor",
            value: *a,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let paths = b
        .paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let a = if alphas.len() == 1 { alphas[0] } else { alphas[i] };
            p.truncate(space, a * p.length())
        })
        .collect::<Result<Vec<_>>>()?;
    let non_bouquet = paths.windows(2).any(|w| w[1].length() <= w[0].length());
    let bouquet = Bouquet::new(b.origin, paths, b.bound, b.short.clone(), b.base)?;
    Ok(Pruned {
        bouquet,
        non_bouquet,
        equivalent_to_source: !non_bouquet,
    })
}

/// The tip sequence (β_n(L_n)), claimed as a loose bouquet sequence with
/// δ′ = δ + 3/2. The bouquet must validate.
pub fn tip_sequence(space: &MetricSpace, b: &Bouquet) -> Result<SeqRec> {
    let v = validate_bouquet(space, b, None)?;
    if !v.valid {
        return Err(GeomError::Precondition(format!(
            "bouquet is invalid: {:?}",
            v.first_violation
        )));
    }
    let claim = match b.bound.shifted(1.5) {
        Bound::Constant(c) => KindClaim::BouquetSeq { c },
        Bound::Loose(w) => KindClaim::LooseBouquetSeq { witness: w },
    };
    Ok(SeqRec::new(b.tips(), claim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{generate, RegionSpec};

    fn plane_with(points: Vec<[f64; 2]>) -> MetricSpace {
        MetricSpace::euclidean(points, 0).unwrap()
    }

    #[test]
    fn ray_truncations_form_a_zero_bouquet() {
        let s = plane_with(vec![[0.0, 0.0], [100.0, 0.0]]);
        let b = Bouquet::ray(&s, 0, 1, &[1.0, 2.0, 4.0, 8.0], Bound::Constant(0.0), ShortFunction::Standard)
            .unwrap();
        let v = validate_bouquet(&s, &b, None).unwrap();
        assert!(v.valid, "{v:?}");
        assert!(v.max_gap < 1e-12);
        let tips: Vec<_> = b.tips().iter().map(|&t| s.position(t).unwrap()).collect();
        assert_eq!(tips, vec![[1.0, 0.0], [2.0, 0.0], [4.0, 0.0], [8.0, 0.0]]);
    }

    #[test]
    fn diverging_rays_break_the_bound() {
        // Alternate between two rays at angle 0.2; the gap at t is 2t·sin(0.1).
        let far = 64.0;
        let s = plane_with(vec![[0.0, 0.0], [far, 0.0], [far * 0.2f64.cos(), far * 0.2f64.sin()]]);
        let (r1, r2) = (s.geodesic(0, 1).unwrap(), s.geodesic(0, 2).unwrap());
        let paths = (1..=6)
            .map(|n| {
                let r = if n % 2 == 0 { &r2 } else { &r1 };
                r.truncate(&s, 2f64.powi(n)).unwrap()
            })
            .collect();
        let b = Bouquet::new(Site::Vertex(0), paths, Bound::Constant(1.0), ShortFunction::Standard, Some(2.0))
            .unwrap();
        let v = validate_bouquet(&s, &b, None).unwrap();
        assert!(!v.valid);
        match v.first_violation {
            Some(BouquetViolation::Divergence { t, gap, .. }) => {
                assert!((gap - 2.0 * t * 0.1f64.sin()).abs() < 1e-9);
                assert!(gap > 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_violations_are_reported() {
        let s = plane_with(vec![[0.0, 0.0], [10.0, 0.0], [0.0, 10.0], [1.0, 1.0]]);
        let p1 = s.geodesic(0, 1).unwrap();
        let p2 = s.geodesic(3, 2).unwrap();
        let b = Bouquet::new(Site::Vertex(0), vec![p1.clone(), p2], Bound::Constant(20.0), ShortFunction::Standard, None)
            .unwrap();
        let v = validate_bouquet(&s, &b, None).unwrap();
        assert!(!v.origin_ok);
        let b = Bouquet::new(Site::Vertex(0), vec![p1.clone(), p1.truncate(&s, 5.0).unwrap()], Bound::Constant(1.0), ShortFunction::Standard, None)
            .unwrap();
        let v = validate_bouquet(&s, &b, None).unwrap();
        assert!(!v.lengths_increasing);
        let bent = PathRec::from_sites(&s, vec![0.into(), 3.into(), 1.into()]).unwrap();
        let b = Bouquet::new(Site::Vertex(0), vec![bent], Bound::Constant(1.0), ShortFunction::Standard, None).unwrap();
        let v = validate_bouquet(&s, &b, None).unwrap();
        assert!(!v.short_ok);
    }

    #[test]
    fn pruning_rules() {
        let s = plane_with(vec![[0.0, 0.0], [100.0, 0.0]]);
        let b = Bouquet::ray(&s, 0, 1, &schedule(2.0, 6), Bound::Constant(0.0), ShortFunction::Standard).unwrap();
        let same = prune(&s, &b, &[1.0]).unwrap();
        assert_eq!(same.bouquet, b);
        let half = prune(&s, &b, &[0.5]).unwrap();
        assert!(!half.non_bouquet && half.equivalent_to_source);
        assert_eq!(half.bouquet.lengths(), vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0]);
        assert!(validate_bouquet(&s, &half.bouquet, None).unwrap().valid);
        let flat: Vec<f64> = b.lengths().iter().map(|l| 1.0 / l).collect();
        assert!(prune(&s, &b, &flat).unwrap().non_bouquet);
        assert!(prune(&s, &b, &[]).is_err());
        assert!(prune(&s, &b, &[1.5]).is_err());
    }

    #[test]
    fn tips_of_a_ray_bouquet() {
        let s = plane_with(vec![[0.0, 0.0], [100.0, 0.0]]);
        let b = Bouquet::ray(&s, 0, 1, &[1.0, 2.0, 4.0], Bound::Constant(0.0), ShortFunction::Standard).unwrap();
        let seq = tip_sequence(&s, &b).unwrap();
        assert_eq!(seq.claim(), KindClaim::BouquetSeq { c: 1.5 });
        let xs: Vec<_> = seq.points().iter().map(|&p| s.position(p).unwrap()).collect();
        assert_eq!(xs, vec![[1.0, 0.0], [2.0, 0.0], [4.0, 0.0]]);
    }

    #[test]
    fn invalid_bouquets_have_no_tip_sequence() {
        let s = plane_with(vec![[0.0, 0.0], [10.0, 0.0], [0.0, 20.0]]);
        let b = Bouquet::from_targets(&s, 0, &[1.into(), 2.into()], Bound::Constant(0.5), ShortFunction::Standard)
            .unwrap();
        assert!(tip_sequence(&s, &b).is_err());
    }

    #[test]
    fn json_round_trip_on_a_net() {
        let s = generate(&RegionSpec::star(2, 0.25, 10.0)).unwrap();
        let far = (0..s.len())
            .max_by(|&a, &b| s.dist(0, a).unwrap().total_cmp(&s.dist(0, b).unwrap()))
            .unwrap();
        let b = Bouquet::ray(&s, 0, far, &schedule(2.0, 3), Bound::Constant(0.0), ShortFunction::Standard)
            .unwrap()
            .with_base(2.0);
        let text = b.to_json();
        let back = Bouquet::from_json(&s, &text).unwrap();
        assert_eq!(back, b);
        let loose = b.clone().with_bound(Bound::Loose(LittleOWitness::default_loose()));
        assert_eq!(Bouquet::from_json(&s, &loose.to_json()).unwrap(), loose);
        let broken = text.replacen("\"schema_version\": 1", "\"schema_version\": 1, \"extra\": 3", 1);
        assert!(matches!(Bouquet::from_json(&s, &broken), Err(GeomError::Schema { .. })));
    }

    #[test]
    fn sample_grid_includes_refinements() {
        let ts = sample_ts(1.0, 0.4);
        assert_eq!(ts, vec![0.0, 0.4, 0.8, 0.9, 1.0]);
        assert_eq!(default_spacing(2.0, 256.0), 1.0);
        assert_eq!(default_spacing(8.0, 8.0), 1.0);
    }
}
