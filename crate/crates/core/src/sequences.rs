//! Bouquet sequences and Gromov sequences: validation, equivalence
//! certificates and the constructions linking them to bouquets.

use std::path::Path;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::bouquet::{judge_profile, AsymptoticityVerdict, Bound, Bouquet, LittleOWitness, ShortFunction};
use crate::error::{GeomError, Result};
use crate::metric::{MetricSpace, Site};

/// Fewest indices for which an equivalence test is attempted.
pub const MIN_EQUIV_INDICES: usize = 4;

/// Describes the finite-scale test behind the Gromov verdicts.
pub const GROMOV_PROXY: &str = "gromov: r_k = min over m, n ≥ k of ⟨x_m, y_n; o⟩ is nondecreasing and, with \
     c0 = max over k ≤ N/2 of (k − r_k), r_k ≥ k − c0 − allowance for every k > N/2";

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KindClaim {
    /// ⟨o, x_n; x_m⟩ ≤ c for m ≤ n.
    BouquetSeq { c: f64 },
    /// ⟨o, x_n; x_m⟩ ≤ δ(d(o, x_m)) for m ≤ n.
    LooseBouquetSeq { witness: LittleOWitness },
    GromovSeq,
    #[default]
    Unclassified,
}

/// Finite point sequence x_1..x_N with a claimed kind. The basepoint is the
/// space's basepoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqRec {
    points: Vec<Site>,
    #[serde(default)]
    claim: KindClaim,
}

impl SeqRec {
    pub fn new(points: Vec<Site>, claim: KindClaim) -> Self {
        SeqRec { points, claim }
    }

    pub fn points(&self) -> &[Site] {
        &self.points
    }

    pub fn claim(&self) -> KindClaim {
        self.claim
    }

    pub fn with_claim(mut self, claim: KindClaim) -> Self {
        self.claim = claim;
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// d(o, x_n) for each point.
    pub fn radii(&self, space: &MetricSpace) -> Result<Vec<f64>> {
        let o = space.basepoint();
        self.points.iter().map(|&x| space.dist(o, x)).collect()
    }

    /// The subsequence at the given 0-based indices, keeping the claim.
    pub fn subsequence(&self, keep: &[usize]) -> Result<SeqRec> {
        let points = keep
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .copied()
                    .ok_or_else(|| GeomError::Invalid(format!("index {i} beyond {} points", self.points.len())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SeqRec::new(points, self.claim))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serializes")
    }

    pub fn from_json(space: &MetricSpace, text: &str) -> Result<Self> {
        let s: SeqRec = serde_json::from_str(text).map_err(GeomError::schema)?;
        for &p in &s.points {
            space.check_site(p)?;
        }
        if let KindClaim::LooseBouquetSeq { witness } = s.claim {
            witness.check()?;
        }
        Ok(s)
    }

    pub fn load(space: &MetricSpace, path: &Path) -> Result<Self> {
        SeqRec::from_json(space, &std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }
}

/// Distances d(a_i, b_j), using cached rows for graph vertices.
fn dist_table(space: &MetricSpace, a: &[Site], b: &[Site]) -> Result<Vec<Vec<f64>>> {
    a.iter()
        .map(|&x| match x {
            Site::Vertex(v) if space.is_graph() => {
                let row = space.row(v)?;
                b.iter()
                    .map(|&y| match y {
                        Site::Vertex(w) => {
                            space.check_site(y)?;
                            Ok(row[w])
                        }
                        _ => space.dist(x, y),
                    })
                    .collect()
            }
            _ => b.iter().map(|&y| space.dist(x, y)).collect(),
        })
        .collect()
}

/// ⟨o, x_n; x_m⟩ = (d(o, x_m) + d(x_m, x_n) − d(o, x_n)) / 2 from
/// radii and a distance table.
fn product_at(ra: f64, rb: f64, dab: f64) -> f64 {
    0.5 * (ra + dab - rb)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeqViolation {
    Radii { n: usize, previous: f64, radius: f64 },
    Bounded { first: f64, last: f64 },
    Product { m: usize, n: usize, product: f64, bound: f64 },
    Gromov { k: usize, running_min: f64, threshold: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GromovProxy {
    /// r_k for k = 1..N.
    pub running_min: Vec<f64>,
    pub c0: f64,
    pub passed: bool,
    /// 1-based k of the first tail index below k − c0.
    pub first_failure: Option<usize>,
}

/// Gromov test on a table g[m][n] = ⟨x_m, y_n; o⟩.
fn gromov_proxy(g: &[Vec<f64>], allowance: f64, tol: f64) -> GromovProxy {
    let n = g.len().min(g.first().map_or(0, Vec::len));
    let mut running_min = vec![f64::INFINITY; n];
    for k in (0..n).rev() {
        let mut r = if k + 1 < n { running_min[k + 1] } else { f64::INFINITY };
        for (m, row) in g.iter().enumerate().skip(k) {
            for (j, &v) in row.iter().enumerate().skip(k) {
                if m == k || j == k {
                    r = r.min(v);
                }
            }
        }
        running_min[k] = r;
    }
    let head = n / 2;
    let c0 = (0..head.max(1).min(n))
        .map(|k| (k + 1) as f64 - running_min[k])
        .fold(f64::NEG_INFINITY, f64::max);
    let monotone = running_min.windows(2).all(|w| w[1] >= w[0] - tol);
    let first_failure = (head..n)
        .find(|&k| running_min[k] < (k + 1) as f64 - c0 - allowance - tol * (1.0 + (k + 1) as f64))
        .map(|k| k + 1);
    GromovProxy {
        running_min,
        c0,
        passed: monotone && first_failure.is_none() && n > 0,
        first_failure,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceValidation {
    pub valid: bool,
    pub points: usize,
    pub claim: KindClaim,
    pub radii: Vec<f64>,
    pub radii_nondecreasing: bool,
    pub radii_growing: bool,
    /// Largest ⟨o, x_n; x_m⟩ over m < n and where it occurs (1-based).
    pub worst_product: f64,
    pub worst_at: Option<(usize, usize)>,
    /// Largest product minus claimed bound; absent for claims without one.
    pub worst_excess: Option<f64>,
    pub gromov: Option<GromovProxy>,
    pub first_violation: Option<SeqViolation>,
    pub allowance: f64,
}

/// Checks the claimed kind of a sequence. Bouquet kinds need nondecreasing
/// radii with d(o, x_N) > d(o, x_1) and the claimed product bound for all
/// m < n; Gromov claims run the Gromov test on the sequence against itself.
pub fn validate_sequence(space: &MetricSpace, s: &SeqRec) -> Result<SequenceValidation> {
    if s.len() < 2 {
        return Err(GeomError::Invalid(format!("a sequence needs at least 2 points, got {}", s.len())));
    }
    let allowance = space.allowance();
    let tol = space.tolerance();
    let radii = s.radii(space)?;
    let d = dist_table(space, s.points(), s.points())?;
    let mut first = None;

    let mut radii_nondecreasing = true;
    for i in 1..radii.len() {
        if radii[i] < radii[i - 1] - tol * (1.0 + radii[i]) {
            radii_nondecreasing = false;
            first.get_or_insert(SeqViolation::Radii {
                n: i + 1,
                previous: radii[i - 1],
                radius: radii[i],
            });
        }
    }
    let (r0, rn) = (radii[0], radii[radii.len() - 1]);
    let radii_growing = rn > r0 + tol;
    if !radii_growing {
        first.get_or_insert(SeqViolation::Bounded { first: r0, last: rn });
    }

    let bound = |m: usize| match s.claim {
        KindClaim::BouquetSeq { c } => Some(c),
        KindClaim::LooseBouquetSeq { witness } => Some(witness.eval(radii[m])),
        _ => None,
    };
    let mut worst_product = 0.0;
    let mut worst_at = None;
    let mut worst_excess: Option<f64> = None;
    let mut bound_ok = true;
    for m in 0..s.len() {
        for n in m + 1..s.len() {
            let p = product_at(radii[m], radii[n], d[m][n]);
            if worst_at.is_none() || p > worst_product {
                worst_product = p;
                worst_at = Some((m + 1, n + 1));
            }
            if let Some(b) = bound(m) {
                let excess = p - b;
                worst_excess = Some(worst_excess.map_or(excess, |e| e.max(excess)));
                if excess > allowance + tol * (1.0 + radii[n]) {
                    bound_ok = false;
                    first.get_or_insert(SeqViolation::Product {
                        m: m + 1,
                        n: n + 1,
                        product: p,
                        bound: b,
                    });
                }
            }
        }
    }

    let gromov = match s.claim {
        KindClaim::GromovSeq => {
            let g = gromov_table(&radii, &radii, &d);
            let proxy = gromov_proxy(&g, allowance, tol);
            if let Some(k) = proxy.first_failure {
                first.get_or_insert(SeqViolation::Gromov {
                    k,
                    running_min: proxy.running_min[k - 1],
                    threshold: k as f64 - proxy.c0,
                });
            }
            Some(proxy)
        }
        _ => None,
    };
    let valid = match s.claim {
        KindClaim::BouquetSeq { .. } | KindClaim::LooseBouquetSeq { .. } => {
            radii_nondecreasing && radii_growing && bound_ok
        }
        KindClaim::GromovSeq => gromov.as_ref().is_some_and(|g| g.passed),
        KindClaim::Unclassified => true,
    };
    Ok(SequenceValidation {
        valid,
        points: s.len(),
        claim: s.claim,
        radii,
        radii_nondecreasing,
        radii_growing,
        worst_product,
        worst_at,
        worst_excess,
        gromov,
        first_violation: first,
        allowance,
    })
}

/// g[m][n] = ⟨x_m, y_n; o⟩.
fn gromov_table(rx: &[f64], ry: &[f64], d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rx.iter()
        .zip(d)
        .map(|(&a, row)| ry.iter().zip(row).map(|(&b, &dab)| 0.5 * (a + b - dab)).collect())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivMode {
    Asymptotic,
    Loose,
    Gromov,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EquivOptions {
    pub k: Option<f64>,
    pub witness: Option<LittleOWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeqVerdict {
    Asymptotic { k: f64 },
    LooselyAsymptotic { witness: LittleOWitness },
    GromovEquivalent { c0: f64, running_min: Vec<f64> },
    /// `scale` is d(o, x_m) ∧ d(o, y_n) at the first failing pair, `value`
    /// its profile value (a Gromov product for the Gromov mode).
    Inequivalent { scale: f64, value: f64 },
}

impl SeqVerdict {
    pub fn is_equivalent(&self) -> bool {
        !matches!(self, SeqVerdict::Inequivalent { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeqEquivalenceCertificate {
    pub mode: EquivMode,
    pub verdict: SeqVerdict,
    /// min(⟨o, x_m; y_n⟩, ⟨o, y_n; x_m⟩), indexed [m][n].
    pub pair_profile: Vec<Vec<f64>>,
    /// ⟨x_m, y_n; o⟩, indexed [m][n].
    pub gromov_profile: Vec<Vec<f64>>,
    pub horizon: (usize, usize),
    pub allowance: f64,
    pub proxy: &'static str,
}

/// Relates two sequences in one of three modes.
///
/// The asymptotic and loose modes test the pair profile as a function of
/// d(o, x_m) ∧ d(o, y_n) with the same finite-scale rules as bouquet
/// certificates; a constant bound counts as a little-o witness. The Gromov
/// mode applies [`GROMOV_PROXY`] to the cross products.
pub fn sequences_equivalent(
    space: &MetricSpace,
    s1: &SeqRec,
    s2: &SeqRec,
    mode: EquivMode,
    opts: &EquivOptions,
) -> Result<SeqEquivalenceCertificate> {
    if s1.len() < MIN_EQUIV_INDICES || s2.len() < MIN_EQUIV_INDICES {
        return Err(GeomError::Horizon(format!(
            "equivalence needs at least {MIN_EQUIV_INDICES} indices per sequence, got {} and {}",
            s1.len(),
            s2.len()
        )));
    }
    let allowance = space.allowance();
    let tol = space.tolerance();
    let (rx, ry) = (s1.radii(space)?, s2.radii(space)?);
    let d = dist_table(space, s1.points(), s2.points())?;
    let mut pair_profile = vec![vec![0.0; ry.len()]; rx.len()];
    let mut points = Vec::with_capacity(rx.len() * ry.len());
    for m in 0..rx.len() {
        for n in 0..ry.len() {
            // ⟨o, x_m; y_n⟩ is based at y_n, ⟨o, y_n; x_m⟩ at x_m.
            let at_y = product_at(ry[n], rx[m], d[m][n]);
            let at_x = product_at(rx[m], ry[n], d[m][n]);
            let v = at_y.min(at_x).max(0.0);
            pair_profile[m][n] = v;
            points.push([rx[m].min(ry[n]), v]);
        }
    }
    points.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let mut profile: Vec<[f64; 2]> = Vec::new();
    for p in points {
        match profile.last_mut() {
            Some(last) if last[0] == p[0] => last[1] = last[1].max(p[1]),
            _ => profile.push(p),
        }
    }
    let gromov_profile = gromov_table(&rx, &ry, &d);
    let k_floor = match (s1.claim, s2.claim) {
        (KindClaim::BouquetSeq { c: c1 }, KindClaim::BouquetSeq { c: c2 }) => c1.max(c2),
        _ => 0.0,
    };

    let verdict = match mode {
        EquivMode::Asymptotic => {
            // A zero witness fails wherever the constant does, so an
            // inequivalent verdict locates the first pair above K.
            let zero = LittleOWitness::constant(0.0);
            match judge_profile(&profile, opts.k, k_floor, Some(zero), allowance, tol)? {
                AsymptoticityVerdict::Asymptotic { k } => SeqVerdict::Asymptotic { k },
                AsymptoticityVerdict::Inequivalent { scale, gap } => SeqVerdict::Inequivalent { scale, value: gap },
                AsymptoticityVerdict::LooselyAsymptotic { .. } => unreachable!("zero witness is never looser"),
            }
        }
        EquivMode::Loose => match judge_profile(&profile, opts.k, k_floor, opts.witness, allowance, tol)? {
            AsymptoticityVerdict::Asymptotic { k } => SeqVerdict::LooselyAsymptotic {
                witness: LittleOWitness::constant(k),
            },
            AsymptoticityVerdict::LooselyAsymptotic { witness } => SeqVerdict::LooselyAsymptotic { witness },
            AsymptoticityVerdict::Inequivalent { scale, gap } => SeqVerdict::Inequivalent { scale, value: gap },
        },
        EquivMode::Gromov => {
            let proxy = gromov_proxy(&gromov_profile, allowance, tol);
            if proxy.passed {
                SeqVerdict::GromovEquivalent {
                    c0: proxy.c0,
                    running_min: proxy.running_min,
                }
            } else {
                let k = proxy.first_failure.unwrap_or(proxy.running_min.len()).max(1);
                SeqVerdict::Inequivalent {
                    scale: rx[k - 1].min(ry[k - 1]),
                    value: proxy.running_min[k - 1],
                }
            }
        }
    };
    Ok(SeqEquivalenceCertificate {
        mode,
        verdict,
        pair_profile,
        gromov_profile,
        horizon: (s1.len(), s2.len()),
        allowance,
        proxy: match mode {
            EquivMode::Gromov => GROMOV_PROXY,
            _ => crate::bouquet::ASYMPTOTIC_PROXY,
        },
    })
}

/// Class labels (smallest member index) of the transitive closure of the
/// pairwise relation over the given sequences.
pub fn equivalence_classes(
    space: &MetricSpace,
    seqs: &[SeqRec],
    mode: EquivMode,
    opts: &EquivOptions,
) -> Result<Vec<usize>> {
    let mut uf = UnionFind::<usize>::new(seqs.len());
    for i in 0..seqs.len() {
        for j in i + 1..seqs.len() {
            if sequences_equivalent(space, &seqs[i], &seqs[j], mode, opts)?.verdict.is_equivalent() {
                uf.union(i, j);
            }
        }
    }
    let mut smallest = vec![usize::MAX; seqs.len()];
    for i in 0..seqs.len() {
        let r = uf.find(i);
        smallest[r] = smallest[r].min(i);
    }
    Ok((0..seqs.len()).map(|i| smallest[uf.find(i)]).collect())
}

/// |d(o, x) − ⟨x, y; o⟩ − ⟨o, y; x⟩|, which vanishes identically.
pub fn gp_identity_residual(
    space: &MetricSpace,
    o: impl Into<Site>,
    x: impl Into<Site>,
    y: impl Into<Site>,
) -> Result<f64> {
    let (o, x, y) = (o.into(), x.into(), y.into());
    let (dox, doy, dxy) = (space.dist(o, x)?, space.dist(o, y)?, space.dist(x, y)?);
    let at_o = 0.5 * (dox + doy - dxy);
    let at_x = 0.5 * (dox + dxy - doy);
    Ok((dox - at_o - at_x).abs())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GromovBridge {
    /// y_i: the point at arclength i on a shortest path from o to x_{n_i}.
    pub sequence: SeqRec,
    /// 0-based indices n_i of the input kept by thinning.
    pub kept: Vec<usize>,
    /// (4δ + 3)/2.
    pub c: f64,
}

/// Turns a Gromov sequence into a bouquet sequence: keep the earliest
/// indices with d(o, x_{n_i}) ≥ i and ⟨x_{n_i}, x_{n_j}; o⟩ ≥ j for j < i,
/// then step distance i along a shortest path from o to x_{n_i}. The result
/// claims constant (4δ + 3)/2.
pub fn gromov_to_bouquet_sequence(space: &MetricSpace, g: &SeqRec, delta: f64) -> Result<GromovBridge> {
    if !(delta >= 0.0) {
        return Err(GeomError::Invalid(format!("hyperbolicity estimate {delta} is negative")));
    }
    let check = validate_sequence(space, &g.clone().with_claim(KindClaim::GromovSeq))?;
    if !check.valid {
        return Err(GeomError::Precondition(format!(
            "input fails the Gromov test: {:?}",
            check.first_violation
        )));
    }
    let tol = space.tolerance();
    let radii = check.radii;
    let d = dist_table(space, g.points(), g.points())?;
    let prod = |a: usize, b: usize| 0.5 * (radii[a] + radii[b] - d[a][b]);
    let mut kept: Vec<usize> = Vec::new();
    for n in 0..g.len() {
        let i = kept.len() + 1;
        let ok = radii[n] >= i as f64 - tol
            && kept.iter().enumerate().all(|(j, &nj)| prod(n, nj) >= (j + 1) as f64 - tol);
        if ok {
            kept.push(n);
        }
    }
    if kept.len() < 2 {
        return Err(GeomError::Horizon(format!(
            "thinning kept {} point(s); products grow too slowly within {} points",
            kept.len(),
            g.len()
        )));
    }
    let o = space.basepoint();
    let points = kept
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let p = space.geodesic(o, g.points()[n])?;
            space.locate(&p, ((i + 1) as f64).min(p.length()))
        })
        .collect::<Result<Vec<_>>>()?;
    let c = (4.0 * delta + 3.0) / 2.0;
    Ok(GromovBridge {
        sequence: SeqRec::new(points, KindClaim::BouquetSeq { c }),
        kept,
        c,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceBouquet {
    pub bouquet: Bouquet,
    /// 0-based indices of the input points that became tips.
    pub kept: Vec<usize>,
}

/// Shortest paths from o to a thinned bouquet sequence, as a loose bouquet.
///
/// Thinning keeps the earliest point with d(o, x) ≥ 1 and then each point
/// at least 1 farther out than the last kept one. For a c-bouquet sequence
/// in a C-rCAT(0) space the declared witness is
/// δ(t) = C + √2 + K + √(2K)·√t with K = 2c + 2.
pub fn sequence_to_bouquet(
    space: &MetricSpace,
    s: &SeqRec,
    rcat: f64,
    short: ShortFunction,
) -> Result<SequenceBouquet> {
    let c = match s.claim {
        KindClaim::BouquetSeq { c } => c,
        other => {
            return Err(GeomError::Precondition(format!(
                "building a bouquet needs a bouquet-sequence claim, got {other:?}"
            )))
        }
    };
    let v = validate_sequence(space, s)?;
    if !v.valid {
        return Err(GeomError::Precondition(format!("sequence is invalid: {:?}", v.first_violation)));
    }
    let tol = space.tolerance();
    let mut kept: Vec<usize> = Vec::new();
    for (i, &r) in v.radii.iter().enumerate() {
        let need = kept.last().map_or(1.0, |&j| v.radii[j] + 1.0);
        if r >= need - tol {
            kept.push(i);
        }
    }
    if kept.len() < 2 {
        return Err(GeomError::Horizon(format!("only {} point(s) survive thinning", kept.len())));
    }
    let k = 2.0 * c + 2.0;
    let witness = LittleOWitness::new(rcat + 2f64.sqrt() + k, (2.0 * k).sqrt(), 0.5)?;
    let targets: Vec<Site> = kept.iter().map(|&i| s.points()[i]).collect();
    let bouquet = Bouquet::from_targets(space, space.basepoint(), &targets, Bound::Loose(witness), short)?;
    Ok(SequenceBouquet { bouquet, kept })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{explicit_example_points, ExampleName};
    use crate::spaces::{generate, RegionSpec};

    fn plane(points: &[[f64; 2]]) -> (MetricSpace, Vec<Site>) {
        let mut coords = vec![[0.0, 0.0]];
        coords.extend_from_slice(points);
        let s = MetricSpace::euclidean(coords, 0).unwrap();
        (s, (1..=points.len()).map(Site::Vertex).collect())
    }

    #[test]
    fn collinear_samples_have_zero_products() {
        let pts: Vec<[f64; 2]> = (1..=8).map(|n| [n as f64, 0.0]).collect();
        let (s, sites) = plane(&pts);
        let seq = SeqRec::new(sites, KindClaim::BouquetSeq { c: 0.0 });
        let v = validate_sequence(&s, &seq).unwrap();
        assert!(v.valid, "{v:?}");
        assert_eq!(v.worst_product, 0.0);
        let cert = sequences_equivalent(&s, &seq, &seq, EquivMode::Asymptotic, &EquivOptions::default()).unwrap();
        assert_eq!(cert.verdict, SeqVerdict::Asymptotic { k: 0.0 });
    }

    #[test]
    fn alternating_sequence_fails() {
        let pts: Vec<[f64; 2]> =
            (1..=8).map(|n| if n % 2 == 1 { [n as f64, 0.0] } else { [n as f64 + 1.0, n as f64] }).collect();
        let (s, sites) = plane(&pts);
        let v = validate_sequence(&s, &SeqRec::new(sites, KindClaim::BouquetSeq { c: 1.0 })).unwrap();
        assert!(!v.valid);
        assert!(v.worst_product > 2.0);
    }

    #[test]
    fn conjugate_example_sequences() {
        let ex = explicit_example_points(&[ExampleName::ConjugatePair], 12).unwrap();
        let (x, y) = (
            ex.sequences[0].clone().with_claim(KindClaim::BouquetSeq { c: 1.0 }),
            ex.sequences[1].clone().with_claim(KindClaim::BouquetSeq { c: 1.0 }),
        );
        assert!(validate_sequence(&ex.space, &x).unwrap().valid);
        let a = sequences_equivalent(&ex.space, &x, &y, EquivMode::Asymptotic, &EquivOptions::default()).unwrap();
        assert!(!a.verdict.is_equivalent(), "{:?}", a.verdict);
        for n in 0..12 {
            let want = 2f64.powi(n as i32 + 1);
            assert!((a.pair_profile[n][n] - want).abs() < 1e-6 * want.max(1.0));
        }
        let l = sequences_equivalent(&ex.space, &x, &y, EquivMode::Loose, &EquivOptions::default()).unwrap();
        assert!(matches!(l.verdict, SeqVerdict::LooselyAsymptotic { .. }), "{:?}", l.verdict);
        let back = sequences_equivalent(&ex.space, &y, &x, EquivMode::Loose, &EquivOptions::default()).unwrap();
        assert_eq!(back.verdict, l.verdict);
    }

    #[test]
    fn short_horizons_are_refused() {
        let (s, sites) = plane(&[[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]);
        let seq = SeqRec::new(sites, KindClaim::Unclassified);
        assert!(matches!(
            sequences_equivalent(&s, &seq, &seq, EquivMode::Gromov, &EquivOptions::default()),
            Err(GeomError::Horizon(_))
        ));
    }

    #[test]
    fn identity_residual_vanishes() {
        let t = generate(&RegionSpec::star(3, 0.5, 6.0)).unwrap();
        for (o, x, y) in [(0, 5, 9), (3, 3, 17), (1, 2, 3)] {
            assert!(gp_identity_residual(&t, o, x, y).unwrap() <= 1e-9);
        }
        assert_eq!(gp_identity_residual(&t, 4, 4, 10).unwrap(), 0.0);
    }

    fn tree() -> MetricSpace {
        generate(&RegionSpec::tree(2, 5, 1.0, 40.0)).unwrap()
    }

    #[test]
    fn gromov_sequence_in_a_tree() {
        let t = tree();
        // Alternate between two leaves whose branches separate ever deeper:
        // walk down the leftmost branch, stepping off to the right sibling.
        let leftmost: Vec<usize> = (0..t.len()).filter(|&v| t.dist(0, v).unwrap() + t.dist(v, 40).unwrap() == 40.0).collect();
        let mut pts = Vec::new();
        for depth in [8.0, 16.0, 24.0, 32.0, 40.0] {
            let v = *leftmost.iter().find(|&&v| t.dist(0, v).unwrap() == depth).unwrap();
            pts.push(Site::Vertex(v));
        }
        let g = SeqRec::new(pts, KindClaim::GromovSeq);
        let v = validate_sequence(&t, &g).unwrap();
        assert!(v.valid, "{v:?}");
        let b = gromov_to_bouquet_sequence(&t, &g, 0.0).unwrap();
        assert_eq!(b.c, 1.5);
        let vb = validate_sequence(&t, &b.sequence).unwrap();
        assert!(vb.valid && vb.worst_product <= 1.5, "{vb:?}");
    }

    #[test]
    fn bounded_products_are_not_gromov() {
        let pts: Vec<[f64; 2]> = (1..=8).map(|n| [n as f64 * if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0]).collect();
        let (s, sites) = plane(&pts);
        let g = SeqRec::new(sites, KindClaim::GromovSeq);
        assert!(!validate_sequence(&s, &g).unwrap().valid);
        assert!(gromov_to_bouquet_sequence(&s, &g, 0.0).is_err());
    }

    #[test]
    fn sequence_to_bouquet_thins_and_validates() {
        let pts = [[0.5, 0.0], [1.0, 0.0], [1.5, 0.0], [3.0, 0.0], [3.2, 0.0], [8.0, 0.0]];
        let (s, sites) = plane(&pts);
        let seq = SeqRec::new(sites, KindClaim::BouquetSeq { c: 0.0 });
        let r = sequence_to_bouquet(&s, &seq, 0.0, ShortFunction::Standard).unwrap();
        assert_eq!(r.kept, vec![1, 3, 5]);
        let v = crate::bouquet::validate_bouquet(&s, &r.bouquet, None).unwrap();
        assert!(v.valid, "{v:?}");
    }

    #[test]
    fn classes_by_union_find() {
        let ex = explicit_example_points(
            &[ExampleName::Parabola(0.0), ExampleName::Parabola(0.5), ExampleName::Parabola(1.0)],
            10,
        )
        .unwrap();
        let a = equivalence_classes(&ex.space, &ex.sequences, EquivMode::Asymptotic, &EquivOptions::default()).unwrap();
        assert_eq!(a, vec![0, 1, 2]);
        let l = equivalence_classes(&ex.space, &ex.sequences, EquivMode::Loose, &EquivOptions::default()).unwrap();
        assert_eq!(l, vec![0, 0, 0]);
    }

    #[test]
    fn json_round_trip() {
        let (s, sites) = plane(&[[1.0, 0.0], [2.0, 0.0]]);
        let seq = SeqRec::new(sites, KindClaim::LooseBouquetSeq { witness: LittleOWitness::default_loose() });
        let back = SeqRec::from_json(&s, &seq.to_json()).unwrap();
        assert_eq!(back, seq);
        let raw = r#"{"points":[1,[0.5,0.5]],"claim":{"kind":"bouquet-seq","c":1}}"#;
        assert_eq!(SeqRec::from_json(&s, raw).unwrap().claim(), KindClaim::BouquetSeq { c: 1.0 });
        assert!(SeqRec::from_json(&s, r#"{"points":[9]}"#).is_err());
    }
}
