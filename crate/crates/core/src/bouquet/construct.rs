//! Rebasing a bouquet to another origin and tightening loose bouquets.

use serde::{Deserialize, Serialize};

use super::{prune, Bound, Bouquet, LittleOWitness, ShortFunction};
use crate::error::{GeomError, Result};
use crate::metric::{MetricSpace, PathRec, Site};

/// Which points of the source paths the rebased paths aim at.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetRule {
    /// Tips when D(t) ≤ 1/(1 ∨ 2t), midpoints otherwise.
    #[default]
    Auto,
    Tips,
    /// The point y_n of β_n with d(o, y_n) closest to d(o, x_n)/2.
    Midpoints,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RebaseOptions {
    /// Rough CAT(0) constant C of the space.
    pub rcat: f64,
    /// Target bouquet constant c′ > C.
    pub c_target: f64,
    pub short: ShortFunction,
    pub targets: TargetRule,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RebaseResult {
    pub bouquet: Bouquet,
    /// 0-based indices of the source paths kept by thinning.
    pub kept: Vec<usize>,
    pub targets: Vec<Site>,
    pub rule_used: TargetRule,
    /// 1 + c + 2C + d(o, o′): constant of the unpruned rebased paths and the
    /// asymptoticity constant against the source.
    pub c_unpruned: f64,
    /// Pruning factor applied when c_unpruned exceeds the target constant.
    pub pruned_by: Option<f64>,
    pub origin_distance: f64,
}

/// Builds a bouquet from `o2` asymptotic to `b`.
///
/// The source is thinned so that L_1 ≥ 1 + 4d and L_{k+1} ≥ L_k + 4d + 3
/// (d = d(o, o2), earliest admissible index first). Shortest paths from
/// `o2` to the chosen targets form the new bouquet, pruned by
/// a = (c′ − C)/(1 + c + C + d) when 1 + c + 2C + d exceeds c′.
pub fn rebase(space: &MetricSpace, b: &Bouquet, o2: impl Into<Site>, opts: &RebaseOptions) -> Result<RebaseResult> {
    let o2 = o2.into();
    let c = b.bound().constant().ok_or_else(|| {
        GeomError::Precondition("rebasing needs a bouquet with a constant bound".into())
    })?;
    if !(opts.c_target > opts.rcat) {
        return Err(GeomError::Precondition(format!(
            "target constant {} must exceed C = {}",
            opts.c_target, opts.rcat
        )));
    }
    let o = b.origin();
    let d = space.dist(o, o2)?;
    let lengths = b.lengths();
    let mut kept = Vec::new();
    let mut last: Option<f64> = None;
    for (i, &l) in lengths.iter().enumerate() {
        let need = match last {
            None => 1.0 + 4.0 * d,
            Some(prev) => prev + 4.0 * d + 3.0,
        };
        if l >= need {
            kept.push(i);
            last = Some(l);
        }
    }
    if kept.len() < 2 {
        return Err(GeomError::Horizon(format!(
            "only {} path(s) survive thinning for d(o, o') = {d}; lengths {lengths:?}",
            kept.len()
        )));
    }
    let rule = match opts.targets {
        TargetRule::Auto if b.short().below_standard() => TargetRule::Tips,
        TargetRule::Auto => TargetRule::Midpoints,
        r => r,
    };
    let targets = kept
        .iter()
        .map(|&i| match rule {
            TargetRule::Midpoints => midpoint_target(space, o, &b.paths()[i]),
            _ => Ok(b.paths()[i].end()),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut paths = Vec::with_capacity(targets.len());
    for &y in &targets {
        let p = space.geodesic(o2, y)?;
        let allowed = opts.short.eval(space.dist(o2, y)?) / 2.0;
        if p.slack() > allowed + space.tolerance() * (1.0 + p.length()) {
            return Err(GeomError::Resolution(format!(
                "path to {y} has slack {} above D'/2 = {allowed}",
                p.slack()
            )));
        }
        paths.push(p);
    }
    let c_unpruned = 1.0 + c + 2.0 * opts.rcat + d;
    let mut bouquet = Bouquet::new(o2, paths, Bound::Constant(opts.c_target), opts.short.clone(), b.base())?;
    let mut pruned_by = None;
    if c_unpruned > opts.c_target {
        let a = (opts.c_target - opts.rcat) / (1.0 + c + opts.rcat + d);
        bouquet = prune(space, &bouquet, &[a])?.bouquet;
        pruned_by = Some(a);
    }
    Ok(RebaseResult {
        bouquet,
        kept,
        targets,
        rule_used: rule,
        c_unpruned,
        pruned_by,
        origin_distance: d,
    })
}

/// Point of `path` whose distance from `o` is closest to half the distance
/// of its endpoint; the earliest such vertex on graphs, an interpolated
/// point in explicit spaces.
fn midpoint_target(space: &MetricSpace, o: Site, path: &PathRec) -> Result<Site> {
    let half = space.dist(o, path.end())? / 2.0;
    if space.is_graph() {
        let mut best = (f64::INFINITY, path.start());
        for &v in path.vertices() {
            let e = (space.dist(o, v)? - half).abs();
            if e < best.0 {
                best = (e, v);
            }
        }
        return Ok(best.1);
    }
    let (mut lo, mut hi) = (0.0, path.length());
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if space.dist(o, space.locate(path, mid)?)? < half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    space.locate(path, 0.5 * (lo + hi))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TightenResult {
    pub bouquet: Bouquet,
    /// 0-based source indices n_k of the selected paths.
    pub selected: Vec<usize>,
    pub c: f64,
}

/// Turns a loose (δ, D)-bouquet into a (1 + C, D)-bouquet loosely
/// asymptotic to it: pick the earliest strictly increasing indices n_k
/// with L_{n_k} ≥ k and k·δ(L_{n_k}) ≤ L_{n_k}, then cut path n_k to
/// length k. A constant bound c is treated as the witness δ ≡ c.
pub fn tighten_loose_bouquet(space: &MetricSpace, b: &Bouquet, rcat: f64) -> Result<TightenResult> {
    let w = match b.bound() {
        Bound::Loose(w) => w,
        Bound::Constant(c) => LittleOWitness::constant(c),
    };
    let lengths = b.lengths();
    let mut selected = Vec::new();
    let mut next = 0;
    let mut k = 1usize;
    while next < lengths.len() {
        let kf = k as f64;
        match (next..lengths.len()).find(|&i| lengths[i] >= kf && kf * w.eval(lengths[i]) <= lengths[i]) {
            Some(i) => {
                selected.push(i);
                next = i + 1;
                k += 1;
            }
            None => break,
        }
    }
    if selected.len() < 2 {
        return Err(GeomError::Inadmissible(format!(
            "no admissible index sequence within the horizon ({} selected)",
            selected.len()
        )));
    }
    let sub = b.subsequence(&selected)?;
    let alphas: Vec<f64> = sub
        .lengths()
        .iter()
        .enumerate()
        .map(|(j, l)| ((j + 1) as f64 / l).min(1.0))
        .collect();
    let c = 1.0 + rcat;
    let pruned = prune(space, &sub, &alphas)?.bouquet.with_bound(Bound::Constant(c));
    Ok(TightenResult {
        bouquet: pruned,
        selected,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bouquet::{certify_asymptotic, schedule, validate_bouquet, CertifyOptions, LittleOWitness};
    use crate::spaces::{generate, nearest_vertex, RegionSpec};

    fn tree_ray() -> (MetricSpace, Bouquet) {
        let t = generate(&RegionSpec::tree(2, 4, 1.0, 160.0)).unwrap();
        // Vertex 160 is the first leaf in preorder.
        assert_eq!(t.dist(0, 160).unwrap(), 160.0);
        let b = Bouquet::ray(&t, 0, 160, &schedule(2.0, 7), Bound::Constant(0.0), ShortFunction::Standard)
            .unwrap();
        (t, b)
    }

    #[test]
    fn rebase_across_a_tree() {
        let (t, b) = tree_ray();
        // Three steps into the second subtree of the root.
        let o2 = (0..t.len())
            .find(|&v| t.dist(0, v).unwrap() == 3.0 && t.dist(160, v).unwrap() == 163.0)
            .unwrap();
        let opts = RebaseOptions {
            rcat: 2.0,
            c_target: 6.0,
            short: ShortFunction::Standard,
            targets: TargetRule::Auto,
        };
        let r = rebase(&t, &b, o2, &opts).unwrap();
        assert_eq!(r.rule_used, TargetRule::Tips);
        assert_eq!(r.origin_distance, 3.0);
        assert_eq!(r.kept, vec![3, 4, 5, 6]);
        assert_eq!(r.c_unpruned, 1.0 + 0.0 + 4.0 + 3.0);
        let v = validate_bouquet(&t, &r.bouquet, None).unwrap();
        assert!(v.valid, "{v:?}");
        let cert = certify_asymptotic(&t, &b, &r.bouquet, &CertifyOptions::default()).unwrap();
        assert!(cert.max_gap <= r.c_unpruned + t.allowance(), "{}", cert.max_gap);
    }

    #[test]
    fn rebase_needs_depth() {
        let (t, b) = tree_ray();
        let far = nearest_far(&t, 40.0);
        let opts = RebaseOptions {
            rcat: 2.0,
            c_target: 6.0,
            short: ShortFunction::Standard,
            targets: TargetRule::Auto,
        };
        assert!(matches!(rebase(&t, &b, far, &opts), Err(GeomError::Horizon(_))));
        let low = RebaseOptions { c_target: 1.0, ..opts };
        assert!(rebase(&t, &b, 0, &low).is_err());
    }

    fn nearest_far(t: &MetricSpace, d: f64) -> usize {
        (0..t.len()).find(|&v| t.dist(0, v).unwrap() == d && t.dist(160, v).unwrap() > 160.0).unwrap()
    }

    #[test]
    fn midpoint_targets_in_the_plane() {
        let s = MetricSpace::euclidean(vec![[0.0, 0.0], [512.0, 0.0], [0.0, 3.0]], 0).unwrap();
        let b = Bouquet::ray(&s, 0, 1, &schedule(2.0, 9), Bound::Constant(0.0), ShortFunction::Reciprocal).unwrap();
        let opts = RebaseOptions {
            rcat: 0.0,
            c_target: 1.0,
            short: ShortFunction::Reciprocal,
            targets: TargetRule::Auto,
        };
        let r = rebase(&s, &b, 2, &opts).unwrap();
        assert_eq!(r.rule_used, TargetRule::Midpoints);
        for (&i, &y) in r.kept.iter().zip(&r.targets) {
            let half = b.lengths()[i] / 2.0;
            assert!((s.dist(0, y).unwrap() - half).abs() < 1e-9);
        }
        // c'' = 1 + 0 + 0 + 3 > 1: pruned by 1/4.
        assert_eq!(r.pruned_by, Some(0.25));
        assert!(validate_bouquet(&s, &r.bouquet, None).unwrap().valid);
    }

    #[test]
    fn tighten_square_root_witness_on_a_net() {
        let s = generate(&RegionSpec::rectangle(70.0, 4.0, 0.25)).unwrap();
        let far = nearest_vertex(&s, [64.0, 2.0]).unwrap();
        let o = nearest_vertex(&s, [0.0, 2.0]).unwrap();
        let b = Bouquet::ray(&s, o, far, &schedule(2.0, 6), Bound::Loose(LittleOWitness::new(0.0, 1.0, 0.5).unwrap()), ShortFunction::Standard)
            .unwrap();
        let r = tighten_loose_bouquet(&s, &b, 3.732).unwrap();
        // k = 3 needs 3·√L ≤ L, which skips L = 8.
        assert_eq!(r.selected, vec![0, 1, 3, 4, 5]);
        let lengths = r.bouquet.lengths();
        for (k, l) in lengths.iter().enumerate() {
            assert!((l - (k + 1) as f64).abs() <= 0.25 + 1e-9, "{lengths:?}");
        }
        assert!(validate_bouquet(&s, &r.bouquet, None).unwrap().valid);
    }

    #[test]
    fn tighten_tight_bouquets_and_short_horizons() {
        let s = MetricSpace::euclidean(vec![[0.0, 0.0], [10.0, 0.0]], 0).unwrap();
        let b = Bouquet::ray(&s, 0, 1, &[1.0, 2.0], Bound::Constant(0.0), ShortFunction::Standard).unwrap();
        let r = tighten_loose_bouquet(&s, &b, 0.0).unwrap();
        assert_eq!(r.selected, vec![0, 1]);
        assert!(validate_bouquet(&s, &r.bouquet, None).unwrap().valid);
        // δ(t) = t/2 is not a little-o witness at all.
        assert!(LittleOWitness::new(0.0, 0.5, 1.0).is_err());
        // K = 3 forbids every k at lengths 1, 2.
        let loose = b.with_bound(Bound::Loose(LittleOWitness::new(3.0, 0.0, 0.0).unwrap()));
        assert!(matches!(tighten_loose_bouquet(&s, &loose, 0.0), Err(GeomError::Inadmissible(_))));
    }
}
