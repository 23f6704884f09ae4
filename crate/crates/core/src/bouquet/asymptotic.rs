//! Finite-scale asymptoticity certificates between two bouquets.

use rayon::prelude::*;
use serde::Serialize;

use super::{default_spacing, sample_ts, Bouquet, LittleOWitness};
use crate::error::{GeomError, Result};
use crate::metric::{MetricSpace, Site};

/// Description of the finite-scale test behind each verdict, stored in
/// every certificate.
pub const ASYMPTOTIC_PROXY: &str = "asymptotic(K): profile ≤ K + allowance on every sample, K either given or the \
     maximum over t ≤ t_max/2 plus 1/2 or the larger declared bouquet constant; loosely-asymptotic(δ): profile ≤ δ(t) + allowance on every sample with \
     δ = K + 1.25·a·√t fitted on t ≤ t_max/2 unless given, and max profile/t per dyadic scale nonincreasing over the \
     last three scales";

/// Fitted constants may grow by this much between the head and the tail.
pub(crate) const TAIL_SLACK: f64 = 0.5;
/// Factor applied to the fitted √t coefficient before testing the tail.
/// Below √2, so a linearly growing profile still fails the test.
pub(crate) const HEAD_FIT_MARGIN: f64 = 1.25;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CertifyOptions {
    /// Test against this constant instead of fitting one.
    pub k: Option<f64>,
    /// Test against this witness instead of fitting one.
    pub witness: Option<LittleOWitness>,
    pub spacing: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum AsymptoticityVerdict {
    Asymptotic { k: f64 },
    LooselyAsymptotic { witness: LittleOWitness },
    /// Both tests fail; `scale` is the first sample parameter where they do.
    Inequivalent { scale: f64, gap: f64 },
}

impl AsymptoticityVerdict {
    pub fn is_asymptotic(&self) -> bool {
        matches!(self, AsymptoticityVerdict::Asymptotic { .. })
    }

    pub fn is_equivalent(&self) -> bool {
        !matches!(self, AsymptoticityVerdict::Inequivalent { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticityCertificate {
    pub verdict: AsymptoticityVerdict,
    /// (t, max over pairs of d(β¹_m(t), β²_n(t))) sorted by t.
    pub profile: Vec<[f64; 2]>,
    pub max_gap: f64,
    /// 1-based (m, n, t) of the largest gap.
    pub max_at: (usize, usize, f64),
    /// Path counts of the two bouquets (the truncation horizon).
    pub horizon: (usize, usize),
    pub spacing: f64,
    pub allowance: f64,
    pub proxy: &'static str,
}

struct Samples {
    profile: Vec<[f64; 2]>,
    max_gap: f64,
    max_at: (usize, usize, f64),
    spacing: f64,
}

fn gap_samples(space: &MetricSpace, b1: &Bouquet, b2: &Bouquet, spacing: Option<f64>) -> Result<Samples> {
    let (l1, l2) = (b1.lengths(), b2.lengths());
    let shortest = l1[0].min(l2[0]);
    let longest = l1.last().copied().unwrap_or(0.0).max(l2.last().copied().unwrap_or(0.0));
    let g = spacing.unwrap_or_else(|| default_spacing(shortest, longest));
    if !(g > 0.0) {
        return Err(GeomError::OutOfRange {
            what: "grid spacing",
            value: g,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..l1.len()).flat_map(|m| (0..l2.len()).map(move |n| (m, n))).collect();
    let rows = pairs
        .par_iter()
        .map(|&(m, n)| -> Result<Vec<(f64, f64, usize, usize)>> {
            let limit = l1[m].min(l2[n]);
            sample_ts(limit, g)
                .into_iter()
                .map(|t| {
                    let u = space.locate(&b1.paths()[m], t)?;
                    let v = space.locate(&b2.paths()[n], t)?;
                    let d = match (u, v) {
                        (Site::Vertex(a), Site::Vertex(b)) if space.is_graph() => space.row(a)?[b],
                        _ => space.dist(u, v)?,
                    };
                    Ok((t, d, m, n))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut all: Vec<(f64, f64, usize, usize)> = rows.into_iter().flatten().collect();
    let mut max_gap = f64::NEG_INFINITY;
    let mut max_at = (1, 1, 0.0);
    for &(t, d, m, n) in &all {
        if d > max_gap {
            max_gap = d;
            max_at = (m + 1, n + 1, t);
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut profile: Vec<[f64; 2]> = Vec::new();
    for (t, d, _, _) in all {
        match profile.last_mut() {
            Some(last) if last[0] == t => last[1] = last[1].max(d),
            _ => profile.push([t, d]),
        }
    }
    Ok(Samples {
        profile,
        max_gap: max_gap.max(0.0),
        max_at,
        spacing: g,
    })
}

/// Whether max(value/scale) per dyadic bucket [2^j, 2^(j+1)) is
/// nonincreasing over the last three nonempty buckets, up to
/// `slack`/2^j. Points with scale < 1 are ignored; fewer than two buckets
/// pass vacuously.
pub(crate) fn dyadic_ratio_nonincreasing(points: &[[f64; 2]], slack: f64) -> bool {
    let mut buckets: Vec<(i32, f64)> = Vec::new();
    for &[s, v] in points {
        if s < 1.0 {
            continue;
        }
        let j = s.log2().floor() as i32;
        let r = v / s;
        match buckets.iter_mut().find(|b| b.0 == j) {
            Some(b) => b.1 = b.1.max(r),
            None => buckets.push((j, r)),
        }
    }
    buckets.sort_by_key(|b| b.0);
    let tail = &buckets[buckets.len().saturating_sub(3)..];
    tail.windows(2)
        .all(|w| w[1].1 <= w[0].1 + slack / 2f64.powi(w[1].0))
}

/// Fits δ = K + a·√t with K = value at the smallest scale and a equal to
/// [`HEAD_FIT_MARGIN`] times the least coefficient covering every point.
pub(crate) fn fit_sqrt_witness(points: &[[f64; 2]]) -> LittleOWitness {
    let k = points.first().map_or(0.0, |p| p[1]).max(0.0);
    let a = points
        .iter()
        .filter(|p| p[0] > 0.0)
        .map(|p| (p[1] - k).max(0.0) / p[0].sqrt())
        .fold(0.0, f64::max);
    LittleOWitness {
        k,
        a: HEAD_FIT_MARGIN * a,
        p: 0.5,
    }
}

/// Applies the asymptotic and loose tests to a profile of (scale, value)
/// points sorted by scale. Without a given K the constant tested is the
/// larger of `k_floor` and the head maximum plus [`TAIL_SLACK`].
pub(crate) fn judge_profile(
    profile: &[[f64; 2]],
    k: Option<f64>,
    k_floor: f64,
    witness: Option<LittleOWitness>,
    allowance: f64,
    tol: f64,
) -> Result<AsymptoticityVerdict> {
    let top = profile.last().map_or(0.0, |p| p[0]);
    let head: Vec<[f64; 2]> = profile.iter().copied().filter(|p| p[0] <= top / 2.0).collect();
    let head = if head.is_empty() { profile.to_vec() } else { head };
    let max_value = profile.iter().map(|p| p[1]).fold(0.0, f64::max);
    let limit = k.unwrap_or_else(|| (head.iter().map(|p| p[1]).fold(0.0, f64::max) + TAIL_SLACK).max(k_floor));
    let exceeds_k = |p: &[f64; 2]| p[1] > limit + allowance + tol * (1.0 + p[0]);
    let witness = match witness {
        Some(w) => {
            w.check()?;
            w
        }
        None => fit_sqrt_witness(&head),
    };
    let exceeds_w = |p: &[f64; 2]| p[1] > witness.eval(p[0]) + allowance + tol * (1.0 + p[0]);
    if !profile.iter().any(exceeds_k) {
        return Ok(AsymptoticityVerdict::Asymptotic {
            k: k.unwrap_or(max_value),
        });
    }
    if !profile.iter().any(exceeds_w) && dyadic_ratio_nonincreasing(profile, allowance + tol) {
        return Ok(AsymptoticityVerdict::LooselyAsymptotic { witness });
    }
    let [scale, gap] = profile
        .iter()
        .copied()
        .find(|p| exceeds_k(p) && exceeds_w(p))
        .or_else(|| profile.last().copied())
        .unwrap_or([0.0, 0.0]);
    Ok(AsymptoticityVerdict::Inequivalent { scale, gap })
}

/// Compares the gap profile of two bouquets against a constant and
/// against a little-o witness. The profile at t is the largest
/// d(β¹_m(t), β²_n(t)) over pairs with t ≤ min(L¹_m, L²_n), so the
/// certificate is symmetric in the two bouquets.
pub fn certify_asymptotic(
    space: &MetricSpace,
    b1: &Bouquet,
    b2: &Bouquet,
    opts: &CertifyOptions,
) -> Result<AsymptoticityCertificate> {
    let s = gap_samples(space, b1, b2, opts.spacing)?;
    let allowance = space.allowance();
    // Each bouquet's own constant bounds its gap profile against itself.
    let k_floor = match (b1.bound().constant(), b2.bound().constant()) {
        (Some(c1), Some(c2)) => c1.max(c2),
        _ => 0.0,
    };
    let verdict = judge_profile(&s.profile, opts.k, k_floor, opts.witness, allowance, space.tolerance())?;
    Ok(AsymptoticityCertificate {
        verdict,
        profile: s.profile,
        max_gap: s.max_gap,
        max_at: s.max_at,
        horizon: (b1.len(), b2.len()),
        spacing: s.spacing,
        allowance,
        proxy: ASYMPTOTIC_PROXY,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpreadReport {
    /// Largest sampled d(β_n(t), β′_m(t)).
    pub spread: f64,
    /// 1-based (n, m, t) where it occurs.
    pub at: (usize, usize, f64),
    /// 5C + 4.
    pub bound: f64,
    pub allowance: f64,
    pub within: bool,
}

/// Largest gap between two bouquets certified asymptotic, against 5C + 4.
pub fn equivalence_spread(space: &MetricSpace, b1: &Bouquet, b2: &Bouquet, rcat: f64) -> Result<SpreadReport> {
    let cert = certify_asymptotic(space, b1, b2, &CertifyOptions::default())?;
    if !cert.verdict.is_asymptotic() {
        return Err(GeomError::Precondition(format!(
            "bouquets are not certified asymptotic: {:?}",
            cert.verdict
        )));
    }
    let bound = 5.0 * rcat + 4.0;
    Ok(SpreadReport {
        spread: cert.max_gap,
        at: cert.max_at,
        bound,
        allowance: cert.allowance,
        within: cert.max_gap <= bound + cert.allowance + space.tolerance() * (1.0 + cert.max_at.2),
    })
}
