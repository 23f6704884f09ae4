//! Constants the library reports, checked against their closed forms in the
//! source text and against direct measurement.

use coarse_geom::bouquet::{
    equivalence_spread, prune, rebase, schedule, tip_sequence, Bound, Bouquet, RebaseOptions, ShortFunction,
    TargetRule,
};
use coarse_geom::ends::{end_chains, eta_map};
use coarse_geom::metric::gromov_product;
use coarse_geom::sequences::KindClaim;
use coarse_geom::spaces::{explicit_example_points, generate, ExampleName, RegionSpec, CAT0_RCAT_CONSTANT};
use coarse_geom::topology::{separation_check, SeparationTime};
use coarse_geom::MetricSpace;

#[test]
fn cat0_constant_is_two_plus_root_three() {
    assert!((CAT0_RCAT_CONSTANT - (2.0 + 3f64.sqrt())).abs() < 1e-15);
    let rect = generate(&RegionSpec::rectangle(2.0, 2.0, 0.5)).unwrap();
    assert_eq!(rect.info().unwrap().rcat_constant, Some(CAT0_RCAT_CONSTANT));
}

#[test]
fn trees_use_two_plus_four_delta() {
    // δ = 0 for trees, so C = 2 + 4·0.
    let t = generate(&RegionSpec::tree(2, 2, 1.0, 4.0)).unwrap();
    assert_eq!(t.info().unwrap().rcat_constant, Some(2.0 + 4.0 * 0.0));
}

fn plane() -> MetricSpace {
    MetricSpace::euclidean(vec![[0.0, 0.0], [600.0, 0.0], [0.0, 600.0], [0.0, 3.0]], 0).unwrap()
}

#[test]
fn tip_sequences_lose_three_halves() {
    let s = plane();
    let b = Bouquet::ray(&s, 0, 1, &schedule(2.0, 6), Bound::Constant(1.0), ShortFunction::Standard).unwrap();
    assert_eq!(tip_sequence(&s, &b).unwrap().claim(), KindClaim::BouquetSeq { c: 1.0 + 3.0 / 2.0 });
}

#[test]
fn rebase_constant_is_one_plus_c_plus_2c_plus_d() {
    let s = plane();
    let b = Bouquet::ray(&s, 0, 1, &schedule(2.0, 9), Bound::Constant(0.0), ShortFunction::Standard).unwrap();
    let c = 1.0;
    let opts = RebaseOptions {
        rcat: c,
        c_target: 2.0 * c + 2.0 + 0.5,
        short: ShortFunction::Standard,
        targets: TargetRule::Tips,
    };
    let r = rebase(&s, &b, 3, &opts).unwrap();
    assert_eq!(r.origin_distance, 3.0);
    assert_eq!(r.c_unpruned, 1.0 + 0.0 + 2.0 * c + 3.0);
}

#[test]
fn spread_bound_is_5c_plus_4() {
    let s = plane();
    let b = Bouquet::ray(&s, 0, 1, &schedule(2.0, 6), Bound::Constant(0.0), ShortFunction::Standard).unwrap();
    let half = prune(&s, &b, &[0.5]).unwrap().bouquet;
    let r = equivalence_spread(&s, &b, &half, 1.5).unwrap();
    assert_eq!(r.bound, 5.0 * 1.5 + 4.0);
}

#[test]
fn separation_threshold_is_15c_plus_14() {
    let s = plane();
    let x = Bouquet::ray(&s, 0, 1, &schedule(2.0, 9), Bound::Constant(0.0), ShortFunction::Standard).unwrap();
    let y = Bouquet::ray(&s, 0, 2, &schedule(2.0, 9), Bound::Constant(0.0), ShortFunction::Standard).unwrap();
    let r = separation_check(&s, &[x], &[y], 1.0, SeparationTime::Length).unwrap();
    assert_eq!(r.threshold, 15.0 + 14.0);
    // Orthogonal rays: the gap at t is t·√2, first ≥ 29 at t = 32.
    assert_eq!(r.first_tip_n, 5);
    assert!((r.tip_gap - 32.0 * 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn conjugate_points_fellow_travel_within_two() {
    let ex = explicit_example_points(&[ExampleName::ConjugatePair], 12).unwrap();
    let (s, xs) = (&ex.space, &ex.sequences[0]);
    for n in 1..=12 {
        for m in 1..=n {
            let v = 2.0 * gromov_product(s, 0, xs.points()[n - 1], xs.points()[m - 1]).unwrap();
            assert!(v <= 2.0, "2⟨o,x_{n};x_{m}⟩ = {v}");
        }
    }
}

#[test]
fn eta_threshold_is_m_plus_three_halves_plus_half_c() {
    let s = generate(&RegionSpec::star(3, 0.25, 24.0)).unwrap();
    let e = end_chains(&s, 0, &[1.0, 2.0, 4.0]).unwrap();
    let far = (0..s.len()).max_by(|&a, &b| s.dist(0, a).unwrap().total_cmp(&s.dist(0, b).unwrap())).unwrap();
    let b = Bouquet::ray(&s, 0, far, &schedule(2.0, 4), Bound::Constant(1.0), ShortFunction::Standard).unwrap();
    let r = eta_map(&s, &b, &e).unwrap();
    let want: Vec<f64> = [1.0, 2.0, 4.0].iter().map(|m| m + 3.0 / 2.0 + 1.0 / 2.0).collect();
    assert_eq!(r.t0, want);
}
