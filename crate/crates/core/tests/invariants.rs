use std::f64::consts::TAU;

use proptest::prelude::*;

use coarse_geom::bouquet::{
    certify_asymptotic, prune, rebase, schedule, tighten_loose_bouquet, tip_sequence, validate_bouquet, Bound,
    Bouquet, CertifyOptions, LittleOWitness, RebaseOptions, ShortFunction, TargetRule,
};
use coarse_geom::ends::end_chains;
use coarse_geom::metric::{four_point_delta, gromov_product, Budget};
use coarse_geom::sequences::{gp_identity_residual, validate_sequence, KindClaim};
use coarse_geom::spaces::{generate, RegionSpec};
use coarse_geom::topology::{neighborhood_member, Candidate, NeighborhoodSpec, Tri, Variant};
use coarse_geom::{MetricSpace, Site};

fn points() -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec([-100.0..100.0f64, -100.0..100.0f64], 4..24)
}

fn random_tree(n: usize, seed: u64) -> MetricSpace {
    let mut spec = RegionSpec::new("random-tree", 1.0, 0.0);
    spec.vertices = Some(n);
    spec.seed = Some(seed);
    generate(&spec).unwrap()
}

/// A far point at angle `theta` and the ray bouquet towards it.
fn plane_ray(theta: f64, extra: [f64; 2]) -> (MetricSpace, Bouquet) {
    let s = MetricSpace::euclidean(vec![[0.0, 0.0], [512.0 * theta.cos(), 512.0 * theta.sin()], extra], 0).unwrap();
    let b = Bouquet::ray(&s, 0, 1, &schedule(2.0, 9), Bound::Constant(0.0), ShortFunction::Standard).unwrap();
    (s, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn metric_axioms_and_product_identity(pts in points(), i in 0usize..4, j in 0usize..4, k in 0usize..4) {
        let s = MetricSpace::euclidean(pts, 0).unwrap();
        prop_assert_eq!(s.dist(i, j).unwrap(), s.dist(j, i).unwrap());
        prop_assert!(s.dist(i, k).unwrap() <= s.dist(i, j).unwrap() + s.dist(j, k).unwrap() + 1e-9);
        prop_assert!(gp_identity_residual(&s, i, j, k).unwrap() <= 1e-9);
        let p = gromov_product(&s, i, j, k).unwrap();
        prop_assert!(p <= s.dist(i, k).unwrap().min(s.dist(j, k).unwrap()) + 1e-9);
    }

    #[test]
    fn trees_are_zero_hyperbolic(n in 4usize..30, seed in any::<u64>()) {
        let t = random_tree(n, seed);
        let exact = four_point_delta(&t, Budget::Exact, 0).unwrap();
        prop_assert!(exact.delta <= 1e-9);
    }

    #[test]
    fn sampled_delta_never_exceeds_exact(pts in points(), seed in any::<u64>()) {
        let s = MetricSpace::euclidean(pts, 0).unwrap();
        let exact = four_point_delta(&s, Budget::Exact, 0).unwrap().delta;
        let sampled = four_point_delta(&s, Budget::Samples(500), seed).unwrap().delta;
        prop_assert!(sampled <= exact + 1e-12);
    }

    #[test]
    fn pruning_keeps_a_valid_equivalent_bouquet(theta in 0.0..TAU, alpha in 0.05..1.0f64) {
        let (s, b) = plane_ray(theta, [0.0, 1.0]);
        let p = prune(&s, &b, &[alpha]).unwrap();
        prop_assert!(!p.non_bouquet);
        prop_assert!(validate_bouquet(&s, &p.bouquet, None).unwrap().valid);
        let cert = certify_asymptotic(&s, &b, &p.bouquet, &CertifyOptions::default()).unwrap();
        prop_assert!(cert.verdict.is_asymptotic());
    }

    #[test]
    fn tips_of_a_bouquet_form_a_bouquet_sequence(theta in 0.0..TAU, c in 0.0..4.0f64) {
        let (s, b) = plane_ray(theta, [0.0, 1.0]);
        let b = b.with_bound(Bound::Constant(c));
        let tips = tip_sequence(&s, &b).unwrap();
        prop_assert_eq!(tips.claim(), KindClaim::BouquetSeq { c: c + 1.5 });
        prop_assert!(validate_sequence(&s, &tips).unwrap().valid);
    }

    #[test]
    fn certificates_are_reflexive_and_symmetric(a in 0.0..TAU, da in -0.5..0.5f64) {
        let s = MetricSpace::euclidean(
            vec![[0.0, 0.0], [512.0 * a.cos(), 512.0 * a.sin()], [512.0 * (a + da).cos(), 512.0 * (a + da).sin()]],
            0,
        )
        .unwrap();
        let sch = schedule(2.0, 9);
        let x = Bouquet::ray(&s, 0, 1, &sch, Bound::Constant(0.0), ShortFunction::Standard).unwrap();
        let y = Bouquet::ray(&s, 0, 2, &sch, Bound::Constant(0.0), ShortFunction::Standard).unwrap();
        let own = certify_asymptotic(&s, &x, &x, &CertifyOptions::default()).unwrap();
        prop_assert!(own.verdict.is_asymptotic());
        prop_assert!(own.max_gap <= 1e-9);
        let xy = certify_asymptotic(&s, &x, &y, &CertifyOptions::default()).unwrap();
        let yx = certify_asymptotic(&s, &y, &x, &CertifyOptions::default()).unwrap();
        prop_assert_eq!(xy.verdict.is_equivalent(), yx.verdict.is_equivalent());
        prop_assert!((xy.max_gap - yx.max_gap).abs() <= 1e-9);
    }

    #[test]
    fn tightened_bouquets_validate(theta in 0.0..TAU, k in 0.0..2.0f64, a in 0.0..1.0f64) {
        let (s, b) = plane_ray(theta, [0.0, 1.0]);
        let loose = b.with_bound(Bound::Loose(LittleOWitness::new(k, a, 0.5).unwrap()));
        let r = tighten_loose_bouquet(&s, &loose, 0.0).unwrap();
        prop_assert!(r.selected.len() >= 2);
        prop_assert!(validate_bouquet(&s, &r.bouquet, None).unwrap().valid);
    }

    #[test]
    fn rebased_profile_stays_below_the_constant(theta in 0.0..TAU, ox in -4.0..4.0f64, oy in -4.0..4.0f64) {
        let (s, b) = plane_ray(theta, [ox, oy]);
        let opts = RebaseOptions {
            rcat: 0.0,
            c_target: 2.5,
            short: ShortFunction::Standard,
            targets: TargetRule::Tips,
        };
        match rebase(&s, &b, 2, &opts) {
            Ok(r) => {
                prop_assert!(validate_bouquet(&s, &r.bouquet, None).unwrap().valid);
                let cert = certify_asymptotic(&s, &b, &r.bouquet, &CertifyOptions::default()).unwrap();
                prop_assert!(cert.max_gap <= r.c_unpruned + 1e-9);
            }
            // Far origins leave too few scheduled lengths.
            Err(e) => prop_assert!(matches!(e, coarse_geom::GeomError::Horizon(_)), "{e}"),
        }
    }

    #[test]
    fn end_components_nest(n in 8usize..60, seed in any::<u64>()) {
        let t = random_tree(n, seed);
        let e = end_chains(&t, 0, &[0.5, 1.0, 2.0, 4.0]).unwrap();
        for w in e.partitions.windows(2) {
            let (inner, outer) = (&w[0], &w[1]);
            for v in 0..t.len() {
                if let Some(c) = outer.component_of(v) {
                    // Same outer component ⇒ same inner component.
                    let rep = inner.component_of(c).unwrap();
                    prop_assert_eq!(inner.component_of(v), Some(rep));
                }
            }
        }
    }

    #[test]
    fn s0_implies_s_and_sprime_implies_s(theta in 0.0..TAU, px in -20.0..20.0f64, py in -20.0..20.0f64, r in 0.1..5.0f64, c in prop::option::of(0.0..0.2f64)) {
        let (s, b) = plane_ray(theta, [px, py]);
        let y = Candidate::Point(Site::Vertex(2));
        let eval = |variant| {
            let spec = NeighborhoodSpec { r, n: 5, t: 16.0, variant };
            neighborhood_member(&s, &spec, std::slice::from_ref(&b), &y, c).unwrap()
        };
        let (s0, sv, sp) = (eval(Variant::S0), eval(Variant::S), eval(Variant::Sprime));
        if s0.verdict == Tri::True {
            prop_assert_eq!(sv.verdict, Tri::True);
            prop_assert_eq!(s0.witness, sv.witness);
        }
        if sp.verdict == Tri::True {
            prop_assert_eq!(sv.verdict, Tri::True);
        }
    }
}
