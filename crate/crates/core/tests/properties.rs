mod common;

use common::{circle, threads};
use dioph_core::arith::{int, pow2, rat};
use dioph_core::cf::convergents_of;
use dioph_core::constructors::{construct, ConstructionPlan, PlanKind};
use dioph_core::exponents::{chi_witness_to_omega_witness, estimate_chi, verify_witness, ChiMethod, Exponent, Schedule, WitnessRecord};
use dioph_core::partition::Sequential;
use dioph_core::variety::*;
use dioph_core::{CfTail, Int, Precision, Rat, RealSource, SeriesTail};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn quotients() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..60, 2..24)
}

fn cf_source() -> impl Strategy<Value = RealSource> {
    quotients().prop_map(|q| {
        let mut all = vec![0];
        all.extend(q);
        RealSource::cf_small(&all, CfTail::Ones).unwrap()
    })
}

fn series_source() -> impl Strategy<Value = RealSource> {
    prop::collection::vec(1u64..6, 3..10).prop_map(|steps| {
        let mut a = 0;
        let exps = steps
            .into_iter()
            .map(|s| {
                a += s;
                a
            })
            .collect();
        RealSource::binary_series(exps, SeriesTail::Geometric(rat(1, 1))).unwrap()
    })
}

fn source() -> impl Strategy<Value = RealSource> {
    prop_oneof![
        3 => cf_source(),
        1 => series_source(),
        1 => (cf_source(), 2u32..4).prop_map(|(s, e)| RealSource::power(s, e).unwrap()),
    ]
}

fn small_rat(max: i64) -> impl Strategy<Value = Rat> {
    (-max..=max, 1..=max).prop_map(|(n, d)| rat(n, d))
}

/// Integer polynomial with `k <= 3`, total degree `<= 4`.
fn int_poly() -> impl Strategy<Value = MultiPolynomial> {
    (1usize..=3).prop_flat_map(|k| {
        let term = (prop::collection::vec(0u32..=4, k), -9i64..=9);
        prop::collection::vec(term, 1..6).prop_map(move |terms| {
            let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= 4).map(|(e, c)| (e, rat(c, 1)));
            MultiPolynomial::new(k, terms).unwrap()
        })
    })
}

fn plane_poly() -> impl Strategy<Value = MultiPolynomial> {
    let term = (prop::collection::vec(0u32..=3, 2), -5i64..=5);
    prop::collection::vec(term, 1..5)
        .prop_map(|terms| MultiPolynomial::new(2, terms.into_iter().map(|(e, c)| (e, rat(c, 1)))).unwrap())
}

/// `P - P(a)`, which vanishes at `a`.
fn through(p: &MultiPolynomial, a: &[Rat]) -> MultiPolynomial {
    let v = p.eval(a).unwrap();
    let terms = p.terms().map(|(e, c)| (e.clone(), c.clone())).chain([(vec![0; p.k()], -v)]);
    MultiPolynomial::new(p.k(), terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convergent_determinants_alternate(q in quotients()) {
        let mut all = vec![int(0)];
        all.extend(q.into_iter().map(int));
        let c = convergents_of(&all);
        for (i, w) in c.windows(2).enumerate() {
            let det = &w[1].num * &w[0].den - &w[0].num * &w[1].den;
            let want = if i % 2 == 0 { Int::one() } else { -Int::one() };
            prop_assert_eq!(det, want);
        }
    }

    #[test]
    fn enclosures_nest_and_shrink(src in source(), p in 1u64..300) {
        let a = src.enclosure(p).unwrap();
        let b = src.enclosure(p + 1).unwrap();
        prop_assert!(a.contains_enclosure(&b), "{a:?} does not contain {b:?}");
        prop_assert!(a.width() <= Rat::new(Int::one(), pow2(p)));
        let fresh = src.detached().enclosure(p + 40).unwrap();
        prop_assert!(a.lo <= fresh.hi && fresh.lo <= a.hi);
    }

    #[test]
    fn shared_witnesses_reverify(srcs in prop::collection::vec(source(), 1..4), x in 1u64..2_000_000) {
        let prec = Precision::default().covering(&srcs);
        let x = int(x as i64);
        let w = WitnessRecord::shared(&x, &srcs, &x, prec).unwrap();
        prop_assert!(verify_witness(&w, &srcs, prec).is_ok());
    }

    #[test]
    fn transformed_witnesses_reverify(
        srcs in prop::collection::vec(cf_source(), 2..4),
        xs in prop::collection::vec(1i64..5000, 3),
    ) {
        let k = srcs.len();
        let prec = Precision::default().covering(&srcs);
        let xs: Vec<Int> = xs[..k].iter().map(|&v| int(v)).collect();
        let window = xs.iter().max().unwrap().clone();
        let w = WitnessRecord::per_coordinate(&xs, &srcs, &window, prec).unwrap();
        prop_assert!(verify_witness(&w, &srcs, prec).is_ok());
        let t = chi_witness_to_omega_witness(&w).unwrap();
        prop_assert!(verify_witness(&t, &srcs, prec).is_ok());
        if let (Exponent::Finite(nu), Exponent::Finite(mu)) = (&w.exponent, &t.exponent) {
            let kk = rat(k as i64, 1);
            prop_assert!(mu >= &((nu - &kk + Rat::one()) / &kk));
        }
    }

    #[test]
    fn denominator_bounds_hold(p in int_poly(), pts in prop::collection::vec(prop::collection::vec(small_rat(60), 3), 50)) {
        prop_assume!(p.degrees().is_ok());
        for v in &pts {
            let r = denominator_bound_check(&p, &v[..p.k()]);
            prop_assert!(r.is_ok(), "{p} at {v:?}: {r:?}");
        }
    }

    #[test]
    fn certificates_exclude_zeros(p in plane_poly(), c in prop::collection::vec(small_rat(12), 2)) {
        let region = RatBox::cube(2, rat(2, 1));
        prop_assume!(p.degrees().is_ok() && region.contains(&c));
        prop_assume!(!p.eval(&c).unwrap().is_zero());
        let cert = exclusion_certificate(&p, &region, &c).unwrap();
        prop_assert!(cert.exclusion_radius > Rat::zero());
        prop_assert!(ball_is_zero_free(&p, &region, &cert, 16).unwrap(), "{p} at {c:?}");
    }

    #[test]
    fn point_search_is_exact_and_complete(p in plane_poly(), a in prop::collection::vec(small_rat(5), 2)) {
        let q = through(&p, &a);
        prop_assume!(q.degrees().is_ok());
        let set = rational_point_search(&q, 5).unwrap();
        prop_assert!(set.contains(&a));
        for v in &set.points {
            prop_assert!(q.eval(v).unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scan_hits_at_points_are_multiples(p in plane_poly(), a in prop::collection::vec(small_rat(4), 2), mu in 1i64..4) {
        let q = through(&p, &a);
        prop_assume!(q.degrees().is_ok());
        let set = rational_point_search(&q, 4).unwrap();
        let region = RatBox::cube(2, rat(3, 2));
        let rep = variety_approx_scan(&q, &region, &set, &ScanConfig::new(40, rat(mu, 1)), &Sequential).unwrap();
        prop_assert_eq!(rep.bound_violations, 0);
        for h in &rep.hits {
            if let HitClass::NearRationalPoint { point, distance } = &h.class {
                if distance.is_zero() {
                    let den = set.points[*point].iter().fold(Int::one(), |acc, v| acc.lcm(v.denom()));
                    prop_assert!((Int::from(h.denominators[0]) % den).is_zero());
                }
            }
            if h.value.is_zero() && h.point().iter().all(|t| height(t) <= int(4)) {
                prop_assert!(!h.is_outlier());
            }
        }
    }

    #[test]
    fn chi_methods_agree(srcs in prop::collection::vec(cf_source(), 2)) {
        let prec = Precision::default().covering(&srcs);
        let schedule = Schedule::geometric(&int(8), &rat(2, 1), &int(1000)).unwrap();
        let brute = estimate_chi(&srcs, &schedule, ChiMethod::BruteForce, prec, &Sequential).unwrap();
        let cands = estimate_chi(&srcs, &schedule, ChiMethod::ConvergentCandidates, prec, &Sequential).unwrap();
        for (b, c) in brute.windows.iter().zip(&cands.windows) {
            prop_assert_eq!(b.exponent(), c.exponent(), "window {}", b.window);
        }
    }

    #[test]
    fn constructions_are_deterministic(l in 1i64..4, salt in any::<u64>()) {
        let plan = ConstructionPlan::new(
            PlanKind::VectorLamblemm { lambdas: vec![rat(l + 1, 1), rat(l + 2, 1)], w: rat(l, 1) },
            3,
        )
        .with_salt(salt);
        let a = construct(&plan).unwrap();
        let b = construct(&plan).unwrap();
        prop_assert_eq!(a.sources, b.sources);
        prop_assert_eq!(a.trace, b.trace);
    }
}

#[test]
fn executors_give_identical_scans() {
    let p = circle(1);
    let set = rational_point_search(&p, 10).unwrap();
    let cfg = ScanConfig::new(120, rat(3, 4));
    let region = RatBox::cube(2, rat(3, 2));
    let a = variety_approx_scan(&p, &region, &set, &cfg, &Sequential).unwrap();
    let b = variety_approx_scan(&p, &region, &set, &cfg, &threads()).unwrap();
    assert_eq!(a, b);
    assert!(!a.hits.is_empty());
}

#[test]
fn executors_give_identical_estimates() {
    let srcs = vec![RealSource::golden_minus_one(), RealSource::sqrt2_minus_one()];
    let prec = Precision::default().covering(&srcs);
    let schedule = Schedule::default_for(&int(10_000)).unwrap();
    let a = estimate_chi(&srcs, &schedule, ChiMethod::BruteForce, prec, &Sequential).unwrap();
    let b = estimate_chi(&srcs, &schedule, ChiMethod::BruteForce, prec, &threads()).unwrap();
    assert_eq!(a, b);
}
