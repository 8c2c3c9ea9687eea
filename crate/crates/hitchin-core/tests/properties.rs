use hitchin_core::batch::{compare, sample_rng};
use hitchin_core::classifier::{branches, classify};
use hitchin_core::exact::{exact_from_json, exact_to_json};
use hitchin_core::kodaira::{allowed_companions, euler_sum, KodairaType};
use hitchin_core::numerics::{numeric_multiplicities, residual_bound, roots_with_multiplicity, Poly1};
use hitchin_core::oracle::{self, base_residuals, symmetric_checks, Chart, DEFAULT_T_TOL};
use hitchin_core::polar::{pencil_coefficients, validate, CaseTag};
use hitchin_core::strata::{d22_ss, d31_ss, draw, random_elliptic, stratum_sample, Offsets};
use hitchin_core::weights::{
    hecke, hecke_reduce, hecke_reductions, hecke_sheaf, hitchin_class, is_semistable, weight_class, Bidegree,
    ParabolicWeights, SheafClass, Sign, WeightClass,
};
use hitchin_core::{Exact, GrothClass};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ROOT_TOL: f64 = 1e-9;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn case_strategy() -> impl Strategy<Value = CaseTag> {
    prop::sample::select(CaseTag::ALL.to_vec())
}

fn gaussian() -> impl Strategy<Value = Exact> {
    (-30i64..=30, 1i64..=30, -30i64..=30, 1i64..=30).prop_map(|(a, b, c, d)| Exact::from_ratios(a, b, c, d))
}

/// Weights in `[0,1)` with integral sum, over a common denominator.
fn weights() -> impl Strategy<Value = ParabolicWeights> {
    (1i64..=12)
        .prop_flat_map(|den| (Just(den), 0..den, 0..den, 0..den))
        .prop_filter_map("sum must close in [0,1)", |(den, a, b, c)| {
            let m2 = (den - (a + b + c).rem_euclid(den)) % den;
            ParabolicWeights::from_ratios([(a, den), (b, den), (c, den), (m2, den)]).ok()
        })
}

fn multi_fibers() -> impl Strategy<Value = (KodairaType, bool)> {
    prop::sample::select(vec![
        (KodairaType::III, false),
        (KodairaType::I(2), false),
        (KodairaType::I(3), true),
        (KodairaType::IV, true),
    ])
}

fn sorted_mults(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multiplicities_agree_across_routes(
        roots in prop::collection::btree_set((-3i64..=3, -3i64..=3), 1..=4),
        mults in prop::collection::vec(1usize..=3, 4),
    ) {
        let mut p = Poly1::from_ints(&[1]);
        let mut expected = Vec::new();
        for (k, (re, im)) in roots.iter().enumerate() {
            let m = mults[k];
            let linear = Poly1::new(vec![-&Exact::from_ratios(*re, 1, *im, 1), Exact::one()]);
            for _ in 0..m {
                p = &p * &linear;
            }
            expected.push(m);
        }
        let exact = roots_with_multiplicity(&p, ROOT_TOL).unwrap();
        let bound = residual_bound(&p, ROOT_TOL);
        for r in &exact {
            prop_assert!(r.residual <= bound, "residual {} above {}", r.residual, bound);
        }
        let expected = sorted_mults(expected);
        prop_assert_eq!(sorted_mults(exact.iter().map(|r| r.multiplicity).collect()), expected.clone());
        let numeric = numeric_multiplicities(&p.to_complex(), 1e-3);
        prop_assert_eq!(sorted_mults(numeric.iter().map(|r| r.1).collect()), expected);
    }

    #[test]
    fn exact_json_roundtrip_and_field_ops(x in gaussian(), y in gaussian()) {
        prop_assert_eq!(exact_from_json(&exact_to_json(&x)).unwrap(), x.clone());
        prop_assume!(!y.is_zero());
        prop_assert_eq!(&(&x * &y) / &y, x.clone());
        prop_assert_eq!(&(&x + &y) - &y, x);
    }

    #[test]
    fn euler_sum_and_companions(case in case_strategy(), seed in any::<u64>()) {
        let (d, _) = random_elliptic(case, &mut ChaCha8Rng::seed_from_u64(seed));
        let c = classify(&validate(&d).unwrap(), case);
        let types = c.fiber_types();
        prop_assert_eq!(euler_sum(c.infinity, &types), 12);
        prop_assert!(allowed_companions(c.infinity).unwrap().contains(&types));
        prop_assert!(branches(case).contains(&c.branch));
    }

    #[test]
    fn swapping_poles_commutes_with_classification(
        case in prop::sample::select(vec![CaseTag::D22Ss, CaseTag::D22Nn]),
        seed in any::<u64>(),
    ) {
        let (d, _) = random_elliptic(case, &mut ChaCha8Rng::seed_from_u64(seed));
        let s = d.swap_poles().unwrap();
        let (c, cs) = (classify(&validate(&d).unwrap(), case), classify(&validate(&s).unwrap(), case));
        prop_assert_eq!(c.signature(), cs.signature());
        prop_assert!(compare(&s, ROOT_TOL, DEFAULT_T_TOL).unwrap().agree);
    }

    #[test]
    fn pencil_is_affine_in_t(case in case_strategy(), seed in any::<u64>(), t in gaussian()) {
        let (d, _) = random_elliptic(case, &mut ChaCha8Rng::seed_from_u64(seed));
        let (p0, pt) = (pencil_coefficients(&d, &Exact::zero()), pencil_coefficients(&d, &t));
        prop_assert_eq!(&p0.p, &pt.p);
        prop_assert_eq!(p0.t_slot, pt.t_slot);
        for k in 0..5 {
            if k == pt.t_slot {
                prop_assert_eq!(&pt.q[k], &t);
            } else {
                prop_assert_eq!(&pt.q[k], &p0.q[k]);
            }
        }
    }

    #[test]
    fn oracle_matches_classifier_on_random_samples(case in case_strategy(), index in 0usize..1_000_000) {
        let (d, _) = random_elliptic(case, &mut sample_rng(11, case, index));
        let cmp = compare(&d, ROOT_TOL, DEFAULT_T_TOL).unwrap();
        prop_assert!(cmp.agree, "{:?} on {}", cmp, d.to_json());
    }

    #[test]
    fn singular_points_solve_the_pencil(case in case_strategy(), seed in any::<u64>()) {
        let (d, _) = random_elliptic(case, &mut ChaCha8Rng::seed_from_u64(seed));
        let rep = oracle::run(&d, ROOT_TOL, DEFAULT_T_TOL).unwrap();
        let infinity_euler = rep.infinity.euler_number();
        let max_points = (12 - infinity_euler) as usize;
        prop_assert!(rep.points.len() <= max_points);
        prop_assert!(rep.t_clusters.len() <= case.max_singular_fibers());
        for p in rep.points.iter().filter(|p| p.chart == Chart::Base) {
            let scale = 1.0 + p.z.norm().powi(4) + p.w_or_v.norm().powi(2) + p.t.norm() * p.z.norm().powi(2);
            for r in base_residuals(&d, p) {
                prop_assert!(r <= 1e-6 * scale, "residual {} at {:?}", r, p);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stratum_samples_agree(branch_ix in 0usize..64, seed in any::<u64>()) {
        let all: Vec<&'static str> = CaseTag::ALL.iter().flat_map(|c| branches(*c).iter().copied()).collect();
        let branch = all[branch_ix % all.len()];
        let d = stratum_sample(branch, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assume!(validate(&d).is_ok());
        let cmp = compare(&d, ROOT_TOL, DEFAULT_T_TOL).unwrap();
        prop_assert!(cmp.agree, "{:?} on {}", cmp, d.to_json());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn t1_matches_factored_form(seed in any::<u64>(), d31 in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nonzero = |rng: &mut ChaCha8Rng| loop {
            let x = draw(rng);
            if !x.is_zero() {
                break x;
            }
        };
        let (a, b, l, m) = (nonzero(&mut rng), nonzero(&mut rng), draw(&mut rng), nonzero(&mut rng));
        let (case, d) = if d31 {
            (CaseTag::D31Ss, d31_ss(&a, &b, &l, &m, &Offsets::default()))
        } else {
            (CaseTag::D22Ss, d22_ss(&a, &b, &l, &m, &Offsets::default()))
        };
        let inv = validate(&d);
        prop_assume!(inv.is_ok());
        let s = symmetric_checks(&inv.unwrap(), case).unwrap();
        prop_assert_eq!(&s.t1, &s.t1_factored);
        prop_assert_eq!(&s.t2, &s.t2_closed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn hecke_preserves_stability(w in weights(), length in 0u8..=2, dplus in -3i64..=3, plus in any::<bool>()) {
        let s = if plus { Sign::Plus } else { Sign::Minus };
        let sc = SheafClass { length, bidegree: Bidegree::new(dplus, 2 - i64::from(length) - w.degree_class() - dplus) };
        let (hw, _) = match hecke(&w, s) {
            Ok(x) => x,
            Err(_) => return Ok(()),
        };
        prop_assert_eq!(is_semistable(&sc, &w).unwrap(), is_semistable(&hecke_sheaf(&sc, s), &hw).unwrap());
    }

    #[test]
    fn hecke_reduce_lands_in_w1(w in weights()) {
        let (r, transforms) = hecke_reduce(&w);
        prop_assert_eq!(r.degree_class(), 1);
        for x in [&r.p1, &r.m1, &r.p2, &r.m2] {
            prop_assert!(!x.is_negative() && *x < BigRational::one());
        }
        prop_assert_eq!(transforms.len() as i64, (w.degree_class() - 1).abs());
    }

    #[test]
    fn double_reductions_give_equal_classes(
        p in 1i64..12, m in 1i64..12, den in 12i64..=12, fiber in multi_fibers(),
    ) {
        let w = ParabolicWeights::from_ratios([(p, den), (m, den), (den - p, den), (den - m, den)]).unwrap();
        let alts = hecke_reductions(&w);
        prop_assert_eq!(alts.len(), 2);
        let classes: Vec<(GrothClass, GrothClass)> = alts
            .iter()
            .map(|(r, _)| {
                let e = hitchin_class(fiber.0, Some(r), fiber.1, false).unwrap();
                (e.ss, e.s)
            })
            .collect();
        prop_assert_eq!(classes[0], classes[1]);
    }

    #[test]
    fn wall_shift(num in -299i64..=299, fiber in multi_fibers(), w in weights()) {
        let a = rat(num, 100);
        prop_assume!(!a.is_integer());
        let lo = hitchin_class(fiber.0, Some(&w.clone().with_extended(a.clone())), fiber.1, false).unwrap();
        let hi = hitchin_class(fiber.0, Some(&w.with_extended(a + BigRational::one())), fiber.1, false).unwrap();
        prop_assert_eq!((lo.ss, lo.s), (hi.ss, hi.s));
        let bl: Vec<Bidegree> = lo.components.iter().filter_map(|c| c.bidegree).collect();
        let bh: Vec<Bidegree> = hi.components.iter().filter_map(|c| c.bidegree).collect();
        prop_assert_eq!(bl.len(), 2);
        for (x, y) in bl.iter().zip(&bh) {
            prop_assert_eq!(*y, Bidegree::new(x.dplus - 1, x.dminus + 1));
        }
    }

    #[test]
    fn generic_classes_are_consistent(w in weights(), fiber in multi_fibers()) {
        prop_assume!(weight_class(&w) == WeightClass::Generic);
        let e = hitchin_class(fiber.0, Some(&w), fiber.1, false).unwrap();
        let total: GrothClass = e.components.iter().map(|c| c.class).sum();
        prop_assert_eq!(total, e.ss);
        prop_assert_eq!(e.ss, e.s);
        prop_assert_eq!(e.compact, !fiber.1);
        let expected = match fiber {
            (KodairaType::III, _) => GrothClass::new(2, 1),
            (KodairaType::I(2), _) => GrothClass::new(2, 0),
            (KodairaType::I(3), _) => GrothClass::new(2, -1),
            _ => GrothClass::new(2, 0),
        };
        prop_assert_eq!(e.ss, expected);
    }
}
