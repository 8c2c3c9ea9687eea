//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use hitchin_core::batch::{sample_rng, verify, VerifyConfig};
use hitchin_core::classifier::{classify, classify_with_weights};
use hitchin_core::kodaira::{allowed_companions, euler_sum, GrothClass, KodairaType};
use hitchin_core::oracle::{self, symmetric_checks, DEFAULT_T_TOL};
use hitchin_core::polar::{validate, CaseTag, PolarData};
use hitchin_core::strata::{d22_ss, d31_ss, draw, random_elliptic, witnesses, Offsets};
use hitchin_core::weights::{
    hecke, hecke_sheaf, inverse_hecke, is_semistable, Bidegree, ParabolicWeights, SheafClass, Sign, Stability,
};
use hitchin_core::Exact;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use KodairaType::*;

const ROOT_TOL: f64 = 1e-9;
const SAMPLES_PER_CASE: usize = 10_000;
const T1_SAMPLES: usize = 1_000;
const HECKE_PAIRS: usize = 1_000;
const SEED: u64 = 20_240_601;

type Signature = Vec<(KodairaType, bool)>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn e(k: i64) -> Exact {
    Exact::from_int(k)
}

fn q(n: i64, d: i64) -> Exact {
    Exact::ratio(n, d)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sorted(mut v: Vec<(KodairaType, bool)>) -> Vec<(KodairaType, bool)> {
    v.sort();
    v
}

fn plain(types: &[KodairaType]) -> Vec<(KodairaType, bool)> {
    sorted(types.iter().map(|t| (*t, false)).collect())
}

/// Classifier and oracle both reproduce `expected`.
fn both_routes(d: &PolarData, expected: &[(KodairaType, bool)]) -> Result<(), String> {
    let inv = validate(d).map_err(|e| e.to_string())?;
    let c = classify(&inv, d.case());
    if c.signature() != expected {
        return Err(format!("{}: classify gave {:?}", c.branch, c.signature()));
    }
    let rep = oracle::run(d, ROOT_TOL, DEFAULT_T_TOL).map_err(|e| e.to_string())?;
    if rep.signature().as_deref() != Some(expected) {
        return Err(format!("{}: oracle gave {:?}", c.branch, rep.signature()));
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let o = Offsets {
        first: q(1, 3),
        second: q(-2, 5),
        residue: q(3, 7),
    };
    let z = Offsets::default();
    let i = Exact::i();
    let rows: Vec<(&str, PolarData, Signature)> = vec![
        ("III+I1", d22_ss(&e(1), &q(1, 4), &e(1), &e(1), &z), plain(&[III, I(1)])),
        ("2II", d22_ss(&e(1), &(&i * &q(1, 8)), &-&i, &e(1), &o), plain(&[II, II])),
        ("II+2I1 (L²=−M²)", d22_ss(&e(1), &i, &i, &e(1), &o), plain(&[II, I(1), I(1)])),
        ("II+2I1", d22_ss(&e(1), &e(1), &q(-19, 4), &q(-49, 16), &o), plain(&[II, I(1), I(1)])),
        ("2I2", d22_ss(&e(1), &e(1), &e(0), &e(0), &z), plain(&[I(2), I(2)])),
        ("I2+2I1", d22_ss(&e(1), &e(1), &e(1), &e(1), &o), plain(&[I(2), I(1), I(1)])),
        ("4I1", d22_ss(&e(1), &e(1), &e(2), &e(1), &o), plain(&[I(1), I(1), I(1), I(1)])),
    ];
    let start = Instant::now();
    let mut failures = Vec::new();
    for (name, d, expected) in &rows {
        if let Err(msg) = both_routes(d, expected) {
            failures.push(format!("{name}: {msg}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "{}/{} rows reproduced by classify and oracle in {:.3}s{}",
            rows.len() - failures.len(),
            rows.len(),
            elapsed.as_secs_f64(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

/// Fiber types per branch, and the semistable classes of the degenerate
/// fibers at generic weights.
fn expected_branch(branch: &str) -> Option<(KodairaType, Signature, Vec<GrothClass>)> {
    let (l, pt) = (GrothClass::L, GrothClass::PT);
    let dg = |t: KodairaType| (t, true);
    let p = |t: KodairaType| (t, false);
    Some(match branch {
        "d22-sn/ii+i1" => (IStar(3), vec![p(II), p(I(1))], vec![]),
        "d22-sn/3i1" => (IStar(3), vec![p(I(1)); 3], vec![]),
        "d22-nn/2i1" => (IStar(4), vec![p(I(1)); 2], vec![]),
        "d31-ss/iii+i1" => (E6, vec![p(III), p(I(1))], vec![]),
        "d31-ss/ii+i2" => (E6, vec![p(II), p(I(2))], vec![]),
        "d31-ss/i2+2i1" => (E6, vec![p(I(2)), p(I(1)), p(I(1))], vec![]),
        "d31-ss/4i1" => (E6, vec![p(I(1)); 4], vec![]),
        "d31-ss/2ii" => (E6, vec![p(II), p(II)], vec![]),
        "d31-ss/ii+2i1" => (E6, vec![p(II), p(I(1)), p(I(1))], vec![]),
        "d31-sn/iv" => (E6, vec![dg(IV)], vec![l * 2]),
        "d31-sn/ii+i2" => (E6, vec![p(II), dg(I(2))], vec![l - pt]),
        "d31-sn/i3+i1" => (E6, vec![dg(I(3)), p(I(1))], vec![l * 2 - pt]),
        "d31-sn/iii+i1" => (E6, vec![dg(III), p(I(1))], vec![l]),
        "d31-sn/i2+2i1" => (E6, vec![dg(I(2)), p(I(1)), p(I(1))], vec![l - pt]),
        "d31-ns/ii+i1" => (E7, vec![p(II), p(I(1))], vec![]),
        "d31-ns/3i1" => (E7, vec![p(I(1)); 3], vec![]),
        "d31-nn/iii" => (E7, vec![dg(III)], vec![l]),
        "d31-nn/i2+i1" => (E7, vec![dg(I(2)), p(I(1))], vec![l - pt]),
        _ => return None,
    })
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut seen = std::collections::BTreeSet::new();
    for (branch, d) in witnesses() {
        if d.case() == CaseTag::D22Ss {
            continue;
        }
        let Some((infinity, fibers, classes)) = expected_branch(branch) else {
            failures.push(format!("{branch}: no expectation"));
            continue;
        };
        checked += 1;
        seen.insert(branch);
        let inv = validate(&d).expect("witness is elliptic");
        let c = classify(&inv, d.case());
        if c.infinity != infinity || c.signature() != sorted(fibers.clone()) {
            failures.push(format!("{branch}: classify gave {} {:?}", c.infinity, c.signature()));
            continue;
        }
        let report = classify_with_weights(&inv, d.case(), None).expect("generic classes");
        let mut got: Vec<GrothClass> = report.fibers.iter().filter(|f| f.degenerate).map(|f| f.ss).collect();
        got.sort();
        let mut want = classes;
        want.sort();
        if got != want {
            failures.push(format!("{branch}: degenerate classes {got:?}, expected {want:?}"));
        }
    }
    let branches: usize = CaseTag::ALL
        .iter()
        .filter(|c| **c != CaseTag::D22Ss)
        .map(|c| hitchin_core::classifier::branches(*c).len())
        .sum();
    if seen.len() != branches {
        failures.push(format!("{} of {branches} branches have a witness", seen.len()));
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} witnesses over {} branches{}",
            seen.len(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for case in CaseTag::ALL {
        let mut cfg = VerifyConfig::new(case, SAMPLES_PER_CASE, SEED);
        cfg.root_tol = ROOT_TOL;
        let start = Instant::now();
        let report = verify(&cfg);
        let elapsed = start.elapsed();
        let ok = report.agree == SAMPLES_PER_CASE && elapsed < Duration::from_secs(60);
        pass &= ok;
        lines.push(format!(
            "{case} {}/{} in {:.1}s (rejection {:.1}%)",
            report.agree,
            report.samples,
            elapsed.as_secs_f64(),
            100.0 * report.rejection_rate()
        ));
        if let Some(first) = report.disagree.first() {
            lines.push(format!("first disagreement {}", serde_json::to_string(first).unwrap_or_default()));
        }
    }
    outcome(pass, lines.join("; "))
}

fn nonzero(rng: &mut ChaCha8Rng) -> Exact {
    loop {
        let x = draw(rng);
        if x != e(0) {
            return x;
        }
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut lines = Vec::new();
    let mut pass = true;
    for case in [CaseTag::D22Ss, CaseTag::D31Ss] {
        let (mut exact, mut total) = (0, 0);
        while total < T1_SAMPLES {
            let (a, b, l, m) = (nonzero(&mut rng), nonzero(&mut rng), draw(&mut rng), draw(&mut rng));
            let d = if case == CaseTag::D22Ss {
                d22_ss(&a, &b, &l, &m, &Offsets::default())
            } else {
                d31_ss(&a, &b, &l, &m, &Offsets::default())
            };
            let Ok(inv) = validate(&d) else { continue };
            total += 1;
            match symmetric_checks(&inv, case) {
                Ok(s) if s.t1 == s.t1_factored => exact += 1,
                _ => {}
            }
        }
        pass &= exact == total;
        lines.push(format!("{case} {exact}/{total} exact"));
    }
    outcome(pass, lines.join("; "))
}

fn admissible(infinity: KodairaType, types: &Vec<KodairaType>) -> bool {
    allowed_companions(infinity).is_ok_and(|sets| sets.contains(types))
}

fn criterion_5() -> Outcome {
    let mut violations = 0;
    let mut total = 0;
    for case in CaseTag::ALL {
        for index in 0..SAMPLES_PER_CASE {
            let mut rng = sample_rng(SEED, case, index);
            let (d, _) = random_elliptic(case, &mut rng);
            let inv = validate(&d).expect("elliptic");
            let c = classify(&inv, case);
            total += 1;
            let types = c.fiber_types();
            if euler_sum(c.infinity, &types) != 12 || !admissible(c.infinity, &types) {
                violations += 1;
            }
        }
    }
    for (_, d) in witnesses() {
        let inv = validate(&d).expect("witness is elliptic");
        let c = classify(&inv, d.case());
        total += 1;
        let types = c.fiber_types();
        if euler_sum(c.infinity, &types) != 12 || !admissible(c.infinity, &types) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{violations} violations over {total} classifications"))
}

fn criterion_6() -> Outcome {
    let base = ParabolicWeights::from_ratios([(3, 10), (1, 5), (1, 4), (1, 4)]).expect("valid weights");
    let eps = rat(1, 10);
    let contexts = [
        "d22-ss/iii+i1",
        "d22-ss/2i2",
        "d22-ss/i2+2i1",
        "d31-ss/iii+i1",
        "d31-ss/i2+2i1",
        "d31-sn/iv",
        "d31-sn/i3+i1",
    ];
    let (l, pt) = (GrothClass::L, GrothClass::PT);
    let mut failures = Vec::new();
    let mut checks = 0;
    let all = witnesses();
    for branch in contexts {
        let (_, d) = all.iter().find(|(b, _)| *b == branch).expect("witness exists");
        let inv = validate(d).expect("elliptic");
        let report_at = |a: BigRational| {
            classify_with_weights(&inv, d.case(), Some(&base.clone().with_extended(a))).expect("classes")
        };
        for n in 0..=2i64 {
            let wall = BigRational::from_integer(n.into());
            let below = report_at(&wall - &eps);
            let above = report_at(&wall + &eps);
            let special = report_at(wall.clone());
            for ((lo, hi), sp) in below.fibers.iter().zip(&above.fibers).zip(&special.fibers) {
                let multi = matches!((lo.surface, lo.degenerate), (III | I(2), false) | (I(3) | IV, true));
                if !multi {
                    continue;
                }
                checks += 1;
                if (lo.ss, lo.s) != (hi.ss, hi.s) {
                    failures.push(format!("{branch} n={n}: classes differ across the wall"));
                }
                let bl: Vec<Bidegree> = lo.components.iter().filter_map(|c| c.bidegree).collect();
                let bh: Vec<Bidegree> = hi.components.iter().filter_map(|c| c.bidegree).collect();
                let shifted = bl.len() == 2
                    && bh.len() == 2
                    && bl
                        .iter()
                        .zip(&bh)
                        .all(|(x, y)| y.dplus == x.dplus - 1 && y.dminus == x.dminus + 1);
                if !shifted {
                    failures.push(format!("{branch} n={n}: bidegrees {bl:?} -> {bh:?}"));
                }
                let want = match sp.surface {
                    I(2) => (l, l - pt),
                    _ => (l + pt, l),
                };
                if (sp.ss, sp.s) != want {
                    failures.push(format!("{branch} n={n}: special pair ({}, {})", sp.ss, sp.s));
                }
            }
        }
    }
    outcome(
        failures.is_empty() && checks > 0,
        format!(
            "{checks} fiber/wall checks{}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn sheaf(length: u8, dplus: i64, dminus: i64) -> SheafClass {
    SheafClass {
        length,
        bidegree: Bidegree::new(dplus, dminus),
    }
}

/// Random weights in `[0,1)` with integral sum.
fn random_weights(rng: &mut ChaCha8Rng) -> ParabolicWeights {
    loop {
        let den = rng.gen_range(1..=12);
        let mut r = || rat(rng.gen_range(0..den), den);
        let (p1, m1, p2) = (r(), r(), r());
        let partial = &p1 + &m1 + &p2;
        let k = partial.ceil();
        let m2 = &k - &partial;
        if let Ok(w) = ParabolicWeights::new(p1, m1, p2, m2) {
            return w;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let generic = ParabolicWeights::from_ratios([(3, 10), (1, 5), (3, 10), (1, 5)]).expect("valid");
    let special = ParabolicWeights::from_ratios([(1, 2), (0, 1), (1, 2), (0, 1)]).expect("valid");
    let table = [
        (sheaf(0, 0, 1), &generic, Stability::Stable),
        (sheaf(0, 1, 0), &generic, Stability::Stable),
        (sheaf(0, 1, 0), &special, Stability::StrictlySemistable),
        (sheaf(0, -1, 2), &special, Stability::StrictlySemistable),
    ];
    for (sc, w, want) in table {
        let got = is_semistable(&sc, w);
        if got.as_ref().ok() != Some(&want) {
            failures.push(format!("{} at α₊={}: {got:?}", sc.bidegree, w.alpha_plus()));
        }
    }
    for dplus in -4..=4 {
        for w in [&generic, &special] {
            let sc = sheaf(2, dplus, -1 - dplus);
            if is_semistable(&sc, w) == Ok(Stability::Stable) {
                failures.push(format!("length-2 sheaf {} stable", sc.bidegree));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pairs = 0;
    while pairs < HECKE_PAIRS {
        let w = random_weights(&mut rng);
        let length = rng.gen_range(0..=2u8);
        let dplus = rng.gen_range(-3..=3);
        let sc = sheaf(length, dplus, 2 - i64::from(length) - w.degree_class() - dplus);
        let s = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let before = is_semistable(&sc, &w).expect("consistent");
        let after = if let Ok((hw, _)) = hecke(&w, s) {
            is_semistable(&hecke_sheaf(&sc, s), &hw)
        } else if let Ok((iw, _)) = inverse_hecke(&w, s) {
            let mut lowered = sc;
            match s {
                Sign::Plus => lowered.bidegree.dplus -= 1,
                Sign::Minus => lowered.bidegree.dminus -= 1,
            }
            is_semistable(&lowered, &iw)
        } else {
            continue;
        };
        pairs += 1;
        if after.as_ref().ok() != Some(&before) {
            failures.push(format!("Hecke {s} changes stability of {} at {:?}", sc.bidegree, w));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "table and {pairs} Hecke pairs{}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        ("table reproduction, (2,2) semisimple", criterion_1),
        ("theorem branches and degenerate classes", criterion_2),
        ("oracle equivalence on random samples", criterion_3),
        ("T1 factorization identity", criterion_4),
        ("Euler sum and companion admissibility", criterion_5),
        ("wall-crossing", criterion_6),
        ("stability table and Hecke invariance", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        println!(
            "{} criterion {}: {name} [{:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
