//! Parameter builders from invariants, exact witnesses for every decision
//! branch, random on-stratum families and generic random sampling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::exact::{Exact, Gaussian};
use crate::polar::{validate, CaseTag, PolarData};

/// Free parameters not fixed by the invariants.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Offsets {
    /// `a₊` (or `a₋₄`, `b₋₆`).
    pub first: Exact,
    /// `b₊` (or `b₋₄`).
    pub second: Exact,
    /// Sum of the first pole's residue eigenvalues (`λ₊ + λ₋`, `a₋₂`, `b₋₂`).
    pub residue: Exact,
}

fn half(x: &Exact) -> Exact {
    x * &Exact::ratio(1, 2)
}

/// `(x₊, x₋)` with `x₊ + x₋ = sum` and `x₋ − x₊ = diff`.
fn split(sum: &Exact, diff: &Exact) -> (Exact, Exact) {
    (half(&(sum - diff)), half(&(sum + diff)))
}

fn build(case: CaseTag, p: Vec<(&str, Exact)>) -> PolarData {
    PolarData::new(case, p).expect("builder covers every parameter")
}

pub fn d22_ss(a: &Exact, b: &Exact, l: &Exact, m: &Exact, o: &Offsets) -> PolarData {
    let (lp, lm) = split(&o.residue, l);
    let (mp, mm) = split(&-&o.residue, m);
    build(
        CaseTag::D22Ss,
        vec![
            ("a_plus", o.first.clone()),
            ("a_minus", &o.first + a),
            ("b_plus", o.second.clone()),
            ("b_minus", &o.second + b),
            ("lambda_plus", lp),
            ("lambda_minus", lm),
            ("mu_plus", mp),
            ("mu_minus", mm),
        ],
    )
}

pub fn d22_sn(a: &Exact, l: &Exact, b_m3: &Exact, o: &Offsets) -> PolarData {
    let (lp, lm) = split(&o.residue, l);
    build(
        CaseTag::D22Sn,
        vec![
            ("a_plus", o.first.clone()),
            ("a_minus", &o.first + a),
            ("lambda_plus", lp),
            ("lambda_minus", lm),
            ("b_m4", o.second.clone()),
            ("b_m3", b_m3.clone()),
            ("b_m2", -&o.residue),
        ],
    )
}

pub fn d22_nn(a_m3: &Exact, b_m3: &Exact, o: &Offsets) -> PolarData {
    build(
        CaseTag::D22Nn,
        vec![
            ("a_m4", o.first.clone()),
            ("a_m3", a_m3.clone()),
            ("a_m2", o.residue.clone()),
            ("b_m4", o.second.clone()),
            ("b_m3", b_m3.clone()),
            ("b_m2", -&o.residue),
        ],
    )
}

pub fn d31_ss(a: &Exact, b: &Exact, l: &Exact, m: &Exact, o: &Offsets) -> PolarData {
    let (lp, lm) = split(&o.residue, l);
    let (mp, mm) = split(&-&o.residue, m);
    build(
        CaseTag::D31Ss,
        vec![
            ("a_plus", o.first.clone()),
            ("a_minus", &o.first + a),
            ("b_plus", o.second.clone()),
            ("b_minus", &o.second + b),
            ("lambda_plus", lp),
            ("lambda_minus", lm),
            ("mu_plus", mp),
            ("mu_minus", mm),
        ],
    )
}

pub fn d31_sn(a: &Exact, b: &Exact, l: &Exact, o: &Offsets) -> PolarData {
    let (lp, lm) = split(&o.residue, l);
    build(
        CaseTag::D31Sn,
        vec![
            ("a_plus", o.first.clone()),
            ("a_minus", &o.first + a),
            ("b_plus", o.second.clone()),
            ("b_minus", &o.second + b),
            ("lambda_plus", lp),
            ("lambda_minus", lm),
            ("b_m1", -&half(&o.residue)),
        ],
    )
}

/// `b₋₅ = Q/8`, `b₋₄ = o.second`, `b₋₃ = (R − b₋₄²)/4`.
fn nilpotent_31(q: &Exact, r: &Exact, o: &Offsets) -> Vec<(&'static str, Exact)> {
    vec![
        ("b_m6", o.first.clone()),
        ("b_m5", q * &Exact::ratio(1, 8)),
        ("b_m4", o.second.clone()),
        ("b_m3", &(r - &o.second.square()) * &Exact::ratio(1, 4)),
        ("b_m2", o.residue.clone()),
    ]
}

pub fn d31_ns(m: &Exact, q: &Exact, r: &Exact, o: &Offsets) -> PolarData {
    let (mp, mm) = split(&-&o.residue, m);
    let mut p = nilpotent_31(q, r, o);
    p.push(("mu_plus", mp));
    p.push(("mu_minus", mm));
    build(CaseTag::D31Ns, p)
}

pub fn d31_nn(q: &Exact, r: &Exact, o: &Offsets) -> PolarData {
    let mut p = nilpotent_31(q, r, o);
    p.push(("b_m1", -&half(&o.residue)));
    build(CaseTag::D31Nn, p)
}

fn e(k: i64) -> Exact {
    Exact::from_int(k)
}

fn q(n: i64, d: i64) -> Exact {
    Exact::ratio(n, d)
}

fn gi(re: i64, im: i64) -> Exact {
    Exact::from_ratios(re, 1, im, 1)
}

/// One exact witness per decision branch, keyed by branch identifier.
pub fn witnesses() -> Vec<(&'static str, PolarData)> {
    let o = Offsets {
        first: q(1, 3),
        second: q(-2, 5),
        residue: q(3, 7),
    };
    let z = Offsets::default();
    let i = Exact::i();
    let s3 = Exact::sqrt3();
    vec![
        ("d22-ss/iii+i1", d22_ss(&e(1), &q(1, 4), &e(1), &e(1), &z)),
        ("d22-ss/2ii", d22_ss(&e(1), &(&i * &q(1, 8)), &-&i, &e(1), &o)),
        ("d22-ss/ii+2i1-imaginary", d22_ss(&e(1), &i, &i, &e(1), &o)),
        ("d22-ss/ii+2i1", d22_ss(&e(1), &e(1), &q(-19, 4), &q(-49, 16), &o)),
        ("d22-ss/2i2", d22_ss(&e(1), &e(1), &e(0), &e(0), &z)),
        ("d22-ss/i2+2i1", d22_ss(&e(1), &e(1), &e(1), &e(1), &o)),
        ("d22-ss/4i1", d22_ss(&e(1), &e(1), &e(2), &e(1), &o)),
        ("d22-sn/ii+i1", d22_sn(&e(1), &e(3), &e(2), &z)),
        ("d22-sn/3i1", d22_sn(&e(1), &e(1), &e(1), &o)),
        ("d22-nn/2i1", d22_nn(&e(1), &e(1), &z)),
        ("d31-ss/iii+i1", d31_ss(&e(1), &e(2), &e(1), &e(1), &o)),
        ("d31-ss/iii+i1", d31_ss(&e(1), &gi(0, 2), &e(-1), &e(1), &o)),
        ("d31-ss/ii+i2", d31_ss(&e(1), &e(6), &e(-3), &e(-3), &o)),
        ("d31-ss/ii+i2", d31_ss(&e(1), &e(6), &e(-3), &e(3), &o)),
        ("d31-ss/i2+2i1", d31_ss(&e(1), &e(1), &e(1), &e(1), &o)),
        ("d31-ss/4i1", d31_ss(&e(1), &e(1), &e(2), &e(1), &o)),
        ("d31-ss/2ii", d31_ss(&e(1), &e(0), &(&i * &s3), &e(1), &o)),
        ("d31-ss/ii+2i1", d31_ss(&e(1), &e(1), &q(-1, 2), &i, &o)),
        ("d31-sn/iv", d31_sn(&e(1), &e(0), &e(0), &Offsets { second: e(1), ..z.clone() })),
        ("d31-sn/ii+i2", d31_sn(&e(1), &e(6), &e(6), &o)),
        ("d31-sn/i3+i1", d31_sn(&e(1), &e(1), &e(0), &o)),
        ("d31-sn/iii+i1", d31_sn(&e(1), &e(2), &e(-2), &o)),
        ("d31-sn/i2+2i1", d31_sn(&e(1), &e(1), &e(1), &o)),
        ("d31-ns/ii+i1", d31_ns(&e(1), &e(2), &e(3), &Offsets { second: e(1), ..z.clone() })),
        ("d31-ns/3i1", d31_ns(&e(1), &e(8), &e(1), &o)),
        ("d31-nn/iii", d31_nn(&e(1), &e(0), &o)),
        ("d31-nn/i2+i1", d31_nn(&e(1), &e(1), &o)),
    ]
}

/// Random Gaussian rational with `|num| ≤ max`, `1 ≤ den ≤ max` per part;
/// the imaginary part is zero unless `complex`.
pub fn random_value<R: Rng>(rng: &mut R, max: i64, complex: bool) -> Exact {
    let part = |rng: &mut R| {
        BigRational::new(
            BigInt::from(rng.gen_range(-max..=max)),
            BigInt::from(rng.gen_range(1..=max)),
        )
    };
    let re = part(rng);
    let im = if complex { part(rng) } else { BigRational::zero() };
    Exact::gaussian(Gaussian::new(re, im))
}

/// Parameter draw: mostly full range, sometimes small values so that
/// coincidences such as `L = ±M` occur with positive frequency.
pub fn draw<R: Rng>(rng: &mut R) -> Exact {
    let complex = rng.gen_bool(0.5);
    let max = if rng.gen_bool(0.25) { 2 } else { 20 };
    random_value(rng, max, complex)
}

fn draw_nonzero<R: Rng>(rng: &mut R) -> Exact {
    loop {
        let x = draw(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn draw_offsets<R: Rng>(rng: &mut R) -> Offsets {
    Offsets {
        first: draw(rng),
        second: draw(rng),
        residue: draw(rng),
    }
}

fn sign<R: Rng>(rng: &mut R) -> Exact {
    if rng.gen_bool(0.5) {
        e(1)
    } else {
        e(-1)
    }
}

/// Solves one parameter from a lookup of the others.
type Solver = dyn Fn(&dyn Fn(&str) -> Exact) -> Exact;

/// Random configuration of `case`: every free parameter drawn, the residue
/// condition solved for one designated parameter. May be non-elliptic.
pub fn random_params<R: Rng>(case: CaseTag, rng: &mut R) -> PolarData {
    let mut vals: Vec<(&str, Exact)> = case.param_names().iter().map(|n| (*n, draw(rng))).collect();
    let set = |vals: &mut Vec<(&str, Exact)>, name: &str, f: &Solver| {
        let snapshot = vals.clone();
        let get = |k: &str| snapshot.iter().find(|(n, _)| *n == k).expect("known").1.clone();
        let v = f(&get);
        vals.iter_mut().find(|(n, _)| *n == name).expect("known").1 = v;
    };
    match case {
        CaseTag::D22Ss | CaseTag::D31Ss => set(&mut vals, "mu_minus", &|g| {
            -&(&(&g("lambda_plus") + &g("lambda_minus")) + &g("mu_plus"))
        }),
        CaseTag::D22Sn => set(&mut vals, "b_m2", &|g| -&(&g("lambda_plus") + &g("lambda_minus"))),
        CaseTag::D22Nn => set(&mut vals, "b_m2", &|g| -&g("a_m2")),
        CaseTag::D31Sn => set(&mut vals, "b_m1", &|g| {
            -&half(&(&g("lambda_plus") + &g("lambda_minus")))
        }),
        CaseTag::D31Ns => set(&mut vals, "b_m2", &|g| -&(&g("mu_plus") + &g("mu_minus"))),
        CaseTag::D31Nn => set(&mut vals, "b_m1", &|g| -&half(&g("b_m2"))),
    }
    build(case, vals)
}

/// Random elliptic configuration; returns it with the number of rejected
/// non-elliptic draws.
pub fn random_elliptic<R: Rng>(case: CaseTag, rng: &mut R) -> (PolarData, usize) {
    let mut rejected = 0;
    loop {
        let d = random_params(case, rng);
        if validate(&d).is_ok() {
            return (d, rejected);
        }
        rejected += 1;
    }
}

/// Random point on the stratum of `branch`, or `None` for an unknown
/// branch. Draws that leave the stratum's open conditions (e.g. land on a
/// smaller stratum, or become non-elliptic) are possible; callers check the
/// branch the classifier reports.
pub fn stratum_sample<R: Rng>(branch: &str, rng: &mut R) -> Option<PolarData> {
    let o = draw_offsets(rng);
    let (a, b, l, m) = (draw_nonzero(rng), draw_nonzero(rng), draw_nonzero(rng), draw_nonzero(rng));
    let s = sign(rng);
    let i = Exact::i();
    let zero = Exact::zero();
    Some(match branch {
        "d22-ss/iii+i1" => {
            let l = &s * &m;
            let b = &(&l * &m) / &(&e(4) * &a);
            d22_ss(&a, &b, &l, &m, &o)
        }
        "d22-ss/2ii" => {
            let l = &(&s * &i) * &m;
            let b = &m.pow(3) / &(&(&e(8) * &a) * &l);
            d22_ss(&a, &b, &l, &m, &o)
        }
        "d22-ss/ii+2i1-imaginary" => {
            // L = ±iM, AB = ±iM².
            let l = &(&s * &i) * &m;
            let b = &(&(&s * &i) * &m.square()) / &a;
            d22_ss(&a, &b, &l, &m, &o)
        }
        "d22-ss/ii+2i1" => {
            // Δ is homogeneous under (AB, L, M) ↦ (k²AB, kL, kM).
            let k = &l;
            let b = &k.square() / &a;
            d22_ss(&a, &b, &(k * &q(-19, 4)), &(k * &q(-49, 16)), &o)
        }
        "d22-ss/2i2" => d22_ss(&a, &b, &zero, &zero, &o),
        "d22-ss/i2+2i1" => d22_ss(&a, &b, &(&s * &m), &m, &o),
        "d22-ss/4i1" => d22_ss(&a, &b, &l, &m, &o),
        "d22-sn/ii+i1" => {
            let b3 = &(&e(2) * &l.pow(3)) / &(&e(27) * &a);
            d22_sn(&a, &l, &b3, &o)
        }
        "d22-sn/3i1" => d22_sn(&a, &l, &b, &o),
        "d22-nn/2i1" => d22_nn(&a, &b, &o),
        "d31-ss/iii+i1" => {
            // B² = 4sAM with L = sM.
            let a = &b.square() / &(&(&e(4) * &s) * &m);
            d31_ss(&a, &b, &(&s * &m), &m, &o)
        }
        "d31-ss/ii+i2" => {
            // B² = −12sAM with L = sM.
            let a = &b.square() / &(&(&e(-12) * &s) * &m);
            d31_ss(&a, &b, &(&s * &m), &m, &o)
        }
        "d31-ss/i2+2i1" => d31_ss(&a, &b, &(&s * &m), &m, &o),
        "d31-ss/4i1" => d31_ss(&a, &b, &l, &m, &o),
        "d31-ss/2ii" => {
            let l = &(&(&s * &i) * &Exact::sqrt3()) * &m;
            d31_ss(&a, &zero, &l, &m, &o)
        }
        "d31-ss/ii+2i1" => {
            // Δ = 0 is invariant under (A, B, L, M) ↦ (μA, νB, ν²/μ·L, ν²/μ·M).
            let (mu, nu) = (&a, &b);
            let k = &nu.square() / mu;
            d31_ss(mu, nu, &(&k * &q(-1, 2)), &(&k * &i), &o)
        }
        "d31-sn/iv" => d31_sn(&a, &zero, &zero, &o),
        "d31-sn/ii+i2" => {
            let a = &b.square() / &(&e(6) * &l);
            d31_sn(&a, &b, &l, &o)
        }
        "d31-sn/i3+i1" => d31_sn(&a, &b, &zero, &o),
        "d31-sn/iii+i1" => {
            let a = &b.square() / &(&e(-2) * &l);
            d31_sn(&a, &b, &l, &o)
        }
        "d31-sn/i2+2i1" => d31_sn(&a, &b, &l, &o),
        "d31-ns/ii+i1" => {
            // 27M²Q² = 4R³ with R = 3k², Q = 2k³/M.
            let k = &l;
            let r = &e(3) * &k.square();
            let qq = &(&e(2) * &k.pow(3)) / &m;
            d31_ns(&m, &qq, &r, &o)
        }
        "d31-ns/3i1" => d31_ns(&m, &a, &b, &o),
        "d31-nn/iii" => d31_nn(&a, &zero, &o),
        "d31-nn/i2+i1" => d31_nn(&a, &b, &o),
        _ => return None,
    })
}
