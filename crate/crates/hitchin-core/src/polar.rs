//! Pole configurations, their parameter records, residue conditions, derived
//! invariants and the coefficients of the spectral pencil.
//!
//! The seven configurations are named by pole orders `(2,2)` or `(3,1)` and
//! by the residue type at each pole: `S`/`s` regular semisimple, `N`/`n`
//! non-semisimple (upper case for the first pole).

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, NonEllipticReason, Result};
use crate::exact::{exact_from_json, exact_to_json, Exact};
use crate::numerics::Poly1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "d22-ss")]
    D22Ss,
    #[serde(rename = "d22-sn")]
    D22Sn,
    #[serde(rename = "d22-nn")]
    D22Nn,
    #[serde(rename = "d31-ss")]
    D31Ss,
    #[serde(rename = "d31-sn")]
    D31Sn,
    #[serde(rename = "d31-ns")]
    D31Ns,
    #[serde(rename = "d31-nn")]
    D31Nn,
}

impl CaseTag {
    pub const ALL: [CaseTag; 7] = [
        CaseTag::D22Ss,
        CaseTag::D22Sn,
        CaseTag::D22Nn,
        CaseTag::D31Ss,
        CaseTag::D31Sn,
        CaseTag::D31Ns,
        CaseTag::D31Nn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::D22Ss => "d22-ss",
            CaseTag::D22Sn => "d22-sn",
            CaseTag::D22Nn => "d22-nn",
            CaseTag::D31Ss => "d31-ss",
            CaseTag::D31Sn => "d31-sn",
            CaseTag::D31Ns => "d31-ns",
            CaseTag::D31Nn => "d31-nn",
        }
    }

    /// Pole orders `(2,2)`.
    pub fn is_22(self) -> bool {
        matches!(self, CaseTag::D22Ss | CaseTag::D22Sn | CaseTag::D22Nn)
    }

    /// Non-semisimple residue at the simple pole of a `(3,1)` configuration.
    pub fn is_degenerate(self) -> bool {
        matches!(self, CaseTag::D31Sn | CaseTag::D31Nn)
    }

    /// Parameter names, in storage order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            CaseTag::D22Ss => &[
                "a_plus", "a_minus", "lambda_plus", "lambda_minus", "b_plus", "b_minus", "mu_plus",
                "mu_minus",
            ],
            CaseTag::D22Sn => &[
                "a_plus", "a_minus", "lambda_plus", "lambda_minus", "b_m4", "b_m3", "b_m2",
            ],
            CaseTag::D22Nn => &["a_m4", "a_m3", "a_m2", "b_m4", "b_m3", "b_m2"],
            CaseTag::D31Ss => &[
                "a_plus", "a_minus", "b_plus", "b_minus", "lambda_plus", "lambda_minus", "mu_plus",
                "mu_minus",
            ],
            CaseTag::D31Sn => &[
                "a_plus", "a_minus", "b_plus", "b_minus", "lambda_plus", "lambda_minus", "b_m1",
            ],
            CaseTag::D31Ns => &["b_m6", "b_m5", "b_m4", "b_m3", "b_m2", "mu_plus", "mu_minus"],
            CaseTag::D31Nn => &["b_m6", "b_m5", "b_m4", "b_m3", "b_m2", "b_m1"],
        }
    }

    /// Upper bound on the number of singular fibers besides infinity.
    pub fn max_singular_fibers(self) -> usize {
        match self {
            CaseTag::D22Ss | CaseTag::D31Ss | CaseTag::D31Sn => 4,
            CaseTag::D22Sn | CaseTag::D31Ns => 3,
            CaseTag::D22Nn | CaseTag::D31Nn => 2,
        }
    }

    /// Whether the parabolic weights at pole `j ∈ {1, 2}` must coincide
    /// (non-semisimple residue there).
    pub fn nilpotent_pole(self, j: usize) -> bool {
        match j {
            1 => matches!(self, CaseTag::D22Nn | CaseTag::D31Ns | CaseTag::D31Nn),
            _ => matches!(
                self,
                CaseTag::D22Sn | CaseTag::D22Nn | CaseTag::D31Sn | CaseTag::D31Nn
            ),
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CaseTag::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown case {s:?}")))
    }
}

/// Parameters of one configuration, complete for its case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarData {
    case: CaseTag,
    values: Vec<Exact>,
}

impl PolarData {
    /// Builds from `(name, value)` pairs; every name of the case must appear
    /// exactly once.
    pub fn new<'a>(case: CaseTag, params: impl IntoIterator<Item = (&'a str, Exact)>) -> Result<Self> {
        let names = case.param_names();
        let mut values: Vec<Option<Exact>> = vec![None; names.len()];
        for (name, v) in params {
            let k = names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::Schema(format!("unknown parameter {name:?} for {case}")))?;
            if values[k].replace(v).is_some() {
                return Err(Error::Schema(format!("duplicate parameter {name:?}")));
            }
        }
        let values = values
            .into_iter()
            .zip(names)
            .map(|(v, n)| v.ok_or_else(|| Error::Schema(format!("missing parameter {n:?} for {case}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolarData { case, values })
    }

    pub fn case(&self) -> CaseTag {
        self.case
    }

    /// Parameter by name; panics on a name not belonging to the case.
    pub fn get(&self, name: &str) -> &Exact {
        let k = self
            .case
            .param_names()
            .iter()
            .position(|n| *n == name)
            .unwrap_or_else(|| panic!("{name} is not a parameter of {}", self.case));
        &self.values[k]
    }

    pub fn params(&self) -> impl Iterator<Item = (&'static str, &Exact)> {
        self.case.param_names().iter().copied().zip(self.values.iter())
    }

    /// Exchanges the two poles of a symmetric `(2,2)` configuration
    /// (`a ↔ b`, `λ ↔ μ`).
    pub fn swap_poles(&self) -> Result<PolarData> {
        let map: &[(&str, &str)] = match self.case {
            CaseTag::D22Ss => &[
                ("a_plus", "b_plus"),
                ("a_minus", "b_minus"),
                ("lambda_plus", "mu_plus"),
                ("lambda_minus", "mu_minus"),
                ("b_plus", "a_plus"),
                ("b_minus", "a_minus"),
                ("mu_plus", "lambda_plus"),
                ("mu_minus", "lambda_minus"),
            ],
            CaseTag::D22Nn => &[
                ("a_m4", "b_m4"),
                ("a_m3", "b_m3"),
                ("a_m2", "b_m2"),
                ("b_m4", "a_m4"),
                ("b_m3", "a_m3"),
                ("b_m2", "a_m2"),
            ],
            other => {
                return Err(Error::Schema(format!("{other} has no pole-swap symmetry")));
            }
        };
        PolarData::new(self.case, map.iter().map(|(to, from)| (*to, self.get(from).clone())))
    }

    /// Parses `{"case": .., "params": {..}}`. The `d22-ns` configuration is
    /// rewritten as `d22-sn` by exchanging the poles.
    pub fn from_json(v: &Value) -> Result<PolarData> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Schema("expected a JSON object".into()))?;
        let case = obj
            .get("case")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Schema("missing \"case\"".into()))?;
        let params = obj
            .get("params")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Schema("missing \"params\" object".into()))?;
        let mut parsed = Vec::with_capacity(params.len());
        for (k, val) in params {
            let x = exact_from_json(val).map_err(|e| Error::Schema(format!("parameter {k}: {e}")))?;
            parsed.push((k.as_str(), x));
        }
        if case == "d22-ns" {
            let rename = |k: &str| -> Result<&'static str> {
                Ok(match k {
                    "a_m4" => "b_m4",
                    "a_m3" => "b_m3",
                    "a_m2" => "b_m2",
                    "b_plus" => "a_plus",
                    "b_minus" => "a_minus",
                    "mu_plus" => "lambda_plus",
                    "mu_minus" => "lambda_minus",
                    other => return Err(Error::Schema(format!("unknown parameter {other:?} for d22-ns"))),
                })
            };
            let swapped = parsed
                .into_iter()
                .map(|(k, x)| Ok((rename(k)?, x)))
                .collect::<Result<Vec<_>>>()?;
            return PolarData::new(CaseTag::D22Sn, swapped);
        }
        PolarData::new(case.parse()?, parsed)
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self
            .params()
            .map(|(k, v)| (k.to_string(), exact_to_json(v)))
            .collect();
        serde_json::json!({ "case": self.case.name(), "params": params })
    }
}

/// Which of `L = M`, `L = −M` holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionParity {
    /// `L = M ≠ 0`.
    Plus,
    /// `L = −M ≠ 0`.
    Minus,
    /// `L = M = 0`.
    Both,
}

/// Exact quantities derived from [`PolarData`] that drive classification.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DerivedInvariants {
    pub a: Option<Exact>,
    pub b: Option<Exact>,
    pub l: Option<Exact>,
    pub m: Option<Exact>,
    pub q: Option<Exact>,
    pub r: Option<Exact>,
    /// `b_{-3}` for `(2,2)` configurations with a nilpotent second pole.
    pub b_m3: Option<Exact>,
    /// `a_{-3}` for the doubly nilpotent `(2,2)` configuration.
    pub a_m3: Option<Exact>,
    pub delta: Option<Exact>,
    pub delta0: Option<Exact>,
    pub delta1: Option<Exact>,
    /// `b₋ + b₊` for `(3,1)` configurations with semisimple first pole.
    pub b_sum: Option<Exact>,
    /// `λ₋ + λ₊` for `(3,1)` configurations with semisimple first pole.
    pub lambda_sum: Option<Exact>,
    pub has_section: bool,
    pub section_parity: Option<SectionParity>,
}

impl DerivedInvariants {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        let fields = [
            ("A", &self.a),
            ("B", &self.b),
            ("L", &self.l),
            ("M", &self.m),
            ("Q", &self.q),
            ("R", &self.r),
            ("a_m3", &self.a_m3),
            ("b_m3", &self.b_m3),
            ("delta", &self.delta),
            ("delta0", &self.delta0),
            ("delta1", &self.delta1),
            ("b_sum", &self.b_sum),
            ("lambda_sum", &self.lambda_sum),
        ];
        for (k, v) in fields {
            if let Some(x) = v {
                m.insert(k.into(), exact_to_json(x));
            }
        }
        m.insert("has_section".into(), Value::Bool(self.has_section));
        if let Some(p) = self.section_parity {
            m.insert("section_parity".into(), serde_json::to_value(p).expect("serializable"));
        }
        Value::Object(m)
    }

    fn req(x: &Option<Exact>, what: &str) -> Exact {
        x.clone().unwrap_or_else(|| panic!("invariant {what} not available for this case"))
    }

    pub fn a(&self) -> Exact {
        Self::req(&self.a, "A")
    }
    pub fn b(&self) -> Exact {
        Self::req(&self.b, "B")
    }
    pub fn l(&self) -> Exact {
        Self::req(&self.l, "L")
    }
    pub fn m(&self) -> Exact {
        Self::req(&self.m, "M")
    }
    pub fn q(&self) -> Exact {
        Self::req(&self.q, "Q")
    }
    pub fn r(&self) -> Exact {
        Self::req(&self.r, "R")
    }
    pub fn delta(&self) -> Exact {
        Self::req(&self.delta, "delta")
    }
}

fn n(k: i64) -> Exact {
    Exact::from_int(k)
}

fn residue_check(case: CaseTag, condition: &'static str, value: Exact) -> Result<()> {
    if value.is_zero() {
        Ok(())
    } else {
        Err(Error::ResidueViolation {
            case,
            condition,
            value: value.to_string(),
        })
    }
}

fn nonzero(x: &Exact, reason: NonEllipticReason) -> Result<()> {
    if x.is_zero() {
        Err(Error::NotElliptic(reason))
    } else {
        Ok(())
    }
}

fn section_parity(l: &Exact, m: &Exact) -> Option<SectionParity> {
    match (l == m, *l == -m) {
        (true, true) => Some(SectionParity::Both),
        (true, false) => Some(SectionParity::Plus),
        (false, true) => Some(SectionParity::Minus),
        (false, false) => None,
    }
}

/// Quartic invariants `(Δ₀, D)` of `c₄z⁴ + c₃z³ + c₂z² + c₁z + c₀`:
/// `Δ₀ = c₂² − 3c₃c₁ + 12c₄c₀` and
/// `D = 64c₄³c₀ − 16c₄²c₂² + 16c₄c₃²c₂ − 16c₄²c₃c₁ − 3c₃⁴`.
fn quartic_subdiscriminants(c: [&Exact; 5]) -> (Exact, Exact) {
    let [c0, c1, c2, c3, c4] = c;
    let delta0 = &(&c2.square() - &(&n(3) * &(c3 * c1))) + &(&n(12) * &(c4 * c0));
    let c4sq = c4.square();
    let d = &(&(&(&n(64) * &(&(&c4sq * c4) * c0)) - &(&n(16) * &(&c4sq * &c2.square())))
        + &(&n(16) * &(&(c4 * &c3.square()) * c2)))
        - &(&(&n(16) * &(&(&c4sq * c3) * c1)) + &(&n(3) * &c3.pow(4)));
    (delta0, d)
}

/// Checks the residue condition and ellipticity and computes the invariants.
pub fn validate(d: &PolarData) -> Result<DerivedInvariants> {
    let g = |k: &str| d.get(k).clone();
    let case = d.case();
    let mut inv = DerivedInvariants::default();
    match case {
        CaseTag::D22Ss | CaseTag::D31Ss => {
            let (lp, lm, mp, mm) = (g("lambda_plus"), g("lambda_minus"), g("mu_plus"), g("mu_minus"));
            residue_check(case, "λ₊+λ₋+μ₊+μ₋", &(&(&lp + &lm) + &mp) + &mm)?;
            let a = &g("a_minus") - &g("a_plus");
            let b = &g("b_minus") - &g("b_plus");
            let l = &lm - &lp;
            let m = &mm - &mp;
            nonzero(&a, NonEllipticReason::AZero)?;
            if case == CaseTag::D22Ss {
                nonzero(&b, NonEllipticReason::BZero)?;
                let ab = &a * &b;
                let lm_ = &l * &m;
                let (l2, m2) = (l.square(), m.square());
                // −256A³B³ + 192A²B²LM − 3AB(9L⁴ − 2L²M² + 9M⁴) + 4L³M³
                let quart = &(&(&n(9) * &l2.square()) - &(&n(2) * &(&l2 * &m2))) + &(&n(9) * &m2.square());
                let delta = &(&(&(&n(-256) * &ab.pow(3)) + &(&n(192) * &(&ab.square() * &lm_)))
                    - &(&n(3) * &(&ab * &quart)))
                    + &(&n(4) * &lm_.pow(3));
                // Quartic B²z⁴ + BMz³ − ALz − A².
                let (c4, c3, c1, c0) = (b.square(), &b * &m, -&(&a * &l), -&a.square());
                let (d0, d1) = quartic_subdiscriminants([&c0, &c1, &Exact::zero(), &c3, &c4]);
                inv.delta = Some(delta);
                inv.delta0 = Some(d0);
                inv.delta1 = Some(d1);
            } else {
                nonzero(&m, NonEllipticReason::MZero)?;
                let (l2, m2) = (l.square(), m.square());
                let b2 = b.square();
                let s = &l2 + &(&n(3) * &m2);
                // 48A⁴(L²+3M²)² + 64A³B²L(L²−9M²) + 24A²B⁴(L²+3M²) − B⁸
                let delta = &(&(&(&n(48) * &(&a.pow(4) * &s.square()))
                    + &(&n(64) * &(&(&(&a.pow(3) * &b2) * &l) * &(&l2 - &(&n(9) * &m2)))))
                    + &(&n(24) * &(&(&a.square() * &b2.square()) * &s)))
                    - &b2.pow(4);
                // Quartic 3A²z⁴ + 4ABz³ + (2AL+B²)z² − M².
                let c4 = &n(3) * &a.square();
                let c3 = &n(4) * &(&a * &b);
                let c2 = &(&n(2) * &(&a * &l)) + &b2;
                let (d0, d1) = quartic_subdiscriminants([&-&m2, &Exact::zero(), &c2, &c3, &c4]);
                inv.delta = Some(delta);
                inv.delta0 = Some(d0);
                inv.delta1 = Some(d1);
                inv.b_sum = Some(&g("b_minus") + &g("b_plus"));
                inv.lambda_sum = Some(&lm + &lp);
            }
            inv.section_parity = section_parity(&l, &m);
            inv.has_section = inv.section_parity.is_some();
            inv.a = Some(a);
            inv.b = Some(b);
            inv.l = Some(l);
            inv.m = Some(m);
        }
        CaseTag::D22Sn => {
            let (lp, lm) = (g("lambda_plus"), g("lambda_minus"));
            residue_check(case, "λ₊+λ₋+b₋₂", &(&lp + &lm) + &g("b_m2"))?;
            let a = &g("a_minus") - &g("a_plus");
            let l = &lm - &lp;
            let b3 = g("b_m3");
            nonzero(&a, NonEllipticReason::AZero)?;
            nonzero(&b3, NonEllipticReason::BM3Zero)?;
            // Cubic 2b₋₃z³ − ALz − A², Δ = 4A³b₋₃(2L³ − 27Ab₋₃).
            let delta = &(&n(4) * &(&a.pow(3) * &b3))
                * &(&(&n(2) * &l.pow(3)) - &(&n(27) * &(&a * &b3)));
            inv.delta0 = Some(&n(6) * &(&(&a * &b3) * &l));
            inv.delta = Some(delta);
            inv.a = Some(a);
            inv.l = Some(l);
            inv.b_m3 = Some(b3);
        }
        CaseTag::D22Nn => {
            residue_check(case, "a₋₂+b₋₂", &g("a_m2") + &g("b_m2"))?;
            let (a3, b3) = (g("a_m3"), g("b_m3"));
            nonzero(&(&a3 * &b3), NonEllipticReason::AM3BM3Zero)?;
            // Quadric b₋₃z² − a₋₃, discriminant 4a₋₃b₋₃.
            inv.delta = Some(&n(4) * &(&a3 * &b3));
            inv.a_m3 = Some(a3);
            inv.b_m3 = Some(b3);
        }
        CaseTag::D31Sn => {
            let (lp, lm) = (g("lambda_plus"), g("lambda_minus"));
            residue_check(case, "λ₊+λ₋+2b₋₁", &(&lp + &lm) + &(&n(2) * &g("b_m1")))?;
            let a = &g("a_minus") - &g("a_plus");
            let b = &g("b_minus") - &g("b_plus");
            let l = &lm - &lp;
            nonzero(&a, NonEllipticReason::AZero)?;
            // Quadric 3A²z² + 4ABz + (2AL+B²), Δ = 4A²(B² − 6AL).
            inv.delta = Some(&(&n(4) * &a.square()) * &(&b.square() - &(&n(6) * &(&a * &l))));
            inv.has_section = l.is_zero();
            inv.b_sum = Some(&g("b_minus") + &g("b_plus"));
            inv.lambda_sum = Some(&lm + &lp);
            inv.a = Some(a);
            inv.b = Some(b);
            inv.l = Some(l);
        }
        CaseTag::D31Ns | CaseTag::D31Nn => {
            let last = if case == CaseTag::D31Ns {
                let (mp, mm) = (g("mu_plus"), g("mu_minus"));
                residue_check(case, "b₋₂+μ₊+μ₋", &(&g("b_m2") + &mp) + &mm)?;
                let m = &mm - &mp;
                nonzero(&m, NonEllipticReason::MZero)?;
                Some(m)
            } else {
                residue_check(case, "b₋₂+2b₋₁", &g("b_m2") + &(&n(2) * &g("b_m1")))?;
                None
            };
            let q = &n(8) * &g("b_m5");
            let r = &g("b_m4").square() + &(&n(4) * &g("b_m3"));
            nonzero(&q, NonEllipticReason::QZero)?;
            match &last {
                // Cubic Qz³ + Rz² − M², Δ = M²(27M²Q² − 4R³).
                Some(m) => {
                    let m2 = m.square();
                    inv.delta = Some(&m2 * &(&(&n(27) * &(&m2 * &q.square())) - &(&n(4) * &r.pow(3))));
                    inv.delta0 = Some(r.square());
                }
                // Cubic Qz³ + Rz²: the nonzero root degenerates exactly when R = 0.
                None => inv.delta = Some(r.clone()),
            }
            inv.m = last;
            inv.q = Some(q);
            inv.r = Some(r);
        }
    }
    Ok(inv)
}

/// Coefficients of the spectral pencil in normal form.
///
/// For `(2,2)`: `χ = w² − (p₂z² + p₁z + p₀)w − (q₄z⁴ + … + q₀)` on the
/// chart around the first pole, with `t = q₂`. For `(3,1)`:
/// `χ = w² + (p₀z² + p₁z + p₂)w − (q₀z⁴ + … + q₄)` on the chart around the
/// simple pole, with `t = q₃`.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilCoeffs {
    pub p: [Exact; 3],
    pub q: [Exact; 5],
    /// Index of the `q` entry equal to the pencil parameter.
    pub t_slot: usize,
}

impl PencilCoeffs {
    /// `F` in `χ = w² + F(z)w + G(z)` on the working chart.
    pub fn w_coefficient(&self) -> Poly1 {
        let p = &self.p;
        if self.t_slot == 2 {
            Poly1::new(vec![-&p[0], -&p[1], -&p[2]])
        } else {
            Poly1::new(vec![p[2].clone(), p[1].clone(), p[0].clone()])
        }
    }

    /// `G` in `χ = w² + F(z)w + G(z)`, including the `t` term.
    pub fn constant_coefficient(&self) -> Poly1 {
        let q = &self.q;
        if self.t_slot == 2 {
            Poly1::new(q.iter().map(|c| -c).collect())
        } else {
            Poly1::new(q.iter().rev().map(|c| -c).collect())
        }
    }

    /// Coefficient of the `t`-carrying monomial in `χ` (`−t`).
    pub fn chi_t_coefficient(&self) -> Exact {
        -&self.q[self.t_slot]
    }
}

/// Reads off the pencil coefficients of `χ` at parameter `t`.
///
/// Precondition: `validate(d)` succeeded.
pub fn pencil_coefficients(d: &PolarData, t: &Exact) -> PencilCoeffs {
    let g = |k: &str| d.get(k).clone();
    let z = Exact::zero;
    // `f` is F and `c` is G without the t term, both ascending in z.
    let (f, c): ([Exact; 3], [Exact; 5]) = match d.case() {
        CaseTag::D22Ss => {
            let (ap, am, lp, lm) = (g("a_plus"), g("a_minus"), g("lambda_plus"), g("lambda_minus"));
            let (bp, bm, mp, mm) = (g("b_plus"), g("b_minus"), g("mu_plus"), g("mu_minus"));
            (
                [-&(&am + &ap), -&(&lm + &lp), &bm + &bp],
                [
                    &am * &ap,
                    &(&ap * &lm) + &(&am * &lp),
                    z(),
                    &(&bp * &mm) + &(&bm * &mp),
                    &bm * &bp,
                ],
            )
        }
        CaseTag::D22Sn => {
            let (ap, am, lp, lm) = (g("a_plus"), g("a_minus"), g("lambda_plus"), g("lambda_minus"));
            let (b4, b3, b2) = (g("b_m4"), g("b_m3"), g("b_m2"));
            (
                [-&(&am + &ap), b2.clone(), &n(2) * &b4],
                [
                    &am * &ap,
                    &(&ap * &lm) + &(&am * &lp),
                    z(),
                    &(&b4 * &b2) - &b3,
                    b4.square(),
                ],
            )
        }
        CaseTag::D22Nn => {
            let (a4, a3, a2) = (g("a_m4"), g("a_m3"), g("a_m2"));
            let (b4, b3, b2) = (g("b_m4"), g("b_m3"), g("b_m2"));
            (
                [-&(&n(2) * &a4), -&a2, &n(2) * &b4],
                [
                    a4.square(),
                    &(&a4 * &a2) - &a3,
                    z(),
                    &(&b4 * &b2) - &b3,
                    b4.square(),
                ],
            )
        }
        CaseTag::D31Ss | CaseTag::D31Sn => {
            let (ap, am, bp, bm) = (g("a_plus"), g("a_minus"), g("b_plus"), g("b_minus"));
            let (lp, lm) = (g("lambda_plus"), g("lambda_minus"));
            let c0 = if d.case() == CaseTag::D31Ss {
                &g("mu_minus") * &g("mu_plus")
            } else {
                g("b_m1").square()
            };
            (
                [&lm + &lp, &bm + &bp, &am + &ap],
                [
                    c0,
                    z(),
                    &(&(&ap * &lm) + &(&am * &lp)) + &(&bm * &bp),
                    &(&ap * &bm) + &(&am * &bp),
                    &am * &ap,
                ],
            )
        }
        CaseTag::D31Ns | CaseTag::D31Nn => {
            let (b6, b5, b4, b3, b2) = (g("b_m6"), g("b_m5"), g("b_m4"), g("b_m3"), g("b_m2"));
            let c0 = if d.case() == CaseTag::D31Ns {
                &g("mu_minus") * &g("mu_plus")
            } else {
                g("b_m1").square()
            };
            (
                [b2.clone(), b4.clone(), &n(2) * &b6],
                [
                    c0,
                    z(),
                    &(&b6 * &b2) - &b3,
                    &(&b6 * &b4) - &b5,
                    b6.square(),
                ],
            )
        }
    };
    if d.case().is_22() {
        // F = −(p₂z² + p₁z + p₀), G − tz² = −(q₄z⁴ + … + q₀).
        let [f0, f1, f2] = f;
        let [c0, c1, _, c3, c4] = c;
        PencilCoeffs {
            p: [-&f0, -&f1, -&f2],
            q: [-&c0, -&c1, t.clone(), -&c3, -&c4],
            t_slot: 2,
        }
    } else {
        // F = p₀z² + p₁z + p₂, G − tz = −(q₀z⁴ + q₁z³ + q₂z² + q₃z + q₄).
        let [f0, f1, f2] = f;
        let [c0, _, c2, c3, c4] = c;
        PencilCoeffs {
            p: [f2, f1, f0],
            q: [-&c4, -&c3, -&c2, t.clone(), -&c0],
            t_slot: 3,
        }
    }
}
