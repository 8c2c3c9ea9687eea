//! Parabolic weights: Hecke reduction to degree class 1, genericity, stable
//! bidegrees and the per-fiber Hitchin class tables.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{rational_from_json, rational_to_json};
use crate::kodaira::{GrothClass, KodairaType};
use crate::polar::CaseTag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn in_unit_interval(x: &BigRational) -> bool {
    !x.is_negative() && *x < BigRational::one()
}

/// The four weights `α_i^j` (`i ∈ {+,−}`, `j ∈ {1,2}`), each in `[0,1)`,
/// plus an optional unrestricted `α₊` used for wall-crossing studies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicWeights {
    pub p1: BigRational,
    pub m1: BigRational,
    pub p2: BigRational,
    pub m2: BigRational,
    pub extended_alpha_plus: Option<BigRational>,
}

impl ParabolicWeights {
    pub fn new(p1: BigRational, m1: BigRational, p2: BigRational, m2: BigRational) -> Result<Self> {
        for (name, x) in [("p1", &p1), ("m1", &m1), ("p2", &p2), ("m2", &m2)] {
            if !in_unit_interval(x) {
                return Err(Error::InvalidWeights(format!("{name} = {x} is outside [0,1)")));
            }
        }
        let w = ParabolicWeights {
            p1,
            m1,
            p2,
            m2,
            extended_alpha_plus: None,
        };
        if !w.total().is_integer() {
            return Err(Error::InvalidWeights(format!("weight sum {} is not an integer", w.total())));
        }
        Ok(w)
    }

    /// Weights `(p1, m1, p2, m2)` given as `(num, den)` pairs.
    pub fn from_ratios(r: [(i64, i64); 4]) -> Result<Self> {
        let [a, b, c, d] = r.map(|(n, d)| rat(n, d));
        ParabolicWeights::new(a, b, c, d)
    }

    pub fn with_extended(mut self, alpha_plus: BigRational) -> Self {
        self.extended_alpha_plus = Some(alpha_plus);
        self
    }

    fn total(&self) -> BigRational {
        &self.p1 + &self.m1 + &self.p2 + &self.m2
    }

    /// `d` with the weights in `W_d`.
    pub fn degree_class(&self) -> i64 {
        self.total().to_integer().to_i64().expect("degree class fits")
    }

    pub fn alpha_plus(&self) -> BigRational {
        &self.p1 + &self.p2
    }

    pub fn alpha_minus(&self) -> BigRational {
        &self.m1 + &self.m2
    }

    pub fn alpha(&self, s: Sign) -> BigRational {
        match s {
            Sign::Plus => self.alpha_plus(),
            Sign::Minus => self.alpha_minus(),
        }
    }

    /// Weights with `α₊²` and `α₋²` exchanged, so that `α₊ = α₊¹ + α₋²`.
    pub fn crossed(&self) -> Self {
        ParabolicWeights {
            p2: self.m2.clone(),
            m2: self.p2.clone(),
            ..self.clone()
        }
    }

    /// At a pole with non-semisimple residue the two weights must agree.
    pub fn check_for_case(&self, case: CaseTag) -> Result<()> {
        if case.nilpotent_pole(1) && self.p1 != self.m1 {
            return Err(Error::InvalidWeights(format!(
                "pole 1 of {case} has non-semisimple residue, needs p1 = m1"
            )));
        }
        if case.nilpotent_pole(2) && self.p2 != self.m2 {
            return Err(Error::InvalidWeights(format!(
                "pole 2 of {case} has non-semisimple residue, needs p2 = m2"
            )));
        }
        Ok(())
    }

    /// Parses `{"alpha": {"p1": r, "m1": r, "p2": r, "m2": r}, "extended_alpha_plus": r?}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let alpha = v
            .get("alpha")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Schema("weights need an \"alpha\" object".into()))?;
        let get = |k: &str| -> Result<BigRational> {
            let x = alpha
                .get(k)
                .ok_or_else(|| Error::Schema(format!("weights missing alpha.{k}")))?;
            rational_from_json(x).map_err(|e| Error::Schema(format!("alpha.{k}: {e}")))
        };
        if let Some(k) = alpha.keys().find(|k| !["p1", "m1", "p2", "m2"].contains(&k.as_str())) {
            return Err(Error::Schema(format!("unknown weight {k:?}")));
        }
        let mut w = ParabolicWeights::new(get("p1")?, get("m1")?, get("p2")?, get("m2")?)?;
        if let Some(x) = v.get("extended_alpha_plus") {
            if !x.is_null() {
                let r = rational_from_json(x)
                    .map_err(|e| Error::Schema(format!("extended_alpha_plus: {e}")))?;
                w = w.with_extended(r);
            }
        }
        Ok(w)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::json!({
            "alpha": {
                "p1": rational_to_json(&self.p1),
                "m1": rational_to_json(&self.m1),
                "p2": rational_to_json(&self.p2),
                "m2": rational_to_json(&self.m2),
            }
        });
        if let Some(x) = &self.extended_alpha_plus {
            v["extended_alpha_plus"] = rational_to_json(x);
        }
        v
    }
}

/// One applied Hecke transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeTransform {
    pub sign: Sign,
    pub inverse: bool,
    /// Portion of the unit shift taken from (or added to) `α_i¹`.
    pub epsilon: BigRational,
}

/// `H_i`: lowers `α_i` by one, taking `ε = α_i¹` from the first weight and
/// `1 − ε` from the second. Requires `α_i ≥ 1`.
pub fn hecke(w: &ParabolicWeights, s: Sign) -> Result<(ParabolicWeights, HeckeTransform)> {
    if w.alpha(s) < BigRational::one() {
        return Err(Error::InvalidWeights(format!("H{s} needs alpha{s} >= 1")));
    }
    let mut out = w.clone();
    let (first, second) = match s {
        Sign::Plus => (&mut out.p1, &mut out.p2),
        Sign::Minus => (&mut out.m1, &mut out.m2),
    };
    let eps = first.clone();
    *second = &*second - (BigRational::one() - &eps);
    *first = BigRational::zero();
    debug_assert!(in_unit_interval(second));
    Ok((
        out,
        HeckeTransform {
            sign: s,
            inverse: false,
            epsilon: eps,
        },
    ))
}

/// `H_i⁻¹`: raises `α_i` by one, splitting the result evenly over both
/// weights. Requires `α_i < 1` and degree class below 3.
pub fn inverse_hecke(w: &ParabolicWeights, s: Sign) -> Result<(ParabolicWeights, HeckeTransform)> {
    if w.alpha(s) >= BigRational::one() || w.degree_class() >= 3 {
        return Err(Error::InvalidWeights(format!("H{s}^-1 not applicable")));
    }
    let half = (w.alpha(s) + BigRational::one()) / BigInt::from(2);
    let mut out = w.clone();
    let (first, second) = match s {
        Sign::Plus => (&mut out.p1, &mut out.p2),
        Sign::Minus => (&mut out.m1, &mut out.m2),
    };
    let eps = &half - &*first;
    *first = half.clone();
    *second = half;
    Ok((
        out,
        HeckeTransform {
            sign: s,
            inverse: true,
            epsilon: eps,
        },
    ))
}

/// Every Hecke reduction of `w` into `W₁`. Two alternatives exist only in
/// `W₂` with `α₊ = α₋ = 1`.
pub fn hecke_reductions(w: &ParabolicWeights) -> Vec<(ParabolicWeights, Vec<HeckeTransform>)> {
    let one = BigRational::one();
    match w.degree_class() {
        0 => {
            let (v, h) = inverse_hecke(w, Sign::Plus).expect("W0 lifts");
            vec![(v, vec![h])]
        }
        1 => vec![(w.clone(), Vec::new())],
        2 => {
            let mut out = Vec::new();
            for s in [Sign::Plus, Sign::Minus] {
                if w.alpha(s) >= one {
                    let (v, h) = hecke(w, s).expect("checked");
                    out.push((v, vec![h]));
                }
            }
            out
        }
        3 => {
            let (v, h1) = hecke(w, Sign::Plus).expect("W3 has alpha+ > 1");
            let (v, h2) = hecke(&v, Sign::Minus).expect("then alpha- > 1");
            vec![(v, vec![h1, h2])]
        }
        d => unreachable!("degree class {d}"),
    }
}

/// Canonical reduction into `W₁` (prefers `H₊`).
pub fn hecke_reduce(w: &ParabolicWeights) -> (ParabolicWeights, Vec<HeckeTransform>) {
    hecke_reductions(w).swap_remove(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum WeightClass {
    Generic,
    /// `α₊` equals the integer `wall`.
    Special { wall: i64 },
}

/// `α₊` governing stability: the extended value when present, otherwise
/// `α₊` after Hecke reduction to `W₁`.
pub fn effective_alpha_plus(w: &ParabolicWeights) -> BigRational {
    match &w.extended_alpha_plus {
        Some(x) => x.clone(),
        None => hecke_reduce(w).0.alpha_plus(),
    }
}

pub fn weight_class(w: &ParabolicWeights) -> WeightClass {
    let a = effective_alpha_plus(w);
    if a.is_integer() {
        WeightClass::Special {
            wall: a.to_integer().to_i64().expect("wall fits"),
        }
    } else {
        WeightClass::Generic
    }
}

/// `⌈α₊⌉ − 1` for extended weights, zero otherwise.
pub fn walls_crossed(w: &ParabolicWeights) -> i64 {
    w.extended_alpha_plus
        .as_ref()
        .map_or(0, |a| a.ceil().to_integer().to_i64().expect("fits") - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub dplus: i64,
    pub dminus: i64,
}

impl Bidegree {
    pub const fn new(dplus: i64, dminus: i64) -> Self {
        Bidegree { dplus, dminus }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dplus, self.dminus)
    }
}

impl Serialize for Bidegree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.dplus, self.dminus].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bidegree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[i64; 2]>::deserialize(d)?;
        Ok(Bidegree::new(a, b))
    }
}

/// The two bidegrees of stable invertible sheaves for `α₊ ∉ ℤ`:
/// `(1 − c, c)` and `(2 − c, c − 1)` with `c = ⌈α₊⌉`.
pub fn stable_bidegrees(alpha_plus: &BigRational) -> Result<(Bidegree, Bidegree)> {
    if alpha_plus.is_integer() {
        return Err(Error::OnWall(alpha_plus.to_string()));
    }
    let c = alpha_plus.ceil().to_integer().to_i64().expect("fits");
    Ok((Bidegree::new(1 - c, c), Bidegree::new(2 - c, c - 1)))
}

/// Length and bidegree of a spectral sheaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SheafClass {
    pub length: u8,
    pub bidegree: Bidegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    StrictlySemistable,
    Unstable,
}

/// `(α₊, α₋, d)` as used for stability: extended weights live in `W₁`.
fn stability_data(w: &ParabolicWeights) -> (BigRational, BigRational, i64) {
    match &w.extended_alpha_plus {
        Some(a) => (a.clone(), BigRational::one() - a, 1),
        None => (w.alpha_plus(), w.alpha_minus(), w.degree_class()),
    }
}

/// Stable iff `δᵢ + αᵢ > 0` for both signs; strictly semistable iff `≥ 0`
/// with equality somewhere. Requires `δ₊ + δ₋ = 2 − l − d`.
pub fn is_semistable(sc: &SheafClass, w: &ParabolicWeights) -> Result<Stability> {
    let (ap, am, d) = stability_data(w);
    let Bidegree { dplus, dminus } = sc.bidegree;
    let expected = 2 - i64::from(sc.length) - d;
    if sc.length > 2 || dplus + dminus != expected {
        return Err(Error::InconsistentBookkeeping(format!(
            "length {} bidegree {} in W{d}: need δ₊+δ₋ = {expected}",
            sc.length, sc.bidegree
        )));
    }
    let xp = BigRational::from_integer(dplus.into()) + ap;
    let xm = BigRational::from_integer(dminus.into()) + am;
    let out = if xp.is_negative() || xm.is_negative() {
        Stability::Unstable
    } else if xp.is_zero() || xm.is_zero() {
        Stability::StrictlySemistable
    } else {
        Stability::Stable
    };
    debug_assert!(sc.length != 2 || out != Stability::Stable);
    Ok(out)
}

/// Action of `H_i` on a sheaf class: `δᵢ` rises by one.
pub fn hecke_sheaf(sc: &SheafClass, s: Sign) -> SheafClass {
    let mut out = *sc;
    match s {
        Sign::Plus => out.bidegree.dplus += 1,
        Sign::Minus => out.bidegree.dminus += 1,
    }
    out
}

/// One stratum of a Hitchin fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub class: GrothClass,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bidegree: Option<Bidegree>,
    pub stable: bool,
}

impl Component {
    fn new(class: GrothClass, bidegree: Option<Bidegree>, stable: bool) -> Self {
        Component {
            class,
            bidegree,
            stable,
        }
    }
}

/// A singular Hitchin fiber with its semistable and stable classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularFiberEntry {
    /// Fiber type of the compactified elliptic surface.
    pub surface: KodairaType,
    /// Set exactly when the Hitchin fiber is compact.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kodaira: Option<KodairaType>,
    pub ss: GrothClass,
    pub s: GrothClass,
    pub components: Vec<Component>,
    pub compact: bool,
    /// Fiber through the non-semisimple simple pole of a `(3,1)` configuration.
    pub degenerate: bool,
}

/// Hitchin classes of a singular fiber of type `fiber`.
///
/// With `weights = None` the generic-weight classes are reported without
/// bidegree labels. `crossed` selects `α₊ = α₊¹ + α₋²` for the fiber.
pub fn hitchin_class(
    fiber: KodairaType,
    weights: Option<&ParabolicWeights>,
    degenerate: bool,
    crossed: bool,
) -> Result<SingularFiberEntry> {
    use KodairaType::*;
    let (l, pt, cstar) = (GrothClass::L, GrothClass::PT, GrothClass::CSTAR);
    let fixed = |class: GrothClass| vec![Component::new(class, None, true)];
    // Weight-independent entries.
    let components = match (fiber, degenerate) {
        (I(1), _) => Some(fixed(l)),
        (II, _) => Some(fixed(l + pt)),
        (I(2), true) => Some(fixed(cstar)),
        (III, true) => Some(fixed(l)),
        (III, false) | (I(2), false) | (I(3), true) | (IV, true) => None,
        (other, _) => return Err(Error::UnsupportedFiber(other.name())),
    };
    let components = match components {
        Some(c) => c,
        None => {
            // Generic pair of stable strata plus points, or the wall data.
            let (stratum, points, special_s) = match fiber {
                III => (l, 1, l),
                I(2) => (cstar, 2, cstar),
                I(3) => (cstar, 1, l),
                _ => (l, 0, l),
            };
            let alpha = weights.map(|w| {
                if w.extended_alpha_plus.is_some() {
                    effective_alpha_plus(w)
                } else if crossed {
                    effective_alpha_plus(&w.crossed())
                } else {
                    effective_alpha_plus(w)
                }
            });
            match alpha {
                Some(a) if a.is_integer() => {
                    let n = a.to_integer().to_i64().expect("fits");
                    // Semistable class at the wall is 𝕃 + Pt except for I₂.
                    let ss = if fiber == I(2) { l } else { l + pt };
                    vec![
                        Component::new(special_s, Some(Bidegree::new(1 - n, n)), true),
                        Component::new(ss - special_s, None, false),
                    ]
                }
                Some(a) => {
                    let (b1, b2) = stable_bidegrees(&a)?;
                    let mut c = vec![
                        Component::new(stratum, Some(b1), true),
                        Component::new(stratum, Some(b2), true),
                    ];
                    c.extend((0..points).map(|_| Component::new(pt, None, true)));
                    c
                }
                None => {
                    let mut c = vec![Component::new(stratum, None, true), Component::new(stratum, None, true)];
                    c.extend((0..points).map(|_| Component::new(pt, None, true)));
                    c
                }
            }
        }
    };
    let ss: GrothClass = components.iter().map(|c| c.class).sum();
    let s: GrothClass = components.iter().filter(|c| c.stable).map(|c| c.class).sum();
    let compact = !degenerate;
    Ok(SingularFiberEntry {
        surface: fiber,
        kodaira: compact.then_some(fiber),
        ss,
        s,
        components,
        compact,
        degenerate,
    })
}
