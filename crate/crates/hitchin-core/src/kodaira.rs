//! Kodaira fiber types, their Euler numbers and Grothendieck classes, and
//! the companion configurations allowed next to a given fiber at infinity
//! on a rational elliptic surface.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Singular fiber type of an elliptic fibration.
///
/// `E6`/`E7`/`E8` are the affine Dynkin names of `IV*`/`III*`/`II*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    /// `I_n`, `n ≥ 1`.
    I(u32),
    /// `I_n*`.
    IStar(u32),
    II,
    III,
    IV,
    E6,
    E7,
    E8,
}

impl KodairaType {
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 5,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::E6 => 7,
            KodairaType::E7 => 8,
            KodairaType::E8 => 9,
        }
    }

    pub fn euler_number(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 6,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::E6 => 8,
            KodairaType::E7 => 9,
            KodairaType::E8 => 10,
        }
    }

    /// Class of the reduced fiber.
    ///
    /// `I_n` is a cycle of `n` rational curves (a nodal curve for `n = 1`);
    /// `II`, `III`, `IV` are one cusp, two tangent lines, three concurrent
    /// lines; the remaining types are trees of rational curves.
    pub fn groth_class(self) -> GrothClass {
        match self {
            KodairaType::I(n) => GrothClass::new(n as i64, 0),
            KodairaType::II => GrothClass::new(1, 1),
            KodairaType::III => GrothClass::new(2, 1),
            KodairaType::IV => GrothClass::new(3, 1),
            other => {
                let c = other.components() as i64;
                GrothClass::P1 * c - GrothClass::PT * (c - 1)
            }
        }
    }

    /// Serialized name, e.g. `"i2*"` or `"e6~"`.
    pub fn name(self) -> String {
        match self {
            KodairaType::I(n) => format!("i{n}"),
            KodairaType::IStar(n) => format!("i{n}*"),
            KodairaType::II => "ii".into(),
            KodairaType::III => "iii".into(),
            KodairaType::IV => "iv".into(),
            KodairaType::E6 => "e6~".into(),
            KodairaType::E7 => "e7~".into(),
            KodairaType::E8 => "e8~".into(),
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::E6 => f.write_str("E6~"),
            KodairaType::E7 => f.write_str("E7~"),
            KodairaType::E8 => f.write_str("E8~"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let bad = || Error::Schema(format!("unknown fiber type {s:?}"));
        Ok(match t.as_str() {
            "ii" => KodairaType::II,
            "iii" => KodairaType::III,
            "iv" => KodairaType::IV,
            "e6~" | "iv*" => KodairaType::E6,
            "e7~" | "iii*" => KodairaType::E7,
            "e8~" | "ii*" => KodairaType::E8,
            _ => {
                let rest = t.strip_prefix('i').ok_or_else(bad)?;
                match rest.strip_suffix('*') {
                    Some(n) => KodairaType::IStar(n.parse().map_err(|_| bad())?),
                    None => {
                        let n: u32 = rest.parse().map_err(|_| bad())?;
                        if n == 0 {
                            return Err(bad());
                        }
                        KodairaType::I(n)
                    }
                }
            }
        })
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for KodairaType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Element `l·𝕃 + pt·Pt` of the subgroup of the Grothendieck ring spanned by
/// the affine line and the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GrothClass {
    pub l: i64,
    pub pt: i64,
}

impl GrothClass {
    pub const ZERO: GrothClass = GrothClass { l: 0, pt: 0 };
    pub const L: GrothClass = GrothClass { l: 1, pt: 0 };
    pub const PT: GrothClass = GrothClass { l: 0, pt: 1 };
    /// ℂP¹ = 𝕃 + Pt.
    pub const P1: GrothClass = GrothClass { l: 1, pt: 1 };
    /// ℂˣ = 𝕃 − Pt.
    pub const CSTAR: GrothClass = GrothClass { l: 1, pt: -1 };

    pub const fn new(l: i64, pt: i64) -> Self {
        GrothClass { l, pt }
    }

    /// Componentwise `≤`.
    pub fn le(self, other: GrothClass) -> bool {
        self.l <= other.l && self.pt <= other.pt
    }
}

impl Add for GrothClass {
    type Output = GrothClass;
    fn add(self, o: GrothClass) -> GrothClass {
        GrothClass::new(self.l + o.l, self.pt + o.pt)
    }
}

impl Sub for GrothClass {
    type Output = GrothClass;
    fn sub(self, o: GrothClass) -> GrothClass {
        GrothClass::new(self.l - o.l, self.pt - o.pt)
    }
}

impl Neg for GrothClass {
    type Output = GrothClass;
    fn neg(self) -> GrothClass {
        GrothClass::new(-self.l, -self.pt)
    }
}

impl std::ops::Mul<i64> for GrothClass {
    type Output = GrothClass;
    fn mul(self, k: i64) -> GrothClass {
        GrothClass::new(self.l * k, self.pt * k)
    }
}

impl std::iter::Sum for GrothClass {
    fn sum<I: Iterator<Item = GrothClass>>(iter: I) -> GrothClass {
        iter.fold(GrothClass::ZERO, Add::add)
    }
}

impl fmt::Display for GrothClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = match self.l {
            0 => String::new(),
            1 => "𝕃".into(),
            -1 => "-𝕃".into(),
            k => format!("{k}𝕃"),
        };
        let pt = match (self.pt, l.is_empty()) {
            (0, true) => "0".into(),
            (0, false) => String::new(),
            (1, true) => "Pt".into(),
            (1, false) => "+Pt".into(),
            (-1, _) => "-Pt".into(),
            (k, true) => format!("{k}Pt"),
            (k, false) if k > 0 => format!("+{k}Pt"),
            (k, false) => format!("{k}Pt"),
        };
        write!(f, "{l}{pt}")
    }
}

impl Serialize for GrothClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.l, self.pt].serialize(s)
    }
}

impl<'de> Deserialize<'de> for GrothClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [l, pt] = <[i64; 2]>::deserialize(d)?;
        Ok(GrothClass::new(l, pt))
    }
}

/// Sorts a fiber list into canonical multiset order.
pub fn multiset(mut v: Vec<KodairaType>) -> Vec<KodairaType> {
    v.sort();
    v
}

/// Companion multisets allowed next to `infinity` (sorted, canonical order).
pub fn allowed_companions(infinity: KodairaType) -> Result<Vec<Vec<KodairaType>>> {
    use KodairaType::*;
    let i1 = I(1);
    let i2 = I(2);
    let sets: Vec<Vec<KodairaType>> = match infinity {
        IStar(4) => vec![vec![i1, i1]],
        IStar(3) => vec![vec![i1, i1, i1], vec![II, i1]],
        IStar(2) => vec![
            vec![i1, i1, i1, i1],
            vec![II, i1, i1],
            vec![i2, i1, i1],
            vec![i2, i2],
            vec![II, II],
            vec![III, i1],
        ],
        E7 => vec![vec![i1, i1, i1], vec![i2, i1], vec![II, i1], vec![III]],
        E6 => vec![
            vec![i1, i1, i1, i1],
            vec![i2, i1, i1],
            vec![II, i1, i1],
            vec![II, i2],
            vec![II, II],
            vec![I(3), i1],
            vec![III, i1],
            vec![IV],
        ],
        other => return Err(Error::UnsupportedInfinityType(other.name())),
    };
    Ok(sets.into_iter().map(multiset).collect())
}

/// `euler(infinity) + Σ euler(companions)`.
pub fn euler_sum(infinity: KodairaType, companions: &[KodairaType]) -> u32 {
    infinity.euler_number() + companions.iter().map(|t| t.euler_number()).sum::<u32>()
}
