//! Exact scalars.
//!
//! [`Gaussian`] is an element of ℚ(i). [`Exact`] is an element of ℚ(i)(√3),
//! stored as `a + b·√3` with Gaussian `a`, `b`. Every branch decision in the
//! crate is made on these types; floating values appear only for root
//! locations.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

/// Exact rational complex number `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    /// `(n_re/d_re) + i·(n_im/d_im)`. Panics on a zero denominator.
    pub fn from_ratios(n_re: i64, d_re: i64, n_im: i64, d_im: i64) -> Self {
        Gaussian::new(rat(n_re, d_re), rat(n_im, d_im))
    }

    pub fn from_int(n: i64) -> Self {
        Gaussian::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Gaussian::new(r, BigRational::zero())
    }

    pub fn i() -> Self {
        Gaussian::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        if self.is_real() {
            return Gaussian::from_rational(self.re.recip());
        }
        let n = self.norm_sqr();
        Gaussian::new(&self.re / &n, -&self.im / &n)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Largest absolute numerator or denominator, as a bit count.
    pub fn height_bits(&self) -> u64 {
        [
            self.re.numer(),
            self.re.denom(),
            self.im.numer(),
            self.im.denom(),
        ]
        .iter()
        .map(|x| x.bits())
        .max()
        .unwrap_or(0)
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale down both parts so the quotient survives the conversion.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

impl Zero for Gaussian {
    fn zero() -> Self {
        Gaussian::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Gaussian {
    fn one() -> Self {
        Gaussian::from_int(1)
    }
}

impl<'a> Add<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn add(self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn sub(self, o: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn mul(self, o: &Gaussian) -> Gaussian {
        match (self.is_real(), o.is_real()) {
            (true, true) => Gaussian::from_rational(&self.re * &o.re),
            (true, false) => Gaussian::new(&self.re * &o.re, &self.re * &o.im),
            (false, true) => Gaussian::new(&self.re * &o.re, &self.im * &o.re),
            (false, false) => Gaussian::new(
                &self.re * &o.re - &self.im * &o.im,
                &self.re * &o.im + &self.im * &o.re,
            ),
        }
    }
}

impl<'a> Div<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn div(self, o: &Gaussian) -> Gaussian {
        if o.is_real() {
            assert!(!o.re.is_zero(), "division by zero");
            return Gaussian::new(&self.re / &o.re, &self.im / &o.re);
        }
        self * &o.inv()
    }
}

impl Neg for &Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }
}

/// Exact element `a + b·√3` of ℚ(i)(√3).
///
/// Parameters read from JSON are Gaussian; the √3 part exists so that
/// strata such as `L² = −3M²` have exact witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Exact {
    pub a: Gaussian,
    pub b: Gaussian,
}

impl Exact {
    pub fn new(a: Gaussian, b: Gaussian) -> Self {
        Exact { a, b }
    }

    pub fn gaussian(g: Gaussian) -> Self {
        Exact::new(g, Gaussian::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Exact::gaussian(Gaussian::from_int(n))
    }

    /// The rational `n/d`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Exact::gaussian(Gaussian::from_rational(rat(n, d)))
    }

    /// `(n_re/d_re) + i·(n_im/d_im)`.
    pub fn from_ratios(n_re: i64, d_re: i64, n_im: i64, d_im: i64) -> Self {
        Exact::gaussian(Gaussian::from_ratios(n_re, d_re, n_im, d_im))
    }

    pub fn i() -> Self {
        Exact::gaussian(Gaussian::i())
    }

    pub fn sqrt3() -> Self {
        Exact::new(Gaussian::zero(), Gaussian::one())
    }

    pub fn is_gaussian(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_gaussian(&self) -> Option<&Gaussian> {
        self.is_gaussian().then_some(&self.a)
    }

    /// Rational integer test (used for wall membership of weights).
    pub fn is_rational_integer(&self) -> bool {
        self.is_gaussian() && self.a.is_real() && self.a.re.is_integer()
    }

    pub fn inv(&self) -> Self {
        if self.is_gaussian() {
            return Exact::gaussian(self.a.inv());
        }
        // (a + b√3)(a − b√3) = a² − 3b², nonzero because √3 ∉ ℚ(i).
        let three = Gaussian::from_int(3);
        let n = &(&self.a * &self.a) - &(&three * &(&self.b * &self.b));
        let ni = n.inv();
        Exact::new(&self.a * &ni, -&(&self.b * &ni))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Exact::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn to_complex(&self) -> Complex64 {
        self.a.to_complex() + self.b.to_complex() * 3f64.sqrt()
    }

    pub fn height_bits(&self) -> u64 {
        self.a.height_bits().max(self.b.height_bits())
    }
}

impl Zero for Exact {
    fn zero() -> Self {
        Exact::gaussian(Gaussian::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Exact {
    fn one() -> Self {
        Exact::from_int(1)
    }
}

impl<'a> Add<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn add(self, o: &Exact) -> Exact {
        if self.is_gaussian() && o.is_gaussian() {
            return Exact::gaussian(&self.a + &o.a);
        }
        Exact::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn sub(self, o: &Exact) -> Exact {
        if self.is_gaussian() && o.is_gaussian() {
            return Exact::gaussian(&self.a - &o.a);
        }
        Exact::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn mul(self, o: &Exact) -> Exact {
        match (self.is_gaussian(), o.is_gaussian()) {
            (true, true) => Exact::gaussian(&self.a * &o.a),
            (true, false) => Exact::new(&self.a * &o.a, &self.a * &o.b),
            (false, true) => Exact::new(&self.a * &o.a, &self.b * &o.a),
            (false, false) => {
                let three = Gaussian::from_int(3);
                Exact::new(
                    &(&self.a * &o.a) + &(&three * &(&self.b * &o.b)),
                    &(&self.a * &o.b) + &(&self.b * &o.a),
                )
            }
        }
    }
}

impl<'a> Div<&'a Exact> for &'a Exact {
    type Output = Exact;
    fn div(self, o: &Exact) -> Exact {
        if o.is_gaussian() {
            return Exact::new(&self.a / &o.a, &self.b / &o.a);
        }
        self * &o.inv()
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact::new(-&self.a, -&self.b)
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { $tr::$m(&self, &o) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t { $tr::$m(&self, o) }
        }
        impl<'a> $tr<$t> for &'a $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { $tr::$m(self, &o) }
        }
    )*};
}

forward_owned!(Gaussian, Add::add, Sub::sub, Mul::mul, Div::div);
forward_owned!(Exact, Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        -&self
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -&self
    }
}

impl From<Gaussian> for Exact {
    fn from(g: Gaussian) -> Self {
        Exact::gaussian(g)
    }
}

impl From<i64> for Exact {
    fn from(n: i64) -> Self {
        Exact::from_int(n)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_gaussian() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "({}) + ({})·√3", self.a, self.b)
        }
    }
}

// JSON: integers that fit in i64 are numbers, larger ones decimal strings.

fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("expected an integer, got {n}")),
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|e| format!("bad integer {s:?}: {e}")),
        other => Err(format!("expected an integer, got {other}")),
    }
}

/// `[num, den]`.
pub fn rational_to_json(r: &BigRational) -> Value {
    Value::Array(vec![int_to_json(r.numer()), int_to_json(r.denom())])
}

pub fn rational_from_json(v: &Value) -> Result<BigRational, String> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| format!("expected [num, den], got {v}"))?;
    let n = int_from_json(&arr[0])?;
    let d = int_from_json(&arr[1])?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

/// `[num_re, den_re, num_im, den_im]`.
pub fn gaussian_to_json(g: &Gaussian) -> Value {
    Value::Array(vec![
        int_to_json(g.re.numer()),
        int_to_json(g.re.denom()),
        int_to_json(g.im.numer()),
        int_to_json(g.im.denom()),
    ])
}

pub fn gaussian_from_json(v: &Value) -> Result<Gaussian, String> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| format!("expected [num_re, den_re, num_im, den_im], got {v}"))?;
    let ints = arr
        .iter()
        .map(int_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    if ints[1].is_zero() || ints[3].is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Gaussian::new(
        BigRational::new(ints[0].clone(), ints[1].clone()),
        BigRational::new(ints[2].clone(), ints[3].clone()),
    ))
}

/// Gaussian values as a 4-tuple, others as `{"rational": .., "sqrt3": ..}`.
pub fn exact_to_json(x: &Exact) -> Value {
    if x.is_gaussian() {
        gaussian_to_json(&x.a)
    } else {
        serde_json::json!({ "rational": gaussian_to_json(&x.a), "sqrt3": gaussian_to_json(&x.b) })
    }
}

pub fn exact_from_json(v: &Value) -> Result<Exact, String> {
    match v {
        Value::Object(m) => {
            let a = m.get("rational").ok_or("missing \"rational\"")?;
            let b = m.get("sqrt3").ok_or("missing \"sqrt3\"")?;
            Ok(Exact::new(gaussian_from_json(a)?, gaussian_from_json(b)?))
        }
        _ => gaussian_from_json(v).map(Exact::gaussian),
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        exact_to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        exact_from_json(&v).map_err(D::Error::custom)
    }
}
