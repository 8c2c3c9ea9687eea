//! Univariate polynomials over [`Exact`], square-free decomposition and
//! root location with multiplicities.
//!
//! Multiplicities come from Yun's exact square-free decomposition. Root
//! locations come from Aberth–Ehrlich iteration on each square-free factor,
//! where all roots are simple and converge quadratically.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Exact;

/// Default relative tolerance for root clustering.
pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

/// Dense polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly1 {
    coeffs: Vec<Exact>,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<Exact>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly1::new(c.iter().map(|&x| Exact::from_int(x)).collect())
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn constant(c: Exact) -> Self {
        Poly1::new(vec![c])
    }

    /// `c·zᵏ`.
    pub fn monomial(c: Exact, k: usize) -> Self {
        let mut v = vec![Exact::zero(); k];
        v.push(c);
        Poly1::new(v)
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Poly1::monomial(Exact::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Exact] {
        &self.coeffs
    }

    /// Coefficient of `zᵏ` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Exact {
        self.coeffs.get(k).cloned().unwrap_or_else(Exact::zero)
    }

    pub fn leading(&self) -> Option<&Exact> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Exact) -> Exact {
        self.coeffs
            .iter()
            .rev()
            .fold(Exact::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        horner(&self.to_complex(), x)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(Exact::to_complex).collect()
    }

    pub fn derivative(&self) -> Self {
        Poly1::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Exact::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Exact) -> Self {
        Poly1::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly1::zero(),
            Some(lc) => self.scale(&lc.inv()),
        }
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly1) -> (Poly1, Poly1) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc_inv = d.coeffs[dd].inv();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly1::zero(), self.clone());
        }
        let mut q = vec![Exact::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = &r[k + j] - &(&c * dc);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly1::new(q), Poly1::new(r))
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, d: &Poly1) -> Poly1 {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly1) -> Poly1 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Splits off the factor `zᵏ`: returns `(p / zᵏ, k)`.
    pub fn strip_zero_roots(&self) -> (Poly1, usize) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (Poly1::new(self.coeffs[k..].to_vec()), k)
    }

    /// Yun's square-free decomposition `p = c·∏ fᵢⁱ` as `(fᵢ, i)` pairs with
    /// monic, pairwise coprime, non-constant `fᵢ`.
    pub fn square_free_decomposition(&self) -> Vec<(Poly1, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0);
        let mut d = &df.div_exact(&a0) - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let b_next = b.div_exact(&a);
            let c = d.div_exact(&a);
            d = &c - &b_next.derivative();
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            b = b_next;
            i += 1;
        }
        out
    }

    /// Largest coefficient modulus, in floating point.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max)
    }
}

impl<'a> Add<&'a Poly1> for &'a Poly1 {
    type Output = Poly1;
    fn add(self, o: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly1::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly1> for &'a Poly1 {
    type Output = Poly1;
    fn sub(self, o: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly1::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly1> for &'a Poly1 {
    type Output = Poly1;
    fn mul(self, o: &Poly1) -> Poly1 {
        if self.is_zero() || o.is_zero() {
            return Poly1::zero();
        }
        let mut v = vec![Exact::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Poly1::new(v)
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// A located root with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    pub location: Complex64,
    pub multiplicity: usize,
    /// `|p(location)|`.
    pub residual: f64,
}

/// Residual bound `tol·(1 + max|coef|)` every [`RootCluster`] satisfies.
pub fn residual_bound(p: &Poly1, tol: f64) -> f64 {
    tol * (1.0 + p.max_abs_coeff())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::ToleranceOutOfRange(tol))
    }
}

/// All distinct roots of `p` with multiplicities.
///
/// Roots of distinct square-free factors closer than `tol·max(1, |z|)` are
/// merged; a merge would indicate a conditioning failure and shows up as a
/// multiplicity mismatch against [`square_free_multiplicity`].
pub fn roots_with_multiplicity(p: &Poly1, tol: f64) -> Result<Vec<RootCluster>> {
    check_tol(tol)?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut located: Vec<(Complex64, usize)> = Vec::new();
    for (factor, mult) in p.square_free_decomposition() {
        let c = factor.to_complex();
        for z in aberth(&c) {
            located.push((newton_polish(&c, z), mult));
        }
    }
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for (z, m) in located {
        let scale = z.norm().max(1.0);
        match clusters
            .iter_mut()
            .find(|(c, _)| (*c - z).norm() <= tol * scale)
        {
            Some((c, cm)) => {
                *c = (*c * *cm as f64 + z * m as f64) / (*cm + m) as f64;
                *cm += m;
            }
            None => clusters.push((z, m)),
        }
    }
    let pc = p.to_complex();
    let mut out: Vec<RootCluster> = clusters
        .into_iter()
        .map(|(z, m)| RootCluster {
            location: z,
            multiplicity: m,
            residual: horner(&pc, z).norm(),
        })
        .collect();
    out.sort_by(|a, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

/// Square-free structure as `(factor degree, multiplicity)`, highest
/// multiplicity first.
pub fn square_free_multiplicity(p: &Poly1) -> Result<Vec<(usize, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut v: Vec<(usize, usize)> = p
        .square_free_decomposition()
        .into_iter()
        .map(|(f, m)| (f.degree().unwrap_or(0), m))
        .collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
    Ok(v)
}

/// Floating-only multiplicity estimate: Aberth on the full polynomial,
/// then greedy clustering at `radius·max(1, |z|)`.
///
/// Multiple roots only converge to about `ε^(1/m)`, so `radius` must be far
/// larger than the exact-route tolerance. Used as an independent cross-check.
pub fn numeric_multiplicities(coeffs: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for z in aberth(coeffs) {
        let scale = z.norm().max(1.0);
        match clusters
            .iter_mut()
            .find(|(c, _)| (*c - z).norm() <= radius * scale)
        {
            Some((c, m)) => {
                *c = (*c * *m as f64 + z) / (*m + 1) as f64;
                *m += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    clusters
}

pub(crate) fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * x + a)
}

fn horner_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

fn trim(c: &[Complex64]) -> &[Complex64] {
    let n = c.iter().rposition(|x| *x != Complex64::zero()).map_or(0, |k| k + 1);
    &c[..n]
}

/// All roots of the polynomial with ascending coefficients `c` by
/// Aberth–Ehrlich simultaneous iteration.
pub fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let c = trim(c);
    if c.len() <= 1 {
        return Vec::new();
    }
    let n = c.len() - 1;
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    if n == 1 {
        return vec![-c[0]];
    }
    // Fujiwara bound on the root moduli.
    let bound = (0..n)
        .map(|k| {
            let e = (n - k) as f64;
            let v = c[k].norm() * if k == 0 { 0.5 } else { 1.0 };
            v.powf(1.0 / e)
        })
        .fold(0.0, f64::max)
        * 2.0;
    let radius = if bound > 0.0 { bound } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner_with_derivative(&c, z[k]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = if dp == Complex64::zero() {
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d == Complex64::zero() {
                        Complex64::new(1e12, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom == Complex64::zero() {
                ratio
            } else {
                ratio / denom
            };
            z[k] -= step;
            max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

fn newton_polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (p, dp) = horner_with_derivative(c, z);
        if dp == Complex64::zero() {
            break;
        }
        let step = p / dp;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
    }
    z
}
