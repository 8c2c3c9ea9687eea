//! Exact arithmetic on expressions in the four roots of a monic quartic.
//!
//! Elements live in the splitting algebra `K[y₁,y₂,y₃]` modulo the relations
//! making `y₁` a root of `p`, `y₂` a root of `p/(z−y₁)` and `y₃` a root of
//! `p/((z−y₁)(z−y₂))`; the fourth root is `−c₃ − y₁ − y₂ − y₃`. A symmetric
//! expression reduces to a scalar, which equals its value in terms of the
//! coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::Exact;

const DA: usize = 4;
const DB: usize = 3;
const DC: usize = 2;
const DIM: usize = DA * DB * DC;

// Scratch bounds for unreduced products.
const SA: usize = 24;
const SB: usize = 8;
const SC: usize = 3;

/// The quartic `z⁴ + c₃z³ + c₂z² + c₁z + c₀`.
#[derive(Clone, Debug)]
pub struct Quartic {
    c: [Exact; 4],
}

impl Quartic {
    /// From ascending coefficients `[c₀, c₁, c₂, c₃]` of a monic quartic.
    pub fn monic(c: [Exact; 4]) -> Self {
        Quartic { c }
    }

    fn elem(&self, terms: &[((usize, usize, usize), Exact)]) -> Elem<'_> {
        let mut v = vec![Exact::zero(); DIM];
        for ((a, b, c), x) in terms {
            v[idx(*a, *b, *c)] = &v[idx(*a, *b, *c)] + x;
        }
        Elem { q: self, v }
    }

    pub fn scalar(&self, x: Exact) -> Elem<'_> {
        self.elem(&[((0, 0, 0), x)])
    }

    /// The roots `y₁, y₂, y₃, y₄`.
    pub fn roots(&self) -> [Elem<'_>; 4] {
        let y1 = self.elem(&[((1, 0, 0), Exact::one())]);
        let y2 = self.elem(&[((0, 1, 0), Exact::one())]);
        let y3 = self.elem(&[((0, 0, 1), Exact::one())]);
        let y4 = self.elem(&[
            ((0, 0, 0), -&self.c[3]),
            ((1, 0, 0), Exact::from_int(-1)),
            ((0, 1, 0), Exact::from_int(-1)),
            ((0, 0, 1), Exact::from_int(-1)),
        ]);
        [y1, y2, y3, y4]
    }
}

fn idx(a: usize, b: usize, c: usize) -> usize {
    a + DA * (b + DB * c)
}

fn sidx(a: usize, b: usize, c: usize) -> usize {
    a + SA * (b + SB * c)
}

/// Element of the splitting algebra of a [`Quartic`].
#[derive(Clone, Debug)]
pub struct Elem<'q> {
    q: &'q Quartic,
    v: Vec<Exact>,
}

impl<'q> Elem<'q> {
    /// The scalar value, or `None` if the element is not in the base field.
    pub fn as_scalar(&self) -> Option<&Exact> {
        self.v[1..].iter().all(Zero::is_zero).then_some(&self.v[0])
    }

    fn from_scratch(q: &'q Quartic, mut s: Vec<Exact>) -> Self {
        let c = &q.c;
        let one = Exact::one();
        let sub_term = |s: &mut Vec<Exact>, a: usize, b: usize, cc: usize, x: &Exact, k: &Exact| {
            let i = sidx(a, b, cc);
            s[i] = &s[i] - &(x * k);
        };
        // y₃² = −e₁y₃ − e₀, e₁ = c₃ + y₁ + y₂, e₀ = c₂ + c₃y₁ + y₁² + c₃y₂ + y₁y₂ + y₂².
        let e1: [((usize, usize), &Exact); 3] = [((0, 0), &c[3]), ((1, 0), &one), ((0, 1), &one)];
        let e0: [((usize, usize), &Exact); 6] = [
            ((0, 0), &c[2]),
            ((1, 0), &c[3]),
            ((2, 0), &one),
            ((0, 1), &c[3]),
            ((1, 1), &one),
            ((0, 2), &one),
        ];
        for b in 0..SB {
            for a in 0..SA {
                let x = std::mem::take(&mut s[sidx(a, b, 2)]);
                if x.is_zero() {
                    continue;
                }
                for ((da, db), k) in e1 {
                    sub_term(&mut s, a + da, b + db, 1, &x, k);
                }
                for ((da, db), k) in e0 {
                    sub_term(&mut s, a + da, b + db, 0, &x, k);
                }
            }
        }
        // y₂³ = −(d₂y₂² + d₁y₂ + d₀), d₂ = c₃ + y₁, d₁ = c₂ + c₃y₁ + y₁²,
        // d₀ = c₁ + c₂y₁ + c₃y₁² + y₁³.
        let d: [((usize, usize), &Exact); 9] = [
            ((0, 2), &c[3]),
            ((1, 2), &one),
            ((0, 1), &c[2]),
            ((1, 1), &c[3]),
            ((2, 1), &one),
            ((0, 0), &c[1]),
            ((1, 0), &c[2]),
            ((2, 0), &c[3]),
            ((3, 0), &one),
        ];
        for b in (DB..SB).rev() {
            for cc in 0..DC {
                for a in 0..SA {
                    let x = std::mem::take(&mut s[sidx(a, b, cc)]);
                    if x.is_zero() {
                        continue;
                    }
                    for ((da, db), k) in d {
                        sub_term(&mut s, a + da, b - DB + db, cc, &x, k);
                    }
                }
            }
        }
        // y₁⁴ = −(c₃y₁³ + c₂y₁² + c₁y₁ + c₀).
        for a in (DA..SA).rev() {
            for cc in 0..DC {
                for b in 0..DB {
                    let x = std::mem::take(&mut s[sidx(a, b, cc)]);
                    if x.is_zero() {
                        continue;
                    }
                    for (k, ck) in c.iter().enumerate() {
                        sub_term(&mut s, a - DA + k, b, cc, &x, ck);
                    }
                }
            }
        }
        let mut v = vec![Exact::zero(); DIM];
        for cc in 0..DC {
            for b in 0..DB {
                for a in 0..DA {
                    v[idx(a, b, cc)] = std::mem::take(&mut s[sidx(a, b, cc)]);
                }
            }
        }
        Elem { q, v }
    }
}

impl<'q> Add for &Elem<'q> {
    type Output = Elem<'q>;
    fn add(self, o: &Elem<'q>) -> Elem<'q> {
        Elem {
            q: self.q,
            v: self.v.iter().zip(&o.v).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'q> Sub for &Elem<'q> {
    type Output = Elem<'q>;
    fn sub(self, o: &Elem<'q>) -> Elem<'q> {
        Elem {
            q: self.q,
            v: self.v.iter().zip(&o.v).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<'q> Neg for &Elem<'q> {
    type Output = Elem<'q>;
    fn neg(self) -> Elem<'q> {
        Elem {
            q: self.q,
            v: self.v.iter().map(|x| -x).collect(),
        }
    }
}

impl<'q> Mul for &Elem<'q> {
    type Output = Elem<'q>;
    fn mul(self, o: &Elem<'q>) -> Elem<'q> {
        let mut s = vec![Exact::zero(); SA * SB * SC];
        let nz = |v: &[Exact]| -> Vec<(usize, usize, usize, usize)> {
            let mut out = Vec::new();
            for c in 0..DC {
                for b in 0..DB {
                    for a in 0..DA {
                        let i = idx(a, b, c);
                        if !v[i].is_zero() {
                            out.push((a, b, c, i));
                        }
                    }
                }
            }
            out
        };
        let (l, r) = (nz(&self.v), nz(&o.v));
        for &(a1, b1, c1, i1) in &l {
            for &(a2, b2, c2, i2) in &r {
                let k = sidx(a1 + a2, b1 + b2, c1 + c2);
                s[k] = &s[k] + &(&self.v[i1] * &o.v[i2]);
            }
        }
        Elem::from_scratch(self.q, s)
    }
}

impl<'q> Mul<&Exact> for &Elem<'q> {
    type Output = Elem<'q>;
    fn mul(self, k: &Exact) -> Elem<'q> {
        Elem {
            q: self.q,
            v: self.v.iter().map(|x| x * k).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: [i64; 4]) -> Quartic {
        Quartic::monic(c.map(Exact::from_int))
    }

    #[test]
    fn elementary_symmetric_functions() {
        // (z−1)(z−2)(z−3)(z−4) = z⁴ − 10z³ + 35z² − 50z + 24
        let p = q([24, -50, 35, -10]);
        let [y1, y2, y3, y4] = p.roots();
        let s1 = &(&(&y1 + &y2) + &y3) + &y4;
        assert_eq!(s1.as_scalar(), Some(&Exact::from_int(10)));
        let s4 = &(&(&y1 * &y2) * &y3) * &y4;
        assert_eq!(s4.as_scalar(), Some(&Exact::from_int(24)));
        let pairs = [(&y1, &y2), (&y1, &y3), (&y1, &y4), (&y2, &y3), (&y2, &y4), (&y3, &y4)];
        let mut s2 = p.scalar(Exact::zero());
        for (a, b) in pairs {
            s2 = &s2 + &(a * b);
        }
        assert_eq!(s2.as_scalar(), Some(&Exact::from_int(35)));
        assert!(y1.as_scalar().is_none());
    }

    #[test]
    fn discriminant_via_root_differences() {
        // Roots 1, 2, 3, 4: ∏_{i<j}(yi − yj)² = (1·2·3·1·2·1)² = 144.
        let p = q([24, -50, 35, -10]);
        let y = p.roots();
        let mut prod = p.scalar(Exact::one());
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = &y[i] - &y[j];
                prod = &prod * &(&d * &d);
            }
        }
        assert_eq!(prod.as_scalar(), Some(&Exact::from_int(144)));
    }
}
