//! Closed-form classification of the singular fibers from the exact
//! invariants of a configuration.

use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::exact::Exact;
use crate::kodaira::{allowed_companions, euler_sum, multiset, KodairaType};
use crate::polar::{CaseTag, DerivedInvariants, SectionParity};
use crate::weights::{hitchin_class, walls_crossed, weight_class, ParabolicWeights, SingularFiberEntry, WeightClass};

pub use crate::weights::Component;

/// One singular fiber next to the fiber at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Companion {
    pub fiber: KodairaType,
    /// Passes through the non-semisimple simple pole (non-compact Hitchin fiber).
    pub degenerate: bool,
    /// Stability of this fiber is governed by `α₊¹ + α₋²` instead of `α₊¹ + α₊²`.
    pub crossed: bool,
}

impl Companion {
    fn plain(fiber: KodairaType) -> Self {
        Companion {
            fiber,
            degenerate: false,
            crossed: false,
        }
    }

    fn degenerate(fiber: KodairaType) -> Self {
        Companion {
            fiber,
            degenerate: true,
            crossed: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub case: CaseTag,
    pub infinity: KodairaType,
    pub companions: Vec<Companion>,
    /// Identifier of the decision-tree leaf, e.g. `"d22-ss/2i2"`.
    pub branch: &'static str,
}

impl Classification {
    /// Sorted `(type, degenerate)` pairs, the form compared with the oracle.
    pub fn signature(&self) -> Vec<(KodairaType, bool)> {
        let mut v: Vec<_> = self.companions.iter().map(|c| (c.fiber, c.degenerate)).collect();
        v.sort();
        v
    }

    pub fn fiber_types(&self) -> Vec<KodairaType> {
        multiset(self.companions.iter().map(|c| c.fiber).collect())
    }
}

/// Fiber at infinity, fixed by the pole configuration.
pub fn infinity_type(case: CaseTag) -> KodairaType {
    match case {
        CaseTag::D22Ss => KodairaType::IStar(2),
        CaseTag::D22Sn => KodairaType::IStar(3),
        CaseTag::D22Nn => KodairaType::IStar(4),
        CaseTag::D31Ss | CaseTag::D31Sn => KodairaType::E6,
        CaseTag::D31Ns | CaseTag::D31Nn => KodairaType::E7,
    }
}

/// Every branch identifier `classify` can return for `case`.
pub fn branches(case: CaseTag) -> &'static [&'static str] {
    match case {
        CaseTag::D22Ss => &[
            "d22-ss/iii+i1",
            "d22-ss/2ii",
            "d22-ss/ii+2i1-imaginary",
            "d22-ss/ii+2i1",
            "d22-ss/2i2",
            "d22-ss/i2+2i1",
            "d22-ss/4i1",
        ],
        CaseTag::D22Sn => &["d22-sn/ii+i1", "d22-sn/3i1"],
        CaseTag::D22Nn => &["d22-nn/2i1"],
        CaseTag::D31Ss => &[
            "d31-ss/iii+i1",
            "d31-ss/ii+i2",
            "d31-ss/i2+2i1",
            "d31-ss/4i1",
            "d31-ss/2ii",
            "d31-ss/ii+2i1",
        ],
        CaseTag::D31Sn => &[
            "d31-sn/iv",
            "d31-sn/ii+i2",
            "d31-sn/i3+i1",
            "d31-sn/iii+i1",
            "d31-sn/i2+2i1",
        ],
        CaseTag::D31Ns => &["d31-ns/ii+i1", "d31-ns/3i1"],
        CaseTag::D31Nn => &["d31-nn/iii", "d31-nn/i2+i1"],
    }
}

fn n(k: i64) -> Exact {
    Exact::from_int(k)
}

/// Evaluates the case's decision tree exactly.
///
/// Precondition: `inv` comes from a successful `validate` for `case`.
pub fn classify(inv: &DerivedInvariants, case: CaseTag) -> Classification {
    use KodairaType::*;
    let p = Companion::plain;
    let dg = Companion::degenerate;
    // The multi-component fiber of an `L = M ≠ 0` section uses crossed weights.
    let sectioned = |fiber: KodairaType| Companion {
        crossed: inv.section_parity == Some(SectionParity::Plus),
        ..Companion::plain(fiber)
    };
    let (branch, companions): (&'static str, Vec<Companion>) = match case {
        CaseTag::D22Ss => {
            let (a, b, l, m) = (inv.a(), inv.b(), inv.l(), inv.m());
            let (l2, m2) = (l.square(), m.square());
            if inv.delta().is_zero() {
                assert!(
                    !(l.is_zero() && m.is_zero()),
                    "Δ = 0 with L = M = 0 forces A = 0 or B = 0"
                );
                if l2 == m2 {
                    ("d22-ss/iii+i1", vec![sectioned(III), p(I(1))])
                } else if l2 == -&m2 {
                    if m.pow(3) == &(&n(8) * &(&a * &b)) * &l {
                        ("d22-ss/2ii", vec![p(II), p(II)])
                    } else {
                        ("d22-ss/ii+2i1-imaginary", vec![p(II), p(I(1)), p(I(1))])
                    }
                } else {
                    ("d22-ss/ii+2i1", vec![p(II), p(I(1)), p(I(1))])
                }
            } else if l.is_zero() && m.is_zero() {
                let second = Companion {
                    crossed: true,
                    ..p(I(2))
                };
                ("d22-ss/2i2", vec![p(I(2)), second])
            } else if l2 == m2 {
                ("d22-ss/i2+2i1", vec![sectioned(I(2)), p(I(1)), p(I(1))])
            } else {
                ("d22-ss/4i1", vec![p(I(1)); 4])
            }
        }
        CaseTag::D22Sn => {
            if inv.delta().is_zero() {
                ("d22-sn/ii+i1", vec![p(II), p(I(1))])
            } else {
                ("d22-sn/3i1", vec![p(I(1)); 3])
            }
        }
        CaseTag::D22Nn => ("d22-nn/2i1", vec![p(I(1)); 2]),
        CaseTag::D31Ss => {
            let (a, b, l, m) = (inv.a(), inv.b(), inv.l(), inv.m());
            let b2 = b.square();
            let am = &a * &m;
            let mut leaf = None;
            for s in [1i64, -1] {
                if l == &n(s) * &m {
                    leaf = Some(if b2 == &n(4 * s) * &am {
                        ("d31-ss/iii+i1", vec![sectioned(III), p(I(1))])
                    } else if b2 == &n(-12 * s) * &am {
                        ("d31-ss/ii+i2", vec![p(II), sectioned(I(2))])
                    } else {
                        ("d31-ss/i2+2i1", vec![sectioned(I(2)), p(I(1)), p(I(1))])
                    });
                    break;
                }
            }
            match leaf {
                Some(x) => x,
                None if !inv.delta().is_zero() => ("d31-ss/4i1", vec![p(I(1)); 4]),
                None if b.is_zero() => ("d31-ss/2ii", vec![p(II), p(II)]),
                None => ("d31-ss/ii+2i1", vec![p(II), p(I(1)), p(I(1))]),
            }
        }
        CaseTag::D31Sn => {
            let (a, b, l) = (inv.a(), inv.b(), inv.l());
            let delta_zero = inv.delta().is_zero();
            if delta_zero && l.is_zero() {
                ("d31-sn/iv", vec![dg(IV)])
            } else if delta_zero {
                ("d31-sn/ii+i2", vec![p(II), dg(I(2))])
            } else if l.is_zero() {
                ("d31-sn/i3+i1", vec![dg(I(3)), p(I(1))])
            } else if b.square() == &n(-2) * &(&a * &l) {
                ("d31-sn/iii+i1", vec![dg(III), p(I(1))])
            } else {
                ("d31-sn/i2+2i1", vec![dg(I(2)), p(I(1)), p(I(1))])
            }
        }
        CaseTag::D31Ns => {
            if inv.delta().is_zero() {
                ("d31-ns/ii+i1", vec![p(II), p(I(1))])
            } else {
                ("d31-ns/3i1", vec![p(I(1)); 3])
            }
        }
        CaseTag::D31Nn => {
            if inv.r().is_zero() {
                ("d31-nn/iii", vec![dg(III)])
            } else {
                ("d31-nn/i2+i1", vec![dg(I(2)), p(I(1))])
            }
        }
    };
    let out = Classification {
        case,
        infinity: infinity_type(case),
        companions,
        branch,
    };
    debug_assert_eq!(euler_sum(out.infinity, &out.fiber_types()), 12);
    debug_assert!(allowed_companions(out.infinity)
        .expect("supported infinity")
        .contains(&out.fiber_types()));
    out
}

/// Classification with Hitchin classes attached to every fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub case: CaseTag,
    pub infinity: KodairaType,
    pub branch: String,
    pub fibers: Vec<SingularFiberEntry>,
    pub walls_crossed: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_class: Option<WeightClass>,
}

impl FiberReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Classifies and evaluates the Hitchin class tables. Without weights the
/// generic classes are reported without bidegree labels.
pub fn classify_with_weights(
    inv: &DerivedInvariants,
    case: CaseTag,
    w: Option<&ParabolicWeights>,
) -> Result<FiberReport> {
    if let Some(w) = w {
        w.check_for_case(case)?;
    }
    let c = classify(inv, case);
    let fibers = c
        .companions
        .iter()
        .map(|comp| hitchin_class(comp.fiber, w, comp.degenerate, comp.crossed))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiberReport {
        case,
        infinity: c.infinity,
        branch: c.branch.to_string(),
        fibers,
        walls_crossed: w.map_or(0, walls_crossed),
        weight_class: w.map(weight_class),
    })
}
