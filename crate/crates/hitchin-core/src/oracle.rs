//! Independent reconstruction of the singular fibers from the spectral
//! pencil itself: locate the singular points of the pencil members, group
//! them by pencil parameter, and read off fiber types without consulting the
//! closed-form decision trees.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::classifier::{infinity_type, Classification};
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::kodaira::KodairaType;
use crate::numerics::{aberth, roots_with_multiplicity, Poly1};
use crate::polar::{pencil_coefficients, validate, CaseTag, DerivedInvariants, PolarData};
use crate::splitting::{Elem, Quartic};

/// Default relative tolerance for grouping singular points by `t`.
pub const DEFAULT_T_TOL: f64 = 1e-7;

/// Finest relative level tried when the clustering at `t_tol` is unstable.
pub const T_TOL_FLOOR: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Base,
    BlowupU,
}

/// A singular point of some member of the pencil.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPoint {
    pub chart: Chart,
    /// Base chart: the `z` coordinate. Blow-up chart: the coordinate `u` on
    /// the exceptional line, in the orientation `z = uv`, `w − w₀ = u²v`.
    #[serde(serialize_with = "ser_complex")]
    pub z: Complex64,
    /// `w` on the base chart, `v = 0` on the blow-up chart.
    #[serde(serialize_with = "ser_complex")]
    pub w_or_v: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub t: Complex64,
    pub root_multiplicity: usize,
}

impl SingularPoint {
    /// Blow-up point in the reciprocal orientation `u' = 1/u` (`None` at
    /// `u = 0`).
    pub fn reciprocal_u(&self) -> Option<Complex64> {
        (self.chart == Chart::BlowupU && self.z != Complex64::zero()).then(|| self.z.inv())
    }
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// `F`, `G` of `χ = w² + F(z)w + G(z) − t·z^k` and the exponent `k`.
struct Pencil {
    f: Poly1,
    g: Poly1,
    k: usize,
}

fn pencil(d: &PolarData) -> Pencil {
    let pc = pencil_coefficients(d, &Exact::zero());
    Pencil {
        f: pc.w_coefficient(),
        g: pc.constant_coefficient(),
        k: if d.case().is_22() { 2 } else { 1 },
    }
}

impl Pencil {
    /// `G' − FF'/2`, which equals `k·t·z^(k−1)` at a singular point.
    fn dt(&self) -> Poly1 {
        let half = Exact::ratio(1, 2);
        &self.g.derivative() - &(&self.f * &self.f.derivative()).scale(&half)
    }

    /// Polynomial whose roots are the `z` coordinates of singular points.
    fn locus(&self) -> Poly1 {
        let quarter = Exact::ratio(1, 4);
        let disc = &self.g - &(&self.f * &self.f).scale(&quarter);
        let zdt = &Poly1::z() * &self.dt();
        &disc - &zdt.scale(&Exact::ratio(1, self.k as i64))
    }

    fn t_at(&self, dt: &[Complex64], z: Complex64) -> Complex64 {
        let v = crate::numerics::horner(dt, z);
        if self.k == 2 {
            v / (2.0 * z)
        } else {
            v
        }
    }

    /// `(χ, ∂χ/∂z, ∂χ/∂w)` at a point.
    fn residuals(&self, z: Complex64, w: Complex64, t: Complex64) -> [f64; 3] {
        let (f, g) = (self.f.to_complex(), self.g.to_complex());
        let (df, dg) = (self.f.derivative().to_complex(), self.g.derivative().to_complex());
        let h = crate::numerics::horner;
        let (tz, dtz) = if self.k == 2 { (t * z * z, 2.0 * t * z) } else { (t * z, t) };
        let chi = w * w + h(&f, z) * w + h(&g, z) - tz;
        let chi_z = h(&df, z) * w + h(&dg, z) - dtz;
        let chi_w = 2.0 * w + h(&f, z);
        [chi.norm(), chi_z.norm(), chi_w.norm()]
    }
}

/// `|χ|`, `|∂_zχ|`, `|∂_wχ|` at a base-chart point.
pub fn base_residuals(d: &PolarData, p: &SingularPoint) -> [f64; 3] {
    pencil(d).residuals(p.z, p.w_or_v, p.t)
}

/// All singular points of the pencil away from the fiber at infinity.
pub fn singular_locus(d: &PolarData, tol: f64) -> Result<Vec<SingularPoint>> {
    validate(d)?;
    let pen = pencil(d);
    let locus = pen.locus();
    if locus.is_zero() {
        return Err(Error::DegenerateSystem(format!("{} locus polynomial vanishes", d.case())));
    }
    // Roots at z = 0 lie on the excluded fiber.
    let (reduced, _) = locus.strip_zero_roots();
    let dt = pen.dt().to_complex();
    let f = pen.f.to_complex();
    let mut out = Vec::new();
    if reduced.degree().unwrap_or(0) > 0 {
        for r in roots_with_multiplicity(&reduced, tol)? {
            let z = r.location;
            out.push(SingularPoint {
                chart: Chart::Base,
                z,
                w_or_v: -crate::numerics::horner(&f, z) / 2.0,
                t: pen.t_at(&dt, z),
                root_multiplicity: r.multiplicity,
            });
        }
    }
    if d.case().is_degenerate() {
        out.extend(blowup_points(&pen, tol)?);
    }
    Ok(out)
}

/// Singular points on the exceptional line over the base point `z = 0`.
///
/// With `w₀ = −F(0)/2`, `F̂ = F + 2w₀`, `Ĝ = G + w₀F + w₀²` the substitution
/// `z = uv`, `w − w₀ = u²v` divided by `uv` meets `v = 0` in `Ĝ₁ − t`, so the
/// exceptional line lies in the member `t = Ĝ₁`; its singular points are the
/// roots of `u² + F̂₁u + Ĝ₂`.
fn blowup_points(pen: &Pencil, tol: f64) -> Result<Vec<SingularPoint>> {
    let w0 = -&(&pen.f.coeff(0) * &Exact::ratio(1, 2));
    let g_hat = &(&pen.g + &pen.f.scale(&w0)) + &Poly1::constant(w0.square());
    debug_assert!(g_hat.coeff(0).is_zero(), "base point must be nilpotent");
    let t = g_hat.coeff(1).to_complex();
    let quad = Poly1::new(vec![g_hat.coeff(2), pen.f.coeff(1), Exact::one()]);
    Ok(roots_with_multiplicity(&quad, tol)?
        .into_iter()
        .map(|r| SingularPoint {
            chart: Chart::BlowupU,
            z: r.location,
            w_or_v: Complex64::zero(),
            t,
            root_multiplicity: r.multiplicity,
        })
        .collect())
}

/// Points sharing one member of the pencil.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TCluster {
    #[serde(serialize_with = "ser_complex")]
    pub t: Complex64,
    /// Indices into [`OracleReport::points`].
    pub members: Vec<usize>,
}

/// A fiber inferred from one t-cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InferredFiber {
    /// `None` when the cluster matches no rule.
    pub surface: Option<KodairaType>,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub case: CaseTag,
    pub infinity: KodairaType,
    pub points: Vec<SingularPoint>,
    pub t_clusters: Vec<TCluster>,
    pub inferred: Vec<InferredFiber>,
    pub section_detected: bool,
    /// Relative clustering level that was stable.
    pub t_tol_used: f64,
}

impl OracleReport {
    /// Sorted `(type, degenerate)` pairs; `None` if some cluster was not
    /// recognized.
    pub fn signature(&self) -> Option<Vec<(KodairaType, bool)>> {
        let mut v = self
            .inferred
            .iter()
            .map(|f| f.surface.map(|s| (s, f.degenerate)))
            .collect::<Option<Vec<_>>>()?;
        v.sort();
        Some(v)
    }

    pub fn agrees_with(&self, c: &Classification) -> bool {
        self.infinity == c.infinity && self.signature() == Some(c.signature())
    }
}

/// Single-linkage grouping of `t` values at absolute radius `r`, as a
/// canonical partition (sorted member lists, sorted by first member).
fn partition(ts: &[Complex64], r: f64) -> Vec<Vec<usize>> {
    let n = ts.len();
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in (i + 1)..n {
                if (ts[i] - ts[j]).norm() <= r && label[i] != label[j] {
                    let (lo, hi) = (label[i].min(label[j]), label[i].max(label[j]));
                    label.iter_mut().filter(|l| **l == hi).for_each(|l| *l = lo);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match groups.iter_mut().find(|g| label[g[0]] == label[i]) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

fn infer_cluster(points: &[&SingularPoint], section: bool) -> InferredFiber {
    use KodairaType::*;
    let mut base: Vec<usize> = points
        .iter()
        .filter(|p| p.chart == Chart::Base)
        .map(|p| p.root_multiplicity)
        .collect();
    let mut blow: Vec<usize> = points
        .iter()
        .filter(|p| p.chart == Chart::BlowupU)
        .map(|p| p.root_multiplicity)
        .collect();
    base.sort_unstable();
    blow.sort_unstable();
    let surface = match (base.as_slice(), blow.as_slice()) {
        ([1], []) => Some(I(1)),
        ([2], []) => Some(II),
        ([3], []) if section => Some(III),
        ([1, 1], []) if section => Some(I(2)),
        ([1, 1, 1], []) if section => Some(I(3)),
        ([], [1, 1]) => Some(I(2)),
        ([], [2]) => Some(if section { IV } else { III }),
        ([1], [1, 1]) if section => Some(I(3)),
        _ => None,
    };
    InferredFiber {
        surface,
        degenerate: !blow.is_empty(),
    }
}

/// Groups points by `t` and infers one fiber per group.
pub fn infer_configuration(points: Vec<SingularPoint>, d: &PolarData, t_tol: f64) -> Result<OracleReport> {
    if !(t_tol > 0.0 && t_tol < 1.0) {
        return Err(Error::ToleranceOutOfRange(t_tol));
    }
    let inv = validate(d)?;
    let ts: Vec<Complex64> = points.iter().map(|p| p.t).collect();
    let scale = ts.iter().map(|t| t.norm()).fold(1.0, f64::max);
    // Near-coincident fibers can sit closer than `t_tol`; tighten by decades
    // until two consecutive levels agree.
    let mut level = t_tol;
    let groups = loop {
        let groups = partition(&ts, level * scale);
        if groups == partition(&ts, level * scale / 10.0) {
            break groups;
        }
        level /= 10.0;
        if level < T_TOL_FLOOR {
            return Err(Error::AmbiguousCluster { tol: t_tol });
        }
    };
    let section = inv.has_section;
    let inferred = groups
        .iter()
        .map(|g| infer_cluster(&g.iter().map(|&i| &points[i]).collect::<Vec<_>>(), section))
        .collect();
    let t_clusters = groups
        .into_iter()
        .map(|members| {
            let t = members.iter().map(|&i| ts[i]).sum::<Complex64>() / members.len() as f64;
            TCluster { t, members }
        })
        .collect();
    Ok(OracleReport {
        case: d.case(),
        infinity: infinity_type(d.case()),
        points,
        t_clusters,
        inferred,
        section_detected: section,
        t_tol_used: level,
    })
}

/// `singular_locus` followed by `infer_configuration`.
pub fn run(d: &PolarData, root_tol: f64, t_tol: f64) -> Result<OracleReport> {
    let points = singular_locus(d, root_tol)?;
    infer_configuration(points, d, t_tol)
}

/// Symmetric-function identities for the four-base-point semisimple cases.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricChecks {
    /// `∏_{i<j} g(yᵢ, yⱼ)` over the roots of the locus quartic, where
    /// `t_i − t_j` is `(yᵢ − yⱼ)·g(yᵢ, yⱼ)` up to a unit.
    pub t1: Exact,
    /// `Σ_{i<j} ∏_{(k,l) ≠ (i,j)} g(y_k, y_l)`.
    pub t2: Exact,
    /// Closed factored form of `t1`.
    pub t1_factored: Exact,
    /// Closed form of `t2`.
    pub t2_closed: Exact,
}

fn n(k: i64) -> Exact {
    Exact::from_int(k)
}

/// Monic locus quartic and pair factor `g` for a four-base-point case.
fn quartic_and_factor(inv: &DerivedInvariants, case: CaseTag) -> Result<([Exact; 4], [Exact; 5])> {
    let (a, b, l, m) = (inv.a(), inv.b(), inv.l(), inv.m());
    match case {
        CaseTag::D22Ss => {
            // B²z⁴ + BMz³ − ALz − A²; g = 2B²yᵢyⱼ(yᵢ+yⱼ) + 3BMyᵢyⱼ − AL.
            let b2 = b.square();
            let quartic = [
                -&(&a.square() / &b2),
                -&(&(&a * &l) / &b2),
                Exact::zero(),
                &m / &b,
            ];
            // Coefficients of [pq(p+q), pq, p²+pq+q², p+q, 1].
            let g = [&n(2) * &b2, &n(3) * &(&b * &m), Exact::zero(), Exact::zero(), -&(&a * &l)];
            Ok((quartic, g))
        }
        CaseTag::D31Ss => {
            // 3A²z⁴ + 4ABz³ + (2AL+B²)z² − M²;
            // g = 2A²(yᵢ²+yᵢyⱼ+yⱼ²) + 3AB(yᵢ+yⱼ) + 2AL + B².
            let a2 = a.square();
            let lead = &n(3) * &a2;
            let quartic = [
                -&(&m.square() / &lead),
                Exact::zero(),
                &(&(&n(2) * &(&a * &l)) + &b.square()) / &lead,
                &(&n(4) * &b) / &(&n(3) * &a),
            ];
            let g = [
                Exact::zero(),
                Exact::zero(),
                &n(2) * &a2,
                &n(3) * &(&a * &b),
                &(&n(2) * &(&a * &l)) + &b.square(),
            ];
            Ok((quartic, g))
        }
        other => Err(Error::Schema(format!("symmetric checks need d22-ss or d31-ss, got {other}"))),
    }
}

fn pair_factor<'q>(q: &'q Quartic, g: &[Exact; 5], y: &Elem<'q>, z: &Elem<'q>) -> Elem<'q> {
    let pq = y * z;
    let s = y + z;
    let mut acc = q.scalar(g[4].clone());
    if !g[0].is_zero() {
        acc = &acc + &(&(&pq * &s) * &g[0]);
    }
    if !g[1].is_zero() {
        acc = &acc + &(&pq * &g[1]);
    }
    if !g[2].is_zero() {
        acc = &acc + &(&(&(&s * &s) - &pq) * &g[2]);
    }
    if !g[3].is_zero() {
        acc = &acc + &(&s * &g[3]);
    }
    acc
}

fn scalar_of(e: &Elem<'_>, what: &str) -> Result<Exact> {
    e.as_scalar()
        .cloned()
        .ok_or_else(|| Error::DegenerateSystem(format!("{what} did not reduce to a scalar")))
}

/// Exact `T₁`, `T₂` from the roots of the locus quartic, and their closed
/// forms in `A, B, L, M`.
pub fn symmetric_checks(inv: &DerivedInvariants, case: CaseTag) -> Result<SymmetricChecks> {
    let (coeffs, g) = quartic_and_factor(inv, case)?;
    let q = Quartic::monic(coeffs);
    let y = q.roots();
    let mut factors = Vec::with_capacity(6);
    for i in 0..4 {
        for j in (i + 1)..4 {
            factors.push(pair_factor(&q, &g, &y[i], &y[j]));
        }
    }
    // Prefix and suffix products give every product of five factors.
    let mut prefix = vec![q.scalar(Exact::one())];
    for f in &factors {
        let next = prefix.last().expect("nonempty") * f;
        prefix.push(next);
    }
    let mut suffix = vec![q.scalar(Exact::one()); factors.len() + 1];
    for k in (0..factors.len()).rev() {
        suffix[k] = &suffix[k + 1] * &factors[k];
    }
    let t1 = scalar_of(&prefix[factors.len()], "T1")?;
    let mut t2 = q.scalar(Exact::zero());
    for k in 0..factors.len() {
        t2 = &t2 + &(&prefix[k] * &suffix[k + 1]);
    }
    let t2 = scalar_of(&t2, "T2")?;
    let (a, b, l, m) = (inv.a(), inv.b(), inv.l(), inv.m());
    let l2m2 = &l.square() - &m.square();
    let delta = inv.delta();
    let (l2, m2) = (l.square(), m.square());
    let (t1_factored, t2_closed) = if case == CaseTag::D22Ss {
        let t1f = &(&(-&a.pow(5) / &b) * &l2m2) * &delta;
        let poly = &(&(&(&(&n(256) * &(&a.pow(3) * &(&b.pow(3) * &l)))
            + &(&n(48) * &(&(&a.square() * &b.square()) * &(&m * &(&(&n(3) * &m2) - &(&n(7) * &l2))))))
            + &(&n(12)
                * &(&(&(&a * &b) * &l)
                    * &(&(&(&n(9) * &l2.square()) - &(&n(8) * &(&l2 * &m2))) + &(&n(3) * &m2.square())))))
            - &(&n(13) * &(&l2.square() * &m.pow(3))))
            + &(&n(9) * &(&l2 * &m.pow(5)));
        (t1f, &(-&a.pow(4) / &b) * &poly)
    } else {
        let t1f = &(&(&Exact::ratio(4, 729) * &a.square()) * &l2m2) * &delta;
        let b2 = b.square();
        let poly = &(&(&(&n(192) * &(&a.pow(5) * &(&l.pow(5) + &(&n(3) * &(&l.pow(3) * &m2)))))
            + &(&n(16)
                * &(&(&a.pow(4) * &b2)
                    * &(&(&(&n(13) * &l2.square()) - &(&n(72) * &(&l2 * &m2))) + &(&n(27) * &m2.square())))))
            + &(&n(12) * &(&(&(&a.pow(3) * &b2.square()) * &l) * &(&(&n(5) * &l2) + &(&n(3) * &m2)))))
            - &(&(&a * &b2.pow(4)) * &l);
        (t1f, &Exact::ratio(8, 729) * &poly)
    };
    Ok(SymmetricChecks {
        t1,
        t2,
        t1_factored,
        t2_closed,
    })
}

/// Floating `T₁` from numerically located roots of the locus quartic.
pub fn t1_from_roots(inv: &DerivedInvariants, case: CaseTag) -> Result<Complex64> {
    let (coeffs, g) = quartic_and_factor(inv, case)?;
    let mut c: Vec<Complex64> = coeffs.iter().map(Exact::to_complex).collect();
    c.push(Complex64::one());
    let roots = aberth(&c);
    let g: Vec<Complex64> = g.iter().map(Exact::to_complex).collect();
    let mut prod = Complex64::one();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let (p, q) = (roots[i], roots[j]);
            let (pq, s) = (p * q, p + q);
            prod *= g[0] * pq * s + g[1] * pq + g[2] * (s * s - pq) + g[3] * s + g[4];
        }
    }
    Ok(prod)
}
