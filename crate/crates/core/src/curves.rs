//! Curves on the twice-punctured annulus: indices, arc/knot parity, the
//! `Λ` action, the determinant-one product formula, realization in the
//! three-generator presentation (with `v1 = v2 = 1`) and expansion in the
//! threaded (bracelets) basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{chebyshev_coefficients, specialize, CoeffElem, HalfLaurent, Specialization, Specialized};
use crate::error::{Error, Result};
use crate::expr::{parse_with, Lowering};
use crate::freealg::{presentation, PresentationId, RewriteSystem, SkeinElem, Word};
use crate::torus::primitive_split;

/// Curve class `(n, k)`, identified with `(-n, -k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[i64; 2]", try_from = "[i64; 2]")]
pub struct CurveIndex {
    n: i64,
    k: i64,
}

/// Arcs join the two interior punctures; knots are closed loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Arc,
    Knot,
}

/// Which non-primitive element an index denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// The geometric multicurve: parallel copies of a knot, or for an arc
    /// `θ` the arc `θ^(d mod 2)` with `d div 2` parallel loops `θ^2 - 2`.
    Geometric,
    /// `(n/d, k/d)^d`.
    Power,
    /// `T_d((n/d, k/d))`.
    #[default]
    Threaded,
}

impl From<CurveIndex> for [i64; 2] {
    fn from(c: CurveIndex) -> Self {
        [c.n, c.k]
    }
}

impl TryFrom<[i64; 2]> for CurveIndex {
    type Error = Error;
    fn try_from(v: [i64; 2]) -> Result<Self> {
        classify(v[0], v[1])
    }
}

/// Canonical index of `(n, k)`: `n > 0`, or `n = 0` and `k > 0`.
pub fn classify(n: i64, k: i64) -> Result<CurveIndex> {
    if n == 0 && k == 0 {
        return Err(Error::InvalidArgument("(0,0) is not a curve".into()));
    }
    Ok(if n < 0 || (n == 0 && k < 0) { CurveIndex { n: -n, k: -k } } else { CurveIndex { n, k } })
}

impl CurveIndex {
    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// Knot iff `n ≡ k (mod 2)`. An even multiple of an arc is a knot: its
    /// geometric curve is a union of loops around the arc.
    pub fn kind(&self) -> CurveKind {
        if (self.n - self.k).rem_euclid(2) == 0 {
            CurveKind::Knot
        } else {
            CurveKind::Arc
        }
    }

    pub fn is_arc(&self) -> bool {
        self.kind() == CurveKind::Arc
    }

    pub fn depth(&self) -> i64 {
        self.n.gcd(&self.k)
    }

    pub fn is_primitive(&self) -> bool {
        self.depth() == 1
    }

    pub fn primitive(&self) -> CurveIndex {
        let d = self.depth();
        CurveIndex { n: self.n / d, k: self.k / d }
    }
}

impl fmt::Display for CurveIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.k)
    }
}

/// Element `[[a, b], [c, d]]` of `SL2(Z)` with `a` odd and `c` even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LambdaMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl LambdaMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidArgument(format!("determinant of [[{a},{b}],[{c},{d}]] is not 1")));
        }
        if a.rem_euclid(2) != 1 || c.rem_euclid(2) != 0 {
            return Err(Error::InvalidArgument(format!(
                "[[{a},{b}],[{c},{d}]] needs a odd and c even"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn mul(&self, o: &LambdaMatrix) -> LambdaMatrix {
        LambdaMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Image of the raw pair `(n, k)`; linear, so signs are preserved.
    pub fn act_pair(&self, n: i64, k: i64) -> (i64, i64) {
        let half_c = self.c / 2;
        let s = n + k;
        (half_c * s + self.d * n, (self.a - half_c) * s + (2 * self.b - self.d) * n)
    }
}

/// The action of `Λ` on curve classes.
pub fn lambda_act(m: &LambdaMatrix, c: CurveIndex) -> CurveIndex {
    let (n, k) = m.act_pair(c.n, c.k);
    classify(n, k).expect("invertible action keeps curves nonzero")
}

/// Geometric intersection number of two primitive curves.
pub fn intersection_number(c1: CurveIndex, c2: CurveIndex) -> Result<i64> {
    if !c1.is_primitive() || !c2.is_primitive() {
        return Err(Error::InvalidArgument("intersection numbers need primitive curves".into()));
    }
    Ok((c1.n * c2.k - c2.n * c1.k).abs())
}

/// Linear combination of threaded curves times boundary monomials
/// `d0^i d1^j`, plus a boundary polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveExpansion {
    pub terms: BTreeMap<(CurveIndex, (u32, u32)), HalfLaurent>,
    pub scalar: BTreeMap<(u32, u32), HalfLaurent>,
}

impl CurveExpansion {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn curve(c: CurveIndex) -> Self {
        let mut out = Self::zero();
        out.add_curve(c, (0, 0), HalfLaurent::one());
        out
    }

    pub fn from_scalar(c: &CoeffElem) -> Result<Self> {
        let mut out = Self::zero();
        out.add_scalar_elem(c)?;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.scalar.is_empty()
    }

    pub fn add_curve(&mut self, c: CurveIndex, dpow: (u32, u32), k: HalfLaurent) {
        let slot = self.terms.entry((c, dpow)).or_default();
        *slot = &*slot + &k;
        if slot.is_zero() {
            self.terms.remove(&(c, dpow));
        }
    }

    pub fn add_scalar(&mut self, dpow: (u32, u32), k: HalfLaurent) {
        let slot = self.scalar.entry(dpow).or_default();
        *slot = &*slot + &k;
        if slot.is_zero() {
            self.scalar.remove(&dpow);
        }
    }

    fn add_scalar_elem(&mut self, c: &CoeffElem) -> Result<()> {
        for (dp, k) in boundary_parts(c)? {
            self.add_scalar(dp, k);
        }
        Ok(())
    }

    /// Adds `coeff * (n, k)_T`; `(0, 0)_T = 2`.
    pub fn add_pair(&mut self, n: i64, k: i64, coeff: &CoeffElem) -> Result<()> {
        match classify(n, k) {
            Ok(c) => {
                for (dp, v) in boundary_parts(coeff)? {
                    self.add_curve(c, dp, v);
                }
                Ok(())
            }
            Err(_) => self.add_scalar_elem(&coeff.scale(&2.into())),
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &CurveExpansion) {
        for ((c, dp), k) in &rhs.terms {
            self.add_curve(*c, *dp, k.clone());
        }
        for (dp, k) in &rhs.scalar {
            self.add_scalar(*dp, k.clone());
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&CoeffElem::constant(-1))
    }

    /// Multiplies by a scalar in `Z[A^(±1/2), d0, d1]`.
    pub fn scale(&self, s: &CoeffElem) -> Self {
        let parts = boundary_parts(s).expect("boundary scalar");
        let mut out = Self::zero();
        for ((c, (i, j)), k) in &self.terms {
            for ((a, b), v) in &parts {
                out.add_curve(*c, (i + a, j + b), k * v);
            }
        }
        for ((i, j), k) in &self.scalar {
            for ((a, b), v) in &parts {
                out.add_scalar((i + a, j + b), k * v);
            }
        }
        out
    }

    /// Largest `|n| + |k|` among curves present.
    pub fn max_index(&self) -> i64 {
        self.terms.keys().map(|(c, _)| c.n.abs().max(c.k.abs())).max().unwrap_or(0)
    }

    /// Realizes the expansion as an element of the specialized algebra.
    pub fn collect(&self) -> Result<SkeinElem> {
        let mut out = SkeinElem::zero();
        for ((c, (i, j)), k) in &self.terms {
            let s = boundary_coeff(*i, *j, k);
            out.add_assign_ref(&realize(*c, Variant::Threaded)?.scale(&s));
        }
        for ((i, j), k) in &self.scalar {
            out.add_term(Vec::new(), boundary_coeff(*i, *j, k));
        }
        Ok(out)
    }
}

fn boundary_coeff(i: u32, j: u32, k: &HalfLaurent) -> CoeffElem {
    CoeffElem::from_boundary_parts([(&(i, j), k)])
}

fn boundary_parts(c: &CoeffElem) -> Result<BTreeMap<(u32, u32), HalfLaurent>> {
    c.split_boundary().ok_or_else(|| {
        Error::InvalidArgument(format!("coefficient {c} involves puncture weights"))
    })
}

impl fmt::Display for CurveExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dmono = |i: u32, j: u32| {
            let mut s = String::new();
            for (name, e) in [("d0", i), ("d1", j)] {
                match e {
                    0 => {}
                    1 => s.push_str(&format!("*{name}")),
                    _ => s.push_str(&format!("*{name}^{e}")),
                }
            }
            s
        };
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|((c, (i, j)), k)| format!("({k}){}*{c}_T", dmono(*i, *j)))
            .collect();
        for ((i, j), k) in &self.scalar {
            parts.push(format!("({k}){}", dmono(*i, *j)));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct CurveTermJson {
    curve: CurveIndex,
    threaded: bool,
    dpow: [u32; 2],
    coeff: HalfLaurent,
}

#[derive(Serialize, Deserialize)]
struct ScalarTermJson {
    dpow: [u32; 2],
    coeff: HalfLaurent,
}

#[derive(Serialize, Deserialize)]
struct CurveExpansionJson {
    terms: Vec<CurveTermJson>,
    scalar: Vec<ScalarTermJson>,
}

impl Serialize for CurveExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CurveExpansionJson {
            terms: self
                .terms
                .iter()
                .map(|((c, (i, j)), k)| CurveTermJson {
                    curve: *c,
                    threaded: true,
                    dpow: [*i, *j],
                    coeff: k.clone(),
                })
                .collect(),
            scalar: self
                .scalar
                .iter()
                .map(|((i, j), k)| ScalarTermJson { dpow: [*i, *j], coeff: k.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CurveExpansionJson::deserialize(d)?;
        let mut out = CurveExpansion::zero();
        for t in raw.terms {
            if !t.threaded {
                return Err(D::Error::custom("only threaded curve terms are supported"));
            }
            out.add_curve(t.curve, (t.dpow[0], t.dpow[1]), t.coeff);
        }
        for t in raw.scalar {
            out.add_scalar((t.dpow[0], t.dpow[1]), t.coeff);
        }
        Ok(out)
    }
}

/// The three-generator presentation with `v1 = v2 = 1`.
pub fn specialized_system() -> &'static RewriteSystem {
    static CELL: OnceLock<RewriteSystem> = OnceLock::new();
    CELL.get_or_init(|| {
        let trivial = Specialization::trivial_punctures();
        presentation(PresentationId::Ry022ThreeGen)
            .map_scalars("ry022-3gen-v1", |c| match specialize(c, &trivial)? {
                Specialized::Exact(v) => Ok(v),
                Specialized::Numeric(_) => unreachable!("exact specialization"),
            })
            .expect("specialized rules stay order compatible")
    })
}

/// Sets `v1 = v2 = 1` in an element of the three-generator presentation
/// and reduces in [`specialized_system`].
pub fn specialize_punctures(x: &SkeinElem) -> Result<SkeinElem> {
    let trivial = Specialization::trivial_punctures();
    let mut out = SkeinElem::zero();
    for (w, c) in x.terms() {
        match specialize(c, &trivial)? {
            Specialized::Exact(v) => out.add_term(w.clone(), v),
            Specialized::Numeric(_) => unreachable!("exact specialization"),
        }
    }
    specialized_system().reduce(&out)
}

/// `d0 + d1`.
pub fn boundary_sum() -> CoeffElem {
    CoeffElem::d0() + CoeffElem::d1()
}

/// Product of two curves whose determinant is `±1`:
/// `A^det (c1+c2) + A^-det (c1-c2) + [both arcs](d0 + d1)`.
pub fn det1_product(c1: CurveIndex, c2: CurveIndex) -> Result<CurveExpansion> {
    det1_product_pairs((c1.n, c1.k), (c2.n, c2.k))
}

fn det1_product_pairs((n1, k1): (i64, i64), (n2, k2): (i64, i64)) -> Result<CurveExpansion> {
    let det = n1 * k2 - n2 * k1;
    if det.abs() != 1 {
        return Err(Error::InvalidArgument(format!(
            "determinant of ({n1},{k1}) and ({n2},{k2}) is {det}, not ±1"
        )));
    }
    let arcs = classify(n1, k1)?.is_arc() && classify(n2, k2)?.is_arc();
    let mut out = CurveExpansion::zero();
    out.add_pair(n1 + n2, k1 + k2, &CoeffElem::a_pow(det))?;
    out.add_pair(n1 - n2, k1 - k2, &CoeffElem::a_pow(-det))?;
    if arcs {
        out.add_scalar((1, 0), HalfLaurent::one());
        out.add_scalar((0, 1), HalfLaurent::one());
    }
    Ok(out)
}

type Cache = Mutex<HashMap<(CurveIndex, u8), Arc<SkeinElem>>>;

fn realization_cache() -> &'static Cache {
    static CELL: OnceLock<Cache> = OnceLock::new();
    CELL.get_or_init(|| Mutex::new(HashMap::new()))
}

fn variant_tag(v: Variant) -> u8 {
    match v {
        Variant::Geometric => 0,
        Variant::Power => 1,
        Variant::Threaded => 2,
    }
}

/// Threaded curve `(n, k)_T` for any pair, with `(0, 0)_T = T_0 = 2`.
pub fn realize_pair(n: i64, k: i64) -> Result<Arc<SkeinElem>> {
    match classify(n, k) {
        Ok(c) => realize(c, Variant::Threaded),
        Err(_) => Ok(Arc::new(SkeinElem::scalar(CoeffElem::constant(2)))),
    }
}

fn realize_primitive(c: CurveIndex) -> Result<SkeinElem> {
    let sys = specialized_system();
    match (c.n, c.k) {
        (0, 1) => return Ok(sys.gen("a")),
        (1, 0) => return Ok(sys.gen("b")),
        (1, 1) => return Ok(sys.gen("g")),
        (1, -1) => return sys.parse("A^-1*(a*b - A^-1*g - d0 - d1)"),
        _ => {}
    }
    let ((u, v), (w, z), e) = primitive_split(c.n, c.k);
    let arcs = classify(u, v)?.is_arc() && classify(w, z)?.is_arc();
    let prod = sys.mul(&*realize_pair(u, v)?, &*realize_pair(w, z)?)?;
    // c1*c2 = A^e c + A^-e (c1 - c2) + [arcs](d0 + d1)
    let mut rest = &prod - &realize_pair(u - w, v - z)?.scale(&CoeffElem::a_pow(-e));
    if arcs {
        rest.add_term(Vec::new(), -boundary_sum());
    }
    Ok(rest.scale(&CoeffElem::a_pow(-e)))
}

/// Normal form (three generators, `v1 = v2 = 1`) of the curve element.
pub fn realize(c: CurveIndex, variant: Variant) -> Result<Arc<SkeinElem>> {
    let d = c.depth();
    let variant = if d == 1 { Variant::Threaded } else { variant };
    let key = (c, variant_tag(variant));
    if let Some(hit) = realization_cache().lock().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let sys = specialized_system();
    let value = match variant {
        _ if d == 1 => realize_primitive(c)?,
        Variant::Threaded => sys.chebyshev(d as u32, &*realize(c.primitive(), variant)?, false)?,
        Variant::Power => sys.pow(&*realize(c.primitive(), variant)?, d as u32)?,
        Variant::Geometric => {
            let prim = realize(c.primitive(), Variant::Threaded)?;
            if c.primitive().is_arc() {
                // arc^(d mod 2) * loop^(d div 2), the loop around the arc being T_2(arc)
                let lp = sys.chebyshev(2, &prim, false)?;
                let loops = sys.pow(&lp, (d / 2) as u32)?;
                if d % 2 == 1 { sys.mul(&prim, &loops)? } else { loops }
            } else {
                sys.pow(&prim, d as u32)?
            }
        }
    };
    let value = Arc::new(value);
    realization_cache().lock().expect("cache lock").insert(key, value.clone());
    Ok(value)
}

fn curve_of_leading(w: &[u8]) -> Option<CurveIndex> {
    // letters: b = 0, a = 1, g = 2
    let mut e = [0i64; 3];
    for &l in w {
        e[l as usize] += 1;
    }
    match e {
        [0, 0, 0] => None,
        [b, a, 0] => classify(b, -a).ok(),
        [b, 0, g] => classify(b + g, g).ok(),
        [0, a, g] => classify(g, a + g).ok(),
        _ => None,
    }
}

fn leading<'a>(sys: &RewriteSystem, x: &'a SkeinElem) -> Option<(&'a Word, &'a CoeffElem)> {
    x.terms().max_by_key(|(w, _)| sys.order_key(w))
}

/// Expands an element of the specialized algebra in the threaded basis over
/// `Z[A^(±1/2), d0, d1]`.
pub fn expand_in_curves(x: &SkeinElem) -> Result<CurveExpansion> {
    let sys = specialized_system();
    let mut rest = sys.reduce(x)?;
    let mut out = CurveExpansion::zero();
    let mut steps = 0usize;
    while let Some((w, c)) = leading(sys, &rest) {
        let (w, c) = (w.clone(), c.clone());
        steps += 1;
        let Some(curve) = curve_of_leading(&w) else {
            if !w.is_empty() {
                return Err(Error::NotInSpan(steps));
            }
            out.add_scalar_elem(&c)?;
            break;
        };
        let r = realize(curve, Variant::Threaded)?;
        let (rw, rc) = leading(sys, &r).expect("realizations are nonzero");
        if *rw != w {
            return Err(Error::NotInSpan(steps));
        }
        let factor = c.div_unit(rc)?;
        for (dp, k) in boundary_parts(&factor)? {
            out.add_curve(curve, dp, k);
        }
        rest = &rest - &r.scale(&factor);
    }
    Ok(out)
}

/// Coefficients `g_j` with `T_d(c) = sum_j g_j (j c)_g` for a primitive curve
/// `c`; `j = 0` stands for the empty curve.
pub fn threaded_in_geometric(d: u32, arc: bool) -> Vec<BigInt> {
    let cheb = chebyshev_coefficients(d, false);
    if !arc {
        return cheb;
    }
    // θ^(2m+e) = θ^e (ω + 2)^m with ω = θ^2 - 2
    let mut out = vec![BigInt::zero(); cheb.len()];
    for (j, c) in cheb.iter().enumerate() {
        let (m, e) = (j / 2, j % 2);
        let mut binom = BigInt::one();
        for i in 0..=m {
            let pow2 = BigInt::from(2).pow((m - i) as u32);
            out[2 * i + e] += c * &binom * pow2;
            binom = binom * (m - i) / (i + 1);
        }
    }
    out
}

/// Product of two threaded curves, by realization and expansion.
pub fn curve_product(c1: CurveIndex, c2: CurveIndex) -> Result<CurveExpansion> {
    let sys = specialized_system();
    let prod = sys.mul(&*realize(c1, Variant::Threaded)?, &*realize(c2, Variant::Threaded)?)?;
    expand_in_curves(&prod)
}

/// Product of two expansions, by realization and expansion.
pub fn expansion_product(x: &CurveExpansion, y: &CurveExpansion) -> Result<CurveExpansion> {
    let sys = specialized_system();
    expand_in_curves(&sys.mul(&x.collect()?, &y.collect()?)?)
}

/// Lowers expressions into the puncture-specialized system, with `C(n,k)`
/// read as the threaded curve `(n, k)`.
pub struct CurveLowering;

impl Lowering for CurveLowering {
    type Out = SkeinElem;

    fn scalar(&self, c: CoeffElem) -> SkeinElem {
        SkeinElem::scalar(c)
    }

    fn generator(&self, name: &str) -> Option<SkeinElem> {
        specialized_system().alphabet().letter(name).map(SkeinElem::gen)
    }

    fn curve(&self, n: i64, k: i64) -> Result<SkeinElem> {
        Ok((*realize_pair(n, k)?).clone())
    }

    fn add(&self, x: &SkeinElem, y: &SkeinElem) -> SkeinElem {
        x + y
    }

    fn neg(&self, x: &SkeinElem) -> SkeinElem {
        -x
    }

    fn mul(&self, x: &SkeinElem, y: &SkeinElem) -> Result<SkeinElem> {
        specialized_system().mul(x, y)
    }
}

/// Parses a curve-aware expression and expands it in threaded curves.
pub fn parse_curves(src: &str) -> Result<CurveExpansion> {
    expand_in_curves(&parse_with(src, &CurveLowering)?)
}
