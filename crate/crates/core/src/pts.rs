//! Frohman-Gelca discrepancies for the specialized algebra: the oracle
//! definition, the recursion, closed forms for covered families and
//! positivity scans of products in the threaded basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{quantum_int, signed_quantum_int, CoeffElem, HalfLaurent};
use crate::curves::{
    classify, expand_in_curves, lambda_act, realize_pair, specialized_system, CurveExpansion, CurveIndex,
    LambdaMatrix, threaded_in_geometric,
};
use crate::error::{Error, Result};

/// Discrepancy argument `[[n1, n2], [k1, k2]]`: columns are the two curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[[i64; 2]; 2]", from = "[[i64; 2]; 2]")]
pub struct DiscArg {
    pub n1: i64,
    pub n2: i64,
    pub k1: i64,
    pub k2: i64,
}

impl From<[[i64; 2]; 2]> for DiscArg {
    fn from(m: [[i64; 2]; 2]) -> Self {
        Self { n1: m[0][0], n2: m[0][1], k1: m[1][0], k2: m[1][1] }
    }
}

impl From<DiscArg> for [[i64; 2]; 2] {
    fn from(d: DiscArg) -> Self {
        [[d.n1, d.n2], [d.k1, d.k2]]
    }
}

impl DiscArg {
    /// Row-major constructor, `[[n1, n2], [k1, k2]]`.
    pub fn new(n1: i64, n2: i64, k1: i64, k2: i64) -> Self {
        Self { n1, n2, k1, k2 }
    }

    pub fn det(&self) -> i64 {
        self.n1 * self.k2 - self.n2 * self.k1
    }

    pub fn left(&self) -> (i64, i64) {
        (self.n1, self.k1)
    }

    pub fn right(&self) -> (i64, i64) {
        (self.n2, self.k2)
    }
}

impl fmt::Display for DiscArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[[{},{}],[{},{}]]", self.n1, self.n2, self.k1, self.k2)
    }
}

/// `d0 + d1` as an expansion.
pub fn boundary_sum() -> CurveExpansion {
    let mut out = CurveExpansion::zero();
    out.add_scalar((1, 0), HalfLaurent::one());
    out.add_scalar((0, 1), HalfLaurent::one());
    out
}

/// `d0 d1 + (A + A^-1)^2` as an expansion.
pub fn boundary_tilde() -> CurveExpansion {
    let mut out = CurveExpansion::zero();
    out.add_scalar((1, 1), HalfLaurent::one());
    out.add_scalar((0, 0), (&HalfLaurent::a_pow(1) + &HalfLaurent::a_pow(-1)).pow(2));
    out
}

fn laurent(h: &HalfLaurent) -> CoeffElem {
    CoeffElem::from_laurent(h)
}

fn threaded(n: i64, k: i64) -> CurveExpansion {
    let mut out = CurveExpansion::zero();
    out.add_pair(n, k, &CoeffElem::one()).expect("boundary scalar");
    out
}

/// Normalized Chebyshev `T̄_j` of the curve `(n, k)`: `T̄_0 = 1`.
fn tbar(j: i64, (n, k): (i64, i64)) -> CurveExpansion {
    if j == 0 {
        let mut out = CurveExpansion::zero();
        out.add_scalar((0, 0), HalfLaurent::one());
        out
    } else {
        threaded(j * n, j * k)
    }
}

fn is_arc(n: i64, k: i64) -> bool {
    classify(n, k).map(|c| c.is_arc()).unwrap_or(false)
}

/// The two torus-style terms `A^det (c1 + c2)_T + A^-det (c1 - c2)_T`.
pub fn fg_terms(arg: DiscArg) -> Result<CurveExpansion> {
    let det = arg.det();
    let mut out = CurveExpansion::zero();
    out.add_pair(arg.n1 + arg.n2, arg.k1 + arg.k2, &CoeffElem::a_pow(det))?;
    out.add_pair(arg.n1 - arg.n2, arg.k1 - arg.k2, &CoeffElem::a_pow(-det))?;
    Ok(out)
}

/// Product of two threaded curves by realization, multiplication and
/// expansion; zero pairs stand for `T_0 = 2`.
pub fn product_oracle((n1, k1): (i64, i64), (n2, k2): (i64, i64)) -> Result<CurveExpansion> {
    let sys = specialized_system();
    expand_in_curves(&sys.mul(&*realize_pair(n1, k1)?, &*realize_pair(n2, k2)?)?)
}

/// Discrepancy by its definition: the product minus the two torus terms.
pub fn discrepancy_oracle(arg: DiscArg) -> Result<CurveExpansion> {
    let mut out = product_oracle(arg.left(), arg.right())?;
    out.add_assign_ref(&fg_terms(arg)?.neg());
    Ok(out)
}

/// Discrepancies with determinant `0` or `±1`.
pub fn discrepancy_easy(arg: DiscArg) -> Option<CurveExpansion> {
    match arg.det().abs() {
        0 => Some(CurveExpansion::zero()),
        1 if is_arc(arg.n1, arg.k1) && is_arc(arg.n2, arg.k2) => Some(boundary_sum()),
        1 => Some(CurveExpansion::zero()),
        _ => None,
    }
}

/// Representative of `p mod 4` in `{-1, 0, 1, 2}`.
pub fn residue4(p: i64) -> i64 {
    match p.rem_euclid(4) {
        3 => -1,
        r => r,
    }
}

/// `D[[p+1, 0], [0, 1]]` for `p >= 1`.
pub fn discrepancy_p001(p: i64) -> Result<CurveExpansion> {
    if p < 1 {
        return Err(Error::UncoveredFamily(format!("D[[{},0],[0,1]] needs p >= 1", p + 1)));
    }
    let mut out = CurveExpansion::zero();
    for j in 0..=p / 2 {
        out.add_assign_ref(&tbar(p - 2 * j, (1, 0)).scale(&laurent(&quantum_int(2 * j + 1)?)));
    }
    Ok(times_boundary_sum(&out))
}

fn times_boundary_sum(x: &CurveExpansion) -> CurveExpansion {
    x.scale(&(CoeffElem::d0() + CoeffElem::d1()))
}

/// `D[[1, p], [0, 2]]` for `p >= 1`.
pub fn discrepancy_1p02(p: i64) -> Result<CurveExpansion> {
    if p < 1 {
        return Err(Error::UncoveredFamily(format!("D[[1,{p}],[0,2]] needs p >= 1")));
    }
    let r = residue4(p);
    let mut out = CurveExpansion::zero();
    if r != 2 {
        out.add_assign_ref(&times_boundary_sum(&threaded((p + r) / 2, 1).scale(&CoeffElem::a_pow(r))));
    }
    if r == 1 || r == -1 {
        out.add_assign_ref(&boundary_tilde());
    }
    Ok(out)
}

/// Coefficient `a(p, k)` of `(d0 + d1)(k, 1)` in `D[[p+1, 0], [1, 1]]`.
pub fn coeff_a(p: i64, k: i64) -> HalfLaurent {
    if k < 1 || k > p || (p - k).rem_euclid(2) != 0 {
        return HalfLaurent::zero();
    }
    let m = if 2 * k <= p { k } else { p - k + 1 };
    &HalfLaurent::a_pow(m) * &signed_quantum_int(m, 2)
}

/// Coefficient `b(p, k)` of `(d0 + d1)^2 T̄_k((1, 0))`.
pub fn coeff_b(p: i64, k: i64) -> HalfLaurent {
    if k < 0 || k > p - 3 || (p - 3 - k).rem_euclid(2) != 0 {
        return HalfLaurent::zero();
    }
    let m = p - k;
    let r = residue4(m);
    let mut inner = HalfLaurent::zero();
    if r == -1 {
        inner = HalfLaurent::constant((m + 1) / 4);
    }
    for h in 1..=(m + r - 2) / 4 {
        let q = &signed_quantum_int(m - 4 * h + 2, 2) + &signed_quantum_int(m - 4 * h, 2);
        inner = &inner + &q.scale(&h.into());
    }
    &HalfLaurent::a_pow(-k) * &inner
}

/// Coefficient `c(p, k)` of `(d0 d1 + (A + A^-1)^2) T̄_k((1, 0))`.
pub fn coeff_c(p: i64, k: i64) -> HalfLaurent {
    if k < 0 || k > p - 1 || (p - 1 - k).rem_euclid(2) != 0 {
        return HalfLaurent::zero();
    }
    &HalfLaurent::a_pow(-k) * &signed_quantum_int((p - k + 1) / 2, 4)
}

/// `D[[p+1, 0], [1, 1]]` for `p >= 0`.
pub fn discrepancy_p011(p: i64) -> Result<CurveExpansion> {
    if p < 0 {
        return Err(Error::UncoveredFamily(format!("D[[{},0],[1,1]] needs p >= 0", p + 1)));
    }
    let sum = boundary_sum();
    let sum2 = sum.scale(&(CoeffElem::d0() + CoeffElem::d1()));
    let tilde = boundary_tilde();
    let mut out = CurveExpansion::zero();
    for k in 0..=p {
        let a = coeff_a(p, k);
        if !a.is_zero() {
            out.add_assign_ref(&times_boundary_sum(&threaded(k, 1)).scale(&laurent(&a)));
        }
        for (coeff, factor) in [(coeff_b(p, k), &sum2), (coeff_c(p, k), &tilde)] {
            if !coeff.is_zero() {
                out.add_assign_ref(&expansion_mul(factor, &tbar(k, (1, 0))).scale(&laurent(&coeff)));
            }
        }
    }
    Ok(out)
}

/// Product of a boundary polynomial with an expansion.
fn expansion_mul(scalar: &CurveExpansion, x: &CurveExpansion) -> CurveExpansion {
    debug_assert!(scalar.terms.is_empty());
    let mut out = CurveExpansion::zero();
    for ((i, j), k) in &scalar.scalar {
        let mono = CoeffElem::from_boundary_parts([(&(*i, *j), k)]);
        out.add_assign_ref(&x.scale(&mono));
    }
    out
}

fn dmono(dp: (u32, u32), k: &HalfLaurent) -> CoeffElem {
    CoeffElem::from_boundary_parts([(&dp, k)])
}

/// Product of two threaded curves when the discrepancy is a determinant
/// `0` or `±1` leaf.
pub fn easy_product(arg: DiscArg) -> Option<Result<CurveExpansion>> {
    let d = discrepancy_easy(arg)?;
    Some(fg_terms(arg).map(|mut out| {
        out.add_assign_ref(&d);
        out
    }))
}

/// `c * x` (left) or `x * c` (right) using only determinant `0`/`±1` products.
fn mul_by_curve(c: (i64, i64), x: &CurveExpansion, left: bool) -> Result<CurveExpansion> {
    let mut out = CurveExpansion::zero();
    for ((t, dp), k) in &x.terms {
        let arg = if left {
            DiscArg::new(c.0, t.n(), c.1, t.k())
        } else {
            DiscArg::new(t.n(), c.0, t.k(), c.1)
        };
        let prod = easy_product(arg).ok_or_else(|| Error::MissingLeaf(arg.to_string()))??;
        out.add_assign_ref(&prod.scale(&dmono(*dp, k)));
    }
    for (dp, k) in &x.scalar {
        out.add_assign_ref(&threaded(c.0, c.1).scale(&dmono(*dp, k)));
    }
    Ok(out)
}

/// Leaf discrepancies: determinant `0`/`±1`, and `D[[1, p], [0, 2]]`.
fn leaf(arg: DiscArg) -> Result<CurveExpansion> {
    if let Some(d) = discrepancy_easy(arg) {
        return Ok(d);
    }
    if (arg.n1, arg.k1, arg.k2) == (1, 0, 2) && arg.n2 >= 1 {
        return discrepancy_1p02(arg.n2);
    }
    Err(Error::MissingLeaf(arg.to_string()))
}

/// Memoized five-term recursion for `D[[m, 0], [q, 1]]`.
#[derive(Default)]
pub struct Recursion {
    memo: RwLock<HashMap<DiscArg, CurveExpansion>>,
}

impl Recursion {
    pub fn new() -> Self {
        Self::default()
    }

    /// `D[[p+1, 0], [q, 1]]`; leaves are available for `q` in `{0, 1}`.
    pub fn discrepancy(&self, p: i64, q: i64) -> Result<CurveExpansion> {
        if p < -1 {
            return Err(Error::InvalidArgument(format!("recursion needs p >= -1, got {p}")));
        }
        let arg = DiscArg::new(p + 1, 0, q, 1);
        if let Some(hit) = self.memo.read().expect("memo lock").get(&arg) {
            return Ok(hit.clone());
        }
        let value = if p <= 0 { leaf(arg)? } else { self.step(p, q)? };
        self.memo.write().expect("memo lock").insert(arg, value.clone());
        Ok(value)
    }

    fn step(&self, p: i64, q: i64) -> Result<CurveExpansion> {
        let a = |e: i64| CoeffElem::a_pow(e);
        let mut out = mul_by_curve((1, 0), &self.discrepancy(p - 1, q)?, true)?.scale(&a(-q));
        out.add_assign_ref(&self.discrepancy(p - 2, q)?.scale(&a(-2 * q)).neg());
        out.add_assign_ref(&leaf(DiscArg::new(1, p, 0, q - 1))?.scale(&a(-p - q)));
        let mid = mul_by_curve((0, 1), &leaf(DiscArg::new(1, p, 0, q))?, false)?;
        out.add_assign_ref(&mid.scale(&a(-q)).neg());
        out.add_assign_ref(&leaf(DiscArg::new(1, p, 0, q + 1))?.scale(&a(p - q)));
        Ok(out)
    }
}

/// Applies `M` in `Λ` to every curve of an expansion; boundary parts are
/// symmetric in `d0, d1` here and so are fixed.
pub fn lambda_transport(m: &LambdaMatrix, x: &CurveExpansion) -> CurveExpansion {
    let mut out = CurveExpansion::zero();
    for ((c, dp), k) in &x.terms {
        out.add_curve(lambda_act(m, *c), *dp, k.clone());
    }
    for (dp, k) in &x.scalar {
        out.add_scalar(*dp, k.clone());
    }
    out
}

/// Arc pair `(N1, K1)`, `(N2, K2)` with `N1 K2 - N2 K1 = 1`, or an error.
fn arc_pair(c1: (i64, i64), c2: (i64, i64)) -> Result<((i64, i64), (i64, i64))> {
    let det = c1.0 * c2.1 - c2.0 * c1.1;
    if !is_arc(c1.0, c1.1) || !is_arc(c2.0, c2.1) || det.abs() != 1 {
        return Err(Error::UncoveredFamily(format!(
            "T_p{c1:?} * {c2:?} needs two arcs with determinant ±1"
        )));
    }
    Ok((c1, if det == 1 { c2 } else { (-c2.0, -c2.1) }))
}

/// `T_p((N1, K1)) * (N2, K2)` for arcs with determinant `±1`, `p >= 1`:
/// `A^p (pN1+N2, pK1+K2)_T + A^-p (pN1-N2, pK1-K2)_T
///  + (d0 + d1) sum_k [2k+1]_A T̄_(p-1-2k)((N1, K1))`.
pub fn arc_power_product(p: i64, c1: (i64, i64), c2: (i64, i64)) -> Result<CurveExpansion> {
    if p < 1 {
        return Err(Error::UncoveredFamily(format!("T_{p} needs p >= 1")));
    }
    let (c1, c2) = arc_pair(c1, c2)?;
    let mut out = fg_terms(DiscArg::new(p * c1.0, c2.0, p * c1.1, c2.1))?;
    let mut sum = CurveExpansion::zero();
    for k in 0..=(p - 1) / 2 {
        sum.add_assign_ref(&tbar(p - 1 - 2 * k, c1).scale(&laurent(&quantum_int(2 * k + 1)?)));
    }
    out.add_assign_ref(&times_boundary_sum(&sum));
    Ok(out)
}

/// Element of `Λ` sending `(1, 0)` to `(N1, K1)` and `(0, 1)` to `(N2, K2)`.
pub fn transport_matrix(c1: (i64, i64), c2: (i64, i64)) -> Result<LambdaMatrix> {
    let ((n1, k1), (n2, k2)) = arc_pair(c1, c2)?;
    LambdaMatrix::new(n2 + k2, (n1 + k1 - n2 - k2) / 2, 2 * n2, n1 - n2)
}

/// The same product obtained by transporting `D[[p, 0], [0, 1]]` with
/// [`transport_matrix`].
pub fn arc_power_product_transported(p: i64, c1: (i64, i64), c2: (i64, i64)) -> Result<CurveExpansion> {
    if p < 1 {
        return Err(Error::UncoveredFamily(format!("T_{p} needs p >= 1")));
    }
    let (c1, c2) = arc_pair(c1, c2)?;
    let base = if p == 1 { boundary_sum() } else { discrepancy_p001(p - 1)? };
    let mut out = fg_terms(DiscArg::new(p * c1.0, c2.0, p * c1.1, c2.1))?;
    out.add_assign_ref(&lambda_transport(&transport_matrix(c1, c2)?, &base));
    Ok(out)
}

/// Which closed form produced a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedForm {
    /// Determinant `0` or `±1`.
    Easy,
    /// `T_p` of an arc times an arc with determinant `±1`.
    ArcPower,
    /// `(1, 0) * (p, 2)`.
    OnePTwo,
    /// `(p+1, 1) * (0, 1)`.
    POneOne,
}

/// Closed-form product of two threaded curves, when one applies.
pub fn product_closed(c1: CurveIndex, c2: CurveIndex) -> Option<(ClosedForm, Result<CurveExpansion>)> {
    let arg = DiscArg::new(c1.n(), c2.n(), c1.k(), c2.k());
    if let Some(v) = easy_product(arg) {
        return Some((ClosedForm::Easy, v));
    }
    let with_d = |d: Result<CurveExpansion>| {
        d.and_then(|d| {
            let mut out = fg_terms(arg)?;
            out.add_assign_ref(&d);
            Ok(out)
        })
    };
    let (n1, k1, n2, k2) = (c1.n(), c1.k(), c2.n(), c2.k());
    if (n1, k1) == (1, 0) && k2 == 2 && n2 >= 1 {
        return Some((ClosedForm::OnePTwo, with_d(discrepancy_1p02(n2))));
    }
    if k1 == 1 && n1 >= 1 && (n2, k2) == (0, 1) {
        return Some((ClosedForm::POneOne, with_d(discrepancy_p011(n1 - 1))));
    }
    let prim = c1.primitive();
    if prim.is_arc() && c2.is_primitive() && c2.is_arc() && (prim.n() * k2 - n2 * prim.k()).abs() == 1 {
        let v = arc_power_product(c1.depth(), (prim.n(), prim.k()), (n2, k2));
        return Some((ClosedForm::ArcPower, v));
    }
    None
}

/// Product of two threaded curves with provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductToSum {
    pub left: CurveIndex,
    pub right: CurveIndex,
    pub value: CurveExpansion,
    /// Closed form that was also evaluated and agreed with the oracle.
    pub closed_form: Option<ClosedForm>,
}

/// Full product of two threaded curves. The oracle always runs; when a
/// closed form applies it is compared and a disagreement is an error.
pub fn product_to_sum(c1: CurveIndex, c2: CurveIndex) -> Result<ProductToSum> {
    let value = product_oracle((c1.n(), c1.k()), (c2.n(), c2.k()))?;
    let closed_form = match product_closed(c1, c2) {
        Some((kind, closed)) => {
            if closed? != value {
                return Err(Error::Disagreement(format!("{c1}*{c2}: closed form {kind:?} differs from oracle")));
            }
            Some(kind)
        }
        None => None,
    };
    Ok(ProductToSum { left: c1, right: c2, value, closed_form })
}

/// Coordinate system of a positivity view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coords {
    /// Geometric curves with monomials `d0^i d1^j`.
    Raw,
    /// Threaded curves with monomials `(d0 + d1)^i (d0 d1 + (A + A^-1)^2)^j`.
    Grouped,
}

/// One coefficient of a coordinate view; `curve = None` is the empty curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordTerm {
    pub curve: Option<CurveIndex>,
    pub dpow: [u32; 2],
    pub coeff: HalfLaurent,
}

/// An expansion written in one of the two coordinate systems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CoordJson", from = "CoordJson")]
pub struct CoordExpansion {
    pub coords: Coords,
    pub terms: BTreeMap<(Option<CurveIndex>, (u32, u32)), HalfLaurent>,
}

#[derive(Serialize, Deserialize)]
struct CoordJson {
    coords: Coords,
    terms: Vec<CoordTerm>,
}

impl From<CoordExpansion> for CoordJson {
    fn from(x: CoordExpansion) -> Self {
        CoordJson { coords: x.coords, terms: x.iter().collect() }
    }
}

impl From<CoordJson> for CoordExpansion {
    fn from(j: CoordJson) -> Self {
        let mut out = CoordExpansion::new(j.coords);
        for t in j.terms {
            out.add(t.curve, (t.dpow[0], t.dpow[1]), &t.coeff);
        }
        out
    }
}

impl CoordExpansion {
    pub fn new(coords: Coords) -> Self {
        Self { coords, terms: BTreeMap::new() }
    }

    pub fn add(&mut self, curve: Option<CurveIndex>, dp: (u32, u32), k: &HalfLaurent) {
        let slot = self.terms.entry((curve, dp)).or_default();
        *slot = &*slot + k;
        if slot.is_zero() {
            self.terms.remove(&(curve, dp));
        }
    }

    pub fn get(&self, curve: Option<CurveIndex>, dp: (u32, u32)) -> HalfLaurent {
        self.terms.get(&(curve, dp)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = CoordTerm> + '_ {
        self.terms.iter().map(|((curve, (i, j)), k)| CoordTerm { curve: *curve, dpow: [*i, *j], coeff: k.clone() })
    }

    /// Coefficients outside `Z>=0[A^(±1/2)]`.
    pub fn negatives(&self) -> Vec<CoordTerm> {
        self.iter().filter(|t| !t.coeff.is_nonnegative()).collect()
    }

    pub fn is_positive(&self) -> bool {
        self.terms.values().all(HalfLaurent::is_nonnegative)
    }
}

impl fmt::Display for CoordExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = match self.coords {
            Coords::Raw => ["d0", "d1"],
            Coords::Grouped => ["D", "D~"],
        };
        let parts: Vec<String> = self
            .iter()
            .map(|t| {
                let mut s = format!("({})", t.coeff);
                for (name, e) in names.iter().zip(t.dpow) {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{name}")),
                        _ => s.push_str(&format!("*{name}^{e}")),
                    }
                }
                if let Some(c) = t.curve {
                    s.push_str(&format!("*{c}"));
                }
                s
            })
            .collect();
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// The expansion in geometric curves and raw boundary monomials.
pub fn raw_coordinates(x: &CurveExpansion) -> CoordExpansion {
    let mut out = CoordExpansion::new(Coords::Raw);
    for ((c, dp), k) in &x.terms {
        let prim = c.primitive();
        for (j, g) in threaded_in_geometric(c.depth() as u32, prim.is_arc()).iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let curve = (j > 0).then(|| classify(prim.n() * j as i64, prim.k() * j as i64).expect("nonzero"));
            out.add(curve, *dp, &k.scale(g));
        }
    }
    for (dp, k) in &x.scalar {
        out.add(None, *dp, k);
    }
    out
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Rewrites a symmetric polynomial in `d0, d1` in terms of
/// `D = d0 + d1` and `D~ = d0 d1 + (A + A^-1)^2`; `None` if not symmetric.
pub fn group_boundary(poly: &BTreeMap<(u32, u32), HalfLaurent>) -> Option<BTreeMap<(u32, u32), HalfLaurent>> {
    let shift = (&HalfLaurent::a_pow(1) + &HalfLaurent::a_pow(-1)).pow(2);
    let mut rest = poly.clone();
    rest.retain(|_, k| !k.is_zero());
    let mut out: BTreeMap<(u32, u32), HalfLaurent> = BTreeMap::new();
    while let Some((&(i, j), k)) = rest.iter().max_by_key(|((i, j), _)| (i + j, *i)) {
        if i < j {
            return None;
        }
        let k = k.clone();
        // (d0 + d1)^(i-j) (d0 d1)^j
        let a = i - j;
        for r in 0..=a {
            let slot = rest.entry((r + j, a - r + j)).or_default();
            *slot = &*slot - &k.scale(&binomial(a, r));
            if slot.is_zero() {
                rest.remove(&(r + j, a - r + j));
            }
        }
        // (d0 d1)^j = (D~ - (A + A^-1)^2)^j
        for t in 0..=j {
            let sign = if (j - t) % 2 == 0 { 1 } else { -1 };
            let c = &k * &shift.pow(j - t).scale(&(binomial(j, t) * sign));
            let slot = out.entry((a, t)).or_default();
            *slot = &*slot + &c;
            if slot.is_zero() {
                out.remove(&(a, t));
            }
        }
    }
    Some(out)
}

/// The expansion in threaded curves and grouped boundary monomials.
pub fn grouped_coordinates(x: &CurveExpansion) -> Option<CoordExpansion> {
    let mut by_curve: BTreeMap<Option<CurveIndex>, BTreeMap<(u32, u32), HalfLaurent>> = BTreeMap::new();
    for ((c, dp), k) in &x.terms {
        by_curve.entry(Some(*c)).or_default().insert(*dp, k.clone());
    }
    for (dp, k) in &x.scalar {
        by_curve.entry(None).or_default().insert(*dp, k.clone());
    }
    let mut out = CoordExpansion::new(Coords::Grouped);
    for (curve, poly) in by_curve {
        for (dp, k) in group_boundary(&poly)? {
            out.add(curve, dp, &k);
        }
    }
    Some(out)
}

/// Positivity verdicts for one product of threaded curves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityRecord {
    pub left: CurveIndex,
    pub right: CurveIndex,
    pub closed_form: Option<ClosedForm>,
    pub expansion: CurveExpansion,
    pub raw: CoordExpansion,
    /// `None` when the boundary part is not symmetric in `d0, d1`.
    pub grouped: Option<CoordExpansion>,
    pub raw_positive: bool,
    pub grouped_positive: bool,
    pub raw_negatives: Vec<CoordTerm>,
    pub grouped_negatives: Vec<CoordTerm>,
}

impl PositivityRecord {
    pub fn from_product(p: ProductToSum) -> Self {
        let raw = raw_coordinates(&p.value);
        let grouped = grouped_coordinates(&p.value);
        let raw_negatives = raw.negatives();
        let grouped_negatives = grouped.as_ref().map(CoordExpansion::negatives).unwrap_or_default();
        Self {
            left: p.left,
            right: p.right,
            closed_form: p.closed_form,
            raw_positive: raw_negatives.is_empty(),
            grouped_positive: grouped.is_some() && grouped_negatives.is_empty(),
            expansion: p.value,
            raw,
            grouped,
            raw_negatives,
            grouped_negatives,
        }
    }

    pub fn positive(&self, coords: Coords) -> bool {
        match coords {
            Coords::Raw => self.raw_positive,
            Coords::Grouped => self.grouped_positive,
        }
    }
}

/// Canonical curves with `|n|, |k| <= max_index`, ordered by `(n, k)`.
pub fn canonical_curves(max_index: i64) -> Vec<CurveIndex> {
    let mut out = Vec::new();
    for n in 0..=max_index {
        for k in -max_index..=max_index {
            if let Ok(c) = classify(n, k) {
                if c.n() == n && c.k() == k {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Positivity record of `c1 * c2`.
pub fn positivity_record(c1: CurveIndex, c2: CurveIndex) -> Result<PositivityRecord> {
    Ok(PositivityRecord::from_product(product_to_sum(c1, c2)?))
}

/// Records for every ordered pair of canonical curves with
/// `|n|, |k| <= max_index`, in row-major order.
pub fn positivity_report(max_index: i64) -> Result<Vec<PositivityRecord>> {
    let curves = canonical_curves(max_index);
    let pairs: Vec<(CurveIndex, CurveIndex)> =
        curves.iter().flat_map(|&u| curves.iter().map(move |&w| (u, w))).collect();
    pairs.into_par_iter().map(|(u, w)| positivity_record(u, w)).collect()
}

/// `(1, 0) * (p/2, 1)^2` for even `p`, or `(1, 0) * (p, 2)` for odd `p`, in
/// raw coordinates, by the four residue cases of `p mod 4`.
pub fn one_p_two_cases(p: i64) -> Result<CoordExpansion> {
    if p < 1 {
        return Err(Error::UncoveredFamily(format!("(1,0)*(p,2) cases need p >= 1, got {p}")));
    }
    let h = HalfLaurent::a_pow;
    let c = |n: i64, k: i64| classify(n, k).ok();
    let mut out = CoordExpansion::new(Coords::Raw);
    out.add(c(p + 1, 2), (0, 0), &h(2));
    out.add(c(p - 1, 2), (0, 0), &h(-2));
    let boundary = |out: &mut CoordExpansion, curve, k: &HalfLaurent| {
        out.add(curve, (1, 0), k);
        out.add(curve, (0, 1), k);
    };
    match residue4(p) {
        -1 => {
            boundary(&mut out, c((p - 1) / 2, 1), &h(-1));
            out.add(None, (1, 1), &HalfLaurent::one());
            out.add(None, (0, 0), &(&(&h(2) - &h(-2)) + &HalfLaurent::constant(2)));
        }
        0 => {
            out.add(c(1, 0), (0, 0), &HalfLaurent::constant(2));
            boundary(&mut out, c(p / 2, 1), &HalfLaurent::one());
        }
        1 => {
            boundary(&mut out, c((p + 1) / 2, 1), &h(1));
            out.add(None, (1, 1), &HalfLaurent::one());
            out.add(None, (0, 0), &(&(&h(-2) - &h(2)) + &HalfLaurent::constant(2)));
        }
        _ => out.add(c(1, 0), (0, 0), &HalfLaurent::constant(2)),
    }
    Ok(out)
}

/// One row of the closed-form agreement table: the closed form and an
/// independent third computation, each compared with the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementRow {
    pub family: String,
    pub p: i64,
    pub z: Option<i64>,
    pub third: String,
    pub closed_agrees: bool,
    pub third_agrees: bool,
}

impl AgreementRow {
    pub fn agrees(&self) -> bool {
        self.closed_agrees && self.third_agrees
    }
}

/// Closed forms against the oracle and a third method: the recursion for
/// `D[[p+1,0],[q,1]]`, the residue case list for `D[[1,p],[0,2]]`, and
/// `Λ`-transport for `T_p((1,2z)) * (0,1)`.
pub fn agreement_table() -> Result<Vec<AgreementRow>> {
    let rec = Recursion::new();
    let row = |family: &str, p, z, third: &str, closed_agrees, third_agrees| AgreementRow {
        family: family.into(),
        p,
        z,
        third: third.into(),
        closed_agrees,
        third_agrees,
    };
    let mut out = Vec::new();
    for p in 1..=8 {
        let closed = discrepancy_p001(p)?;
        let oracle = discrepancy_oracle(DiscArg::new(p + 1, 0, 0, 1))?;
        out.push(row("D[[p+1,0],[0,1]]", p, None, "recursion", closed == oracle, rec.discrepancy(p, 0)? == oracle));
    }
    for p in 1..=9 {
        let arg = DiscArg::new(1, p, 0, 2);
        let closed = discrepancy_1p02(p)?;
        let oracle = discrepancy_oracle(arg)?;
        let mut product = fg_terms(arg)?;
        product.add_assign_ref(&oracle);
        let mut raw = raw_coordinates(&product);
        if p % 2 == 0 {
            // the case list multiplies by (p/2,1)^2 = (p,2) + 2
            raw.add(classify(1, 0).ok(), (0, 0), &HalfLaurent::constant(2));
        }
        out.push(row("D[[1,p],[0,2]]", p, None, "residue cases", closed == oracle, raw == one_p_two_cases(p)?));
    }
    for p in 0..=8 {
        let closed = discrepancy_p011(p)?;
        let oracle = discrepancy_oracle(DiscArg::new(p + 1, 0, 1, 1))?;
        out.push(row("D[[p+1,0],[1,1]]", p, None, "recursion", closed == oracle, rec.discrepancy(p, 1)? == oracle));
    }
    for p in 1..=5 {
        for z in 0..=2 {
            let oracle = product_oracle((p, 2 * p * z), (0, 1))?;
            let closed = arc_power_product(p, (1, 2 * z), (0, 1))?;
            let moved = arc_power_product_transported(p, (1, 2 * z), (0, 1))?;
            out.push(row("T_p((1,2z))*(0,1)", p, Some(z), "transport", closed == oracle, moved == oracle));
        }
    }
    Ok(out)
}
