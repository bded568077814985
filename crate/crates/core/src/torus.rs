//! The Kauffman bracket skein algebra of the closed torus: threaded curves,
//! the product-to-sum formula and the surjection from the twice-punctured
//! annulus.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::coeff::{CoeffElem, HalfLaurent};
use crate::error::{Error, Result};
use crate::freealg::{
    phi_map, phi_map_four_gen, presentation, PresentationId, RewriteSystem, SkeinElem, Word,
};

/// Threaded `(p, q)` torus curve, identified with `(-p, -q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[i64; 2]", try_from = "[i64; 2]")]
pub struct TorusCurve {
    p: i64,
    q: i64,
}

impl From<TorusCurve> for [i64; 2] {
    fn from(c: TorusCurve) -> Self {
        [c.p, c.q]
    }
}

impl TryFrom<[i64; 2]> for TorusCurve {
    type Error = Error;
    fn try_from(v: [i64; 2]) -> Result<Self> {
        TorusCurve::new(v[0], v[1])
    }
}

impl TorusCurve {
    /// Canonical representative with `p > 0`, or `p = 0` and `q > 0`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidArgument("(0,0) is the empty curve".into()));
        }
        Ok(if p < 0 || (p == 0 && q < 0) { Self { p: -p, q: -q } } else { Self { p, q } })
    }

    /// Canonical form of `(p, q)`, or `None` for `(0, 0)`.
    pub fn canonical(p: i64, q: i64) -> Option<Self> {
        Self::new(p, q).ok()
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Thread depth `gcd(|p|, |q|)`.
    pub fn depth(&self) -> i64 {
        self.p.gcd(&self.q)
    }

    pub fn primitive(&self) -> Self {
        let d = self.depth();
        Self { p: self.p / d, q: self.q / d }
    }
}

impl fmt::Display for TorusCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})_T", self.p, self.q)
    }
}

/// Linear combination of threaded torus curves plus a scalar.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorusExpansion {
    pub terms: BTreeMap<TorusCurve, HalfLaurent>,
    pub scalar: HalfLaurent,
}

impl TorusExpansion {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn curve(c: TorusCurve) -> Self {
        let mut out = Self::zero();
        out.add_curve(c, HalfLaurent::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.scalar.is_zero()
    }

    pub fn add_curve(&mut self, c: TorusCurve, coeff: HalfLaurent) {
        let slot = self.terms.entry(c).or_default();
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&c);
        }
    }

    /// Adds `coeff * (p, q)_T`, folding `(0, 0)_T = 2` into the scalar.
    pub fn add_pair(&mut self, p: i64, q: i64, coeff: HalfLaurent) {
        match TorusCurve::canonical(p, q) {
            Some(c) => self.add_curve(c, coeff),
            None => self.scalar = &self.scalar + &(&coeff * &HalfLaurent::constant(2)),
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &TorusExpansion) {
        for (c, k) in &rhs.terms {
            self.add_curve(*c, k.clone());
        }
        self.scalar = &self.scalar + &rhs.scalar;
    }

    pub fn scale(&self, k: &HalfLaurent) -> Self {
        let mut out = Self::zero();
        for (c, v) in &self.terms {
            out.add_curve(*c, v * k);
        }
        out.scalar = &self.scalar * k;
        out
    }

    /// Product extended bilinearly from [`fg_product`].
    pub fn mul(&self, rhs: &TorusExpansion) -> Self {
        let mut out = Self::zero();
        for (c, k) in &self.terms {
            for (d, l) in &rhs.terms {
                out.add_assign_ref(&fg_product(*c, *d).scale(&(k * l)));
            }
            out.add_curve(*c, k * &rhs.scalar);
        }
        for (d, l) in &rhs.terms {
            out.add_curve(*d, &self.scalar * l);
        }
        out.scalar = &out.scalar + &(&self.scalar * &rhs.scalar);
        out
    }
}

impl fmt::Display for TorusExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> =
            self.terms.iter().map(|(c, k)| format!("({k}){c}")).collect();
        if !self.scalar.is_zero() {
            parts.push(format!("({})", self.scalar));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    curve: TorusCurve,
    coeff: HalfLaurent,
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    terms: Vec<TermJson>,
    scalar: HalfLaurent,
}

impl Serialize for TorusExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionJson {
            terms: self
                .terms
                .iter()
                .map(|(c, k)| TermJson { curve: *c, coeff: k.clone() })
                .collect(),
            scalar: self.scalar.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ExpansionJson::deserialize(d)?;
        let mut out = TorusExpansion { scalar: raw.scalar, ..Default::default() };
        for t in raw.terms {
            out.add_curve(t.curve, t.coeff);
        }
        Ok(out)
    }
}

/// Product-to-sum on threaded curves:
/// `(p,q)_T * (r,s)_T = A^(ps-qr) (p+r,q+s)_T + A^(-(ps-qr)) (p-r,q-s)_T`.
pub fn fg_product(u: TorusCurve, w: TorusCurve) -> TorusExpansion {
    let e = u.p * w.q - u.q * w.p;
    let mut out = TorusExpansion::zero();
    out.add_pair(u.p + w.p, u.q + w.q, HalfLaurent::a_pow(e));
    out.add_pair(u.p - w.p, u.q - w.q, HalfLaurent::a_pow(-e));
    out
}

fn torus() -> &'static RewriteSystem {
    presentation(PresentationId::TorusBp)
}

/// Splits a primitive non-base `(n, k)` as `(u,v) + (w,z)` with
/// `uz - vw = ±1`; returns the two summands and that determinant.
pub fn primitive_split(n: i64, k: i64) -> ((i64, i64), (i64, i64), i64) {
    debug_assert!(n > 0 && k != 0 && n.gcd(&k) == 1);
    let (kk, sign) = if k > 0 { (k, 1) } else { (-k, -1) };
    // Solve n z - kk w = 1 with 0 <= w < n.
    let (w, z) = if n == 1 {
        (0, 1)
    } else {
        let ext = kk.extended_gcd(&n);
        // ext.x * kk + ext.y * n = 1, so w = -ext.x mod n.
        let w = (-ext.x).rem_euclid(n);
        let z = (1 + kk * w) / n;
        (w, z)
    };
    let (u, v) = (n - w, kk - z);
    ((u, sign * v), (w, sign * z), sign)
}

fn realization_cache() -> &'static Mutex<HashMap<TorusCurve, Arc<SkeinElem>>> {
    static CELL: OnceLock<Mutex<HashMap<TorusCurve, Arc<SkeinElem>>>> = OnceLock::new();
    CELL.get_or_init(|| Mutex::new(HashMap::new()))
}

fn realize_pair(p: i64, q: i64) -> Result<Arc<SkeinElem>> {
    match TorusCurve::canonical(p, q) {
        Some(c) => torus_realize(c),
        None => Ok(Arc::new(SkeinElem::scalar(CoeffElem::constant(2)))),
    }
}

fn realize_primitive(c: TorusCurve) -> Result<SkeinElem> {
    let sys = torus();
    let (n, k) = (c.p, c.q);
    match (n, k) {
        (1, 0) => return Ok(sys.gen("x1")),
        (0, 1) => return Ok(sys.gen("x2")),
        (1, 1) => return Ok(sys.gen("x3")),
        _ => {}
    }
    let ((u, v), (w, z), e) = primitive_split(n, k);
    let prod = sys.mul(&*realize_pair(u, v)?, &*realize_pair(w, z)?)?;
    let diff = realize_pair(u - w, v - z)?;
    // (u,v)*(w,z) = A^e (n,k) + A^-e (u-w, v-z)
    let rest = &prod - &diff.scale(&CoeffElem::a_pow(-e));
    Ok(rest.scale(&CoeffElem::a_pow(-e)))
}

/// Normal-form element of the torus presentation representing the threaded
/// curve `c`.
pub fn torus_realize(c: TorusCurve) -> Result<Arc<SkeinElem>> {
    if let Some(hit) = realization_cache().lock().expect("cache lock").get(&c) {
        return Ok(hit.clone());
    }
    let d = c.depth();
    let value = if d == 1 {
        realize_primitive(c)?
    } else {
        let prim = torus_realize(c.primitive())?;
        torus().chebyshev(d as u32, &prim, false)?
    };
    let value = Arc::new(value);
    realization_cache().lock().expect("cache lock").insert(c, value.clone());
    Ok(value)
}

/// Curve whose realization leads with the normal-form word `w`.
fn curve_of_leading(w: &[u8]) -> Option<TorusCurve> {
    let mut e = [0i64; 3];
    for &l in w {
        e[l as usize] += 1;
    }
    let [a, b, c] = e;
    match (a, b, c) {
        (0, 0, 0) => None,
        (a, b, 0) => TorusCurve::canonical(a, -b),
        (a, 0, c) => TorusCurve::canonical(a + c, c),
        (0, b, c) => TorusCurve::canonical(c, b + c),
        _ => None,
    }
}

fn leading<'a>(sys: &RewriteSystem, x: &'a SkeinElem) -> Option<(&'a Word, &'a CoeffElem)> {
    x.terms().max_by_key(|(w, _)| sys.order_key(w))
}

/// Expands a torus element in threaded curves by peeling leading words.
pub fn torus_expand(x: &SkeinElem) -> Result<TorusExpansion> {
    let sys = torus();
    let mut rest = sys.reduce(x)?;
    let mut out = TorusExpansion::zero();
    let mut steps = 0usize;
    while let Some((w, c)) = leading(sys, &rest) {
        let w = w.clone();
        let c = c.clone();
        steps += 1;
        let Some(curve) = curve_of_leading(&w) else {
            if !w.is_empty() {
                return Err(Error::NotInSpan(steps));
            }
            let k = c.to_laurent().ok_or_else(|| {
                Error::InvalidArgument("torus coefficients must be Laurent in A^(1/2)".into())
            })?;
            out.scalar = &out.scalar + &k;
            break;
        };
        let r = torus_realize(curve)?;
        let (rw, rc) = leading(sys, &r).expect("realizations are nonzero");
        if *rw != w {
            return Err(Error::NotInSpan(steps));
        }
        let factor = c.div_unit(rc)?;
        let k = factor.to_laurent().ok_or_else(|| {
            Error::InvalidArgument("torus coefficients must be Laurent in A^(1/2)".into())
        })?;
        out.add_curve(curve, k);
        rest = &rest - &r.scale(&factor);
    }
    Ok(out)
}

/// Realizes an expansion back in the torus presentation.
pub fn torus_collect(e: &TorusExpansion) -> Result<SkeinElem> {
    let mut out = SkeinElem::scalar(CoeffElem::from_laurent(&e.scalar));
    for (c, k) in &e.terms {
        out.add_assign_ref(&torus_realize(*c)?.scale(&CoeffElem::from_laurent(k)));
    }
    Ok(out)
}

/// The surjection onto the torus applied to an element of either
/// twice-punctured-annulus presentation.
pub fn phi(x: &SkeinElem, source: PresentationId) -> Result<SkeinElem> {
    match source {
        PresentationId::Ry022ThreeGen => phi_map().apply(x),
        PresentationId::Ry022FourGen => phi_map_four_gen().apply(x),
        other => Err(Error::AlphabetMismatch(format!("phi is not defined on {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: i64, q: i64) -> TorusCurve {
        TorusCurve::new(p, q).unwrap()
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(c(-2, 3), c(2, -3));
        assert_eq!(c(0, -1), c(0, 1));
        assert!(TorusCurve::new(0, 0).is_err());
        assert_eq!(c(4, -6).depth(), 2);
        assert_eq!(c(4, -6).primitive(), c(2, -3));
    }

    #[test]
    fn split_has_unit_determinant() {
        for n in 1..12i64 {
            for k in -12..12i64 {
                if k == 0 || n.gcd(&k) != 1 || (n == 1 && k.abs() == 1) {
                    continue;
                }
                let ((u, v), (w, z), e) = primitive_split(n, k);
                assert_eq!(u * z - v * w, e);
                assert_eq!((u + w, v + z), (n, k));
                assert!(u.abs() + v.abs() < n + k.abs());
                assert!(w.abs() + z.abs() < n + k.abs());
                assert!((u - w).abs() + (v - z).abs() < n + k.abs());
            }
        }
    }
}
