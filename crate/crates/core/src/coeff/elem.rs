use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::laurent::{fmt_a_power, fmt_terms, forward_owned, HalfLaurent};
use crate::error::{Error, Result};

/// Exponent vector of a scalar monomial.
///
/// Field order fixes the canonical (lexicographic) order of monomials.
/// `v3` only appears in the thrice-punctured disk presentation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exp {
    pub a2: i64,
    pub v1: i64,
    pub v2: i64,
    pub d0: u32,
    pub d1: u32,
    pub v3: i64,
}

impl Exp {
    pub const ONE: Exp = Exp { a2: 0, v1: 0, v2: 0, d0: 0, d1: 0, v3: 0 };

    fn mul(self, o: Exp) -> Exp {
        Exp {
            a2: self.a2 + o.a2,
            v1: self.v1 + o.v1,
            v2: self.v2 + o.v2,
            d0: self.d0 + o.d0,
            d1: self.d1 + o.d1,
            v3: self.v3 + o.v3,
        }
    }

    pub fn has_boundary(&self) -> bool {
        self.d0 > 0 || self.d1 > 0
    }

    pub fn is_unit(&self) -> bool {
        !self.has_boundary()
    }
}

/// Element of `Z[A^(±1/2), v1^(±1), v2^(±1), d0, d1]`, the scalar ring of
/// every exact computation (`v3` is available for the three-puncture case).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffElem {
    terms: BTreeMap<Exp, BigInt>,
}

/// Named scalar symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    HalfA,
    V1,
    V2,
    V3,
    D0,
    D1,
}

impl Scalar {
    pub fn name(self) -> &'static str {
        match self {
            Scalar::HalfA => "Ah",
            Scalar::V1 => "v1",
            Scalar::V2 => "v2",
            Scalar::V3 => "v3",
            Scalar::D0 => "d0",
            Scalar::D1 => "d1",
        }
    }

    pub fn is_unit(self) -> bool {
        !matches!(self, Scalar::D0 | Scalar::D1)
    }
}

impl CoeffElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Exp::ONE, c)
    }

    pub fn monomial(e: Exp, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(e, c.into());
        out
    }

    /// `A^(a2/2)`.
    pub fn a_half_pow(a2: i64) -> Self {
        Self::monomial(Exp { a2, ..Exp::ONE }, 1)
    }

    /// `A^e`.
    pub fn a_pow(e: i64) -> Self {
        Self::a_half_pow(2 * e)
    }

    pub fn var(s: Scalar) -> Self {
        let e = match s {
            Scalar::HalfA => Exp { a2: 1, ..Exp::ONE },
            Scalar::V1 => Exp { v1: 1, ..Exp::ONE },
            Scalar::V2 => Exp { v2: 1, ..Exp::ONE },
            Scalar::V3 => Exp { v3: 1, ..Exp::ONE },
            Scalar::D0 => Exp { d0: 1, ..Exp::ONE },
            Scalar::D1 => Exp { d1: 1, ..Exp::ONE },
        };
        Self::monomial(e, 1)
    }

    /// `(v1 v2)^e`.
    pub fn v12_pow(e: i64) -> Self {
        Self::monomial(Exp { v1: e, v2: e, ..Exp::ONE }, 1)
    }

    pub fn d0() -> Self {
        Self::var(Scalar::D0)
    }

    pub fn d1() -> Self {
        Self::var(Scalar::D1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exp, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &CoeffElem) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigInt)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by the monomial with exponent `e`.
    pub fn shift(&self, e: Exp) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (k.mul(e), v.clone())).collect(),
        }
    }

    /// The `(exponent, coefficient)` pair if this is a single monomial.
    pub fn as_monomial(&self) -> Option<(Exp, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    /// A unit of the ring: `±A^(a/2) v1^i v2^j v3^k`.
    pub fn is_unit(&self) -> bool {
        matches!(self.as_monomial(), Some((e, c)) if e.is_unit() && c.abs().is_one())
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Result<CoeffElem> {
        match self.as_monomial() {
            Some((e, c)) if e.is_unit() && c.abs().is_one() => Ok(CoeffElem::monomial(
                Exp {
                    a2: -e.a2,
                    v1: -e.v1,
                    v2: -e.v2,
                    d0: 0,
                    d1: 0,
                    v3: -e.v3,
                },
                c.clone(),
            )),
            _ => Err(Error::InexactDivision(format!("{self} is not a unit"))),
        }
    }

    /// Exact division by a unit.
    pub fn div_unit(&self, unit: &CoeffElem) -> Result<CoeffElem> {
        Ok(self * &unit.unit_inverse()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Embeds a Laurent polynomial in `A^(1/2)`.
    pub fn from_laurent(h: &HalfLaurent) -> Self {
        let mut out = Self::zero();
        for (a2, c) in h.terms() {
            out.add_term(Exp { a2, ..Exp::ONE }, c.clone());
        }
        out
    }

    /// The element as a Laurent polynomial in `A^(1/2)`, if it involves no
    /// other variable.
    pub fn to_laurent(&self) -> Option<HalfLaurent> {
        let mut out = HalfLaurent::zero();
        for (e, c) in &self.terms {
            if e.v1 != 0 || e.v2 != 0 || e.v3 != 0 || e.has_boundary() {
                return None;
            }
            out.add_term(e.a2, c.clone());
        }
        Some(out)
    }

    /// Splits by boundary monomial `d0^i d1^j`, requiring the puncture
    /// exponents to vanish.
    pub fn split_boundary(&self) -> Option<BTreeMap<(u32, u32), HalfLaurent>> {
        let mut out: BTreeMap<(u32, u32), HalfLaurent> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.v1 != 0 || e.v2 != 0 || e.v3 != 0 {
                return None;
            }
            out.entry((e.d0, e.d1)).or_default().add_term(e.a2, c.clone());
        }
        Some(out)
    }

    /// Inverse of [`CoeffElem::split_boundary`].
    pub fn from_boundary_parts<'a>(
        parts: impl IntoIterator<Item = (&'a (u32, u32), &'a HalfLaurent)>,
    ) -> Self {
        let mut out = Self::zero();
        for ((i, j), h) in parts {
            for (a2, c) in h.terms() {
                out.add_term(Exp { a2, d0: *i, d1: *j, ..Exp::ONE }, c.clone());
            }
        }
        out
    }

    pub fn involves(&self, s: Scalar) -> bool {
        self.terms.keys().any(|e| match s {
            Scalar::HalfA => e.a2 != 0,
            Scalar::V1 => e.v1 != 0,
            Scalar::V2 => e.v2 != 0,
            Scalar::V3 => e.v3 != 0,
            Scalar::D0 => e.d0 != 0,
            Scalar::D1 => e.d1 != 0,
        })
    }

    /// Maps each monomial through `f` and sums.
    pub fn map_monomials(&self, mut f: impl FnMut(&Exp) -> CoeffElem) -> CoeffElem {
        let mut out = CoeffElem::zero();
        for (e, c) in &self.terms {
            out.add_assign_ref(&f(e).scale(c));
        }
        out
    }
}

impl Add for &CoeffElem {
    type Output = CoeffElem;
    fn add(self, rhs: &CoeffElem) -> CoeffElem {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &CoeffElem {
    type Output = CoeffElem;
    fn sub(self, rhs: &CoeffElem) -> CoeffElem {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &CoeffElem {
    type Output = CoeffElem;
    fn mul(self, rhs: &CoeffElem) -> CoeffElem {
        let mut out = CoeffElem::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.mul(*e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &CoeffElem {
    type Output = CoeffElem;
    fn neg(self) -> CoeffElem {
        CoeffElem {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

forward_owned!(CoeffElem, Add add, Sub sub, Mul mul);

impl Neg for CoeffElem {
    type Output = CoeffElem;
    fn neg(self) -> CoeffElem {
        -&self
    }
}

impl From<i64> for CoeffElem {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<&HalfLaurent> for CoeffElem {
    fn from(h: &HalfLaurent) -> Self {
        Self::from_laurent(h)
    }
}

fn exp_factors(e: &Exp) -> Vec<String> {
    let mut out: Vec<String> = fmt_a_power(e.a2).into_iter().collect();
    let mut push = |name: &str, p: i64| match p {
        0 => {}
        1 => out.push(name.to_string()),
        _ => out.push(format!("{name}^{p}")),
    };
    push("v1", e.v1);
    push("v2", e.v2);
    push("v3", e.v3);
    push("d0", e.d0 as i64);
    push("d1", e.d1 as i64);
    out
}

impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().rev().map(|(e, c)| (exp_factors(e), c)))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<i64>,
    c: String,
}

// JSON: [{"exp": [a2, ev1, ev2, ed0, ed1], "c": "<decimal>"}], with a sixth
// exponent slot for v3 only when it is nonzero.
impl Serialize for CoeffElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let items: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut exp = vec![e.a2, e.v1, e.v2, e.d0 as i64, e.d1 as i64];
                if e.v3 != 0 {
                    exp.push(e.v3);
                }
                TermRepr { exp, c: c.to_string() }
            })
            .collect();
        items.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items: Vec<TermRepr> = Vec::deserialize(d)?;
        let mut out = CoeffElem::zero();
        for t in items {
            if t.exp.len() != 5 && t.exp.len() != 6 {
                return Err(D::Error::custom("exponent vector must have 5 entries"));
            }
            if t.exp[3] < 0 || t.exp[4] < 0 {
                return Err(D::Error::custom("boundary exponents must be nonnegative"));
            }
            let e = Exp {
                a2: t.exp[0],
                v1: t.exp[1],
                v2: t.exp[2],
                d0: t.exp[3] as u32,
                d1: t.exp[4] as u32,
                v3: t.exp.get(5).copied().unwrap_or(0),
            };
            let c: BigInt = t.c.parse().map_err(D::Error::custom)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}
