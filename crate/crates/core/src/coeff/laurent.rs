use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Laurent polynomial in `A^(1/2)` with integer coefficients.
///
/// Keys are doubled exponents of `A`, so `A^(1/2)` is stored under `1`
/// and `A^-2` under `-4`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c * A^(a2/2)`.
    pub fn monomial(a2: i64, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(a2, c.into());
        out
    }

    /// `A^e` for an integer exponent `e`.
    pub fn a_pow(e: i64) -> Self {
        Self::monomial(2 * e, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
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

    pub fn add_term(&mut self, a2: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(a2).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&a2);
        }
    }

    /// Iterates `(doubled exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, a2: i64) -> BigInt {
        self.terms.get(&a2).cloned().unwrap_or_default()
    }

    /// Every coefficient is a nonnegative integer.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Multiplies by `A^(a2/2)`.
    pub fn shift(&self, a2: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (k + a2, v.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Substitutes `A -> A^-1`.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (-k, v.clone())).collect(),
        }
    }

    /// Substitutes `A^(1/2) -> A^(m/2)`, i.e. `A -> A^m`.
    pub fn substitute_power(&self, m: i64) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k * m, v.clone());
        }
        out
    }

    /// Value at `A^(1/2) = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Value at a complex `A^(1/2)`.
    pub fn eval(&self, half_a: num_complex::Complex64) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(k, v)| half_a.powi(*k as i32) * v.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// The single term `(a2, c)` if this is a monomial.
    pub fn as_monomial(&self) -> Option<(i64, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, v)| (*k, v))
        } else {
            None
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

/// Balanced quantum integer `[n]_q` with `q = A^(step2/2)`, defined for every
/// integer `n` by `[0] = 0` and `[-n] = -[n]`.
pub fn signed_quantum_int(n: i64, step2: i64) -> HalfLaurent {
    let mut out = HalfLaurent::zero();
    let sign = BigInt::from(n.signum());
    let m = n.abs();
    let mut e = 1 - m;
    while e < m {
        out.add_term(e * step2, sign.clone());
        e += 2;
    }
    out
}

/// Quantum integer `[n]_A = A^(1-n) + A^(3-n) + ... + A^(n-1)`.
pub fn quantum_int(n: i64) -> Result<HalfLaurent> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!(
            "quantum integer needs n >= 1, got {n}"
        )));
    }
    Ok(signed_quantum_int(n, 2))
}

impl Add for &HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Sub for &HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v.clone());
        }
        out
    }
}

impl Mul for &HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = HalfLaurent::zero();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &rhs.terms {
                out.add_term(k1 + k2, v1 * v2);
            }
        }
        out
    }
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        HalfLaurent {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $f:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $f(self, rhs: $t) -> $t { (&self).$f(&rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $f(self, rhs: &$t) -> $t { (&self).$f(rhs) }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(HalfLaurent, Add add, Sub sub, Mul mul);

impl Neg for HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        -&self
    }
}

impl From<i64> for HalfLaurent {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

/// Formats `A^(a2/2)` in the notation the expression parser accepts.
pub(crate) fn fmt_a_power(a2: i64) -> Option<String> {
    match a2 {
        0 => None,
        2 => Some("A".to_string()),
        1 => Some("Ah".to_string()),
        _ if a2 % 2 == 0 => Some(format!("A^{}", a2 / 2)),
        _ => Some(format!("Ah^{a2}")),
    }
}

pub(crate) fn fmt_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (Vec<String>, &'a BigInt)>,
) -> fmt::Result {
    let mut first = true;
    for (factors, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        if factors.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{}", factors.join("*"))?;
        } else {
            write!(f, "{mag}*{}", factors.join("*"))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(
            f,
            self.terms
                .iter()
                .rev()
                .map(|(k, c)| (fmt_a_power(*k).into_iter().collect(), c)),
        )
    }
}

// JSON: {"<doubled exponent>": "<decimal>"}
impl Serialize for HalfLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (k, v) in &self.terms {
            m.serialize_entry(&k.to_string(), &v.to_string())?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for HalfLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut out = HalfLaurent::zero();
        for (k, v) in raw {
            let k: i64 = k.parse().map_err(D::Error::custom)?;
            let v: BigInt = v.parse().map_err(D::Error::custom)?;
            out.add_term(k, v);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_three() {
        let q = quantum_int(3).unwrap();
        let expected = &(&HalfLaurent::a_pow(-2) + &HalfLaurent::one()) + &HalfLaurent::a_pow(2);
        assert_eq!(q, expected);
        assert_eq!(quantum_int(1).unwrap(), HalfLaurent::one());
        assert!(quantum_int(0).is_err());
        assert!(quantum_int(-3).is_err());
    }

    #[test]
    fn quantum_at_one_and_times_difference() {
        let diff = &HalfLaurent::a_pow(1) - &HalfLaurent::a_pow(-1);
        for n in 1..=20 {
            let q = quantum_int(n).unwrap();
            if n <= 12 {
                assert_eq!(q.eval_at_one(), BigInt::from(n));
            }
            assert!(q.terms().all(|(_, c)| c.is_one()));
            assert_eq!(q.invert_variable(), q);
            assert_eq!(&q * &diff, &HalfLaurent::a_pow(n) - &HalfLaurent::a_pow(-n));
        }
    }

    #[test]
    fn signed_variants() {
        assert!(signed_quantum_int(0, 2).is_zero());
        assert_eq!(signed_quantum_int(-2, 2), -quantum_int(2).unwrap());
        // [2]_{A^2} = A^-2 + A^2
        assert_eq!(
            signed_quantum_int(2, 4),
            &HalfLaurent::a_pow(-2) + &HalfLaurent::a_pow(2)
        );
    }

    #[test]
    fn json_round_trip() {
        let x = &HalfLaurent::monomial(-3, 7) - &HalfLaurent::a_pow(5);
        let s = serde_json::to_string(&x).unwrap();
        let y: HalfLaurent = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
