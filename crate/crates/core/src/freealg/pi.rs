use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::element::SkeinElem;
use super::presentations::{presentation, PresentationId};
use super::system::RewriteSystem;
use crate::coeff::CoeffElem;
use crate::error::{Error, Result};

/// Polynomial in commuting `x, y, z` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZPoly {
    terms: BTreeMap<[u32; 3], BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: [u32; 3], c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(e, c.into());
        out
    }

    pub fn x() -> Self {
        Self::monomial([1, 0, 0], 1)
    }

    pub fn y() -> Self {
        Self::monomial([0, 1, 0], 1)
    }

    pub fn z() -> Self {
        Self::monomial([0, 0, 1], 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: [u32; 3], c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn leading(&self) -> Option<([u32; 3], &BigInt)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Exact quotient `self / d`; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &ZPoly) -> Result<ZPoly> {
        let (de, dc) = d
            .leading()
            .ok_or_else(|| Error::InexactDivision("division by zero polynomial".into()))?;
        let mut rem = self.clone();
        let mut q = ZPoly::zero();
        while let Some((re, rc)) = rem.leading() {
            let fits = (0..3).all(|i| re[i] >= de[i]);
            if !fits || !(rc % dc).is_zero() {
                return Err(Error::InexactDivision(format!("{self} by {d}")));
            }
            let qe = [re[0] - de[0], re[1] - de[1], re[2] - de[2]];
            let qt = ZPoly::monomial(qe, rc / dc);
            rem = &rem - &(&qt * d);
            q = &q + &qt;
        }
        Ok(q)
    }
}

impl Add for &ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        &ZPoly::zero() - self
    }
}

impl Mul for &ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &ZPoly) -> ZPoly {
        let mut out = ZPoly::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], c * d);
            }
        }
        out
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let mag = c.abs();
            let vars: Vec<String> = ["x", "y", "z"]
                .iter()
                .zip(e)
                .filter(|(_, p)| **p > 0)
                .map(|(v, p)| if *p == 1 { v.to_string() } else { format!("{v}^{p}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn letter_image(name: &str) -> Option<ZPoly> {
    let two = ZPoly::constant(2);
    Some(match name {
        "a" => ZPoly::x(),
        "b" => &(&ZPoly::y() * &ZPoly::z()) - &ZPoly::x(),
        "g" | "g1" => &ZPoly::y().pow(2) - &two,
        "g2" => &ZPoly::z().pow(2) - &two,
        _ => return None,
    })
}

/// Scalar image with `A^(1/2), v_i -> 1`, `d0 -> 2` and `d1 -> d1_image`.
fn scalar_image(c: &CoeffElem, d1_image: &ZPoly) -> ZPoly {
    let mut out = ZPoly::zero();
    for (e, k) in c.terms() {
        let t = &ZPoly::constant(k.clone() << e.d0) * &d1_image.pow(e.d1);
        out = &out + &t;
    }
    out
}

fn pi_with(x: &SkeinElem, sys: &RewriteSystem, d1_image: &ZPoly) -> Result<ZPoly> {
    let images = sys
        .names()
        .iter()
        .map(|n| letter_image(n).ok_or_else(|| Error::AlphabetMismatch(format!("{} has no image", n))))
        .collect::<Result<Vec<_>>>()?;
    let mut out = ZPoly::zero();
    for (w, c) in x.terms() {
        let mut t = scalar_image(c, d1_image);
        for &l in w {
            t = &t * &images[l as usize];
        }
        out = &out + &t;
    }
    Ok(out)
}

/// Image of `d1`, forced by the cubic three-generator relation once the
/// other generators are specialized.
pub fn pi_d1() -> &'static ZPoly {
    static CELL: OnceLock<ZPoly> = OnceLock::new();
    CELL.get_or_init(|| derive_pi_d1().expect("cubic relation determines the image of d1"))
}

fn derive_pi_d1() -> Result<ZPoly> {
    let sys = presentation(PresentationId::Ry022ThreeGen);
    let cubic = sys
        .relations()
        .iter()
        .find(|r| r.lhs.max_word_len() == 3)
        .ok_or_else(|| Error::InvalidArgument("missing cubic relation".into()))?;
    let residue = cubic.residue();
    // residue is affine in d1: split into the d1-free part and the d1 part.
    let mut free = SkeinElem::zero();
    let mut linear = SkeinElem::zero();
    for (w, c) in residue.terms() {
        for (e, k) in c.terms() {
            let mono = CoeffElem::monomial(crate::coeff::Exp { d1: 0, ..*e }, k.clone());
            match e.d1 {
                0 => free.add_term(w.clone(), mono),
                1 => linear.add_term(w.clone(), mono),
                _ => return Err(Error::InvalidArgument("cubic relation not affine in d1".into())),
            }
        }
    }
    let p0 = pi_with(&free, sys, &ZPoly::zero())?;
    let p1 = pi_with(&linear, sys, &ZPoly::zero())?;
    (-&p0).div_exact(&p1)
}

/// The commutative specialization of an element of either
/// twice-punctured-annulus presentation.
pub fn pi_commutative(x: &SkeinElem, sys: &RewriteSystem) -> Result<ZPoly> {
    pi_with(x, sys, pi_d1())
}

/// Rank over `Q` of the coefficient vectors of `polys`.
pub fn rank(polys: &[ZPoly]) -> usize {
    let monos: Vec<[u32; 3]> = {
        let mut all: Vec<[u32; 3]> = polys.iter().flat_map(|p| p.terms.keys().copied()).collect();
        all.sort_unstable();
        all.dedup();
        all
    };
    let mut rows: Vec<Vec<BigInt>> = polys
        .iter()
        .map(|p| monos.iter().map(|m| p.terms.get(m).cloned().unwrap_or_default()).collect())
        .collect();
    // Fraction-free elimination: rows stay integral.
    let mut r = 0;
    for col in 0..monos.len() {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &pivot_row[col] - &f * p;
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Images of the four-generator normal-form monomials
/// `a^e1 b^e2 g1^e3 g2^e4` with `e3*e4 = 0` and every `e_i <= max_e`.
pub fn basis_images(max_e: u32) -> Vec<ZPoly> {
    let img = |n: &str| letter_image(n).expect("letter");
    let (a, b, g1, g2) = (img("a"), img("b"), img("g1"), img("g2"));
    let mut out = Vec::new();
    for e1 in 0..=max_e {
        for e2 in 0..=max_e {
            for e3 in 0..=max_e {
                for e4 in 0..=max_e {
                    if e3 * e4 != 0 {
                        continue;
                    }
                    let p = &(&a.pow(e1) * &b.pow(e2)) * &(&g1.pow(e3) * &g2.pow(e4));
                    out.push(p);
                }
            }
        }
    }
    out
}
