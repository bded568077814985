use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::coeff::CoeffElem;

/// A word over a presentation's alphabet; letters are alphabet indices.
pub type Word = Vec<u8>;

/// Finite linear combination of words with scalar coefficients.
///
/// Words are kept in plain lexicographic order; the term order of a
/// [`super::RewriteSystem`] is only needed during reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SkeinElem {
    terms: BTreeMap<Word, CoeffElem>,
}

impl SkeinElem {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty word.
    pub fn one() -> Self {
        Self::scalar(CoeffElem::one())
    }

    pub fn scalar(c: CoeffElem) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn gen(letter: u8) -> Self {
        Self::term(vec![letter], CoeffElem::one())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, CoeffElem::one())
    }

    pub fn term(w: Word, c: CoeffElem) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
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

    pub fn add_term(&mut self, w: Word, c: CoeffElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &SkeinElem) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CoeffElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> CoeffElem {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &CoeffElem) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&CoeffElem) -> CoeffElem) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), f(v));
        }
        out
    }

    /// Product in the free algebra (concatenation, no reduction).
    pub fn concat(&self, rhs: &SkeinElem) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    /// The scalar part if the element involves only the empty word.
    pub fn as_scalar(&self) -> Option<CoeffElem> {
        match self.terms.len() {
            0 => Some(CoeffElem::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Renders with the given letter names.
    pub fn display<'a>(&'a self, names: &'a [&'a str]) -> impl fmt::Display + 'a {
        Shown { elem: self, names }
    }
}

struct Shown<'a> {
    elem: &'a SkeinElem,
    names: &'a [&'a str],
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // longest words first
        let mut items: Vec<_> = self.elem.terms.iter().collect();
        items.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));
        for (w, c) in items {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let word: Vec<String> = run_length(w, self.names);
            if word.is_empty() {
                write!(f, "({c})")?;
            } else if *c == CoeffElem::one() {
                write!(f, "{}", word.join("*"))?;
            } else {
                write!(f, "({c})*{}", word.join("*"))?;
            }
        }
        Ok(())
    }
}

fn run_length(w: &[u8], names: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let name = names.get(w[i] as usize).copied().unwrap_or("?");
        if j - i == 1 {
            out.push(name.to_string());
        } else {
            out.push(format!("{name}^{}", j - i));
        }
        i = j;
    }
    out
}

impl Add for &SkeinElem {
    type Output = SkeinElem;
    fn add(self, rhs: &SkeinElem) -> SkeinElem {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &SkeinElem {
    type Output = SkeinElem;
    fn sub(self, rhs: &SkeinElem) -> SkeinElem {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &SkeinElem {
    type Output = SkeinElem;
    fn neg(self) -> SkeinElem {
        self.map_coeffs(|c| -c)
    }
}

impl Add for SkeinElem {
    type Output = SkeinElem;
    fn add(self, rhs: SkeinElem) -> SkeinElem {
        &self + &rhs
    }
}

impl Sub for SkeinElem {
    type Output = SkeinElem;
    fn sub(self, rhs: SkeinElem) -> SkeinElem {
        &self - &rhs
    }
}

impl From<CoeffElem> for SkeinElem {
    fn from(c: CoeffElem) -> Self {
        Self::scalar(c)
    }
}
