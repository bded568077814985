use rayon::prelude::*;

use super::element::{SkeinElem, Word};
use super::system::{Match, MatchKind, RewriteSystem};
use crate::error::Result;

/// Default number of rule-family members included in overlap enumeration.
pub const FAMILY_BOUND: usize = 4;

/// One overlap or inclusion ambiguity and whether it resolves.
#[derive(Clone, Debug)]
pub struct Ambiguity {
    pub word: Word,
    pub first: Match,
    pub second: Match,
    /// Normal form of the first branch minus that of the second.
    pub difference: SkeinElem,
}

impl Ambiguity {
    pub fn resolvable(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Outcome of [`check_local_confluence`].
#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub system: String,
    pub ambiguities: Vec<Ambiguity>,
    /// Largest rule-family member considered, if the system has a family.
    pub family_bound: Option<usize>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.ambiguities.iter().all(Ambiguity::resolvable)
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &Ambiguity> {
        self.ambiguities.iter().filter(|a| !a.resolvable())
    }
}

fn left_sides(sys: &RewriteSystem, family_bound: usize) -> Vec<(Word, MatchKind)> {
    let mut out: Vec<(Word, MatchKind)> = sys
        .rules()
        .iter()
        .enumerate()
        .map(|(i, r)| (r.lhs.clone(), MatchKind::Rule(i)))
        .collect();
    if let Some(f) = sys.family() {
        for k in 1..=family_bound {
            out.push((f.lhs(k), MatchKind::Family(k)));
        }
    }
    out
}

/// Enumerates all overlap and inclusion ambiguities among rule left sides
/// and compares the normal forms of both branches.
pub fn check_local_confluence(sys: &RewriteSystem) -> Result<ConfluenceReport> {
    check_local_confluence_bounded(sys, FAMILY_BOUND)
}

/// As [`check_local_confluence`], with rule-family members up to
/// `family_bound` middle letters.
pub fn check_local_confluence_bounded(
    sys: &RewriteSystem,
    family_bound: usize,
) -> Result<ConfluenceReport> {
    let lhs = left_sides(sys, family_bound);
    let mut cases: Vec<(Word, Match, Match)> = Vec::new();
    for (l1, k1) in &lhs {
        for (l2, k2) in &lhs {
            for o in 1..l1.len().min(l2.len()) {
                if l1[l1.len() - o..] == l2[..o] {
                    let mut w = l1.clone();
                    w.extend_from_slice(&l2[o..]);
                    cases.push((
                        w,
                        Match { pos: 0, len: l1.len(), kind: *k1 },
                        Match { pos: l1.len() - o, len: l2.len(), kind: *k2 },
                    ));
                }
            }
            if k1 != k2 && l2.len() < l1.len() {
                for i in 0..=l1.len() - l2.len() {
                    if l1[i..i + l2.len()] == l2[..] {
                        cases.push((
                            l1.clone(),
                            Match { pos: 0, len: l1.len(), kind: *k1 },
                            Match { pos: i, len: l2.len(), kind: *k2 },
                        ));
                    }
                }
            }
        }
    }
    // Warm the family cache sequentially so parallel workers only read it.
    if sys.family().is_some() {
        sys.family_rhs(family_bound + 2)?;
    }
    let ambiguities = cases
        .into_par_iter()
        .map(|(word, first, second)| {
            let a = sys.reduce(&sys.apply_match(&word, first)?)?;
            let b = sys.reduce(&sys.apply_match(&word, second)?)?;
            Ok(Ambiguity { word, first, second, difference: &a - &b })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConfluenceReport {
        system: sys.name().to_string(),
        ambiguities,
        family_bound: sys.family().map(|_| family_bound),
    })
}
