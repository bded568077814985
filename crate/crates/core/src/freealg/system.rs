use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use super::element::{SkeinElem, Word};
use crate::coeff::CoeffElem;
use crate::error::{Error, Result};

/// Default cap on rule applications in a single [`RewriteSystem::reduce`].
pub const STEP_BUDGET: usize = 1_000_000;

/// Letter names of a presentation. Letter order is index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<&'static str>,
    aliases: Vec<(&'static str, u8)>,
    gamma: Vec<bool>,
}

impl Alphabet {
    /// `gamma` marks the letters counted by the second component of the
    /// term order.
    pub fn new(names: &[&'static str], gamma: &[&'static str]) -> Self {
        Self {
            names: names.to_vec(),
            aliases: Vec::new(),
            gamma: names.iter().map(|n| gamma.contains(n)).collect(),
        }
    }

    pub fn with_alias(mut self, alias: &'static str, target: &str) -> Self {
        let idx = self.letter(target).expect("alias target exists");
        self.aliases.push((alias, idx));
        self
    }

    pub fn names(&self) -> &[&'static str] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letter(&self, name: &str) -> Option<u8> {
        self.names
            .iter()
            .position(|n| *n == name)
            .map(|i| i as u8)
            .or_else(|| self.aliases.iter().find(|(a, _)| *a == name).map(|(_, i)| *i))
    }

    pub fn is_gamma(&self, letter: u8) -> bool {
        self.gamma[letter as usize]
    }
}

/// Oriented rewrite rule `lhs -> rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: SkeinElem,
}

/// A defining relation `lhs = rhs` kept in unoriented form for checking
/// homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub lhs: SkeinElem,
    pub rhs: SkeinElem,
}

impl Relation {
    pub fn residue(&self) -> SkeinElem {
        &self.lhs - &self.rhs
    }
}

/// Infinite family of rules `p m^k s -> R_k` (`k >= 1`).
///
/// `R_1` is given; higher members come from resolving the overlap
/// `(p m^(k-1) s) m` against the rule `s m -> c m s + L`, which gives
/// `R_k = c^-1 (R_(k-1) m - p m^(k-1) L)`. Members are computed on demand
/// and cached.
#[derive(Debug)]
pub struct RuleFamily {
    pub prefix: u8,
    pub middle: u8,
    pub suffix: u8,
    swap_inverse: CoeffElem,
    swap_lower: SkeinElem,
    cache: RwLock<Vec<Arc<SkeinElem>>>,
}

impl RuleFamily {
    pub fn lhs(&self, k: usize) -> Word {
        let mut w = vec![self.prefix];
        w.extend(std::iter::repeat_n(self.middle, k));
        w.push(self.suffix);
        w
    }
}

/// Where a rule applies inside a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Match {
    pub pos: usize,
    pub len: usize,
    pub kind: MatchKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchKind {
    Rule(usize),
    Family(usize),
}

/// Which redex to contract first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// Total order on words: length, gamma count, inversion count, then
/// lexicographic. Compatible with concatenation for every rule that keeps
/// length and gamma count fixed only by permuting letters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderKey {
    pub len: usize,
    pub gammas: usize,
    pub inversions: usize,
    pub word: Word,
}

/// Oriented relations plus a well-founded term order.
#[derive(Debug)]
pub struct RewriteSystem {
    name: String,
    alphabet: Alphabet,
    rules: Vec<Rule>,
    by_first: Vec<Vec<usize>>,
    family: Option<RuleFamily>,
    relations: Vec<Relation>,
    budget: usize,
}

impl Clone for RewriteSystem {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            alphabet: self.alphabet.clone(),
            rules: self.rules.clone(),
            by_first: self.by_first.clone(),
            family: self.family.as_ref().map(|f| RuleFamily {
                prefix: f.prefix,
                middle: f.middle,
                suffix: f.suffix,
                swap_inverse: f.swap_inverse.clone(),
                swap_lower: f.swap_lower.clone(),
                cache: RwLock::new(vec![f.cache.read().expect("cache lock")[0].clone()]),
            }),
            relations: self.relations.clone(),
            budget: self.budget,
        }
    }
}

/// Seed for a [`RuleFamily`]: the letters `p, m, s` and `R_1`.
#[derive(Clone, Debug)]
pub struct FamilySeed {
    pub prefix: u8,
    pub middle: u8,
    pub suffix: u8,
    pub first: SkeinElem,
}

impl RewriteSystem {
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        rules: Vec<Rule>,
        family: Option<FamilySeed>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        let mut by_first = vec![Vec::new(); alphabet.len()];
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.len() < 2 {
                return Err(Error::InvalidArgument("rule left side must have length >= 2".into()));
            }
            by_first[r.lhs[0] as usize].push(i);
        }
        let family = match family {
            None => None,
            Some(seed) => {
                let swap = rules
                    .iter()
                    .find(|r| r.lhs == [seed.suffix, seed.middle])
                    .ok_or_else(|| Error::InvalidArgument("rule family needs a swap rule".into()))?;
                let c = swap.rhs.coeff(&[seed.middle, seed.suffix]);
                let swap_inverse = c.unit_inverse()?;
                let lower = &swap.rhs - &SkeinElem::term(vec![seed.middle, seed.suffix], c);
                Some(RuleFamily {
                    prefix: seed.prefix,
                    middle: seed.middle,
                    suffix: seed.suffix,
                    swap_inverse,
                    swap_lower: lower,
                    cache: RwLock::new(vec![Arc::new(seed.first)]),
                })
            }
        };
        let sys = Self {
            name: name.into(),
            alphabet,
            rules,
            by_first,
            family,
            relations,
            budget: STEP_BUDGET,
        };
        for r in &sys.rules {
            sys.check_compatible(&r.lhs, &r.rhs)?;
        }
        if let Some(f) = &sys.family {
            let first = f.cache.read().expect("cache lock")[0].clone();
            sys.check_compatible(&f.lhs(1), &first)?;
        }
        Ok(sys)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn names(&self) -> &[&'static str] {
        self.alphabet.names()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn family(&self) -> Option<&RuleFamily> {
        self.family.as_ref()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// A copy with the right side of rule `idx` replaced.
    pub fn with_rule_rhs(&self, idx: usize, rhs: SkeinElem) -> Result<Self> {
        let mut rules = self.rules.clone();
        rules[idx].rhs = rhs;
        let family = self.family.as_ref().map(|f| FamilySeed {
            prefix: f.prefix,
            middle: f.middle,
            suffix: f.suffix,
            first: (*f.cache.read().expect("cache lock")[0]).clone(),
        });
        Ok(Self::new(self.name.clone(), self.alphabet.clone(), rules, family, self.relations.clone())?
            .with_budget(self.budget))
    }

    /// The system with `f` applied to every scalar coefficient of its rules
    /// and relations, for a ring homomorphism `f` of the scalars.
    pub fn map_scalars(
        &self,
        name: impl Into<String>,
        mut f: impl FnMut(&CoeffElem) -> Result<CoeffElem>,
    ) -> Result<Self> {
        let mut map = |x: &SkeinElem| -> Result<SkeinElem> {
            let mut out = SkeinElem::zero();
            for (w, c) in x.terms() {
                out.add_term(w.clone(), f(c)?);
            }
            Ok(out)
        };
        let rules = self
            .rules
            .iter()
            .map(|r| Ok(Rule { lhs: r.lhs.clone(), rhs: map(&r.rhs)? }))
            .collect::<Result<Vec<_>>>()?;
        let family = match &self.family {
            None => None,
            Some(fam) => Some(FamilySeed {
                prefix: fam.prefix,
                middle: fam.middle,
                suffix: fam.suffix,
                first: map(&fam.cache.read().expect("cache lock")[0])?,
            }),
        };
        let relations = self
            .relations
            .iter()
            .map(|r| {
                Ok(Relation { name: r.name.clone(), lhs: map(&r.lhs)?, rhs: map(&r.rhs)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(name, self.alphabet.clone(), rules, family, relations)?.with_budget(self.budget))
    }

    pub fn order_key(&self, w: &[u8]) -> OrderKey {
        let mut counts = vec![0usize; self.alphabet.len()];
        let mut inversions = 0;
        for &l in w.iter().rev() {
            inversions += counts[..l as usize].iter().sum::<usize>();
            counts[l as usize] += 1;
        }
        OrderKey {
            len: w.len(),
            gammas: w.iter().filter(|l| self.alphabet.is_gamma(**l)).count(),
            inversions,
            word: w.to_vec(),
        }
    }

    fn check_compatible(&self, lhs: &[u8], rhs: &SkeinElem) -> Result<()> {
        let lk = self.order_key(lhs);
        let mut sorted_l = lhs.to_vec();
        sorted_l.sort_unstable();
        for (w, _) in rhs.terms() {
            let rk = self.order_key(w);
            let mut sorted_r = w.clone();
            sorted_r.sort_unstable();
            let same_grade = rk.len == lk.len && rk.gammas == lk.gammas;
            if rk >= lk || (same_grade && sorted_r != sorted_l) {
                return Err(Error::OrderViolation {
                    lhs: self.show_word(lhs),
                    offending: self.show_word(w),
                });
            }
        }
        Ok(())
    }

    pub fn show_word(&self, w: &[u8]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|l| self.names()[*l as usize])
            .collect::<Vec<_>>()
            .join("*")
    }

    fn match_at(&self, w: &[u8], i: usize) -> Option<Match> {
        let mut best: Option<Match> = None;
        for &ri in &self.by_first[w[i] as usize] {
            let lhs = &self.rules[ri].lhs;
            if w.len() - i >= lhs.len() && w[i..i + lhs.len()] == lhs[..] {
                let m = Match { pos: i, len: lhs.len(), kind: MatchKind::Rule(ri) };
                if best.is_none_or(|b| m.len < b.len) {
                    best = Some(m);
                }
            }
        }
        if let Some(f) = &self.family {
            if w[i] == f.prefix {
                let mut j = i + 1;
                while j < w.len() && w[j] == f.middle {
                    j += 1;
                }
                let k = j - i - 1;
                if k >= 1 && j < w.len() && w[j] == f.suffix {
                    let m = Match { pos: i, len: k + 2, kind: MatchKind::Family(k) };
                    if best.is_none_or(|b| m.len < b.len) {
                        best = Some(m);
                    }
                }
            }
        }
        best
    }

    /// Locates the redex contracted next under `strategy`.
    pub fn find_match(&self, w: &[u8], strategy: Strategy) -> Option<Match> {
        match strategy {
            Strategy::Leftmost => (0..w.len()).find_map(|i| self.match_at(w, i)),
            Strategy::Rightmost => (0..w.len()).rev().find_map(|i| self.match_at(w, i)),
        }
    }

    /// Every redex in `w`.
    pub fn all_matches(&self, w: &[u8]) -> Vec<Match> {
        let mut out = Vec::new();
        for i in 0..w.len() {
            for &ri in &self.by_first[w[i] as usize] {
                let lhs = &self.rules[ri].lhs;
                if w.len() - i >= lhs.len() && w[i..i + lhs.len()] == lhs[..] {
                    out.push(Match { pos: i, len: lhs.len(), kind: MatchKind::Rule(ri) });
                }
            }
            if let Some(Match { kind: MatchKind::Family(k), .. }) =
                self.match_at(w, i).filter(|m| matches!(m.kind, MatchKind::Family(_)))
            {
                out.push(Match { pos: i, len: k + 2, kind: MatchKind::Family(k) });
            }
        }
        out
    }

    /// A word is in normal form iff no rule left side occurs in it.
    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.find_match(w, Strategy::Leftmost).is_none()
    }

    /// Right side `R_k` of the family rule with `k` middle letters.
    pub fn family_rhs(&self, k: usize) -> Result<Arc<SkeinElem>> {
        let f = self
            .family
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("system has no rule family".into()))?;
        assert!(k >= 1);
        loop {
            let have = {
                let cache = f.cache.read().expect("cache lock");
                if cache.len() >= k {
                    return Ok(cache[k - 1].clone());
                }
                cache.len()
            };
            let prev = f.cache.read().expect("cache lock")[have - 1].clone();
            let next_k = have + 1;
            let times_m = self.reduce(&prev.concat(&SkeinElem::gen(f.middle)))?;
            let mut head = vec![f.prefix];
            head.extend(std::iter::repeat_n(f.middle, next_k - 1));
            let tail = self.reduce(&SkeinElem::word(head).concat(&f.swap_lower))?;
            let rk = (&times_m - &tail).scale(&f.swap_inverse);
            self.check_compatible(&f.lhs(next_k), &rk)?;
            let mut cache = f.cache.write().expect("cache lock");
            if cache.len() == have {
                cache.push(Arc::new(rk));
            }
        }
    }

    /// Contracts the redex `m` of `w` once.
    pub fn apply_match(&self, w: &[u8], m: Match) -> Result<SkeinElem> {
        let rhs: Arc<SkeinElem> = match m.kind {
            MatchKind::Rule(i) => Arc::new(self.rules[i].rhs.clone()),
            MatchKind::Family(k) => self.family_rhs(k)?,
        };
        let prefix = SkeinElem::word(w[..m.pos].to_vec());
        let suffix = SkeinElem::word(w[m.pos + m.len..].to_vec());
        Ok(prefix.concat(&rhs).concat(&suffix))
    }

    pub fn reduce(&self, x: &SkeinElem) -> Result<SkeinElem> {
        self.reduce_with(x, Strategy::Leftmost)
    }

    /// Normal form of `x`. Words are processed from the largest down in the
    /// term order, so each word is rewritten at most once.
    pub fn reduce_with(&self, x: &SkeinElem, strategy: Strategy) -> Result<SkeinElem> {
        let mut todo: BTreeMap<OrderKey, CoeffElem> = BTreeMap::new();
        let push = |todo: &mut BTreeMap<OrderKey, CoeffElem>, key: OrderKey, c: CoeffElem| {
            if c.is_zero() {
                return;
            }
            match todo.entry(key) {
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
        };
        for (w, c) in x.terms() {
            push(&mut todo, self.order_key(w), c.clone());
        }
        let mut out = SkeinElem::zero();
        let mut steps = 0usize;
        while let Some((key, c)) = todo.pop_last() {
            let w = key.word;
            match self.find_match(&w, strategy) {
                None => out.add_term(w, c),
                Some(m) => {
                    steps += 1;
                    if steps > self.budget {
                        return Err(Error::StepBudget(self.budget));
                    }
                    let rhs: Arc<SkeinElem> = match m.kind {
                        MatchKind::Rule(i) => Arc::new(self.rules[i].rhs.clone()),
                        MatchKind::Family(k) => self.family_rhs(k)?,
                    };
                    for (rw, rc) in rhs.terms() {
                        let mut nw = Vec::with_capacity(w.len() - m.len + rw.len());
                        nw.extend_from_slice(&w[..m.pos]);
                        nw.extend_from_slice(rw);
                        nw.extend_from_slice(&w[m.pos + m.len..]);
                        push(&mut todo, self.order_key(&nw), &c * rc);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacking product: concatenate, then reduce.
    pub fn mul(&self, x: &SkeinElem, y: &SkeinElem) -> Result<SkeinElem> {
        self.reduce(&x.concat(y))
    }

    pub fn pow(&self, x: &SkeinElem, n: u32) -> Result<SkeinElem> {
        let mut acc = SkeinElem::one();
        for _ in 0..n {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// `T_k(x)` computed in this algebra.
    pub fn chebyshev(&self, k: u32, x: &SkeinElem, normalized: bool) -> Result<SkeinElem> {
        let mut err = None;
        let out = crate::coeff::chebyshev_with(
            k,
            x,
            &SkeinElem::one(),
            normalized,
            |a, b| match self.mul(a, b) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    SkeinElem::zero()
                }
            },
            |a, b| a - b,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Element from a letter name or alias.
    pub fn gen(&self, name: &str) -> SkeinElem {
        SkeinElem::gen(
            self.alphabet
                .letter(name)
                .unwrap_or_else(|| panic!("{name} is not a letter of {}", self.name)),
        )
    }
}
