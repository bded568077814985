use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use super::element::SkeinElem;
use super::system::{Alphabet, FamilySeed, Relation, RewriteSystem, Rule};
use super::parse_free;
use crate::coeff::CoeffElem;
use crate::error::{Error, Result};

/// The registered presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PresentationId {
    /// Twice-punctured annulus, generators `a b g1 g2`.
    Ry022FourGen,
    /// Twice-punctured annulus, generators `b a g`.
    Ry022ThreeGen,
    /// Closed torus, generators `x1 x2 x3`.
    TorusBp,
    /// Thrice-punctured disk, generators `x1 x2 x3`.
    Ry013,
    /// One-holed torus, generators `x1 x2 x3`.
    S110,
}

impl PresentationId {
    pub const ALL: [PresentationId; 5] = [
        PresentationId::Ry022FourGen,
        PresentationId::Ry022ThreeGen,
        PresentationId::TorusBp,
        PresentationId::Ry013,
        PresentationId::S110,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresentationId::Ry022FourGen => "ry022-4gen",
            PresentationId::Ry022ThreeGen => "ry022-3gen",
            PresentationId::TorusBp => "torus-bp",
            PresentationId::Ry013 => "ry013",
            PresentationId::S110 => "s110",
        }
    }
}

impl fmt::Display for PresentationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresentationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        PresentationId::ALL
            .into_iter()
            .find(|id| id.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown presentation {s}")))
    }
}

struct PresentationData {
    alphabet: Alphabet,
    rules: &'static [&'static str],
    family: Option<(&'static str, &'static str)>,
    relations: &'static [(&'static str, &'static str)],
}

const RY022_4GEN_RULES: &[&str] = &[
    "b*a -> a*b - v1^-1*v2^-1*(A - A^-1)*(g2 - g1)",
    "g1*a -> A^2*a*g1 - A*(A^2 - A^-2)*b",
    "g2*a -> A^-2*a*g2 + A^-1*(A^2 - A^-2)*b",
    "g1*b -> A^-2*b*g1 + A^-1*(A^2 - A^-2)*a",
    "g2*b -> A^2*b*g2 - A*(A^2 - A^-2)*a",
    "g1*g2 -> A^-2*(v1*v2*b^2 - 2) + d0*d1 + (A + A^-1)^2 + A^2*(v1*v2*a^2 - 2)",
    "g2*g1 -> A^2*(v1*v2*b^2 - 2) + d0*d1 + (A + A^-1)^2 + A^-2*(v1*v2*a^2 - 2)",
];

/// The two quadratic gamma rules in the form commonly quoted, with the
/// boundary sum in place of the product and the `A^(±2)` weights exchanged.
/// They contradict the three-generator presentation and make the system
/// non-confluent; kept for comparison.
pub const RY022_4GEN_QUOTED_GAMMA_RULES: [&str; 2] = [
    "g1*g2 -> A^2*(v1*v2*b^2 - 2) + (d0 + d1) + (A + A^-1)^2 + A^-2*(v1*v2*a^2 - 2)",
    "g2*g1 -> A^-2*(v1*v2*b^2 - 2) + (d0 + d1) + (A + A^-1)^2 + A^2*(v1*v2*a^2 - 2)",
];

const RY022_3GEN_RULES: &[&str] = &[
    "a*b -> A^2*b*a - v1^-1*v2^-1*A*(A^2 - A^-2)*g - v1^-1*v2^-1*A*(A - A^-1)*(d0 + d1)",
    "g*b -> A^-2*b*g + A^-1*(A^2 - A^-2)*a",
    "g*a -> A^2*a*g - A*(A^2 - A^-2)*b",
];

const RY022_3GEN_CUBIC: &str = "v1^-1*v2^-1*A^-1*(v1*v2*A^2*b^2 + v1*v2*A^-2*a^2 + A^2*g^2 \
     + A*g*(d0 + d1) + d0*d1 - (A - A^-1)^2)";

const RY022_3GEN_RELATIONS: &[(&str, &str)] = &[
    ("v1*v2*(A*b*a - A^-1*a*b)", "(A^2 - A^-2)*g + (A - A^-1)*(d0 + d1)"),
    ("A*a*g - A^-1*g*a", "(A^2 - A^-2)*b"),
    ("A*g*b - A^-1*b*g", "(A^2 - A^-2)*a"),
    (
        "v1*v2*A*b*a*g",
        "v1*v2*A^2*b^2 + v1*v2*A^-2*a^2 + A^2*g^2 + A*g*(d0 + d1) + d0*d1 - (A - A^-1)^2",
    ),
];

const TORUS_RULES: &[&str] = &[
    "x2*x1 -> A^2*x1*x2 - A*(A^2 - A^-2)*x3",
    "x3*x1 -> A^-2*x1*x3 + A^-1*(A^2 - A^-2)*x2",
    "x3*x2 -> A^2*x2*x3 - A*(A^2 - A^-2)*x1",
];

const TORUS_CUBIC: &str = "A^-1*(A^2*x1^2 + A^-2*x2^2 + A^2*x3^2 - 2*(A^2 + A^-2))";

const TORUS_RELATIONS: &[(&str, &str)] = &[
    ("A*x1*x2 - A^-1*x2*x1", "(A^2 - A^-2)*x3"),
    ("A*x3*x1 - A^-1*x1*x3", "(A^2 - A^-2)*x2"),
    ("A*x2*x3 - A^-1*x3*x2", "(A^2 - A^-2)*x1"),
    ("A*x1*x2*x3", "A^2*x1^2 + A^-2*x2^2 + A^2*x3^2 - 2*(A^2 + A^-2)"),
];

const RY013_RULES: &[&str] = &[
    "x2*x1 -> A*x1*x2 - Ah*v1^-1*(A - A^-1)*x3",
    "x3*x2 -> A*x2*x3 - Ah*v2^-1*(A - A^-1)*x1",
    "x3*x1 -> A^-1*x1*x3 + Ah^-1*v3^-1*(A - A^-1)*x2",
];

const RY013_RELATIONS: &[(&str, &str)] = &[
    ("v1*(Ah*x1*x2 - Ah^-1*x2*x1)", "(A - A^-1)*x3"),
    ("v2*(Ah*x2*x3 - Ah^-1*x3*x2)", "(A - A^-1)*x1"),
    ("v3*(Ah*x3*x1 - Ah^-1*x1*x3)", "(A - A^-1)*x2"),
];

const S110_RELATIONS: &[(&str, &str)] = &[
    ("A*x1*x2 - A^-1*x2*x1", "(A^2 - A^-2)*x3"),
    ("A*x2*x3 - A^-1*x3*x2", "(A^2 - A^-2)*x1"),
    ("A*x3*x1 - A^-1*x1*x3", "(A^2 - A^-2)*x2"),
];

fn data(id: PresentationId) -> PresentationData {
    let xs = || Alphabet::new(&["x1", "x2", "x3"], &[]);
    match id {
        PresentationId::Ry022FourGen => PresentationData {
            alphabet: Alphabet::new(&["a", "b", "g1", "g2"], &["g1", "g2"]).with_alias("g", "g1"),
            rules: RY022_4GEN_RULES,
            family: None,
            relations: &[],
        },
        PresentationId::Ry022ThreeGen => PresentationData {
            alphabet: Alphabet::new(&["b", "a", "g"], &["g"]).with_alias("g1", "g"),
            rules: RY022_3GEN_RULES,
            family: Some(("b*a*g", RY022_3GEN_CUBIC)),
            relations: RY022_3GEN_RELATIONS,
        },
        PresentationId::TorusBp => PresentationData {
            alphabet: Alphabet::new(&["x1", "x2", "x3"], &["x3"]),
            rules: TORUS_RULES,
            family: Some(("x1*x2*x3", TORUS_CUBIC)),
            relations: TORUS_RELATIONS,
        },
        PresentationId::Ry013 => PresentationData {
            alphabet: xs(),
            rules: RY013_RULES,
            family: None,
            relations: RY013_RELATIONS,
        },
        PresentationId::S110 => PresentationData {
            alphabet: xs(),
            rules: TORUS_RULES,
            family: None,
            relations: S110_RELATIONS,
        },
    }
}

fn single_word(x: &SkeinElem, src: &str) -> Result<Vec<u8>> {
    match x.terms().next() {
        Some((w, c)) if x.len() == 1 && *c == CoeffElem::one() => Ok(w.clone()),
        _ => Err(Error::InvalidArgument(format!("rule left side {src} is not a word"))),
    }
}

/// Parses `"lhs -> rhs"` into a rule over `alphabet`.
pub fn parse_rule(src: &str, alphabet: &Alphabet) -> Result<Rule> {
    let (l, r) = src
        .split_once("->")
        .ok_or_else(|| Error::InvalidArgument(format!("rule {src} lacks '->'")))?;
    let lhs = single_word(&parse_free(l, alphabet)?, l)?;
    Ok(Rule { lhs, rhs: parse_free(r, alphabet)? })
}

fn build(id: PresentationId) -> Result<RewriteSystem> {
    let s = data(id);
    let rules = s
        .rules
        .iter()
        .map(|r| parse_rule(r, &s.alphabet))
        .collect::<Result<Vec<_>>>()?;
    let family = match s.family {
        None => None,
        Some((lhs, rhs)) => {
            let w = single_word(&parse_free(lhs, &s.alphabet)?, lhs)?;
            Some(FamilySeed {
                prefix: w[0],
                middle: w[1],
                suffix: w[2],
                first: parse_free(rhs, &s.alphabet)?,
            })
        }
    };
    let mut relations = Vec::new();
    if s.relations.is_empty() {
        for (i, r) in rules.iter().enumerate() {
            relations.push(Relation {
                name: format!("rule{}", i + 1),
                lhs: SkeinElem::word(r.lhs.clone()),
                rhs: r.rhs.clone(),
            });
        }
    }
    for (i, (l, r)) in s.relations.iter().enumerate() {
        relations.push(Relation {
            name: format!("rel{}", i + 1),
            lhs: parse_free(l, &s.alphabet)?,
            rhs: parse_free(r, &s.alphabet)?,
        });
    }
    RewriteSystem::new(id.name(), s.alphabet, rules, family, relations)
}

/// Builds a fresh rewriting system for `id`.
pub fn make_presentation(id: PresentationId) -> Result<RewriteSystem> {
    build(id)
}

/// Shared instance of the system for `id`, built once.
pub fn presentation(id: PresentationId) -> &'static RewriteSystem {
    static CELLS: [OnceLock<RewriteSystem>; 5] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let idx = PresentationId::ALL.iter().position(|p| *p == id).expect("registered");
    CELLS[idx].get_or_init(|| build(id).expect("registry presentations are order compatible"))
}
