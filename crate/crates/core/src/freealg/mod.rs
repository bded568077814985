//! Noncommutative polynomials over the scalar ring, rewriting systems and
//! the registered presentations.

mod confluence;
mod element;
mod hom;
mod pi;
mod presentations;
mod system;

pub use confluence::{
    check_local_confluence, check_local_confluence_bounded, Ambiguity, ConfluenceReport,
    FAMILY_BOUND,
};
pub use element::{SkeinElem, Word};
pub use hom::{
    four_to_three_map, identity_map, phi_map, phi_map_four_gen, ry013_to_s110_map,
    verify_homomorphism, AlgebraMap, HomReport, RelationCheck,
};
pub use pi::{basis_images, pi_commutative, pi_d1, rank, ZPoly};
pub use presentations::{
    make_presentation, parse_rule, presentation, PresentationId, RY022_4GEN_QUOTED_GAMMA_RULES,
};
pub use system::{
    Alphabet, FamilySeed, Match, MatchKind, OrderKey, Relation, RewriteSystem, Rule, RuleFamily,
    Strategy, STEP_BUDGET,
};

use crate::coeff::CoeffElem;
use crate::error::Result;
use crate::expr::Lowering;

/// Lowers expressions to unreduced words over an alphabet.
pub struct FreeLowering<'a>(pub &'a Alphabet);

impl Lowering for FreeLowering<'_> {
    type Out = SkeinElem;

    fn scalar(&self, c: CoeffElem) -> SkeinElem {
        SkeinElem::scalar(c)
    }

    fn generator(&self, name: &str) -> Option<SkeinElem> {
        self.0.letter(name).map(SkeinElem::gen)
    }

    fn add(&self, x: &SkeinElem, y: &SkeinElem) -> SkeinElem {
        x + y
    }

    fn neg(&self, x: &SkeinElem) -> SkeinElem {
        -x
    }

    fn mul(&self, x: &SkeinElem, y: &SkeinElem) -> Result<SkeinElem> {
        Ok(x.concat(y))
    }
}

/// Lowers expressions to normal forms of a rewriting system.
pub struct ReducedLowering<'a>(pub &'a RewriteSystem);

impl Lowering for ReducedLowering<'_> {
    type Out = SkeinElem;

    fn scalar(&self, c: CoeffElem) -> SkeinElem {
        SkeinElem::scalar(c)
    }

    fn generator(&self, name: &str) -> Option<SkeinElem> {
        self.0.alphabet().letter(name).map(SkeinElem::gen)
    }

    fn add(&self, x: &SkeinElem, y: &SkeinElem) -> SkeinElem {
        x + y
    }

    fn neg(&self, x: &SkeinElem) -> SkeinElem {
        -x
    }

    fn mul(&self, x: &SkeinElem, y: &SkeinElem) -> Result<SkeinElem> {
        self.0.mul(x, y)
    }
}

/// Parses `src` as a free (unreduced) element over `alphabet`.
pub fn parse_free(src: &str, alphabet: &Alphabet) -> Result<SkeinElem> {
    crate::expr::parse_with(src, &FreeLowering(alphabet))
}

impl RewriteSystem {
    /// Parses `src` and returns its normal form.
    pub fn parse(&self, src: &str) -> Result<SkeinElem> {
        crate::expr::parse_with(src, &ReducedLowering(self))
    }
}
