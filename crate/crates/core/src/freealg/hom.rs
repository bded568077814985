use super::element::SkeinElem;
use super::presentations::{presentation, PresentationId};
use super::system::RewriteSystem;
use crate::coeff::{specialize, CoeffElem, Scalar, SpecValue, Specialization, Specialized};
use crate::error::{Error, Result};

/// Algebra map between two presentations: an image for each source letter
/// plus an exact specialization of the scalars.
#[derive(Clone, Debug)]
pub struct AlgebraMap<'a> {
    pub source: &'a RewriteSystem,
    pub target: &'a RewriteSystem,
    images: Vec<SkeinElem>,
    scalars: Specialization,
}

/// Residue of one source relation under a map.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: String,
    pub residue: SkeinElem,
}

/// Outcome of [`verify_homomorphism`].
#[derive(Clone, Debug)]
pub struct HomReport {
    pub source: String,
    pub target: String,
    pub checks: Vec<RelationCheck>,
}

impl HomReport {
    pub fn is_homomorphism(&self) -> bool {
        self.checks.iter().all(|c| c.residue.is_zero())
    }
}

impl<'a> AlgebraMap<'a> {
    /// `images` pairs source letter names with target expressions.
    pub fn new(
        source: &'a RewriteSystem,
        target: &'a RewriteSystem,
        images: &[(&str, SkeinElem)],
        scalars: Specialization,
    ) -> Result<Self> {
        let mut slots: Vec<Option<SkeinElem>> = vec![None; source.alphabet().len()];
        for (name, img) in images {
            let l = source.alphabet().letter(name).ok_or_else(|| {
                Error::AlphabetMismatch(format!("{name} is not a letter of {}", source.name()))
            })?;
            slots[l as usize] = Some(target.reduce(img)?);
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::AlphabetMismatch(format!("no image for {}", source.names()[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if [Scalar::HalfA, Scalar::V1, Scalar::V2, Scalar::V3, Scalar::D0, Scalar::D1]
            .iter()
            .any(|s| matches!(scalars.get(*s), Some(SpecValue::Complex(_))))
        {
            return Err(Error::InvalidArgument("algebra maps need exact scalar images".into()));
        }
        Ok(Self { source, target, images, scalars })
    }

    /// Parses each image in the target presentation.
    pub fn parse(
        source: &'a RewriteSystem,
        target: &'a RewriteSystem,
        images: &[(&str, &str)],
        scalars: Specialization,
    ) -> Result<Self> {
        let parsed = images
            .iter()
            .map(|(n, src)| Ok((*n, target.parse(src)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, &parsed, scalars)
    }

    pub fn map_scalar(&self, c: &CoeffElem) -> Result<CoeffElem> {
        match specialize(c, &self.scalars)? {
            Specialized::Exact(v) => Ok(v),
            Specialized::Numeric(_) => unreachable!("exact scalars checked at construction"),
        }
    }

    /// Image of `x`, reduced in the target.
    pub fn apply(&self, x: &SkeinElem) -> Result<SkeinElem> {
        let mut out = SkeinElem::zero();
        for (w, c) in x.terms() {
            let mut t = SkeinElem::scalar(self.map_scalar(c)?);
            for &l in w {
                t = self.target.mul(&t, &self.images[l as usize])?;
            }
            out.add_assign_ref(&t);
        }
        Ok(out)
    }

    pub fn image(&self, name: &str) -> Option<&SkeinElem> {
        self.source.alphabet().letter(name).map(|l| &self.images[l as usize])
    }
}

/// Substitutes the images into each defining relation of the source and
/// reduces the residue in the target.
pub fn verify_homomorphism(map: &AlgebraMap<'_>) -> Result<HomReport> {
    let checks = map
        .source
        .relations()
        .iter()
        .map(|r| {
            Ok(RelationCheck {
                name: r.name.clone(),
                residue: &map.apply(&r.lhs)? - &map.apply(&r.rhs)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomReport {
        source: map.source.name().to_string(),
        target: map.target.name().to_string(),
        checks,
    })
}

/// Identity map of a registered presentation.
pub fn identity_map(id: PresentationId) -> AlgebraMap<'static> {
    let sys = presentation(id);
    let images: Vec<(&str, SkeinElem)> = sys
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| (*n, SkeinElem::gen(i as u8)))
        .collect();
    AlgebraMap::new(sys, sys, &images, Specialization::default()).expect("identity is total")
}

fn phi_scalars() -> Specialization {
    let a_plus = CoeffElem::a_pow(1) + CoeffElem::a_pow(-1);
    Specialization::trivial_punctures()
        .exact(Scalar::D0, a_plus.clone())
        .exact(Scalar::D1, -a_plus)
}

/// The surjection of the twice-punctured annulus (three generators) onto
/// the torus.
pub fn phi_map() -> AlgebraMap<'static> {
    AlgebraMap::parse(
        presentation(PresentationId::Ry022ThreeGen),
        presentation(PresentationId::TorusBp),
        &[("b", "x1"), ("a", "x2"), ("g", "x3")],
        phi_scalars(),
    )
    .expect("phi images parse")
}

/// The same surjection on the four-generator presentation.
pub fn phi_map_four_gen() -> AlgebraMap<'static> {
    AlgebraMap::parse(
        presentation(PresentationId::Ry022FourGen),
        presentation(PresentationId::TorusBp),
        &[("b", "x1"), ("a", "x2"), ("g1", "x3"), ("g2", "A^-1*(x2*x1 - A^-1*x3)")],
        phi_scalars(),
    )
    .expect("phi images parse")
}

/// Elimination of `g2` from the four-generator presentation.
pub fn four_to_three_map() -> AlgebraMap<'static> {
    AlgebraMap::parse(
        presentation(PresentationId::Ry022FourGen),
        presentation(PresentationId::Ry022ThreeGen),
        &[("a", "a"), ("b", "b"), ("g1", "g"), ("g2", "A^-1*(v1*v2*a*b - A^-1*g - d0 - d1)")],
        Specialization::default(),
    )
    .expect("elimination images parse")
}

/// Thrice-punctured disk onto the one-holed torus: `A^(1/2) -> A`,
/// `v_i -> 1`, generators identified.
pub fn ry013_to_s110_map() -> AlgebraMap<'static> {
    AlgebraMap::parse(
        presentation(PresentationId::Ry013),
        presentation(PresentationId::S110),
        &[("x1", "x1"), ("x2", "x2"), ("x3", "x3")],
        Specialization::trivial_punctures().exact(Scalar::HalfA, CoeffElem::a_pow(1)),
    )
    .expect("identification images parse")
}
