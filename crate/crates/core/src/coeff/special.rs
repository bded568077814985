use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::elem::{CoeffElem, Exp, Scalar};
use crate::error::{Error, Result};

/// A value assigned to a scalar variable.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecValue {
    Exact(CoeffElem),
    Complex(Complex64),
}

/// Partial or total assignment of the scalar variables.
///
/// Exact assignments give a ring homomorphism into [`CoeffElem`]; once every
/// variable carries a numeric value the result is a complex number.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Specialization {
    pub half_a: Option<SpecValue>,
    pub v1: Option<SpecValue>,
    pub v2: Option<SpecValue>,
    pub v3: Option<SpecValue>,
    pub d0: Option<SpecValue>,
    pub d1: Option<SpecValue>,
}

/// Outcome of [`specialize`].
#[derive(Clone, Debug, PartialEq)]
pub enum Specialized {
    Exact(CoeffElem),
    Numeric(Complex64),
}

impl Specialization {
    /// `v1 = v2 = v3 = 1`, everything else free.
    pub fn trivial_punctures() -> Self {
        Self {
            v1: Some(SpecValue::Exact(CoeffElem::one())),
            v2: Some(SpecValue::Exact(CoeffElem::one())),
            v3: Some(SpecValue::Exact(CoeffElem::one())),
            ..Self::default()
        }
    }

    pub fn with(mut self, s: Scalar, v: SpecValue) -> Self {
        *self.slot_mut(s) = Some(v);
        self
    }

    pub fn exact(self, s: Scalar, v: CoeffElem) -> Self {
        self.with(s, SpecValue::Exact(v))
    }

    pub fn numeric(self, s: Scalar, v: Complex64) -> Self {
        self.with(s, SpecValue::Complex(v))
    }

    fn slot_mut(&mut self, s: Scalar) -> &mut Option<SpecValue> {
        match s {
            Scalar::HalfA => &mut self.half_a,
            Scalar::V1 => &mut self.v1,
            Scalar::V2 => &mut self.v2,
            Scalar::V3 => &mut self.v3,
            Scalar::D0 => &mut self.d0,
            Scalar::D1 => &mut self.d1,
        }
    }

    pub fn get(&self, s: Scalar) -> Option<&SpecValue> {
        match s {
            Scalar::HalfA => self.half_a.as_ref(),
            Scalar::V1 => self.v1.as_ref(),
            Scalar::V2 => self.v2.as_ref(),
            Scalar::V3 => self.v3.as_ref(),
            Scalar::D0 => self.d0.as_ref(),
            Scalar::D1 => self.d1.as_ref(),
        }
    }

    const ALL: [Scalar; 6] = [
        Scalar::HalfA,
        Scalar::V1,
        Scalar::V2,
        Scalar::V3,
        Scalar::D0,
        Scalar::D1,
    ];

    fn validate(&self) -> Result<()> {
        for s in Self::ALL {
            let zero = match self.get(s) {
                Some(SpecValue::Exact(c)) => c.is_zero(),
                Some(SpecValue::Complex(z)) => z.is_zero(),
                None => false,
            };
            if zero && s.is_unit() {
                return Err(Error::ZeroUnit(s.name()));
            }
            if let Some(SpecValue::Exact(c)) = self.get(s) {
                if s.is_unit() && !c.is_unit() {
                    return Err(Error::InvalidArgument(format!(
                        "exact value for {} must be a unit, got {c}",
                        s.name()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Applies the substitution homomorphism.
pub fn specialize(x: &CoeffElem, s: &Specialization) -> Result<Specialized> {
    s.validate()?;
    let any_numeric = Specialization::ALL
        .iter()
        .any(|v| matches!(s.get(*v), Some(SpecValue::Complex(_))));
    if any_numeric {
        let mut point = [Complex64::zero(); 6];
        for (i, v) in Specialization::ALL.iter().enumerate() {
            point[i] = match s.get(*v) {
                Some(SpecValue::Complex(z)) => *z,
                Some(SpecValue::Exact(c)) => match c.as_monomial() {
                    Some((e, k)) if e == Exp::ONE => Complex64::new(k.to_f64().unwrap_or(f64::NAN), 0.0),
                    _ if c.is_zero() => Complex64::zero(),
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "numeric evaluation needs a numeric value for {}",
                            v.name()
                        )))
                    }
                },
                None if *v == Scalar::V3 && !x.involves(Scalar::V3) => Complex64::new(1.0, 0.0),
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "numeric evaluation needs a value for {}",
                        v.name()
                    )))
                }
            };
        }
        return Ok(Specialized::Numeric(evaluate(x, &point)));
    }
    let mut cache: HashMap<(usize, i64), CoeffElem> = HashMap::new();
    let mut out = CoeffElem::zero();
    for (e, c) in x.terms() {
        let exps = [e.a2, e.v1, e.v2, e.v3, e.d0 as i64, e.d1 as i64];
        let mut term = CoeffElem::constant(c.clone());
        for (i, var) in Specialization::ALL.iter().enumerate() {
            if exps[i] == 0 {
                continue;
            }
            let factor = match s.get(*var) {
                None => {
                    let mut ex = Exp::ONE;
                    match var {
                        Scalar::HalfA => ex.a2 = exps[i],
                        Scalar::V1 => ex.v1 = exps[i],
                        Scalar::V2 => ex.v2 = exps[i],
                        Scalar::V3 => ex.v3 = exps[i],
                        Scalar::D0 => ex.d0 = exps[i] as u32,
                        Scalar::D1 => ex.d1 = exps[i] as u32,
                    }
                    CoeffElem::monomial(ex, 1)
                }
                Some(SpecValue::Exact(img)) => cache
                    .entry((i, exps[i]))
                    .or_insert_with(|| {
                        let p = img.pow(exps[i].unsigned_abs() as u32);
                        if exps[i] < 0 {
                            p.unit_inverse().expect("validated unit")
                        } else {
                            p
                        }
                    })
                    .clone(),
                Some(SpecValue::Complex(_)) => unreachable!(),
            };
            term = &term * &factor;
        }
        out.add_assign_ref(&term);
    }
    Ok(Specialized::Exact(out))
}

/// Evaluates at `(A^(1/2), v1, v2, v3, d0, d1)`.
pub fn evaluate(x: &CoeffElem, point: &[Complex64; 6]) -> Complex64 {
    let mut total = Complex64::zero();
    for (e, c) in x.terms() {
        let c = c.to_f64().unwrap_or(f64::NAN);
        let m = point[0].powi(e.a2 as i32)
            * point[1].powi(e.v1 as i32)
            * point[2].powi(e.v2 as i32)
            * point[3].powi(e.v3 as i32)
            * point[4].powi(e.d0 as i32)
            * point[5].powi(e.d1 as i32);
        total += m * c;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(x: &CoeffElem, s: &Specialization) -> CoeffElem {
        match specialize(x, s).unwrap() {
            Specialized::Exact(c) => c,
            other => panic!("expected exact, got {other:?}"),
        }
    }

    #[test]
    fn a_minus_inverse_vanishes_at_one() {
        let x = &CoeffElem::a_pow(1) - &CoeffElem::a_pow(-1);
        let s = Specialization::default().exact(Scalar::HalfA, CoeffElem::one());
        assert!(exact(&x, &s).is_zero());
    }

    #[test]
    fn punctures_to_one() {
        let x = CoeffElem::v12_pow(-1);
        assert_eq!(exact(&x, &Specialization::trivial_punctures()), CoeffElem::one());
    }

    #[test]
    fn opposite_boundary_values_cancel() {
        let a = &CoeffElem::a_pow(1) + &CoeffElem::a_pow(-1);
        let s = Specialization::default()
            .exact(Scalar::D0, a.clone())
            .exact(Scalar::D1, -&a);
        let x = &CoeffElem::d0() + &CoeffElem::d1();
        assert!(exact(&x, &s).is_zero());
    }

    #[test]
    fn zero_unit_rejected() {
        let s = Specialization::default().exact(Scalar::V1, CoeffElem::zero());
        assert_eq!(
            specialize(&CoeffElem::one(), &s),
            Err(Error::ZeroUnit("v1"))
        );
        let s = Specialization::default().numeric(Scalar::HalfA, Complex64::zero());
        assert!(matches!(specialize(&CoeffElem::one(), &s), Err(Error::ZeroUnit(_))));
    }

    #[test]
    fn partial_numeric_rejected() {
        let s = Specialization::default().numeric(Scalar::HalfA, Complex64::new(1.0, 0.0));
        assert!(specialize(&CoeffElem::d0(), &s).is_err());
    }

    #[test]
    fn numeric_total() {
        let s = Specialization::default()
            .numeric(Scalar::HalfA, Complex64::new(0.0, 1.0))
            .numeric(Scalar::V1, Complex64::new(2.0, 0.0))
            .numeric(Scalar::V2, Complex64::new(0.5, 0.0))
            .numeric(Scalar::D0, Complex64::new(3.0, 0.0))
            .numeric(Scalar::D1, Complex64::new(-1.0, 0.0));
        // A = (A^(1/2))^2 = -1
        let x = &(&CoeffElem::a_pow(1) * &CoeffElem::v12_pow(1)) + &(&CoeffElem::d0() * &CoeffElem::d1());
        match specialize(&x, &s).unwrap() {
            Specialized::Numeric(z) => assert!((z - Complex64::new(-4.0, 0.0)).norm() < 1e-12),
            other => panic!("{other:?}"),
        }
    }
}
