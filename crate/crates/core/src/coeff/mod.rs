//! Exact arithmetic in the commutative scalar ring, Chebyshev threading and
//! quantum integers.

mod chebyshev;
mod elem;
mod laurent;
mod special;

pub use chebyshev::{chebyshev, chebyshev_coefficients, chebyshev_complex, chebyshev_with};
pub use elem::{CoeffElem, Exp, Scalar};
pub use laurent::{quantum_int, signed_quantum_int, HalfLaurent};
pub use special::{evaluate, specialize, SpecValue, Specialization, Specialized};

/// Arithmetic operation selector for [`ring_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

pub fn ring_arith(lhs: &CoeffElem, op: RingOp, rhs: &CoeffElem) -> CoeffElem {
    match op {
        RingOp::Add => lhs + rhs,
        RingOp::Sub => lhs - rhs,
        RingOp::Mul => lhs * rhs,
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn arb_coeff() -> impl Strategy<Value = CoeffElem> {
        prop::collection::vec(
            ((-4i64..=4, -2i64..=2, -2i64..=2, 0u32..=2, 0u32..=2), -5i64..=5),
            0..5,
        )
        .prop_map(|terms| {
            let mut out = CoeffElem::zero();
            for ((a2, v1, v2, d0, d1), c) in terms {
                out.add_term(Exp { a2, v1, v2, d0, d1, v3: 0 }, c.into());
            }
            out
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(x in arb_coeff(), y in arb_coeff(), z in arb_coeff()) {
            use RingOp::*;
            prop_assert_eq!(ring_arith(&ring_arith(&x, Mul, &y), Mul, &z), ring_arith(&x, Mul, &ring_arith(&y, Mul, &z)));
            prop_assert_eq!(ring_arith(&x, Mul, &ring_arith(&y, Add, &z)), ring_arith(&ring_arith(&x, Mul, &y), Add, &ring_arith(&x, Mul, &z)));
            prop_assert_eq!(ring_arith(&x, Mul, &y), ring_arith(&y, Mul, &x));
            prop_assert!(ring_arith(&ring_arith(&x, Add, &y), Sub, &y) == x);
        }

        #[test]
        fn specialize_commutes_with_arith(x in arb_coeff(), y in arb_coeff(),
            ah in 0.5f64..1.5, v in 0.5f64..2.0, d in -2.0f64..2.0) {
            let s = Specialization::default()
                .numeric(Scalar::HalfA, Complex64::from_polar(ah, 0.3))
                .numeric(Scalar::V1, Complex64::new(v, 0.1))
                .numeric(Scalar::V2, Complex64::new(1.0 / v, -0.2))
                .numeric(Scalar::D0, Complex64::new(d, 0.5))
                .numeric(Scalar::D1, Complex64::new(-d, 0.25));
            let val = |c: &CoeffElem| match specialize(c, &s).unwrap() {
                Specialized::Numeric(z) => z,
                Specialized::Exact(_) => unreachable!(),
            };
            let prod = val(&(&x * &y));
            let expect = val(&x) * val(&y);
            prop_assert!((prod - expect).norm() <= 1e-8 * (1.0 + expect.norm()));
            let sum = val(&(&x + &y));
            prop_assert!((sum - (val(&x) + val(&y))).norm() <= 1e-8 * (1.0 + sum.norm()));
            // exact partial assignment is a homomorphism too
            let e = Specialization::trivial_punctures().exact(Scalar::D1, &CoeffElem::a_pow(1) + &CoeffElem::d0());
            let ex = |c: &CoeffElem| match specialize(c, &e).unwrap() {
                Specialized::Exact(c) => c,
                Specialized::Numeric(_) => unreachable!(),
            };
            prop_assert_eq!(ex(&(&x * &y)), &ex(&x) * &ex(&y));
        }
    }
}
