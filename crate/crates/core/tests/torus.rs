use proptest::prelude::*;
use skein_core::coeff::HalfLaurent;
use skein_core::freealg::{presentation, PresentationId, SkeinElem};
use skein_core::torus::{fg_product, phi, torus_expand, torus_realize, TorusCurve, TorusExpansion};

fn c(p: i64, q: i64) -> TorusCurve {
    TorusCurve::new(p, q).unwrap()
}

fn a(e: i64) -> HalfLaurent {
    HalfLaurent::a_pow(e)
}

fn expansion(terms: &[((i64, i64), HalfLaurent)], scalar: i64) -> TorusExpansion {
    let mut out = TorusExpansion::zero();
    for ((p, q), k) in terms {
        out.add_curve(c(*p, *q), k.clone());
    }
    out.scalar = HalfLaurent::constant(scalar);
    out
}

fn canonical_curves(bound: i64) -> Vec<TorusCurve> {
    let mut out = Vec::new();
    for p in 0..=bound {
        for q in -bound..=bound {
            if p > 0 || q > 0 {
                out.push(c(p, q));
            }
        }
    }
    out
}

#[test]
fn product_to_sum_examples() {
    assert_eq!(fg_product(c(1, 0), c(0, 1)), expansion(&[((1, 1), a(1)), ((1, -1), a(-1))], 0));
    assert_eq!(fg_product(c(1, 0), c(1, 0)), expansion(&[((2, 0), a(0))], 2));
    assert_eq!(fg_product(c(2, 1), c(1, 1)), expansion(&[((3, 2), a(1)), ((1, 0), a(-1))], 0));
}

#[test]
fn realization_examples() {
    let t = presentation(PresentationId::TorusBp);
    assert_eq!(*torus_realize(c(1, 1)).unwrap(), t.gen("x3"));
    assert_eq!(*torus_realize(c(2, 0)).unwrap(), t.parse("x1^2 - 2").unwrap());
    assert_eq!(*torus_realize(c(2, 1)).unwrap(), t.parse("A^-1*x1*x3 - A^-2*x2").unwrap());
}

#[test]
fn expansion_examples() {
    let t = presentation(PresentationId::TorusBp);
    assert_eq!(torus_expand(&t.gen("x1")).unwrap(), TorusExpansion::curve(c(1, 0)));
    assert_eq!(torus_expand(&t.parse("2").unwrap()).unwrap(), expansion(&[], 2));
    assert_eq!(
        torus_expand(&t.parse("x1*x2").unwrap()).unwrap(),
        expansion(&[((1, 1), a(1)), ((1, -1), a(-1))], 0)
    );
}

#[test]
fn realize_expand_round_trip() {
    for curve in canonical_curves(6) {
        let r = torus_realize(curve).unwrap();
        assert_eq!(torus_expand(&r).unwrap(), TorusExpansion::curve(curve), "{curve}");
    }
}

#[test]
fn product_to_sum_matches_algebra() {
    let t = presentation(PresentationId::TorusBp);
    let curves = canonical_curves(5);
    for u in &curves {
        for w in &curves {
            let prod = t.mul(&torus_realize(*u).unwrap(), &torus_realize(*w).unwrap()).unwrap();
            assert_eq!(torus_expand(&prod).unwrap(), fg_product(*u, *w), "{u} * {w}");
        }
    }
}

#[test]
fn phi_examples() {
    let s3 = presentation(PresentationId::Ry022ThreeGen);
    let s4 = presentation(PresentationId::Ry022FourGen);
    let t = presentation(PresentationId::TorusBp);
    assert_eq!(phi(&s3.gen("b"), PresentationId::Ry022ThreeGen).unwrap(), t.gen("x1"));
    let boundary = s3.parse("d0 + d1").unwrap();
    assert!(phi(&boundary, PresentationId::Ry022ThreeGen).unwrap().is_zero());
    let g2 = phi(&s4.gen("g2"), PresentationId::Ry022FourGen).unwrap();
    assert_eq!(g2, t.parse("A^-1*(x2*x1 - A^-1*x3)").unwrap());
    assert_eq!(torus_expand(&g2).unwrap(), TorusExpansion::curve(c(1, -1)));
    assert!(phi(&t.gen("x1"), PresentationId::TorusBp).is_err());
}

#[test]
fn expansion_json_round_trip() {
    let e = fg_product(c(2, 1), c(1, -1));
    let s = serde_json::to_string(&e).unwrap();
    assert!(s.starts_with("{\"terms\":[{\"curve\":["));
    let back: TorusExpansion = serde_json::from_str(&s).unwrap();
    assert_eq!(back, e);
}

fn curve_strategy() -> impl Strategy<Value = TorusCurve> {
    (-5i64..=5, -5i64..=5)
        .prop_filter("nonzero", |(p, q)| *p != 0 || *q != 0)
        .prop_map(|(p, q)| c(p, q))
}

fn word_strategy() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 0..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_to_sum_reverses_under_bar(u in curve_strategy(), w in curve_strategy()) {
        // Swapping factors inverts A; the algebra is not commutative.
        let mut bar = TorusExpansion::zero();
        let uw = fg_product(u, w);
        for (curve, k) in &uw.terms {
            bar.add_curve(*curve, k.invert_variable());
        }
        bar.scalar = uw.scalar.invert_variable();
        prop_assert_eq!(bar, fg_product(w, u));
    }

    #[test]
    fn phi_is_multiplicative(x in word_strategy(), y in word_strategy()) {
        let s3 = presentation(PresentationId::Ry022ThreeGen);
        let t = presentation(PresentationId::TorusBp);
        let (x, y) = (SkeinElem::word(x), SkeinElem::word(y));
        let id = PresentationId::Ry022ThreeGen;
        let lhs = phi(&s3.mul(&x, &y).unwrap(), id).unwrap();
        let rhs = t.mul(&phi(&x, id).unwrap(), &phi(&y, id).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
