use proptest::prelude::*;
use skein_core::coeff::CoeffElem;
use skein_core::freealg::{
    basis_images, check_local_confluence, four_to_three_map, identity_map, make_presentation,
    parse_free, parse_rule, phi_map, phi_map_four_gen, pi_commutative, pi_d1, presentation, rank,
    ry013_to_s110_map, verify_homomorphism, AlgebraMap, Alphabet, PresentationId, RewriteSystem,
    Rule, SkeinElem, Strategy as Order, ZPoly, RY022_4GEN_QUOTED_GAMMA_RULES,
};

fn sys(id: PresentationId) -> &'static RewriteSystem {
    presentation(id)
}

#[test]
fn registry_is_total_and_confluent() {
    for id in PresentationId::ALL {
        let s = make_presentation(id).unwrap();
        let report = check_local_confluence(&s).unwrap();
        assert!(report.is_confluent(), "{id} has unresolved ambiguities");
        assert!(!report.ambiguities.is_empty());
        assert_eq!(id.name().parse::<PresentationId>().unwrap(), id);
    }
}

#[test]
fn four_gen_rule_shapes() {
    let s = sys(PresentationId::Ry022FourGen);
    assert_eq!(s.rules().len(), 7);
    assert!(s.rules().iter().all(|r| r.lhs.len() == 2));
    let ba = s.parse("b*a").unwrap();
    let want = parse_free("a*b - v1^-1*v2^-1*(A - A^-1)*(g2 - g1)", s.alphabet()).unwrap();
    assert_eq!(ba, want);
    let g1a = s.parse("g1*a").unwrap();
    let want = parse_free("A^2*a*g1 - A*(A^2 - A^-2)*b", s.alphabet()).unwrap();
    assert_eq!(g1a, want);
}

#[test]
fn four_gen_normal_forms() {
    let s = sys(PresentationId::Ry022FourGen);
    let (a, b, g1, g2) = (0u8, 1u8, 2u8, 3u8);
    assert!(s.is_normal(&[a, a, b, g1, g1]));
    assert!(s.is_normal(&[b, g2, g2]));
    assert!(!s.is_normal(&[g1, g2]));
    assert!(!s.is_normal(&[b, a]));
}

#[test]
fn gamma_product_matches_three_generator_elimination() {
    // Reducing g1*g2 in the three-generator presentation after eliminating g2.
    let s = sys(PresentationId::Ry022FourGen);
    let got = s.parse("g1*g2").unwrap();
    let want = parse_free(
        "A^-2*(v1*v2*b^2 - 2) + d0*d1 + (A + A^-1)^2 + A^2*(v1*v2*a^2 - 2)",
        s.alphabet(),
    )
    .unwrap();
    assert_eq!(got, want);
    let m = four_to_three_map();
    let lhs = m.apply(&parse_free("g1*g2", s.alphabet()).unwrap()).unwrap();
    assert_eq!(lhs, m.apply(&want).unwrap());
}

#[test]
fn quoted_gamma_rules_are_not_confluent() {
    let s = sys(PresentationId::Ry022FourGen);
    let mut broken = s.clone();
    for (i, src) in RY022_4GEN_QUOTED_GAMMA_RULES.iter().enumerate() {
        let r = parse_rule(src, s.alphabet()).unwrap();
        broken = broken.with_rule_rhs(5 + i, r.rhs).unwrap();
    }
    assert!(!check_local_confluence(&broken).unwrap().is_confluent());
}

#[test]
fn perturbed_rule_is_detected() {
    let s = sys(PresentationId::Ry022FourGen);
    let idx = 5;
    let rhs = &s.rules()[idx].rhs + &SkeinElem::one();
    let broken = s.with_rule_rhs(idx, rhs).unwrap();
    let report = check_local_confluence(&broken).unwrap();
    assert!(report.unresolved().count() >= 1);
    for id in [PresentationId::Ry022ThreeGen, PresentationId::TorusBp, PresentationId::Ry013] {
        let s = sys(id);
        let rhs = &s.rules()[0].rhs + &SkeinElem::gen(0);
        let broken = s.with_rule_rhs(0, rhs).unwrap();
        assert!(!check_local_confluence(&broken).unwrap().is_confluent(), "{id}");
    }
}

#[test]
fn single_commutation_rule_has_no_ambiguities() {
    let alpha = Alphabet::new(&["a", "b"], &[]);
    let rule = parse_rule("b*a -> a*b", &alpha).unwrap();
    let s = RewriteSystem::new("ab", alpha, vec![rule], None, vec![]).unwrap();
    let report = check_local_confluence(&s).unwrap();
    assert!(report.ambiguities.is_empty());
    assert!(report.is_confluent());
}

#[test]
fn single_cubic_rule_is_not_enough() {
    // Without the family, b*a^2*g is irreducible but equals another normal form.
    let s3 = sys(PresentationId::Ry022ThreeGen);
    let mut rules = s3.rules().to_vec();
    let cubic = s3.family_rhs(1).unwrap();
    rules.push(Rule { lhs: vec![0, 1, 2], rhs: (*cubic).clone() });
    let s = RewriteSystem::new("single", s3.alphabet().clone(), rules, None, vec![]).unwrap();
    assert!(s.is_normal(&[0, 1, 1, 2]));
    assert!(!check_local_confluence(&s).unwrap().is_confluent());
    assert!(!s3.is_normal(&[0, 1, 1, 2]));
}

#[test]
fn order_violation_is_rejected() {
    let alpha = Alphabet::new(&["a", "b"], &[]);
    let rule = parse_rule("a*b -> b*a", &alpha).unwrap();
    let err = RewriteSystem::new("bad", alpha.clone(), vec![rule], None, vec![]).unwrap_err();
    assert!(matches!(err, skein_core::Error::OrderViolation { .. }));
    let rule = parse_rule("b*a -> a*a*b", &alpha).unwrap();
    assert!(RewriteSystem::new("bad", alpha, vec![rule], None, vec![]).is_err());
}

#[test]
fn three_gen_cubic_rule() {
    let s = sys(PresentationId::Ry022ThreeGen);
    assert_eq!(s.rules().len(), 3);
    let got = s.parse("v1*v2*b*a*g").unwrap();
    let want = s
        .parse("A^-1*(v1*v2*A^2*b^2 + v1*v2*A^-2*a^2 + A^2*g^2 + A*g*(d0 + d1) + d0*d1 - (A - A^-1)^2)")
        .unwrap();
    assert_eq!(got, want);
    assert!(!s.is_normal(&[0, 1, 2]));
    assert!(s.is_normal(&[0, 0, 2, 2, 2, 2, 2]));
    assert!(s.is_normal(&[0, 0, 1, 1, 1]));
}

#[test]
fn alpha_beta_swap() {
    let s = sys(PresentationId::Ry022ThreeGen);
    let got = s.mul(&s.gen("a"), &s.gen("b")).unwrap();
    // Solve v(A*b*a - A^-1*a*b) = (A^2 - A^-2)g + (A - A^-1)(d0 + d1) for a*b.
    let want = s
        .parse("A^2*b*a - v1^-1*v2^-1*A*(A^2 - A^-2)*g - v1^-1*v2^-1*A*(A - A^-1)*(d0 + d1)")
        .unwrap();
    assert_eq!(got, want);
    assert_eq!(s.mul(&SkeinElem::one(), &want).unwrap(), want);
}

#[test]
fn torus_commutators() {
    let s = sys(PresentationId::TorusBp);
    let lhs = s.parse("A*x1*x2 - A^-1*x2*x1").unwrap();
    assert_eq!(lhs, s.parse("(A^2 - A^-2)*x3").unwrap());
    let lhs = s.parse("A*x1*x2*x3").unwrap();
    assert_eq!(lhs, s.parse("A^2*x1^2 + A^-2*x2^2 + A^2*x3^2 - 2*(A^2 + A^-2)").unwrap());
}

#[test]
fn registered_maps_are_homomorphisms() {
    for m in [phi_map(), phi_map_four_gen(), four_to_three_map(), ry013_to_s110_map()] {
        let r = verify_homomorphism(&m).unwrap();
        assert!(r.is_homomorphism(), "{} -> {}", r.source, r.target);
    }
    for id in PresentationId::ALL {
        assert!(verify_homomorphism(&identity_map(id)).unwrap().is_homomorphism());
    }
}

#[test]
fn map_with_wrong_image_fails() {
    let src = sys(PresentationId::Ry022ThreeGen);
    let tgt = sys(PresentationId::TorusBp);
    let m = AlgebraMap::parse(
        src,
        tgt,
        &[("b", "x2"), ("a", "x1"), ("g", "x3")],
        skein_core::coeff::Specialization::trivial_punctures(),
    )
    .unwrap();
    assert!(!verify_homomorphism(&m).unwrap().is_homomorphism());
    let missing = AlgebraMap::parse(src, tgt, &[("b", "x1")], Default::default());
    assert!(matches!(missing, Err(skein_core::Error::AlphabetMismatch(_))));
}

#[test]
fn pi_images() {
    let s = sys(PresentationId::Ry022FourGen);
    let y = ZPoly::y();
    assert_eq!(pi_commutative(&s.gen("g1"), s).unwrap(), &(&y * &y) - &ZPoly::constant(2));
    assert_eq!(pi_commutative(&SkeinElem::one(), s).unwrap(), ZPoly::one());
    let (x, z) = (ZPoly::x(), ZPoly::z());
    let want = &(&(&(&(&x * &y) * &z) - &(&x * &x)) - &(&y * &y)) - &(&(&z * &z) - &ZPoly::constant(2));
    assert_eq!(pi_d1(), &want);
    let torus = sys(PresentationId::TorusBp);
    assert!(pi_commutative(&torus.gen("x1"), torus).is_err());
}

#[test]
fn pi_basis_images_are_independent() {
    let imgs = basis_images(3);
    assert_eq!(imgs.len(), 112);
    assert_eq!(rank(&imgs), imgs.len());
    // A dependent family is detected.
    let mut dep = imgs[..3].to_vec();
    dep.push(&imgs[0] + &imgs[1]);
    assert_eq!(rank(&dep), 3);
}

#[test]
fn step_budget_fires() {
    let s = sys(PresentationId::Ry022FourGen).clone().with_budget(3);
    let err = s.parse("g2*g1*b*a*g2").unwrap_err();
    assert!(matches!(err, skein_core::Error::StepBudget(3)));
}

fn word_strategy(n: u8, max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..n, 0..=max)
}

fn elem_strategy(n: u8) -> impl Strategy<Value = SkeinElem> {
    prop::collection::vec((word_strategy(n, 4), -3i64..=3, -2i64..=2), 1..4).prop_map(|ts| {
        let mut out = SkeinElem::zero();
        for (w, c, e) in ts {
            out.add_term(w, CoeffElem::a_pow(e).scale(&c.into()));
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn strategy_independent(w in word_strategy(4, 8), which in 0usize..5) {
        let s = sys(PresentationId::ALL[which]);
        let n = s.alphabet().len() as u8;
        let w: Vec<u8> = w.into_iter().map(|l| l % n).collect();
        let x = SkeinElem::word(w);
        let l = s.reduce_with(&x, Order::Leftmost).unwrap();
        let r = s.reduce_with(&x, Order::Rightmost).unwrap();
        prop_assert_eq!(&l, &r);
        prop_assert_eq!(s.reduce(&l).unwrap(), l.clone());
        prop_assert!(l.terms().all(|(w, _)| s.is_normal(w)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pi_is_multiplicative(a in word_strategy(4, 5), b in word_strategy(4, 5), three in any::<bool>()) {
        let s = if three { sys(PresentationId::Ry022ThreeGen) } else { sys(PresentationId::Ry022FourGen) };
        let n = s.alphabet().len() as u8;
        let a = SkeinElem::word(a.into_iter().map(|l| l % n).collect());
        let b = SkeinElem::word(b.into_iter().map(|l| l % n).collect());
        let ab = s.mul(&a, &b).unwrap();
        let lhs = pi_commutative(&ab, s).unwrap();
        let rhs = &pi_commutative(&a, s).unwrap() * &pi_commutative(&b, s).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn three_and_four_gen_agree(x in elem_strategy(4)) {
        let s4 = sys(PresentationId::Ry022FourGen);
        let m = four_to_three_map();
        let direct = m.apply(&x).unwrap();
        let via = m.apply(&s4.reduce(&x).unwrap()).unwrap();
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn mul_is_associative(x in elem_strategy(3), y in elem_strategy(3), z in elem_strategy(3)) {
        let s = sys(PresentationId::Ry022ThreeGen);
        let l = s.mul(&s.mul(&x, &y).unwrap(), &z).unwrap();
        let r = s.mul(&x, &s.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }
}
