use num_complex::Complex64;
use skein_core::reps::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn sampler_is_deterministic_and_admissible() {
    for n in [3, 5, 7] {
        for seed in 0..5 {
            let s = sample_shadow(n, seed).unwrap();
            assert_eq!(s, sample_shadow(n, seed).unwrap());
            assert!(check_admissibility(&s, 1e-10).admissible, "N={n} seed={seed}");
        }
    }
    let s = sample_shadow(3, 11).unwrap();
    let two = c(2.0);
    let gap = cheb(3, two - s.d0 * s.d0) - two + s.t1 * s.t1 + s.t2 * s.t2 + s.t3 * s.t3 + s.t1 * s.t2 * s.t3;
    assert!(gap.norm() < 1e-9);
    assert!(sample_shadow(4, 0).is_err());
}

#[test]
fn degenerate_t3_is_rejected() {
    let mut s = sample_shadow(3, 1).unwrap();
    s.t3 = c(2.0);
    let r = check_admissibility(&s, 1e-8);
    assert!(!r.admissible);
    assert!(r.t3_gap < 1e-12);
}

#[test]
fn torus_boundary_specialization() {
    // d0 = A + A^-1 turns T_N(2 - d0^2) into T_N(-A^2 - A^-2)
    let s = sample_shadow(5, 0).unwrap();
    let a = s.a();
    let d0 = a + a.inv();
    let lhs = cheb(5, c(2.0) - d0 * d0);
    let rhs = cheb(5, -a * a - a.inv() * a.inv());
    assert!((lhs - rhs).norm() < 1e-12);
}

#[test]
fn built_reps_verify() {
    for n in [3, 5, 7] {
        for seed in 0..20 {
            let s = sample_shadow(n, seed).unwrap();
            let m = build_rep(&s).unwrap();
            let r = verify_rep(&m, &s).unwrap();
            assert!(r.max_relation() < 1e-8, "N={n} seed={seed}: {:?}", r.relations);
            assert!(r.max_central() < 1e-8, "N={n} seed={seed}: {:?}", r.central);
            assert_eq!(r.commutant_dim, 1);
            let want = [s.t1, s.t2, s.t3, s.d0 + s.d1, s.d0 * s.d1];
            for (got, want) in r.recovered.iter().zip(want) {
                assert!((got - want).norm() < 1e-7 * want.norm().max(1.0), "N={n} seed={seed}");
            }
        }
    }
}

#[test]
fn gamma_is_diagonal_with_ladder_eigenvalues() {
    let s = sample_shadow(5, 3).unwrap();
    let m = build_rep(&s).unwrap();
    let ld = ladder(&s);
    for i in 0..5 {
        for j in 0..5 {
            let want = if i == j { ld.lambda[i] } else { c(0.0) };
            assert!((m.gamma[(i, j)] - want).norm() < 1e-12);
        }
        assert!((cheb(5, ld.lambda[i]) - s.t3).norm() < 1e-9);
    }
}

#[test]
fn ladder_identity() {
    for n in [3, 5, 7] {
        let s = sample_shadow(n, 2).unwrap();
        let m = build_rep(&s).unwrap();
        let ld = ladder(&s);
        let (a, x) = (s.a(), s.x);
        for k in 1..=n {
            let kk = k as i32;
            let up = &m.beta * a - &m.alpha * (x * a.powi(2 * kk));
            let down = &m.beta * a - &m.alpha * (x.inv() * a.powi(-2 * (kk + 1)));
            let v = (down * up).column(k - 1).into_owned();
            for i in 0..n {
                let want = if i == k - 1 { ld.e[k - 1] } else { c(0.0) };
                assert!((v[i] - want).norm() < 1e-9 * ld.e[k - 1].norm().max(1.0), "N={n} k={k}");
            }
        }
    }
}

#[test]
fn e_product_matches_character() {
    for n in [3, 5, 7] {
        for seed in 0..20 {
            let s = sample_shadow(n, seed).unwrap();
            let e: Complex64 = ladder(&s).e.iter().product();
            let ch = (s.t1 * s.t1 + s.t2 * s.t2 + s.t1 * s.t2 * s.t3) / (s.v1 * s.v2).powi(n as i32);
            assert!((e - ch).norm() < 1e-8 * e.norm().max(1.0), "N={n} seed={seed}");
        }
    }
}

#[test]
fn nonzero_boundary_sum_breaks_relations() {
    let mut s = sample_shadow(3, 4).unwrap();
    s.d1 = -s.d0 + c(0.1);
    let m = build_rep(&s).unwrap();
    let r = verify_rep(&m, &s).unwrap();
    assert!(r.max_relation() > 1e-3);
}

#[test]
fn identity_matrices_fail() {
    let s = sample_shadow(3, 0).unwrap();
    let id = CMatrix::identity(3, 3);
    let m = RepMatrices { beta: id.clone(), alpha: id.clone(), gamma: id };
    assert!(verify_rep(&m, &s).unwrap().max_relation() > 1e-3);
}

#[test]
fn direct_sum_is_reducible() {
    let s = sample_shadow(3, 0).unwrap();
    let m = build_rep(&s).unwrap();
    let r = verify_rep(&m.direct_sum(&m), &s).unwrap();
    assert!(r.commutant_dim >= 2);
    assert!(!r.irreducible);
}

#[test]
fn equivalences() {
    for n in [3, 5, 7] {
        let s = sample_shadow(n, 6).unwrap();
        let m = build_rep(&s).unwrap();
        assert!(equivalence_check(&m, &m).equivalent);
        assert!(equivalence_check(&m, &build_rep(&s.with_inverse_x()).unwrap()).equivalent, "N={n}");
        let other = sample_shadow(n, 7).unwrap();
        assert!(!equivalence_check(&m, &build_rep(&other).unwrap()).equivalent);
    }
}

#[test]
fn other_square_root_negates_the_character() {
    let s = sample_shadow(5, 1).unwrap();
    let m = build_rep(&s).unwrap();
    let flipped = s.with_other_sqrt();
    let m2 = build_rep(&flipped).unwrap();
    assert!(verify_rep(&m2, &flipped).unwrap().max_central() < 1e-8);
    assert!(!equivalence_check(&m, &m2).equivalent);
    let negated = ShadowData { t1: -s.t1, t2: -s.t2, ..s.clone() };
    assert!(equivalence_check(&m2, &build_rep(&negated).unwrap()).equivalent);
}

#[test]
fn json_round_trip() {
    let s = sample_shadow(3, 9).unwrap();
    let back: ShadowData = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    let m = build_rep(&s).unwrap();
    let back: RepMatrices = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back, m);
}
