//! Acceptance suite: one pass/fail line per criterion, each with a runtime
//! limit. Exits non-zero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skein_core::coeff::{CoeffElem, HalfLaurent};
use skein_core::curves::{classify, realize, Variant};
use skein_core::freealg::{
    basis_images, check_local_confluence, four_to_three_map, phi_map, phi_map_four_gen, pi_commutative,
    presentation, rank, ry013_to_s110_map, verify_homomorphism, PresentationId, SkeinElem,
};
use skein_core::pts::{agreement_table, canonical_curves, positivity_report};
use skein_core::reps::{build_rep, equivalence_check, ladder, sample_shadow, verify_rep, Complex64};
use skein_core::torus::{phi, torus_expand, TorusCurve, TorusExpansion};

type Check = Result<String, String>;

/// Number, name, runtime limit and check of one criterion.
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn confluence() -> Check {
    let mut ambiguities = 0;
    let mut mutations = 0;
    for id in PresentationId::ALL {
        let sys = presentation(id);
        let report = check_local_confluence(sys).map_err(err)?;
        ensure(report.is_confluent(), format!("{id} has an unresolved ambiguity"))?;
        ambiguities += report.ambiguities.len();
        for (i, rule) in sys.rules().iter().enumerate() {
            let broken = sys.with_rule_rhs(i, rule.rhs.scale(&CoeffElem::a_pow(1))).map_err(err)?;
            ensure(!check_local_confluence(&broken).map_err(err)?.is_confluent(), format!("{id} rule {i} mutation undetected"))?;
            mutations += 1;
        }
    }
    Ok(format!("5 systems, {ambiguities} ambiguities resolvable, {mutations}/{mutations} mutations detected"))
}

fn oracle_consistency() -> Check {
    const PAIRS: usize = 500;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    for id in [PresentationId::Ry022FourGen, PresentationId::Ry022ThreeGen] {
        let sys = presentation(id);
        let letters = sys.alphabet().len() as u8;
        let mut word = || {
            let len = rng.gen_range(0..=5);
            SkeinElem::word((0..len).map(|_| rng.gen_range(0..letters)).collect())
        };
        for _ in 0..PAIRS {
            let (a, b) = (word(), word());
            let lhs = pi_commutative(&sys.mul(&a, &b).map_err(err)?, sys).map_err(err)?;
            let rhs = &pi_commutative(&a, sys).map_err(err)? * &pi_commutative(&b, sys).map_err(err)?;
            ensure(lhs == rhs, format!("{id}: pi not multiplicative"))?;
            checked += 1;
        }
    }
    let imgs = basis_images(3);
    let r = rank(&imgs);
    ensure(r == imgs.len(), format!("basis images have rank {r} < {}", imgs.len()))?;
    Ok(format!("{checked} word pairs multiplicative, {} basis images independent", imgs.len()))
}

fn homomorphisms() -> Check {
    for m in [phi_map(), phi_map_four_gen(), four_to_three_map(), ry013_to_s110_map()] {
        let r = verify_homomorphism(&m).map_err(err)?;
        ensure(r.is_homomorphism(), format!("{} -> {} fails a relation", r.source, r.target))?;
    }
    let curves = canonical_curves(8);
    for &c in &curves {
        let r = realize(c, Variant::Threaded).map_err(err)?;
        let image = torus_expand(&phi(&r, PresentationId::Ry022ThreeGen).map_err(err)?).map_err(err)?;
        ensure(image == TorusExpansion::curve(TorusCurve::new(c.n(), c.k()).map_err(err)?), format!("phi{c} is not the torus curve"))?;
    }
    Ok(format!("4 maps are homomorphisms, {} curves map to torus curves", curves.len()))
}

fn three_way() -> Check {
    let rows = agreement_table().map_err(err)?;
    if let Some(r) = rows.iter().find(|r| !r.agrees()) {
        return Err(format!("{} p={} z={:?} disagrees", r.family, r.p, r.z));
    }
    Ok(format!("{} closed-form rows agree with oracle and third method", rows.len()))
}

fn positivity() -> Check {
    let records = positivity_report(4).map_err(err)?;
    let grouped = records.iter().filter(|r| r.grouped_positive).count();
    ensure(grouped == records.len(), format!("{} grouped expansions have negative coefficients", records.len() - grouped))?;
    let raw = records.iter().filter(|r| r.raw_positive).count();
    let (left, right) = (classify(1, 0).map_err(err)?, classify(3, 2).map_err(err)?);
    let r = records.iter().find(|r| r.left == left && r.right == right).ok_or("(1,0)*(3,2) missing")?;
    let constant = &(&HalfLaurent::a_pow(2) - &HalfLaurent::a_pow(-2)) + &HalfLaurent::constant(2);
    ensure(
        r.raw.get(None, (0, 0)) == constant && r.raw.get(None, (1, 1)) == HalfLaurent::one() && !r.raw_positive,
        "raw constant of (1,0)*(3,2) is not d0 d1 + A^2 - A^-2 + 2",
    )?;
    Ok(format!(
        "{} products grouped-positive, {raw} raw-positive, raw constant d0d1 + A^2 - A^-2 + 2 at [p] = -1",
        records.len()
    ))
}

fn representations() -> Check {
    const TOL: f64 = 1e-8;
    let mut worst = 0f64;
    let mut count = 0;
    for n in [3usize, 5, 7] {
        for seed in 0..20 {
            let s = sample_shadow(n, seed).map_err(err)?;
            let m = build_rep(&s).map_err(err)?;
            let r = verify_rep(&m, &s).map_err(err)?;
            let tag = format!("N={n} seed={seed}");
            ensure(r.max_relation() < TOL && r.max_central() < TOL, format!("{tag}: residual too large"))?;
            ensure(r.commutant_dim == 1, format!("{tag}: commutant dimension {}", r.commutant_dim))?;
            worst = worst.max(r.max_relation()).max(r.max_central());
            let e: Complex64 = ladder(&s).e.iter().product();
            let want = (s.t1 * s.t1 + s.t2 * s.t2 + s.t1 * s.t2 * s.t3) / (s.v1 * s.v2).powi(n as i32);
            ensure((e - want).norm() < TOL * e.norm().max(1.0), format!("{tag}: E-product mismatch"))?;
            ensure(equivalence_check(&m, &build_rep(&s.with_inverse_x()).map_err(err)?).equivalent, format!("{tag}: x and 1/x differ"))?;
            let mut forced = s.clone();
            forced.d1 = Complex64::new(0.1, 0.0) - s.d0;
            let bad = verify_rep(&build_rep(&forced).map_err(err)?, &forced).map_err(err)?;
            ensure(bad.max_relation() > 1e-3, format!("{tag}: d0 + d1 = 0.1 not detected"))?;
            count += 1;
        }
    }
    Ok(format!("{count} representations irreducible, worst residual {worst:.1e}"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_skein")).args(args).output().map_err(err)?;
    ensure(out.status.success(), format!("skein {} exited with {}", args.join(" "), out.status))?;
    Ok(out.stdout)
}

fn determinism() -> Check {
    let commands: &[&[&str]] = &[
        &["reduce", "--presentation", "ry022-3gen", "--expr", "b*a*g"],
        &["confluence"],
        &["verify-presentation", "--seed", "3"],
        &["pts", "--expr", "C(2,1)*C(1,3)"],
        &["discrepancy", "--expr", "[[4,0],[1,1]]"],
        &["positivity", "--max-index", "3", "--coords", "raw", "--format", "csv"],
        &["positivity", "--max-index", "2", "--coords", "grouped"],
        &["reps", "sample", "--n", "5", "--seed", "7"],
        &["reps", "build", "--n", "5", "--seed", "7"],
        &["reps", "verify", "--n", "7", "--seed", "2"],
    ];
    for args in commands {
        ensure(run_cli(args)? == run_cli(args)?, format!("skein {} is not deterministic", args.join(" ")))?;
    }
    let base = std::env::temp_dir().join(format!("skein-acceptance-{}", std::process::id()));
    let dirs = [base.join("a"), base.join("b")];
    for d in &dirs {
        run_cli(&["export", "--max-index", "2", "--out", d.to_str().ok_or("bad temp path")?])?;
    }
    let same = same_tree(&dirs[0], &dirs[1]);
    let _ = std::fs::remove_dir_all(&base);
    let files = same?;
    Ok(format!("{} commands and {files} exported files byte-identical across runs", commands.len()))
}

fn same_tree(a: &Path, b: &Path) -> Result<usize, String> {
    let mut names: Vec<_> = std::fs::read_dir(a).map_err(err)?.map(|e| e.map(|e| e.file_name())).collect::<Result<_, _>>().map_err(err)?;
    names.sort();
    for name in &names {
        let x = std::fs::read(a.join(name)).map_err(err)?;
        let y = std::fs::read(b.join(name)).map_err(err)?;
        ensure(x == y, format!("{} differs", name.to_string_lossy()))?;
    }
    Ok(names.len())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (1, "confluence", Duration::from_secs(10), confluence),
        (2, "oracle consistency", Duration::from_secs(30), oracle_consistency),
        (3, "homomorphisms", Duration::from_secs(60), homomorphisms),
        (4, "three-way agreement", Duration::from_secs(300), three_way),
        (5, "positivity scan", Duration::from_secs(600), positivity),
        (6, "representations", Duration::from_secs(60), representations),
        (7, "determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (verdict, detail) = match result {
            Ok(_) if elapsed > limit => ("FAIL", format!("over time limit {}s", limit.as_secs())),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        failed += usize::from(verdict == "FAIL");
        println!("criterion {n} {name}: {verdict} ({detail}; {:.1}s of {}s)", elapsed.as_secs_f64(), limit.as_secs());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
