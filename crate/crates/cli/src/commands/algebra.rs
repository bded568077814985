//! Presentations: reduction, confluence, relation checks and maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use skein_core::curves::{realize, Variant};
use skein_core::freealg::{
    basis_images, check_local_confluence, four_to_three_map, identity_map, phi_map, phi_map_four_gen,
    pi_commutative, presentation, rank, ry013_to_s110_map, verify_homomorphism, HomReport, PresentationId,
    SkeinElem,
};
use skein_core::pts::canonical_curves;
use skein_core::torus::{phi, torus_expand, TorusCurve, TorusExpansion};
use skein_core::Result;

use crate::{csv_field, csv_unavailable, to_json, Format, Outcome};

/// Random word pairs used for the multiplicativity check of the shadow map.
pub const PI_PAIRS: usize = 500;
const PI_WORD_LEN: usize = 5;
const BASIS_MAX_EXPONENT: u32 = 3;

fn selected(id: Option<PresentationId>) -> Vec<PresentationId> {
    id.map_or_else(|| PresentationId::ALL.to_vec(), |id| vec![id])
}

pub fn reduce(id: PresentationId, expr: &str, format: Format) -> Result<Outcome> {
    if format == Format::Csv {
        return Err(csv_unavailable("reduce"));
    }
    let sys = presentation(id);
    let nf = sys.parse(expr)?;
    let doc = json!({
        "presentation": id.name(),
        "expr": expr,
        "normal_form": nf.display(sys.names()).to_string(),
    });
    Ok(Outcome::new(true, to_json(&doc)))
}

pub fn confluence_json(ids: &[PresentationId]) -> Result<(bool, Value)> {
    let mut systems = Vec::new();
    let mut all_ok = true;
    for &id in ids {
        let sys = presentation(id);
        let report = check_local_confluence(sys)?;
        let unresolved: Vec<Value> = report
            .unresolved()
            .map(|a| {
                json!({
                    "word": sys.show_word(&a.word),
                    "difference": a.difference.display(sys.names()).to_string(),
                })
            })
            .collect();
        all_ok &= unresolved.is_empty();
        systems.push(json!({
            "presentation": id.name(),
            "ambiguities": report.ambiguities.len(),
            "resolvable": report.ambiguities.len() - unresolved.len(),
            "family_bound": report.family_bound,
            "unresolved": unresolved,
        }));
    }
    Ok((all_ok, json!({ "confluent": all_ok, "systems": systems })))
}

pub fn confluence(id: Option<PresentationId>, format: Format) -> Result<Outcome> {
    let (ok, doc) = confluence_json(&selected(id))?;
    let body = match format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let mut s = String::from("presentation,ambiguities,resolvable\n");
            for sys in doc["systems"].as_array().into_iter().flatten() {
                s.push_str(&format!("{},{},{}\n", sys["presentation"].as_str().unwrap_or(""), sys["ambiguities"], sys["resolvable"]));
            }
            s
        }
    };
    Ok(Outcome::new(ok, body))
}

fn failing_relations(r: &HomReport) -> Vec<String> {
    r.checks.iter().filter(|c| !c.residue.is_zero()).map(|c| c.name.clone()).collect()
}

fn pi_check(id: PresentationId, seed: u64) -> Result<Value> {
    let sys = presentation(id);
    let letters = sys.alphabet().len() as u8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..=PI_WORD_LEN);
        SkeinElem::word((0..len).map(|_| rng.gen_range(0..letters)).collect())
    };
    let mut failures = 0;
    for _ in 0..PI_PAIRS {
        let (a, b) = (word(&mut rng), word(&mut rng));
        let lhs = pi_commutative(&sys.mul(&a, &b)?, sys)?;
        let rhs = &pi_commutative(&a, sys)? * &pi_commutative(&b, sys)?;
        failures += usize::from(lhs != rhs);
    }
    Ok(json!({ "pairs": PI_PAIRS, "failures": failures }))
}

pub fn verify_json(ids: &[PresentationId], seed: u64) -> Result<(bool, Value)> {
    let mut all_ok = true;
    let mut systems = Vec::new();
    for &id in ids {
        let sys = presentation(id);
        let confluent = check_local_confluence(sys)?.is_confluent();
        let failing = failing_relations(&verify_homomorphism(&identity_map(id))?);
        let mut entry = json!({
            "presentation": id.name(),
            "confluent": confluent,
            "relations": sys.relations().len(),
            "failing_relations": failing,
        });
        let mut ok = confluent && failing.is_empty();
        if matches!(id, PresentationId::Ry022FourGen | PresentationId::Ry022ThreeGen) {
            let pi = pi_check(id, seed)?;
            ok &= pi["failures"] == 0;
            entry["pi_multiplicative"] = pi;
        }
        if id == PresentationId::Ry022FourGen {
            let imgs = basis_images(BASIS_MAX_EXPONENT);
            let r = rank(&imgs);
            ok &= r == imgs.len();
            entry["basis_images"] = json!({ "count": imgs.len(), "rank": r });
        }
        entry["ok"] = json!(ok);
        all_ok &= ok;
        systems.push(entry);
    }
    Ok((all_ok, json!({ "ok": all_ok, "seed": seed, "systems": systems })))
}

pub fn verify_presentation(id: Option<PresentationId>, seed: u64, format: Format) -> Result<Outcome> {
    if format == Format::Csv {
        return Err(csv_unavailable("verify-presentation"));
    }
    let (ok, doc) = verify_json(&selected(id), seed)?;
    Ok(Outcome::new(ok, to_json(&doc)))
}

pub fn phi_json(max_index: i64) -> Result<(bool, Value)> {
    let mut maps = Vec::new();
    let mut all_ok = true;
    for m in [phi_map(), phi_map_four_gen(), four_to_three_map(), ry013_to_s110_map()] {
        let r = verify_homomorphism(&m)?;
        let failing = failing_relations(&r);
        all_ok &= failing.is_empty();
        maps.push(json!({ "source": r.source, "target": r.target, "homomorphism": failing.is_empty(), "failing_relations": failing }));
    }
    let curves = canonical_curves(max_index);
    let mut failing_curves = Vec::new();
    for &c in &curves {
        let r = realize(c, Variant::Threaded)?;
        let image = torus_expand(&phi(&r, PresentationId::Ry022ThreeGen)?)?;
        if image != TorusExpansion::curve(TorusCurve::new(c.n(), c.k())?) {
            failing_curves.push(c.to_string());
        }
    }
    all_ok &= failing_curves.is_empty();
    let doc = json!({
        "ok": all_ok,
        "maps": maps,
        "curves": { "max_index": max_index, "checked": curves.len(), "failing": failing_curves },
    });
    Ok((all_ok, doc))
}

pub fn phi_check(max_index: i64, format: Format) -> Result<Outcome> {
    let (ok, doc) = phi_json(max_index)?;
    let body = match format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let mut s = String::from("source,target,homomorphism\n");
            for m in doc["maps"].as_array().into_iter().flatten() {
                let field = |k: &str| csv_field(m[k].as_str().unwrap_or(""));
                s.push_str(&format!("{},{},{}\n", field("source"), field("target"), m["homomorphism"]));
            }
            s
        }
    };
    Ok(Outcome::new(ok, body))
}
