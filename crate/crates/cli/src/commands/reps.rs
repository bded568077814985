//! Representation sampling, construction and verification.

use std::fs;

use serde_json::{json, Value};
use skein_core::reps::{
    build_rep, check_admissibility, Complex64, equivalence_check, ladder, sample_shadow, verify_rep, ShadowData, SAMPLE_TOL,
};
use skein_core::{Error, Result};

use crate::{csv_unavailable, decimal, to_json, Format, Outcome, ShadowArgs};

/// Residual threshold for a passing representation.
pub const REP_TOL: f64 = 1e-8;

fn shadow(args: &ShadowArgs) -> Result<ShadowData> {
    match &args.input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
            let doc: Value = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            // accept either bare shadow data or a document with a "shadow" field
            let inner = doc.get("shadow").cloned().unwrap_or(doc);
            serde_json::from_value(inner).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
        }
        None => sample_shadow(args.n, args.seed),
    }
}

fn json_only(format: Format, command: &str) -> Result<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(csv_unavailable(command)),
    }
}

pub fn sample(args: &ShadowArgs, format: Format) -> Result<Outcome> {
    json_only(format, "reps sample")?;
    let s = shadow(args)?;
    let adm = check_admissibility(&s, SAMPLE_TOL);
    Ok(Outcome::new(adm.admissible, to_json(&json!({ "shadow": s, "admissibility": adm }))))
}

pub fn build(args: &ShadowArgs, format: Format) -> Result<Outcome> {
    json_only(format, "reps build")?;
    let s = shadow(args)?;
    let m = build_rep(&s)?;
    Ok(Outcome::new(true, to_json(&json!({ "shadow": s, "matrices": m }))))
}

/// Verification document for one shadow and whether it passes.
pub fn verify_json(s: &ShadowData) -> Result<(bool, Value)> {
    let m = build_rep(s)?;
    let r = verify_rep(&m, s)?;
    let e: Complex64 = ladder(s).e.iter().product();
    let n = s.n as i32;
    let character = (s.t1 * s.t1 + s.t2 * s.t2 + s.t1 * s.t2 * s.t3) / (s.v1 * s.v2).powi(n);
    let e_gap = (e - character).norm() / e.norm().max(1.0);
    let inverse_x = equivalence_check(&m, &build_rep(&s.with_inverse_x())?);
    let other_sqrt = equivalence_check(&m, &build_rep(&s.with_other_sqrt())?);
    let ok = r.max_relation() < REP_TOL
        && r.max_central() < REP_TOL
        && r.commutant_dim == 1
        && e_gap < REP_TOL
        && inverse_x.equivalent;
    let relations: Vec<Value> =
        r.relations.iter().map(|(name, x)| json!({ "relation": name, "residual": decimal(*x) })).collect();
    let doc = json!({
        "n": s.n,
        "relations": relations,
        "central": r.central.iter().map(|x| decimal(*x)).collect::<Vec<_>>(),
        "commutant_dim": r.commutant_dim,
        "irreducible": r.irreducible,
        "recovered": r.recovered.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "e_product_gap": decimal(e_gap),
        "inverse_x": inverse_x,
        "other_sqrt": other_sqrt,
        "passed": ok,
    });
    Ok((ok, doc))
}

pub fn verify(args: &ShadowArgs, format: Format) -> Result<Outcome> {
    json_only(format, "reps verify")?;
    let s = shadow(args)?;
    let (ok, mut doc) = verify_json(&s)?;
    doc["shadow"] = serde_json::to_value(&s).expect("serializable");
    Ok(Outcome::new(ok, to_json(&doc)))
}
