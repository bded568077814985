//! Writes every table into one directory.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use skein_core::freealg::PresentationId;
use skein_core::pts::{agreement_table, positivity_report, Coords};
use skein_core::reps::sample_shadow;
use skein_core::{Error, Result};

use super::{algebra, curves, reps};
use crate::{to_json, Outcome};

/// Orders and seeds covered by the representation table.
pub const REP_ORDERS: [usize; 3] = [3, 5, 7];
pub const REP_SEEDS: u64 = 20;
const PHI_MAX_INDEX: i64 = 8;

fn write(dir: &Path, name: &str, body: &str, files: &mut Vec<String>) -> Result<()> {
    fs::write(dir.join(name), body).map_err(|e| Error::InvalidArgument(format!("cannot write {name}: {e}")))?;
    eprintln!("wrote {name}");
    files.push(name.to_string());
    Ok(())
}

pub fn reps_table(seed: u64) -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut all_ok = true;
    for n in REP_ORDERS {
        for s in seed..seed + REP_SEEDS {
            let (ok, mut doc) = reps::verify_json(&sample_shadow(n, s)?)?;
            doc["seed"] = json!(s);
            all_ok &= ok;
            rows.push(doc);
        }
    }
    Ok((all_ok, json!({ "ok": all_ok, "rows": rows })))
}

pub fn export(max_index: i64, seed: u64, dir: &Path) -> Result<Outcome> {
    if max_index < 0 {
        return Err(Error::InvalidArgument("--max-index must be non-negative".into()));
    }
    fs::create_dir_all(dir).map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", dir.display())))?;
    let mut files = Vec::new();
    let mut ok = true;

    let (good, doc) = algebra::confluence_json(&PresentationId::ALL)?;
    ok &= good;
    write(dir, "confluence.json", &to_json(&doc), &mut files)?;

    let (good, doc) = algebra::verify_json(&PresentationId::ALL, seed)?;
    ok &= good;
    write(dir, "verify-presentation.json", &to_json(&doc), &mut files)?;

    let (good, doc) = algebra::phi_json(PHI_MAX_INDEX)?;
    ok &= good;
    write(dir, "phi-check.json", &to_json(&doc), &mut files)?;

    let rows = agreement_table()?;
    ok &= rows.iter().all(|r| r.agrees());
    write(dir, "agreement.json", &to_json(&rows), &mut files)?;

    eprintln!("scanning products up to index {max_index}");
    let records = positivity_report(max_index)?;
    for (coords, tag) in [(Coords::Raw, "raw"), (Coords::Grouped, "grouped")] {
        write(dir, &format!("positivity-{tag}.csv"), &curves::verdict_csv(max_index, &records, coords), &mut files)?;
        write(dir, &format!("positivity-{tag}.json"), &to_json(&curves::records_json(&records, coords)), &mut files)?;
    }

    eprintln!("verifying representations");
    let (good, doc) = reps_table(seed)?;
    ok &= good;
    write(dir, "reps.json", &to_json(&doc), &mut files)?;

    Ok(Outcome::new(ok, to_json(&json!({ "ok": ok, "files": files }))))
}
