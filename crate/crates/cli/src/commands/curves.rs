//! Curve expansions, discrepancies and positivity scans.

use serde_json::{json, Value};
use skein_core::curves::{classify, parse_curves, CurveExpansion};
use skein_core::expr::{parse, Expr};
use skein_core::pts::{
    canonical_curves, discrepancy_1p02, discrepancy_easy, discrepancy_oracle, discrepancy_p001, discrepancy_p011,
    positivity_report, product_to_sum, Coords, DiscArg, PositivityRecord, Recursion,
};
use skein_core::{Error, Result};

use crate::{csv_field, to_json, Format, Outcome};

fn expansion_csv(x: &CurveExpansion) -> String {
    let mut s = String::from("curve,d0_pow,d1_pow,coeff\n");
    for ((d0, d1), c) in &x.scalar {
        s.push_str(&format!("empty,{d0},{d1},{}\n", csv_field(&c.to_string())));
    }
    for ((curve, (d0, d1)), c) in &x.terms {
        s.push_str(&format!("{},{d0},{d1},{}\n", csv_field(&curve.to_string()), csv_field(&c.to_string())));
    }
    s
}

fn curve_pair(e: &Expr) -> Option<((i64, i64), (i64, i64))> {
    match e {
        Expr::Mul(l, r) => match (l.as_ref(), r.as_ref()) {
            (Expr::Curve(n1, k1), Expr::Curve(n2, k2)) => Some(((*n1, *k1), (*n2, *k2))),
            _ => None,
        },
        _ => None,
    }
}

pub fn pts(expr: &str, format: Format) -> Result<Outcome> {
    let pair = curve_pair(&parse(expr)?).and_then(|(a, b)| Some((classify(a.0, a.1).ok()?, classify(b.0, b.1).ok()?)));
    let (doc, value) = match pair {
        Some((c1, c2)) => {
            let p = product_to_sum(c1, c2)?;
            (serde_json::to_value(&p).expect("serializable"), p.value)
        }
        None => {
            let value = parse_curves(expr)?;
            (json!({ "expr": expr, "value": value }), value)
        }
    };
    let body = match format {
        Format::Json => to_json(&doc),
        Format::Csv => expansion_csv(&value),
    };
    Ok(Outcome::new(true, body))
}

/// Closed forms and the recursion that apply to `arg`.
fn closed_discrepancies(arg: DiscArg) -> Vec<(&'static str, Result<CurveExpansion>)> {
    let mut out = Vec::new();
    if let Some(v) = discrepancy_easy(arg) {
        out.push(("determinant", Ok(v)));
    }
    let DiscArg { n1, n2, k1, k2 } = arg;
    if n2 == 0 && k2 == 1 && n1 >= 2 && k1 == 0 {
        out.push(("closed", discrepancy_p001(n1 - 1)));
    }
    if n2 == 0 && k2 == 1 && n1 >= 1 && k1 == 1 {
        out.push(("closed", discrepancy_p011(n1 - 1)));
    }
    if n2 == 0 && k2 == 1 && n1 >= 2 && (k1 == 0 || k1 == 1) {
        out.push(("recursion", Recursion::new().discrepancy(n1 - 1, k1)));
    }
    if (n1, k1) == (1, 0) && k2 == 2 && n2 >= 1 {
        out.push(("closed", discrepancy_1p02(n2)));
    }
    out
}

pub fn discrepancy(expr: &str, format: Format) -> Result<Outcome> {
    let arg: DiscArg = serde_json::from_str(expr)
        .map_err(|e| Error::InvalidArgument(format!("expected [[n1,n2],[k1,k2]]: {e}")))?;
    let value = discrepancy_oracle(arg)?;
    let mut checks = Vec::new();
    let mut ok = true;
    for (method, closed) in closed_discrepancies(arg) {
        let agrees = closed? == value;
        ok &= agrees;
        checks.push(json!({ "method": method, "agrees": agrees }));
    }
    let body = match format {
        Format::Json => to_json(&json!({ "arg": arg, "value": value, "checks": checks })),
        Format::Csv => expansion_csv(&value),
    };
    Ok(Outcome::new(ok, body))
}

/// `positive`, `negative`, or `uncomputed` when the grouped view does not exist.
pub fn verdict(r: &PositivityRecord, coords: Coords) -> &'static str {
    match coords {
        Coords::Grouped if r.grouped.is_none() => "uncomputed",
        _ if r.positive(coords) => "positive",
        _ => "negative",
    }
}

/// Verdict matrix: rows are left factors, columns right factors.
pub fn verdict_csv(max_index: i64, records: &[PositivityRecord], coords: Coords) -> String {
    let curves = canonical_curves(max_index);
    let mut s = String::from("left\\right");
    for c in &curves {
        s.push(',');
        s.push_str(&csv_field(&c.to_string()));
    }
    s.push('\n');
    for (row, c) in records.chunks(curves.len().max(1)).zip(&curves) {
        s.push_str(&csv_field(&c.to_string()));
        for r in row {
            s.push(',');
            s.push_str(verdict(r, coords));
        }
        s.push('\n');
    }
    s
}

pub fn records_json(records: &[PositivityRecord], coords: Coords) -> Value {
    let items: Vec<Value> = records
        .iter()
        .map(|r| {
            let (view, negatives) = match coords {
                Coords::Raw => (Some(&r.raw), &r.raw_negatives),
                Coords::Grouped => (r.grouped.as_ref(), &r.grouped_negatives),
            };
            json!({
                "left": r.left,
                "right": r.right,
                "closed_form": r.closed_form,
                "expansion": r.expansion,
                "coordinates": view,
                "verdict": verdict(r, coords),
                "negatives": negatives,
            })
        })
        .collect();
    json!({ "coords": coords, "records": items })
}

pub fn positivity(max_index: i64, coords: Coords, format: Format) -> Result<Outcome> {
    if max_index < 0 {
        return Err(Error::InvalidArgument("--max-index must be non-negative".into()));
    }
    let records = positivity_report(max_index)?;
    let body = match format {
        Format::Json => to_json(&records_json(&records, coords)),
        Format::Csv => verdict_csv(max_index, &records, coords),
    };
    Ok(Outcome::new(true, body))
}
