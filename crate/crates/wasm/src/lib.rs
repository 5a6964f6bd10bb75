//! Browser bindings: a small JSON-in/JSON-out surface over the library,
//! meant for the static demo page under `www/`.

use wasm_bindgen::prelude::*;

use naplt::flag::{phi_of_flag, FlagIdeal, PLFunction};
use naplt::functionals::{coercivity_scan, energy_report, ma_measure, KahlerSetup};
use naplt::rat::{q_str, Q};
use naplt::testconfig::{build_testconfig, dual_complex};
use naplt::valuation::MonomialIdeal;

fn parse_rational(s: &str) -> Result<Q, String> {
    s.trim()
        .parse::<Q>()
        .map_err(|e| format!("`{s}` is not a rational: {e}"))
}

/// Parses `{"terms": [{"lambda": 0, "gens": [[1,0],[0,1]]}], "lambda_max": 1}`.
fn parse_flag(n: usize, doc: &serde_json::Value) -> Result<FlagIdeal, String> {
    let terms = doc
        .get("terms")
        .and_then(|t| t.as_array())
        .ok_or("flag ideal needs a `terms` array")?;
    let lambda_max = doc
        .get("lambda_max")
        .and_then(|l| l.as_i64())
        .ok_or("flag ideal needs an integer `lambda_max`")?;
    let mut pairs = Vec::new();
    for term in terms {
        let lambda = term
            .get("lambda")
            .and_then(|l| l.as_i64())
            .ok_or("each term needs an integer `lambda`")?;
        let gens = term
            .get("gens")
            .and_then(|g| g.as_array())
            .ok_or("each term needs a `gens` array of exponent vectors")?
            .iter()
            .map(|row| {
                row.as_array()
                    .map(|xs| xs.iter().filter_map(|x| x.as_i64()).collect::<Vec<_>>())
                    .filter(|xs| xs.len() == n)
                    .ok_or(format!("exponent vectors must have {n} entries"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        pairs.push((lambda, MonomialIdeal::new(n, gens).map_err(|e| e.to_string())?));
    }
    FlagIdeal::from_pairs(n, pairs, lambda_max).map_err(|e| e.to_string())
}

fn parse_inputs(n: u32, alpha: &str, flag_json: &str) -> Result<(KahlerSetup, PLFunction), String> {
    let setup = KahlerSetup::new(n as usize, parse_rational(alpha)?).map_err(|e| e.to_string())?;
    let doc: serde_json::Value =
        serde_json::from_str(flag_json).map_err(|e| format!("flag ideal: {e}"))?;
    let phi = phi_of_flag(&parse_flag(n as usize, &doc)?).map_err(|e| e.to_string())?;
    Ok((setup, phi))
}

/// Dual complex of the test configuration of a flag ideal, as JSON.
fn dual_complex_impl(n: u32, flag_json: &str) -> Result<String, String> {
    let doc: serde_json::Value =
        serde_json::from_str(flag_json).map_err(|e| format!("flag ideal: {e}"))?;
    let flag = parse_flag(n as usize, &doc)?;
    let tc = build_testconfig(&flag).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&dual_complex(&tc)).map_err(|e| e.to_string())
}

/// Every functional of the metric of a flag ideal on `(P^n, alpha H)`,
/// as a flat JSON document of exact fractions.
fn mabuchi_impl(n: u32, alpha: &str, flag_json: &str) -> Result<String, String> {
    let (setup, phi) = parse_inputs(n, alpha, flag_json)?;
    let r = energy_report(&setup, &phi).map_err(|e| e.to_string())?;
    let ma = ma_measure(&setup, &phi).map_err(|e| e.to_string())?;
    let atoms: Vec<serde_json::Value> = ma
        .atoms
        .iter()
        .map(|(v, m)| {
            serde_json::json!({
                "weight": v.base.finite_entries().unwrap().iter().map(q_str).collect::<Vec<_>>(),
                "mass": q_str(m),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "energy": q_str(&r.energy),
        "twisted_energy": q_str(&r.twisted_energy),
        "i": q_str(&r.i),
        "j": q_str(&r.j),
        "entropy": q_str(&r.entropy),
        "entropy_relative": q_str(&r.entropy_relative),
        "mabuchi": q_str(&r.mabuchi),
        "mj_ratio": r.mj_ratio.as_ref().map(|x| q_str(x)),
        "monge_ampere": atoms,
    });
    serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())
}

/// Coercivity scan over a family of flag ideals, as JSON; the input is an
/// array of flag-ideal documents.
fn coercivity_impl(n: u32, alpha: &str, family_json: &str) -> Result<String, String> {
    let setup = KahlerSetup::new(n as usize, parse_rational(alpha)?).map_err(|e| e.to_string())?;
    let docs: Vec<serde_json::Value> =
        serde_json::from_str(family_json).map_err(|e| format!("family: {e}"))?;
    let family = docs
        .iter()
        .map(|d| Ok(phi_of_flag(&parse_flag(n as usize, d)?).map_err(|e| e.to_string())?))
        .collect::<Result<Vec<_>, String>>()
        ?;
    let scan = coercivity_scan(&setup, &family).map_err(|e| e.to_string())?;
    let entries: Vec<serde_json::Value> = scan
        .entries
        .iter()
        .map(|e| {
            serde_json::json!({
                "index": e.index,
                "mabuchi": q_str(&e.mabuchi),
                "j": q_str(&e.j),
                "ratio": e.ratio.as_ref().map(|x| q_str(x)),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "entries": entries,
        "delta": q_str(&scan.delta),
        "witness": scan.witness,
        "skipped": scan.skipped,
        "verdict": scan.verdict,
    });
    serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())
}

/// Dual complex of the test configuration of a flag ideal, as JSON.
#[wasm_bindgen]
pub fn dual_complex_json(n: u32, flag_json: &str) -> Result<String, JsValue> {
    dual_complex_impl(n, flag_json).map_err(|e| JsValue::from_str(&e))
}

/// Every functional of the metric of a flag ideal on `(P^n, alpha H)`,
/// as a flat JSON document of exact fractions.
#[wasm_bindgen]
pub fn mabuchi_json(n: u32, alpha: &str, flag_json: &str) -> Result<String, JsValue> {
    mabuchi_impl(n, alpha, flag_json).map_err(|e| JsValue::from_str(&e))
}

/// Coercivity scan over a family of flag ideals, as JSON; the input is an
/// array of flag-ideal documents.
#[wasm_bindgen]
pub fn coercivity_json(n: u32, alpha: &str, family_json: &str) -> Result<String, JsValue> {
    coercivity_impl(n, alpha, family_json).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P1_FLAG: &str = r#"{"terms": [{"lambda": 0, "gens": [[1]]}], "lambda_max": 1}"#;

    #[test]
    fn p1_mabuchi() {
        let out = mabuchi_impl(1, "1", P1_FLAG).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["energy"], "-1/2");
        assert_eq!(doc["j"], "1/2");
        assert_eq!(doc["entropy"], "2");
        assert_eq!(doc["mabuchi"], "1");
    }

    #[test]
    fn p1_dual_complex() {
        let out = dual_complex_impl(1, P1_FLAG).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["vertices"].as_array().unwrap().len(), 2);
        assert_eq!(doc["faces"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn p2_scan() {
        let fam = r#"[{"terms": [{"lambda": 0, "gens": [[1,0],[0,1]]}], "lambda_max": 1}]"#;
        let out = coercivity_impl(2, "1", fam).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["delta"], "3/2");
        assert_eq!(doc["verdict"], "no destabilizer found in family");
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(mabuchi_impl(4, "1", P1_FLAG).is_err());
        assert!(mabuchi_impl(1, "0", P1_FLAG).is_err());
        assert!(dual_complex_impl(1, "not json").is_err());
    }
}
