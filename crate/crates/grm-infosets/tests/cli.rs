//! End-to-end tests of the `grmis` binary: output formats, exit codes and
//! the shipped JSON schema.

use std::process::{Command, Output};

use serde_json::Value;

fn grmis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grmis"))
        .args(args)
        .env_remove("GRMIS_MAX_VERIFY_N")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn decompose_lists_known_rows() {
    let out = grmis(&["decompose", "--q", "3", "--m", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.contains('5') && l.contains("16")), "{text}");

    let out = grmis(&["decompose", "--q", "5", "--m", "10", "--order", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.contains("24") && l.contains('2')), "{text}");
}

#[test]
fn decompose_empty_when_no_coprime_split() {
    // n = 3^2 - 1 = 8 has a single prime factor
    let out = grmis(&["decompose", "--q", "3", "--m", "2", "--output", "json"]);
    assert!(out.status.success());
    let rows: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 0);
}

#[test]
fn invalid_parameters_exit_2() {
    // 6 is not a prime power
    let out = grmis(&["infoset", "--q", "6", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    // r1 must divide n
    let out = grmis(&["infoset", "--q", "3", "--m", "3", "--r1", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn second_order_precondition_exit_3() {
    // q = 2 is excluded for second order even with r1 = 2^a - 1
    let out = grmis(&["infoset", "--q", "2", "--m", "4", "--order", "2", "--r1", "3"]);
    assert_eq!(out.status.code(), Some(3));
    // r1 = 13 is not of the form 3^a - 1
    let out = grmis(&["infoset", "--q", "3", "--m", "3", "--order", "2", "--r1", "13"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn infoset_first_order_example() {
    let out = grmis(&[
        "infoset", "--q", "3", "--m", "3", "--order", "1", "--r1", "13", "--r2", "2",
        "--verify", "--output", "json",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["check_positions"], serde_json::json!([0, 2, 14]));
    assert_eq!(v["infoset_low_order"], serde_json::json!([0, 1, 3, 15]));
    assert_eq!(v["verified"], Value::Bool(true));
}

#[test]
fn infoset_second_order_example() {
    let out = grmis(&[
        "infoset", "--q", "5", "--m", "3", "--order", "2", "--r1", "4", "--verify",
        "--output", "json",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["infoset_low_order"].as_array().unwrap().len(), 10);
    assert_eq!(v["verified"], Value::Bool(true));

    // a different unit for the first coordinate of T(1) may move the
    // positions but must still verify
    let out = grmis(&[
        "infoset", "--q", "5", "--m", "3", "--order", "2", "--r1", "4", "--delta1", "3",
        "--verify", "--output", "json",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verified"], Value::Bool(true));
}

#[test]
fn verification_bound_skips_quietly() {
    let out = Command::new(env!("CARGO_BIN_EXE_grmis"))
        .args(["infoset", "--q", "3", "--m", "3", "--verify", "--output", "json"])
        .env("GRMIS_MAX_VERIFY_N", "10")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verified"], Value::Bool(false));
}

#[test]
fn tables_match_golden() {
    let out = grmis(&["tables", "--output", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["first_order"].as_array().unwrap().len(), 16);
    assert_eq!(v["second_order"].as_array().unwrap().len(), 13);
}

#[test]
fn csv_output_has_header() {
    let out = grmis(&["infoset", "--q", "3", "--m", "3", "--output", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("key,value\n"), "{text}");
    assert!(text.contains("check_positions,"));
}

#[test]
fn config_file_sets_bound_and_modulus() {
    let dir = std::env::temp_dir().join("grmis-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grmis.toml");
    // x^3 + 2x + 1 is irreducible over GF(3); with it alpha = x is a root of
    // a different modulus than the default, and everything must still verify
    std::fs::write(
        &path,
        "max_verify_n = 3200\n\n[[modulus]]\np = 3\ns = 3\ncoeffs = [1, 2, 0, 1]\n",
    )
    .unwrap();
    let out = grmis(&[
        "infoset", "--q", "27", "--m", "2", "--verify",
        "--config", path.to_str().unwrap(), "--output", "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verified"], Value::Bool(true));
}

// ---------------------------------------------------------------------------
// schema conformance
// ---------------------------------------------------------------------------

/// Minimal structural validator covering the subset of JSON Schema the
/// shipped file uses: type, required, properties, items, enum, minimum,
/// minItems, maxItems.
fn validate(schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(types) = schema.get("type").and_then(Value::as_str) {
        let ok = match types {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "integer" => value.is_u64() || value.is_i64(),
            "boolean" => value.is_boolean(),
            other => return Err(format!("{path}: unsupported schema type {other}")),
        };
        if !ok {
            return Err(format!("{path}: expected {types}, got {value}"));
        }
    }
    if let Some(en) = schema.get("enum").and_then(Value::as_array) {
        if !en.contains(value) {
            return Err(format!("{path}: {value} not in {en:?}"));
        }
    }
    if let Some(min) = schema.get("minimum").and_then(Value::as_i64) {
        if value.as_i64().is_some_and(|v| v < min) {
            return Err(format!("{path}: {value} below minimum {min}"));
        }
    }
    if let Some(req) = schema.get("required").and_then(Value::as_array) {
        for key in req {
            let key = key.as_str().unwrap();
            if value.get(key).is_none() {
                return Err(format!("{path}: missing required field {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        for (key, sub) in props {
            if let Some(v) = value.get(key) {
                validate(sub, v, &format!("{path}.{key}"))?;
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
                if (arr.len() as u64) < min {
                    return Err(format!("{path}: fewer than {min} items"));
                }
            }
            if let Some(max) = schema.get("maxItems").and_then(Value::as_u64) {
                if (arr.len() as u64) > max {
                    return Err(format!("{path}: more than {max} items"));
                }
            }
            for (i, v) in arr.iter().enumerate() {
                validate(items, v, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

#[test]
fn json_reports_validate_against_shipped_schema() {
    let schema: Value = serde_json::from_str(include_str!("../../../schemas/infoset.schema.json"))
        .expect("schema parses");
    for args in [
        ["infoset", "--q", "3", "--m", "3", "--order", "1", "--verify"].as_slice(),
        ["infoset", "--q", "5", "--m", "3", "--order", "2", "--verify"].as_slice(),
        ["infoset", "--q", "3", "--m", "6", "--order", "2"].as_slice(),
    ] {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--output", "json"]);
        let out = grmis(&full);
        assert!(out.status.success());
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        if let Err(e) = validate(&schema, &v, "$") {
            panic!("schema violation for {args:?}: {e}");
        }
    }
}
