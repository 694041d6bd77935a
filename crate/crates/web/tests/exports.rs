use opt_foundry_web::{classify_json, eval_circuit_json, postulate_table_json};
use serde_json::Value;

#[test]
fn postulate_table_rows() {
    let v: Value = serde_json::from_str(&postulate_table_json("2", 5, 1).unwrap()).unwrap();
    assert_eq!(v["verdict"], "pass");
    let rows = v["table"].as_array().unwrap();
    let marks: Vec<(bool, bool)> = rows
        .iter()
        .map(|r| (r["local_equivalence"].as_bool().unwrap(), r["es_purification"].as_bool().unwrap()))
        .collect();
    assert_eq!(marks, [(true, false), (false, true), (true, true)]);
    assert!(postulate_table_json("2,9", 5, 1).is_err());
    assert!(postulate_table_json("a", 5, 1).is_err());
}

#[test]
fn classify_survivors() {
    let v: Value = serde_json::from_str(&classify_json(4).unwrap()).unwrap();
    let survivors: Vec<&str> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["excluded"] == false)
        .map(|r| r["candidate"].as_str().unwrap())
        .collect();
    assert_eq!(survivors, ["ComplexHerm(2)", "ComplexHerm(3)", "ComplexHerm(4)"]);
    assert!(classify_json(1).is_err());
}

#[test]
fn circuit_values() {
    let src = "system A = 2;\nlet p = e . rho;\nlet f = flip;";
    let bindings = r#"{
        "rho": {"type": "state", "system": "A", "matrix": [[0.25, 0], [0, 0.75]]},
        "e": {"type": "effect", "system": "A", "matrix": [[1, 0], [0, 0]]},
        "flip": {"type": "channel", "input": "A", "output": "A", "kraus": [[[0, 1], [1, 0]]]}
    }"#;
    let v: Value = serde_json::from_str(&eval_circuit_json(src, "complex", bindings).unwrap()).unwrap();
    assert_eq!(v["values"][0]["name"], "p");
    assert!((v["values"][0]["scalar"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["values"][1]["wire"], "A -> A");
    assert!(v["values"][1]["scalar"].is_null());
    let err = eval_circuit_json("let q = ;", "complex", "").unwrap_err();
    assert!(err.contains("1:9"), "{err}");
    assert!(eval_circuit_json(src, "octonion", bindings).is_err());
}

fn textarea(html: &str, id: &str) -> String {
    let open = format!("<textarea id=\"{id}\"");
    let start = html.find(&open).unwrap();
    let body = &html[start..];
    let body = &body[body.find('>').unwrap() + 1..];
    body[..body.find("</textarea>").unwrap()].to_string()
}

#[test]
fn page_defaults_evaluate() {
    let html = include_str!("../www/index.html");
    let out = eval_circuit_json(&textarea(html, "ce-src"), "complex", &textarea(html, "ce-bind")).unwrap();
    let v: Value = serde_json::from_str(&out).unwrap();
    let scalars: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x["scalar"].as_f64().unwrap()).collect();
    assert_eq!(scalars.len(), 3);
    assert!((scalars[0] - 0.5).abs() < 1e-12 && scalars[1].abs() < 1e-12 && (scalars[2] - 0.5).abs() < 1e-12);
}
