use netcay_web::{cayley_graphs, classify_dihedral, relative_frattini};
use serde_json::Value;

fn parse(text: String) -> Value {
    serde_json::from_str(&text).unwrap()
}

#[test]
fn frattini_of_reflection_pair() {
    let v = parse(relative_frattini("dihedral:5", "b, b.a"));
    assert_eq!(v["ok"], true);
    let rotations: Vec<String> = (0..5).map(|i| format!("a^{i}")).collect();
    assert_eq!(v["phi"], serde_json::json!(rotations));
    assert_eq!(v["transitive"], true);
}

#[test]
fn cayley_graph_and_quotient() {
    let v = parse(cayley_graphs("elemab:2^4", "5,7,10,11,15"));
    assert_eq!(v["ok"], true);
    assert_eq!(v["normal_edge_transitive"], false);
    assert_eq!(v["graph"]["vertices"], 16);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 40);
    assert_eq!(v["phi_quotient"]["vertices"], 8);
    assert_eq!(v["phi_quotient"]["edges"].as_array().unwrap().len(), 16);
    assert_eq!(v["phi_quotient"]["labels"].as_array().unwrap().len(), 8);
}

#[test]
fn classification_and_errors() {
    let v = parse(classify_dihedral(8, "b,b.a,b.a^4,b.a^5"));
    assert_eq!(v["class"]["family"]["family"], "Overlap");
    assert_eq!(v["aut_gc"]["label"], "D8");
    let v = parse(classify_dihedral(6, "b,b.a"));
    assert_eq!(v["ok"], false);
    let v = parse(relative_frattini("cyclic:200", "1,199"));
    assert_eq!(v["ok"], false);
    assert!(v["error"].as_str().unwrap().contains("cap"));
    let v = parse(relative_frattini("table:/etc/passwd", "1"));
    assert_eq!(v["ok"], false);
}
