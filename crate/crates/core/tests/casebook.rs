use netcay::harness::{run_all, run_case, CaseReport, CASE_IDS};
use netcay::Limits;

fn describe(r: &CaseReport) -> String {
    let failing: Vec<_> = r.claims.iter().filter(|c| !c.pass).collect();
    format!("{}: error {:?}, failing {:#?}", r.case_id, r.error, failing)
}

#[test]
fn every_case_passes() {
    let reports = run_all(&Limits::default());
    assert_eq!(reports.len(), CASE_IDS.len());
    for (r, id) in reports.iter().zip(CASE_IDS) {
        assert_eq!(&r.case_id, id);
        assert!(r.passed(), "{}", describe(r));
    }
}

#[test]
fn reports_are_reproducible() {
    let limits = Limits::default();
    for id in ["ex2.3-s5", "thm1.2-z6", "ex5.1"] {
        let a = serde_json::to_string(&run_case(id, &limits).unwrap()).unwrap();
        let b = serde_json::to_string(&run_case(id, &limits).unwrap()).unwrap();
        assert_eq!(a, b);
        let parsed: CaseReport = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), a);
    }
}

#[test]
fn cyclic_twelve_has_frattini_of_order_two() {
    let r = run_case("ex2.1", &Limits::default()).unwrap();
    let c = r
        .claims
        .iter()
        .find(|c| c.description == "Φ(Z_12; {a, a^-1}) has order 2")
        .unwrap();
    assert!(c.pass);
    assert_eq!(c.computed, serde_json::json!(2));
}

#[test]
fn case_errors_fail_the_case() {
    let tight = Limits::default().with_order_cap(8);
    let r = run_case("ex5.1", &tight).unwrap();
    assert!(r.error.is_some());
    assert!(!r.passed());
}
