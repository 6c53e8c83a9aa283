use finsler_wasm::{convexity_map_json, curvature_scan_json, verify_family_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn convexity_map_shape() {
    let v = parse(convexity_map_json("1,1/4", 0.3, 0.9, 8).unwrap());
    assert_eq!(v["b"].as_array().unwrap().len(), 8);
    assert_eq!(v["margin"].as_array().unwrap().len(), 8);
    assert_eq!(v["status"], "pass");
    let v = parse(convexity_map_json("1,-3", 0.3, 0.9, 8).unwrap());
    assert_eq!(v["status"], "fail");
    assert!(convexity_map_json("1,1", 0.9, 0.3, 8).is_err());
    assert!(convexity_map_json("1", 0.3, 0.9, 8).is_err());
}

#[test]
fn curvature_scan_rows() {
    let v = parse(curvature_scan_json("family", "1,1/4,1/16", 3, 6, 2, 0.0).unwrap());
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        assert!(r["normB"].as_f64().unwrap() <= 1e-7);
        assert!(r["failures"].as_array().unwrap().is_empty());
    }
    let a = curvature_scan_json("randers", "", 2, 5, 3, 0.0).unwrap();
    assert_eq!(a, curvature_scan_json("randers", "", 2, 5, 3, 0.0).unwrap());
    assert!(curvature_scan_json("randers", "", 7, 5, 3, 0.0).is_err());
    assert!(curvature_scan_json("nope", "", 3, 5, 3, 0.0).is_err());
}

#[test]
fn verify_family_records() {
    let v = parse(verify_family_json("1,1", "2,3").unwrap());
    for r in v.as_array().unwrap() {
        assert_eq!(r["conditions"]["NJFI_weak"], true);
    }
    assert!(verify_family_json("1,1", "9").is_err());
    assert!(verify_family_json("1,x", "3").is_err());
}
