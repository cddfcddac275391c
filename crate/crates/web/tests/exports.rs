use lossyphase_web::{network_profile, precision_curves, squeezing_curve};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn precision_curves_shape() {
    let v = parse(precision_curves(0.1, 0.9, 5, false));
    let curves = v.as_array().unwrap();
    assert_eq!(curves.len(), 4);
    for c in curves {
        assert_eq!(c["eta"].as_array().unwrap().len(), 5);
    }
    let cont = curves
        .iter()
        .find(|c| c["name"] == "classical_mp_continuous")
        .unwrap();
    assert!((cont["value"][2].as_f64().unwrap() - 0.80474).abs() < 1e-4);
    assert!(parse(precision_curves(0.0, 0.9, 5, false))["error"].is_string());
}

#[test]
fn squeezing_curve_has_gaps_at_low_eta() {
    let v = parse(squeezing_curve(0.05, 0.9, 4, 1.0));
    assert!(v["squeezing_db"][0].is_null());
    assert!(v["squeezing_db"][3].as_f64().unwrap() > 0.0);
    let r = v["probe_ratio"][1].as_f64().unwrap();
    assert!(r > 0.0 && r <= 1.0);
}

#[test]
fn network_profile_single_module() {
    let v = parse(network_profile(0.5, 1, 8, 16));
    for r in v["ratio"].as_array().unwrap() {
        assert!((r.as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
    assert!(v["best_ratio"].as_f64().unwrap() > 0.93);
    assert!(parse(network_profile(0.5, 0, 8, 16))["error"].is_string());
}
