use std::path::PathBuf;

use mckay_core::chambers::{chambers_value, enumerate_chambers_in_f, surjectivity_report};
use mckay_core::components::{report_value, DEFAULT_BUDGET};
use mckay_core::groups::GroupSpec;
use mckay_core::mckay::RootDatum;
use serde_json::Value;

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn datum(s: &str) -> RootDatum {
    RootDatum::for_spec(s.parse::<GroupSpec>().unwrap()).unwrap()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

/// `d₀ − ½ dᵀAd` with the full affine Cartan matrix.
fn oracle_weight(r: &RootDatum, d: &[i64]) -> i64 {
    let n = d.len();
    let q: i64 = (0..n).map(|i| d[i] * (0..n).map(|j| r.cartan[i][j] * d[j]).sum::<i64>()).sum();
    d[0] - q / 2
}

/// Every nonnegative `d` with `Σ d_χ δ_χ = n` and nonnegative weight, by a
/// plain odometer over the box.
fn oracle_components(r: &RootDatum, n: i64) -> Vec<Vec<i64>> {
    let k = r.rank();
    let mut out = Vec::new();
    let mut d = vec![0i64; k];
    'outer: loop {
        let s: i64 = d.iter().zip(&r.delta).map(|(a, b)| a * b).sum();
        if s == n && oracle_weight(r, &d) >= 0 {
            out.push(d.clone());
        }
        for i in (0..k).rev() {
            if d[i] < n {
                d[i] += 1;
                continue 'outer;
            }
            d[i] = 0;
        }
        break;
    }
    out
}

fn check_components(spec: &str, max_n: i64, file: &str) {
    let r = datum(spec);
    let ns: Vec<i64> = (0..=max_n).collect();
    let v = report_value(&r, &ns, DEFAULT_BUDGET).unwrap();
    for block in v["sizes"].as_array().unwrap() {
        let n = block["n"].as_i64().unwrap();
        let got: Vec<Vec<i64>> = block["components"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["d"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
            .collect();
        assert_eq!(got, oracle_components(&r, n), "{spec} n={n}");
        for c in block["components"].as_array().unwrap() {
            let d: Vec<i64> = c["d"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
            assert_eq!(c["wt"].as_i64().unwrap(), oracle_weight(&r, &d));
            assert_eq!(c["dim"].as_i64().unwrap(), 2 * oracle_weight(&r, &d));
        }
    }
    assert_eq!(pretty(&v), golden(file), "{spec}");
}

#[test]
fn components_cyclic3() {
    check_components("cyclic:3", 4, "components_cyclic3_upto4.json");
}

#[test]
fn components_binary_dihedral2() {
    check_components("bd:2", 3, "components_bd2_upto3.json");
}

#[test]
fn components_binary_tetrahedral() {
    check_components("2T", 2, "components_2T_upto2.json");
}

#[test]
fn chambers_cyclic2() {
    let r = datum("cyclic:2");
    let en = enumerate_chambers_in_f(&r, 1, 12).unwrap();
    // F is the half-line θ(χ₁) > 0 and the only walls at n = 1 are its boundary.
    assert_eq!(en.chambers.len(), 1);
    let mut v = chambers_value(&r, &en);
    let rep = surjectivity_report(&r, 1, 12).unwrap();
    assert!(rep.all_witnessed);
    v["surjectivity"] = serde_json::to_value(&rep).unwrap();
    assert_eq!(pretty(&v), golden("chambers_cyclic2_n1.json"));
}
