mod common;

use common::{code, json, petdyn, stdout, write};
use petdyn_core::dynsys::{self, SubstitutionSystem};

#[test]
fn weight_command() {
    assert_eq!(stdout(&petdyn(&["weight", "S1^{n}"])), "(1,1) 1\n");
    assert_eq!(stdout(&petdyn(&["weight", "S1^{n^2} S2^{n^3}"])), "(2,3) 1\n");
    let v = json(&petdyn(&["--format", "json", "weight", "T^{3n^2}"]));
    assert_eq!(v["result"]["weight"], "(1,2)");
    assert_eq!(v["result"]["leading_coefficient"], "3");
    let bad = petdyn(&["weight", "S1^{n"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("column 6"));
    let order = petdyn(&["weight", "S2^{n} S1^{n}"]);
    assert_eq!(code(&order), 2);
}

#[test]
fn wvec_and_equiv_commands() {
    assert_eq!(stdout(&petdyn(&["wvec", "T^{n^2}", "T^{2n^2}"])), "(2(1,2))\n");
    assert_eq!(stdout(&petdyn(&["equiv", "S1^{n} S3^{n^2}", "S3^{n^2+9n}"])), "true\n");
    assert_eq!(stdout(&petdyn(&["equiv", "S1^{n}", "S1^{2n}"])), "false\n");
    let dup = petdyn(&["wvec", "T^{n}", "T^{n}"]);
    assert_eq!(code(&dup), 2);
}

#[test]
fn pet_reduce_command() {
    let dir = tempfile::tempdir().unwrap();
    let pair = write(dir.path(), "pair.json", r#"["T^{n^2}","T^{2n^2}"]"#);
    let v = json(&petdyn(&["pet-reduce", &pair]));
    let steps = v["result"].as_array().unwrap();
    assert_eq!(steps[0]["weight_vector"], serde_json::json!([[1, 2, 2]]));
    assert_eq!(steps.last().unwrap()["rule"], "terminal");

    let linear = write(dir.path(), "linear.json", r#"["T^{5n}"]"#);
    let v = json(&petdyn(&["pet-reduce", &linear]));
    assert_eq!(v["result"].as_array().unwrap().len(), 1);

    let dup = write(dir.path(), "dup.json", r#"["T^{n}","T^{n}"]"#);
    let out = petdyn(&["pet-reduce", &dup]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));

    let constant = write(dir.path(), "constant.json", r#"["T^{n+1}"]"#);
    assert_eq!(code(&petdyn(&["pet-reduce", &constant])), 3);
}

#[test]
fn group_check_command() {
    let v = json(&petdyn(&["--model", "ut4", "group-check", "--samples", "100"]));
    assert_eq!(v["result"]["failures"], serde_json::json!([]));
    assert_eq!(v["result"]["matrix_checked"], true);
    assert_eq!(code(&petdyn(&["--model", "nonsense", "group-check"])), 2);
}

#[test]
fn returns_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("n00.csv");
    let csv = csv.to_str().unwrap();
    let out = petdyn(&["returns", "--u", "0", "--poly", "n", "--v", "0", "--out", csv]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.lines().any(|l| l == "1,1"));

    let v = json(&petdyn(&["classify", csv, "--gap", "50", "--run", "3"]));
    let sys = SubstitutionSystem::chacon();
    let zero = sys.cylinder("0").unwrap();
    let probe = dynsys::weak_mixing_probe(&sys, &zero, &zero, (0, 10_000), Some(50), Some(3)).unwrap();
    assert_eq!(v["result"], serde_json::to_value(&probe).unwrap());
}

#[test]
fn dynamics_reports() {
    let args =
        ["--seed", "9", "density", "--poly", "n", "--poly", "2n", "--length", "100000", "--window", "-10000:10000"];
    let a = petdyn(&args);
    let b = petdyn(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["result"]["full_coverage_fraction"].is_number());
    assert_eq!(v["seed"], 9);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));

    let v = json(&petdyn(&["nested", "--poly", "n", "--v", "0", "--ell", "0", "--length", "10000"]));
    assert_eq!(v["result"]["ks"], serde_json::json!([2]));
}

#[test]
fn exit_codes_by_error_class() {
    assert_eq!(code(&petdyn(&["returns", "--u", "11", "--poly", "n", "--v", "0", "--length", "1000"])), 2);
    assert_eq!(code(&petdyn(&["density", "--poly", "n", "--poly", "n", "--length", "1000"])), 3);
    assert_eq!(code(&petdyn(&["nested", "--poly", "n", "--v", "0", "--r", "100000000", "--length", "1000"])), 4);
    assert_eq!(code(&petdyn(&["returns", "--u", "0", "--poly", "n", "--v", "0", "--window", "5:1"])), 2);
}
