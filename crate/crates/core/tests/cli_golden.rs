//! Runs the binary on fixed invocations and compares standard output and exit
//! code with the files under `tests/golden`. Set `UPDATE_GOLDEN=1` to rewrite
//! them after an intended schema change.

use std::path::PathBuf;
use std::process::Command;

const CASES: &[(&str, &[&str], i32)] = &[
    ("eval_reciprocal", &["eval", "inv(q+i)", "--at", "2"], 0),
    ("eval_polynomial", &["eval", "(q-i)*(q-j)", "--at", "1+k"], 0),
    ("eval_pole", &["eval", "inv(q+i)", "--at", "i"], 1),
    ("eval_syntax", &["eval", "q + * 3", "--at", "1"], 2),
    ("zeros_sphere", &["zeros", "(q-i)*(q+i)"], 0),
    ("zeros_isolated", &["zeros", "(q-i)*(q-j)"], 0),
    ("zeros_mixed", &["zeros", "(q^2+1)*(q-1-j)"], 0),
    ("zeros_rational", &["zeros", "inv(q)"], 2),
    ("poles_reciprocal", &["poles", "inv(q+i)"], 0),
    ("poles_sphere", &["poles", "inv(q^2 - 2*q + 5)"], 0),
    ("poles_polynomial", &["poles", "q^3 + k"], 0),
    ("laurent_pole", &["laurent", "inv(q+i)", "--center=-i", "--nmax", "2"], 0),
    ("laurent_geometric", &["laurent", "inv(q-2)", "--center", "0", "--nmax", "4"], 0),
    ("region_slice_disc", &["region", "--kind", "sigma_ball", "--p", "2i", "--R", "1", "--count", "8"], 0),
    (
        "region_mixed_json",
        &["region", "--kind", "sigma_ball", "--p", "0.5+j", "--R", "1.5", "--count", "8", "--emit", "json"],
        0,
    ),
    ("region_real", &["region", "--kind", "sigma_ball", "--p", "1", "--R", "0.5", "--count", "8"], 0),
    ("region_tau", &["region", "--kind", "tau_set", "--p", "i", "--R", "0.5", "--count", "8"], 0),
    (
        "region_membership",
        &["region", "--kind", "shell", "--p", "i", "--R1", "0", "--R2", "3", "--at", "-i", "--at", "j", "--at", "i"],
        0,
    ),
    ("region_bad_kind", &["region", "--kind", "cube", "--p", "0", "--R", "1"], 2),
    ("region_bad_radius", &["region", "--kind", "sigma_ball", "--p", "0", "--R=-1"], 2),
    ("check_product", &["check", "product_formula", "--trials", "50", "--seed", "3"], 0),
    ("check_unknown", &["check", "unknown"], 2),
    ("cw_small", &["cw", "--targets", "3", "--trunc", "10", "--seed", "5"], 0),
    ("usage_missing_at", &["eval", "q"], 2),
];

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.out"))
}

#[test]
fn outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for (name, args, code) in CASES {
        let out = Command::new(env!("CARGO_BIN_EXE_qslice")).args(*args).output().unwrap();
        let text = String::from_utf8(out.stdout).unwrap();
        if out.status.code() != Some(*code) {
            failures.push(format!("{name}: exit {:?}, expected {code}\n{text}", out.status.code()));
            continue;
        }
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let expect = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        if text != expect {
            failures.push(format!("{name}:\n got {text}\nwant {expect}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn json_outputs_parse_and_errors_have_a_kind() {
    for (name, args, code) in CASES {
        if args.contains(&"region") && !args.contains(&"json") && !args.contains(&"--at") {
            continue;
        }
        let out = Command::new(env!("CARGO_BIN_EXE_qslice")).args(*args).output().unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(v.get("error").is_some(), *code != 0, "{name}");
        if *code != 0 {
            assert!(v["error"]["kind"].is_string() && v["error"]["detail"].is_string(), "{name}");
        }
    }
}

#[test]
fn csv_header_and_columns() {
    let out = Command::new(env!("CARGO_BIN_EXE_qslice"))
        .args(["region", "--kind", "sigma_ball", "--p", "i", "--R", "2", "--count", "10"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x0,x1,x2,x3"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 4);
        let q = qslice::Quaternion::from_components([cols[0], cols[1], cols[2], cols[3]]);
        assert!((qslice::slice::sigma(q, qslice::Quaternion::I) - 2.0).abs() <= 1e-6);
    }
}
