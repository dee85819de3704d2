use std::fs;
use std::process::Command;

use gw_cli::commands::rational_with_cache;
use gw_cli::{exit, run};

fn gw(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gw")).args(args).output().unwrap()
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["rational", "--dmax", "0"][..],
        &["rational", "--dmax", "-3"],
        &["elliptic", "--route", "sideways"],
        &["frobnicate"],
        &["verify", "--trials", "0"],
    ] {
        let out = gw(args);
        assert_eq!(out.status.code(), Some(exit::USAGE), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_goes_to_stdout() {
    let o = run(["gw", "--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("rational"));
}

#[test]
fn json_schema() {
    let out = gw(&["elliptic", "--dmax", "5", "--route", "integral", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "elliptic");
    assert_eq!(v["route"], "integral");
    assert_eq!(v["d_max"], 5);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 5);
    assert_eq!(values[3]["d"], 4);
    assert_eq!(values[3]["N"], "225");
    assert_eq!(values[4]["N"], "87192");
}

#[test]
fn csv_output() {
    let o = run(["gw", "rational", "--dmax", "4", "--format", "csv"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "d,N\n1,1\n2,1\n3,12\n4,620\n");
}

#[test]
fn each_route_alone() {
    for route in ["ehx", "integral", "pde", "all"] {
        let o = run(["gw", "elliptic", "--dmax", "5", "--route", route, "--format", "csv"]);
        assert_eq!(o.code, 0, "{route}: {}", o.stderr);
        assert_eq!(o.stdout, "d,N\n1,0\n2,0\n3,1\n4,225\n5,87192\n");
    }
}

#[test]
fn cache_round_trip_skips_solved_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rational.json");

    let first = rational_with_cache(6, Some(&path)).unwrap();
    assert_eq!(first.solved_degrees, 5);
    assert!(first.cache_warning.is_none());
    assert!(path.exists());

    let again = rational_with_cache(6, Some(&path)).unwrap();
    assert_eq!(again.solved_degrees, 0);
    assert_eq!(again.table, first.table);

    let extended = rational_with_cache(9, Some(&path)).unwrap();
    assert_eq!(extended.solved_degrees, 3);
    let fresh = rational_with_cache(9, None).unwrap();
    assert!(extended.solved_degrees < fresh.solved_degrees);
    assert_eq!(extended.table, fresh.table);

    let shorter = rational_with_cache(4, Some(&path)).unwrap();
    assert_eq!(shorter.table.d_max(), 4);
    assert_eq!(shorter.solved_degrees, 0);
}

#[test]
fn cached_and_uncached_output_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = path.to_str().unwrap();
    let plain = gw(&["elliptic", "--dmax", "6"]);
    let cold = gw(&["elliptic", "--dmax", "6", "--cache", p]);
    let warm = gw(&["elliptic", "--dmax", "6", "--cache", p]);
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);
    assert_eq!(warm.status.code(), Some(0));
}

#[test]
fn corrupted_cache_exits_4_and_is_left_alone() {
    let dir = tempfile::tempdir().unwrap();
    let reference = run(["gw", "rational", "--dmax", "5"]).stdout;
    let bad = [
        "not json at all".to_string(),
        r#"{"format_version":99,"kind":"rational","seed_assumptions":["N_1^(0) = 1"],"values":["1"]}"#.into(),
        r#"{"format_version":1,"kind":"elliptic","seed_assumptions":["N_1^(0) = 1"],"values":["0"]}"#.into(),
        r#"{"format_version":1,"kind":"rational","seed_assumptions":["N_1^(0) = 2"],"values":["2"]}"#.into(),
        r#"{"format_version":1,"kind":"rational","seed_assumptions":["N_1^(0) = 1"],"values":["1","x"]}"#.into(),
        // Well formed but violates WDVV at d = 3.
        r#"{"format_version":1,"kind":"rational","seed_assumptions":["N_1^(0) = 1"],"values":["1","1","13"]}"#.into(),
    ];
    for (i, text) in bad.iter().enumerate() {
        let path = dir.path().join(format!("bad{i}.json"));
        fs::write(&path, text).unwrap();
        let o = run(["gw", "rational", "--dmax", "5", "--cache", path.to_str().unwrap()]);
        assert_eq!(o.code, exit::CACHE, "case {i}");
        assert!(o.stderr.starts_with("warning:"), "case {i}: {}", o.stderr);
        assert_eq!(o.stdout, reference, "case {i}");
        assert_eq!(&fs::read_to_string(&path).unwrap(), text, "case {i}");
    }
}

#[test]
fn verify_targets() {
    for target in ["wdvv", "pde", "identity", "strata"] {
        let o = run(["gw", "verify", target, "--dmax", "6", "--trials", "5"]);
        assert_eq!(o.code, 0, "{target}: {}", o.stdout);
        assert!(o.stdout.lines().all(|l| l.starts_with("PASS ")));
    }
    let o = run(["gw", "verify", "identity", "--trials", "3", "--seed", "11"]);
    assert!(o.stdout.contains("identity: R*Q^q = kappa*S with kappa = 1/5184, q = 0"));
    assert!(o.stdout.contains("identity-random: 3 trials, seed 11"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["rational", "--dmax", "8"][..],
        &["elliptic", "--dmax", "6", "--format", "json"],
        &["verify", "--dmax", "5"],
    ] {
        let a = gw(args);
        let b = gw(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
