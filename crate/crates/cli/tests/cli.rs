use std::process::{Command, Output};

use serde_json::Value;

fn freeidx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeidx")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = freeidx(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn index_of_generator_powers() {
    let v = json(&["index", "--word", "aaa", "--rank", "2"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["manifest"]["command"], "index");
    assert_eq!(v["manifest"]["parameters"]["args"]["word"], "aaa");
    assert_eq!(v["payload"]["d_prim"], 3);
    let v = json(&["index", "--word", "a"]);
    for key in ["d_prim", "d_simp", "d_fill_lower", "d_fill_upper"] {
        assert_eq!(v["payload"][key], 1, "{key}");
    }
}

#[test]
fn commutator_report_carries_witnesses() {
    let v = json(&["index", "--word", "abAB"]);
    let p = &v["payload"];
    assert!(p["d_prim"].as_u64().unwrap() <= 4);
    assert_eq!(p["prim_witness"]["cover"]["vertices"].as_array().unwrap().len() as u64, p["d_prim"].as_u64().unwrap());
    assert!(p["fill"]["upper_certificate"].is_string());
}

#[test]
fn exit_codes() {
    assert_eq!(freeidx(&["index", "--word", "abz"]).status.code(), Some(2));
    assert_eq!(freeidx(&["index", "--word", "aA"]).status.code(), Some(2));
    assert_eq!(freeidx(&["index"]).status.code(), Some(2));
    assert_eq!(freeidx(&["index", "--word", "abAB", "--max-partitions", "1"]).status.code(), Some(3));
    assert_eq!(freeidx(&["witness", "--degree", "2", "--max-covers", "2"]).status.code(), Some(3));
    assert_eq!(freeidx(&["covers", "--degree", "4", "--max-covers", "10"]).status.code(), Some(3));
}

#[test]
fn walks_replay_from_their_manifest() {
    let args = ["walk", "--rank", "2", "--n", "5000", "--seed", "7", "--stats", "--query", "ab"];
    let a = json(&args);
    let b = json(&args);
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["manifest"]["seeds"][0], 7);
    assert_eq!(a["payload"]["word"].as_str().unwrap().len(), 5000);
    assert_eq!(a["payload"]["rng"], "chacha8");
}

#[test]
fn cover_census_counts() {
    assert_eq!(json(&["covers", "--degree", "3"])["payload"].as_array().unwrap().len(), 13);
    assert_eq!(json(&["covers", "--degree", "3", "--all"])["payload"].as_array().unwrap().len(), 26);
    let dot = freeidx(&["covers", "--degree", "2", "--format", "dot"]);
    assert_eq!(String::from_utf8(dot.stdout).unwrap().matches("digraph").count(), 3);
}

#[test]
fn minimisation_trace_replays() {
    let dir = std::env::temp_dir().join(format!("freeidx-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("min.json");
    let out = freeidx(&["minimize", "--word", "abaBAB", "--json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&["replay", "--word", "abaBAB", "--trace", path.to_str().unwrap()]);
    assert_eq!(v["payload"]["matches_recorded_minimal"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn blockers_verify_every_vertex() {
    let v = json(&["blocker", "--degree", "2", "--kind", "beta", "--verify"]);
    let reports = v["payload"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    for r in reports {
        assert_eq!(r["verified"], true);
        assert!(r["transcript"].as_array().unwrap().iter().all(|t| t["contains_target"] == true));
    }
}

#[test]
fn table_is_monotone() {
    let v = json(&["table", "--nmax", "5"]);
    let entries = v["payload"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 5);
    let prim: Vec<u64> = entries.iter().map(|e| e["f_prim"].as_u64().unwrap()).collect();
    assert!(prim.windows(2).all(|p| p[0] <= p[1]));
}
