use std::fs;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use symkl_cli::{Cache, CacheEntry};

fn symkl(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symkl"))
        .args(args)
        .env("SYMKL_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn cache_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

fn canonical(path: &Path) -> String {
    let entry: CacheEntry = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    entry.canonical_json()
}

#[test]
fn euler_k3_fills_cache_with_certified_entries() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_stdout(&symkl(dir.path(), &["euler", "--k", "3", "--pmax", "50", "--json"]));
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 15);
    assert!(entries.iter().all(|e| e["checks"]["weil"] == true && e["source"] == "computed"));
    let files = cache_files(dir.path());
    assert_eq!(files.len(), 15);
    assert!(files.contains(&"k3_p47.json".to_string()));
    let cache = Cache::new(dir.path());
    for e in entries {
        let p = e["p"].as_u64().unwrap();
        assert!(cache.load(3, p).unwrap().is_some());
    }
}

#[test]
fn cache_hit_and_recompute_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["euler", "--k", "5", "--pmax", "13", "--json"];
    let first = json_stdout(&symkl(dir.path(), &args));
    let before: Vec<String> = cache_files(dir.path()).iter().map(|f| canonical(&dir.path().join(f))).collect();

    let hit = json_stdout(&symkl(dir.path(), &args));
    assert!(hit["entries"].as_array().unwrap().iter().all(|e| e["source"] == "cache"));

    let mut refresh = args.to_vec();
    refresh.push("--refresh");
    let again = json_stdout(&symkl(dir.path(), &refresh));
    let after: Vec<String> = cache_files(dir.path()).iter().map(|f| canonical(&dir.path().join(f))).collect();
    assert_eq!(before, after);

    let strip = |v: &Value| {
        let mut v = v.clone();
        for e in v["entries"].as_array_mut().unwrap() {
            e.as_object_mut().unwrap().remove("source");
        }
        v
    };
    assert_eq!(strip(&first), strip(&hit));
    assert_eq!(strip(&first), strip(&again));
}

#[test]
fn tampered_entry_is_rejected_with_failure_json() {
    let dir = tempfile::tempdir().unwrap();
    assert!(symkl(dir.path(), &["euler", "--k", "4", "--pmax", "7"]).status.success());
    let path = dir.path().join("k4_p7.json");
    let mut entry: CacheEntry = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let last = entry.moments.len() - 1;
    entry.moments[last] = format!("{}1", entry.moments[last]);
    fs::write(&path, serde_json::to_string(&entry).unwrap()).unwrap();

    let out = symkl(dir.path(), &["euler", "--k", "4", "--pmax", "7"]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["status"], "failed");
    assert_eq!(err["command"], "euler");
    assert_eq!(err["failures"][0]["kind"], "check-failed");
}

#[test]
fn other_schema_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    assert!(symkl(dir.path(), &["euler", "--k", "3", "--pmax", "5"]).status.success());
    let path = dir.path().join("k3_p5.json");
    let mut raw: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    raw["schema_version"] = 0.into();
    raw["m"] = Value::Array(vec!["garbage".into()]);
    fs::write(&path, raw.to_string()).unwrap();
    let v = json_stdout(&symkl(dir.path(), &["euler", "--k", "3", "--pmax", "5", "--json"]));
    let e5 = v["entries"].as_array().unwrap().iter().find(|e| e["p"] == 5).unwrap().clone();
    assert_eq!(e5["source"], "computed");
    assert_eq!(e5["m"], serde_json::json!(["1", "25"]));
}

#[test]
fn concurrent_runs_leave_a_consistent_cache() {
    let dir = tempfile::tempdir().unwrap();
    let children: Vec<_> = ["23", "31", "37"]
        .iter()
        .map(|pmax| {
            Command::new(env!("CARGO_BIN_EXE_symkl"))
                .args(["euler", "--k", "4", "--pmax", pmax, "--refresh"])
                .env("SYMKL_CACHE_DIR", dir.path())
                .stdout(Stdio::piped())
                .stderr(Stdio::piped())
                .spawn()
                .unwrap()
        })
        .collect();
    for c in children {
        assert!(c.wait_with_output().unwrap().status.success());
    }
    let files = cache_files(dir.path());
    assert_eq!(files.len(), 12, "{files:?}");
    let cache = Cache::new(dir.path());
    for f in &files {
        let p: u64 = f.trim_start_matches("k4_p").trim_end_matches(".json").parse().unwrap();
        assert!(cache.load(4, p).unwrap().is_some());
    }
}

#[test]
fn invariants_k5() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_stdout(&symkl(dir.path(), &["invariants", "--k", "5", "--json"]));
    assert_eq!(v["conductor"]["value"], "15");
    assert_eq!(v["conductor"]["conjectural"], false);
    assert_eq!(v["gamma"]["m"], 2);
    assert_eq!(v["sign"]["value"], 1);
}

#[test]
fn invariants_k6_flags_conjectural_parts() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_stdout(&symkl(dir.path(), &["invariants", "--k", "6", "--json"]));
    assert_eq!(v["conductor"]["odd_part"], "3");
    assert_eq!(v["conductor"]["conjectural"], true);
    assert_eq!(v["sign"]["conjectural"], true);
}

#[test]
fn fe_check_k1_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_stdout(&symkl(dir.path(), &["fe-check", "--k", "1", "--json"]));
    for pt in v["points"].as_array().unwrap() {
        assert_eq!(pt["defect"], 0.0);
    }
}

#[test]
fn fe_check_k3_passes_and_rejects_bad_points() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_stdout(&symkl(dir.path(), &["fe-check", "--k", "3", "--points", "2.7,2.2+0.9i", "--json"]));
    for pt in v["points"].as_array().unwrap() {
        assert!(pt["defect"].as_f64().unwrap() < 1e-10);
    }
    let out = symkl(dir.path(), &["fe-check", "--k", "3", "--points", "nope"]);
    assert!(!out.status.success());
}

#[test]
fn derham_and_moments_formats() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_stdout(&symkl(dir.path(), &["derham", "--k", "4", "--json"]));
    assert_eq!(v["h1"], serde_json::json!(["eta_0", "z eta_0"]));
    assert_eq!(v["kernel_generator"]["element"], "eta_4 - 2 z eta_2 + z^2 eta_0");

    let out = symkl(dir.path(), &["moments", "--k", "2", "--p", "5", "--n", "3", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,q,moment");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,5,"));
}
