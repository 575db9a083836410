use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(dir: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prymcusp"))
        .args(args)
        .current_dir(dir)
        .env_remove("PRYMCUSP_CACHE_DIR")
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("prymcusp-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn invalid_input_exits_1() {
    let dir = scratch("invalid");
    assert_eq!(bin(&dir, &["solve", "--stratum", "3-1"]).status.code(), Some(1));
    assert_eq!(bin(&dir, &["solve"]).status.code(), Some(1));
    assert_eq!(bin(&dir, &["geometry", "--solutions", "missing.json"]).status.code(), Some(1));
    fs::write(dir.join("bad.json"), "{").unwrap();
    assert_eq!(bin(&dir, &["render", "--table", "algo", "--input", "bad.json"]).status.code(), Some(1));
    assert_eq!(bin(&dir, &["--help"]).status.code(), Some(0));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pipeline_211_is_cached_and_matches() {
    let dir = scratch("pipeline");
    let first = bin(&dir, &["pipeline", "--stratum", "2-1-1", "--assert-paper", "--out", "p.json", "--cache-dir", "c"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("p.json")).unwrap()).unwrap();
    assert_eq!(summary["final_candidates"], 0);
    assert_eq!(summary["solutions"], 16);
    let stamp = |p: &str| fs::metadata(dir.join(p)).unwrap().modified().unwrap();
    let before = stamp("p.json");
    let cached: Vec<_> = fs::read_dir(dir.join("c")).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(cached.len(), 6);
    let again = bin(&dir, &["pipeline", "--stratum", "2-1-1", "--out", "p.json", "--cache-dir", "c", "--jobs", "4", "--log-level", "info"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&again.stderr).matches("cache hit").count(), 3);
    assert_eq!(stamp("p.json"), before);

    // the staged commands reproduce the cached intermediate files
    let solve = cached.iter().find(|p| p.file_name().unwrap().to_str().unwrap().starts_with("solve-") && !p.to_str().unwrap().contains("manifest")).unwrap();
    let staged = bin(&dir, &["geometry", "--solutions", solve.to_str().unwrap(), "--assert-paper"]);
    assert_eq!(staged.status.code(), Some(0));
    let geometry = cached.iter().find(|p| p.file_name().unwrap().to_str().unwrap().starts_with("geometry-") && !p.to_str().unwrap().contains("manifest")).unwrap();
    assert_eq!(staged.stdout, fs::read(geometry).unwrap());

    let md = bin(&dir, &["render", "--table", "algo", "--input", "p.json"]);
    assert_eq!(md.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&md.stdout).contains("| [[0,6],[3,3]] | 33 |"));
    let csv = bin(&dir, &["render", "--table", "geometries", "--input", geometry.to_str().unwrap(), "--format", "csv"]);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("M^red,D0,r2,"));
    assert_eq!(bin(&dir, &["enumerate", "--geometries", geometry.to_str().unwrap(), "--diagram", "99"]).status.code(), Some(1));
    fs::remove_dir_all(&dir).unwrap();
}
