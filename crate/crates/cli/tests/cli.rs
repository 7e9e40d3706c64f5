use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke-trace"))
        .args(args)
        .current_dir(dir)
        .env_remove("HECKE_TRACE_CACHE")
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(schema_file: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(schema_file);
    let schema = read_json(&path);
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema_file}: {msgs:?}");
}

fn strip_timings(mut report: Value) -> Value {
    for g in report.as_array_mut().unwrap() {
        for s in g["stages"].as_array_mut().unwrap() {
            s["duration_ms"] = 0.into();
        }
    }
    report
}

#[test]
fn small_groups_pass_with_all_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--groups", "g4,g6", "--checks", "all", "-q"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("report.json"));
    assert_valid("report.schema.json", &report);
    let groups = report.as_array().unwrap();
    assert_eq!(groups.len(), 2);
    assert_eq!(groups[0]["group"], "G4");
    assert_eq!(groups[1]["group"], "G6");
    assert!(groups.iter().all(|g| g["pass"] == true));
}

#[test]
fn summary_table_lists_each_group() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--groups", "G4", "--checks", "relations,cond3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("relations"));
    assert!(text.lines().any(|l| l.starts_with("G4")));
    assert!(text.contains("1/1 groups pass"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "--groups", "g99"][..],
        &["verify", "--bogus"],
        &["verify", "--groups", "g4", "--trials", "0"],
        &["verify", "--groups", "g4", "--checks", "determinant"],
        &["verify", "--groups", "g7", "--checks", "det-exact"],
    ] {
        let out = run(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn failed_check_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    // no modular trial fits the degree bound over F_101
    let out = run(&["verify", "--groups", "g4", "--checks", "det-modular", "--prime", "101", "-q"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report = read_json(&dir.path().join("report.json"));
    assert_valid("report.schema.json", &report);
    assert_eq!(report[0]["pass"], false);
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--groups", "g6", "--checks", "gram,det-modular", "--trials", "7", "--seed", "42", "-q"];
    let a = run(&[&args[..], &["-o", "a.json"]].concat(), dir.path());
    let b = run(&[&args[..], &["-o", "b.json"]].concat(), dir.path());
    assert_eq!((a.status.code(), b.status.code()), (Some(0), Some(0)));
    let (ra, rb) = (read_json(&dir.path().join("a.json")), read_json(&dir.path().join("b.json")));
    assert_eq!(ra[0]["seed"], 42);
    assert_eq!(ra[0]["stages"][1]["details"]["trials"], 7);
    assert_eq!(strip_timings(ra), strip_timings(rb));
}

#[test]
fn parallel_jobs_keep_the_requested_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--groups", "g6,g4,g5", "--checks", "factorization,lifting", "--jobs", "3", "-q"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&dir.path().join("report.json"));
    let ids: Vec<&str> = report.as_array().unwrap().iter().map(|g| g["group"].as_str().unwrap()).collect();
    assert_eq!(ids, ["G6", "G4", "G5"]);
}

#[test]
fn cache_dir_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hecke-trace"))
        .args(["verify", "--groups", "g4", "--checks", "relations", "-q"])
        .current_dir(dir.path())
        .env("HECKE_TRACE_CACHE", dir.path().join("cache"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("cache").join("G4.matrices").exists());
    let report = read_json(&dir.path().join("report.json"));
    assert!(report[0]["cache_hash"].as_str().unwrap().len() == 64);
}

#[test]
fn catalog_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["dump-catalog"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let cat = read_json(&dir.path().join("catalog.json"));
    assert_valid("catalog.schema.json", &cat);
    let groups = cat["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 12);
    let record = |id: &str| groups.iter().find(|g| g["id"] == id).unwrap().clone();
    // names defined in a record, as generators or redundant letters
    let names = |g: &Value| -> Vec<String> {
        let gens = g["generators"].as_array().unwrap().iter().map(|x| x["name"].as_str().unwrap().to_string());
        let red = g["redundant"].as_array().unwrap().iter().map(|x| x["name"].as_str().unwrap().to_string());
        gens.chain(red).collect()
    };
    let g8 = names(&record("G8"));
    assert!(g8.contains(&"v".into()) && g8.contains(&"w".into()));
    let g13 = names(&record("G13"));
    assert!(g13.contains(&"q".into()) && g13.contains(&"x".into()));
    assert_eq!(record("G7")["expected_det"], "a0^936*b0^528*c0^672");
}
