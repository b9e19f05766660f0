use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use strutforge::basis::BasisSpec;
use strutforge::relations::Provenance;
use strutforge::{Limits, Mode};
use strutforge_cli::commands::parse_dump_line;
use strutforge_cli::ResultRecord;

const HEADER: &str = "mode,space,k,param,num_diagrams,num_relations_raw,num_relations_effective,rank,quotient_dim,primes,elapsed_ms,tool_version,timestamp";

fn run(args: &[&str], cache: &Path) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_strutforge"))
        .args(args)
        .env("STRUTFORGE_CACHE_DIR", cache)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn json(args: &[&str], cache: &Path) -> Value {
    serde_json::from_slice(&run(args, cache).stdout).expect("JSON output")
}

#[test]
fn count_reports() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(json(&["count", "--k", "9", "--n", "209"], dir.path())["ratio"], "1/1");
    let v = json(&["count", "--k", "9", "--n", "210"], dir.path());
    assert!(!v["existence_bound"].as_str().unwrap().starts_with('-'));
    assert_ne!(v["existence_bound"], "0");
    assert_eq!(v["type"], 212);
    assert!(v["note"].as_str().unwrap().contains("type 212"));
    let v = json(&["count", "--k", "3", "--n", "1"], dir.path());
    assert_eq!((v["u"].as_str(), v["r"].as_str()), (Some("3"), Some("36")));
    let table = run(&["count", "--k", "3", "--n", "1", "--format", "table"], dir.path());
    assert!(String::from_utf8(table.stdout).unwrap().contains("ratio           12/1"));
}

#[test]
fn count_rejects_bad_domain() {
    let out = Command::new(env!("CARGO_BIN_EXE_strutforge")).args(["count", "--k", "2", "--n", "0"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("k must be at least 3"));
}

#[test]
fn dim_examples_and_cache_hits() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], usize); 3] = [
        (&["dim", "--mode", "homotopy", "--space", "y", "--k", "5", "--n", "2"], 0),
        (&["dim", "--mode", "homotopy", "--space", "full", "--k", "3", "--degree", "2"], 6),
        (&["dim", "--mode", "concordance", "--space", "full", "--k", "2", "--degree", "2"], 6),
    ];
    for (args, expected) in cases {
        let first = run(args, dir.path()).stdout;
        let rec: ResultRecord = serde_json::from_slice(&first).unwrap();
        assert_eq!(rec.quotient_dim, expected, "{args:?}");
        assert_eq!(rec.quotient_dim, rec.num_diagrams - rec.rank);
        let second = run(args, dir.path()).stdout;
        assert_eq!(first, second, "cache hit must reproduce the record byte for byte");
    }
    let lines = std::fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 3);
}

#[test]
fn cache_dir_flag_beats_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let flag = flag_dir.path().to_str().unwrap();
    run(&["dim", "--k", "3", "--n", "0", "--cache-dir", flag], env_dir.path());
    assert!(flag_dir.path().join("results.jsonl").exists());
    assert!(!env_dir.path().join("results.jsonl").exists());
}

#[test]
fn y_and_full_agree_on_the_y_block() {
    let dir = tempfile::tempdir().unwrap();
    let y: ResultRecord =
        serde_json::from_slice(&run(&["dim", "--space", "y", "--k", "4", "--n", "1"], dir.path()).stdout).unwrap();
    let system = strutforge::System::build(BasisSpec::full(Mode::Homotopy, 4, 3), Limits::default()).unwrap();
    let rank = system.rank(&strutforge::DEFAULT_PRIMES).unwrap();
    assert_eq!(system.quotient_dim_at(&rank, 1), y.quotient_dim);
}

#[test]
fn sweep_writes_golden_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let csv_arg = csv.to_str().unwrap();
    run(&["sweep", "--space", "y", "--k-range", "3..5", "--n-range", "0..3", "--out", csv_arg], dir.path());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 12);
    let cells: Vec<(&str, &str)> = rows.iter().map(|r| (r[2], r[3])).collect();
    let expected: Vec<(String, String)> =
        (3..=5).flat_map(|k| (0..=3).map(move |n| (k.to_string(), n.to_string()))).collect();
    assert_eq!(cells, expected.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect::<Vec<_>>());
    assert!(rows.iter().all(|r| r[8] == "0" && r[9] == "2147483647;2147483629"));

    // a second sweep is served from the cache and yields identical rows
    let again = dir.path().join("again.csv");
    let out = run(&["sweep", "--k-range", "3-5", "--n-range", "0-3", "--out", again.to_str().unwrap()], dir.path());
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 computed, 12 cached"));
    assert_eq!(std::fs::read_to_string(&again).unwrap(), text);
}

#[test]
fn sweep_marks_failures_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    run(
        &["sweep", "--k-range", "3,4", "--n-range", "1", "--max-basis", "5", "--out", csv.to_str().unwrap()],
        dir.path(),
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("homotopy,y,3,1,3,"));
    assert!(rows[1].starts_with("homotopy,y,4,1,ERROR,"));
}

#[test]
fn witness_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    run(
        &["witness", "--space", "full", "--k", "5", "--degree", "2", "--out", path.to_str().unwrap()],
        dir.path(),
    );
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["basis", "functionals", "prime"]);
    let basis: Vec<&str> = v["basis"].as_array().unwrap().iter().map(|b| b.as_str().unwrap()).collect();
    assert_eq!(basis.len(), 65);
    assert_eq!(v["prime"], 2147483647u64);
    let fs = v["functionals"].as_array().unwrap();
    assert_eq!(fs.len(), 55);
    let ycols: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].contains('(')).collect();
    assert_eq!(ycols.len(), 10);
    for f in fs {
        let f = f.as_array().unwrap();
        assert_eq!(f.len(), 65);
        assert!(ycols.iter().all(|&c| f[c] == 0));
    }

    let v = json(&["witness", "--space", "y", "--k", "4", "--n", "1"], dir.path());
    assert_eq!(v["functionals"].as_array().unwrap().len(), 0);
    let v = json(&["witness", "--space", "full", "--k", "3", "--degree", "1"], dir.path());
    assert_eq!(v["basis"], serde_json::json!(["1-2", "1-3", "2-3"]));
    assert_eq!(v["functionals"], serde_json::json!([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
}

#[test]
fn relation_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let text = String::from_utf8(run(&["relations", "--dump", "--k", "3", "--n", "0"], dir.path()).stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[12], "# printed=12 raw=18 nonempty=12 effective=1");

    let text = String::from_utf8(run(&["relations", "--dump", "--k", "3", "--n", "1"], dir.path()).stdout).unwrap();
    let basis = BasisSpec::y(Mode::Homotopy, 3, 1).enumerate(Limits::default()).unwrap();
    let configs = strutforge::relations::y_link_configurations(3, 1, Mode::Homotopy, &basis).unwrap();
    let nonempty: Vec<_> = configs.iter().filter(|c| c.targets > 0).collect();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body.len(), nonempty.len());
    for (line, cr) in body.iter().zip(&nonempty) {
        let row = parse_dump_line(line, &basis, cr.row.provenance().clone()).unwrap();
        assert_eq!(&row, &cr.row);
        assert!(line.ends_with(&format!("# {}", cr.row.provenance())));
    }
    // the special strut (3, 1*) against struts (1,2) and (1,3) reaches both
    // rest struts; grafting onto (1,3) repeats color 3 and drops out
    let line = body
        .iter()
        .find(|l| l.contains("color=1 marked=1-3* rest=1-2|1-3 "))
        .expect("configuration printed");
    assert!(line.ends_with("targets=2"));
    assert!(line.starts_with("+1*1-3|1-(2,3)\t"));
    assert!(text.lines().last().unwrap().contains("raw=36"));
}

#[test]
fn full_space_dump_includes_ihx_rows() {
    let dir = tempfile::tempdir().unwrap();
    let text =
        String::from_utf8(run(&["relations", "--dump", "--space", "full", "--k", "4", "--degree", "3"], dir.path()).stdout)
            .unwrap();
    assert!(text.lines().any(|l| l.contains("# ihx ")));
    let basis = BasisSpec::full(Mode::Homotopy, 4, 3).enumerate(Limits::default()).unwrap();
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let dummy = Provenance::Ihx { diagram: Box::default(), component: 0, edge: (0, 0) };
        parse_dump_line(line, &basis, dummy).unwrap();
    }
}
