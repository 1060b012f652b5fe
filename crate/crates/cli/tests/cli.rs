use std::path::Path;
use std::process::{Command, Output};

use kspectra::{from_graph6, parse_graph, to_graph6, GraphJson};
use kspectra_core::verify::random_k_tree;
use kspectra_core::{is_isomorphic, Family, NamedFamily};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kspectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kspectra"))
        .args(args)
        .env_remove("KTREE_GAP_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_family(dir: &Path, family: &str, n: usize, k: usize) -> String {
    let o = kspectra(&[
        "families",
        "--family",
        family,
        "--n",
        &n.to_string(),
        "--k",
        &k.to_string(),
    ]);
    assert!(o.status.success());
    let path = dir.join(format!("{family}.json"));
    std::fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn families_and_enumerate() {
    let o = kspectra(&["families", "--family", "g2", "--n", "9", "--k", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let g = parse_graph(&stdout(&o)).unwrap();
    assert_eq!(g, NamedFamily::new(Family::G2, 9, 3).unwrap().build());

    let o = kspectra(&["enumerate", "--n", "8", "--k", "2", "--count-only"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "39\n");
}

#[test]
fn enumerate_formats_agree() {
    let json = stdout(&kspectra(&["enumerate", "--n", "8", "--k", "2"]));
    let g6 = stdout(&kspectra(&["enumerate", "--n", "8", "--k", "2", "--format", "graph6"]));
    let (a, b): (Vec<&str>, Vec<&str>) = (json.lines().collect(), g6.lines().collect());
    assert_eq!(a.len(), 39);
    assert_eq!(b.len(), 39);
    for (j, s) in a.iter().zip(&b) {
        assert!(is_isomorphic(&parse_graph(j).unwrap(), &from_graph6(s).unwrap()).unwrap());
    }
}

#[test]
fn stats_spectrum_and_climb() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = write_family(dir.path(), "g2", 9, 3);

    let stats: serde_json::Value =
        serde_json::from_str(&stdout(&kspectra(&["stats", "--input", &g2, "--k", "3"]))).unwrap();
    assert_eq!(stats["S1"].as_array().unwrap().len(), 5);
    assert_eq!(stats["l"], 3);
    assert_eq!(stats["witness"].as_array().unwrap().len(), 3);

    let spec: serde_json::Value =
        serde_json::from_str(&stdout(&kspectra(&["spectrum", "--input", &g2, "--full"]))).unwrap();
    let values: Vec<f64> = spec["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 9);
    assert!(values.windows(2).all(|w| w[0] >= w[1]));
    // Trace of Q is 2m = 42.
    assert!((values.iter().sum::<f64>() - 42.0).abs() < 1e-9);
    assert_eq!(spec["perron"].as_array().unwrap().len(), 9);

    let g5 = write_family(dir.path(), "g5", 9, 3);
    let o = kspectra(&["climb", "--input", &g5, "--k", "3", "--trace"]);
    assert!(o.status.success());
    let steps: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(steps.len() >= 2);
    let q: Vec<f64> = steps.iter().map(|s| s["q1"].as_f64().unwrap()).collect();
    assert!(q.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(steps.last().unwrap()["S1"], 6);
    assert!(steps[1]["moves"].as_array().is_some_and(|m| !m.is_empty()));
    let end: GraphJson = serde_json::from_value(steps.last().unwrap()["graph"].clone()).unwrap();
    let star = NamedFamily::new(Family::KStar, 9, 3).unwrap().build();
    assert!(is_isomorphic(&end.to_graph().unwrap(), &star).unwrap());
}

#[test]
fn graph6_input_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g1.g6");
    let g1 = NamedFamily::new(Family::G1, 7, 2).unwrap().build();
    std::fs::write(&path, to_graph6(&g1).unwrap() + "\n").unwrap();
    let o = kspectra(&["stats", "--input", path.to_str().unwrap(), "--k", "2"]);
    let stats: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(stats["l"], 3);
}

#[test]
fn verify_writes_deterministic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let args = |jobs: &str, report: &str, csv: &str| {
        kspectra(&[
            "verify", "--k-min", "1", "--k-max", "2", "--n-max", "8", "--jobs", jobs, "--report", report, "--csv", csv,
        ])
    };
    let one = args("1", &p("a.json"), &p("a.csv"));
    let three = args("3", &p("b.json"), &p("b.csv"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(three.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    assert!(stdout(&one).ends_with("overall: pass\n"));
    let (a, b) = (std::fs::read(p("a.json")).unwrap(), std::fs::read(p("b.json")).unwrap());
    assert_eq!(a, b);
    assert_eq!(std::fs::read(p("a.csv")).unwrap(), std::fs::read(p("b.csv")).unwrap());

    let reports: Vec<serde_json::Value> = serde_json::from_slice(&a).unwrap();
    assert_eq!(reports.len(), 7 + 6);
    let total: u64 = reports.iter().map(|r| r["class_size"].as_u64().unwrap()).sum();
    let csv = std::fs::read_to_string(p("a.csv")).unwrap();
    assert_eq!(csv.lines().count() as u64, total + 1);
    let r72 = reports.iter().find(|r| r["n"] == 7 && r["k"] == 2).unwrap();
    let top: Vec<&str> = r72["ranking"].as_array().unwrap()[..3]
        .iter()
        .map(|r| r["family"].as_str().unwrap())
        .collect();
    assert_eq!(top, ["kstar", "g1", "g2"]);
    assert_eq!(r72["provenance"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r72["provenance"]["config"]["gap_tol"], 1e-8);
}

#[test]
fn exit_codes() {
    assert_eq!(kspectra(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        kspectra(&["families", "--family", "g7", "--n", "9", "--k", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        kspectra(&["families", "--family", "g4", "--n", "9", "--k", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        kspectra(&["enumerate", "--n", "30", "--k", "2", "--count-only"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        kspectra(&["stats", "--input", "/nonexistent.json", "--k", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(kspectra(&["--help"]).status.code(), Some(0));
    // A tolerance larger than every gap makes the ranking inconclusive.
    let o = Command::new(env!("CARGO_BIN_EXE_kspectra"))
        .args(["verify", "--k-max", "1", "--n-max", "6", "--skip-steps"])
        .env("KTREE_GAP_TOL", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_kspectra"))
        .args(["verify", "--k-max", "1", "--n-max", "6"])
        .env("KTREE_GAP_TOL", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn counterexample_is_reproducible() {
    let args = ["counterexample", "--k", "3", "--trials", "5000", "--seed", "7"];
    let (a, b) = (kspectra(&args), kspectra(&args));
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let v = json["witness"]["violation"].as_f64().unwrap();
    assert!(v > 2.4 && v < 3.0);
    assert_eq!(json["supremum"], 3.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph6_round_trips(seed in any::<u64>(), k in 1usize..5, extra in 0usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_k_tree(k + extra, k, &mut rng).unwrap();
        let text = to_graph6(&g).unwrap();
        prop_assert!(text.bytes().all(|b| (63..=126).contains(&b)));
        prop_assert_eq!(from_graph6(&text).unwrap(), g.clone());
        let json = serde_json::to_string(&GraphJson::from_graph(&g)).unwrap();
        prop_assert_eq!(parse_graph(&json).unwrap(), g);
    }
}
