use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use biclique_cert::witness::RefutationCertificate;
use biclique_cert::{parse_cover, serialize_cover, star_decomposition};
use serde_json::Value;
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biclique-cert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_two_stars(dir: &Path) -> String {
    let path = dir.join("two_stars.json");
    fs::write(&path, serialize_cover(&star_decomposition(4).unwrap().truncated(2))).unwrap();
    path.display().to_string()
}

fn write_hard_cover(dir: &Path) -> String {
    let path = dir.join("hard.json");
    fs::write(
        &path,
        r#"{"n":5,"bicliques":[{"left":[2,4,5],"right":[1]},{"left":[1,4,5],"right":[2]},{"left":[1,2,5],"right":[3]}]}"#,
    )
    .unwrap();
    path.display().to_string()
}

#[test]
fn construct_writes_canonical_cover() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c.json");
    let o = bin(&["construct", "--n", "4", "--method", "star", "-o", out.to_str().unwrap(), "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exact cover: true"));
    assert!(stdout(&o).contains("m: 3"));
    let bytes = fs::read(&out).unwrap();
    assert_eq!(
        bytes,
        br#"{"n":4,"bicliques":[{"left":[1],"right":[2,3,4]},{"left":[2],"right":[3,4]},{"left":[3],"right":[4]}]}"#
    );

    let o = bin(&["construct", "--n", "2", "--method", "recursive"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse_cover(&o.stdout).unwrap().len(), 1);

    let o = bin(&["construct", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn summaries_carry_resolved_config() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c.json");
    let o = bin(&["construct", "--n", "5", "--method", "recursive", "-o", out.to_str().unwrap()]);
    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["config"]["n"], 5);
    assert_eq!(summary["config"]["method"], "recursive");
    assert_eq!(summary["config"]["global"]["seed"], 0);
    assert_eq!(summary["m"], 4);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let star = dir.path().join("star.json");
    fs::write(&star, serialize_cover(&star_decomposition(4).unwrap())).unwrap();
    let o = bin(&["verify", star.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["is_exact_cover"], true);
    assert_eq!(report["total_biclique_edges"], 6);

    let two = write_two_stars(dir.path());
    let o = bin(&["verify", &two]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["uncovered"], serde_json::json!([[3, 4]]));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_eq!(bin(&["verify", bad.to_str().unwrap()]).status.code(), Some(2));
    let overlap = dir.path().join("overlap.json");
    fs::write(&overlap, r#"{"n":3,"bicliques":[{"left":[1],"right":[1]}]}"#).unwrap();
    let o = bin(&["verify", overlap.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("left/right overlap in biclique 1"));
}

#[test]
fn refute_emits_checkable_certificate() {
    let dir = TempDir::new().unwrap();
    let two = write_two_stars(dir.path());
    let cert_path = dir.path().join("cert.json");
    let o = bin(&["refute", &two, "--seed", "1", "-o", cert_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let cert: RefutationCertificate =
        serde_json::from_slice(&fs::read(&cert_path).unwrap()).unwrap();
    let cover = parse_cover(&fs::read(&two).unwrap()).unwrap();
    assert!(cert.check(&cover).unwrap());
    assert!(cert.defect > 0);
    assert_eq!(cert.seed, Some(1));
    let culprit = cert.culprit.unwrap();
    assert_eq!((culprit.edge, culprit.multiplicity), ([3, 4], 0));

    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["outcome"], "refuted");
    assert_eq!(summary["config"]["refute"]["search"]["seed"], 1);
}

#[test]
fn refute_exhaustive_and_kernel_paths() {
    let dir = TempDir::new().unwrap();
    let two = write_two_stars(dir.path());
    let o = bin(&["refute", &two, "--strategy", "exhaustive"]);
    assert_eq!(o.status.code(), Some(1));
    let cert: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["strategy"], "collision");
    assert_eq!(cert["seed"], Value::Null);

    let hard = write_hard_cover(dir.path());
    let o = bin(&["refute", &hard, "--budget", "1", "--kernel-bound", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let cert: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["strategy"], "kernel");
}

#[test]
fn refute_guard_and_exhaustion() {
    let dir = TempDir::new().unwrap();
    let star = dir.path().join("star.json");
    fs::write(&star, serialize_cover(&star_decomposition(4).unwrap())).unwrap();
    let o = bin(&["refute", star.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m = 3 >= n - 1"));

    let hard = write_hard_cover(dir.path());
    let o = bin(&["refute", &hard, "--budget", "1", "--kernel-bound", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn gadget_reports() {
    let o = bin(&["gadget", "--p", "2,1", "--q", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((r["h_edges"].clone(), r["h_prime_edges"].clone(), r["gap"].clone()), (4.into(), 5.into(), 1.into()));
    assert_eq!(r["complement"]["accounting_holds"], true);
    assert_eq!(r["complement"]["explicit_clique_edges"], 2);

    let o = bin(&["gadget", "--p", "1,1", "--q", "1,1", "--format", "text"]);
    assert!(stdout(&o).contains("gap=0"));

    let o = bin(&["gadget", "--p", "2,2", "--q", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["gadget", "--p", "0,2", "--q", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gadget_demo() {
    let dir = TempDir::new().unwrap();
    let two = write_two_stars(dir.path());
    let o = bin(&["gadget", "--demo", &two, "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let report = &r["report"];
    assert_eq!(report["all_balanced"], true);
    assert!(report["edge_gap"].as_u64().unwrap() > 0);
    assert_eq!(report["edge_gap"].as_u64().map(u128::from), report["closed_form_gap"].as_u64().map(u128::from));
    assert_eq!(report["culprit"]["edge"], serde_json::json!([3, 4]));

    let o = bin(&["gadget", "--demo", &two, "--seed", "1", "--format", "text"]);
    assert!(stdout(&o).contains("edge {3,4} has multiplicity 0"));

    let star = dir.path().join("star3.json");
    fs::write(&star, serialize_cover(&star_decomposition(3).unwrap())).unwrap();
    assert_eq!(bin(&["gadget", "--demo", star.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn bijection_reports() {
    let o = bin(&["bijection", "--p", "2", "--q", "3", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("unhit: 0"));
    assert!(text.contains("equality holds"));

    let o = bin(&["bijection", "--p", "5", "--q", "5"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["unhit"], 0);
    assert_eq!(r["equality"], true);

    let o = bin(&["bijection", "--p", "2", "--q", "5", "--list-unhit"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["unhit"], 3);
    assert_eq!(r["verdict"], "strict inequality");
    assert_eq!(r["unhit_edges"][0]["edge"], serde_json::json!([3, 4]));

    let o = bin(&["bijection", "--p", "5", "--q", "2", "--list-unhit"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["swapped"], true);
    assert_eq!(r["unhit_edges"][0]["clique"], "K_p");

    assert_eq!(bin(&["bijection", "--p", "0", "--q", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["bijection", "--p", "-2", "--q", "3"]).status.code(), Some(2));
}

#[test]
fn experiment_rows() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("rows.csv");
    let o = bin(&["experiment", "--n-range", "2..5", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,cover_id,k_min,labelings_examined");
    assert_eq!(lines.len(), 5);
    // n = 2 with no bicliques: (1,1), (1,2), (2,1) -> k_min 2 after 3 labelings.
    assert_eq!(lines[1], "2,star-minus-last,2,3");
    assert!(lines[2].starts_with("3,star-minus-last,2,"));

    let o = bin(&["experiment", "--n-range", "6..6", "--cap", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("6,star-minus-last,capped,0"));

    assert_eq!(bin(&["experiment", "--n-range", "1..3"]).status.code(), Some(2));
}

#[test]
fn experiment_random_family() {
    let o = bin(&["experiment", "--n-range", "4..6", "--family", "random-partial", "--covers", "2", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("5,random-partial-1,"));
}
