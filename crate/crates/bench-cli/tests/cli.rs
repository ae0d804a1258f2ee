use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sktdpc(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sktdpc"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn without_timings(report: &str) -> toml::Table {
    let mut t: toml::Table = toml::from_str(report).unwrap();
    t.remove("timings");
    t
}

#[test]
fn cluster_writes_labels_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = sktdpc(
        &[
            "cluster",
            "two-blobs",
            "--k",
            "5",
            "--output",
            "labels.txt",
            "--report",
            "report.toml",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let labels = fs::read_to_string(dir.path().join("labels.txt")).unwrap();
    assert_eq!(labels.lines().count(), 300);
    let distinct: std::collections::HashSet<&str> = labels.lines().collect();
    assert_eq!(distinct.len(), 2);

    let report: toml::Table =
        toml::from_str(&fs::read_to_string(dir.path().join("report.toml")).unwrap()).unwrap();
    assert_eq!(report["m_p"].as_integer(), Some(2));
    assert_eq!(report["metrics"]["acc"].as_float(), Some(1.0));
    let ratio = report["counters"]["ratio"].as_float().unwrap();
    assert!(ratio > 0.0 && ratio <= 1.0);
    assert!(report["timings"]["per_repeat_s"].as_array().is_some());
}

#[test]
fn reports_are_reproducible_apart_from_timings() {
    let dir = tempfile::tempdir().unwrap();
    let a = sktdpc(
        &["cluster", "two-blobs", "--k", "4", "--repeats", "3"],
        dir.path(),
    );
    let b = sktdpc(
        &["cluster", "two-blobs", "--k", "4", "--repeats", "3"],
        dir.path(),
    );
    assert!(a.status.success() && b.status.success());
    assert_eq!(without_timings(&stdout(&a)), without_timings(&stdout(&b)));
    let t: toml::Table = toml::from_str(&stdout(&a)).unwrap();
    assert_eq!(t["timings"]["per_repeat_s"].as_array().unwrap().len(), 3);
}

#[test]
fn delimited_file_with_label_column() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("x,y,class\n");
    for i in 0..20 {
        let (cx, class) = if i < 10 { (0.0, "a") } else { (50.0, "b") };
        text.push_str(&format!(
            "{},{},{class}\n",
            cx + (i % 5) as f64 * 0.3,
            (i % 3) as f64 * 0.2
        ));
    }
    fs::write(dir.path().join("points.csv"), text).unwrap();
    // the header fails to parse as numbers
    let out = sktdpc(
        &["cluster", "points.csv", "--k", "3", "--label-col", "-1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));

    let out = sktdpc(
        &[
            "cluster",
            "points.csv",
            "--k",
            "3",
            "--label-col",
            "-1",
            "--header",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let t: toml::Table = toml::from_str(&stdout(&out)).unwrap();
    assert_eq!(t["n"].as_integer(), Some(20));
    assert_eq!(t["dim"].as_integer(), Some(2));
    assert!(t.contains_key("metrics"));

    let out = sktdpc(
        &["cluster", "points.csv", "--k", "3", "--header"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(2),
        "label column parsed as a feature"
    );
}

#[test]
fn missing_file_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = sktdpc(&["cluster", "no/such/file.csv", "--k", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no/such/file.csv"));
}

#[test]
fn zero_k_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = sktdpc(&["cluster", "two-blobs", "--k", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = sktdpc(&["cluster", "two-blobs"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = sktdpc(&["cluster", "two-blobs", "--k", "300"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cutoff_algorithm_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = sktdpc(
        &[
            "cluster",
            "two-blobs",
            "--algorithm",
            "dpc",
            "--dc-percent",
            "2",
            "--n-centers",
            "2",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let t: toml::Table = toml::from_str(&stdout(&out)).unwrap();
    assert_eq!(t["algorithm"].as_str(), Some("dpc"));
    assert_eq!(t["clusters"].as_integer(), Some(2));
    assert!(t["params"]["dc"].as_float().unwrap() > 0.0);
    let out = sktdpc(
        &[
            "cluster",
            "two-blobs",
            "--algorithm",
            "dpc",
            "--n-centers",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_repeats_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("suite.toml"),
        "[[cell]]\ndataset = \"two-blobs\"\nk = 5\n\n[[cell]]\ndataset = \"two-blobs\"\nalgorithm = \"reference\"\nk = 5\n",
    )
    .unwrap();
    let out = sktdpc(
        &["bench", "--suite", "suite.toml", "--repeats", "20"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let t: toml::Table = toml::from_str(&stdout(&out)).unwrap();
    let cells = t["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    for cell in cells {
        assert_eq!(cell["status"].as_str(), Some("ok"));
        assert_eq!(cell["run"]["timings"]["repeats"].as_integer(), Some(20));
    }
    assert_eq!(cells[0]["run"]["centers"], cells[1]["run"]["centers"]);
}

#[test]
fn bench_records_failed_cells_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("suite.toml"),
        "[[cell]]\ndataset = \"missing.csv\"\nk = 3\n\n[[cell]]\ndataset = \"two-blobs\"\nk = 3\n",
    )
    .unwrap();
    let out = sktdpc(
        &["bench", "--suite", "suite.toml", "--report", "r.toml"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let t: toml::Table =
        toml::from_str(&fs::read_to_string(dir.path().join("r.toml")).unwrap()).unwrap();
    assert_eq!(t["failed"].as_integer(), Some(1));
    let cells = t["cells"].as_array().unwrap();
    assert_eq!(cells[0]["status"].as_str(), Some("error"));
    assert!(cells[0]["error"].as_str().unwrap().contains("missing.csv"));
    assert_eq!(cells[1]["status"].as_str(), Some("ok"));
}

#[test]
fn plots_are_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = sktdpc(
        &[
            "plot",
            "gamma",
            "two-blobs",
            "--k",
            "5",
            "--output",
            "g.svg",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let svg = fs::read_to_string(dir.path().join("g.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("M = 2"));

    let out = sktdpc(
        &["plot", "decision-graph", "two-blobs", "--k", "5"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(dir.path().join("blobs-2x150-decision-graph.svg").exists());

    let out = sktdpc(
        &[
            "plot",
            "scatter",
            "two-blobs",
            "--k",
            "5",
            "--output",
            "s.svg",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let svg = fs::read_to_string(dir.path().join("s.svg")).unwrap();
    assert!(svg.contains("#1f77b4") && svg.contains("#ff7f0e"));
}

#[test]
fn scatter_needs_two_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let out = sktdpc(
        &["plot", "scatter", "iris", "--k", "3", "--output", "s.svg"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("2-D"), "{}", stderr(&out));
    let out = sktdpc(
        &[
            "plot", "scatter", "iris", "--k", "3", "--pca", "--output", "s.svg",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn sweep_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = sktdpc(&["sweep", "two-blobs", "--k", "3:3"], dir.path());
    assert!(out.status.success());
    let table = stdout(&out);
    assert_eq!(table.lines().count(), 2);
    assert!(table.starts_with("k,clusters,m_p,acc"));

    let out = sktdpc(
        &["sweep", "two-blobs", "--k", "2:10", "--output", "sweep.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let table = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 10);

    let out = sktdpc(&["sweep", "two-blobs", "--k", "5:2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn uci_wine_layout_has_the_label_first() {
    let dir = tempfile::tempdir().unwrap();
    let csv = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/wine.csv"))
        .unwrap();
    let moved: String = csv
        .lines()
        .map(|l| {
            let (features, label) = l.rsplit_once(',').unwrap();
            format!("{label},{features}\n")
        })
        .collect();
    fs::write(dir.path().join("wine.data"), moved).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sktdpc"))
        .args(["cluster", "wine", "--k", "6"])
        .env("SKTDPC_DATA_DIR", dir.path())
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let from_uci: toml::Table = toml::from_str(&stdout(&out)).unwrap();
    let bundled = sktdpc(&["cluster", "wine", "--k", "6"], dir.path());
    assert_eq!(
        without_timings(&stdout(&out)),
        without_timings(&stdout(&bundled))
    );
    assert_eq!(from_uci["dim"].as_integer(), Some(13));
}
