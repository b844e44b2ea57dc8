use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const STRICT_EXAMPLE: &str = r#"{"n": 2, "terms": [
    {"alpha": [2, 0], "coef": 2},
    {"alpha": [1, 1], "coef": -5},
    {"alpha": [0, 2], "coef": 1}
]}"#;

fn sgo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgo"))
        .args(args)
        .env_remove("SGO_MAX_GRID")
        .output()
        .expect("run sgo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn sum_of_squares(n: usize) -> String {
    let terms: Vec<String> = (0..n)
        .map(|i| {
            let alpha: Vec<String> = (0..n)
                .map(|j| if i == j { "2" } else { "0" }.to_string())
                .collect();
            format!(r#"{{"alpha": [{}], "coef": 1}}"#, alpha.join(","))
        })
        .collect();
    format!(r#"{{"n": {n}, "terms": [{}]}}"#, terms.join(","))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Data rows of a CSV report, skipping comments and the header.
fn rows(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    rdr.records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn grid_min_strict_example() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", STRICT_EXAMPLE);
    let o = sgo(&["grid-min", "--poly", p(&f), "--r", "16"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# simplex-grid-opt v1\n"));
    let r = rows(&o);
    assert_eq!(r[0][1], "-17/32");
    assert_eq!(r[0][5], "7/16,9/16");
}

#[test]
fn grid_min_at_r1_is_smallest_vertex_coefficient() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", STRICT_EXAMPLE);
    let r = rows(&sgo(&["grid-min", "--poly", p(&f), "--r", "1"]));
    assert_eq!(r[0][1], "1");
    assert_eq!(r[0][5], "0,1");
    let r = rows(&sgo(&["grid-max", "--poly", p(&f), "--r", "1"]));
    assert_eq!(r[0][1], "2");
}

#[test]
fn grid_min_sum_of_squares() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &sum_of_squares(3));
    let r = rows(&sgo(&["grid-min", "--poly", p(&f), "--r", "3"]));
    assert_eq!(r[0][1], "1/3");
    let r = rows(&sgo(&["grid-min", "--poly", p(&f), "--r", "2"]));
    assert_eq!(r[0][1], "1/2");
    assert_eq!(r[0][3], "3");
}

#[test]
fn expect_examples() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", STRICT_EXAMPLE);
    let o = sgo(&[
        "expect",
        "--poly",
        p(&f),
        "--m",
        "16",
        "--counts",
        "7,9",
        "--r",
        "2",
    ]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r[0][2], "31/80");
    assert_eq!(r[0][4], "-17/32");

    // degree 1: the expectation is the value at the centre
    let lin = write(
        &dir,
        "lin.json",
        r#"{"n": 2, "terms": [{"alpha": [1, 0], "coef": 1}, {"alpha": [0, 1], "coef": 2}]}"#,
    );
    let r = rows(&sgo(&[
        "expect",
        "--poly",
        p(&lin),
        "--counts",
        "3,5",
        "--r",
        "1..8",
    ]));
    assert_eq!(r.len(), 8);
    assert!(r.iter().all(|row| row[2] == "13/8"));

    // E[X₁X₂]/r² = (r−1)m₁m₂/(r·m(m−1))
    let sq = write(
        &dir,
        "sq.json",
        r#"{"n": 2, "terms": [{"alpha": [1, 1], "coef": 1}]}"#,
    );
    let r = rows(&sgo(&[
        "expect",
        "--poly",
        p(&sq),
        "--counts",
        "3,5",
        "--r",
        "4",
    ]));
    assert_eq!(r[0][2], "45/224");

    // with replacement, r = 1 reproduces f at the centre for linear f
    let r = rows(&sgo(&[
        "expect",
        "--poly",
        p(&lin),
        "--counts",
        "3,5",
        "--r",
        "1",
        "--bernstein",
    ]));
    assert_eq!(
        (r[0][1].as_str(), r[0][2].as_str()),
        ("multinomial", "13/8")
    );
}

#[test]
fn expect_rejects_bad_urns() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", STRICT_EXAMPLE);
    assert_eq!(
        sgo(&["expect", "--poly", p(&f), "--counts", "7,9", "--r", "17"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sgo(&[
            "expect",
            "--poly",
            p(&f),
            "--m",
            "15",
            "--counts",
            "7,9",
            "--r",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        sgo(&["expect", "--poly", p(&f), "--counts", "7,9,1", "--r", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bounds_table_examples() {
    let o = sgo(&["bounds", "--d", "2", "--r", "2", "--m", "4"]);
    assert!(o.status.success());
    let r = rows(&o);
    let find = |rows: &[Vec<String>], kind: &str| rows.iter().find(|row| row[0] == kind).cloned();
    assert_eq!(find(&r, "QUAD_REFINED").unwrap()[5], "1/3");
    assert_eq!(find(&r, "KLS_GENERAL").unwrap()[5], "6");

    let r = rows(&sgo(&["bounds", "--d", "3", "--r", "5", "--m", "5"]));
    for kind in ["CUBIC_REFINED", "SQFREE_REFINED", "GENERAL_REFINED"] {
        assert_eq!(find(&r, kind).unwrap()[5], "0", "{kind}");
    }

    let all = rows(&sgo(&[
        "bounds", "--d", "2", "--r", "3", "--m", "2", "--all",
    ]));
    let refined = find(&all, "QUAD_REFINED").unwrap();
    assert_eq!(refined[7], "false");
    assert!(!refined[8].is_empty());
    assert_eq!(
        sgo(&["bounds", "--d", "2", "--r", "1", "--only", "NOPE"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn converge_sum_of_squares() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &sum_of_squares(4));
    let o = sgo(&[
        "converge",
        "--poly",
        p(&f),
        "--r",
        "1..12",
        "--m",
        "4",
        "--known-min",
        "1/4",
        "--known-max",
        "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&o);
    assert_eq!(r.len(), 12);
    assert_eq!((r[1][3].as_str(), r[1][4].as_str()), ("1/3", "1/3"));
    for row in &r {
        let rr: u64 = row[0].parse().unwrap();
        if rr.is_multiple_of(4) {
            assert_eq!((row[3].as_str(), row[4].as_str()), ("0", "0"));
        }
        let r2 = sgo_core::rational::parse_rational(&row[6]).unwrap();
        assert!(r2 <= sgo_core::rational::ratio(4, 1), "r={rr}");
    }

    // 1/3 exceeds f_Δ(4,4) = 1/4, a certified upper bound on the minimum
    let bad = sgo(&[
        "converge",
        "--poly",
        p(&f),
        "--r",
        "4",
        "--known-min",
        "1/3",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn converge_without_known_values_is_certified() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", STRICT_EXAMPLE);
    let o = sgo(&[
        "converge",
        "--poly",
        p(&f),
        "--r",
        "1..6",
        "--elevation",
        "4",
    ]);
    assert!(o.status.success());
    for row in rows(&o) {
        let lo = sgo_core::rational::parse_rational(&row[3]).unwrap();
        let hi = sgo_core::rational::parse_rational(&row[4]).unwrap();
        assert!(lo <= hi);
    }
}

#[test]
fn verify_contract() {
    let ok = sgo(&["verify", "--only", "STIRLING_SUM,KMR", "--kmr-max", "10"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(rows(&ok).iter().all(|r| r[5] == "true"));

    let fault = sgo(&[
        "verify",
        "--only",
        "STIRLING_SUM",
        "--inject-fault",
        "--failures-only",
    ]);
    assert_eq!(fault.status.code(), Some(4));
    let r = rows(&fault);
    assert_eq!(r.len(), 1);
    assert!(r[0][1].contains("fault=injected"));

    let empty = sgo(&["verify", "--only", "STIRLING_SUM", "--max-d", "0"]);
    assert_eq!(empty.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&empty.stderr).contains("no checks run"));

    let w = sgo(&["verify", "--only", "BOUNDS", "--polys", "5", "--max-m", "4"]);
    assert_eq!(w.status.code(), Some(0));
    assert!(rows(&w)
        .iter()
        .all(|r| r[0].starts_with("BOUND:") && r[5] == "true"));

    assert_eq!(sgo(&["verify", "--only", "NOPE"]).status.code(), Some(2));
}

#[test]
fn verify_is_thread_independent() {
    let args = [
        "verify",
        "--only",
        "MULTINOMIAL,A_BETA_SUM,BOUNDS",
        "--polys",
        "6",
        "--max-m",
        "5",
    ];
    let a = sgo(&[&args[..], &["--threads", "1"]].concat());
    let b = sgo(&[&args[..], &["--threads", "8"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stable_set_json() {
    let dir = TempDir::new().unwrap();
    let edges: Vec<String> = (0..5)
        .flat_map(|i| {
            [
                format!("{} {}", i + 1, (i + 1) % 5 + 1),
                format!("{} {}", i + 6, (i + 2) % 5 + 6),
                format!("{} {}", i + 1, i + 6),
            ]
        })
        .collect();
    let g = write(
        &dir,
        "petersen.txt",
        &format!("c petersen\np edge 10 15\n{}\n", edges.join("\n")),
    );
    let o = sgo(&["stable-set", "--graph", p(&g), "--r", "4"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["grid_value"], "1/4");
    assert_eq!(v["alpha_lb"], 4);
    assert_eq!(v["evaluations"], 715);

    let o = sgo(&[
        "stable-set",
        "--graph",
        p(&g),
        "--r",
        "1..3",
        "--format",
        "csv",
    ]);
    assert_eq!(rows(&o).len(), 3);

    let bad = write(&dir, "loop.txt", "1 1\n");
    assert_eq!(
        sgo(&["stable-set", "--graph", p(&bad), "--r", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn enclose_tightens_with_elevation() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", STRICT_EXAMPLE);
    let o = sgo(&["enclose", "--poly", p(&f), "--elevation", "5", "--r", "16"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 6);
    let q = |s: &str| sgo_core::rational::parse_rational(s).unwrap();
    for w in r.windows(2) {
        assert!(q(&w[0][3]) <= q(&w[1][3]));
        assert!(q(&w[1][6]) <= q(&w[0][6]));
    }
    for row in &r {
        // the simplex minimum −17/32 is attained on Δ(2,16)
        assert!(q(&row[3]) <= q("-17/32") && q(&row[4]) == q("-17/32"));
    }
    assert_eq!(
        sgo(&["enclose", "--poly", p(&f), "--elevation", "9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &sum_of_squares(6));
    let o = Command::new(env!("CARGO_BIN_EXE_sgo"))
        .args(["grid-min", "--poly", p(&f), "--r", "10"])
        .env("SGO_MAX_GRID", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let forced = Command::new(env!("CARGO_BIN_EXE_sgo"))
        .args(["grid-min", "--poly", p(&f), "--r", "10", "--force"])
        .env("SGO_MAX_GRID", "100")
        .output()
        .unwrap();
    assert_eq!(forced.status.code(), Some(0));
    assert_eq!(
        sgo(&["grid-min", "--poly", "/nonexistent.json", "--r", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sgo(&["grid-min", "--poly", p(&f), "--r", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sgo(&["frobnicate"]).status.code(), Some(2));

    let mixed = write(
        &dir,
        "mixed.json",
        r#"{"n": 2, "terms": [{"alpha": [2, 0], "coef": 1}, {"alpha": [0, 1], "coef": -1}]}"#,
    );
    assert_eq!(
        sgo(&["grid-min", "--poly", p(&mixed), "--r", "2"])
            .status
            .code(),
        Some(2)
    );
    let r = rows(&sgo(&[
        "grid-min",
        "--poly",
        p(&mixed),
        "--r",
        "2",
        "--homogenize",
    ]));
    // x₁² − x₂ on the grid {0, 1/2, 1}: minimum −1 at (0, 1)
    assert_eq!(r[0][1], "-1");
}

#[test]
fn json_and_csv_agree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", STRICT_EXAMPLE);
    let csv_rows = rows(&sgo(&["grid-min", "--poly", p(&f), "--r", "1..20"]));
    let o = sgo(&[
        "grid-min",
        "--poly",
        p(&f),
        "--r",
        "1..20",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), csv_rows.len());
    for (row, obj) in csv_rows.iter().zip(results) {
        assert_eq!(obj["value"], row[1].as_str());
        assert_eq!(obj["r"].as_u64().unwrap().to_string(), row[0]);
    }
}
