use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;

fn jcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jcm"))
        .args(args)
        .env_remove("JCM_HARD_NMAX_CAP")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Output {
    let o = jcm(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    o
}

/// CSV rows from stdout, header first.
fn rows(o: &Output) -> Vec<Vec<String>> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], k: usize) -> Vec<f64> {
    rows[1..].iter().map(|r| r[k].parse().unwrap()).collect()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

#[test]
fn vacuum_is_single_row() {
    let o = ok(&["pmf", "--family", "coherent", "--beta2", "0"]);
    let r = rows(&o);
    assert_eq!(r[0], ["n", "rho_nn", "rho_nn_weighted"]);
    assert_eq!(r.len(), 2);
    assert_eq!(r[1][0], "0");
    assert_eq!(r[1][1].parse::<f64>().unwrap(), 1.0);
    let s = json(&o.stderr);
    let keys: Vec<&str> = s.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    for k in ["mean", "variance", "tail_mass", "norm_residual"] {
        assert!(keys.contains(&k), "{keys:?}");
    }
}

#[test]
fn squeezed_vacuum_odd_rows_are_zero() {
    let o = ok(&["pmf", "--family", "squeezed-vacuum", "--r", "1"]);
    let p = column(&rows(&o), 1);
    assert!(p.len() > 20);
    assert!(p.iter().skip(1).step_by(2).all(|&x| x == 0.0));
    assert!(p.iter().step_by(2).all(|&x| x > 0.0));
}

#[test]
fn squeezed_thermal_branches_split_above_critical() {
    // nT = 10: critical squeezing at ln(21)/2 = 1.52.
    let above = column(
        &rows(&ok(&[
            "pmf",
            "--family",
            "squeezed-thermal",
            "--r",
            "2",
            "--nt",
            "10",
            "--nmax",
            "100",
        ])),
        1,
    );
    let below = column(
        &rows(&ok(&[
            "pmf",
            "--family",
            "squeezed-thermal",
            "--r",
            "1",
            "--nt",
            "10",
            "--nmax",
            "100",
        ])),
        1,
    );
    assert_eq!(above.len(), 101);
    assert!(above[2] > above[1], "odd entry dips below its even neighbours");
    assert!(
        below[..20].windows(2).all(|w| w[1] < w[0]),
        "one smooth curve below critical"
    );
}

#[test]
fn weighted_column_and_number_format() {
    let o = ok(&[
        "pmf", "--family", "thermal", "--nt", "2", "--delta", "10", "--nmax", "5",
    ]);
    let r = rows(&o);
    for row in &r[1..] {
        for cell in &row[1..] {
            let (mant, _) = cell.split_once('e').unwrap();
            assert_eq!(mant.trim_start_matches('-').replace('.', "").len(), 17, "{cell}");
        }
    }
    let p = column(&r, 1);
    let w = column(&r, 2);
    for (n, (a, b)) in p.iter().zip(&w).enumerate() {
        let m = n as f64 + 1.0;
        assert_eq!(*b, a * m / (m + 10.0));
    }
    assert!(!String::from_utf8(o.stdout).unwrap().contains('\r'));
}

#[test]
fn fock_resonant_is_sine_squared() {
    let o = ok(&[
        "dyn", "--family", "fock", "--l", "3", "--delta", "0", "--zmax", "10", "--mode", "r",
    ]);
    let r = rows(&o);
    assert_eq!(r[0], ["z", "s1"]);
    for row in &r[1..] {
        let z: f64 = row[0].parse().unwrap();
        let s: f64 = row[1].parse().unwrap();
        assert!((s - z.sin().powi(2)).abs() < 1e-15, "z={z}");
    }
}

fn detuned_average(args: &[&str]) -> f64 {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let mut a = args.to_vec();
    a.extend(["--out", out.to_str().unwrap()]);
    let o = ok(&a);
    let header = fs::read_to_string(&out).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "z,s1_r,s1_nr");
    json(&o.stdout)["non_resonant"]["time_average"].as_f64().unwrap()
}

#[test]
fn reference_inversion_percentages() {
    let a = detuned_average(&[
        "dyn", "--family", "coherent", "--beta2", "10", "--delta", "10", "--zmax", "500",
    ]);
    assert!((a - 0.25).abs() <= 0.02, "{a}");
    let b = detuned_average(&[
        "dyn", "--family", "thermal", "--nt", "100", "--delta", "200", "--zmax", "500",
    ]);
    assert!((b - 0.14).abs() <= 0.02, "{b}");
}

#[test]
fn moments_subcommand() {
    let raw = ok(&["moments", "--family", "coherent", "--beta2", "7"]).stdout;
    let text = String::from_utf8(raw.clone()).unwrap();
    let pos: Vec<usize> = [
        "family",
        "params",
        "closed_mean",
        "closed_var",
        "pmf_mean",
        "pmf_var",
        "abs_diffs",
    ]
    .iter()
    .map(|k| text.find(&format!("\"{k}\":")).unwrap())
    .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
    let m = json(&raw);
    assert_eq!(m["closed_mean"], 7.0);
    assert!(m["abs_diffs"]["mean"].as_f64().unwrap() <= m["tail_bounds"]["mean"].as_f64().unwrap());

    let t = json(&ok(&["moments", "--family", "dsts", "--beta2", "0", "--nt", "2", "--r", "0"]).stdout);
    assert_eq!(t["closed_mean"], 2.0);
    assert_eq!(t["closed_var"], 6.0);

    let s = json(
        &ok(&[
            "moments",
            "--family",
            "sdns",
            "--beta2",
            "1",
            "--r",
            "0.5",
            "--psi",
            "0",
            "--m",
            "2",
            "--eps-tail",
            "1e-14",
        ])
        .stdout,
    );
    assert!(s["abs_diffs"]["mean"].as_f64().unwrap() < 1e-6);
    assert!(s["abs_diffs"]["var"].as_f64().unwrap() < 1e-6);
}

#[test]
fn json_format_and_determinism() {
    let args = [
        "pmf",
        "--family",
        "squeezed-coherent",
        "--beta2",
        "4",
        "--r",
        "0.7",
        "--psi",
        "pi/2",
        "--format",
        "json",
    ];
    let a = ok(&args);
    let b = ok(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let v = json(&a.stdout);
    assert_eq!(v["n"][0], 0);
    assert!(v["rho_nn"].as_array().unwrap().len() > 10);
}

#[test]
fn exit_codes() {
    assert_eq!(
        jcm(&["pmf", "--family", "coherent", "--nt", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(jcm(&["pmf", "--family", "nosuch"]).status.code(), Some(2));
    assert_eq!(jcm(&["pmf", "--bogus"]).status.code(), Some(2));
    assert_eq!(jcm(&["dyn", "--family", "fock", "--zmax", "-1"]).status.code(), Some(2));
    assert_eq!(jcm(&["xcheck", "--only", "nosuch"]).status.code(), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_jcm"))
        .args(["pmf", "--family", "thermal", "--nt", "100"])
        .env("JCM_HARD_NMAX_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap"));
}

#[test]
fn svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    ok(&[
        "dyn",
        "--family",
        "coherent",
        "--beta2",
        "5",
        "--delta",
        "5",
        "--zmax",
        "50",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    let s = fs::read_to_string(&svg).unwrap();
    assert!(s.contains("<svg") && s.contains("version=\"1.1\"") && s.ends_with("</svg>\n"));
}

#[test]
fn xcheck_single_and_small() {
    let o = ok(&["xcheck", "--only", "fock-kernel-forms"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("fock-kernel-forms") && text.contains("pass"));

    let t = Instant::now();
    let o = ok(&["xcheck", "--dim", "32", "--json"]);
    assert!(t.elapsed().as_secs() < 60);
    let v = json(&o.stdout);
    let reports = v.as_array().unwrap();
    assert!(reports
        .iter()
        .filter(|r| r["mandatory"] == true)
        .all(|r| r["passed"] == true));
    assert!(reports
        .iter()
        .any(|r| r["name"] == "sdns-single-sum" && r["mandatory"] == false));
}

fn write_manifest(dir: &Path, body: &str) -> String {
    let p = dir.join("m.toml");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn sweep_trivial_and_empty() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        dir.path(),
        "[[run]]\nname = \"vac\"\nfamily = \"fock\"\nl = 0\nzmax = 5.0\n",
    );
    let out = dir.path().join("out");
    ok(&["sweep", &m, "--out", out.to_str().unwrap()]);
    let entries: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(entries.len(), 2);
    let index = json(&fs::read(out.join("index.json")).unwrap());
    assert_eq!(index["runs"][0]["name"], "vac");
    assert_eq!(index["runs"][0]["status"], "ok");
    assert!(out.join("vac/pmf.csv").exists() && out.join("vac/dyn.csv").exists());

    let m = write_manifest(dir.path(), "[defaults]\nzmax = 5.0\n");
    let o = jcm(&["sweep", &m, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no runs"));
}

#[test]
fn sweep_records_failures() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        dir.path(),
        "[[run]]\nname = \"good\"\nfamily = \"thermal\"\nnt = 1.0\n[[run]]\nname = \"bad\"\nfamily = \"coherent\"\nnt = 1.0\n",
    );
    let out = dir.path().join("out");
    let o = jcm(&["sweep", &m, "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
    let index = json(&fs::read(out.join("index.json")).unwrap());
    assert_eq!(index["runs"][0]["status"], "ok");
    assert_eq!(index["runs"][1]["status"], "failed");
    assert!(index["runs"][1]["error"].as_str().unwrap().contains("not used"));
}

#[test]
fn sweep_is_independent_of_pool_size() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[defaults]\nzmax = 30.0\ndelta = 5.0\nsvg = true\n\
        [[run]]\nname = \"a\"\nfamily = \"squeezed-thermal\"\nnt = 1.0\nr = 0.5\n\
        [[run]]\nname = \"b\"\nfamily = \"sdns\"\nbeta2 = 2.0\nr = 0.5\npsi = \"pi/2\"\nm = 1\n\
        [[run]]\nname = \"c\"\nfamily = \"coherent\"\nbeta2 = 3.0\n";
    let m = write_manifest(dir.path(), body);
    let one = dir.path().join("one");
    let four = dir.path().join("four");
    ok(&["sweep", &m, "--out", one.to_str().unwrap(), "--jobs", "1"]);
    ok(&["sweep", &m, "--out", four.to_str().unwrap(), "--jobs", "4"]);
    for f in [
        "index.json",
        "a/pmf.csv",
        "a/dyn.csv",
        "b/pmf.json",
        "b/dyn.svg",
        "c/dyn.json",
    ] {
        assert_eq!(fs::read(one.join(f)).unwrap(), fs::read(four.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn shipped_manifest_covers_every_group() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../manifests/figures.toml");
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "sweep",
        manifest.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let index = json(&fs::read(dir.path().join("index.json")).unwrap());
    let runs = index["runs"].as_array().unwrap();
    for group in 1..=13 {
        assert!(
            runs.iter()
                .any(|r| r["name"].as_str().unwrap().starts_with(&format!("t{group:02}-"))),
            "group {group}"
        );
    }
    for r in runs {
        let name = r["name"].as_str().unwrap();
        assert_eq!(r["status"], "ok", "{name}");
        let pmf = fs::read_to_string(dir.path().join(name).join("pmf.csv")).unwrap();
        assert!(pmf.starts_with("n,rho_nn,rho_nn_weighted\n"));
    }
    let avg = |name: &str| {
        let r = runs.iter().find(|r| r["name"] == name).unwrap();
        r["dyn"]["non_resonant"]["time_average"].as_f64().unwrap()
    };
    for (name, want) in [
        ("t01-coherent-b10-d10", 0.25),
        ("t01-coherent-b10-d50", 0.10),
        ("t01-coherent-b100-d10", 0.45),
        ("t01-coherent-b100-d50", 0.34),
        ("t01-coherent-b100-d200", 0.17),
        ("t02-thermal-n10-d10", 0.21),
        ("t02-thermal-n100-d200", 0.14),
    ] {
        assert!((avg(name) - want).abs() <= 0.02, "{name}: {}", avg(name));
    }
}
