use std::path::Path;
use std::process::{Command, Output};

fn satfarey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satfarey"))
        .args(args)
        .env_remove("SATFAREY_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_q7_csv() {
    let o = satfarey(&["generate", "--Q", "7", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "num,den,h\n0,1,1\n1,5,7\n1,4,6\n1,3,5\n1,2,4\n2,3,7\n1,1,3\n");
    let ins = satfarey(&["generate", "--Q", "7", "--method", "insertion"]);
    assert_eq!(ins.stdout, o.stdout);
}

#[test]
fn generate_json() {
    let o = satfarey(&["generate", "--Q", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(v[1]["num"], 1);
    assert_eq!(v[1]["den"], 3);
    assert_eq!(v[1]["h"], 5);
}

#[test]
fn verify_summary() {
    let o = satfarey(&["verify", "--Q-max", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "unimodular: OK, cross-method: OK, lemma5: OK, corollary6: OK");
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["generate", "--Q", "2"][..],
        &["tree", "--Q-max", "3"],
        &["frobnicate"],
        &["generate"],
        &["gaps", "--Q", "50", "--lambda", "0:1"],
        &["gaps", "--Q", "50", "--lambda", "0:1:0"],
        &["dist", "--Q", "100,50"],
        &["dist", "--Q", "100", "--betas", "3/2"],
        &["generate", "--Q", "7", "--parallelism", "0"],
        &["generate", "--Q", "7", "--format", "xml"],
    ] {
        let o = satfarey(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(satfarey(&["--help"]).status.code(), Some(0));
}

#[test]
fn io_errors_name_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let target = blocker.join("out.csv");
    let o = satfarey(&["generate", "--Q", "7", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("file"));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_satfarey"))
        .args(["tree", "--Q-max", "7", "--out", "sub/tree.csv"])
        .env("SATFAREY_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("sub/tree.csv")).unwrap();
    assert!(text.starts_with("num,den,birth,lp_num,lp_den,rp_num,rp_den\n1,2,4,0,1,1,1\n1,3,5,0,1,1,2\n"));
    assert!(text.contains("\n2,3,7,1,2,1,1\n"));
}

fn run_to(dir: &Path, name: &str, threads: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--parallelism", threads, "--out", &p]);
    let o = satfarey(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(&path).unwrap()
}

#[test]
fn parallelism_never_changes_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["dist", "--Q", "200,400,800", "--betas", "1/3,1/2,1"],
        &["gaps", "--Q", "300", "--lambda", "0:0.3:0.05", "--theory"],
        &["hcount", "--Q", "400", "--r", "1,2,3", "--eta", "10"],
        &["monoid", "--Q", "300", "--betas", "1/2,1", "--format", "json"],
        &["theory", "--eta", "6"],
        &["verify", "--Q-max", "80", "--extended", "--format", "json"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let a = run_to(dir.path(), &format!("{i}a"), "1", args);
        let b = run_to(dir.path(), &format!("{i}b"), "3", args);
        let c = run_to(dir.path(), &format!("{i}c"), "3", args);
        assert_eq!(a, b, "{args:?}");
        assert_eq!(b, c, "{args:?}");
    }
}

#[test]
fn gaps_curve_shape() {
    let o = satfarey(&["gaps", "--Q", "500", "--lambda", "0:4:0.05"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,G_empirical,G_theory,density_empirical,density_theory"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 81);
    // nothing below the least normalized gap N(Q)/Q², about A
    let first = rows.iter().find(|r| r.1 > 0.0).unwrap().0;
    assert!(first > 0.05 && first <= 0.1, "{first}");
    assert!(rows.windows(2).all(|w| w[0].1 <= w[1].1));
    assert!(rows.last().unwrap().1 > 0.95);
}

#[test]
fn theory_and_hcount_tables() {
    let o = satfarey(&["theory", "--eta", "4.5", "--r", "1"]);
    assert_eq!(stdout(&o), "r,eta,c_r\n1,4.5,0.0128937966596\n");
    let o = satfarey(&["hcount", "--Q", "1000", "--r", "2", "--eta", "4"]);
    assert_eq!(stdout(&o), "Q,r,eta,count,c_r_theory,ratio\n1000,2,4,0,0,1\n");
}

#[test]
fn monoid_listing() {
    let o = satfarey(&["monoid", "--Q", "4"]);
    assert_eq!(stdout(&o), "a,b,c,d,trace\n2,1,1,1,3\n3,1,2,1,4\n3,2,1,1,4\n");
}
