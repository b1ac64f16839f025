use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn palette(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_palette"))
        .args(args)
        .env_remove("PALETTE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn list_prints_constructions() {
    let o = palette(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("name,params,algorithms,summary"));
    for name in ["nf-path-killer", "star-chain", "yao", "nf-tree"] {
        assert!(text.contains(name), "{name} missing from list");
    }
}

#[test]
fn run_reports_ratio_row() {
    let o = palette(&["run", "--alg", "nf", "--adv", "nf-path-killer", "--m", "1000", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("construction,algorithm,k,trials,colored,stderr,opt,ratio,bound,margin")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[1], "nf");
    assert_eq!(row[4], "1001");
    assert_eq!(row[6], "2001");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str, seed: &str| -> Vec<String> {
        ["--seed", seed, "--out", out, "run", "--alg", "rp", "--p", "0.7236", "--adv", "rp-mod3", "--m", "40", "--trials", "200"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        let argv = args(path.to_str().unwrap(), seed);
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_eq!(palette(&argv).status.code(), Some(0));
    }
    let env_out = dir.path().join("env.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_palette"))
        .args(["--out", env_out.to_str().unwrap(), "run", "--alg", "rp", "--p", "0.7236"])
        .args(["--adv", "rp-mod3", "--m", "40", "--trials", "200"])
        .env("PALETTE_SEED", "5")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let a = fs::read(a).unwrap();
    assert_eq!(a, fs::read(b).unwrap());
    assert_eq!(a, fs::read(env_out).unwrap());
    assert_ne!(a, fs::read(c).unwrap());
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["run", "--alg", "ff"],
        vec!["run", "--alg", "rp", "--p", "0.3", "--adv", "rp-mod3", "--m", "10"],
        vec!["run", "--alg", "ff", "--adv", "no-such-thing"],
        vec!["exhaustive", "--class", "tree", "--max-edges", "40"],
        vec!["opt", "/definitely/not/here.txt"],
    ] {
        let o = palette(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"), "{args:?}");
    }
}

#[test]
fn verify_and_exhaustive_pass() {
    let o = palette(&["verify", "--strategy", "fair-tree", "--alg", "nf", "--adv", "nf-tree", "--N", "3", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("instance,passed,min_margin,violations"));
    let o = palette(&["exhaustive", "--class", "path", "--max-edges", "6", "--k", "2", "--alg", "ff"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn opt_reads_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    // a star with four leaves keeps two of its edges at k = 2
    let input = write(dir.path(), "star.txt", "# star\n0 1\n0 2\n0 3\n0 4\n");
    let o = palette(&["opt", &input, "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("opt = 2"));
}

#[test]
fn nf_order_reproduces_coloring() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "colored.txt", "0 1 1\n0 2 2\n1 3 2\n2 4 1\n");
    let o = palette(&["nf-order", &input, "--k", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let order = stdout(&o);
    assert_eq!(order.lines().count(), 4);

    let order_path = write(dir.path(), "order.txt", &order);
    let trace = dir.path().join("trace.csv");
    let o = palette(&[
        "run", "--alg", "nf", "--adv", "edge-list", "--input", &order_path, "--trials", "1",
        "--trace", trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let wanted = [((0, 1), 1), ((0, 2), 2), ((1, 3), 2), ((2, 4), 1)];
    let trace = fs::read_to_string(trace).unwrap();
    let got: Vec<((usize, usize), usize)> = trace
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f[3], "C", "edge rejected: {l}");
            let (u, v): (usize, usize) = (f[1].parse().unwrap(), f[2].parse().unwrap());
            ((u.min(v), u.max(v)), f[4].parse().unwrap())
        })
        .collect();
    // equal up to swapping the two colors
    let same = got.iter().all(|(e, c)| wanted.contains(&(*e, *c)));
    let swapped = got.iter().all(|(e, c)| wanted.contains(&(*e, 3 - *c)));
    assert!(same || swapped, "{got:?}");
}

#[test]
fn nf_order_refuses_unbalanced_usage() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.txt", "0 1 1\n2 3 1\n4 5 1\n");
    let o = palette(&["nf-order", &input, "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
}
