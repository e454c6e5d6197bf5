use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const WORKED_EXAMPLE: &str = "4 4\n0 1\n1 2\n2 3\n3 2\n";

fn shortcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shortcut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_path_header() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.txt");
    let o = shortcut(&["generate", "path", "--n", "4", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "4 3");
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("4 3"));
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for p in [&a, &b] {
        let o = shortcut(&["generate", "random", "--n", "8", "--m", "12", "--seed", "7", "-o", s(p)]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn generate_rejects_zero_width() {
    let o = shortcut(&["generate", "layered", "--n", "10", "--width", "0"]);
    assert_ne!(code(&o), 0);
    assert!(!o.stderr.is_empty());
}

#[test]
fn shortcut_seq_count_bound() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("p.txt");
    assert_eq!(code(&shortcut(&["generate", "path", "--n", "4096", "-o", s(&g)])), 0);
    let out = dir.path().join("s.txt");
    let o = shortcut(&["shortcut", s(&g), "--algo", "seq", "--runs", "24", "--seed", "1", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    let metrics = stdout(&o);
    let raw: u64 = metrics
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("shortcuts="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(raw <= 2 * 24 * 4096 * 13, "{metrics}");
    let header = fs::read_to_string(&out).unwrap();
    let declared: u64 = header.lines().next().unwrap().split(' ').nth(1).unwrap().parse().unwrap();
    assert!(declared <= raw);
}

#[test]
fn shortcut_par_zero_work_exits_2() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", WORKED_EXAMPLE);
    let o = shortcut(&["shortcut", s(&g), "--algo", "par", "--max-work", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn shortcut_empty_graph() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "0 0\n");
    let out = dir.path().join("s.txt");
    for algo in ["seq", "par"] {
        let o = shortcut(&["shortcut", s(&g), "--algo", algo, "-o", s(&out)]);
        assert_eq!(code(&o), 0);
        assert_eq!(fs::read_to_string(&out).unwrap(), "0 0\n");
    }
}

#[test]
fn shortcuts_verify_and_metrics_file() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    assert_eq!(code(&shortcut(&["generate", "random", "--n", "60", "--seed", "3", "-o", s(&g)])), 0);
    for algo in ["seq", "par"] {
        let out = dir.path().join(format!("{algo}.txt"));
        let metrics = dir.path().join(format!("{algo}.metrics"));
        let o = shortcut(&["shortcut", s(&g), "--algo", algo, "-o", s(&out), "--metrics", s(&metrics)]);
        assert_eq!(code(&o), 0);
        assert!(fs::read_to_string(&metrics).unwrap().starts_with("shortcuts="));
        let v = shortcut(&["verify", s(&g), "--shortcuts", s(&out)]);
        assert_eq!(code(&v), 0, "{}", stdout(&v));
    }
    let bad = write(&dir, "bad.txt", "60 1\n59 0\n");
    let path_graph = dir.path().join("path.txt");
    assert_eq!(code(&shortcut(&["generate", "path", "--n", "60", "-o", s(&path_graph)])), 0);
    let v = shortcut(&["verify", s(&path_graph), "--shortcuts", s(&bad)]);
    assert_eq!(code(&v), 2);
    assert!(stdout(&v).contains("violation"));
}

#[test]
fn reach_worked_example() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", WORKED_EXAMPLE);
    for algo in ["seq", "par"] {
        let o = shortcut(&["reach", s(&g), "--source", "0", "--algo", algo]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), "0\n1\n2\n3\n");
        assert!(String::from_utf8_lossy(&o.stderr).contains("retries"));
    }
    let o = shortcut(&["reach", s(&g), "--source", "4"]);
    assert_ne!(code(&o), 0);
}

#[test]
fn reach_from_sink_is_just_the_source() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "5 3\n0 1\n1 2\n3 4\n");
    let o = shortcut(&["reach", s(&g), "--source", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn tree_worked_example() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", WORKED_EXAMPLE);
    for algo in ["seq", "par"] {
        let out = dir.path().join(format!("t-{algo}.txt"));
        let o = shortcut(&["tree", s(&g), "--source", "0", "--algo", algo, "-o", s(&out)]);
        assert_eq!(code(&o), 0);
        assert_eq!(fs::read_to_string(&out).unwrap(), "4 3\n0 1\n1 2\n2 3\n");
        let v = shortcut(&["verify", s(&g), "--tree", s(&out), "--source", "0"]);
        assert_eq!(code(&v), 0);
    }
}

#[test]
fn tree_covers_only_reach_set() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "6 4\n1 0\n2 3\n3 4\n4 5\n");
    let o = shortcut(&["tree", s(&g), "--source", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "6 3\n2 3\n3 4\n4 5\n");
}

#[test]
fn tree_rejects_corrupt_input() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "4 2\n0 x\n");
    let o = shortcut(&["tree", s(&g), "--source", "0"]);
    assert_eq!(code(&o), 1);
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&shortcut(&["tree", s(&missing), "--source", "0"])), 1);
}

fn strip_elapsed(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f[9] = "";
            f.join(",")
        })
        .collect()
}

#[test]
fn bench_rows_and_determinism() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = shortcut(&[
            "bench", "--sizes", "1024,2048,4096,8192,16384", "--kinds", "path", "--algos", "seq",
            "--seeds", "1,2", "--csv", s(p),
        ]);
        assert_eq!(code(&o), 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "algo,kind,n,m,seed,shortcuts,arcsVisited,maxSearchDist,measuredDiameter,elapsedMillis,retries,error"
    );
    assert_eq!(lines.len(), 1 + 10);
    for row in &lines[1..] {
        let f: Vec<&str> = row.split(',').collect();
        let n: f64 = f[2].parse().unwrap();
        let d: f64 = f[8].parse().unwrap();
        assert!(d <= 4.0 * n.powf(2.0 / 3.0) * n.log2().powf(4.0 / 3.0));
        assert_eq!(f[11], "");
    }
    assert_eq!(strip_elapsed(&text), strip_elapsed(&fs::read_to_string(&b).unwrap()));
}

#[test]
fn bench_empty_sizes_is_header_only() {
    let o = shortcut(&["bench"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "algo,kind,n,m,seed,shortcuts,arcsVisited,maxSearchDist,measuredDiameter,elapsedMillis,retries,error\n"
    );
}

#[test]
fn bench_records_failed_cells() {
    let o = shortcut(&["bench", "--sizes", "8", "--kinds", "layered,path", "--width", "0"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("seq,layered,8,,") && !rows[0].ends_with(','));
    assert!(rows[1].ends_with(','));

    let all_bad = shortcut(&["bench", "--sizes", "8", "--kinds", "layered", "--width", "0"]);
    assert_eq!(code(&all_bad), 2);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(code(&shortcut(&["frobnicate"])), 1);
    assert_eq!(code(&shortcut(&["--help"])), 0);
}
