use std::path::Path;
use std::process::{Command, Output};

use corrgraph::edgelist::{format_edge_list, parse_edge_list};
use corrgraph_core::density::densest_bruteforce;
use corrgraph_core::graph::Graph;
use corrgraph_core::rng::DEFAULT_SEED;

fn corrgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corrgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = corrgraph(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5u32 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, edges).unwrap()
}

fn write_graph(dir: &Path, name: &str, g: &Graph) -> String {
    let path = dir.join(name);
    std::fs::write(&path, format_edge_list(g)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn densest_methods() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_graph(dir.path(), "petersen.txt", &petersen());
    let oracle = densest_bruteforce(&petersen()).unwrap();
    assert_eq!((oracle.density.num * 2, oracle.density.den * 2), (30, 20));
    for method in ["exact", "brute"] {
        let out = stdout(&["densest", "--input", &file, "--method", method]);
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), "15 10 10 1");
        assert_eq!(lines.next().unwrap(), "0 1 2 3 4 5 6 7 8 9");
    }
    let peel = stdout(&["densest", "--input", &file, "--method", "peel"]);
    assert!(peel.starts_with("15 10 10 "), "{peel}");
}

#[test]
fn sample_writes_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = dir.path().join("g2.txt");
    let pi = dir.path().join("pi.txt");
    let out = stdout(&[
        "sample", "--n", "12", "--p", "1", "--s", "1", "--g2", g2.to_str().unwrap(), "--pi",
        pi.to_str().unwrap(),
    ]);
    assert_eq!(parse_edge_list(&out).unwrap(), Graph::complete(12));
    let second = std::fs::read_to_string(&g2).unwrap();
    assert_eq!(parse_edge_list(&second).unwrap(), Graph::complete(12));
    let images: Vec<u32> = std::fs::read_to_string(&pi)
        .unwrap()
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    let mut sorted = images.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, (0..12).collect::<Vec<_>>());

    let a = stdout(&["sample", "--n", "30", "--q", "0.2", "--seed", "4"]);
    let b = stdout(&["sample", "--n", "30", "--q", "0.2", "--seed", "4"]);
    assert_eq!(a, b);
    assert_eq!(parse_edge_list(&a).unwrap().n(), 30);
}

#[test]
fn default_seed_is_fixed() {
    let args = ["rho", "--lambda", "1.5", "--n", "200", "--trials", "3"];
    let a = stdout(&args);
    let seed = DEFAULT_SEED.to_string();
    let mut with_seed = args.to_vec();
    with_seed.extend(["--seed", seed.as_str()]);
    assert_eq!(a, stdout(&with_seed));
    let fields: Vec<&str> = a.trim().split(' ').collect();
    assert_eq!(fields.len(), 2);
    assert!(fields.iter().all(|f| f.split('.').nth(1).unwrap().len() == 6));
}

#[test]
fn small_exact_commands() {
    assert_eq!(stdout(&["orbits", "--n", "4", "--sigma", "(0 1 2 3)"]), "4 2\n");
    assert_eq!(stdout(&["orbits", "--n", "3", "--sigma", "()"]), "1 1 1\n");
    let tv: f64 = stdout(&["tv", "--n", "2", "--p", "1", "--s", "0.4"]).trim().parse().unwrap();
    assert!(tv.abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "g.txt", &Graph::path(3));
    let ll: f64 = stdout(&["likelihood", "--g", &g, "--g2", &g, "--p", "0.5", "--s", "0.5"])
        .trim()
        .parse()
        .unwrap();
    assert!(ll.is_finite() && ll > 0.0);

    let bound = stdout(&["h0-bound", "--n", "100", "--p", "0.1", "--s", "0.5", "--tau", "2"]);
    assert!(bound.starts_with("log_bound "));
    assert!(bound.contains("inapplicable_terms 0"));
}

#[test]
fn admissible_and_moment_terms() {
    let dir = tempfile::tempdir().unwrap();
    let forest = write_graph(dir.path(), "forest.txt", &Graph::path(40));
    let out = stdout(&["admissible", "--input", &forest, "--xi", "1.8", "--delta", "0.2"]);
    assert_eq!(
        out,
        "density_cap 1 densest 39/40\ndegree_cap 1\nno_small_bicyclic 1\ncycle_counts 1\nadmissible 1\n"
    );
    let k5 = write_graph(dir.path(), "k5.txt", &Graph::complete(5));
    let out = stdout(&["admissible", "--input", &k5, "--xi", "1.8", "--delta", "0.2"]);
    assert!(out.contains("density_cap 0 densest 10/5"), "{out}");
    assert!(out.contains("degree_cap 0 vertex"), "{out}");
    assert!(out.ends_with("admissible 0\n"));

    let path = Graph::path(400);
    let file = write_graph(dir.path(), "path.txt", &path);
    let out = stdout(&[
        "moment-terms", "--input", &file, "--p", "0.05", "--xi", "1.8", "--cprime", "0.01",
        "--kmax", "4",
    ]);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "non_tree_sum 0");
    let tree: f64 = lines
        .next()
        .unwrap()
        .strip_prefix("tree_sum ")
        .unwrap()
        .parse()
        .unwrap();
    assert!(tree > 0.0 && tree.is_finite());
}

#[test]
fn detect_csv() {
    let out = stdout(&[
        "detect", "--n", "150", "--alpha", "0.5", "--mode", "h0", "--trials", "3",
        "--lambda-star", "3.6", "--tau", "2.2",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# corrgraph-detect v0.1.0 detect");
    assert_eq!(lines[1], "trial,statistic,tau,decision");
    assert_eq!(lines.len(), 5);
    for (t, line) in lines[2..].iter().enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], t.to_string());
        assert_eq!(f[2], "2.2");
        assert_eq!(f[3], "H0");
    }
}

#[test]
fn experiment_output_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.toml");
    std::fs::write(&config, "kind = \"rho-sweep\"\nn = 300\nlambda = [1.5, 3.0]\ntrials = 6\n")
        .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4", "8"] {
        let csv = dir.path().join(format!("out{threads}.csv"));
        stdout(&[
            "experiment", "--config", config.to_str().unwrap(), "--threads", threads, "--output",
            csv.to_str().unwrap(),
        ]);
        outputs.push(std::fs::read(&csv).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(outputs.pop().unwrap()).unwrap();
    assert!(text.starts_with("# corrgraph-detect v0.1.0 rho-sweep\nlambda,n,trials,mean,stderr\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn usage_errors() {
    let out = corrgraph(&["experiment", "--kind", "tv", "--p", "0.01", "--alpha", "0.5", "--s", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not both"));
    let out = corrgraph(&["rho", "--lambda", "1", "--bogus", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = corrgraph(&["tv", "--n", "5", "--p", "0.5", "--s", "0.5"]);
    assert!(!out.status.success());
    let out = corrgraph(&["densest", "--input", "/nonexistent/file"]);
    assert!(!out.status.success());
}
