use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use got_core::generate::{random_connected_graph, random_distribution};
use got_core::io::{distribution_to_json, graph_to_json, triple_to_json};
use got_core::transport::w1_beckmann;
use got_core::worked::{build_example, ExampleName, ExampleOptions};
use got_core::{DirectedGraph, VertexDistribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn got(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_got"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn write(&self, name: &str, contents: &str) -> String {
        let p = self.dir.path().join(name);
        fs::write(&p, contents).unwrap();
        p.to_str().unwrap().to_owned()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn graph(&self, g: &DirectedGraph) -> String {
        self.write("graph.json", &graph_to_json(g))
    }

    fn dist(&self, name: &str, f: &VertexDistribution, g: &DirectedGraph) -> String {
        self.write(name, &distribution_to_json(f, g).unwrap())
    }
}

const SQUARE: &str = r#"{"vertices":["0","1","2","3"],
  "edges":[{"tail":"0","head":"1"},{"tail":"1","head":"2"},{"tail":"3","head":"2"},{"tail":"0","head":"3"}]}"#;

fn square_files(ws: &Workspace) -> (String, String, String) {
    // product measures with (p, q) = (0.5, 0.5) and (0.9, 0.1)
    let g = ws.write("square.json", SQUARE);
    let a = ws.write("a.json", r#"{"values":{"0":0.25,"1":0.25,"2":0.25,"3":0.25}}"#);
    let b = ws.write("b.json", r#"{"values":{"0":0.09,"1":0.01,"2":0.09,"3":0.81}}"#);
    (g, a, b)
}

fn binomial(n: usize, p: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let choose: f64 = (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product();
            choose * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
        })
        .collect()
}

#[test]
fn distance_on_the_square() {
    let ws = Workspace::new();
    let (g, a, b) = square_files(&ws);
    for method in ["kantorovich", "beckmann", "benamou", "auto"] {
        let o = got(&["distance", "--graph", &g, "--from", &a, "--to", &b, "--method", method]);
        assert!(o.status.success(), "{method}: {}", stderr(&o));
        assert!(stdout(&o).contains("distance: 0.8\n"), "{method}: {}", stdout(&o));
    }
    let o = got(&["distance", "--graph", &g, "--from", &a, "--to", &b, "--method", "benamou", "--q", "3"]);
    let text = stdout(&o);
    assert!(text.contains("q: 3\n") && text.contains("speed |v|: 0.8\n"), "{text}");
    assert!(text.contains("flow sum |J_k|: 0.8\n"), "{text}");
}

#[test]
fn distance_between_binomial_laws_on_a_path() {
    let ws = Workspace::new();
    let g = DirectedGraph::path(6).unwrap();
    let gp = ws.graph(&g);
    let a = ws.dist("a.json", &VertexDistribution::new(binomial(5, 0.8)).unwrap(), &g);
    let b = ws.dist("b.json", &VertexDistribution::new(binomial(5, 0.3)).unwrap(), &g);
    let o = got(&["distance", "--graph", &gp, "--from", &a, "--to", &b, "--method", "tree"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "method: tree\ndistance: 2.5\n");
    let o = got(&["distance", "--graph", &gp, "--from", &a, "--to", &b]);
    assert!(stdout(&o).starts_with("method: auto (tree)\n"), "{}", stdout(&o));
}

#[test]
fn tree_method_on_a_cycle_names_the_edge() {
    let ws = Workspace::new();
    let (g, a, b) = square_files(&ws);
    let o = got(&["distance", "--graph", &g, "--from", &a, "--to", &b, "--method", "tree"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("edge 2 (3 -> 2) closes a cycle"), "{err}");
}

#[test]
fn validation_errors_exit_one() {
    let ws = Workspace::new();
    let (g, a, _) = square_files(&ws);
    let bad_json = ws.write("bad.json", "{ not json");
    let heavy = ws.write("heavy.json", r#"{"values":{"0":0.5,"1":0.5,"2":0.5,"3":0}}"#);
    let split = ws.write(
        "split.json",
        r#"{"vertices":["0","1","2","3"],"edges":[{"tail":"0","head":"1"},{"tail":"2","head":"3"}]}"#,
    );
    let cases: Vec<Vec<&str>> = vec![
        vec!["distance", "--graph", &bad_json, "--from", &a, "--to", &a],
        vec!["distance", "--graph", &g, "--from", &heavy, "--to", &a],
        vec!["distance", "--graph", &split, "--from", &a, "--to", &a],
        vec!["distance", "--graph", &g, "--from", &a, "--to", &a, "--method", "sinkhorn"],
        vec!["distance", "--graph", &g, "--from", &a, "--to", &a, "--q", "0.5"],
        vec!["distance", "--graph", "/nonexistent/g.json", "--from", &a, "--to", &a],
        vec!["examples", "cube"],
        vec!["examples", "poisson", "--truncation", "3"],
        vec!["geodesic", "--graph", &g, "--from", &a, "--to", &a, "--mode", "straight"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let o = got(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

fn read_csv(path: &Path) -> Vec<(f64, String, f64)> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["t", "vertex", "mass"]);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].to_owned(), r[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn geodesic_between_point_masses() {
    let ws = Workspace::new();
    let g = DirectedGraph::path(3).unwrap();
    let gp = ws.graph(&g);
    let a = ws.dist("a.json", &VertexDistribution::point_mass(3, 0), &g);
    let b = ws.dist("b.json", &VertexDistribution::point_mass(3, 2), &g);
    let out = ws.path("geo.csv");
    let o = got(&[
        "geodesic", "--graph", &gp, "--from", &a, "--to", &b, "--steps", "2", "--mode", "convex", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 9);
    let middle: Vec<f64> = rows[3..6].iter().map(|r| r.2).collect();
    assert_eq!(middle, vec![0.5, 0.0, 0.5]);
    assert_eq!(rows[3].0, 0.5);
    assert_eq!((rows[8].1.as_str(), rows[8].2), ("2", 1.0));
}

#[test]
fn geodesic_with_equal_endpoints_repeats_them() {
    let ws = Workspace::new();
    let (g, a, _) = square_files(&ws);
    for mode in ["convex", "beckmann-flow"] {
        let out = ws.path("geo.csv");
        let o = got(&[
            "geodesic", "--graph", &g, "--from", &a, "--to", &a, "--steps", "5", "--mode", mode, "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let rows = read_csv(&out);
        assert_eq!(rows.len(), 24);
        assert!(rows.iter().all(|r| r.2 == 0.25));
    }
}

#[test]
fn geodesic_to_stdout() {
    let ws = Workspace::new();
    let (g, a, b) = square_files(&ws);
    let o = got(&["geodesic", "--graph", &g, "--from", &a, "--to", &b, "--steps", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("t,vertex,mass\n0,0,0.25\n"), "{text}");
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn unwritable_output_exits_one() {
    let ws = Workspace::new();
    let (g, a, b) = square_files(&ws);
    let o = got(&["geodesic", "--graph", &g, "--from", &a, "--to", &b, "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn random_geodesics_round_trip_through_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..4 {
        let ws = Workspace::new();
        let g = random_connected_graph(&mut rng, 7, 3).unwrap();
        let f0 = random_distribution(&mut rng, 7, 0.3);
        let f1 = random_distribution(&mut rng, 7, 0.3);
        let gp = ws.graph(&g);
        let a = ws.dist("a.json", &f0, &g);
        let b = ws.dist("b.json", &f1, &g);
        let w = w1_beckmann(&g, &f0, &f1).unwrap().0;
        let steps = 10;
        for mode in ["convex", "beckmann-flow"] {
            let out = ws.path("geo.csv");
            let triple = ws.path("triple.json");
            let o = got(&[
                "geodesic", "--graph", &gp, "--from", &a, "--to", &b, "--steps", "10", "--mode", mode,
                "--out", out.to_str().unwrap(), "--triple-out", triple.to_str().unwrap(),
            ]);
            assert!(o.status.success(), "{}", stderr(&o));

            let rows = read_csv(&out);
            assert_eq!(rows.len(), 11 * 7);
            let knots: Vec<VertexDistribution> = rows
                .chunks(7)
                .map(|c| VertexDistribution::new(c.iter().map(|r| r.2).collect::<Vec<_>>()).unwrap())
                .collect();
            assert_eq!(knots[0], f0);
            assert_eq!(knots[steps], f1);
            for s in 0..=steps {
                for t in s + 1..=steps {
                    let d = w1_beckmann(&g, &knots[s], &knots[t]).unwrap().0;
                    let expected = (t - s) as f64 / steps as f64 * w;
                    assert!((d - expected).abs() < 1e-7, "trial {trial} {mode}: {d} vs {expected}");
                }
            }

            let o = got(&["verify", "--graph", &gp, "--triple", triple.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
            assert!(stdout(&o).ends_with("PASS\n"));
        }
    }
}

#[test]
fn corrupted_velocity_fails_verification() {
    let ws = Workspace::new();
    let (g, a, b) = square_files(&ws);
    let triple = ws.path("triple.json");
    let o = got(&[
        "geodesic", "--graph", &g, "--from", &a, "--to", &b, "--steps", "4", "--triple-out",
        triple.to_str().unwrap(), "--out", ws.path("geo.csv").to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let mut value: serde_json::Value = serde_json::from_str(&fs::read_to_string(&triple).unwrap()).unwrap();
    // corrupt the edge carrying the most mass on interval 2
    let weights: Vec<f64> = value["g"][2].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let k = (0..weights.len()).max_by(|&i, &j| weights[i].total_cmp(&weights[j])).unwrap();
    let v = &mut value["v"][2][k];
    *v = serde_json::json!(v.as_f64().unwrap() + 0.5);
    fs::write(&triple, value.to_string()).unwrap();

    let o = got(&["verify", "--graph", &g, "--triple", triple.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains("FAIL: transport equation violated at interval 2"), "{text}");
    assert!(text.contains("vertex"), "{text}");
}

#[test]
fn malformed_triple_exits_one() {
    let ws = Workspace::new();
    let (g, _, _) = square_files(&ws);
    let t = ws.write("t.json", r#"{"steps":2,"f":[[1,0,0,0]],"v":[],"g":[]}"#);
    let o = got(&["verify", "--graph", &g, "--triple", &t]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn analytic_binomial_triple_needs_the_relaxed_threshold() {
    let ws = Workspace::new();
    let ex = build_example(ExampleName::Binomial, ExampleOptions { steps: 200, truncation: 30 }).unwrap();
    let gp = ws.graph(&ex.graph);
    let t = ws.write("t.json", &triple_to_json(&ex.triple().unwrap()).unwrap());

    let o = got(&["verify", "--graph", &gp, "--triple", &t, "--analytic"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("I_q (q = 2): 2.5\n"));
    let o = got(&["verify", "--graph", &gp, "--triple", &t]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("{key} missing in {text}"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn examples_agree_with_closed_forms() {
    for (name, expected) in [("binomial", 2.5), ("poisson", 2.0), ("star", 2.0), ("square", 0.8)] {
        let o = got(&["examples", name, "--steps", "1000"]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let text = stdout(&o);
        for key in ["analytic I_2:", "kantorovich W1:", "beckmann W1:"] {
            assert!((field(&text, key) - expected).abs() < 1e-6, "{name} {key}: {text}");
        }
        assert!(field(&text, "max gap:") < 1e-6);
    }
    let star = stdout(&got(&["examples", "star"]));
    assert!(field(&star, "convexity deviation:") <= 1e-9);
}

#[test]
fn reports_are_deterministic() {
    let ws = Workspace::new();
    let (g, a, b) = square_files(&ws);
    let args = ["distance", "--graph", &g, "--from", &a, "--to", &b, "--method", "benamou"];
    assert_eq!(got(&args).stdout, got(&args).stdout);
    assert_eq!(got(&["examples", "poisson"]).stdout, got(&["examples", "poisson"]).stdout);
}
