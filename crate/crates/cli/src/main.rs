use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use got_core::benamou::{
    energy, geodesic_triple, reduced_constraint_check, tail_pde_check, transport_residual,
    GeodesicMode, Location,
};
use got_core::io::{parse_distribution, parse_graph, parse_triple, triple_to_json};
use got_core::worked::{run_example, ExampleName, ExampleOptions};
use got_core::{
    DirectedGraph, Error, IncidenceMatrix, MethodConfig, MethodRegistry, RootedTree, TimeGrid,
    Triple, VertexDistribution,
};

const STRICT_THRESHOLD: f64 = 1e-8;
const ANALYTIC_THRESHOLD: f64 = 1e-3;

#[derive(Parser)]
#[command(name = "got", version, about = "Wasserstein-1 distances and geodesics on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute W1 between two distributions.
    Distance {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// tree, beckmann, kantorovich, benamou or auto
        #[arg(long, default_value = "auto")]
        method: String,
        /// Energy exponent for the benamou method.
        #[arg(long = "q", default_value_t = 2.0)]
        q: f64,
    },
    /// Sample a constant-speed geodesic and write it as CSV.
    Geodesic {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// convex or beckmann-flow
        #[arg(long, default_value = "convex")]
        mode: String,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the (f, v, g) triple as JSON, for `verify`.
        #[arg(long)]
        triple_out: Option<PathBuf>,
    },
    /// Check a triple against the transport equation.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        triple: PathBuf,
        #[arg(long = "q", default_value_t = 2.0)]
        q: f64,
        /// Relax the threshold to 1e-3 for triples sampled from closed forms.
        #[arg(long)]
        analytic: bool,
    },
    /// Run one of the built-in worked examples.
    Examples {
        /// binomial, poisson, star or square
        name: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Largest vertex kept in the Poisson example.
        #[arg(long, default_value_t = 30)]
        truncation: usize,
    },
}

enum Failure {
    Validation(String),
    Solver(String),
    Verification,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Solver(_) => 2,
            Failure::Verification => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_solver_failure() {
            Failure::Solver(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Distance { graph, from, to, method, q } => distance(&graph, &from, &to, &method, q),
        Command::Geodesic {
            graph,
            from,
            to,
            steps,
            mode,
            out,
            triple_out,
        } => geodesic(&graph, &from, &to, steps, &mode, out.as_deref(), triple_out.as_deref()),
        Command::Verify { graph, triple, q, analytic } => verify(&graph, &triple, q, analytic),
        Command::Examples { name, steps, truncation } => examples(&name, steps, truncation),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Validation(msg) => eprintln!("error: {msg}"),
                Failure::Solver(msg) => eprintln!("solver failure: {msg}"),
                Failure::Verification => {}
            }
            ExitCode::from(failure.exit_code())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<DirectedGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn load_distribution(path: &Path, graph: &DirectedGraph) -> Result<VertexDistribution, Failure> {
    parse_distribution(&read(path)?, graph).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

/// Twelve decimals with trailing zeros removed, so `0.7999999999999998`
/// prints as `0.8`.
fn number(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_owned() } else { s.to_owned() }
}

fn check_q(q: f64) -> Outcome {
    if q.is_finite() && q >= 1.0 {
        Ok(())
    } else {
        Err(Failure::Validation(format!("--q must be at least 1, got {q}")))
    }
}

fn check_steps(steps: usize) -> Outcome {
    if steps >= 1 {
        Ok(())
    } else {
        Err(Failure::Validation("--steps must be at least 1".into()))
    }
}

fn distance(graph_path: &Path, from: &Path, to: &Path, method: &str, q: f64) -> Outcome {
    check_q(q)?;
    let graph = load_graph(graph_path)?;
    let f0 = load_distribution(from, &graph)?;
    let f1 = load_distribution(to, &graph)?;
    let solver = MethodRegistry::with_builtin().create(method, &MethodConfig { q })?;
    let report = solver.distance(&graph, &f0, &f1)?;

    let mut out = io::stdout().lock();
    if report.method == report.resolved {
        writeln!(out, "method: {}", report.method)?;
    } else {
        writeln!(out, "method: {} ({})", report.method, report.resolved)?;
    }
    writeln!(out, "distance: {}", number(report.value))?;
    if let Some(pair) = report.pair {
        writeln!(out, "q: {}", number(pair.q))?;
        writeln!(out, "speed |v|: {}", number(pair.speed))?;
        writeln!(out, "flow sum |J_k|: {}", number(pair.flow_l1))?;
    }
    Ok(())
}

fn write_file(path: &Path, contents: &[u8]) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display())))
}

fn geodesic(
    graph_path: &Path,
    from: &Path,
    to: &Path,
    steps: usize,
    mode: &str,
    out: Option<&Path>,
    triple_out: Option<&Path>,
) -> Outcome {
    check_steps(steps)?;
    let mode: GeodesicMode = mode.parse()?;
    let graph = load_graph(graph_path)?;
    let f0 = load_distribution(from, &graph)?;
    let f1 = load_distribution(to, &graph)?;
    let grid = TimeGrid::uniform(steps)?;
    let triple = geodesic_triple(&graph, &f0, &f1, &grid, mode)?;

    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Failure::Validation(e.to_string());
    writer.write_record(["t", "vertex", "mass"]).map_err(csv_err)?;
    let path = triple.path();
    for (i, sample) in path.samples().iter().enumerate() {
        let t = grid.knot(i).to_string();
        for (x, m) in sample.mass().iter().enumerate() {
            writer
                .write_record([t.as_str(), graph.label(x), &m.to_string()])
                .map_err(csv_err)?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| Failure::Validation(e.to_string()))?;
    match out {
        Some(p) => write_file(p, &bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    if let Some(p) = triple_out {
        write_file(p, triple_to_json(&triple)?.as_bytes())?;
    }
    Ok(())
}

fn describe(location: Location, graph: &DirectedGraph) -> String {
    match location {
        Location::Vertex(x) => format!("vertex {:?}", graph.label(x)),
        Location::Edge(k) => graph.describe_edge(k),
    }
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn verify(graph_path: &Path, triple_path: &Path, q: f64, analytic: bool) -> Outcome {
    check_q(q)?;
    let graph = load_graph(graph_path)?;
    let triple: Triple = parse_triple(&read(triple_path)?, &graph)
        .map_err(|e| Failure::Validation(format!("{}: {e}", triple_path.display())))?;
    let omega = IncidenceMatrix::from_graph(&graph);
    let threshold = if analytic { ANALYTIC_THRESHOLD } else { STRICT_THRESHOLD };
    let grid = triple.path().grid();

    let transport = transport_residual(&triple, &omega)?;
    let tail = match RootedTree::from_graph(&graph) {
        Ok(tree) => Some(tail_pde_check(&triple, &tree)?),
        Err(_) => None,
    };
    let report = energy(triple.pair(), q)?;
    let gap = reduced_constraint_check(triple.pair(), &omega, triple.path().start(), triple.path().end())?;

    let mut out = io::stdout().lock();
    let at = |interval: usize, location: Location| {
        format!(
            "interval {interval} [t = {}, {}), {}",
            grid.knot(interval),
            grid.knot(interval + 1),
            describe(location, &graph)
        )
    };
    writeln!(
        out,
        "transport residual: {} at {}",
        sci(transport.max_abs_residual),
        at(transport.worst_interval, transport.worst)
    )?;
    match &tail {
        Some(t) => writeln!(
            out,
            "tail residual: {} at {}",
            sci(t.max_abs_residual),
            at(t.worst_interval, t.worst)
        )?,
        None => writeln!(out, "tail residual: n/a (not an outward-rooted tree)")?,
    }
    writeln!(out, "I_q (q = {}): {}", number(q), number(report.value))?;
    writeln!(out, "reduced-constraint gap: {}", sci(gap))?;
    writeln!(out, "threshold: {}", sci(threshold))?;

    let mut failures = Vec::new();
    if transport.max_abs_residual > threshold {
        failures.push(format!(
            "transport equation violated at {}",
            at(transport.worst_interval, transport.worst)
        ));
    }
    if let Some(t) = tail.filter(|t| t.max_abs_residual > threshold) {
        failures.push(format!("tail equation violated at {}", at(t.worst_interval, t.worst)));
    }
    if gap > threshold {
        failures.push("pair does not carry f(0) to f(1)".to_owned());
    }
    if failures.is_empty() {
        writeln!(out, "PASS")?;
        Ok(())
    } else {
        writeln!(out, "FAIL: {}", failures.join("; "))?;
        Err(Failure::Verification)
    }
}

fn examples(name: &str, steps: usize, truncation: usize) -> Outcome {
    check_steps(steps)?;
    let name: ExampleName = name.parse()?;
    let r = run_example(name, ExampleOptions { steps, truncation })?;
    let mut out = io::stdout().lock();
    writeln!(out, "example: {}", r.name)?;
    writeln!(out, "steps: {}", r.steps)?;
    writeln!(out, "closed form W1: {}", number(r.closed_form))?;
    writeln!(out, "analytic I_2: {}", number(r.analytic_energy))?;
    writeln!(out, "kantorovich W1: {}", number(r.kantorovich))?;
    writeln!(out, "beckmann W1: {}", number(r.beckmann))?;
    if let Some(t) = r.tree {
        writeln!(out, "tree W1: {}", number(t))?;
    }
    writeln!(out, "max gap: {}", sci(r.max_gap))?;
    writeln!(out, "gap to closed form: {}", sci(r.closed_form_gap))?;
    writeln!(out, "transport residual: {}", sci(r.transport_residual))?;
    if let Some(t) = r.tail_residual {
        writeln!(out, "tail residual: {}", sci(t))?;
    }
    if let Some(c) = r.convexity_deviation {
        writeln!(out, "convexity deviation: {}", sci(c))?;
    }
    if let Some(m) = r.truncated_mass {
        writeln!(out, "truncated mass: {}", sci(m))?;
    }
    for note in &r.notes {
        writeln!(out, "note: {note}")?;
    }
    Ok(())
}
