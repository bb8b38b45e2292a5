use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use loosepath::experiments::{
    aggregate, export_csv, export_json, poisson_gof_records, run_experiment, run_trials, write_csv, Backend,
    CsvMeta, ExperimentConfig, Measure, ProbabilitySpec, MIN_GOF_TRIALS,
};
use loosepath::hypergraph::{load_edge_list, sample_explicit, sample_unit_mask, write_edge_list};
use loosepath::paths::{count_paths, exact_lmax, greedy_explicit, greedy_lazy, unit_union_greedy, GreedyTrace};
use loosepath::rng::DEFAULT_SEED;
use loosepath::theory::{
    classify_regime, expected_extension, expected_extension_bounds, expected_path_count, poisson_lambda, solve_log_regime_length,
};
use loosepath::{OrderedHypergraph, RngSeed, UnitEdgeMask};
use serde_json::json;

const UNITS: &str = "Vertices are labelled 1..=n. Path lengths are numbers of edges; \
                     an edge's span is last vertex minus first vertex.";

#[derive(Parser)]
#[command(name = "loosepath", version, about = "Ordered loose paths in random r-uniform hypergraphs", after_help = UNITS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample H^(r)(n, p) and print it as an edge list.
    #[command(after_help = UNITS)]
    Sample(SampleArgs),
    /// Longest ordered loose path, its witness and edge-span histogram.
    #[command(after_help = "Governing results: T1.1-T1.5 (see `predict`). Path length = number of edges.")]
    Lmax(GraphArgs),
    /// Greedy path from vertex 1, explicit or lazily simulated.
    #[command(after_help = "Governing result: T1.1 (greedy lower bound). K = number of edges; \
                            each step reports its span L_i.")]
    Greedy(GreedyArgs),
    /// Number of ordered loose paths with exactly --ell edges.
    #[command(after_help = "Governing result: T1.5 (Poisson limit of this count). Length = number of edges.")]
    Count(CountArgs),
    /// Greedy union of consecutive blocks {j, ..., j+r-1}.
    #[command(after_help = "Governing result: T1.1 upper bound, via E Y <= (n + 1/p)/(r - 2 + 1/p). \
                            Y = number of blocks chosen.")]
    Unit(UnitArgs),
    /// Expected span E X of the shortest edge leaving a vertex, with its bounds.
    #[command(after_help = "Governing result: T1.1 (E X sets the dense lower bound). X is a span in vertices.")]
    Expect(ExpectArgs),
    /// Regime of (n, r, p) and the predicted range of lmax.
    #[command(after_help = "Regime ids: T1.1-dense (p >= 0.01), T1.2-upper, T1.3-middle, T1.2-lower, \
                            T1.4-log, T1.5-sparse(l), below-range. Band endpoints are numbers of edges.")]
    Predict(PredictArgs),
    /// Solve (n/x)^(r-1+1/x) p = 1 for the logarithmic regime.
    #[command(after_help = "Governing result: T1.4. The root is a length in edges up to constant factors.")]
    Ell0(PredictArgs),
    /// Seeded batch of trials with summary and checks (exit 2 on a failed check).
    #[command(after_help = "Measures: lmax_exact, greedy_K, count_paths(l), unit_Y, min_extension[(d)]. \
                            Backends: explicit, lazy, unit. Checks compare with regimes T1.1-T1.5. \
                            Lengths are numbers of edges.")]
    Experiment(ExperimentArgs),
    /// Compare counts of length-l paths with a Poisson law (exit 2 if TV is too large).
    #[command(after_help = "Governing result: T1.5, lambda = c^l/(l(r-1)+1)!. Length = number of edges.")]
    PoissonTest(PoissonArgs),
}

#[derive(Args, Clone)]
struct ProbArgs {
    /// Edge probability.
    #[arg(long, conflicts_with = "p_expr")]
    p: Option<f64>,
    /// Edge probability as an expression in n and c, e.g. "c*n^-2.5" or "10*log(n)/n".
    #[arg(long = "p-expr")]
    p_expr: Option<String>,
    /// Value of c in --p-expr.
    #[arg(long, requires = "p_expr")]
    c: Option<f64>,
}

impl ProbArgs {
    fn spec(&self) -> Result<ProbabilitySpec, String> {
        match (&self.p, &self.p_expr) {
            (Some(p), None) => Ok(ProbabilitySpec::Value(*p)),
            (None, Some(expr)) => Ok(ProbabilitySpec::Expr {
                expr: expr.clone(),
                c: self.c,
            }),
            _ => Err("one of --p or --p-expr is required".into()),
        }
    }

    fn resolve(&self, n: u32) -> Result<f64, String> {
        self.spec()?.resolve(n).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct SampleArgs {
    /// Number of vertices, labelled 1..=n.
    #[arg(long)]
    n: u32,
    /// Uniformity: vertices per edge.
    #[arg(long)]
    r: usize,
    #[command(flatten)]
    prob: ProbArgs,
    /// Master RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the edge list here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file: a header line "n r", then one ascending edge per line.
    #[arg(long = "edges-file", conflicts_with_all = ["n", "r"])]
    edges_file: Option<PathBuf>,
    /// Number of vertices, labelled 1..=n.
    #[arg(long, requires = "r")]
    n: Option<u32>,
    /// Uniformity: vertices per edge.
    #[arg(long, requires = "n")]
    r: Option<usize>,
    #[command(flatten)]
    prob: ProbArgs,
    /// Master RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

impl GraphArgs {
    fn load(&self) -> Result<(OrderedHypergraph, Option<f64>), String> {
        if let Some(path) = &self.edges_file {
            return Ok((load_edge_list(path).map_err(|e| e.to_string())?, None));
        }
        let (Some(n), Some(r)) = (self.n, self.r) else {
            return Err("give --edges-file, or --n, --r and a probability".into());
        };
        let p = self.prob.resolve(n)?;
        let h = sample_explicit(n, r, p, RngSeed::new(self.seed, 0)).map_err(|e| e.to_string())?;
        Ok((h, Some(p)))
    }
}

#[derive(Args)]
struct GreedyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// explicit builds the hypergraph; lazy simulates greedy without it.
    #[arg(long, default_value = "explicit", value_parser = ["explicit", "lazy"])]
    backend: String,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Path length in edges.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    ell: u64,
}

#[derive(Args)]
struct UnitArgs {
    /// Number of vertices, labelled 1..=n.
    #[arg(long)]
    n: u32,
    /// Uniformity: vertices per edge.
    #[arg(long)]
    r: usize,
    #[command(flatten)]
    prob: ProbArgs,
    /// Comma-separated 1-based starts of present blocks, instead of sampling.
    #[arg(long, value_delimiter = ',')]
    positions: Option<Vec<u32>>,
    /// Master RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExpectArgs {
    /// Uniformity: vertices per edge.
    #[arg(long)]
    r: usize,
    #[arg(long)]
    p: f64,
    /// Bound on the omitted tail of the series.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PredictArgs {
    /// Number of vertices, labelled 1..=n.
    #[arg(long)]
    n: u32,
    /// Uniformity: vertices per edge.
    #[arg(long)]
    r: usize,
    #[command(flatten)]
    prob: ProbArgs,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON experiment config; replaces the parameter flags.
    #[arg(long, conflicts_with_all = ["n", "r", "trials", "measure", "p", "p_expr"])]
    config: Option<PathBuf>,
    /// Number of vertices, labelled 1..=n.
    #[arg(long)]
    n: Option<u32>,
    /// Uniformity: vertices per edge.
    #[arg(long)]
    r: Option<usize>,
    #[command(flatten)]
    prob: ProbArgs,
    /// Number of independent trials.
    #[arg(long)]
    trials: Option<usize>,
    /// explicit, lazy or unit.
    #[arg(long, default_value = "explicit")]
    backend: String,
    /// lmax_exact, greedy_K, count_paths(l), unit_Y or min_extension(d).
    #[arg(long)]
    measure: Option<String>,
    /// Master RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker pool width; 1 runs serially.
    #[arg(long)]
    threads: Option<usize>,
    /// Cap on the expected edge count of an explicit sample.
    #[arg(long)]
    budget: Option<f64>,
    /// Record per-trial wall time (outputs are then no longer byte-stable).
    #[arg(long)]
    timing: bool,
    /// Write results here; .json gives the full report, anything else CSV.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the full JSON report.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Print the per-trial CSV.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct PoissonArgs {
    /// Number of vertices, labelled 1..=n.
    #[arg(long)]
    n: u32,
    /// Uniformity: vertices per edge.
    #[arg(long)]
    r: usize,
    /// Path length in edges.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    ell: u64,
    #[command(flatten)]
    prob: ProbArgs,
    /// Target rate; defaults to c^l/(l(r-1)+1)! with --c, else the expected count.
    #[arg(long)]
    lambda: Option<f64>,
    /// Number of independent trials.
    #[arg(long, default_value_t = 5000)]
    trials: usize,
    /// Largest accepted total variation distance.
    #[arg(long = "tv-max", default_value_t = 0.08)]
    tv_max: f64,
    /// Master RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Check,
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

impl From<loosepath::Error> for Failure {
    fn from(e: loosepath::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// `println!` that exits quietly once stdout is closed.
macro_rules! say {
    ($($arg:tt)*) => {
        if writeln!(io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    };
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line: Vec<&str> = msg
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with("tip:"))
                .collect();
            eprintln!("{}", line.join(" "));
            return ExitCode::from(1);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(1)
        }
        Err(Failure::Check) => ExitCode::from(2),
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Sample(a) => sample(a),
        Command::Lmax(a) => lmax(a),
        Command::Greedy(a) => greedy(a),
        Command::Count(a) => count(a),
        Command::Unit(a) => unit(a),
        Command::Expect(a) => expect(a),
        Command::Predict(a) => predict(a),
        Command::Ell0(a) => ell0(a),
        Command::Experiment(a) => experiment(a),
        Command::PoissonTest(a) => poisson_test(a),
    }
}

fn print_json(v: &serde_json::Value) -> Outcome {
    say!("{}", serde_json::to_string_pretty(v).map_err(|e| e.to_string())?);
    Ok(())
}

fn sample(a: SampleArgs) -> Outcome {
    let p = a.prob.resolve(a.n)?;
    let h = sample_explicit(a.n, a.r, p, RngSeed::new(a.seed, 0))?;
    if let Some(path) = &a.output {
        loosepath::hypergraph::save_edge_list(path, &h)?;
        say!("wrote {} edges to {} (p = {p:e})", h.edge_count(), path.display());
        return Ok(());
    }
    if a.json {
        return print_json(&json!({
            "n": a.n, "r": a.r, "p": p, "seed": a.seed, "edges": h.to_edges(),
        }));
    }
    let stdout = io::stdout();
    write_edge_list(stdout.lock(), &h).map_err(|e| e.to_string())?;
    Ok(())
}

fn lmax(a: GraphArgs) -> Outcome {
    let (h, p) = a.load()?;
    let w = exact_lmax(&h);
    if a.json {
        let mut v = serde_json::to_value(&w).map_err(|e| e.to_string())?;
        if let Some(p) = p {
            v["p"] = json!(p);
        }
        return print_json(&v);
    }
    if let Some(p) = p {
        say!("p {p:e}");
    }
    say!("lmax {}", w.lmax);
    let seq: Vec<String> = w.vertex_sequence().iter().map(u32::to_string).collect();
    say!("witness {}", seq.join("-"));
    let hist: Vec<String> = w.histogram.iter().map(|(k, c)| format!("{k}:{c}")).collect();
    say!("histogram {}", hist.join(" "));
    Ok(())
}

fn print_trace(t: &GreedyTrace, p: Option<f64>, json_out: bool) -> Outcome {
    if json_out {
        let edges: Vec<_> = t.steps.iter().filter_map(|s| s.edge.clone()).collect();
        let mut v = json!({
            "k": t.k(),
            "terminal": t.terminal,
            "lengths": t.lengths(),
            "histogram": t.histogram(),
            "edges": edges,
        });
        if let Some(p) = p {
            v["p"] = json!(p);
        }
        return print_json(&v);
    }
    if let Some(p) = p {
        say!("p {p:e}");
    }
    say!("K {}", t.k());
    say!("terminal {}", t.terminal);
    let lengths: Vec<String> = t.lengths().iter().map(u32::to_string).collect();
    say!("lengths {}", lengths.join(" "));
    Ok(())
}

fn greedy(a: GreedyArgs) -> Outcome {
    if a.backend == "lazy" {
        let g = &a.graph;
        let (Some(n), Some(r)) = (g.n, g.r) else {
            return Err("the lazy backend needs --n, --r and a probability".to_string().into());
        };
        let p = g.prob.resolve(n)?;
        let t = greedy_lazy(n, r, p, RngSeed::new(g.seed, 0))?;
        return print_trace(&t, Some(p), g.json);
    }
    let (h, p) = a.graph.load()?;
    print_trace(&greedy_explicit(&h), p, a.graph.json)
}

fn count(a: CountArgs) -> Outcome {
    let (h, p) = a.graph.load()?;
    let c = count_paths(&h, a.ell as usize)?;
    if a.graph.json {
        let mut v = json!({"ell": c.ell, "count": c.count, "edges": h.edge_count()});
        if let Some(p) = p {
            v["p"] = json!(p);
        }
        return print_json(&v);
    }
    if let Some(p) = p {
        say!("p {p:e}");
    }
    say!("count {}", c.count);
    Ok(())
}

fn unit(a: UnitArgs) -> Outcome {
    let (mask, p) = match &a.positions {
        Some(pos) => (UnitEdgeMask::from_positions(a.n, a.r, pos)?, None),
        None => {
            let p = a.prob.resolve(a.n)?;
            (sample_unit_mask(a.n, a.r, p, RngSeed::new(a.seed, 0))?, Some(p))
        }
    };
    let u = unit_union_greedy(&mask);
    if a.json {
        let mut v = serde_json::to_value(&u).map_err(|e| e.to_string())?;
        if let Some(p) = p {
            v["p"] = json!(p);
        }
        return print_json(&v);
    }
    if let Some(p) = p {
        say!("p {p:e}");
    }
    say!("Y {}", u.y);
    let pos: Vec<String> = u.positions.iter().map(u32::to_string).collect();
    say!("positions {}", pos.join(" "));
    Ok(())
}

fn expect(a: ExpectArgs) -> Outcome {
    if a.r < 2 || !(a.p > 0.0 && a.p <= 1.0) || !(a.tol > 0.0) {
        return Err("need r >= 2, p in (0, 1] and tol > 0".to_string().into());
    }
    let e = expected_extension(a.r, a.p, a.tol);
    let b = expected_extension_bounds(a.r, a.p);
    if a.json {
        return print_json(&json!({"r": a.r, "p": a.p, "expectation": e, "bounds": b}));
    }
    say!("E X = {:.6}", e.value);
    say!("bounds [{:.6}, {:.6}]", b.lower, b.upper);
    say!("terms {} (tail bound {:e})", e.truncation_index + 1, e.tail_bound);
    Ok(())
}

fn check_predict_args(n: u32, r: usize, p: f64) -> Outcome {
    if r < 2 || (n as usize) < r || !(p > 0.0 && p < 1.0) {
        return Err(format!("need n >= r >= 2 and p in (0, 1), got n={n}, r={r}, p={p}").into());
    }
    Ok(())
}

fn predict(a: PredictArgs) -> Outcome {
    let p = a.prob.resolve(a.n)?;
    check_predict_args(a.n, a.r, p)?;
    let pred = classify_regime(a.n as f64, a.r, p);
    if a.json {
        let mut v = serde_json::to_value(&pred).map_err(|e| e.to_string())?;
        v["n"] = json!(a.n);
        v["r"] = json!(a.r);
        v["p"] = json!(p);
        return print_json(&v);
    }
    let n = a.n as f64;
    say!("p {p:e}");
    say!("regime {}", pred.regime);
    say!(
        "band [{:.6}, {:.6}] edges = [{:.4}n, {:.4}n]",
        pred.band.lower,
        pred.band.upper,
        pred.band.lower / n,
        pred.band.upper / n
    );
    for note in pred.band.provenance.iter().chain(&pred.notes) {
        say!("  {note}");
    }
    Ok(())
}

fn ell0(a: PredictArgs) -> Outcome {
    let p = a.prob.resolve(a.n)?;
    check_predict_args(a.n, a.r, p)?;
    let root = solve_log_regime_length(a.n as f64, a.r, p)?;
    if a.json {
        let mut v = serde_json::to_value(&root).map_err(|e| e.to_string())?;
        v["p"] = json!(p);
        return print_json(&v);
    }
    say!("p {p:e}");
    say!("l0 {}", root.root);
    say!("bracket [{}, {}]", root.bracket.0, root.bracket.1);
    say!("residual {:e}", root.residual);
    Ok(())
}

fn experiment_config(a: &ExperimentArgs) -> Result<ExperimentConfig, String> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => {
            let need = |what: &str| format!("--{what} is required without --config");
            let n = a.n.ok_or_else(|| need("n"))?;
            let r = a.r.ok_or_else(|| need("r"))?;
            let trials = a.trials.ok_or_else(|| need("trials"))?;
            let measure: Measure = a.measure.as_deref().ok_or_else(|| need("measure"))?.parse().map_err(|e: loosepath::Error| e.to_string())?;
            let backend: Backend = a.backend.parse().map_err(|e: loosepath::Error| e.to_string())?;
            ExperimentConfig::new(n, r, a.prob.spec()?, trials, backend, measure)
        }
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    if a.budget.is_some() {
        cfg.budget = a.budget;
    }
    if a.output.is_some() {
        cfg.output = a.output.clone();
    }
    cfg.timing |= a.timing;
    Ok(cfg)
}

fn experiment(a: ExperimentArgs) -> Outcome {
    let cfg = experiment_config(&a)?;
    let report = run_experiment(&cfg)?;
    let meta = CsvMeta::from_config(&cfg, report.resolved_p);
    if let Some(path) = &cfg.output {
        if path.extension().is_some_and(|e| e == "json") {
            export_json(path, &report)?;
        } else {
            export_csv(path, &report.records, &meta)?;
        }
    }
    if a.json {
        let v = serde_json::to_value(&report).map_err(|e| e.to_string())?;
        print_json(&v)?;
    } else if a.csv {
        write_csv(io::stdout().lock(), &report.records, &meta)?;
    } else {
        let mut out = io::stdout().lock();
        let w = |out: &mut io::StdoutLock, s: String| writeln!(out, "{s}").map_err(|e| e.to_string());
        w(&mut out, format!("p {:e}", report.resolved_p))?;
        w(&mut out, format!("measure {} on {} backend, {} trials", cfg.measure, cfg.backend, cfg.trials))?;
        match &report.summary {
            Some(s) => {
                w(&mut out, format!("mean {:.6} se {:.6} ci95 [{:.6}, {:.6}]", s.mean, s.std_error, s.ci95[0], s.ci95[1]))?;
                w(&mut out, format!("min {} max {} failed {}", s.min, s.max, s.failed))?;
            }
            None => {
                let first = report.records.iter().find_map(|r| r.error.clone()).unwrap_or_default();
                w(&mut out, format!("all trials failed: {first}"))?;
            }
        }
        for c in &report.checks {
            w(&mut out, format!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail))?;
        }
        for note in &report.notes {
            w(&mut out, format!("note: {note}"))?;
        }
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn poisson_test(a: PoissonArgs) -> Outcome {
    let spec = a.prob.spec()?;
    let p = spec.resolve(a.n)?;
    if a.trials < MIN_GOF_TRIALS {
        return Err(format!("need at least {MIN_GOF_TRIALS} trials, got {}", a.trials).into());
    }
    let mut cfg = ExperimentConfig::new(a.n, a.r, spec.clone(), a.trials, Backend::Explicit, Measure::CountPaths(a.ell as usize))
        .with_seed(a.seed);
    cfg.threads = a.threads;
    let lambda = a.lambda.unwrap_or_else(|| match spec.c() {
        Some(c) => poisson_lambda(c, a.r, a.ell),
        None => expected_path_count(a.n as f64, a.r, p, a.ell),
    });
    let records = run_trials(&cfg)?;
    let stats = aggregate(&records)?;
    let g = poisson_gof_records(&records, lambda)?;
    let pass = g.tv < a.tv_max;
    if a.json {
        print_json(&json!({
            "n": a.n, "r": a.r, "ell": a.ell, "p": p, "lambda": lambda,
            "mean": stats.mean, "failed": stats.failed, "gof": g, "tv_max": a.tv_max, "pass": pass,
        }))?;
    } else {
        say!("p {p:e}");
        say!("lambda {lambda:.6} mean count {:.6} failed {}", stats.mean, stats.failed);
        say!("TV {:.6} chi-square {:.4} dof {} p-value {}", g.tv, g.chi_square, g.dof,
            g.p_value.map_or("n/a".to_string(), |v| format!("{v:.4}")));
        say!("{} TV < {}", if pass { "PASS" } else { "FAIL" }, a.tv_max);
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
