//! The `certsor` command-line tool.
//!
//! Every command that writes files also writes `<name>.manifest.json` next to
//! them, recording the inputs (with FNV-1a 64 digests), parameters, seed,
//! outputs and wall-clock time. Reports refer to sibling files by file name,
//! so an output directory can be moved as a whole.

mod schedule;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use certsor_core::analysis::{kendall_tau, round_scores};
use certsor_core::norms::quantize;
use certsor_core::rankings::{katz, pagerank_l1_bound, RankingOptions};
use certsor_core::sor::{solve, solve_observed};
use certsor_core::suitable::{compute_suitable, spectral_radius_bracket, SuitableOptions};
use certsor_core::{ScheduleKind, SorConfig, SparseMatrix, SuitableResult, SuitableStatus, WeightVector};

use crate::edgelist::{load_edge_list, EdgeListOptions};
use crate::error::{Error, Result};
use crate::formats::{self, load_matrix, load_vector, save_matrix, save_quantized, save_vector, write_file};
use crate::report::{write_json, CertificateReport, RunManifest, SuitableReport, SuitableSweepReport};
use crate::synth::power_law_graph;

pub use schedule::{parse_schedule, CliSchedule};

#[derive(Debug, Parser)]
#[command(name = "certsor", version, about = "Certified step-asynchronous SOR for M-matrix systems")]
pub struct Cli {
    /// Directory receiving every output file.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Worker count for the bare `par` schedule [default: available cores].
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for the bare `random` schedule and for synthetic graphs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert an edge list into a binary matrix cache.
    Ingest(IngestArgs),
    /// Compute a sigma-suitable vector, or sweep sigma towards the spectral radius.
    Suitable(SuitableArgs),
    /// Solve (sI - A) x = b with a certified error bound.
    Solve(SolveArgs),
    /// Katz's index from a transposed adjacency cache.
    Katz(KatzArgs),
    /// Strongly preferential PageRank from a transposed adjacency cache.
    Pagerank(PagerankArgs),
    /// Kendall's tau between two score vectors.
    Tau(TauArgs),
    /// Iterations and timings of suitable vectors along a sigma sweep, as CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Relaxation parameter.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Stop once the certified supremum-norm error is at most this.
    #[arg(long, default_value_t = SorConfig::DEFAULT_TARGET_ERROR)]
    pub target_error: f64,
    /// seq, jacobi, random:SEED, random, par:K or par.
    #[arg(long, default_value = "seq")]
    pub schedule: String,
    /// Stop on the quantized (power-of-two) weight norm.
    #[arg(long)]
    pub quantized: bool,
    #[arg(long, default_value_t = SorConfig::DEFAULT_MAX_ITERATIONS)]
    pub max_iterations: usize,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Edge list: lines `u v [weight]`, `#` starts a comment line.
    pub input: PathBuf,
    /// Output cache file name inside the output directory.
    #[arg(short, long)]
    pub output: String,
    /// Store arc u -> v at (v, u), as the ranking commands expect.
    #[arg(long)]
    pub transpose: bool,
    #[arg(long, default_value_t = 1.0)]
    pub default_weight: f64,
}

#[derive(Debug, Args)]
pub struct SuitableArgs {
    pub cache: PathBuf,
    #[arg(long, required_unless_present = "sigma_schedule", conflicts_with = "sigma_schedule")]
    pub sigma: Option<f64>,
    /// Run sigma_i = upper / (1 - 2^-i) for i = 1..=K.
    #[arg(long, value_name = "K")]
    pub sigma_schedule: Option<u32>,
    /// Power-iteration steps for the spectral-radius upper bound of the sweep.
    #[arg(long, default_value_t = 1000)]
    pub bracket_iterations: usize,
    /// Cap on products A w [default: 10 n + 1000].
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long, default_value = "suitable")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub cache: PathBuf,
    #[arg(long = "s")]
    pub s: f64,
    #[arg(long)]
    pub sigma: f64,
    /// Suitable vector file; computed from --sigma when absent.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Right-hand side vector file [default: all ones].
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = "solve")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct KatzArgs {
    /// Cache of the transposed adjacency matrix.
    pub cache: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub sigma: f64,
    /// Preference vector file [default: all ones].
    #[arg(long)]
    pub pref: Option<PathBuf>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = "katz")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct PagerankArgs {
    /// Cache of the transposed adjacency matrix.
    pub cache: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    /// Suitability level, between 1 and 1 / alpha [default: midpoint].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Preference vector file, scaled to unit sum [default: uniform].
    #[arg(long)]
    pub pref: Option<PathBuf>,
    /// Also report the l1 bound alpha / (1 - alpha) ||x(t+1) - x(t)||_1 (omega = 1 only).
    #[arg(long)]
    pub l1_cert: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = "pagerank")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct TauArgs {
    /// Vector file or text file of numbers.
    pub first: PathBuf,
    pub second: PathBuf,
    /// Round both vectors half-to-even to this many decimal digits first.
    #[arg(long, value_name = "D")]
    pub round: Option<u32>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Matrix cache; a synthetic power-law graph (needs --seed) when absent.
    pub cache: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub nodes: usize,
    #[arg(long, default_value_t = 8)]
    pub arcs_per_node: usize,
    #[arg(long, default_value_t = 2.5)]
    pub exponent: f64,
    /// Number of sigma values, i = 1..=K.
    #[arg(long, default_value_t = 8)]
    pub steps: u32,
    /// Katz damping of each row is alpha = F / sigma_i.
    #[arg(long, value_name = "F", default_value_t = 0.5)]
    pub damping_factor: f64,
    #[arg(long, default_value_t = 1000)]
    pub bracket_iterations: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = "bench")]
    pub name: String,
}

/// Settings shared by every command.
struct Context {
    out_dir: PathBuf,
    threads: usize,
    seed: Option<u64>,
    start: Instant,
}

impl Context {
    fn out(&self, file: &str) -> PathBuf {
        self.out_dir.join(file)
    }

    fn schedule(&self, text: &str) -> Result<ScheduleKind> {
        parse_schedule(text, self.seed, self.threads)
    }

    /// Writes `<name>.manifest.json` and returns its file name.
    fn finish(&self, mut manifest: RunManifest, name: &str) -> Result<PathBuf> {
        let file = manifest_name(name);
        manifest.wall_clock_ms = self.start.elapsed().as_secs_f64() * 1e3;
        write_json(&self.out(&file.to_string_lossy()), &manifest)?;
        Ok(file)
    }
}

fn manifest_name(name: &str) -> PathBuf {
    format!("{name}.manifest.json").into()
}

pub fn run(cli: &Cli) -> Result<()> {
    let threads = match cli.threads {
        Some(0) => return Err(Error::Usage("--threads must be at least 1".into())),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let ctx = Context { out_dir: cli.out_dir.clone(), threads, seed: cli.seed, start: Instant::now() };
    match &cli.command {
        Command::Ingest(args) => cmd_ingest(&ctx, args),
        Command::Suitable(args) => cmd_suitable(&ctx, args),
        Command::Solve(args) => cmd_solve(&ctx, args),
        Command::Katz(args) => cmd_katz(&ctx, args),
        Command::Pagerank(args) => cmd_pagerank(&ctx, args),
        Command::Tau(args) => cmd_tau(args),
        Command::Bench(args) => cmd_bench(&ctx, args),
    }
}

fn cmd_ingest(ctx: &Context, args: &IngestArgs) -> Result<()> {
    let mut manifest = RunManifest::new("ingest");
    let file = std::fs::File::open(&args.input).map_err(|e| Error::io(&args.input, e))?;
    let opts = EdgeListOptions { transpose: args.transpose, default_weight: args.default_weight };
    let (matrix, summary) = load_edge_list(std::io::BufReader::new(file), opts).map_err(|e| match e {
        // Name the file in I/O errors raised while reading lines.
        Error::EdgeList { line, message } => {
            Error::EdgeList { line, message: format!("{}: {message}", args.input.display()) }
        }
        other => other,
    })?;
    manifest.input(&args.input)?;
    save_matrix(&ctx.out(&args.output), &matrix)?;
    manifest.param("transpose", args.transpose);
    manifest.param("default_weight", args.default_weight);
    manifest.param("summary", summary);
    manifest.outputs.push(args.output.clone().into());
    ctx.finish(manifest, &args.output)?;
    println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
    Ok(())
}

fn suitable_options(max_iterations: Option<usize>, record_history: bool) -> SuitableOptions {
    SuitableOptions { max_iterations, record_history }
}

fn spectral_upper(a: &SparseMatrix, iterations: usize) -> Result<f64> {
    let upper = spectral_radius_bracket(a, iterations.max(1))?.upper;
    if upper > 0.0 {
        Ok(upper)
    } else {
        Err(Error::Usage("the matrix is nilpotent; a sigma sweep towards its spectral radius 0 is empty".into()))
    }
}

/// `base / (1 - 2^-i)`.
fn sweep_sigma(base: f64, i: u32) -> f64 {
    base / (1.0 - 0.5f64.powi(i as i32))
}

fn cmd_suitable(ctx: &Context, args: &SuitableArgs) -> Result<()> {
    let mut manifest = RunManifest::new("suitable");
    let a = load_matrix(&args.cache)?;
    manifest.input(&args.cache)?;
    manifest.param("max_iterations", args.max_iterations);
    let manifest_file = manifest_name(&args.name);

    // Runs one search and writes its vectors under `stem`.
    let mut outputs = Vec::new();
    let mut search = |sigma: f64, stem: &str, history: bool| -> Result<SuitableReport> {
        let res = compute_suitable(&a, sigma, suitable_options(args.max_iterations, history))?;
        let mut report = SuitableReport::new(&res, manifest_file.clone());
        if let Some(w) = &res.weights {
            let file = format!("{stem}.w.csorv");
            save_vector(&ctx.out(&file), w.as_slice())?;
            outputs.push(PathBuf::from(&file));
            report.weights = Some(file.into());
            if let Ok(q) = quantize(w) {
                let file = format!("{stem}.csorq");
                save_quantized(&ctx.out(&file), &q)?;
                outputs.push(PathBuf::from(&file));
                report.quantized_weights = Some(file.into());
            }
        }
        Ok(report)
    };

    let report_file = format!("{}.json", args.name);
    let failure = if let Some(sigma) = args.sigma {
        manifest.param("sigma", sigma);
        let report = search(sigma, &args.name, true)?;
        println!("{} sigma={} iterations={}", report.status, report.sigma, report.iterations);
        write_json(&ctx.out(&report_file), &report)?;
        status_failure(&report)
    } else {
        let steps = args.sigma_schedule.expect("clap requires sigma or sigma-schedule");
        let base = spectral_upper(&a, args.bracket_iterations)?;
        manifest.param("sigma_schedule", steps);
        manifest.param("bracket_iterations", args.bracket_iterations);
        let mut entries = Vec::new();
        for i in 1..=steps {
            let report = search(sweep_sigma(base, i), &format!("{}-{i}", args.name), false)?;
            println!("i={i} {} sigma={} iterations={}", report.status, report.sigma, report.iterations);
            entries.push(report);
        }
        let failure = entries.iter().find_map(status_failure);
        write_json(&ctx.out(&report_file), &SuitableSweepReport { base, entries })?;
        failure
    };
    manifest.outputs = outputs;
    manifest.outputs.push(report_file.into());
    ctx.finish(manifest, &args.name)?;
    failure.map_or(Ok(()), Err)
}

fn status_failure(report: &SuitableReport) -> Option<Error> {
    let status = match report.status.as_str() {
        "suitable" => return None,
        "sigma_below_rho" => SuitableStatus::SigmaBelowRho,
        "underflow" => SuitableStatus::Underflow,
        _ => SuitableStatus::IterationLimit,
    };
    Some(Error::Unsuitable { sigma: report.sigma, status })
}

/// A verified suitable result, either computed or read from `weights`.
fn obtain_suitable(
    a: &SparseMatrix,
    sigma: f64,
    weights: Option<&Path>,
    manifest: &mut RunManifest,
) -> Result<SuitableResult> {
    manifest.param("sigma", sigma);
    match weights {
        Some(path) => {
            manifest.input(path)?;
            let w = WeightVector::new(load_vector(path)?)?;
            // Checked again by the solver before any sweep.
            Ok(SuitableResult {
                status: SuitableStatus::Suitable,
                sigma,
                weights: Some(w),
                iterations: 0,
                scale: 1.0,
                collatz_history: Vec::new(),
            })
        }
        None => {
            let res = compute_suitable(a, sigma, SuitableOptions::default())?;
            manifest.param("suitable_iterations", res.iterations);
            match res.status {
                SuitableStatus::Suitable => Ok(res),
                status => Err(Error::Unsuitable { sigma, status }),
            }
        }
    }
}

fn record_solver(manifest: &mut RunManifest, solver: &SolverArgs, kind: ScheduleKind) {
    manifest.param("omega", solver.omega);
    manifest.param("target_error", solver.target_error);
    manifest.param("schedule", kind.to_string());
    manifest.param("quantized", solver.quantized);
    manifest.param("max_iterations", solver.max_iterations);
    if let ScheduleKind::RandomPreorder { seed } = kind {
        manifest.seed = Some(seed);
    }
}

fn ranking_options(solver: &SolverArgs) -> RankingOptions {
    RankingOptions {
        omega: solver.omega,
        target_error: solver.target_error,
        max_iterations: solver.max_iterations,
        use_quantized: solver.quantized,
    }
}

/// Writes the solution vector, the certificate and the manifest.
fn write_certified(
    ctx: &Context,
    mut manifest: RunManifest,
    name: &str,
    x: &[f64],
    mut report: CertificateReport,
) -> Result<()> {
    let solution = format!("{name}.x.csorv");
    let cert = format!("{name}.cert.json");
    save_vector(&ctx.out(&solution), x)?;
    report.solution = solution.clone().into();
    report.manifest = manifest_name(name);
    write_json(&ctx.out(&cert), &report)?;
    manifest.outputs.push(solution.into());
    if let Some(scores) = &report.scores {
        manifest.outputs.push(scores.clone());
    }
    manifest.outputs.push(cert.into());
    ctx.finish(manifest, name)?;
    println!("iterations={} supnorm_bound={:e} r={}", report.iterations, report.supnorm_bound, report.r);
    Ok(())
}

fn cmd_solve(ctx: &Context, args: &SolveArgs) -> Result<()> {
    let mut manifest = RunManifest::new("solve");
    let a = load_matrix(&args.cache)?;
    manifest.input(&args.cache)?;
    let b = match &args.rhs {
        Some(path) => {
            manifest.input(path)?;
            load_vector(path)?
        }
        None => vec![1.0; a.dim()],
    };
    let kind = ctx.schedule(&args.solver.schedule)?;
    let suit = obtain_suitable(&a, args.sigma, args.weights.as_deref(), &mut manifest)?;
    manifest.param("s", args.s);
    record_solver(&mut manifest, &args.solver, kind);
    let cfg = SorConfig::new(args.s, args.sigma, suit.suitable_weights()?.clone())
        .with_omega(args.solver.omega)
        .with_target_error(args.solver.target_error)
        .with_max_iterations(args.solver.max_iterations)
        .with_quantized(args.solver.quantized);
    let sol = solve(&a, &b, &cfg, &mut CliSchedule::new(kind, a.dim())?)?;
    let report = CertificateReport::new(&sol.certificate, PathBuf::new(), PathBuf::new());
    write_certified(ctx, manifest, &args.name, &sol.x, report)
}

fn load_preference(path: Option<&Path>, n: usize, default: f64, manifest: &mut RunManifest) -> Result<Vec<f64>> {
    match path {
        Some(path) => {
            manifest.input(path)?;
            load_vector(path)
        }
        None => Ok(vec![default; n]),
    }
}

fn cmd_katz(ctx: &Context, args: &KatzArgs) -> Result<()> {
    let mut manifest = RunManifest::new("katz");
    let mt = load_matrix(&args.cache)?;
    manifest.input(&args.cache)?;
    let v = load_preference(args.pref.as_deref(), mt.dim(), 1.0, &mut manifest)?;
    let kind = ctx.schedule(&args.solver.schedule)?;
    let suit = obtain_suitable(&mt, args.sigma, args.weights.as_deref(), &mut manifest)?;
    manifest.param("alpha", args.alpha);
    record_solver(&mut manifest, &args.solver, kind);
    let sol = katz(&mt, args.alpha, &v, &suit, &ranking_options(&args.solver), &mut CliSchedule::new(kind, mt.dim())?)?;
    let mut report = CertificateReport::new(&sol.certificate, PathBuf::new(), PathBuf::new());
    report.alpha = Some(args.alpha);
    write_certified(ctx, manifest, &args.name, &sol.x, report)
}

/// Column-normalizes a transposed adjacency `M^T` into `G^T`, returning the
/// dangling indicator (1 for nodes without out-links).
pub fn normalize_transposed(mt: &SparseMatrix) -> (SparseMatrix, Vec<f64>) {
    let out_weight = mt.col_sums();
    let values = mt.col_indices().iter().zip(mt.values()).map(|(&j, &v)| v / out_weight[j]).collect();
    let gt = SparseMatrix::from_csr(mt.dim(), mt.row_offsets().to_vec(), mt.col_indices().to_vec(), values)
        .expect("same structure, finite positive values");
    let dangling = out_weight.iter().map(|&c| if c == 0.0 { 1.0 } else { 0.0 }).collect();
    (gt, dangling)
}

fn cmd_pagerank(ctx: &Context, args: &PagerankArgs) -> Result<()> {
    let alpha = args.alpha;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Usage(format!("--alpha must lie in (0, 1), got {alpha}")));
    }
    if args.l1_cert && args.solver.omega != 1.0 {
        return Err(Error::Usage("--l1-cert needs --omega 1".into()));
    }
    let mut manifest = RunManifest::new("pagerank");
    let mt = load_matrix(&args.cache)?;
    manifest.input(&args.cache)?;
    let n = mt.dim();
    let mut v = load_preference(args.pref.as_deref(), n, 1.0 / n as f64, &mut manifest)?;
    if args.pref.is_some() {
        let sum: f64 = v.iter().sum();
        if !(sum > 0.0 && v.iter().all(|&x| x >= 0.0)) {
            return Err(Error::Usage("the preference vector must be nonnegative and nonzero".into()));
        }
        v.iter_mut().for_each(|x| *x /= sum);
    }
    let (gt, _) = normalize_transposed(&mt);
    let sigma = args.sigma.unwrap_or(0.5 * (1.0 + 1.0 / alpha));
    let kind = ctx.schedule(&args.solver.schedule)?;
    let suit = obtain_suitable(&gt, sigma, None, &mut manifest)?;
    manifest.param("alpha", alpha);
    manifest.param("l1_cert", args.l1_cert);
    record_solver(&mut manifest, &args.solver, kind);

    // The pseudorank system (I / alpha - G^T) p = (1 - alpha) v / alpha.
    let cfg = SorConfig::new(1.0 / alpha, sigma, suit.suitable_weights()?.clone())
        .with_omega(args.solver.omega)
        .with_target_error(args.solver.target_error)
        .with_max_iterations(args.solver.max_iterations)
        .with_quantized(args.solver.quantized);
    let rhs: Vec<f64> = v.iter().map(|x| (1.0 - alpha) * x / alpha).collect();
    let mut l1_bound = None;
    let sol = solve_observed(&gt, &rhs, &cfg, &mut CliSchedule::new(kind, n)?, None, |rec| {
        if args.l1_cert {
            l1_bound = Some(pagerank_l1_bound(rec.x_prev, rec.x_next, alpha));
        }
    })?;
    let l1: f64 = sol.x.iter().map(|p| p.abs()).sum();
    if !(l1 > 0.0) {
        return Err(Error::Usage("the pseudorank vanished; check the preference vector".into()));
    }
    let scores: Vec<f64> = sol.x.iter().map(|p| p / l1).collect();
    let scores_file = format!("{}.scores.csorv", args.name);
    save_vector(&ctx.out(&scores_file), &scores)?;

    let mut report = CertificateReport::new(&sol.certificate, PathBuf::new(), PathBuf::new());
    report.alpha = Some(alpha);
    report.pseudorank_l1 = Some(l1);
    report.l1_bound = l1_bound;
    report.scores = Some(scores_file.into());
    write_certified(ctx, manifest, &args.name, &sol.x, report)
}

/// Reads a vector file, or a text file of whitespace-separated numbers with
/// `#` comment lines.
pub fn load_scores(path: &Path) -> Result<Vec<f64>> {
    let bytes = formats::read_file(path)?;
    if bytes.starts_with(&formats::VECTOR_MAGIC) {
        return formats::decode_vector(&bytes).map_err(|e| match e {
            Error::Format { message, .. } => Error::format(path, message),
            other => other,
        });
    }
    let text = std::str::from_utf8(&bytes).map_err(|_| Error::format(path, "neither a vector file nor UTF-8 text"))?;
    let mut out = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        for token in line.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|_| Error::format(path, format!("line {}: invalid number {token:?}", index + 1)))?;
            out.push(v);
        }
    }
    Ok(out)
}

/// `x` with 15 significant digits, in shortest form.
pub fn format_significant(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    rounded.to_string()
}

fn cmd_tau(args: &TauArgs) -> Result<()> {
    let mut r = load_scores(&args.first)?;
    let mut s = load_scores(&args.second)?;
    if let Some(digits) = args.round {
        r = round_scores(&r, digits);
        s = round_scores(&s, digits);
    }
    let tau = kendall_tau(&r, &s)?;
    println!("{}", format_significant(tau));
    Ok(())
}

fn cmd_bench(ctx: &Context, args: &BenchArgs) -> Result<()> {
    let mut manifest = RunManifest::new("bench");
    let a = match &args.cache {
        Some(path) => {
            manifest.input(path)?;
            load_matrix(path)?
        }
        None => {
            let seed = ctx.seed.ok_or_else(|| Error::Usage("a synthetic bench graph needs --seed".into()))?;
            manifest.seed = Some(seed);
            manifest.param("nodes", args.nodes);
            manifest.param("arcs_per_node", args.arcs_per_node);
            manifest.param("exponent", args.exponent);
            power_law_graph(args.nodes, args.nodes * args.arcs_per_node, args.exponent, seed).transpose()
        }
    };
    if !(args.damping_factor > 0.0 && args.damping_factor < 1.0) {
        return Err(Error::Usage(format!("--damping-factor must lie in (0, 1), got {}", args.damping_factor)));
    }
    let kind = ctx.schedule(&args.solver.schedule)?;
    manifest.param("steps", args.steps);
    manifest.param("damping_factor", args.damping_factor);
    manifest.param("bracket_iterations", args.bracket_iterations);
    record_solver(&mut manifest, &args.solver, kind);
    if let ScheduleKind::RandomPreorder { seed } = kind {
        manifest.param("schedule_seed", seed);
        manifest.seed = ctx.seed.or(Some(seed));
    }

    let base = spectral_upper(&a, args.bracket_iterations)?;
    manifest.param("base", base);
    let v = vec![1.0; a.dim()];
    let mut csv = String::from("sigma,iterations,wallclock_ms,r,bound\n");
    let mut failure = None;
    for i in 1..=args.steps {
        let sigma = sweep_sigma(base, i);
        let start = Instant::now();
        let suit = compute_suitable(&a, sigma, SuitableOptions::default())?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let (r, bound) = if suit.is_suitable() {
            let alpha = args.damping_factor / sigma;
            let sol =
                katz(&a, alpha, &v, &suit, &ranking_options(&args.solver), &mut CliSchedule::new(kind, a.dim())?)?;
            (sol.certificate.r, sol.certificate.supnorm_bound)
        } else {
            failure.get_or_insert(Error::Unsuitable { sigma, status: suit.status });
            (f64::NAN, f64::NAN)
        };
        let line = format!("{sigma},{},{ms:.3},{r},{bound}\n", suit.iterations);
        print!("{line}");
        csv.push_str(&line);
    }
    let file = format!("{}.csv", args.name);
    write_file(&ctx.out(&file), csv.as_bytes())?;
    manifest.outputs.push(file.into());
    ctx.finish(manifest, &args.name)?;
    failure.map_or(Ok(()), Err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(1.0), "1");
        assert_eq!(format_significant(-1.0), "-1");
        assert_eq!(format_significant(std::f64::consts::FRAC_1_SQRT_2), "0.707106781186548");
        assert_eq!(format_significant(0.0), "0");
    }

    #[test]
    fn transposed_normalization() {
        // Arcs 0 -> 1, 0 -> 2, 1 -> 2; node 2 dangles. Stored transposed.
        let mt = SparseMatrix::from_triplets(3, [(1, 0, 1.0), (2, 0, 3.0), (2, 1, 2.0)]).unwrap();
        let (gt, d) = normalize_transposed(&mt);
        assert_eq!(d, vec![0.0, 0.0, 1.0]);
        assert_eq!(gt.get(1, 0), 0.25);
        assert_eq!(gt.get(2, 0), 0.75);
        assert_eq!(gt.get(2, 1), 1.0);
    }

    #[test]
    fn sweep_levels_approach_the_base() {
        assert_eq!(sweep_sigma(3.0, 1), 6.0);
        assert_eq!(sweep_sigma(3.0, 2), 4.0);
        assert!(sweep_sigma(3.0, 8) > 3.0);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
