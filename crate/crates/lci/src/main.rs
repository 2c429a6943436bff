use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lci::error::{LciError, Result};
use lci::experiment::{self, Arm, ExperimentSpec, Source};
use lci::format::{
    parse_id_list, write_atomic, write_coupled_edges, write_layer, write_manifest, write_trace,
};
use lci::ingest::{load_network, NetworkFiles};
use lci::pipeline::{model_name, solve, Method, SolveOptions};
use lci_core::coupling::{couple, couple_with};
use lci_core::diffusion::{
    lt_propagate, multiplex_lt_propagate, multiplex_propagate_mc, propagate_mc,
};
use lci_core::generator::{generate, small_ilp_spec, SynthSpec};
use lci_core::solver::export_ilp;
use lci_core::{DiffusionModel, GreedyConfig, ModelKind, MultiplexNetwork, Scheme, SyncWeights};

#[derive(Parser)]
#[command(
    name = "lci",
    version,
    about = "Least cost influence on multiplex networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesise a multiplex network and write one file per layer.
    Generate(GenerateArgs),
    /// Couple a network and write the coupled edge list and node manifest.
    Couple(CoupleArgs),
    /// Run diffusion from a seed file.
    Simulate(SimulateArgs),
    /// Select a seed set and replay it on the multiplex network.
    Solve(SolveArgs),
    /// Write the 0-1 program of a coupled network in LP format.
    ExportIlp(ExportArgs),
    /// Sweep schemes, betas and repetitions into a CSV table.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct NetworkArgs {
    /// Layer files, in layer order.
    #[arg(long, num_args = 1.., required = true)]
    layers: Vec<PathBuf>,
    /// Tab-separated alias file `id_a id_b canonical`.
    #[arg(long)]
    aliases: Option<PathBuf>,
    /// Users file (one id per line) adding users that join no layer.
    #[arg(long)]
    universe: Option<PathBuf>,
}

impl NetworkArgs {
    fn files(&self) -> NetworkFiles {
        NetworkFiles {
            layers: self.layers.clone(),
            aliases: self.aliases.clone(),
            universe: self.universe.clone(),
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    /// lt, st or ic.
    #[arg(long, default_value = "lt")]
    model: String,
    #[arg(long = "mc-samples", default_value_t = lci_core::diffusion::DEFAULT_MC_SAMPLES)]
    mc_samples: usize,
}

#[derive(Args)]
struct SynthArgs {
    /// Size of the user base.
    #[arg(long)]
    users: Option<usize>,
    /// Layer as `size:edge_prob`; repeat per layer.
    #[arg(long = "layer")]
    layer: Vec<String>,
    /// Forced pairwise overlap fraction.
    #[arg(long)]
    overlap: Option<f64>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    synth: SynthArgs,
    /// Named preset instead of explicit layers (`small-ilp`).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CoupleArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long, default_value = "clique")]
    scheme: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    network: NetworkArgs,
    /// Seed users, one id per line.
    #[arg(long)]
    seeds: PathBuf,
    /// Simulate on this coupling instead of the multiplex network.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, default_value_t = 4)]
    hops: usize,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Activation trace CSV (LT only).
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    network: NetworkArgs,
    /// Coupling scheme, or `direct` for exhaustive search.
    #[arg(long, default_value = "clique")]
    scheme: String,
    #[arg(long, default_value_t = 0.8)]
    beta: f64,
    #[arg(long, default_value_t = 4)]
    hops: usize,
    #[arg(long = "T", default_value_t = lci_core::solver::DEFAULT_LIGHT_REEVALUATIONS)]
    t: usize,
    #[arg(long = "R", default_value_t = lci_core::solver::DEFAULT_HEAVY_PERIOD)]
    r: usize,
    /// Plain greedy instead of the lazy variant.
    #[arg(long)]
    naive: bool,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long, default_value = "clique")]
    scheme: String,
    #[arg(long, default_value_t = 0.8)]
    beta: f64,
    #[arg(long, default_value_t = 4)]
    hops: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the node manifest here.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Fixed network; otherwise one is synthesised per repetition.
    #[arg(long, num_args = 1..)]
    layers: Vec<PathBuf>,
    #[arg(long)]
    aliases: Option<PathBuf>,
    #[arg(long)]
    universe: Option<PathBuf>,
    #[command(flatten)]
    synth: SynthArgs,
    /// Scheme name, `direct`, `union` or `only-<layer>`; repeatable.
    #[arg(long = "scheme")]
    schemes: Vec<String>,
    /// Target fraction; repeatable.
    #[arg(long = "beta")]
    betas: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 4)]
    hops: usize,
    #[arg(long = "T", default_value_t = lci_core::solver::DEFAULT_LIGHT_REEVALUATIONS)]
    t: usize,
    #[arg(long = "R", default_value_t = lci_core::solver::DEFAULT_HEAVY_PERIOD)]
    r: usize,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn model(args: &ModelArgs, seed: u64) -> Result<DiffusionModel> {
    let m = match args.model.as_str() {
        "lt" => DiffusionModel::linear_threshold(),
        "st" => DiffusionModel::stochastic_threshold(args.mc_samples, seed),
        "ic" => DiffusionModel::independent_cascade(args.mc_samples, seed),
        other => {
            return Err(LciError::Usage(format!(
                "unknown model `{other}` (lt, st, ic)"
            )))
        }
    };
    m.check()?;
    Ok(m)
}

fn synth_spec(args: &SynthArgs, seed: u64) -> Result<SynthSpec> {
    if args.layer.is_empty() {
        return Err(LciError::Usage(
            "give --layer size:prob at least once".into(),
        ));
    }
    let per_layer = args
        .layer
        .iter()
        .map(|s| {
            let (size, p) = s
                .split_once(':')
                .ok_or_else(|| LciError::Usage(format!("expected size:prob, got `{s}`")))?;
            let size = size
                .parse()
                .map_err(|_| LciError::Usage(format!("bad size in `{s}`")))?;
            let p = p
                .parse()
                .map_err(|_| LciError::Usage(format!("bad probability in `{s}`")))?;
            Ok((size, p))
        })
        .collect::<Result<Vec<(usize, f64)>>>()?;
    let users = args
        .users
        .unwrap_or_else(|| per_layer.iter().map(|l| l.0).max().unwrap_or(0));
    Ok(SynthSpec {
        universe_size: users,
        per_layer,
        overlap_fraction: args.overlap,
        rng_seed: seed,
    })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| LciError::io("<stdout>", e)),
    }
}

fn emit_json(out: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    emit(out, &bytes)
}

fn load(args: &NetworkArgs, seed: u64) -> Result<(MultiplexNetwork, Vec<String>)> {
    let prepared = load_network(&args.files(), seed)?;
    for note in &prepared.notes {
        eprintln!("note: {note}");
    }
    Ok((prepared.network, prepared.notes))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| LciError::io(dir, e))
}

fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let spec = match args.preset.as_deref() {
        Some("small-ilp") => small_ilp_spec(args.seed),
        Some(other) => return Err(LciError::Usage(format!("unknown preset `{other}`"))),
        None => synth_spec(&args.synth, args.seed)?,
    };
    let net = generate(&spec)?;
    create_dir(&args.out)?;
    let mut files = Vec::new();
    for layer in net.layers() {
        let mut buf = Vec::new();
        write_layer(layer, &mut buf).map_err(|e| LciError::io(&args.out, e))?;
        let name = format!("layer{}.txt", layer.index());
        write_atomic(&args.out.join(&name), &buf)?;
        files.push(name);
    }
    let users: String = net.universe().iter().map(|u| format!("{u}\n")).collect();
    write_atomic(&args.out.join("users.txt"), users.as_bytes())?;
    let echo = json!({
        "universe_size": spec.universe_size,
        "per_layer": spec.per_layer.iter().map(|(n, p)| json!({"size": n, "edge_prob": p})).collect::<Vec<_>>(),
        "overlap_fraction": spec.overlap_fraction,
        "rng_seed": spec.rng_seed,
        "users": net.user_count(),
        "files": files,
        "universe_file": "users.txt",
        "version": lci::pipeline::VERSION,
    });
    emit_json(Some(&args.out.join("spec.json")), &echo)
}

fn cmd_couple(args: &CoupleArgs) -> Result<()> {
    let (net, notes) = load(&args.network, args.seed)?;
    let scheme: Scheme = args.scheme.parse()?;
    let coupled = couple(&net, scheme)?;
    create_dir(&args.out)?;
    let mut edges = Vec::new();
    write_coupled_edges(&coupled, &mut edges).map_err(|e| LciError::io(&args.out, e))?;
    write_atomic(&args.out.join("coupled.txt"), &edges)?;
    let mut manifest = Vec::new();
    write_manifest(&coupled, &mut manifest)?;
    write_atomic(&args.out.join("manifest.csv"), &manifest)?;
    emit_json(
        None,
        &json!({
            "scheme": scheme.name(),
            "users": net.user_count(),
            "layers": net.layer_count(),
            "nodes": coupled.node_count(),
            "edges": coupled.edge_count(),
            "hop_scale": coupled.hop_scale(),
            "notes": notes,
        }),
    )
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let (net, notes) = load(&args.network, args.seed)?;
    let text = fs::read_to_string(&args.seeds).map_err(|e| LciError::io(&args.seeds, e))?;
    let ids = parse_id_list(&text);
    let seeds = net.resolve(ids.iter().map(String::as_str))?;
    let m = model(&args.model, args.seed)?;
    let n = net.user_count() as f64;
    let scheme = args
        .scheme
        .as_deref()
        .map(str::parse::<Scheme>)
        .transpose()?;
    let (coverage, active_users, trace) = match (scheme, m.kind) {
        (None, ModelKind::LinearThreshold) => {
            let out = multiplex_lt_propagate(&net, &seeds, args.hops)?;
            (
                out.coverage_count as f64,
                Some(out.active.members.clone()),
                Some((out, None)),
            )
        }
        (None, _) => (
            multiplex_propagate_mc(&net, &seeds, args.hops, &m)?.mean_count,
            None,
            None,
        ),
        (Some(scheme), kind) => {
            let coupled = couple_with(&net, scheme, SyncWeights::for_model(kind))?;
            let nodes = coupled.map_users_to_nodes(&seeds)?;
            let hops = coupled.hop_scale() * args.hops;
            if kind == ModelKind::LinearThreshold {
                let out = lt_propagate(coupled.graph(), &nodes, hops)?;
                let users = coupled.active_users(&out.active.members);
                (users.len() as f64, Some(users), Some((out, Some(coupled))))
            } else {
                let mc = propagate_mc(coupled.graph(), &nodes, hops, &m)?;
                let users: f64 = coupled
                    .user_nodes()
                    .iter()
                    .map(|&v| mc.activation_frequency[v])
                    .sum();
                (users, None, None)
            }
        }
    };
    if let Some(path) = &args.trace {
        let (outcome, coupled) = trace
            .as_ref()
            .ok_or_else(|| LciError::Usage("traces are available for the LT model only".into()))?;
        let mut buf = Vec::new();
        write_trace(outcome, coupled.as_ref(), net.universe(), &mut buf)?;
        write_atomic(path, &buf)?;
    }
    let active: Option<Vec<String>> =
        active_users.map(|us| us.iter().map(|&u| net.user_id(u).to_string()).collect());
    emit_json(
        args.out.as_deref(),
        &json!({
            "scheme": scheme.map(|s| s.name()),
            "model": model_name(m.kind),
            "mc_samples": m.mc_samples,
            "rng_seed": m.rng_seed,
            "hops": args.hops,
            "seeds": ids,
            "coverage": coverage,
            "coverage_fraction": if n > 0.0 { coverage / n } else { 0.0 },
            "active_users": active,
            "notes": notes,
            "version": lci::pipeline::VERSION,
        }),
    )
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let (net, notes) = load(&args.network, args.seed)?;
    let opts = SolveOptions {
        method: Method::parse(&args.scheme)?,
        beta: args.beta,
        hops: args.hops,
        light_reevaluations: args.t,
        heavy_period: args.r,
        model: model(&args.model, args.seed)?,
        naive: args.naive,
    };
    let (mut report, _) = solve(&net, &opts)?;
    report.notes = notes;
    if !report.replay_meets_target {
        eprintln!(
            "warning: Monte Carlo replay reached {:.4}, below beta = {}",
            report.replayed_fraction, report.beta
        );
    }
    emit_json(args.out.as_deref(), &report)
}

fn cmd_export_ilp(args: &ExportArgs) -> Result<()> {
    let (net, _) = load(&args.network, args.seed)?;
    let coupled = couple(&net, args.scheme.parse()?)?;
    let cfg = GreedyConfig::for_network(&coupled, args.beta, args.hops);
    let mut text = String::new();
    let summary = export_ilp(&coupled, &cfg, &mut text)?;
    if let Some(path) = &args.manifest {
        let mut buf = Vec::new();
        write_manifest(&coupled, &mut buf)?;
        write_atomic(path, &buf)?;
    }
    emit(args.out.as_deref(), text.as_bytes())?;
    eprintln!(
        "{} binaries, {} activation rows, {} monotonicity rows, horizon {}",
        summary.binaries,
        summary.activation_constraints,
        summary.monotonicity_constraints,
        summary.horizon
    );
    Ok(())
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<()> {
    let source = if args.layers.is_empty() {
        Source::Synth(synth_spec(&args.synth, args.seed)?)
    } else {
        let files = NetworkFiles {
            layers: args.layers.clone(),
            aliases: args.aliases.clone(),
            universe: args.universe.clone(),
        };
        let net = load_network(&files, args.seed)?.network;
        Source::Fixed(net)
    };
    let arms = if args.schemes.is_empty() {
        experiment::default_arms()
    } else {
        args.schemes
            .iter()
            .map(|s| Arm::parse(s))
            .collect::<Result<_>>()?
    };
    let betas = if args.betas.is_empty() {
        vec![0.8]
    } else {
        args.betas.clone()
    };
    let mut options = SolveOptions::new(Method::Coupled(Scheme::Clique), betas[0], args.hops);
    options.light_reevaluations = args.t;
    options.heavy_period = args.r;
    options.model = model(&args.model, args.seed)?;
    let spec = ExperimentSpec {
        source,
        arms,
        betas,
        repetitions: args.reps,
        options,
    };
    let rows = experiment::run(&spec, args.jobs)?;
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed", rows.len());
    }
    emit(args.out.as_deref(), &experiment::rows_to_csv(&rows)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Couple(a) => cmd_couple(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::ExportIlp(a) => cmd_export_ilp(a),
        Command::Experiment(a) => cmd_experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
