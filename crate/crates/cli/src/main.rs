//! `hypernash` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 failed acceptance
//! check, 3 I/O error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use hypernash::dynamics::{
    accessible_set, all_tie_vertices, brd_run, default_max_steps, BrdOutcome,
};
use hypernash::equilibrium::enumerate;
use hypernash::experiments::{self, ExperimentConfig, ExperimentKind};
use hypernash::format::{read_bond, read_instance, write_bond_file, write_instance};
use hypernash::percolation::{
    components, coupled_percolation, coupling_holds, sample_bond, BondConfig,
};
use hypernash::randgame::{marks_of, sample_marks, sample_payoffs};
use hypernash::{Dimension, DiscreteDistribution, Error, MarkSource, TieParameter, VertexId};

const DEFAULT_SEED: u64 = 0;

#[derive(Parser, Debug)]
#[command(
    name = "hypernash",
    version,
    about = "Random two-action games on the hypercube"
)]
struct Cli {
    /// Master seed; falls back to $HYPERNASH_SEED, then the config file, then 0.
    #[arg(long, global = true, env = "HYPERNASH_SEED")]
    seed: Option<u64>,
    /// Worker threads (wall time only; output is identical for any value).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an instance and write it in `hrg 1` format.
    Gen(GenArgs),
    /// List the equilibria of an instance.
    Analyze { instance: PathBuf },
    /// Run best-response dynamics on an instance.
    Brd(BrdArgs),
    /// Accessible set and unreachable equilibria from a start vertex.
    Access {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        start: VertexId,
    },
    /// Sample, read or couple a bond percolation configuration.
    Perc(PercArgs),
    /// Run a named experiment.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: u32,
    /// Tie parameter of the edge marks.
    #[arg(long, conflicts_with = "dist", required_unless_present = "dist")]
    alpha: Option<f64>,
    /// Payoff law: `uniform:v1,v2,..`, `atoms:v@p,..` or `point:v`.
    #[arg(long)]
    dist: Option<String>,
    /// Output file; without it the instance goes to stdout and the digest to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BrdArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    start: VertexId,
    /// Step cap; defaults to 64 n 2^n.
    #[arg(long)]
    max_steps: Option<u64>,
}

#[derive(Args, Debug)]
struct PercArgs {
    /// Read a bond configuration instead of sampling one.
    #[arg(long, conflicts_with_all = ["n", "p", "couple"])]
    bond: Option<PathBuf>,
    /// Couple this instance with a percolation of parameter beta.
    #[arg(long, conflicts_with_all = ["n", "p"])]
    couple: Option<PathBuf>,
    #[arg(long, requires = "p")]
    n: Option<u32>,
    #[arg(long, requires = "n")]
    p: Option<f64>,
    /// Start vertex for `--couple`.
    #[arg(long, default_value_t = 0)]
    start: VertexId,
    /// Write the configuration in `hrp 1` format.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// mean-pne, clt, spne, isolated, coupling, accessibility or brd-steps.
    name: String,
    /// Flat `key = value` config; keys not given keep the experiment defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output prefix for `<prefix>.csv` and `<prefix>.json` (overrides the config).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the trial count.
    #[arg(long)]
    trials: Option<usize>,
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure {
                code: 1,
                message: format!("cannot start {t} threads: {e}"),
            })?;
    }
    let fmt = cli.format;
    match cli.command {
        Command::Gen(a) => cmd_gen(a, cli.seed.unwrap_or(DEFAULT_SEED)),
        Command::Analyze { instance } => cmd_analyze(&instance, fmt),
        Command::Brd(a) => cmd_brd(a, cli.seed.unwrap_or(DEFAULT_SEED), fmt),
        Command::Access { instance, start } => cmd_access(&instance, start, fmt),
        Command::Perc(a) => cmd_perc(a, cli.seed.unwrap_or(DEFAULT_SEED), fmt),
        Command::Experiment(a) => cmd_experiment(a, cli.seed),
    }
}

fn emit<T: Serialize>(fmt: Format, value: &T, text: impl FnOnce() -> String) {
    match fmt {
        Format::Text => print!("{}", text()),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("report serializes")
        ),
    }
}

fn list(vs: &[VertexId]) -> String {
    let items: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn cmd_gen(a: GenArgs, seed: u64) -> CmdResult {
    let dim = Dimension::new(a.n)?;
    let cube = match (&a.alpha, &a.dist) {
        (Some(alpha), None) => sample_marks(dim, TieParameter::new(*alpha)?, seed),
        (None, Some(spec)) => {
            let dist: DiscreteDistribution = spec.parse()?;
            marks_of(&sample_payoffs(dim, &dist, seed))
        }
        _ => unreachable!("clap enforces exactly one of --alpha / --dist"),
    };
    let text = write_instance(&cube);
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    match a.out {
        Some(path) => {
            std::fs::write(&path, &text).map_err(|e| Error::Io { path, source: e })?;
            println!("sha256={digest}");
        }
        None => {
            print!("{text}");
            eprintln!("sha256={digest}");
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: u32,
    alpha: Option<f64>,
    pne: Vec<VertexId>,
    spne: Vec<VertexId>,
    pne_count: usize,
    spne_count: usize,
    all_tie_count: usize,
}

fn cmd_analyze(path: &Path, fmt: Format) -> CmdResult {
    let cube = read_instance(path)?;
    let eq = enumerate(&cube);
    let r = AnalyzeReport {
        n: cube.dim().get(),
        alpha: cube.tie_parameter().map(|t| t.alpha()),
        all_tie_count: all_tie_vertices(&cube).len(),
        pne_count: eq.pne_count,
        spne_count: eq.spne_count,
        pne: eq.pne,
        spne: eq.spne,
    };
    emit(fmt, &r, || {
        let alpha = r.alpha.map_or_else(|| "unknown".into(), |a| a.to_string());
        format!(
            "n={} alpha={alpha}\npne={}\nspne={}\npne_count={} spne_count={}\nall_tie_count={}\n",
            r.n,
            list(&r.pne),
            list(&r.spne),
            r.pne_count,
            r.spne_count,
            r.all_tie_count
        )
    });
    Ok(0)
}

fn cmd_brd(a: BrdArgs, seed: u64, fmt: Format) -> CmdResult {
    let cube = read_instance(&a.instance)?;
    let dim = cube.dim();
    dim.check_vertex(a.start)?;
    let max = a.max_steps.unwrap_or_else(|| default_max_steps(dim));
    let trace = brd_run(&cube, a.start, seed, max);
    emit(fmt, &trace, || {
        let mut s = String::from("path");
        for v in &trace.path {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
        match trace.outcome {
            BrdOutcome::Converged(v) => {
                let _ = writeln!(s, "converged steps={} vertex={v}", trace.steps);
            }
            BrdOutcome::StepLimit => {
                let last = trace.path.last().copied().unwrap_or(a.start);
                let _ = writeln!(s, "step_limit steps={} vertex={last}", trace.steps);
            }
        }
        s
    });
    Ok(0)
}

#[derive(Serialize)]
struct AccessReport {
    start: VertexId,
    accessible_count: usize,
    inaccessible_count: usize,
    unreachable_pne: Vec<VertexId>,
    all_tie: Vec<VertexId>,
}

fn cmd_access(path: &Path, start: VertexId, fmt: Format) -> CmdResult {
    let cube = read_instance(path)?;
    cube.dim().check_vertex(start)?;
    let part = accessible_set(&cube, start);
    let eq = enumerate(&cube);
    let r = AccessReport {
        start,
        accessible_count: part.accessible.len(),
        inaccessible_count: cube.dim().vertex_count() - part.accessible.len(),
        unreachable_pne: eq
            .pne
            .into_iter()
            .filter(|&v| !part.accessible.contains(v))
            .collect(),
        all_tie: all_tie_vertices(&cube),
    };
    emit(fmt, &r, || {
        format!(
            "start={} accessible_count={} inaccessible_count={}\nunreachable_pne={}\nunreachable_pne_count={}\nall_tie={}\n",
            r.start,
            r.accessible_count,
            r.inaccessible_count,
            list(&r.unreachable_pne),
            r.unreachable_pne.len(),
            list(&r.all_tie)
        )
    });
    Ok(0)
}

#[derive(Serialize)]
struct PercReport {
    n: u32,
    open_edges: usize,
    components: usize,
    largest_size: usize,
    isolated_count: usize,
    rest_singletons: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    explored_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rounds: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coupling_holds: Option<bool>,
}

fn cmd_perc(a: PercArgs, seed: u64, fmt: Format) -> CmdResult {
    let mut coupling = None;
    let bond: BondConfig = if let Some(path) = &a.bond {
        read_bond(path)?
    } else if let Some(path) = &a.couple {
        let cube = read_instance(path)?;
        let out = coupled_percolation(&cube, a.start, seed)?;
        coupling = Some((
            out.explored.len(),
            out.rounds,
            coupling_holds(&cube, a.start, &out),
        ));
        out.bond
    } else {
        match (a.n, a.p) {
            (Some(n), Some(p)) => sample_bond(Dimension::new(n)?, p, seed)?,
            _ => {
                return Err(Failure {
                    code: 1,
                    message: "perc needs --bond FILE, --couple FILE, or --n N --p P".into(),
                })
            }
        }
    };
    if let Some(out) = &a.out {
        write_bond_file(out, &bond)?;
    }
    let c = components(&bond);
    let r = PercReport {
        n: bond.dim().get(),
        open_edges: bond.open_count(),
        components: c.sizes.len(),
        largest_size: c.largest_size,
        isolated_count: c.isolated_count,
        rest_singletons: c.rest_are_singletons(),
        explored_size: coupling.map(|t| t.0),
        rounds: coupling.map(|t| t.1),
        coupling_holds: coupling.map(|t| t.2),
    };
    emit(fmt, &r, || {
        let mut s = format!(
            "n={} open_edges={} components={} largest_size={} isolated_count={} rest_singletons={}\n",
            r.n, r.open_edges, r.components, r.largest_size, r.isolated_count, r.rest_singletons
        );
        if let (Some(e), Some(k), Some(h)) = (r.explored_size, r.rounds, r.coupling_holds) {
            let _ = writeln!(s, "explored_size={e} rounds={k} coupling_holds={h}");
        }
        s
    });
    Ok(0)
}

fn cmd_experiment(a: ExperimentArgs, seed_flag: Option<u64>) -> CmdResult {
    let kind: ExperimentKind = a.name.parse()?;
    let mut config = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            experiments::parse_config(&text, kind)?
        }
        None => ExperimentConfig::preset(kind),
    };
    if let Some(s) = seed_flag {
        config.master_seed = s;
    }
    if let Some(t) = a.trials {
        config.trials = t;
    }
    if let Some(o) = a.output {
        config.output = Some(o);
    }
    let out = experiments::run(&config)?;
    match &config.output {
        Some(prefix) => {
            let (csv, json) = experiments::write_outputs(&out, prefix)?;
            println!("wrote {} and {}", csv.display(), json.display());
        }
        None => print!("{}", experiments::summary_json(&out)),
    }
    for c in &out.checks {
        eprintln!("{c}");
    }
    if out.passed() {
        Ok(0)
    } else {
        let failed = out.checks.iter().filter(|c| !c.passed).count();
        eprintln!("{failed} of {} checks failed", out.checks.len());
        Ok(2)
    }
}
