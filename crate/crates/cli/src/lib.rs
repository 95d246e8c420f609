//! Command implementations behind the `hamgame` binary.

pub mod interactive;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hamgame::analytics::checks::{random_graph_checks, ChecksParams};
use hamgame::analytics::criterion::{f1_f2_sums, CriterionConfig};
use hamgame::analytics::degree_stats;
use hamgame::boxgame::{
    box_game_value, disjoint_family, simulate_box_game, strategy_beats_every_client, BoxClient, FirstBoxClient,
    GreedyBoxClient, RandomBoxClient,
};
use hamgame::game::{replay, GameKind, Transcript};
use hamgame::graph::{log_scaled_p, sample_gnp, Graph, RandomGraphSpec};
use hamgame::harness::{
    crossovers, play_on_board, run_point, run_sweep, sweep_csv, trial_board, verify_suite, waiter_by_name,
    HarnessError, RunConfig, VerifyLevel, VerifyOptions, CSV_HEADER,
};
use hamgame::rng::{derive_seed, point_seed};
use hamgame::strategy::client_by_name;

use interactive::{Opponent, Side};

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
    FaultThreshold(String),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Runtime(_) => 1,
            CliError::Verification(_) => 2,
            CliError::FaultThreshold(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::FaultThreshold(m) => f.write_str(m),
            CliError::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::FaultThreshold { .. } => CliError::FaultThreshold(e.to_string()),
            HarnessError::Strategy(_) | HarnessError::Config(_) => CliError::Usage(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "hamgame", version, about = "Waiter-Client and Client-Waiter Hamiltonicity games on G(n, p)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample G(n, p) and write it as an edge list or JSON.
    Gen(GenArgs),
    /// Play one game between two strategies.
    PlayOne(PlayOneArgs),
    /// Run the trials of one grid point and print its CSV row.
    Trials(TrialsArgs),
    /// Run the whole (n, c) grid, print CSV and fit crossovers.
    Sweep(SweepArgs),
    /// Run the invariant battery.
    Verify(VerifyArgs),
    /// Simulate the box game on a disjoint family.
    Boxgame(BoxgameArgs),
    /// Play interactively against a strategy.
    Play(PlayArgs),
    /// Convert transcripts and graphs, or export graph statistics.
    #[command(subcommand)]
    Export(ExportCommand),
}

/// Run configuration: defaults, then `--config`, then the flags below, then
/// every `--set`.
#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Flat `key=value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// wc or cw.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Comma-separated vertex counts.
    #[arg(long)]
    pub n: Option<String>,
    /// Comma-separated constants c, p = c ln n / n.
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub waiter: Option<String>,
    #[arg(long)]
    pub client: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Any configuration key, e.g. `--set stage.c_bar=2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub sets: Vec<String>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            cfg.apply_text(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        }
        let flags: [(&str, Option<String>); 9] = [
            ("kind", self.kind.clone()),
            ("q", self.q.map(|v| v.to_string())),
            ("n", self.n.clone()),
            ("c", self.c.clone()),
            ("trials", self.trials.map(|v| v.to_string())),
            ("waiter", self.waiter.clone()),
            ("client", self.client.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
            ("workers", self.workers.map(|v| v.to_string())),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, &v).map_err(CliError::Usage)?;
            }
        }
        for s in &self.sets {
            let (k, v) = s.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {s:?}")))?;
            cfg.set(k, v).map_err(CliError::Usage)?;
        }
        cfg.validate().map_err(CliError::Usage)?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GraphFormat {
    Edgelist,
    Json,
    Dot,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// Edge probability.
    #[arg(long, conflicts_with = "c")]
    pub p: Option<f64>,
    /// Constant c with p = c ln n / n.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "edgelist")]
    pub format: GraphFormat,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlayOneArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Play on this edge-list file instead of sampling a board.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Trial seed; defaults to trial 0 of the first grid point.
    #[arg(long)]
    pub trial_seed: Option<u64>,
    #[arg(long)]
    pub transcript_out: Option<PathBuf>,
    #[arg(long)]
    pub board_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrialsArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Which entry of the c grid to run.
    #[arg(long, default_value_t = 0)]
    pub c_index: usize,
    /// Per-trial CSV (trial, seed, winner, ...).
    #[arg(long)]
    pub outcomes: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// CSV destination; the resolved configuration goes to `<out>.cfg`.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Crossover estimates as JSON.
    #[arg(long)]
    pub crossover_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "fast")]
    pub level: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Corrupt one ownership transition; the suite must then fail.
    #[arg(long)]
    pub inject_fault: bool,
    /// Full report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BoxClientName {
    Random,
    First,
    Greedy,
}

#[derive(Args, Debug)]
pub struct BoxgameArgs {
    /// Comma-separated set sizes (all t or t-1).
    #[arg(long, conflicts_with_all = ["t", "count"])]
    pub sizes: Option<String>,
    /// Size of every set when `--sizes` is not given.
    #[arg(long)]
    pub t: Option<usize>,
    /// Number of sets when `--sizes` is not given.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long, value_enum, default_value = "random")]
    pub client: BoxClientName,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Trajectory CSV destination.
    #[arg(long)]
    pub trajectory_out: Option<PathBuf>,
    /// Also solve the game exactly (small families only).
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Args, Debug)]
pub struct PlayArgs {
    #[arg(long, default_value = "client")]
    pub side: String,
    #[arg(long, default_value = "wc")]
    pub kind: String,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    /// Board from an edge-list file.
    #[arg(long, conflicts_with_all = ["complete", "n"])]
    pub graph: Option<PathBuf>,
    /// Play on the complete graph K_n.
    #[arg(long, conflicts_with = "n")]
    pub complete: Option<usize>,
    /// Sample G(n, c ln n / n).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 3.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Opponent strategy; `auto` picks staged/isolator for Waiter and random for Client.
    #[arg(long, default_value = "auto")]
    pub opponent: String,
    /// Transcript destination (written on completion and on end of input);
    /// the board goes next to it as `<save>.board.txt`.
    #[arg(long, default_value = "transcript.json")]
    pub save: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum ExportCommand {
    /// Replay a transcript on its board and write it as CSV or JSON.
    Transcript {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        board: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Convert an edge-list graph.
    Graph {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Degree counts next to their expectations in G(n, p).
    Degrees {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Random-graph property checks as a JSON report.
    Checks {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        t: f64,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// The F1 sum and F2 bound of a graph.
    Criterion {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        /// Defaults to the constructed constant.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::from_edge_list(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

#[derive(Serialize)]
struct GraphJson<'a> {
    n: usize,
    m: usize,
    edges: &'a [(usize, usize)],
    degrees: Vec<usize>,
}

fn format_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Edgelist => g.to_edge_list(),
        GraphFormat::Json => json(&GraphJson { n: g.n(), m: g.edge_count(), edges: g.edges(), degrees: g.degrees() }),
        GraphFormat::Dot => {
            let mut s = String::from("graph G {\n");
            for v in 0..g.n() {
                let _ = writeln!(s, "  {v};");
            }
            for (id, &(u, v)) in g.edges().iter().enumerate() {
                let _ = writeln!(s, "  {u} -- {v} [label={id}];");
            }
            s + "}\n"
        }
    }
}

pub fn run(cli: Cli, stdin: &mut impl BufRead, stdout: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::PlayOne(a) => play_one(a, stdout),
        Command::Trials(a) => trials(a, stdout),
        Command::Sweep(a) => sweep(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Boxgame(a) => boxgame(a, stdout),
        Command::Play(a) => play(a, stdin, stdout),
        Command::Export(c) => export(c),
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let p = match (a.p, a.c) {
        (Some(p), None) => p,
        (None, Some(c)) => log_scaled_p(a.n, c),
        _ => return Err(CliError::Usage("give exactly one of --p and --c".into())),
    };
    let spec = RandomGraphSpec::new(a.n, p, a.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(a.out.as_deref(), &format_graph(&sample_gnp(&spec), a.format))
}

fn play_one(a: PlayOneArgs, stdout: &mut impl Write) -> Result<()> {
    let cfg = a.run.resolve()?;
    let (n, c) = (cfg.n[0], cfg.c[0]);
    let seed = a.trial_seed.unwrap_or_else(|| derive_seed(point_seed(cfg.seed, n, 0), 0));
    let board = match &a.graph {
        Some(path) => Arc::new(read_graph(path)?),
        None => Arc::new(trial_board(n, c, seed)),
    };
    let (t, min_degree) = play_on_board(&cfg, board.clone(), seed)?;
    if let Some(path) = &a.transcript_out {
        emit(Some(path), &(t.to_json() + "\n"))?;
    }
    if let Some(path) = &a.board_out {
        emit(Some(path), &board.to_edge_list())?;
    }
    writeln!(stdout, "board: n = {}, m = {}, trial seed {seed}", board.n(), board.edge_count())?;
    writeln!(stdout, "waiter = {}, client = {}, kind = {}, q = {}", cfg.waiter_name(), cfg.client, cfg.kind.short_name(), cfg.q)?;
    writeln!(stdout, "rounds: {}, leftover: {}", t.rounds.len(), t.leftover.len())?;
    writeln!(stdout, "client graph: min degree {min_degree}, Hamiltonian: {}", t.target_holds)?;
    if let Some(f) = &t.fault {
        writeln!(stdout, "fault: {:?} in round {}: {}", f.side, f.round, f.violation)?;
    }
    writeln!(stdout, "winner: {:?}", t.winner)?;
    for (k, v) in &t.config {
        writeln!(stdout, "  {k} = {v}")?;
    }
    Ok(())
}

fn trials(a: TrialsArgs, stdout: &mut impl Write) -> Result<()> {
    let cfg = a.run.resolve()?;
    if a.c_index >= cfg.c.len() {
        return Err(CliError::Usage(format!("--c-index {} but the grid has {} entries", a.c_index, cfg.c.len())));
    }
    let point = run_point(&cfg, cfg.n[0], a.c_index)?;
    writeln!(stdout, "{CSV_HEADER}\n{}", point.csv_row())?;
    if let Some(path) = &a.outcomes {
        let mut s = String::from("trial,seed,winner,fault,rounds,target_holds,board_isolated,client_min_degree\n");
        for o in &point.outcomes {
            let _ = writeln!(
                s,
                "{},{},{:?},{},{},{},{},{}",
                o.trial, o.seed, o.winner, o.fault, o.rounds, o.target_holds, o.board_isolated, o.client_min_degree
            );
        }
        emit(Some(path), &s)?;
    }
    Ok(())
}

fn sweep(a: SweepArgs, stdout: &mut impl Write) -> Result<()> {
    let cfg = a.run.resolve()?;
    if cfg.c.len() < 3 {
        return Err(CliError::Usage("a sweep needs at least 3 grid points in c".into()));
    }
    eprint!("# resolved configuration\n{}", cfg.to_text());
    let points = run_sweep(&cfg)?;
    let csv = sweep_csv(&points);
    match &a.out {
        Some(path) => {
            emit(Some(path), &csv)?;
            let mut cfg_path = path.clone().into_os_string();
            cfg_path.push(".cfg");
            emit(Some(Path::new(&cfg_path)), &cfg.to_text())?;
        }
        None => stdout.write_all(csv.as_bytes())?,
    }
    let fits = crossovers(&points);
    for (n, x) in &fits {
        eprintln!(
            "n = {n}: crossover c* = {:.3} [{:.3}, {:.3}] ({:?})",
            x.c_star, x.ci_lo, x.ci_hi, x.method
        );
    }
    if let Some(path) = &a.crossover_out {
        #[derive(Serialize)]
        struct Fit<'a> {
            n: usize,
            #[serde(flatten)]
            crossover: &'a hamgame::harness::Crossover,
        }
        let rows: Vec<Fit> = fits.iter().map(|(n, x)| Fit { n: *n, crossover: x }).collect();
        emit(Some(path), &json(&rows))?;
    }
    Ok(())
}

fn verify(a: VerifyArgs, stdout: &mut impl Write) -> Result<()> {
    let level: VerifyLevel = a.level.parse().map_err(CliError::Usage)?;
    let report = verify_suite(VerifyOptions { level, seed: a.seed, inject_fault: a.inject_fault });
    stdout.write_all(report.to_text().as_bytes())?;
    if let Some(path) = &a.json {
        emit(Some(path), &json(&report))?;
    }
    if report.passed() {
        Ok(())
    } else {
        let first = report.failures().next().expect("some check failed");
        Err(CliError::Verification(format!(
            "{} / {} failed (seed {}): {}",
            first.module,
            first.invariant,
            first.seed,
            first.witness.as_deref().unwrap_or("")
        )))
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| CliError::Usage(format!("bad size {x:?}"))))
        .collect()
}

fn boxgame(a: BoxgameArgs, stdout: &mut impl Write) -> Result<()> {
    let sizes = match (&a.sizes, a.t, a.count) {
        (Some(s), _, _) => parse_list(s)?,
        (None, Some(t), Some(count)) => vec![t; count],
        _ => return Err(CliError::Usage("give --sizes or both --t and --count".into())),
    };
    if sizes.is_empty() || a.q == 0 {
        return Err(CliError::Usage("need at least one set and q >= 1".into()));
    }
    let t = *sizes.iter().max().expect("non-empty");
    let mut client: Box<dyn BoxClient> = match a.client {
        BoxClientName::Random => Box::new(RandomBoxClient::new(a.seed)),
        BoxClientName::First => Box::new(FirstBoxClient),
        BoxClientName::Greedy => Box::new(GreedyBoxClient),
    };
    let outcome = simulate_box_game(disjoint_family(&sizes), t, a.q, client.as_mut())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(stdout, "family: {} sets, type {t}, q = {}", sizes.len(), a.q)?;
    writeln!(stdout, "waiter won: {} (after round {:?}), rounds: {}", outcome.waiter_won, outcome.won_after_round, outcome.rounds)?;
    writeln!(stdout, "canonical throughout: {}, trajectory bound holds: {}", outcome.always_canonical, outcome.eq4_holds())?;
    if let Some(path) = &a.trajectory_out {
        emit(Some(path), &outcome.trajectory_csv())?;
    } else {
        stdout.write_all(outcome.trajectory_csv().as_bytes())?;
    }
    if a.exhaustive {
        if sizes.iter().sum::<usize>() > 40 {
            return Err(CliError::Usage("--exhaustive is limited to at most 40 elements".into()));
        }
        writeln!(stdout, "strategy beats every client: {}", strategy_beats_every_client(&sizes, a.q))?;
        writeln!(stdout, "waiter wins under optimal play: {}", box_game_value(&sizes, a.q))?;
    }
    Ok(())
}

fn play(a: PlayArgs, stdin: &mut impl BufRead, stdout: &mut impl Write) -> Result<()> {
    let side: Side = a.side.parse().map_err(CliError::Usage)?;
    let kind: GameKind = a.kind.parse().map_err(CliError::Usage)?;
    if a.q == 0 {
        return Err(CliError::Usage("q must be at least 1".into()));
    }
    let board = Arc::new(match (&a.graph, a.complete, a.n) {
        (Some(path), _, _) => read_graph(path)?,
        (None, Some(n), _) => Graph::complete(n),
        (None, None, Some(n)) => trial_board(n, a.c, a.seed),
        _ => return Err(CliError::Usage("give --graph, --complete or --n".into())),
    });
    let defaults = RunConfig { kind, q: a.q, ..RunConfig::default() };
    let opponent = match side {
        Side::Client => {
            let name = if a.opponent == "auto" { defaults.waiter_name().to_string() } else { a.opponent.clone() };
            Opponent::Waiter(
                waiter_by_name(&name, &board, a.q, kind, &defaults.stage, a.seed)
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            )
        }
        Side::Waiter => {
            let name = if a.opponent == "auto" { "random" } else { a.opponent.as_str() };
            Opponent::Client(client_by_name(name, a.seed).map_err(|e| CliError::Usage(e.to_string()))?)
        }
    };
    let session = interactive::play(board.clone(), a.q, kind, side, opponent, a.seed, defaults.exact_cap, stdin, stdout)?;
    emit(Some(&a.save), &(session.transcript.to_json() + "\n"))?;
    let mut board_path = a.save.clone().into_os_string();
    board_path.push(".board.txt");
    emit(Some(Path::new(&board_path)), &board.to_edge_list())?;
    writeln!(stdout, "transcript saved to {}", a.save.display())?;
    Ok(())
}

fn export(c: ExportCommand) -> Result<()> {
    match c {
        ExportCommand::Transcript { transcript, board, format, out } => {
            let text = fs::read_to_string(&transcript).with_context(|| format!("reading {}", transcript.display()))?;
            let t = Transcript::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", transcript.display())))?;
            let g = Arc::new(read_graph(&board)?);
            let state = replay(g.clone(), &t).map_err(|e| anyhow!("transcript does not replay: {e}"))?;
            let body = match format {
                TableFormat::Json => t.to_json() + "\n",
                TableFormat::Csv => {
                    let mut s = String::from("round,offer,pick,pick_u,pick_v\n");
                    for (i, r) in t.rounds.iter().enumerate() {
                        let (u, v) = g.edge(r.pick);
                        let offer: Vec<String> = r.offer.iter().map(|e| e.to_string()).collect();
                        let _ = writeln!(s, "{},{},{},{u},{v}", i + 1, offer.join(" "), r.pick);
                    }
                    let _ = writeln!(s, "# leftover: {:?}; client edges: {}", t.leftover, state.client_count());
                    s
                }
            };
            emit(out.as_deref(), &body)
        }
        ExportCommand::Graph { input, format, out } => emit(out.as_deref(), &format_graph(&read_graph(&input)?, format)),
        ExportCommand::Degrees { input, p, q, out } => {
            emit(out.as_deref(), &json(&degree_stats(&read_graph(&input)?, p, q)))
        }
        ExportCommand::Checks { input, p, t, k, samples, seed, out } => {
            let params = ChecksParams { p, t, k, samples, seed };
            emit(out.as_deref(), &json(&random_graph_checks(&read_graph(&input)?, &params)))
        }
        ExportCommand::Criterion { input, q, eps, r, lambda, out } => {
            let mut cfg = CriterionConfig::constructed(q, eps);
            cfg.r = r.unwrap_or(cfg.r);
            cfg.lambda = lambda.unwrap_or(cfg.lambda);
            let (f1, f2) = f1_f2_sums(&read_graph(&input)?, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
            #[derive(Serialize)]
            struct Out {
                config: CriterionConfig,
                f1: hamgame::analytics::criterion::F1Sum,
                f2: hamgame::analytics::criterion::F2Bound,
            }
            emit(out.as_deref(), &json(&Out { config: cfg, f1, f2 }))
        }
    }
}
