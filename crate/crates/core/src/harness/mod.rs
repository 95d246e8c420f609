//! Monte Carlo harness: seeded trials on `G(n, c log n / n)`, sweep grids,
//! CSV output and crossover estimates.
//!
//! Seeds: the point seed is `derive_seed(derive_seed(master, n), c_index)`
//! and trial `i` uses `derive_seed(point_seed, i)`, from which the board,
//! Waiter, Client and adjudicator streams are derived (indices 0 to 3).

mod config;
pub mod stats;
pub mod verify;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use config::RunConfig;
pub use stats::{fit_crossover, separated, wilson, Crossover, FitMethod, Z95};
pub use verify::{verify_suite, VerifyLevel, VerifyOptions, VerifyReport};

use crate::game::{play_out, ClientStrategy, GameKind, GameState, Player, Transcript, WaiterStrategy};
use crate::graph::{log_scaled_p, sample_gnp, Graph, RandomGraphSpec};
use crate::hamilton::certified_hamiltonian;
use crate::rng::{derive_seed, point_seed, Stream};
use crate::strategy::forcer::gamma_bound;
use crate::strategy::{
    client_by_name, BoxIsolatorWaiter, IsolatorWaiter, LowestIdWaiter, MinDegreeForcer, RandomWaiter, StageConfig,
    StagedWaiter, StrategyError,
};

pub const CSV_HEADER: &str = "kind,q,n,c,p,trials,waiter_wins,client_wins,faults,mean_rounds,ci_lo,ci_hi,seed";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{faults} of {trials} trials at n = {n}, c = {c} ended in a strategy fault (first: {first})")]
    FaultThreshold { n: usize, c: f64, trials: usize, faults: usize, first: String },
}

/// Builds a Waiter strategy by name for one game.
pub fn waiter_by_name(
    name: &str,
    board: &Graph,
    q: usize,
    kind: GameKind,
    stage: &StageConfig,
    seed: u64,
) -> Result<Box<dyn WaiterStrategy + Send>, StrategyError> {
    Ok(match name {
        "lowest" => Box::new(LowestIdWaiter),
        "random" => Box::new(RandomWaiter::new(seed)),
        "forcer" => {
            let gamma = stage.gamma.unwrap_or_else(|| gamma_bound(board.min_degree(), q));
            Box::new(MinDegreeForcer::new(board, q, gamma)?)
        }
        "staged" => {
            if kind != GameKind::WaiterClient {
                return Err(StrategyError::WrongKind { name: name.into(), kind });
            }
            Box::new(StagedWaiter::new(board, q, stage.clone(), seed))
        }
        "isolator" => Box::new(IsolatorWaiter::new(board, q)),
        "box-isolator" => match BoxIsolatorWaiter::new(board, q) {
            Some(w) => Box::new(w),
            None => Box::new(LowestIdWaiter),
        },
        other => return Err(StrategyError::Unknown(other.into())),
    })
}

/// Hamiltonicity of Client's graph, exact on small boards.
pub fn hamiltonicity_target(exact_cap: usize, restarts: usize, seed: u64) -> impl Fn(&GameState) -> bool {
    move |s: &GameState| certified_hamiltonian(&s.client_graph(), exact_cap, seed, restarts)
}

/// One finished trial.
#[derive(Clone, Debug, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub winner: Player,
    pub fault: bool,
    pub rounds: usize,
    pub target_holds: bool,
    /// The board itself has an isolated vertex.
    pub board_isolated: bool,
    /// Minimum degree of Client's final graph.
    pub client_min_degree: usize,
}

/// The board of a trial.
pub fn trial_board(n: usize, c: f64, trial_seed: u64) -> Graph {
    let spec = RandomGraphSpec::log_scaled(n, c, Stream::Board.seed(trial_seed)).expect("validated configuration");
    sample_gnp(&spec)
}

/// Plays one trial and returns its transcript together with the board.
pub fn play_trial(cfg: &RunConfig, n: usize, c: f64, trial_seed: u64) -> Result<(Arc<Graph>, Transcript, usize), HarnessError> {
    let board = Arc::new(trial_board(n, c, trial_seed));
    let (t, min_degree) = play_on_board(cfg, board.clone(), trial_seed)?;
    Ok((board, t, min_degree))
}

/// Plays the configured strategies on a given board; also returns the
/// minimum degree of Client's final graph.
pub fn play_on_board(cfg: &RunConfig, board: Arc<Graph>, trial_seed: u64) -> Result<(Transcript, usize), HarnessError> {
    let mut waiter = waiter_by_name(cfg.waiter_name(), &board, cfg.q, cfg.kind, &cfg.stage, Stream::Waiter.seed(trial_seed))?;
    let mut client: Box<dyn ClientStrategy + Send> = client_by_name(&cfg.client, Stream::Client.seed(trial_seed))?;
    let target = hamiltonicity_target(cfg.exact_cap, cfg.restarts, Stream::Adjudicator.seed(trial_seed));
    let t = play_out(board.clone(), cfg.q, cfg.kind, waiter.as_mut(), client.as_mut(), &target, trial_seed)
        .map_err(|v| HarnessError::Config(v.to_string()))?;
    let client_graph = board.subgraph_from_edge_ids(&t.client_edge_ids());
    Ok((t, client_graph.min_degree()))
}

pub fn run_trial(cfg: &RunConfig, n: usize, c: f64, trial: usize, seed: u64) -> Result<TrialOutcome, HarnessError> {
    let (board, t, client_min_degree) = play_trial(cfg, n, c, seed)?;
    Ok(TrialOutcome {
        trial,
        seed,
        winner: t.winner,
        fault: t.fault.is_some(),
        rounds: t.rounds.len(),
        target_holds: t.target_holds,
        board_isolated: (0..n).any(|v| board.degree(v) == 0),
        client_min_degree,
    })
}

/// Summary of one grid point; one CSV row.
#[derive(Clone, Debug, Serialize)]
pub struct PointSummary {
    pub kind: GameKind,
    pub q: usize,
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub trials: usize,
    pub waiter_wins: usize,
    pub client_wins: usize,
    pub faults: usize,
    pub mean_rounds: f64,
    /// Wilson 95% interval for Waiter's win rate (faults count as
    /// non-wins).
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
    #[serde(skip)]
    pub outcomes: Vec<TrialOutcome>,
}

impl PointSummary {
    /// Games in which Client's graph ended Hamiltonian.
    pub fn hamiltonian(&self) -> usize {
        self.outcomes.iter().filter(|o| o.target_holds && !o.fault).count()
    }

    /// Wins of the side that wants Hamiltonicity: Waiter in Waiter-Client,
    /// Client in Client-Waiter games.
    pub fn hamiltonicity_side_wins(&self) -> usize {
        match self.kind {
            GameKind::WaiterClient => self.waiter_wins,
            GameKind::ClientWaiter => self.client_wins,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{},{},{},{},{:.3},{:.4},{:.4},{}",
            self.kind.short_name(),
            self.q,
            self.n,
            self.c,
            self.p,
            self.trials,
            self.waiter_wins,
            self.client_wins,
            self.faults,
            self.mean_rounds,
            self.ci_lo,
            self.ci_hi,
            self.seed
        )
    }
}

fn map_trials<F>(workers: usize, count: usize, f: F) -> Vec<Result<TrialOutcome, HarnessError>>
where
    F: Fn(usize) -> Result<TrialOutcome, HarnessError> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || (0..count).into_par_iter().map(&f).collect::<Vec<_>>();
        if workers == 0 {
            return run();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(run),
            Err(_) => (0..count).map(&f).collect(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        (0..count).map(f).collect()
    }
}

/// Runs every trial of grid point `(n, c_index)`.
pub fn run_point(cfg: &RunConfig, n: usize, c_index: usize) -> Result<PointSummary, HarnessError> {
    cfg.validate().map_err(HarnessError::Config)?;
    let c = cfg.c[c_index];
    let seed = point_seed(cfg.seed, n, c_index);
    let results = map_trials(cfg.workers, cfg.trials, |i| run_trial(cfg, n, c, i, derive_seed(seed, i as u64)));
    let outcomes: Vec<TrialOutcome> = results.into_iter().collect::<Result<_, _>>()?;
    let faults = outcomes.iter().filter(|o| o.fault).count();
    if faults as f64 > cfg.fault_threshold * cfg.trials as f64 {
        let first = outcomes.iter().find(|o| o.fault).map_or(String::new(), |o| format!("trial {} seed {}", o.trial, o.seed));
        return Err(HarnessError::FaultThreshold { n, c, trials: cfg.trials, faults, first });
    }
    let wins = |p: Player| outcomes.iter().filter(|o| !o.fault && o.winner == p).count();
    let waiter_wins = wins(Player::Waiter);
    let client_wins = wins(Player::Client);
    let mean_rounds = outcomes.iter().map(|o| o.rounds as f64).sum::<f64>() / cfg.trials as f64;
    let (ci_lo, ci_hi) = wilson(waiter_wins, cfg.trials, Z95);
    Ok(PointSummary {
        kind: cfg.kind,
        q: cfg.q,
        n,
        c,
        p: log_scaled_p(n, c),
        trials: cfg.trials,
        waiter_wins,
        client_wins,
        faults,
        mean_rounds,
        ci_lo,
        ci_hi,
        seed,
        outcomes,
    })
}

/// Runs the whole grid, `n` outermost, in configuration order.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<PointSummary>, HarnessError> {
    let mut out = Vec::new();
    for &n in &cfg.n {
        for ci in 0..cfg.c.len() {
            out.push(run_point(cfg, n, ci)?);
        }
    }
    Ok(out)
}

pub fn sweep_csv(points: &[PointSummary]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for p in points {
        s.push_str(&p.csv_row());
        s.push('\n');
    }
    s
}

/// Crossover of the Hamiltonicity side's win rate for each `n`.
pub fn crossovers(points: &[PointSummary]) -> Vec<(usize, Crossover)> {
    let mut ns: Vec<usize> = points.iter().map(|p| p.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let pts: Vec<(f64, usize, usize)> =
                points.iter().filter(|p| p.n == n).map(|p| (p.c, p.hamiltonicity_side_wins(), p.trials)).collect();
            (n, fit_crossover(&pts))
        })
        .collect()
}
