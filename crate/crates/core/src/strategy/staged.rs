//! Waiter's staged strategy for forcing a Hamilton cycle in Client's graph.
//!
//! 0. Withhold a random reservoir `R` (each edge with probability
//!    `p̄ = c̄ / log n`); the rest is the main graph `G_M`.
//! 1. Force minimum degree `γ` on `G_M` with the Eulerian forcer.
//! 2. Repair expansion: while Client's graph has a set `A`, `|A| <= t`, with
//!    `|N(A)| < k|A|`, offer edges from `A` to `V \ (A ∪ N(A))`, reservoir
//!    edges first.
//! 3. Offer boosters of Client's graph until it is Hamiltonian.

use serde::Serialize;

use crate::game::{GameState, Offer, WaiterStrategy};
use crate::graph::{split_reservoir, EdgeId, Graph, Vertex};
use crate::hamilton::boosters::{boosters_exact, certify_from_path};
use crate::hamilton::expander::{find_violation, is_expander_with_budget, subsets_up_to, ExpanderMode};
use crate::hamilton::posa::grow_path;
use crate::rng::{derive_seed, rng_from_seed, GameRng};

use super::forcer::{gamma_bound, MinDegreeForcer};
use super::{offer_size, pad_lowest};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageConfig {
    /// Reservoir constant: `p̄ = c̄ / log n`.
    pub c_bar: f64,
    /// Scale of the expansion checked after Stage 1: `(c1 n, 2)`.
    pub c1: f64,
    /// Cap on the forced degree: `γ <= ⌈c2 log n⌉`.
    pub c2: f64,
    /// Forced degree override (still clamped to the forcer's bound).
    pub gamma: Option<usize>,
    /// Expansion target `(t, k)` of Stage 2; `t` defaults to `n / 5`.
    pub t: Option<usize>,
    pub k: usize,
    /// Boards up to this many vertices use exact boosters.
    pub exact_cap: usize,
    /// Subset budget under which expansion is checked exhaustively.
    pub exact_budget: u128,
    /// Seeds grown per sampled expansion check.
    pub expander_trials: usize,
    /// Rotated paths used as secondary starting points for boosters.
    pub rotation_budget: usize,
}

impl Default for StageConfig {
    fn default() -> Self {
        StageConfig {
            c_bar: 4.0,
            c1: 0.01,
            c2: 0.5,
            gamma: None,
            t: None,
            k: 2,
            exact_cap: 12,
            exact_budget: 200_000,
            expander_trials: 16,
            rotation_budget: 8,
        }
    }
}

impl StageConfig {
    /// Flat `key=value` pairs, as used in run configurations.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let opt = |o: Option<usize>| o.map_or_else(|| "auto".to_string(), |v| v.to_string());
        vec![
            ("c_bar".into(), self.c_bar.to_string()),
            ("c1".into(), self.c1.to_string()),
            ("c2".into(), self.c2.to_string()),
            ("gamma".into(), opt(self.gamma)),
            ("t".into(), opt(self.t)),
            ("k".into(), self.k.to_string()),
            ("exact_cap".into(), self.exact_cap.to_string()),
            ("exact_budget".into(), self.exact_budget.to_string()),
            ("expander_trials".into(), self.expander_trials.to_string()),
            ("rotation_budget".into(), self.rotation_budget.to_string()),
        ]
    }

    /// Applies one `key=value` setting. Unknown keys are reported as `Ok(false)`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool, String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value {v:?} for {key}"))
        }
        let opt = |v: &str| -> Result<Option<usize>, String> {
            if v == "auto" {
                Ok(None)
            } else {
                num(key, v).map(Some)
            }
        };
        match key {
            "c_bar" => self.c_bar = num(key, value)?,
            "c1" => self.c1 = num(key, value)?,
            "c2" => self.c2 = num(key, value)?,
            "gamma" => self.gamma = opt(value)?,
            "t" => self.t = opt(value)?,
            "k" => self.k = num(key, value)?,
            "exact_cap" => self.exact_cap = num(key, value)?,
            "exact_budget" => self.exact_budget = num(key, value)?,
            "expander_trials" => self.expander_trials = num(key, value)?,
            "rotation_budget" => self.rotation_budget = num(key, value)?,
            _ => return Ok(false),
        }
        self.validate()?;
        Ok(true)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.c_bar >= 0.0) || !(self.c1 > 0.0) || !(self.c2 > 0.0) {
            return Err("need c_bar >= 0 and c1, c2 > 0".into());
        }
        if self.k == 0 {
            return Err("k must be positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Forcing,
    Repair,
    Boosters,
    Finished,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stall {
    pub stage: Stage,
    pub round: usize,
    pub reason: String,
}

/// What happened during a game, for transcripts and diagnostics.
#[derive(Clone, Debug, Default, Serialize)]
pub struct StageReport {
    pub p_bar: f64,
    pub reservoir_edges: usize,
    pub main_min_degree: usize,
    pub gamma: usize,
    pub gamma_bound: usize,
    pub forced_rounds: usize,
    pub forced_offered: usize,
    /// Sampled `(c1 n, 2)`-expansion of Client's graph after Stage 1.
    pub stage1_expander: Option<bool>,
    pub repair_rounds: usize,
    /// Round at which Stage 2 exited with no violating set found.
    pub expander_certified_round: Option<usize>,
    pub expander_mode: Option<&'static str>,
    pub booster_rounds: usize,
    pub dilution_rounds: usize,
    pub hamiltonian_round: Option<usize>,
    pub stalls: Vec<Stall>,
}

/// Outcome of one call of [`expander_repair_offer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Repair {
    /// Offer aimed at the violating set `set`; `targeted` of its edges lead
    /// from `set` to vertices outside `set ∪ N(set)`.
    Offer { offer: Offer, set: Vec<Vertex>, targeted: usize },
    /// No violating set was found.
    Expander { mode: &'static str },
    /// A violating set exists but no free edge leaves it.
    Stall { set: Vec<Vertex> },
}

/// Free board edges from `set` to vertices outside `set ∪ N_C(set)`, with
/// reservoir edges first and lowest id within each group.
fn outward_edges(state: &GameState, client: &Graph, set: &[Vertex], reservoir: &[bool]) -> Vec<EdgeId> {
    let n = state.board().n();
    let mut blocked = vec![false; n];
    for &a in set {
        blocked[a] = true;
        for w in client.neighbors(a) {
            blocked[w] = true;
        }
    }
    let mut out: Vec<EdgeId> = Vec::new();
    for &a in set {
        for &(w, e) in state.board().incident(a) {
            if !blocked[w] && state.is_free(e) {
                out.push(e);
            }
        }
    }
    out.sort_unstable_by_key(|&e| (!reservoir[e], e));
    out.dedup();
    out
}

/// Finds a set violating `(t, k)`-expansion in Client's graph and offers
/// edges that enlarge its neighbourhood.
///
/// Vertices of Client degree below `k` come first (least free slack first),
/// then the smallest component if it has at most `t` vertices, then sets
/// found by exhaustive search (when `exact_budget` allows) or greedy growth.
/// Offers are padded to the required size with lowest-id free edges.
pub fn expander_repair_offer(
    state: &GameState,
    reservoir: &[bool],
    t: usize,
    k: usize,
    trials: usize,
    exact_budget: u128,
    rng: &mut GameRng,
) -> Repair {
    let client = state.client_graph();
    let n = client.n();
    let q = state.q();
    let size = offer_size(state);
    let low = (0..n).filter(|&v| client.degree(v) < k).min_by_key(|&v| {
        let slack = state.free_degree(v) as isize - ((q + 1) * (k - client.degree(v))) as isize;
        (slack, v)
    });
    let (set, mode) = if let Some(v) = low {
        (Some(vec![v]), "degree")
    } else if let Some(c) = client.connected_components().into_iter().filter(|c| c.len() < n).min_by_key(Vec::len) {
        if c.len() <= t {
            (Some(c), "component")
        } else {
            search(&client, t, k, trials, exact_budget, rng)
        }
    } else {
        search(&client, t, k, trials, exact_budget, rng)
    };
    let Some(set) = set else {
        return Repair::Expander { mode };
    };
    let mut offer = outward_edges(state, &client, &set, reservoir);
    if offer.is_empty() {
        return Repair::Stall { set };
    }
    offer.truncate(size);
    let targeted = offer.len();
    if state.kind() == crate::game::GameKind::WaiterClient {
        pad_lowest(state, &mut offer, size);
    }
    Repair::Offer { offer, set, targeted }
}

fn search(
    client: &Graph,
    t: usize,
    k: usize,
    trials: usize,
    exact_budget: u128,
    rng: &mut GameRng,
) -> (Option<Vec<Vertex>>, &'static str) {
    if subsets_up_to(client.n(), t) <= exact_budget {
        let r = is_expander_with_budget(client, t, k, ExpanderMode::Exact, exact_budget).expect("within budget");
        (r.witness, "exact")
    } else {
        (find_violation(client, t, k, trials, rng), "sampled")
    }
}

/// A Stage-3 offer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoosterOffer {
    pub offer: Offer,
    /// How many offered edges are certified boosters.
    pub boosters: usize,
    /// Fewer than the full offer size were certified.
    pub dilution: bool,
}

/// Offers free certified boosters of Client's graph (exact for graphs of at
/// most `exact_cap` vertices, certified from `path` by rotations otherwise),
/// lowest id first, filling up with lowest-id free edges.
pub fn booster_offer(state: &GameState, client: &Graph, path: &[Vertex], exact_cap: usize, rotation_budget: usize) -> BoosterOffer {
    let size = offer_size(state);
    let pairs = if client.n() <= exact_cap {
        boosters_exact(client).map(|b| b.pairs).unwrap_or_default()
    } else {
        certify_from_path(client, path, rotation_budget).pairs
    };
    let mut offer: Offer =
        pairs.iter().filter_map(|&(u, v)| state.board().edge_id(u, v)).filter(|&e| state.is_free(e)).collect();
    offer.sort_unstable();
    offer.truncate(size);
    let boosters = offer.len();
    let dilution = boosters < size;
    pad_lowest(state, &mut offer, size);
    BoosterOffer { offer, boosters, dilution }
}

pub struct StagedWaiter {
    cfg: StageConfig,
    q: usize,
    t: usize,
    reservoir: Vec<bool>,
    forcer: MinDegreeForcer,
    stage: Stage,
    path: Vec<Vertex>,
    path_edges_seen: usize,
    cycle: bool,
    hopeless: bool,
    rng: GameRng,
    report: StageReport,
}

impl StagedWaiter {
    pub fn new(board: &Graph, q: usize, cfg: StageConfig, seed: u64) -> Self {
        let n = board.n();
        let log_n = (n.max(2) as f64).ln();
        let p_bar = (cfg.c_bar / log_n).clamp(0.0, 1.0);
        let split = split_reservoir(board, p_bar, derive_seed(seed, 0)).expect("p̄ is clamped to [0, 1]");
        let mut reservoir = vec![false; board.edge_count()];
        for &e in &split.reservoir_ids {
            reservoir[e] = true;
        }
        let main_min_degree = split.main.min_degree();
        let bound = gamma_bound(main_min_degree, q);
        let cap = (cfg.c2 * log_n).ceil() as usize;
        let gamma = cfg.gamma.unwrap_or(cap).min(bound);
        let forcer = MinDegreeForcer::on_edges(board, &split.main_ids, q, gamma).expect("γ is clamped to the bound");
        let t = cfg.t.unwrap_or(n / 5).max(1);
        let report = StageReport {
            p_bar,
            reservoir_edges: split.reservoir_ids.len(),
            main_min_degree,
            gamma,
            gamma_bound: bound,
            ..StageReport::default()
        };
        StagedWaiter {
            cfg,
            q,
            t,
            reservoir,
            forcer,
            stage: Stage::Forcing,
            path: Vec::new(),
            path_edges_seen: usize::MAX,
            cycle: false,
            hopeless: false,
            rng: rng_from_seed(derive_seed(seed, 1)),
            report,
        }
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn report(&self) -> &StageReport {
        &self.report
    }

    pub fn reservoir(&self) -> &[bool] {
        &self.reservoir
    }

    fn stall(&mut self, state: &GameState, reason: impl Into<String>) {
        self.report.stalls.push(Stall { stage: self.stage, round: state.round(), reason: reason.into() });
    }

    /// Keeps `self.path` a maximal rotation-extension path of Client's graph.
    fn refresh_path(&mut self, state: &GameState, client: &Graph) {
        if self.path_edges_seen == state.client_count() {
            return;
        }
        self.path_edges_seen = state.client_count();
        let start = if self.path.is_empty() {
            vec![(0..client.n()).max_by_key(|&v| (client.degree(v), std::cmp::Reverse(v))).unwrap_or(0)]
        } else {
            std::mem::take(&mut self.path)
        };
        let (cycle, path) = grow_path(client, start, &mut self.rng);
        self.cycle = cycle.is_some();
        self.path = path;
    }

    fn enter(&mut self, stage: Stage, state: &GameState) {
        self.stage = stage;
        if stage == Stage::Repair {
            let n = state.board().n();
            let t1 = ((self.cfg.c1 * n as f64).floor() as usize).max(1);
            let client = state.client_graph();
            let v = find_violation(&client, t1, 2, self.cfg.expander_trials, &mut self.rng).is_none();
            self.report.stage1_expander = Some(v);
        }
    }

    fn lowest(state: &GameState) -> Offer {
        state.free_edges().take(offer_size(state)).collect()
    }
}

impl WaiterStrategy for StagedWaiter {
    fn name(&self) -> String {
        "staged".into()
    }

    fn offer(&mut self, state: &GameState) -> Offer {
        if !self.hopeless && (0..state.board().n()).any(|v| state.client_degree(v) + state.free_degree(v) < 2) {
            self.hopeless = true;
            self.stall(state, "some vertex can no longer reach Client degree 2");
        }
        if self.hopeless || self.stage == Stage::Finished {
            return Self::lowest(state);
        }
        if self.stage == Stage::Forcing {
            if let Some(offer) = self.forcer.next_forced(state) {
                self.report.forced_rounds = self.forcer.forced_rounds();
                self.report.forced_offered = self.forcer.offered();
                return offer;
            }
            self.enter(Stage::Repair, state);
        }
        if self.stage == Stage::Repair {
            let repair = expander_repair_offer(
                state,
                &self.reservoir,
                self.t,
                self.cfg.k,
                self.cfg.expander_trials,
                self.cfg.exact_budget,
                &mut self.rng,
            );
            match repair {
                Repair::Offer { offer, .. } => {
                    self.report.repair_rounds += 1;
                    return offer;
                }
                Repair::Expander { mode } => {
                    self.report.expander_certified_round = Some(state.round());
                    self.report.expander_mode = Some(mode);
                }
                Repair::Stall { set } => {
                    self.stall(state, format!("no free edge leaves violating set of size {}", set.len()));
                }
            }
            self.enter(Stage::Boosters, state);
        }
        let client = state.client_graph();
        self.refresh_path(state, &client);
        if self.cycle {
            self.report.hamiltonian_round = Some(state.round());
            self.stage = Stage::Finished;
            return Self::lowest(state);
        }
        if !client.is_connected() {
            // Join the smallest component to the rest.
            let comps = client.connected_components();
            let small = comps.iter().min_by_key(|c| c.len()).expect("disconnected graph has components");
            let mut offer = outward_edges(state, &client, small, &self.reservoir);
            let size = offer_size(state);
            offer.truncate(size);
            if offer.is_empty() {
                self.stall(state, "no free edge leaves a component of Client's graph");
                self.hopeless = true;
                return Self::lowest(state);
            }
            if state.kind() == crate::game::GameKind::WaiterClient {
                pad_lowest(state, &mut offer, size);
            }
            self.report.repair_rounds += 1;
            return offer;
        }
        let b = booster_offer(state, &client, &self.path, self.cfg.exact_cap, self.cfg.rotation_budget);
        self.report.booster_rounds += 1;
        if b.dilution {
            self.report.dilution_rounds += 1;
        }
        b.offer
    }

    fn config(&self) -> Vec<(String, String)> {
        let r = &self.report;
        let mut c = self.cfg.to_pairs();
        c.push(("q".into(), self.q.to_string()));
        c.push(("p_bar".into(), format!("{:.6}", r.p_bar)));
        c.push(("gamma_used".into(), r.gamma.to_string()));
        c.push(("t_used".into(), self.t.to_string()));
        c.push(("forced_rounds".into(), r.forced_rounds.to_string()));
        c.push(("repair_rounds".into(), r.repair_rounds.to_string()));
        c.push(("booster_rounds".into(), r.booster_rounds.to_string()));
        c.push(("dilution_rounds".into(), r.dilution_rounds.to_string()));
        c.push(("stalls".into(), r.stalls.len().to_string()));
        c.push((
            "expander_certified".into(),
            r.expander_certified_round.map_or_else(|| "no".to_string(), |x| format!("round {x} ({})", r.expander_mode.unwrap_or("?"))),
        ));
        c
    }
}
