//! Self-check battery over every module's invariants. `Fast` caps sizes and
//! repetition counts; `Full` runs the stated counts.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{fit_crossover, run_sweep, sweep_csv, RunConfig};
use crate::analytics::{
    criterion_sums, degree_identity_check, empirical_degree_counts, mu_closed_form, variance_xk,
};
use crate::boxgame::{disjoint_family, simulate_box_game, strategy_beats_every_client, RandomBoxClient};
use crate::game::{run_to_end, GameKind, GameState, Owner, WaiterStrategy};
use crate::graph::{euler_orientation, sample_gnp, split_reservoir, Graph, RandomGraphSpec};
use crate::hamilton::{
    boosters_exact, boosters_posa, exact_hamiltonian, is_expander, is_simple_path, longest_path_len, posa_extend,
    ExpanderMode,
};
use crate::rng::{derive_seed, rng_from_seed, GameRng};
use crate::strategy::{
    client_by_name, IsolatorWaiter, LowestIdWaiter, MinDegreeForcer, RandomWaiter, StageConfig, StagedWaiter,
    CLIENT_NAMES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyLevel {
    Fast,
    Full,
}

impl std::str::FromStr for VerifyLevel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(VerifyLevel::Fast),
            "full" => Ok(VerifyLevel::Full),
            other => Err(format!("unknown level {other:?} (fast or full)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub level: VerifyLevel,
    pub seed: u64,
    /// Corrupt one ownership transition in the engine checks; the partition
    /// invariant must then fail.
    pub inject_fault: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyCheck {
    pub module: &'static str,
    pub invariant: &'static str,
    pub pass: bool,
    pub cases: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<22} {:<44} cases={:<6} seed={} ({} ms)\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.module,
                c.invariant,
                c.cases,
                c.seed,
                c.millis
            ));
            if let Some(w) = &c.witness {
                out.push_str(&format!("     witness: {w}\n"));
            }
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

type CheckFn = fn(&Ctx) -> Result<usize, String>;

struct Ctx {
    full: bool,
    seed: u64,
    inject: bool,
}

impl Ctx {
    fn count(&self, fast: usize, full: usize) -> usize {
        if self.full {
            full
        } else {
            fast
        }
    }

    fn rng(&self) -> GameRng {
        rng_from_seed(self.seed)
    }
}

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    sample_gnp(&RandomGraphSpec::new(n, p, seed).expect("valid parameters"))
}

fn ensure(ok: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("graph-core", "sample_gnp determinism", gnp_determinism),
    ("graph-core", "reservoir split conservation", split_conservation),
    ("graph-core", "euler orientation out-degrees", orientation_degrees),
    ("graph-core", "set queries vs pair scan", set_queries),
    ("game-engine", "partition and owner monotonicity", partition_and_monotonicity),
    ("game-engine", "waiter-client count law", count_law),
    ("game-engine", "fault isolation", fault_isolation),
    ("box-game", "canonicality and trajectory bound", box_trajectories),
    ("box-game", "sufficiency vs every client", box_sufficiency),
    ("hamiltonicity-analysis", "posa boosters are exact boosters", booster_soundness),
    ("hamiltonicity-analysis", "booster semantics", booster_semantics),
    ("hamiltonicity-analysis", "expansion monotone in t", expansion_monotone),
    ("hamiltonicity-analysis", "posa paths are simple", posa_simple),
    ("strategies", "forcer degree and offer bounds", forcer_bounds),
    ("strategies", "staged waiter offers free edges", staged_legal),
    ("strategies", "strategies are seed-deterministic", strategy_determinism),
    ("analytics", "degree identity battery", identity_battery),
    ("analytics", "empirical degree counts vs mu", degree_counts),
    ("analytics", "criterion sums vs naive oracle", criterion_oracle),
    ("analytics", "variance closed form vs simulation", variance_mc),
    ("analytics", "X_k >= mu_k/2 frequency", chebyshev_conclusion),
    ("cli-harness", "sweep CSV independent of workers", sweep_determinism),
    ("cli-harness", "crossover fit order-invariant", crossover_order),
];

pub fn verify_suite(options: VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    for (i, &(module, invariant, f)) in CHECKS.iter().enumerate() {
        let seed = derive_seed(options.seed, i as u64);
        let ctx = Ctx { full: options.level == VerifyLevel::Full, seed, inject: options.inject_fault };
        let start = Instant::now();
        let (pass, cases, witness) = match f(&ctx) {
            Ok(cases) => (true, cases, None),
            Err(w) => (false, 0, Some(w)),
        };
        checks.push(VerifyCheck { module, invariant, pass, cases, seed, witness, millis: start.elapsed().as_millis() });
    }
    VerifyReport { options, checks }
}

fn gnp_determinism(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(20, 100);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let (n, p, s) = (rng.gen_range(1..120), rng.gen::<f64>(), rng.gen());
        let (a, b) = (gnp(n, p, s), gnp(n, p, s));
        ensure(a.to_edge_list() == b.to_edge_list(), || format!("case {i}: n={n} p={p} seed={s}"))?;
    }
    Ok(cases)
}

fn split_conservation(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(30, 200);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let g = gnp(rng.gen_range(2..80), rng.gen(), rng.gen());
        let s = split_reservoir(&g, rng.gen(), rng.gen()).map_err(|e| e.to_string())?;
        let mut all: Vec<usize> = s.main_ids.iter().chain(&s.reservoir_ids).copied().collect();
        all.sort_unstable();
        ensure(
            s.main.edge_count() + s.reservoir.edge_count() == g.edge_count() && all == (0..g.edge_count()).collect::<Vec<_>>(),
            || format!("case {i}: main {} + reservoir {} vs {}", s.main.edge_count(), s.reservoir.edge_count(), g.edge_count()),
        )?;
    }
    Ok(cases)
}

fn orientation_degrees(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(100, 1000);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let n = rng.gen_range(1..=200);
        let g = gnp(n, rng.gen_range(0.0..0.3), rng.gen());
        let o = euler_orientation(&g);
        let total: usize = (0..n).map(|u| o.out_degree(u)).sum();
        ensure(total == g.edge_count(), || format!("case {i}: Σ|E(u)| = {total} vs e(G) = {}", g.edge_count()))?;
        if let Some(u) = (0..n).find(|&u| o.out_degree(u) < g.degree(u) / 2) {
            return Err(format!("case {i}: vertex {u} has out-degree {} of degree {}", o.out_degree(u), g.degree(u)));
        }
    }
    Ok(cases)
}

fn set_queries(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(50, 300);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let n = rng.gen_range(2..=8);
        let g = gnp(n, rng.gen(), rng.gen());
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(&mut rng);
        let split = rng.gen_range(1..n);
        let (x, y) = vs.split_at(split);
        let nb = g.neighborhood(x).map_err(|e| e.to_string())?;
        let oracle: Vec<usize> = (0..n).filter(|v| !x.contains(v) && x.iter().any(|&u| g.has_edge(u, *v))).collect();
        ensure(nb == oracle, || format!("case {i}: N({x:?}) = {nb:?}, pair scan {oracle:?}"))?;
        let between = g.edges_between(x, y).map_err(|e| e.to_string())?.len();
        let pairs = x.iter().flat_map(|&u| y.iter().map(move |&v| (u, v))).filter(|&(u, v)| g.has_edge(u, v)).count();
        ensure(between == pairs, || format!("case {i}: e({x:?},{y:?}) = {between}, pair scan {pairs}"))?;
    }
    Ok(cases)
}

fn partition_and_monotonicity(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(40, 200);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let board = Arc::new(gnp(rng.gen_range(4..25), rng.gen_range(0.2..0.9), rng.gen()));
        let kind = if i % 2 == 0 { GameKind::WaiterClient } else { GameKind::ClientWaiter };
        let q = rng.gen_range(1..=4);
        let mut state = GameState::new(board.clone(), q, kind).map_err(|e| e.to_string())?;
        let mut waiter = RandomWaiter::new(rng.gen());
        let mut client = client_by_name("random", rng.gen()).map_err(|e| e.to_string())?;
        let mut before: Vec<Owner> = state.owners().to_vec();
        let mut injected = false;
        while !state.is_over() {
            if state.leftover_pending() {
                state.apply_leftover().map_err(|e| e.to_string())?;
            } else {
                let offer = waiter.offer(&state);
                let pick = client.pick(&state, &offer);
                state.apply_round(&offer, pick).map_err(|e| e.to_string())?;
                if ctx.inject && !injected {
                    state.inject_owner_fault(pick, Owner::Waiter);
                    injected = true;
                }
            }
            state.check_invariants().map_err(|v| format!("game {i} (seed {}), round {}: {v}", ctx.seed, state.round()))?;
            let now = state.owners();
            if let Some(e) = (0..now.len()).find(|&e| before[e] != Owner::Free && before[e] != now[e]) {
                return Err(format!("game {i}: edge {e} changed owner from {:?} to {:?}", before[e], now[e]));
            }
            before = now.to_vec();
        }
    }
    Ok(cases)
}

fn count_law(ctx: &Ctx) -> Result<usize, String> {
    let _ = ctx;
    let mut cases = 0;
    for m in 0..=30 {
        for q in 1..=4 {
            let board = Arc::new(Graph::from_edges(m + 1, (0..m).map(|i| (0, i + 1))).map_err(|e| e.to_string())?);
            let mut state = GameState::new(board, q, GameKind::WaiterClient).map_err(|e| e.to_string())?;
            let mut client = client_by_name("lowest", 0).map_err(|e| e.to_string())?;
            let fault = run_to_end(&mut state, &mut LowestIdWaiter, client.as_mut());
            let expected = m / (q + 1);
            ensure(fault.is_none() && state.client_count() == expected && state.waiter_count() == m - expected, || {
                format!("e(G) = {m}, q = {q}: Client {} Waiter {} (expected {expected})", state.client_count(), state.waiter_count())
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn fault_isolation(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(30, 200);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let board = Arc::new(Graph::complete(rng.gen_range(4..9)));
        let mut state = GameState::new(board, 1, GameKind::WaiterClient).map_err(|e| e.to_string())?;
        state.apply_round(&[0, 1], 0).map_err(|e| e.to_string())?;
        let snapshot = (state.owners().to_vec(), state.round(), state.client_count());
        let bad: [(Vec<usize>, usize); 3] = [(vec![0, 2], 2), (vec![2, 3], 4), (vec![2], 2)];
        for (offer, pick) in &bad {
            ensure(state.apply_round(offer, *pick).is_err(), || format!("case {i}: illegal move {offer:?}/{pick} accepted"))?;
            ensure((state.owners().to_vec(), state.round(), state.client_count()) == snapshot, || {
                format!("case {i}: rejected move {offer:?}/{pick} mutated the state")
            })?;
        }
    }
    Ok(cases)
}

fn box_trajectories(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(200, 1000);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let q = rng.gen_range(1..=3);
        let t = rng.gen_range(1..=4);
        let sets = rng.gen_range(1..=20);
        let sizes: Vec<usize> = (0..sets).map(|_| if t > 1 && rng.gen_bool(0.3) { t - 1 } else { t }).collect();
        let s = rng.gen();
        let out = simulate_box_game(disjoint_family(&sizes), t, q, &mut RandomBoxClient::new(s))
            .map_err(|e| format!("case {i}: {e}"))?;
        ensure(out.always_canonical, || format!("case {i}: q={q} sizes={sizes:?} client seed {s}: lost canonicality"))?;
        if let Some(d) = out.drops.iter().find(|d| !d.holds) {
            return Err(format!("case {i}: q={q} sizes={sizes:?} client seed {s}: |F| = {} < {} at type {}", d.family_size, d.bound, d.j));
        }
    }
    Ok(cases)
}

fn box_sufficiency(ctx: &Ctx) -> Result<usize, String> {
    let mut settings = vec![(1, 1), (1, 2), (2, 1), (3, 1)];
    if ctx.full {
        settings.extend([(1, 3), (2, 2)]);
    }
    for &(q, t) in &settings {
        let size = crate::boxgame::sufficient_family_size(q, t).ceil().to_integer();
        let size: usize = size.try_into().map_err(|_| "family size overflow".to_string())?;
        let sizes = vec![t; size];
        ensure(strategy_beats_every_client(&sizes, q), || format!("q={q} t={t} |F|={size}: some Client escapes"))?;
    }
    Ok(settings.len())
}

fn connected_non_hamiltonian(rng: &mut GameRng, n: usize) -> Option<Graph> {
    for _ in 0..50 {
        let g = gnp(n, rng.gen_range(0.25..0.6), rng.gen());
        if g.is_connected() && !exact_hamiltonian(&g).unwrap_or(true) {
            return Some(g);
        }
    }
    None
}

fn booster_soundness(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(30, 200);
    let mut rng = ctx.rng();
    let mut done = 0;
    for i in 0..cases {
        let n = rng.gen_range(4..=10);
        let Some(g) = connected_non_hamiltonian(&mut rng, n) else { continue };
        let exact = boosters_exact(&g).map_err(|e| e.to_string())?;
        let posa = boosters_posa(&g, rng.gen(), 8).map_err(|e| e.to_string())?;
        if let Some(&(u, v)) = posa.pairs.iter().find(|&&(u, v)| !exact.contains(u, v)) {
            return Err(format!("case {i}: ({u},{v}) certified but not a booster of {}", g.to_edge_list().replace('\n', ";")));
        }
        done += 1;
    }
    Ok(done)
}

fn booster_semantics(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(15, 100);
    let mut rng = ctx.rng();
    let mut done = 0;
    for i in 0..cases {
        let n = rng.gen_range(4..=9);
        let Some(g) = connected_non_hamiltonian(&mut rng, n) else { continue };
        let base = longest_path_len(&g).map_err(|e| e.to_string())?;
        for &(u, v) in &boosters_exact(&g).map_err(|e| e.to_string())?.pairs {
            let h = g.with_edge(u, v).map_err(|e| e.to_string())?;
            let grows = longest_path_len(&h).map_err(|e| e.to_string())? > base;
            ensure(grows || exact_hamiltonian(&h).unwrap_or(false), || format!("case {i}: ({u},{v}) is not a booster"))?;
        }
        done += 1;
    }
    Ok(done)
}

fn expansion_monotone(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(30, 200);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let n = rng.gen_range(3..=12);
        let g = gnp(n, rng.gen_range(0.3..0.9), rng.gen());
        let k = rng.gen_range(1..=2);
        let mut prev = true;
        // Verdicts for t = 1, 2, ... must switch from true to false at most once.
        for t in 1..=n / 2 {
            let r = is_expander(&g, t, k, ExpanderMode::Exact).map_err(|e| e.to_string())?;
            ensure(prev || !r.verdict, || format!("case {i}: ({t},{k})-expander but not ({},{k})", t - 1))?;
            prev = r.verdict;
        }
    }
    Ok(cases)
}

fn posa_simple(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(50, 300);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let n = rng.gen_range(2..60);
        let g = gnp(n, rng.gen_range(0.02..0.5), rng.gen());
        let r = posa_extend(&g, rng.gen());
        ensure(is_simple_path(&g, &r.state.path), || format!("case {i}: non-simple path {:?}", r.state.path))?;
        if let Some(c) = &r.cycle {
            ensure(crate::hamilton::is_hamilton_cycle(&g, c), || format!("case {i}: invalid cycle {c:?}"))?;
        }
    }
    Ok(cases)
}

fn forcer_bounds(ctx: &Ctx) -> Result<usize, String> {
    let graphs = ctx.count(15, 100);
    let mut rng = ctx.rng();
    let mut done = 0;
    for i in 0..graphs {
        let n = rng.gen_range(10..=if ctx.full { 200 } else { 60 });
        let board = Arc::new(gnp(n, rng.gen_range(0.3..0.8), rng.gen()));
        for q in 1..=3 {
            let gamma = crate::strategy::forcer::gamma_bound(board.min_degree(), q);
            if gamma == 0 {
                continue;
            }
            for name in CLIENT_NAMES {
                let mut forcer = MinDegreeForcer::new(&board, q, gamma).map_err(|e| e.to_string())?;
                let mut client = client_by_name(name, rng.gen()).map_err(|e| e.to_string())?;
                let mut state = GameState::new(board.clone(), q, GameKind::WaiterClient).map_err(|e| e.to_string())?;
                let fault = run_to_end(&mut state, &mut forcer, client.as_mut());
                let delta = state.client_graph().min_degree();
                ensure(fault.is_none() && delta >= gamma && forcer.offered() <= (q + 1) * gamma * n, || {
                    format!("graph {i} n={n} q={q} client={name}: δ(G_C)={delta} γ={gamma} offered={}", forcer.offered())
                })?;
                done += 1;
            }
        }
    }
    Ok(done)
}

fn staged_legal(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(4, 20);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let n = rng.gen_range(20..=40);
        let board = Arc::new(sample_gnp(&RandomGraphSpec::log_scaled(n, rng.gen_range(1.0..4.0), rng.gen()).map_err(|e| e.to_string())?));
        let mut waiter = StagedWaiter::new(&board, 1, StageConfig::default(), rng.gen());
        let mut client = client_by_name(CLIENT_NAMES[i % CLIENT_NAMES.len()], rng.gen()).map_err(|e| e.to_string())?;
        let mut state = GameState::new(board, 1, GameKind::WaiterClient).map_err(|e| e.to_string())?;
        if let Some(f) = run_to_end(&mut state, &mut waiter, client.as_mut()) {
            return Err(format!("case {i}: {:?} faulted in round {}: {}", f.side, f.round, f.violation));
        }
    }
    Ok(cases)
}

fn strategy_determinism(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(4, 20);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let board = Arc::new(gnp(30, 0.3, rng.gen()));
        let (ws, cs) = (rng.gen::<u64>(), rng.gen::<u64>());
        let play = |kind: GameKind| -> Result<Vec<Owner>, String> {
            let mut waiter: Box<dyn WaiterStrategy> = match kind {
                GameKind::WaiterClient => Box::new(StagedWaiter::new(&board, 1, StageConfig::default(), ws)),
                GameKind::ClientWaiter => Box::new(IsolatorWaiter::new(&board, 2)),
            };
            let q = if kind == GameKind::WaiterClient { 1 } else { 2 };
            let mut client = client_by_name("booster-dodger", cs).map_err(|e| e.to_string())?;
            let mut state = GameState::new(board.clone(), q, kind).map_err(|e| e.to_string())?;
            run_to_end(&mut state, waiter.as_mut(), client.as_mut());
            Ok(state.owners().to_vec())
        };
        for kind in [GameKind::WaiterClient, GameKind::ClientWaiter] {
            ensure(play(kind)? == play(kind)?, || format!("case {i}: {kind:?} replay with seeds {ws}/{cs} diverged"))?;
        }
    }
    Ok(cases)
}

fn identity_battery(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(50, 500);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let (n, p, q) = (rng.gen_range(1..=500), rng.gen::<f64>(), rng.gen_range(1..=4));
        let r = degree_identity_check(n, p, q);
        ensure(r.rel_diff <= 1e-9, || format!("case {i}: n={n} p={p} q={q}: lhs {} rhs {}", r.lhs, r.rhs))?;
    }
    Ok(cases)
}

fn degree_counts(ctx: &Ctx) -> Result<usize, String> {
    let samples = ctx.count(1000, 10_000);
    let (n, p) = (200, 0.05);
    let (means, se) = empirical_degree_counts(n, p, samples, ctx.seed);
    for i in 0..n {
        let mu = mu_closed_form(n, p, i);
        if mu >= 5.0 {
            ensure((means[i] - mu).abs() <= 4.0 * se[i], || format!("degree {i}: mean {:.4} vs μ {mu:.4} (se {:.4})", means[i], se[i]))?;
        }
    }
    Ok(samples)
}

fn criterion_oracle(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(200, 1000);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let q = rng.gen_range(1..=4);
        let sizes: Vec<usize> = (0..rng.gen_range(0..30)).map(|_| rng.gen_range(0..40)).collect();
        let (b, c) = criterion_sums(&sizes, q);
        let (mut nb, mut nc) = (0.0f64, 0.0f64);
        for &a in sizes.iter().rev() {
            nb += 2f64.powf(-(a as f64) / (2 * q - 1) as f64);
            nc += (q as f64 / (q + 1) as f64).powi(a as i32);
        }
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * y.abs().max(1.0);
        ensure(close(b, nb) && close(c, nc), || format!("case {i}: q={q} sizes={sizes:?}: ({b}, {c}) vs ({nb}, {nc})"))?;
    }
    Ok(cases)
}

fn variance_mc(ctx: &Ctx) -> Result<usize, String> {
    let samples = ctx.count(400, 2000);
    let settings = [(60, 0.1, 5), (100, 0.05, 4), (200, 2.0 * 200f64.ln() / 200.0, 10)];
    for (j, &(n, p, k)) in settings.iter().enumerate() {
        let v = variance_xk(n, p, k);
        let (mean, var) = crate::analytics::xk_monte_carlo(n, p, k, samples, derive_seed(ctx.seed, j as u64));
        let se_mean = (v.var / samples as f64).sqrt();
        ensure((mean - v.mean).abs() <= 4.0 * se_mean, || format!("n={n} p={p} k={k}: mean {mean} vs {}", v.mean))?;
        // Sample variance has standard error about var * sqrt(2/(m-1)).
        let se_var = v.var * (2.0 / (samples as f64 - 1.0)).sqrt();
        ensure((var - v.var).abs() <= 4.0 * se_var, || format!("n={n} p={p} k={k}: var {var} vs {}", v.var))?;
    }
    Ok(settings.len())
}

fn chebyshev_conclusion(ctx: &Ctx) -> Result<usize, String> {
    let (n, seeds) = if ctx.full { (3000, 200) } else { (1000, 40) };
    let p = 1.5 * (n as f64).ln() / n as f64;
    let ks: Vec<usize> = (0..n).filter(|&k| mu_closed_form(n, p, k) >= 100.0).collect();
    if ks.is_empty() {
        return Err(format!("no k with μ_k >= 100 at n={n}"));
    }
    let mut hits = vec![0usize; ks.len()];
    for s in 0..seeds {
        let g = gnp(n, p, derive_seed(ctx.seed, s as u64));
        let mut counts = vec![0usize; n];
        for v in 0..n {
            counts[g.degree(v)] += 1;
        }
        for (h, &k) in hits.iter_mut().zip(&ks) {
            if counts[k] as f64 >= mu_closed_form(n, p, k) / 2.0 {
                *h += 1;
            }
        }
    }
    if let Some((h, k)) = hits.iter().zip(&ks).find(|(&h, _)| (h as f64) < 0.95 * seeds as f64) {
        return Err(format!("k={k}: X_k >= μ_k/2 in only {h} of {seeds} graphs"));
    }
    Ok(seeds)
}

fn sweep_determinism(ctx: &Ctx) -> Result<usize, String> {
    let cfg = RunConfig {
        n: vec![24],
        c: vec![1.0, 3.0],
        trials: ctx.count(4, 12),
        seed: ctx.seed,
        waiter: "lowest".into(),
        ..RunConfig::default()
    };
    let run = |workers| run_sweep(&RunConfig { workers, ..cfg.clone() }).map(|p| sweep_csv(&p)).map_err(|e| e.to_string());
    let (one, three) = (run(1)?, run(3)?);
    ensure(one == three, || "CSV differs between 1 and 3 workers".into())?;
    Ok(2)
}

fn crossover_order(ctx: &Ctx) -> Result<usize, String> {
    let cases = ctx.count(20, 100);
    let mut rng = ctx.rng();
    for i in 0..cases {
        let mut pts: Vec<(f64, usize, usize)> =
            (0..rng.gen_range(3..8)).map(|j| (0.5 * (j + 1) as f64, rng.gen_range(0..=50), 50)).collect();
        let fit = fit_crossover(&pts);
        pts.shuffle(&mut rng);
        let again = fit_crossover(&pts);
        let same = |a: f64, b: f64| a == b || (a.is_nan() && b.is_nan());
        ensure(same(fit.c_star, again.c_star) && same(fit.ci_lo, again.ci_lo) && fit.method == again.method, || {
            format!("case {i}: {fit:?} vs {again:?}")
        })?;
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injected_ownership_fault_is_caught() {
        let ctx = Ctx { full: false, seed: 5, inject: true };
        let w = partition_and_monotonicity(&ctx).unwrap_err();
        assert!(w.contains("partition") || w.contains("round log"), "{w}");
        assert!(partition_and_monotonicity(&Ctx { inject: false, ..ctx }).is_ok());
    }

    #[test]
    fn level_parses() {
        assert_eq!("fast".parse::<VerifyLevel>(), Ok(VerifyLevel::Fast));
        assert!("medium".parse::<VerifyLevel>().is_err());
    }
}
