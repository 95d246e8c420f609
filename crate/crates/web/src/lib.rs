//! WebAssembly bindings for the static demo page in `www/`. Every export
//! takes plain numbers and strings and returns a JSON document; failures come
//! back as `{"error": "..."}`.

use std::sync::Arc;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use hamgame::analytics::degree_stats;
use hamgame::boxgame::{disjoint_family, simulate_box_game, GreedyBoxClient, RandomBoxClient};
use hamgame::graph::{log_scaled_p, sample_gnp, RandomGraphSpec};
use hamgame::harness::{play_on_board, trial_board, RunConfig};

/// Largest board the page will sample or play on.
pub const MAX_N: usize = 400;

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("serializable"),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

fn check_n(n: usize) -> Result<(), String> {
    if (2..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must lie in 2..={MAX_N}"))
    }
}

#[derive(Serialize)]
struct SampledGraph {
    n: usize,
    p: f64,
    edges: Vec<(usize, usize)>,
    counts: Vec<usize>,
    mu: Vec<f64>,
    weighted_sum: f64,
    weighted_expectation: f64,
    isolated: usize,
}

/// Samples `G(n, c ln n / n)` and returns its degree histogram next to the
/// expected counts `μ_i`.
#[wasm_bindgen]
pub fn sample_graph(n: usize, c: f64, q: usize, seed: u64) -> String {
    to_json((|| {
        check_n(n)?;
        if q == 0 || !(c > 0.0) {
            return Err("need q >= 1 and c > 0".to_string());
        }
        let p = log_scaled_p(n, c);
        let g = sample_gnp(&RandomGraphSpec::new(n, p, seed).map_err(|e| e.to_string())?);
        let stats = degree_stats(&g, p, q);
        Ok(SampledGraph {
            n,
            p,
            edges: g.edges().to_vec(),
            isolated: stats.counts[0],
            counts: stats.counts,
            mu: stats.mu,
            weighted_sum: stats.weighted_sum,
            weighted_expectation: stats.weighted_expectation,
        })
    })())
}

#[derive(Serialize)]
struct PlayedGame {
    n: usize,
    p: f64,
    edges: Vec<(usize, usize)>,
    /// `"C"` or `"W"` per edge.
    owners: Vec<&'static str>,
    /// Round in which each edge was claimed (leftover edges get the last
    /// round plus one).
    claimed_in: Vec<usize>,
    rounds: usize,
    winner: String,
    hamiltonian: bool,
    fault: Option<String>,
    client_min_degree: usize,
    config: Vec<(String, String)>,
}

/// Plays one game on `G(n, c ln n / n)` between named strategies.
#[wasm_bindgen]
pub fn play_game(n: usize, c: f64, seed: u64, kind: &str, q: usize, waiter: &str, client: &str) -> String {
    to_json((|| {
        check_n(n)?;
        let mut cfg = RunConfig { n: vec![n], c: vec![c], waiter: waiter.to_string(), client: client.to_string(), q, ..RunConfig::default() };
        cfg.set("kind", kind)?;
        cfg.validate()?;
        let board = Arc::new(trial_board(n, c, seed));
        let (t, client_min_degree) = play_on_board(&cfg, board.clone(), seed).map_err(|e| e.to_string())?;
        let m = board.edge_count();
        let mut owners = vec!["W"; m];
        let mut claimed_in = vec![t.rounds.len() + 1; m];
        for (i, r) in t.rounds.iter().enumerate() {
            for &e in &r.offer {
                claimed_in[e] = i + 1;
            }
            owners[r.pick] = "C";
        }
        Ok(PlayedGame {
            n,
            p: log_scaled_p(n, c),
            edges: board.edges().to_vec(),
            owners,
            claimed_in,
            rounds: t.rounds.len(),
            winner: format!("{:?}", t.winner),
            hamiltonian: t.target_holds,
            fault: t.fault.as_ref().map(|f| format!("{:?} in round {}: {}", f.side, f.round, f.violation)),
            client_min_degree,
            config: t.config.into_iter().collect(),
        })
    })())
}

#[derive(Serialize)]
struct BoxRun {
    waiter_won: bool,
    won_after_round: Option<usize>,
    always_canonical: bool,
    eq4_holds: bool,
    rows: Vec<hamgame::boxgame::TrajectoryRow>,
}

/// Box game on `count` disjoint sets of size `t`; `client` is `random` or
/// `greedy`.
#[wasm_bindgen]
pub fn box_trajectory(t: usize, count: usize, q: usize, client: &str, seed: u64) -> String {
    to_json((|| {
        if t == 0 || count == 0 || q == 0 || t * count > 20_000 {
            return Err("need t, count, q >= 1 and t * count <= 20000".to_string());
        }
        let family = disjoint_family(&vec![t; count]);
        let out = match client {
            "random" => simulate_box_game(family, t, q, &mut RandomBoxClient::new(seed)),
            "greedy" => simulate_box_game(family, t, q, &mut GreedyBoxClient),
            other => return Err(format!("unknown client {other:?}")),
        }
        .map_err(|e| e.to_string())?;
        Ok(BoxRun {
            waiter_won: out.waiter_won,
            won_after_round: out.won_after_round,
            always_canonical: out.always_canonical,
            eq4_holds: out.eq4_holds(),
            rows: out.rows,
        })
    })())
}
