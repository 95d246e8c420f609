//! Acceptance battery. Runs without the libtest harness so every criterion
//! prints its own PASS/FAIL line; exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use hamgame::analytics::{criterion_sums, degree_identity_check, variance_xk};
use hamgame::boxgame::{
    box_game_value, disjoint_family, simulate_box_game, strategy_beats_every_client, sufficient_family_size, BoxClient,
    GreedyBoxClient, RandomBoxClient,
};
use hamgame::game::{run_to_end, GameKind, GameState, Player};
use hamgame::graph::{sample_gnp, Graph, RandomGraphSpec};
use hamgame::hamilton::{boosters_exact, boosters_posa, exact_hamiltonian, is_expander, ExpanderMode};
use hamgame::harness::{
    crossovers, play_on_board, run_point, run_sweep, separated, sweep_csv, trial_board, wilson, Crossover, PointSummary,
    RunConfig, Z95,
};
use hamgame::rng::{derive_seed, rng_from_seed, GameRng};
use hamgame::strategy::forcer::gamma_bound;
use hamgame::strategy::transversal::transversal_minimax;
use hamgame::strategy::{box_isolator_plan, client_by_name, MinDegreeForcer};

const MASTER: u64 = 2026;
const N: usize = 150;
const TRIALS: usize = 200;

type Outcome = Result<String, String>;

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    sample_gnp(&RandomGraphSpec::new(n, p, seed).unwrap())
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ci(k: usize, n: usize) -> (f64, f64) {
    wilson(k, n, Z95)
}

fn fmt_ci(c: (f64, f64)) -> String {
    format!("[{:.3}, {:.3}]", c.0, c.1)
}

fn c1_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(derive_seed(MASTER, 1));
    let mut worst = 0.0f64;
    for i in 0..50 {
        let (n, p, q) = (rng.gen_range(1..=500), rng.gen::<f64>(), rng.gen_range(1..=4));
        let r = degree_identity_check(n, p, q);
        check(r.rel_diff <= 1e-9, format!("case {i} n={n} p={p} q={q}: rel diff {:e}", r.rel_diff))?;
        worst = worst.max(r.rel_diff);
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(format!("50 cases, worst relative discrepancy {worst:.2e}, {took:?}"))
}

fn c2_forcer() -> Outcome {
    let mut rng = rng_from_seed(derive_seed(MASTER, 2));
    let mut games = 0;
    let mut nontrivial = 0;
    for i in 0..100 {
        let n = rng.gen_range(4..=200);
        let board = Arc::new(gnp(n, rng.gen_range(0.05..0.8), rng.gen()));
        for q in 1..=3 {
            let gamma = gamma_bound(board.min_degree(), q);
            for name in ["random", "lowest", "min-degree-avoider"] {
                let mut forcer = MinDegreeForcer::new(&board, q, gamma).map_err(|e| e.to_string())?;
                let mut client = client_by_name(name, rng.gen()).unwrap();
                let mut state = GameState::new(board.clone(), q, GameKind::WaiterClient).unwrap();
                let fault = run_to_end(&mut state, &mut forcer, client.as_mut());
                let delta = state.client_graph().min_degree();
                check(
                    fault.is_none() && delta >= gamma && forcer.offered() <= (q + 1) * gamma * n,
                    format!("graph {i} n={n} q={q} {name}: δ(G_C)={delta} γ={gamma} offered={}", forcer.offered()),
                )?;
                games += 1;
                nontrivial += (gamma > 0) as usize;
            }
        }
    }
    Ok(format!("{games} games ({nontrivial} with γ ≥ 1), zero failures"))
}

fn c3_box() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(derive_seed(MASTER, 3));
    let mut drops = 0;
    for i in 0..1000 {
        let q = rng.gen_range(1..=4);
        let t = rng.gen_range(1..=6);
        let sets = rng.gen_range(1..=60);
        let sizes: Vec<usize> = (0..sets).map(|_| if t > 1 && rng.gen_bool(0.3) { t - 1 } else { t }).collect();
        let seed: u64 = rng.gen();
        let mut client: Box<dyn BoxClient> =
            if i % 2 == 0 { Box::new(RandomBoxClient::new(seed)) } else { Box::new(GreedyBoxClient) };
        let out = simulate_box_game(disjoint_family(&sizes), t, q, client.as_mut()).map_err(|e| e.to_string())?;
        check(out.always_canonical, format!("trajectory {i}: q={q} sizes={sizes:?} lost canonicality"))?;
        if let Some(d) = out.drops.iter().find(|d| !d.holds) {
            return Err(format!("trajectory {i}: q={q} sizes={sizes:?}: |F|={} below bound {} at type {}", d.family_size, d.bound, d.j));
        }
        drops += out.drops.len();
    }
    let threshold = sufficient_family_size(1, 2);
    check(threshold.to_string() == "16", format!("2(q+1)^(t+1)/q^t = {threshold}"))?;
    // Canonical type-2 families with 16..=20 sets over at most 20 elements.
    let mut families = 0;
    for sets in 16..=20 {
        for pairs in 0..=(20 - sets) {
            let sizes: Vec<usize> = (0..sets).map(|j| if j < pairs { 2 } else { 1 }).collect();
            check(strategy_beats_every_client(&sizes, 1), format!("sizes {sizes:?}: some Client escapes the strategy"))?;
            check(box_game_value(&sizes, 1), format!("sizes {sizes:?}: minimax says Client wins"))?;
            families += 1;
        }
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(300), format!("took {took:?}"))?;
    Ok(format!("1000 trajectories, {drops} type drops; {families} exhaustive families; {took:.1?}"))
}

fn connected_non_hamiltonian(rng: &mut GameRng, n: usize) -> Graph {
    loop {
        let g = gnp(n, rng.gen_range(0.2..0.7), rng.gen());
        if g.is_connected() && !exact_hamiltonian(&g).unwrap() {
            return g;
        }
    }
}

fn c4_posa() -> Outcome {
    let mut rng = rng_from_seed(derive_seed(MASTER, 4));
    let mut certified = 0;
    for i in 0..200 {
        let n = rng.gen_range(4..=12);
        let g = connected_non_hamiltonian(&mut rng, n);
        let exact = boosters_exact(&g).map_err(|e| e.to_string())?;
        let posa = boosters_posa(&g, rng.gen(), 8).map_err(|e| e.to_string())?;
        if let Some(&(u, v)) = posa.pairs.iter().find(|&&(u, v)| !exact.contains(u, v)) {
            return Err(format!("graph {i}: ({u},{v}) certified but not a booster of {}", g.to_edge_list().replace('\n', ";")));
        }
        certified += posa.len();
    }
    // Count bound: every connected non-Hamiltonian graph in a wider pool,
    // with its largest expansion parameter found by checking every set.
    let mut pool = vec![Graph::petersen()];
    for _ in 0..20_000 {
        let n = rng.gen_range(5..=12);
        pool.push(gnp(n, rng.gen_range(0.25..0.75), rng.gen()));
    }
    let mut by_t = [0usize; 4];
    for (i, g) in pool.iter().enumerate() {
        if !g.is_connected() || exact_hamiltonian(g).unwrap() {
            continue;
        }
        let mut t = 0;
        while is_expander(g, t + 1, 2, ExpanderMode::Exact).map_err(|e| e.to_string())?.verdict {
            t += 1;
        }
        if t == 0 {
            continue;
        }
        by_t[t.min(3)] += 1;
        let boosters = boosters_exact(g).map_err(|e| e.to_string())?.len();
        let need = ((t + 1) * (t + 1)) as f64 / 2.0;
        check(boosters as f64 >= need, format!("pool graph {i}: ({t},2)-expander with {boosters} boosters < {need}"))?;
    }
    Ok(format!(
        "200 graphs, {certified} certified boosters all exact; count bound on {} expanders (t=1: {}, t=2: {}, t>=3: {})",
        by_t.iter().sum::<usize>(),
        by_t[1],
        by_t[2],
        by_t[3]
    ))
}

fn c5_transversal() -> Outcome {
    let mut rng = rng_from_seed(derive_seed(MASTER, 5));
    let (mut client_cases, mut waiter_cases) = (0, 0);
    for i in 0..200 {
        let m = rng.gen_range(2..=12);
        let q = if i % 2 == 0 { 1 } else { rng.gen_range(1..=3) };
        let family: Vec<Vec<usize>> = (0..rng.gen_range(1..=5))
            .map(|_| {
                let mut a: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.6)).collect();
                if a.is_empty() {
                    a.push(rng.gen_range(0..m));
                }
                a
            })
            .collect();
        let sizes: Vec<usize> = family.iter().map(Vec::len).collect();
        let (waiter_sum, client) = criterion_sums(&sizes, q);
        if client < 1.0 {
            client_cases += 1;
            check(
                transversal_minimax(m, &family, q, GameKind::ClientWaiter),
                format!("family {i} m={m} q={q} {family:?}: client sum {client} < 1 but Waiter wins"),
            )?;
        }
        if q == 1 && waiter_sum < 0.5 {
            waiter_cases += 1;
            check(
                transversal_minimax(m, &family, q, GameKind::WaiterClient),
                format!("family {i} m={m} {family:?}: sum {waiter_sum} < 1/2 but Client escapes"),
            )?;
        }
    }
    check(client_cases > 0 && waiter_cases > 0, "no family met a hypothesis")?;
    Ok(format!("200 families; {client_cases} met the Client criterion, {waiter_cases} the Waiter criterion; zero counterexamples"))
}

struct Sweeps {
    wc: Vec<PointSummary>,
    cw: [Vec<PointSummary>; 3],
    millis: u128,
}

fn cfg(kind: GameKind, q: usize, c: Vec<f64>) -> RunConfig {
    RunConfig { kind, q, n: vec![N], c, trials: TRIALS, seed: MASTER, ..RunConfig::default() }
}

fn sweeps() -> Result<Sweeps, String> {
    let start = Instant::now();
    let wc = run_sweep(&cfg(GameKind::WaiterClient, 1, vec![0.5, 1.2, 2.0, 2.5, 3.0])).map_err(|e| e.to_string())?;
    let grid = |top: usize| [1.2].into_iter().chain((2..=top).map(|c| c as f64)).collect::<Vec<_>>();
    let cw = [
        run_sweep(&cfg(GameKind::ClientWaiter, 1, grid(6))).map_err(|e| e.to_string())?,
        run_sweep(&cfg(GameKind::ClientWaiter, 2, grid(8))).map_err(|e| e.to_string())?,
        run_sweep(&cfg(GameKind::ClientWaiter, 3, grid(10))).map_err(|e| e.to_string())?,
    ];
    Ok(Sweeps { wc, cw, millis: start.elapsed().as_millis() })
}

fn at(points: &[PointSummary], c: f64) -> &PointSummary {
    points.iter().find(|p| p.c == c).expect("grid point")
}

fn crossover(points: &[PointSummary]) -> Crossover {
    crossovers(points)[0].1
}

fn c6_wc_trend(s: &Sweeps) -> Outcome {
    let (lo, hi) = (at(&s.wc, 0.5), at(&s.wc, 3.0));
    let rate = |p: &PointSummary| p.waiter_wins as f64 / p.trials as f64;
    let (ci_lo, ci_hi) = ((lo.ci_lo, lo.ci_hi), (hi.ci_lo, hi.ci_hi));
    check(
        rate(hi) - rate(lo) >= 0.4 && hi.ci_lo > lo.ci_hi,
        format!("Waiter rate {:.3} {} at c=3 vs {:.3} {} at c=0.5", rate(hi), fmt_ci(ci_hi), rate(lo), fmt_ci(ci_lo)),
    )?;
    // Boards regenerated from the recorded seeds; isolation read off the edge list.
    let isolated = lo
        .outcomes
        .iter()
        .filter(|o| {
            let g = trial_board(N, 0.5, o.seed);
            let mut seen = [false; N];
            for &(u, v) in g.edges() {
                seen[u] = true;
                seen[v] = true;
            }
            seen.contains(&false)
        })
        .count();
    check(isolated * 100 >= 85 * lo.trials, format!("only {isolated} of {} boards at c=0.5 have an isolated vertex", lo.trials))?;
    check(s.millis < 30 * 60 * 1000, format!("sweeps took {} ms", s.millis))?;
    Ok(format!(
        "Waiter rate {:.3} {} at c=3 vs {:.3} {} at c=0.5; {isolated}/{} boards isolated at c=0.5",
        rate(hi),
        fmt_ci(ci_hi),
        rate(lo),
        fmt_ci(ci_lo),
        lo.trials
    ))
}

/// Share of trial boards on which the box-isolator plan applies and then
/// isolates a vertex of Client's graph.
fn box_isolator_rate(c: f64, c_index: usize) -> Result<(usize, usize), String> {
    let cfg = RunConfig { waiter: "box-isolator".into(), ..cfg(GameKind::ClientWaiter, 1, vec![c]) };
    let point = hamgame::rng::point_seed(MASTER, N, c_index);
    let (mut applicable, mut wins) = (0, 0);
    for i in 0..TRIALS {
        let seed = derive_seed(point, i as u64);
        let board = Arc::new(trial_board(N, c, seed));
        if box_isolator_plan(&board, 1).is_none() {
            continue;
        }
        applicable += 1;
        let (t, min_degree) = play_on_board(&cfg, board, seed).map_err(|e| e.to_string())?;
        if t.fault.is_none() && t.winner == Player::Waiter && min_degree == 0 {
            wins += 1;
        }
    }
    Ok((applicable, wins))
}

fn c7_cw_separation(s: &Sweeps) -> Outcome {
    let ((app_lo, win_lo), (app_hi, win_hi)) = (box_isolator_rate(1.2, 0)?, box_isolator_rate(3.0, 2)?);
    let (a_lo, a_hi) = (ci(win_lo, TRIALS), ci(win_hi, TRIALS));
    let a = format!(
        "(a) box-isolator success {win_lo}/{TRIALS} {} at c=1.2 (applicable {app_lo}) vs {win_hi}/{TRIALS} {} at c=3 (applicable {app_hi})",
        fmt_ci(a_lo),
        fmt_ci(a_hi)
    );
    let (h_lo, h_hi) = (at(&s.cw[0], 1.2).hamiltonian(), at(&s.cw[0], 3.0).hamiltonian());
    let b = format!(
        "(b) Hamiltonian {h_hi}/{TRIALS} {} at c=3 vs {h_lo}/{TRIALS} {} at c=1.2",
        fmt_ci(ci(h_hi, TRIALS)),
        fmt_ci(ci(h_lo, TRIALS))
    );
    let (cw, wc) = (crossover(&s.cw[0]), crossover(&s.wc));
    let c = format!("(c) c*_CW {:.3} [{:.3}, {:.3}] vs c*_WC {:.3} [{:.3}, {:.3}]", cw.c_star, cw.ci_lo, cw.ci_hi, wc.c_star, wc.ci_lo, wc.ci_hi);
    let summary = format!("{a}; {b}; {c}");
    check(win_lo as f64 > win_hi as f64 && a_lo.0 > a_hi.1, summary.clone())?;
    check(separated(ci(h_hi, TRIALS), ci(h_lo, TRIALS)) && h_hi > h_lo, summary.clone())?;
    check(cw.ci_lo > wc.ci_hi, summary.clone())?;
    Ok(summary)
}

fn c8_bias(s: &Sweeps) -> Outcome {
    let fits: Vec<Crossover> = s.cw.iter().map(|p| crossover(p)).collect();
    let summary = fits
        .iter()
        .enumerate()
        .map(|(i, f)| format!("q={}: {:.3} [{:.3}, {:.3}]", i + 1, f.c_star, f.ci_lo, f.ci_hi))
        .collect::<Vec<_>>()
        .join("; ");
    check(fits[0].c_star < fits[1].c_star && fits[1].c_star < fits[2].c_star, summary.clone())?;
    check(fits[0].ci_hi < fits[2].ci_lo, summary.clone())?;
    Ok(summary)
}

fn c9_variance() -> Outcome {
    const SAMPLES: usize = 2000;
    let settings = [
        (40, 0.1, 3),
        (60, 0.1, 6),
        (80, 0.05, 2),
        (100, 0.05, 5),
        (100, 0.2, 20),
        (150, 1.2 * 150f64.ln() / 150.0, 6),
        (150, 3.0 * 150f64.ln() / 150.0, 12),
        (200, 0.03, 4),
        (250, 2.0 * 250f64.ln() / 250.0, 10),
        (300, 0.01, 1),
    ];
    let mut worst = 0.0f64;
    for (j, &(n, p, k)) in settings.iter().enumerate() {
        let closed = variance_xk(n, p, k);
        let xs: Vec<f64> = (0..SAMPLES)
            .map(|s| {
                let g = gnp(n, p, derive_seed(derive_seed(MASTER, 9), (j * SAMPLES + s) as u64));
                (0..n).filter(|&v| g.degree(v) == k).count() as f64
            })
            .collect();
        let m = SAMPLES as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
        let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / m;
        let se_mean = (var / m).sqrt();
        let se_var = ((m4 - var * var).max(0.0) / m).sqrt();
        let zm = (mean - closed.mean).abs() / se_mean;
        let zv = (var - closed.var).abs() / se_var;
        check(zm <= 3.0, format!("n={n} p={p:.4} k={k}: mean {mean:.4} vs {:.4} ({zm:.2} se)", closed.mean))?;
        check(zv <= 3.0, format!("n={n} p={p:.4} k={k}: var {var:.4} vs {:.4} ({zv:.2} se)", closed.var))?;
        worst = worst.max(zm).max(zv);
    }
    Ok(format!("10 settings x {SAMPLES} samples, largest deviation {worst:.2} standard errors"))
}

fn c10_determinism() -> Outcome {
    let mut rows = 0;
    for (kind, waiter) in [(GameKind::WaiterClient, "auto"), (GameKind::ClientWaiter, "auto")] {
        let base = RunConfig {
            kind,
            n: vec![40, 60],
            c: vec![1.0, 2.0, 3.0],
            trials: 24,
            waiter: waiter.into(),
            seed: MASTER,
            ..RunConfig::default()
        };
        let runs: Vec<String> = [1, 2, 4, 0]
            .iter()
            .map(|&workers| run_sweep(&RunConfig { workers, ..base.clone() }).map(|p| sweep_csv(&p)).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        check(runs.iter().all(|r| *r == runs[0]), format!("{kind:?}: CSV differs across worker counts"))?;
        // A single point re-run on its own reproduces its sweep row.
        let alone = run_point(&base, 60, 2).map_err(|e| e.to_string())?;
        check(runs[0].contains(&alone.csv_row()), format!("{kind:?}: row for n=60, c=3 not reproduced"))?;
        rows += runs[0].lines().count() - 1;
    }
    Ok(format!("{rows} rows byte-identical for 1, 2, 4 and all workers"))
}

fn run(n: usize, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let took = start.elapsed();
    match &r {
        Ok(msg) => println!("criterion {n:>2}: PASS  {msg} ({took:.1?})"),
        Err(msg) => println!("criterion {n:>2}: FAIL  {msg} ({took:.1?})"),
    }
    r.is_ok()
}

fn main() {
    // `cargo test -- --list` and filters come through here too.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut ok = true;
    ok &= run(1, c1_identity);
    ok &= run(2, c2_forcer);
    ok &= run(3, c3_box);
    ok &= run(4, c4_posa);
    ok &= run(5, c5_transversal);
    match sweeps() {
        Ok(s) => {
            ok &= run(6, || c6_wc_trend(&s));
            ok &= run(7, || c7_cw_separation(&s));
            ok &= run(8, || c8_bias(&s));
        }
        Err(e) => {
            for n in 6..=8 {
                println!("criterion {n:>2}: FAIL  sweep did not run: {e}");
            }
            ok = false;
        }
    }
    ok &= run(9, c9_variance);
    ok &= run(10, c10_determinism);
    if !ok {
        std::process::exit(1);
    }
}
