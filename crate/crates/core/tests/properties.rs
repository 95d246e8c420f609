use std::sync::Arc;

use proptest::prelude::*;

use hamgame::analytics::{degree_identity_check, joint_degree_probability, variance_xk};
use hamgame::boxgame::{disjoint_family, simulate_box_game, RandomBoxClient};
use hamgame::game::{play_out, replay, run_to_end, GameKind, GameState, Owner, WaiterStrategy};
use hamgame::graph::{euler_orientation, sample_gnp, split_reservoir, Graph, RandomGraphSpec};
use hamgame::hamilton::{boosters_exact, boosters_posa, exact_hamiltonian, posa_extend, is_simple_path};
use hamgame::harness::{fit_crossover, wilson, Z95};
use hamgame::strategy::{client_by_name, RandomWaiter};

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    sample_gnp(&RandomGraphSpec::new(n, p, seed).unwrap())
}

fn kind(wc: bool) -> GameKind {
    if wc {
        GameKind::WaiterClient
    } else {
        GameKind::ClientWaiter
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampling_is_seeded_and_simple(n in 1usize..80, p in 0.0f64..=1.0, seed: u64) {
        let g = gnp(n, p, seed);
        prop_assert_eq!(g.to_edge_list(), gnp(n, p, seed).to_edge_list());
        for &(u, v) in g.edges() {
            prop_assert!(u < v && v < n);
        }
        let mut e = g.edges().to_vec();
        e.dedup();
        prop_assert_eq!(e.len(), g.edge_count());
    }

    #[test]
    fn reservoir_split_partitions_edges(n in 2usize..60, p in 0.0f64..1.0, pb in 0.0f64..=1.0, s1: u64, s2: u64) {
        let g = gnp(n, p, s1);
        let s = split_reservoir(&g, pb, s2).unwrap();
        prop_assert_eq!(s.main.edge_count() + s.reservoir.edge_count(), g.edge_count());
    }

    #[test]
    fn orientation_keeps_half_of_each_degree(n in 1usize..80, p in 0.0f64..0.5, seed: u64) {
        let g = gnp(n, p, seed);
        let o = euler_orientation(&g);
        prop_assert_eq!((0..n).map(|u| o.out_degree(u)).sum::<usize>(), g.edge_count());
        for u in 0..n {
            prop_assert!(o.out_degree(u) >= g.degree(u) / 2);
        }
    }

    #[test]
    fn ownership_partitions_and_never_reverts(n in 3usize..16, p in 0.2f64..1.0, q in 1usize..4, wc: bool, s1: u64, s2: u64, s3: u64) {
        let board = Arc::new(gnp(n, p, s1));
        let m = board.edge_count();
        let mut state = GameState::new(board, q, kind(wc)).unwrap();
        let mut waiter = RandomWaiter::new(s2);
        let mut client = client_by_name("random", s3).unwrap();
        let mut before = state.owners().to_vec();
        while !state.is_over() {
            if state.leftover_pending() {
                state.apply_leftover().unwrap();
            } else {
                let offer = waiter.offer(&state);
                let pick = client.pick(&state, &offer);
                state.apply_round(&offer, pick).unwrap();
            }
            prop_assert!(state.check_invariants().is_ok());
            prop_assert_eq!(state.free_count() + state.client_count() + state.waiter_count(), m);
            for (e, (&b, &a)) in before.iter().zip(state.owners()).enumerate() {
                prop_assert!(b == Owner::Free || b == a, "edge {} went from {:?} to {:?}", e, b, a);
            }
            before = state.owners().to_vec();
        }
        if wc {
            prop_assert_eq!(state.client_count(), m / (q + 1));
        }
    }

    #[test]
    fn transcripts_replay_to_the_same_position(n in 3usize..14, p in 0.3f64..1.0, q in 1usize..4, wc: bool, s1: u64, s2: u64, s3: u64) {
        let board = Arc::new(gnp(n, p, s1));
        let mut waiter = RandomWaiter::new(s2);
        let mut client = client_by_name("min-degree-avoider", s3).unwrap();
        let target = |s: &GameState| exact_hamiltonian(&s.client_graph()).unwrap();
        let t = play_out(board.clone(), q, kind(wc), &mut waiter, client.as_mut(), &target, s1).unwrap();
        let back = replay(board.clone(), &t).unwrap();
        let mut direct = GameState::new(board, q, kind(wc)).unwrap();
        let mut waiter = RandomWaiter::new(s2);
        let mut client = client_by_name("min-degree-avoider", s3).unwrap();
        run_to_end(&mut direct, &mut waiter, client.as_mut());
        prop_assert_eq!(back.owners(), direct.owners());
        let reread = hamgame::Transcript::from_json(&t.to_json()).unwrap();
        let again = replay(back.board_arc().clone(), &reread).unwrap();
        prop_assert_eq!(again.owners(), direct.owners());
    }

    #[test]
    fn box_strategy_stays_canonical(q in 1usize..4, t in 1usize..6, sets in 1usize..40, short in 0usize..40, seed: u64) {
        let sizes: Vec<usize> = (0..sets).map(|i| if t > 1 && i < short { t - 1 } else { t }).collect();
        let out = simulate_box_game(disjoint_family(&sizes), t, q, &mut RandomBoxClient::new(seed)).unwrap();
        prop_assert!(out.always_canonical);
        prop_assert!(out.drops.iter().all(|d| d.holds));
    }

    #[test]
    fn posa_paths_are_simple(n in 1usize..40, p in 0.0f64..0.6, s1: u64, s2: u64) {
        let g = gnp(n, p, s1);
        let r = posa_extend(&g, s2);
        prop_assert!(is_simple_path(&g, &r.state.path));
    }

    #[test]
    fn posa_boosters_are_boosters(n in 4usize..10, p in 0.2f64..0.7, s1: u64, s2: u64) {
        let g = gnp(n, p, s1);
        prop_assume!(g.is_connected() && !exact_hamiltonian(&g).unwrap());
        let exact = boosters_exact(&g).unwrap();
        for &(u, v) in &boosters_posa(&g, s2, 8).unwrap().pairs {
            prop_assert!(exact.contains(u, v));
        }
    }

    #[test]
    fn degree_identity_holds(n in 1usize..500, p in 0.0f64..=1.0, q in 1usize..5) {
        prop_assert!(degree_identity_check(n, p, q).rel_diff <= 1e-9);
    }

    #[test]
    fn covariance_matches_joint_probability(n in 3usize..200, p in 0.01f64..0.99, k in 0usize..200) {
        let k = k % n;
        let v = variance_xk(n, p, k);
        let direct = joint_degree_probability(n, p, k) - v.pi * v.pi;
        prop_assert!((v.cov - direct).abs() <= 1e-9 * v.pi * v.pi + 1e-300, "{} vs {}", v.cov, direct);
        prop_assert!(v.var >= -1e-9 * v.mean.max(1.0));
    }

    #[test]
    fn wilson_interval_contains_the_estimate(n in 1usize..500, k in 0usize..500) {
        let k = k % (n + 1);
        let (lo, hi) = wilson(k, n, Z95);
        let r = k as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= r + 1e-12 && r <= hi + 1e-12 && hi <= 1.0);
    }

    #[test]
    fn crossover_ignores_point_order(wins in proptest::collection::vec(0usize..=40, 3..8), rot in 0usize..8) {
        let pts: Vec<(f64, usize, usize)> = wins.iter().enumerate().map(|(i, &w)| (0.5 * (i + 1) as f64, w, 40)).collect();
        let mut moved = pts.clone();
        moved.reverse();
        let len = moved.len();
        moved.rotate_left(rot % len);
        let (a, b) = (fit_crossover(&pts), fit_crossover(&moved));
        prop_assert_eq!(a.method, b.method);
        prop_assert!(a.c_star == b.c_star || (a.c_star.is_nan() && b.c_star.is_nan()));
    }
}
