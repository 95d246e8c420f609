use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::sync::Arc;

use hamgame::game::replay;
use hamgame::harness::HarnessError;
use hamgame::{GameKind, Graph, Transcript};
use hamgame_cli::interactive::{play, Opponent, Side};
use hamgame_cli::CliError;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hamgame"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_with_input(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["gen", "--n", "10"]).status.code(), Some(1), "neither --p nor --c");
    assert_eq!(run(&["trials", "--kind", "cw", "--waiter", "staged", "--n", "20", "--trials", "2"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--inject-fault"]).status.code(), Some(2));
    let fault = HarnessError::FaultThreshold { n: 10, c: 1.0, trials: 4, faults: 3, first: "trial 0".into() };
    assert_eq!(CliError::from(fault).exit_code(), 3);
}

#[test]
fn gen_is_seeded_and_readable() {
    let a = text(&run(&["gen", "--n", "40", "--c", "2", "--seed", "9"]));
    assert_eq!(a, text(&run(&["gen", "--n", "40", "--c", "2", "--seed", "9"])));
    let g = Graph::from_edge_list(&a).unwrap();
    assert_eq!(g.n(), 40);
    let json: serde_json::Value = serde_json::from_slice(&run(&["gen", "--n", "40", "--c", "2", "--seed", "9", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["edges"].as_array().unwrap().len(), g.edge_count());
}

#[test]
fn human_client_on_k4_against_forcer_finishes_in_three_rounds() {
    let dir = tempfile::tempdir().unwrap();
    let save = p(dir.path(), "k4.json");
    // Each id in turn; ids outside the current offer are rejected and asked again.
    let input = "0\n1\n2\n3\n4\n5\n".repeat(3);
    let out = run_with_input(&["play", "--complete", "4", "--opponent", "forcer", "--save", &save], &input);
    assert_eq!(out.status.code(), Some(0));
    let shown = text(&out);
    assert!(shown.contains("Game over after 3 rounds"), "{shown}");
    assert!(shown.contains("illegal"));
    let t = Transcript::from_json(&std::fs::read_to_string(&save).unwrap()).unwrap();
    assert_eq!(t.rounds.len(), 3);
    let board = Graph::from_edge_list(&std::fs::read_to_string(format!("{save}.board.txt")).unwrap()).unwrap();
    assert_eq!(board.edge_count(), 6);
}

#[test]
fn illegal_entry_leaves_the_position_unchanged() {
    let board = Arc::new(Graph::complete(4));
    let waiter = hamgame::harness::waiter_by_name("lowest", &board, 1, GameKind::WaiterClient, &Default::default(), 0).unwrap();
    let mut input: &[u8] = b"banana\n9\n3\n1\n";
    let mut shown = Vec::new();
    let s = play(board, 1, GameKind::WaiterClient, Side::Client, Opponent::Waiter(waiter), 0, 12, &mut input, &mut shown).unwrap();
    let shown = String::from_utf8(shown).unwrap();
    assert_eq!(shown.matches("pick> ").count(), 5, "{shown}");
    assert!(!s.completed);
    assert_eq!(s.transcript.rounds.len(), 1);
    assert_eq!(s.transcript.rounds[0].pick, 1);
    assert!(s.transcript.config.iter().any(|(k, _)| k == "aborted"));
}

#[test]
fn human_waiter_offers_are_validated() {
    let board = Arc::new(Graph::complete(4));
    let client = hamgame::strategy::client_by_name("lowest", 0).unwrap();
    let mut input: &[u8] = b"0\n0,0\n0,9\n0,1\n2,3\n4,5\n";
    let mut shown = Vec::new();
    let s = play(board, 1, GameKind::WaiterClient, Side::Waiter, Opponent::Client(client), 0, 12, &mut input, &mut shown).unwrap();
    assert!(s.completed, "{}", String::from_utf8_lossy(&shown));
    assert_eq!(s.transcript.client_edge_ids(), vec![0, 2, 4]);
}

#[test]
fn saved_transcripts_replay_to_the_same_state() {
    let dir = tempfile::tempdir().unwrap();
    let (t, b, csv) = (p(dir.path(), "t.json"), p(dir.path(), "b.txt"), p(dir.path(), "t.csv"));
    for kind in ["wc", "cw"] {
        let out = run(&["play-one", "--kind", kind, "--n", "30", "--c", "3", "--seed", "4", "--transcript-out", &t, "--board-out", &b]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let transcript = Transcript::from_json(&std::fs::read_to_string(&t).unwrap()).unwrap();
        let board = Arc::new(Graph::from_edge_list(&std::fs::read_to_string(&b).unwrap()).unwrap());
        let state = replay(board.clone(), &transcript).unwrap();
        assert!(state.is_over());
        let client: Vec<usize> = state.client_edges().to_vec();
        let mut recorded = transcript.client_edge_ids();
        recorded.sort_unstable();
        let mut replayed = client.clone();
        replayed.sort_unstable();
        assert_eq!(recorded, replayed);

        let out = run(&["export", "transcript", "--transcript", &t, "--board", &b, "-o", &csv]);
        assert_eq!(out.status.code(), Some(0));
        let rows = std::fs::read_to_string(&csv).unwrap();
        assert_eq!(rows.lines().filter(|l| !l.starts_with('#')).count(), transcript.rounds.len() + 1);
    }
}

#[test]
fn config_file_then_flags_then_set() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = p(dir.path(), "run.cfg");
    std::fs::write(&cfg, "# grid\nkind=cw\nn=24\nc=1,2,4\ntrials=5\nseed=3\nwaiter=lowest\n").unwrap();
    let row = |extra: &[&str]| {
        let mut args = vec!["trials", "--config", &cfg];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        text(&o).lines().last().unwrap().to_string()
    };
    assert!(row(&[]).starts_with("CW,1,24,1,"), "{}", row(&[]));
    assert!(row(&["--q", "2"]).starts_with("CW,2,24,1,"));
    assert!(row(&["--q", "2", "--set", "q=3"]).starts_with("CW,3,24,1,"));
    assert!(row(&["--set", "trials=7"]).contains(",7,"));
}

#[test]
fn sweep_csv_does_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let out = p(dir.path(), &format!("s{workers}.csv"));
        let o = run(&["sweep", "--n", "30", "--c", "0.5,2,4", "--trials", "8", "--seed", "11", "--workers", workers, "-o", &out]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(&out).unwrap());
        let cfg = std::fs::read_to_string(format!("{out}.cfg")).unwrap();
        assert!(cfg.contains("seed=11"));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs.remove(0)).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "kind,q,n,c,p,trials,waiter_wins,client_wins,faults,mean_rounds,ci_lo,ci_hi,seed");
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn sweep_needs_three_points() {
    assert_eq!(run(&["sweep", "--n", "20", "--c", "1,2", "--trials", "2"]).status.code(), Some(1));
}

#[test]
fn boxgame_reports_the_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let traj = p(dir.path(), "traj.csv");
    let o = run(&["boxgame", "--t", "2", "--count", "16", "--exhaustive", "--trajectory-out", &traj]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&traj).unwrap().lines().count() > 1);
}

#[test]
fn verify_fast_passes() {
    let o = run(&["verify", "--level", "fast"]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    assert!(!text(&o).contains("FAIL"));
}
