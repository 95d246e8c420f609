use hamgame_web::{box_trajectory, play_game, sample_graph};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("valid json")
}

#[test]
fn sampled_histogram_accounts_for_every_vertex() {
    let v = parse(sample_graph(120, 1.5, 1, 4));
    let counts: Vec<u64> = serde_json::from_value(v["counts"].clone()).unwrap();
    assert_eq!(counts.iter().sum::<u64>(), 120);
    let edges = v["edges"].as_array().unwrap().len() as u64;
    let degree_sum: u64 = counts.iter().enumerate().map(|(i, c)| i as u64 * c).sum();
    assert_eq!(degree_sum, 2 * edges);
    let mu: Vec<f64> = serde_json::from_value(v["mu"].clone()).unwrap();
    assert!((mu.iter().sum::<f64>() - 120.0).abs() < 1e-6);
}

#[test]
fn same_seed_same_answer() {
    assert_eq!(sample_graph(80, 2.0, 2, 9), sample_graph(80, 2.0, 2, 9));
    assert_eq!(play_game(30, 3.0, 5, "cw", 1, "staged", "random"), play_game(30, 3.0, 5, "cw", 1, "staged", "random"));
}

#[test]
fn played_game_partitions_the_board() {
    let v = parse(play_game(30, 3.0, 11, "wc", 1, "random", "random"));
    assert!(v.get("error").is_none(), "{v}");
    let owners = v["owners"].as_array().unwrap();
    assert_eq!(owners.len(), v["edges"].as_array().unwrap().len());
    let client = owners.iter().filter(|o| *o == "C").count();
    assert_eq!(client as u64, v["rounds"].as_u64().unwrap());
}

#[test]
fn bad_input_reports_error() {
    assert!(parse(sample_graph(1, 1.0, 1, 0))["error"].is_string());
    assert!(parse(play_game(20, 2.0, 0, "cw", 1, "nobody", "random"))["error"].is_string());
    assert!(parse(box_trajectory(3, 4, 1, "psychic", 0))["error"].is_string());
}

#[test]
fn box_bound_holds_for_both_clients() {
    for client in ["random", "greedy"] {
        let v = parse(box_trajectory(10, 300, 1, client, 2));
        assert_eq!(v["eq4_holds"], true, "{client}");
        assert!(!v["rows"].as_array().unwrap().is_empty());
    }
}
