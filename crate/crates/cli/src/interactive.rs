//! Text-mode play: a human takes one side by typing edge ids.

use std::io::{self, BufRead, Write};
use std::sync::Arc;

use hamgame::game::{ClientStrategy, Fault, GameKind, GameState, Player, Transcript, WaiterStrategy};
use hamgame::graph::{EdgeId, Graph};
use hamgame::harness::hamiltonicity_target;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Client,
    Waiter,
}

impl std::str::FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "client" => Ok(Side::Client),
            "waiter" => Ok(Side::Waiter),
            other => Err(format!("unknown side {other:?} (client or waiter)")),
        }
    }
}

pub enum Opponent {
    Waiter(Box<dyn WaiterStrategy + Send>),
    Client(Box<dyn ClientStrategy + Send>),
}

pub struct Session {
    pub transcript: Transcript,
    /// `false` when input ended before the game did.
    pub completed: bool,
}

fn label(board: &Graph, e: EdgeId) -> String {
    let (u, v) = board.edge(e);
    format!("{e} ({u}-{v})")
}

fn list(board: &Graph, ids: &[EdgeId]) -> String {
    ids.iter().map(|&e| label(board, e)).collect::<Vec<_>>().join(", ")
}

/// Reads one line; `None` at end of input.
fn read_line(input: &mut impl BufRead) -> io::Result<Option<String>> {
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        return Ok(None);
    }
    Ok(Some(line.trim().to_string()))
}

fn parse_ids(line: &str) -> Result<Vec<EdgeId>, String> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("{s:?} is not an edge id")))
        .collect()
}

/// Plays one game with a human on `side`. Malformed or illegal input is
/// rejected and asked for again; the position only changes on legal moves.
#[allow(clippy::too_many_arguments)]
pub fn play(
    board: Arc<Graph>,
    q: usize,
    kind: GameKind,
    side: Side,
    mut opponent: Opponent,
    seed: u64,
    exact_cap: usize,
    input: &mut impl BufRead,
    out: &mut impl Write,
) -> io::Result<Session> {
    let mut state = GameState::new(board.clone(), q, kind).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
    let target = hamiltonicity_target(exact_cap, 5, seed);
    writeln!(
        out,
        "{} game, q = {q}, {} vertices, {} edges; you are {}.",
        kind.short_name(),
        board.n(),
        board.edge_count(),
        if side == Side::Client { "Client" } else { "Waiter" }
    )?;
    writeln!(out, "Type edge ids; 'free' lists the free edges.")?;
    let mut fault: Option<Fault> = None;
    let mut completed = true;

    'game: while !state.is_over() {
        if state.leftover_pending() {
            let rest: Vec<EdgeId> = state.free_edges().collect();
            state.apply_leftover().expect("leftover is pending");
            writeln!(out, "Leftover to Waiter: {}", list(&board, &rest))?;
            break;
        }
        let round = state.round() + 1;
        match &mut opponent {
            Opponent::Waiter(waiter) => {
                let offer = waiter.offer(&state);
                if let Err(violation) = state.validate_offer(&offer) {
                    fault = Some(Fault { side: Player::Waiter, round: state.round(), violation });
                    break;
                }
                writeln!(out, "Round {round}: Waiter offers {}", list(&board, &offer))?;
                loop {
                    write!(out, "pick> ")?;
                    out.flush()?;
                    let Some(line) = read_line(input)? else {
                        completed = false;
                        break 'game;
                    };
                    if line == "free" {
                        writeln!(out, "{}", list(&board, &state.free_edges().collect::<Vec<_>>()))?;
                        continue;
                    }
                    match line.parse::<EdgeId>() {
                        Ok(pick) => match state.apply_round(&offer, pick) {
                            Ok(()) => break,
                            Err(v) => writeln!(out, "illegal: {v}; try again")?,
                        },
                        Err(_) => writeln!(out, "enter one edge id from the offer")?,
                    }
                }
            }
            Opponent::Client(client) => {
                let max = (q + 1).min(state.free_count());
                let size = if kind == GameKind::WaiterClient { format!("{max}") } else { format!("1 to {max}") };
                writeln!(out, "Round {round}: offer {size} free edges ({} free)", state.free_count())?;
                let offer = loop {
                    write!(out, "offer> ")?;
                    out.flush()?;
                    let Some(line) = read_line(input)? else {
                        completed = false;
                        break 'game;
                    };
                    if line == "free" {
                        writeln!(out, "{}", list(&board, &state.free_edges().collect::<Vec<_>>()))?;
                        continue;
                    }
                    match parse_ids(&line) {
                        Ok(ids) => match state.validate_offer(&ids) {
                            Ok(()) => break ids,
                            Err(v) => writeln!(out, "illegal: {v}; try again")?,
                        },
                        Err(e) => writeln!(out, "{e}; try again")?,
                    }
                };
                let pick = client.pick(&state, &offer);
                if let Err(violation) = state.apply_round(&offer, pick) {
                    fault = Some(Fault { side: Player::Client, round: state.round(), violation });
                    break;
                }
                writeln!(out, "Client takes {}", label(&board, pick))?;
            }
        }
    }

    let mut config = vec![("human".to_string(), if side == Side::Client { "client" } else { "waiter" }.to_string())];
    match &opponent {
        Opponent::Waiter(w) => {
            config.push(("waiter".into(), w.name()));
            config.extend(w.config());
        }
        Opponent::Client(c) => config.push(("client".into(), c.name())),
    }
    if !completed {
        config.push(("aborted".into(), format!("end of input after {} rounds", state.round())));
    }
    let transcript = Transcript::from_state(&state, seed, &target, fault, config);
    if completed {
        writeln!(
            out,
            "Game over after {} rounds: Client's graph is {}Hamiltonian; {:?} wins.",
            state.round(),
            if transcript.target_holds { "" } else { "not " },
            transcript.winner
        )?;
    } else {
        writeln!(out, "\nInput ended; game aborted after {} rounds.", state.round())?;
    }
    Ok(Session { transcript, completed })
}
