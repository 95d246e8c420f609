//! Rules engine for biased `(1 : q)` Waiter-Client and Client-Waiter games
//! played on the edge set of a graph.

mod transcript;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Vertex};

pub use transcript::{replay, ReplayError, RoundRecord, Transcript};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameKind {
    /// Waiter wins iff Client's graph has the target property.
    WaiterClient,
    /// Client wins iff Client's graph has the target property; Waiter may
    /// offer between 1 and q+1 edges per round.
    ClientWaiter,
}

impl GameKind {
    pub fn short_name(self) -> &'static str {
        match self {
            GameKind::WaiterClient => "WC",
            GameKind::ClientWaiter => "CW",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl std::str::FromStr for GameKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "wc" | "waiter-client" | "waiterclient" => Ok(GameKind::WaiterClient),
            "cw" | "client-waiter" | "clientwaiter" => Ok(GameKind::ClientWaiter),
            other => Err(format!("unknown game kind {other:?} (use wc or cw)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Owner {
    Free,
    Waiter,
    Client,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Waiter,
    Client,
}

/// A set of free edges offered to Client in one round.
pub type Offer = Vec<EdgeId>;

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    #[error("bias must be at least 1")]
    ZeroBias,
    #[error("the game is already over")]
    GameOver,
    #[error("offered edge {0} is not free")]
    NotFree(EdgeId),
    #[error("offered edge {0} does not exist")]
    NoSuchEdge(EdgeId),
    #[error("edge {0} offered twice")]
    Repeated(EdgeId),
    #[error("offer has {got} edges, the rules require {expected}")]
    WrongSize { got: usize, expected: String },
    #[error("pick {0} is not in the offer")]
    PickOutsideOffer(EdgeId),
    #[error("fewer than q+1 free edges remain; the leftover step must be taken")]
    LeftoverPending,
}

/// Mid-game position: board, bias, kind and the owner of every edge.
#[derive(Clone, Debug)]
pub struct GameState {
    board: Arc<Graph>,
    q: usize,
    kind: GameKind,
    owner: Vec<Owner>,
    round: usize,
    free_count: usize,
    client_edges: Vec<EdgeId>,
    waiter_count: usize,
    client_degree: Vec<usize>,
    free_degree: Vec<usize>,
    history: Vec<RoundRecord>,
    leftover: Vec<EdgeId>,
}

impl GameState {
    pub fn new(board: Arc<Graph>, q: usize, kind: GameKind) -> Result<Self, Violation> {
        if q == 0 {
            return Err(Violation::ZeroBias);
        }
        let m = board.edge_count();
        let free_degree = board.degrees();
        Ok(GameState {
            q,
            kind,
            owner: vec![Owner::Free; m],
            round: 0,
            free_count: m,
            client_edges: Vec::new(),
            waiter_count: 0,
            client_degree: vec![0; board.n()],
            free_degree,
            history: Vec::new(),
            leftover: Vec::new(),
            board,
        })
    }

    pub fn board(&self) -> &Graph {
        &self.board
    }

    pub fn board_arc(&self) -> &Arc<Graph> {
        &self.board
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn owner(&self, e: EdgeId) -> Owner {
        self.owner[e]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owner
    }

    pub fn is_free(&self, e: EdgeId) -> bool {
        self.owner[e] == Owner::Free
    }

    pub fn free_count(&self) -> usize {
        self.free_count
    }

    pub fn waiter_count(&self) -> usize {
        self.waiter_count
    }

    pub fn client_count(&self) -> usize {
        self.client_edges.len()
    }

    /// Client's edges in the order they were claimed.
    pub fn client_edges(&self) -> &[EdgeId] {
        &self.client_edges
    }

    pub fn client_degree(&self, v: Vertex) -> usize {
        self.client_degree[v]
    }

    pub fn client_degrees(&self) -> &[usize] {
        &self.client_degree
    }

    /// Number of free edges at `v`.
    pub fn free_degree(&self, v: Vertex) -> usize {
        self.free_degree[v]
    }

    pub fn history(&self) -> &[RoundRecord] {
        &self.history
    }

    pub fn leftover(&self) -> &[EdgeId] {
        &self.leftover
    }

    pub fn is_over(&self) -> bool {
        self.free_count == 0
    }

    /// Free edges in increasing id order.
    pub fn free_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.owner.iter().enumerate().filter(|&(_, &o)| o == Owner::Free).map(|(e, _)| e)
    }

    /// Free edges at `v` in increasing id order.
    pub fn free_edges_at(&self, v: Vertex) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> =
            self.board.incident(v).iter().map(|&(_, e)| e).filter(|&e| self.is_free(e)).collect();
        out.sort_unstable();
        out
    }

    /// `G_C` as a standalone graph (edge ids in claim order).
    pub fn client_graph(&self) -> Graph {
        self.board.subgraph_from_edge_ids(&self.client_edges)
    }

    pub fn waiter_edges(&self) -> Vec<EdgeId> {
        self.edges_owned_by(Owner::Waiter)
    }

    pub fn edges_owned_by(&self, who: Owner) -> Vec<EdgeId> {
        self.owner.iter().enumerate().filter(|&(_, &o)| o == who).map(|(e, _)| e).collect()
    }

    /// Whether Waiter-Client rules require the terminal leftover step now.
    pub fn leftover_pending(&self) -> bool {
        self.kind == GameKind::WaiterClient && self.free_count > 0 && self.free_count < self.q + 1
    }

    /// Checks an offer against the kind-specific size rule; never mutates.
    pub fn validate_offer(&self, offer: &[EdgeId]) -> Result<(), Violation> {
        if self.is_over() {
            return Err(Violation::GameOver);
        }
        if self.leftover_pending() {
            return Err(Violation::LeftoverPending);
        }
        let mut seen = std::collections::HashSet::with_capacity(offer.len());
        for &e in offer {
            if e >= self.owner.len() {
                return Err(Violation::NoSuchEdge(e));
            }
            if !seen.insert(e) {
                return Err(Violation::Repeated(e));
            }
            if self.owner[e] != Owner::Free {
                return Err(Violation::NotFree(e));
            }
        }
        let size = offer.len();
        match self.kind {
            GameKind::WaiterClient => {
                if size != self.q + 1 {
                    return Err(Violation::WrongSize { got: size, expected: format!("exactly {}", self.q + 1) });
                }
            }
            GameKind::ClientWaiter => {
                if size == 0 || size > self.q + 1 {
                    return Err(Violation::WrongSize { got: size, expected: format!("1..={}", self.q + 1) });
                }
            }
        }
        Ok(())
    }

    /// Plays one round: `pick` goes to Client, the rest of `offer` to Waiter.
    pub fn apply_round(&mut self, offer: &[EdgeId], pick: EdgeId) -> Result<(), Violation> {
        self.validate_offer(offer)?;
        if !offer.contains(&pick) {
            return Err(Violation::PickOutsideOffer(pick));
        }
        for &e in offer {
            if e == pick {
                self.claim(e, Owner::Client);
            } else {
                self.claim(e, Owner::Waiter);
            }
        }
        self.history.push(RoundRecord { offer: offer.to_vec(), pick });
        self.round += 1;
        Ok(())
    }

    /// Terminal Waiter-Client step: all remaining free edges go to Waiter.
    pub fn apply_leftover(&mut self) -> Result<(), Violation> {
        if !self.leftover_pending() {
            return Err(Violation::WrongSize {
                got: self.free_count,
                expected: format!("fewer than {} free edges in a Waiter-Client game", self.q + 1),
            });
        }
        let rest: Vec<EdgeId> = self.free_edges().collect();
        for &e in &rest {
            self.claim(e, Owner::Waiter);
        }
        self.leftover = rest;
        Ok(())
    }

    fn claim(&mut self, e: EdgeId, who: Owner) {
        debug_assert_eq!(self.owner[e], Owner::Free);
        self.owner[e] = who;
        self.free_count -= 1;
        let (u, v) = self.board.edge(e);
        self.free_degree[u] -= 1;
        self.free_degree[v] -= 1;
        match who {
            Owner::Client => {
                self.client_edges.push(e);
                self.client_degree[u] += 1;
                self.client_degree[v] += 1;
            }
            Owner::Waiter => self.waiter_count += 1,
            Owner::Free => unreachable!("claims never free an edge"),
        }
    }

    /// Recounts ownership from scratch and compares with the cached counters
    /// and the round log. Returns the first inconsistency found.
    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        let m = self.board.edge_count();
        let count = |who| self.owner.iter().filter(|&&o| o == who).count();
        let (free, waiter, client) = (count(Owner::Free), count(Owner::Waiter), count(Owner::Client));
        if free + waiter + client != m
            || free != self.free_count
            || waiter != self.waiter_count
            || client != self.client_edges.len()
        {
            return Err(InvariantViolation::Partition { free, waiter, client, edges: m });
        }
        let mut expected = vec![Owner::Free; m];
        for r in &self.history {
            for &e in &r.offer {
                expected[e] = if e == r.pick { Owner::Client } else { Owner::Waiter };
            }
        }
        for &e in &self.leftover {
            expected[e] = Owner::Waiter;
        }
        if let Some(e) = (0..m).find(|&e| expected[e] != self.owner[e]) {
            return Err(InvariantViolation::Ownership { edge: e, recorded: expected[e], actual: self.owner[e] });
        }
        if self.kind == GameKind::WaiterClient {
            let rounds = self.history.len();
            if client != rounds || waiter != rounds * self.q + self.leftover.len() {
                return Err(InvariantViolation::RoundCounts { rounds, client, waiter });
            }
        }
        Ok(())
    }

    /// Overwrites an edge's owner without any rule checks. Only for
    /// fault-injection tests of the invariant checker.
    #[doc(hidden)]
    pub fn inject_owner_fault(&mut self, e: EdgeId, who: Owner) {
        self.owner[e] = who;
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
pub enum InvariantViolation {
    #[error("partition broken: {free} free + {waiter} Waiter + {client} Client vs {edges} edges")]
    Partition { free: usize, waiter: usize, client: usize, edges: usize },
    #[error("edge {edge} is {actual:?} but the round log says {recorded:?}")]
    Ownership { edge: EdgeId, recorded: Owner, actual: Owner },
    #[error("after {rounds} rounds Client has {client} and Waiter {waiter} edges")]
    RoundCounts { rounds: usize, client: usize, waiter: usize },
}

/// Chooses Waiter's offers.
pub trait WaiterStrategy {
    fn name(&self) -> String;
    fn offer(&mut self, state: &GameState) -> Offer;
    /// Resolved configuration, echoed into transcripts.
    fn config(&self) -> Vec<(String, String)> {
        Vec::new()
    }
}

/// Chooses Client's edge from an offer.
pub trait ClientStrategy {
    fn name(&self) -> String;
    fn pick(&mut self, state: &GameState, offer: &[EdgeId]) -> EdgeId;
}

/// A winning condition evaluated on the final position (normally on `G_C`).
pub trait Target {
    fn holds(&self, state: &GameState) -> bool;
}

impl<F: Fn(&GameState) -> bool> Target for F {
    fn holds(&self, state: &GameState) -> bool {
        self(state)
    }
}

/// Winner given whether the target holds for Client's final graph.
pub fn adjudicate(kind: GameKind, target_holds: bool) -> Player {
    match (kind, target_holds) {
        (GameKind::WaiterClient, true) | (GameKind::ClientWaiter, false) => Player::Waiter,
        _ => Player::Client,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fault {
    pub side: Player,
    pub round: usize,
    pub violation: Violation,
}

/// Plays a game to the end. An illegal move aborts the game before any
/// mutation; the faulting side is recorded as the loser.
pub fn play_out(
    board: Arc<Graph>,
    q: usize,
    kind: GameKind,
    waiter: &mut dyn WaiterStrategy,
    client: &mut dyn ClientStrategy,
    target: &dyn Target,
    seed: u64,
) -> Result<Transcript, Violation> {
    let mut state = GameState::new(board, q, kind)?;
    let fault = run_to_end(&mut state, waiter, client);
    Ok(Transcript::from_state(&state, seed, target, fault, waiter.config()))
}

/// Drives `state` until the board is exhausted or a strategy misbehaves.
pub fn run_to_end(
    state: &mut GameState,
    waiter: &mut dyn WaiterStrategy,
    client: &mut dyn ClientStrategy,
) -> Option<Fault> {
    while !state.is_over() {
        if state.leftover_pending() {
            state.apply_leftover().expect("leftover step is pending");
            break;
        }
        let offer = waiter.offer(state);
        if let Err(violation) = state.validate_offer(&offer) {
            return Some(Fault { side: Player::Waiter, round: state.round(), violation });
        }
        let pick = client.pick(state, &offer);
        if let Err(violation) = state.apply_round(&offer, pick) {
            return Some(Fault { side: Player::Client, round: state.round(), violation });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(g: Graph, q: usize, kind: GameKind) -> GameState {
        GameState::new(Arc::new(g), q, kind).unwrap()
    }

    #[test]
    fn new_game() {
        let s = state(Graph::complete(3), 1, GameKind::WaiterClient);
        assert_eq!(s.free_count(), 3);
        assert_eq!(s.round(), 0);
        let s = state(Graph::new(4), 1, GameKind::ClientWaiter);
        assert!(s.is_over());
        assert_eq!(s.client_count(), 0);
        assert_eq!(
            GameState::new(Arc::new(Graph::complete(3)), 0, GameKind::WaiterClient).unwrap_err(),
            Violation::ZeroBias
        );
    }

    #[test]
    fn offer_sizes() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let wc = state(g.clone(), 1, GameKind::WaiterClient);
        assert!(wc.validate_offer(&[0, 1]).is_ok());
        assert!(matches!(wc.validate_offer(&[0]), Err(Violation::WrongSize { .. })));
        assert!(matches!(wc.validate_offer(&[0, 0]), Err(Violation::Repeated(0))));
        assert!(matches!(wc.validate_offer(&[0, 9]), Err(Violation::NoSuchEdge(9))));
        let cw = state(g, 2, GameKind::ClientWaiter);
        assert!(cw.validate_offer(&[3]).is_ok());
        assert!(cw.validate_offer(&[0, 1, 2]).is_ok());
        assert!(cw.validate_offer(&[0, 1, 2, 3]).is_err());
        assert!(cw.validate_offer(&[]).is_err());
        let k4 = state(Graph::complete(4), 5, GameKind::ClientWaiter);
        assert!(k4.validate_offer(&[0, 1, 2, 3, 4, 5]).is_ok());
    }

    #[test]
    fn rounds_and_leftover() {
        let mut s = state(Graph::complete(3), 1, GameKind::WaiterClient);
        s.apply_round(&[0, 1], 0).unwrap();
        assert_eq!(s.owner(0), Owner::Client);
        assert_eq!(s.owner(1), Owner::Waiter);
        assert!(matches!(s.validate_offer(&[1, 2]), Err(Violation::LeftoverPending)));
        assert!(s.leftover_pending());
        s.apply_leftover().unwrap();
        assert_eq!(s.owner(2), Owner::Waiter);
        assert!(s.is_over());
        s.check_invariants().unwrap();

        let mut s = state(Graph::from_edges(2, [(0, 1)]).unwrap(), 2, GameKind::WaiterClient);
        assert!(s.leftover_pending());
        s.apply_leftover().unwrap();
        assert_eq!(s.client_count(), 0);
    }

    #[test]
    fn pick_outside_offer_leaves_state_untouched() {
        let mut s = state(Graph::complete(4), 1, GameKind::WaiterClient);
        let before = s.owners().to_vec();
        assert_eq!(s.apply_round(&[0, 1], 2), Err(Violation::PickOutsideOffer(2)));
        assert_eq!(s.owners(), &before[..]);
        assert_eq!(s.round(), 0);
    }

    #[test]
    fn invariant_checker_catches_injected_fault() {
        let mut s = state(Graph::complete(4), 1, GameKind::WaiterClient);
        s.apply_round(&[0, 1], 1).unwrap();
        s.check_invariants().unwrap();
        s.inject_owner_fault(0, Owner::Free);
        assert!(matches!(s.check_invariants(), Err(InvariantViolation::Partition { .. })));
    }

    #[test]
    fn adjudication_table() {
        assert_eq!(adjudicate(GameKind::WaiterClient, true), Player::Waiter);
        assert_eq!(adjudicate(GameKind::WaiterClient, false), Player::Client);
        assert_eq!(adjudicate(GameKind::ClientWaiter, true), Player::Client);
        assert_eq!(adjudicate(GameKind::ClientWaiter, false), Player::Waiter);
    }
}
