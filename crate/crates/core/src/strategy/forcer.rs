//! Forcing minimum degree in Client's graph through an Eulerian orientation.
//!
//! Orient `G` so every vertex `u` has out-set `E(u)` of size at least
//! `floor(d(u)/2)`. The sets `E(u)` are disjoint, so offering `q + 1` free
//! edges of `E(u)` gives `u` one Client edge per round no matter what Client
//! picks, and `γ` such rounds per vertex need `(q+1)γ <= |E(u)|`.

use crate::game::{GameState, Offer, WaiterStrategy};
use crate::graph::orientation::euler_orientation;
use crate::graph::{EdgeId, Graph, Vertex};

use super::{offer_size, pad_lowest, StrategyError};

/// Largest `γ` the forcer accepts on a graph of minimum degree `delta`.
pub fn gamma_bound(delta: usize, q: usize) -> usize {
    delta / (2 * (q + 1))
}

pub struct MinDegreeForcer {
    q: usize,
    gamma: usize,
    /// Out-sets in board edge ids.
    out_sets: Vec<Vec<EdgeId>>,
    vertex: Vertex,
    rounds_here: usize,
    offered: usize,
    forced_rounds: usize,
    /// Rounds in which `E(u)` had fewer than `q + 1` free edges.
    shortfalls: usize,
}

impl MinDegreeForcer {
    /// Forcer on the whole board.
    pub fn new(board: &Graph, q: usize, gamma: usize) -> Result<Self, StrategyError> {
        let ids: Vec<EdgeId> = (0..board.edge_count()).collect();
        Self::on_edges(board, &ids, q, gamma)
    }

    /// Forcer on the subgraph formed by `edge_ids` of `board`.
    pub fn on_edges(board: &Graph, edge_ids: &[EdgeId], q: usize, gamma: usize) -> Result<Self, StrategyError> {
        let sub = board.subgraph_from_edge_ids(edge_ids);
        let bound = gamma_bound(sub.min_degree(), q);
        if gamma > bound {
            return Err(StrategyError::GammaTooLarge { gamma, bound });
        }
        let orientation = euler_orientation(&sub);
        let out_sets = orientation
            .out_edges
            .iter()
            .map(|set| {
                let mut ids: Vec<EdgeId> = set.iter().map(|&e| edge_ids[e]).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        Ok(MinDegreeForcer {
            q,
            gamma,
            out_sets,
            vertex: 0,
            rounds_here: 0,
            offered: 0,
            forced_rounds: 0,
            shortfalls: 0,
        })
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// Total edges offered in forcing rounds.
    pub fn offered(&self) -> usize {
        self.offered
    }

    pub fn forced_rounds(&self) -> usize {
        self.forced_rounds
    }

    pub fn shortfalls(&self) -> usize {
        self.shortfalls
    }

    pub fn is_done(&self) -> bool {
        self.gamma == 0 || self.vertex >= self.out_sets.len()
    }

    /// The next forcing offer, or `None` once every vertex has been served.
    /// A vertex whose Client degree already reached `γ` is skipped.
    pub fn next_forced(&mut self, state: &GameState) -> Option<Offer> {
        if state.is_over() {
            return None;
        }
        while !self.is_done() {
            let u = self.vertex;
            if self.rounds_here >= self.gamma || state.client_degree(u) >= self.gamma {
                self.vertex += 1;
                self.rounds_here = 0;
                continue;
            }
            let size = offer_size(state);
            let mut offer: Offer =
                self.out_sets[u].iter().copied().filter(|&e| state.is_free(e)).take(self.q + 1).collect();
            if offer.is_empty() {
                self.shortfalls += 1;
                self.vertex += 1;
                self.rounds_here = 0;
                continue;
            }
            if offer.len() < self.q + 1 {
                self.shortfalls += 1;
            }
            offer.truncate(size);
            if state.kind() == crate::game::GameKind::WaiterClient {
                pad_lowest(state, &mut offer, size);
            }
            self.rounds_here += 1;
            self.forced_rounds += 1;
            self.offered += offer.len();
            return Some(offer);
        }
        None
    }
}

impl WaiterStrategy for MinDegreeForcer {
    fn name(&self) -> String {
        "forcer".into()
    }

    fn offer(&mut self, state: &GameState) -> Offer {
        match self.next_forced(state) {
            Some(offer) => offer,
            None => state.free_edges().take(offer_size(state)).collect(),
        }
    }

    fn config(&self) -> Vec<(String, String)> {
        vec![("q".into(), self.q.to_string()), ("gamma".into(), self.gamma.to_string())]
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::game::{run_to_end, GameKind};
    use crate::strategy::{BoosterDodger, MinDegreeAvoider, UniformRandomClient};

    #[test]
    fn cycle_rejects_gamma_one() {
        assert_eq!(
            MinDegreeForcer::new(&Graph::cycle(10), 1, 1).err(),
            Some(StrategyError::GammaTooLarge { gamma: 1, bound: 0 })
        );
    }

    #[test]
    fn gamma_zero_forces_nothing() {
        let g = Graph::complete(6);
        let mut f = MinDegreeForcer::new(&g, 1, 0).unwrap();
        let s = GameState::new(Arc::new(g), 1, GameKind::WaiterClient).unwrap();
        assert!(f.is_done());
        assert_eq!(f.next_forced(&s), None);
    }

    #[test]
    fn k9_reaches_min_degree_two() {
        let g = Arc::new(Graph::complete(9));
        for seed in 0..50 {
            let clients: Vec<Box<dyn crate::game::ClientStrategy>> = vec![
                Box::new(UniformRandomClient::new(seed)),
                Box::new(MinDegreeAvoider),
                Box::new(BoosterDodger::new(seed)),
            ];
            for mut c in clients {
                let mut f = MinDegreeForcer::new(&g, 1, 2).unwrap();
                let mut s = GameState::new(g.clone(), 1, GameKind::WaiterClient).unwrap();
                assert!(run_to_end(&mut s, &mut f, c.as_mut()).is_none());
                assert!(s.client_degrees().iter().all(|&d| d >= 2));
                assert!(f.forced_rounds() <= 2 * 9);
                assert!(f.offered() <= 2 * 2 * 9);
                assert_eq!(f.shortfalls(), 0);
            }
        }
    }
}
