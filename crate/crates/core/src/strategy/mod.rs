//! Player strategies: simple and adversarial baselines, the min-degree
//! forcer, the staged Hamiltonicity Waiter, the vertex isolator for
//! Client-Waiter games, and transversal-game tools.

mod clients;
pub mod forcer;
pub mod isolator;
pub mod staged;
pub mod transversal;

use rand::seq::index::sample;
use rand::Rng;
use thiserror::Error;

use crate::game::{GameKind, GameState, Offer, WaiterStrategy};
use crate::graph::EdgeId;
use crate::rng::{rng_from_seed, GameRng};

pub use clients::{BoosterDodger, LowestIdClient, MinDegreeAvoider, UniformRandomClient};
pub use forcer::MinDegreeForcer;
pub use isolator::{box_isolator_plan, BoxIsolatorWaiter, IsolatorPlan, IsolatorWaiter};
pub use staged::{StageConfig, StagedWaiter};
pub use transversal::PotentialWaiter;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("gamma = {gamma} exceeds floor(min degree / (2(q+1))) = {bound}")]
    GammaTooLarge { gamma: usize, bound: usize },
    #[error("unknown strategy {0:?}")]
    Unknown(String),
    #[error("strategy {name} does not support {kind} games")]
    WrongKind { name: String, kind: GameKind },
    #[error("invalid strategy parameter: {0}")]
    InvalidParameter(String),
}

/// Size Waiter must (WC) or may at most (CW) offer this round.
pub(crate) fn offer_size(state: &GameState) -> usize {
    (state.q() + 1).min(state.free_count())
}

/// Lowest free ids not already in `offer`, appended until it has `size` edges.
pub(crate) fn pad_lowest(state: &GameState, offer: &mut Offer, size: usize) {
    if offer.len() >= size {
        offer.truncate(size);
        return;
    }
    for e in state.free_edges() {
        if offer.len() == size {
            break;
        }
        if !offer.contains(&e) {
            offer.push(e);
        }
    }
}

/// Offers the lowest free ids, always the full `q + 1` where possible.
pub struct LowestIdWaiter;

impl WaiterStrategy for LowestIdWaiter {
    fn name(&self) -> String {
        "lowest".into()
    }

    fn offer(&mut self, state: &GameState) -> Offer {
        state.free_edges().take(offer_size(state)).collect()
    }
}

/// Offers a uniformly random set of free edges; in Client-Waiter games the
/// size is itself uniform in `1..=q+1`.
pub struct RandomWaiter {
    rng: GameRng,
}

impl RandomWaiter {
    pub fn new(seed: u64) -> Self {
        RandomWaiter { rng: rng_from_seed(seed) }
    }
}

impl WaiterStrategy for RandomWaiter {
    fn name(&self) -> String {
        "random".into()
    }

    fn offer(&mut self, state: &GameState) -> Offer {
        let free: Vec<EdgeId> = state.free_edges().collect();
        let max = offer_size(state);
        let size = match state.kind() {
            GameKind::WaiterClient => max,
            GameKind::ClientWaiter => self.rng.gen_range(1..=max),
        };
        let mut offer: Offer = sample(&mut self.rng, free.len(), size).into_iter().map(|i| free[i]).collect();
        offer.sort_unstable();
        offer
    }
}

/// Client strategy names accepted by [`client_by_name`].
pub const CLIENT_NAMES: [&str; 4] = ["random", "lowest", "min-degree-avoider", "booster-dodger"];

/// Waiter strategy names accepted by the harness.
pub const WAITER_NAMES: [&str; 6] = ["lowest", "random", "forcer", "staged", "isolator", "box-isolator"];

pub fn client_by_name(name: &str, seed: u64) -> Result<Box<dyn crate::game::ClientStrategy + Send>, StrategyError> {
    Ok(match name {
        "random" => Box::new(UniformRandomClient::new(seed)),
        "lowest" => Box::new(LowestIdClient),
        "min-degree-avoider" => Box::new(MinDegreeAvoider),
        "booster-dodger" => Box::new(BoosterDodger::new(seed)),
        other => return Err(StrategyError::Unknown(other.into())),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::game::{play_out, ClientStrategy};
    use crate::graph::Graph;

    #[test]
    fn trivial_players_on_triangle() {
        let g = Arc::new(Graph::complete(3));
        let has_edge = |s: &GameState| s.client_count() >= 1;
        let t = play_out(g, 1, GameKind::WaiterClient, &mut LowestIdWaiter, &mut LowestIdClient, &has_edge, 0).unwrap();
        assert_eq!(t.winner, crate::game::Player::Waiter);
        assert_eq!(t.client_edge_ids(), vec![0]);
    }

    #[test]
    fn min_degree_avoider_prefers_well_connected_edges() {
        // Vertex 0 is isolated in G_C apart from the offered edge; 1..=6 form
        // a dense block where 1 and 2 already have Client degree 5.
        let mut g = Graph::new(8);
        let e0 = g.add_edge(0, 7).unwrap();
        let e1 = g.add_edge(1, 2).unwrap();
        let mut block = Vec::new();
        for u in [1, 2] {
            for w in 3..=7 {
                block.push(g.add_edge(u, w).unwrap());
            }
        }
        let mut s = GameState::new(Arc::new(g), 1, GameKind::ClientWaiter).unwrap();
        for e in block {
            s.apply_round(&[e], e).unwrap();
        }
        assert_eq!(MinDegreeAvoider.pick(&s, &[e0, e1]), e1);
    }

    #[test]
    fn random_waiter_offers_are_legal() {
        let g = Arc::new(Graph::complete(7));
        for kind in [GameKind::WaiterClient, GameKind::ClientWaiter] {
            let mut s = GameState::new(g.clone(), 2, kind).unwrap();
            let mut w = RandomWaiter::new(3);
            let mut c = UniformRandomClient::new(4);
            assert!(crate::game::run_to_end(&mut s, &mut w, &mut c).is_none());
            s.check_invariants().unwrap();
        }
    }

    #[test]
    fn unknown_client_name() {
        assert!(client_by_name("nobody", 0).is_err());
        for name in CLIENT_NAMES {
            assert_eq!(client_by_name(name, 0).unwrap().name(), name);
        }
    }
}
