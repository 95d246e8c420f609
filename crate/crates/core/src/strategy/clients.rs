//! Client strategies: the uniformly random Client and adversarial baselines.

use rand::Rng;

use crate::game::{ClientStrategy, GameState};
use crate::graph::{EdgeId, Vertex};
use crate::hamilton::posa::grow_path;
use crate::rng::{rng_from_seed, GameRng};

/// Picks uniformly among the offered edges.
pub struct UniformRandomClient {
    rng: GameRng,
}

impl UniformRandomClient {
    pub fn new(seed: u64) -> Self {
        UniformRandomClient { rng: rng_from_seed(seed) }
    }
}

impl ClientStrategy for UniformRandomClient {
    fn name(&self) -> String {
        "random".into()
    }

    fn pick(&mut self, _: &GameState, offer: &[EdgeId]) -> EdgeId {
        offer[self.rng.gen_range(0..offer.len())]
    }
}

/// Always takes the lowest offered id.
pub struct LowestIdClient;

impl ClientStrategy for LowestIdClient {
    fn name(&self) -> String {
        "lowest".into()
    }

    fn pick(&mut self, _: &GameState, offer: &[EdgeId]) -> EdgeId {
        *offer.iter().min().expect("offers are non-empty")
    }
}

/// Takes the offered edge whose smaller endpoint degree in Client's graph is
/// largest, so low-degree vertices stay starved.
pub struct MinDegreeAvoider;

impl ClientStrategy for MinDegreeAvoider {
    fn name(&self) -> String {
        "min-degree-avoider".into()
    }

    fn pick(&mut self, state: &GameState, offer: &[EdgeId]) -> EdgeId {
        let score = |e: EdgeId| {
            let (u, v) = state.board().edge(e);
            state.client_degree(u).min(state.client_degree(v))
        };
        *offer
            .iter()
            .max_by(|&&a, &&b| score(a).cmp(&score(b)).then(b.cmp(&a)))
            .expect("offers are non-empty")
    }
}

/// Takes the offered edge that least helps its own longest path: it keeps a
/// path of Client's graph grown by rotation-extension and avoids edges that
/// close that path into a cycle or extend it from an endpoint.
pub struct BoosterDodger {
    rng: GameRng,
    path: Vec<Vertex>,
    seen_client_edges: usize,
}

impl BoosterDodger {
    pub fn new(seed: u64) -> Self {
        BoosterDodger { rng: rng_from_seed(seed), path: Vec::new(), seen_client_edges: 0 }
    }

    fn refresh(&mut self, state: &GameState) {
        if self.seen_client_edges == state.client_count() && !self.path.is_empty() {
            return;
        }
        self.seen_client_edges = state.client_count();
        let g = state.client_graph();
        let start = if self.path.is_empty() { vec![0] } else { std::mem::take(&mut self.path) };
        let (cycle, path) = grow_path(&g, start, &mut self.rng);
        self.path = cycle.unwrap_or(path);
    }
}

impl ClientStrategy for BoosterDodger {
    fn name(&self) -> String {
        "booster-dodger".into()
    }

    fn pick(&mut self, state: &GameState, offer: &[EdgeId]) -> EdgeId {
        if state.board().n() == 0 {
            return offer[0];
        }
        self.refresh(state);
        let n = state.board().n();
        let mut on_path = vec![false; n];
        for &v in &self.path {
            on_path[v] = true;
        }
        let first = self.path[0];
        let last = *self.path.last().expect("non-empty");
        let gain = |e: EdgeId| -> usize {
            let (u, v) = state.board().edge(e);
            let ends = |x: Vertex| x == first || x == last;
            if ends(u) && ends(v) && u != v && self.path.len() >= 3 {
                2
            } else if (ends(u) && !on_path[v]) || (ends(v) && !on_path[u]) {
                1
            } else {
                0
            }
        };
        *offer.iter().min_by_key(|&&e| (gain(e), e)).expect("offers are non-empty")
    }
}
