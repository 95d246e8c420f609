//! Client-Waiter play against Hamiltonicity by starving a vertex.
//!
//! The provable plan picks `k`, an independent set `I_k` of degree-`k`
//! vertices, and plays the box game on the disjoint edge sets `E(u)`,
//! `u ∈ I_k`: Waiter claiming all of some `E(u)` isolates `u`. The composite
//! [`IsolatorWaiter`] falls back to box plans that merely simulate to a win
//! and then to a degree starver that tries to leave some vertex with at most
//! one Client edge.

use serde::Serialize;

use crate::boxgame::{meets_sufficiency, strategy_beats_every_client, waiter_box_offer, BoxGameState};
use crate::game::{GameState, Offer, WaiterStrategy};
use crate::graph::{EdgeId, Graph, Vertex};

use super::offer_size;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatorPlan {
    pub k: usize,
    /// `I_k`, increasing.
    pub independent: Vec<Vertex>,
    /// `E(u)` for each `u` in `I_k`, in the same order.
    pub family: Vec<Vec<EdgeId>>,
    /// `|I_k| >= 2(q+1)^(k+1)/q^k`, or `k = 0` with an isolated vertex.
    pub provable: bool,
}

/// Independent subset of `set` obtained by repeatedly deleting a vertex of
/// largest degree inside the induced subgraph (lowest id on ties).
pub fn greedy_independent(g: &Graph, set: &[Vertex]) -> Vec<Vertex> {
    let mut alive = vec![false; g.n()];
    for &v in set {
        alive[v] = true;
    }
    let mut deg: Vec<usize> = vec![0; g.n()];
    for &v in set {
        deg[v] = g.neighbors(v).filter(|&w| alive[w]).count();
    }
    loop {
        let worst = set.iter().copied().filter(|&v| alive[v] && deg[v] > 0).max_by(|&a, &b| deg[a].cmp(&deg[b]).then(b.cmp(&a)));
        let Some(v) = worst else { break };
        alive[v] = false;
        for w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
            }
        }
    }
    let mut out: Vec<Vertex> = set.iter().copied().filter(|&v| alive[v]).collect();
    out.sort_unstable();
    out
}

fn plan_for(g: &Graph, k: usize, provable: bool) -> IsolatorPlan {
    let s_k: Vec<Vertex> = (0..g.n()).filter(|&v| g.degree(v) == k).collect();
    let independent = greedy_independent(g, &s_k);
    let family = independent
        .iter()
        .map(|&u| {
            let mut ids: Vec<EdgeId> = g.incident(u).iter().map(|&(_, e)| e).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    IsolatorPlan { k, independent, family, provable }
}

/// Scans `k = 0, 1, ...` and returns the first plan meeting the size
/// condition, compared exactly. For `k = 0` one isolated vertex suffices: the
/// box game is then already won.
pub fn box_isolator_plan(g: &Graph, q: usize) -> Option<IsolatorPlan> {
    for k in 0..=g.max_degree() {
        let plan = plan_for(g, k, true);
        let enough = if k == 0 { !plan.independent.is_empty() } else { meets_sufficiency(plan.independent.len(), q, k) };
        if enough {
            return Some(plan);
        }
    }
    None
}

/// First `k` whose `I_k` family the box strategy beats outright, judged by
/// exhaustive play on the size multiset.
pub fn simulated_isolator_plan(g: &Graph, q: usize) -> Option<IsolatorPlan> {
    (1..=g.max_degree()).find_map(|k| {
        let plan = plan_for(g, k, false);
        let sizes = vec![k; plan.independent.len()];
        (!sizes.is_empty() && strategy_beats_every_client(&sizes, q)).then_some(plan)
    })
}

/// Plays the box strategy on a plan's family, then lowest-id offers.
pub struct BoxIsolatorWaiter {
    plan: IsolatorPlan,
    game: BoxGameState,
    pending: Option<Offer>,
}

impl BoxIsolatorWaiter {
    /// `None` when no `k` meets the size condition.
    pub fn new(g: &Graph, q: usize) -> Option<Self> {
        box_isolator_plan(g, q).map(|plan| Self::from_plan(plan, q))
    }

    pub fn from_plan(plan: IsolatorPlan, q: usize) -> Self {
        let game = BoxGameState::from_sets(plan.family.clone(), q);
        BoxIsolatorWaiter { plan, game, pending: None }
    }

    pub fn plan(&self) -> &IsolatorPlan {
        &self.plan
    }

    /// Vertex of the plan whose edges Waiter has all claimed, if any.
    pub fn isolated(&self) -> Option<Vertex> {
        self.game.sets().iter().find(|s| s.elems.is_empty()).map(|s| self.plan.independent[s.id])
    }

    fn sync(&mut self, state: &GameState) {
        if let Some(offer) = self.pending.take() {
            let last = state.history().last().expect("the pending offer was played");
            self.game.update_family(&offer, last.pick).expect("box offers stay consistent");
        }
    }
}

impl WaiterStrategy for BoxIsolatorWaiter {
    fn name(&self) -> String {
        "box-isolator".into()
    }

    fn offer(&mut self, state: &GameState) -> Offer {
        self.sync(state);
        if let Ok(offer) = waiter_box_offer(&self.game) {
            self.pending = Some(offer.clone());
            return offer;
        }
        state.free_edges().take(offer_size(state)).collect()
    }

    fn config(&self) -> Vec<(String, String)> {
        vec![
            ("k".into(), self.plan.k.to_string()),
            ("independent_set_size".into(), self.plan.independent.len().to_string()),
            ("provable".into(), self.plan.provable.to_string()),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsolatorMode {
    ProvableBox,
    SimulatedBox,
    Starver,
}

impl IsolatorMode {
    pub fn as_str(self) -> &'static str {
        match self {
            IsolatorMode::ProvableBox => "provable_box",
            IsolatorMode::SimulatedBox => "simulated_box",
            IsolatorMode::Starver => "starver",
        }
    }
}

/// Probability that a vertex with Client degree `cd` and `f` free edges ends
/// with Client degree at most one against a uniformly random Client, when
/// Waiter offers its edges one at a time next to `q` unrelated fillers and
/// dumps them all in one offer once that is possible.
fn starve_chance(cd: usize, f: usize, q: usize) -> f64 {
    let keep = q as f64 / (q + 1) as f64;
    match cd {
        0 if f <= q + 1 => 1.0,
        0 => keep * starve_chance(0, f - 1, q) + (1.0 - keep) * starve_chance(1, f - 1, q),
        1 => keep.powi(f as i32),
        _ => 0.0,
    }
}

/// Composite Client-Waiter strategy against Hamiltonicity.
pub struct IsolatorWaiter {
    mode: IsolatorMode,
    boxed: Option<BoxIsolatorWaiter>,
    target: Option<Vertex>,
    /// Edges ordered as fillers: far from low-degree vertices first.
    filler_order: Vec<EdgeId>,
}

impl IsolatorWaiter {
    pub fn new(g: &Graph, q: usize) -> Self {
        let (mode, boxed) = if let Some(plan) = box_isolator_plan(g, q) {
            (IsolatorMode::ProvableBox, Some(BoxIsolatorWaiter::from_plan(plan, q)))
        } else if let Some(plan) = simulated_isolator_plan(g, q) {
            (IsolatorMode::SimulatedBox, Some(BoxIsolatorWaiter::from_plan(plan, q)))
        } else {
            (IsolatorMode::Starver, None)
        };
        let mut filler_order: Vec<EdgeId> = (0..g.edge_count()).collect();
        filler_order.sort_by_key(|&e| {
            let (u, v) = g.edge(e);
            (std::cmp::Reverse(g.degree(u).min(g.degree(v))), e)
        });
        IsolatorWaiter { mode, boxed, target: None, filler_order }
    }

    pub fn mode(&self) -> IsolatorMode {
        self.mode
    }

    pub fn plan(&self) -> Option<&IsolatorPlan> {
        self.boxed.as_ref().map(|b| b.plan())
    }

    fn starved(state: &GameState) -> bool {
        (0..state.board().n()).any(|v| state.client_degree(v) <= 1 && state.free_degree(v) == 0)
    }

    fn choose_target(state: &GameState) -> Option<Vertex> {
        let q = state.q();
        (0..state.board().n())
            .filter(|&v| state.client_degree(v) <= 1 && state.free_degree(v) > 0)
            .map(|v| (starve_chance(state.client_degree(v), state.free_degree(v), q), v))
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
            .map(|(_, v)| v)
    }

    fn starver_offer(&mut self, state: &GameState) -> Offer {
        let size = offer_size(state);
        if Self::starved(state) {
            return state.free_edges().take(size).collect();
        }
        let alive = |v: Vertex| state.client_degree(v) <= 1 && state.free_degree(v) > 0;
        if !self.target.is_some_and(alive) {
            self.target = Self::choose_target(state);
        }
        let Some(v) = self.target else {
            return state.free_edges().take(size).collect();
        };
        let at_v = state.free_edges_at(v);
        if state.client_degree(v) == 0 && at_v.len() <= size {
            return at_v;
        }
        let mut offer = vec![at_v[0]];
        for &e in &self.filler_order {
            if offer.len() == size {
                break;
            }
            let (a, b) = state.board().edge(e);
            if state.is_free(e) && a != v && b != v {
                offer.push(e);
            }
        }
        if offer.len() < size && state.client_degree(v) == 0 {
            // Only edges at v remain: give Client exactly one of them.
            return at_v.into_iter().take(size).collect();
        }
        offer
    }
}

impl WaiterStrategy for IsolatorWaiter {
    fn name(&self) -> String {
        "isolator".into()
    }

    fn offer(&mut self, state: &GameState) -> Offer {
        match self.boxed.as_mut() {
            Some(b) => b.offer(state),
            None => self.starver_offer(state),
        }
    }

    fn config(&self) -> Vec<(String, String)> {
        let mut c = vec![("mode".into(), self.mode.as_str().to_string())];
        if let Some(b) = &self.boxed {
            c.extend(b.config());
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::game::{run_to_end, GameKind};
    use crate::strategy::{LowestIdClient, UniformRandomClient};

    fn matching(pairs: usize) -> Graph {
        Graph::from_edges(2 * pairs, (0..pairs).map(|i| (2 * i, 2 * i + 1))).unwrap()
    }

    #[test]
    fn perfect_matching_on_sixteen_vertices() {
        let g = matching(8);
        let plan = box_isolator_plan(&g, 1).unwrap();
        assert_eq!(plan.k, 1);
        assert_eq!(plan.independent.len(), 8);
        let g = Arc::new(g);
        for seed in 0..30 {
            let mut w = BoxIsolatorWaiter::new(&g, 1).unwrap();
            let mut c = UniformRandomClient::new(seed);
            let mut s = GameState::new(g.clone(), 1, GameKind::ClientWaiter).unwrap();
            assert!(run_to_end(&mut s, &mut w, &mut c).is_none());
            let u = w.isolated().expect("a vertex is isolated");
            assert_eq!(s.client_degree(u), 0);
        }
    }

    #[test]
    fn complete_graph_has_no_plan() {
        assert!(box_isolator_plan(&Graph::complete(8), 1).is_none());
    }

    #[test]
    fn isolated_vertex_is_a_plan() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let plan = box_isolator_plan(&g, 3).unwrap();
        assert_eq!((plan.k, plan.independent.clone()), (0, vec![3]));
    }

    #[test]
    fn greedy_independent_is_independent() {
        let g = Graph::petersen();
        let all: Vec<Vertex> = (0..10).collect();
        let i = greedy_independent(&g, &all);
        assert!(i.len() >= 10 / 4);
        for &a in &i {
            for &b in &i {
                assert!(!g.has_edge(a, b));
            }
        }
    }

    #[test]
    fn starver_leaves_a_low_degree_vertex_starved() {
        // A vertex of degree 2 inside K_7 can be dumped in one offer.
        let k7 = Graph::complete(7);
        let g = Arc::new(Graph::from_edges(8, k7.edges().iter().copied().chain([(0, 7), (1, 7)])).unwrap());
        let mut w = IsolatorWaiter::new(&g, 1);
        assert_eq!(w.mode(), IsolatorMode::Starver);
        let mut s = GameState::new(g.clone(), 1, GameKind::ClientWaiter).unwrap();
        assert!(run_to_end(&mut s, &mut w, &mut LowestIdClient).is_none());
        assert!(s.client_degree(7) <= 1);
    }

    #[test]
    fn starve_chance_values() {
        assert_eq!(starve_chance(0, 2, 1), 1.0);
        assert_eq!(starve_chance(1, 2, 1), 0.25);
        assert_eq!(starve_chance(0, 3, 1), 0.625);
        assert_eq!(starve_chance(2, 0, 1), 0.0);
    }
}
