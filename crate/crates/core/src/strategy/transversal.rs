//! Transversal games on abstract boards.
//!
//! The board is a set of elements `0..m`, realised as the perfect matching on
//! `2m` vertices so the ordinary engine can play it (element `i` is edge `i`).
//! Client's target is to hit every set of the family `F`, i.e. to claim a
//! member of the transversal family `F*`.

use std::collections::HashMap;

use crate::game::{GameKind, GameState, Offer, WaiterStrategy};
use crate::graph::Graph;

use super::offer_size;

/// Perfect matching whose edge `i` stands for element `i`.
pub fn abstract_board(elements: usize) -> Graph {
    Graph::from_edges(2 * elements, (0..elements).map(|i| (2 * i, 2 * i + 1))).expect("a matching is simple")
}

/// `true` when Client's elements meet every set of `family`.
pub fn hits_every_set(family: &[Vec<usize>], client: impl IntoIterator<Item = usize>) -> bool {
    let mut owned = std::collections::HashSet::new();
    owned.extend(client);
    family.iter().all(|a| a.iter().any(|x| owned.contains(x)))
}

/// Target predicate for the engine: Client's edge ids hit every set.
pub fn transversal_target(family: Vec<Vec<usize>>) -> impl Fn(&GameState) -> bool {
    move |s: &GameState| hits_every_set(&family, s.client_edges().iter().copied())
}

/// `Φ = Σ_{A not hit} 2^{-|A ∩ Free| / (2q - 1)}`.
fn potential(family: &[Vec<usize>], q: usize, free: &[bool], hit: &[bool]) -> f64 {
    let scale = (2 * q - 1) as f64;
    family
        .iter()
        .zip(hit)
        .filter(|&(_, &h)| !h)
        .map(|(a, _)| {
            let f = a.iter().filter(|&&x| free[x]).count();
            (-(f as f64) / scale).exp2()
        })
        .sum()
}

/// Potential after `offer` is split, maximised over Client's choice.
fn worst_case(family: &[Vec<usize>], q: usize, free: &mut [bool], hit: &[bool], offer: &[usize]) -> f64 {
    for &x in offer {
        free[x] = false;
    }
    let mut worst = f64::NEG_INFINITY;
    let mut new_hit = hit.to_vec();
    for &c in offer {
        for (i, a) in family.iter().enumerate() {
            new_hit[i] = hit[i] || a.contains(&c);
        }
        worst = worst.max(potential(family, q, free, &new_hit));
    }
    for &x in offer {
        free[x] = true;
    }
    worst
}

/// Full enumeration is used while the number of candidate offers stays below
/// this; beyond it offers are built greedily one element at a time.
const ENUMERATION_LIMIT: u64 = 4096;

fn binomial(n: usize, k: usize) -> u64 {
    let mut c: u64 = 1;
    for i in 0..k.min(n) {
        c = c.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    if k > n {
        0
    } else {
        c
    }
}

/// The potential Waiter's offer of `size` elements from the free ones.
pub fn potential_offer(family: &[Vec<usize>], q: usize, free: &[bool], hit: &[bool], size: usize) -> Vec<usize> {
    let candidates: Vec<usize> = (0..free.len()).filter(|&x| free[x]).collect();
    let size = size.min(candidates.len());
    let mut free = free.to_vec();
    const TIE: f64 = 1e-12;
    if binomial(candidates.len(), size) <= ENUMERATION_LIMIT {
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let offer: Vec<usize> = idx.iter().map(|&i| candidates[i]).collect();
            let v = worst_case(family, q, &mut free, hit, &offer);
            if best.as_ref().is_none_or(|(b, _)| v < b - TIE) {
                best = Some((v, offer));
            }
            // Next combination in lexicographic order.
            let Some(i) = (0..size).rev().find(|&i| idx[i] != i + candidates.len() - size) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
        return best.map(|(_, o)| o).unwrap_or_default();
    }
    let mut offer = Vec::with_capacity(size);
    while offer.len() < size {
        let mut best: Option<(f64, usize)> = None;
        for &x in &candidates {
            if offer.contains(&x) {
                continue;
            }
            offer.push(x);
            let v = worst_case(family, q, &mut free, hit, &offer);
            offer.pop();
            if best.is_none_or(|(b, _)| v < b - TIE) {
                best = Some((v, x));
            }
        }
        offer.push(best.expect("enough candidates").1);
    }
    offer.sort_unstable();
    offer
}

/// Greedy Waiter for the transversal game: each offer minimises the largest
/// potential Client can leave behind.
pub struct PotentialWaiter {
    family: Vec<Vec<usize>>,
    q: usize,
}

impl PotentialWaiter {
    pub fn new(family: Vec<Vec<usize>>, q: usize) -> Self {
        PotentialWaiter { family, q }
    }
}

impl WaiterStrategy for PotentialWaiter {
    fn name(&self) -> String {
        "potential".into()
    }

    fn offer(&mut self, state: &GameState) -> Offer {
        let m = state.board().edge_count();
        let free: Vec<bool> = (0..m).map(|e| state.is_free(e)).collect();
        let client: Vec<bool> = (0..m).map(|e| state.owner(e) == crate::game::Owner::Client).collect();
        let hit: Vec<bool> = self.family.iter().map(|a| a.iter().any(|&x| client[x])).collect();
        potential_offer(&self.family, self.q, &free, &hit, offer_size(state))
    }

    fn config(&self) -> Vec<(String, String)> {
        vec![("q".into(), self.q.to_string()), ("family_size".into(), self.family.len().to_string())]
    }
}

/// Largest board the exact solvers accept.
pub const MAX_EXACT_ELEMENTS: usize = 24;

struct Solver {
    sets: Vec<u32>,
    q: usize,
    kind: GameKind,
    memo: HashMap<(u32, u64), bool>,
}

impl Solver {
    fn all_hit(&self, hit: u64) -> bool {
        hit.count_ones() as usize == self.sets.len()
    }

    /// Outcome already fixed by the position, if any.
    fn settled(&self, free: u32, hit: u64) -> Option<bool> {
        if self.all_hit(hit) {
            return Some(true);
        }
        let dead = self.sets.iter().enumerate().any(|(i, &a)| hit >> i & 1 == 0 && a & free == 0);
        if dead || free == 0 {
            return Some(false);
        }
        if self.kind == GameKind::WaiterClient && (free.count_ones() as usize) < self.q + 1 {
            return Some(false);
        }
        None
    }

    fn signature(&self, x: usize, hit: u64) -> u64 {
        let mut s = 0u64;
        for (i, &a) in self.sets.iter().enumerate() {
            if hit >> i & 1 == 0 && a >> x & 1 == 1 {
                s |= 1 << i;
            }
        }
        s
    }

    /// Free elements grouped by the unhit sets they belong to.
    fn classes(&self, free: u32, hit: u64) -> Vec<(u64, Vec<usize>)> {
        let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
        for x in 0..32 {
            if free >> x & 1 == 0 {
                continue;
            }
            let s = self.signature(x, hit);
            match groups.iter_mut().find(|(g, _)| *g == s) {
                Some((_, v)) => v.push(x),
                None => groups.push((s, vec![x])),
            }
        }
        groups
    }

    /// Whether Client's final set is a transversal under optimal play.
    fn value(&mut self, free: u32, hit: u64) -> bool {
        if let Some(v) = self.settled(free, hit) {
            return v;
        }
        if let Some(&v) = self.memo.get(&(free, hit)) {
            return v;
        }
        let waiter_wants = self.kind == GameKind::WaiterClient;
        let classes = self.classes(free, hit);
        let max = (self.q + 1).min(free.count_ones() as usize);
        let min = if self.kind == GameKind::WaiterClient { self.q + 1 } else { 1 };
        let mut counts = vec![0usize; classes.len()];
        let v = if self.search(&classes, &mut counts, 0, 0, min, max, free, hit, waiter_wants) {
            waiter_wants
        } else {
            !waiter_wants
        };
        self.memo.insert((free, hit), v);
        v
    }

    /// Tries every offer (as counts per class); `true` if one forces
    /// `waiter_wants` against every Client reply.
    #[allow(clippy::too_many_arguments)]
    fn search(
        &mut self,
        classes: &[(u64, Vec<usize>)],
        counts: &mut Vec<usize>,
        i: usize,
        total: usize,
        min: usize,
        max: usize,
        free: u32,
        hit: u64,
        waiter_wants: bool,
    ) -> bool {
        if i == classes.len() {
            if total < min {
                return false;
            }
            let mut offered = 0u32;
            for (c, (_, elems)) in counts.iter().zip(classes) {
                for &x in &elems[..*c] {
                    offered |= 1 << x;
                }
            }
            let rest = free & !offered;
            return (0..classes.len())
                .filter(|&j| counts[j] > 0)
                .all(|j| self.value(rest, hit | classes[j].0) == waiter_wants);
        }
        let room = max - total;
        for c in 0..=classes[i].1.len().min(room) {
            counts[i] = c;
            if self.search(classes, counts, i + 1, total + c, min, max, free, hit, waiter_wants) {
                counts[i] = 0;
                return true;
            }
        }
        counts[i] = 0;
        false
    }
}

fn masks(elements: usize, family: &[Vec<usize>]) -> Vec<u32> {
    assert!(elements <= MAX_EXACT_ELEMENTS, "exact solver supports at most {MAX_EXACT_ELEMENTS} elements");
    assert!(family.len() <= 64, "exact solver supports at most 64 sets");
    family
        .iter()
        .map(|a| {
            a.iter().fold(0u32, |m, &x| {
                assert!(x < elements, "set element {x} outside the board");
                m | 1 << x
            })
        })
        .collect()
}

/// Whether Client ends with a transversal of `family` when both sides play
/// optimally on a board of `elements` elements. Waiter wins a Waiter-Client
/// game exactly when this is `true`, a Client-Waiter game exactly when it is
/// `false`.
pub fn transversal_minimax(elements: usize, family: &[Vec<usize>], q: usize, kind: GameKind) -> bool {
    let sets = masks(elements, family);
    let free = if elements == 32 { u32::MAX } else { (1u32 << elements) - 1 };
    let mut s = Solver { sets, q, kind, memo: HashMap::new() };
    s.value(free, 0)
}

/// Whether [`PotentialWaiter`] forces a transversal in the Waiter-Client game
/// against every sequence of Client replies.
pub fn potential_waiter_forces(elements: usize, family: &[Vec<usize>], q: usize) -> bool {
    let sets = masks(elements, family);
    let mut memo = HashMap::new();
    let free = (1u32 << elements) - 1;
    forces(&sets, family, q, elements, free, 0, &mut memo)
}

fn forces(
    sets: &[u32],
    family: &[Vec<usize>],
    q: usize,
    elements: usize,
    free: u32,
    hit: u64,
    memo: &mut HashMap<(u32, u64), bool>,
) -> bool {
    if hit.count_ones() as usize == sets.len() {
        return true;
    }
    if (free.count_ones() as usize) < q + 1 {
        return false;
    }
    if let Some(&v) = memo.get(&(free, hit)) {
        return v;
    }
    let free_v: Vec<bool> = (0..elements).map(|x| free >> x & 1 == 1).collect();
    let hit_v: Vec<bool> = (0..sets.len()).map(|i| hit >> i & 1 == 1).collect();
    let offer = potential_offer(family, q, &free_v, &hit_v, q + 1);
    let rest = offer.iter().fold(free, |m, &x| m & !(1 << x));
    let v = offer.iter().all(|&c| {
        let new_hit = sets.iter().enumerate().fold(hit, |h, (i, &a)| if a >> c & 1 == 1 { h | 1 << i } else { h });
        forces(sets, family, q, elements, rest, new_hit, memo)
    });
    memo.insert((free, hit), v);
    v
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::game::{play_out, Player};
    use crate::strategy::UniformRandomClient;

    #[test]
    fn two_disjoint_triples() {
        let family = vec![vec![0, 1, 2], vec![3, 4, 5]];
        for m in 6..=12 {
            assert!(transversal_minimax(m, &family, 1, GameKind::WaiterClient), "m = {m}");
            assert!(potential_waiter_forces(m, &family, 1), "m = {m}");
        }
    }

    #[test]
    fn single_element_set_is_lost_by_waiter() {
        for m in 1..=6 {
            assert!(!transversal_minimax(m, &[vec![0]], 1, GameKind::WaiterClient));
        }
    }

    #[test]
    fn empty_family_is_vacuous() {
        assert!(transversal_minimax(4, &[], 1, GameKind::WaiterClient));
        assert!(transversal_minimax(4, &[], 2, GameKind::ClientWaiter));
        assert!(potential_waiter_forces(4, &[], 1));
    }

    #[test]
    fn client_waiter_singletons() {
        // Client can always take an element of a lone set, but two singleton
        // sets offered together cost Client one of them.
        assert!(transversal_minimax(3, &[vec![0]], 1, GameKind::ClientWaiter));
        assert!(!transversal_minimax(3, &[vec![0], vec![1]], 1, GameKind::ClientWaiter));
        assert!(!transversal_minimax(3, &[vec![0], vec![1]], 1, GameKind::WaiterClient));
    }

    #[test]
    fn engine_agrees_with_target() {
        let family = vec![vec![0, 1, 2], vec![3, 4, 5]];
        let board = Arc::new(abstract_board(8));
        for seed in 0..20 {
            let mut w = PotentialWaiter::new(family.clone(), 1);
            let mut c = UniformRandomClient::new(seed);
            let target = transversal_target(family.clone());
            let t = play_out(board.clone(), 1, GameKind::WaiterClient, &mut w, &mut c, &target, seed).unwrap();
            assert_eq!(t.winner, Player::Waiter);
        }
    }
}
