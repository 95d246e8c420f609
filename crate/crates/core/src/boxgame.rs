//! The `(1 : q)` Client-Waiter box game on families of pairwise disjoint sets.
//!
//! Waiter wins by claiming every element of some set. Once Client touches a
//! set it is dead, and once Waiter claims an element of a live set the set
//! effectively shrinks, so the position is a family `F_i` that evolves as
//! `F_{i+1} = {A \ W_i : A in F_i, A != A_j}` where `A_j` holds Client's pick.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::rng::{rng_from_seed, GameRng};

pub type Element = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoxError {
    #[error("family is not canonical of type {0}")]
    NotCanonical(usize),
    #[error("the game is already decided")]
    Decided,
    #[error("pick {0} is not in the offer")]
    PickOutsideOffer(Element),
    #[error("element {0} is not in any live set")]
    DeadElement(Element),
    #[error("offer hits one set twice (element {0})")]
    DoubleHit(Element),
    #[error("empty offer")]
    EmptyOffer,
}

/// `true` iff the sets are pairwise disjoint and every size lies in
/// `{t-1, t}`.
pub fn is_canonical(family: &[Vec<Element>], t: usize) -> bool {
    let mut seen = HashSet::new();
    for set in family {
        let ok_size = set.len() == t || (t >= 1 && set.len() == t - 1);
        if !ok_size {
            return false;
        }
        for &x in set {
            if !seen.insert(x) {
                return false;
            }
        }
    }
    true
}

/// A live set with its position in the original family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxSet {
    pub id: usize,
    pub elems: Vec<Element>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxGameState {
    sets: Vec<BoxSet>,
    q: usize,
    round: usize,
    history: Vec<(Vec<Element>, Element)>,
}

impl BoxGameState {
    /// Starts a game on a family canonical of type `t`.
    pub fn new(family: Vec<Vec<Element>>, t: usize, q: usize) -> Result<Self, BoxError> {
        if !is_canonical(&family, t) {
            return Err(BoxError::NotCanonical(t));
        }
        Ok(Self::from_sets(family, q))
    }

    /// Starts a game on any family of disjoint sets.
    pub fn from_sets(family: Vec<Vec<Element>>, q: usize) -> Self {
        let sets = family
            .into_iter()
            .enumerate()
            .map(|(id, mut elems)| {
                elems.sort_unstable();
                BoxSet { id, elems }
            })
            .collect();
        BoxGameState { sets, q, round: 1, history: Vec::new() }
    }

    pub fn sets(&self) -> &[BoxSet] {
        &self.sets
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Index `i` of the round about to be played (the first round is 1).
    pub fn round(&self) -> usize {
        self.round
    }

    pub fn history(&self) -> &[(Vec<Element>, Element)] {
        &self.history
    }

    pub fn family_size(&self) -> usize {
        self.sets.len()
    }

    /// `t_i`, the largest set size (0 for the empty family).
    pub fn max_size(&self) -> usize {
        self.sets.iter().map(|s| s.elems.len()).max().unwrap_or(0)
    }

    /// `ell_i`, the number of sets of the largest size.
    pub fn largest_count(&self) -> usize {
        let t = self.max_size();
        self.sets.iter().filter(|s| s.elems.len() == t).count()
    }

    pub fn total_elements(&self) -> usize {
        self.sets.iter().map(|s| s.elems.len()).sum()
    }

    /// Sizes sorted in decreasing order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.sets.iter().map(|s| s.elems.len()).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Waiter has fully claimed some set.
    pub fn waiter_won(&self) -> bool {
        self.sets.iter().any(|s| s.elems.is_empty())
    }

    /// No live set remains and Waiter never completed one.
    pub fn client_won(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn is_decided(&self) -> bool {
        self.waiter_won() || self.client_won()
    }

    pub fn is_canonical_now(&self) -> bool {
        let t = self.max_size();
        self.sets.iter().all(|s| s.elems.len() == t || s.elems.len() + 1 == t)
    }

    fn owner_of(&self, x: Element) -> Option<usize> {
        self.sets.iter().position(|s| s.elems.binary_search(&x).is_ok())
    }

    /// Applies one round: the set holding `pick` dies and every other offered
    /// element goes to Waiter.
    pub fn update_family(&mut self, offer: &[Element], pick: Element) -> Result<(), BoxError> {
        if offer.is_empty() {
            return Err(BoxError::EmptyOffer);
        }
        if !offer.contains(&pick) {
            return Err(BoxError::PickOutsideOffer(pick));
        }
        let mut hit = vec![false; self.sets.len()];
        let mut owners = Vec::with_capacity(offer.len());
        for &x in offer {
            let j = self.owner_of(x).ok_or(BoxError::DeadElement(x))?;
            if hit[j] {
                return Err(BoxError::DoubleHit(x));
            }
            hit[j] = true;
            owners.push(j);
        }
        let picked = self.owner_of(pick).expect("pick is in a live set");
        for (&x, &j) in offer.iter().zip(&owners) {
            if j != picked {
                let pos = self.sets[j].elems.binary_search(&x).expect("element is live");
                self.sets[j].elems.remove(pos);
            }
        }
        self.sets.remove(picked);
        self.history.push((offer.to_vec(), pick));
        self.round += 1;
        Ok(())
    }
}

/// Waiter's offer: the smallest element of each of the first
/// `min(q+1, ell_i)` largest sets, in family order.
pub fn waiter_box_offer(state: &BoxGameState) -> Result<Vec<Element>, BoxError> {
    if state.is_decided() {
        return Err(BoxError::Decided);
    }
    Ok(largest_offer(state))
}

fn largest_offer(state: &BoxGameState) -> Vec<Element> {
    let t = state.max_size();
    state.sets.iter().filter(|s| s.elems.len() == t).take(state.q + 1).map(|s| s.elems[0]).collect()
}

/// Right-hand side of the trajectory bound
/// `(q/(q+1))^(t-j) |F| - (q+1)(1 - (q/(q+1))^(t-j))`, exactly.
pub fn eq4_lower_bound(family_size: usize, q: usize, t: usize, j: usize) -> BigRational {
    assert!(j <= t, "need j <= t");
    let ratio = BigRational::new(BigInt::from(q), BigInt::from(q + 1));
    let x = pow(&ratio, t - j);
    let q1 = BigRational::from_integer(BigInt::from(q + 1));
    &x * BigRational::from_integer(BigInt::from(family_size)) - q1 * (BigRational::one() - x)
}

/// `2 (q+1)^(t+1) / q^t`, the family size that guarantees a Waiter win.
pub fn sufficient_family_size(q: usize, t: usize) -> BigRational {
    let num = BigInt::from(2) * BigInt::from(q + 1).pow((t + 1) as u32);
    let den = BigInt::from(q).pow(t as u32);
    BigRational::new(num, den)
}

pub fn meets_sufficiency(family_size: usize, q: usize, t: usize) -> bool {
    BigRational::from_integer(BigInt::from(family_size)) >= sufficient_family_size(q, t)
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

/// Client side of a box game.
pub trait BoxClient {
    fn pick(&mut self, state: &BoxGameState, offer: &[Element]) -> Element;
}

/// Always takes the first offered element.
pub struct FirstBoxClient;

impl BoxClient for FirstBoxClient {
    fn pick(&mut self, _: &BoxGameState, offer: &[Element]) -> Element {
        offer[0]
    }
}

/// Uniformly random pick.
pub struct RandomBoxClient {
    rng: GameRng,
}

impl RandomBoxClient {
    pub fn new(seed: u64) -> Self {
        RandomBoxClient { rng: rng_from_seed(seed) }
    }
}

impl BoxClient for RandomBoxClient {
    fn pick(&mut self, _: &BoxGameState, offer: &[Element]) -> Element {
        offer[self.rng.gen_range(0..offer.len())]
    }
}

/// Takes an offered element from the smallest set it can, hoping to kill the
/// sets closest to completion.
pub struct GreedyBoxClient;

impl BoxClient for GreedyBoxClient {
    fn pick(&mut self, state: &BoxGameState, offer: &[Element]) -> Element {
        *offer
            .iter()
            .min_by_key(|&&x| state.owner_of(x).map_or(usize::MAX, |j| state.sets[j].elems.len()))
            .expect("offers are non-empty")
    }
}

/// State of the family when it first becomes canonical of type `j`.
#[derive(Clone, Debug, Serialize)]
pub struct TypeDrop {
    pub j: usize,
    pub round: usize,
    pub family_size: usize,
    pub bound: f64,
    pub holds: bool,
}

/// One row of the trajectory dump, describing `F_i` before round `i`.
#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryRow {
    pub round: usize,
    pub t: usize,
    pub family_size: usize,
    pub largest: usize,
    /// Tightest trajectory bound first reached at this round, if any.
    pub eq4_bound: Option<f64>,
    pub actual: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxOutcome {
    pub waiter_won: bool,
    /// Round after which Waiter first owned a whole set.
    pub won_after_round: Option<usize>,
    pub rounds: usize,
    pub always_canonical: bool,
    pub drops: Vec<TypeDrop>,
    pub rows: Vec<TrajectoryRow>,
}

impl BoxOutcome {
    pub fn eq4_holds(&self) -> bool {
        self.drops.iter().all(|d| d.holds)
    }

    pub fn trajectory_csv(&self) -> String {
        let mut out = String::from("round,type,family_size,largest,eq4_bound,actual\n");
        for r in &self.rows {
            let bound = r.eq4_bound.map(|b| format!("{b:.6}")).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{},{}", r.round, r.t, r.family_size, r.largest, bound, r.actual);
        }
        out
    }
}

/// Plays Waiter's box strategy against `client` on a canonical family of type
/// `t`, checking canonicality each round and the trajectory bound at every
/// type drop. Play continues past Waiter's win until every set is empty or
/// dead so the whole trajectory is recorded.
pub fn simulate_box_game(
    family: Vec<Vec<Element>>,
    t: usize,
    q: usize,
    client: &mut dyn BoxClient,
) -> Result<BoxOutcome, BoxError> {
    let mut state = BoxGameState::new(family, t, q)?;
    let initial = state.family_size();
    let mut next_j = t as isize;
    let mut drops = Vec::new();
    let mut rows = Vec::new();
    let mut won_after_round = None;
    let mut always_canonical = true;

    loop {
        always_canonical &= state.is_canonical_now();
        let type_now = if state.client_won() { 0 } else { state.max_size() };
        let mut row_bound = None;
        while next_j >= type_now as isize {
            let j = next_j as usize;
            let bound = eq4_lower_bound(initial, q, t, j);
            let holds = BigRational::from_integer(BigInt::from(state.family_size())) >= bound;
            let b = bound.to_f64().unwrap_or(f64::NAN);
            row_bound.get_or_insert(b);
            drops.push(TypeDrop { j, round: state.round(), family_size: state.family_size(), bound: b, holds });
            next_j -= 1;
        }
        rows.push(TrajectoryRow {
            round: state.round(),
            t: state.max_size(),
            family_size: state.family_size(),
            largest: state.largest_count(),
            eq4_bound: row_bound,
            actual: state.family_size(),
        });
        if won_after_round.is_none() && state.waiter_won() {
            won_after_round = Some(state.round() - 1);
        }
        if state.client_won() || state.max_size() == 0 {
            break;
        }
        let offer = largest_offer(&state);
        let pick = client.pick(&state, &offer);
        state.update_family(&offer, pick)?;
    }

    Ok(BoxOutcome {
        waiter_won: won_after_round.is_some(),
        won_after_round,
        rounds: state.round() - 1,
        always_canonical,
        drops,
        rows,
    })
}

/// Whether Waiter's box strategy wins against every possible Client. Client
/// choices are explored exhaustively; positions are memoized on the sorted
/// size multiset, which determines the strategy's offer up to relabelling.
pub fn strategy_beats_every_client(sizes: &[usize], q: usize) -> bool {
    fn go(sizes: Vec<usize>, q: usize, memo: &mut HashMap<Vec<usize>, bool>) -> bool {
        if sizes.contains(&0) {
            return true;
        }
        if sizes.is_empty() {
            return false;
        }
        if let Some(&v) = memo.get(&sizes) {
            return v;
        }
        // Sizes are sorted decreasingly; the strategy hits the first k sets.
        let t = sizes[0];
        let ell = sizes.iter().take_while(|&&s| s == t).count();
        let k = ell.min(q + 1);
        let mut win = true;
        for pick in 0..k {
            let mut next: Vec<usize> = Vec::with_capacity(sizes.len() - 1);
            for (i, &s) in sizes.iter().enumerate() {
                if i == pick {
                    continue;
                }
                next.push(if i < k { s - 1 } else { s });
            }
            next.sort_unstable_by(|a, b| b.cmp(a));
            if !go(next, q, memo) {
                win = false;
                break;
            }
        }
        memo.insert(sizes, win);
        win
    }
    let mut s = sizes.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    go(s, q, &mut HashMap::new())
}

/// Exact value of the box game under optimal play by both sides: `true` iff
/// Waiter can force a win from a family with the given set sizes.
///
/// Waiter may offer any 1..=q+1 live elements, several from one set if he
/// likes; elements of dead sets are never worth offering.
pub fn box_game_value(sizes: &[usize], q: usize) -> bool {
    let mut s = sizes.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    let mut memo = HashMap::new();
    solve(&s, q, &mut memo)
}

fn solve(sizes: &[usize], q: usize, memo: &mut HashMap<Vec<usize>, bool>) -> bool {
    if sizes.contains(&0) {
        return true;
    }
    if sizes.is_empty() {
        return false;
    }
    if let Some(&v) = memo.get(sizes) {
        return v;
    }
    let mut counts = vec![0usize; sizes.len()];
    let win = waiter_offers(sizes, q, 0, q + 1, &mut counts, memo);
    memo.insert(sizes.to_vec(), win);
    win
}

/// Enumerates count vectors (elements offered per set) with equal-size sets
/// taking non-increasing counts, and reports whether one of them wins.
fn waiter_offers(
    sizes: &[usize],
    q: usize,
    i: usize,
    budget: usize,
    counts: &mut Vec<usize>,
    memo: &mut HashMap<Vec<usize>, bool>,
) -> bool {
    if i == sizes.len() {
        let total: usize = counts.iter().sum();
        return total > 0 && client_loses_all(sizes, counts, q, memo);
    }
    let mut cap = budget.min(sizes[i]);
    if i > 0 && sizes[i] == sizes[i - 1] {
        cap = cap.min(counts[i - 1]);
    }
    for c in (0..=cap).rev() {
        counts[i] = c;
        if waiter_offers(sizes, q, i + 1, budget - c, counts, memo) {
            counts[i] = 0;
            return true;
        }
    }
    counts[i] = 0;
    false
}

fn client_loses_all(sizes: &[usize], counts: &[usize], q: usize, memo: &mut HashMap<Vec<usize>, bool>) -> bool {
    let mut tried = HashSet::new();
    for pick in 0..sizes.len() {
        if counts[pick] == 0 || !tried.insert((sizes[pick], counts[pick])) {
            continue;
        }
        let mut next: Vec<usize> = sizes
            .iter()
            .zip(counts)
            .enumerate()
            .filter(|&(i, _)| i != pick)
            .map(|(_, (&s, &c))| s - c)
            .collect();
        next.sort_unstable_by(|a, b| b.cmp(a));
        if !solve(&next, q, memo) {
            return false;
        }
    }
    true
}

/// Smallest number of size-`t` sets from which Waiter wins under optimal play,
/// searched up to `limit` sets.
pub fn critical_family_size(q: usize, t: usize, limit: usize) -> Option<usize> {
    let mut memo = HashMap::new();
    (1..=limit).find(|&m| solve(&vec![t; m], q, &mut memo))
}

/// Smallest number of size-`t` sets on which the box strategy beats every
/// Client, searched up to `limit` sets.
pub fn strategy_critical_size(q: usize, t: usize, limit: usize) -> Option<usize> {
    (1..=limit).find(|&m| strategy_beats_every_client(&vec![t; m], q))
}

/// `m` disjoint sets of size `t` over the elements `0..m*t`.
pub fn disjoint_family(sizes: &[usize]) -> Vec<Vec<Element>> {
    let mut next = 0;
    sizes
        .iter()
        .map(|&s| {
            let set: Vec<Element> = (next..next + s).collect();
            next += s;
            set
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        assert!(is_canonical(&[vec![0, 1], vec![2, 3]], 2));
        assert!(!is_canonical(&[vec![0, 1], vec![1, 2]], 2));
        assert!(!is_canonical(&[vec![0], vec![1, 2]], 3));
        assert!(is_canonical(&[], 4));
    }

    #[test]
    fn offers_follow_largest_sets() {
        let s = BoxGameState::from_sets(vec![vec![0], vec![1], vec![2]], 1);
        assert_eq!(waiter_box_offer(&s).unwrap(), vec![0, 1]);
        let s = BoxGameState::from_sets(vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6]], 5);
        assert_eq!(waiter_box_offer(&s).unwrap().len(), 3);
        let s = BoxGameState::from_sets(vec![vec![0, 1], vec![2, 3]], 1);
        assert_eq!(waiter_box_offer(&s).unwrap(), vec![0, 2]);
    }

    #[test]
    fn update_examples() {
        let mut s = BoxGameState::from_sets(vec![vec![0, 1], vec![2, 3]], 1);
        s.update_family(&[0, 2], 0).unwrap();
        assert_eq!(s.sets().len(), 1);
        assert_eq!(s.sets()[0].elems, vec![3]);

        let mut s = BoxGameState::from_sets(vec![vec![0], vec![1]], 1);
        s.update_family(&[0, 1], 0).unwrap();
        assert!(s.waiter_won());

        let mut s = BoxGameState::from_sets(vec![vec![0, 1]], 1);
        s.update_family(&[0], 0).unwrap();
        assert!(s.client_won());

        let mut s = BoxGameState::from_sets(vec![vec![0, 1]], 1);
        assert_eq!(s.update_family(&[0], 1), Err(BoxError::PickOutsideOffer(1)));
        assert_eq!(s.update_family(&[0, 1], 1), Err(BoxError::DoubleHit(1)));
    }

    #[test]
    fn eq4_values() {
        assert_eq!(eq4_lower_bound(16, 1, 2, 2), BigRational::from_integer(16.into()));
        assert_eq!(eq4_lower_bound(16, 1, 2, 0), BigRational::new(5.into(), 2.into()));
        assert_eq!(sufficient_family_size(1, 2), BigRational::from_integer(16.into()));
    }

    #[test]
    fn small_game_values() {
        assert!(!box_game_value(&[2], 1));
        assert!(box_game_value(&[1; 8], 1));
        assert!(box_game_value(&[1, 1], 1));
        assert!(!box_game_value(&[1], 1));
    }
}
