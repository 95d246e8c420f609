//! Hamiltonicity oracles, rotation-extension, boosters, expansion checks and
//! the P1/P2 criterion.

pub mod boosters;
pub mod criteria;
pub mod exact;
pub mod expander;
pub mod posa;

pub use boosters::{boosters_exact, boosters_posa, BoosterSet, Exactness};
pub use criteria::{check_p1_p2, CriteriaReport};
pub use exact::{exact_hamiltonian, hamilton_cycle, is_hamilton_cycle, is_simple_path, longest_path, longest_path_len};
pub use expander::{is_expander, ExpanderMode, ExpanderReport};
pub use posa::{posa_extend, posa_extend_with, posa_hamiltonian, PosaResult, PosaState};

use crate::graph::Graph;

/// Hamiltonicity as used for adjudication: exact up to `exact_cap` vertices,
/// otherwise a Hamilton cycle certified by rotation-extension.
pub fn certified_hamiltonian(g: &Graph, exact_cap: usize, seed: u64, restarts: usize) -> bool {
    if g.n() <= exact_cap.min(exact::HARD_CAP) {
        exact_hamiltonian(g).expect("within the exact cap")
    } else {
        posa_hamiltonian(g, seed, restarts)
    }
}
