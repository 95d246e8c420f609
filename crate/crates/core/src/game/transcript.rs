use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{adjudicate, Fault, GameKind, GameState, Owner, Player, Target, Violation};
use crate::graph::{EdgeId, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub offer: Vec<EdgeId>,
    pub pick: EdgeId,
}

/// Serializable record of a finished (or aborted) game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub kind: GameKind,
    pub q: usize,
    pub n: usize,
    pub seed: u64,
    pub rounds: Vec<RoundRecord>,
    pub leftover: Vec<EdgeId>,
    pub winner: Player,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    /// Whether the target property held for Client's final graph.
    pub target_holds: bool,
    /// Resolved strategy configuration.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub config: BTreeMap<String, String>,
}

impl Transcript {
    pub fn from_state(
        state: &GameState,
        seed: u64,
        target: &dyn Target,
        fault: Option<Fault>,
        config: Vec<(String, String)>,
    ) -> Self {
        let target_holds = target.holds(state);
        let winner = match &fault {
            Some(f) => match f.side {
                Player::Waiter => Player::Client,
                Player::Client => Player::Waiter,
            },
            None => adjudicate(state.kind(), target_holds),
        };
        Transcript {
            kind: state.kind(),
            q: state.q(),
            n: state.board().n(),
            seed,
            rounds: state.history().to_vec(),
            leftover: state.leftover().to_vec(),
            winner,
            fault,
            target_holds,
            config: config.into_iter().collect(),
        }
    }

    pub fn client_edge_ids(&self) -> Vec<EdgeId> {
        self.rounds.iter().map(|r| r.pick).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcripts always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReplayError {
    #[error("transcript is for n = {transcript} but the board has {board} vertices")]
    BoardMismatch { transcript: usize, board: usize },
    #[error("round {round} is illegal: {violation}")]
    Illegal { round: usize, violation: Violation },
    #[error("recorded leftover {recorded:?} differs from the replayed {replayed:?}")]
    Leftover { recorded: Vec<EdgeId>, replayed: Vec<EdgeId> },
}

/// Re-applies every recorded round to a fresh game on `board` and returns the
/// terminal position. Transcripts of aborted games replay up to the fault.
pub fn replay(board: Arc<Graph>, transcript: &Transcript) -> Result<GameState, ReplayError> {
    if board.n() != transcript.n {
        return Err(ReplayError::BoardMismatch { transcript: transcript.n, board: board.n() });
    }
    let mut state = GameState::new(board, transcript.q, transcript.kind)
        .map_err(|violation| ReplayError::Illegal { round: 0, violation })?;
    for (round, r) in transcript.rounds.iter().enumerate() {
        state.apply_round(&r.offer, r.pick).map_err(|violation| ReplayError::Illegal { round, violation })?;
    }
    if transcript.fault.is_none() && state.leftover_pending() {
        state.apply_leftover().map_err(|violation| ReplayError::Illegal {
            round: transcript.rounds.len(),
            violation,
        })?;
    }
    if state.leftover() != transcript.leftover.as_slice() {
        return Err(ReplayError::Leftover { recorded: transcript.leftover.clone(), replayed: state.leftover().to_vec() });
    }
    debug_assert!(state.owners().iter().all(|&o| o != Owner::Free) || transcript.fault.is_some());
    Ok(state)
}
