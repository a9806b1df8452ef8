//! The referee: encodes the alternating pursuit game exactly, runs matches
//! between pluggable strategies, and records replayable traces.
//!
//! Rules enforced in order: cops place, robber places (placing on a cop, or
//! with every vertex cop-occupied, is immediate capture at round 0), then
//! rounds of cops-move-then-robber-moves with capture checked after every
//! half-move. A strategy returning an illegal move forfeits; the violation is
//! recorded in the trace rather than raised.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("the game is played on a connected graph; this input has {0} components")]
    Disconnected(usize),
    #[error("need at least one cop")]
    NoCops,
    #[error("queried {queried:?} moves while the phase is {phase:?}")]
    WrongPhase { queried: Side, phase: Phase },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("strategy refused: {0}")]
pub struct StrategyError(pub String);

impl StrategyError {
    pub fn new(msg: impl Into<String>) -> Self {
        StrategyError(msg.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Cops,
    Robber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    CopPlacement,
    RobberPlacement,
    CopsMove,
    RobberMove,
}

/// One game position. Cop order is stable across the match (strategies index
/// into it); use [`GameState::sorted_cops`] for the canonical multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub cops: Vec<usize>,
    pub robber: Option<usize>,
    pub phase: Phase,
    pub round: usize,
}

impl GameState {
    pub fn sorted_cops(&self) -> Vec<usize> {
        let mut c = self.cops.clone();
        c.sort_unstable();
        c
    }

    pub fn is_capture(&self) -> bool {
        self.robber.is_some_and(|r| self.cops.contains(&r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// Cop positions after the joint cop move.
    pub cops: Vec<usize>,
    /// Robber position after his move; `None` when the game ended first.
    pub robber: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Captured { round: usize },
    Survived { horizon: usize },
    Forfeit { side: Side, round: usize, reason: String },
}

/// Full record of one played game; replayable and byte-stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub graph_hash: String,
    pub n: usize,
    pub k: usize,
    pub cop_strategy: String,
    pub robber_strategy: String,
    pub horizon: usize,
    pub cop_placement: Vec<usize>,
    pub robber_placement: Option<usize>,
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
}

impl Trace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn captured(&self) -> bool {
        matches!(self.outcome, Outcome::Captured { .. })
    }
}

/// Diagnostic events a strategy may emit for invariant auditing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyEvent {
    StageStarted { round: usize, lead: usize, distance: usize, robber: usize },
    LeadReachedStageStart { round: usize },
    StageEnded { round: usize, lead_moves_after_reach: Option<usize> },
    GuardSettled { round: usize, cop: usize, path: Vec<usize> },
    GuardReassigned { round: usize, cop: usize },
    BagEstablished { round: usize, node: usize },
    BagAdvanced { round: usize, from: usize, to: usize },
    Falsification { round: usize, detail: String },
}

/// Deterministic decision procedure for the cop side.
pub trait CopStrategy {
    fn name(&self) -> String;
    fn place(&mut self, g: &Graph, k: usize) -> Result<Vec<usize>, StrategyError>;
    fn decide(&mut self, g: &Graph, state: &GameState, history: &Trace)
        -> Result<Vec<usize>, StrategyError>;
    fn events(&self) -> Vec<StrategyEvent> {
        Vec::new()
    }
}

/// Deterministic decision procedure for the robber side.
pub trait RobberStrategy {
    fn name(&self) -> String;
    fn place(&mut self, g: &Graph, cops: &[usize]) -> Result<usize, StrategyError>;
    fn decide(&mut self, g: &Graph, state: &GameState, history: &Trace)
        -> Result<usize, StrategyError>;
}

/// Number of distinct game states for n vertices and k cops: cop multisets
/// times robber positions times side-to-move. Saturating.
pub fn state_count(n: usize, k: usize) -> usize {
    multiset_count(n, k)
        .saturating_mul(n as u128)
        .saturating_mul(2)
        .try_into()
        .unwrap_or(usize::MAX)
}

/// C(n + k - 1, k) as u128 (saturating), the number of cop multisets.
pub fn multiset_count(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n + i) as u128);
        acc /= (i + 1) as u128;
    }
    acc
}

/// Default horizon: one more round than there are distinct states, so a
/// survival certifies a robber win for positional strategies.
pub fn default_horizon(g: &Graph, k: usize) -> usize {
    state_count(g.n(), k).saturating_add(1)
}

/// All joint cop move vectors from the current position, one entry per cop,
/// in lexicographic order. Each cop may stay or slide to a neighbor.
pub fn legal_cop_moves(g: &Graph, state: &GameState) -> Result<Vec<Vec<usize>>, EngineError> {
    if state.phase != Phase::CopsMove {
        return Err(EngineError::WrongPhase { queried: Side::Cops, phase: state.phase });
    }
    let options: Vec<Vec<usize>> = state.cops.iter().map(|&c| move_options(g, c)).collect();
    let mut all = Vec::new();
    let mut current = vec![0usize; options.len()];
    loop {
        all.push(current.iter().enumerate().map(|(i, &j)| options[i][j]).collect());
        let mut pos = options.len();
        loop {
            if pos == 0 {
                return Ok(all);
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < options[pos].len() {
                break;
            }
            current[pos] = 0;
        }
    }
}

/// The robber's move set: stay or slide to a neighbor, sorted.
pub fn legal_robber_moves(g: &Graph, state: &GameState) -> Result<Vec<usize>, EngineError> {
    if state.phase != Phase::RobberMove {
        return Err(EngineError::WrongPhase { queried: Side::Robber, phase: state.phase });
    }
    let r = state.robber.expect("robber placed before moving");
    Ok(move_options(g, r))
}

pub(crate) fn move_options(g: &Graph, v: usize) -> Vec<usize> {
    let mut opts = Vec::with_capacity(g.degree(v) + 1);
    opts.extend_from_slice(g.neighbors(v));
    opts.push(v);
    opts.sort_unstable();
    opts
}

/// Runs a full match and returns the trace.
pub fn play(
    g: &Graph,
    k: usize,
    cop: &mut dyn CopStrategy,
    robber: &mut dyn RobberStrategy,
    horizon: usize,
) -> Result<Trace, EngineError> {
    if !g.is_connected() {
        return Err(EngineError::Disconnected(g.components().len()));
    }
    if k == 0 {
        return Err(EngineError::NoCops);
    }
    let mut trace = Trace {
        graph_hash: format!("{:016x}", g.fingerprint()),
        n: g.n(),
        k,
        cop_strategy: cop.name(),
        robber_strategy: robber.name(),
        horizon,
        cop_placement: Vec::new(),
        robber_placement: None,
        rounds: Vec::new(),
        outcome: Outcome::Survived { horizon },
    };

    let placement = match cop.place(g, k) {
        Ok(p) => p,
        Err(e) => return Ok(forfeit(trace, Side::Cops, 0, e.0)),
    };
    if placement.len() != k || placement.iter().any(|&v| v >= g.n()) {
        return Ok(forfeit(trace, Side::Cops, 0, format!("invalid placement {placement:?}")));
    }
    trace.cop_placement = placement.clone();
    let mut state = GameState { cops: placement, robber: None, phase: Phase::RobberPlacement, round: 0 };

    let r0 = match robber.place(g, &state.cops) {
        Ok(r) => r,
        Err(e) => return Ok(forfeit(trace, Side::Robber, 0, e.0)),
    };
    if r0 >= g.n() {
        return Ok(forfeit(trace, Side::Robber, 0, format!("invalid placement {r0}")));
    }
    trace.robber_placement = Some(r0);
    state.robber = Some(r0);
    if state.cops.contains(&r0) {
        trace.outcome = Outcome::Captured { round: 0 };
        return Ok(trace);
    }

    for round in 1..=horizon {
        state.round = round;
        state.phase = Phase::CopsMove;
        let dests = match cop.decide(g, &state, &trace) {
            Ok(d) => d,
            Err(e) => return Ok(forfeit(trace, Side::Cops, round, e.0)),
        };
        if dests.len() != state.cops.len() {
            return Ok(forfeit(trace, Side::Cops, round, format!("move arity {} != {k}", dests.len())));
        }
        for (i, (&from, &to)) in state.cops.iter().zip(dests.iter()).enumerate() {
            if to >= g.n() || (to != from && !g.has_edge(from, to)) {
                return Ok(forfeit(trace, Side::Cops, round, format!("cop {i}: illegal move {from} -> {to}")));
            }
        }
        state.cops = dests;
        if state.is_capture() {
            trace.rounds.push(RoundRecord { cops: state.cops.clone(), robber: None });
            trace.outcome = Outcome::Captured { round };
            return Ok(trace);
        }

        state.phase = Phase::RobberMove;
        let rdest = match robber.decide(g, &state, &trace) {
            Ok(d) => d,
            Err(e) => return Ok(forfeit(trace, Side::Robber, round, e.0)),
        };
        let rcur = state.robber.unwrap();
        if rdest >= g.n() || (rdest != rcur && !g.has_edge(rcur, rdest)) {
            return Ok(forfeit(trace, Side::Robber, round, format!("illegal move {rcur} -> {rdest}")));
        }
        state.robber = Some(rdest);
        trace.rounds.push(RoundRecord { cops: state.cops.clone(), robber: Some(rdest) });
        if state.is_capture() {
            trace.outcome = Outcome::Captured { round };
            return Ok(trace);
        }
    }
    trace.outcome = Outcome::Survived { horizon };
    Ok(trace)
}

fn forfeit(mut trace: Trace, side: Side, round: usize, reason: String) -> Trace {
    trace.outcome = Outcome::Forfeit { side, round, reason };
    trace
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceViolation {
    #[error("trace was recorded on a different graph")]
    GraphMismatch,
    #[error("round {round}: illegal {side:?} move")]
    IllegalMove { side: Side, round: usize },
    #[error("recorded outcome disagrees with replay: {0}")]
    OutcomeMismatch(String),
}

/// Replays a trace against the rules: every recorded move must be legal and
/// the outcome must match the replayed capture round exactly.
pub fn verify_trace(g: &Graph, trace: &Trace) -> Result<(), TraceViolation> {
    if trace.graph_hash != format!("{:016x}", g.fingerprint()) || trace.n != g.n() {
        return Err(TraceViolation::GraphMismatch);
    }
    if let Outcome::Forfeit { .. } = trace.outcome {
        return Ok(()); // forfeits end recording; nothing further to replay
    }
    let mut cops = trace.cop_placement.clone();
    if cops.len() != trace.k || cops.iter().any(|&v| v >= g.n()) {
        return Err(TraceViolation::IllegalMove { side: Side::Cops, round: 0 });
    }
    let mut robber = match trace.robber_placement {
        Some(r) if r < g.n() => r,
        _ => return Err(TraceViolation::IllegalMove { side: Side::Robber, round: 0 }),
    };
    let mut captured_at: Option<usize> = if cops.contains(&robber) { Some(0) } else { None };
    for (i, rec) in trace.rounds.iter().enumerate() {
        let round = i + 1;
        if captured_at.is_some() {
            return Err(TraceViolation::OutcomeMismatch(format!(
                "moves recorded after capture at round {}",
                captured_at.unwrap()
            )));
        }
        if rec.cops.len() != cops.len() {
            return Err(TraceViolation::IllegalMove { side: Side::Cops, round });
        }
        for (&from, &to) in cops.iter().zip(rec.cops.iter()) {
            if to >= g.n() || (to != from && !g.has_edge(from, to)) {
                return Err(TraceViolation::IllegalMove { side: Side::Cops, round });
            }
        }
        cops = rec.cops.clone();
        if cops.contains(&robber) {
            captured_at = Some(round);
            if rec.robber.is_some() {
                return Err(TraceViolation::OutcomeMismatch(
                    "robber moved after being captured".into(),
                ));
            }
            continue;
        }
        match rec.robber {
            None => {
                return Err(TraceViolation::OutcomeMismatch(
                    "robber move missing without a capture".into(),
                ))
            }
            Some(to) => {
                if to >= g.n() || (to != robber && !g.has_edge(robber, to)) {
                    return Err(TraceViolation::IllegalMove { side: Side::Robber, round });
                }
                robber = to;
                if cops.contains(&robber) {
                    captured_at = Some(round);
                }
            }
        }
    }
    match (&trace.outcome, captured_at) {
        (Outcome::Captured { round }, Some(r)) if *round == r => Ok(()),
        (Outcome::Survived { .. }, None) => Ok(()),
        (o, c) => Err(TraceViolation::OutcomeMismatch(format!("recorded {o:?}, replayed capture {c:?}"))),
    }
}
