//! Constructive cop strategies with stated budgets, baseline strategies, and
//! a name registry for the command line.
//!
//! Every handle is single-match and stateful: construct one per match. All
//! strategies break ties deterministically, so identical inputs replay to
//! byte-identical traces.

mod guard;
mod lead;
mod subdivision;
mod forbidden_forest;
mod treedec;

pub use guard::{PathGuard, SingleGuardCop};
pub use lead::{bipartite_lead_cop, induced_cycle_strategy, lead_cop_strategy, LeadCopStrategy};
pub use subdivision::SubdivisionPlusOne;
pub use forbidden_forest::ForbiddenForestStrategy;
pub use treedec::TreeDecompStrategy;

use std::sync::Arc;

use crate::engine::{CopStrategy, GameState, RobberStrategy, StrategyError, Trace};
use crate::graph::{metrics, Graph};
use crate::solver;

/// Size caps threaded through strategy construction.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub state_cap: usize,
    pub treewidth_cap: usize,
    pub metrics_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            state_cap: solver::DEFAULT_STATE_CAP,
            treewidth_cap: crate::treewidth::DEFAULT_TREEWIDTH_CAP,
            metrics_cap: metrics::DEFAULT_METRICS_CAP,
        }
    }
}

/// If some cop stands on or next to the robber, move it onto him.
/// Sound at any time: the robber cannot answer a co-location.
pub(crate) fn greedy_capture(g: &Graph, state: &GameState) -> Option<Vec<usize>> {
    let r = state.robber?;
    let idx = state.cops.iter().position(|&c| c == r || g.has_edge(c, r))?;
    let mut dests = state.cops.clone();
    dests[idx] = r;
    Some(dests)
}

/// First step of the lexicographically least shortest path, or `from` when
/// already there or unreachable.
pub(crate) fn step_toward(g: &Graph, from: usize, to: usize) -> usize {
    if from == to {
        return from;
    }
    match g.shortest_path(from, to) {
        Some(path) => path[1],
        None => from,
    }
}

/// Baseline cop: every cop walks a shortest path toward the robber.
pub struct GreedyCop {
    _private: (),
}

impl GreedyCop {
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        GreedyCop { _private: () }
    }
}

impl CopStrategy for GreedyCop {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn place(&mut self, _g: &Graph, k: usize) -> Result<Vec<usize>, StrategyError> {
        Ok(vec![0; k])
    }

    fn decide(&mut self, g: &Graph, state: &GameState, _history: &Trace)
        -> Result<Vec<usize>, StrategyError> {
        if let Some(capture) = greedy_capture(g, state) {
            return Ok(capture);
        }
        let r = state.robber.expect("robber placed");
        Ok(state.cops.iter().map(|&c| step_toward(g, c, r)).collect())
    }
}

fn farthest_from_cops(g: &Graph, cops: &[usize]) -> usize {
    let dists: Vec<Vec<Option<usize>>> = cops.iter().map(|&c| g.bfs_distances(c)).collect();
    let score = |v: usize| {
        dists
            .iter()
            .map(|d| d[v].unwrap_or(usize::MAX))
            .min()
            .unwrap_or(usize::MAX)
    };
    (0..g.n()).max_by_key(|&v| (score(v), std::cmp::Reverse(v))).unwrap_or(0)
}

/// Robber that places as far from the cops as possible and never moves.
pub struct StationaryRobber {
    _private: (),
}

impl StationaryRobber {
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        StationaryRobber { _private: () }
    }
}

impl RobberStrategy for StationaryRobber {
    fn name(&self) -> String {
        "stay".into()
    }

    fn place(&mut self, g: &Graph, cops: &[usize]) -> Result<usize, StrategyError> {
        Ok(farthest_from_cops(g, cops))
    }

    fn decide(&mut self, _g: &Graph, state: &GameState, _history: &Trace)
        -> Result<usize, StrategyError> {
        Ok(state.robber.expect("robber placed"))
    }
}

/// Robber that always moves to maximize its distance to the nearest cop.
pub struct RetreatingRobber {
    _private: (),
}

impl RetreatingRobber {
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        RetreatingRobber { _private: () }
    }
}

impl RobberStrategy for RetreatingRobber {
    fn name(&self) -> String {
        "evade".into()
    }

    fn place(&mut self, g: &Graph, cops: &[usize]) -> Result<usize, StrategyError> {
        Ok(farthest_from_cops(g, cops))
    }

    fn decide(&mut self, g: &Graph, state: &GameState, _history: &Trace)
        -> Result<usize, StrategyError> {
        let r = state.robber.expect("robber placed");
        let dists: Vec<Vec<Option<usize>>> =
            state.cops.iter().map(|&c| g.bfs_distances(c)).collect();
        let score = |v: usize| {
            dists
                .iter()
                .map(|d| d[v].unwrap_or(usize::MAX))
                .min()
                .unwrap_or(usize::MAX)
        };
        Ok(crate::engine::move_options(g, r)
            .into_iter()
            .max_by_key(|&v| (score(v), std::cmp::Reverse(v)))
            .unwrap_or(r))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("strategy {name}: missing or invalid parameter {param}")]
    BadParam { name: String, param: String },
    #[error("solver: {0}")]
    Solver(#[from] solver::SolverError),
    #[error("treewidth: {0}")]
    Treewidth(#[from] crate::treewidth::TreewidthError),
    #[error("{0}")]
    Construction(#[from] StrategyError),
}

fn parse_params(spec: &str) -> (String, std::collections::BTreeMap<String, String>) {
    match spec.split_once(':') {
        None => (spec.to_string(), Default::default()),
        Some((name, rest)) => {
            let mut params = std::collections::BTreeMap::new();
            for kv in rest.split(',') {
                if let Some((key, value)) = kv.split_once('=') {
                    params.insert(key.trim().to_string(), value.trim().to_string());
                }
            }
            (name.to_string(), params)
        }
    }
}

/// Builds a cop strategy from its registry name, e.g. `lead-cop:l=4`,
/// `bipartite:l=2`, `treedec`, `thm2:pattern=spider-2-2-2`, `optimal`,
/// `greedy`. The subdivision strategy needs its base graph and is built
/// directly by callers that have one.
pub fn build_cop_strategy(
    spec: &str,
    g: &Graph,
    k: usize,
    caps: Caps,
) -> Result<Box<dyn CopStrategy>, BuildError> {
    let (name, params) = parse_params(spec);
    let need_l = || -> Result<usize, BuildError> {
        params
            .get("l")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| BuildError::BadParam { name: name.clone(), param: "l".into() })
    };
    match name.as_str() {
        "greedy" => Ok(Box::new(GreedyCop::new())),
        "optimal" => {
            let table = Arc::new(solver::solve(g, k, caps.state_cap)?);
            Ok(Box::new(solver::OptimalCopStrategy::new(table)))
        }
        "lead-cop" => Ok(Box::new(lead_cop_strategy(need_l()?, caps))),
        "induced-cycle" => Ok(Box::new(induced_cycle_strategy(need_l()?, caps))),
        "bipartite" => Ok(Box::new(bipartite_lead_cop(need_l()?, caps))),
        "treedec" => {
            let (_, decomposition) = crate::treewidth::exact_treewidth(g, caps.treewidth_cap)?;
            Ok(Box::new(TreeDecompStrategy::new(g, decomposition)?))
        }
        "thm2" => {
            let pattern = params
                .get("pattern")
                .ok_or_else(|| BuildError::BadParam { name: name.clone(), param: "pattern".into() })?;
            let pattern = named_pattern(pattern).ok_or_else(|| BuildError::BadParam {
                name: name.clone(),
                param: format!("pattern={pattern}"),
            })?;
            Ok(Box::new(ForbiddenForestStrategy::new(pattern, caps)?))
        }
        _ => Err(BuildError::UnknownStrategy(spec.to_string())),
    }
}

/// Builds a robber strategy: `optimal`, `stay`, or `evade`.
pub fn build_robber_strategy(
    spec: &str,
    g: &Graph,
    k: usize,
    caps: Caps,
) -> Result<Box<dyn RobberStrategy>, BuildError> {
    match spec {
        "stay" => Ok(Box::new(StationaryRobber::new())),
        "evade" => Ok(Box::new(RetreatingRobber::new())),
        "optimal" => {
            let table = Arc::new(solver::solve(g, k, caps.state_cap)?);
            Ok(Box::new(solver::OptimalRobberStrategy::new(table)))
        }
        _ => Err(BuildError::UnknownStrategy(spec.to_string())),
    }
}

/// Named forest patterns: `claw`, `spider-a-b-c`, `p2-claw`.
pub fn named_pattern(name: &str) -> Option<crate::graph::pattern::ForestPattern> {
    use crate::graph::pattern::ForestPattern;
    use crate::graph::generate;
    if name == "claw" {
        return Some(ForestPattern::claw());
    }
    if name == "p2-claw" {
        let g = generate::disjoint_union(&generate::path(2).unwrap(), &generate::star(3).unwrap());
        return ForestPattern::new(g).ok();
    }
    if let Some(rest) = name.strip_prefix("spider-") {
        let legs: Option<Vec<usize>> = rest.split('-').map(|t| t.parse().ok()).collect();
        return ForestPattern::spider(&legs?).ok();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{default_horizon, play, Outcome};
    use crate::graph::generate;

    #[test]
    fn registry_builds_each_strategy() {
        let g = generate::cycle(4).unwrap();
        let caps = Caps::default();
        assert!(build_cop_strategy("greedy", &g, 1, caps).is_ok());
        assert!(build_cop_strategy("optimal", &g, 2, caps).is_ok());
        assert!(build_cop_strategy("lead-cop:l=4", &g, 2, caps).is_ok());
        assert!(build_cop_strategy("induced-cycle:l=5", &g, 3, caps).is_ok());
        assert!(build_cop_strategy("bipartite:l=2", &g, 2, caps).is_ok());
        assert!(build_cop_strategy("treedec", &g, 2, caps).is_ok());
        assert!(build_cop_strategy("thm2:pattern=claw", &g, 2, caps).is_ok());
        assert!(build_cop_strategy("nonsense", &g, 1, caps).is_err());
        assert!(build_cop_strategy("lead-cop", &g, 1, caps).is_err());
        assert!(build_robber_strategy("optimal", &g, 1, caps).is_ok());
        assert!(build_robber_strategy("stay", &g, 1, caps).is_ok());
        assert!(build_robber_strategy("wat", &g, 1, caps).is_err());
    }

    #[test]
    fn greedy_beats_stationary_on_a_tree() {
        let g = generate::spider(&[2, 3, 2]).unwrap();
        let mut cop = GreedyCop::new();
        let mut robber = StationaryRobber::new();
        let trace = play(&g, 1, &mut cop, &mut robber, default_horizon(&g, 1)).unwrap();
        assert!(trace.captured(), "{:?}", trace.outcome);
    }

    #[test]
    fn named_patterns_resolve() {
        assert!(named_pattern("claw").is_some());
        assert!(named_pattern("spider-2-2-2").is_some());
        assert!(named_pattern("p2-claw").is_some());
        assert!(named_pattern("hexagon").is_none());
        let p = named_pattern("p2-claw").unwrap();
        assert_eq!(p.components().len(), 2);
    }

    #[test]
    fn retreating_robber_survives_one_greedy_cop_on_cycle() {
        let g = generate::cycle(6).unwrap();
        let mut cop = GreedyCop::new();
        let mut robber = RetreatingRobber::new();
        let trace = play(&g, 1, &mut cop, &mut robber, 200).unwrap();
        assert!(matches!(trace.outcome, Outcome::Survived { .. }));
    }
}
