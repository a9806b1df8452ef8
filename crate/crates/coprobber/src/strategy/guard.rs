//! Guarding a shortest path: the one-cop tactic that pins a whole path.
//!
//! The controller keeps the cop's offset along the path equal to the robber's
//! distance to the anchor endpoint, clamped to the path. Once that holds at
//! the robber's turn (the guard is "settled"), any robber step onto the path
//! puts him exactly where the guard's next step lands.

use std::collections::VecDeque;

use crate::engine::{CopStrategy, GameState, StrategyError, StrategyEvent, Trace};
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct PathGuard {
    path: Vec<usize>,
    /// BFS distances from the anchor in the ambient graph.
    anchor_dist: Vec<Option<usize>>,
    /// Scripted walk toward the path; the last entry must lie on the path.
    approach: VecDeque<usize>,
    pos: usize,
    index: Option<usize>,
    settled: bool,
}

impl PathGuard {
    /// A guard for `path` (anchor first) whose cop currently stands at
    /// `start`. The path must be a shortest path between its endpoints;
    /// verified here by checking adjacency and anchor distances.
    ///
    /// The default approach walks a lexicographically least shortest route
    /// from `start` to the anchor.
    pub fn new(g: &Graph, path: Vec<usize>, start: usize) -> Result<Self, StrategyError> {
        let approach = match g.shortest_path(start, path[0]) {
            Some(walk) => walk.into_iter().skip(1).collect(),
            None => {
                return Err(StrategyError::new(format!(
                    "guard cannot reach path anchor {} from {start}",
                    path[0]
                )))
            }
        };
        Self::with_approach(g, path, start, approach)
    }

    /// A guard with an explicit approach walk (each step adjacent, ending on
    /// a path vertex). An empty approach requires `start` to be on the path.
    pub fn with_approach(
        g: &Graph,
        path: Vec<usize>,
        start: usize,
        approach: VecDeque<usize>,
    ) -> Result<Self, StrategyError> {
        if path.is_empty() {
            return Err(StrategyError::new("guard path must be non-empty"));
        }
        let anchor_dist = g.bfs_distances(path[0]);
        for (i, &p) in path.iter().enumerate() {
            if anchor_dist[p] != Some(i) {
                return Err(StrategyError::new(format!(
                    "path is not isometric: vertex {p} at offset {i} has anchor distance {:?}",
                    anchor_dist[p]
                )));
            }
            if i > 0 && !g.has_edge(path[i - 1], p) {
                return Err(StrategyError::new(format!(
                    "path vertices {} and {p} are not adjacent",
                    path[i - 1]
                )));
            }
        }
        let mut prev = start;
        for &w in &approach {
            if w != prev && !g.has_edge(prev, w) {
                return Err(StrategyError::new(format!(
                    "approach step {prev} -> {w} is not a move"
                )));
            }
            prev = w;
        }
        let entry = *approach.back().unwrap_or(&start);
        let index = if approach.is_empty() {
            Some(path.iter().position(|&p| p == start).ok_or_else(|| {
                StrategyError::new(format!("guard with no approach must start on its path, not {start}"))
            })?)
        } else {
            None // resolved when the approach walk arrives
        };
        if !approach.is_empty() && !path.contains(&entry) {
            return Err(StrategyError::new(format!(
                "approach walk ends at {entry}, which is off the path"
            )));
        }
        Ok(PathGuard { path, anchor_dist, approach, pos: start, index, settled: false })
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn anchor(&self) -> usize {
        self.path[0]
    }

    pub fn settled(&self) -> bool {
        self.settled
    }

    pub fn covers(&self, v: usize) -> bool {
        self.path.contains(&v)
    }

    /// Next destination given the robber's position. Also the capture move
    /// when the robber stands on the path within reach.
    pub fn step(&mut self, robber: usize) -> usize {
        if let Some(next) = self.approach.pop_front() {
            self.pos = next;
            if self.approach.is_empty() {
                self.index = Some(
                    self.path
                        .iter()
                        .position(|&p| p == next)
                        .expect("approach walks end on the path"),
                );
            }
            return next;
        }
        let i = self.index.expect("on path once the approach is done");
        let last = self.path.len() - 1;
        let target = match self.anchor_dist[robber] {
            Some(d) => d.min(last),
            None => i, // robber in another component: hold
        };
        let next_i = match i.cmp(&target) {
            std::cmp::Ordering::Less => i + 1,
            std::cmp::Ordering::Greater => i - 1,
            std::cmp::Ordering::Equal => i,
        };
        self.index = Some(next_i);
        self.pos = self.path[next_i];
        if next_i == target {
            self.settled = true;
        }
        self.pos
    }
}

/// Single guard wrapped as a one-cop strategy; exercises the controller
/// through the engine.
pub struct SingleGuardCop {
    g: Graph,
    path: Vec<usize>,
    guard: Option<PathGuard>,
    events: Vec<StrategyEvent>,
    reported_settled: bool,
}

impl SingleGuardCop {
    pub fn new(g: &Graph, path: Vec<usize>) -> Result<Self, StrategyError> {
        // construct once up front to validate the path
        PathGuard::new(g, path.clone(), path[0])?;
        Ok(SingleGuardCop {
            g: g.clone(),
            path,
            guard: None,
            events: Vec::new(),
            reported_settled: false,
        })
    }
}

impl CopStrategy for SingleGuardCop {
    fn name(&self) -> String {
        format!("guard:{:?}", self.path)
    }

    fn place(&mut self, g: &Graph, k: usize) -> Result<Vec<usize>, StrategyError> {
        if k != 1 {
            return Err(StrategyError::new("path guard controls exactly one cop"));
        }
        self.guard = Some(PathGuard::new(g, self.path.clone(), self.path[0])?);
        Ok(vec![self.path[0]])
    }

    fn decide(&mut self, _g: &Graph, state: &GameState, _history: &Trace)
        -> Result<Vec<usize>, StrategyError> {
        let robber = state.robber.expect("robber placed");
        let guard = self.guard.as_mut().expect("placed");
        let dest = guard.step(robber);
        if guard.settled() && !self.reported_settled {
            self.reported_settled = true;
            self.events.push(StrategyEvent::GuardSettled {
                round: state.round,
                cop: 0,
                path: self.path.clone(),
            });
        }
        let _ = &self.g;
        Ok(vec![dest])
    }

    fn events(&self) -> Vec<StrategyEvent> {
        self.events.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{default_horizon, play, Outcome};
    use crate::graph::generate;
    use crate::solver::{solve, OptimalRobberStrategy};
    use std::sync::Arc;

    #[test]
    fn rejects_non_isometric_paths() {
        // 0-1-2-3 around C_4 is not a shortest 0-3 path
        let g = generate::cycle(4).unwrap();
        assert!(PathGuard::new(&g, vec![0, 1, 2, 3], 0).is_err());
        assert!(PathGuard::new(&g, vec![0, 1, 2], 0).is_ok());
    }

    #[test]
    fn guard_on_whole_path_graph_captures() {
        let g = generate::path(5).unwrap();
        let mut cop = SingleGuardCop::new(&g, vec![0, 1, 2, 3, 4]).unwrap();
        let table = Arc::new(solve(&g, 1, 1_000_000).unwrap());
        let mut robber = OptimalRobberStrategy::new(table);
        let trace = play(&g, 1, &mut cop, &mut robber, default_horizon(&g, 1)).unwrap();
        assert!(trace.captured());
    }

    #[test]
    fn settled_guard_confines_the_robber_on_c6() {
        // guard the shortest path 0-1-2 of C_6; the optimal robber survives
        // but never again stands on a guarded vertex once the guard settles
        let g = generate::cycle(6).unwrap();
        let mut cop = SingleGuardCop::new(&g, vec![0, 1, 2]).unwrap();
        let table = Arc::new(solve(&g, 1, 1_000_000).unwrap());
        let mut robber = OptimalRobberStrategy::new(table);
        let horizon = 80;
        let trace = play(&g, 1, &mut cop, &mut robber, horizon).unwrap();
        assert!(matches!(trace.outcome, Outcome::Survived { .. }));
        let settle_round = cop
            .events()
            .iter()
            .find_map(|e| match e {
                StrategyEvent::GuardSettled { round, .. } => Some(*round),
                _ => None,
            })
            .expect("guard settles");
        for rec in trace.rounds.iter().skip(settle_round) {
            if let Some(r) = rec.robber {
                assert!(!vec![0, 1, 2].contains(&r), "robber entered the guarded path");
            }
        }
    }

    #[test]
    fn robber_at_anchor_is_clamped_to_zero() {
        let g = generate::path(4).unwrap();
        let mut guard = PathGuard::new(&g, vec![1, 2, 3], 1).unwrap();
        // robber at distance 0 from anchor: target index 0
        assert_eq!(guard.step(1), 1);
        assert!(guard.settled());
    }
}
