//! Playing on a uniformly subdivided graph with one extra cop.
//!
//! The auxiliary cop runs lead-cop pursuit on the subdivided graph, which
//! makes direction changes and loitering inside subdivided edges fatal after
//! finitely many occurrences: a reversal walks into the pursuer. The
//! remaining cops simulate the optimal strategy for the base graph. The
//! simulation advances one base move as soon as the robber commits to an
//! edge (his first step off a branch vertex), and each simulated cop move is
//! executed as the (r+1)-step walk along the corresponding subdivided edge.
//! Committing and walking both take r+1 rounds, so once the robber is forced
//! into steady forward motion the responding walk lands on his branch vertex
//! in the same round he does, and a capture in the simulation is a capture
//! on the board. While the robber loiters the simulators hold at branch
//! vertices and the auxiliary cop closes in.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::engine::{CopStrategy, GameState, StrategyError, StrategyEvent, Trace};
use crate::graph::Graph;
use crate::solver::{self, SolveTable, ToMove};
use crate::transform::subdivide;

use super::lead::{Hypothesis, LeadCopStrategy};
use super::{greedy_capture, Caps};

pub struct SubdivisionPlusOne {
    base: Graph,
    r: usize,
    expected: Graph,
    table: Arc<SolveTable>,
    base_k: usize,
    aux: LeadCopStrategy,
    /// Base-graph seats the simulators are walking toward.
    sim_targets: Vec<usize>,
    plans: Vec<VecDeque<usize>>,
    /// The robber's seat as the simulation sees it.
    sim_seat: Option<usize>,
    /// Committed base moves not yet answered, oldest first.
    pending: VecDeque<usize>,
    prev_robber: Option<usize>,
}

impl SubdivisionPlusOne {
    /// Solves the base graph and prepares the composite strategy for
    /// `subdivide(base, r)`; the cop budget is `cop_number(base) + 1`.
    pub fn new(base: &Graph, r: usize, caps: Caps) -> Result<Self, solver::SolverError> {
        let mut k = 1;
        let table = loop {
            let table = solver::solve(base, k, caps.state_cap)?;
            if table.cop_win() {
                break table;
            }
            k += 1;
        };
        let expected = subdivide(base, r).expect("subdivision of a valid graph").output;
        Ok(SubdivisionPlusOne {
            base: base.clone(),
            r,
            expected,
            table: Arc::new(table),
            base_k: k,
            aux: LeadCopStrategy::new(Hypothesis::Unchecked, caps),
            sim_targets: Vec::new(),
            plans: Vec::new(),
            sim_seat: None,
            pending: VecDeque::new(),
            prev_robber: None,
        })
    }

    pub fn cop_budget(&self) -> usize {
        self.base_k + 1
    }

    /// The walk across the subdivided image of base edge {a,b}, from a to b,
    /// excluding a. Empty when a == b.
    fn edge_walk(&self, a: usize, b: usize) -> VecDeque<usize> {
        if a == b {
            return VecDeque::new();
        }
        let key = (a.min(b), a.max(b));
        let e = self
            .base
            .edges()
            .binary_search(&key)
            .expect("simulated moves follow base edges");
        let first = self.base.n() + e * self.r;
        let mut walk: VecDeque<usize> = if a == key.0 {
            (first..first + self.r).collect()
        } else {
            (first..first + self.r).rev().collect()
        };
        walk.push_back(b);
        walk
    }

    /// The base edge an internal vertex belongs to.
    fn edge_of_internal(&self, v: usize) -> (usize, usize) {
        debug_assert!(v >= self.base.n());
        self.base.edges()[(v - self.base.n()) / self.r]
    }

    /// Nearer endpoint for a robber placed mid-edge, ties to the smaller id.
    fn project_initial(&self, v: usize) -> usize {
        if v < self.base.n() {
            return v;
        }
        let (u, w) = self.edge_of_internal(v);
        let offset = (v - self.base.n()) % self.r;
        let to_u = offset + 1;
        let to_w = self.r - offset;
        match to_u.cmp(&to_w) {
            std::cmp::Ordering::Less => u,
            std::cmp::Ordering::Greater => w,
            std::cmp::Ordering::Equal => u.min(w),
        }
    }

    /// Queues the simulated robber moves implied by the robber stepping from
    /// `from` (a branch vertex) toward `to`.
    fn commit(&mut self, from: usize, to_seat: usize) {
        let seat = *self.pending.back().unwrap_or_else(|| {
            self.sim_seat.as_ref().expect("seeded before commitments")
        });
        if seat != from {
            // the robber reversed out of his last committed edge; that walk
            // back is itself a legal base move
            debug_assert!(self.base.has_edge(seat, from));
            self.pending.push_back(from);
        }
        if to_seat != from {
            self.pending.push_back(to_seat);
        }
    }

    fn respond_next(&mut self) {
        if !self.plans.iter().all(VecDeque::is_empty) {
            return;
        }
        let Some(seat) = self.pending.pop_front() else { return };
        debug_assert!(
            self.table
                .state_rank(&sorted(&self.sim_targets), seat, ToMove::Cops)
                .is_some(),
            "simulation left the cop-win region"
        );
        let dests = self.table.best_cop_move(&self.sim_targets, seat);
        self.plans = self
            .sim_targets
            .iter()
            .zip(dests.iter())
            .map(|(&a, &b)| self.edge_walk(a, b))
            .collect();
        self.sim_targets = dests;
        self.sim_seat = Some(seat);
    }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

impl CopStrategy for SubdivisionPlusOne {
    fn name(&self) -> String {
        format!("subdiv+1:r={}", self.r)
    }

    fn place(&mut self, g: &Graph, k: usize) -> Result<Vec<usize>, StrategyError> {
        if *g != self.expected {
            return Err(StrategyError::new(format!(
                "game graph is not the {}-subdivision of the base graph",
                self.r
            )));
        }
        if k != self.base_k + 1 {
            return Err(StrategyError::new(format!(
                "subdivision strategy controls {} cops (base cop number {} plus one), got {k}",
                self.base_k + 1,
                self.base_k
            )));
        }
        let sims = self
            .table
            .winning_placement()
            .expect("table was solved at the base cop number");
        let mut placement = sims.clone();
        placement.extend(self.aux.place(g, 1)?);
        self.sim_targets = sims;
        self.plans = vec![VecDeque::new(); self.base_k];
        Ok(placement)
    }

    fn decide(&mut self, g: &Graph, state: &GameState, history: &Trace)
        -> Result<Vec<usize>, StrategyError> {
        if let Some(capture) = greedy_capture(g, state) {
            return Ok(capture);
        }
        let robber = state.robber.expect("robber placed");

        match self.sim_seat {
            None => {
                // the simulators sit out the first move: the winning
                // placement is cop-win against every robber seat with the
                // cops to move, so answering his first commitment fresh
                // keeps the simulation inside the winning region and lines
                // the response walks up with his traversal windows
                self.sim_seat = Some(self.project_initial(robber));
            }
            Some(_) => {
                let prev = self.prev_robber.expect("tracked from the first decide");
                if robber != prev {
                    if self.r == 0 {
                        // no internals: every robber move is a commitment
                        self.commit(prev, robber);
                    } else if robber >= self.base.n() && prev < self.base.n() {
                        // first step off a branch vertex commits the traversal
                        let (u, w) = self.edge_of_internal(robber);
                        debug_assert!(prev == u || prev == w);
                        let target = if prev == u { w } else { u };
                        self.commit(prev, target);
                    }
                }
            }
        }
        self.prev_robber = Some(robber);
        self.respond_next();

        let mut dests = Vec::with_capacity(state.cops.len());
        for (i, plan) in self.plans.iter_mut().enumerate() {
            match plan.pop_front() {
                Some(next) => dests.push(next),
                None => dests.push(state.cops[i]),
            }
        }
        let aux_state = GameState {
            cops: vec![state.cops[self.base_k]],
            robber: state.robber,
            phase: state.phase,
            round: state.round,
        };
        let aux_move = self.aux.decide(g, &aux_state, history)?;
        dests.push(aux_move[0]);
        Ok(dests)
    }

    fn events(&self) -> Vec<StrategyEvent> {
        self.aux.events()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{default_horizon, play, Outcome};
    use crate::graph::generate;
    use crate::solver::OptimalRobberStrategy;

    fn run_on_subdivision(base: &Graph, r: usize) -> Outcome {
        let mut cop = SubdivisionPlusOne::new(base, r, Caps::default()).unwrap();
        let k = cop.cop_budget();
        let big = subdivide(base, r).unwrap().output;
        let table = solver::solve(&big, k, 5_000_000).unwrap();
        let mut robber = OptimalRobberStrategy::new(Arc::new(table));
        play(&big, k, &mut cop, &mut robber, default_horizon(&big, k))
            .unwrap()
            .outcome
    }

    #[test]
    fn subdivided_tree_with_two_cops() {
        let base = generate::spider(&[2, 1, 2]).unwrap();
        let outcome = run_on_subdivision(&base, 2);
        assert!(matches!(outcome, Outcome::Captured { .. }), "{outcome:?}");
    }

    #[test]
    fn subdivided_triangle_needs_the_pipeline() {
        // subdivide(K_3, 1) = C_6 with one simulator and the pursuer
        for r in [1usize, 2, 3] {
            let outcome = run_on_subdivision(&generate::complete(3).unwrap(), r);
            assert!(matches!(outcome, Outcome::Captured { .. }), "r={r}: {outcome:?}");
        }
    }

    #[test]
    fn subdivided_c4_with_three_cops() {
        let base = generate::cycle(4).unwrap();
        let outcome = run_on_subdivision(&base, 2);
        assert!(matches!(outcome, Outcome::Captured { .. }), "{outcome:?}");
    }

    #[test]
    fn subdivided_k4_with_two_cops() {
        let base = generate::complete(4).unwrap();
        for r in [1usize, 2] {
            let outcome = run_on_subdivision(&base, r);
            assert!(matches!(outcome, Outcome::Captured { .. }), "r={r}: {outcome:?}");
        }
    }

    #[test]
    fn identity_subdivision_still_works() {
        let base = generate::cycle(5).unwrap();
        let outcome = run_on_subdivision(&base, 0);
        assert!(matches!(outcome, Outcome::Captured { .. }), "{outcome:?}");
    }

    #[test]
    fn wrong_graph_is_refused() {
        let base = generate::cycle(4).unwrap();
        let mut cop = SubdivisionPlusOne::new(&base, 1, Caps::default()).unwrap();
        let other = generate::cycle(9).unwrap(); // not subdivide(C_4, 1) = C_8
        let table = solver::solve(&other, 3, 5_000_000).unwrap();
        let mut robber = OptimalRobberStrategy::new(Arc::new(table));
        let trace = play(&other, 3, &mut cop, &mut robber, 50).unwrap();
        assert!(matches!(trace.outcome, Outcome::Forfeit { .. }));
    }
}
