//! The lead-cop pursuit: stages that each strictly decrease the cops'
//! distance to the robber.
//!
//! At every stage a minimum-distance cop becomes the lead. It walks a
//! shortest path to the robber's stage-start vertex and then replays the
//! robber's recorded route; the other cops trail the lead's walk in single
//! file (or at spacing 2 in the bipartite variant). On graphs with no long
//! induced path (or no long induced cycle) each stage provably terminates,
//! which is what the budget guarantees rest on. Distances are measured after
//! the robber's move and before the cops' move.

use std::collections::VecDeque;

use crate::engine::{CopStrategy, GameState, StrategyError, StrategyEvent, Trace};
use crate::graph::{metrics, Graph};

use super::{greedy_capture, step_toward, Caps};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// No induced path on `l` vertices; budget l - 2.
    PFree(usize),
    /// No induced cycle of length at least `l`; budget l - 2.
    NoLongInducedCycle(usize),
    /// Bipartite and no induced path on 2l vertices; budget l.
    BipartitePFree(usize),
    /// No promise; used for the auxiliary pursuer in the subdivision
    /// strategy, whose stages may legitimately run long.
    Unchecked,
}

struct Stage {
    lead: usize,
    start_distance: usize,
    /// Lead cop's remaining walk: the shortest-path prefix, then the
    /// robber's route as it is recorded.
    pending: VecDeque<usize>,
    prefix_remaining: usize,
    reached: bool,
    lead_moves_after_reach: usize,
    rounds_in_stage: usize,
    /// The lead's walk so far (consecutive duplicates collapsed); followers
    /// chase positions on this trail.
    trail: Vec<usize>,
}

pub struct LeadCopStrategy {
    hypothesis: Hypothesis,
    caps: Caps,
    spacing: usize,
    stage_cap_factor: Option<usize>,
    stage: Option<Stage>,
    events: Vec<StrategyEvent>,
}

/// Strategy for P_l-free graphs with l - 2 cops.
pub fn lead_cop_strategy(ell: usize, caps: Caps) -> LeadCopStrategy {
    LeadCopStrategy::new(Hypothesis::PFree(ell), caps)
}

/// Strategy for graphs with no induced cycle of length >= l, with l - 2 cops.
pub fn induced_cycle_strategy(ell: usize, caps: Caps) -> LeadCopStrategy {
    LeadCopStrategy::new(Hypothesis::NoLongInducedCycle(ell), caps)
}

/// Strategy for P_{2l}-free bipartite graphs with l cops, followers spaced 2.
pub fn bipartite_lead_cop(ell: usize, caps: Caps) -> LeadCopStrategy {
    LeadCopStrategy::new(Hypothesis::BipartitePFree(ell), caps)
}

impl LeadCopStrategy {
    pub fn new(hypothesis: Hypothesis, caps: Caps) -> Self {
        let (spacing, capped) = match hypothesis {
            Hypothesis::BipartitePFree(_) => (2, true),
            Hypothesis::Unchecked => (1, false),
            _ => (1, true),
        };
        LeadCopStrategy {
            hypothesis,
            caps,
            spacing,
            stage_cap_factor: if capped { Some(4) } else { None },
            stage: None,
            events: Vec::new(),
        }
    }

    /// The cop budget the hypothesis promises, when it promises one.
    pub fn cop_budget(&self) -> Option<usize> {
        match self.hypothesis {
            Hypothesis::PFree(l) | Hypothesis::NoLongInducedCycle(l) => Some(l - 2),
            Hypothesis::BipartitePFree(l) => Some(l),
            Hypothesis::Unchecked => None,
        }
    }

    fn check_hypothesis(&self, g: &Graph, k: usize) -> Result<(), StrategyError> {
        if !g.is_connected() {
            return Err(StrategyError::new("lead-cop pursuit needs a connected graph"));
        }
        let cap = self.caps.metrics_cap;
        let fail = |msg: String| Err(StrategyError::new(msg));
        match self.hypothesis {
            Hypothesis::PFree(l) => {
                if l < 3 {
                    return fail(format!("lead-cop needs l >= 3, got {l}"));
                }
                if k != l - 2 {
                    return fail(format!("lead-cop with l = {l} controls {} cops, got {k}", l - 2));
                }
                match metrics::is_p_free(g, l, cap) {
                    Ok(true) => Ok(()),
                    Ok(false) => fail(format!("graph has an induced path on {l} vertices; bound not promised")),
                    Err(e) => fail(e.to_string()),
                }
            }
            Hypothesis::NoLongInducedCycle(l) => {
                if l < 3 {
                    return fail(format!("induced-cycle variant needs l >= 3, got {l}"));
                }
                if k != l - 2 {
                    return fail(format!("variant with l = {l} controls {} cops, got {k}", l - 2));
                }
                match metrics::has_induced_cycle_at_least(g, l, cap) {
                    Ok(false) => Ok(()),
                    Ok(true) => fail(format!("graph has an induced cycle of length >= {l}; bound not promised")),
                    Err(e) => fail(e.to_string()),
                }
            }
            Hypothesis::BipartitePFree(l) => {
                if l < 1 {
                    return fail("bipartite variant needs l >= 1".into());
                }
                if k != l {
                    return fail(format!("bipartite variant with l = {l} controls {l} cops, got {k}"));
                }
                if !g.is_bipartite() {
                    return fail("graph is not bipartite; bound not promised".into());
                }
                match metrics::is_p_free(g, 2 * l, cap) {
                    Ok(true) => Ok(()),
                    Ok(false) => fail(format!("graph has an induced path on {} vertices; bound not promised", 2 * l)),
                    Err(e) => fail(e.to_string()),
                }
            }
            Hypothesis::Unchecked => Ok(()),
        }
    }
}

impl CopStrategy for LeadCopStrategy {
    fn name(&self) -> String {
        match self.hypothesis {
            Hypothesis::PFree(l) => format!("lead-cop:l={l}"),
            Hypothesis::NoLongInducedCycle(l) => format!("induced-cycle:l={l}"),
            Hypothesis::BipartitePFree(l) => format!("bipartite:l={l}"),
            Hypothesis::Unchecked => "lead-pursuit".into(),
        }
    }

    fn place(&mut self, g: &Graph, k: usize) -> Result<Vec<usize>, StrategyError> {
        self.check_hypothesis(g, k)?;
        Ok(vec![0; k]) // all cops stacked on one arbitrary vertex
    }

    fn decide(&mut self, g: &Graph, state: &GameState, _history: &Trace)
        -> Result<Vec<usize>, StrategyError> {
        let r = state.robber.expect("robber placed");

        // record the robber's latest move into the running stage's route;
        // a stage created below never reaches this point in the same round,
        // so every robber move lands in the route exactly once
        if let Some(stage) = &mut self.stage {
            stage.pending.push_back(r);
        }

        if let Some(capture) = greedy_capture(g, state) {
            return Ok(capture);
        }

        let dist = g.bfs_distances(r);
        let cop_dist = |c: usize| dist[c].expect("connected graph");
        let min_dist = state.cops.iter().map(|&c| cop_dist(c)).min().unwrap();
        debug_assert!(min_dist >= 2, "distance <= 1 is the greedy capture case");

        let stage_over = self.stage.as_ref().is_none_or(|s| min_dist < s.start_distance);
        if stage_over {
            if let Some(old) = self.stage.take() {
                self.events.push(StrategyEvent::StageEnded {
                    round: state.round,
                    lead_moves_after_reach: old.reached.then_some(old.lead_moves_after_reach),
                });
            }
            let lead = (0..state.cops.len())
                .min_by_key(|&i| (cop_dist(state.cops[i]), i))
                .unwrap();
            let x = state.cops[lead];
            let walk = g.shortest_path(x, r).expect("connected graph");
            let pending: VecDeque<usize> = walk.into_iter().skip(1).collect();
            self.events.push(StrategyEvent::StageStarted {
                round: state.round,
                lead,
                distance: min_dist,
                robber: r,
            });
            self.stage = Some(Stage {
                lead,
                start_distance: min_dist,
                prefix_remaining: pending.len(),
                pending,
                reached: false,
                lead_moves_after_reach: 0,
                rounds_in_stage: 0,
                trail: vec![x],
            });
        }

        let spacing = self.spacing;
        let stage = self.stage.as_mut().unwrap();
        stage.rounds_in_stage += 1;
        if let Some(factor) = self.stage_cap_factor {
            let cap = factor * g.n() * g.n();
            if stage.rounds_in_stage > cap {
                let detail = format!(
                    "stage exceeded {cap} moves without a distance decrease (start distance {})",
                    stage.start_distance
                );
                self.events.push(StrategyEvent::Falsification { round: state.round, detail: detail.clone() });
                return Err(StrategyError::new(detail));
            }
        }

        let next = stage
            .pending
            .pop_front()
            .expect("the lead's walk never drains while the robber is distant");
        if stage.prefix_remaining > 0 {
            stage.prefix_remaining -= 1;
            if stage.prefix_remaining == 0 {
                stage.reached = true;
                self.events.push(StrategyEvent::LeadReachedStageStart { round: state.round });
            }
        } else {
            stage.lead_moves_after_reach += 1;
        }
        if *stage.trail.last().unwrap() != next {
            stage.trail.push(next);
        }

        let mut dests = Vec::with_capacity(state.cops.len());
        let mut follower_ordinal = 0usize;
        for (i, &pos) in state.cops.iter().enumerate() {
            if i == stage.lead {
                dests.push(next);
            } else {
                follower_ordinal += 1;
                let back = 1 + spacing * follower_ordinal;
                let target_idx = stage.trail.len().saturating_sub(back);
                let target = stage.trail[target_idx];
                dests.push(step_toward(g, pos, target));
            }
        }
        Ok(dests)
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

    fn optimal_robber(g: &Graph, k: usize) -> OptimalRobberStrategy {
        OptimalRobberStrategy::new(Arc::new(solve(g, k, 5_000_000).unwrap()))
    }

    fn run(g: &Graph, k: usize, cop: &mut dyn CopStrategy) -> Outcome {
        let mut robber = optimal_robber(g, k);
        play(g, k, cop, &mut robber, default_horizon(g, k)).unwrap().outcome
    }

    #[test]
    fn one_cop_on_complete_graphs() {
        // l = 3: connected P_3-free graphs are complete
        let g = generate::complete(5).unwrap();
        let mut cop = lead_cop_strategy(3, Caps::default());
        assert!(matches!(run(&g, 1, &mut cop), Outcome::Captured { round } if round <= 1));
    }

    #[test]
    fn two_cops_on_c4() {
        let g = generate::cycle(4).unwrap();
        let mut cop = lead_cop_strategy(4, Caps::default());
        assert!(matches!(run(&g, 2, &mut cop), Outcome::Captured { .. }));
    }

    #[test]
    fn refuses_when_hypothesis_fails() {
        let g = generate::path(6).unwrap(); // contains induced P_4
        let mut cop = lead_cop_strategy(4, Caps::default());
        let mut robber = StationaryForTest;
        let trace = play(&g, 2, &mut cop, &mut robber, 10).unwrap();
        assert!(matches!(trace.outcome, Outcome::Forfeit { .. }));
    }

    struct StationaryForTest;
    impl crate::engine::RobberStrategy for StationaryForTest {
        fn name(&self) -> String {
            "test-stay".into()
        }
        fn place(&mut self, g: &Graph, _cops: &[usize]) -> Result<usize, StrategyError> {
            Ok(g.n() - 1)
        }
        fn decide(&mut self, _g: &Graph, state: &GameState, _h: &Trace) -> Result<usize, StrategyError> {
            Ok(state.robber.unwrap())
        }
    }

    #[test]
    fn cograph_capture_with_two_cops() {
        // K_{3,3} is P_4-free; two cops are the promised budget
        let g = generate::complete_bipartite(3, 3).unwrap();
        let mut cop = lead_cop_strategy(4, Caps::default());
        assert!(matches!(run(&g, 2, &mut cop), Outcome::Captured { .. }));
    }

    #[test]
    fn induced_cycle_variant_on_trees_and_chordal() {
        let tree = generate::spider(&[2, 2, 3]).unwrap();
        let mut cop = induced_cycle_strategy(3, Caps::default());
        assert!(matches!(run(&tree, 1, &mut cop), Outcome::Captured { .. }));

        // C_5 has no induced cycle of length >= 6; four cops capture
        let c5 = generate::cycle(5).unwrap();
        let mut cop = induced_cycle_strategy(6, Caps::default());
        assert!(matches!(run(&c5, 4, &mut cop), Outcome::Captured { .. }));
    }

    #[test]
    fn bipartite_variant_examples() {
        let k33 = generate::complete_bipartite(3, 3).unwrap();
        let mut cop = bipartite_lead_cop(2, Caps::default());
        assert!(matches!(run(&k33, 2, &mut cop), Outcome::Captured { .. }));

        let star = generate::star(5).unwrap();
        let mut cop = bipartite_lead_cop(2, Caps::default());
        assert!(matches!(run(&star, 2, &mut cop), Outcome::Captured { .. }));

        // C_6 is P_6-free (longest induced path has 5 vertices): l = 3
        let c6 = generate::cycle(6).unwrap();
        let mut cop = bipartite_lead_cop(3, Caps::default());
        assert!(matches!(run(&c6, 3, &mut cop), Outcome::Captured { .. }));
    }

    #[test]
    fn stage_progress_stays_within_the_promised_window() {
        let g = generate::complete_bipartite(3, 3).unwrap();
        let ell = 4;
        let mut cop = lead_cop_strategy(ell, Caps::default());
        let outcome = run(&g, 2, &mut cop);
        assert!(matches!(outcome, Outcome::Captured { .. }));
        let mut starts = Vec::new();
        for e in cop.events() {
            match e {
                StrategyEvent::StageStarted { distance, .. } => starts.push(distance),
                StrategyEvent::StageEnded { lead_moves_after_reach, .. } => {
                    if let (Some(moves), Some(&d)) = (lead_moves_after_reach, starts.last()) {
                        assert!(
                            moves <= ell - d - 1,
                            "stage used {moves} lead moves after reach with start distance {d}"
                        );
                    }
                }
                _ => {}
            }
        }
    }
}
