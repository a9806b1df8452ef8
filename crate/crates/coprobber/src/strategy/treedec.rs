//! Bag sweeping over a tree decomposition: guard every vertex of a bag with
//! path guards (one per vertex pair, plus a sitter when the bag is odd), then
//! advance bag by bag toward the robber's territory.
//!
//! Reassignment across an advance follows three cases: guards whose path
//! endpoints both stay in the bag intersection keep their paths; guards with
//! one surviving endpoint walk along their own path to it and stretch to an
//! unguarded vertex of the new bag; everyone else is freed and re-paired.
//! Unguarded new-bag vertices are consumed in ascending order. The robber's
//! territory shrinks to a proper subtree after each advance, so finitely many
//! advances corner him.

use crate::engine::{CopStrategy, GameState, StrategyError, StrategyEvent, Trace};
use crate::graph::Graph;
use crate::treewidth::{validate_decomposition, TreeDecomposition};

use super::{greedy_capture, guard::PathGuard};

enum Slot {
    Guard(PathGuard),
    Idle(usize),
}

impl Slot {
    fn settled(&self) -> bool {
        match self {
            Slot::Guard(g) => g.settled(),
            Slot::Idle(_) => true,
        }
    }

    fn pos(&self) -> usize {
        match self {
            Slot::Guard(g) => g.pos(),
            Slot::Idle(p) => *p,
        }
    }
}

pub struct TreeDecompStrategy {
    decomp: TreeDecomposition,
    slots: Vec<Slot>,
    current_bag: usize,
    established: bool,
    events: Vec<StrategyEvent>,
}

impl TreeDecompStrategy {
    pub fn new(g: &Graph, mut decomp: TreeDecomposition) -> Result<Self, StrategyError> {
        if let Err(violation) = validate_decomposition(g, &decomp) {
            return Err(StrategyError::new(format!("invalid decomposition: {violation}")));
        }
        for bag in &mut decomp.bags {
            bag.sort_unstable();
            bag.dedup();
        }
        Ok(TreeDecompStrategy {
            decomp,
            slots: Vec::new(),
            current_bag: 0,
            established: false,
            events: Vec::new(),
        })
    }

    /// ceil(max bag / 2) = floor(width/2) + 1 for tight decompositions.
    pub fn required_cops(&self) -> usize {
        let max_bag = self.decomp.bags.iter().map(|b| b.len()).max().unwrap_or(1);
        max_bag.div_ceil(2).max(1)
    }

    /// Pairs bag vertices in ascending order; odd leftover becomes a sitter.
    fn initial_assignments(g: &Graph, bag: &[usize]) -> Result<Vec<PathGuard>, StrategyError> {
        let mut guards = Vec::new();
        let mut iter = bag.chunks(2);
        for chunk in &mut iter {
            let path = match chunk {
                [a, b] => g
                    .shortest_path(*a, *b)
                    .ok_or_else(|| StrategyError::new("bag vertices in different components"))?,
                [a] => vec![*a],
                _ => unreachable!(),
            };
            let anchor = path[0];
            guards.push(PathGuard::new(g, path, anchor)?);
        }
        Ok(guards)
    }

    fn guarded_vertices(&self, g: &Graph) -> Vec<bool> {
        let mut guarded = vec![false; g.n()];
        for slot in &self.slots {
            if let Slot::Guard(guard) = slot {
                for &v in guard.path() {
                    guarded[v] = true;
                }
            }
        }
        guarded
    }

    /// Vertices the robber can reach without touching a guarded vertex.
    fn territory(g: &Graph, guarded: &[bool], robber: usize) -> Vec<bool> {
        let mut seen = vec![false; g.n()];
        if guarded[robber] {
            return seen;
        }
        seen[robber] = true;
        let mut stack = vec![robber];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w] && !guarded[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// The neighbor of the current bag's tree node whose subtree holds the
    /// robber's territory.
    fn advance_target(&self, territory: &[bool]) -> Option<usize> {
        let tree = &self.decomp.tree;
        for &x in tree.neighbors(self.current_bag) {
            // the component of tree - current containing x
            let mut seen = vec![false; tree.n()];
            seen[self.current_bag] = true;
            seen[x] = true;
            let mut stack = vec![x];
            let mut hit = false;
            while let Some(node) = stack.pop() {
                if self.decomp.bags[node].iter().any(|&v| territory[v]) {
                    hit = true;
                }
                for &next in tree.neighbors(node) {
                    if !seen[next] {
                        seen[next] = true;
                        stack.push(next);
                    }
                }
            }
            if hit {
                return Some(x);
            }
        }
        None
    }

    fn reassign(&mut self, g: &Graph, to_node: usize, round: usize) -> Result<(), StrategyError> {
        let from: &[usize] = &self.decomp.bags[self.current_bag];
        let to: &[usize] = &self.decomp.bags[to_node];
        let common: Vec<usize> = from.iter().copied().filter(|v| to.contains(v)).collect();
        let mut pool: std::collections::VecDeque<usize> =
            to.iter().copied().filter(|v| !from.contains(v)).collect();

        enum Plan {
            Keep,
            Transitional { common_end: usize },
            Free,
        }
        let plans: Vec<Plan> = self
            .slots
            .iter()
            .map(|slot| match slot {
                Slot::Idle(_) => Plan::Free,
                Slot::Guard(guard) => {
                    let first = *guard.path().first().unwrap();
                    let last = *guard.path().last().unwrap();
                    if guard.path().len() == 1 {
                        // a sitter stretches toward the new bag so its cop
                        // is not wasted holding a single surviving vertex
                        if common.contains(&first) {
                            Plan::Transitional { common_end: first }
                        } else {
                            Plan::Free
                        }
                    } else {
                        match (common.contains(&first), common.contains(&last)) {
                            (true, true) => Plan::Keep,
                            (true, false) => Plan::Transitional { common_end: first },
                            (false, true) => Plan::Transitional { common_end: last },
                            (false, false) => Plan::Free,
                        }
                    }
                }
            })
            .collect();

        // transitional guards stretch from their surviving endpoint first
        for (i, plan) in plans.iter().enumerate() {
            if let Plan::Transitional { common_end } = plan {
                let partner = pool.pop_front();
                let new_path = match partner {
                    Some(p) => g.shortest_path(*common_end, p).ok_or_else(|| {
                        StrategyError::new("new bag vertex unreachable from the kept endpoint")
                    })?,
                    None => vec![*common_end],
                };
                let Slot::Guard(old) = &self.slots[i] else { unreachable!() };
                // walk along the kept path to the surviving endpoint, so that
                // vertex stays covered throughout the transition
                let old_path = old.path().to_vec();
                let cur_idx = old_path.iter().position(|&p| p == old.pos());
                let approach: std::collections::VecDeque<usize> = match cur_idx {
                    Some(idx) => {
                        let target_idx =
                            old_path.iter().position(|&p| p == *common_end).unwrap();
                        if idx <= target_idx {
                            old_path[idx + 1..=target_idx].iter().copied().collect()
                        } else {
                            old_path[target_idx..idx].iter().rev().copied().collect()
                        }
                    }
                    None => {
                        // still on an approach of its own; route directly
                        g.shortest_path(old.pos(), *common_end)
                            .map(|w| w.into_iter().skip(1).collect())
                            .unwrap_or_default()
                    }
                };
                self.slots[i] =
                    Slot::Guard(PathGuard::with_approach(g, new_path, old.pos(), approach)?);
            }
        }
        // freed cops pick up the remaining new-bag vertices in pairs
        for (i, plan) in plans.iter().enumerate() {
            if let Plan::Free = plan {
                let pos = self.slots[i].pos();
                let slot = match (pool.pop_front(), pool.pop_front()) {
                    (Some(a), Some(b)) => {
                        let path = g.shortest_path(a, b).ok_or_else(|| {
                            StrategyError::new("paired bag vertices in different components")
                        })?;
                        Slot::Guard(PathGuard::new(g, path, pos)?)
                    }
                    (Some(a), None) => Slot::Guard(PathGuard::new(g, vec![a], pos)?),
                    (None, _) => Slot::Idle(pos),
                };
                self.slots[i] = slot;
            }
        }
        if !pool.is_empty() {
            let detail = format!(
                "cop budget could not cover bag {to_node}: {} vertices left unguarded",
                pool.len()
            );
            self.events.push(StrategyEvent::Falsification { round, detail: detail.clone() });
            return Err(StrategyError::new(detail));
        }
        self.events.push(StrategyEvent::BagAdvanced {
            round,
            from: self.current_bag,
            to: to_node,
        });
        self.current_bag = to_node;
        self.established = false;
        Ok(())
    }
}

impl CopStrategy for TreeDecompStrategy {
    fn name(&self) -> String {
        "treedec".into()
    }

    fn place(&mut self, g: &Graph, k: usize) -> Result<Vec<usize>, StrategyError> {
        let need = self.required_cops();
        if k < need {
            return Err(StrategyError::new(format!(
                "decomposition of width {} needs {need} cops, got {k}",
                self.decomp.width()
            )));
        }
        self.current_bag = 0;
        let guards = Self::initial_assignments(g, &self.decomp.bags[0].clone())?;
        let mut slots: Vec<Slot> = guards.into_iter().map(Slot::Guard).collect();
        let fallback = self.decomp.bags[0].first().copied().unwrap_or(0);
        while slots.len() < k {
            slots.push(Slot::Idle(fallback));
        }
        let positions = slots.iter().map(|s| s.pos()).collect();
        self.slots = slots;
        Ok(positions)
    }

    fn decide(&mut self, g: &Graph, state: &GameState, _history: &Trace)
        -> Result<Vec<usize>, StrategyError> {
        debug_assert!(state
            .cops
            .iter()
            .zip(self.slots.iter())
            .all(|(&c, s)| c == s.pos()));
        if let Some(capture) = greedy_capture(g, state) {
            return Ok(capture);
        }
        let robber = state.robber.expect("robber placed");

        if self.slots.iter().all(Slot::settled) {
            if !self.established {
                self.established = true;
                self.events.push(StrategyEvent::BagEstablished {
                    round: state.round,
                    node: self.current_bag,
                });
            }
            let guarded = self.guarded_vertices(g);
            if !guarded[robber] {
                let territory = Self::territory(g, &guarded, robber);
                if let Some(next_bag) = self.advance_target(&territory) {
                    self.reassign(g, next_bag, state.round)?;
                }
            }
        }

        let mut dests = Vec::with_capacity(self.slots.len());
        for slot in &mut self.slots {
            match slot {
                Slot::Guard(guard) => dests.push(guard.step(robber)),
                Slot::Idle(p) => dests.push(*p),
            }
        }
        Ok(dests)
    }

    fn events(&self) -> Vec<StrategyEvent> {
        self.events.clone()
    }
}
