//! Ground truth: retrograde analysis of the k-cop pursuit game.
//!
//! States are (cop multiset, robber vertex, side to move) with the robber off
//! every cop. Cop multisets are ranked combinatorially (cops are
//! interchangeable), which is what makes Petersen-sized k = 3 instances
//! cheap. Labels are computed by backward induction from capture states with
//! a work queue, so each cop-win state also carries its rank: the optimal
//! number of remaining half-moves to capture. Everything outside the
//! attractor is a robber win; no horizon heuristics are involved.

use std::sync::Arc;

use thiserror::Error;

use crate::engine::{
    move_options, multiset_count, CopStrategy, GameState, RobberStrategy, StrategyError, Trace,
};
use crate::graph::Graph;

pub const DEFAULT_STATE_CAP: usize = 5_000_000;

const UNLABELED: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("state space too large: {states} states exceed cap {cap}")]
    StateCapExceeded { states: u128, cap: usize },
    #[error("solver needs a connected graph; got {0} components")]
    Disconnected(usize),
    #[error("need at least one cop")]
    NoCops,
    #[error("component containing vertex {vertex}: {source}")]
    Component { vertex: usize, source: Box<SolverError> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToMove {
    Cops,
    Robber,
}

/// Colex ranking of sorted k-multisets over 0..n, via the bijection with
/// k-combinations of 0..n+k-1.
struct MultisetIndex {
    k: usize,
    binom: Vec<Vec<u64>>,
    /// All multisets, flattened, in colex rank order.
    flat: Vec<u16>,
    count: usize,
}

impl MultisetIndex {
    fn new(n: usize, k: usize) -> Self {
        // Pascal fill up to C(n+k-1, k); counts were cap-checked in u128 first
        let alphabet = n + k;
        let mut binom = vec![vec![0u64; k + 2]; alphabet + 1];
        for i in 0..=alphabet {
            binom[i][0] = 1;
            for j in 1..=(k + 1) {
                binom[i][j] = if j > i {
                    0
                } else {
                    binom[i - 1][j - 1].saturating_add(binom[i - 1][j])
                };
            }
        }
        let mut flat: Vec<u16> = Vec::new();
        let mut tuple = vec![0u16; k];
        enumerate_colex(n, k, k - 1, &mut tuple, &mut flat);
        let count = flat.len() / k;
        MultisetIndex { k, binom, flat, count }
    }

    fn rank_u16(&self, sorted: &[u16]) -> usize {
        let mut r = 0u64;
        for (i, &c) in sorted.iter().enumerate() {
            r += self.binom[c as usize + i][i + 1];
        }
        r as usize
    }

    fn count(&self) -> usize {
        self.count
    }

    fn get(&self, rank: usize) -> &[u16] {
        &self.flat[rank * self.k..(rank + 1) * self.k]
    }

    /// Colex rank of a sorted multiset.
    fn rank(&self, sorted: &[usize]) -> usize {
        let mut r = 0u64;
        for (i, &c) in sorted.iter().enumerate() {
            r += self.binom[c + i][i + 1];
        }
        r as usize
    }
}

/// Enumerates non-decreasing k-tuples over 0..n in colex order by fixing the
/// last coordinate outermost.
fn enumerate_colex(n: usize, k: usize, pos: usize, tuple: &mut Vec<u16>, out: &mut Vec<u16>) {
    let hi = if pos + 1 == k { n } else { tuple[pos + 1] as usize + 1 };
    for v in 0..hi {
        tuple[pos] = v as u16;
        if pos == 0 {
            out.extend_from_slice(tuple);
        } else {
            enumerate_colex(n, k, pos - 1, tuple, out);
        }
    }
}

/// The solved k-cop game on one connected graph.
pub struct SolveTable {
    graph: Graph,
    k: usize,
    index: MultisetIndex,
    /// Per state: optimal remaining half-moves to capture; UNLABELED marks
    /// robber-win states.
    rank: Vec<u32>,
}

impl SolveTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    fn state_id(&self, crank: usize, robber: usize, side: ToMove) -> usize {
        (crank * self.graph.n() + robber) * 2 + side as usize
    }

    /// Rank lookup; `None` for robber-win states. Cops must be sorted.
    pub fn state_rank(&self, cops_sorted: &[usize], robber: usize, side: ToMove) -> Option<u32> {
        debug_assert!(cops_sorted.windows(2).all(|w| w[0] <= w[1]));
        if cops_sorted.contains(&robber) {
            return Some(0);
        }
        let crank = self.index.rank(cops_sorted);
        match self.rank[self.state_id(crank, robber, side)] {
            UNLABELED => None,
            d => Some(d),
        }
    }

    pub fn is_cop_win_state(&self, cops_sorted: &[usize], robber: usize, side: ToMove) -> bool {
        self.state_rank(cops_sorted, robber, side).is_some()
    }

    /// Lexicographically least initial multiset that wins against every
    /// robber placement, if any.
    pub fn winning_placement(&self) -> Option<Vec<usize>> {
        let n = self.graph.n();
        let mut best: Option<Vec<usize>> = None;
        for crank in 0..self.index.count() {
            let cops: Vec<usize> = self.index.get(crank).iter().map(|&v| v as usize).collect();
            let wins = (0..n).all(|r| {
                cops.contains(&r) || self.rank[self.state_id(crank, r, ToMove::Cops)] != UNLABELED
            });
            if wins && best.as_ref().is_none_or(|b| cops < *b) {
                best = Some(cops);
            }
        }
        best
    }

    pub fn cop_win(&self) -> bool {
        self.winning_placement().is_some()
    }

    /// Rank-minimizing joint move from a cops-to-move position, ties broken
    /// by the lexicographically least destination multiset. Returns
    /// destinations aligned with the given cop order.
    pub fn best_cop_move(&self, cops: &[usize], robber: usize) -> Vec<usize> {
        let g = &self.graph;
        let options: Vec<Vec<usize>> = g.vertices().map(|v| move_options(g, v)).collect();
        let mut order: Vec<usize> = (0..cops.len()).collect();
        order.sort_by_key(|&i| (cops[i], i));
        let sorted: Vec<u16> = order.iter().map(|&i| cops[i] as u16).collect();
        let mut best: Option<(u32, Vec<u16>, Vec<usize>)> = None;
        let mut scratch = JointMoveScratch::default();
        scratch.enumerate_assigned(&options, &sorted, |multiset, destinations| {
            let value = if multiset.iter().any(|&c| c as usize == robber) {
                0
            } else {
                let cops: Vec<usize> = multiset.iter().map(|&c| c as usize).collect();
                self.state_rank(&cops, robber, ToMove::Robber).unwrap_or(UNLABELED)
            };
            let better = match &best {
                None => true,
                Some((bv, bm, _)) => value < *bv || (value == *bv && multiset < bm.as_slice()),
            };
            if better {
                best = Some((value, multiset.to_vec(), destinations.to_vec()));
            }
        });
        let (_, _, dests_sorted_order) = best.expect("at least staying put is legal");
        let mut result = vec![0usize; cops.len()];
        for (slot, &cop_index) in order.iter().enumerate() {
            result[cop_index] = dests_sorted_order[slot];
        }
        result
    }
}

/// Solves the k-cop game on a connected graph by retrograde analysis.
pub fn solve(g: &Graph, k: usize, cap: usize) -> Result<SolveTable, SolverError> {
    if k == 0 {
        return Err(SolverError::NoCops);
    }
    if !g.is_connected() {
        return Err(SolverError::Disconnected(g.components().len()));
    }
    let n = g.n();
    let states = multiset_count(n, k).saturating_mul(n as u128).saturating_mul(2);
    if states > cap as u128 {
        return Err(SolverError::StateCapExceeded { states, cap });
    }
    let index = MultisetIndex::new(n, k);
    let total = index.count() * n * 2;
    let mut rank = vec![UNLABELED; total];
    let mut counter = vec![0u16; index.count() * n];
    let options: Vec<Vec<usize>> = g.vertices().map(|v| move_options(g, v)).collect();

    let state_id = |crank: usize, r: usize, side: ToMove| (crank * n + r) * 2 + side as usize;

    let mut layer: Vec<u32> = Vec::new();
    for crank in 0..index.count() {
        let cops = index.get(crank);
        for r in 0..n {
            if cops.iter().any(|&c| c as usize == r) {
                continue;
            }
            // cops to move: capture in one iff some cop is adjacent to r
            if cops.iter().any(|&c| g.has_edge(c as usize, r)) {
                let id = state_id(crank, r, ToMove::Cops);
                rank[id] = 1;
                layer.push(id as u32);
            }
            // robber to move: count his non-capture options
            let live = options[r]
                .iter()
                .filter(|&&o| cops.binary_search(&(o as u16)).is_err())
                .count();
            debug_assert!(live >= 1, "staying is never a capture for enumerated states");
            counter[crank * n + r] = live as u16;
        }
    }

    // rank-synchronous backward induction; robber-side states in a layer are
    // grouped by cop multiset so the joint-move enumeration (the expensive
    // part for spread cops) runs once per multiset per layer
    let mut scratch = JointMoveScratch::default();
    let mut d: u32 = 1;
    while !layer.is_empty() {
        let mut next: Vec<u32> = Vec::new();

        for &id32 in layer.iter().filter(|&&id| id % 2 == 0) {
            // cops just moved to reach this state: decrement the robber
            // predecessors one hop away
            let id = id32 as usize;
            let crank = id / (2 * n);
            let r = (id / 2) % n;
            let cops = index.get(crank);
            for &r0 in &options[r] {
                if cops.binary_search(&(r0 as u16)).is_ok() {
                    continue;
                }
                let cid = crank * n + r0;
                debug_assert!(counter[cid] > 0);
                counter[cid] -= 1;
                if counter[cid] == 0 {
                    let pid = state_id(crank, r0, ToMove::Robber);
                    debug_assert_eq!(rank[pid], UNLABELED);
                    rank[pid] = d + 1;
                    next.push(pid as u32);
                }
            }
        }

        let mut robber_states: Vec<u32> =
            layer.iter().copied().filter(|&id| id % 2 == 1).collect();
        robber_states.sort_unstable();
        let mut i = 0;
        while i < robber_states.len() {
            let crank = (robber_states[i] as usize) / (2 * n);
            let run_end = robber_states[i..]
                .iter()
                .position(|&other| (other as usize) / (2 * n) != crank)
                .map_or(robber_states.len(), |off| i + off);
            let cops = index.get(crank);
            scratch.enumerate(&options, cops);
            for pred in scratch.multisets() {
                let pc = index.rank_u16(pred);
                for &sid in &robber_states[i..run_end] {
                    let r = (sid as usize / 2) % n;
                    if pred.contains(&(r as u16)) {
                        continue; // not a reachable position
                    }
                    let pid = state_id(pc, r, ToMove::Cops);
                    if rank[pid] == UNLABELED {
                        rank[pid] = d + 1;
                        next.push(pid as u32);
                    }
                }
            }
            i = run_end;
        }

        layer = next;
        d += 1;
    }

    Ok(SolveTable { graph: g.clone(), k, index, rank })
}

/// Grouped enumeration of joint cop moves: cops sharing a vertex choose a
/// destination multiset from that vertex's options, so interchangeable cops
/// are never enumerated twice. Results live in a flat reusable buffer and
/// are deduplicated through packed keys, keeping the hot loop allocation
/// free.
#[derive(Default)]
struct JointMoveScratch {
    flat: Vec<u16>,
    keys: Vec<(u128, u32)>,
    k: usize,
}

impl JointMoveScratch {
    fn multisets(&self) -> impl Iterator<Item = &[u16]> {
        let k = self.k;
        self.keys.iter().map(move |&(_, off)| &self.flat[off as usize..off as usize + k])
    }

    fn enumerate(&mut self, options: &[Vec<usize>], cops_sorted: &[u16]) {
        self.flat.clear();
        self.keys.clear();
        self.k = cops_sorted.len();
        let mut groups: Vec<(usize, usize)> = Vec::new(); // (vertex, count)
        for &c in cops_sorted {
            match groups.last_mut() {
                Some((v, cnt)) if *v == c as usize => *cnt += 1,
                _ => groups.push((c as usize, 1)),
            }
        }
        let mut acc: Vec<u16> = Vec::with_capacity(self.k);
        Self::product(&groups, options, 0, &mut acc, &mut self.flat, &mut self.keys);
        // cross-group duplicates are rare and harmless downstream (labeling
        // is idempotent), so dedup only when it pays for itself
        if self.keys.len() > 64 {
            self.keys.sort_unstable();
            self.keys.dedup_by_key(|&mut (key, _)| key);
        }
    }

    fn product(
        groups: &[(usize, usize)],
        options: &[Vec<usize>],
        gi: usize,
        acc: &mut Vec<u16>,
        flat: &mut Vec<u16>,
        keys: &mut Vec<(u128, u32)>,
    ) {
        if gi == groups.len() {
            let off = flat.len() as u32;
            flat.extend_from_slice(acc);
            let slice = flat.len() - acc.len();
            flat[slice..].sort_unstable();
            let mut key = 0u128;
            for &c in &flat[slice..] {
                key = key << 14 | c as u128; // 14 bits per id covers every cap-feasible k
            }
            keys.push((key, off));
            return;
        }
        let (v, count) = groups[gi];
        let opts = &options[v];
        let mut pick = vec![0usize; count];
        loop {
            let before = acc.len();
            acc.extend(pick.iter().map(|&i| opts[i] as u16));
            Self::product(groups, options, gi + 1, acc, flat, keys);
            acc.truncate(before);
            // next non-decreasing index tuple
            let mut pos = count;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                pick[pos] += 1;
                if pick[pos] < opts.len() {
                    for later in pos + 1..count {
                        pick[later] = pick[pos];
                    }
                    break;
                }
            }
        }
    }
}

/// Decides whether k cops win on a connected graph.
pub fn cop_win(g: &Graph, k: usize, cap: usize) -> Result<(bool, SolveTable), SolverError> {
    let table = solve(g, k, cap)?;
    let win = table.cop_win();
    Ok((win, table))
}

/// Cop number of an arbitrary graph: the maximum over connected components
/// of the least k that wins.
pub fn cop_number(g: &Graph, cap: usize) -> Result<usize, SolverError> {
    Ok(cop_number_detail(g, cap)?.0)
}

/// Cop number plus the per-component values (components listed by least
/// vertex; each entry is that component's vertex list and its cop number).
pub fn cop_number_detail(g: &Graph, cap: usize) -> Result<(usize, Vec<(Vec<usize>, usize)>), SolverError> {
    let mut per = Vec::new();
    let mut best = 0;
    for comp in g.components() {
        let (sub, _) = g.induced(&comp);
        let mut k = 1;
        let value = loop {
            match cop_win(&sub, k, cap) {
                Ok((true, _)) => break k,
                Ok((false, _)) => k += 1,
                Err(e) => {
                    return Err(SolverError::Component { vertex: comp[0], source: Box::new(e) })
                }
            }
        };
        best = best.max(value);
        per.push((comp, value));
    }
    Ok((best, per))
}

/// Cop-win (one-cop) characterization by dismantling: repeatedly delete a
/// dominated vertex; cop number 1 iff a single vertex remains.
pub fn is_cop_win_dismantlable(g: &Graph) -> bool {
    dismantling_order(g).is_some()
}

/// The deletion order if the graph dismantles to one vertex, least dominated
/// vertex first.
pub fn dismantling_order(g: &Graph) -> Option<Vec<usize>> {
    let mut alive: Vec<usize> = g.vertices().collect();
    let mut order = Vec::new();
    while alive.len() > 1 {
        let dominated = alive.iter().copied().find(|&v| {
            alive
                .iter()
                .any(|&u| u != v && closed_neighborhood_subset(g, &alive, v, u))
        });
        match dominated {
            Some(v) => {
                alive.retain(|&w| w != v);
                order.push(v);
            }
            None => return None,
        }
    }
    order.extend(alive);
    Some(order)
}

fn closed_neighborhood_subset(g: &Graph, alive: &[usize], v: usize, u: usize) -> bool {
    // N[v] subseteq N[u] restricted to alive vertices
    for &w in alive {
        let in_nv = w == v || g.has_edge(v, w);
        if !in_nv {
            continue;
        }
        let in_nu = w == u || g.has_edge(u, w);
        if !in_nu {
            return false;
        }
    }
    true
}

/// Solver-extracted optimal cop play: placement from the winning multiset
/// when one exists, every move descending the rank, ties broken by the
/// lexicographically least destination multiset.
pub struct OptimalCopStrategy {
    table: Arc<SolveTable>,
    require_win: bool,
}

impl OptimalCopStrategy {
    pub fn new(table: Arc<SolveTable>) -> Self {
        OptimalCopStrategy { table, require_win: false }
    }

    /// Variant whose placement call fails loudly when the start is a robber
    /// win instead of falling back to a best-effort placement.
    pub fn requiring_win(table: Arc<SolveTable>) -> Self {
        OptimalCopStrategy { table, require_win: true }
    }

    /// Explicit signal: the winning placement, or an error naming the k.
    pub fn winning_placement(&self) -> Result<Vec<usize>, StrategyError> {
        self.table.winning_placement().ok_or_else(|| {
            StrategyError::new(format!("no winning strategy with {} cops", self.table.k()))
        })
    }
}

impl CopStrategy for OptimalCopStrategy {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn place(&mut self, _g: &Graph, k: usize) -> Result<Vec<usize>, StrategyError> {
        debug_assert_eq!(k, self.table.k());
        match self.table.winning_placement() {
            Some(p) => Ok(p),
            None if self.require_win => Err(StrategyError::new(format!(
                "no winning strategy with {k} cops"
            ))),
            None => Ok(vec![0; k]),
        }
    }

    fn decide(&mut self, _g: &Graph, state: &GameState, _history: &Trace)
        -> Result<Vec<usize>, StrategyError> {
        let r = state.robber.expect("robber placed");
        Ok(self.table.best_cop_move(&state.cops, r))
    }
}

impl JointMoveScratch {
    /// Enumerates joint moves with a per-cop destination realization; the
    /// callback sees (sorted destination multiset, destinations aligned with
    /// the sorted cop order).
    fn enumerate_assigned(
        &mut self,
        options: &[Vec<usize>],
        cops_sorted: &[u16],
        mut f: impl FnMut(&[u16], &[usize]),
    ) {
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for &c in cops_sorted {
            match groups.last_mut() {
                Some((v, cnt)) if *v == c as usize => *cnt += 1,
                _ => groups.push((c as usize, 1)),
            }
        }
        let mut acc: Vec<usize> = Vec::with_capacity(cops_sorted.len());
        let mut sorted_buf: Vec<u16> = Vec::with_capacity(cops_sorted.len());
        Self::product_assigned(&groups, options, 0, &mut acc, &mut sorted_buf, &mut f);
    }

    fn product_assigned(
        groups: &[(usize, usize)],
        options: &[Vec<usize>],
        gi: usize,
        acc: &mut Vec<usize>,
        sorted_buf: &mut Vec<u16>,
        f: &mut impl FnMut(&[u16], &[usize]),
    ) {
        if gi == groups.len() {
            sorted_buf.clear();
            sorted_buf.extend(acc.iter().map(|&d| d as u16));
            sorted_buf.sort_unstable();
            f(sorted_buf, acc);
            return;
        }
        let (v, count) = groups[gi];
        let opts = &options[v];
        let mut pick = vec![0usize; count];
        loop {
            let before = acc.len();
            acc.extend(pick.iter().map(|&i| opts[i]));
            Self::product_assigned(groups, options, gi + 1, acc, sorted_buf, f);
            acc.truncate(before);
            let mut pos = count;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                pick[pos] += 1;
                if pick[pos] < opts.len() {
                    for later in pos + 1..count {
                        pick[later] = pick[pos];
                    }
                    break;
                }
            }
        }
    }
}

/// Solver-extracted optimal robber play: stay in robber-win states forever
/// when any exist, otherwise maximize the capture rank; ties to the least
/// vertex.
pub struct OptimalRobberStrategy {
    table: Arc<SolveTable>,
}

impl OptimalRobberStrategy {
    pub fn new(table: Arc<SolveTable>) -> Self {
        OptimalRobberStrategy { table }
    }

    /// Candidates come sorted ascending, so the first find breaks ties.
    fn pick(&self, cops_sorted: &[usize], candidates: &[usize]) -> usize {
        let mut best: Option<(u32, usize)> = None; // highest capture rank so far
        for &r in candidates {
            match self.table.state_rank(cops_sorted, r, ToMove::Cops) {
                None => return r, // a robber-win state; stay in the win region
                Some(d) => {
                    if best.is_none_or(|(bd, _)| d > bd) {
                        best = Some((d, r));
                    }
                }
            }
        }
        best.expect("candidate list is non-empty").1
    }
}

impl RobberStrategy for OptimalRobberStrategy {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn place(&mut self, g: &Graph, cops: &[usize]) -> Result<usize, StrategyError> {
        let mut sorted = cops.to_vec();
        sorted.sort_unstable();
        let free: Vec<usize> = g.vertices().filter(|v| !sorted.contains(v)).collect();
        if free.is_empty() {
            return Ok(0); // every vertex is occupied: capture at placement
        }
        Ok(self.pick(&sorted, &free))
    }

    fn decide(&mut self, g: &Graph, state: &GameState, _history: &Trace)
        -> Result<usize, StrategyError> {
        let r = state.robber.expect("robber placed");
        let sorted = state.sorted_cops();
        Ok(self.pick(&sorted, &move_options(g, r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{default_horizon, play, Outcome};
    use crate::graph::generate;

    /// Independent oracle: naive full-sweep value iteration over explicit
    /// states until the cop-win set stabilizes. No work queue, no ranks; a
    /// different algorithm from the production retrograde pass.
    fn oracle_cop_win(g: &Graph, k: usize) -> bool {
        use std::collections::HashSet;
        let n = g.n();
        let mut multisets: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..k {
            multisets = multisets
                .into_iter()
                .flat_map(|t| {
                    let lo = t.last().copied().unwrap_or(0);
                    (lo..n).map(move |v| {
                        let mut t2 = t.clone();
                        t2.push(v);
                        t2
                    })
                })
                .collect();
        }
        let mut win: HashSet<(Vec<usize>, usize, bool)> = HashSet::new();
        loop {
            let mut changed = false;
            for c in &multisets {
                for r in 0..n {
                    if c.contains(&r) {
                        continue;
                    }
                    for cops_move in [true, false] {
                        if win.contains(&(c.clone(), r, cops_move)) {
                            continue;
                        }
                        let new = if cops_move {
                            joint_multisets(g, c).into_iter().any(|c2| {
                                c2.contains(&r) || win.contains(&(c2, r, false))
                            })
                        } else {
                            move_options(g, r).into_iter().all(|r2| {
                                c.contains(&r2) || win.contains(&(c.clone(), r2, true))
                            })
                        };
                        if new {
                            win.insert((c.clone(), r, cops_move));
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        multisets
            .iter()
            .any(|c| (0..n).all(|r| c.contains(&r) || win.contains(&(c.clone(), r, true))))
    }

    fn joint_multisets(g: &Graph, t: &[usize]) -> Vec<Vec<usize>> {
        let mut acc = vec![vec![]];
        for &c in t {
            let opts = move_options(g, c);
            acc = acc
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    opts.iter().map(move |&o| {
                        let mut p2 = p.clone();
                        p2.push(o);
                        p2
                    })
                })
                .collect();
        }
        let mut out: Vec<Vec<usize>> = acc
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn trees_are_one_cop_win() {
        for g in [generate::path(6).unwrap(), generate::spider(&[2, 3, 1]).unwrap()] {
            assert!(cop_win(&g, 1, DEFAULT_STATE_CAP).unwrap().0);
            assert!(is_cop_win_dismantlable(&g));
        }
    }

    #[test]
    fn c4_needs_two_cops() {
        let g = generate::cycle(4).unwrap();
        assert!(!cop_win(&g, 1, DEFAULT_STATE_CAP).unwrap().0);
        assert!(cop_win(&g, 2, DEFAULT_STATE_CAP).unwrap().0);
        assert!(!is_cop_win_dismantlable(&g));
    }

    #[test]
    fn petersen_cop_number_is_3() {
        let g = generate::petersen();
        assert!(!cop_win(&g, 2, DEFAULT_STATE_CAP).unwrap().0);
        assert!(cop_win(&g, 3, DEFAULT_STATE_CAP).unwrap().0);
        assert_eq!(cop_number(&g, DEFAULT_STATE_CAP).unwrap(), 3);
    }

    #[test]
    fn disconnected_component_maximum() {
        let g = generate::disjoint_union(&generate::petersen(), &generate::complete(6).unwrap());
        let (value, detail) = cop_number_detail(&g, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(value, 3);
        assert_eq!(detail.len(), 2);
        assert_eq!(detail[0].1, 3);
        assert_eq!(detail[1].1, 1);
        assert_eq!(cop_number(&generate::cycle(5).unwrap(), DEFAULT_STATE_CAP).unwrap(), 2);
    }

    #[test]
    fn solver_matches_oracle_on_small_graphs() {
        for seed in 0..25u64 {
            let g = generate::gnp(5, 0.45, seed).unwrap();
            if !g.is_connected() {
                continue;
            }
            for k in 1..=2 {
                assert_eq!(
                    cop_win(&g, k, DEFAULT_STATE_CAP).unwrap().0,
                    oracle_cop_win(&g, k),
                    "seed {seed} k {k}"
                );
            }
        }
    }

    #[test]
    fn dismantlable_agrees_with_one_cop_win() {
        for seed in 0..40u64 {
            let g = generate::gnp(6, 0.4, seed).unwrap();
            if !g.is_connected() {
                continue;
            }
            assert_eq!(
                is_cop_win_dismantlable(&g),
                cop_win(&g, 1, DEFAULT_STATE_CAP).unwrap().0,
                "seed {seed}"
            );
        }
        assert!(is_cop_win_dismantlable(&generate::complete(5).unwrap()));
    }

    #[test]
    fn monotone_in_k() {
        for seed in 0..15u64 {
            let g = generate::gnp(6, 0.35, seed).unwrap();
            if !g.is_connected() {
                continue;
            }
            let mut prev = false;
            for k in 1..=3 {
                let win = cop_win(&g, k, DEFAULT_STATE_CAP).unwrap().0;
                assert!(!prev || win, "seed {seed}: cop-win lost by adding a cop");
                prev = win;
            }
        }
    }

    #[test]
    fn extracted_cop_strategy_captures_within_rank() {
        let g = generate::cycle(4).unwrap();
        let table = Arc::new(solve(&g, 2, DEFAULT_STATE_CAP).unwrap());
        let mut cop = OptimalCopStrategy::new(table.clone());
        let mut robber = OptimalRobberStrategy::new(table.clone());
        let trace = play(&g, 2, &mut cop, &mut robber, default_horizon(&g, 2)).unwrap();
        match trace.outcome {
            Outcome::Captured { round } => {
                let placement = table.winning_placement().unwrap();
                let start_rank = (0..g.n())
                    .filter(|r| !placement.contains(r))
                    .filter_map(|r| table.state_rank(&placement, r, ToMove::Cops))
                    .max()
                    .unwrap();
                assert!(2 * round <= start_rank as usize + 1, "capture slower than rank bound");
            }
            other => panic!("expected capture, got {other:?}"),
        }
    }

    #[test]
    fn extracted_robber_survives_when_k_too_small() {
        let g = generate::cycle(4).unwrap();
        let table = Arc::new(solve(&g, 1, DEFAULT_STATE_CAP).unwrap());
        assert!(!table.cop_win());
        let mut cop = OptimalCopStrategy::new(table.clone());
        let mut robber = OptimalRobberStrategy::new(table.clone());
        let horizon = default_horizon(&g, 1);
        let trace = play(&g, 1, &mut cop, &mut robber, horizon).unwrap();
        assert_eq!(trace.outcome, Outcome::Survived { horizon });
    }

    #[test]
    fn p3_capture_in_at_most_two_rounds() {
        let g = generate::path(3).unwrap();
        let table = Arc::new(solve(&g, 1, DEFAULT_STATE_CAP).unwrap());
        let mut cop = OptimalCopStrategy::new(table.clone());
        let mut robber = OptimalRobberStrategy::new(table.clone());
        let trace = play(&g, 1, &mut cop, &mut robber, 50).unwrap();
        assert!(matches!(trace.outcome, Outcome::Captured { round } if round <= 2));
    }

    #[test]
    fn state_cap_is_enforced() {
        let g = generate::petersen();
        assert!(matches!(
            solve(&g, 3, 100),
            Err(SolverError::StateCapExceeded { .. })
        ));
    }

    #[test]
    fn multiset_index_round_trips() {
        let idx = MultisetIndex::new(7, 3);
        assert_eq!(idx.count(), 84); // C(9,3)
        for rank in 0..idx.count() {
            let ms: Vec<usize> = idx.get(rank).iter().map(|&v| v as usize).collect();
            assert!(ms.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(idx.rank(&ms), rank);
        }
    }
}
