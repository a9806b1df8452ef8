//! The falsification harness: seeded corpora plus checks that pit every
//! bound, lemma, and constructive strategy against the exact solver.
//!
//! Corpora are pure functions of their spec: all connected graphs up to six
//! vertices (one representative per isomorphism class), a seeded G(n,p) grid,
//! and the named fixed graphs. Skipped instances (size caps) are counted as
//! skipped, never as passed, and every check reports how many instances
//! actually satisfied its hypothesis.

use serde::{Deserialize, Serialize};

use crate::engine::{default_horizon, play, CopStrategy, StrategyEvent, Trace};
use crate::graph::metrics::{self, CycleLen};
use crate::graph::pattern::contains_forest_subgraph;
use crate::graph::{generate, Graph};
use crate::solver::{self, OptimalRobberStrategy};
use crate::strategy::{
    bipartite_lead_cop, induced_cycle_strategy, lead_cop_strategy, named_pattern, Caps,
    SubdivisionPlusOne, ForbiddenForestStrategy, TreeDecompStrategy,
};
use crate::transform::{clique_substitution, hat_construction, subdivide};
use crate::treewidth::exact_treewidth;

use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub seed: u64,
    /// Exhaustive connected graphs up to this many vertices, one per
    /// isomorphism class.
    pub exhaustive_max_n: usize,
    pub gnp_sizes: Vec<usize>,
    pub gnp_ps: Vec<f64>,
    pub include_named: bool,
    /// Subdivision depths exercised by the monotonicity checks.
    pub subdivision_rs: Vec<usize>,
    pub caps: Caps,
    pub threads: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 0xC0B5,
            exhaustive_max_n: 6,
            gnp_sizes: vec![7, 8, 9, 10],
            gnp_ps: vec![0.2, 0.4, 0.6],
            include_named: true,
            subdivision_rs: vec![1, 2, 3],
            caps: Caps::default(),
            threads: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusInstance {
    pub id: String,
    pub graph: Graph,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Failure {
    pub instance: String,
    pub detail: String,
    pub witness_edges: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    /// Instances that satisfied the check's hypothesis.
    pub checked: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport { name: name.into(), checked: 0, passed: 0, skipped: 0, failures: Vec::new() }
    }

    fn pass(&mut self) {
        self.checked += 1;
        self.passed += 1;
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }

    fn fail(&mut self, instance: &str, detail: String, witness: &Graph) {
        self.checked += 1;
        self.failures.push(Failure {
            instance: instance.to_string(),
            detail,
            witness_edges: witness.render(),
        });
    }

    fn merge(&mut self, other: CheckReport) {
        debug_assert_eq!(self.name, other.name);
        self.checked += other.checked;
        self.passed += other.passed;
        self.skipped += other.skipped;
        self.failures.extend(other.failures);
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub seed: u64,
    pub corpus_size: usize,
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(CheckReport::ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "seed {}  corpus {} instances\n{:<34} {:>8} {:>8} {:>8} {:>8}\n",
            self.seed, self.corpus_size, "check", "checked", "passed", "failed", "skipped"
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "{:<34} {:>8} {:>8} {:>8} {:>8}\n",
                c.name,
                c.checked,
                c.passed,
                c.failures.len(),
                c.skipped
            ));
        }
        for c in &self.checks {
            for f in &c.failures {
                out.push_str(&format!(
                    "FAIL {} on {}: {}\nwitness:\n{}",
                    c.name, f.instance, f.detail, f.witness_edges
                ));
            }
        }
        out
    }
}

// --- corpus construction ---

/// One representative per isomorphism class of the connected graphs on
/// exactly `n` vertices (n <= 7 is practical). Deterministic: the
/// lexicographically least labeled representative is kept. Cached per n.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    static CACHE: std::sync::OnceLock<std::sync::Mutex<std::collections::HashMap<usize, Vec<Graph>>>> =
        std::sync::OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let reps = enumerate_connected_up_to_iso(n);
    cache.lock().unwrap().insert(n, reps.clone());
    reps
}

fn enumerate_connected_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(n >= 1 && n <= 7, "exhaustive enumeration is desk-scale only");
    if n == 1 {
        return vec![Graph::new(1, &[]).unwrap()];
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut reps = Vec::new();
    'mask: for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|&(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e).collect();
        if edges.len() < n - 1 {
            continue;
        }
        let g = Graph::new(n, &edges).unwrap();
        if !g.is_connected() {
            continue;
        }
        // keep only the lexicographically least relabeling of itself
        for perm in &perms {
            let mut relabeled: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
                .collect();
            relabeled.sort_unstable();
            if relabeled.as_slice() < g.edges() {
                continue 'mask;
            }
        }
        reps.push(g);
    }
    reps
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut arr: Vec<usize> = (0..n).collect();
    fn go(arr: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == arr.len() {
            out.push(arr.clone());
            return;
        }
        for j in i..arr.len() {
            arr.swap(i, j);
            go(arr, i + 1, out);
            arr.swap(i, j);
        }
    }
    go(&mut arr, 0, &mut out);
    out
}

fn named_graphs() -> Vec<(String, Graph)> {
    let mut named: Vec<(String, Graph)> = vec![
        ("path-5".into(), generate::path(5).unwrap()),
        ("path-10".into(), generate::path(10).unwrap()),
        ("cycle-4".into(), generate::cycle(4).unwrap()),
        ("cycle-5".into(), generate::cycle(5).unwrap()),
        ("cycle-6".into(), generate::cycle(6).unwrap()),
        ("cycle-10".into(), generate::cycle(10).unwrap()),
        ("complete-4".into(), generate::complete(4).unwrap()),
        ("complete-6".into(), generate::complete(6).unwrap()),
        ("k33".into(), generate::complete_bipartite(3, 3).unwrap()),
        ("star-5".into(), generate::star(5).unwrap()),
        ("spider-2-2-2".into(), generate::spider(&[2, 2, 2]).unwrap()),
        ("petersen".into(), generate::petersen()),
    ];
    named.push((
        "petersen+k6".into(),
        generate::disjoint_union(&generate::petersen(), &generate::complete(6).unwrap()),
    ));
    named
}

/// The corpus as a pure function of the spec.
pub fn build_corpus(spec: &CorpusSpec) -> Vec<CorpusInstance> {
    let mut instances = Vec::new();
    for n in 1..=spec.exhaustive_max_n {
        for (i, g) in connected_graphs_up_to_iso(n).into_iter().enumerate() {
            instances.push(CorpusInstance { id: format!("conn{n}-{i:03}"), graph: g });
        }
    }
    for &n in &spec.gnp_sizes {
        for &p in &spec.gnp_ps {
            let stream = spec.seed
                ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
                ^ ((p * 1000.0) as u64).wrapping_mul(0x1234_5678_9abc_def1);
            let g = generate::gnp(n, p, stream).unwrap();
            instances.push(CorpusInstance { id: format!("gnp-{n}-{p}"), graph: g });
        }
    }
    if spec.include_named {
        for (id, g) in named_graphs() {
            instances.push(CorpusInstance { id, graph: g });
        }
    }
    instances
}

/// The largest connected piece, for strategy checks on disconnected draws.
fn largest_component(g: &Graph) -> Graph {
    let comp = g
        .components()
        .into_iter()
        .max_by_key(|c| (c.len(), std::cmp::Reverse(c[0])))
        .expect("non-empty graph");
    g.induced(&comp).0
}

// --- deterministic parallel map ---

fn map_instances<R: Send>(
    instances: &[CorpusInstance],
    threads: usize,
    f: impl Fn(&CorpusInstance) -> R + Sync,
) -> Vec<R> {
    if threads <= 1 || instances.len() <= 1 {
        return instances.iter().map(f).collect();
    }
    let mut slots: Vec<Option<R>> = Vec::with_capacity(instances.len());
    slots.resize_with(instances.len(), || None);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots_mutex = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(instances.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= instances.len() {
                    break;
                }
                let r = f(&instances[i]);
                slots_mutex.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every slot filled")).collect()
}

fn merge_reports(mut reports: Vec<Vec<CheckReport>>) -> Vec<CheckReport> {
    let mut merged: Vec<CheckReport> = Vec::new();
    for batch in reports.drain(..) {
        for check in batch {
            match merged.iter_mut().find(|c| c.name == check.name) {
                Some(existing) => existing.merge(check),
                None => merged.push(check),
            }
        }
    }
    merged
}

/// Greedy edge-then-vertex deletion preserving the failure predicate.
fn minimize_witness(g: &Graph, fails: &dyn Fn(&Graph) -> bool) -> Graph {
    let mut cur = g.clone();
    if cur.n() > 10 {
        return cur; // minimization replays are only cheap at desk scale
    }
    'outer: loop {
        for i in 0..cur.m() {
            let edges: Vec<(usize, usize)> = cur
                .edges()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &e)| e)
                .collect();
            let smaller = Graph::new(cur.n(), &edges).unwrap();
            if fails(&smaller) {
                cur = smaller;
                continue 'outer;
            }
        }
        for v in 0..cur.n() {
            let keep: Vec<usize> = cur.vertices().filter(|&w| w != v).collect();
            let (smaller, _) = cur.induced(&keep);
            if smaller.n() > 0 && fails(&smaller) {
                cur = smaller;
                continue 'outer;
            }
        }
        return cur;
    }
}

// --- bound checks ---

struct InstanceFacts {
    cop: Option<usize>,
    tw: Option<usize>,
    girth_circ: Option<(CycleLen, CycleLen)>,
}

fn gather_facts(g: &Graph, caps: Caps) -> InstanceFacts {
    let cop = solver::cop_number(g, caps.state_cap).ok();
    let tw = exact_treewidth(g, caps.treewidth_cap).ok().map(|(w, _)| w);
    let girth_circ = metrics::metrics_with_cap(g, caps.metrics_cap)
        .ok()
        .map(|m| (m.girth, m.circumference));
    InstanceFacts { cop, tw, girth_circ }
}

/// Treewidth, circumference, and forbidden-subgraph cop-number bounds.
pub fn check_bounds(spec: &CorpusSpec) -> VerificationReport {
    let corpus = build_corpus(spec);
    let caps = spec.caps;
    let per_instance = map_instances(&corpus, spec.threads, |inst| {
        let g = &inst.graph;
        let mut half_tw = CheckReport::new("cop-le-half-treewidth");
        let mut circ_cop = CheckReport::new("cop-le-half-circumference");
        let mut circ_tw = CheckReport::new("treewidth-lt-circumference");
        let mut path_bound = CheckReport::new("path-free-bound");
        let mut cycle_bound = CheckReport::new("cycle-free-bound");
        let mut bip = CheckReport::new("bipartite-path-free-bound");
        let facts = gather_facts(g, caps);

        match (facts.cop, facts.tw) {
            (Some(cop), Some(tw)) => {
                if cop <= tw / 2 + 1 {
                    half_tw.pass();
                } else {
                    let fails = |h: &Graph| match (
                        solver::cop_number(h, caps.state_cap),
                        exact_treewidth(h, caps.treewidth_cap),
                    ) {
                        (Ok(c), Ok((w, _))) => c > w / 2 + 1,
                        _ => false,
                    };
                    let witness = minimize_witness(g, &fails);
                    half_tw.fail(&inst.id, format!("cop {cop} > {}/2 + 1 (tw {tw})", tw), &witness);
                }
            }
            _ => half_tw.skip(),
        }

        match facts.girth_circ {
            Some((_, CycleLen::Finite(circ))) => {
                match facts.cop {
                    Some(cop) => {
                        if 2 * cop <= circ {
                            circ_cop.pass();
                        } else {
                            circ_cop.fail(&inst.id, format!("2 * cop {cop} > circumference {circ}"), g);
                        }
                    }
                    None => circ_cop.skip(),
                }
                match facts.tw {
                    Some(tw) => {
                        if tw <= circ - 1 {
                            circ_tw.pass();
                        } else {
                            circ_tw.fail(&inst.id, format!("tw {tw} > circumference {circ} - 1"), g);
                        }
                    }
                    None => circ_tw.skip(),
                }
            }
            Some((_, CycleLen::Infinite)) => {} // forests: hypothesis not satisfied
            None => {
                circ_cop.skip();
                circ_tw.skip();
            }
        }

        match facts.cop {
            Some(cop) => {
                for ell in 3..=8usize {
                    match metrics::is_p_free(g, ell, caps.metrics_cap) {
                        Ok(true) => {
                            if cop <= (ell - 2).max(1) {
                                path_bound.pass();
                            } else {
                                path_bound.fail(
                                    &inst.id,
                                    format!("P_{ell}-free but cop {cop} > {}", ell - 2),
                                    g,
                                );
                            }
                        }
                        Ok(false) => {}
                        Err(_) => path_bound.skip(),
                    }
                    match metrics::has_induced_cycle_at_least(g, ell, caps.metrics_cap) {
                        Ok(false) => {
                            if cop <= (ell - 2).max(1) {
                                cycle_bound.pass();
                            } else {
                                cycle_bound.fail(
                                    &inst.id,
                                    format!("no induced cycle >= {ell} but cop {cop} > {}", ell - 2),
                                    g,
                                );
                            }
                        }
                        Ok(true) => {}
                        Err(_) => cycle_bound.skip(),
                    }
                }
                if g.is_bipartite() {
                    for ell in 1..=4usize {
                        match metrics::is_p_free(g, 2 * ell, caps.metrics_cap) {
                            Ok(true) => {
                                if cop <= ell {
                                    bip.pass();
                                } else {
                                    bip.fail(
                                        &inst.id,
                                        format!("bipartite P_{}-free but cop {cop} > {ell}", 2 * ell),
                                        g,
                                    );
                                }
                            }
                            Ok(false) => {}
                            Err(_) => bip.skip(),
                        }
                    }
                }
            }
            None => {
                path_bound.skip();
                cycle_bound.skip();
                bip.skip();
            }
        }

        vec![half_tw, circ_cop, circ_tw, path_bound, cycle_bound, bip]
    });
    VerificationReport {
        seed: spec.seed,
        corpus_size: corpus.len(),
        checks: merge_reports(per_instance),
    }
}

// --- transform monotonicity checks ---

pub fn check_transform_monotonicity(spec: &CorpusSpec) -> VerificationReport {
    let corpus = build_corpus(spec);
    let caps = spec.caps;
    let small: Vec<CorpusInstance> = corpus
        .iter()
        .filter(|inst| inst.graph.n() <= 6 && inst.graph.is_connected())
        .cloned()
        .collect();
    let rs = spec.subdivision_rs.clone();
    let per_instance = map_instances(&small, spec.threads, |inst| {
        let g = &inst.graph;
        let mut clique_mono = CheckReport::new("clique-substitution-monotone");
        let mut sub_lower = CheckReport::new("subdivision-lower-bound");
        let mut sub_upper = CheckReport::new("subdivision-upper-bound");
        let mut hat = CheckReport::new("hat-equality");
        let cop = match solver::cop_number(g, caps.state_cap) {
            Ok(c) => c,
            Err(_) => {
                clique_mono.skip();
                sub_lower.skip();
                sub_upper.skip();
                hat.skip();
                return vec![clique_mono, sub_lower, sub_upper, hat];
            }
        };

        if g.vertices().all(|v| g.degree(v) > 0) {
            match clique_substitution(g) {
                Ok(t) => match solver::cop_number(&t.output, caps.state_cap) {
                    Ok(plus) => {
                        if plus >= cop {
                            clique_mono.pass();
                        } else {
                            clique_mono.fail(&inst.id, format!("cop(G+) = {plus} < cop(G) = {cop}"), g);
                        }
                    }
                    Err(_) => clique_mono.skip(),
                },
                Err(_) => clique_mono.skip(),
            }
        }

        for &r in &rs {
            let sub = subdivide(g, r).expect("subdivision").output;
            match solver::cop_number(&sub, caps.state_cap) {
                Ok(s) => {
                    if s >= cop {
                        sub_lower.pass();
                    } else {
                        sub_lower.fail(&inst.id, format!("cop(subdivide(G,{r})) = {s} < {cop}"), g);
                    }
                    if s <= cop + 1 {
                        sub_upper.pass();
                    } else {
                        sub_upper.fail(&inst.id, format!("cop(subdivide(G,{r})) = {s} > {cop} + 1"), g);
                    }
                }
                Err(_) => {
                    sub_lower.skip();
                    sub_upper.skip();
                }
            }
        }

        if g.n() <= 5 && cop >= 2 {
            let t = hat_construction(g).expect("hat construction");
            match solver::cop_number(&t.output, caps.state_cap) {
                Ok(h) => {
                    if h == cop {
                        hat.pass();
                    } else {
                        hat.fail(&inst.id, format!("cop(hat(G)) = {h} != cop(G) = {cop}"), g);
                    }
                }
                Err(_) => hat.skip(),
            }
        }

        vec![clique_mono, sub_lower, sub_upper, hat]
    });
    VerificationReport {
        seed: spec.seed,
        corpus_size: small.len(),
        checks: merge_reports(per_instance),
    }
}

// --- strategy checks ---

/// Solve tables for one graph, memoized per cop count; the optimal-robber
/// opponents of several strategy checks share them.
struct TableCache<'g> {
    g: &'g Graph,
    caps: Caps,
    tables: std::collections::HashMap<usize, Option<Arc<solver::SolveTable>>>,
}

impl<'g> TableCache<'g> {
    fn new(g: &'g Graph, caps: Caps) -> Self {
        TableCache { g, caps, tables: Default::default() }
    }

    fn get(&mut self, k: usize) -> Option<Arc<solver::SolveTable>> {
        self.tables
            .entry(k)
            .or_insert_with(|| solver::solve(self.g, k, self.caps.state_cap).ok().map(Arc::new))
            .clone()
    }
}

fn run_capture(
    report: &mut CheckReport,
    instance: &str,
    cache: &mut TableCache<'_>,
    k: usize,
    cop: &mut dyn crate::engine::CopStrategy,
    refail: Option<&dyn Fn(&Graph) -> bool>,
) -> Option<(Trace, Vec<StrategyEvent>)> {
    let g = cache.g;
    let mut robber = match cache.get(k) {
        Some(table) => OptimalRobberStrategy::new(table),
        None => {
            report.skip();
            return None;
        }
    };
    let horizon = default_horizon(g, k);
    match play(g, k, cop, &mut robber, horizon) {
        Ok(trace) if trace.captured() => Some((trace, cop.events())),
        Ok(trace) => {
            let witness = match refail {
                Some(f) => minimize_witness(g, f),
                None => g.clone(),
            };
            report.fail(instance, format!("no capture with {k} cops: {:?}", trace.outcome), &witness);
            None
        }
        Err(e) => {
            report.fail(instance, format!("engine refused the match: {e}"), g);
            None
        }
    }
}

/// Re-runs a freshly built strategy against a fresh optimal robber; the
/// witness minimizer uses this to confirm a failure persists on subgraphs.
fn strategy_fails(
    g: &Graph,
    k: usize,
    caps: Caps,
    make: &dyn Fn() -> Box<dyn crate::engine::CopStrategy>,
) -> bool {
    let table = match solver::solve(g, k, caps.state_cap) {
        Ok(t) => Arc::new(t),
        Err(_) => return false,
    };
    let mut robber = OptimalRobberStrategy::new(table);
    let mut cop = make();
    match play(g, k, cop.as_mut(), &mut robber, default_horizon(g, k)) {
        Ok(trace) => !trace.captured(),
        Err(_) => false,
    }
}

fn audit_lead_events(report: &mut CheckReport, instance: &str, g: &Graph, ell: usize, events: &[StrategyEvent]) {
    let mut last_start: Option<usize> = None;
    for e in events {
        match e {
            StrategyEvent::StageStarted { distance, .. } => last_start = Some(*distance),
            StrategyEvent::StageEnded { lead_moves_after_reach: Some(moves), .. } => {
                if let Some(d) = last_start {
                    if *moves > ell.saturating_sub(d + 1) {
                        report.fail(
                            instance,
                            format!(
                                "stage with start distance {d} took {moves} lead moves after reach (> {})",
                                ell.saturating_sub(d + 1)
                            ),
                            g,
                        );
                        return;
                    }
                }
            }
            StrategyEvent::Falsification { detail, .. } => {
                report.fail(instance, format!("falsification event: {detail}"), g);
                return;
            }
            _ => {}
        }
    }
    report.pass();
}

fn audit_bag_events(
    report: &mut CheckReport,
    instance: &str,
    g: &Graph,
    decomp_bags: &[Vec<usize>],
    trace: &Trace,
    events: &[StrategyEvent],
) {
    // robber must stay off the established bag, and off the bag intersection
    // across an advance, for the whole window in which that constraint holds
    let robber_at = |round: usize| -> Option<usize> {
        trace.rounds.get(round.checked_sub(1)?).and_then(|r| r.robber)
    };
    let mut windows: Vec<(usize, usize, Vec<usize>)> = Vec::new(); // [from_round, to_round), forbidden
    let mut open_established: Option<(usize, usize)> = None; // (round, node)
    let mut open_advance: Option<(usize, Vec<usize>)> = None;
    let final_round = trace.rounds.len() + 1;
    for e in events {
        match e {
            StrategyEvent::BagEstablished { round, node } => {
                if let Some((a_round, common)) = open_advance.take() {
                    windows.push((a_round, *round, common));
                }
                open_established = Some((*round, *node));
            }
            StrategyEvent::BagAdvanced { round, from, to } => {
                if let Some((e_round, node)) = open_established.take() {
                    debug_assert_eq!(node, *from);
                    windows.push((e_round, *round, decomp_bags[node].clone()));
                }
                let common: Vec<usize> = decomp_bags[*from]
                    .iter()
                    .copied()
                    .filter(|v| decomp_bags[*to].contains(v))
                    .collect();
                open_advance = Some((*round, common));
            }
            _ => {}
        }
    }
    if let Some((e_round, node)) = open_established.take() {
        windows.push((e_round, final_round, decomp_bags[node].clone()));
    }
    if let Some((a_round, common)) = open_advance.take() {
        windows.push((a_round, final_round, common));
    }
    // stepping onto a guarded vertex is allowed only as a last act: the
    // robber must be captured by the very next cop move
    let promptly_captured = |round: usize| match trace.outcome {
        crate::engine::Outcome::Captured { round: c } => c == round || c == round + 1,
        _ => false,
    };
    for (from, to, forbidden) in windows {
        for round in from..to {
            if let Some(r) = robber_at(round) {
                if forbidden.contains(&r) && !promptly_captured(round) {
                    report.fail(
                        instance,
                        format!("robber survived on guarded vertex {r} at round {round}"),
                        g,
                    );
                    return;
                }
            }
        }
    }
    report.pass();
}

pub fn check_strategies(spec: &CorpusSpec) -> VerificationReport {
    let corpus = build_corpus(spec);
    let caps = spec.caps;
    let connected: Vec<CorpusInstance> = corpus
        .iter()
        .map(|inst| {
            if inst.graph.is_connected() {
                inst.clone()
            } else {
                CorpusInstance {
                    id: format!("{}-lcc", inst.id),
                    graph: largest_component(&inst.graph),
                }
            }
        })
        .collect();
    let rs: Vec<usize> = spec.subdivision_rs.iter().copied().filter(|&r| r <= 2).collect();
    let per_instance = map_instances(&connected, spec.threads, |inst| {
        let g = &inst.graph;
        let mut cache = TableCache::new(g, caps);
        let mut lead = CheckReport::new("lead-cop-capture");
        let mut cycle_lead = CheckReport::new("induced-cycle-capture");
        let mut bip = CheckReport::new("bipartite-spacing2-capture");
        let mut treedec = CheckReport::new("treedec-capture");
        let mut thm2 = CheckReport::new("pattern-capture");
        let mut subdiv = CheckReport::new("subdivision-capture");
        let mut guard = CheckReport::new("guard-invariant");

        for ell in 3..=8usize {
            if metrics::is_p_free(g, ell, caps.metrics_cap) == Ok(true) {
                let mut cop = lead_cop_strategy(ell, caps);
                let refail = move |h: &Graph| {
                    h.is_connected()
                        && metrics::is_p_free(h, ell, caps.metrics_cap) == Ok(true)
                        && strategy_fails(h, ell - 2, caps, &|| Box::new(lead_cop_strategy(ell, caps)))
                };
                if let Some((_, events)) =
                    run_capture(&mut lead, &inst.id, &mut cache, ell - 2, &mut cop, Some(&refail))
                {
                    audit_lead_events(&mut lead, &inst.id, g, ell, &events);
                }
            }
            if metrics::has_induced_cycle_at_least(g, ell, caps.metrics_cap) == Ok(false) {
                let mut cop = induced_cycle_strategy(ell, caps);
                let refail = move |h: &Graph| {
                    h.is_connected()
                        && metrics::has_induced_cycle_at_least(h, ell, caps.metrics_cap) == Ok(false)
                        && strategy_fails(h, ell - 2, caps, &|| {
                            Box::new(induced_cycle_strategy(ell, caps))
                        })
                };
                if let Some((_, events)) =
                    run_capture(&mut cycle_lead, &inst.id, &mut cache, ell - 2, &mut cop, Some(&refail))
                {
                    audit_lead_events(&mut cycle_lead, &inst.id, g, ell, &events);
                }
            }
        }

        if g.is_bipartite() {
            for ell in 1..=4usize {
                if metrics::is_p_free(g, 2 * ell, caps.metrics_cap) == Ok(true) {
                    let mut cop = bipartite_lead_cop(ell, caps);
                    let refail = move |h: &Graph| {
                        h.is_connected()
                            && h.is_bipartite()
                            && metrics::is_p_free(h, 2 * ell, caps.metrics_cap) == Ok(true)
                            && strategy_fails(h, ell, caps, &|| Box::new(bipartite_lead_cop(ell, caps)))
                    };
                    if run_capture(&mut bip, &inst.id, &mut cache, ell, &mut cop, Some(&refail))
                        .is_some()
                    {
                        bip.pass();
                    }
                }
            }
        }

        match exact_treewidth(g, caps.treewidth_cap) {
            Ok((width, decomposition)) => {
                let bags = decomposition.bags.clone();
                match TreeDecompStrategy::new(g, decomposition) {
                    Ok(mut cop) => {
                        let k = width / 2 + 1;
                        let refail = move |h: &Graph| {
                            if !h.is_connected() {
                                return false;
                            }
                            match exact_treewidth(h, caps.treewidth_cap) {
                                Ok((w, d)) => strategy_fails(h, w / 2 + 1, caps, &|| {
                                    Box::new(TreeDecompStrategy::new(h, d.clone()).expect("exact"))
                                }),
                                Err(_) => false,
                            }
                        };
                        if let Some((trace, events)) =
                            run_capture(&mut treedec, &inst.id, &mut cache, k, &mut cop, Some(&refail))
                        {
                            audit_bag_events(&mut treedec, &inst.id, g, &bags, &trace, &events);
                        }
                    }
                    Err(e) => treedec.fail(&inst.id, e.to_string(), g),
                }
            }
            Err(_) => treedec.skip(),
        }

        for pattern_name in ["claw", "spider-2-2-2", "p2-claw"] {
            let pattern = named_pattern(pattern_name).expect("named patterns exist");
            match contains_forest_subgraph(g, &pattern, caps.metrics_cap) {
                Ok(None) => match ForbiddenForestStrategy::new(pattern.clone(), caps) {
                    Ok(mut cop) => {
                        let k = cop.cop_budget();
                        let refail = {
                            let pattern = pattern.clone();
                            move |h: &Graph| {
                                h.is_connected()
                                    && contains_forest_subgraph(h, &pattern, caps.metrics_cap)
                                        == Ok(None)
                                    && strategy_fails(h, k, caps, &|| {
                                        Box::new(
                                            ForbiddenForestStrategy::new(pattern.clone(), caps)
                                                .expect("validated pattern"),
                                        )
                                    })
                            }
                        };
                        if run_capture(&mut thm2, &inst.id, &mut cache, k, &mut cop, Some(&refail))
                            .is_some()
                        {
                            thm2.pass();
                        }
                    }
                    Err(e) => thm2.fail(&inst.id, e.to_string(), g),
                },
                Ok(Some(_)) => {}
                Err(_) => thm2.skip(),
            }
        }

        if g.n() <= 5 {
            for &r in &rs {
                match SubdivisionPlusOne::new(g, r, caps) {
                    Ok(mut cop) => {
                        let k = cop.cop_budget();
                        let big = subdivide(g, r).expect("subdivision").output;
                        let mut big_cache = TableCache::new(&big, caps);
                        let id = format!("{}-subdiv{r}", inst.id);
                        // minimizing would break the subdivision shape, so
                        // the full subdivided witness is reported as is
                        if run_capture(&mut subdiv, &id, &mut big_cache, k, &mut cop, None).is_some()
                        {
                            subdiv.pass();
                        }
                    }
                    Err(_) => subdiv.skip(),
                }
            }
        }

        // guard invariant: pin the lex-least shortest path between the most
        // distant vertex pair and replay against the optimal robber
        if g.n() >= 3 {
            let mut best: Option<(usize, usize, usize)> = None;
            for u in g.vertices() {
                let dist = g.bfs_distances(u);
                for v in g.vertices() {
                    if let Some(d) = dist[v] {
                        if best.is_none_or(|(bd, _, _)| d > bd) {
                            best = Some((d, u, v));
                        }
                    }
                }
            }
            let (_, u, v) = best.expect("connected graph");
            let path = g.shortest_path(u, v).expect("connected");
            match crate::strategy::SingleGuardCop::new(g, path.clone()) {
                Ok(mut cop) => {
                    let mut robber = match cache.get(1) {
                        Some(table) => OptimalRobberStrategy::new(table),
                        None => {
                            guard.skip();
                            return vec![lead, cycle_lead, bip, treedec, thm2, subdiv, guard];
                        }
                    };
                    let horizon = (4 * g.n() * g.n()).max(64);
                    match play(g, 1, &mut cop, &mut robber, horizon) {
                        Ok(trace) => {
                            let settle = cop.events().into_iter().find_map(|e| match e {
                                StrategyEvent::GuardSettled { round, .. } => Some(round),
                                _ => None,
                            });
                            match settle {
                                Some(round) => {
                                    let promptly_captured = |r: usize| match trace.outcome {
                                        crate::engine::Outcome::Captured { round: c } => {
                                            c == r || c == r + 1
                                        }
                                        _ => false,
                                    };
                                    let violated =
                                        trace.rounds.iter().enumerate().skip(round).any(|(i, rec)| {
                                            rec.robber.is_some_and(|r| path.contains(&r))
                                                && !promptly_captured(i + 1)
                                        });
                                    if violated {
                                        guard.fail(
                                            &inst.id,
                                            "robber survived on a settled guard's path".into(),
                                            g,
                                        );
                                    } else {
                                        guard.pass();
                                    }
                                }
                                None if trace.captured() => guard.pass(),
                                None => guard.fail(&inst.id, "guard never settled".into(), g),
                            }
                        }
                        Err(e) => guard.fail(&inst.id, e.to_string(), g),
                    }
                }
                Err(e) => guard.fail(&inst.id, e.to_string(), g),
            }
        }

        vec![lead, cycle_lead, bip, treedec, thm2, subdiv, guard]
    });
    VerificationReport {
        seed: spec.seed,
        corpus_size: connected.len(),
        checks: merge_reports(per_instance),
    }
}

/// Runs every check and merges the reports.
pub fn run_all(spec: &CorpusSpec) -> VerificationReport {
    let bounds = check_bounds(spec);
    let transforms = check_transform_monotonicity(spec);
    let strategies = check_strategies(spec);
    let corpus_size = bounds.corpus_size;
    let mut checks = bounds.checks;
    checks.extend(transforms.checks);
    checks.extend(strategies.checks);
    VerificationReport { seed: spec.seed, corpus_size, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> CorpusSpec {
        CorpusSpec {
            exhaustive_max_n: 4,
            gnp_sizes: vec![6],
            gnp_ps: vec![0.4],
            include_named: false,
            subdivision_rs: vec![1],
            ..CorpusSpec::default()
        }
    }

    #[test]
    fn iso_class_counts_are_the_known_ones() {
        // connected graphs up to isomorphism: 1, 1, 2, 6, 21, 112
        assert_eq!(connected_graphs_up_to_iso(1).len(), 1);
        assert_eq!(connected_graphs_up_to_iso(2).len(), 1);
        assert_eq!(connected_graphs_up_to_iso(3).len(), 2);
        assert_eq!(connected_graphs_up_to_iso(4).len(), 6);
        assert_eq!(connected_graphs_up_to_iso(5).len(), 21);
    }

    #[test]
    fn corpus_is_reproducible() {
        let spec = tiny_spec();
        let a = build_corpus(&spec);
        let b = build_corpus(&spec);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.graph, y.graph);
        }
    }

    #[test]
    fn bounds_hold_on_a_tiny_corpus() {
        let report = check_bounds(&tiny_spec());
        assert!(report.ok(), "{}", report.render_table());
        let half_tw = report.checks.iter().find(|c| c.name == "cop-le-half-treewidth").unwrap();
        assert!(half_tw.checked > 0, "bound check must not pass vacuously");
    }

    #[test]
    fn transforms_hold_on_a_tiny_corpus() {
        let report = check_transform_monotonicity(&tiny_spec());
        assert!(report.ok(), "{}", report.render_table());
    }

    #[test]
    fn reports_serialize_and_agree_across_threads() {
        let mut spec = tiny_spec();
        let sequential = check_bounds(&spec);
        spec.threads = 4;
        let parallel = check_bounds(&spec);
        assert_eq!(sequential.to_json(), parallel.to_json());
    }

    #[test]
    fn minimizer_shrinks_witnesses() {
        // predicate: contains a triangle
        let g = generate::disjoint_union(
            &generate::complete(3).unwrap(),
            &generate::path(4).unwrap(),
        );
        let has_triangle = |h: &Graph| {
            h.edges().iter().any(|&(u, v)| {
                h.vertices().any(|w| w != u && w != v && h.has_edge(u, w) && h.has_edge(v, w))
            })
        };
        let small = minimize_witness(&g, &has_triangle);
        assert_eq!((small.n(), small.m()), (3, 3));
    }
}
