//! Exact and heuristic search for crown-free linear 3-graphs with many edges.
//!
//! Exact mode generates one representative per isomorphism class by canonical
//! augmentation: a child `G + f` is kept only if `f` lies in the orbit of the
//! child's canonical deletion edge, and siblings are deduplicated by canonical
//! code. Subtrees are pruned when even a perfect packing of the uncovered
//! pairs cannot beat the best value found so far.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::theorem2_restrictions;
use crate::canon::{canonical_form, Block, CanonicalCode};
use crate::constructions::lower_bound_construction;
use crate::graph::{DegreeVector, LinearThreeGraph, Triple, MAX_VERTICES};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_TIME_BUDGET_SECONDS: f64 = 600.0;
/// Local-search rounds without improvement before the heuristic stops.
pub const HEURISTIC_STALL_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n: usize,
    pub mode: SearchMode,
    /// No edge may have a degree vector dominating any of these.
    pub restrictions: Vec<DegreeVector>,
    pub node_budget: u64,
    pub time_budget_seconds: f64,
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
}

impl SearchConfig {
    pub fn exact(n: usize) -> Self {
        SearchConfig {
            n,
            mode: SearchMode::Exact,
            restrictions: Vec::new(),
            node_budget: DEFAULT_NODE_BUDGET,
            time_budget_seconds: DEFAULT_TIME_BUDGET_SECONDS,
            seed: 0,
            threads: 0,
        }
    }

    pub fn heuristic(n: usize, seed: u64) -> Self {
        SearchConfig {
            mode: SearchMode::Heuristic,
            seed,
            ..Self::exact(n)
        }
    }

    pub fn restricted(mut self) -> Self {
        self.restrictions = theorem2_restrictions().to_vec();
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.n > MAX_VERTICES {
            return Err(SearchError::InvalidConfig(format!(
                "n = {} exceeds the maximum of {MAX_VERTICES}",
                self.n
            )));
        }
        if self.node_budget == 0 || self.time_budget_seconds.is_nan() || self.time_budget_seconds <= 0.0 {
            return Err(SearchError::InvalidConfig("budgets must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub n: usize,
    pub best: usize,
    pub witness: LinearThreeGraph,
    /// True only if the exact search ran to completion.
    pub exact: bool,
    pub restricted: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    /// `best - 3n/2`; reported, never asserted.
    pub fn gap_to_three_halves(&self) -> f64 {
        self.best as f64 - 1.5 * self.n as f64
    }

    pub fn report(&self) -> SearchReport {
        SearchReport {
            n: self.n,
            best: self.best,
            exact: self.exact,
            restricted: self.restricted,
            nodes: self.nodes_explored,
            seconds: self.elapsed.as_secs_f64(),
            gap_to_three_halves: self.gap_to_three_halves(),
            witness: self.witness.serialize(),
        }
    }
}

/// Flat, serializable view of a [`SearchResult`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub best: usize,
    pub exact: bool,
    pub restricted: bool,
    pub nodes: u64,
    pub seconds: f64,
    pub gap_to_three_halves: f64,
    /// The witness in the text graph format.
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("budget exceeded after {} nodes; best so far {}", .0.nodes_explored, .0.best)]
    BudgetExceeded(Box<SearchResult>),
}

/// `6 floor((n-3)/4)`, the size of the block construction.
pub fn lower_bound(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        6 * ((n - 3) / 4)
    }
}

/// `best <= 2n` always; `best >= 6 floor((n-3)/4)` when the result is exact.
/// The witness must carry exactly `best` edges.
pub fn verify_bounds(r: &SearchResult) -> bool {
    r.best <= 2 * r.n && (!r.exact || r.best >= lower_bound(r.n)) && r.witness.edge_count() == r.best
}

pub fn ex_crown(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| SearchError::InvalidConfig(e.to_string()))?;
    pool.install(|| match config.mode {
        SearchMode::Exact => exact_search(config),
        SearchMode::Heuristic => Ok(heuristic_search(config)),
    })
}

/// [`ex_crown`] with the two degree-vector restrictions of the `3n/2` bound.
pub fn ex_restricted(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    ex_crown(&config.clone().restricted())
}

/// Bit-set state used inside the search.
#[derive(Clone)]
pub(crate) struct State {
    n: usize,
    cover: [u64; MAX_VERTICES],
    deg: [u8; MAX_VERTICES],
    edges: Vec<[u8; 3]>,
    at: Vec<Vec<u16>>,
}

fn mask(t: [u8; 3]) -> u64 {
    (1u64 << t[0]) | (1u64 << t[1]) | (1u64 << t[2])
}

impl State {
    pub(crate) fn new(n: usize) -> Self {
        State {
            n,
            cover: [0; MAX_VERTICES],
            deg: [0; MAX_VERTICES],
            edges: Vec::new(),
            at: vec![Vec::new(); n],
        }
    }

    pub(crate) fn from_graph(h: &LinearThreeGraph) -> Self {
        let mut s = State::new(h.n());
        for t in h.edges() {
            let [a, b, c] = t.vertices();
            s.push([a as u8, b as u8, c as u8]);
        }
        s
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn admissible(&self, [a, b, c]: [u8; 3]) -> bool {
        self.cover[a as usize] & ((1u64 << b) | (1u64 << c)) == 0 && self.cover[b as usize] >> c & 1 == 0
    }

    pub(crate) fn push(&mut self, t: [u8; 3]) {
        debug_assert!(self.admissible(t));
        let i = self.edges.len() as u16;
        let m = mask(t);
        for v in t {
            self.cover[v as usize] |= m & !(1u64 << v);
            self.deg[v as usize] += 1;
            self.at[v as usize].push(i);
        }
        self.edges.push(t);
    }

    pub(crate) fn pop(&mut self) {
        let t = self.edges.pop().expect("nonempty");
        let m = mask(t);
        for v in t {
            self.cover[v as usize] &= !(m & !(1u64 << v));
            self.deg[v as usize] -= 1;
            self.at[v as usize].pop();
        }
    }

    fn without(&self, drop: &HashSet<usize>) -> State {
        let mut s = State::new(self.n);
        for (i, &t) in self.edges.iter().enumerate() {
            if !drop.contains(&i) {
                s.push(t);
            }
        }
        s
    }

    /// A crown with base `edges[bi]`.
    fn base_has_crown(&self, bi: usize) -> bool {
        let [x, y, z] = self.edges[bi];
        let jewels = |v: u8| {
            self.at[v as usize]
                .iter()
                .filter(move |&&j| j as usize != bi)
                .map(|&j| mask(self.edges[j as usize]))
        };
        jewels(x).any(|mx| {
            jewels(y)
                .filter(|my| mx & my == 0)
                .any(|my| jewels(z).any(|mz| mz & (mx | my) == 0))
        })
    }

    /// A crown using `edges[fi]`, as base or as jewel. Jewel crowns have a
    /// base meeting `f`, so checking those bases suffices.
    pub(crate) fn crown_through(&self, fi: usize) -> bool {
        self.base_has_crown(fi)
            || self.edges[fi].iter().any(|&v| {
                self.at[v as usize]
                    .iter()
                    .any(|&e| e as usize != fi && self.base_has_crown(e as usize))
            })
    }

    fn degree_vector(&self, t: [u8; 3]) -> DegreeVector {
        DegreeVector::new(
            self.deg[t[0] as usize] as usize,
            self.deg[t[1] as usize] as usize,
            self.deg[t[2] as usize] as usize,
        )
    }

    /// Some edge touching `edges[fi]` dominates a restriction. Only those
    /// edges changed degree vector when `f` was added.
    fn violates(&self, fi: usize, restrictions: &[DegreeVector]) -> bool {
        !restrictions.is_empty()
            && self.edges[fi].iter().any(|&v| {
                self.at[v as usize].iter().any(|&e| {
                    let dv = self.degree_vector(self.edges[e as usize]);
                    restrictions.iter().any(|r| dv.dominates(r))
                })
            })
    }

    /// Edges that can still be added: every vertex can gain at most
    /// `free_v / 2` edges and each edge uses three vertices.
    fn extra_bound(&self) -> usize {
        let half_free: usize = (0..self.n)
            .map(|v| (self.n - 1 - 2 * self.deg[v] as usize) / 2)
            .sum();
        half_free / 3
    }

    fn blocks(&self, marked: Option<usize>) -> Vec<Block> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, t)| Block::triple(u8::from(marked == Some(i)), &triple(*t)))
            .collect()
    }

    pub(crate) fn to_graph(&self) -> LinearThreeGraph {
        LinearThreeGraph::from_edges(self.n, self.edges.iter().map(|&t| triple(t)))
            .expect("search states are linear")
    }

    /// Orbit-invariant used to preselect the canonical deletion edge.
    fn edge_invariant(&self, i: usize) -> (DegreeVector, usize) {
        let t = self.edges[i];
        let touching: usize = t.iter().map(|&v| self.deg[v as usize] as usize - 1).sum();
        let neighbor_degrees: usize = t
            .iter()
            .flat_map(|&v| self.at[v as usize].iter())
            .filter(|&&e| e as usize != i)
            .map(|&e| self.edges[e as usize].iter().map(|&w| self.deg[w as usize] as usize).sum::<usize>())
            .sum();
        (self.degree_vector(t), touching * 1000 + neighbor_degrees)
    }
}

fn triple(t: [u8; 3]) -> Triple {
    Triple::of(t[0] as usize, t[1] as usize, t[2] as usize)
}

fn all_triples(n: usize) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a as u8, b as u8, c as u8]);
            }
        }
    }
    out
}

/// Canonical code of `s` if its last edge is a canonical deletion, else `None`.
/// Also returns the canonically relabelled edge list.
fn accept_last(s: &State) -> Option<(CanonicalCode, Vec<[u8; 3]>)> {
    let f = s.edges.len() - 1;
    let inv: Vec<_> = (0..s.edges.len()).map(|i| s.edge_invariant(i)).collect();
    let top = inv.iter().max().expect("nonempty");
    if inv[f] != *top {
        return None;
    }
    let canon = canonical_form(s.n, &s.blocks(None), None);
    let image = |i: usize| {
        let mut t = s.edges[i].map(|v| canon.labeling[v as usize] as u8);
        t.sort_unstable();
        t
    };
    let chosen = (0..s.edges.len())
        .filter(|&i| inv[i] == *top)
        .max_by_key(|&i| image(i))
        .expect("f attains the maximum");
    if chosen != f {
        let marked_f = canonical_form(s.n, &s.blocks(Some(f)), None);
        let marked_c = canonical_form(s.n, &s.blocks(Some(chosen)), None);
        if marked_f.code != marked_c.code {
            return None;
        }
    }
    let mut relabelled: Vec<[u8; 3]> = (0..s.edges.len()).map(image).collect();
    relabelled.sort_unstable();
    Some((canon.code, relabelled))
}

struct Shared<'a> {
    triples: Vec<[u8; 3]>,
    restrictions: &'a [DegreeVector],
    best: AtomicUsize,
    nodes: AtomicU64,
    node_budget: u64,
    deadline: Instant,
    aborted: AtomicBool,
}

/// Best graph seen in one subtree: largest size, then least canonical code.
#[derive(Clone, Default)]
struct Incumbent {
    best: Option<(usize, CanonicalCode, Vec<[u8; 3]>)>,
}

impl Incumbent {
    fn offer(&mut self, m: usize, code: &CanonicalCode, edges: &[[u8; 3]]) {
        let better = match &self.best {
            None => true,
            Some((bm, bc, _)) => m > *bm || (m == *bm && code < bc),
        };
        if better {
            self.best = Some((m, code.clone(), edges.to_vec()));
        }
    }

    fn merge(mut self, other: Incumbent) -> Incumbent {
        if let Some((m, c, e)) = &other.best {
            self.offer(*m, c, e);
        }
        self
    }
}

/// Canonical children of `s`, deduplicated, in a deterministic order.
fn children(s: &mut State, shared: &Shared) -> Vec<(State, CanonicalCode, Vec<[u8; 3]>)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &t in &shared.triples {
        if !s.admissible(t) {
            continue;
        }
        s.push(t);
        let fi = s.edges.len() - 1;
        if !s.crown_through(fi) && !s.violates(fi, shared.restrictions) {
            if let Some((code, relabelled)) = accept_last(s) {
                if seen.insert(code.clone()) {
                    out.push((s.clone(), code, relabelled));
                }
            }
        }
        s.pop();
    }
    out
}

fn dfs(s: &mut State, code: &CanonicalCode, relabelled: &[[u8; 3]], shared: &Shared, inc: &mut Incumbent) {
    if shared.aborted.load(Ordering::Relaxed) {
        return;
    }
    let count = shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
    if count > shared.node_budget || (count.is_multiple_of(1024) && Instant::now() > shared.deadline) {
        shared.aborted.store(true, Ordering::Relaxed);
        return;
    }
    let m = s.edge_count();
    inc.offer(m, code, relabelled);
    shared.best.fetch_max(m, Ordering::Relaxed);
    let reachable = m + s.extra_bound().min((2 * s.n).saturating_sub(m));
    if reachable < shared.best.load(Ordering::Relaxed) || reachable == m {
        return;
    }
    for (mut child, c, r) in children(s, shared) {
        dfs(&mut child, &c, &r, shared, inc);
    }
}

fn exact_search(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    let start = Instant::now();
    let n = config.n;
    let seed_value = lower_bound_construction(n)
        .ok()
        .filter(|h| {
            h.edges().all(|e| {
                let dv = h.degree_vector(e).expect("edge");
                !config.restrictions.iter().any(|r| dv.dominates(r))
            })
        })
        .map_or(0, |h| h.edge_count());
    let shared = Shared {
        triples: all_triples(n),
        restrictions: &config.restrictions,
        best: AtomicUsize::new(seed_value),
        nodes: AtomicU64::new(0),
        node_budget: config.node_budget,
        deadline: start + Duration::from_secs_f64(config.time_budget_seconds),
        aborted: AtomicBool::new(false),
    };

    // Expand the first two levels serially, then hand subtrees to workers.
    let mut root = State::new(n);
    let root_code = canonical_form(n, &[], None).code;
    let mut inc = Incumbent::default();
    inc.offer(0, &root_code, &[]);
    shared.nodes.fetch_add(1, Ordering::Relaxed);
    let mut frontier = Vec::new();
    for (mut child, code, rel) in children(&mut root, &shared) {
        shared.nodes.fetch_add(1, Ordering::Relaxed);
        inc.offer(1, &code, &rel);
        shared.best.fetch_max(1, Ordering::Relaxed);
        frontier.extend(children(&mut child, &shared));
    }
    let found = frontier
        .into_par_iter()
        .map(|(mut s, code, rel)| {
            let mut local = Incumbent::default();
            dfs(&mut s, &code, &rel, &shared, &mut local);
            local
        })
        .reduce(Incumbent::default, Incumbent::merge)
        .merge(inc);

    let (best, _, edges) = found.best.expect("root is always offered");
    let witness = LinearThreeGraph::from_edges(n, edges.iter().map(|&t| triple(t)))
        .expect("witness is linear");
    let aborted = shared.aborted.load(Ordering::Relaxed);
    let result = SearchResult {
        n,
        best,
        witness,
        exact: !aborted,
        restricted: !config.restrictions.is_empty(),
        nodes_explored: shared.nodes.load(Ordering::Relaxed).min(config.node_budget),
        elapsed: start.elapsed(),
    };
    if aborted {
        Err(SearchError::BudgetExceeded(Box::new(result)))
    } else {
        Ok(result)
    }
}

/// Add admissible triples in random order, keeping the state crown-free and
/// within the restrictions.
fn greedy_fill(s: &mut State, triples: &mut [[u8; 3]], restrictions: &[DegreeVector], rng: &mut ChaCha8Rng) {
    triples.shuffle(rng);
    for &t in triples.iter() {
        if !s.admissible(t) {
            continue;
        }
        s.push(t);
        let fi = s.edges.len() - 1;
        if s.crown_through(fi) || s.violates(fi, restrictions) {
            s.pop();
        }
    }
}

/// A random maximal crown-free system respecting `restrictions`, grown from
/// the empty graph by random greedy insertion.
pub fn random_maximal(n: usize, restrictions: &[DegreeVector], seed: u64) -> LinearThreeGraph {
    assert!(n <= MAX_VERTICES, "n exceeds {MAX_VERTICES}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = State::new(n);
    greedy_fill(&mut s, &mut all_triples(n), restrictions, &mut rng);
    s.to_graph()
}

fn heuristic_search(config: &SearchConfig) -> SearchResult {
    let start = Instant::now();
    let deadline = start + Duration::from_secs_f64(config.time_budget_seconds);
    let n = config.n;
    let restrictions = &config.restrictions;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut triples = all_triples(n);

    let mut current = lower_bound_construction(n)
        .ok()
        .map(|h| State::from_graph(&h))
        .filter(|s| (0..s.edges.len()).all(|i| !s.violates(i, restrictions)))
        .unwrap_or_else(|| State::new(n));
    greedy_fill(&mut current, &mut triples, restrictions, &mut rng);
    let mut best = current.clone();
    let mut nodes = 1u64;
    let mut stall = 0;
    while stall < HEURISTIC_STALL_LIMIT && nodes < config.node_budget && Instant::now() < deadline {
        nodes += 1;
        let m = current.edge_count();
        let k = if m == 0 { 0 } else { rng.gen_range(1..=m.min(3)) };
        let drop: HashSet<usize> = rand::seq::index::sample(&mut rng, m, k).into_iter().collect();
        let mut next = current.without(&drop);
        greedy_fill(&mut next, &mut triples, restrictions, &mut rng);
        if next.edge_count() >= current.edge_count() {
            current = next;
        }
        if current.edge_count() > best.edge_count() {
            best = current.clone();
            stall = 0;
        } else {
            stall += 1;
        }
    }
    SearchResult {
        n,
        best: best.edge_count(),
        witness: best.to_graph(),
        exact: false,
        restricted: !restrictions.is_empty(),
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::graph_canonical;
    use crate::constructions::fano;
    use crate::links::find_crown;

    fn run(n: usize) -> SearchResult {
        ex_crown(&SearchConfig::exact(n)).unwrap()
    }

    #[test]
    fn tiny_cases() {
        for (n, best) in [(0, 0), (2, 0), (3, 1), (4, 1), (5, 2), (6, 4)] {
            let r = run(n);
            assert_eq!(r.best, best, "n = {n}");
            assert!(r.exact && verify_bounds(&r));
        }
    }

    #[test]
    fn seven_is_fano() {
        let r = run(7);
        assert_eq!(r.best, 7);
        assert_eq!(graph_canonical(&r.witness).code, graph_canonical(&fano()).code);
    }

    #[test]
    fn incremental_crown_check_matches_full_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut samples = 0;
        let mut with_crown = 0;
        while samples < 1000 {
            let n = rng.gen_range(9..=14);
            let mut s = State::new(n);
            let mut triples = all_triples(n);
            triples.shuffle(&mut rng);
            for t in triples {
                if !s.admissible(t) {
                    continue;
                }
                s.push(t);
                let incremental = s.crown_through(s.edges.len() - 1);
                let full = find_crown(&s.to_graph()).is_some();
                assert_eq!(incremental, full);
                samples += 1;
                if incremental {
                    with_crown += 1;
                    break;
                }
            }
        }
        assert!(with_crown > 0);
    }

    #[test]
    fn push_pop_restores_state() {
        let mut s = State::from_graph(&fano());
        s.pop();
        let before = (s.cover, s.deg, s.edges.clone(), s.at.clone());
        let last = *fano().edges().last().unwrap();
        let [a, b, c] = last.vertices();
        s.push([a as u8, b as u8, c as u8]);
        s.pop();
        assert_eq!(before, (s.cover, s.deg, s.edges.clone(), s.at.clone()));
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let mut one = SearchConfig::exact(8);
        one.threads = 1;
        let mut four = one.clone();
        four.threads = 4;
        let (a, b) = (ex_crown(&one).unwrap(), ex_crown(&four).unwrap());
        assert_eq!(a.best, 8);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn budget_exceeded_carries_partial_result() {
        let mut cfg = SearchConfig::exact(9);
        cfg.node_budget = 50;
        match ex_crown(&cfg) {
            Err(SearchError::BudgetExceeded(r)) => {
                assert!(!r.exact);
                assert_eq!(r.witness.edge_count(), r.best);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn restricted_seven() {
        let r = ex_restricted(&SearchConfig::exact(7)).unwrap();
        assert!(r.best <= 10);
        assert!(r.restricted && r.exact);
    }

    #[test]
    fn bounds_examples() {
        let mk = |n, best, exact| SearchResult {
            n,
            best,
            witness: crate::constructions::random_linear(n, best, 1).unwrap_or_else(|_| LinearThreeGraph::new(n)),
            exact,
            restricted: false,
            nodes_explored: 0,
            elapsed: Duration::ZERO,
        };
        assert!(verify_bounds(&mk(7, 7, true)));
        assert!(verify_bounds(&mk(3, 1, true)));
        assert!(!verify_bounds(&mk(43, 59, true)));
        assert_eq!(lower_bound(43), 60);
    }

    #[test]
    fn heuristic_reaches_lower_bound() {
        let r = ex_crown(&SearchConfig::heuristic(23, 3)).unwrap();
        assert!(r.best >= 30 && !r.exact);
        assert!(find_crown(&r.witness).is_none());
        assert_eq!(r.witness.edge_count(), r.best);
    }

    #[test]
    fn invalid_configs() {
        assert!(matches!(ex_crown(&SearchConfig::exact(65)), Err(SearchError::InvalidConfig(_))));
        let mut cfg = SearchConfig::exact(5);
        cfg.node_budget = 0;
        assert!(matches!(ex_crown(&cfg), Err(SearchError::InvalidConfig(_))));
    }
}
