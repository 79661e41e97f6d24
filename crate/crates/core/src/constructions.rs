//! Generators: the crown-free lower-bound family, Steiner systems on 7 and 9
//! points, minimal hosts realizing a link graph, and seeded random systems.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catalog::{builtin_graph, CatalogError, CatalogGraph, CatalogName};
use crate::graph::{LinearThreeGraph, Triple, VertexId, MAX_VERTICES};
use crate::links::ColoredLinkGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("construction needs at least {needed} vertices, got {n}")]
    TooFewVertices { n: usize, needed: usize },
    #[error("at most {MAX_VERTICES} vertices are supported, got {0}")]
    TooManyVertices(usize),
    #[error("infeasible request: {0}")]
    InfeasibleRequest(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionKind {
    LowerBound,
    Fano,
    Sts9,
    MinimalHost(CatalogName),
    /// `edges` random admissible triples, or greedy growth to `min_degree`.
    Random {
        edges: Option<usize>,
        min_degree: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub n: usize,
    pub kind: ConstructionKind,
    pub seed: u64,
}

impl ConstructionSpec {
    pub fn build(&self) -> Result<LinearThreeGraph, ConstructionError> {
        match self.kind {
            ConstructionKind::LowerBound => lower_bound_construction(self.n),
            ConstructionKind::Fano => Ok(fano()),
            ConstructionKind::Sts9 => Ok(sts9()),
            ConstructionKind::MinimalHost(name) => Ok(minimal_host(&builtin_graph(name)?).0),
            ConstructionKind::Random {
                min_degree: Some(d),
                ..
            } => random_min_degree(self.n, d, self.seed).ok_or_else(|| {
                ConstructionError::InfeasibleRequest(format!(
                    "no linear system on {} vertices with minimum degree {d} found in {MIN_DEGREE_RESTARTS} attempts",
                    self.n
                ))
            }),
            ConstructionKind::Random { edges, .. } => {
                random_linear(self.n, edges.unwrap_or(0), self.seed)
            }
        }
    }
}

/// Vertex ids of block `i` (1-based): `x_i, y_i, z_i, w_i`.
pub fn lower_bound_block(i: usize) -> [VertexId; 4] {
    let base = 3 + 4 * (i - 1);
    [base, base + 1, base + 2, base + 3]
}

/// `k = (n-3)/4` blocks on hubs `a, b, c = 0, 1, 2` with edges
/// `a x y, a z w, b x w, b y z, c x z, c y w` per block. Leftover vertices stay isolated.
pub fn lower_bound_construction(n: usize) -> Result<LinearThreeGraph, ConstructionError> {
    if n < 7 {
        return Err(ConstructionError::TooFewVertices { n, needed: 7 });
    }
    let (a, b, c) = (0, 1, 2);
    let k = (n - 3) / 4;
    let mut h = LinearThreeGraph::new(n);
    for i in 1..=k {
        let [x, y, z, w] = lower_bound_block(i);
        for t in [
            Triple::of(a, x, y),
            Triple::of(a, z, w),
            Triple::of(b, x, w),
            Triple::of(b, y, z),
            Triple::of(c, x, z),
            Triple::of(c, y, w),
        ] {
            h.add_edge(t).expect("blocks share only the hubs");
        }
    }
    Ok(h)
}

fn from_table(n: usize, table: &[[VertexId; 3]]) -> LinearThreeGraph {
    let h = LinearThreeGraph::from_edges(n, table.iter().map(|&[a, b, c]| Triple::of(a, b, c)))
        .expect("Steiner table is linear");
    debug_assert!(covers_every_pair_once(&h));
    h
}

/// The Fano plane on points `0..7`.
pub fn fano() -> LinearThreeGraph {
    from_table(
        7,
        &[
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ],
    )
}

/// The affine plane of order 3; point `(x, y)` is `3x + y`.
pub fn sts9() -> LinearThreeGraph {
    from_table(
        9,
        &[
            [0, 1, 2],
            [3, 4, 5],
            [6, 7, 8],
            [0, 3, 6],
            [1, 4, 7],
            [2, 5, 8],
            [0, 4, 8],
            [1, 5, 6],
            [2, 3, 7],
            [0, 5, 7],
            [1, 3, 8],
            [2, 4, 6],
        ],
    )
}

/// Every vertex pair lies in exactly one edge.
pub fn covers_every_pair_once(h: &LinearThreeGraph) -> bool {
    let n = h.n();
    let mut count = vec![0u32; n * n];
    for t in h.edges() {
        for (u, v) in t.pairs() {
            count[u * n + v] += 1;
        }
    }
    (0..n).all(|u| (u + 1..n).all(|v| count[u * n + v] == 1))
}

/// Host edge `(0, 1, 2)` plus one edge per colored link edge, through the
/// endpoint of its color. Link vertices are renumbered from 3 in increasing order.
pub fn minimal_host(g: &CatalogGraph) -> (LinearThreeGraph, Triple) {
    host_for_link(&g.graph)
}

pub fn host_for_link(g: &ColoredLinkGraph) -> (LinearThreeGraph, Triple) {
    let verts: Vec<VertexId> = g.vertices().into_iter().collect();
    let id = |v: VertexId| 3 + verts.binary_search(&v).expect("link vertex");
    let e = Triple::of(0, 1, 2);
    let mut h = LinearThreeGraph::new(3 + verts.len());
    h.add_edge(e).expect("empty host");
    for (u, v, c) in g.edges() {
        h.add_edge(Triple::of(id(u), id(v), c.index()))
            .expect("a proper coloring gives a linear host");
    }
    (h, e)
}

fn check_size(n: usize) -> Result<(), ConstructionError> {
    if n > MAX_VERTICES {
        Err(ConstructionError::TooManyVertices(n))
    } else {
        Ok(())
    }
}

const RANDOM_LINEAR_RESTARTS: usize = 100;

/// `m` admissible triples drawn uniformly at each step, deterministic per seed.
pub fn random_linear(n: usize, m: usize, seed: u64) -> Result<LinearThreeGraph, ConstructionError> {
    check_size(n)?;
    let capacity = if n >= 3 { n * (n - 1) / 6 } else { 0 };
    if m > capacity {
        return Err(ConstructionError::InfeasibleRequest(format!(
            "{m} edges exceed the pair-packing bound {capacity} on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'restart: for _ in 0..RANDOM_LINEAR_RESTARTS {
        let mut h = LinearThreeGraph::new(n);
        while h.edge_count() < m {
            let sampled = (0..64).find_map(|_| {
                let mut pick = rand::seq::index::sample(&mut rng, n, 3).into_vec();
                pick.sort_unstable();
                let t = Triple::of(pick[0], pick[1], pick[2]);
                h.check_insertable(&t).is_ok().then_some(t)
            });
            let t = match sampled {
                Some(t) => t,
                None => match admissible_triples(&h).choose(&mut rng) {
                    Some(&t) => t,
                    None => continue 'restart,
                },
            };
            h.add_edge(t).expect("admissible");
        }
        return Ok(h);
    }
    Err(ConstructionError::InfeasibleRequest(format!(
        "no linear system with {m} edges on {n} vertices found in {RANDOM_LINEAR_RESTARTS} attempts"
    )))
}

/// Triples whose three pairs are all uncovered.
pub fn admissible_triples(h: &LinearThreeGraph) -> Vec<Triple> {
    let n = h.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if h.edge_covering(a, b).is_some() {
                continue;
            }
            for c in b + 1..n {
                if h.edge_covering(a, c).is_none() && h.edge_covering(b, c).is_none() {
                    out.push(Triple::of(a, b, c));
                }
            }
        }
    }
    out
}

pub const MIN_DEGREE_RESTARTS: usize = 100;

/// Greedy growth that always extends a lowest-degree vertex, pairing it with
/// the lowest-degree admissible partners, until the minimum degree reaches `d`.
pub fn random_min_degree(n: usize, d: usize, seed: u64) -> Option<LinearThreeGraph> {
    if !(3..=MAX_VERTICES).contains(&n) {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..MIN_DEGREE_RESTARTS).find_map(|_| greedy_min_degree(n, d, &mut rng))
}

fn greedy_min_degree(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<LinearThreeGraph> {
    let mut h = LinearThreeGraph::new(n);
    loop {
        let degrees = h.degrees();
        let low = *degrees.iter().min()?;
        if low >= d {
            return Some(h);
        }
        let lows: Vec<VertexId> = (0..n).filter(|&v| degrees[v] == low).collect();
        let v = *lows.choose(rng)?;
        let free: Vec<VertexId> = (0..n)
            .filter(|&u| u != v && h.edge_covering(u, v).is_none())
            .collect();
        let mut best: Vec<(VertexId, VertexId)> = Vec::new();
        let mut best_cost = usize::MAX;
        for (i, &x) in free.iter().enumerate() {
            for &y in &free[i + 1..] {
                if h.edge_covering(x, y).is_some() {
                    continue;
                }
                let cost = degrees[x] + degrees[y];
                if cost < best_cost {
                    best_cost = cost;
                    best.clear();
                }
                if cost == best_cost {
                    best.push((x, y));
                }
            }
        }
        let &(x, y) = best.choose(rng)?;
        h.add_edge(Triple::of(v, x, y)).expect("pairs checked uncovered");
    }
}
