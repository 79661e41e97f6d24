//! Linear 3-graphs: vertices, triples, degrees and the `.l3g` text format.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::canon::{self, CanonicalCode};

/// Dense 0-based vertex index.
pub type VertexId = usize;

/// Largest vertex count accepted by the parser and the search engine.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("triple has a repeated vertex: ({0}, {1}, {2})")]
    RepeatedVertex(VertexId, VertexId, VertexId),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("adding {edge} covers pair {{{}, {}}} a second time (already in {existing})", pair.0, pair.1)]
    LinearityViolation {
        edge: Triple,
        existing: Triple,
        pair: (VertexId, VertexId),
    },
    #[error("edge {0} is already present")]
    DuplicateEdge(Triple),
    #[error("edge {0} is not present")]
    EdgeNotPresent(Triple),
    #[error("graph has no vertices")]
    EmptyVertexSet,
    #[error("graphs on more than {MAX_VERTICES} vertices are not supported (got {0})")]
    TooManyVertices(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An edge: three distinct vertices stored in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple([VertexId; 3]);

impl Triple {
    pub fn new(a: VertexId, b: VertexId, c: VertexId) -> Result<Self, GraphError> {
        if a == b || b == c || a == c {
            return Err(GraphError::RepeatedVertex(a, b, c));
        }
        let mut v = [a, b, c];
        v.sort_unstable();
        Ok(Triple(v))
    }

    /// Panicking constructor for literals known to be valid.
    pub fn of(a: VertexId, b: VertexId, c: VertexId) -> Self {
        Self::new(a, b, c).expect("triple vertices must be distinct")
    }

    pub fn vertices(&self) -> [VertexId; 3] {
        self.0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    /// Number of shared vertices.
    pub fn meet(&self, other: &Triple) -> usize {
        self.0.iter().filter(|v| other.contains(**v)).count()
    }

    pub fn is_disjoint(&self, other: &Triple) -> bool {
        self.meet(other) == 0
    }

    /// The two vertices other than `v`, in increasing order.
    pub fn others(&self, v: VertexId) -> Option<(VertexId, VertexId)> {
        let [a, b, c] = self.0;
        match v {
            _ if v == a => Some((b, c)),
            _ if v == b => Some((a, c)),
            _ if v == c => Some((a, b)),
            _ => None,
        }
    }

    pub fn pairs(&self) -> [(VertexId, VertexId); 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    pub fn max_vertex(&self) -> VertexId {
        self.0[2]
    }

    /// Image under a vertex map.
    pub fn map(&self, f: impl Fn(VertexId) -> VertexId) -> Triple {
        let [a, b, c] = self.0;
        Triple::of(f(a), f(b), f(c))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

pub(crate) fn ordered_pair(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Endpoint degrees of an edge, sorted non-increasingly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeVector([usize; 3]);

impl DegreeVector {
    pub fn new(x: usize, y: usize, z: usize) -> Self {
        let mut d = [x, y, z];
        d.sort_unstable_by(|p, q| q.cmp(p));
        DegreeVector(d)
    }

    pub fn coords(&self) -> [usize; 3] {
        self.0
    }

    /// Coordinatewise `self >= other`.
    pub fn dominates(&self, other: &DegreeVector) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(p, q)| p >= q)
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{}>", self.0[0], self.0[1], self.0[2])
    }
}

/// A 3-uniform hypergraph in which every pair of vertices lies in at most one edge.
///
/// Isolated vertices are allowed. Edges iterate in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearThreeGraph {
    n: usize,
    edges: BTreeSet<Triple>,
    pair_index: HashMap<(VertexId, VertexId), Triple>,
    incidence: Vec<BTreeSet<Triple>>,
}

impl LinearThreeGraph {
    pub fn new(n: usize) -> Self {
        LinearThreeGraph {
            n,
            edges: BTreeSet::new(),
            pair_index: HashMap::new(),
            incidence: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = Triple>,
    ) -> Result<Self, GraphError> {
        let mut h = Self::new(n);
        for t in edges {
            h.add_edge(t)?;
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.edges.iter()
    }

    pub fn contains_edge(&self, t: &Triple) -> bool {
        self.edges.contains(t)
    }

    /// The edge covering the pair `{u, v}`, if any.
    pub fn edge_covering(&self, u: VertexId, v: VertexId) -> Option<Triple> {
        self.pair_index.get(&ordered_pair(u, v)).copied()
    }

    /// Edges through `v` in lexicographic order.
    pub fn edges_at(&self, v: VertexId) -> impl DoubleEndedIterator<Item = &Triple> + '_ {
        self.incidence[v].iter()
    }

    /// Why `t` cannot be inserted, if it cannot.
    pub fn check_insertable(&self, t: &Triple) -> Result<(), GraphError> {
        if t.max_vertex() >= self.n {
            return Err(GraphError::VertexOutOfRange {
                vertex: t.max_vertex(),
                n: self.n,
            });
        }
        if self.edges.contains(t) {
            return Err(GraphError::DuplicateEdge(*t));
        }
        for pair in t.pairs() {
            if let Some(existing) = self.pair_index.get(&pair) {
                return Err(GraphError::LinearityViolation {
                    edge: *t,
                    existing: *existing,
                    pair,
                });
            }
        }
        Ok(())
    }

    pub fn add_edge(&mut self, t: Triple) -> Result<(), GraphError> {
        self.check_insertable(&t)?;
        for pair in t.pairs() {
            self.pair_index.insert(pair, t);
        }
        for v in t.vertices() {
            self.incidence[v].insert(t);
        }
        self.edges.insert(t);
        Ok(())
    }

    pub fn with_edge(&self, t: Triple) -> Result<Self, GraphError> {
        let mut h = self.clone();
        h.add_edge(t)?;
        Ok(h)
    }

    pub fn remove_edge(&mut self, t: &Triple) -> Result<(), GraphError> {
        if !self.edges.remove(t) {
            return Err(GraphError::EdgeNotPresent(*t));
        }
        for pair in t.pairs() {
            self.pair_index.remove(&pair);
        }
        for v in t.vertices() {
            self.incidence[v].remove(t);
        }
        Ok(())
    }

    pub fn without_edge(&self, t: &Triple) -> Result<Self, GraphError> {
        let mut h = self.clone();
        h.remove_edge(t)?;
        Ok(h)
    }

    /// Same edges on `extra` additional isolated vertices.
    pub fn with_extra_vertices(&self, extra: usize) -> Self {
        let mut h = self.clone();
        h.n += extra;
        h.incidence.resize(h.n, BTreeSet::new());
        h
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(BTreeSet::len).collect()
    }

    pub fn min_degree(&self) -> Result<usize, GraphError> {
        self.incidence
            .iter()
            .map(BTreeSet::len)
            .min()
            .ok_or(GraphError::EmptyVertexSet)
    }

    pub fn degree_vector(&self, e: &Triple) -> Result<DegreeVector, GraphError> {
        if !self.edges.contains(e) {
            return Err(GraphError::EdgeNotPresent(*e));
        }
        let [a, b, c] = e.vertices();
        Ok(DegreeVector::new(
            self.degree(a),
            self.degree(b),
            self.degree(c),
        ))
    }

    /// Full pairwise rescan of the linearity condition, independent of `pair_index`.
    pub fn is_linear(&self) -> bool {
        let edges: Vec<&Triple> = self.edges.iter().collect();
        edges
            .iter()
            .enumerate()
            .all(|(i, e)| edges[i + 1..].iter().all(|f| e.meet(f) <= 1))
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        canon::graph_canonical(self).code
    }

    /// Relabel vertices by `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[VertexId]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        Self::from_edges(self.n, self.edges.iter().map(|t| t.map(|v| perm[v])))
            .expect("relabelling preserves linearity")
    }

    /// Drop isolated vertices, renumbering the rest in increasing order.
    pub fn compact(&self) -> Self {
        let keep: Vec<VertexId> = (0..self.n).filter(|&v| self.degree(v) > 0).collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        Self::from_edges(keep.len(), self.edges.iter().map(|t| t.map(|v| index[v])))
            .expect("renumbering preserves linearity")
    }

    /// `.l3g` text: header `n m`, then one `a b c` line per edge in lexicographic order.
    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for t in &self.edges {
            let [a, b, c] = t.vertices();
            out.push_str(&format!("{a} {b} {c}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            message: "missing header line \"n m\"".into(),
        })?;
        let nums = parse_numbers(hline, header)?;
        let [n, m] = nums[..] else {
            return Err(GraphError::Parse {
                line: hline,
                message: format!("header must have 2 fields, found {}", nums.len()),
            });
        };
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }

        let mut h = Self::new(n);
        let mut count = 0;
        for (line, text) in lines {
            let nums = parse_numbers(line, text)?;
            let [a, b, c] = nums[..] else {
                return Err(GraphError::Parse {
                    line,
                    message: format!("edge line must have 3 fields, found {}", nums.len()),
                });
            };
            let t = Triple::new(a, b, c).map_err(|e| GraphError::Parse {
                line,
                message: e.to_string(),
            })?;
            match h.add_edge(t) {
                Ok(()) => {}
                Err(e @ GraphError::LinearityViolation { .. }) => return Err(e),
                Err(e) => {
                    return Err(GraphError::Parse {
                        line,
                        message: e.to_string(),
                    })
                }
            }
            count += 1;
        }
        if count != m {
            return Err(GraphError::Parse {
                line: hline,
                message: format!("header declares {m} edges, found {count}"),
            });
        }
        Ok(h)
    }
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<usize>, GraphError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| GraphError::Parse {
                line,
                message: format!("not a non-negative integer: {tok:?}"),
            })
        })
        .collect()
}

impl FromStr for LinearThreeGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for LinearThreeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano_lines() -> Vec<Triple> {
        [
            (0, 1, 2),
            (0, 3, 4),
            (0, 5, 6),
            (1, 3, 5),
            (1, 4, 6),
            (2, 3, 6),
            (2, 4, 5),
        ]
        .iter()
        .map(|&(a, b, c)| Triple::of(a, b, c))
        .collect()
    }

    #[test]
    fn add_first_edge() {
        let mut h = LinearThreeGraph::new(7);
        h.add_edge(Triple::of(0, 1, 2)).unwrap();
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn second_cover_of_pair_is_rejected() {
        let mut h = LinearThreeGraph::new(7);
        h.add_edge(Triple::of(0, 1, 2)).unwrap();
        let err = h.add_edge(Triple::of(0, 1, 3)).unwrap_err();
        assert!(matches!(
            err,
            GraphError::LinearityViolation { pair: (0, 1), .. }
        ));
        assert_eq!(
            h.add_edge(Triple::of(2, 0, 1)),
            Err(GraphError::DuplicateEdge(Triple::of(0, 1, 2)))
        );
    }

    #[test]
    fn fano_in_every_rotation_order() {
        let lines = fano_lines();
        for shift in 0..lines.len() {
            let mut order = lines.clone();
            order.rotate_left(shift);
            order.reverse();
            let h = LinearThreeGraph::from_edges(7, order).unwrap();
            assert_eq!(h.edge_count(), 7);
            for u in 0..7 {
                for v in u + 1..7 {
                    assert!(h.edge_covering(u, v).is_some());
                }
            }
        }
    }

    #[test]
    fn degrees_and_vectors() {
        let h = LinearThreeGraph::from_edges(7, fano_lines()).unwrap();
        assert!((0..7).all(|v| h.degree(v) == 3));
        assert_eq!(h.min_degree().unwrap(), 3);
        for e in h.edges() {
            assert_eq!(h.degree_vector(e).unwrap(), DegreeVector::new(3, 3, 3));
        }
        let single = LinearThreeGraph::from_edges(3, [Triple::of(0, 1, 2)]).unwrap();
        assert_eq!(
            single.degree_vector(&Triple::of(0, 1, 2)).unwrap(),
            DegreeVector::new(1, 1, 1)
        );
        assert!(matches!(
            single.degree_vector(&Triple::of(0, 1, 3)),
            Err(GraphError::EdgeNotPresent(_))
        ));
        assert_eq!(LinearThreeGraph::new(4).degree(2), 0);
        assert_eq!(
            LinearThreeGraph::new(0).min_degree(),
            Err(GraphError::EmptyVertexSet)
        );
    }

    #[test]
    fn dominance_examples() {
        let v = DegreeVector::new;
        assert!(v(5, 5, 3).dominates(&v(4, 4, 3)));
        assert!(!v(5, 4, 2).dominates(&v(4, 4, 3)));
        assert!(!v(4, 4, 3).dominates(&v(5, 4, 2)));
        assert_eq!(v(2, 4, 3).coords(), [4, 3, 2]);
    }

    #[test]
    fn dominance_is_a_partial_order() {
        let all: Vec<DegreeVector> = (0..=8)
            .flat_map(|a| (0..=a).flat_map(move |b| (0..=b).map(move |c| DegreeVector::new(a, b, c))))
            .collect();
        for p in &all {
            assert!(p.dominates(p));
            for q in &all {
                if p.dominates(q) && q.dominates(p) {
                    assert_eq!(p, q);
                }
                for r in &all {
                    if p.dominates(q) && q.dominates(r) {
                        assert!(p.dominates(r));
                    }
                }
            }
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            LinearThreeGraph::parse("3 1\n0 1 1"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            LinearThreeGraph::parse("5 2\n0 1 2\n0 1 3\n"),
            Err(GraphError::LinearityViolation { .. })
        ));
        assert!(matches!(
            LinearThreeGraph::parse("5 2\n0 1 2\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            LinearThreeGraph::parse("4 1\n0 1 7\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            LinearThreeGraph::parse("65 0\n"),
            Err(GraphError::TooManyVertices(65))
        ));
        assert!(matches!(
            LinearThreeGraph::parse("4 1\n0 x 2\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn comments_and_round_trip() {
        let text = "# fano\n7 7\n0 1 2\n0 3 4\n# middle\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 5\n";
        let h = LinearThreeGraph::parse(text).unwrap();
        let again = LinearThreeGraph::parse(&h.serialize()).unwrap();
        assert_eq!(h, again);
        assert!(h.serialize().starts_with("7 7\n0 1 2\n"));
    }

    #[test]
    fn remove_then_add_restores() {
        let h = LinearThreeGraph::from_edges(7, fano_lines()).unwrap();
        let e = Triple::of(1, 3, 5);
        let mut g = h.without_edge(&e).unwrap();
        assert_eq!(g.edge_covering(1, 3), None);
        assert_eq!(g.remove_edge(&e), Err(GraphError::EdgeNotPresent(e)));
        g.add_edge(e).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn compact_drops_isolated() {
        let h = LinearThreeGraph::from_edges(6, [Triple::of(1, 3, 5)]).unwrap();
        let c = h.compact();
        assert_eq!(c.n(), 3);
        assert!(c.contains_edge(&Triple::of(0, 1, 2)));
    }
}
