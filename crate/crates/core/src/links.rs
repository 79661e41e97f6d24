//! Link graphs, rainbow matchings, crowns and good quintuples.
//!
//! The link graph of a host edge `e = (a, b, c)` collects, for every other
//! edge through one of `a`, `b`, `c`, the pair of its remaining vertices,
//! colored by the endpoint it passes through. A crown with base `e` exists
//! exactly when the link graph has three pairwise disjoint edges of three
//! distinct colors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::canon::Block;
use crate::graph::{ordered_pair, DegreeVector, GraphError, LinearThreeGraph, Triple, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("link edge ({0}, {1}) is invalid: {2}")]
    InvalidLinkEdge(VertexId, VertexId, &'static str),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("degree vector {current} does not dominate target {target}")]
    TargetNotDominated {
        current: DegreeVector,
        target: DegreeVector,
    },
}

/// Edge color in a link graph, named after the host-edge endpoint it passes
/// through: `A` for the smallest endpoint id, then `B`, then `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    A,
    B,
    C,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::A, Color::B, Color::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Color {
        Color::ALL[i]
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::A => "A",
            Color::B => "B",
            Color::C => "C",
        })
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Color::A),
            "B" | "b" => Ok(Color::B),
            "C" | "c" => Ok(Color::C),
            other => Err(format!("unknown color {other:?}")),
        }
    }
}

/// A simple graph whose edges are properly 3-colored (each color class is a matching).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredLinkGraph {
    host_edge: Option<Triple>,
    edges: BTreeMap<(VertexId, VertexId), Color>,
}

impl ColoredLinkGraph {
    /// `host_edge` is `None` for free-standing catalog graphs.
    pub fn new(host_edge: Option<Triple>) -> Self {
        ColoredLinkGraph {
            host_edge,
            edges: BTreeMap::new(),
        }
    }

    pub fn from_edges(
        host_edge: Option<Triple>,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Color)>,
    ) -> Result<Self, LinkError> {
        let mut g = Self::new(host_edge);
        for (u, v, c) in edges {
            g.insert(u, v, c)?;
        }
        Ok(g)
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId, color: Color) -> Result<(), LinkError> {
        if u == v {
            return Err(LinkError::InvalidLinkEdge(u, v, "loop"));
        }
        if let Some(e) = self.host_edge {
            if e.contains(u) || e.contains(v) {
                return Err(LinkError::InvalidLinkEdge(u, v, "meets the host edge"));
            }
        }
        let key = ordered_pair(u, v);
        if self.edges.contains_key(&key) {
            return Err(LinkError::InvalidLinkEdge(u, v, "pair already colored"));
        }
        if self.color_at(u, color) || self.color_at(v, color) {
            return Err(LinkError::InvalidLinkEdge(u, v, "color class would not be a matching"));
        }
        self.edges.insert(key, color);
        Ok(())
    }

    fn color_at(&self, v: VertexId, color: Color) -> bool {
        self.edges
            .iter()
            .any(|(&(x, y), &c)| c == color && (x == v || y == v))
    }

    pub fn host_edge(&self) -> Option<Triple> {
        self.host_edge
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Colored edges in lexicographic order of their vertex pair.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Color)> + '_ {
        self.edges.iter().map(|(&(u, v), &c)| (u, v, c))
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.edges.keys().flat_map(|&(u, v)| [u, v]).collect()
    }

    pub fn color(&self, u: VertexId, v: VertexId) -> Option<Color> {
        self.edges.get(&ordered_pair(u, v)).copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.color(u, v).is_some()
    }

    /// Edges of one color, sorted.
    pub fn class(&self, color: Color) -> Vec<(VertexId, VertexId)> {
        self.edges
            .iter()
            .filter(|(_, &c)| c == color)
            .map(|(&p, _)| p)
            .collect()
    }

    pub fn class_sizes(&self) -> [usize; 3] {
        let mut sizes = [0; 3];
        for c in self.edges.values() {
            sizes[c.index()] += 1;
        }
        sizes
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<(VertexId, Color)> {
        self.edges
            .iter()
            .filter_map(|(&(x, y), &c)| match v {
                _ if v == x => Some((y, c)),
                _ if v == y => Some((x, c)),
                _ => None,
            })
            .collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.keys().filter(|&&(x, y)| x == v || y == v).count()
    }

    /// Image under a vertex map and a color permutation (`perm[c]` is the new color of `c`).
    pub fn relabel(&self, vertex_map: &BTreeMap<VertexId, VertexId>, perm: [Color; 3]) -> Self {
        let mut g = ColoredLinkGraph::new(None);
        for (u, v, c) in self.edges() {
            g.insert(vertex_map[&u], vertex_map[&v], perm[c.index()])
                .expect("relabelling preserves a proper coloring");
        }
        g.host_edge = self.host_edge;
        g
    }

    /// Vertices renumbered `0..k` in increasing order, with matching blocks.
    pub(crate) fn dense_blocks(&self, perm: [Color; 3]) -> (Vec<VertexId>, Vec<Block>) {
        let verts: Vec<VertexId> = self.vertices().into_iter().collect();
        let index: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let blocks = self
            .edges()
            .map(|(u, v, c)| Block::pair(perm[c.index()].index() as u8, index[&u], index[&v]))
            .collect();
        (verts, blocks)
    }

    /// Checks every structural invariant from scratch.
    pub fn is_valid(&self) -> bool {
        let proper = Color::ALL.iter().all(|&c| {
            let class = self.class(c);
            let touched: BTreeSet<VertexId> = class.iter().flat_map(|&(u, v)| [u, v]).collect();
            touched.len() == 2 * class.len()
        });
        let off_host = match self.host_edge {
            Some(e) => self.vertices().iter().all(|v| !e.contains(*v)),
            None => true,
        };
        proper && off_host
    }
}

impl fmt::Display for ColoredLinkGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (u, v, c) in self.edges() {
            writeln!(f, "{u} {v} {c}")?;
        }
        Ok(())
    }
}

/// Link graph of `e` in `h`.
pub fn link_graph(h: &LinearThreeGraph, e: &Triple) -> Result<ColoredLinkGraph, LinkError> {
    if !h.contains_edge(e) {
        return Err(GraphError::EdgeNotPresent(*e).into());
    }
    let mut g = ColoredLinkGraph::new(Some(*e));
    for (i, z) in e.vertices().into_iter().enumerate() {
        for f in h.edges_at(z).filter(|f| *f != e) {
            let (x, y) = f.others(z).expect("incident edge contains z");
            g.insert(x, y, Color::from_index(i))?;
        }
    }
    Ok(g)
}

/// One edge of each color, pairwise vertex-disjoint, indexed by color.
pub type RainbowMatching = [(VertexId, VertexId); 3];

/// Lexicographically least rainbow matching (ordered by the A, then B, then C edge).
pub fn has_rainbow_matching(g: &ColoredLinkGraph) -> Option<RainbowMatching> {
    let classes = Color::ALL.map(|c| g.class(c));
    let disjoint = |p: (VertexId, VertexId), q: (VertexId, VertexId)| {
        p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1
    };
    for &ea in &classes[0] {
        for &eb in classes[1].iter().filter(|&&eb| disjoint(ea, eb)) {
            if let Some(&ec) = classes[2]
                .iter()
                .find(|&&ec| disjoint(ea, ec) && disjoint(eb, ec))
            {
                return Some([ea, eb, ec]);
            }
        }
    }
    None
}

/// A base edge and three pairwise disjoint jewels, each meeting the base once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crown {
    pub base: Triple,
    pub jewels: [Triple; 3],
}

impl Crown {
    pub fn edges(&self) -> [Triple; 4] {
        [self.base, self.jewels[0], self.jewels[1], self.jewels[2]]
    }
}

impl fmt::Display for Crown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "base {} jewels {} {} {}",
            self.base, self.jewels[0], self.jewels[1], self.jewels[2]
        )
    }
}

pub fn is_crown(h: &LinearThreeGraph, base: &Triple, jewels: &[Triple; 3]) -> bool {
    std::iter::once(base).chain(jewels).all(|t| h.contains_edge(t))
        && jewels.iter().all(|j| j.meet(base) == 1)
        && jewels[0].is_disjoint(&jewels[1])
        && jewels[0].is_disjoint(&jewels[2])
        && jewels[1].is_disjoint(&jewels[2])
}

pub fn crown_with_base(h: &LinearThreeGraph, e: &Triple) -> Result<Option<Crown>, LinkError> {
    let g = link_graph(h, e)?;
    Ok(has_rainbow_matching(&g).map(|m| {
        let ends = e.vertices();
        let jewels = [0, 1, 2].map(|i| Triple::of(m[i].0, m[i].1, ends[i]));
        Crown { base: *e, jewels }
    }))
}

/// First crown found scanning bases in lexicographic order.
pub fn find_crown(h: &LinearThreeGraph) -> Option<Crown> {
    h.edges().find_map(|e| {
        let crown = crown_with_base(h, e).expect("base taken from the graph")?;
        debug_assert!(is_crown(h, &crown.base, &crown.jewels));
        Some(crown)
    })
}

/// A crown that uses `f` as its base or as one of its jewels.
pub fn find_crown_containing(h: &LinearThreeGraph, f: &Triple) -> Option<Crown> {
    if let Some(c) = crown_with_base(h, f).ok().flatten() {
        return Some(c);
    }
    for v in f.vertices() {
        for base in h.edges_at(v).filter(|b| *b != f) {
            let (u, w) = base.others(v).expect("base contains v");
            for j2 in h.edges_at(u).filter(|j| *j != base && j.is_disjoint(f)) {
                if let Some(j3) = h
                    .edges_at(w)
                    .find(|j| *j != base && j.is_disjoint(f) && j.is_disjoint(j2))
                {
                    let crown = Crown {
                        base: *base,
                        jewels: [*f, *j2, *j3],
                    };
                    debug_assert!(is_crown(h, &crown.base, &crown.jewels));
                    return Some(crown);
                }
            }
        }
    }
    None
}

/// Ordered five link-graph vertices `x1..x5` with edges `x1x2`, `x2x3`, `x4x5`
/// and `color(x1x2) == color(x4x5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GoodQuintuple(pub [VertexId; 5]);

pub fn is_good_quintuple(g: &ColoredLinkGraph, q: &[VertexId; 5]) -> bool {
    let distinct = (0..5).all(|i| (i + 1..5).all(|j| q[i] != q[j]));
    if !distinct || !g.has_edge(q[1], q[2]) {
        return false;
    }
    match (g.color(q[0], q[1]), g.color(q[3], q[4])) {
        (Some(c12), Some(c45)) => c12 == c45,
        _ => false,
    }
}

/// Every good quintuple of `g`, sorted.
pub fn good_quintuples(g: &ColoredLinkGraph) -> Vec<GoodQuintuple> {
    let mut out = Vec::new();
    for (p, q, color) in g.edges() {
        let same_color = g.class(color);
        for (x1, x2) in [(p, q), (q, p)] {
            for (x3, _) in g.neighbors(x2).into_iter().filter(|&(x, _)| x != x1) {
                for &(s, t) in &same_color {
                    if [s, t].iter().any(|y| [x1, x2, x3].contains(y)) {
                        continue;
                    }
                    out.push(GoodQuintuple([x1, x2, x3, s, t]));
                    out.push(GoodQuintuple([x1, x2, x3, t, s]));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Vertices that are the first vertex of some good quintuple.
pub fn quintuple_starters(g: &ColoredLinkGraph) -> BTreeSet<VertexId> {
    good_quintuples(g).into_iter().map(|q| q.0[0]).collect()
}

/// The crown produced by a good quintuple and an edge `f` through `x1` that
/// avoids `e` and the rest of the quintuple.
pub fn crown_from_quintuple(
    h: &LinearThreeGraph,
    e: &Triple,
    q: &GoodQuintuple,
    f: &Triple,
) -> Result<Crown, LinkError> {
    let g = link_graph(h, e)?;
    let x = q.0;
    if !is_good_quintuple(&g, &x) {
        return Err(LinkError::PreconditionViolated(
            "quintuple is not good in the link graph".into(),
        ));
    }
    if !h.contains_edge(f) {
        return Err(LinkError::PreconditionViolated(format!("{f} is not an edge of the host")));
    }
    if !f.is_disjoint(e) {
        return Err(LinkError::PreconditionViolated(format!("{f} meets the host edge {e}")));
    }
    let hits: Vec<VertexId> = x.iter().copied().filter(|&v| f.contains(v)).collect();
    if hits != [x[0]] {
        return Err(LinkError::PreconditionViolated(format!(
            "{f} must meet the quintuple exactly in x1 = {}, meets {hits:?}",
            x[0]
        )));
    }
    let behind = |u: VertexId, v: VertexId| -> Triple {
        let c = g.color(u, v).expect("quintuple edge is in the link graph");
        Triple::of(u, v, e.vertices()[c.index()])
    };
    let crown = Crown {
        base: behind(x[0], x[1]),
        jewels: [*f, behind(x[1], x[2]), behind(x[3], x[4])],
    };
    debug_assert!(is_crown(h, &crown.base, &crown.jewels));
    Ok(crown)
}

/// Remove edges through the endpoints of `e` (never `e` itself), largest first,
/// until the endpoint degrees equal `target`.
///
/// Endpoints are matched to target coordinates in order of decreasing degree,
/// ties broken by vertex id.
pub fn trim_to_degree_vector(
    h: &LinearThreeGraph,
    e: &Triple,
    target: DegreeVector,
) -> Result<LinearThreeGraph, LinkError> {
    let current = h.degree_vector(e)?;
    if !current.dominates(&target) || target.coords()[2] < 1 {
        return Err(LinkError::TargetNotDominated { current, target });
    }
    let mut ends = e.vertices();
    ends.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    let mut out = h.clone();
    for (v, want) in ends.into_iter().zip(target.coords()) {
        let surplus = h.degree(v) - want;
        let doomed: Vec<Triple> = h
            .edges_at(v)
            .filter(|f| *f != e)
            .rev()
            .take(surplus)
            .copied()
            .collect();
        for f in doomed {
            out.remove_edge(&f)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, usize)]) -> LinearThreeGraph {
        LinearThreeGraph::from_edges(n, edges.iter().map(|&(a, b, c)| Triple::of(a, b, c)))
            .unwrap()
    }

    /// Base (0,1,2) with jewels (0,3,4), (1,5,6), (2,7,8).
    fn crown9() -> LinearThreeGraph {
        graph(9, &[(0, 1, 2), (0, 3, 4), (1, 5, 6), (2, 7, 8)])
    }

    #[test]
    fn link_of_lonely_edge_is_empty() {
        let h = graph(3, &[(0, 1, 2)]);
        assert_eq!(link_graph(&h, &Triple::of(0, 1, 2)).unwrap().edge_count(), 0);
        assert!(link_graph(&h, &Triple::of(0, 1, 3)).is_err());
    }

    #[test]
    fn crown_link_is_a_rainbow_matching() {
        let h = crown9();
        let g = link_graph(&h, &Triple::of(0, 1, 2)).unwrap();
        assert_eq!(g.class_sizes(), [1, 1, 1]);
        assert_eq!(has_rainbow_matching(&g), Some([(3, 4), (5, 6), (7, 8)]));
        let crown = crown_with_base(&h, &Triple::of(0, 1, 2)).unwrap().unwrap();
        assert_eq!(
            crown.jewels,
            [Triple::of(0, 3, 4), Triple::of(1, 5, 6), Triple::of(2, 7, 8)]
        );
        assert_eq!(find_crown(&h), Some(crown));
    }

    #[test]
    fn is_crown_rejects_bad_shapes() {
        let h = crown9();
        let base = Triple::of(0, 1, 2);
        assert!(is_crown(&h, &base, &[Triple::of(0, 3, 4), Triple::of(1, 5, 6), Triple::of(2, 7, 8)]));
        let h2 = graph(11, &[(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 7, 8), (6, 9, 10)]);
        assert!(!is_crown(&h2, &base, &[Triple::of(0, 3, 4), Triple::of(1, 3, 5), Triple::of(2, 7, 8)]));
        assert!(!is_crown(&h2, &base, &[Triple::of(0, 3, 4), Triple::of(6, 9, 10), Triple::of(2, 7, 8)]));
        assert!(!is_crown(&h, &base, &[Triple::of(0, 3, 4), Triple::of(1, 5, 7), Triple::of(2, 7, 8)]));
    }

    #[test]
    fn coloring_violations_are_rejected() {
        let mut g = ColoredLinkGraph::new(Some(Triple::of(0, 1, 2)));
        g.insert(3, 4, Color::A).unwrap();
        assert!(g.insert(4, 5, Color::A).is_err());
        assert!(g.insert(4, 3, Color::B).is_err());
        assert!(g.insert(1, 5, Color::B).is_err());
        g.insert(4, 5, Color::B).unwrap();
        assert!(g.is_valid());
    }

    #[test]
    fn no_rainbow_when_classes_collide() {
        // A-B-C path: every pair of colors is adjacent somewhere.
        let g = ColoredLinkGraph::from_edges(
            None,
            [(0, 1, Color::A), (1, 2, Color::B), (2, 3, Color::C), (3, 0, Color::B)],
        )
        .unwrap();
        assert_eq!(has_rainbow_matching(&g), None);
    }

    #[test]
    fn crown_built_from_quintuple() {
        // e = (0,1,2): a = 0, b = 1. x1..x5 = 3..7, f = (3, 8, 9).
        let h = graph(10, &[(0, 1, 2), (0, 3, 4), (1, 4, 5), (0, 6, 7), (3, 8, 9)]);
        let e = Triple::of(0, 1, 2);
        let q = GoodQuintuple([3, 4, 5, 6, 7]);
        let crown = crown_from_quintuple(&h, &e, &q, &Triple::of(3, 8, 9)).unwrap();
        assert_eq!(crown.base, Triple::of(0, 3, 4));
        assert_eq!(
            crown.jewels,
            [Triple::of(3, 8, 9), Triple::of(1, 4, 5), Triple::of(0, 6, 7)]
        );
        assert!(is_crown(&h, &crown.base, &crown.jewels));

        let h2 = graph(10, &[(0, 1, 2), (0, 3, 4), (1, 4, 5), (0, 6, 7), (3, 6, 9)]);
        let err = crown_from_quintuple(&h2, &e, &q, &Triple::of(3, 6, 9)).unwrap_err();
        assert!(matches!(err, LinkError::PreconditionViolated(_)));

        let h3 = graph(10, &[(0, 1, 2), (0, 3, 4), (1, 4, 5), (0, 6, 7), (2, 3, 9)]);
        let err = crown_from_quintuple(&h3, &e, &q, &Triple::of(2, 3, 9)).unwrap_err();
        assert!(matches!(err, LinkError::PreconditionViolated(m) if m.contains("meets the host edge")));
    }

    #[test]
    fn quintuple_reorderings() {
        // Triangle x1 x2 x3 plus a far edge x4 x5 of x1x2's color.
        let g = ColoredLinkGraph::from_edges(
            None,
            [(1, 2, Color::A), (2, 3, Color::B), (1, 3, Color::C), (4, 5, Color::A)],
        )
        .unwrap();
        let q = [1, 2, 3, 4, 5];
        assert!(is_good_quintuple(&g, &q));
        assert!(is_good_quintuple(&g, &[1, 2, 3, 5, 4]));
        assert!(!is_good_quintuple(&g, &[3, 2, 1, 4, 5]));
        assert!(is_good_quintuple(&g, &[2, 1, 3, 4, 5]));
        let no_tri = ColoredLinkGraph::from_edges(
            None,
            [(1, 2, Color::A), (2, 3, Color::B), (4, 5, Color::A)],
        )
        .unwrap();
        assert!(!is_good_quintuple(&no_tri, &[2, 1, 3, 4, 5]));
        assert!(quintuple_starters(&ColoredLinkGraph::new(None)).is_empty());
    }

    #[test]
    fn trimming() {
        // e = (0,1,2) with degrees 4, 3, 2.
        let h = graph(
            15,
            &[(0, 1, 2), (0, 3, 4), (0, 5, 6), (0, 7, 8), (1, 9, 10), (1, 11, 12), (2, 13, 14)],
        );
        let e = Triple::of(0, 1, 2);
        let out = trim_to_degree_vector(&h, &e, DegreeVector::new(3, 2, 2)).unwrap();
        assert_eq!(out.degree_vector(&e).unwrap(), DegreeVector::new(3, 2, 2));
        assert!(!out.contains_edge(&Triple::of(0, 7, 8)));
        assert!(!out.contains_edge(&Triple::of(1, 11, 12)));
        assert_eq!(trim_to_degree_vector(&h, &e, DegreeVector::new(4, 3, 2)).unwrap(), h);
        assert!(matches!(
            trim_to_degree_vector(&h, &e, DegreeVector::new(5, 5, 5)),
            Err(LinkError::TargetNotDominated { .. })
        ));
        let again = trim_to_degree_vector(&out, &e, DegreeVector::new(3, 2, 2)).unwrap();
        assert_eq!(again, out);
    }
}
