//! Named rainbow-free link graphs and their classification.
//!
//! `G1`..`G5` are the rainbow-free unions of three 3-edge matchings, up to
//! vertex relabelling and color permutation. [`enumerate_444`] re-derives that
//! list from scratch; [`verify_catalog`] checks the stored transcriptions
//! against it. `G6` is the rainbow-free link graph made of two vertex-disjoint
//! four-cycles with color classes of sizes 3, 3 and 2.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonical_form, CanonicalCode};
use crate::graph::VertexId;
use crate::links::{has_rainbow_matching, Color, ColoredLinkGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog graph {0:?} (expected G1..G6)")]
    UnknownName(String),
    #[error("stored graph {name} fails validation: {reason}")]
    InvalidBuiltin { name: CatalogName, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CatalogName {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
}

impl CatalogName {
    pub const ALL: [CatalogName; 6] = [
        CatalogName::G1,
        CatalogName::G2,
        CatalogName::G3,
        CatalogName::G4,
        CatalogName::G5,
        CatalogName::G6,
    ];

    /// The five graphs of the `<4,4,4>` classification.
    pub const TRIPLE_FOUR: [CatalogName; 5] = [
        CatalogName::G1,
        CatalogName::G2,
        CatalogName::G3,
        CatalogName::G4,
        CatalogName::G5,
    ];
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", *self as usize + 1)
    }
}

impl FromStr for CatalogName {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CatalogName::ALL
            .into_iter()
            .find(|n| n.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| CatalogError::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct CatalogGraph {
    pub name: CatalogName,
    pub graph: ColoredLinkGraph,
    pub source_note: &'static str,
}

// Vertex naming used by the transcriptions below.
const V1: usize = 0;
const V2: usize = 1;
const V3: usize = 2;
const V4: usize = 3;
const V5: usize = 4;
const V6: usize = 5;
const V7: usize = 6;
// Three-vertex path v1 v2 v3, four-cycle w1..w4, and one extra vertex u.
const W1: usize = 3;
const W2: usize = 4;
const W3: usize = 5;
const W4: usize = 6;
const U: usize = 7;

use Color::{A, B, C};

fn path3_cycle4() -> Vec<(VertexId, VertexId, Color)> {
    vec![
        (V1, V2, A),
        (V2, V3, B),
        (W1, W2, A),
        (W2, W3, B),
        (W3, W4, A),
        (W4, W1, B),
    ]
}

fn path7() -> Vec<(VertexId, VertexId, Color)> {
    vec![
        (V1, V2, A),
        (V2, V3, B),
        (V3, V4, A),
        (V4, V5, B),
        (V5, V6, A),
        (V6, V7, B),
    ]
}

fn with_c_edges(
    mut base: Vec<(VertexId, VertexId, Color)>,
    c_edges: &[(VertexId, VertexId)],
) -> Vec<(VertexId, VertexId, Color)> {
    base.extend(c_edges.iter().map(|&(u, v)| (u, v, C)));
    base
}

fn transcription(name: CatalogName) -> (Vec<(VertexId, VertexId, Color)>, &'static str) {
    match name {
        CatalogName::G1 => (
            with_c_edges(path3_cycle4(), &[(V1, V3), (W1, W3), (W2, W4)]),
            "A-B path v1v2v3 and disjoint A-B four-cycle w1w2w3w4; C-edges v1v3, w1w3, w2w4",
        ),
        CatalogName::G2 => (
            with_c_edges(path3_cycle4(), &[(V1, V3), (U, V2), (W1, W3)]),
            "A-B path v1v2v3 and disjoint A-B four-cycle w1w2w3w4; C-edges v1v3, uv2, w1w3 with u outside the A-B union",
        ),
        CatalogName::G3 => (
            with_c_edges(path7(), &[(V1, V3), (V2, V4), (V5, V7)]),
            "A-B path v1..v7; C-edges v1v3, v2v4, v5v7",
        ),
        CatalogName::G4 => (
            with_c_edges(path7(), &[(V1, V3), (V2, V7), (V4, V6)]),
            "A-B path v1..v7; C-edges v1v3, v2v7, v4v6",
        ),
        CatalogName::G5 => (
            with_c_edges(path3_cycle4(), &[(U, V2), (W1, W3), (W2, W4)]),
            "A-B path v1v2v3 and disjoint A-B four-cycle w1w2w3w4; C-edges uv2, w1w3, w2w4 with u outside the A-B union",
        ),
        CatalogName::G6 => (
            vec![
                // First component: four-cycle c1c2c3c4 colored C, A, C, B.
                (0, 1, C),
                (1, 2, A),
                (2, 3, C),
                (3, 0, B),
                // Second component: alternating A-B four-cycle d1d2d3d4.
                (4, 5, A),
                (5, 6, B),
                (6, 7, A),
                (7, 4, B),
            ],
            "two disjoint four-cycles: c1c2c3c4 colored C,A,C,B and d1d2d3d4 colored A,B,A,B",
        ),
    }
}

/// A stored catalog graph, validated on load.
pub fn builtin(name: &str) -> Result<CatalogGraph, CatalogError> {
    builtin_graph(name.parse()?)
}

pub fn builtin_graph(name: CatalogName) -> Result<CatalogGraph, CatalogError> {
    let (edges, source_note) = transcription(name);
    let invalid = |reason: String| CatalogError::InvalidBuiltin { name, reason };
    let graph = ColoredLinkGraph::from_edges(None, edges).map_err(|e| invalid(e.to_string()))?;
    if let Some(m) = has_rainbow_matching(&graph) {
        return Err(invalid(format!("has rainbow matching {m:?}")));
    }
    let expected = if name == CatalogName::G6 { [3, 3, 2] } else { [3, 3, 3] };
    if graph.class_sizes() != expected {
        return Err(invalid(format!(
            "color class sizes {:?}, expected {expected:?}",
            graph.class_sizes()
        )));
    }
    if name == CatalogName::G6 && !disjoint_four_cycles(&graph) {
        return Err(invalid("does not contain two vertex-disjoint four-cycles".into()));
    }
    Ok(CatalogGraph {
        name,
        graph,
        source_note,
    })
}

/// A vertex bijection and color permutation carrying one colored graph onto another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorIso {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    /// `color_perm[c]` is the image of color `c`.
    pub color_perm: [Color; 3],
}

/// All six permutations of the colors, identity first.
pub fn color_permutations() -> [[Color; 3]; 6] {
    [
        [A, B, C],
        [A, C, B],
        [B, A, C],
        [B, C, A],
        [C, A, B],
        [C, B, A],
    ]
}

fn code_under(g: &ColoredLinkGraph, perm: [Color; 3]) -> (Vec<VertexId>, crate::canon::Canonical) {
    let (verts, blocks) = g.dense_blocks(perm);
    let can = canonical_form(verts.len(), &blocks, None);
    (verts, can)
}

/// Exact (color-preserving) canonical code.
pub fn colored_code(g: &ColoredLinkGraph) -> CanonicalCode {
    code_under(g, [A, B, C]).1.code
}

/// Canonical code up to color permutation: least code over the six permutations.
pub fn color_class_key(g: &ColoredLinkGraph) -> CanonicalCode {
    color_permutations()
        .into_iter()
        .map(|p| code_under(g, p).1.code)
        .min()
        .expect("six permutations")
}

/// Isomorphism from `g` onto `h` allowing a permutation of the colors.
pub fn color_iso(g: &ColoredLinkGraph, h: &ColoredLinkGraph) -> Option<ColorIso> {
    if g.edge_count() != h.edge_count() || g.vertices().len() != h.vertices().len() {
        return None;
    }
    let (h_verts, h_can) = code_under(h, [A, B, C]);
    let h_at = h_can.inverse();
    for perm in color_permutations() {
        let (g_verts, g_can) = code_under(g, perm);
        if g_can.code != h_can.code {
            continue;
        }
        let vertex_map: BTreeMap<VertexId, VertexId> = g_verts
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, h_verts[h_at[g_can.labeling[i]]]))
            .collect();
        let iso = ColorIso {
            vertex_map,
            color_perm: perm,
        };
        debug_assert!(g.relabel(&iso.vertex_map, perm).edges().eq(h.edges()));
        return Some(iso);
    }
    None
}

/// Each color class's vertex set meets every edge of each other class.
pub fn classes_cross_meet(g: &ColoredLinkGraph) -> bool {
    Color::ALL.iter().all(|&ci| {
        let touched: BTreeSet<VertexId> = g.class(ci).iter().flat_map(|&(u, v)| [u, v]).collect();
        Color::ALL
            .iter()
            .filter(|&&cj| cj != ci)
            .all(|&cj| g.class(cj).iter().all(|&(u, v)| touched.contains(&u) || touched.contains(&v)))
    })
}

/// All three-edge matchings (as sorted lists of pairs) on `0..pool`,
/// avoiding `forbidden` pairs.
fn matchings_of_three(
    pool: usize,
    allowed: impl Fn(VertexId, VertexId) -> bool,
) -> Vec<[(VertexId, VertexId); 3]> {
    let pairs: Vec<(VertexId, VertexId)> = (0..pool)
        .flat_map(|u| (u + 1..pool).map(move |v| (u, v)))
        .filter(|&(u, v)| allowed(u, v))
        .collect();
    let disjoint = |p: (VertexId, VertexId), q: (VertexId, VertexId)| {
        p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1
    };
    let mut out = Vec::new();
    for (i, &p) in pairs.iter().enumerate() {
        for (j, &q) in pairs.iter().enumerate().skip(i + 1) {
            if !disjoint(p, q) {
                continue;
            }
            for &r in &pairs[j + 1..] {
                if disjoint(p, r) && disjoint(q, r) {
                    out.push([p, q, r]);
                }
            }
        }
    }
    out
}

/// Rainbow-free unions of three 3-edge matchings, one representative per
/// class up to vertex relabelling and color permutation.
///
/// The A-matching is fixed on `0..6`. B-matchings range over all placements on
/// those vertices plus six fresh ones and are reduced to isomorphism classes;
/// C-matchings then range over pairs on the union plus six fresh vertices that
/// cannot complete a rainbow matching. Representatives are returned in order of
/// their class key.
pub fn enumerate_444() -> Vec<ColoredLinkGraph> {
    let a_edges = [(0, 1), (2, 3), (4, 5)];
    let base = ColoredLinkGraph::from_edges(None, a_edges.iter().map(|&(u, v)| (u, v, A)))
        .expect("A-matching");

    let mut ab_classes: BTreeMap<CanonicalCode, ColoredLinkGraph> = BTreeMap::new();
    for b in matchings_of_three(12, |u, v| !base.has_edge(u, v)) {
        let mut g = base.clone();
        for (u, v) in b {
            g.insert(u, v, B).expect("B-matching on fresh pairs");
        }
        let g = densify(&g);
        ab_classes.entry(colored_code(&g)).or_insert(g);
    }

    let found: Vec<(CanonicalCode, ColoredLinkGraph)> = ab_classes
        .into_par_iter()
        .flat_map_iter(|(_, ab)| {
            let k = ab.vertices().len();
            let classes = [ab.class(A), ab.class(B)];
            let safe = |u: VertexId, v: VertexId| -> bool {
                if ab.has_edge(u, v) {
                    return false;
                }
                let avoids = |p: &(VertexId, VertexId)| ![u, v].contains(&p.0) && ![u, v].contains(&p.1);
                !classes[0].iter().filter(|p| avoids(p)).any(|pa| {
                    classes[1]
                        .iter()
                        .filter(|p| avoids(p))
                        .any(|pb| ![pa.0, pa.1].contains(&pb.0) && ![pa.0, pa.1].contains(&pb.1))
                })
            };
            matchings_of_three(k + 6, safe)
                .into_iter()
                .map(move |c| {
                    let mut g = ab.clone();
                    for (u, v) in c {
                        g.insert(u, v, C).expect("C-matching avoids A and B edges");
                    }
                    debug_assert!(has_rainbow_matching(&g).is_none());
                    g
                })
                .collect::<Vec<_>>()
        })
        .map(|g| {
            let g = densify(&g);
            (color_class_key(&g), g)
        })
        .collect();

    let mut classes: BTreeMap<CanonicalCode, ColoredLinkGraph> = BTreeMap::new();
    for (key, g) in found {
        classes.entry(key).or_insert(g);
    }
    classes.into_values().collect()
}

/// Renumber vertices to `0..k` preserving order.
fn densify(g: &ColoredLinkGraph) -> ColoredLinkGraph {
    let map: BTreeMap<VertexId, VertexId> = g.vertices().into_iter().enumerate().map(|(i, v)| (v, i)).collect();
    g.relabel(&map, [A, B, C])
}

/// The catalog name of a rainbow-free link graph with three 3-edge color classes.
pub fn classify_444(g: &ColoredLinkGraph) -> Option<CatalogName> {
    if g.class_sizes() != [3, 3, 3] || has_rainbow_matching(g).is_some() {
        return None;
    }
    CatalogName::TRIPLE_FOUR.into_iter().find(|&name| {
        let stored = builtin_graph(name).expect("builtins validate");
        color_iso(g, &stored.graph).is_some()
    })
}

/// Whether the underlying uncolored graph has two vertex-disjoint four-cycles.
pub fn disjoint_four_cycles(g: &ColoredLinkGraph) -> bool {
    let verts: Vec<VertexId> = g.vertices().into_iter().collect();
    let mut cycles: BTreeSet<[VertexId; 4]> = BTreeSet::new();
    for &a in &verts {
        for (b, _) in g.neighbors(a) {
            for (c, _) in g.neighbors(b).into_iter().filter(|&(c, _)| c != a) {
                for (d, _) in g.neighbors(c).into_iter().filter(|&(d, _)| d != a && d != b) {
                    if g.has_edge(d, a) {
                        let mut set = [a, b, c, d];
                        set.sort_unstable();
                        cycles.insert(set);
                    }
                }
            }
        }
    }
    let cycles: Vec<[VertexId; 4]> = cycles.into_iter().collect();
    cycles.iter().enumerate().any(|(i, p)| {
        cycles[i + 1..]
            .iter()
            .any(|q| p.iter().all(|v| !q.contains(v)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogRow {
    pub name: CatalogName,
    pub vertices: usize,
    pub edges: usize,
    /// Number of enumerated classes color-isomorphic to this builtin.
    pub matches: usize,
}

#[derive(Debug, Clone)]
pub struct CatalogVerification {
    pub classes: usize,
    pub rows: Vec<CatalogRow>,
    /// Enumerated classes matching no builtin.
    pub unmatched_classes: usize,
}

impl CatalogVerification {
    pub fn passed(&self) -> bool {
        self.classes == 5 && self.unmatched_classes == 0 && self.rows.iter().all(|r| r.matches == 1)
    }
}

/// Run the enumeration and match every class against `G1`..`G5`.
pub fn verify_catalog() -> Result<CatalogVerification, CatalogError> {
    let enumerated = enumerate_444();
    let builtins: Vec<CatalogGraph> = CatalogName::TRIPLE_FOUR
        .into_iter()
        .map(builtin_graph)
        .collect::<Result<_, _>>()?;
    let rows = builtins
        .iter()
        .map(|b| CatalogRow {
            name: b.name,
            vertices: b.graph.vertices().len(),
            edges: b.graph.edge_count(),
            matches: enumerated.iter().filter(|g| color_iso(g, &b.graph).is_some()).count(),
        })
        .collect();
    let unmatched_classes = enumerated
        .iter()
        .filter(|g| builtins.iter().all(|b| color_iso(g, &b.graph).is_none()))
        .count();
    Ok(CatalogVerification {
        classes: enumerated.len(),
        rows,
        unmatched_classes,
    })
}
