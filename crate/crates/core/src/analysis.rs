//! Counting-argument audit for crown-free systems, critical configurations,
//! the `<6,4,2>` check, and the exclusion scan around a `G6` link graph.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{builtin_graph, color_iso, CatalogName};
use crate::constructions::minimal_host;
use crate::graph::{ordered_pair, DegreeVector, GraphError, LinearThreeGraph, Triple, VertexId};
use crate::links::{find_crown, is_crown, link_graph, Crown, LinkError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("vertex {0} has degree at most 1; remove it and its edge first")]
    Reducible(VertexId),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// The two degree vectors whose domination is excluded by the `3n/2` audit.
pub fn theorem2_restrictions() -> [DegreeVector; 2] {
    [DegreeVector::new(4, 4, 3), DegreeVector::new(5, 4, 2)]
}

/// Edges whose degree vector dominates one of the restrictions.
pub fn dominating_edges(h: &LinearThreeGraph) -> Vec<(Triple, DegreeVector)> {
    let restrictions = theorem2_restrictions();
    h.edges()
        .filter_map(|e| {
            let dv = h.degree_vector(e).expect("edge of h");
            restrictions.iter().any(|r| dv.dominates(r)).then_some((*e, dv))
        })
        .collect()
}

/// Degree-2 vertices whose two edges have all four other endpoints of degree 4.
pub fn special_vertices(h: &LinearThreeGraph) -> BTreeSet<VertexId> {
    (0..h.n())
        .filter(|&v| {
            h.degree(v) == 2
                && h.edges_at(v).all(|t| {
                    let (x, y) = t.others(v).expect("incident");
                    h.degree(x) == 4 && h.degree(y) == 4
                })
        })
        .collect()
}

/// Repeatedly delete a vertex of degree at most one together with its edge,
/// then drop the deleted vertices. Returns the reduced graph.
pub fn reduce_low_degree(h: &LinearThreeGraph) -> LinearThreeGraph {
    let mut g = h.clone();
    let mut alive = vec![true; h.n()];
    while let Some(v) = (0..g.n()).find(|&v| alive[v] && g.degree(v) <= 1) {
        let first = g.edges_at(v).next().copied();
        if let Some(t) = first {
            g.remove_edge(&t).expect("edge present");
        }
        alive[v] = false;
    }
    let keep: Vec<VertexId> = (0..g.n()).filter(|&v| alive[v]).collect();
    let index: BTreeMap<VertexId, VertexId> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    LinearThreeGraph::from_edges(keep.len(), g.edges().map(|t| t.map(|v| index[&v])))
        .expect("subgraph of a linear system")
}

/// Values of the counting chain, in the order they are compared.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chain {
    pub edges: usize,
    pub e1_count: usize,
    pub e2_count: usize,
    /// Sum over `Z` of `E1`-degrees; at least `2|E1|`.
    pub z_e1_degree_sum: usize,
    /// `(sum_{Z1} d_E1 + sum_{Z2} (2 - d_E2)) / 2`, an upper bound for `|E1|`.
    pub e1_bound: f64,
    /// `sum_{Z2} d_E2 + sum_{Z3} d_E2`, equal to `|E2|` under the hypotheses.
    pub e2_sum: f64,
    /// `e1_bound + e2_sum`.
    pub combined: f64,
    /// `3(|Z1| + |Z2|)/2 + 2|Z3|`.
    pub rhs_first_ineq: f64,
    /// `3(|Z1| + |Z2|)/2 + |Z3| + |Y|`.
    pub rhs_second_ineq: f64,
    /// `3n/2`.
    pub final_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub y: Vec<VertexId>,
    pub y1: Vec<VertexId>,
    pub z1: Vec<VertexId>,
    pub z2: Vec<VertexId>,
    pub z3: Vec<VertexId>,
    pub e1: Vec<Triple>,
    pub e2: Vec<Triple>,
    pub crown_free: bool,
    pub dominating_edges: Vec<(Triple, DegreeVector)>,
    pub chain: Chain,
    /// Every statement of the argument, evaluated numerically.
    pub checks: Vec<AuditCheck>,
    pub hypotheses_ok: bool,
    pub conclusion_ok: bool,
}

impl AuditReport {
    pub fn z(&self) -> Vec<VertexId> {
        let mut z: Vec<VertexId> = self.z1.iter().chain(&self.z2).chain(&self.z3).copied().collect();
        z.sort_unstable();
        z
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect()
    }

    /// Under the hypotheses every check must hold; otherwise nothing is claimed.
    pub fn consistent(&self) -> bool {
        !self.hypotheses_ok || (self.conclusion_ok && self.failed_checks().is_empty())
    }
}

impl serde::Serialize for DegreeVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl serde::Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

/// Partition the vertices and edges as in the `3n/2` counting argument and
/// evaluate every step. Requires minimum degree 2.
pub fn audit_theorem2(h: &LinearThreeGraph) -> Result<AuditReport, AnalysisError> {
    if let Some(v) = (0..h.n()).find(|&v| h.degree(v) <= 1) {
        return Err(AnalysisError::Reducible(v));
    }
    let n = h.n();
    let deg = h.degrees();
    let special = special_vertices(h);
    let in_z: Vec<bool> = deg.iter().map(|&d| d <= 3).collect();

    let y: Vec<VertexId> = (0..n).filter(|&v| !in_z[v]).collect();
    let y1: Vec<VertexId> = y.iter().copied().filter(|&v| deg[v] == 4).collect();
    let z1: Vec<VertexId> = (0..n).filter(|&v| deg[v] == 3).collect();
    let z2: Vec<VertexId> = (0..n).filter(|&v| deg[v] == 2 && !special.contains(&v)).collect();
    let z3: Vec<VertexId> = special.iter().copied().collect();

    let z_hits = |t: &Triple| t.vertices().iter().filter(|&&v| in_z[v]).count();
    let (e1, e2): (Vec<Triple>, Vec<Triple>) = h.edges().partition(|t| z_hits(t) >= 2);
    let e1_set: BTreeSet<&Triple> = e1.iter().collect();
    let d_e1 = |v: VertexId| h.edges_at(v).filter(|t| e1_set.contains(t)).count();
    let d_e2 = |v: VertexId| h.degree(v) - d_e1(v);

    let z_e1_degree_sum: usize = (0..n).filter(|&v| in_z[v]).map(d_e1).sum();
    let sum_z1_e1: usize = z1.iter().map(|&v| d_e1(v)).sum();
    let sum_z2_e2: usize = z2.iter().map(|&v| d_e2(v)).sum();
    let sum_z3_e2: usize = z3.iter().map(|&v| d_e2(v)).sum();
    let e1_bound = 0.5 * (sum_z1_e1 + z2.iter().map(|&v| 2 - d_e2(v).min(2)).sum::<usize>()) as f64;
    let e2_sum = (sum_z2_e2 + sum_z3_e2) as f64;
    let small = (z1.len() + z2.len()) as f64;
    let chain = Chain {
        edges: h.edge_count(),
        e1_count: e1.len(),
        e2_count: e2.len(),
        z_e1_degree_sum,
        e1_bound,
        e2_sum,
        combined: e1_bound + e2_sum,
        rhs_first_ineq: 1.5 * small + 2.0 * z3.len() as f64,
        rhs_second_ineq: 1.5 * small + (z3.len() + y.len()) as f64,
        final_bound: 1.5 * n as f64,
    };

    // Pairs (y, y') carried by the edges of special vertices.
    let special_pairs: Vec<(VertexId, VertexId)> = z3
        .iter()
        .flat_map(|&z| h.edges_at(z).map(move |t| t.others(z).expect("incident")))
        .collect();
    let distinct_pairs: BTreeSet<(VertexId, VertexId)> = special_pairs.iter().copied().collect();
    let pairs_in_y1 = special_pairs
        .iter()
        .all(|&(p, q)| y1.binary_search(&p).is_ok() && y1.binary_search(&q).is_ok());

    let checks = vec![
        AuditCheck {
            name: "d_E2(v) = 0 for v in Z1",
            holds: z1.iter().all(|&v| d_e2(v) == 0),
        },
        AuditCheck {
            name: "d_E2(v) <= 1 for v in Z2",
            holds: z2.iter().all(|&v| d_e2(v) <= 1),
        },
        AuditCheck {
            name: "E2 edges meet Z in exactly one vertex",
            holds: e2.iter().all(|t| z_hits(t) == 1),
        },
        AuditCheck {
            name: "special-vertex pairs are distinct and lie in Y1",
            holds: distinct_pairs.len() == 2 * z3.len() && pairs_in_y1,
        },
        AuditCheck {
            name: "2|Z3| <= 2|Y1|",
            holds: 2 * z3.len() <= 2 * y1.len(),
        },
        AuditCheck {
            name: "|Z3| <= |Y|",
            holds: z3.len() <= y.len(),
        },
        AuditCheck {
            name: "sum_Z d_E1 >= 2|E1|",
            holds: z_e1_degree_sum >= 2 * e1.len(),
        },
        AuditCheck {
            name: "|E| = |E1| + |E2|",
            holds: h.edge_count() == e1.len() + e2.len(),
        },
        AuditCheck {
            name: "|E1| <= e1_bound",
            holds: e1.len() as f64 <= chain.e1_bound,
        },
        AuditCheck {
            name: "|E2| = e2_sum",
            holds: e2.len() as f64 == chain.e2_sum,
        },
        AuditCheck {
            name: "|E| <= e1_bound + e2_sum",
            holds: h.edge_count() as f64 <= chain.combined,
        },
        AuditCheck {
            name: "e1_bound + e2_sum <= rhs_first_ineq",
            holds: chain.combined <= chain.rhs_first_ineq,
        },
        AuditCheck {
            name: "rhs_first_ineq <= rhs_second_ineq",
            holds: chain.rhs_first_ineq <= chain.rhs_second_ineq,
        },
        AuditCheck {
            name: "rhs_second_ineq <= 3n/2",
            holds: chain.rhs_second_ineq <= chain.final_bound,
        },
    ];

    let crown_free = find_crown(h).is_none();
    let dominating = dominating_edges(h);
    let hypotheses_ok = crown_free && dominating.is_empty();
    let conclusion_ok = h.edge_count() as f64 <= chain.final_bound;
    Ok(AuditReport {
        n,
        y,
        y1,
        z1,
        z2,
        z3,
        e1,
        e2,
        crown_free,
        dominating_edges: dominating,
        chain,
        checks,
        hypotheses_ok,
        conclusion_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalConfig {
    pub center: Triple,
    /// Edges other than `center` meeting it, in lexicographic order.
    pub incident: Vec<Triple>,
    pub dv: DegreeVector,
}

/// Edges with degree vector exactly `<4,4,3>` or `<5,4,2>`, with their incident edges.
pub fn find_critical_configurations(h: &LinearThreeGraph) -> Vec<CriticalConfig> {
    let targets = theorem2_restrictions();
    h.edges()
        .filter_map(|e| {
            let dv = h.degree_vector(e).expect("edge of h");
            if !targets.contains(&dv) {
                return None;
            }
            let incident: BTreeSet<Triple> = e
                .vertices()
                .iter()
                .flat_map(|&v| h.edges_at(v).copied())
                .filter(|f| f != e)
                .collect();
            Some(CriticalConfig {
                center: *e,
                incident: incident.into_iter().collect(),
                dv,
            })
        })
        .collect()
}

/// An edge whose degree vector dominates `<6,4,2>`, if any.
pub fn check_642_free(h: &LinearThreeGraph) -> Option<Triple> {
    let bound = DegreeVector::new(6, 4, 2);
    h.edges()
        .find(|e| h.degree_vector(e).expect("edge of h").dominates(&bound))
        .copied()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    /// Adding the candidate keeps the host linear and crown-free.
    Allowed,
    CrownForced,
    LinearityViolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum AllowedPattern {
    /// Host edge carrying a link edge.
    LinkExtension(Triple),
    /// The edge whose link is examined.
    Center(Triple),
    /// Any edge through a diagonal of one of the two four-cycles.
    Diagonal((VertexId, VertexId)),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateResult {
    pub edge: Triple,
    pub verdict: Verdict,
    pub pattern: Option<AllowedPattern>,
    pub witness: Option<Crown>,
}

impl Serialize for Crown {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.edges().serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExclusionReport {
    pub x: Vec<VertexId>,
    pub fresh: [VertexId; 2],
    pub allowed_patterns: Vec<AllowedPattern>,
    pub tested: Vec<CandidateResult>,
    /// Edges of the host meeting `X`.
    pub incident_existing: usize,
    /// Diagonals carried by at least one allowed candidate.
    pub open_diagonals: usize,
    /// Upper bound on edges of any extension meeting `X`.
    pub capacity: usize,
    pub notes: Vec<String>,
}

impl ExclusionReport {
    pub fn allowed_outside_patterns(&self) -> Vec<&CandidateResult> {
        self.tested
            .iter()
            .filter(|c| c.verdict == Verdict::Allowed && c.pattern.is_none())
            .collect()
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.tested.iter().filter(|c| c.verdict == verdict).count()
    }

    pub fn passed(&self) -> bool {
        self.allowed_patterns.len() == 13
            && self.x.len() == 11
            && self.allowed_outside_patterns().is_empty()
            && self.capacity <= 16
            && (self.capacity as f64) < 16.5
    }
}

/// Components of the link graph as vertex lists, and the diagonals of each four-cycle.
fn four_cycle_diagonals(g: &crate::links::ColoredLinkGraph) -> Vec<(VertexId, VertexId)> {
    let mut seen = BTreeSet::new();
    let mut diagonals = Vec::new();
    for start in g.vertices() {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            for (u, _) in g.neighbors(comp[i]) {
                if seen.insert(u) {
                    comp.push(u);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        for (j, &u) in comp.iter().enumerate() {
            for &v in &comp[j + 1..] {
                if !g.has_edge(u, v) {
                    diagonals.push((u, v));
                }
            }
        }
    }
    diagonals.sort_unstable();
    diagonals
}

/// Try every edge that meets `X = V(G6) ∪ e`, completed by up to two fresh
/// vertices, against a crown-free host whose edge `e` has a `G6` link graph.
///
/// A candidate is `LinearityViolation` if it cannot be added, `CrownForced` if
/// the extended host has a crown, and `Allowed` otherwise. Candidates are
/// evaluated in parallel; the report lists them in lexicographic order.
pub fn g6_exclusion_scan(h: &LinearThreeGraph, e: &Triple) -> Result<ExclusionReport, AnalysisError> {
    let pre = |m: &str| AnalysisError::PreconditionViolated(m.to_string());
    let dv = h.degree_vector(e)?;
    if dv != DegreeVector::new(4, 4, 3) {
        return Err(pre(&format!("degree vector of {e} is {dv}, expected <4,4,3>")));
    }
    let link = link_graph(h, e)?;
    let g6 = builtin_graph(CatalogName::G6).expect("builtin G6 validates");
    if color_iso(&link, &g6.graph).is_none() {
        return Err(pre("link graph is not color-isomorphic to G6"));
    }
    if let Some(c) = find_crown(h) {
        return Err(pre(&format!("host already contains a crown: {c}")));
    }

    let mut x: Vec<VertexId> = link.vertices().into_iter().chain(e.vertices()).collect();
    x.sort_unstable();
    let fresh = [h.n(), h.n() + 1];
    let host = h.with_extra_vertices(2);

    let ends = e.vertices();
    let extensions: Vec<Triple> = link
        .edges()
        .map(|(u, v, c)| Triple::of(u, v, ends[c.index()]))
        .collect();
    let diagonals = four_cycle_diagonals(&link);
    let mut allowed_patterns: Vec<AllowedPattern> =
        extensions.iter().map(|&t| AllowedPattern::LinkExtension(t)).collect();
    allowed_patterns.push(AllowedPattern::Center(*e));
    allowed_patterns.extend(diagonals.iter().map(|&d| AllowedPattern::Diagonal(d)));

    let pattern_of = |f: &Triple| -> Option<AllowedPattern> {
        if f == e {
            return Some(AllowedPattern::Center(*e));
        }
        if extensions.contains(f) {
            return Some(AllowedPattern::LinkExtension(*f));
        }
        diagonals
            .iter()
            .find(|&&(u, v)| f.contains(u) && f.contains(v))
            .map(|&d| AllowedPattern::Diagonal(d))
    };

    let mut candidates: Vec<Triple> = Vec::new();
    for (i, &u) in x.iter().enumerate() {
        candidates.push(Triple::of(u, fresh[0], fresh[1]));
        for (j, &v) in x.iter().enumerate().skip(i + 1) {
            candidates.push(Triple::of(u, v, fresh[0]));
            for &w in &x[j + 1..] {
                candidates.push(Triple::of(u, v, w));
            }
        }
    }
    candidates.retain(|f| !host.contains_edge(f));
    candidates.sort_unstable();

    let tested: Vec<CandidateResult> = candidates
        .par_iter()
        .map(|f| {
            let pattern = pattern_of(f);
            match host.with_edge(*f) {
                Err(_) => CandidateResult {
                    edge: *f,
                    verdict: Verdict::LinearityViolation,
                    pattern,
                    witness: None,
                },
                Ok(extended) => {
                    let witness = find_crown(&extended);
                    CandidateResult {
                        edge: *f,
                        verdict: if witness.is_some() {
                            Verdict::CrownForced
                        } else {
                            Verdict::Allowed
                        },
                        pattern,
                        witness,
                    }
                }
            }
        })
        .collect();

    let incident_existing = h
        .edges()
        .filter(|t| x.iter().any(|&v| t.contains(v)))
        .count();
    let open: BTreeSet<(VertexId, VertexId)> = tested
        .iter()
        .filter(|c| c.verdict == Verdict::Allowed)
        .filter_map(|c| match c.pattern {
            Some(AllowedPattern::Diagonal(d)) => Some(ordered_pair(d.0, d.1)),
            _ => None,
        })
        .collect();
    let notes = vec![
        format!(
            "allowed patterns: {} link extensions + the center + {} diagonal carriers = {}",
            extensions.len(),
            diagonals.len(),
            allowed_patterns.len()
        ),
        "13 allowed patterns: 8 link extensions, the center edge, 4 diagonals".to_string(),
        format!("incidence bound 3|X|/2 = {}", 1.5 * x.len() as f64),
    ];
    Ok(ExclusionReport {
        x,
        fresh,
        allowed_patterns,
        tested,
        incident_existing,
        open_diagonals: open.len(),
        capacity: incident_existing + open.len(),
        notes,
    })
}

/// Host ids in `minimal_host(G6)`: `a, b, c = 0, 1, 2`; first four-cycle
/// `c1..c4 = 3..6` colored C, A, C, B; second four-cycle `d1..d4 = 7..10`.
pub mod g6_host {
    use super::VertexId;
    pub const A: VertexId = 0;
    pub const B: VertexId = 1;
    pub const C: VertexId = 2;
    pub const C1: VertexId = 3;
    pub const C2: VertexId = 4;
    pub const C3: VertexId = 5;
    pub const C4: VertexId = 6;
    pub const D1: VertexId = 7;
    pub const D2: VertexId = 8;
    pub const D3: VertexId = 9;
    pub const D4: VertexId = 10;
    pub const P: VertexId = 11;
    pub const Q: VertexId = 12;
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseFixture {
    pub label: &'static str,
    pub candidate: Triple,
    /// The crown named by the argument for this case.
    pub expected: Crown,
    pub expected_is_crown: bool,
    pub found: Option<Crown>,
}

impl CaseFixture {
    pub fn passed(&self) -> bool {
        self.expected_is_crown && self.found.is_some()
    }
}

/// One candidate per case of the exclusion argument, on `minimal_host(G6)`
/// with two fresh vertices, each paired with the crown that case constructs.
pub fn g6_case_fixtures() -> Vec<CaseFixture> {
    use g6_host::*;
    let (h, _) = minimal_host(&builtin_graph(CatalogName::G6).expect("G6"));
    let host = h.with_extra_vertices(2);
    let e = Triple::of(A, B, C);
    let cases = [
        (
            "a in f, through an endpoint of the first cycle's B-edge",
            Triple::of(A, C4, Q),
            Crown {
                base: e,
                jewels: [Triple::of(A, C4, Q), Triple::of(C, C1, C2), Triple::of(B, D2, D3)],
            },
        ),
        (
            "c in f, through the second cycle",
            Triple::of(C, D1, Q),
            Crown {
                base: e,
                jewels: [Triple::of(C, D1, Q), Triple::of(B, D2, D3), Triple::of(A, C2, C3)],
            },
        ),
        (
            "f avoids e, meets the first cycle once",
            Triple::of(C1, P, Q),
            Crown {
                base: Triple::of(B, C1, C4),
                jewels: [Triple::of(C1, P, Q), Triple::of(B, D2, D3), Triple::of(C, C3, C4)],
            },
        ),
        (
            "f avoids e, meets the second cycle once",
            Triple::of(D1, P, Q),
            Crown {
                base: Triple::of(A, D1, D2),
                jewels: [Triple::of(D1, P, Q), Triple::of(B, D2, D3), Triple::of(A, C2, C3)],
            },
        ),
    ];
    cases
        .into_iter()
        .map(|(label, f, expected)| {
            let extended = host.with_edge(f).expect("fixture candidates are addable");
            CaseFixture {
                label,
                candidate: f,
                expected,
                expected_is_crown: is_crown(&extended, &expected.base, &expected.jewels),
                found: find_crown(&extended),
            }
        })
        .collect()
}

/// The self-contained check: scan `minimal_host(G6)` around its center edge.
pub fn g6_verify() -> (ExclusionReport, Vec<CaseFixture>) {
    let (h, e) = minimal_host(&builtin_graph(CatalogName::G6).expect("G6"));
    let report = g6_exclusion_scan(&h, &e).expect("minimal G6 host satisfies the preconditions");
    (report, g6_case_fixtures())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{fano, lower_bound_construction};

    fn graph(n: usize, edges: &[(usize, usize, usize)]) -> LinearThreeGraph {
        LinearThreeGraph::from_edges(n, edges.iter().map(|&(a, b, c)| Triple::of(a, b, c)))
            .unwrap()
    }

    #[test]
    fn special_vertex_examples() {
        assert!(special_vertices(&lower_bound_construction(7).unwrap()).is_empty());
        assert!(special_vertices(&fano()).is_empty());
        // v = 0 in (0,1,2), (0,3,4); each of 1..4 gets three pendant edges.
        let mut h = LinearThreeGraph::new(29);
        h.add_edge(Triple::of(0, 1, 2)).unwrap();
        h.add_edge(Triple::of(0, 3, 4)).unwrap();
        let mut next = 5;
        for v in 1..=4 {
            for _ in 0..3 {
                h.add_edge(Triple::of(v, next, next + 1)).unwrap();
                next += 2;
            }
        }
        assert_eq!(special_vertices(&h), BTreeSet::from([0]));
    }

    #[test]
    fn audit_lower_bound_eleven() {
        let h = lower_bound_construction(11).unwrap();
        let r = audit_theorem2(&h).unwrap();
        assert!(r.hypotheses_ok && r.conclusion_ok && r.consistent());
        assert_eq!(r.y, vec![0, 1, 2]);
        assert_eq!(r.z1, (3..11).collect::<Vec<_>>());
        assert!(r.z2.is_empty() && r.z3.is_empty());
        assert_eq!((r.e1.len(), r.e2.len()), (12, 0));
        assert_eq!(r.chain.final_bound, 16.5);
        assert!(r.failed_checks().is_empty());
    }

    #[test]
    fn audit_reports_violated_hypotheses() {
        // Center (0,1,2) with degrees 5,5,3; every other vertex completed to degree 2
        // would be large, so check only that a dominating edge is flagged.
        let mut h = LinearThreeGraph::new(40);
        h.add_edge(Triple::of(0, 1, 2)).unwrap();
        let mut next = 3;
        for (v, extra) in [(0, 4), (1, 4), (2, 2)] {
            for _ in 0..extra {
                h.add_edge(Triple::of(v, next, next + 1)).unwrap();
                next += 2;
            }
        }
        // Pair up the pendant vertices so nothing has degree 1.
        let leaves: Vec<usize> = (3..next).collect();
        for chunk in leaves.chunks(4) {
            if let [p, q, r, s] = *chunk {
                let _ = h.add_edge(Triple::of(p, r, 39 - (p % 3)));
                let _ = h.add_edge(Triple::of(q, s, 39 - (q % 3)));
            }
        }
        let h = reduce_low_degree(&h);
        let r = audit_theorem2(&h).unwrap();
        assert!(!r.hypotheses_ok);
        assert!(r.dominating_edges.iter().any(|(_, dv)| *dv == DegreeVector::new(5, 5, 3)));
        assert_eq!(r.chain.edges, h.edge_count());
    }

    #[test]
    fn audit_needs_min_degree_two() {
        let h = graph(5, &[(0, 1, 2), (0, 3, 4)]);
        assert_eq!(audit_theorem2(&h), Err(AnalysisError::Reducible(1)));
        assert_eq!(reduce_low_degree(&h).n(), 0);
        let h10 = lower_bound_construction(10).unwrap();
        assert!(matches!(audit_theorem2(&h10), Err(AnalysisError::Reducible(7))));
        assert_eq!(reduce_low_degree(&h10), lower_bound_construction(7).unwrap());
    }

    #[test]
    fn critical_configurations() {
        let (h, e) = minimal_host(&builtin_graph(CatalogName::G6).unwrap());
        let found = find_critical_configurations(&h);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].center, e);
        assert_eq!(found[0].dv, DegreeVector::new(4, 4, 3));
        assert_eq!(found[0].incident.len(), 8);
        assert!(find_critical_configurations(&lower_bound_construction(11).unwrap()).is_empty());
        assert!(find_critical_configurations(&fano()).is_empty());
    }

    #[test]
    fn six_four_two() {
        assert_eq!(check_642_free(&LinearThreeGraph::new(4)), None);
        assert_eq!(check_642_free(&fano()), None);
        let mut h = LinearThreeGraph::new(21);
        h.add_edge(Triple::of(0, 1, 2)).unwrap();
        let mut next = 3;
        for (v, extra) in [(0, 5), (1, 3), (2, 1)] {
            for _ in 0..extra {
                h.add_edge(Triple::of(v, next, next + 1)).unwrap();
                next += 2;
            }
        }
        assert_eq!(check_642_free(&h), Some(Triple::of(0, 1, 2)));
        assert!(find_crown(&h).is_some());
    }

    #[test]
    fn g6_scan_and_fixtures() {
        let (report, fixtures) = g6_verify();
        assert_eq!(report.x.len(), 11);
        assert_eq!(report.allowed_patterns.len(), 13);
        assert!(report.allowed_outside_patterns().is_empty());
        assert!(report.capacity <= 16);
        assert!(report.passed());
        for f in &fixtures {
            assert!(f.passed(), "{}", f.label);
        }
        let diag = report
            .tested
            .iter()
            .find(|c| c.edge == Triple::of(g6_host::C1, g6_host::C3, g6_host::P))
            .unwrap();
        assert!(matches!(diag.pattern, Some(AllowedPattern::Diagonal(_))));
        assert_eq!(diag.verdict, Verdict::Allowed);
    }

    #[test]
    fn g6_scan_preconditions() {
        let h = lower_bound_construction(11).unwrap();
        let e = *h.edges().next().unwrap();
        assert!(matches!(
            g6_exclusion_scan(&h, &e),
            Err(AnalysisError::PreconditionViolated(_))
        ));
    }
}
