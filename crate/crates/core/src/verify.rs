//! Verification campaigns run by `crown verify all`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{audit_theorem2, theorem2_restrictions, check_642_free, g6_verify, reduce_low_degree};
use crate::catalog::{builtin_graph, verify_catalog, CatalogName};
use crate::constructions::{fano, lower_bound_construction, minimal_host, random_linear, random_min_degree, sts9};
use crate::graph::{LinearThreeGraph, Triple};
use crate::links::{crown_with_base, find_crown, is_crown};
use crate::search::{ex_crown, ex_restricted, lower_bound, random_maximal, verify_bounds, SearchConfig};

/// Exact values of the unrestricted search, `(n, best)`.
pub const EXACT_VALUES: [(usize, usize); 10] =
    [(0, 0), (1, 0), (2, 0), (3, 1), (4, 1), (5, 2), (6, 4), (7, 7), (8, 8), (9, 9)];

/// Orders used for the block construction checks: `7, 11, ..., 43`.
pub fn construction_orders() -> Vec<usize> {
    (7..=43).step_by(4).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn timed(name: &'static str, f: impl FnOnce() -> (bool, String)) -> CampaignOutcome {
    let start = Instant::now();
    let (passed, detail) = f();
    CampaignOutcome {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub threads: usize,
}

pub fn campaign_catalog() -> CampaignOutcome {
    timed("catalog", || match verify_catalog() {
        Ok(v) => (
            v.passed(),
            format!("{} classes, {} unmatched", v.classes, v.unmatched_classes),
        ),
        Err(e) => (false, e.to_string()),
    })
}

/// Vertices outside the hubs `0, 1, 2` with nonzero degree.
fn block_vertex_degrees_ok(h: &LinearThreeGraph) -> bool {
    (3..h.n()).all(|v| matches!(h.degree(v), 0 | 3))
}

pub fn campaign_constructions() -> CampaignOutcome {
    timed("constructions", || {
        let mut failures = Vec::new();
        for n in construction_orders() {
            let h = lower_bound_construction(n).expect("n >= 7");
            let ok = h.is_linear()
                && find_crown(&h).is_none()
                && h.edge_count() == lower_bound(n)
                && block_vertex_degrees_ok(&h);
            if !ok {
                failures.push(n);
            }
        }
        (
            failures.is_empty(),
            format!("{} orders, failures at {failures:?}", construction_orders().len()),
        )
    })
}

pub const MIN_DEGREE_ORDERS: [usize; 3] = [15, 20, 25];

/// Minimum degree four forces a crown: random samples, `STS(9)` and the Fano plane.
pub fn campaign_theorem1(seed: u64) -> CampaignOutcome {
    timed("min-degree-four", || {
        let mut generated = 0;
        let mut crownless = Vec::new();
        for s in 0..100 {
            for n in MIN_DEGREE_ORDERS {
                if let Some(h) = random_min_degree(n, 4, seed.wrapping_add(s)) {
                    generated += 1;
                    if find_crown(&h).is_none() {
                        crownless.push((n, s));
                    }
                }
            }
        }
        let sts_ok = find_crown(&sts9()).is_some();
        let fano_ok = find_crown(&fano()).is_none();
        (
            crownless.is_empty() && sts_ok && fano_ok,
            format!(
                "{generated} generated, {} without crown, sts9 crown {sts_ok}, fano crown-free {fano_ok}",
                crownless.len()
            ),
        )
    })
}

/// Crown-free graphs fed to the audit: block constructions for every order
/// up to 43, exact restricted-search witnesses for `n <= 11`, heuristic
/// restricted witnesses for larger `n`, and random maximal restricted systems,
/// all reduced to minimum degree 2.
pub fn audit_corpus(threads: usize) -> Vec<LinearThreeGraph> {
    let mut corpus: Vec<LinearThreeGraph> = (7..=43)
        .map(|n| reduce_low_degree(&lower_bound_construction(n).expect("n >= 7")))
        .collect();
    for n in 7..=11 {
        let mut cfg = SearchConfig::exact(n);
        cfg.threads = threads;
        if let Ok(r) = ex_restricted(&cfg) {
            corpus.push(reduce_low_degree(&r.witness));
        }
    }
    for (i, n) in [12, 14, 16, 18, 20, 24].into_iter().enumerate() {
        let mut cfg = SearchConfig::heuristic(n, i as u64);
        cfg.threads = threads;
        if let Ok(r) = ex_restricted(&cfg) {
            corpus.push(reduce_low_degree(&r.witness));
        }
    }
    let restrictions = theorem2_restrictions();
    for n in 9..=30 {
        for seed in 0..4 {
            corpus.push(reduce_low_degree(&random_maximal(n, &restrictions, seed)));
        }
    }
    corpus.retain(|h| h.n() > 0);
    corpus
}

pub fn campaign_theorem2(threads: usize) -> CampaignOutcome {
    timed("counting-audit", || {
        let mut audited = 0;
        let mut violations = Vec::new();
        for h in audit_corpus(threads) {
            match audit_theorem2(&h) {
                Ok(r) if r.hypotheses_ok => {
                    audited += 1;
                    if !r.consistent() {
                        violations.push(format!("n={}: {:?}", h.n(), r.failed_checks()));
                    }
                }
                Ok(_) => {}
                Err(e) => violations.push(e.to_string()),
            }
        }
        (
            audited > 0 && violations.is_empty(),
            format!("{audited} graphs audited, violations {violations:?}"),
        )
    })
}

pub fn campaign_g6() -> CampaignOutcome {
    timed("g6-exclusion", || {
        let (report, fixtures) = g6_verify();
        let fixtures_ok = fixtures.iter().all(|f| f.passed());
        (
            report.passed() && fixtures_ok,
            format!(
                "{} candidates, {} allowed outside patterns, capacity {}, fixtures ok {fixtures_ok}",
                report.tested.len(),
                report.allowed_outside_patterns().len(),
                report.capacity
            ),
        )
    })
}

pub fn campaign_search(threads: usize) -> CampaignOutcome {
    timed("exact-search", || {
        let mut mismatches = Vec::new();
        let mut previous = 0;
        let mut gaps = Vec::new();
        let mut errors = Vec::new();
        for (n, expected) in EXACT_VALUES {
            let mut cfg = SearchConfig::exact(n);
            cfg.threads = threads;
            match ex_crown(&cfg) {
                Ok(r) => {
                    let ok = r.exact
                        && r.best == expected
                        && r.best >= previous
                        && verify_bounds(&r)
                        && r.witness.is_linear()
                        && find_crown(&r.witness).is_none();
                    if !ok {
                        mismatches.push((n, r.best));
                    }
                    previous = r.best;
                    gaps.push(format!("{n}:{:+.1}", r.gap_to_three_halves()));
                }
                Err(e) => errors.push(format!("n={n}: {e}")),
            }
        }
        (
            mismatches.is_empty() && errors.is_empty(),
            format!("mismatches {mismatches:?}, errors {errors:?}; gap to 3n/2 [{}]", gaps.join(" ")),
        )
    })
}

/// A host realizing `<6,4,2>` on its first edge `(0, 1, 2)`.
pub fn six_four_two_host() -> LinearThreeGraph {
    let mut h = LinearThreeGraph::new(21);
    h.add_edge(Triple::of(0, 1, 2)).expect("empty host");
    let mut next = 3;
    for (v, extra) in [(0, 5), (1, 3), (2, 1)] {
        for _ in 0..extra {
            h.add_edge(Triple::of(v, next, next + 1)).expect("fresh vertices");
            next += 2;
        }
    }
    h
}

/// Crown-free instances from every generator, checked for `<6,4,2>` edges.
pub fn campaign_642(seed: u64) -> CampaignOutcome {
    timed("six-four-two", || {
        let mut instances: Vec<LinearThreeGraph> = vec![fano()];
        instances.extend((7..=43).map(|n| lower_bound_construction(n).expect("n >= 7")));
        for name in CatalogName::ALL {
            instances.push(minimal_host(&builtin_graph(name).expect("builtin")).0);
        }
        for (n, _) in EXACT_VALUES {
            if let Ok(r) = ex_crown(&SearchConfig::exact(n)) {
                instances.push(r.witness);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..300 {
            let n = rng.gen_range(9..=20);
            let m = rng.gen_range(3..=n);
            if let Ok(h) = random_linear(n, m, rng.gen()) {
                instances.push(h);
            }
        }
        instances.retain(|h| find_crown(h).is_none());
        let offenders = instances.iter().filter(|h| check_642_free(h).is_some()).count();
        let host = six_four_two_host();
        let host_ok = check_642_free(&host).is_some() && find_crown(&host).is_some();
        (
            offenders == 0 && host_ok,
            format!(
                "{} crown-free instances, {offenders} with a <6,4,2> edge, constructed host has crown {host_ok}",
                instances.len()
            ),
        )
    })
}

/// Crown with base `e` by trying all triples of other edges.
pub fn brute_force_crown_with_base(h: &LinearThreeGraph, e: &Triple) -> bool {
    let others: Vec<&Triple> = h.edges().filter(|f| *f != e).collect();
    (0..others.len()).any(|i| {
        (i + 1..others.len()).any(|j| {
            (j + 1..others.len()).any(|k| is_crown(h, e, &[*others[i], *others[j], *others[k]]))
        })
    })
}

/// Random small hosts on which link-graph crown detection is compared with
/// brute force for every base edge.
pub fn rainbow_hosts(seed: u64, count: usize) -> Vec<LinearThreeGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hosts = Vec::with_capacity(count);
    while hosts.len() < count {
        let n = rng.gen_range(9..=14);
        let m = rng.gen_range(4..=12.min(n * (n - 1) / 6));
        if let Ok(h) = random_linear(n, m, rng.gen()) {
            hosts.push(h);
        }
    }
    hosts
}

pub fn campaign_rainbow(seed: u64) -> CampaignOutcome {
    timed("rainbow-equivalence", || {
        let mut bases = 0;
        let mut with_crown = 0;
        let mut disagreements = 0;
        for h in rainbow_hosts(seed, 200) {
            for e in h.edges() {
                bases += 1;
                let fast = crown_with_base(&h, e).expect("edge of h").is_some();
                with_crown += usize::from(fast);
                if fast != brute_force_crown_with_base(&h, e) {
                    disagreements += 1;
                }
            }
        }
        (
            disagreements == 0,
            format!("{bases} bases, {with_crown} with a crown, {disagreements} disagreements"),
        )
    })
}

pub fn verify_all(opts: VerifyOptions) -> Vec<CampaignOutcome> {
    vec![
        campaign_catalog(),
        campaign_constructions(),
        campaign_theorem1(opts.seed),
        campaign_rainbow(opts.seed),
        campaign_theorem2(opts.threads),
        campaign_g6(),
        campaign_search(opts.threads),
        campaign_642(opts.seed),
    ]
}
