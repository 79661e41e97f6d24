use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crown_core::analysis::{audit_theorem2, find_critical_configurations, g6_verify, reduce_low_degree, AuditReport};
use crown_core::catalog::{builtin, verify_catalog};
use crown_core::constructions::{ConstructionKind, ConstructionSpec};
use crown_core::links::{find_crown, link_graph, ColoredLinkGraph, Crown};
use crown_core::search::{ex_crown, verify_bounds, SearchConfig, SearchError, SearchResult};
use crown_core::verify::{verify_all, VerifyOptions};
use crown_core::{LinearThreeGraph, Triple};

#[derive(Parser)]
#[command(name = "crown", version, about = "Crown-free linear 3-graphs: checks, generators and searches")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for parallel internals; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification campaigns.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Builtin link graphs with three 3-edge color classes.
    Catalog {
        #[command(subcommand)]
        what: CatalogCommand,
    },
    /// Generate a linear 3-graph.
    Construct(ConstructArgs),
    /// Link graphs of host edges.
    Link {
        #[command(subcommand)]
        what: LinkCommand,
    },
    /// Crown detection.
    Crown {
        #[command(subcommand)]
        what: CrownCommand,
    },
    /// Evaluate the 3n/2 counting argument on a graph.
    Audit {
        #[arg(long)]
        graph: String,
        /// Strip vertices of degree at most one first.
        #[arg(long)]
        reduce: bool,
    },
    /// Critical configurations.
    Critical {
        #[command(subcommand)]
        what: CriticalCommand,
    },
    /// Exclusion scan around a G6 link graph.
    G6 {
        #[command(subcommand)]
        what: G6Command,
    },
    /// Extremal searches.
    Search {
        #[command(subcommand)]
        what: SearchCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    All,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Enumerate all rainbow-free unions of three 3-edge matchings and match them to G1..G5.
    Verify,
    /// Print a builtin link graph.
    Show { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    LowerBound,
    Fano,
    Sts9,
    Random,
    MinimalHost,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Edge count for `random`.
    #[arg(long)]
    m: Option<usize>,
    /// Target minimum degree for `random`.
    #[arg(long)]
    min_degree: Option<usize>,
    /// Catalog name for `minimal-host`.
    #[arg(long)]
    name: Option<String>,
    /// Output file, or `-` for stdout.
    #[arg(short, long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum LinkCommand {
    Show {
        #[arg(long)]
        graph: String,
        /// Host edge as `a,b,c`.
        #[arg(long)]
        edge: String,
    },
}

#[derive(Subcommand)]
enum CrownCommand {
    Find {
        #[arg(long)]
        graph: String,
    },
}

#[derive(Subcommand)]
enum CriticalCommand {
    Scan {
        #[arg(long)]
        graph: String,
    },
}

#[derive(Subcommand)]
enum G6Command {
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum Restriction {
    Thm2,
}

#[derive(Subcommand)]
enum SearchCommand {
    Ex(SearchArgs),
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    /// Exhaustive search; otherwise randomized local search.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value = "1e8", value_parser = parse_count)]
    budget_nodes: u64,
    #[arg(long, default_value_t = 600.0)]
    budget_seconds: f64,
    /// Forbid edges whose degree vector dominates <4,4,3> or <5,4,2>.
    #[arg(long, value_enum)]
    restricted: Option<Restriction>,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<String>,
}

fn parse_count(s: &str) -> Result<u64, String> {
    s.parse::<u64>().or_else(|_| {
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite() && *x >= 1.0 && x.fract() == 0.0 && *x <= u64::MAX as f64)
            .map(|x| x as u64)
            .ok_or_else(|| format!("not a positive count: {s}"))
    })
}

/// A command outcome: rendered text and whether verification passed.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

/// Error text and exit code: 2 for usage errors, 1 otherwise.
struct Failure {
    message: String,
    code: u8,
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure { message, code: 1 }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn write_output(path: &str, text: &str) -> Result<(), String> {
    if path == "-" {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).map_err(|e| format!("{path}: {e}"))
    }
}

fn read_graph(path: &str) -> Result<LinearThreeGraph, String> {
    read_input(path)?.parse().map_err(|e| format!("{path}: {e}"))
}

fn parse_edge(s: &str) -> Result<Triple, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad vertex in edge {s:?}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c] => Triple::new(a, b, c).map_err(|e| e.to_string()),
        _ => Err(format!("edge {s:?} must have three vertices")),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn edges_json(h: &LinearThreeGraph) -> Value {
    json!(h.edges().map(|t| t.vertices()).collect::<Vec<_>>())
}

fn link_json(g: &ColoredLinkGraph) -> Value {
    json!(g
        .edges()
        .map(|(u, v, c)| json!([u, v, c.to_string()]))
        .collect::<Vec<_>>())
}

fn crown_json(c: &Option<Crown>) -> Value {
    match c {
        Some(c) => json!({"base": c.base.vertices(), "jewels": c.jewels.map(|j| j.vertices())}),
        None => Value::Null,
    }
}

fn run_verify(cli: &Cli) -> Outcome {
    let outcomes = verify_all(VerifyOptions {
        seed: cli.seed,
        threads: cli.threads,
    });
    let ok = outcomes.iter().all(|c| c.passed);
    let text = match cli.format {
        Format::Json => pretty(&json!({
            "passed": ok,
            "campaigns": outcomes.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let mut s = String::new();
            for c in &outcomes {
                let _ = writeln!(s, "{} {:<20} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let _ = writeln!(s, "{}", if ok { "all campaigns passed" } else { "some campaigns FAILED" });
            s
        }
    };
    Outcome { text, ok }
}

fn run_catalog(cli: &Cli, what: &CatalogCommand) -> Result<Outcome, Failure> {
    match what {
        CatalogCommand::Verify => {
            let v = verify_catalog().map_err(|e| e.to_string())?;
            let text = match cli.format {
                Format::Json => pretty(&json!({
                    "classes": v.classes,
                    "unmatched": v.unmatched_classes,
                    "passed": v.passed(),
                    "rows": v.rows.iter().map(|r| json!({
                        "name": r.name.to_string(), "vertices": r.vertices, "edges": r.edges, "matches": r.matches,
                    })).collect::<Vec<_>>(),
                })),
                Format::Table => {
                    let mut s = format!("{:<5} {:>8} {:>5} {:>7}\n", "name", "vertices", "edges", "matches");
                    for r in &v.rows {
                        let _ = writeln!(s, "{:<5} {:>8} {:>5} {:>7}", r.name, r.vertices, r.edges, r.matches);
                    }
                    let _ = writeln!(s, "classes {} unmatched {}", v.classes, v.unmatched_classes);
                    s
                }
            };
            Ok(Outcome { text, ok: v.passed() })
        }
        CatalogCommand::Show { name } => {
            let g = builtin(name).map_err(|e| usage(e.to_string()))?;
            Ok(Outcome::ok(match cli.format {
                Format::Json => pretty(&json!({
                    "name": g.name.to_string(),
                    "note": g.source_note,
                    "edges": link_json(&g.graph),
                })),
                Format::Table => format!("# {} {}\n{}", g.name, g.source_note, g.graph),
            }))
        }
    }
}

fn run_construct(cli: &Cli, a: &ConstructArgs) -> Result<Outcome, Failure> {
    let kind = match a.kind {
        Kind::LowerBound => ConstructionKind::LowerBound,
        Kind::Fano => ConstructionKind::Fano,
        Kind::Sts9 => ConstructionKind::Sts9,
        Kind::MinimalHost => {
            let name = a.name.as_deref().ok_or_else(|| usage("--name is required for minimal-host"))?;
            ConstructionKind::MinimalHost(
                name.parse()
                    .map_err(|e: crown_core::catalog::CatalogError| usage(e.to_string()))?,
            )
        }
        Kind::Random => {
            if a.m.is_none() == a.min_degree.is_none() {
                return Err(usage("random needs exactly one of --m and --min-degree"));
            }
            ConstructionKind::Random {
                edges: a.m,
                min_degree: a.min_degree,
            }
        }
    };
    let h = ConstructionSpec {
        n: a.n,
        kind,
        seed: cli.seed,
    }
    .build()
    .map_err(|e| e.to_string())?;
    if a.out != "-" {
        write_output(&a.out, &h.serialize())?;
        return Ok(Outcome::ok(match cli.format {
            Format::Json => pretty(&json!({"n": h.n(), "m": h.edge_count(), "file": a.out})),
            Format::Table => format!("wrote {} vertices, {} edges to {}\n", h.n(), h.edge_count(), a.out),
        }));
    }
    Ok(Outcome::ok(match cli.format {
        Format::Json => pretty(&json!({"n": h.n(), "m": h.edge_count(), "edges": edges_json(&h)})),
        Format::Table => h.serialize(),
    }))
}

fn run_link(cli: &Cli, graph: &str, edge: &str) -> Result<Outcome, Failure> {
    let h = read_graph(graph)?;
    let e = parse_edge(edge).map_err(usage)?;
    let g = link_graph(&h, &e).map_err(|e| e.to_string())?;
    let dv = h.degree_vector(&e).map_err(|e| e.to_string())?;
    Ok(Outcome::ok(match cli.format {
        Format::Json => pretty(&json!({
            "edge": e.vertices(),
            "degree_vector": dv.coords(),
            "class_sizes": g.class_sizes(),
            "edges": link_json(&g),
        })),
        Format::Table => format!("# link of {e}, degree vector {dv}\n{g}"),
    }))
}

fn run_crown(cli: &Cli, graph: &str) -> Result<Outcome, Failure> {
    let h = read_graph(graph)?;
    let c = find_crown(&h);
    Ok(Outcome::ok(match cli.format {
        Format::Json => pretty(&json!({ "crown": crown_json(&c) })),
        Format::Table => match c {
            Some(c) => c.edges().iter().map(|t| format!("{t}\n")).collect(),
            None => "NONE\n".into(),
        },
    }))
}

fn audit_table(r: &AuditReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n {} edges {}", r.n, r.chain.edges);
    let _ = writeln!(s, "Y  {:?}", r.y);
    let _ = writeln!(s, "Y1 {:?}", r.y1);
    let _ = writeln!(s, "Z1 {:?}", r.z1);
    let _ = writeln!(s, "Z2 {:?}", r.z2);
    let _ = writeln!(s, "Z3 {:?}", r.z3);
    let _ = writeln!(s, "E1 {} edges, E2 {} edges", r.e1.len(), r.e2.len());
    let c = &r.chain;
    let _ = writeln!(
        s,
        "chain {} <= {} + {} = {} <= {} <= {} <= {}",
        c.edges, c.e1_bound, c.e2_sum, c.combined, c.rhs_first_ineq, c.rhs_second_ineq, c.final_bound
    );
    for check in &r.checks {
        let _ = writeln!(s, "{} {}", if check.holds { "ok  " } else { "FAIL" }, check.name);
    }
    let _ = writeln!(
        s,
        "crown-free {} restricted-degree-vectors-absent {} hypotheses {} conclusion {}",
        r.crown_free,
        r.dominating_edges.is_empty(),
        r.hypotheses_ok,
        r.conclusion_ok
    );
    s
}

fn run_audit(cli: &Cli, graph: &str, reduce: bool) -> Result<Outcome, Failure> {
    let mut h = read_graph(graph)?;
    if reduce {
        h = reduce_low_degree(&h);
    }
    let r = audit_theorem2(&h).map_err(|e| e.to_string())?;
    let text = match cli.format {
        Format::Json => pretty(&serde_json::to_value(&r).expect("report serializes")),
        Format::Table => audit_table(&r),
    };
    Ok(Outcome { text, ok: r.consistent() })
}

fn run_critical(cli: &Cli, graph: &str) -> Result<Outcome, Failure> {
    let h = read_graph(graph)?;
    let found = find_critical_configurations(&h);
    Ok(Outcome::ok(match cli.format {
        Format::Json => pretty(&serde_json::to_value(&found).expect("configurations serialize")),
        Format::Table => {
            let mut s = format!("{} critical configurations\n", found.len());
            for c in &found {
                let _ = writeln!(s, "{} {} incident {}", c.center, c.dv, c.incident.len());
                for t in &c.incident {
                    let _ = writeln!(s, "  {t}");
                }
            }
            s
        }
    }))
}

fn run_g6(cli: &Cli) -> Outcome {
    let (report, fixtures) = g6_verify();
    let ok = report.passed() && fixtures.iter().all(|f| f.passed());
    let text = match cli.format {
        Format::Json => pretty(&json!({
            "passed": ok,
            "report": serde_json::to_value(&report).expect("report serializes"),
            "fixtures": serde_json::to_value(&fixtures).expect("fixtures serialize"),
        })),
        Format::Table => {
            use crown_core::analysis::Verdict;
            let mut s = String::new();
            let _ = writeln!(s, "X = {:?}, fresh {:?}", report.x, report.fresh);
            let _ = writeln!(s, "allowed patterns {}", report.allowed_patterns.len());
            let _ = writeln!(
                s,
                "candidates {}: allowed {}, crown forced {}, linearity violation {}",
                report.tested.len(),
                report.count(Verdict::Allowed),
                report.count(Verdict::CrownForced),
                report.count(Verdict::LinearityViolation)
            );
            let _ = writeln!(s, "allowed outside patterns {}", report.allowed_outside_patterns().len());
            let _ = writeln!(
                s,
                "capacity {} = {} existing + {} open diagonals (limit 16 < 16.5)",
                report.capacity, report.incident_existing, report.open_diagonals
            );
            for f in &fixtures {
                let _ = writeln!(s, "{} fixture {}: {}", if f.passed() { "ok  " } else { "FAIL" }, f.candidate, f.label);
            }
            for n in &report.notes {
                let _ = writeln!(s, "note: {n}");
            }
            let _ = writeln!(s, "{}", if ok { "PASS" } else { "FAIL" });
            s
        }
    };
    Outcome { text, ok }
}

fn search_json(r: &SearchResult) -> Value {
    serde_json::to_value(r.report()).expect("report serializes")
}

fn run_search(cli: &Cli, a: &SearchArgs) -> Result<Outcome, Failure> {
    let mut cfg = if a.exact {
        SearchConfig::exact(a.n)
    } else {
        SearchConfig::heuristic(a.n, cli.seed)
    };
    cfg.seed = cli.seed;
    cfg.threads = cli.threads;
    cfg.node_budget = a.budget_nodes;
    cfg.time_budget_seconds = a.budget_seconds;
    if a.restricted.is_some() {
        cfg = cfg.restricted();
    }
    let result = match ex_crown(&cfg) {
        Ok(r) => r,
        Err(SearchError::BudgetExceeded(r)) => {
            eprintln!("budget exceeded; reporting best so far (not exact)");
            *r
        }
        Err(e @ SearchError::InvalidConfig(_)) => return Err(usage(e.to_string())),
    };
    let value = search_json(&result);
    if let Some(path) = &a.out {
        write_output(path, &pretty(&value))?;
    }
    // The lower bound is a property of the unrestricted problem only.
    let ok = if a.restricted.is_some() {
        result.best <= 2 * result.n && result.witness.edge_count() == result.best
    } else {
        verify_bounds(&result)
    };
    let text = match cli.format {
        Format::Json => pretty(&value),
        Format::Table => format!(
            "n {} best {} exact {} nodes {} gap to 3n/2 {:+.1}\n{}",
            result.n,
            result.best,
            result.exact,
            result.nodes_explored,
            result.gap_to_three_halves(),
            result.witness
        ),
    };
    Ok(Outcome { text, ok })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Verify { what: VerifyCommand::All } => Ok(run_verify(cli)),
        Command::Catalog { what } => run_catalog(cli, what),
        Command::Construct(a) => run_construct(cli, a),
        Command::Link {
            what: LinkCommand::Show { graph, edge },
        } => run_link(cli, graph, edge),
        Command::Crown {
            what: CrownCommand::Find { graph },
        } => run_crown(cli, graph),
        Command::Audit { graph, reduce } => run_audit(cli, graph, *reduce),
        Command::Critical {
            what: CriticalCommand::Scan { graph },
        } => run_critical(cli, graph),
        Command::G6 { what: G6Command::Verify } => Ok(run_g6(cli)),
        Command::Search {
            what: SearchCommand::Ex(a),
        } => run_search(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
