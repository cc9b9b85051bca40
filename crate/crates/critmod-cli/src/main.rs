//! Command-line front end: parse graphs, dispatch the verification suites,
//! emit human or JSON reports, and signal the outcome through the exit code
//! (0 = all checks pass, 1 = a mathematical check failed, 2 = usage or input
//! error).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use critmod::betti::{
    alternating_numbers, betti_table, check_alt_deletion_contraction,
    check_vanishing_implies_equality,
};
use critmod::divisor::{canonical_divisor, picard_classes, rank, riemann_roch_check};
use critmod::exactness::{default_degree_bound, exactness_report, SequenceKind};
use critmod::maps::{build_phi0, build_phi1, build_psi0, build_psi1, verify_map_spec};
use critmod::presentation::{gpark_presentation, hilbert_function, toppling_presentation};
use critmod::series::{bsc_coefficients, hilb_parking, hilb_toppling_data, superstables};
use critmod::tutte::{tutte_eval, tutte_eval_1_t, tutte_polynomial};
use critmod::Multigraph;

const SCHEMA: u64 = 1;

#[derive(Parser)]
#[command(
    name = "critmod",
    version,
    about = "Critical-module verification suites for connected multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON report on stdout instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Gpark,
    Toppling,
}

#[derive(Subcommand)]
enum Command {
    /// Tutte polynomial and its evaluation at x = 1.
    Tutte { graph: PathBuf },
    /// Betti table of connected partition graphs, plus alternating numbers.
    Betti {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        sink: usize,
    },
    /// Three-way K-polynomial identity: graded linear algebra on the parking
    /// presentation, the Tutte evaluation, and superstable reciprocity.
    Merino {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        sink: usize,
    },
    /// Degree-wise exactness of one contraction-deletion sequence.
    Exactness {
        kind: Kind,
        graph: PathBuf,
        /// Edge endpoints u v; the sink must lie on the edge.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        sink: usize,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Riemann-Roch and rank identities over a degree box (loops stripped).
    RiemannRoch {
        graph: PathBuf,
        /// Upper end of the degree box; defaults to 2g.
        #[arg(long)]
        max_deg: Option<i64>,
    },
    /// Divisor-class reciprocity checks for the lattice-module description
    /// of the toppling critical module (loops stripped).
    Appendix { graph: PathBuf },
    /// Deletion-contraction identity for alternating numbers on one edge.
    AltDc {
        graph: PathBuf,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Vec<usize>,
    },
    /// Vanishing-implies-equality scan of the Betti tables on one edge.
    Vanishing {
        graph: PathBuf,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Vec<usize>,
    },
    /// Runs every check on every graph file in a directory.
    Suite {
        #[arg(long)]
        corpus: PathBuf,
    },
}

struct Report {
    value: Value,
    human: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.value).unwrap());
            } else {
                print!("{}", report.human);
            }
            if report.pass {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn load_graph(path: &Path) -> Result<Arc<Multigraph>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    Multigraph::from_text(&text)
        .map(Arc::new)
        .map_err(|e| format!("{}: {}", path.display(), e))
}

fn edge_pair(edge: &[usize]) -> Result<(usize, usize), String> {
    match edge {
        [u, v] => Ok((*u, *v)),
        _ => Err("expected --edge U V".into()),
    }
}

fn dispatch(command: &Command) -> Result<Report, String> {
    match command {
        Command::Tutte { graph } => Ok(tutte_report(&load_graph(graph)?)),
        Command::Betti { graph, sink } => {
            let g = load_graph(graph)?;
            check_sink(&g, *sink)?;
            Ok(betti_report(&g, *sink))
        }
        Command::Merino { graph, sink } => {
            let g = load_graph(graph)?;
            check_sink(&g, *sink)?;
            Ok(merino_report(&g, *sink))
        }
        Command::Exactness {
            kind,
            graph,
            edge,
            sink,
            max_degree,
        } => {
            let g = load_graph(graph)?;
            let (u, v) = edge_pair(edge)?;
            let kind = match kind {
                Kind::Gpark => SequenceKind::GPark,
                Kind::Toppling => SequenceKind::Toppling,
            };
            exactness_command(&g, kind, u, v, *sink, *max_degree).map_err(|e| e.to_string())
        }
        Command::RiemannRoch { graph, max_deg } => {
            let g = load_graph(graph)?;
            Ok(riemann_roch_report(&g, *max_deg))
        }
        Command::Appendix { graph } => Ok(appendix_report(&load_graph(graph)?)),
        Command::AltDc { graph, edge } => {
            let g = load_graph(graph)?;
            let (u, v) = edge_pair(edge)?;
            let r = check_alt_deletion_contraction(&g, u, v).map_err(|e| e.to_string())?;
            let pass = r.pass;
            Ok(Report {
                value: json!({
                    "schema": SCHEMA,
                    "command": "alt-dc",
                    "report": serde_json::to_value(&r).unwrap(),
                    "pass": pass,
                }),
                human: format!(
                    "alternating-number deletion-contraction on edge ({}, {}): {}\n",
                    u,
                    v,
                    verdict(pass)
                ),
                pass,
            })
        }
        Command::Vanishing { graph, edge } => {
            let g = load_graph(graph)?;
            let (u, v) = edge_pair(edge)?;
            let r = check_vanishing_implies_equality(&g, u, v).map_err(|e| e.to_string())?;
            let pass = r.pass;
            let cases = r.hypothesis_cases.len();
            Ok(Report {
                value: json!({
                    "schema": SCHEMA,
                    "command": "vanishing",
                    "report": serde_json::to_value(&r).unwrap(),
                    "pass": pass,
                }),
                human: format!(
                    "vanishing-implies-equality scan on edge ({}, {}): {} hypothesis cases recorded, {}\n",
                    u,
                    v,
                    cases,
                    verdict(pass)
                ),
                pass,
            })
        }
        Command::Suite { corpus } => suite_report(corpus),
    }
}

fn check_sink(g: &Multigraph, sink: usize) -> Result<(), String> {
    if sink < g.vertex_count() {
        Ok(())
    } else {
        Err(format!(
            "sink {} out of range for a graph on {} vertices",
            sink,
            g.vertex_count()
        ))
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn tutte_report(g: &Arc<Multigraph>) -> Report {
    let t = tutte_polynomial(g);
    let one_t: Vec<String> = tutte_eval_1_t(g).iter().map(|c| c.to_string()).collect();
    let trees = g.spanning_tree_count().to_string();
    let human = {
        let mut s = String::new();
        s.push_str("Tutte polynomial (x-degree, y-degree, coefficient):\n");
        for (i, j, c) in t.serialize_triples() {
            s.push_str(&format!("  x^{} y^{}: {}\n", i, j, c));
        }
        s.push_str(&format!("T(1, t) coefficients (ascending): {:?}\n", one_t));
        s.push_str(&format!("spanning trees: {}\n", trees));
        s
    };
    Report {
        value: json!({
            "schema": SCHEMA,
            "command": "tutte",
            "tutte": serde_json::to_value(&t).unwrap(),
            "tutte_1_t": one_t,
            "spanning_trees": trees,
            "pass": true,
        }),
        human,
        pass: true,
    }
}

fn betti_report(g: &Arc<Multigraph>, sink: usize) -> Report {
    let table = betti_table(g, sink);
    let k_max = g.edge_count() + 1;
    let alt = table.alternating_numbers(k_max);
    let human = {
        let mut s = String::new();
        s.push_str(&format!("Betti table (sink {}):\n", sink));
        for (i, k, v) in table.triples() {
            s.push_str(&format!("  beta[{}, {}] = {}\n", i, k, v));
        }
        s.push_str(&format!(
            "alternating numbers A_0..A_{}: {:?}\n",
            k_max, alt
        ));
        s
    };
    Report {
        value: json!({
            "schema": SCHEMA,
            "command": "betti",
            "sink": sink,
            "betti": table.triples(),
            "alternating": alt,
            "pass": true,
        }),
        human,
        pass: true,
    }
}

type KPolyRoutes = (Vec<String>, Vec<String>, Vec<String>);

/// The three K-polynomial routes; all must agree exactly.
fn merino_routes(g: &Arc<Multigraph>, sink: usize) -> Result<KPolyRoutes, String> {
    let genus = g.genus();
    let loops = g.loop_count();
    let d_max = genus + loops + 3;
    let pres = gpark_presentation(g, sink);
    let hilbert = hilbert_function(&pres, d_max);
    let k_alg: Vec<String> = hilbert
        .k_polynomial()
        .map_err(|e| e.to_string())?
        .iter()
        .map(|c| c.to_string())
        .collect();
    let k_tutte: Vec<String> = tutte_eval_1_t(g).iter().map(|c| c.to_string()).collect();
    let mut recip = vec![0u64; genus + loops + 1];
    for b in superstables(g, sink) {
        let deg: u32 = b.iter().sum();
        recip[loops + genus - deg as usize] += 1;
    }
    let k_recip: Vec<String> = recip.iter().map(|c| c.to_string()).collect();
    Ok((k_alg, k_tutte, k_recip))
}

fn merino_report(g: &Arc<Multigraph>, sink: usize) -> Report {
    match merino_routes(g, sink) {
        Ok((k_alg, k_tutte, k_recip)) => {
            let pass = k_alg == k_tutte && k_tutte == k_recip;
            Report {
                value: json!({
                    "schema": SCHEMA,
                    "command": "merino",
                    "sink": sink,
                    "k_presentation": k_alg,
                    "k_tutte_1_t": k_tutte,
                    "k_reciprocity": k_recip,
                    "pass": pass,
                }),
                human: format!(
                    "K-polynomial routes (ascending coefficients)\n  presentation: {:?}\n  tutte T(1,t): {:?}\n  reciprocity:  {:?}\nmerino three-way check: {}\n",
                    k_alg, k_tutte, k_recip, verdict(pass)
                ),
                pass,
            }
        }
        Err(e) => Report {
            value: json!({
                "schema": SCHEMA,
                "command": "merino",
                "sink": sink,
                "error": e,
                "pass": false,
            }),
            human: format!("merino check errored: {}\n", e),
            pass: false,
        },
    }
}

fn exactness_command(
    g: &Arc<Multigraph>,
    kind: SequenceKind,
    u: usize,
    v: usize,
    sink: usize,
    max_degree: Option<usize>,
) -> Result<Report, critmod::Error> {
    let d = max_degree.unwrap_or_else(|| default_degree_bound(g));
    let report = exactness_report(kind, g, u, v, sink, d)?;
    let (psi, phi) = match kind {
        SequenceKind::GPark => (build_psi0(g, u, v, sink)?, build_phi0(g, u, v, sink)?),
        SequenceKind::Toppling => (build_psi1(g, u, v, sink)?, build_phi1(g, u, v, sink)?),
    };
    let maps_well_defined =
        verify_map_spec(&psi.with_quotient_source(u.min(v)), d + 2) && verify_map_spec(&phi, d + 2);
    let pass = report.verdict && maps_well_defined;
    let mut human = format!(
        "{:?} sequence on edge ({}, {}), sink {}, degrees 0..={}\n",
        kind, u, v, sink, d
    );
    human.push_str("  t  dimL dimM dimR  im(psi) ker(phi)  flags\n");
    for row in &report.per_degree {
        human.push_str(&format!(
            "  {}  {:4} {:4} {:4}  {:7} {:8}  complex={} exact_middle={} right_surjective={} left_kernel={}\n",
            row.t,
            row.dim_left,
            row.dim_middle,
            row.dim_right,
            row.dim_im_psi,
            row.dim_ker_phi,
            row.flags.complex,
            row.flags.exact_middle,
            row.flags.right_surjective,
            row.flags.left_kernel_as_claimed
        ));
    }
    human.push_str(&format!("maps well-defined: {}\n", maps_well_defined));
    human.push_str(&format!("verdict: {}\n", verdict(pass)));
    Ok(Report {
        value: json!({
            "schema": SCHEMA,
            "command": "exactness",
            "report": serde_json::to_value(&report).unwrap(),
            "maps_well_defined": maps_well_defined,
            "pass": pass,
        }),
        human,
        pass,
    })
}

fn riemann_roch_report(g: &Arc<Multigraph>, max_deg: Option<i64>) -> Report {
    let base = g.strip_loops();
    let genus = base.genus() as i64;
    let q = 0;
    let hi = max_deg.unwrap_or(2 * genus);
    let trees = base.spanning_tree_count();
    let mut pass = true;
    let mut notes = Vec::new();

    for deg in -2..=hi {
        for c in picard_classes(&base, deg, q) {
            if !riemann_roch_check(&base, &c.reduced, q) {
                pass = false;
                notes.push(format!(
                    "riemann-roch fails at degree {} class {:?}",
                    deg, c.reduced
                ));
            }
        }
    }
    let k = canonical_divisor(&base);
    if rank(&base, &k, q) != genus - 1 {
        pass = false;
        notes.push("canonical divisor rank is not g - 1".into());
    }
    for deg in (2 * genus - 1)..=(2 * genus + 2) {
        for c in picard_classes(&base, deg, q) {
            if rank(&base, &c.reduced, q) != deg - genus {
                pass = false;
                notes.push(format!("rank at degree {} is not deg - g", deg));
            }
        }
    }
    // Class counts at every sampled degree equal the spanning tree count,
    // itself equal to T(1,1) and to the reduced-Laplacian determinant.
    let t11 = tutte_eval(&base, 1, 1);
    if t11 != trees {
        pass = false;
        notes.push("T(1,1) differs from the spanning tree count".into());
    }
    for v in 0..base.vertex_count() {
        if base.spanning_tree_count_reduced(v) != trees {
            pass = false;
            notes.push("reduced Laplacian determinant depends on the dropped row".into());
        }
    }
    for deg in -2..=hi {
        let count = picard_classes(&base, deg, q).len();
        if num_bigint::BigInt::from(count) != trees {
            pass = false;
            notes.push(format!(
                "class count at degree {} is not the tree count",
                deg
            ));
        }
    }

    Report {
        value: json!({
            "schema": SCHEMA,
            "command": "riemann-roch",
            "genus": genus,
            "degree_box": [-2, hi],
            "spanning_trees": trees.to_string(),
            "notes": notes,
            "pass": pass,
        }),
        human: format!(
            "riemann-roch suite (loops stripped): genus {}, degrees -2..={}, classes per degree {}\n{}{}\n",
            genus,
            hi,
            trees,
            notes.iter().map(|n| format!("  {}\n", n)).collect::<String>(),
            verdict(pass)
        ),
        pass,
    }
}

fn appendix_report(g: &Arc<Multigraph>) -> Report {
    let base = g.strip_loops();
    let genus = base.genus() as i64;
    let loops = g.loop_count();
    let q = 0;
    let sink = if g.vertex_count() > 1 { 1 } else { 0 };
    let trees_count: u64 = critmod::divisor::superstables(&base, q).len() as u64;
    let d_max = (genus + 3) as usize;
    let bsc = bsc_coefficients(&base, q, d_max);
    let toppling_hilbert = hilb_toppling_data(&base, d_max + genus.max(0) as usize + 1);
    let mut pass = true;
    let mut notes = Vec::new();

    // h_k(bsc) = N - h_{g-1-k}(toppling quotient) for -g <= k <= g + 3.
    for k in -genus..=(genus + 3).min(d_max as i64) {
        let lhs = if k < 0 { 0 } else { bsc.h[k as usize] };
        let l = genus - 1 - k;
        let rhs = trees_count
            - if l < 0 {
                0
            } else {
                critmod::series::hilb_toppling(&base, l)
            };
        if lhs != rhs {
            pass = false;
            notes.push(format!("coefficient identity fails at k = {}", k));
        }
    }
    // Stabilization at the tree count beyond 2g - 2.
    for k in 0..=d_max as i64 {
        if k > 2 * genus - 2 && bsc.h[k as usize] != trees_count {
            pass = false;
            notes.push(format!("bsc coefficient at {} is not the tree count", k));
        }
    }
    // K-polynomial degree is exactly the genus.
    match bsc.k_polynomial() {
        Ok(k_bsc) => {
            if k_bsc.len() as i64 - 1 != genus {
                pass = false;
                notes.push("bsc K-polynomial degree is not the genus".into());
            }
            // Reciprocity: K_bsc(t) = t^g K_quotient(1/t).
            match toppling_hilbert.k_polynomial() {
                Ok(k_ri) => {
                    let mut reversed = vec![0i64; genus as usize + 1];
                    for (i, c) in k_ri.iter().enumerate() {
                        reversed[genus as usize - i] = *c;
                    }
                    let mut padded = k_bsc.clone();
                    padded.resize(genus as usize + 1, 0);
                    if padded != reversed {
                        pass = false;
                        notes.push("reciprocity between the two K-polynomials fails".into());
                    }
                }
                Err(e) => {
                    pass = false;
                    notes.push(format!("toppling K-polynomial: {}", e));
                }
            }
        }
        Err(e) => {
            pass = false;
            notes.push(format!("bsc K-polynomial: {}", e));
        }
    }
    // The toppling presentation's Hilbert data equals the class-counting
    // coefficients shifted by the loop twist.
    let pres = toppling_presentation(g, sink);
    let pres_hilbert = hilbert_function(&pres, d_max + loops);
    for t in 0..=(d_max + loops) {
        let expect = if t < loops {
            0
        } else {
            bsc.h.get(t - loops).copied().unwrap_or(0)
        };
        if pres_hilbert.h[t] != expect {
            pass = false;
            notes.push(format!("presentation dimension at degree {} differs", t));
        }
    }
    // Parking and toppling quotients have the same Hilbert function.
    let park = hilb_parking(&base, sink, d_max);
    for t in 0..=d_max {
        if park.h[t] != critmod::series::hilb_toppling(&base, t as i64) {
            pass = false;
            notes.push(format!(
                "parking and toppling quotients differ at degree {}",
                t
            ));
        }
    }

    Report {
        value: json!({
            "schema": SCHEMA,
            "command": "appendix",
            "genus": genus,
            "loops": loops,
            "bsc": serde_json::to_value(&bsc).unwrap(),
            "notes": notes,
            "pass": pass,
        }),
        human: format!(
            "divisor-class reciprocity suite: genus {}, coefficients {:?}\n{}{}\n",
            genus,
            bsc.h,
            notes
                .iter()
                .map(|n| format!("  {}\n", n))
                .collect::<String>(),
            verdict(pass)
        ),
        pass,
    }
}

fn suite_report(corpus: &Path) -> Result<Report, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus)
        .map_err(|e| format!("cannot read corpus directory {}: {}", corpus.display(), e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(format!("no .txt graph files in {}", corpus.display()));
    }
    let mut results = Vec::new();
    let mut human = String::new();
    let mut all_pass = true;
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let g = load_graph(path)?;
        let mut graph_checks: Vec<(String, bool)> = Vec::new();

        let sink = if g.vertex_count() > 1 { 1 } else { 0 };
        graph_checks.push(("merino".into(), merino_report(&g, sink).pass));
        graph_checks.push(("riemann-roch".into(), riemann_roch_report(&g, None).pass));
        graph_checks.push(("appendix".into(), appendix_report(&g).pass));
        graph_checks.push(("betti-tutte-identity".into(), betti_tutte_identity(&g)));

        for &(u, v, _) in g.pairs() {
            if g.is_bridge(u, v).map_err(|e| e.to_string())? {
                continue;
            }
            let alt = check_alt_deletion_contraction(&g, u, v)
                .map(|r| r.pass)
                .unwrap_or(false);
            graph_checks.push((format!("alt-dc ({}, {})", u, v), alt));
            let vanish = check_vanishing_implies_equality(&g, u, v)
                .map(|r| r.pass)
                .unwrap_or(false);
            graph_checks.push((format!("vanishing ({}, {})", u, v), vanish));
            if g.vertex_count() >= 3 {
                for sink in [u, v] {
                    for kind in [SequenceKind::GPark, SequenceKind::Toppling] {
                        let pass = exactness_command(&g, kind, u, v, sink, None)
                            .map(|r| r.pass)
                            .unwrap_or(false);
                        graph_checks.push((
                            format!("exactness {:?} ({}, {}) sink {}", kind, u, v, sink),
                            pass,
                        ));
                    }
                }
            }
        }

        for (check, pass) in &graph_checks {
            all_pass &= pass;
            human.push_str(&format!("{}  {}  {}\n", verdict(*pass), name, check));
        }
        results.push(json!({
            "graph": name,
            "checks": graph_checks
                .iter()
                .map(|(c, p)| json!({"check": c, "pass": p}))
                .collect::<Vec<_>>(),
        }));
    }
    human.push_str(&format!("suite: {}\n", verdict(all_pass)));
    Ok(Report {
        value: json!({
            "schema": SCHEMA,
            "command": "suite",
            "graphs": results,
            "pass": all_pass,
        }),
        human,
        pass: all_pass,
    })
}

/// The signed Betti generating function equals `T(1,t) (1-t)^(n-1)`.
fn betti_tutte_identity(g: &Arc<Multigraph>) -> bool {
    let sink = if g.vertex_count() > 1 { 1 } else { 0 };
    let k_max = g.edge_count() + g.vertex_count();
    let alt = alternating_numbers(g, sink, k_max);
    let t1t = tutte_eval_1_t(g);
    let n = g.vertex_count() as i64;
    let mut expect = vec![0i64; k_max + 1];
    let mut binom = vec![0i64; g.vertex_count()];
    for (k, b) in binom.iter_mut().enumerate() {
        let mut c = 1i64;
        for i in 0..k {
            c = c * (n - 1 - i as i64) / (i as i64 + 1);
        }
        *b = if k % 2 == 0 { c } else { -c };
    }
    for (j, c) in t1t.iter().enumerate() {
        let c = match u64::try_from(c) {
            Ok(c) => c as i64,
            Err(_) => return false,
        };
        for (k, b) in binom.iter().enumerate() {
            if j + k <= k_max {
                expect[j + k] += c * b;
            }
        }
    }
    alt == expect
}
