//! Command-line front end over the `exclo` library: builds the cycle-box
//! exclusivity graphs, materializes joint products of independent copies,
//! searches for E-principle violations, runs named verification batteries,
//! answers the copies-vs-cycle-length verdict table, and revalidates
//! exported certificates and colorings.
//!
//! Exit codes: 0 for success (including an UNKNOWN verdict), 1 for a failed
//! verification, 2 for usage errors, 3 for an exhausted search budget.

mod verify;

use clap::{Parser, Subcommand};
use exclo::cert::{self, CertificateDoc};
use exclo::clique::{self, CliqueError, SearchOptions};
use exclo::exgraph::{build_exclusivity_graph, ExclusivityGraph};
use exclo::product::{multicolor_product_with, or_product_with, ProductError, ProductLimits};
use exclo::ramsey::{self, ColoringDoc, EdgeColoring};
use exclo::rat::rat_to_string;
use exclo::scenario::{make_pr_box, PrBoxSpec};
use exclo::sym::{cycle_box_generators, power_lift};
use serde::Serialize;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "exclo", version, about = "Exclusivity-graph toolkit for joint cycle boxes")]
struct Cli {
    /// Worker threads for parallel phases (0 = one per CPU).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Emit machine-readable JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write DIMACS and JSON files for one cycle-box exclusivity graph.
    Graph {
        /// Number of cyclically compatible measurements (at least 4).
        #[arg(long)]
        n: usize,
        /// Anti-correlated contexts, comma separated; defaults to the
        /// canonical choice (the last context only).
        #[arg(long, value_delimiter = ',')]
        anti: Option<Vec<usize>>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Materialize the joint graph of k independent canonical boxes.
    Product {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Keep one edge layer per copy instead of flattening.
        #[arg(long)]
        colored: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Search for a set of pairwise-exclusive joint events with total
    /// probability above 1 across k copies of the canonical n-cycle box.
    Violation {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Node budget for the clique search (default 10^9).
        #[arg(long)]
        budget: Option<u64>,
        /// Write the found certificate to this file as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named battery of checks and report PASS/FAIL per instance.
    Verify {
        /// One of: T4, C5, T6, C7, T9, T10, C11, T12, T13-table, VIB, R8,
        /// RAMSEY-SMALL.
        tag: String,
        /// Node budget for clique searches inside the battery.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Decide whether k copies of an n-cycle box can violate the
    /// E-principle, from the closed-form verdict table.
    RuleOut { k: usize, n: usize },
    /// Revalidate an exported violation certificate from scratch.
    CheckCertificate { file: PathBuf },
    /// Revalidate an edge-coloring document and report monochromatic odd
    /// cycles within the given per-color length bounds.
    CheckColoring {
        file: PathBuf,
        /// Per-color bounds, comma separated; defaults to no length limit.
        #[arg(long, value_delimiter = ',')]
        bounds: Option<Vec<usize>>,
    },
}

/// A terminal failure: message plus the process exit code it maps to.
pub(crate) struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    pub(crate) fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
    pub(crate) fn fail(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }
    pub(crate) fn budget(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global().ok();
    }
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Graph { n, anti, out } => cmd_graph(*n, anti.as_deref(), out, cli.json),
        Command::Product { n, k, colored, out } => cmd_product(*n, *k, *colored, out, cli.json),
        Command::Violation { n, k, budget, out } => {
            cmd_violation(*n, *k, *budget, out.as_deref(), cli.json)
        }
        Command::Verify { tag, budget } => cmd_verify(tag, *budget, cli.json),
        Command::RuleOut { k, n } => cmd_rule_out(*k, *n, cli.json),
        Command::CheckCertificate { file } => cmd_check_certificate(file, cli.json),
        Command::CheckColoring { file, bounds } => {
            cmd_check_coloring(file, bounds.as_deref(), cli.json)
        }
    }
}

/// The box whose exclusivity graph every command builds on: validation
/// errors come back as usage failures since they describe bad parameters.
fn box_graph(n: usize, anti: Option<&[usize]>) -> Result<ExclusivityGraph, Failure> {
    let spec = match anti {
        None => PrBoxSpec::canonical(n),
        Some(list) => {
            PrBoxSpec { n, anti_contexts: list.iter().copied().collect::<BTreeSet<usize>>() }
        }
    };
    let corr = make_pr_box(&spec).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(build_exclusivity_graph(&corr))
}

/// Materialization guards, with the vertex cap overridable through the
/// EXCLO_VERTEX_CAP environment variable.
fn limits() -> Result<ProductLimits, Failure> {
    let mut lim = ProductLimits::default();
    if let Ok(text) = std::env::var("EXCLO_VERTEX_CAP") {
        lim.vertex_cap = text
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("EXCLO_VERTEX_CAP is not a number: {text:?}")))?;
    }
    Ok(lim)
}

fn cap_failure(n: usize, k: usize, e: ProductError) -> Failure {
    match e {
        ProductError::VertexCap { .. } | ProductError::MemoryCap { .. } => Failure::usage(format!(
            "{e}; this joint graph is too large to materialize — try `exclo rule-out {k} {n}` \
             for the closed-form verdict"
        )),
        other => Failure::usage(other.to_string()),
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content)
        .map_err(|e| Failure::fail(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct FilesOut {
    files: Vec<String>,
}

fn report_files(paths: &[PathBuf], json: bool) -> i32 {
    if json {
        let doc = FilesOut {
            files: paths.iter().map(|p| p.display().to_string()).collect(),
        };
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        for p in paths {
            println!("wrote {}", p.display());
        }
    }
    0
}

fn cmd_graph(n: usize, anti: Option<&[usize]>, out: &Path, json: bool) -> Result<i32, Failure> {
    let xg = box_graph(n, anti)?;
    let col = out.join(format!("box-n{n}.col"));
    let js = out.join(format!("box-n{n}.json"));
    write_file(&col, &xg.graph().to_dimacs())?;
    write_file(&js, &xg.to_json())?;
    Ok(report_files(&[col, js], json))
}

fn cmd_product(n: usize, k: usize, colored: bool, out: &Path, json: bool) -> Result<i32, Failure> {
    if k == 0 {
        return Err(Failure::usage("need at least one copy (k >= 1)"));
    }
    let xg = box_graph(n, None)?;
    let hosts = vec![xg.host(); k];
    let lim = limits()?;
    let mut files = Vec::new();
    if colored {
        let m = multicolor_product_with(&hosts, &lim).map_err(|e| cap_failure(n, k, e))?;
        let layers = out.join(format!("layers-n{n}-k{k}.json"));
        write_file(&layers, &m.to_json())?;
        let col = out.join(format!("joint-n{n}-k{k}.col"));
        write_file(&col, &m.flatten().graph.to_dimacs())?;
        files.extend([layers, col]);
    } else {
        let joint = or_product_with(&hosts, &lim).map_err(|e| cap_failure(n, k, e))?;
        let col = out.join(format!("joint-n{n}-k{k}.col"));
        write_file(&col, &joint.graph.to_dimacs())?;
        let meta = out.join(format!("joint-n{n}-k{k}.json"));
        let doc = ProductMeta {
            n,
            k,
            vertex_count: joint.graph.vertex_count(),
            edge_count: joint.graph.edge_count(),
            vertex_weight: rat_to_string(&joint.weights[0]),
        };
        write_file(&meta, &serde_json::to_string_pretty(&doc).unwrap())?;
        files.extend([col, meta]);
    }
    Ok(report_files(&files, json))
}

#[derive(Serialize)]
struct ProductMeta {
    n: usize,
    k: usize,
    vertex_count: usize,
    edge_count: usize,
    vertex_weight: String,
}

#[derive(Serialize)]
struct ViolationOut {
    n: usize,
    k: usize,
    violation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight_sum: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    excess: Option<String>,
}

fn cmd_violation(
    n: usize,
    k: usize,
    budget: Option<u64>,
    out: Option<&Path>,
    json: bool,
) -> Result<i32, Failure> {
    if k == 0 {
        return Err(Failure::usage("need at least one copy (k >= 1)"));
    }
    let xg = box_graph(n, None)?;
    let hosts = vec![xg.host(); k];
    let joint = or_product_with(&hosts, &limits()?).map_err(|e| cap_failure(n, k, e))?;
    let opts =
        SearchOptions { node_budget: budget.unwrap_or(SearchOptions::default().node_budget) };

    // The copies are identical and their graph is vertex-transitive, so the
    // orbit-reduced search applies; fall back to the generic solver if the
    // symmetry extraction is out of scope for this n.
    let result = match cycle_box_generators(&xg) {
        Ok(factor_gens) => power_lift(&factor_gens, xg.vertex_count(), k)
            .map_err(CliqueError::from)
            .and_then(|gens| clique::find_violation_transitive_with(&joint, &gens, &opts)),
        Err(_) => clique::find_violation_with(&joint, &opts),
    };
    let found = match result {
        Ok(found) => found,
        Err(CliqueError::BudgetExceeded { budget }) => {
            return Err(Failure::budget(format!(
                "search budget of {budget} nodes exhausted before a decision"
            )))
        }
        Err(e) => return Err(Failure::fail(e.to_string())),
    };

    let mut report = ViolationOut { n, k, violation: false, size: None, weight_sum: None, excess: None };
    if let Some(cert) = &found {
        report.violation = true;
        report.size = Some(cert.clique.len());
        report.weight_sum = Some(rat_to_string(&cert.clique.weight_sum()));
        report.excess = Some(rat_to_string(&cert.excess));
        if let Some(path) = out {
            let specs = vec![PrBoxSpec::canonical(n); k];
            let doc = cert::export_certificate(&specs, cert)
                .map_err(|e| Failure::fail(e.to_string()))?;
            write_file(path, &serde_json::to_string_pretty(&doc).unwrap())?;
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else if let Some(cert) = &found {
        println!(
            "VIOLATION: {} pairwise-exclusive events, total probability {} (excess {})",
            cert.clique.len(),
            rat_to_string(&cert.clique.weight_sum()),
            rat_to_string(&cert.excess)
        );
        if let Some(path) = out {
            println!("certificate written to {}", path.display());
        }
    } else {
        println!("NONE: no set of pairwise-exclusive events exceeds total probability 1");
    }
    Ok(0)
}

fn cmd_verify(tag: &str, budget: Option<u64>, json: bool) -> Result<i32, Failure> {
    let report = verify::run_tag(tag, budget).ok_or_else(|| {
        Failure::usage(format!(
            "unknown tag {tag:?}; expected one of {}",
            verify::TAGS.join(", ")
        ))
    })?;
    let passed = report.count(verify::Status::Pass);
    let failed = report.count(verify::Status::Fail);
    let skipped = report.count(verify::Status::Skipped);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        for inst in &report.instances {
            let reason = inst
                .reason
                .as_ref()
                .map(|r| format!(" — {r}"))
                .unwrap_or_default();
            println!(
                "[{}] {}: {}{} ({} ms)",
                report.tag, inst.instance, inst.status, reason, inst.wall_ms
            );
        }
        println!("{}: {passed} passed, {failed} failed, {skipped} skipped", report.tag);
    }
    // Any failure is a verification failure; otherwise an exhausted budget
    // surfaces as the budget exit code so it is never mistaken for a pass.
    if failed > 0 {
        Ok(1)
    } else if skipped > 0 {
        Ok(3)
    } else {
        Ok(0)
    }
}

fn cmd_rule_out(k: usize, n: usize, json: bool) -> Result<i32, Failure> {
    let verdict = ramsey::rule_out(k, n).map_err(|e| Failure::usage(e.to_string()))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
    } else {
        println!("{}", verdict.verdict);
        println!("basis: {}", verdict.basis);
        println!("{}", verdict.detail);
    }
    Ok(0)
}

fn cmd_check_certificate(file: &Path, json: bool) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::fail(format!("cannot read {}: {e}", file.display())))?;
    let doc: CertificateDoc = serde_json::from_str(&text)
        .map_err(|e| Failure::fail(format!("malformed certificate: {e}")))?;
    let summary =
        cert::verify_certificate(&doc).map_err(|e| Failure::fail(format!("INVALID: {e}")))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    } else {
        println!(
            "VALID: {} pairwise-exclusive events over {} factors, total probability {} (excess {})",
            summary.size,
            summary.factors,
            rat_to_string(&summary.weight_sum),
            rat_to_string(&summary.excess)
        );
    }
    Ok(0)
}

#[derive(Serialize)]
struct ColoringOut {
    vertices: usize,
    colors: usize,
    monochromatic_odd_cycle: Option<MonoOut>,
}

#[derive(Serialize)]
struct MonoOut {
    color: usize,
    length: usize,
    cycle: Vec<usize>,
}

fn cmd_check_coloring(file: &Path, bounds: Option<&[usize]>, json: bool) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::fail(format!("cannot read {}: {e}", file.display())))?;
    let doc: ColoringDoc = serde_json::from_str(&text)
        .map_err(|e| Failure::fail(format!("malformed coloring: {e}")))?;
    let coloring =
        EdgeColoring::from_doc(&doc).map_err(|e| Failure::fail(format!("INVALID: {e}")))?;
    let bounds: Vec<usize> = match bounds {
        Some(list) => {
            if list.len() != coloring.k() {
                return Err(Failure::usage(format!(
                    "--bounds needs {} entries for this coloring, got {}",
                    coloring.k(),
                    list.len()
                )));
            }
            list.to_vec()
        }
        None => {
            // Largest odd cycle length K_m can hold, so "any odd cycle counts".
            let m = coloring.m();
            let cap = if m % 2 == 0 { m.saturating_sub(1) } else { m };
            vec![cap.max(3); coloring.k()]
        }
    };
    let mono = ramsey::mono_odd_cycle(&coloring, &bounds)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let out = ColoringOut {
        vertices: coloring.m(),
        colors: coloring.k(),
        monochromatic_odd_cycle: mono.map(|(color, witness)| MonoOut {
            color,
            length: witness.vertices().len(),
            cycle: witness.vertices().to_vec(),
        }),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("VALID: complete coloring of K_{} in {} colors", out.vertices, out.colors);
        match &out.monochromatic_odd_cycle {
            Some(m) => println!(
                "monochromatic odd cycle: color {} length {} through {:?}",
                m.color, m.length, m.cycle
            ),
            None => println!("no monochromatic odd cycle within bounds {bounds:?}"),
        }
    }
    Ok(0)
}
