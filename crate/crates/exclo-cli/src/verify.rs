//! Named verification batteries for the `verify` subcommand.
//!
//! Each tag runs a fixed instance set and reports PASS, FAIL with the first
//! mismatch, or SKIPPED when the search budget ran out before a decision.
//! Tags cover: the ladder/prism structure of every box graph (T4), triangle
//! freeness (C5) and odd girth (T6), single-copy satisfaction of the
//! E-principle (C7), the two-copy activation to five events (T9), the
//! two-copy impossibility for longer cycles (T10, C11), the three-copy
//! impossibility (T12), the closed-form verdict table (T13-table), the
//! never-extendable product cliques (VIB), clique doubling up to twenty
//! events (R8), and the small Ramsey computations behind the bounds
//! (RAMSEY-SMALL).

use exclo::cert;
use exclo::clique::{self, Clique, CliqueError, SearchOptions};
use exclo::exgraph::{build_exclusivity_graph, ExclusivityGraph};
use exclo::graph::Graph;
use exclo::iso::is_isomorphic;
use exclo::product::{multicolor_product, or_product, ColoredMultigraph};
use exclo::ramsey::{self, Verdict};
use exclo::rat::{rat, rat_to_string, Rat};
use exclo::scenario::{enumerate_pr_boxes, make_pr_box, PrBoxSpec};
use exclo::sym::{cycle_box_generators, power_lift};
use serde::Serialize;
use std::fmt;
use std::time::{Duration, Instant};

pub const TAGS: [&str; 12] = [
    "T4",
    "C5",
    "T6",
    "C7",
    "T9",
    "T10",
    "C11",
    "T12",
    "T13-table",
    "VIB",
    "R8",
    "RAMSEY-SMALL",
];

#[derive(Serialize)]
pub struct VerifyReport {
    pub tag: String,
    pub instances: Vec<InstanceReport>,
}

impl VerifyReport {
    pub fn count(&self, status: Status) -> usize {
        self.instances.iter().filter(|i| i.status == status).count()
    }
}

#[derive(Serialize)]
pub struct InstanceReport {
    pub instance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub wall_ms: u128,
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

enum Check {
    Pass,
    Fail(String),
    Skipped(String),
}

/// `Err` strings become FAIL; a budget error becomes SKIPPED so an aborted
/// search is never reported as either answer.
fn outcome(r: Result<Result<(), String>, CliqueError>) -> Check {
    match r {
        Ok(Ok(())) => Check::Pass,
        Ok(Err(msg)) => Check::Fail(msg),
        Err(CliqueError::BudgetExceeded { budget }) => {
            Check::Skipped(format!("node budget of {budget} exhausted"))
        }
        Err(e) => Check::Fail(e.to_string()),
    }
}

fn timed(name: impl Into<String>, f: impl FnOnce() -> Check) -> InstanceReport {
    let start = Instant::now();
    let check = f();
    let wall_ms = start.elapsed().as_millis();
    let (status, reason) = match check {
        Check::Pass => (Status::Pass, None),
        Check::Fail(msg) => (Status::Fail, Some(msg)),
        Check::Skipped(msg) => (Status::Skipped, Some(msg)),
    };
    InstanceReport { instance: name.into(), status, reason, wall_ms }
}

pub fn run_tag(tag: &str, budget: Option<u64>) -> Option<VerifyReport> {
    let opts = SearchOptions {
        node_budget: budget.unwrap_or(SearchOptions::default().node_budget),
    };
    let instances = match tag {
        "T4" => structure_instances(),
        "C5" => triangle_instances(),
        "T6" => girth_instances(),
        "C7" => single_copy_instances(&opts),
        "T9" => activation_instances(&opts),
        "T10" => two_copy_bound_instances(&opts),
        "C11" => two_copy_none_instances(&opts),
        "T12" => three_copy_instances(&opts),
        "T13-table" => table_instances(&opts),
        "VIB" => extendability_instances(),
        "R8" => doubling_instances(),
        "RAMSEY-SMALL" => ramsey_small_instances(),
        _ => return None,
    };
    Some(VerifyReport { tag: tag.to_string(), instances })
}

fn canonical(n: usize) -> ExclusivityGraph {
    build_exclusivity_graph(&make_pr_box(&PrBoxSpec::canonical(n)).unwrap())
}

fn every_box(n: usize) -> Vec<ExclusivityGraph> {
    enumerate_pr_boxes(n)
        .unwrap()
        .iter()
        .map(build_exclusivity_graph)
        .collect()
}

fn joint(n: usize, k: usize) -> (ExclusivityGraph, exclo::graph::WeightedGraph) {
    let xg = canonical(n);
    let hosts = vec![xg.host(); k];
    let host = or_product(&hosts).unwrap();
    (xg, host)
}

fn colored(n: usize, k: usize) -> ColoredMultigraph {
    let xg = canonical(n);
    let hosts = vec![xg.host(); k];
    multicolor_product(&hosts).unwrap()
}

fn box_symmetries(xg: &ExclusivityGraph, k: usize) -> Result<Vec<Vec<u32>>, String> {
    let factor = cycle_box_generators(xg).map_err(|e| e.to_string())?;
    power_lift(&factor, xg.vertex_count(), k).map_err(|e| e.to_string())
}

/// T4: every box graph on n measurements is the ladder (even n) or prism
/// (odd n) on 2n vertices, 3-regular with 3n edges.
fn structure_instances() -> Vec<InstanceReport> {
    (4..=10)
        .map(|n| {
            timed(format!("n={n} (all {} boxes)", 1usize << (n - 1)), move || {
                let template = if n % 2 == 0 {
                    Graph::mobius_ladder(2 * n).unwrap()
                } else {
                    Graph::prism(n).unwrap()
                };
                for (i, xg) in every_box(n).iter().enumerate() {
                    let g = xg.graph();
                    if g.vertex_count() != 2 * n || g.edge_count() != 3 * n {
                        return Check::Fail(format!(
                            "box {i}: got {} vertices and {} edges",
                            g.vertex_count(),
                            g.edge_count()
                        ));
                    }
                    if (0..g.vertex_count()).any(|v| g.degree(v) != 3) {
                        return Check::Fail(format!("box {i}: not 3-regular"));
                    }
                    match is_isomorphic(g, &template) {
                        Ok(true) => {}
                        Ok(false) => {
                            return Check::Fail(format!("box {i}: not isomorphic to the template"))
                        }
                        Err(e) => return Check::Fail(e.to_string()),
                    }
                }
                Check::Pass
            })
        })
        .collect()
}

/// C5: no box graph contains a triangle.
fn triangle_instances() -> Vec<InstanceReport> {
    (4..=12)
        .map(|n| {
            timed(format!("n={n} (all {} boxes)", 1usize << (n - 1)), move || {
                for (i, xg) in every_box(n).iter().enumerate() {
                    if xg.graph().has_triangle() {
                        return Check::Fail(format!("box {i} contains a triangle"));
                    }
                }
                Check::Pass
            })
        })
        .collect()
}

/// T6: the shortest odd cycle has length n+1 (even n) or n (odd n).
fn girth_instances() -> Vec<InstanceReport> {
    (4..=12)
        .map(|n| {
            timed(format!("n={n} (all {} boxes)", 1usize << (n - 1)), move || {
                let expect = if n % 2 == 0 { n + 1 } else { n };
                for (i, xg) in every_box(n).iter().enumerate() {
                    match xg.graph().odd_girth_value() {
                        Some(got) if got == expect => {}
                        got => {
                            return Check::Fail(format!(
                                "box {i}: odd girth {got:?}, expected {expect}"
                            ))
                        }
                    }
                }
                Check::Pass
            })
        })
        .collect()
}

/// C7: a single copy of any box satisfies the E-principle.
fn single_copy_instances(opts: &SearchOptions) -> Vec<InstanceReport> {
    (4..=12)
        .map(|n| {
            let opts = *opts;
            timed(format!("n={n} (all {} boxes)", 1usize << (n - 1)), move || {
                for (i, xg) in every_box(n).iter().enumerate() {
                    match clique::find_violation_with(xg.host(), &opts) {
                        Ok(None) => {}
                        Ok(Some(cert)) => {
                            return Check::Fail(format!(
                                "box {i}: found {} events with probability {}",
                                cert.clique.len(),
                                rat_to_string(&cert.clique.weight_sum())
                            ))
                        }
                        Err(e) => return Check::Fail(e.to_string()),
                    }
                }
                Check::Pass
            })
        })
        .collect()
}

/// T9: two copies of the n=4 or n=5 box activate a violation through five
/// pairwise-exclusive events, and the pentagon/pentagram pairing constructs
/// one explicitly.
fn activation_instances(opts: &SearchOptions) -> Vec<InstanceReport> {
    [4usize, 5]
        .iter()
        .map(|&n| {
            let opts = *opts;
            timed(format!("k=2 n={n}"), move || {
                let (xg, host) = joint(n, 2);
                outcome((|| {
                    let (size, witness) = clique::max_clique_with(&host.graph, &opts)?;
                    if size != 5 {
                        return Ok(Err(format!("clique number {size}, expected 5")));
                    }
                    if Clique::new(&host, &witness).is_err() {
                        return Ok(Err("witness failed revalidation".into()));
                    }
                    let cert = match clique::find_violation_with(&host, &opts)? {
                        Some(cert) => cert,
                        None => return Ok(Err("no violation found".into())),
                    };
                    if cert.excess != rat(1, 4) {
                        return Ok(Err(format!(
                            "excess {}, expected 1/4",
                            rat_to_string(&cert.excess)
                        )));
                    }
                    // Pair the five-cycles of the two factors directly.
                    let m = colored(n, 2);
                    let (_, w1) = xg.graph().odd_girth().unwrap();
                    let five: Vec<usize> = w1.vertices().to_vec();
                    let k5 = clique::build_k5_two_c5(&m, &five, &five)?;
                    let flat = m.flatten();
                    match Clique::new(&flat, &k5) {
                        Ok(c) if c.len() == 5 && c.weight_sum() == rat(5, 4) => Ok(Ok(())),
                        Ok(c) => Ok(Err(format!(
                            "paired clique has {} vertices, weight {}",
                            c.len(),
                            rat_to_string(&c.weight_sum())
                        ))),
                        Err(e) => Ok(Err(e.to_string())),
                    }
                })())
            })
        })
        .collect()
}

/// T10: two copies of a longer box reach exactly four mutually exclusive
/// events — the product construction's floor — and no more.
fn two_copy_bound_instances(opts: &SearchOptions) -> Vec<InstanceReport> {
    (6..=10)
        .map(|n| {
            let opts = *opts;
            timed(format!("k=2 n={n}"), move || {
                outcome((|| {
                    let m = colored(n, 2);
                    let e0 = m.factor(0).graph.edges()[0];
                    let e1 = m.factor(1).graph.edges()[0];
                    let quad = clique::trivial_clique(&m, &[e0, e1])?;
                    let flat = m.flatten();
                    match Clique::new(&flat, &quad) {
                        Ok(c) if c.len() == 4 => {}
                        _ => return Ok(Err("endpoint-combination clique is not a K_4".into())),
                    }
                    let (size, _) = clique::max_clique_with(&flat.graph, &opts)?;
                    if size != 4 {
                        return Ok(Err(format!("clique number {size}, expected 4")));
                    }
                    Ok(Ok(()))
                })())
            })
        })
        .collect()
}

/// C11: two copies of a longer box never violate — no five to seven
/// pairwise-exclusive events exist at all.
fn two_copy_none_instances(opts: &SearchOptions) -> Vec<InstanceReport> {
    (6..=10)
        .map(|n| {
            let opts = *opts;
            timed(format!("k=2 n={n}"), move || {
                outcome((|| {
                    let (_, host) = joint(n, 2);
                    if let Some(cert) = clique::find_violation_with(&host, &opts)? {
                        return Ok(Err(format!(
                            "unexpected violation of weight {}",
                            rat_to_string(&cert.clique.weight_sum())
                        )));
                    }
                    for s in [5usize, 6, 7] {
                        if clique::find_clique_of_size_with(&host.graph, s, &opts)?.is_some() {
                            return Ok(Err(format!("found {s} pairwise-exclusive events")));
                        }
                    }
                    Ok(Ok(()))
                })())
            })
        })
        .collect()
}

/// T12: three copies of the n=6 or n=7 box top out at eight mutually
/// exclusive events, so the E-principle holds; decided by the orbit-reduced
/// exact search.
fn three_copy_instances(opts: &SearchOptions) -> Vec<InstanceReport> {
    [6usize, 7]
        .iter()
        .map(|&n| {
            let opts = *opts;
            timed(format!("k=3 n={n}"), move || {
                let (xg, host) = joint(n, 3);
                let gens = match box_symmetries(&xg, 3) {
                    Ok(gens) => gens,
                    Err(e) => return Check::Fail(e),
                };
                outcome((|| {
                    let (size, witness) =
                        clique::max_clique_transitive_with(&host.graph, &gens, &opts)?;
                    if size != 8 {
                        return Ok(Err(format!("clique number {size}, expected 8")));
                    }
                    if Clique::new(&host, &witness).is_err() {
                        return Ok(Err("witness failed revalidation".into()));
                    }
                    match clique::find_violation_transitive_with(&host, &gens, &opts)? {
                        None => Ok(Ok(())),
                        Some(cert) => Ok(Err(format!(
                            "unexpected violation of weight {}",
                            rat_to_string(&cert.clique.weight_sum())
                        ))),
                    }
                })())
            })
        })
        .collect()
}

/// T13-table: the closed-form verdict table over all cells with up to six
/// copies and cycles up to 70, plus solver agreement where both speak.
fn table_instances(opts: &SearchOptions) -> Vec<InstanceReport> {
    let mut out = vec![timed("cells k<=6 n<=70", || {
        for k in 1..=6usize {
            for n in 4..=70usize {
                let expect = if k == 1 {
                    Verdict::NoViolation
                } else if n <= 5 {
                    Verdict::Violates
                } else if k <= 3 {
                    Verdict::NoViolation
                } else if n <= (1 << k) + 1 {
                    Verdict::Unknown
                } else {
                    Verdict::NoViolation
                };
                match ramsey::rule_out(k, n) {
                    Ok(v) if v.verdict == expect => {}
                    Ok(v) => {
                        return Check::Fail(format!(
                            "cell ({k}, {n}): {} but the table says {expect}",
                            v.verdict
                        ))
                    }
                    Err(e) => return Check::Fail(format!("cell ({k}, {n}): {e}")),
                }
            }
        }
        Check::Pass
    })];

    let opts2 = *opts;
    out.push(timed("two-copy solver agreement n=4..8", move || {
        outcome((|| {
            for n in 4..=8usize {
                let (_, host) = joint(n, 2);
                let found = clique::find_violation_with(&host, &opts2)?.is_some();
                let verdict = ramsey::rule_out(2, n).unwrap().verdict;
                let expect = verdict == Verdict::Violates;
                if found != expect {
                    return Ok(Err(format!(
                        "k=2 n={n}: search found={found} but verdict is {verdict}"
                    )));
                }
            }
            Ok(Ok(()))
        })())
    }));

    out.push(timed("three-copy doubling agreement n=4", || {
        if ramsey::rule_out(3, 4).unwrap().verdict != Verdict::Violates {
            return Check::Fail("cell (3, 4) is not VIOLATES".into());
        }
        match doubled_ten() {
            Ok(c) if c.weight_sum() > Rat::from_integer(1) => Check::Pass,
            Ok(c) => Check::Fail(format!(
                "doubled clique weighs {}",
                rat_to_string(&c.weight_sum())
            )),
            Err(e) => Check::Fail(e),
        }
    }));
    out
}

/// VIB: the endpoint-combination clique can never grow by one more vertex,
/// for two and three copies of every short box.
fn extendability_instances() -> Vec<InstanceReport> {
    let mut out = Vec::new();
    for k in [2usize, 3] {
        for n in 4..=8usize {
            out.push(timed(format!("k={k} n={n}"), move || {
                let m = colored(n, k);
                let edges: Vec<(usize, usize)> =
                    (0..k).map(|i| m.factor(i).graph.edges()[0]).collect();
                match clique::trivial_clique(&m, &edges)
                    .and_then(|c| clique::is_extendable(&m, &c))
                {
                    Ok(false) => Check::Pass,
                    Ok(true) => Check::Fail("clique extends by another vertex".into()),
                    Err(e) => Check::Fail(e.to_string()),
                }
            }));
        }
    }
    out
}

/// Builds the ten-event clique for three copies of the n=4 box by doubling
/// the five-event construction through an edge of the third copy.
fn doubled_ten() -> Result<Clique, String> {
    let xg = canonical(4);
    let m2 = colored(4, 2);
    let (_, w) = xg.graph().odd_girth().unwrap();
    let five: Vec<usize> = w.vertices().to_vec();
    let k5 = clique::build_k5_two_c5(&m2, &five, &five).map_err(|e| e.to_string())?;
    let m3 = colored(4, 3);
    let edge = m3.factor(2).graph.edges()[0];
    let k10 = clique::double_clique(&m3, &k5, edge).map_err(|e| e.to_string())?;
    Clique::new(&m3.flatten(), &k10).map_err(|e| e.to_string())
}

/// R8: doubling the five-event clique gives ten events across three copies
/// (probability 10/8), and doubling again gives twenty across four copies
/// (20/16); both certificates survive independent revalidation.
fn doubling_instances() -> Vec<InstanceReport> {
    let mut out = vec![timed("K_10 across three copies", || {
        match doubled_ten() {
            Ok(c) if c.len() == 10 && c.weight_sum() == rat(10, 8) => {
                // The certificate round-trips through export and recheck.
                let cert = exclo::clique::ViolationCertificate {
                    excess: c.weight_sum() - Rat::from_integer(1),
                    clique: c,
                };
                let specs = vec![PrBoxSpec::canonical(4); 3];
                match cert::export_certificate(&specs, &cert)
                    .and_then(|doc| cert::verify_certificate(&doc))
                {
                    Ok(summary) if summary.size == 10 => Check::Pass,
                    Ok(summary) => {
                        Check::Fail(format!("recheck saw {} events", summary.size))
                    }
                    Err(e) => Check::Fail(e.to_string()),
                }
            }
            Ok(c) => Check::Fail(format!(
                "{} events of weight {}",
                c.len(),
                rat_to_string(&c.weight_sum())
            )),
            Err(e) => Check::Fail(e),
        }
    })];

    out.push(timed("K_20 across four copies", || {
        let ten = match doubled_ten() {
            Ok(c) => c,
            Err(e) => return Check::Fail(e),
        };
        let m4 = colored(4, 4);
        let edge = m4.factor(3).graph.edges()[0];
        match clique::double_clique(&m4, ten.vertices(), edge)
            .map_err(|e| e.to_string())
            .and_then(|k20| Clique::new(&m4.flatten(), &k20).map_err(|e| e.to_string()))
        {
            Ok(c) if c.len() == 20 && c.weight_sum() == rat(20, 16) => Check::Pass,
            Ok(c) => Check::Fail(format!(
                "{} events of weight {}",
                c.len(),
                rat_to_string(&c.weight_sum())
            )),
            Err(e) => Check::Fail(e),
        }
    }));
    out
}

/// RAMSEY-SMALL: the exhaustive and backtracking coloring searches replay
/// the small Ramsey facts the verdict table leans on.
fn ramsey_small_instances() -> Vec<InstanceReport> {
    let mut out = Vec::new();

    out.push(timed("triangles forced on K_6, not K_5", || {
        match (ramsey::exhaustive_check(6, 2, &[3, 3]), ramsey::exhaustive_check(5, 2, &[3, 3])) {
            (Ok(six), Ok(five)) => {
                if !six.forced {
                    Check::Fail("some 2-coloring of K_6 avoids monochromatic triangles".into())
                } else if five.forced {
                    Check::Fail("K_5 cannot avoid monochromatic triangles".into())
                } else {
                    match five.counterexample {
                        Some(c) => match ramsey::mono_odd_cycle(&c, &[3, 3]) {
                            Ok(None) => Check::Pass,
                            Ok(Some(_)) => {
                                Check::Fail("counterexample has a monochromatic triangle".into())
                            }
                            Err(e) => Check::Fail(e.to_string()),
                        },
                        None => Check::Fail("missing counterexample".into()),
                    }
                }
            }
            (a, b) => Check::Fail(format!("{a:?} / {b:?}")),
        }
    }));

    out.push(timed("short-cycle bounds forced on K_5, not K_4", || {
        match (ramsey::exhaustive_check(5, 2, &[5, 3]), ramsey::exhaustive_check(4, 2, &[5, 3])) {
            (Ok(five), Ok(four)) => {
                if !five.forced {
                    Check::Fail("some 2-coloring of K_5 avoids both cycle bounds".into())
                } else if four.forced || four.counterexample.is_none() {
                    Check::Fail("K_4 should admit a counterexample".into())
                } else {
                    Check::Pass
                }
            }
            (a, b) => Check::Fail(format!("{a:?} / {b:?}")),
        }
    }));

    out.push(timed("all 1024 2-colorings of K_5 have a short odd cycle", || {
        match ramsey::exhaustive_check(5, 2, &[5, 5]) {
            Ok(o) if o.forced => Check::Pass,
            Ok(_) => Check::Fail("a coloring of K_5 avoids odd cycles up to 5".into()),
            Err(e) => Check::Fail(e.to_string()),
        }
    }));

    out.push(timed("doubling colorings are bipartite with distinct labels", || {
        for k in 1..=5usize {
            let c = match ramsey::bipartite_coloring(k) {
                Ok(c) => c,
                Err(e) => return Check::Fail(e.to_string()),
            };
            match ramsey::label_vertices(&c) {
                Ok(labels) => {
                    let mut sorted = labels.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != 1 << k {
                        return Check::Fail(format!(
                            "k={k}: {} distinct labels, expected {}",
                            sorted.len(),
                            1 << k
                        ));
                    }
                }
                Err(e) => return Check::Fail(format!("k={k}: {e}")),
            }
        }
        Check::Pass
    }));

    out.push(timed("a 3-coloring of K_8 avoids odd cycles up to 5", || {
        match ramsey::search_coloring_with(8, 3, &[5, 5, 5], Some(Duration::from_secs(300))) {
            Ok(Some(c)) => match ramsey::mono_odd_cycle(&c, &[5, 5, 5]) {
                Ok(None) => Check::Pass,
                Ok(Some((color, _))) => {
                    Check::Fail(format!("found coloring has an odd cycle in color {color}"))
                }
                Err(e) => Check::Fail(e.to_string()),
            },
            Ok(None) => Check::Fail("no such coloring exists".into()),
            Err(e) => Check::Skipped(e.to_string()),
        }
    }));

    out
}
