//! The acceptance battery: one test per headline claim, each printing a
//! single `[acceptance]` line with its wall time. Everything is decided by
//! exact search over exact rationals; no test asserts a specific witness,
//! only sizes, weights, and validator verdicts.

use exclo::clique::{self, Clique, SearchOptions};
use exclo::exgraph::{build_exclusivity_graph, ExclusivityGraph};
use exclo::graph::{Graph, WeightedGraph};
use exclo::iso::is_isomorphic;
use exclo::product::{multicolor_product, or_product, ColoredMultigraph};
use exclo::ramsey::{self, Verdict};
use exclo::rat::{rat, Rat};
use exclo::scenario::{enumerate_pr_boxes, make_pr_box, PrBoxSpec};
use exclo::sym::{cycle_box_generators, power_lift};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn report(name: &str, start: Instant) {
    println!("[acceptance] {name}: PASS ({} ms)", start.elapsed().as_millis());
}

fn canonical(n: usize) -> ExclusivityGraph {
    build_exclusivity_graph(&make_pr_box(&PrBoxSpec::canonical(n)).unwrap())
}

fn all_boxes(n: usize) -> Vec<ExclusivityGraph> {
    enumerate_pr_boxes(n).unwrap().iter().map(build_exclusivity_graph).collect()
}

fn joint(n: usize, k: usize) -> WeightedGraph {
    let xg = canonical(n);
    or_product(&vec![xg.host(); k]).unwrap()
}

fn colored(n: usize, k: usize) -> ColoredMultigraph {
    let xg = canonical(n);
    multicolor_product(&vec![xg.host(); k]).unwrap()
}

/// The five-event clique over two copies, built from a shortest odd cycle
/// of each factor.
fn paired_k5(n: usize) -> (ColoredMultigraph, Vec<usize>) {
    let xg = canonical(n);
    let (_, w) = xg.graph().odd_girth().unwrap();
    let five: Vec<usize> = w.vertices().to_vec();
    let m = colored(n, 2);
    let k5 = clique::build_k5_two_c5(&m, &five, &five).unwrap();
    (m, k5)
}

#[test]
fn a01_every_box_graph_is_the_ladder_or_prism() {
    let start = Instant::now();
    for n in 4..=10usize {
        let template = if n % 2 == 0 {
            Graph::mobius_ladder(2 * n).unwrap()
        } else {
            Graph::prism(n).unwrap()
        };
        for (i, xg) in all_boxes(n).iter().enumerate() {
            let g = xg.graph();
            assert_eq!(g.vertex_count(), 2 * n, "n={n} box {i}");
            assert_eq!(g.edge_count(), 3 * n, "n={n} box {i}");
            assert!((0..2 * n).all(|v| g.degree(v) == 3), "n={n} box {i}");
            assert!(is_isomorphic(g, &template).unwrap(), "n={n} box {i}");
        }
    }
    report("a01 every box graph is the ladder or prism", start);
}

#[test]
fn a02_box_graphs_are_triangle_free_with_the_stated_odd_girth() {
    let start = Instant::now();
    for n in 4..=12usize {
        let expect = if n % 2 == 0 { n + 1 } else { n };
        for (i, xg) in all_boxes(n).iter().enumerate() {
            assert!(!xg.graph().has_triangle(), "n={n} box {i}");
            assert_eq!(xg.graph().odd_girth_value(), Some(expect), "n={n} box {i}");
        }
    }
    report("a02 box graphs are triangle-free with the stated odd girth", start);
}

#[test]
fn a03_single_copies_always_satisfy_the_principle() {
    let start = Instant::now();
    for n in 4..=12usize {
        for (i, xg) in all_boxes(n).iter().enumerate() {
            assert_eq!(clique::find_violation(xg.host()).unwrap(), None, "n={n} box {i}");
        }
    }
    report("a03 single copies always satisfy the principle", start);
}

#[test]
fn a04_two_copies_of_short_boxes_activate_a_violation() {
    let start = Instant::now();
    for n in [4usize, 5] {
        let host = joint(n, 2);
        let (size, witness) = clique::max_clique(&host.graph).unwrap();
        assert_eq!(size, 5, "n={n}");
        assert_eq!(Clique::new(&host, &witness).unwrap().weight_sum(), rat(5, 4));

        let cert = clique::find_violation(&host).unwrap().expect("violation exists");
        assert_eq!(cert.excess, rat(1, 4), "n={n}");

        // The explicit pairing of two shortest odd cycles gives the same
        // violation without any search.
        let (m, k5) = paired_k5(n);
        let c = Clique::new(&m.flatten(), &k5).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.weight_sum(), rat(5, 4));
    }
    report("a04 two copies of short boxes activate a violation", start);
}

#[test]
fn a05_two_copies_of_longer_boxes_top_out_at_four() {
    let start = Instant::now();
    for n in 6..=10usize {
        let m = colored(n, 2);
        let edges = [m.factor(0).graph.edges()[0], m.factor(1).graph.edges()[0]];
        let quad = clique::trivial_clique(&m, &edges).unwrap();
        let flat = m.flatten();
        assert_eq!(Clique::new(&flat, &quad).unwrap().len(), 4, "n={n}");
        let (size, _) = clique::max_clique(&flat.graph).unwrap();
        assert_eq!(size, 4, "n={n}");
    }
    report("a05 two copies of longer boxes top out at four", start);
}

#[test]
fn a06_three_copies_of_longer_boxes_top_out_at_eight() {
    let start = Instant::now();
    let opts = SearchOptions { node_budget: 20_000_000_000 };
    for n in [6usize, 7] {
        let xg = canonical(n);
        let host = joint(n, 3);
        let gens =
            power_lift(&cycle_box_generators(&xg).unwrap(), xg.vertex_count(), 3).unwrap();
        let (size, witness) =
            clique::max_clique_transitive_with(&host.graph, &gens, &opts).unwrap();
        assert_eq!(size, 8, "n={n}");
        assert!(Clique::new(&host, &witness).is_ok(), "n={n}");
        let cert = clique::find_violation_transitive_with(&host, &gens, &opts).unwrap();
        assert_eq!(cert, None, "n={n}");
    }
    report("a06 three copies of longer boxes top out at eight", start);
}

#[test]
fn a07_endpoint_cliques_never_extend() {
    let start = Instant::now();
    for k in [2usize, 3] {
        for n in 4..=8usize {
            let m = colored(n, k);
            let edges: Vec<(usize, usize)> =
                (0..k).map(|i| m.factor(i).graph.edges()[0]).collect();
            let c = clique::trivial_clique(&m, &edges).unwrap();
            assert_eq!(c.len(), 1 << k, "k={k} n={n}");
            assert!(!clique::is_extendable(&m, &c).unwrap(), "k={k} n={n}");
        }
    }
    report("a07 endpoint cliques never extend", start);
}

#[test]
fn a08_doubling_certifies_the_ten_event_violation() {
    let start = Instant::now();
    let (_, k5) = paired_k5(4);
    let m3 = colored(4, 3);
    let edge = m3.factor(2).graph.edges()[0];
    let k10 = clique::double_clique(&m3, &k5, edge).unwrap();
    let c = Clique::new(&m3.flatten(), &k10).unwrap();
    assert_eq!(c.len(), 10);
    assert_eq!(c.weight_sum(), rat(10, 8));
    assert!(c.weight_sum() > Rat::from_integer(1));
    report("a08 doubling certifies the ten-event violation", start);
}

#[test]
fn a09_small_ramsey_numbers_are_reproduced() {
    let start = Instant::now();
    let six = ramsey::exhaustive_check(6, 2, &[3, 3]).unwrap();
    assert!(six.forced, "triangles must be forced on K_6");
    let five = ramsey::exhaustive_check(5, 2, &[3, 3]).unwrap();
    assert!(!five.forced);
    let witness = five.counterexample.expect("a triangle-free 2-coloring of K_5");
    assert_eq!(ramsey::mono_odd_cycle(&witness, &[3, 3]).unwrap(), None);

    let five = ramsey::exhaustive_check(5, 2, &[5, 3]).unwrap();
    assert!(five.forced, "C5/C3 bounds must be forced on K_5");
    let four = ramsey::exhaustive_check(4, 2, &[5, 3]).unwrap();
    assert!(!four.forced);
    let witness = four.counterexample.expect("a clean 2-coloring of K_4");
    assert_eq!(ramsey::mono_odd_cycle(&witness, &[5, 3]).unwrap(), None);
    report("a09 small Ramsey numbers are reproduced", start);
}

#[test]
fn a10_every_two_coloring_of_k5_has_a_short_odd_cycle() {
    let start = Instant::now();
    let out = ramsey::exhaustive_check(5, 2, &[5, 5]).unwrap();
    assert!(out.forced);
    assert_eq!(out.counterexample, None);
    report("a10 every two-coloring of K_5 has a short odd cycle", start);
}

#[test]
fn a11_bipartite_colorings_carry_distinct_labels() {
    let start = Instant::now();
    for k in 1..=5usize {
        let c = ramsey::bipartite_coloring(k).unwrap();
        let bounds = vec![3; k];
        assert_eq!(ramsey::mono_odd_cycle(&c, &bounds).unwrap(), None, "k={k}");
        let mut labels = ramsey::label_vertices(&c).unwrap();
        labels.sort_unstable();
        labels.dedup();
        assert_eq!(labels.len(), 1 << k, "k={k}");
    }
    report("a11 bipartite colorings carry distinct labels", start);
}

#[test]
fn a12_a_three_coloring_of_k8_avoids_short_odd_cycles() {
    let start = Instant::now();
    let c = ramsey::search_coloring(8, 3, &[5, 5, 5]).unwrap().expect("coloring exists");
    assert_eq!(ramsey::mono_odd_cycle(&c, &[5, 5, 5]).unwrap(), None);
    report("a12 a three-coloring of K_8 avoids short odd cycles", start);
}

#[test]
fn a13_the_verdict_table_matches_the_closed_form() {
    let start = Instant::now();
    // Independent restatement of the published table.
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
            let got = ramsey::rule_out(k, n).unwrap();
            assert_eq!(got.verdict, expect, "cell ({k}, {n}): {}", got.detail);
        }
    }
    // Consistency with what the searches decide where both speak.
    for n in 4..=8usize {
        let found = clique::find_violation(&joint(n, 2)).unwrap().is_some();
        let cell = ramsey::rule_out(2, n).unwrap().verdict;
        assert_eq!(found, cell == Verdict::Violates, "k=2 n={n}");
    }
    assert_eq!(ramsey::rule_out(3, 4).unwrap().verdict, Verdict::Violates);
    report("a13 the verdict table matches the closed form", start);
}

/// Exhaustive clique reference over bitmask candidate sets.
fn brute_max_clique(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 20);
    let rows: Vec<u32> = (0..n)
        .map(|u| (0..n).filter(|&v| g.has_edge(u, v)).fold(0u32, |m, v| m | 1 << v))
        .collect();
    fn go(rows: &[u32], mut cand: u32, size: usize, best: &mut usize) {
        if size > *best {
            *best = size;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            go(rows, cand & rows[v], size + 1, best);
        }
    }
    let mut best = 0;
    go(&rows, (1u32 << n) - 1, 0, &mut best);
    best
}

/// Does some cyclic ordering of exactly these vertices walk along edges?
fn subset_has_cycle(g: &Graph, verts: &[usize]) -> bool {
    fn go(g: &Graph, verts: &[usize], used: &mut Vec<bool>, path: &mut Vec<usize>) -> bool {
        if path.len() == verts.len() {
            return g.has_edge(*path.last().unwrap(), path[0]);
        }
        let last = *path.last().unwrap();
        for (i, &v) in verts.iter().enumerate() {
            if !used[i] && g.has_edge(last, v) {
                used[i] = true;
                path.push(v);
                if go(g, verts, used, path) {
                    return true;
                }
                path.pop();
                used[i] = false;
            }
        }
        false
    }
    let mut used = vec![false; verts.len()];
    used[0] = true;
    go(g, verts, &mut used, &mut vec![verts[0]])
}

/// Shortest odd cycle by trying every odd-size vertex subset in increasing
/// size order.
fn brute_odd_girth(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    assert!(n <= 10);
    let mut len = 3;
    while len <= n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != len {
                continue;
            }
            let verts: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            if subset_has_cycle(g, &verts) {
                return Some(len);
            }
        }
        len += 2;
    }
    None
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

#[test]
fn a14_oracles_agree_with_the_optimized_code() {
    let start = Instant::now();

    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    for round in 0..200 {
        let n = rng.random_range(1..=20);
        let p = rng.random_range(0.15..0.75);
        let g = random_graph(&mut rng, n, p);
        let (size, vs) = clique::max_clique(&g).unwrap();
        assert_eq!(size, brute_max_clique(&g), "clique round {round}");
        assert!(clique::is_clique(&g, &vs));
    }

    for round in 0..200 {
        let n = rng.random_range(1..=10);
        let p = rng.random_range(0.1..0.8);
        let g = random_graph(&mut rng, n, p);
        assert_eq!(g.odd_girth_value(), brute_odd_girth(&g), "girth round {round}");
    }

    for round in 0..100 {
        let k = rng.random_range(1..=3);
        let factors: Vec<WeightedGraph> = (0..k)
            .map(|_| {
                let n = rng.random_range(1..=6);
                let p = rng.random_range(0.2..0.9);
                let graph = random_graph(&mut rng, n, p);
                let weights =
                    (0..n).map(|_| rat(rng.random_range(1..=3), rng.random_range(1..=4))).collect();
                WeightedGraph { graph, weights }
            })
            .collect();
        let refs: Vec<&WeightedGraph> = factors.iter().collect();
        let flat = multicolor_product(&refs).unwrap().flatten();
        let or = or_product(&refs).unwrap();
        assert_eq!(flat, or, "product round {round}");
    }

    report("a14 oracles agree with the optimized code", start);
}
