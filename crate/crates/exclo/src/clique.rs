//! Exact clique search and violation certificates.
//!
//! The solver is a branch-and-bound over bit-packed candidate sets: vertices
//! are relabeled along a degeneracy order, every clique is rooted at its
//! earliest member in that order, and each node prunes with a greedy coloring
//! bound (a clique meets every color class at most once). The weighted
//! variant bounds by cumulative class maxima instead of class counts. Both
//! searches are sequential and deterministic, and both charge every expanded
//! node against an explicit budget so runaway instances fail loudly instead
//! of hanging.
//!
//! A sum of probabilities of pairwise-exclusive events exceeds 1 exactly when
//! some clique of the weighted exclusivity graph has weight above 1;
//! [`find_violation`] decides that and returns the witness clique. Everything
//! returned here can be revalidated through [`Clique::new`], which checks
//! adjacency pairwise and never consults the solver.

use crate::bits::{self, words_for};
use crate::graph::{Graph, WeightedGraph};
use crate::product::{ColoredMultigraph, TupleVertex};
use crate::rat::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::mem;
use thiserror::Error;

/// Default cap on expanded search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Error)]
pub enum CliqueError {
    #[error("node budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexRange { v: usize, n: usize },
    #[error("vertex {v} appears more than once")]
    DuplicateVertex { v: usize },
    #[error("vertices {u} and {v} are not adjacent")]
    NotAClique { u: usize, v: usize },
    #[error("({u}, {v}) is not an edge of factor {factor}")]
    NotAFactorEdge { factor: usize, u: usize, v: usize },
    #[error("expected one edge per factor ({expected}), got {got}")]
    EdgeCount { expected: usize, got: usize },
    #[error("doubling needs at least two factors, the product has {k}")]
    TooFewFactors { k: usize },
    #[error("pairing five-cycles needs exactly two factors, the product has {k}")]
    NotTwoFactors { k: usize },
    #[error("prefix vertex {v} out of range ({size} prefix vertices)")]
    PrefixRange { v: usize, size: usize },
    #[error("factor {factor} cycle is invalid: {msg}")]
    BadFiveCycle { factor: usize, msg: String },
    #[error("weight of vertex {v} is not positive")]
    NonPositiveWeight { v: usize },
    #[error(transparent)]
    Symmetry(#[from] crate::sym::SymmetryError),
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// A set of pairwise-adjacent vertices together with its total weight.
/// Construction revalidates everything, so a `Clique` is trustworthy no
/// matter where its vertex list came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clique {
    vertices: Vec<usize>,
    weight_sum: Rat,
}

impl Clique {
    pub fn new(host: &WeightedGraph, vertices: &[usize]) -> Result<Clique, CliqueError> {
        let n = host.graph.vertex_count();
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        for &v in &vs {
            if v >= n {
                return Err(CliqueError::VertexRange { v, n });
            }
        }
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(CliqueError::DuplicateVertex { v: w[0] });
            }
        }
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if !host.graph.has_edge(u, v) {
                    return Err(CliqueError::NotAClique { u, v });
                }
            }
        }
        let weight_sum = vs.iter().map(|&v| host.weights[v]).sum();
        Ok(Clique { vertices: vs, weight_sum })
    }

    /// Vertices in ascending order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn weight_sum(&self) -> Rat {
        self.weight_sum
    }
}

/// Pairwise adjacency check with no solver involvement.
pub fn is_clique(g: &Graph, vertices: &[usize]) -> bool {
    let distinct: BTreeSet<usize> = vertices.iter().copied().collect();
    if distinct.len() != vertices.len() {
        return false;
    }
    if vertices.iter().any(|&v| v >= g.vertex_count()) {
        return false;
    }
    vertices
        .iter()
        .enumerate()
        .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// A witness that the events of a clique sum above 1: `excess` is the
/// clique weight minus one, always positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationCertificate {
    pub clique: Clique,
    pub excess: Rat,
}

/// Peeling order: repeatedly remove a minimum-degree vertex. Cliques rooted
/// at their earliest member then have candidate sets no larger than the
/// degeneracy.
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
    let mut slot = vec![0usize; n];
    for v in 0..n {
        slot[v] = buckets[deg[v]].len();
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut out = Vec::with_capacity(n);
    let mut d = 0usize;
    for _ in 0..n {
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop().unwrap();
        removed[v] = true;
        out.push(v);
        for u in g.neighbors(v) {
            if removed[u] {
                continue;
            }
            let b = &mut buckets[deg[u]];
            let i = slot[u];
            b.swap_remove(i);
            if i < b.len() {
                slot[b[i]] = i;
            }
            deg[u] -= 1;
            slot[u] = buckets[deg[u]].len();
            buckets[deg[u]].push(u);
        }
        d = d.saturating_sub(1);
    }
    out
}

/// Shared relabeled-adjacency layout for both solvers.
struct SearchBase {
    n: usize,
    words: usize,
    order: Vec<usize>,
    rows: Vec<u64>,
}

impl SearchBase {
    fn new(g: &Graph) -> SearchBase {
        let n = g.vertex_count();
        let order = degeneracy_order(g);
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let words = words_for(n);
        let mut rows = vec![0u64; n * words];
        for i in 0..n {
            for u in g.neighbors(order[i]) {
                bits::set_bit(&mut rows[i * words..(i + 1) * words], pos[u]);
            }
        }
        SearchBase { n, words, order, rows }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    /// Greedy descent from the core end of the order.
    fn greedy_seed(&self) -> Vec<u32> {
        let mut cand = vec![0u64; self.words];
        for i in 0..self.n {
            bits::set_bit(&mut cand, i);
        }
        let mut cur = Vec::new();
        while let Some(i) = bits::highest_one(&cand) {
            cur.push(i as u32);
            bits::and_assign(&mut cand, self.row(i));
        }
        cur
    }

    fn to_original(&self, positions: &[u32]) -> Vec<usize> {
        let mut out: Vec<usize> = positions.iter().map(|&p| self.order[p as usize]).collect();
        out.sort_unstable();
        out
    }
}

struct CliqueSolver {
    base: SearchBase,
    cand: Vec<Vec<u64>>,
    lists: Vec<Vec<(u32, u32)>>,
    unc: Vec<u64>,
    sweep: Vec<u64>,
    cur: Vec<u32>,
    best: Vec<u32>,
    target: Option<usize>,
    nodes: u64,
    budget: u64,
}

impl CliqueSolver {
    fn new(g: &Graph, budget: u64, target: Option<usize>) -> CliqueSolver {
        let base = SearchBase::new(g);
        let words = base.words;
        let depths = base.n + 2;
        CliqueSolver {
            base,
            cand: vec![vec![0u64; words]; depths],
            lists: vec![Vec::new(); depths],
            unc: vec![0u64; words],
            sweep: vec![0u64; words],
            cur: Vec::new(),
            best: Vec::new(),
            target,
            nodes: 0,
            budget,
        }
    }

    fn target_met(&self) -> bool {
        matches!(self.target, Some(t) if self.best.len() >= t)
    }

    fn run(&mut self) -> Result<(), CliqueError> {
        let seed = self.base.greedy_seed();
        if seed.len() > self.best.len() {
            self.best = seed;
        }
        if self.target_met() {
            return Ok(());
        }
        for i in (0..self.base.n).rev() {
            let words = self.base.words;
            self.cand[0].copy_from_slice(&self.base.rows[i * words..(i + 1) * words]);
            bits::clear_below(&mut self.cand[0], i + 1);
            if 1 + bits::count_ones(&self.cand[0]) <= self.best.len() {
                continue;
            }
            self.cur.clear();
            self.cur.push(i as u32);
            if self.expand(0)? {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Expands one node: greedily covers the candidates of `depth` with
    /// independent classes and branches only on vertices whose class number
    /// exceeds the remaining slack — any improving clique must use one.
    /// Branches run from the highest color down. Returns `Ok(true)` when
    /// the target size has been reached and the search should unwind.
    fn expand(&mut self, depth: usize) -> Result<bool, CliqueError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CliqueError::BudgetExceeded { budget: self.budget });
        }
        let slack = self.best.len().saturating_sub(self.cur.len());

        let mut list = mem::take(&mut self.lists[depth]);
        list.clear();
        let mut unc = mem::take(&mut self.unc);
        unc.clear();
        unc.extend_from_slice(&self.cand[depth]);

        // Classes 0..slack-1 are swept without recording their vertices:
        // anything covered there can only fill the remaining slack, never
        // beat it, so it is extension material but never a branch point.
        let mut c = 0usize;
        while c < slack && !bits::is_zero(&unc) {
            let mut sweep = mem::take(&mut self.sweep);
            sweep.clear();
            sweep.extend_from_slice(&unc);
            while let Some(v) = bits::lowest_one(&sweep) {
                bits::clear_bit(&mut sweep, v);
                bits::clear_bit(&mut unc, v);
                bits::and_not_assign(&mut sweep, self.base.row(v));
            }
            self.sweep = sweep;
            c += 1;
        }

        // Overflow classes: these vertices are numbered and branched on.
        while !bits::is_zero(&unc) {
            let mut sweep = mem::take(&mut self.sweep);
            sweep.clear();
            sweep.extend_from_slice(&unc);
            while let Some(v) = bits::lowest_one(&sweep) {
                list.push((v as u32, (c + 1) as u32));
                bits::clear_bit(&mut sweep, v);
                bits::clear_bit(&mut unc, v);
                bits::and_not_assign(&mut sweep, self.base.row(v));
            }
            self.sweep = sweep;
            c += 1;
        }
        self.unc = unc;

        let mut stop = false;
        for j in (0..list.len()).rev() {
            let (v, color) = list[j];
            if self.cur.len() + color as usize <= self.best.len() {
                break;
            }
            let v = v as usize;
            {
                let (lower, upper) = self.cand.split_at_mut(depth + 1);
                bits::and_into(&mut upper[0], &lower[depth], self.base.row(v));
            }
            self.cur.push(v as u32);
            if bits::is_zero(&self.cand[depth + 1]) {
                if self.cur.len() > self.best.len() {
                    self.best.clear();
                    self.best.extend_from_slice(&self.cur);
                    stop = self.target_met();
                }
            } else {
                stop = self.expand(depth + 1)?;
            }
            self.cur.pop();
            bits::clear_bit(&mut self.cand[depth], v);
            if stop {
                break;
            }
        }
        self.lists[depth] = list;
        Ok(stop)
    }
}

/// Size and vertices (ascending) of a maximum clique.
pub fn max_clique(g: &Graph) -> Result<(usize, Vec<usize>), CliqueError> {
    max_clique_with(g, &SearchOptions::default())
}

pub fn max_clique_with(
    g: &Graph,
    opts: &SearchOptions,
) -> Result<(usize, Vec<usize>), CliqueError> {
    if g.vertex_count() == 0 {
        return Ok((0, Vec::new()));
    }
    let mut s = CliqueSolver::new(g, opts.node_budget, None);
    s.run()?;
    let out = s.base.to_original(&s.best);
    Ok((out.len(), out))
}

/// Decision search: some clique with exactly `size` vertices, or `None`
/// when no clique that large exists. Oversized discoveries are truncated to
/// their `size` lowest-numbered vertices.
pub fn find_clique_of_size(g: &Graph, size: usize) -> Result<Option<Vec<usize>>, CliqueError> {
    find_clique_of_size_with(g, size, &SearchOptions::default())
}

pub fn find_clique_of_size_with(
    g: &Graph,
    size: usize,
    opts: &SearchOptions,
) -> Result<Option<Vec<usize>>, CliqueError> {
    if size == 0 {
        return Ok(Some(Vec::new()));
    }
    if size > g.vertex_count() {
        return Ok(None);
    }
    let mut s = CliqueSolver::new(g, opts.node_budget, Some(size));
    s.run()?;
    if s.best.len() >= size {
        let mut out = s.base.to_original(&s.best);
        out.truncate(size);
        Ok(Some(out))
    } else {
        Ok(None)
    }
}

struct WeightSolver {
    base: SearchBase,
    w: Vec<Rat>,
    cand: Vec<Vec<u64>>,
    lists: Vec<Vec<(u32, Rat)>>,
    unc: Vec<u64>,
    class: Vec<u64>,
    members: Vec<u32>,
    cur: Vec<u32>,
    cur_w: Rat,
    best: Vec<u32>,
    best_w: Rat,
    target: Option<Rat>,
    nodes: u64,
    budget: u64,
}

impl WeightSolver {
    fn new(host: &WeightedGraph, budget: u64, target: Option<Rat>) -> WeightSolver {
        let base = SearchBase::new(&host.graph);
        let w: Vec<Rat> = base.order.iter().map(|&v| host.weights[v]).collect();
        let words = base.words;
        let depths = base.n + 2;
        WeightSolver {
            base,
            w,
            cand: vec![vec![0u64; words]; depths],
            lists: vec![Vec::new(); depths],
            unc: vec![0u64; words],
            class: vec![0u64; words],
            members: Vec::new(),
            cur: Vec::new(),
            cur_w: Rat::zero(),
            best: Vec::new(),
            best_w: Rat::zero(),
            target,
            nodes: 0,
            budget,
        }
    }

    fn target_met(&self) -> bool {
        matches!(self.target, Some(t) if self.best_w > t)
    }

    fn run(&mut self) -> Result<(), CliqueError> {
        let seed = self.base.greedy_seed();
        let seed_w: Rat = seed.iter().map(|&p| self.w[p as usize]).sum();
        if seed_w > self.best_w {
            self.best = seed;
            self.best_w = seed_w;
        }
        if self.target_met() {
            return Ok(());
        }
        for i in (0..self.base.n).rev() {
            let words = self.base.words;
            self.cand[0].copy_from_slice(&self.base.rows[i * words..(i + 1) * words]);
            bits::clear_below(&mut self.cand[0], i + 1);
            self.cur.clear();
            self.cur.push(i as u32);
            self.cur_w = self.w[i];
            if bits::is_zero(&self.cand[0]) {
                if self.cur_w > self.best_w {
                    self.best = self.cur.clone();
                    self.best_w = self.cur_w;
                    if self.target_met() {
                        return Ok(());
                    }
                }
            } else if self.expand(0)? {
                return Ok(());
            }
        }
        Ok(())
    }

    fn expand(&mut self, depth: usize) -> Result<bool, CliqueError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CliqueError::BudgetExceeded { budget: self.budget });
        }

        // Color classes are independent sets, so an extension takes at most
        // the heaviest vertex of each class: entries carry the cumulative
        // class-maximum bound.
        let mut list = mem::take(&mut self.lists[depth]);
        list.clear();
        let mut unc = mem::take(&mut self.unc);
        let mut class = mem::take(&mut self.class);
        let mut members = mem::take(&mut self.members);
        unc.clear();
        unc.extend_from_slice(&self.cand[depth]);
        let mut cum = Rat::zero();
        while !bits::is_zero(&unc) {
            class.clear();
            class.extend_from_slice(&unc);
            members.clear();
            let mut class_max = Rat::zero();
            while let Some(v) = bits::lowest_one(&class) {
                members.push(v as u32);
                if self.w[v] > class_max {
                    class_max = self.w[v];
                }
                bits::clear_bit(&mut unc, v);
                bits::clear_bit(&mut class, v);
                bits::and_not_assign(&mut class, self.base.row(v));
            }
            cum += class_max;
            for &v in &members {
                list.push((v, cum));
            }
        }
        self.unc = unc;
        self.class = class;
        self.members = members;

        let mut stop = false;
        for j in (0..list.len()).rev() {
            let (v, bound) = list[j];
            if self.cur_w + bound <= self.best_w {
                break;
            }
            let v = v as usize;
            {
                let (lower, upper) = self.cand.split_at_mut(depth + 1);
                bits::and_into(&mut upper[0], &lower[depth], self.base.row(v));
            }
            self.cur.push(v as u32);
            self.cur_w += self.w[v];
            if bits::is_zero(&self.cand[depth + 1]) {
                if self.cur_w > self.best_w {
                    self.best.clear();
                    self.best.extend_from_slice(&self.cur);
                    self.best_w = self.cur_w;
                    stop = self.target_met();
                }
            } else {
                stop = self.expand(depth + 1)?;
            }
            let popped = self.cur.pop().unwrap();
            self.cur_w -= self.w[popped as usize];
            bits::clear_bit(&mut self.cand[depth], v);
            if stop {
                break;
            }
        }
        self.lists[depth] = list;
        Ok(stop)
    }
}

fn require_positive_weights(host: &WeightedGraph) -> Result<(), CliqueError> {
    for (v, w) in host.weights.iter().enumerate() {
        if *w <= Rat::zero() {
            return Err(CliqueError::NonPositiveWeight { v });
        }
    }
    Ok(())
}

/// Maximum-weight clique of a positively weighted graph.
pub fn max_clique_in(host: &WeightedGraph) -> Result<(Rat, Clique), CliqueError> {
    max_clique_in_with(host, &SearchOptions::default())
}

pub fn max_clique_in_with(
    host: &WeightedGraph,
    opts: &SearchOptions,
) -> Result<(Rat, Clique), CliqueError> {
    require_positive_weights(host)?;
    if host.graph.vertex_count() == 0 {
        return Ok((Rat::zero(), Clique::new(host, &[])?));
    }
    let mut s = WeightSolver::new(host, opts.node_budget, None);
    s.run()?;
    let vs = s.base.to_original(&s.best);
    let clique = Clique::new(host, &vs)?;
    debug_assert_eq!(clique.weight_sum(), s.best_w);
    Ok((s.best_w, clique))
}

/// Decides whether some set of pairwise-exclusive events has probabilities
/// summing above 1, i.e. whether some clique weighs more than 1.
///
/// Uniform weights `p/q` reduce to a decision search for a clique of the
/// threshold size `floor(q/p) + 1`, and the witness has exactly that size.
/// Mixed weights run the exact maximum-weight search, stopping at the first
/// clique above 1.
pub fn find_violation(
    host: &WeightedGraph,
) -> Result<Option<ViolationCertificate>, CliqueError> {
    find_violation_with(host, &SearchOptions::default())
}

pub fn find_violation_with(
    host: &WeightedGraph,
    opts: &SearchOptions,
) -> Result<Option<ViolationCertificate>, CliqueError> {
    require_positive_weights(host)?;
    let n = host.graph.vertex_count();
    if n == 0 {
        return Ok(None);
    }
    let w0 = host.weights[0];
    if host.weights.iter().all(|w| *w == w0) {
        let threshold = w0.denom() / w0.numer();
        if threshold >= n as i64 {
            return Ok(None);
        }
        let size = (threshold + 1) as usize;
        return match find_clique_of_size_with(&host.graph, size, opts)? {
            None => Ok(None),
            Some(vs) => {
                let clique = Clique::new(host, &vs)?;
                let excess = clique.weight_sum() - Rat::one();
                debug_assert!(excess > Rat::zero());
                Ok(Some(ViolationCertificate { clique, excess }))
            }
        };
    }
    let mut s = WeightSolver::new(host, opts.node_budget, Some(Rat::one()));
    s.run()?;
    if s.best_w > Rat::one() {
        let vs = s.base.to_original(&s.best);
        let clique = Clique::new(host, &vs)?;
        let excess = clique.weight_sum() - Rat::one();
        Ok(Some(ViolationCertificate { clique, excess }))
    } else {
        Ok(None)
    }
}

/// Decision search on a vertex-transitive graph, given automorphism
/// generators that are re-certified against `g` before anything depends on
/// them. Transitivity pins every clique to the base vertex 0 (translate any
/// witness onto it), so only the closed neighbourhood of 0 is ever searched;
/// inside it, the orbits of 0's stabilizer are processed one representative
/// at a time, and a fully refuted representative eliminates its whole orbit
/// (a clique meeting the orbit translates onto the representative without
/// entering earlier, already eliminated orbits). Each surviving subproblem
/// goes to the ordinary branch-and-bound solver, and any witness found is
/// checked pairwise before being returned, so certificates never rest on the
/// group argument — only refutations do.
pub fn find_clique_of_size_transitive(
    g: &Graph,
    size: usize,
    gens: &[Vec<u32>],
) -> Result<Option<Vec<usize>>, CliqueError> {
    find_clique_of_size_transitive_with(g, size, gens, &SearchOptions::default())
}

pub fn find_clique_of_size_transitive_with(
    g: &Graph,
    size: usize,
    gens: &[Vec<u32>],
    opts: &SearchOptions,
) -> Result<Option<Vec<usize>>, CliqueError> {
    if size == 0 {
        return Ok(Some(Vec::new()));
    }
    if size > g.vertex_count() {
        return Ok(None);
    }
    crate::sym::certify_generators(g, gens)?;
    if size == 1 {
        return Ok(Some(vec![0]));
    }
    let reps = crate::sym::stabilizer_orbits(g.vertex_count(), gens, 0);
    transitive_decision(g, size, &reps, opts)
}

/// Exact clique number of a vertex-transitive graph: grows a greedy maximal
/// clique, then raises the answer one decision search at a time until the
/// next size up is refuted. Shares one certification and one stabilizer
/// computation across all rounds.
pub fn max_clique_transitive(
    g: &Graph,
    gens: &[Vec<u32>],
) -> Result<(usize, Vec<usize>), CliqueError> {
    max_clique_transitive_with(g, gens, &SearchOptions::default())
}

pub fn max_clique_transitive_with(
    g: &Graph,
    gens: &[Vec<u32>],
    opts: &SearchOptions,
) -> Result<(usize, Vec<usize>), CliqueError> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    crate::sym::certify_generators(g, gens)?;
    let reps = crate::sym::stabilizer_orbits(n, gens, 0);

    let words = words_for(n);
    let mut cand = vec![0u64; words];
    for v in 0..n {
        bits::set_bit(&mut cand, v);
    }
    let mut best = Vec::new();
    while let Some(v) = bits::lowest_one(&cand) {
        best.push(v);
        bits::and_assign(&mut cand, g.row(v));
    }
    debug_assert!(is_clique(g, &best));

    while best.len() < n {
        match transitive_decision(g, best.len() + 1, &reps, opts)? {
            Some(better) => best = better,
            None => break,
        }
    }
    Ok((best.len(), best))
}

/// [`find_violation`] for a vertex-transitive host. Uniform weights reduce
/// to one threshold decision search, which is where the symmetry pays off;
/// mixed weights fall back to the exact weighted solver unchanged.
pub fn find_violation_transitive(
    host: &WeightedGraph,
    gens: &[Vec<u32>],
) -> Result<Option<ViolationCertificate>, CliqueError> {
    find_violation_transitive_with(host, gens, &SearchOptions::default())
}

pub fn find_violation_transitive_with(
    host: &WeightedGraph,
    gens: &[Vec<u32>],
    opts: &SearchOptions,
) -> Result<Option<ViolationCertificate>, CliqueError> {
    require_positive_weights(host)?;
    let n = host.graph.vertex_count();
    if n == 0 {
        return Ok(None);
    }
    let w0 = host.weights[0];
    if !host.weights.iter().all(|w| *w == w0) {
        return find_violation_with(host, opts);
    }
    let threshold = w0.denom() / w0.numer();
    if threshold >= n as i64 {
        return Ok(None);
    }
    let size = (threshold + 1) as usize;
    match find_clique_of_size_transitive_with(&host.graph, size, gens, opts)? {
        None => Ok(None),
        Some(vs) => {
            let clique = Clique::new(host, &vs)?;
            let excess = clique.weight_sum() - Rat::one();
            debug_assert!(excess > Rat::zero());
            Ok(Some(ViolationCertificate { clique, excess }))
        }
    }
}

/// Orbit-by-orbit decision core. Requires `2 <= size <= n` and certified
/// generators; `reps` labels every vertex with its stabilizer orbit.
fn transitive_decision(
    g: &Graph,
    size: usize,
    reps: &[u32],
    opts: &SearchOptions,
) -> Result<Option<Vec<usize>>, CliqueError> {
    debug_assert!(size >= 2);
    let words = words_for(g.vertex_count());
    let base = 0usize;
    let mut remaining: Vec<u64> = g.row(base).to_vec();

    // Orbits restricted to N(base), largest first so refutations shrink the
    // remaining pool as fast as possible.
    let mut sizes: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    for w in bits::iter_ones(&remaining) {
        *sizes.entry(reps[w]).or_insert(0) += 1;
    }
    let mut order: Vec<u32> = sizes.keys().copied().collect();
    order.sort_by_key(|r| (usize::MAX - sizes[r], *r));

    let mut orbit_mask = vec![0u64; words];
    let mut cand = vec![0u64; words];
    for r in order {
        let rep = r as usize;
        if size == 2 {
            return Ok(Some(vec![base, rep]));
        }
        bits::and_into(&mut cand, &remaining, g.row(rep));
        let verts: Vec<usize> = bits::iter_ones(&cand).collect();
        if verts.len() + 2 >= size {
            let (sub, back) = induced_subgraph(g, &verts);
            if let Some(found) = find_clique_of_size_with(&sub, size - 2, opts)? {
                let mut out = vec![base, rep];
                out.extend(found.into_iter().map(|i| back[i]));
                out.sort_unstable();
                debug_assert!(is_clique(g, &out));
                return Ok(Some(out));
            }
        }
        orbit_mask.iter_mut().for_each(|w| *w = 0);
        for w in bits::iter_ones(&remaining) {
            if reps[w] == r {
                bits::set_bit(&mut orbit_mask, w);
            }
        }
        bits::and_not_assign(&mut remaining, &orbit_mask);
    }
    Ok(None)
}

fn induced_subgraph(g: &Graph, verts: &[usize]) -> (Graph, Vec<usize>) {
    let mut sub = Graph::empty(verts.len());
    for (i, &u) in verts.iter().enumerate() {
        for (j, &v) in verts.iter().enumerate().skip(i + 1) {
            if g.has_edge(u, v) {
                sub.add_edge(i, j).unwrap();
            }
        }
    }
    (sub, verts.to_vec())
}

/// The 2^k tuples mixing the endpoints of one chosen edge per factor: any
/// two of them differ somewhere, and there they take the two ends of an
/// edge, so the set is a clique of the flattened product.
pub fn trivial_clique(
    g: &ColoredMultigraph,
    edges: &[(usize, usize)],
) -> Result<Vec<usize>, CliqueError> {
    let k = g.k();
    if edges.len() != k {
        return Err(CliqueError::EdgeCount { expected: k, got: edges.len() });
    }
    let mut lohi = Vec::with_capacity(k);
    for (i, &(u, v)) in edges.iter().enumerate() {
        let f = &g.factor(i).graph;
        if u >= f.vertex_count() || v >= f.vertex_count() || !f.has_edge(u, v) {
            return Err(CliqueError::NotAFactorEdge { factor: i, u, v });
        }
        lohi.push((u.min(v), u.max(v)));
    }
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        let components: Vec<usize> = (0..k)
            .map(|i| {
                let (lo, hi) = lohi[i];
                if mask >> (k - 1 - i) & 1 == 0 {
                    lo
                } else {
                    hi
                }
            })
            .collect();
        out.push(
            g.index(&TupleVertex::new(components)).expect("components are factor vertices"),
        );
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out)
}

fn flat_row_into(g: &ColoredMultigraph, v: usize, buf: &mut [u64]) {
    buf.fill(0);
    for c in 0..g.k() {
        bits::or_assign(buf, g.layer(c).expect("color in range").row(v));
    }
}

fn validate_product_clique(g: &ColoredMultigraph, clique: &[usize]) -> Result<(), CliqueError> {
    let n = g.vertex_count();
    let mut seen = BTreeSet::new();
    for &v in clique {
        if v >= n {
            return Err(CliqueError::VertexRange { v, n });
        }
        if !seen.insert(v) {
            return Err(CliqueError::DuplicateVertex { v });
        }
    }
    for (i, &u) in clique.iter().enumerate() {
        for &v in &clique[i + 1..] {
            if !g.has_edge(u, v) {
                return Err(CliqueError::NotAClique { u, v });
            }
        }
    }
    Ok(())
}

/// A vertex adjacent (in some layer) to every member of `clique`, or `None`
/// when the clique is maximal in the flattened product.
pub fn extension_vertex(
    g: &ColoredMultigraph,
    clique: &[usize],
) -> Result<Option<usize>, CliqueError> {
    validate_product_clique(g, clique)?;
    let n = g.vertex_count();
    if clique.is_empty() {
        return Ok(if n > 0 { Some(0) } else { None });
    }
    let words = words_for(n);
    let mut cand = vec![0u64; words];
    flat_row_into(g, clique[0], &mut cand);
    let mut row = vec![0u64; words];
    for &v in &clique[1..] {
        flat_row_into(g, v, &mut row);
        bits::and_assign(&mut cand, &row);
    }
    Ok(bits::lowest_one(&cand))
}

pub fn is_extendable(g: &ColoredMultigraph, clique: &[usize]) -> Result<bool, CliqueError> {
    Ok(extension_vertex(g, clique)?.is_some())
}

/// Doubles a clique of the product of all factors but the last: each prefix
/// tuple `c` becomes the pair `(c, a)`, `(c, b)` for an edge `(a, b)` of the
/// last factor. Tuples with equal prefixes are joined by the last layer,
/// all others by whatever layer joined their prefixes.
pub fn double_clique(
    g: &ColoredMultigraph,
    prefix_clique: &[usize],
    edge: (usize, usize),
) -> Result<Vec<usize>, CliqueError> {
    let k = g.k();
    if k < 2 {
        return Err(CliqueError::TooFewFactors { k });
    }
    let last = k - 1;
    let m_last = g.factor(last).graph.vertex_count();
    let prefix_count = g.vertex_count() / m_last;
    let (a, b) = edge;
    let f_last = &g.factor(last).graph;
    if a >= m_last || b >= m_last || !f_last.has_edge(a, b) {
        return Err(CliqueError::NotAFactorEdge { factor: last, u: a, v: b });
    }
    let mut prefix = prefix_clique.to_vec();
    prefix.sort_unstable();
    for &p in &prefix {
        if p >= prefix_count {
            return Err(CliqueError::PrefixRange { v: p, size: prefix_count });
        }
    }
    for w in prefix.windows(2) {
        if w[0] == w[1] {
            return Err(CliqueError::DuplicateVertex { v: w[0] });
        }
    }
    // Prefix adjacency is exactly full-product adjacency of the tuples
    // completed with a fixed last component: the last layer never joins
    // equal components, and the other layers ignore them.
    for (i, &p) in prefix.iter().enumerate() {
        for &q in &prefix[i + 1..] {
            if !g.has_edge(p * m_last, q * m_last) {
                return Err(CliqueError::NotAClique { u: p, v: q });
            }
        }
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let mut out = Vec::with_capacity(prefix.len() * 2);
    for &p in &prefix {
        out.push(p * m_last + lo);
        out.push(p * m_last + hi);
    }
    debug_assert!(validate_product_clique(g, &out).is_ok());
    Ok(out)
}

/// A five-clique of a two-factor product from one five-cycle per factor:
/// vertex `j` pairs cycle position `j` of the first with position `2j mod 5`
/// of the second, so positions at cyclic distance 1 or 4 are joined by the
/// first layer and distances 2 or 3 by the second.
pub fn build_k5_two_c5(
    g: &ColoredMultigraph,
    c1: &[usize],
    c2: &[usize],
) -> Result<Vec<usize>, CliqueError> {
    if g.k() != 2 {
        return Err(CliqueError::NotTwoFactors { k: g.k() });
    }
    validate_five_cycle(&g.factor(0).graph, c1, 0)?;
    validate_five_cycle(&g.factor(1).graph, c2, 1)?;
    let mut out: Vec<usize> = (0..5)
        .map(|j| {
            g.index(&TupleVertex::new(vec![c1[j], c2[(2 * j) % 5]]))
                .expect("cycle vertices are factor vertices")
        })
        .collect();
    out.sort_unstable();
    debug_assert!(validate_product_clique(g, &out).is_ok());
    Ok(out)
}

fn validate_five_cycle(f: &Graph, c: &[usize], which: usize) -> Result<(), CliqueError> {
    let fail = |msg: String| CliqueError::BadFiveCycle { factor: which, msg };
    if c.len() != 5 {
        return Err(fail(format!("expected 5 vertices, got {}", c.len())));
    }
    let distinct: BTreeSet<usize> = c.iter().copied().collect();
    if distinct.len() != 5 {
        return Err(fail("vertices repeat".into()));
    }
    for &v in c {
        if v >= f.vertex_count() {
            return Err(fail(format!("vertex {v} out of range")));
        }
    }
    for j in 0..5 {
        let (u, v) = (c[j], c[(j + 1) % 5]);
        if !f.has_edge(u, v) {
            return Err(fail(format!("positions {j} and {} are not adjacent", (j + 1) % 5)));
        }
    }
    Ok(())
}
