//! Simple undirected graphs over a fixed vertex range, with the structural
//! queries the rest of the crate leans on: odd girth with an explicit cycle
//! witness, triangle detection, bipartitions, and DIMACS `.col` I/O.

use crate::bits::{self, BitMatrix};
use crate::rat::Rat;
use rayon::prelude::*;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("mobius ladder order must be even and at least 6, got {0}")]
    BadLadderOrder(usize),
    #[error("prism half-size must be at least 3, got {0}")]
    BadPrismHalf(usize),
    #[error("cycle length must be at least 3, got {0}")]
    BadCycleLength(usize),
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexRange { v: usize, n: usize },
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),
    #[error("isomorphism search supports at most 64 vertices, got {0}")]
    IsomorphismScope(usize),
    #[error("invalid odd-cycle witness: {0}")]
    BadWitness(String),
    #[error("dimacs line {line}: {msg}")]
    DimacsLine { line: usize, msg: String },
    #[error("dimacs input has no 'p edge' header line")]
    DimacsMissingHeader,
    #[error("dimacs header declares {declared} edges but {actual} distinct edges follow")]
    DimacsEdgeCount { declared: usize, actual: usize },
}

/// Undirected graph on vertices `0..n` backed by a symmetric bit matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: BitMatrix,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.m)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph { n, m: 0, adj: BitMatrix::new(n) }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn cycle(len: usize) -> Result<Graph, GraphError> {
        if len < 3 {
            return Err(GraphError::BadCycleLength(len));
        }
        let mut g = Graph::empty(len);
        for v in 0..len {
            g.add_edge(v, (v + 1) % len).unwrap();
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Mobius ladder on an even `order >= 6`: a cycle plus all diameter
    /// chords `(i, i + order/2)`.
    pub fn mobius_ladder(order: usize) -> Result<Graph, GraphError> {
        if order < 6 || order % 2 != 0 {
            return Err(GraphError::BadLadderOrder(order));
        }
        let mut g = Graph::cycle(order)?;
        for i in 0..order / 2 {
            g.add_edge(i, i + order / 2).unwrap();
        }
        Ok(g)
    }

    /// Circular ladder (prism) on `2 * half` vertices: two `half`-cycles
    /// joined by a perfect matching. Requires `half >= 3`.
    pub fn prism(half: usize) -> Result<Graph, GraphError> {
        if half < 3 {
            return Err(GraphError::BadPrismHalf(half));
        }
        let mut g = Graph::empty(2 * half);
        for i in 0..half {
            g.add_edge(i, (i + 1) % half).unwrap();
            g.add_edge(half + i, half + (i + 1) % half).unwrap();
            g.add_edge(i, half + i).unwrap();
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::VertexRange { v, n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !self.adj.get(u, v) {
            self.adj.set_sym(u, v);
            self.m += 1;
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj.get(u, v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.count_row(v)
    }

    pub fn row(&self, v: usize) -> &[u64] {
        self.adj.row(v)
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits::iter_ones(self.adj.row(v))
    }

    /// Edge list as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// True iff some edge has a common neighbor.
    pub fn has_triangle(&self) -> bool {
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u && bits::intersects(self.adj.row(u), self.adj.row(v)) {
                    return true;
                }
            }
        }
        false
    }

    /// Length of a shortest odd cycle together with a concrete witness, or
    /// `None` when the graph is bipartite.
    ///
    /// Runs a level-synchronous BFS from every root; an edge joining two
    /// vertices of the same BFS level `d` closes an odd walk of length
    /// `2d + 1`, and the minimum of that quantity over roots and levels is
    /// exactly the odd girth. The witness is rebuilt deterministically from
    /// the smallest root achieving the minimum.
    pub fn odd_girth(&self) -> Option<(usize, OddCycleWitness)> {
        if self.n == 0 {
            return None;
        }
        let shared_best = AtomicUsize::new(usize::MAX);
        let found = (0..self.n)
            .into_par_iter()
            .filter_map(|r| self.min_odd_walk_from(r, &shared_best).map(|len| (len, r)))
            .min()?;
        let (len, root) = found;
        let witness = self.extract_odd_cycle(root, len);
        assert_eq!(witness.len(), len, "witness length must match the computed odd girth");
        Some((len, witness))
    }

    /// Odd girth value only; identical search without witness extraction.
    pub fn odd_girth_value(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let shared_best = AtomicUsize::new(usize::MAX);
        (0..self.n)
            .into_par_iter()
            .filter_map(|r| self.min_odd_walk_from(r, &shared_best))
            .min()
    }

    /// Shortest odd closed walk through `r`, detected as the first BFS level
    /// with an internal edge. `shared_best` only prunes levels that cannot
    /// beat or tie the best length seen so far, so every root achieving the
    /// global minimum still reports it (deterministic tie-breaking by root).
    fn min_odd_walk_from(&self, r: usize, shared_best: &AtomicUsize) -> Option<usize> {
        let words = self.adj.words_per_row();
        let mut visited = vec![0u64; words];
        let mut level = vec![0u64; words];
        bits::set_bit(&mut visited, r);
        bits::set_bit(&mut level, r);
        let mut d = 0usize;
        loop {
            for u in bits::iter_ones(&level) {
                if bits::intersects(self.adj.row(u), &level) {
                    let cand = 2 * d + 1;
                    shared_best.fetch_min(cand, Ordering::Relaxed);
                    return Some(cand);
                }
            }
            d += 1;
            if 2 * d + 1 > shared_best.load(Ordering::Relaxed) {
                return None;
            }
            let mut next = vec![0u64; words];
            for u in bits::iter_ones(&level) {
                bits::or_assign(&mut next, self.adj.row(u));
            }
            bits::and_not_assign(&mut next, &visited);
            if bits::is_zero(&next) {
                return None;
            }
            bits::or_assign(&mut visited, &next);
            level = next;
        }
    }

    /// Deterministic rebuild of the first minimal witness from `root`:
    /// BFS in ascending vertex order, take the first internal edge of the
    /// first level that has one, and close the cycle through parent chains.
    fn extract_odd_cycle(&self, root: usize, len: usize) -> OddCycleWitness {
        let words = self.adj.words_per_row();
        let mut parent = vec![usize::MAX; self.n];
        let mut depth = vec![usize::MAX; self.n];
        let mut visited = vec![0u64; words];
        let mut level = vec![0u64; words];
        bits::set_bit(&mut visited, root);
        bits::set_bit(&mut level, root);
        depth[root] = 0;
        loop {
            let mut internal: Option<(usize, usize)> = None;
            'scan: for u in bits::iter_ones(&level) {
                for w in self.neighbors(u) {
                    if bits::test_bit(&level, w) {
                        internal = Some((u, w));
                        break 'scan;
                    }
                }
            }
            if let Some((u, w)) = internal {
                let cycle = cycle_through_conflict(u, w, &parent, &depth);
                let witness = OddCycleWitness::new(cycle, self)
                    .expect("conflict edge must close a valid odd cycle");
                debug_assert!(witness.len() <= len);
                return witness;
            }
            let mut next = vec![0u64; words];
            for u in bits::iter_ones(&level) {
                for w in self.neighbors(u) {
                    if !bits::test_bit(&visited, w) && !bits::test_bit(&next, w) {
                        bits::set_bit(&mut next, w);
                        parent[w] = u;
                        depth[w] = depth[u] + 1;
                    }
                }
            }
            assert!(!bits::is_zero(&next), "no internal edge found before BFS exhausted");
            bits::or_assign(&mut visited, &next);
            level = next;
        }
    }

    /// Two-colors every connected component (the lowest-index vertex of each
    /// component gets side 0), or returns an odd cycle obstructing it.
    pub fn bipartition(&self) -> Result<Vec<u8>, OddCycleWitness> {
        let mut side = vec![u8::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut depth = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..self.n {
            if side[root] != u8::MAX {
                continue;
            }
            side[root] = 0;
            depth[root] = 0;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        let cycle = cycle_through_conflict(u, v, &parent, &depth);
                        let witness = OddCycleWitness::new(cycle, self)
                            .expect("conflict edge must close a valid odd cycle");
                        return Err(witness);
                    }
                }
            }
        }
        Ok(side)
    }

    /// Serializes in DIMACS `.col` format (`p edge`, 1-indexed `e` lines).
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("p edge {} {}\n", self.n, self.m));
        for (u, v) in self.edges() {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        out
    }

    pub fn from_dimacs(input: &str) -> Result<Graph, GraphError> {
        let mut graph: Option<Graph> = None;
        let mut declared = 0usize;
        for (i, raw) in input.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = l.split_whitespace().collect();
            match fields[0] {
                "p" => {
                    if graph.is_some() {
                        return Err(GraphError::DimacsLine {
                            line,
                            msg: "repeated problem line".into(),
                        });
                    }
                    if fields.len() != 4 || (fields[1] != "edge" && fields[1] != "col") {
                        return Err(GraphError::DimacsLine {
                            line,
                            msg: format!("malformed problem line {l:?}"),
                        });
                    }
                    let n = fields[2].parse::<usize>().map_err(|e| GraphError::DimacsLine {
                        line,
                        msg: format!("bad vertex count: {e}"),
                    })?;
                    declared = fields[3].parse::<usize>().map_err(|e| GraphError::DimacsLine {
                        line,
                        msg: format!("bad edge count: {e}"),
                    })?;
                    graph = Some(Graph::empty(n));
                }
                "e" => {
                    let g = graph.as_mut().ok_or(GraphError::DimacsMissingHeader)?;
                    if fields.len() != 3 {
                        return Err(GraphError::DimacsLine {
                            line,
                            msg: format!("malformed edge line {l:?}"),
                        });
                    }
                    let u = fields[1].parse::<usize>().map_err(|e| GraphError::DimacsLine {
                        line,
                        msg: format!("bad endpoint: {e}"),
                    })?;
                    let v = fields[2].parse::<usize>().map_err(|e| GraphError::DimacsLine {
                        line,
                        msg: format!("bad endpoint: {e}"),
                    })?;
                    if u == 0 || v == 0 {
                        return Err(GraphError::DimacsLine {
                            line,
                            msg: "dimacs vertices are 1-indexed".into(),
                        });
                    }
                    g.add_edge(u - 1, v - 1)
                        .map_err(|e| GraphError::DimacsLine { line, msg: e.to_string() })?;
                }
                _ => {
                    return Err(GraphError::DimacsLine {
                        line,
                        msg: format!("unrecognized line {l:?}"),
                    });
                }
            }
        }
        let g = graph.ok_or(GraphError::DimacsMissingHeader)?;
        if g.m != declared {
            return Err(GraphError::DimacsEdgeCount { declared, actual: g.m });
        }
        Ok(g)
    }
}

/// Closes the cycle formed by a same-depth edge `(u, v)` and the two BFS
/// parent chains up to their lowest common ancestor.
fn cycle_through_conflict(u: usize, v: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    debug_assert_eq!(depth[u], depth[v]);
    let chain = |mut x: usize| {
        let mut c = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            c.push(x);
        }
        c
    };
    let cu = chain(u);
    let cv = chain(v);
    let meet = (0..cu.len()).find(|&j| cu[j] == cv[j]).expect("chains share a root");
    let mut cycle: Vec<usize> = cu[..=meet].to_vec();
    cycle.extend(cv[..meet].iter().rev());
    cycle
}

/// A simple cycle of odd length, kept in a canonical rotation (smallest
/// vertex first, then the smaller neighbor second).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCycleWitness {
    vertices: Vec<usize>,
}

impl OddCycleWitness {
    /// Validates `vertices` as a simple odd cycle of `g` (consecutive
    /// vertices adjacent, wrap included, all distinct, odd length >= 3).
    pub fn new(vertices: Vec<usize>, g: &Graph) -> Result<OddCycleWitness, GraphError> {
        let l = vertices.len();
        if l < 3 || l % 2 == 0 {
            return Err(GraphError::BadWitness(format!("length {l} is not odd and >= 3")));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &v in &vertices {
            if v >= g.vertex_count() {
                return Err(GraphError::BadWitness(format!("vertex {v} out of range")));
            }
            if !seen.insert(v) {
                return Err(GraphError::BadWitness(format!("vertex {v} repeats")));
            }
        }
        for i in 0..l {
            let (a, b) = (vertices[i], vertices[(i + 1) % l]);
            if !g.has_edge(a, b) {
                return Err(GraphError::BadWitness(format!("consecutive pair ({a}, {b}) is not an edge")));
            }
        }
        Ok(OddCycleWitness { vertices: canonical_rotation(vertices) })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn canonical_rotation(cycle: Vec<usize>) -> Vec<usize> {
    let l = cycle.len();
    let start = (0..l).min_by_key(|&i| cycle[i]).unwrap();
    let fwd: Vec<usize> = (0..l).map(|i| cycle[(start + i) % l]).collect();
    let bwd: Vec<usize> = (0..l).map(|i| cycle[(start + l - i) % l]).collect();
    if fwd[1] <= bwd[1] {
        fwd
    } else {
        bwd
    }
}

/// A graph together with one positive rational weight per vertex — the
/// substrate the product builders and the clique solver operate on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    pub graph: Graph,
    pub weights: Vec<Rat>,
}

impl WeightedGraph {
    pub fn uniform(graph: Graph, w: Rat) -> WeightedGraph {
        let n = graph.vertex_count();
        WeightedGraph { graph, weights: vec![w; n] }
    }
}
