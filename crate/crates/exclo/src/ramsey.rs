//! Edge colorings of complete graphs and the small Ramsey facts behind the
//! copy-count rule-out table.
//!
//! An [`EdgeColoring`] assigns one of `k` colors to every edge of `K_m`.
//! The module decides whether every such coloring is forced to contain a
//! monochromatic odd cycle within per-color length bounds (exhaustively, or
//! by a backtracking search for a counterexample coloring), constructs the
//! recursive doubling coloring of `K_{2^k}` whose classes are all bipartite,
//! and turns bipartite classes into distinct binary vertex labels. On top of
//! these sits [`rule_out`], the closed-form verdict table answering whether
//! `k` independent copies of an `n`-cycle box can violate the exclusivity
//! principle.

use crate::graph::{Graph, OddCycleWitness};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};
use thiserror::Error;

/// Colorings enumerated without an explicit override.
pub const EXHAUSTIVE_GUARD: u64 = 1 << 26;
/// Hard ceiling on enumeration even with the override.
pub const EXHAUSTIVE_CEILING: u64 = 1 << 40;
/// Largest complete host a coloring may live on.
pub const MAX_HOST_VERTICES: usize = 1 << 12;
/// Largest host the backtracking search handles (single-word vertex masks).
pub const MAX_SEARCH_VERTICES: usize = 64;
/// Doubling levels for the bipartite coloring (`K_{2^k}` tops out at 4096).
pub const MAX_DOUBLINGS: usize = 12;
/// Labels carry one bit per color and are packed into a `u64`.
pub const MAX_LABEL_COLORS: usize = 64;
/// Copy counts accepted by the rule-out table (`2^k + 2` must stay exact).
pub const MAX_RULE_OUT_COPIES: usize = 62;

#[derive(Debug, Error)]
pub enum RamseyError {
    #[error("need at least one vertex and one color, got m = {m}, k = {k}")]
    EmptyHost { m: usize, k: usize },
    #[error("{m} vertices exceed the host limit of {max}")]
    HostSize { m: usize, max: usize },
    #[error("{k} colors exceed the supported limit of {max}")]
    ColorCount { k: usize, max: usize },
    #[error("expected one bound per color ({k}), got {got}")]
    BoundsLen { k: usize, got: usize },
    #[error("bound {value} for color {color} must be odd and at least 3")]
    BadBound { color: usize, value: usize },
    #[error("edge ({u}, {v}) out of range for {m} vertices")]
    EdgeRange { u: usize, v: usize, m: usize },
    #[error("vertex {v} cannot carry a loop edge")]
    LoopEdge { v: usize },
    #[error("color {color} out of range 1..={k}")]
    ColorRange { color: usize, k: usize },
    #[error("edge ({u}, {v}) colored twice")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge ({u}, {v}) has no color")]
    MissingEdge { u: usize, v: usize },
    #[error("the {m}-vertex, {k}-color space exceeds the enumeration bound of {bound} colorings")]
    Infeasible { m: usize, k: usize, bound: u64 },
    #[error("search aborted after its {millis} ms time budget")]
    TimeBudget { millis: u64 },
    #[error("recursive doubling supports 1..={max} levels, got {k}")]
    DoublingRange { k: usize, max: usize },
    #[error("labels carry one bit per color and top out at {max} colors, got {k}")]
    LabelWidth { k: usize, max: usize },
    #[error("color {color} spans a non-bipartite class")]
    NonBipartiteClass { color: usize, witness: OddCycleWitness },
    #[error("copy count {k} out of range 1..={max}")]
    CopiesRange { k: usize, max: usize },
    #[error("cycle length {n} must be at least 4")]
    CycleRange { n: usize },
}

/// A complete assignment of colors `1..=k` to the edges of `K_m`, indexed by
/// unordered pair in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    m: usize,
    k: usize,
    colors: Vec<u16>,
}

/// Serialized form: `m`, `k`, and one `(u, v, color)` triple per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDoc {
    pub m: usize,
    pub k: usize,
    pub edges: Vec<(usize, usize, usize)>,
}

fn check_host(m: usize, k: usize) -> Result<(), RamseyError> {
    if m == 0 || k == 0 {
        return Err(RamseyError::EmptyHost { m, k });
    }
    if m > MAX_HOST_VERTICES {
        return Err(RamseyError::HostSize { m, max: MAX_HOST_VERTICES });
    }
    if k > u16::MAX as usize {
        return Err(RamseyError::ColorCount { k, max: u16::MAX as usize });
    }
    Ok(())
}

fn check_bounds(k: usize, bounds: &[usize]) -> Result<(), RamseyError> {
    if bounds.len() != k {
        return Err(RamseyError::BoundsLen { k, got: bounds.len() });
    }
    for (i, &b) in bounds.iter().enumerate() {
        if b < 3 || b % 2 == 0 {
            return Err(RamseyError::BadBound { color: i + 1, value: b });
        }
    }
    Ok(())
}

/// Position of the pair `(u, v)`, `u < v`, in lexicographic order.
fn pair_index(m: usize, u: usize, v: usize) -> usize {
    (2 * m - u - 1) * u / 2 + (v - u - 1)
}

impl EdgeColoring {
    /// Builds a coloring from explicit `(u, v, color)` triples; every one of
    /// the `C(m, 2)` pairs must appear exactly once with a color in `1..=k`.
    pub fn from_edges(
        m: usize,
        k: usize,
        edges: &[(usize, usize, usize)],
    ) -> Result<EdgeColoring, RamseyError> {
        check_host(m, k)?;
        let mut colors = vec![0u16; m * (m - 1) / 2];
        for &(u, v, color) in edges {
            if u >= m || v >= m {
                return Err(RamseyError::EdgeRange { u, v, m });
            }
            if u == v {
                return Err(RamseyError::LoopEdge { v });
            }
            if color < 1 || color > k {
                return Err(RamseyError::ColorRange { color, k });
            }
            let (lo, hi) = (u.min(v), u.max(v));
            let idx = pair_index(m, lo, hi);
            if colors[idx] != 0 {
                return Err(RamseyError::DuplicateEdge { u: lo, v: hi });
            }
            colors[idx] = color as u16;
        }
        for u in 0..m {
            for v in u + 1..m {
                if colors[pair_index(m, u, v)] == 0 {
                    return Err(RamseyError::MissingEdge { u, v });
                }
            }
        }
        Ok(EdgeColoring { m, k, colors })
    }

    fn from_raw(m: usize, k: usize, colors: Vec<u16>) -> EdgeColoring {
        debug_assert_eq!(colors.len(), m * (m - 1) / 2);
        debug_assert!(colors.iter().all(|&c| 1 <= c && c as usize <= k));
        EdgeColoring { m, k, colors }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Color of the edge `{u, v}`.
    pub fn color(&self, u: usize, v: usize) -> Result<usize, RamseyError> {
        if u >= self.m || v >= self.m {
            return Err(RamseyError::EdgeRange { u, v, m: self.m });
        }
        if u == v {
            return Err(RamseyError::LoopEdge { v });
        }
        let (lo, hi) = (u.min(v), u.max(v));
        Ok(self.colors[pair_index(self.m, lo, hi)] as usize)
    }

    /// The subgraph of `K_m` spanned by the edges of one color, on all `m`
    /// vertices.
    pub fn class_graph(&self, color: usize) -> Result<Graph, RamseyError> {
        if color < 1 || color > self.k {
            return Err(RamseyError::ColorRange { color, k: self.k });
        }
        let mut g = Graph::empty(self.m);
        let mut idx = 0;
        for u in 0..self.m {
            for v in u + 1..self.m {
                if self.colors[idx] as usize == color {
                    g.add_edge(u, v).expect("pairs are distinct and in range");
                }
                idx += 1;
            }
        }
        Ok(g)
    }

    /// All edges as `(u, v, color)` triples in lexicographic pair order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.colors.len());
        let mut idx = 0;
        for u in 0..self.m {
            for v in u + 1..self.m {
                out.push((u, v, self.colors[idx] as usize));
                idx += 1;
            }
        }
        out
    }

    pub fn to_doc(&self) -> ColoringDoc {
        ColoringDoc { m: self.m, k: self.k, edges: self.edges() }
    }

    pub fn from_doc(doc: &ColoringDoc) -> Result<EdgeColoring, RamseyError> {
        EdgeColoring::from_edges(doc.m, doc.k, &doc.edges)
    }
}

/// First color whose class contains an odd cycle no longer than its bound,
/// with the shortest such cycle as witness; `None` when every class stays
/// clear of its bound. `bounds[i]` constrains color `i + 1` and must be odd
/// and at least 3.
pub fn mono_odd_cycle(
    c: &EdgeColoring,
    bounds: &[usize],
) -> Result<Option<(usize, OddCycleWitness)>, RamseyError> {
    check_bounds(c.k, bounds)?;
    for color in 1..=c.k {
        let class = c.class_graph(color)?;
        if let Some((len, witness)) = class.odd_girth() {
            if len <= bounds[color - 1] {
                return Ok(Some((color, witness)));
            }
        }
    }
    Ok(None)
}

/// Result of enumerating every coloring: either all of them were forced to
/// contain a bounded monochromatic odd cycle, or the lexicographically first
/// coloring avoiding one is attached.
#[derive(Debug, Clone)]
pub struct ExhaustiveOutcome {
    pub forced: bool,
    pub counterexample: Option<EdgeColoring>,
}

/// Rebuilds the coloring numbered `idx` when the digits (base `k`, first
/// edge most significant) run over the non-fixed edges.
fn coloring_from_index(m: usize, k: usize, idx: u64, fix_first: bool) -> EdgeColoring {
    let e = m * (m - 1) / 2;
    let mut colors = vec![0u16; e];
    let free = if fix_first { e - 1 } else { e };
    let mut rest = idx;
    for slot in (e - free..e).rev() {
        colors[slot] = (rest % k as u64) as u16 + 1;
        rest /= k as u64;
    }
    if fix_first {
        colors[0] = 1;
    }
    EdgeColoring::from_raw(m, k, colors)
}

fn has_bounded_mono_cycle(c: &EdgeColoring, bounds: &[usize]) -> bool {
    (1..=c.k).any(|color| {
        let class = c.class_graph(color).expect("color is in range");
        matches!(class.odd_girth_value(), Some(len) if len <= bounds[color - 1])
    })
}

/// `k^exp`, saturating once the value passes `cap`.
fn bounded_pow(base: u64, exp: usize, cap: u64) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc > cap {
            return acc;
        }
    }
    acc
}

/// Decides whether every `k`-coloring of `K_m` contains a monochromatic odd
/// cycle within `bounds`, by full enumeration. When all bounds are equal the
/// first edge is fixed to color 1 (color permutations preserve the property
/// exactly then); otherwise the whole space is walked. Guarded by
/// [`EXHAUSTIVE_GUARD`] colorings.
pub fn exhaustive_check(
    m: usize,
    k: usize,
    bounds: &[usize],
) -> Result<ExhaustiveOutcome, RamseyError> {
    exhaustive_check_with(m, k, bounds, false)
}

/// Like [`exhaustive_check`]; `force` lifts the guard up to the hard ceiling.
pub fn exhaustive_check_with(
    m: usize,
    k: usize,
    bounds: &[usize],
    force: bool,
) -> Result<ExhaustiveOutcome, RamseyError> {
    check_host(m, k)?;
    check_bounds(k, bounds)?;
    let e = m * (m - 1) / 2;
    let total = bounded_pow(k as u64, e, EXHAUSTIVE_CEILING);
    let bound = if force { EXHAUSTIVE_CEILING } else { EXHAUSTIVE_GUARD };
    if total > bound {
        return Err(RamseyError::Infeasible { m, k, bound });
    }
    let fix_first = e > 0 && bounds.iter().all(|&b| b == bounds[0]);
    let space = if fix_first { total / k as u64 } else { total };
    let hit = (0..space).into_par_iter().find_first(|&idx| {
        let c = coloring_from_index(m, k, idx, fix_first);
        !has_bounded_mono_cycle(&c, bounds)
    });
    match hit {
        Some(idx) => {
            let c = coloring_from_index(m, k, idx, fix_first);
            debug_assert!(mono_odd_cycle(&c, bounds).unwrap().is_none());
            Ok(ExhaustiveOutcome { forced: false, counterexample: Some(c) })
        }
        None => Ok(ExhaustiveOutcome { forced: true, counterexample: None }),
    }
}

/// Is there a walk of even length at most `limit` from `from` to `to` along
/// the single-word adjacency masks `adj`? Breadth-first over (vertex,
/// parity) states; even walks contain even paths of no greater length, so
/// this is exact for the cycle check.
fn even_walk_within(adj: &[u64], from: usize, to: usize, limit: usize) -> bool {
    let mut vis = [1u64 << from, 0u64];
    let mut frontier = 1u64 << from;
    for d in 1..=limit {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let x = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[x];
        }
        let p = d & 1;
        next &= !vis[p];
        if next == 0 {
            return false;
        }
        vis[p] |= next;
        if p == 0 && next & (1u64 << to) != 0 {
            return true;
        }
        frontier = next;
    }
    false
}

struct ColoringSearch<'a> {
    k: usize,
    bounds: &'a [usize],
    edges: Vec<(usize, usize)>,
    colors: Vec<u16>,
    adj: Vec<Vec<u64>>,
    symmetric: bool,
    deadline: Option<Instant>,
    budget_millis: u64,
}

impl ColoringSearch<'_> {
    /// Depth-first over edges in lexicographic order. Coloring edge `(u, v)`
    /// with `c` closes a bounded odd cycle exactly when the class already
    /// connects `u` to `v` by an even path of length `< bounds[c]`, so that
    /// single check keeps the partial coloring clean at every node. When all
    /// bounds are equal, color `c` may only be introduced after `c - 1`
    /// (canonical representatives cover the search space up to permutation).
    fn dfs(&mut self, e: usize, used: usize) -> Result<bool, RamseyError> {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(RamseyError::TimeBudget { millis: self.budget_millis });
            }
        }
        if e == self.edges.len() {
            return Ok(true);
        }
        let (u, v) = self.edges[e];
        let limit = if self.symmetric { self.k.min(used + 1) } else { self.k };
        for c in 1..=limit {
            if even_walk_within(&self.adj[c - 1], u, v, self.bounds[c - 1] - 1) {
                continue;
            }
            self.colors[e] = c as u16;
            self.adj[c - 1][u] |= 1u64 << v;
            self.adj[c - 1][v] |= 1u64 << u;
            if self.dfs(e + 1, used.max(c))? {
                return Ok(true);
            }
            self.adj[c - 1][u] &= !(1u64 << v);
            self.adj[c - 1][v] &= !(1u64 << u);
            self.colors[e] = 0;
        }
        Ok(false)
    }
}

/// Searches for a coloring of `K_m` with no monochromatic odd cycle within
/// `bounds`; `None` means the backtracking closed and no such coloring
/// exists.
pub fn search_coloring(
    m: usize,
    k: usize,
    bounds: &[usize],
) -> Result<Option<EdgeColoring>, RamseyError> {
    search_coloring_with(m, k, bounds, None)
}

/// Like [`search_coloring`] with an optional wall-clock budget.
pub fn search_coloring_with(
    m: usize,
    k: usize,
    bounds: &[usize],
    budget: Option<Duration>,
) -> Result<Option<EdgeColoring>, RamseyError> {
    check_host(m, k)?;
    check_bounds(k, bounds)?;
    if m > MAX_SEARCH_VERTICES {
        return Err(RamseyError::HostSize { m, max: MAX_SEARCH_VERTICES });
    }
    let mut edges = Vec::with_capacity(m * (m - 1) / 2);
    for u in 0..m {
        for v in u + 1..m {
            edges.push((u, v));
        }
    }
    let e = edges.len();
    let mut search = ColoringSearch {
        k,
        bounds,
        edges,
        colors: vec![0u16; e],
        adj: vec![vec![0u64; m]; k],
        symmetric: bounds.iter().all(|&b| b == bounds[0]),
        deadline: budget.map(|b| Instant::now() + b),
        budget_millis: budget.map_or(0, |b| b.as_millis() as u64),
    };
    if search.dfs(0, 0)? {
        let c = EdgeColoring::from_raw(m, k, search.colors);
        debug_assert!(mono_odd_cycle(&c, bounds).unwrap().is_none());
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

/// The recursive doubling coloring of `K_{2^k}`: level 1 is a single-color
/// `K_2`; level `l` joins two copies of level `l - 1` and paints every cross
/// edge with color `l`. Equivalently, edge `{u, v}` takes the position of
/// the highest bit where `u` and `v` differ, plus one. Every class is a
/// disjoint union of complete bipartite blocks, hence bipartite.
pub fn bipartite_coloring(k: usize) -> Result<EdgeColoring, RamseyError> {
    if k < 1 || k > MAX_DOUBLINGS {
        return Err(RamseyError::DoublingRange { k, max: MAX_DOUBLINGS });
    }
    let m = 1usize << k;
    let mut colors = Vec::with_capacity(m * (m - 1) / 2);
    for u in 0..m {
        for v in u + 1..m {
            let level = usize::BITS - 1 - (u ^ v).leading_zeros();
            colors.push(level as u16 + 1);
        }
    }
    Ok(EdgeColoring::from_raw(m, k, colors))
}

/// One bit per color per vertex: the side of that vertex in the color
/// class's bipartition (bit `i` for color `i + 1`; the lowest-index vertex
/// of each connected component sits on side 0). Every pair of vertices is
/// joined by an edge of some color and lands on opposite sides of that
/// class, so the labels are pairwise distinct. Fails with the offending odd
/// cycle when some class is not bipartite.
pub fn label_vertices(c: &EdgeColoring) -> Result<Vec<u64>, RamseyError> {
    if c.k > MAX_LABEL_COLORS {
        return Err(RamseyError::LabelWidth { k: c.k, max: MAX_LABEL_COLORS });
    }
    let mut labels = vec![0u64; c.m];
    for color in 1..=c.k {
        let class = c.class_graph(color)?;
        match class.bipartition() {
            Ok(sides) => {
                for (v, &side) in sides.iter().enumerate() {
                    labels[v] |= (side as u64) << (color - 1);
                }
            }
            Err(witness) => {
                return Err(RamseyError::NonBipartiteClass { color, witness });
            }
        }
    }
    Ok(labels)
}

/// Ternary verdict for `k` independent copies of the `n`-cycle box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Violates,
    NoViolation,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Violates => "VIOLATES",
            Verdict::NoViolation => "NO_VIOLATION",
            Verdict::Unknown => "UNKNOWN",
        };
        f.write_str(s)
    }
}

/// Verdict plus the tag of the result family that settles the cell and a
/// one-sentence justification.
#[derive(Debug, Clone, Serialize)]
pub struct RuleOutVerdict {
    pub verdict: Verdict,
    pub basis: &'static str,
    pub detail: String,
}

/// Can `k` independent copies of the `n`-cycle box violate the exclusivity
/// principle? Copies with `n` in `{4, 5}` violate from two copies up; two
/// and three copies of any longer box cannot (their products peak exactly at
/// the threshold clique size); for four or more copies the odd-girth
/// labeling argument rules out `n ≥ 2^k + 2` and the strip in between stays
/// open.
pub fn rule_out(k: usize, n: usize) -> Result<RuleOutVerdict, RamseyError> {
    if k < 1 || k > MAX_RULE_OUT_COPIES {
        return Err(RamseyError::CopiesRange { k, max: MAX_RULE_OUT_COPIES });
    }
    if n < 4 {
        return Err(RamseyError::CycleRange { n });
    }
    let v = |verdict, basis: &'static str, detail: String| {
        Ok(RuleOutVerdict { verdict, basis, detail })
    };
    if k == 1 {
        return v(
            Verdict::NoViolation,
            "SINGLE",
            format!(
                "one copy of the {n}-cycle box has clique number 2 and event weight 1/2, \
                 so pairwise-exclusive weights sum to at most 1"
            ),
        );
    }
    if n <= 5 {
        return if k == 2 {
            v(
                Verdict::Violates,
                "T9",
                format!(
                    "two copies of the {n}-cycle box contain 5 pairwise-exclusive events \
                     of weight 1/4 each, summing to 5/4"
                ),
            )
        } else {
            v(
                Verdict::Violates,
                "R8",
                format!(
                    "doubling the 5-event set of the two-copy case along each further \
                     factor edge gives {} pairwise-exclusive events of weight 1/2^{k}, \
                     summing to 5/4",
                    5u128 << (k - 2)
                ),
            )
        };
    }
    match k {
        2 => v(
            Verdict::NoViolation,
            "T10",
            format!(
                "two copies of the {n}-cycle box have clique number 4, and 4 events of \
                 weight 1/4 sum to exactly 1"
            ),
        ),
        3 => v(
            Verdict::NoViolation,
            "T12",
            format!(
                "three copies of the {n}-cycle box have clique number 8, and 8 events of \
                 weight 1/8 sum to exactly 1"
            ),
        ),
        _ => {
            let threshold = (1u128 << k) + 1;
            if (n as u128) >= threshold + 1 {
                v(
                    Verdict::NoViolation,
                    "T13",
                    format!(
                        "{threshold} pairwise-exclusive events would force a monochromatic \
                         odd cycle of length at most {threshold} across the {k} copies, \
                         but each copy's exclusivity graph has odd girth at least {}",
                        threshold + 2
                    ),
                )
            } else {
                v(
                    Verdict::Unknown,
                    "OPEN",
                    format!(
                        "for {k} copies of the {n}-cycle box neither the clique \
                         constructions nor the odd-girth labeling argument decides the cell"
                    ),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The edges of `K_5` split into the 5-cycle `0-1-2-3-4` (color 1) and
    /// its pentagram of diagonals (color 2).
    fn two_five_cycles() -> EdgeColoring {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5, 1));
            edges.push((i, (i + 2) % 5, 2));
        }
        EdgeColoring::from_edges(5, 2, &edges).unwrap()
    }

    fn single_color(m: usize) -> EdgeColoring {
        let mut edges = Vec::new();
        for u in 0..m {
            for v in u + 1..m {
                edges.push((u, v, 1));
            }
        }
        EdgeColoring::from_edges(m, 1, &edges).unwrap()
    }

    fn witness_lives_in_class(c: &EdgeColoring, color: usize, w: &OddCycleWitness) {
        let verts = w.vertices();
        assert!(w.len() >= 3 && w.len() % 2 == 1);
        for i in 0..verts.len() {
            let u = verts[i];
            let v = verts[(i + 1) % verts.len()];
            assert_eq!(c.color(u, v).unwrap(), color);
        }
    }

    #[test]
    fn colorings_round_trip_through_json() {
        let c = two_five_cycles();
        assert_eq!(c.m(), 5);
        assert_eq!(c.k(), 2);
        assert_eq!(c.color(1, 0).unwrap(), 1);
        assert_eq!(c.color(0, 2).unwrap(), 2);
        assert_eq!(c.edges().len(), 10);

        let doc = c.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back = EdgeColoring::from_doc(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, c);

        let pentagon = c.class_graph(1).unwrap();
        assert_eq!(pentagon.edge_count(), 5);
        assert_eq!(pentagon.odd_girth_value(), Some(5));
    }

    #[test]
    fn malformed_colorings_are_rejected() {
        let mut edges = two_five_cycles().edges();
        let dropped = edges.pop().unwrap();
        assert!(matches!(
            EdgeColoring::from_edges(5, 2, &edges),
            Err(RamseyError::MissingEdge { .. })
        ));
        edges.push(dropped);
        edges.push(dropped);
        assert!(matches!(
            EdgeColoring::from_edges(5, 2, &edges),
            Err(RamseyError::DuplicateEdge { .. })
        ));
        assert!(matches!(
            EdgeColoring::from_edges(5, 2, &[(0, 0, 1)]),
            Err(RamseyError::LoopEdge { v: 0 })
        ));
        assert!(matches!(
            EdgeColoring::from_edges(5, 2, &[(0, 5, 1)]),
            Err(RamseyError::EdgeRange { u: 0, v: 5, m: 5 })
        ));
        assert!(matches!(
            EdgeColoring::from_edges(5, 2, &[(0, 1, 3)]),
            Err(RamseyError::ColorRange { color: 3, k: 2 })
        ));
        assert!(matches!(
            EdgeColoring::from_edges(5, 2, &[(0, 1, 0)]),
            Err(RamseyError::ColorRange { color: 0, k: 2 })
        ));
        assert!(matches!(
            EdgeColoring::from_edges(0, 2, &[]),
            Err(RamseyError::EmptyHost { m: 0, k: 2 })
        ));
    }

    #[test]
    fn mono_cycles_on_the_named_colorings() {
        let k3 = single_color(3);
        let (color, w) = mono_odd_cycle(&k3, &[3]).unwrap().unwrap();
        assert_eq!(color, 1);
        assert_eq!(w.len(), 3);
        witness_lives_in_class(&k3, color, &w);

        let c = two_five_cycles();
        assert!(mono_odd_cycle(&c, &[3, 3]).unwrap().is_none());
        let (color, w) = mono_odd_cycle(&c, &[5, 5]).unwrap().unwrap();
        assert_eq!(color, 1);
        assert_eq!(w.len(), 5);
        witness_lives_in_class(&c, color, &w);

        assert!(matches!(
            mono_odd_cycle(&c, &[3]),
            Err(RamseyError::BoundsLen { k: 2, got: 1 })
        ));
        assert!(matches!(
            mono_odd_cycle(&c, &[3, 4]),
            Err(RamseyError::BadBound { color: 2, value: 4 })
        ));
        assert!(matches!(
            mono_odd_cycle(&c, &[1, 3]),
            Err(RamseyError::BadBound { color: 1, value: 1 })
        ));
    }

    #[test]
    fn exhaustive_check_matches_the_classic_numbers() {
        let r33 = exhaustive_check(6, 2, &[3, 3]).unwrap();
        assert!(r33.forced);
        assert!(r33.counterexample.is_none());

        let below = exhaustive_check(5, 2, &[3, 3]).unwrap();
        assert!(!below.forced);
        let cx = below.counterexample.unwrap();
        assert!(mono_odd_cycle(&cx, &[3, 3]).unwrap().is_none());

        assert!(exhaustive_check(5, 2, &[5, 3]).unwrap().forced);
        let mixed = exhaustive_check(4, 2, &[5, 3]).unwrap();
        assert!(!mixed.forced);
        let cx = mixed.counterexample.unwrap();
        assert!(mono_odd_cycle(&cx, &[5, 3]).unwrap().is_none());

        // Every 2-coloring of K_5 has a monochromatic odd cycle outright.
        assert!(exhaustive_check(5, 2, &[5, 5]).unwrap().forced);
    }

    #[test]
    fn symmetry_breaking_agrees_with_full_enumeration() {
        // Oracle: walk the whole space without fixing the first edge.
        fn brute(m: usize, k: usize, bounds: &[usize]) -> (bool, Option<EdgeColoring>) {
            let e = m * (m - 1) / 2;
            let total = (k as u64).pow(e as u32);
            for idx in 0..total {
                let c = coloring_from_index(m, k, idx, false);
                if !has_bounded_mono_cycle(&c, bounds) {
                    return (false, Some(c));
                }
            }
            (true, None)
        }

        for (m, k, bounds) in [
            (4, 2, vec![3, 3]),
            (5, 2, vec![3, 3]),
            (4, 2, vec![5, 3]),
            (5, 2, vec![5, 3]),
            (4, 3, vec![3, 3, 3]),
            (3, 2, vec![3, 3]),
        ] {
            let (forced, cx) = brute(m, k, &bounds);
            let got = exhaustive_check(m, k, &bounds).unwrap();
            assert_eq!(got.forced, forced, "m = {m}, k = {k}, bounds {bounds:?}");
            assert_eq!(got.counterexample, cx, "m = {m}, k = {k}, bounds {bounds:?}");
        }
    }

    #[test]
    fn infeasible_spaces_need_the_override() {
        assert!(matches!(
            exhaustive_check(8, 2, &[3, 3]),
            Err(RamseyError::Infeasible { m: 8, k: 2, bound: EXHAUSTIVE_GUARD })
        ));
        // The hard ceiling stands even with the override.
        assert!(matches!(
            exhaustive_check_with(12, 2, &[3, 3], true),
            Err(RamseyError::Infeasible { m: 12, k: 2, bound: EXHAUSTIVE_CEILING })
        ));
    }

    #[test]
    fn search_finds_colorings_and_closes_refutations() {
        let c = search_coloring(5, 2, &[3, 3]).unwrap().unwrap();
        assert!(mono_odd_cycle(&c, &[3, 3]).unwrap().is_none());

        assert!(search_coloring(6, 2, &[3, 3]).unwrap().is_none());
        assert!(search_coloring(5, 2, &[5, 5]).unwrap().is_none());

        let c = search_coloring(4, 2, &[3, 3]).unwrap().unwrap();
        assert!(mono_odd_cycle(&c, &[3, 3]).unwrap().is_none());

        // A single color forces the triangle as soon as one exists.
        assert!(search_coloring(3, 1, &[3]).unwrap().is_none());
        let c = search_coloring(2, 1, &[3]).unwrap().unwrap();
        assert_eq!(c.edges(), vec![(0, 1, 1)]);
    }

    #[test]
    fn search_covers_the_three_color_k8_instance() {
        let c = search_coloring_with(8, 3, &[5, 5, 5], Some(Duration::from_secs(300)))
            .unwrap()
            .unwrap();
        assert_eq!(c.m(), 8);
        assert!(mono_odd_cycle(&c, &[5, 5, 5]).unwrap().is_none());
    }

    #[test]
    fn search_aborts_on_an_exhausted_budget() {
        assert!(matches!(
            search_coloring_with(6, 2, &[3, 3], Some(Duration::ZERO)),
            Err(RamseyError::TimeBudget { millis: 0 })
        ));
    }

    #[test]
    fn doubling_builds_bipartite_classes() {
        let k1 = bipartite_coloring(1).unwrap();
        assert_eq!(k1.edges(), vec![(0, 1, 1)]);

        let k2 = bipartite_coloring(2).unwrap();
        assert_eq!(
            k2.edges(),
            vec![(0, 1, 1), (0, 2, 2), (0, 3, 2), (1, 2, 2), (1, 3, 2), (2, 3, 1)]
        );

        for k in 1..=5 {
            let c = bipartite_coloring(k).unwrap();
            let m = 1 << k;
            assert_eq!(c.m(), m);
            assert_eq!(c.edges().len(), m * (m - 1) / 2);
            for color in 1..=k {
                let class = c.class_graph(color).unwrap();
                // 2^(k-l) complete bipartite blocks on 2^(l-1) + 2^(l-1)
                // vertices each.
                assert_eq!(class.edge_count(), 1 << (k + color - 2));
                assert!(class.bipartition().is_ok());
                assert!(class.odd_girth().is_none());
            }
        }

        assert!(matches!(
            bipartite_coloring(0),
            Err(RamseyError::DoublingRange { k: 0, max: MAX_DOUBLINGS })
        ));
        assert!(matches!(
            bipartite_coloring(13),
            Err(RamseyError::DoublingRange { k: 13, max: MAX_DOUBLINGS })
        ));
    }

    #[test]
    fn labels_enumerate_the_binary_cube() {
        // The doubling coloring separates vertices exactly along their bits,
        // so vertex v's label reads back as v itself.
        for k in 1..=4 {
            let labels = label_vertices(&bipartite_coloring(k).unwrap()).unwrap();
            let expected: Vec<u64> = (0..1u64 << k).collect();
            assert_eq!(labels, expected);
        }

        let labels = label_vertices(&single_color(2)).unwrap();
        assert_eq!(labels, vec![0, 1]);

        match label_vertices(&single_color(3)) {
            Err(RamseyError::NonBipartiteClass { color: 1, witness }) => {
                assert_eq!(witness.len(), 3);
            }
            other => panic!("expected a non-bipartite class, got {other:?}"),
        }
    }

    #[test]
    fn every_two_coloring_of_k5_fails_the_labeling() {
        // 5 vertices cannot receive distinct 2-bit labels, so some class of
        // every 2-coloring of K_5 must be non-bipartite; checked over all
        // 2^10 colorings, with each witness validated in its class.
        let e = 10;
        for idx in 0..1u64 << e {
            let c = coloring_from_index(5, 2, idx, false);
            match label_vertices(&c) {
                Err(RamseyError::NonBipartiteClass { color, witness }) => {
                    witness_lives_in_class(&c, color, &witness);
                    assert!(witness.len() <= 5);
                }
                other => panic!("coloring {idx} should fail labeling, got {other:?}"),
            }
        }
    }

    #[test]
    fn rule_out_matches_the_copy_cycle_table() {
        let cell = |k, n| rule_out(k, n).unwrap();

        for n in [4, 5, 6, 20, 70] {
            let r = cell(1, n);
            assert_eq!(r.verdict, Verdict::NoViolation);
            assert_eq!(r.basis, "SINGLE");
        }
        for n in [4, 5] {
            assert_eq!(cell(2, n).verdict, Verdict::Violates);
            assert_eq!(cell(2, n).basis, "T9");
            for k in 3..=6 {
                assert_eq!(cell(k, n).verdict, Verdict::Violates);
                assert_eq!(cell(k, n).basis, "R8");
            }
        }
        for n in [6, 7, 10, 70] {
            assert_eq!(cell(2, n).verdict, Verdict::NoViolation);
            assert_eq!(cell(2, n).basis, "T10");
            assert_eq!(cell(3, n).verdict, Verdict::NoViolation);
            assert_eq!(cell(3, n).basis, "T12");
        }

        // k >= 4: the open strip runs from 6 to 2^k + 1 inclusive.
        assert_eq!(cell(4, 17).verdict, Verdict::Unknown);
        assert_eq!(cell(4, 17).basis, "OPEN");
        assert_eq!(cell(4, 18).verdict, Verdict::NoViolation);
        assert_eq!(cell(4, 18).basis, "T13");
        assert_eq!(cell(5, 33).verdict, Verdict::Unknown);
        assert_eq!(cell(5, 34).verdict, Verdict::NoViolation);
        assert_eq!(cell(6, 65).verdict, Verdict::Unknown);
        assert_eq!(cell(6, 66).verdict, Verdict::NoViolation);
        assert_eq!(cell(4, 6).verdict, Verdict::Unknown);

        assert!(matches!(rule_out(0, 6), Err(RamseyError::CopiesRange { k: 0, .. })));
        assert!(matches!(rule_out(63, 6), Err(RamseyError::CopiesRange { k: 63, .. })));
        assert!(matches!(rule_out(2, 3), Err(RamseyError::CycleRange { n: 3 })));
    }

    #[test]
    fn verdicts_render_for_reports() {
        assert_eq!(Verdict::Violates.to_string(), "VIOLATES");
        assert_eq!(Verdict::NoViolation.to_string(), "NO_VIOLATION");
        assert_eq!(Verdict::Unknown.to_string(), "UNKNOWN");
        let r = rule_out(4, 18).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"NO_VIOLATION\""));
        assert!(json.contains("\"T13\""));
    }
}
