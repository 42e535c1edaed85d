//! Graph isomorphism for small graphs (at most 64 vertices, so adjacency
//! fits one machine word per vertex).
//!
//! Candidate pruning comes from a joint iterative color refinement — both
//! graphs are refined against a shared signature table, so color classes are
//! comparable across them — followed by mask-based backtracking in a
//! most-constrained-vertex order.

use crate::graph::{Graph, GraphError};
use std::collections::BTreeMap;

/// Decides whether `a` and `b` are isomorphic. Errors when either graph has
/// more than 64 vertices.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool, GraphError> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// Like [`is_isomorphic`], but returns a witnessing vertex map: `map[u]` is
/// the `b`-vertex that `a`-vertex `u` lands on.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Result<Option<Vec<usize>>, GraphError> {
    for g in [a, b] {
        if g.vertex_count() > 64 {
            return Err(GraphError::IsomorphismScope(g.vertex_count()));
        }
    }
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let n = a.vertex_count();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let (ca, cb) = match joint_refine(a, b) {
        Some(colors) => colors,
        None => return Ok(None),
    };

    let rows_a: Vec<u64> = (0..n).map(|v| row64(a, v)).collect();
    let rows_b: Vec<u64> = (0..n).map(|v| row64(b, v)).collect();

    // Mask of b-vertices sharing each a-vertex's refinement color.
    let cand_color: Vec<u64> = (0..n)
        .map(|u| {
            let mut mask = 0u64;
            for (x, &c) in cb.iter().enumerate() {
                if c == ca[u] {
                    mask |= 1 << x;
                }
            }
            mask
        })
        .collect();

    // Map vertices most-constrained-first: maximize already-mapped
    // neighbors, break ties by degree then index.
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&u| placed >> u & 1 == 0)
            .max_by_key(|&u| ((rows_a[u] & placed).count_ones(), a.degree(u), usize::MAX - u))
            .unwrap();
        order.push(u);
        placed |= 1 << u;
    }

    let mut map = vec![usize::MAX; n];
    if backtrack(&rows_a, &rows_b, &cand_color, &order, 0, &mut map, 0) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn row64(g: &Graph, v: usize) -> u64 {
    g.row(v)[0]
}

fn backtrack(
    rows_a: &[u64],
    rows_b: &[u64],
    cand_color: &[u64],
    order: &[usize],
    pos: usize,
    map: &mut [usize],
    used: u64,
) -> bool {
    if pos == order.len() {
        return true;
    }
    let u = order[pos];
    let mut cand = cand_color[u] & !used;
    for &w in &order[..pos] {
        let y = map[w];
        if rows_a[u] >> w & 1 == 1 {
            cand &= rows_b[y];
        } else {
            cand &= !rows_b[y];
        }
        if cand == 0 {
            return false;
        }
    }
    while cand != 0 {
        let x = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        map[u] = x;
        if backtrack(rows_a, rows_b, cand_color, order, pos + 1, map, used | 1 << x) {
            return true;
        }
    }
    map[u] = usize::MAX;
    false
}

/// Refines both graphs together until stable, sharing one signature table
/// per round so equal colors mean equal refinement histories. Returns `None`
/// as soon as the color histograms diverge (the graphs cannot be
/// isomorphic).
fn joint_refine(a: &Graph, b: &Graph) -> Option<(Vec<u32>, Vec<u32>)> {
    let n = a.vertex_count();
    let assign = |table: &mut BTreeMap<Vec<u32>, u32>, sig: Vec<u32>| {
        let next = table.len() as u32;
        *table.entry(sig).or_insert(next)
    };

    let mut table = BTreeMap::new();
    let mut ca: Vec<u32> =
        (0..n).map(|v| assign(&mut table, vec![a.degree(v) as u32])).collect();
    let mut cb: Vec<u32> =
        (0..n).map(|v| assign(&mut table, vec![b.degree(v) as u32])).collect();
    if histogram(&ca) != histogram(&cb) {
        return None;
    }

    let mut classes = table.len();
    loop {
        let mut table = BTreeMap::new();
        let signature = |g: &Graph, colors: &[u32], v: usize| {
            let mut sig = vec![colors[v]];
            let mut nb: Vec<u32> = g.neighbors(v).map(|w| colors[w]).collect();
            nb.sort_unstable();
            sig.extend(nb);
            sig
        };
        let na: Vec<u32> = (0..n).map(|v| assign(&mut table, signature(a, &ca, v))).collect();
        let nb: Vec<u32> = (0..n).map(|v| assign(&mut table, signature(b, &cb, v))).collect();
        if histogram(&na) != histogram(&nb) {
            return None;
        }
        let grown = table.len() > classes;
        classes = table.len();
        ca = na;
        cb = nb;
        if !grown {
            return Some((ca, cb));
        }
    }
}

fn histogram(colors: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}
