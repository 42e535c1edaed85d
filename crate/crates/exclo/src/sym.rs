//! Certified vertex symmetries for clique search on highly symmetric hosts.
//!
//! A permutation handed to the solver is never trusted: [`certify_generators`]
//! rechecks bijectivity, edge preservation, and vertex transitivity against
//! the actual adjacency rows before anything downstream may rely on it. With
//! that in hand, two classical facts carry the whole reduction:
//!
//! * in a vertex-transitive graph, every clique can be translated onto any
//!   chosen base vertex, so clique decisions only ever need to look inside
//!   one closed neighbourhood;
//! * the orbits of the base vertex's stabilizer partition that neighbourhood,
//!   and once the search through one orbit representative is exhausted the
//!   whole orbit can be discarded (any clique meeting the orbit translates to
//!   one through its representative without touching earlier, already
//!   discarded orbits).
//!
//! Stabilizer orbits are computed from Schreier generators of the certified
//! generating set; every element involved is a composition of certified
//! automorphisms, so closure — not re-verification — guarantees each one is
//! again an automorphism fixing the base vertex.

use crate::exgraph::ExclusivityGraph;
use crate::graph::{Graph, GraphError};
use crate::iso::find_isomorphism;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error("generator {index} permutes {got} points but the graph has {want} vertices")]
    LengthMismatch { index: usize, got: usize, want: usize },
    #[error("generator {index} is not a bijection: image {image} repeats")]
    NotBijective { index: usize, image: usize },
    #[error("generator {index} does not preserve adjacency on the pair ({u}, {v})")]
    NotAutomorphism { index: usize, u: usize, v: usize },
    #[error("generators only reach {reached} of {total} vertices from vertex 0")]
    NotTransitive { reached: usize, total: usize },
    #[error("symmetry extraction needs 4 <= n <= 32 cycle measurements, got {0}")]
    CycleScope(usize),
    #[error("exclusivity graph does not match its ladder/prism template")]
    TemplateMismatch,
    #[error("power lift of {factor_vertices} vertices to the {copies}-fold product overflows")]
    PowerOverflow { factor_vertices: usize, copies: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Checks that every permutation really is an automorphism of `g` and that
/// together they act transitively on its vertices. Everything after this
/// check leans only on group closure, so this is the single trust boundary.
pub fn certify_generators(g: &Graph, gens: &[Vec<u32>]) -> Result<(), SymmetryError> {
    let n = g.vertex_count();
    for (index, p) in gens.iter().enumerate() {
        if p.len() != n {
            return Err(SymmetryError::LengthMismatch { index, got: p.len(), want: n });
        }
        let mut seen = vec![false; n];
        for &im in p {
            let im = im as usize;
            if im >= n || seen[im] {
                return Err(SymmetryError::NotBijective { index, image: im });
            }
            seen[im] = true;
        }
        // A bijection sending edges to edges maps the edge set into itself
        // injectively, and equal finite cardinalities make that onto; the
        // one-sided check below is therefore a full automorphism check.
        for u in 0..n {
            for v in g.neighbors(u) {
                if v > u && !g.has_edge(p[u] as usize, p[v] as usize) {
                    return Err(SymmetryError::NotAutomorphism { index, u, v });
                }
            }
        }
    }
    if n > 1 {
        let reached = orbit_of(0, n, gens).iter().filter(|&&b| b).count();
        if reached != n {
            return Err(SymmetryError::NotTransitive { reached, total: n });
        }
    }
    Ok(())
}

fn orbit_of(start: usize, n: usize, gens: &[Vec<u32>]) -> Vec<bool> {
    let mut in_orbit = vec![false; n];
    in_orbit[start] = true;
    let mut queue = vec![start];
    while let Some(x) = queue.pop() {
        for p in gens {
            let y = p[x] as usize;
            if !in_orbit[y] {
                in_orbit[y] = true;
                queue.push(y);
            }
        }
    }
    in_orbit
}

/// Partitions all vertices into orbits of the stabilizer of `base` inside
/// the group the generators span, returning the smallest member of each
/// vertex's orbit as its label. `base` always labels itself.
///
/// The stabilizer is generated by the Schreier elements `u_y^-1 ∘ s ∘ u_x`
/// (with `u_x` a transversal element taking `base` to `x`, and `y = s(x)`),
/// so sweeping those over every vertex and merging `w` with its image yields
/// exactly the stabilizer orbits. Generators must already be certified.
pub fn stabilizer_orbits(n: usize, gens: &[Vec<u32>], base: usize) -> Vec<u32> {
    // Transversal by breadth-first closure: forward[x] maps base -> x.
    let mut forward: Vec<Option<Vec<u32>>> = vec![None; n];
    forward[base] = Some((0..n as u32).collect());
    let mut queue = std::collections::VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = s[x] as usize;
            if forward[y].is_none() {
                let ux = forward[x].as_ref().unwrap();
                forward[y] = Some(ux.iter().map(|&w| s[w as usize]).collect());
                queue.push_back(y);
            }
        }
    }

    let mut inverse: Vec<Vec<u32>> = vec![Vec::new(); n];
    for x in 0..n {
        if let Some(ux) = &forward[x] {
            let mut inv = vec![0u32; n];
            for (w, &im) in ux.iter().enumerate() {
                inv[im as usize] = w as u32;
            }
            inverse[x] = inv;
        }
    }

    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], v: u32) -> u32 {
        let mut root = v;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = v;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    for x in 0..n {
        let ux = match &forward[x] {
            Some(ux) => ux,
            None => continue,
        };
        for s in gens {
            let inv_y = &inverse[s[x] as usize];
            for w in 0..n {
                let image = inv_y[s[ux[w] as usize] as usize];
                let a = find(&mut parent, w as u32);
                let b = find(&mut parent, image);
                if a != b {
                    // Union by smaller root, keeping labels canonical.
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
        }
    }

    (0..n as u32).map(|v| find(&mut parent, v)).collect()
}

/// Automorphism generators for the exclusivity graph of an n-cycle box,
/// pulled back from the rotation and reflection of its ladder or prism
/// template through an explicit isomorphism. The result is deliberately
/// re-certified by every consumer, so a template mismatch can only surface
/// as an error, never as a wrong answer.
pub fn cycle_box_generators(xg: &ExclusivityGraph) -> Result<Vec<Vec<u32>>, SymmetryError> {
    let n = xg.scenario().n();
    if !(4..=32).contains(&n) {
        return Err(SymmetryError::CycleScope(n));
    }
    let template = if n % 2 == 0 { Graph::mobius_ladder(2 * n)? } else { Graph::prism(n)? };
    let to_template = find_isomorphism(xg.graph(), &template)?
        .ok_or(SymmetryError::TemplateMismatch)?;
    let m = 2 * n;
    let mut from_template = vec![0u32; m];
    for (v, &t) in to_template.iter().enumerate() {
        from_template[t] = v as u32;
    }

    let template_gens: Vec<Vec<usize>> = if n % 2 == 0 {
        // Cycle 0..2n-1 with diameter chords: rotation and a reflection
        // fixing vertex 0.
        vec![
            (0..m).map(|x| (x + 1) % m).collect(),
            (0..m).map(|x| (m - x) % m).collect(),
        ]
    } else {
        // Two n-rings joined by rungs: ring rotation, ring reflection, and
        // the rung swap between the rings.
        let rot = |x: usize| if x < n { (x + 1) % n } else { n + (x + 1 - n) % n };
        let refl = |x: usize| if x < n { (n - x) % n } else { n + (n - (x - n)) % n };
        let swap = |x: usize| if x < n { x + n } else { x - n };
        vec![(0..m).map(rot).collect(), (0..m).map(refl).collect(), (0..m).map(swap).collect()]
    };

    Ok(template_gens
        .iter()
        .map(|t| (0..m).map(|v| from_template[t[to_template[v]]]).collect())
        .collect())
}

/// Lifts automorphism generators of a single factor to the k-fold product on
/// tuple vertices (first component most significant): each factor generator
/// acts on one coordinate at a time, and adjacent coordinate swaps are added
/// since all factors are copies of the same graph. Both kinds preserve
/// "equal or adjacent" per coordinate, hence adjacency in any product that
/// only reads coordinatewise adjacency.
pub fn power_lift(
    factor_gens: &[Vec<u32>],
    factor_vertices: usize,
    copies: usize,
) -> Result<Vec<Vec<u32>>, SymmetryError> {
    let overflow = SymmetryError::PowerOverflow { factor_vertices, copies };
    if factor_vertices == 0 || copies == 0 {
        return Err(overflow);
    }
    let mut total: usize = 1;
    for _ in 0..copies {
        total = total.checked_mul(factor_vertices).ok_or(SymmetryError::PowerOverflow {
            factor_vertices,
            copies,
        })?;
    }
    if total > u32::MAX as usize {
        return Err(overflow);
    }

    let weight = |coord: usize| factor_vertices.pow((copies - 1 - coord) as u32);
    let mut lifted = Vec::new();
    for p in factor_gens {
        for coord in 0..copies {
            let w = weight(coord);
            let gen = (0..total)
                .map(|idx| {
                    let c = (idx / w) % factor_vertices;
                    (idx - c * w + p[c] as usize * w) as u32
                })
                .collect();
            lifted.push(gen);
        }
    }
    for coord in 0..copies.saturating_sub(1) {
        let (wa, wb) = (weight(coord), weight(coord + 1));
        let gen = (0..total)
            .map(|idx| {
                let a = (idx / wa) % factor_vertices;
                let b = (idx / wb) % factor_vertices;
                (idx - a * wa - b * wb + b * wa + a * wb) as u32
            })
            .collect();
        lifted.push(gen);
    }
    Ok(lifted)
}
