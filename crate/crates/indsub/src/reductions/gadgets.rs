//! Host-graph constructions feeding the reductions.

use rand::Rng;

use crate::counting::ColoredGraph;
use crate::graph::{complete_bipartite, Graph};
use crate::{Error, Result};

/// An `H`-colored host on `|V(H)| * |V(G)|` vertices whose color-prescribed
/// homomorphism count from the full pattern equals the plain homomorphism
/// count from `H` to `G`.
///
/// Vertex `(i, v)` (block `i` copies `V(G)`) gets color `i`; two vertices
/// `(i, u)` and `(j, v)` are adjacent iff `{i,j}` is a pattern edge and
/// `{u,v}` is a host edge. A color-prescribed homomorphism picks one copy
/// per block, and its second coordinates form exactly a homomorphism image.
pub fn hom_gadget(h: &Graph, g: &Graph) -> Result<ColoredGraph> {
    let k = h.n();
    let n = g.n();
    let total = k * n;
    if total > crate::caps::MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "gadget vertices",
            cap: crate::caps::MAX_VERTICES,
            actual: total,
        });
    }
    let index = |i: usize, v: usize| (i * n + v) as u32;
    let mut edges = Vec::new();
    for &(hi, hj) in h.edges() {
        for &(gu, gv) in g.edges() {
            // Both orientations of the host edge land in the two blocks.
            edges.push(ordered(index(hi as usize, gu as usize), index(hj as usize, gv as usize)));
            edges.push(ordered(index(hi as usize, gv as usize), index(hj as usize, gu as usize)));
        }
    }
    let host = Graph::new(total, &edges)?;
    let coloring: Vec<u32> = (0..total).map(|x| (x / n.max(1)) as u32).collect();
    ColoredGraph::new(host, h.clone(), coloring)
}

fn ordered(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Color-prescribed tensor product of two hosts over the same pattern:
/// vertices are same-colored pairs, edges require an edge in both factors,
/// and the product is colored by the shared color of each pair.
pub fn tensor(a: &ColoredGraph, b: &ColoredGraph) -> Result<ColoredGraph> {
    if a.pattern() != b.pattern() {
        return Err(Error::PatternMismatch);
    }
    // Vertices in lexicographic (v, w) order.
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for v in 0..a.host().n() as u32 {
        for w in 0..b.host().n() as u32 {
            if a.coloring()[v as usize] == b.coloring()[w as usize] {
                pairs.push((v, w));
            }
        }
    }
    if pairs.len() > crate::caps::MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "tensor vertices",
            cap: crate::caps::MAX_VERTICES,
            actual: pairs.len(),
        });
    }
    let mut edges = Vec::new();
    for (x, &(v, w)) in pairs.iter().enumerate() {
        for (y, &(v2, w2)) in pairs.iter().enumerate().skip(x + 1) {
            if a.host().has_edge(v as usize, v2 as usize)
                && b.host().has_edge(w as usize, w2 as usize)
            {
                edges.push((x as u32, y as u32));
            }
        }
    }
    let host = Graph::new(pairs.len(), &edges)?;
    let coloring: Vec<u32> = pairs.iter().map(|&(v, _)| a.coloring()[v as usize]).collect();
    ColoredGraph::new(host, a.pattern().clone(), coloring)
}

/// The parsimonious clique gadget: a `K_{l,l}`-colored host on `2*l*|V(G)|`
/// vertices whose color-prescribed homomorphism count from the full
/// biclique equals the number of `l`-cliques of `G`, one homomorphism per
/// clique.
///
/// Left vertices `u(i,j)` carry color `i`, right vertices `w(i,j)` color
/// `l + i`. `u(i,j)` and `w(i',j')` are adjacent iff `(i,j) = (i',j')`, or
/// `i < i'`, `j < j'` and `{v_j, v_{j'}}` is an edge of `G`, or symmetrically
/// `i > i'`, `j > j'` with the same edge requirement. The diagonal edges
/// force equal left/right selections and the cross edges force a strictly
/// increasing clique tuple.
pub fn clique_gadget(g: &Graph, l: usize) -> Result<ColoredGraph> {
    if l < 2 {
        return Err(Error::Unsupported(format!("clique gadget needs l >= 2, got {l}")));
    }
    let n = g.n();
    let total = 2 * l * n;
    if total > crate::caps::MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "clique gadget vertices",
            cap: crate::caps::MAX_VERTICES,
            actual: total,
        });
    }
    let pattern = complete_bipartite(l, l)?;
    let u = |i: usize, j: usize| (i * n + j) as u32;
    let w = |i: usize, j: usize| (l * n + i * n + j) as u32;
    let mut edges = Vec::new();
    for i in 0..l {
        for j in 0..n {
            for i2 in 0..l {
                for j2 in 0..n {
                    let adjacent = if i == i2 && j == j2 {
                        true
                    } else if i < i2 && j < j2 {
                        g.has_edge(j, j2)
                    } else if i > i2 && j > j2 {
                        g.has_edge(j, j2)
                    } else {
                        false
                    };
                    if adjacent {
                        edges.push(ordered(u(i, j), w(i2, j2)));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let host = Graph::new(total, &edges)?;
    let mut coloring = vec![0u32; total];
    for i in 0..l {
        for j in 0..n {
            coloring[u(i, j) as usize] = i as u32;
            coloring[w(i, j) as usize] = (l + i) as u32;
        }
    }
    ColoredGraph::new(host, pattern, coloring)
}

/// Adds `l - k` universal vertices: the result has an `l`-clique iff `g`
/// has a `k`-clique. (Only the decision transfers; an `l`-clique of the
/// padded graph need not use all new vertices, so counts can differ.)
pub fn pad_clique(g: &Graph, k: usize, l: usize) -> Result<Graph> {
    if l < k {
        return Err(Error::Unsupported(format!("padding needs l >= k, got l={l} < k={k}")));
    }
    let extra = l - k;
    let n = g.n() + extra;
    let mut edges: Vec<(u32, u32)> = g.edges().to_vec();
    for x in g.n()..n {
        for y in 0..x {
            edges.push((y as u32, x as u32));
        }
    }
    Graph::new(n, &edges)
}

/// Keeps each vertex independently with probability 1/2 and returns the
/// induced subgraph on the survivors.
pub fn random_isolation<R: Rng>(g: &Graph, rng: &mut R) -> Graph {
    let mut keep: u64 = 0;
    for v in 0..g.n() {
        if rng.random_bool(0.5) {
            keep |= 1 << v;
        }
    }
    g.induced_by_mask(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_cp_hom, count_hom, CountMode, CountResult};
    use crate::gen::{gnp, rng_for};
    use crate::graph::{clique, cycle, independent_set, EdgeSubset};

    fn exact_u64(r: CountResult) -> u64 {
        r.as_exact()
            .map(|v| v.iter_u64_digits().next().unwrap_or(0))
            .expect("exact count")
    }

    #[test]
    fn hom_gadget_identity() {
        let k2 = clique(2).unwrap();
        let k3 = clique(3).unwrap();
        let cg = hom_gadget(&k2, &k3).unwrap();
        assert_eq!(cg.host().n(), 6);
        let full = EdgeSubset::full_of(&k2).unwrap();
        assert_eq!(exact_u64(count_cp_hom(full, &cg, CountMode::Exact).unwrap()), 6);

        // Edgeless pattern: every choice of one vertex per block counts.
        let is2 = independent_set(2).unwrap();
        let cg = hom_gadget(&is2, &k3).unwrap();
        let full = EdgeSubset::full_of(&is2).unwrap();
        assert_eq!(exact_u64(count_cp_hom(full, &cg, CountMode::Exact).unwrap()), 9);
    }

    #[test]
    fn hom_gadget_matches_hom_on_random_pairs() {
        let mut rng = rng_for(11, "hom-gadget");
        for trial in 0..30 {
            let h = crate::gen::small_pattern(&mut rng, 4, 6);
            let g = gnp(&mut rng, 6, 0.5);
            let cg = hom_gadget(&h, &g).unwrap();
            let full = EdgeSubset::full_of(&h).unwrap();
            let via_gadget = exact_u64(count_cp_hom(full, &cg, CountMode::Exact).unwrap());
            let direct = exact_u64(count_hom(&h, &g, CountMode::Exact).unwrap());
            assert_eq!(via_gadget, direct, "trial {trial}");
        }
    }

    #[test]
    fn tensor_multiplicativity() {
        let mut rng = rng_for(5, "tensor");
        for trial in 0..30 {
            let h = crate::gen::small_pattern(&mut rng, 4, 6);
            let a = crate::gen::colored_host(&mut rng, &h, 6, 0.6, false);
            let b = crate::gen::colored_host(&mut rng, &h, 5, 0.6, false);
            let Ok(t) = tensor(&a, &b) else { continue };
            for s in EdgeSubset::all(h.edge_count()) {
                let lhs = exact_u64(count_cp_hom(s, &t, CountMode::Exact).unwrap());
                let ra = exact_u64(count_cp_hom(s, &a, CountMode::Exact).unwrap());
                let rb = exact_u64(count_cp_hom(s, &b, CountMode::Exact).unwrap());
                assert_eq!(lhs, ra * rb, "trial {trial}, S = {:#b}", s.mask());
            }
        }
    }

    #[test]
    fn tensor_vertex_count_is_classwise_product() {
        let mut rng = rng_for(6, "tensor-n");
        let h = clique(3).unwrap();
        let a = crate::gen::colored_host(&mut rng, &h, 7, 0.5, false);
        let b = crate::gen::colored_host(&mut rng, &h, 6, 0.5, false);
        let t = tensor(&a, &b).unwrap();
        let expected: usize = (0..3).map(|c| a.class(c).len() * b.class(c).len()).sum();
        assert_eq!(t.host().n(), expected);
    }

    #[test]
    fn tensor_with_identity_host_preserves_counts() {
        let h = cycle(4).unwrap();
        let full = EdgeSubset::full_of(&h).unwrap();
        let id = ColoredGraph::identity_colored(&h, full).unwrap();
        let mut rng = rng_for(7, "tensor-id");
        let a = crate::gen::colored_host(&mut rng, &h, 6, 0.7, true);
        let t = tensor(&a, &id).unwrap();
        for s in EdgeSubset::all(h.edge_count()) {
            assert_eq!(
                exact_u64(count_cp_hom(s, &t, CountMode::Exact).unwrap()),
                exact_u64(count_cp_hom(s, &a, CountMode::Exact).unwrap())
            );
        }
    }

    #[test]
    fn clique_gadget_parsimony_pinned() {
        let k3 = clique(3).unwrap();
        let cg = clique_gadget(&k3, 2).unwrap();
        assert_eq!(cg.host().n(), 12);
        let full = EdgeSubset::full_of(cg.pattern()).unwrap();
        assert_eq!(exact_u64(count_cp_hom(full, &cg, CountMode::Exact).unwrap()), 3);

        let is4 = independent_set(4).unwrap();
        let cg = clique_gadget(&is4, 2).unwrap();
        let full = EdgeSubset::full_of(cg.pattern()).unwrap();
        assert_eq!(exact_u64(count_cp_hom(full, &cg, CountMode::Exact).unwrap()), 0);

        let k4 = clique(4).unwrap();
        let cg = clique_gadget(&k4, 3).unwrap();
        assert_eq!(cg.host().n(), 24);
        let full = EdgeSubset::full_of(cg.pattern()).unwrap();
        assert_eq!(exact_u64(count_cp_hom(full, &cg, CountMode::Exact).unwrap()), 4);
    }

    #[test]
    fn padding_preserves_the_decision() {
        let k3 = clique(3).unwrap();
        let padded = pad_clique(&k3, 2, 3).unwrap();
        assert_eq!(padded.n(), 4);
        assert_eq!(padded.edge_count(), 6);
        // Identity when l = k.
        assert_eq!(pad_clique(&k3, 2, 2).unwrap(), k3);
        let is3 = independent_set(3).unwrap();
        let padded = pad_clique(&is3, 2, 4).unwrap();
        let k4 = clique(4).unwrap();
        let cnt = crate::counting::count_sub(&k4, &padded, CountMode::Exact).unwrap();
        assert!(cnt.is_zero());
        assert!(pad_clique(&k3, 3, 2).is_err());
    }

    #[test]
    fn isolation_keeps_half_on_average() {
        let g = independent_set(10).unwrap();
        let mut rng = rng_for(0, "isolation-freq");
        let draws = 10_000;
        let mut kept = 0u64;
        for _ in 0..draws {
            kept += random_isolation(&g, &mut rng).n() as u64;
        }
        let freq = kept as f64 / (draws as f64 * 10.0);
        assert!((freq - 0.5).abs() < 0.02, "kept frequency {freq}");
    }
}
