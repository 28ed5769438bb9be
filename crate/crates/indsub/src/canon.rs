//! Canonical forms, automorphism listing and transitivity tests, built on
//! equitable degree refinement with backtracking.
//!
//! The canonical form of a graph on `n <= 16` vertices is the
//! lexicographically smallest upper-triangle adjacency encoding over all
//! vertex orderings compatible with iterated degree refinement; two graphs
//! are isomorphic iff their forms are equal. The search prunes branches
//! whose partial encoding already exceeds the best complete one, and never
//! branches on more than one member of a class of interchangeable (twin)
//! vertices.

use crate::caps::{CANONICAL_MAX_VERTICES, DEFAULT_AUTOMORPHISM_VERTEX_CAP, DEFAULT_GROUP_ORDER_CAP};
use crate::graph::Graph;
use crate::perm::Permutation;
use crate::{Error, Result};

/// A relabeling-invariant key: two graphs (each on at most 16 vertices)
/// are isomorphic iff their canonical forms are equal.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalForm {
    n: u8,
    bits: u128,
}

impl CanonicalForm {
    pub fn vertex_count(&self) -> usize {
        self.n as usize
    }

    /// Compact hex rendering used in reports.
    pub fn key(&self) -> String {
        format!("{}:{:x}", self.n, self.bits)
    }
}

/// Pair encoding position: pairs ordered column-wise, `(i, j)` with `i < j`
/// at index `j(j-1)/2 + i`. Bit 0 of the encoding is the most significant,
/// so integer comparison of encodings is lexicographic comparison.
#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Ordered partition of the vertex set into cells (bitmasks).
#[derive(Clone)]
struct Partition {
    cells: Vec<u64>,
}

/// Splits every cell by the neighbor counts into every cell, repeatedly,
/// until stable. Cell order is deterministic: fragments of a split cell are
/// ordered by increasing signature.
fn refine(g: &Graph, mut part: Partition) -> Partition {
    loop {
        let mut changed = false;
        let mut next: Vec<u64> = Vec::with_capacity(part.cells.len());
        for &cell in &part.cells {
            if cell.count_ones() <= 1 {
                next.push(cell);
                continue;
            }
            // Signature of v: neighbor count into each current cell.
            let mut sigs: Vec<(Vec<u32>, u64)> = Vec::new();
            let mut m = cell;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                let sig: Vec<u32> = part
                    .cells
                    .iter()
                    .map(|&c| (g.adj_row(v) & c).count_ones())
                    .collect();
                match sigs.iter_mut().find(|(s, _)| *s == sig) {
                    Some((_, mask)) => *mask |= 1 << v,
                    None => sigs.push((sig, 1 << v)),
                }
            }
            if sigs.len() > 1 {
                changed = true;
                sigs.sort();
            }
            next.extend(sigs.into_iter().map(|(_, mask)| mask));
        }
        part.cells = next;
        if !changed {
            return part;
        }
    }
}

/// Candidates from a cell, keeping one representative per class of twins
/// (vertices with identical neighborhoods outside the pair). Swapping two
/// twins is an automorphism fixing everything else, so exploring one of
/// them suffices.
fn twin_representatives(g: &Graph, cell: u64) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    let mut m = cell;
    'outer: while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        for &u in &reps {
            let ignore = (1u64 << u) | (1u64 << v);
            if (g.adj_row(u) ^ g.adj_row(v)) & !ignore == 0 {
                continue 'outer;
            }
        }
        reps.push(v);
    }
    reps
}

struct CanonSearch<'a> {
    g: &'a Graph,
    n: usize,
    total_bits: usize,
    best: u128,
    have_best: bool,
    best_order: Vec<u32>,
}

impl<'a> CanonSearch<'a> {
    /// Encoding bit for pair index `t`: stored at `total_bits - 1 - t`, so
    /// smaller pair indices are more significant.
    #[inline]
    fn bit(&self, t: usize) -> u128 {
        1u128 << (self.total_bits - 1 - t)
    }

    fn run(&mut self, part: Partition, placed: Vec<usize>, prefix: u128) {
        // Extend the comparable prefix while leading cells are singletons.
        let mut placed = placed;
        let mut prefix = prefix;
        let cells = part.cells;
        while placed.len() < cells.len() && cells[placed.len()].count_ones() == 1 {
            let v = cells[placed.len()].trailing_zeros() as usize;
            let j = placed.len();
            for (i, &u) in placed.iter().enumerate() {
                if self.g.has_edge(u, v) {
                    prefix |= self.bit(pair_index(i, j));
                }
            }
            placed.push(v);
            // Prune: all pairs within the placed prefix are decided, so
            // compare those top bits against the best complete encoding.
            if self.have_best {
                let filled = (j + 1) * j / 2;
                if filled > 0 {
                    let mask = if filled >= self.total_bits {
                        u128::MAX >> (128 - self.total_bits)
                    } else {
                        ((1u128 << filled) - 1) << (self.total_bits - filled)
                    };
                    if prefix > self.best & mask {
                        return;
                    }
                }
            }
        }
        if placed.len() == self.n {
            if !self.have_best || prefix < self.best {
                self.best = prefix;
                self.have_best = true;
                self.best_order = placed.iter().map(|&v| v as u32).collect();
            }
            return;
        }
        let target = cells[placed.len()];
        for v in twin_representatives(self.g, target) {
            let mut branch: Vec<u64> = Vec::with_capacity(cells.len() + 1);
            branch.extend_from_slice(&cells[..placed.len()]);
            branch.push(1u64 << v);
            branch.push(target & !(1u64 << v));
            branch.extend_from_slice(&cells[placed.len() + 1..]);
            let refined = refine(self.g, Partition { cells: branch });
            self.run(refined, placed.clone(), prefix);
        }
    }
}

/// Canonical form of `g`; requires `|V(g)| <= 16`.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    Ok(canonical_labeling(g)?.0)
}

/// Canonical form together with one ordering of the vertices achieving it.
/// `order[pos] = original vertex placed at position pos`.
pub fn canonical_labeling(g: &Graph) -> Result<(CanonicalForm, Vec<u32>)> {
    let n = g.n();
    if n > CANONICAL_MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "canonical form vertices",
            cap: CANONICAL_MAX_VERTICES,
            actual: n,
        });
    }
    if n == 0 {
        return Ok((CanonicalForm { n: 0, bits: 0 }, Vec::new()));
    }
    let total_bits = n * (n - 1) / 2;
    if total_bits == 0 {
        return Ok((CanonicalForm { n: n as u8, bits: 0 }, (0..n as u32).collect()));
    }
    let initial = refine(
        g,
        Partition {
            cells: vec![(u64::MAX >> (64 - n))],
        },
    );
    let mut search = CanonSearch {
        g,
        n,
        total_bits,
        best: u128::MAX,
        have_best: false,
        best_order: Vec::new(),
    };
    search.run(initial, Vec::new(), 0);
    debug_assert!(search.have_best);
    Ok((
        CanonicalForm {
            n: n as u8,
            bits: search.best,
        },
        search.best_order,
    ))
}

/// True iff the two graphs are isomorphic (both at most 16 vertices).
pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// The complete list of automorphisms of `g`, by backtracking over
/// adjacency-compatible images. Fails if `g` has more than
/// `DEFAULT_AUTOMORPHISM_VERTEX_CAP` vertices or the group is larger than
/// `DEFAULT_GROUP_ORDER_CAP`.
pub fn automorphisms(g: &Graph) -> Result<Vec<Permutation>> {
    automorphisms_with_caps(g, DEFAULT_AUTOMORPHISM_VERTEX_CAP, DEFAULT_GROUP_ORDER_CAP)
}

pub fn automorphisms_with_caps(
    g: &Graph,
    vertex_cap: usize,
    order_cap: usize,
) -> Result<Vec<Permutation>> {
    let n = g.n();
    if n > vertex_cap {
        return Err(Error::CapExceeded {
            what: "automorphism vertices",
            cap: vertex_cap,
            actual: n,
        });
    }
    if n == 0 {
        return Ok(vec![Permutation::identity(0)]);
    }
    // Map vertices in a fixed order; candidate images must preserve degree
    // and adjacency to all previously mapped vertices, in both directions.
    let mut degree_order: Vec<usize> = (0..n).collect();
    degree_order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut image = vec![u32::MAX; n];
    let mut used: u64 = 0;
    let mut out: Vec<Permutation> = Vec::new();
    search_automorphisms(g, &degree_order, 0, &mut image, &mut used, &mut out, order_cap)?;
    out.sort();
    Ok(out)
}

fn search_automorphisms(
    g: &Graph,
    order: &[usize],
    depth: usize,
    image: &mut Vec<u32>,
    used: &mut u64,
    out: &mut Vec<Permutation>,
    cap: usize,
) -> Result<()> {
    if depth == order.len() {
        if out.len() >= cap {
            return Err(Error::CapExceeded {
                what: "automorphism count",
                cap,
                actual: out.len() + 1,
            });
        }
        out.push(Permutation::from_image(image.clone()).expect("search produces bijections"));
        return Ok(());
    }
    let v = order[depth];
    for w in 0..g.n() {
        if (*used >> w) & 1 == 1 || g.degree(w) != g.degree(v) {
            continue;
        }
        let ok = order[..depth].iter().all(|&u| {
            let iu = image[u] as usize;
            g.has_edge(v, u) == g.has_edge(w, iu)
        });
        if !ok {
            continue;
        }
        image[v] = w as u32;
        *used |= 1 << w;
        search_automorphisms(g, order, depth + 1, image, used, out, cap)?;
        *used &= !(1 << w);
        image[v] = u32::MAX;
    }
    Ok(())
}

/// True iff `Aut(g)` has a single orbit on vertices.
pub fn is_vertex_transitive(g: &Graph) -> Result<bool> {
    if g.n() <= 1 {
        return Ok(true);
    }
    let auts = automorphisms(g)?;
    let mut orbit: u64 = 1;
    for p in &auts {
        orbit |= 1 << p.apply(0);
    }
    Ok(orbit.count_ones() as usize == g.n())
}

/// True iff `Aut(g)` has a single orbit on edges under `h{u,v} = {hu,hv}`.
pub fn is_edge_transitive(g: &Graph) -> Result<bool> {
    let Some(&first) = g.edges().first() else {
        return Ok(true);
    };
    let auts = automorphisms(g)?;
    let mut seen = vec![false; g.edge_count()];
    for p in &auts {
        let (a, b) = p.apply_edge(first);
        let idx = g
            .edge_index(a, b)
            .ok_or_else(|| Error::Invariant("automorphism left the edge set".into()))?;
        seen[idx] = true;
    }
    Ok(seen.iter().all(|&s| s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, complete_bipartite, cycle, independent_set, path, wreath, Graph};
    use proptest::prelude::*;

    /// Independent oracle: count adjacency-preserving bijections by filtering
    /// all n! permutations, generated by Heap's algorithm.
    fn brute_force_automorphism_count(g: &Graph) -> usize {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut count = 0usize;
        fn preserves(g: &Graph, perm: &[usize]) -> bool {
            for u in 0..g.n() {
                for v in (u + 1)..g.n() {
                    if g.has_edge(u, v) != g.has_edge(perm[u], perm[v]) {
                        return false;
                    }
                }
            }
            true
        }
        fn heap(k: usize, perm: &mut Vec<usize>, g: &Graph, count: &mut usize) {
            if k == 1 {
                if preserves(g, perm) {
                    *count += 1;
                }
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, g, count);
                if k % 2 == 0 {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
            }
        }
        heap(n.max(1), &mut perm, g, &mut count);
        if n == 0 {
            1
        } else {
            count
        }
    }

    fn permuted(g: &Graph, perm: &[u32]) -> Graph {
        let edges: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
            .collect();
        Graph::new(g.n(), &edges).unwrap()
    }

    #[test]
    fn canonical_form_invariance_on_named_graphs() {
        let k3 = clique(3).unwrap();
        let rotated = permuted(&k3, &[1, 2, 0]);
        assert_eq!(canonical_form(&k3).unwrap(), canonical_form(&rotated).unwrap());

        let p3 = path(3).unwrap();
        assert_ne!(canonical_form(&p3).unwrap(), canonical_form(&k3).unwrap());
    }

    #[test]
    fn eleven_graphs_on_four_vertices() {
        // All 2^6 labeled graphs on 4 vertices bucket into the known 11
        // isomorphism classes.
        let mut keys = std::collections::BTreeSet::new();
        let base = clique(4).unwrap();
        for mask in 0u64..64 {
            let g = base
                .edge_subgraph(crate::graph::EdgeSubset::new(mask, 6).unwrap())
                .unwrap();
            keys.insert(canonical_form(&g).unwrap());
        }
        assert_eq!(keys.len(), 11);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&clique(3).unwrap()).unwrap().len(), 6);
        let k22 = complete_bipartite(2, 2).unwrap();
        let ours = automorphisms(&k22).unwrap().len();
        assert_eq!(ours, 8);
        assert_eq!(ours, brute_force_automorphism_count(&k22));
        for k in 1..=6 {
            let is_k = independent_set(k).unwrap();
            let expected: usize = (1..=k).product();
            assert_eq!(automorphisms(&is_k).unwrap().len(), expected, "IS_{k}");
        }
    }

    #[test]
    fn automorphism_lists_match_brute_force_on_small_graphs() {
        for g in [
            path(4).unwrap(),
            cycle(5).unwrap(),
            complete_bipartite(2, 3).unwrap(),
            wreath(2, 2).unwrap(),
        ] {
            assert_eq!(
                automorphisms(&g).unwrap().len(),
                brute_force_automorphism_count(&g),
                "{g:?}"
            );
        }
    }

    #[test]
    fn transitivity_tests() {
        assert!(is_edge_transitive(&complete_bipartite(3, 3).unwrap()).unwrap());
        assert!(is_edge_transitive(&wreath(3, 2).unwrap()).unwrap());
        assert!(!is_edge_transitive(&path(4).unwrap()).unwrap());
        assert!(is_vertex_transitive(&cycle(5).unwrap()).unwrap());
        assert!(!is_vertex_transitive(&path(3).unwrap()).unwrap());
        // Complete bipartite graphs are edge-transitive for all small sides.
        for a in 1..=4usize {
            for b in a..=4usize {
                assert!(
                    is_edge_transitive(&complete_bipartite(a, b).unwrap()).unwrap(),
                    "K_{{{a},{b}}}"
                );
            }
        }
    }

    #[test]
    fn wreath_graphs_are_transitive_both_ways() {
        for (p, k) in [(2u64, 2u32), (2, 3), (3, 2)] {
            let w = wreath(p, k).unwrap();
            assert!(is_edge_transitive(&w).unwrap(), "W_{{{p}^{k}}} edges");
            assert!(is_vertex_transitive(&w).unwrap(), "W_{{{p}^{k}}} vertices");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn canonical_form_is_permutation_invariant(
            n in 1usize..=6,
            edge_bits in 0u64..(1 << 15),
            seed in 0u64..1000,
        ) {
            let base = clique(n).unwrap();
            let m = base.edge_count();
            let g = base
                .edge_subgraph(crate::graph::EdgeSubset::new(
                    edge_bits & ((1u64 << m) - 1).max(0), m).unwrap())
                .unwrap();
            // A deterministic pseudo-random permutation from the seed.
            let mut perm: Vec<u32> = (0..n as u32).collect();
            let mut state = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            for i in (1..n).rev() {
                state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                let j = (state >> 33) as usize % (i + 1);
                perm.swap(i, j);
            }
            let h = permuted(&g, &perm);
            prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        }
    }
}
