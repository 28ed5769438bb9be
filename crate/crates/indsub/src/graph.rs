//! Simple undirected graphs on vertex set `0..n`, with a fixed canonical
//! edge ordering, bitset adjacency rows, standard families and the two
//! subgraph-forming operations (edge subsets and induced subgraphs).

use crate::arith::is_prime;
use crate::caps::{MAX_SUBSET_EDGE_CAP, MAX_VERTICES};
use crate::{Error, Result};

/// A simple undirected graph.
///
/// Edges are stored as pairs `(u, v)` with `u < v`, sorted lexicographically;
/// the position of a pair in this list is its *canonical edge index*, which
/// [`EdgeSubset`] masks refer to. Adjacency is mirrored into one 64-bit row
/// per vertex, which caps graphs at [`MAX_VERTICES`] vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph from an edge list, normalizing pair order and sorting.
    ///
    /// Rejects loops, duplicate pairs and out-of-range endpoints, naming the
    /// offending pair.
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::CapExceeded {
                what: "graph vertices",
                cap: MAX_VERTICES,
                actual: n,
            });
        }
        let mut list: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::LoopEdge(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v as usize >= n {
                return Err(Error::EndpointOutOfRange { endpoint: v, n });
            }
            list.push((u, v));
        }
        list.sort_unstable();
        for w in list.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        Ok(Self::from_sorted_edges(n, list))
    }

    /// Internal constructor for edge lists already sorted, deduplicated and
    /// range-checked.
    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut adj = vec![0u64; n];
        for &(u, v) in &edges {
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
        }
        Graph { n, edges, adj }
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order; index in this slice = canonical edge index.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Adjacency row of `v` as a bitset.
    #[inline]
    pub fn adj_row(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.adj[u] >> v) & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Canonical index of the edge `{u,v}`, if present.
    pub fn edge_index(&self, u: u32, v: u32) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    /// The edge-subgraph `(V, S)`: same vertex set, edges restricted to the
    /// selected subset. Isolated vertices are retained.
    pub fn edge_subgraph(&self, s: EdgeSubset) -> Result<Graph> {
        if s.width() != self.edges.len() {
            return Err(Error::MaskWidthMismatch {
                width: s.width(),
                edges: self.edges.len(),
            });
        }
        let mut g = Graph {
            n: self.n,
            edges: Vec::with_capacity(s.size()),
            adj: vec![0; self.n],
        };
        g.assign_edge_subgraph(self, s.mask());
        Ok(g)
    }

    /// In-place variant of [`Graph::edge_subgraph`] used by subset-enumeration
    /// hot loops; reuses this graph's allocations. `mask` must fit `base`.
    pub(crate) fn assign_edge_subgraph(&mut self, base: &Graph, mask: u64) {
        self.n = base.n;
        self.edges.clear();
        self.adj.clear();
        self.adj.resize(base.n, 0);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let (u, v) = base.edges[i];
            self.edges.push((u, v));
            self.adj[u as usize] |= 1 << v;
            self.adj[v as usize] |= 1 << u;
        }
    }

    /// The induced subgraph on the given vertices, relabeled `0..k` in the
    /// order of the (sorted, deduplicated) vertex set.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut keep: u64 = 0;
        for &v in vertices {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            keep |= 1 << v;
        }
        Ok(self.induced_by_mask(keep))
    }

    /// Induced subgraph on the vertices selected by a bitmask.
    pub(crate) fn induced_by_mask(&self, keep: u64) -> Graph {
        debug_assert_eq!(keep >> self.n, 0, "mask selects nonexistent vertices");
        let mut relabel = [0u32; MAX_VERTICES];
        let mut k = 0usize;
        for v in 0..self.n {
            if (keep >> v) & 1 == 1 {
                relabel[v] = k as u32;
                k += 1;
            }
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if (keep >> u) & 1 == 1 && (keep >> v) & 1 == 1 {
                edges.push((relabel[u as usize], relabel[v as usize]));
            }
        }
        // Relabeling preserves order, so the filtered list is still sorted.
        Graph::from_sorted_edges(k, edges)
    }

    /// True if the graph has a single connected component. Isolated vertices
    /// count; the empty graph and single vertices are connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen: u64 = 1;
        let mut frontier: u64 = 1;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == self.n
    }

    /// True if the vertices can be 2-colored with no monochromatic edge.
    pub fn is_bipartite(&self) -> bool {
        let mut color = [2u8; MAX_VERTICES];
        for start in 0..self.n {
            if color[start] != 2 {
                continue;
            }
            color[start] = 0;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let mut row = self.adj[v];
                while row != 0 {
                    let w = row.trailing_zeros() as usize;
                    row &= row - 1;
                    if color[w] == 2 {
                        color[w] = 1 - color[v];
                        stack.push(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True if every vertex has even degree.
    pub fn all_degrees_even(&self) -> bool {
        self.adj.iter().all(|row| row.count_ones() % 2 == 0)
    }
}

/// A subset of the edges of some pattern graph, as a bitmask over the
/// pattern's canonical edge ordering. Bit `i` set means edge `i` is present.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EdgeSubset {
    mask: u64,
    width: u8,
}

impl EdgeSubset {
    pub fn new(mask: u64, width: usize) -> Result<Self> {
        if width > MAX_SUBSET_EDGE_CAP {
            return Err(Error::CapExceeded {
                what: "edge subset width",
                cap: MAX_SUBSET_EDGE_CAP,
                actual: width,
            });
        }
        if width < 64 && mask >> width != 0 {
            return Err(Error::MaskWidthMismatch {
                width,
                edges: 64 - mask.leading_zeros() as usize,
            });
        }
        Ok(EdgeSubset {
            mask,
            width: width as u8,
        })
    }

    /// The empty subset over `width` edges.
    pub fn empty(width: usize) -> Result<Self> {
        Self::new(0, width)
    }

    /// The full edge set over `width` edges.
    pub fn full(width: usize) -> Result<Self> {
        if width > MAX_SUBSET_EDGE_CAP {
            return Err(Error::CapExceeded {
                what: "edge subset width",
                cap: MAX_SUBSET_EDGE_CAP,
                actual: width,
            });
        }
        Ok(EdgeSubset {
            mask: if width == 0 { 0 } else { (1u64 << width) - 1 },
            width: width as u8,
        })
    }

    /// The full edge set of a specific graph.
    pub fn full_of(g: &Graph) -> Result<Self> {
        Self::full(g.edge_count())
    }

    /// The empty edge set of a specific graph.
    pub fn empty_of(g: &Graph) -> Result<Self> {
        Self::empty(g.edge_count())
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Number of selected edges.
    #[inline]
    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.width() && (self.mask >> i) & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(&self, other: &EdgeSubset) -> bool {
        self.width == other.width && self.mask & !other.mask == 0
    }

    /// All `2^width` subsets in ascending mask order.
    pub fn all(width: usize) -> impl Iterator<Item = EdgeSubset> {
        assert!(width <= MAX_SUBSET_EDGE_CAP);
        (0..(1u64 << width)).map(move |mask| EdgeSubset {
            mask,
            width: width as u8,
        })
    }
}

/// Standard graph families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphFamily {
    /// `k` isolated vertices.
    IndependentSet(usize),
    /// Complete graph on `k` vertices.
    Clique(usize),
    /// Cycle on `k >= 3` vertices.
    Cycle(usize),
    /// Complete bipartite graph with sides `a` and `b`.
    CompleteBipartite(usize, usize),
    /// Wreath graph on `p^k` vertices: `p` cyclically arranged blocks of
    /// `p^{k-1}` vertices with all edges between consecutive blocks.
    Wreath(u64, u32),
}

impl GraphFamily {
    pub fn build(self) -> Result<Graph> {
        match self {
            GraphFamily::IndependentSet(k) => independent_set(k),
            GraphFamily::Clique(k) => clique(k),
            GraphFamily::Cycle(k) => cycle(k),
            GraphFamily::CompleteBipartite(a, b) => complete_bipartite(a, b),
            GraphFamily::Wreath(p, k) => wreath(p, k),
        }
    }
}

pub fn independent_set(k: usize) -> Result<Graph> {
    Graph::new(k, &[])
}

pub fn clique(k: usize) -> Result<Graph> {
    let mut edges = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for u in 0..k as u32 {
        for v in (u + 1)..k as u32 {
            edges.push((u, v));
        }
    }
    Graph::new(k, &edges)
}

pub fn path(k: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..k as u32).map(|v| (v - 1, v)).collect();
    Graph::new(k, &edges)
}

pub fn cycle(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::Unsupported(format!("cycle needs >= 3 vertices, got {k}")));
    }
    let mut edges: Vec<_> = (1..k as u32).map(|v| (v - 1, v)).collect();
    edges.push((0, k as u32 - 1));
    Graph::new(k, &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    let mut edges = Vec::with_capacity(a * b);
    for u in 0..a as u32 {
        for v in 0..b as u32 {
            edges.push((u, a as u32 + v));
        }
    }
    Graph::new(a + b, &edges)
}

/// Wreath graph on `p^k` vertices for prime `p`. Vertex `v` lies in block
/// `v / p^{k-1}`; blocks are joined cyclically, and `k = 1` gives the
/// `p`-cycle (as a graph: for `p = 2` a single edge).
pub fn wreath(p: u64, k: u32) -> Result<Graph> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Unsupported("wreath needs k >= 1".into()));
    }
    let total = (p as u128).pow(k);
    if total > MAX_VERTICES as u128 {
        return Err(Error::CapExceeded {
            what: "wreath vertices",
            cap: MAX_VERTICES,
            actual: total.min(usize::MAX as u128) as usize,
        });
    }
    let n = total as usize;
    let block = n / p as usize; // p^{k-1}
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            let bu = u as usize / block;
            let bv = v as usize / block;
            let d = (bv + p as usize - bu) % p as usize;
            if d == 1 || d == p as usize - 1 {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_normalizes_and_validates() {
        let g = Graph::new(3, &[(2, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.edge_index(2, 0), Some(1));

        assert!(matches!(Graph::new(2, &[(0, 0)]), Err(Error::LoopEdge(0))));
        assert!(matches!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(Error::EndpointOutOfRange { endpoint: 2, n: 2 })
        ));
    }

    #[test]
    fn independent_set_has_no_edges() {
        let g = independent_set(4).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 0));
    }

    #[test]
    fn edge_subgraph_keeps_vertices() {
        let k3 = clique(3).unwrap();
        let empty = k3.edge_subgraph(EdgeSubset::empty(3).unwrap()).unwrap();
        assert_eq!((empty.n(), empty.edge_count()), (3, 0));
        let full = k3.edge_subgraph(EdgeSubset::full(3).unwrap()).unwrap();
        assert_eq!(full, k3);

        let k22 = complete_bipartite(2, 2).unwrap();
        let one = k22.edge_subgraph(EdgeSubset::new(0b0001, 4).unwrap()).unwrap();
        assert_eq!((one.n(), one.edge_count()), (4, 1));
        assert!(matches!(
            k3.edge_subgraph(EdgeSubset::empty(2).unwrap()),
            Err(Error::MaskWidthMismatch { .. })
        ));
    }

    #[test]
    fn induced_subgraphs() {
        let k3 = clique(3).unwrap();
        let k2 = k3.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!((k2.n(), k2.edge_count()), (2, 1));
        let none = k3.induced_subgraph(&[]).unwrap();
        assert_eq!(none.n(), 0);
        let c4 = cycle(4).unwrap();
        let is2 = c4.induced_subgraph(&[0, 2]).unwrap();
        assert_eq!((is2.n(), is2.edge_count()), (2, 0));
        assert!(matches!(
            k3.induced_subgraph(&[5]),
            Err(Error::VertexOutOfRange { vertex: 5, n: 3 })
        ));
    }

    #[test]
    fn wreath_family() {
        // k = 1 gives the p-cycle.
        let w3 = wreath(3, 1).unwrap();
        let c3 = cycle(3).unwrap();
        assert_eq!(w3, c3);

        let w9 = wreath(3, 2).unwrap();
        assert_eq!((w9.n(), w9.edge_count()), (9, 27));

        // p = 2 halves the edge count: consecutive-block pairs coincide.
        let w4 = wreath(2, 2).unwrap();
        assert_eq!((w4.n(), w4.edge_count()), (4, 4));

        assert!(matches!(wreath(4, 1), Err(Error::NotPrime(4))));
    }

    #[test]
    fn wreath_edge_counts_match_formula() {
        for (p, k) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let w = wreath(p, k).unwrap();
            let expected = if p == 2 {
                2u128.pow(2 * k - 2)
            } else {
                (p as u128).pow(2 * k - 1)
            };
            assert_eq!(w.edge_count() as u128, expected, "W_{{{p}^{k}}}");
        }
    }

    #[test]
    fn connectivity_and_bipartiteness() {
        assert!(clique(1).unwrap().is_connected());
        assert!(Graph::empty(0).unwrap().is_connected());
        assert!(!independent_set(2).unwrap().is_connected());
        assert!(cycle(5).unwrap().is_connected());
        assert!(!cycle(5).unwrap().is_bipartite());
        assert!(cycle(6).unwrap().is_bipartite());
        assert!(complete_bipartite(2, 4).unwrap().is_bipartite());
        assert!(independent_set(3).unwrap().is_bipartite());
        assert!(!clique(3).unwrap().is_bipartite());
    }

    #[test]
    fn subset_iteration_order() {
        let masks: Vec<u64> = EdgeSubset::all(2).map(|s| s.mask()).collect();
        assert_eq!(masks, vec![0, 1, 2, 3]);
        assert!(EdgeSubset::new(0b100, 2).is_err());
    }
}
