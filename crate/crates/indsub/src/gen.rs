//! Seeded deterministic generators for randomized checks. All randomness in
//! the crate flows through [`ChaCha8Rng`] instances derived from explicit
//! seeds, so identical seeds give identical instances on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::ColoredGraph;
use crate::graph::Graph;

/// A generator for the given top-level seed and stream label. Distinct
/// labels give independent streams of the same seed.
pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    // Simple splittable derivation: fold the label into the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Erdos-Renyi graph: each pair independently an edge with probability `p`.
pub fn gnp<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

/// Random graph with at most `max_edges` edges and 2..=max_n vertices.
pub fn small_pattern<R: Rng>(rng: &mut R, max_n: usize, max_edges: usize) -> Graph {
    loop {
        let n = rng.random_range(2..=max_n);
        let g = gnp(rng, n, 0.5);
        if g.edge_count() <= max_edges && g.edge_count() >= 1 {
            return g;
        }
    }
}

/// Random `pattern`-colored host on `n_host` vertices: colors assigned
/// uniformly (surjectively if requested and possible), then each
/// color-compatible pair becomes an edge with probability `density`.
pub fn colored_host<R: Rng>(
    rng: &mut R,
    pattern: &Graph,
    n_host: usize,
    density: f64,
    surjective: bool,
) -> ColoredGraph {
    let k = pattern.n();
    assert!(k > 0, "pattern must have vertices");
    let mut coloring: Vec<u32> = Vec::with_capacity(n_host);
    for v in 0..n_host {
        if surjective && v < k {
            coloring.push(v as u32);
        } else {
            coloring.push(rng.random_range(0..k) as u32);
        }
    }
    let mut edges = Vec::new();
    for u in 0..n_host as u32 {
        for v in (u + 1)..n_host as u32 {
            let cu = coloring[u as usize] as usize;
            let cv = coloring[v as usize] as usize;
            if pattern.has_edge(cu, cv) && rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    let host = Graph::new(n_host, &edges).expect("generated edges are valid");
    ColoredGraph::new(host, pattern.clone(), coloring).expect("construction respects the coloring")
}

/// A graph on `n` vertices with a clique of size `k` planted on random
/// vertices over G(n, density) noise.
pub fn planted_clique<R: Rng>(rng: &mut R, n: usize, k: usize, density: f64) -> Graph {
    assert!(k <= n);
    let noise = gnp(rng, n, density);
    let mut members: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        members.swap(i, j);
    }
    members.truncate(k);
    let mut edges: Vec<(u32, u32)> = noise.edges().to_vec();
    for i in 0..k {
        for j in (i + 1)..k {
            let (a, b) = (members[i].min(members[j]), members[i].max(members[j]));
            if !noise.has_edge(a as usize, b as usize) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_sub, CountMode};
    use crate::graph::clique;

    #[test]
    fn determinism() {
        let g1 = gnp(&mut rng_for(42, "x"), 7, 0.5);
        let g2 = gnp(&mut rng_for(42, "x"), 7, 0.5);
        let g3 = gnp(&mut rng_for(42, "y"), 7, 0.5);
        assert_eq!(g1, g2);
        assert_ne!(g1, g3, "independent streams should differ here");
    }

    #[test]
    fn planted_clique_contains_clique() {
        for seed in 0..20 {
            let g = planted_clique(&mut rng_for(seed, "plant"), 7, 3, 0.5);
            let triangles = count_sub(&clique(3).unwrap(), &g, CountMode::Exact).unwrap();
            assert!(!triangles.is_zero(), "seed {seed}");
        }
    }

    #[test]
    fn colored_host_is_valid_and_surjective() {
        let pattern = crate::graph::complete_bipartite(2, 2).unwrap();
        let cg = colored_host(&mut rng_for(1, "host"), &pattern, 8, 0.7, true);
        assert!(cg.is_surjective());
        assert_eq!(cg.host().n(), 8);
    }
}
