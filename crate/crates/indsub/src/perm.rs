//! Permutations, breadth-first group closure, orbits on vertices, edges and
//! edge subsets, and the explicit iterated semidirect-product construction
//! of a Sylow p-subgroup of the symmetric group on `p^k` points.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::arith::is_prime;
use crate::caps::{DEFAULT_GROUP_ORDER_CAP, DEFAULT_SYLOW_DEGREE_CAP, MAX_SUBSET_EDGE_CAP};
use crate::graph::Graph;
use crate::{Error, Result};

/// A permutation of `0..n`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u32>,
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm{:?}", self.image)
    }
}

impl std::fmt::Display for Permutation {
    /// Whitespace-separated image array, the on-disk format.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let words: Vec<String> = self.image.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", words.join(" "))
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as u32).collect(),
        }
    }

    /// Validates that `image` is a bijection on `0..image.len()`.
    pub fn from_image(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x as usize >= n || seen[x as usize] {
                return Err(Error::NotAPermutation(format!("{image:?}")));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { image })
    }

    /// Parses the whitespace-separated image format.
    pub fn parse(s: &str) -> Result<Self> {
        let image = s
            .split_whitespace()
            .map(|w| {
                w.parse::<u32>()
                    .map_err(|_| Error::NotAPermutation(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_image(image)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.image[v] as usize
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    /// `self` after `other`: `(self * other)(v) = self(other(v))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            image: other.image.iter().map(|&v| self.image[v as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0u32; self.degree()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x as usize] = i as u32;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Image of an unordered pair, normalized to `(min, max)`.
    #[inline]
    pub fn apply_edge(&self, (u, v): (u32, u32)) -> (u32, u32) {
        let a = self.image[u as usize];
        let b = self.image[v as usize];
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// True if the permutation maps `E(g)` onto `E(g)`.
    pub fn is_automorphism_of(&self, g: &Graph) -> bool {
        if self.degree() != g.n() {
            return false;
        }
        g.edges().iter().all(|&e| {
            let (a, b) = self.apply_edge(e);
            g.has_edge(a as usize, b as usize)
        })
    }

    /// The induced permutation of canonical edge indices of `g`. Fails if
    /// this permutation is not an automorphism of `g`.
    pub fn edge_index_action(&self, g: &Graph) -> Result<Permutation> {
        let mut image = Vec::with_capacity(g.edge_count());
        for &e in g.edges() {
            let (a, b) = self.apply_edge(e);
            let idx = g.edge_index(a, b).ok_or_else(|| {
                Error::NotAPermutation(format!(
                    "permutation does not preserve edges: {e:?} -> ({a},{b})"
                ))
            })?;
            image.push(idx as u32);
        }
        Permutation::from_image(image)
    }
}

/// A permutation group given by generators, with its element list fully
/// materialized by breadth-first closure.
#[derive(Clone, Debug)]
pub struct GeneratedGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl GeneratedGroup {
    /// The trivial group on `n` points.
    pub fn trivial(n: usize) -> Self {
        GeneratedGroup {
            degree: n,
            generators: Vec::new(),
            elements: vec![Permutation::identity(n)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Orbit of a vertex under the materialized group.
    pub fn vertex_orbit(&self, v: usize) -> Result<BTreeSet<usize>> {
        if v >= self.degree {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.degree,
            });
        }
        Ok(self.elements.iter().map(|g| g.apply(v)).collect())
    }

    /// Orbit of an unordered pair under the action `g{u,v} = {g(u),g(v)}`.
    pub fn edge_orbit(&self, (u, v): (u32, u32)) -> Result<BTreeSet<(u32, u32)>> {
        if u as usize >= self.degree || v as usize >= self.degree || u == v {
            return Err(Error::NotAPermutation(format!("invalid pair seed ({u},{v})")));
        }
        Ok(self.elements.iter().map(|g| g.apply_edge((u, v))).collect())
    }

    pub fn is_transitive_on_vertices(&self) -> Result<bool> {
        if self.degree == 0 {
            return Ok(true);
        }
        Ok(self.vertex_orbit(0)?.len() == self.degree)
    }

    /// True if every element maps `E(g)` into itself.
    pub fn acts_on_edges_of(&self, g: &Graph) -> bool {
        self.elements.iter().all(|p| p.is_automorphism_of(g))
    }

    /// True if the orbit of one edge of `g` is all of `E(g)` (assumes the
    /// group acts on `E(g)` at all; use [`Self::acts_on_edges_of`] first).
    pub fn is_transitive_on_edges_of(&self, g: &Graph) -> Result<bool> {
        match g.edges().first() {
            None => Ok(true),
            Some(&e) => Ok(self.edge_orbit(e)?.len() == g.edge_count()),
        }
    }

    /// Elements converted to permutations of the edge indices of `g`.
    pub fn edge_index_actions(&self, g: &Graph) -> Result<Vec<Permutation>> {
        self.elements.iter().map(|p| p.edge_index_action(g)).collect()
    }
}

/// Breadth-first closure of a generating set, failing once more than `cap`
/// elements have been produced. Generators must share a degree.
pub fn closure(generators: &[Permutation], cap: usize) -> Result<GeneratedGroup> {
    let degree = match generators.first() {
        None => {
            return Err(Error::NotAPermutation(
                "closure needs at least one generator (use GeneratedGroup::trivial)".into(),
            ))
        }
        Some(g) => g.degree(),
    };
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }
    }
    let identity = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut order: Vec<Permutation> = Vec::new();
    let mut queue: VecDeque<Permutation> = VecDeque::new();
    seen.insert(identity.clone());
    order.push(identity.clone());
    queue.push_back(identity);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = g.compose(&p)?;
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        cap,
                        actual: seen.len(),
                    });
                }
                order.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(GeneratedGroup {
        degree,
        generators: generators.to_vec(),
        elements: order,
    })
}

/// Closure with the default element cap.
pub fn closure_default(generators: &[Permutation]) -> Result<GeneratedGroup> {
    closure(generators, DEFAULT_GROUP_ORDER_CAP)
}

/// A small generating subset of an explicit element list: elements are
/// added greedily while they enlarge the generated subgroup. Orbits under
/// the result equal orbits under the full list; the list shrinks from group
/// order to roughly its 2-logarithm, which speeds up flood fills.
pub fn generating_subset(elements: &[Permutation]) -> Result<Vec<Permutation>> {
    let Some(first) = elements.first() else {
        return Ok(Vec::new());
    };
    let degree = first.degree();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut known: HashSet<Permutation> = HashSet::new();
    known.insert(Permutation::identity(degree));
    for e in elements {
        if !known.contains(e) {
            gens.push(e.clone());
            known = closure(&gens, DEFAULT_GROUP_ORDER_CAP)?
                .elements()
                .iter()
                .cloned()
                .collect();
        }
    }
    Ok(gens)
}

/// Generators of the Sylow p-subgroup of the symmetric group on `0..p^k`,
/// built recursively: generators of the group for `p^{k-1}` embedded in each
/// of the `p` blocks of size `p^{k-1}`, plus the cyclic block shift
/// `j -> j + p^{k-1} (mod p^k)`. The base case `k = 1` is the single cycle
/// `0 -> 1 -> ... -> p-1 -> 0`. The generated group has order `p^{e(k)}`
/// with `e(k) = p^{k-1} + ... + p + 1`.
pub fn sylow_generators(p: u64, k: u32) -> Result<Vec<Permutation>> {
    sylow_generators_with_cap(p, k, DEFAULT_SYLOW_DEGREE_CAP)
}

pub fn sylow_generators_with_cap(p: u64, k: u32, degree_cap: usize) -> Result<Vec<Permutation>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Unsupported("sylow construction needs k >= 1".into()));
    }
    let degree = (p as u128).pow(k);
    if degree > degree_cap as u128 {
        return Err(Error::CapExceeded {
            what: "sylow degree p^k",
            cap: degree_cap,
            actual: degree.min(usize::MAX as u128) as usize,
        });
    }
    let degree = degree as usize;
    if k == 1 {
        let image: Vec<u32> = (0..degree as u32).map(|j| (j + 1) % degree as u32).collect();
        return Ok(vec![Permutation { image }]);
    }
    let inner = sylow_generators_with_cap(p, k - 1, degree_cap)?;
    let block = degree / p as usize; // p^{k-1}
    let mut gens = Vec::new();
    for b in 0..p as usize {
        let offset = b * block;
        for g in &inner {
            let mut image: Vec<u32> = (0..degree as u32).collect();
            for j in 0..block {
                image[offset + j] = (offset + g.apply(j)) as u32;
            }
            gens.push(Permutation { image });
        }
    }
    let shift: Vec<u32> = (0..degree as u32)
        .map(|j| ((j as usize + block) % degree) as u32)
        .collect();
    gens.push(Permutation { image: shift });
    Ok(gens)
}

/// The exponent `e(k) = p^{k-1} + ... + p + 1 = (p^k - 1)/(p - 1)` such that
/// the group generated by [`sylow_generators`] has order `p^{e(k)}`.
pub fn sylow_exponent(p: u64, k: u32) -> u64 {
    (0..k).map(|i| p.pow(i)).sum()
}

/// Orbit of one subset mask under permutations of the edge indices.
pub fn subset_orbit(edge_perms: &[Permutation], width: usize, seed: u64) -> Result<BTreeSet<u64>> {
    if width > MAX_SUBSET_EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "subset orbit width",
            cap: MAX_SUBSET_EDGE_CAP,
            actual: width,
        });
    }
    if width < 64 && seed >> width != 0 {
        return Err(Error::MaskWidthMismatch {
            width,
            edges: 64 - seed.leading_zeros() as usize,
        });
    }
    let mut orbit = BTreeSet::new();
    let mut stack = vec![seed];
    orbit.insert(seed);
    while let Some(m) = stack.pop() {
        for p in edge_perms {
            let im = apply_perm_to_mask(p, m);
            if orbit.insert(im) {
                stack.push(im);
            }
        }
    }
    Ok(orbit)
}

#[inline]
fn apply_perm_to_mask(p: &Permutation, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        out |= 1 << p.apply(i);
    }
    out
}

/// One representative per orbit of the group action on all `2^m` subsets of
/// edge indices, each with its exact orbit size. The representatives are the
/// minimal masks, in ascending order; orbit sizes sum to `2^m`.
///
/// Flood-filling with generators alone already reaches the whole orbit of
/// the generated group, so callers may pass a generating set or a full
/// element list.
pub fn subset_orbit_reps(group: &GeneratedGroup, m: usize) -> Result<Vec<(u64, u64)>> {
    if group.degree() != m {
        return Err(Error::DegreeMismatch(group.degree(), m));
    }
    let gens: &[Permutation] = if group.generators().is_empty() {
        group.elements()
    } else {
        group.generators()
    };
    subset_orbit_reps_of(gens, m)
}

/// [`subset_orbit_reps`] for a raw list of edge-index permutations.
///
/// Uses an explicit visited bitset over the `2^m` masks, so `m` is capped.
pub fn subset_orbit_reps_of(gens: &[Permutation], m: usize) -> Result<Vec<(u64, u64)>> {
    if m > MAX_SUBSET_EDGE_CAP.min(24) {
        return Err(Error::CapExceeded {
            what: "subset orbit enumeration width",
            cap: 24,
            actual: m,
        });
    }
    for g in gens {
        if g.degree() != m {
            return Err(Error::DegreeMismatch(m, g.degree()));
        }
    }
    let total: u64 = 1 << m;
    let mut visited = vec![0u64; ((total as usize) + 63) / 64];
    let mut reps = Vec::new();
    let mut stack: Vec<u64> = Vec::new();
    for mask in 0..total {
        if visited[(mask >> 6) as usize] >> (mask & 63) & 1 == 1 {
            continue;
        }
        // New orbit; flood fill from the (minimal) representative.
        let mut size = 0u64;
        visited[(mask >> 6) as usize] |= 1 << (mask & 63);
        stack.push(mask);
        while let Some(s) = stack.pop() {
            size += 1;
            for p in gens {
                let im = apply_perm_to_mask(p, s);
                let w = &mut visited[(im >> 6) as usize];
                if *w >> (im & 63) & 1 == 0 {
                    *w |= 1 << (im & 63);
                    stack.push(im);
                }
            }
        }
        reps.push((mask, size));
    }
    Ok(reps)
}

/// Smallest power-of-p decomposition bookkepping for orbit sizes: true if
/// every orbit size divides the group order.
pub fn orbit_sizes_divide_order(group: &GeneratedGroup, reps: &[(u64, u64)]) -> bool {
    reps.iter().all(|&(_, size)| group.order() as u64 % size == 0)
}
