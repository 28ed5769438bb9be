//! Exact brute-force counters: homomorphisms, embeddings, strong embeddings,
//! subgraphs and induced subgraphs, their color-prescribed variants, and
//! property-restricted induced-subgraph counts. Every counter works in exact
//! arbitrary-precision arithmetic or eagerly reduced mod-p arithmetic.
//!
//! These counters double as the simulated oracles of the reduction
//! pipelines, so they are written for correctness first and a predictable
//! memory profile second; the only deliberate optimization is the lazy
//! per-(property, k) truth table used by [`count_indsub_prop`].

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::binomial;
use crate::caps::{DEFAULT_ENUM_BUDGET, DEFAULT_PATTERN_VERTEX_CAP};
use crate::graph::{EdgeSubset, Graph};
use crate::properties::Property;
use crate::{Error, Result};

/// Arithmetic mode for a counter: exact integers or residues mod a prime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CountMode {
    Exact,
    Mod(u64),
}

impl CountMode {
    pub fn modulus(&self) -> Option<u64> {
        match self {
            CountMode::Exact => None,
            CountMode::Mod(p) => Some(*p),
        }
    }
}

/// The result of a counting operation, tagged with its arithmetic mode.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CountResult {
    Exact(BigUint),
    Residue { value: u64, modulus: u64 },
}

impl CountResult {
    pub fn exact_u64(v: u64) -> Self {
        CountResult::Exact(BigUint::from(v))
    }

    pub fn zero(mode: CountMode) -> Self {
        match mode {
            CountMode::Exact => CountResult::Exact(BigUint::zero()),
            CountMode::Mod(p) => CountResult::Residue { value: 0, modulus: p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CountResult::Exact(v) => v.is_zero(),
            CountResult::Residue { value, .. } => *value == 0,
        }
    }

    /// The exact value, if this is an exact result.
    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            CountResult::Exact(v) => Some(v),
            CountResult::Residue { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<(u64, u64)> {
        match self {
            CountResult::Exact(_) => None,
            CountResult::Residue { value, modulus } => Some((*value, *modulus)),
        }
    }

    /// Reduces an exact result mod p; residues must already match `p`.
    pub fn residue_mod(&self, p: u64) -> u64 {
        match self {
            CountResult::Exact(v) => (v % BigUint::from(p))
                .iter_u64_digits()
                .next()
                .unwrap_or(0),
            CountResult::Residue { value, modulus } => {
                debug_assert_eq!(*modulus, p);
                *value % p
            }
        }
    }

    /// Decimal rendering (the value for exact mode, the residue otherwise).
    pub fn to_decimal(&self) -> String {
        match self {
            CountResult::Exact(v) => v.to_string(),
            CountResult::Residue { value, .. } => value.to_string(),
        }
    }
}

/// Internal accumulator implementing "reduce eagerly" in mod-p mode.
#[derive(Clone, Debug)]
pub(crate) enum Accum {
    Exact(BigUint),
    Mod { value: u64, modulus: u64 },
}

impl Accum {
    pub(crate) fn zero(mode: CountMode) -> Self {
        match mode {
            CountMode::Exact => Accum::Exact(BigUint::zero()),
            CountMode::Mod(p) => Accum::Mod { value: 0, modulus: p },
        }
    }

    pub(crate) fn one(mode: CountMode) -> Self {
        match mode {
            CountMode::Exact => Accum::Exact(BigUint::one()),
            CountMode::Mod(p) => Accum::Mod { value: 1 % p, modulus: p },
        }
    }

    #[inline]
    pub(crate) fn add_one(&mut self) {
        match self {
            Accum::Exact(v) => *v += 1u32,
            Accum::Mod { value, modulus } => *value = (*value + 1) % *modulus,
        }
    }

    pub(crate) fn mul(&mut self, other: &Accum) {
        match (self, other) {
            (Accum::Exact(a), Accum::Exact(b)) => *a *= b,
            (Accum::Mod { value, modulus }, Accum::Mod { value: b, .. }) => {
                *value = (*value as u128 * *b as u128 % *modulus as u128) as u64
            }
            _ => unreachable!("mixed accumulator modes"),
        }
    }

    pub(crate) fn into_result(self) -> CountResult {
        match self {
            Accum::Exact(v) => CountResult::Exact(v),
            Accum::Mod { value, modulus } => CountResult::Residue { value, modulus },
        }
    }
}

/// A host graph together with a homomorphism onto a pattern graph.
///
/// The coloring `c` assigns a pattern vertex to every host vertex, and every
/// host edge must map to a pattern edge; color classes are the preimages.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    host: Graph,
    pattern: Graph,
    coloring: Vec<u32>,
    classes: Vec<Vec<u32>>,
}

impl ColoredGraph {
    pub fn new(host: Graph, pattern: Graph, coloring: Vec<u32>) -> Result<Self> {
        if coloring.len() != host.n() {
            return Err(Error::Invariant(format!(
                "coloring has {} entries for {} host vertices",
                coloring.len(),
                host.n()
            )));
        }
        for (v, &c) in coloring.iter().enumerate() {
            if c as usize >= pattern.n() {
                return Err(Error::VertexOutOfRange {
                    vertex: c as usize,
                    n: pattern.n(),
                });
            }
            let _ = v;
        }
        for &(u, v) in host.edges() {
            let cu = coloring[u as usize];
            let cv = coloring[v as usize];
            if cu == cv || !pattern.has_edge(cu as usize, cv as usize) {
                return Err(Error::NotAColoring { u, v, cu, cv });
            }
        }
        let mut classes = vec![Vec::new(); pattern.n()];
        for (v, &c) in coloring.iter().enumerate() {
            classes[c as usize].push(v as u32);
        }
        Ok(ColoredGraph {
            host,
            pattern,
            coloring,
            classes,
        })
    }

    /// The edge-subgraph `H[S]` of the pattern, colored by the identity.
    pub fn identity_colored(pattern: &Graph, s: EdgeSubset) -> Result<Self> {
        let host = pattern.edge_subgraph(s)?;
        let coloring = (0..pattern.n() as u32).collect();
        ColoredGraph::new(host, pattern.clone(), coloring)
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn coloring(&self) -> &[u32] {
        &self.coloring
    }

    /// Host vertices colored with pattern vertex `v`.
    pub fn class(&self, v: usize) -> &[u32] {
        &self.classes[v]
    }

    pub fn is_surjective(&self) -> bool {
        self.classes.iter().all(|c| !c.is_empty())
    }
}

fn check_pattern_cap(h: &Graph) -> Result<()> {
    if h.n() > DEFAULT_PATTERN_VERTEX_CAP {
        return Err(Error::CapExceeded {
            what: "pattern vertices",
            cap: DEFAULT_PATTERN_VERTEX_CAP,
            actual: h.n(),
        });
    }
    Ok(())
}

/// Connected components of a pattern as vertex lists (isolated vertices are
/// their own components). Hom counts factorize over them.
fn components(h: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; h.n()];
    let mut comps = Vec::new();
    for s in 0..h.n() {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let mut row = h.adj_row(v);
            while row != 0 {
                let w = row.trailing_zeros() as usize;
                row &= row - 1;
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// Number of homomorphisms from `h` to `g` (adjacency-preserving maps).
///
/// Counts factorize over the connected components of `h`; within a
/// component the search assigns images in descending-degree order with
/// adjacency pruning against already-placed neighbors.
pub fn count_hom(h: &Graph, g: &Graph, mode: CountMode) -> Result<CountResult> {
    check_pattern_cap(h)?;
    let mut total = Accum::one(mode);
    for comp in components(h) {
        let mut order = comp.clone();
        order.sort_by_key(|&v| std::cmp::Reverse(h.degree(v)));
        let mut acc = Accum::zero(mode);
        let mut image = vec![usize::MAX; h.n()];
        hom_backtrack(h, g, &order, 0, &mut image, &mut acc);
        total.mul(&acc);
    }
    Ok(total.into_result())
}

fn hom_backtrack(
    h: &Graph,
    g: &Graph,
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    acc: &mut Accum,
) {
    if depth == order.len() {
        acc.add_one();
        return;
    }
    let v = order[depth];
    // Intersect the adjacency rows of the images of placed neighbors.
    let mut allowed = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    for &u in &order[..depth] {
        if h.has_edge(v, u) {
            allowed &= g.adj_row(image[u]);
        }
    }
    let mut m = allowed;
    while m != 0 {
        let w = m.trailing_zeros() as usize;
        m &= m - 1;
        image[v] = w;
        hom_backtrack(h, g, order, depth + 1, image, acc);
    }
    image[v] = usize::MAX;
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EmbKind {
    Plain,
    Strong,
}

/// Number of embeddings (injective homomorphisms) from `h` to `g`.
pub fn count_emb(h: &Graph, g: &Graph, mode: CountMode) -> Result<CountResult> {
    check_pattern_cap(h)?;
    let mut acc = Accum::zero(mode);
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(h.degree(v)));
    let mut image = vec![usize::MAX; h.n()];
    emb_backtrack(h, g, &order, 0, &mut image, 0, EmbKind::Plain, &mut acc);
    Ok(acc.into_result())
}

/// Number of strong embeddings (embeddings that also reflect non-edges).
pub fn count_strong_emb(h: &Graph, g: &Graph, mode: CountMode) -> Result<CountResult> {
    check_pattern_cap(h)?;
    let mut acc = Accum::zero(mode);
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(h.degree(v)));
    let mut image = vec![usize::MAX; h.n()];
    emb_backtrack(h, g, &order, 0, &mut image, 0, EmbKind::Strong, &mut acc);
    Ok(acc.into_result())
}

#[allow(clippy::too_many_arguments)]
fn emb_backtrack(
    h: &Graph,
    g: &Graph,
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: u64,
    kind: EmbKind,
    acc: &mut Accum,
) {
    if depth == order.len() {
        acc.add_one();
        return;
    }
    let v = order[depth];
    for w in 0..g.n() {
        if (used >> w) & 1 == 1 {
            continue;
        }
        let ok = order[..depth].iter().all(|&u| {
            let adj_h = h.has_edge(v, u);
            let adj_g = g.has_edge(w, image[u]);
            match kind {
                EmbKind::Plain => !adj_h || adj_g,
                EmbKind::Strong => adj_h == adj_g,
            }
        });
        if !ok {
            continue;
        }
        image[v] = w;
        emb_backtrack(h, g, order, depth + 1, image, used | 1 << w, kind, acc);
        image[v] = usize::MAX;
    }
}

/// Exact division by |Aut(h)|. A nonzero remainder means the embedding
/// counter is broken, so it is reported as an invariant breach.
fn divide_by_automorphisms(count: CountResult, h: &Graph) -> Result<BigUint> {
    let aut = crate::canon::automorphisms(h)?.len() as u64;
    let CountResult::Exact(v) = count else {
        return Err(Error::Invariant("automorphism division needs an exact count".into()));
    };
    let (q, r) = num_integer::Integer::div_rem(&v, &BigUint::from(aut));
    if !r.is_zero() {
        return Err(Error::Invariant(format!(
            "embedding count {v} is not divisible by |Aut| = {aut}"
        )));
    }
    Ok(q)
}

/// Number of subgraphs of `g` isomorphic to `h`: `Emb / |Aut(h)|`.
///
/// The quotient is computed exactly even in mod-p mode (division by |Aut|
/// in Z_p is not well-defined when p divides |Aut|) and reduced afterwards.
pub fn count_sub(h: &Graph, g: &Graph, mode: CountMode) -> Result<CountResult> {
    let emb = count_emb(h, g, CountMode::Exact)?;
    let q = divide_by_automorphisms(emb, h)?;
    Ok(apply_mode(CountResult::Exact(q), mode))
}

/// Number of induced subgraphs of `g` isomorphic to `h`: `StrEmb / |Aut(h)|`.
pub fn count_indsub(h: &Graph, g: &Graph, mode: CountMode) -> Result<CountResult> {
    let semb = count_strong_emb(h, g, CountMode::Exact)?;
    let q = divide_by_automorphisms(semb, h)?;
    Ok(apply_mode(CountResult::Exact(q), mode))
}

fn apply_mode(exact: CountResult, mode: CountMode) -> CountResult {
    match mode {
        CountMode::Exact => exact,
        CountMode::Mod(p) => CountResult::Residue {
            value: exact.residue_mod(p),
            modulus: p,
        },
    }
}

/// Number of color-prescribed homomorphisms from the edge-subgraph `H[S]`
/// into an `H`-colored host: maps sending every pattern vertex `v` into the
/// class `c^{-1}(v)` such that every edge of `S` lands on a host edge.
/// Such maps are injective by construction (classes are disjoint).
pub fn count_cp_hom(s: EdgeSubset, cg: &ColoredGraph, mode: CountMode) -> Result<CountResult> {
    let h = cg.pattern();
    if s.width() != h.edge_count() {
        return Err(Error::MaskWidthMismatch {
            width: s.width(),
            edges: h.edge_count(),
        });
    }
    // Adjacency of the pattern restricted to S.
    let sub = h.edge_subgraph(s)?;
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(sub.degree(v)));
    let mut acc = Accum::zero(mode);
    let mut image = vec![u32::MAX; h.n()];
    cp_hom_backtrack(&sub, cg, &order, 0, &mut image, &mut acc);
    Ok(acc.into_result())
}

fn cp_hom_backtrack(
    sub: &Graph,
    cg: &ColoredGraph,
    order: &[usize],
    depth: usize,
    image: &mut [u32],
    acc: &mut Accum,
) {
    if depth == order.len() {
        acc.add_one();
        return;
    }
    let v = order[depth];
    'candidates: for &w in cg.class(v) {
        for &u in &order[..depth] {
            if sub.has_edge(v, u) && !cg.host().has_edge(w as usize, image[u] as usize) {
                continue 'candidates;
            }
        }
        image[v] = w;
        cp_hom_backtrack(sub, cg, order, depth + 1, image, acc);
        image[v] = u32::MAX;
    }
}

/// Number of color-prescribed strong embeddings from `H[S]` into the host:
/// color-prescribed maps where host adjacency of images exactly mirrors `S`.
pub fn count_cp_strong_emb(
    s: EdgeSubset,
    cg: &ColoredGraph,
    mode: CountMode,
) -> Result<CountResult> {
    let h = cg.pattern();
    if s.width() != h.edge_count() {
        return Err(Error::MaskWidthMismatch {
            width: s.width(),
            edges: h.edge_count(),
        });
    }
    let sub = h.edge_subgraph(s)?;
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(sub.degree(v)));
    let mut acc = Accum::zero(mode);
    let mut image = vec![u32::MAX; h.n()];
    cp_strong_backtrack(&sub, cg, &order, 0, &mut image, &mut acc);
    Ok(acc.into_result())
}

fn cp_strong_backtrack(
    sub: &Graph,
    cg: &ColoredGraph,
    order: &[usize],
    depth: usize,
    image: &mut [u32],
    acc: &mut Accum,
) {
    if depth == order.len() {
        acc.add_one();
        return;
    }
    let v = order[depth];
    'candidates: for &w in cg.class(v) {
        for &u in &order[..depth] {
            if sub.has_edge(v, u) != cg.host().has_edge(w as usize, image[u] as usize) {
                continue 'candidates;
            }
        }
        image[v] = w;
        cp_strong_backtrack(sub, cg, order, depth + 1, image, acc);
        image[v] = u32::MAX;
    }
}

/// Number of color-prescribed induced subgraphs of the host satisfying a
/// property: transversals (one host vertex per color class) whose induced
/// subgraph satisfies `phi`. Returns 0 if some class is empty.
///
/// The induced subgraph of a transversal is isomorphic, via the coloring,
/// to the pattern edge-subgraph containing exactly the pattern edges whose
/// endpoint classes were chosen adjacent, so `phi` is evaluated on pattern
/// edge-subgraphs and memoized per mask.
pub fn count_cp_indsub_prop(
    phi: &Property,
    cg: &ColoredGraph,
    mode: CountMode,
) -> Result<CountResult> {
    if !cg.is_surjective() {
        return Ok(CountResult::zero(mode));
    }
    let h = cg.pattern();
    let m = h.edge_count();
    if m > crate::caps::DEFAULT_SUBSET_EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "pattern edges",
            cap: crate::caps::DEFAULT_SUBSET_EDGE_CAP,
            actual: m,
        });
    }
    let mut phi_by_mask: Vec<Option<bool>> = vec![None; 1usize << m];
    let mut scratch = Graph::empty(0)?;
    let mut acc = Accum::zero(mode);
    let mut choice = vec![0usize; h.n()];
    // Odometer over the classes.
    'outer: loop {
        let mut mask = 0u64;
        for (i, &e) in h.edges().iter().enumerate() {
            let x = cg.class(e.0 as usize)[choice[e.0 as usize]];
            let y = cg.class(e.1 as usize)[choice[e.1 as usize]];
            if cg.host().has_edge(x as usize, y as usize) {
                mask |= 1 << i;
            }
        }
        let sat = match phi_by_mask[mask as usize] {
            Some(b) => b,
            None => {
                scratch.assign_edge_subgraph(h, mask);
                let b = phi.eval(&scratch);
                phi_by_mask[mask as usize] = Some(b);
                b
            }
        };
        if sat {
            acc.add_one();
        }
        // Advance the odometer.
        for v in 0..h.n() {
            choice[v] += 1;
            if choice[v] < cg.class(v).len() {
                continue 'outer;
            }
            choice[v] = 0;
        }
        break;
    }
    Ok(acc.into_result())
}

/// A truth table of a property over all labeled graphs on `k` vertices,
/// indexed by the upper-triangle adjacency mask (pair `(i,j)`, `i < j`, at
/// bit `j(j-1)/2 + i`). Lets subset enumerations evaluate the property with
/// one bit lookup.
pub struct PropertyTable {
    k: usize,
    bits: Vec<u64>,
}

impl PropertyTable {
    /// Caps table construction at 2^20 graphs (k <= 7 in practice has
    /// C(k,2) <= 21; k = 8 falls back to direct evaluation).
    pub const MAX_PAIR_BITS: usize = 20;

    pub fn build(phi: &Property, k: usize) -> Option<PropertyTable> {
        let pair_bits = k * k.saturating_sub(1) / 2;
        if pair_bits > Self::MAX_PAIR_BITS {
            return None;
        }
        let total = 1usize << pair_bits;
        let mut bits = vec![0u64; (total + 63) / 64];
        let base = crate::graph::clique(k).ok()?;
        let mut scratch = Graph::empty(0).ok()?;
        for mask in 0..total as u64 {
            scratch.assign_edge_subgraph(&base, mask_to_edge_mask(&base, mask, k));
            if phi.eval(&scratch) {
                bits[(mask >> 6) as usize] |= 1 << (mask & 63);
            }
        }
        Some(PropertyTable { k, bits })
    }

    #[inline]
    pub fn eval_mask(&self, mask: u64) -> bool {
        (self.bits[(mask >> 6) as usize] >> (mask & 63)) & 1 == 1
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Converts a pair-index adjacency mask into an edge-subset mask of `K_k`.
/// The clique's canonical edge order is lexicographic `(u,v)`; the table
/// order is column-wise `(i,j) -> j(j-1)/2 + i`. These differ, so remap.
fn mask_to_edge_mask(kk: &Graph, pair_mask: u64, k: usize) -> u64 {
    let mut out = 0u64;
    for j in 1..k {
        for i in 0..j {
            let t = j * (j - 1) / 2 + i;
            if (pair_mask >> t) & 1 == 1 {
                let idx = kk.edge_index(i as u32, j as u32).expect("clique edge");
                out |= 1 << idx;
            }
        }
    }
    out
}

/// Extracts the pair-index adjacency mask of the induced subgraph on the
/// (ascending) vertex selection `sub` of `g`.
#[inline]
pub(crate) fn induced_pair_mask(g: &Graph, sub: &[usize]) -> u64 {
    let mut mask = 0u64;
    let mut t = 0;
    for j in 1..sub.len() {
        let row = g.adj_row(sub[j]);
        for &item in sub.iter().take(j) {
            mask |= ((row >> item) & 1) << t;
            t += 1;
        }
    }
    mask
}

/// Iterator over all k-subsets of `0..n` in lexicographic order, yielding
/// them through a reusable buffer.
pub(crate) struct Combinations {
    n: usize,
    k: usize,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            k,
            current: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }

    pub(crate) fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        // Standard lexicographic successor.
        let k = self.k;
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.current[i] != i + self.n - k {
                break;
            }
        }
        self.current[i] += 1;
        for j in i + 1..k {
            self.current[j] = self.current[j - 1] + 1;
        }
        Some(&self.current)
    }
}

/// Number of k-vertex subsets of `g` whose induced subgraph satisfies
/// `phi` — the simulated property-restricted induced-subgraph oracle.
pub fn count_indsub_prop(
    phi: &Property,
    k: usize,
    g: &Graph,
    mode: CountMode,
) -> Result<CountResult> {
    count_indsub_prop_budgeted(phi, k, g, mode, DEFAULT_ENUM_BUDGET)
}

pub fn count_indsub_prop_budgeted(
    phi: &Property,
    k: usize,
    g: &Graph,
    mode: CountMode,
    budget: u128,
) -> Result<CountResult> {
    if k > g.n() {
        return Ok(CountResult::zero(mode));
    }
    let combos = binomial(g.n(), k);
    if combos > budget {
        return Err(Error::BudgetExceeded {
            n: g.n(),
            k,
            combinations: combos,
            budget,
        });
    }
    // The budget bounds the subset count well below u64::MAX.
    let table = PropertyTable::build(phi, k);
    let mut count: u64 = 0;
    let mut combos_iter = Combinations::new(g.n(), k);
    match table {
        Some(table) => {
            while let Some(sub) = combos_iter.next() {
                count += u64::from(table.eval_mask(induced_pair_mask(g, sub)));
            }
        }
        None => {
            while let Some(sub) = combos_iter.next() {
                let mut keep = 0u64;
                for &v in sub {
                    keep |= 1 << v;
                }
                count += u64::from(phi.eval(&g.induced_by_mask(keep)));
            }
        }
    }
    Ok(apply_mode(CountResult::Exact(BigUint::from(count)), mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, complete_bipartite, cycle, independent_set, path};
    use crate::properties;

    fn exact(r: CountResult) -> u64 {
        match r {
            CountResult::Exact(v) => {
                let digits: Vec<u64> = v.iter_u64_digits().collect();
                match digits.len() {
                    0 => 0,
                    1 => digits[0],
                    _ => panic!("count does not fit u64"),
                }
            }
            CountResult::Residue { .. } => panic!("expected exact"),
        }
    }

    #[test]
    fn hom_counts() {
        let k3 = clique(3).unwrap();
        let c4 = cycle(4).unwrap();
        // Hom(K_2, G) = 2|E(G)| (ordered edges).
        for g in [&k3, &c4] {
            let k2 = clique(2).unwrap();
            assert_eq!(
                exact(count_hom(&k2, g, CountMode::Exact).unwrap()),
                2 * g.edge_count() as u64
            );
        }
        // Hom(IS_3, G) = n^3 (no constraints).
        assert_eq!(
            exact(count_hom(&independent_set(3).unwrap(), &c4, CountMode::Exact).unwrap()),
            64
        );
        // Hom(C_3, K_3) = 6: brute force over 27 maps.
        assert_eq!(exact(count_hom(&k3, &k3, CountMode::Exact).unwrap()), 6);
    }

    #[test]
    fn embeddings_and_quotients() {
        let k2 = clique(2).unwrap();
        let k3 = clique(3).unwrap();
        assert_eq!(exact(count_emb(&k2, &k3, CountMode::Exact).unwrap()), 6);
        assert_eq!(exact(count_sub(&k2, &k3, CountMode::Exact).unwrap()), 3);
        assert_eq!(exact(count_indsub(&k2, &k3, CountMode::Exact).unwrap()), 3);
        assert_eq!(
            exact(count_indsub(&independent_set(2).unwrap(), &k3, CountMode::Exact).unwrap()),
            0
        );
        // Every vertex pair of K_3 is adjacent, so P_3 has no strong embedding.
        assert_eq!(
            exact(count_strong_emb(&path(3).unwrap(), &k3, CountMode::Exact).unwrap()),
            0
        );
    }

    #[test]
    fn emb_sub_aut_relation_exhaustive() {
        // |Emb| = |Sub| * |Aut| and |StrEmb| = |IndSub| * |Aut| on a spread
        // of small pattern/host pairs.
        let patterns = [
            clique(2).unwrap(),
            path(3).unwrap(),
            clique(3).unwrap(),
            cycle(4).unwrap(),
            independent_set(3).unwrap(),
            complete_bipartite(1, 3).unwrap(),
        ];
        let hosts = [
            clique(4).unwrap(),
            cycle(5).unwrap(),
            complete_bipartite(2, 3).unwrap(),
            path(6).unwrap(),
        ];
        for h in &patterns {
            let aut = crate::canon::automorphisms(h).unwrap().len() as u64;
            for g in &hosts {
                let emb = exact(count_emb(h, g, CountMode::Exact).unwrap());
                let sub = exact(count_sub(h, g, CountMode::Exact).unwrap());
                let semb = exact(count_strong_emb(h, g, CountMode::Exact).unwrap());
                let isub = exact(count_indsub(h, g, CountMode::Exact).unwrap());
                assert_eq!(emb, sub * aut, "{h:?} -> {g:?}");
                assert_eq!(semb, isub * aut, "{h:?} -> {g:?}");
            }
        }
    }

    #[test]
    fn cp_hom_identity_cases() {
        let k22 = complete_bipartite(2, 2).unwrap();
        let full = EdgeSubset::full_of(&k22).unwrap();
        let cg = ColoredGraph::identity_colored(&k22, full).unwrap();
        assert_eq!(exact(count_cp_hom(full, &cg, CountMode::Exact).unwrap()), 1);

        // Host = 2 isolated vertices colored 0, 1 under pattern K_2.
        let k2 = clique(2).unwrap();
        let host = independent_set(2).unwrap();
        let cg = ColoredGraph::new(host, k2.clone(), vec![0, 1]).unwrap();
        assert_eq!(
            exact(count_cp_hom(EdgeSubset::empty(1).unwrap(), &cg, CountMode::Exact).unwrap()),
            1
        );
        assert_eq!(
            exact(count_cp_hom(EdgeSubset::full(1).unwrap(), &cg, CountMode::Exact).unwrap()),
            0
        );
    }

    #[test]
    fn cp_hom_vanishes_unless_contained() {
        // cp-Hom(H[S], H[T]) = 1 if S is contained in T, else 0.
        let h = complete_bipartite(2, 2).unwrap();
        let m = h.edge_count();
        for s in EdgeSubset::all(m) {
            for t in EdgeSubset::all(m) {
                let cg = ColoredGraph::identity_colored(&h, t).unwrap();
                let got = exact(count_cp_hom(s, &cg, CountMode::Exact).unwrap());
                let expected = u64::from(s.is_subset_of(&t));
                assert_eq!(got, expected, "S={:#b} T={:#b}", s.mask(), t.mask());
            }
        }
    }

    #[test]
    fn cp_indsub_prop_transversals() {
        let k22 = complete_bipartite(2, 2).unwrap();
        // Host = K_{2,2} itself, identity colored; the only transversal is
        // the identity.
        let cg = ColoredGraph::identity_colored(&k22, EdgeSubset::full_of(&k22).unwrap()).unwrap();
        let one = count_cp_indsub_prop(&properties::const_true(), &cg, CountMode::Exact).unwrap();
        assert_eq!(exact(one), 1);

        // Doubled host: 2 vertices per class, all allowed edges; 2^4
        // transversals.
        let doubled = doubled_host(&k22);
        let all = count_cp_indsub_prop(&properties::const_true(), &doubled, CountMode::Exact).unwrap();
        assert_eq!(exact(all), 16);

        // Empty class: zero.
        let host = independent_set(1).unwrap();
        let cg = ColoredGraph::new(host, clique(2).unwrap(), vec![0]).unwrap();
        let z = count_cp_indsub_prop(&properties::const_true(), &cg, CountMode::Exact).unwrap();
        assert!(z.is_zero());
    }

    /// Host with every class doubled and every allowed edge present.
    fn doubled_host(pattern: &Graph) -> ColoredGraph {
        let n = pattern.n() * 2;
        let coloring: Vec<u32> = (0..n).map(|v| (v / 2) as u32).collect();
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                let cu = coloring[u as usize] as usize;
                let cv = coloring[v as usize] as usize;
                if pattern.has_edge(cu, cv) {
                    edges.push((u, v));
                }
            }
        }
        let host = Graph::new(n, &edges).unwrap();
        ColoredGraph::new(host, pattern.clone(), coloring).unwrap()
    }

    #[test]
    fn indsub_prop_oracle() {
        let conn = properties::connected();
        let k3 = clique(3).unwrap();
        assert_eq!(
            exact(count_indsub_prop(&conn, 2, &k3, CountMode::Exact).unwrap()),
            3
        );
        assert_eq!(
            exact(count_indsub_prop(&conn, 2, &independent_set(3).unwrap(), CountMode::Exact).unwrap()),
            0
        );
        let even = properties::even_edges();
        assert_eq!(
            exact(count_indsub_prop(&even, 3, &k3, CountMode::Exact).unwrap()),
            0
        );
    }

    #[test]
    fn mod_mode_matches_exact_route() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..200 {
            let g = crate::gen::gnp(&mut rng, 6, 0.5);
            let h = crate::gen::gnp(&mut rng, 3, 0.6);
            let p = [2u64, 3, 5][trial % 3];
            let exact_count = count_hom(&h, &g, CountMode::Exact).unwrap();
            let modular = count_hom(&h, &g, CountMode::Mod(p)).unwrap();
            assert_eq!(
                exact_count.residue_mod(p),
                modular.as_residue().unwrap().0,
                "trial {trial}"
            );
        }
    }

    #[test]
    fn combinations_enumerate_lexicographically() {
        let mut c = Combinations::new(4, 2);
        let mut all = Vec::new();
        while let Some(s) = c.next() {
            all.push(s.to_vec());
        }
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut none = Combinations::new(2, 3);
        assert!(none.next().is_none());
        let mut empty = Combinations::new(3, 0);
        assert_eq!(empty.next().unwrap().len(), 0);
        assert!(empty.next().is_none());
    }
}
