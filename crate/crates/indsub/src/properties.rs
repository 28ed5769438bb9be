//! Isomorphism-invariant graph properties: the built-in registry, explicit
//! truth-table properties over the edge subsets of a fixed pattern, memoized
//! evaluation, and the meta-checkers (invariance under relabeling,
//! edge-monotonicity, prime-power witness sets).

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::Rng;
use serde::Serialize;

use crate::arith::prime_powers_up_to;
use crate::canon::{canonical_form, CanonicalForm};
use crate::caps::MAX_VERTICES;
use crate::graph::{clique, complete_bipartite, independent_set, EdgeSubset, Graph};
use crate::{Error, Result};

type Predicate = Arc<dyn Fn(&Graph) -> bool + Send + Sync>;
type Memo = Arc<RwLock<HashMap<CanonicalForm, bool>>>;

/// A named, total, isomorphism-invariant predicate on graphs.
///
/// Evaluation is plain by default; [`Property::memoized`] adds a cache keyed
/// by canonical form (sound exactly because the predicate is invariant,
/// which [`check_iso_invariance`] spot-checks). Graphs too large to
/// canonicalize bypass the cache.
#[derive(Clone)]
pub struct Property {
    name: String,
    predicate: Predicate,
    memo: Option<Memo>,
}

impl std::fmt::Debug for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Property({})", self.name)
    }
}

impl Property {
    pub fn new(name: impl Into<String>, f: impl Fn(&Graph) -> bool + Send + Sync + 'static) -> Self {
        Property {
            name: name.into(),
            predicate: Arc::new(f),
            memo: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Evaluates the property, consulting the memo cache if enabled.
    pub fn eval(&self, g: &Graph) -> bool {
        if let Some(memo) = &self.memo {
            if let Ok(key) = canonical_form(g) {
                if let Some(&hit) = memo.read().expect("memo lock").get(&key) {
                    return hit;
                }
                let value = (self.predicate)(g);
                memo.write().expect("memo lock").insert(key, value);
                return value;
            }
        }
        (self.predicate)(g)
    }

    /// Evaluates without touching the memo cache.
    pub fn eval_plain(&self, g: &Graph) -> bool {
        (self.predicate)(g)
    }

    /// Returns a memoizing wrapper around this property.
    pub fn memoized(mut self) -> Self {
        if self.memo.is_none() {
            self.memo = Some(Arc::new(RwLock::new(HashMap::new())));
        }
        self
    }

    pub fn is_memoized(&self) -> bool {
        self.memo.is_some()
    }
}

pub fn const_true() -> Property {
    Property::new("const_true", |_| true)
}

pub fn const_false() -> Property {
    Property::new("const_false", |_| false)
}

pub fn connected() -> Property {
    Property::new("connected", Graph::is_connected)
}

pub fn disconnected() -> Property {
    Property::new("disconnected", |g| !g.is_connected())
}

/// Connected with every vertex degree even. The connectivity requirement is
/// deliberate: it makes large edgeless graphs non-Eulerian, which separates
/// independent sets from complete bipartite graphs of even degree.
pub fn eulerian() -> Property {
    Property::new("eulerian", |g| g.is_connected() && g.all_degrees_even())
}

pub fn even_edges() -> Property {
    Property::new("even_edges", |g| g.edge_count() % 2 == 0)
}

pub fn odd_edges() -> Property {
    Property::new("odd_edges", |g| g.edge_count() % 2 == 1)
}

pub fn bipartite() -> Property {
    Property::new("bipartite", Graph::is_bipartite)
}

/// True when the graph contains no subgraph isomorphic to `f`.
pub fn subgraph_free(f: Graph) -> Property {
    let name = format!("subgraph_free(n={},m={})", f.n(), f.edge_count());
    Property::new(name, move |g| {
        if f.n() > g.n() {
            return true;
        }
        match crate::counting::count_emb(&f, g, crate::counting::CountMode::Exact) {
            Ok(c) => c.is_zero(),
            // Pattern beyond the search cap: treat as an evaluation error.
            Err(e) => panic!("subgraph_free evaluation failed: {e}"),
        }
    })
}

/// True when the graph has a cycle through all vertices (needs >= 3
/// vertices; capped at 12 vertices by search cost).
pub fn hamiltonian() -> Property {
    Property::new("hamiltonian", |g| {
        let n = g.n();
        if n < 3 || n > 12 {
            return false;
        }
        // Backtracking path search anchored at vertex 0.
        fn extend(g: &Graph, path: &mut Vec<usize>, used: u64) -> bool {
            let last = *path.last().expect("path is nonempty");
            if path.len() == g.n() {
                return g.has_edge(last, path[0]);
            }
            let mut row = g.adj_row(last) & !used;
            while row != 0 {
                let w = row.trailing_zeros() as usize;
                row &= row - 1;
                path.push(w);
                if extend(g, path, used | 1 << w) {
                    return true;
                }
                path.pop();
            }
            false
        }
        extend(g, &mut vec![0], 1)
    })
}

/// Builds the named built-in property.
pub fn by_name(name: &str) -> Result<Property> {
    match name {
        "connected" => Ok(connected()),
        "disconnected" => Ok(disconnected()),
        "eulerian" => Ok(eulerian()),
        "even_edges" => Ok(even_edges()),
        "odd_edges" => Ok(odd_edges()),
        "bipartite" => Ok(bipartite()),
        "hamiltonian" => Ok(hamiltonian()),
        "const_true" => Ok(const_true()),
        "const_false" => Ok(const_false()),
        other => Err(Error::UnknownProperty(other.to_string())),
    }
}

pub const BUILTIN_NAMES: &[&str] = &[
    "connected",
    "disconnected",
    "eulerian",
    "even_edges",
    "odd_edges",
    "bipartite",
    "hamiltonian",
    "const_true",
    "const_false",
];

/// A property given by an explicit truth table over the edge subsets of a
/// fixed pattern `h`: bit `mask` decides `h[mask]`. To be a graph property
/// the table must be constant on isomorphism classes, which the constructor
/// verifies; graphs outside the support evaluate to false.
pub fn from_table(h: &Graph, bits: &[bool]) -> Result<Property> {
    let m = h.edge_count();
    let expected = 1usize << m;
    if bits.len() != expected {
        return Err(Error::TableSizeMismatch {
            expected,
            got: bits.len(),
        });
    }
    let mut by_class: HashMap<CanonicalForm, (u64, bool)> = HashMap::new();
    for mask in 0..expected as u64 {
        let sub = h.edge_subgraph(EdgeSubset::new(mask, m)?)?;
        let key = canonical_form(&sub)?;
        match by_class.get(&key) {
            Some(&(first, value)) => {
                if value != bits[mask as usize] {
                    return Err(Error::TableNotInvariant { a: first, b: mask });
                }
            }
            None => {
                by_class.insert(key, (mask, bits[mask as usize]));
            }
        }
    }
    let table: HashMap<CanonicalForm, bool> =
        by_class.into_iter().map(|(k, (_, v))| (k, v)).collect();
    let name = format!("table(n={},m={m})", h.n());
    Ok(Property::new(name, move |g| {
        canonical_form(g)
            .ok()
            .and_then(|key| table.get(&key).copied())
            .unwrap_or(false)
    }))
}

/// A random truth-table property on the edge subsets of `h`: one fair coin
/// per isomorphism class of edge-subgraphs, so the table is invariant by
/// construction.
pub fn random_table<R: Rng>(h: &Graph, rng: &mut R) -> Result<Property> {
    let m = h.edge_count();
    let mut by_class: HashMap<CanonicalForm, bool> = HashMap::new();
    let mut bits = vec![false; 1 << m];
    for mask in 0..(1u64 << m) {
        let sub = h.edge_subgraph(EdgeSubset::new(mask, m)?)?;
        let key = canonical_form(&sub)?;
        let value = *by_class.entry(key).or_insert_with(|| rng.random_bool(0.5));
        bits[mask as usize] = value;
    }
    from_table(h, &bits)
}

/// One isomorphism-invariance violation: a graph, a relabeling, and the two
/// disagreeing values.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceViolation {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    pub permutation: Vec<u32>,
    pub value: bool,
    pub permuted_value: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub property: String,
    pub max_n: usize,
    pub graphs_checked: u64,
    pub permutations_per_graph: usize,
    pub violations: Vec<InvarianceViolation>,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `phi(G) = phi(pi G)` for every labeled graph on up to `max_n <= 6`
/// vertices and a seeded sample of 50 relabelings each.
pub fn check_iso_invariance(phi: &Property, max_n: usize, seed: u64) -> Result<InvarianceReport> {
    if max_n > 6 {
        return Err(Error::CapExceeded {
            what: "invariance check vertices",
            cap: 6,
            actual: max_n,
        });
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    const PERMS_PER_GRAPH: usize = 50;
    let mut graphs_checked = 0u64;
    let mut violations = Vec::new();
    for n in 0..=max_n {
        let base = clique(n)?;
        let m = base.edge_count();
        for mask in 0..(1u64 << m) {
            let g = base.edge_subgraph(EdgeSubset::new(mask, m)?)?;
            graphs_checked += 1;
            let value = phi.eval(&g);
            for _ in 0..PERMS_PER_GRAPH {
                let perm = random_permutation(n, &mut rng);
                let permuted = relabel(&g, &perm);
                let permuted_value = phi.eval(&permuted);
                if permuted_value != value {
                    violations.push(InvarianceViolation {
                        n,
                        edges: g.edges().to_vec(),
                        permutation: perm.clone(),
                        value,
                        permuted_value,
                    });
                    break;
                }
            }
        }
    }
    Ok(InvarianceReport {
        property: phi.name().to_string(),
        max_n,
        graphs_checked,
        permutations_per_graph: PERMS_PER_GRAPH,
        violations,
    })
}

pub(crate) fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

pub(crate) fn relabel(g: &Graph, perm: &[u32]) -> Graph {
    let edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
        .collect();
    Graph::new(g.n(), &edges).expect("relabeling preserves validity")
}

/// True iff `phi` is closed under removal of edges within the subset lattice
/// of `h`: whenever `phi(h[T])` holds, so does `phi(h[S])` for all `S` that
/// drop one edge of `T` (single-edge closure is equivalent to full downward
/// closure).
pub fn check_edge_monotone(phi: &Property, h: &Graph) -> Result<bool> {
    let m = h.edge_count();
    if m > crate::caps::DEFAULT_SUBSET_EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "edge-monotonicity edges",
            cap: crate::caps::DEFAULT_SUBSET_EDGE_CAP,
            actual: m,
        });
    }
    let mut value = vec![false; 1 << m];
    let mut scratch = Graph::empty(0)?;
    for mask in 0..(1u64 << m) {
        scratch.assign_edge_subgraph(h, mask);
        value[mask as usize] = phi.eval(&scratch);
    }
    for mask in 0..(1u64 << m) {
        if !value[mask as usize] {
            continue;
        }
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros();
            bits &= bits - 1;
            if !value[(mask ^ (1 << e)) as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The prime powers `t <= bound` with `phi(IS_2t) != phi(K_tt)`.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSet {
    pub property: String,
    pub bound: u64,
    pub members: Vec<u64>,
}

impl WitnessSet {
    pub fn contains(&self, t: u64) -> bool {
        self.members.binary_search(&t).is_ok()
    }

    /// Smallest member `>= low`, if any.
    pub fn first_at_least(&self, low: u64) -> Option<u64> {
        self.members.iter().copied().find(|&t| t >= low)
    }
}

pub fn witness_set(phi: &Property, bound: u64) -> Result<WitnessSet> {
    if 2 * bound as usize > MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "witness bound (2t vertices)",
            cap: MAX_VERTICES / 2,
            actual: bound as usize,
        });
    }
    let mut members = Vec::new();
    for t in prime_powers_up_to(bound) {
        let on_empty = phi.eval(&independent_set(2 * t as usize)?);
        let on_biclique = phi.eval(&complete_bipartite(t as usize, t as usize)?);
        if on_empty != on_biclique {
            members.push(t);
        }
    }
    Ok(WitnessSet {
        property: phi.name().to_string(),
        bound,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, path, wreath};

    #[test]
    fn builtin_values() {
        let k22 = complete_bipartite(2, 2).unwrap();
        assert!(eulerian().eval(&k22));
        assert!(!eulerian().eval(&independent_set(4).unwrap()));
        assert!(eulerian().eval(&cycle(5).unwrap()));
        assert!(!eulerian().eval(&complete_bipartite(3, 3).unwrap()));
        assert!(eulerian().eval(&complete_bipartite(2, 4).unwrap()));
        assert!(const_true().eval(&independent_set(1).unwrap()));
        assert!(even_edges().eval(&independent_set(5).unwrap()));
        assert!(odd_edges().eval(&clique(3).unwrap()));
        assert!(hamiltonian().eval(&cycle(6).unwrap()));
        assert!(!hamiltonian().eval(&path(4).unwrap()));
        assert!(hamiltonian().eval(&wreath(3, 2).unwrap()));
        assert!(by_name("nonsense").is_err());
    }

    #[test]
    fn subgraph_free_counts() {
        let triangle_free = subgraph_free(clique(3).unwrap());
        assert!(triangle_free.eval(&complete_bipartite(3, 3).unwrap()));
        assert!(!triangle_free.eval(&clique(4).unwrap()));
    }

    #[test]
    fn invariance_of_builtins() {
        for name in ["connected", "eulerian", "bipartite"] {
            let report = check_iso_invariance(&by_name(name).unwrap(), 5, 0).unwrap();
            assert!(report.holds(), "{name}: {:?}", report.violations);
        }
    }

    #[test]
    fn invariance_check_catches_label_dependence() {
        let broken = Property::new("degree_of_vertex_0", |g| g.n() > 0 && g.degree(0) > 0);
        let report = check_iso_invariance(&broken, 4, 0).unwrap();
        assert!(!report.holds());
    }

    #[test]
    fn table_properties_are_invariant() {
        use rand::SeedableRng;
        let h = complete_bipartite(2, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let phi = random_table(&h, &mut rng).unwrap();
        let report = check_iso_invariance(&phi, 4, 0).unwrap();
        assert!(report.holds());

        // An inconsistent raw table is rejected: single edges of K_{2,2} are
        // all isomorphic, so giving them different bits must fail.
        let mut bits = vec![false; 16];
        bits[0b0001] = true;
        assert!(matches!(
            from_table(&h, &bits),
            Err(Error::TableNotInvariant { .. })
        ));
    }

    #[test]
    fn edge_monotonicity() {
        let k4 = clique(4).unwrap();
        assert!(check_edge_monotone(&bipartite(), &k4).unwrap());
        assert!(!check_edge_monotone(&connected(), &clique(3).unwrap()).unwrap());
        assert!(check_edge_monotone(&const_true(), &k4).unwrap());
        assert!(check_edge_monotone(&subgraph_free(clique(3).unwrap()), &k4).unwrap());
    }

    #[test]
    fn witness_sets() {
        let conn = witness_set(&connected(), 5).unwrap();
        assert_eq!(conn.members, vec![2, 3, 4, 5]);
        let eul = witness_set(&eulerian(), 9).unwrap();
        assert_eq!(eul.members, vec![2, 4, 8]);
        let trivial = witness_set(&const_true(), 9).unwrap();
        assert!(trivial.members.is_empty());
        assert_eq!(eul.first_at_least(3), Some(4));
    }

    #[test]
    fn memoized_matches_plain() {
        let phi = connected().memoized();
        let graphs = [
            cycle(5).unwrap(),
            path(4).unwrap(),
            independent_set(3).unwrap(),
            wreath(2, 2).unwrap(),
        ];
        for g in &graphs {
            // Evaluate twice: once populating the cache, once hitting it.
            assert_eq!(phi.eval(g), phi.eval_plain(g));
            assert_eq!(phi.eval(g), phi.eval_plain(g));
        }
        assert!(phi.is_memoized());
    }
}
