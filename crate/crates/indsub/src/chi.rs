//! The alternating enumerator of a property and a pattern graph: the sum of
//! `phi(H[S]) * (-1)^|S|` over all edge subsets `S` of `H`, computed either
//! naively over all `2^|E|` masks or over orbit representatives of the
//! automorphism group, plus the congruence check for edge-transitive
//! patterns with a prime-power edge count.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::prime_power;
use crate::canon::{automorphisms, is_edge_transitive};
use crate::caps::{DEFAULT_SUBSET_EDGE_CAP, MAX_SUBSET_EDGE_CAP};
use crate::graph::Graph;
use crate::perm::subset_orbit_reps_of;
use crate::properties::Property;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ChiMethod {
    Naive,
    Orbit,
}

/// An alternating-enumerator value, with the number of property evaluations
/// the computation needed.
#[derive(Clone, Debug, Serialize)]
pub struct ChiResult {
    pub value: i64,
    pub method: ChiMethod,
    pub phi_evaluations: u64,
}

impl ChiResult {
    /// Canonical residue of the value modulo `m`.
    pub fn residue(&self, m: u64) -> u64 {
        self.value.rem_euclid(m as i64) as u64
    }
}

/// Options for the subset-sum computations.
#[derive(Clone, Default)]
pub struct ChiOptions {
    /// Raises the default edge cap (24) up to the hard cap (62). Sums over
    /// more than ~2^30 masks are impractical regardless.
    pub max_edges: Option<usize>,
    /// Progress callback, called with (masks done, total masks) roughly
    /// every 2^22 masks.
    pub progress: Option<Arc<dyn Fn(u64, u64) + Send + Sync>>,
    /// Evaluate mask ranges in parallel (the sum is associative, so the
    /// result is identical). Defaults to on.
    pub sequential: bool,
}

impl std::fmt::Debug for ChiOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChiOptions")
            .field("max_edges", &self.max_edges)
            .field("sequential", &self.sequential)
            .finish()
    }
}

fn effective_cap(opts: &ChiOptions) -> usize {
    opts.max_edges
        .unwrap_or(DEFAULT_SUBSET_EDGE_CAP)
        .min(MAX_SUBSET_EDGE_CAP)
}

/// The alternating enumerator by direct summation over all edge subsets.
pub fn chi_naive(phi: &Property, h: &Graph) -> Result<ChiResult> {
    chi_naive_with(phi, h, &ChiOptions::default())
}

pub fn chi_naive_with(phi: &Property, h: &Graph, opts: &ChiOptions) -> Result<ChiResult> {
    let m = h.edge_count();
    let cap = effective_cap(opts);
    if m > cap {
        return Err(Error::CapExceeded {
            what: "alternating enumerator edges",
            cap,
            actual: m,
        });
    }
    let total: u64 = 1 << m;
    const CHUNK: u64 = 1 << 22;
    let progress_done = AtomicU64::new(0);
    let report = |done: &AtomicU64, amount: u64| {
        if let Some(cb) = &opts.progress {
            let so_far = done.fetch_add(amount, Ordering::Relaxed) + amount;
            cb(so_far, total);
        }
    };
    let sum_chunk = |range: std::ops::Range<u64>| -> (i64, u64) {
        let mut scratch = Graph::empty(0).expect("empty graph");
        let mut sum = 0i64;
        let mut evals = 0u64;
        for mask in range {
            scratch.assign_edge_subgraph(h, mask);
            evals += 1;
            if phi.eval_plain(&scratch) {
                sum += 1 - 2 * ((mask.count_ones() & 1) as i64);
            }
        }
        (sum, evals)
    };
    let (value, evals) = if opts.sequential || total <= CHUNK {
        let mut acc = (0i64, 0u64);
        let mut start = 0u64;
        while start < total {
            let end = (start + CHUNK).min(total);
            let (s, e) = sum_chunk(start..end);
            acc.0 += s;
            acc.1 += e;
            report(&progress_done, end - start);
            start = end;
        }
        acc
    } else {
        let chunks: Vec<(u64, u64)> = (0..total)
            .step_by(CHUNK as usize)
            .map(|s| (s, (s + CHUNK).min(total)))
            .collect();
        chunks
            .par_iter()
            .map(|&(s, e)| {
                let r = sum_chunk(s..e);
                report(&progress_done, e - s);
                r
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    Ok(ChiResult {
        value,
        method: ChiMethod::Naive,
        phi_evaluations: evals,
    })
}

/// Orbits of the automorphism group of `h` on edge subsets: one minimal
/// representative per orbit with the exact orbit size. Computed from a
/// small generating subset of the automorphisms; the orbits are those of
/// the full group.
pub fn edge_subset_orbits(h: &Graph) -> Result<Vec<(u64, u64)>> {
    let m = h.edge_count();
    let auts = automorphisms(h)?;
    let edge_perms: Vec<_> = auts
        .iter()
        .map(|p| p.edge_index_action(h))
        .collect::<Result<_>>()?;
    let gens = crate::perm::generating_subset(&edge_perms)?;
    subset_orbit_reps_of(&gens, m)
}

/// The alternating enumerator as a sum over orbit representatives of the
/// automorphism group acting on edge subsets, each weighted by its orbit
/// size. Isomorphic subsets share their property value, so this reorders
/// the naive sum and must agree with it exactly. The full automorphism
/// group gives the fewest representatives; any subgroup would also do.
pub fn chi_orbit(phi: &Property, h: &Graph) -> Result<ChiResult> {
    let m = h.edge_count();
    if m > 24 {
        return Err(Error::CapExceeded {
            what: "orbit enumeration edges",
            cap: 24,
            actual: m,
        });
    }
    chi_orbit_from_reps(phi, h, &edge_subset_orbits(h)?)
}

/// [`chi_orbit`] with precomputed subset orbits, so several properties can
/// share one orbit computation on the same pattern.
pub fn chi_orbit_from_reps(phi: &Property, h: &Graph, reps: &[(u64, u64)]) -> Result<ChiResult> {
    let mut scratch = Graph::empty(0)?;
    let mut value = 0i64;
    let mut evals = 0u64;
    for &(mask, size) in reps {
        scratch.assign_edge_subgraph(h, mask);
        evals += 1;
        if phi.eval_plain(&scratch) {
            let sign = 1 - 2 * ((mask.count_ones() & 1) as i64);
            value += sign * size as i64;
        }
    }
    Ok(ChiResult {
        value,
        method: ChiMethod::Orbit,
        phi_evaluations: evals,
    })
}

/// Outcome of the congruence check for an edge-transitive pattern with a
/// prime-power edge count: with `phi` differing on the empty and full edge
/// sets, the alternating enumerator must be congruent to
/// `phi(H[0]) - phi(H)` (hence to +-1) modulo the prime.
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub property: String,
    pub pattern_vertices: usize,
    pub pattern_edges: usize,
    pub applicable: bool,
    /// Which preconditions failed, when not applicable.
    pub unmet: Vec<String>,
    pub p: Option<u64>,
    pub chi: Option<i64>,
    pub expected_residue: Option<u64>,
    pub actual_residue: Option<u64>,
    pub holds: Option<bool>,
}

/// Checks the congruence, preferring the orbit method when the
/// automorphism group is available. Precondition failures are reported,
/// not errors; a violated congruence (`holds = false`) would indicate an
/// implementation bug.
pub fn verify_congruence(phi: &Property, h: &Graph) -> Result<CongruenceReport> {
    verify_congruence_with(phi, h, &ChiOptions::default())
}

pub fn verify_congruence_with(
    phi: &Property,
    h: &Graph,
    opts: &ChiOptions,
) -> Result<CongruenceReport> {
    let mut unmet = Vec::new();
    let decomposition = prime_power(h.edge_count() as u64);
    if decomposition.is_none() {
        unmet.push(format!("edge count {} is not a prime power", h.edge_count()));
    }
    match is_edge_transitive(h) {
        Ok(true) => {}
        Ok(false) => unmet.push("pattern is not edge-transitive".into()),
        Err(e) => unmet.push(format!("edge-transitivity undecidable: {e}")),
    }
    let on_empty = phi.eval(&Graph::empty(h.n())?);
    let on_full = phi.eval(h);
    if on_empty == on_full {
        unmet.push(format!(
            "phi(H[empty]) = phi(H) = {}",
            u8::from(on_empty)
        ));
    }
    if !unmet.is_empty() {
        return Ok(CongruenceReport {
            property: phi.name().to_string(),
            pattern_vertices: h.n(),
            pattern_edges: h.edge_count(),
            applicable: false,
            unmet,
            p: None,
            chi: None,
            expected_residue: None,
            actual_residue: None,
            holds: None,
        });
    }
    let (p, _) = decomposition.expect("checked above");
    let chi = match chi_orbit(phi, h) {
        Ok(r) => r,
        Err(_) => chi_naive_with(phi, h, opts)?,
    };
    let expected = (i64::from(on_empty) - i64::from(on_full)).rem_euclid(p as i64) as u64;
    let actual = chi.residue(p);
    Ok(CongruenceReport {
        property: phi.name().to_string(),
        pattern_vertices: h.n(),
        pattern_edges: h.edge_count(),
        applicable: true,
        unmet,
        p: Some(p),
        chi: Some(chi.value),
        expected_residue: Some(expected),
        actual_residue: Some(actual),
        holds: Some(expected == actual),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, complete_bipartite, cycle, path};
    use crate::properties;

    /// Independent oracle for the alternating sum: materialize every subset
    /// through the public edge_subgraph API and evaluate the property on it.
    fn chi_oracle(phi: &Property, h: &Graph) -> i64 {
        let m = h.edge_count();
        let mut sum = 0i64;
        for s in crate::graph::EdgeSubset::all(m) {
            let sub = h.edge_subgraph(s).unwrap();
            if phi.eval(&sub) {
                sum += if s.size() % 2 == 0 { 1 } else { -1 };
            }
        }
        sum
    }

    #[test]
    fn const_true_cancels() {
        let r = chi_naive(&properties::const_true(), &clique(2).unwrap()).unwrap();
        assert_eq!(r.value, 0);
    }

    #[test]
    fn even_edges_on_single_edge() {
        let r = chi_naive(&properties::even_edges(), &clique(2).unwrap()).unwrap();
        assert_eq!(r.value, 1);
    }

    #[test]
    fn connected_on_biclique_22() {
        // The 16-subset brute force pins the value at -3: the full 4-cycle
        // contributes +1 and the four spanning paths contribute -1 each.
        let k22 = complete_bipartite(2, 2).unwrap();
        let conn = properties::connected();
        assert_eq!(chi_oracle(&conn, &k22), -3);
        let r = chi_naive(&conn, &k22).unwrap();
        assert_eq!(r.value, -3);
        assert_eq!(r.residue(2), 1);
        assert_eq!(r.phi_evaluations, 16);
    }

    #[test]
    fn connected_on_triangle() {
        let r = chi_naive(&properties::connected(), &cycle(3).unwrap()).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.residue(3), 2);
    }

    #[test]
    fn orbit_agrees_with_naive_and_saves_evaluations() {
        let graphs = [
            clique(2).unwrap(),
            path(3).unwrap(),
            clique(3).unwrap(),
            cycle(4).unwrap(),
            cycle(5).unwrap(),
            complete_bipartite(2, 2).unwrap(),
            complete_bipartite(2, 4).unwrap(),
            complete_bipartite(3, 3).unwrap(),
        ];
        for h in &graphs {
            for phi in [
                properties::connected(),
                properties::eulerian(),
                properties::even_edges(),
                properties::bipartite(),
            ] {
                let naive = chi_naive(&phi, h).unwrap();
                let orbit = chi_orbit(&phi, h).unwrap();
                assert_eq!(naive.value, orbit.value, "{} on {h:?}", phi.name());
                assert!(orbit.phi_evaluations <= naive.phi_evaluations);
            }
        }
        // The triangle's automorphisms leave 4 subset orbits of its 8 subsets.
        let orbit = chi_orbit(&properties::connected(), &clique(3).unwrap()).unwrap();
        assert_eq!(orbit.phi_evaluations, 4);
    }

    #[test]
    fn parallel_matches_sequential() {
        let h = complete_bipartite(3, 3).unwrap();
        let phi = properties::connected();
        let seq = chi_naive_with(
            &phi,
            &h,
            &ChiOptions {
                sequential: true,
                ..Default::default()
            },
        )
        .unwrap();
        let par = chi_naive(&phi, &h).unwrap();
        assert_eq!(seq.value, par.value);
        assert_eq!(seq.value, chi_oracle(&phi, &h));
    }

    #[test]
    fn congruence_reports() {
        let k22 = complete_bipartite(2, 2).unwrap();
        let report = verify_congruence(&properties::connected(), &k22).unwrap();
        assert!(report.applicable);
        assert_eq!(report.p, Some(2));
        assert_eq!(report.chi, Some(-3));
        assert_eq!(report.holds, Some(true));

        let c3 = cycle(3).unwrap();
        let report = verify_congruence(&properties::connected(), &c3).unwrap();
        assert_eq!(report.p, Some(3));
        assert_eq!(report.actual_residue, Some(2));
        assert_eq!(report.holds, Some(true));

        let trivial = verify_congruence(&properties::const_true(), &k22).unwrap();
        assert!(!trivial.applicable);
        assert!(trivial.unmet.iter().any(|m| m.contains("phi(H[empty])")));

        let p4 = path(4).unwrap();
        let not_transitive = verify_congruence(&properties::connected(), &p4).unwrap();
        assert!(!not_transitive.applicable);
    }
}
