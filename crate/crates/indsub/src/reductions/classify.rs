//! Exhaustive verification of the structure of connected edge-transitive
//! graphs with a prime-power number of edges: every such graph must be
//! bipartite, or vertex-transitive and obtainable from the wreath graph on
//! the same number of vertices by deleting edges (or both).

use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

use crate::arith::prime_power;
use crate::canon::{automorphisms, canonical_form, CanonicalForm};
use crate::graph::{clique, wreath, EdgeSubset, Graph};
use crate::{Error, Result};

/// One connected edge-transitive prime-power-edge graph and how it was
/// classified.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateRecord {
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub edges: Vec<(u32, u32)>,
    pub bipartite: bool,
    pub vertex_transitive: bool,
    /// `(p, k)` of the wreath graph this embeds into edge-wise, if the
    /// non-bipartite branch applies.
    pub wreath_host: Option<(u64, u32)>,
    pub classified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub max_n: usize,
    pub labeled_graphs: u64,
    pub isomorphism_classes: u64,
    pub candidates: Vec<CandidateRecord>,
    pub counterexamples: Vec<CandidateRecord>,
}

impl ClassifyReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// All graphs on exactly `n` vertices up to isomorphism, by canonical-form
/// deduplication of the `2^C(n,2)` labeled graphs. Representatives are the
/// minimal edge masks, in ascending mask order.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > 7 {
        return Err(Error::CapExceeded {
            what: "enumeration vertices",
            cap: 7,
            actual: n,
        });
    }
    let base = clique(n)?;
    let m = base.edge_count();
    let total: u64 = 1 << m;
    const CHUNK: u64 = 1 << 14;
    let ranges: Vec<(u64, u64)> = (0..total)
        .step_by(CHUNK as usize)
        .map(|s| (s, (s + CHUNK).min(total)))
        .collect();
    let maps: Vec<HashMap<CanonicalForm, u64>> = ranges
        .par_iter()
        .map(|&(start, end)| {
            let mut seen: HashMap<CanonicalForm, u64> = HashMap::new();
            let mut scratch = Graph::empty(0).expect("empty graph");
            for mask in start..end {
                scratch.assign_edge_subgraph(&base, mask);
                let form = canonical_form(&scratch).expect("within canonical cap");
                seen.entry(form).or_insert(mask);
            }
            seen
        })
        .collect();
    let mut merged: HashMap<CanonicalForm, u64> = HashMap::new();
    for map in maps {
        for (form, mask) in map {
            merged
                .entry(form)
                .and_modify(|m| *m = (*m).min(mask))
                .or_insert(mask);
        }
    }
    let mut masks: Vec<u64> = merged.into_values().collect();
    masks.sort_unstable();
    masks
        .into_iter()
        .map(|mask| base.edge_subgraph(EdgeSubset::new(mask, m)?))
        .collect()
}

/// True if there is an injective map of the vertices of `g` onto the
/// vertices of `w` sending every edge of `g` to an edge of `w` (an
/// edge-subgraph embedding; non-edges are unconstrained). Requires equal
/// vertex counts, so the map is a bijection.
pub fn embeds_as_edge_subgraph(g: &Graph, w: &Graph) -> bool {
    if g.n() != w.n() || g.edge_count() > w.edge_count() {
        return false;
    }
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    fn place(
        g: &Graph,
        w: &Graph,
        order: &[usize],
        depth: usize,
        image: &mut [usize],
        used: u64,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for target in 0..w.n() {
            if (used >> target) & 1 == 1 || g.degree(v) > w.degree(target) {
                continue;
            }
            let ok = order[..depth]
                .iter()
                .all(|&u| !g.has_edge(v, u) || w.has_edge(target, image[u]));
            if ok {
                image[v] = target;
                if place(g, w, order, depth + 1, image, used | 1 << target) {
                    return true;
                }
            }
        }
        false
    }
    let mut image = vec![usize::MAX; n];
    place(g, w, &order, 0, &mut image, 0)
}

/// Scans all graphs on up to `max_n` vertices and classifies every
/// connected edge-transitive graph with a prime-power edge count.
pub fn classify_p_edge_transitive(max_n: usize) -> Result<ClassifyReport> {
    if max_n > 7 {
        return Err(Error::CapExceeded {
            what: "classification vertices",
            cap: 7,
            actual: max_n,
        });
    }
    let mut labeled: u64 = 0;
    let mut classes: u64 = 0;
    let mut candidates = Vec::new();
    for n in 1..=max_n {
        labeled += 1u64 << (n * (n - 1) / 2);
        let reps = nonisomorphic_graphs(n)?;
        classes += reps.len() as u64;
        for g in reps {
            if !g.is_connected() {
                continue;
            }
            let Some((p, _)) = prime_power(g.edge_count() as u64) else {
                continue;
            };
            if !is_edge_transitive_cached(&g)? {
                continue;
            }
            let bipartite = g.is_bipartite();
            let vertex_transitive = crate::canon::is_vertex_transitive(&g)?;
            // The wreath host must live on the same vertex count p^k.
            let wreath_host = match prime_power(g.n() as u64) {
                Some((q, k)) if q == p => {
                    let w = wreath(p, k)?;
                    embeds_as_edge_subgraph(&g, &w).then_some((p, k))
                }
                _ => None,
            };
            let classified = bipartite || (vertex_transitive && wreath_host.is_some());
            candidates.push(CandidateRecord {
                n: g.n(),
                m: g.edge_count(),
                p,
                edges: g.edges().to_vec(),
                bipartite,
                vertex_transitive,
                wreath_host,
                classified,
            });
        }
    }
    let counterexamples = candidates.iter().filter(|c| !c.classified).cloned().collect();
    Ok(ClassifyReport {
        max_n,
        labeled_graphs: labeled,
        isomorphism_classes: classes,
        candidates,
        counterexamples,
    })
}

fn is_edge_transitive_cached(g: &Graph) -> Result<bool> {
    // Cheap necessary condition first: an edge-transitive graph has at most
    // two distinct endpoint-degree multisets over its edges.
    let Some(&first) = g.edges().first() else {
        return Ok(true);
    };
    let sig = |(u, v): (u32, u32)| {
        let (a, b) = (g.degree(u as usize), g.degree(v as usize));
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let first_sig = sig(first);
    if g.edges().iter().any(|&e| sig(e) != first_sig) {
        return Ok(false);
    }
    let auts = automorphisms(g)?;
    let mut seen = vec![false; g.edge_count()];
    let mut covered = 0usize;
    for p in &auts {
        let (a, b) = p.apply_edge(first);
        let idx = g
            .edge_index(a, b)
            .ok_or_else(|| Error::Invariant("automorphism left the edge set".into()))?;
        if !seen[idx] {
            seen[idx] = true;
            covered += 1;
        }
    }
    Ok(covered == g.edge_count())
}
