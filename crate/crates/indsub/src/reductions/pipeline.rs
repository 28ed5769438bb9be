//! End-to-end oracle pipelines.
//!
//! `pipeline_exact` recovers a biclique homomorphism count from a host graph
//! using only simulated property-restricted induced-subgraph counting:
//! gadget, tensor queries, triangular solve, decoloring, brute-force oracle.
//! `pipeline_clique_decision` decides k-clique existence through the same
//! chain after padding and the parsimonious clique gadget; in mod-p mode it
//! prepends random vertex isolation and amplifies over `2^k` repetitions.
//!
//! Every simulated oracle call is logged in a [`PipelineTranscript`], with
//! per-stage query counts and maximum query sizes always exact and the
//! per-query list truncated beyond a configurable limit.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::coefficients::{cp_indsub_coefficients, LinearCombination};
use super::decolor::decolor_count;
use super::gadgets::{clique_gadget, hom_gadget, pad_clique, random_isolation};
use super::matrix::{cp_hom_matrix_with_cap, CpHomMatrix};
use super::solve::{monotonicity_solve_with_matrix, RecoveredTerms};
use super::QueryRecord;
use crate::arith::{binomial, prime_power};
use crate::counting::{
    count_indsub_prop_budgeted, ColoredGraph, Combinations, CountMode, CountResult, PropertyTable,
};
use crate::gen::rng_for;
use crate::graph::{complete_bipartite, independent_set, Graph};
use crate::properties::{witness_set, Property};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Budget for each simulated induced-subgraph enumeration.
    pub enum_budget: u128,
    /// Per-stage query records kept verbatim; summaries stay exact beyond.
    pub transcript_query_limit: usize,
    /// Mod-p amplification override; defaults to 2^k repetitions.
    pub repetitions: Option<u32>,
    /// Stop repeating once a nonzero residue has settled the decision.
    pub stop_on_hit: bool,
    /// Upper bound when searching the property's witness set for a usable
    /// biclique side.
    pub witness_bound: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            enum_budget: crate::caps::DEFAULT_ENUM_BUDGET,
            transcript_query_limit: 4096,
            repetitions: None,
            stop_on_hit: true,
            witness_bound: 8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub name: String,
    pub total_queries: u64,
    pub max_query_vertices: usize,
    pub truncated: bool,
    pub queries: Vec<QueryRecord>,
    pub output: String,
}

impl StageRecord {
    fn plain(name: impl Into<String>, output: impl Into<String>) -> Self {
        StageRecord {
            name: name.into(),
            total_queries: 0,
            max_query_vertices: 0,
            truncated: false,
            queries: Vec::new(),
            output: output.into(),
        }
    }

    fn with_queries(
        name: impl Into<String>,
        queries: Vec<QueryRecord>,
        output: impl Into<String>,
        limit: usize,
    ) -> Self {
        let total = queries.len() as u64;
        let max_n = queries.iter().map(|q| q.n_vertices).max().unwrap_or(0);
        let truncated = queries.len() > limit;
        let mut queries = queries;
        if truncated {
            queries.truncate(limit);
        }
        StageRecord {
            name: name.into(),
            total_queries: total,
            max_query_vertices: max_n,
            truncated,
            queries,
            output: output.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineTranscript {
    pub mode: String,
    pub seed: Option<u64>,
    pub stages: Vec<StageRecord>,
    pub final_value: String,
}

/// Evaluation matrices depend only on (pattern, mode) and are reused across
/// pipeline runs and repetitions.
fn cached_matrix(pattern: &Graph, mode: CountMode) -> Result<std::sync::Arc<CpHomMatrix>> {
    type Key = (usize, Vec<(u32, u32)>, Option<u64>);
    type Cache = std::sync::Mutex<std::collections::HashMap<Key, std::sync::Arc<CpHomMatrix>>>;
    static CACHE: std::sync::OnceLock<Cache> = std::sync::OnceLock::new();
    let key = (pattern.n(), pattern.edges().to_vec(), mode.modulus());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("matrix cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let built = std::sync::Arc::new(cp_hom_matrix_with_cap(pattern, mode, 10)?);
    cache
        .lock()
        .expect("matrix cache lock")
        .insert(key, built.clone());
    Ok(built)
}

fn mode_label(mode: CountMode) -> String {
    match mode {
        CountMode::Exact => "exact".into(),
        CountMode::Mod(p) => format!("mod {p}"),
    }
}

#[derive(Clone, Debug)]
pub struct PipelineExactOutcome {
    pub value: CountResult,
    pub transcript: PipelineTranscript,
}

/// Computes the number of homomorphisms from the biclique with side `t`
/// into `g`, using only simulated induced-subgraph oracle calls.
///
/// `t` must be a prime power and the property must separate the edgeless
/// graph on `2t` vertices from the full biclique; in mod-p mode the
/// alternating enumerator must additionally be a unit modulo p, which is
/// checked computationally.
pub fn pipeline_exact(
    phi: &Property,
    t: u64,
    g: &Graph,
    mode: CountMode,
    opts: &PipelineOptions,
) -> Result<PipelineExactOutcome> {
    if prime_power(t).is_none() {
        return Err(Error::Unsupported(format!("biclique side {t} is not a prime power")));
    }
    let pattern = complete_bipartite(t as usize, t as usize)?;
    check_pattern_usable(phi, t as usize, mode)?;
    let lc = cp_indsub_coefficients(phi, &pattern)?;
    let cg = hom_gadget(&pattern, g)?;
    let mut stages = vec![StageRecord::plain(
        "hom_gadget",
        format!("host on {} vertices, {} color classes", cg.host().n(), pattern.n()),
    )];
    let matrix = cached_matrix(&pattern, mode)?;
    // Simulated oracle chain: each tensor query is answered by decoloring
    // into plain induced-subgraph counts, each of which is brute-forced.
    let mut decolor_records: Vec<QueryRecord> = Vec::new();
    let budget = opts.enum_budget;
    let mut oracle = |query: &ColoredGraph| -> Result<CountResult> {
        let mut ind_oracle = |host: &Graph, k: usize| -> Result<CountResult> {
            count_indsub_prop_budgeted(phi, k, host, mode, budget)
        };
        let out = decolor_count(query, mode, &mut ind_oracle)?;
        decolor_records.extend(out.queries);
        Ok(out.value)
    };
    let solved = monotonicity_solve_with_matrix(&lc, &cg, &matrix, &mut oracle, mode)?;
    let value = solved
        .full_term()
        .cloned()
        .ok_or_else(|| Error::Invariant("full-edge-set term was not recoverable".into()))?;
    stages.push(StageRecord::with_queries(
        "monotonicity",
        solved.queries.clone(),
        format!("recovered {} terms", solved.order().len()),
        opts.transcript_query_limit,
    ));
    stages.push(StageRecord::with_queries(
        "decolor",
        decolor_records,
        "inclusion-exclusion over deleted color classes".to_string(),
        opts.transcript_query_limit,
    ));
    let transcript = PipelineTranscript {
        mode: mode_label(mode),
        seed: None,
        stages,
        final_value: value.to_decimal(),
    };
    Ok(PipelineExactOutcome { value, transcript })
}

/// The witness/unit preconditions for using the biclique of side `t` with
/// this property and mode.
fn check_pattern_usable(phi: &Property, t: usize, mode: CountMode) -> Result<()> {
    let on_empty = phi.eval(&independent_set(2 * t)?);
    let on_full = phi.eval(&complete_bipartite(t, t)?);
    if on_empty == on_full {
        return Err(Error::Unsupported(format!(
            "property {:?} does not separate the edgeless graph from the side-{t} biclique",
            phi.name()
        )));
    }
    if let CountMode::Mod(p) = mode {
        let chi = crate::chi::chi_naive(phi, &complete_bipartite(t, t)?)?;
        if chi.residue(p) == 0 {
            return Err(Error::Unsupported(format!(
                "alternating enumerator {} of {:?} on the side-{t} biclique is not a unit mod {p}",
                chi.value,
                phi.name()
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct CliqueDecisionOutcome {
    pub decision: bool,
    /// The biclique side used by the gadget.
    pub ell: usize,
    /// Recovered clique count (exact mode) or residues (one per repetition).
    pub recovered: Vec<CountResult>,
    pub transcript: PipelineTranscript,
}

/// Decides whether `g` contains a clique on `k` vertices, exclusively
/// through the oracle chain (padding, parsimonious gadget, tensor queries,
/// decoloring, simulated induced-subgraph counting).
///
/// Exact mode is deterministic: answer "yes" iff the recovered count is
/// positive. Mod-p mode isolates by random half-density vertex deletion and
/// repeats `2^k` times; any nonzero residue certifies a clique, so the
/// decision errs only toward "no".
pub fn pipeline_clique_decision(
    phi: &Property,
    g: &Graph,
    k: usize,
    mode: CountMode,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<CliqueDecisionOutcome> {
    if k == 0 {
        return Err(Error::Unsupported("clique size must be at least 1".into()));
    }
    let ell = choose_witness_side(phi, g.n(), k, mode, opts)?;
    let padded = pad_clique(g, k, ell)?;
    let pattern = complete_bipartite(ell, ell)?;
    let lc = cp_indsub_coefficients(phi, &pattern)?;
    let matrix = cached_matrix(&pattern, mode)?;
    let mut stages = vec![StageRecord::plain(
        "pad",
        format!("padded to {} vertices for clique size {ell}", padded.n()),
    )];
    let repetitions = match mode {
        CountMode::Exact => 1u32,
        CountMode::Mod(_) => opts.repetitions.unwrap_or(1 << k.min(20)),
    };
    let mut recovered = Vec::with_capacity(repetitions as usize);
    let mut decision = false;
    for rep in 0..repetitions {
        let (target, tag) = match mode {
            CountMode::Exact => (padded.clone(), String::new()),
            CountMode::Mod(_) => {
                let mut rng = rng_for(seed, &format!("isolation:{rep}"));
                let isolated = random_isolation(&padded, &mut rng);
                let tag = format!("[{rep}]");
                stages.push(StageRecord::plain(
                    format!("isolation{tag}"),
                    format!("kept {} of {} vertices", isolated.n(), padded.n()),
                ));
                (isolated, tag)
            }
        };
        let cg = clique_gadget(&target, ell)?;
        stages.push(StageRecord::plain(
            format!("clique_gadget{tag}"),
            format!("host on {} vertices", cg.host().n()),
        ));
        let solved = run_gadget_chain(phi, &cg, &lc, &matrix, mode, opts, &mut stages, &tag)?;
        let value = solved
            .full_term()
            .cloned()
            .ok_or_else(|| Error::Invariant("full-edge-set term was not recoverable".into()))?;
        decision = decision || !value.is_zero();
        recovered.push(value);
        if decision && opts.stop_on_hit && matches!(mode, CountMode::Mod(_)) {
            break;
        }
    }
    let transcript = PipelineTranscript {
        mode: mode_label(mode),
        seed: matches!(mode, CountMode::Mod(_)).then_some(seed),
        stages,
        final_value: if decision { "yes".into() } else { "no".into() },
    };
    Ok(CliqueDecisionOutcome {
        decision,
        ell,
        recovered,
        transcript,
    })
}

/// Picks the smallest usable witness: a prime power `l >= max(k, 2)` in the
/// property's witness set whose gadget fits the vertex cap, whose evaluation
/// matrix fits the solver cap, and whose alternating enumerator is a unit in
/// mod-p mode.
fn choose_witness_side(
    phi: &Property,
    n: usize,
    k: usize,
    mode: CountMode,
    opts: &PipelineOptions,
) -> Result<usize> {
    let ws = witness_set(phi, opts.witness_bound)?;
    let mut reasons = Vec::new();
    for &t in &ws.members {
        let ell = t as usize;
        if ell < k.max(2) {
            continue;
        }
        let padded_n = n + ell - k.min(ell);
        if 2 * ell * padded_n > crate::caps::MAX_VERTICES {
            reasons.push(format!("l={ell}: gadget exceeds the vertex cap"));
            continue;
        }
        if ell * ell > 10 {
            reasons.push(format!("l={ell}: evaluation matrix exceeds the solver cap"));
            continue;
        }
        if check_pattern_usable(phi, ell, mode).is_err() {
            reasons.push(format!("l={ell}: enumerator is not a unit in this mode"));
            continue;
        }
        return Ok(ell);
    }
    Err(Error::Unsupported(format!(
        "no usable witness side for {:?} with k={k} within bound {}: {}",
        phi.name(),
        opts.witness_bound,
        if reasons.is_empty() { "witness set empty above k".to_string() } else { reasons.join("; ") }
    )))
}

/// One monotonicity+decolor pass over a colored host, using the fused
/// evaluator for the simulated oracle answers and a playback closure to
/// feed them to the solver in query order.
#[allow(clippy::too_many_arguments)]
fn run_gadget_chain(
    phi: &Property,
    cg: &ColoredGraph,
    lc: &LinearCombination,
    matrix: &CpHomMatrix,
    mode: CountMode,
    opts: &PipelineOptions,
    stages: &mut Vec<StageRecord>,
    tag: &str,
) -> Result<RecoveredTerms> {
    let fused = simulate_tensor_queries_fused(phi, cg, mode, opts.enum_budget, opts.transcript_query_limit)?;
    let mut next = 0usize;
    let order = matrix.order().to_vec();
    let mut playback = |query: &ColoredGraph| -> Result<CountResult> {
        debug_assert_eq!(query.host().n(), cg.host().n());
        let mask = order[next];
        next += 1;
        Ok(fused.y_by_mask[mask as usize].clone())
    };
    let solved = monotonicity_solve_with_matrix(lc, cg, matrix, &mut playback, mode)?;
    stages.push(StageRecord::with_queries(
        format!("monotonicity{tag}"),
        solved.queries.clone(),
        format!("recovered {} terms", solved.order().len()),
        opts.transcript_query_limit,
    ));
    stages.push(StageRecord {
        name: format!("decolor{tag}"),
        total_queries: fused.total_queries,
        max_query_vertices: fused.max_query_vertices,
        truncated: fused.truncated,
        queries: fused.records,
        output: "inclusion-exclusion over deleted color classes".into(),
    });
    Ok(solved)
}

/// Answers to all `2^|E(H)|` tensor queries of a monotonicity solve, with
/// the decolor-level query log, computed in one fused sweep.
pub(crate) struct FusedTensorResults {
    pub y_by_mask: Vec<CountResult>,
    pub records: Vec<QueryRecord>,
    pub truncated: bool,
    pub total_queries: u64,
    pub max_query_vertices: usize,
}

/// Computes `#cp-IndSub(phi, tensor(cg, H[T]))` for every `T` at once.
///
/// The tensor with an identity-colored edge-subgraph only filters host
/// edges by the color pair's membership in `T`, and deleting color classes
/// commutes with that filter. So the vertex k-subsets of the host are
/// enumerated once: each subset's induced host edges are bucketed by
/// pattern edge index, a subset-lattice sweep adds the property-table bit
/// into a per-(T, color support) tally, and the count for a deletion set
/// `J` is the sum of the tallies over supports disjoint from `J`. The
/// per-(T, J) counts are exactly what the per-query decoloring chain would
/// have produced, in the same order.
pub(crate) fn simulate_tensor_queries_fused(
    phi: &Property,
    cg: &ColoredGraph,
    mode: CountMode,
    budget: u128,
    record_limit: usize,
) -> Result<FusedTensorResults> {
    let h = cg.pattern();
    let m = h.edge_count();
    let k = h.n();
    if m > 16 || k > 10 {
        return Err(Error::CapExceeded {
            what: "fused evaluation pattern size",
            cap: 16,
            actual: m.max(k),
        });
    }
    let masks = 1usize << m;
    let order = super::matrix::subset_order(m);
    if !cg.is_surjective() {
        // Every tensor query inherits the empty class, so decoloring
        // answers all of them with zero and no oracle calls.
        return Ok(FusedTensorResults {
            y_by_mask: vec![CountResult::zero(mode); masks],
            records: Vec::new(),
            truncated: false,
            total_queries: 0,
            max_query_vertices: 0,
        });
    }
    let table = PropertyTable::build(phi, k).ok_or(Error::CapExceeded {
        what: "fused evaluation pattern vertices",
        cap: 7,
        actual: k,
    })?;
    // Pattern-edge index by color pair.
    let mut edge_of_colors = vec![usize::MAX; k * k];
    for (i, &(a, b)) in h.edges().iter().enumerate() {
        edge_of_colors[a as usize * k + b as usize] = i;
        edge_of_colors[b as usize * k + a as usize] = i;
    }
    let host = cg.host();
    let deletions = 1usize << k;
    let survivors_per_j: Vec<usize> = (0..deletions as u64)
        .map(|j| {
            (0..host.n())
                .filter(|&v| (j >> cg.coloring()[v]) & 1 == 0)
                .count()
        })
        .collect();
    if binomial(host.n(), k) > budget {
        return Err(Error::BudgetExceeded {
            n: host.n(),
            k,
            combinations: binomial(host.n(), k),
            budget,
        });
    }
    // One enumeration pass over all k-subsets of the host, tallied by the
    // set of colors the subset touches. Parallelized over the smallest
    // chosen vertex.
    let supports = 1usize << k;
    let tally_chunks: Vec<(Vec<u64>, Vec<u64>)> = (0..host.n().saturating_sub(k - 1))
        .into_par_iter()
        .map(|first| {
            // Subsets whose minimal vertex is `first`.
            let rest: Vec<usize> = (first + 1..host.n()).collect();
            let mut tally = vec![0u64; supports * masks];
            let mut empty_by_support = vec![0u64; supports];
            let table0 = u64::from(table.eval_mask(0));
            let mut dp = vec![0u32; masks];
            let mut chosen = vec![0usize; k];
            chosen[0] = first;
            let mut combos = Combinations::new(rest.len(), k - 1);
            while let Some(sub) = combos.next() {
                for (slot, &local) in sub.iter().enumerate() {
                    chosen[slot + 1] = rest[local];
                }
                let mut support = 0usize;
                let mut pm = [0u32; 16];
                let mut any = false;
                let mut t_idx = 0usize;
                for (b, &vb) in chosen.iter().enumerate() {
                    support |= 1 << cg.coloring()[vb];
                    let row = host.adj_row(vb);
                    let cb = cg.coloring()[vb] as usize;
                    for &va in chosen.iter().take(b) {
                        if (row >> va) & 1 == 1 {
                            let e = edge_of_colors[cg.coloring()[va] as usize * k + cb];
                            debug_assert_ne!(e, usize::MAX);
                            pm[e] |= 1 << t_idx;
                            any = true;
                        }
                        t_idx += 1;
                    }
                }
                if !any {
                    empty_by_support[support] += 1;
                    continue;
                }
                // Subset-lattice sweep: induced pair mask per T, then the
                // table bit into this support's tally row.
                let row = &mut tally[support * masks..(support + 1) * masks];
                row[0] += table0;
                for t_mask in 1..masks {
                    let low = t_mask & t_mask.wrapping_neg();
                    let e = low.trailing_zeros() as usize;
                    let mask = dp[t_mask ^ low] | pm[e];
                    dp[t_mask] = mask;
                    row[t_mask] += u64::from(table.eval_mask(mask as u64));
                }
            }
            (tally, empty_by_support)
        })
        .collect();
    let mut tally = vec![0u64; supports * masks];
    let mut empty_by_support = vec![0u64; supports];
    for (t, e) in tally_chunks {
        for (acc, v) in tally.iter_mut().zip(t) {
            *acc += v;
        }
        for (acc, v) in empty_by_support.iter_mut().zip(e) {
            *acc += v;
        }
    }
    let table0 = u64::from(table.eval_mask(0));
    if table0 == 1 {
        for support in 0..supports {
            if empty_by_support[support] > 0 {
                let row = &mut tally[support * masks..(support + 1) * masks];
                for c in row.iter_mut() {
                    *c += empty_by_support[support];
                }
            }
        }
    }
    // counts_by_j[J][T] = sum of tallies over supports avoiding J: exactly
    // the k-subsets of the J-deleted host.
    let counts_by_j: Vec<Vec<u64>> = (0..deletions)
        .map(|j| {
            let mut counts_t = vec![0u64; masks];
            for support in 0..supports {
                if support & j == 0 {
                    let row = &tally[support * masks..(support + 1) * masks];
                    for (acc, v) in counts_t.iter_mut().zip(row) {
                        *acc += v;
                    }
                }
            }
            counts_t
        })
        .collect();
    // Alternating combination over deletion sets.
    let mut y_by_mask = Vec::with_capacity(masks);
    for t_mask in 0..masks {
        let mut acc: i128 = 0;
        for (j, counts_t) in counts_by_j.iter().enumerate() {
            let term = counts_t[t_mask] as i128;
            if (j.count_ones() & 1) == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        let value = match mode {
            CountMode::Exact => {
                if acc < 0 {
                    return Err(Error::Invariant(format!(
                        "inclusion-exclusion produced negative count {acc}"
                    )));
                }
                CountResult::Exact(BigUint::from(acc as u128))
            }
            CountMode::Mod(p) => CountResult::Residue {
                value: acc.rem_euclid(p as i128) as u64,
                modulus: p,
            },
        };
        y_by_mask.push(value);
    }
    // Query log ordered exactly like the per-query chain: tensor queries in
    // (popcount, mask) order, each expanding into deletions by ascending J.
    let total_queries = (masks * deletions) as u64;
    let max_query_vertices = survivors_per_j.iter().copied().max().unwrap_or(0);
    let mut records = Vec::with_capacity(total_queries.min(record_limit as u64) as usize);
    let truncated = total_queries > record_limit as u64;
    'fill: for &t_mask in &order {
        for j in 0..deletions {
            if records.len() >= record_limit {
                break 'fill;
            }
            let response = match mode {
                CountMode::Exact => counts_by_j[j][t_mask as usize].to_string(),
                CountMode::Mod(p) => (counts_by_j[j][t_mask as usize] % p).to_string(),
            };
            records.push(QueryRecord {
                n_vertices: survivors_per_j[j],
                k,
                response,
            });
        }
    }
    Ok(FusedTensorResults {
        y_by_mask,
        records,
        truncated,
        total_queries,
        max_query_vertices,
    })
}
