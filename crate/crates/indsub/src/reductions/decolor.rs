//! Decoloring: recovering a color-prescribed induced-subgraph count from an
//! uncolored induced-subgraph counting oracle by inclusion-exclusion over
//! deleted color classes. For a pattern on `k` vertices this issues exactly
//! `2^k` oracle calls, every query graph no larger than the host; a
//! non-surjective coloring short-circuits to zero with no calls at all.

use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use super::QueryRecord;
use crate::counting::{ColoredGraph, CountMode, CountResult};
use crate::graph::Graph;
use crate::{Error, Result};

/// The oracle: given a graph and the subgraph size `k`, the number of
/// k-vertex induced subgraphs satisfying the (implicit) property.
pub type IndSubOracle<'a> = dyn FnMut(&Graph, usize) -> Result<CountResult> + 'a;

#[derive(Clone, Debug)]
pub struct DecolorOutcome {
    pub value: CountResult,
    pub queries: Vec<QueryRecord>,
}

pub fn decolor_count(
    cg: &ColoredGraph,
    mode: CountMode,
    oracle: &mut IndSubOracle,
) -> Result<DecolorOutcome> {
    if !cg.is_surjective() {
        return Ok(DecolorOutcome {
            value: CountResult::zero(mode),
            queries: Vec::new(),
        });
    }
    let k = cg.pattern().n();
    if k > 16 {
        return Err(Error::CapExceeded {
            what: "decoloring pattern vertices",
            cap: 16,
            actual: k,
        });
    }
    let host = cg.host();
    let mut queries = Vec::with_capacity(1 << k);
    let mut exact_acc = BigInt::zero();
    let mut mod_acc: i128 = 0;
    for deleted in 0..(1u64 << k) {
        let mut keep: u64 = 0;
        for v in 0..host.n() {
            if (deleted >> cg.coloring()[v]) & 1 == 0 {
                keep |= 1 << v;
            }
        }
        let sub = host.induced_by_mask(keep);
        debug_assert!(sub.n() <= host.n());
        let response = oracle(&sub, k)?;
        queries.push(QueryRecord {
            n_vertices: sub.n(),
            k,
            response: response.to_decimal(),
        });
        let negative = deleted.count_ones() % 2 == 1;
        match (&response, mode) {
            (CountResult::Exact(v), CountMode::Exact) => {
                let term = BigInt::from(v.clone());
                if negative {
                    exact_acc -= term;
                } else {
                    exact_acc += term;
                }
            }
            (CountResult::Residue { value, modulus }, CountMode::Mod(p)) => {
                if *modulus != p {
                    return Err(Error::Invariant(format!(
                        "oracle answered mod {modulus}, expected mod {p}"
                    )));
                }
                mod_acc += if negative { -(*value as i128) } else { *value as i128 };
            }
            _ => return Err(Error::Invariant("oracle mode mismatch".into())),
        }
    }
    let value = match mode {
        CountMode::Exact => {
            if exact_acc.sign() == Sign::Minus {
                return Err(Error::Invariant(format!(
                    "inclusion-exclusion produced negative count {exact_acc}"
                )));
            }
            CountResult::Exact(exact_acc.to_biguint().expect("non-negative"))
        }
        CountMode::Mod(p) => CountResult::Residue {
            value: mod_acc.rem_euclid(p as i128) as u64,
            modulus: p,
        },
    };
    Ok(DecolorOutcome { value, queries })
}
