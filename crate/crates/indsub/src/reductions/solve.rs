//! Recovering the individual terms of a linear combination of
//! color-prescribed homomorphism counts from oracle access to the combined
//! value: query the oracle on the tensor product of the host with every
//! identity-colored pattern edge-subgraph, solve the resulting
//! unitriangular system by substitution, and divide out each nonzero
//! coefficient. Terms whose coefficient vanishes (or is a zero divisor in
//! mod-p mode) are reported unrecoverable rather than failing the solve.

use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use super::matrix::cp_hom_matrix_with_cap;
use super::{tensor, LinearCombination, QueryRecord};
use crate::arith::mod_inverse;
use crate::counting::{ColoredGraph, CountMode, CountResult};
use crate::graph::EdgeSubset;
use crate::{Error, Result};

/// The oracle: the value `sum_S a(S) * #cp-Hom(H[S], query)` for an
/// `H`-colored query graph.
pub type CpIndSubOracle<'a> = dyn FnMut(&ColoredGraph) -> Result<CountResult> + 'a;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermStatus {
    Recovered(CountResult),
    /// Coefficient is zero (or divisible by the modulus); the term cannot
    /// be isolated from this combination.
    Unrecoverable,
}

/// Result of a monotonicity solve: per-subset term status plus the oracle
/// query log (one query per edge subset, in (popcount, mask) order).
#[derive(Clone, Debug)]
pub struct RecoveredTerms {
    width: usize,
    /// Masks in query order.
    order: Vec<u64>,
    /// Status per mask (indexed by mask value, not order position).
    status: Vec<TermStatus>,
    pub queries: Vec<QueryRecord>,
}

impl RecoveredTerms {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn order(&self) -> &[u64] {
        &self.order
    }

    pub fn status(&self, mask: u64) -> &TermStatus {
        &self.status[mask as usize]
    }

    /// The recovered count for a subset, if its coefficient was a unit.
    pub fn recovered(&self, mask: u64) -> Option<&CountResult> {
        match &self.status[mask as usize] {
            TermStatus::Recovered(c) => Some(c),
            TermStatus::Unrecoverable => None,
        }
    }

    /// The recovered count for the full edge set.
    pub fn full_term(&self) -> Option<&CountResult> {
        self.recovered((1u64 << self.width) - 1)
    }
}

/// Runs the oracle over all tensor queries and solves for every term
/// `a(S) * #cp-Hom(H[S], cg)`, returning `#cp-Hom(H[S], cg)` wherever the
/// coefficient divides out.
pub fn monotonicity_solve(
    lc: &LinearCombination,
    cg: &ColoredGraph,
    oracle: &mut CpIndSubOracle,
    mode: CountMode,
) -> Result<RecoveredTerms> {
    // The matrix is computed honestly for the pattern at hand; patterns in
    // the pipelines stay at or below 10 edges (1024 x 1024).
    let matrix = cp_hom_matrix_with_cap(cg.pattern(), mode, 10)?;
    monotonicity_solve_with_matrix(lc, cg, &matrix, oracle, mode)
}

/// [`monotonicity_solve`] with a caller-supplied evaluation matrix, so
/// repeated solves over the same pattern share one matrix.
pub fn monotonicity_solve_with_matrix(
    lc: &LinearCombination,
    cg: &ColoredGraph,
    matrix: &super::matrix::CpHomMatrix,
    oracle: &mut CpIndSubOracle,
    mode: CountMode,
) -> Result<RecoveredTerms> {
    if lc.pattern() != cg.pattern() || matrix.pattern() != cg.pattern() {
        return Err(Error::PatternMismatch);
    }
    if matrix.mode() != mode {
        return Err(Error::Invariant("evaluation matrix mode mismatch".into()));
    }
    let h = cg.pattern().clone();
    let m = h.edge_count();
    let order = matrix.order().to_vec();
    let mut queries = Vec::with_capacity(order.len());
    let mut y_exact: Vec<BigInt> = Vec::new();
    let mut y_mod: Vec<u64> = Vec::new();
    for &t in &order {
        let factor = ColoredGraph::identity_colored(&h, EdgeSubset::new(t, m)?)?;
        let query = tensor(cg, &factor)?;
        let response = oracle(&query)?;
        queries.push(QueryRecord {
            n_vertices: query.host().n(),
            k: h.n(),
            response: response.to_decimal(),
        });
        match (&response, mode) {
            (CountResult::Exact(v), CountMode::Exact) => {
                y_exact.push(BigInt::from(v.clone()));
            }
            (CountResult::Residue { value, modulus }, CountMode::Mod(p)) => {
                if *modulus != p {
                    return Err(Error::Invariant(format!(
                        "oracle answered mod {modulus}, expected mod {p}"
                    )));
                }
                y_mod.push(*value);
            }
            _ => return Err(Error::Invariant("oracle mode mismatch".into())),
        }
    }
    let mut status = vec![TermStatus::Unrecoverable; 1 << m];
    match mode {
        CountMode::Exact => {
            let b = matrix.solve_substitution(&y_exact)?;
            for (pos, &mask) in order.iter().enumerate() {
                let a = lc.coeff(mask);
                if a == 0 {
                    // a(S) = 0 forces b_S = 0; anything else is a bug.
                    if !b[pos].is_zero() {
                        return Err(Error::Invariant(format!(
                            "term {mask:#b} has zero coefficient but solved value {}",
                            b[pos]
                        )));
                    }
                    continue;
                }
                let (q, r) = num_integer::Integer::div_rem(&b[pos], &BigInt::from(a));
                if !r.is_zero() {
                    return Err(Error::Invariant(format!(
                        "term {mask:#b}: {} is not divisible by coefficient {a}",
                        b[pos]
                    )));
                }
                if q.sign() == Sign::Minus {
                    return Err(Error::Invariant(format!(
                        "term {mask:#b} recovered a negative count {q}"
                    )));
                }
                status[mask as usize] =
                    TermStatus::Recovered(CountResult::Exact(q.to_biguint().expect("non-negative")));
            }
        }
        CountMode::Mod(p) => {
            let b = matrix.solve_substitution_mod(&y_mod, p)?;
            for (pos, &mask) in order.iter().enumerate() {
                let a = lc.coeff(mask).rem_euclid(p as i64) as u64;
                match mod_inverse(a, p) {
                    None => {
                        // Residual consistency: a = 0 mod p forces b = 0 mod p.
                        if lc.coeff(mask) == 0 && b[pos] % p != 0 {
                            return Err(Error::Invariant(format!(
                                "term {mask:#b} has zero coefficient but residue {}",
                                b[pos]
                            )));
                        }
                    }
                    Some(inv) => {
                        status[mask as usize] = TermStatus::Recovered(CountResult::Residue {
                            value: b[pos] as u128 as u64 * inv % p,
                            modulus: p,
                        });
                    }
                }
            }
        }
    }
    Ok(RecoveredTerms {
        width: m,
        order,
        status,
        queries,
    })
}
