//! The evaluation matrix of color-prescribed homomorphism counts between
//! edge-subgraphs of a pattern, `M(S,T) = #cp-Hom(H[S], H[T])` with the
//! codomain identity-colored. Ordered by (popcount, mask) — a linear
//! extension of subset inclusion — the matrix is unitriangular, which makes
//! the linear systems of the reduction solvable by substitution alone, in
//! exact arithmetic and modulo every prime.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::counting::{count_cp_hom, ColoredGraph, CountMode};
use crate::graph::{EdgeSubset, Graph};
use crate::{Error, Result};

/// Masks of all edge subsets of a width-`m` pattern, sorted by
/// (popcount, mask) ascending.
pub fn subset_order(m: usize) -> Vec<u64> {
    let mut order: Vec<u64> = (0..(1u64 << m)).collect();
    order.sort_by_key(|&mask| (mask.count_ones(), mask));
    order
}

/// The full `2^m x 2^m` evaluation matrix of a pattern, with rows and
/// columns in (popcount, mask) order. Entries are computed by the honest
/// color-prescribed counter, not assumed.
#[derive(Clone, Debug)]
pub struct CpHomMatrix {
    pattern: Graph,
    mode: CountMode,
    order: Vec<u64>,
    /// Row-major: `entries[row][col] = M(order[row], order[col])`.
    entries: Vec<Vec<u64>>,
}

pub fn cp_hom_matrix(h: &Graph, mode: CountMode) -> Result<CpHomMatrix> {
    cp_hom_matrix_with_cap(h, mode, crate::caps::DEFAULT_MATRIX_EDGE_CAP)
}

pub fn cp_hom_matrix_with_cap(h: &Graph, mode: CountMode, edge_cap: usize) -> Result<CpHomMatrix> {
    let m = h.edge_count();
    if m > edge_cap {
        return Err(Error::CapExceeded {
            what: "evaluation matrix edges",
            cap: edge_cap,
            actual: m,
        });
    }
    let order = subset_order(m);
    let size = order.len();
    let mut entries = vec![vec![0u64; size]; size];
    for (col, &t) in order.iter().enumerate() {
        let cg = ColoredGraph::identity_colored(h, EdgeSubset::new(t, m)?)?;
        for (row, &s) in order.iter().enumerate() {
            let count = count_cp_hom(EdgeSubset::new(s, m)?, &cg, mode)?;
            entries[row][col] = match (&count, mode) {
                (crate::counting::CountResult::Exact(v), CountMode::Exact) => {
                    let digits: Vec<u64> = v.iter_u64_digits().collect();
                    match digits.len() {
                        0 => 0,
                        1 => digits[0],
                        _ => {
                            return Err(Error::Invariant(
                                "evaluation matrix entry exceeds u64".into(),
                            ))
                        }
                    }
                }
                (crate::counting::CountResult::Residue { value, .. }, CountMode::Mod(_)) => *value,
                _ => unreachable!("mode mismatch"),
            };
        }
    }
    Ok(CpHomMatrix {
        pattern: h.clone(),
        mode,
        order,
        entries,
    })
}

impl CpHomMatrix {
    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn mode(&self) -> CountMode {
        self.mode
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }

    /// Row/column mask order: (popcount, mask) ascending.
    pub fn order(&self) -> &[u64] {
        &self.order
    }

    /// Entry by position in the order.
    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.entries[row][col]
    }

    /// All entries strictly below the diagonal are zero and the diagonal is
    /// all ones.
    pub fn is_unitriangular(&self) -> bool {
        let size = self.size();
        (0..size).all(|row| {
            self.entries[row][row] == 1 && (0..row).all(|col| self.entries[row][col] == 0)
        })
    }

    /// Determinant by fraction-free elimination; sizes are capped because
    /// intermediate values grow quickly. Unitriangularity already forces 1,
    /// so this exists as an independent cross-check on small patterns.
    pub fn determinant(&self) -> Result<BigInt> {
        let size = self.size();
        if size > 64 {
            return Err(Error::CapExceeded {
                what: "determinant size",
                cap: 64,
                actual: size,
            });
        }
        let mut a: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..size {
            if a[k][k].is_zero() {
                let Some(swap) = (k + 1..size).find(|&r| !a[r][k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * a[size - 1][size - 1].clone())
    }

    /// Solves `sum_S M(S,T) * b_S = y_T` for `b` by forward substitution
    /// over the (popcount, mask) order, exploiting unitriangularity. `y` is
    /// indexed by position in [`Self::order`]; so is the result.
    pub fn solve_substitution(&self, y: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.size() != y.len() {
            return Err(Error::Invariant(format!(
                "system size mismatch: {} vs {}",
                self.size(),
                y.len()
            )));
        }
        if !self.is_unitriangular() {
            return Err(Error::Invariant("evaluation matrix is not unitriangular".into()));
        }
        let size = self.size();
        let mut b = vec![BigInt::zero(); size];
        for col in 0..size {
            let mut acc = y[col].clone();
            for row in 0..col {
                if self.entries[row][col] != 0 {
                    acc -= BigInt::from(self.entries[row][col]) * &b[row];
                }
            }
            // Diagonal entry is 1.
            b[col] = acc;
        }
        Ok(b)
    }

    /// Mod-p variant of [`Self::solve_substitution`].
    pub fn solve_substitution_mod(&self, y: &[u64], p: u64) -> Result<Vec<u64>> {
        if self.size() != y.len() {
            return Err(Error::Invariant(format!(
                "system size mismatch: {} vs {}",
                self.size(),
                y.len()
            )));
        }
        if !self.is_unitriangular() {
            return Err(Error::Invariant("evaluation matrix is not unitriangular".into()));
        }
        let size = self.size();
        let mut b = vec![0u64; size];
        for col in 0..size {
            let mut acc = y[col] as i128;
            for row in 0..col {
                acc -= self.entries[row][col] as i128 * b[row] as i128 % p as i128;
            }
            b[col] = acc.rem_euclid(p as i128) as u64;
        }
        Ok(b)
    }

    /// Solves the same system by general Gaussian elimination with partial
    /// pivoting over the rationals. Mathematically identical to the
    /// substitution solver; kept as the independent route for cross-checks.
    pub fn solve_gaussian(&self, y: &[BigInt]) -> Result<Vec<BigInt>> {
        let size = self.size();
        if size != y.len() {
            return Err(Error::Invariant("system size mismatch".into()));
        }
        // Augmented system over BigRational; unknowns ordered like columns.
        // Equation index = column T of the matrix.
        let mut a: Vec<Vec<BigRational>> = (0..size)
            .map(|eq| {
                (0..size)
                    .map(|var| BigRational::from_integer(BigInt::from(self.entries[var][eq])))
                    .collect()
            })
            .collect();
        let mut rhs: Vec<BigRational> = y.iter().map(|v| BigRational::from_integer(v.clone())).collect();
        for col in 0..size {
            let pivot = (col..size)
                .max_by_key(|&r| a[r][col].abs())
                .filter(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::Invariant("singular evaluation matrix".into()))?;
            a.swap(col, pivot);
            rhs.swap(col, pivot);
            let inv = a[col][col].clone();
            for r in 0..size {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] / &inv;
                for c in col..size {
                    let delta = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - delta;
                }
                let delta = &factor * &rhs[col];
                rhs[r] = &rhs[r] - delta;
            }
        }
        let mut out = vec![BigInt::zero(); size];
        for col in 0..size {
            let value = &rhs[col] / &a[col][col];
            if !value.is_integer() {
                return Err(Error::Invariant("gaussian solution is not integral".into()));
            }
            out[col] = value.to_integer();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, complete_bipartite, path};
    use num_traits::ToPrimitive;

    #[test]
    fn single_edge_matrix_is_the_two_by_two_zeta() {
        let k2 = clique(2).unwrap();
        let m = cp_hom_matrix(&k2, CountMode::Exact).unwrap();
        assert_eq!(m.order(), &[0, 1]);
        assert_eq!(
            vec![vec![m.entry(0, 0), m.entry(0, 1)], vec![m.entry(1, 0), m.entry(1, 1)]],
            vec![vec![1, 1], vec![0, 1]]
        );
    }

    #[test]
    fn unitriangular_in_all_modes() {
        let patterns = [
            clique(2).unwrap(),
            path(3).unwrap(),
            clique(3).unwrap(),
            complete_bipartite(2, 2).unwrap(),
        ];
        for h in &patterns {
            for mode in [CountMode::Exact, CountMode::Mod(2), CountMode::Mod(3), CountMode::Mod(5)] {
                let m = cp_hom_matrix(h, mode).unwrap();
                assert!(m.is_unitriangular(), "{h:?} in {mode:?}");
            }
            let det = cp_hom_matrix(h, CountMode::Exact).unwrap().determinant().unwrap();
            assert_eq!(det.to_i64(), Some(1), "{h:?}");
        }
    }

    #[test]
    fn substitution_matches_gaussian() {
        use num_bigint::BigInt;
        let h = path(3).unwrap();
        let m = cp_hom_matrix(&h, CountMode::Exact).unwrap();
        let y: Vec<BigInt> = vec![7, 11, 13, 20].into_iter().map(BigInt::from).collect();
        let subst = m.solve_substitution(&y).unwrap();
        let gauss = m.solve_gaussian(&y).unwrap();
        assert_eq!(subst, gauss);
        // Residual check: M^T applied to b reproduces y.
        for (eq, want) in y.iter().enumerate() {
            let mut acc = BigInt::from(0);
            for var in 0..m.size() {
                acc += BigInt::from(m.entry(var, eq)) * &subst[var];
            }
            assert_eq!(&acc, want);
        }
    }

    #[test]
    fn mod_solver_matches_exact_reduction() {
        let h = complete_bipartite(2, 2).unwrap();
        let m_exact = cp_hom_matrix(&h, CountMode::Exact).unwrap();
        let y: Vec<num_bigint::BigInt> =
            (0..m_exact.size() as i64).map(|i| num_bigint::BigInt::from(3 * i + 1)).collect();
        let b = m_exact.solve_substitution(&y).unwrap();
        for p in [2u64, 3, 5] {
            let m_mod = cp_hom_matrix(&h, CountMode::Mod(p)).unwrap();
            let y_mod: Vec<u64> = y
                .iter()
                .map(|v| (v % num_bigint::BigInt::from(p)).to_u64().unwrap_or(0))
                .collect();
            let b_mod = m_mod.solve_substitution_mod(&y_mod, p).unwrap();
            for (exact, residue) in b.iter().zip(&b_mod) {
                use num_integer::Integer;
                let want = exact.mod_floor(&num_bigint::BigInt::from(p)).to_u64().unwrap();
                assert_eq!(want, *residue, "p = {p}");
            }
        }
    }
}
