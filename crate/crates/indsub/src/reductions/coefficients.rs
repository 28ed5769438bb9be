//! The expansion of property-restricted color-prescribed induced-subgraph
//! counts as a linear combination of color-prescribed homomorphism counts
//! over the edge subsets of the pattern:
//!
//! `#cp-IndSub(phi, G) = sum_W a(W) * #cp-Hom(H[W], G)` with
//! `a(W) = sum_{S subset of W} phi(H[S]) * (-1)^{|W \ S|}`,
//!
//! i.e. the Moebius transform of the property over the subset lattice. The
//! coefficient of the full edge set has the same absolute value as the
//! alternating enumerator of the property.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::counting::{count_cp_hom, ColoredGraph, CountMode};
use crate::graph::{EdgeSubset, Graph};
use crate::properties::Property;
use crate::{Error, Result};

/// Integer coefficients over all edge subsets of a pattern.
#[derive(Clone, Debug)]
pub struct LinearCombination {
    pattern: Graph,
    coeffs: Vec<i64>,
}

impl LinearCombination {
    /// Wraps explicit coefficients; `coeffs[mask]` multiplies the count of
    /// the edge-subgraph selected by `mask`.
    pub fn from_coefficients(pattern: Graph, coeffs: Vec<i64>) -> Result<Self> {
        let expected = 1usize << pattern.edge_count();
        if coeffs.len() != expected {
            return Err(Error::TableSizeMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(LinearCombination { pattern, coeffs })
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn width(&self) -> usize {
        self.pattern.edge_count()
    }

    pub fn coeff(&self, mask: u64) -> i64 {
        self.coeffs[mask as usize]
    }

    /// Coefficient of the full edge set.
    pub fn full_coefficient(&self) -> i64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// Evaluates the combination against a colored host by brute force,
    /// for cross-checks: `sum_W a(W) * #cp-Hom(H[W], host)`.
    pub fn evaluate(&self, cg: &ColoredGraph) -> Result<BigInt> {
        if cg.pattern() != &self.pattern {
            return Err(Error::PatternMismatch);
        }
        let m = self.width();
        let mut acc = BigInt::zero();
        for (mask, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let count = count_cp_hom(EdgeSubset::new(mask as u64, m)?, cg, CountMode::Exact)?;
            let count = BigInt::from(count.as_exact().expect("exact mode").clone());
            acc += BigInt::from(a) * count;
        }
        Ok(acc)
    }
}

/// Coefficients of the expansion for a property on a pattern, by the
/// subset Moebius transform of the property's truth table.
pub fn cp_indsub_coefficients(phi: &Property, h: &Graph) -> Result<LinearCombination> {
    let m = h.edge_count();
    if m > crate::caps::DEFAULT_SUBSET_EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "coefficient edges",
            cap: crate::caps::DEFAULT_SUBSET_EDGE_CAP,
            actual: m,
        });
    }
    let size = 1usize << m;
    let mut coeffs = vec![0i64; size];
    let mut scratch = Graph::empty(0)?;
    for mask in 0..size as u64 {
        scratch.assign_edge_subgraph(h, mask);
        coeffs[mask as usize] = i64::from(phi.eval(&scratch));
    }
    // In-place Moebius transform: f[W] -= f[W without bit i].
    for bit in 0..m {
        for mask in 0..size {
            if (mask >> bit) & 1 == 1 {
                coeffs[mask] -= coeffs[mask ^ (1 << bit)];
            }
        }
    }
    Ok(LinearCombination {
        pattern: h.clone(),
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi::chi_naive;
    use crate::counting::count_cp_indsub_prop;
    use crate::gen::{colored_host, rng_for};
    use crate::graph::{clique, complete_bipartite};
    use crate::properties;

    #[test]
    fn const_true_collapses_to_the_empty_term() {
        let h = complete_bipartite(2, 2).unwrap();
        let lc = cp_indsub_coefficients(&properties::const_true(), &h).unwrap();
        assert_eq!(lc.coeff(0), 1);
        for mask in 1..(1u64 << 4) {
            assert_eq!(lc.coeff(mask), 0, "mask {mask:#b}");
        }
    }

    #[test]
    fn full_coefficient_matches_alternating_enumerator() {
        let patterns = [
            clique(2).unwrap(),
            clique(3).unwrap(),
            complete_bipartite(2, 2).unwrap(),
        ];
        for h in &patterns {
            for phi in [
                properties::connected(),
                properties::eulerian(),
                properties::even_edges(),
                properties::bipartite(),
                properties::const_true(),
            ] {
                let lc = cp_indsub_coefficients(&phi, h).unwrap();
                let chi = chi_naive(&phi, h).unwrap();
                assert_eq!(
                    lc.full_coefficient().abs(),
                    chi.value.abs(),
                    "{} on {h:?}",
                    phi.name()
                );
                // The sign is fixed by the parity of the edge count.
                let sign = if h.edge_count() % 2 == 0 { 1 } else { -1 };
                assert_eq!(lc.full_coefficient(), sign * chi.value);
            }
        }
    }

    #[test]
    fn expansion_identity_on_random_hosts() {
        let mut rng = rng_for(21, "expansion");
        for trial in 0..40 {
            let h = crate::gen::small_pattern(&mut rng, 4, 4);
            let phi = properties::random_table(&h, &mut rng).unwrap();
            let cg = colored_host(&mut rng, &h, 7, 0.6, false);
            let lc = cp_indsub_coefficients(&phi, &h).unwrap();
            let lhs = lc.evaluate(&cg).unwrap();
            let rhs = count_cp_indsub_prop(&phi, &cg, CountMode::Exact).unwrap();
            let rhs = BigInt::from(rhs.as_exact().unwrap().clone());
            assert_eq!(lhs, rhs, "trial {trial} on {h:?}");
        }
    }
}
