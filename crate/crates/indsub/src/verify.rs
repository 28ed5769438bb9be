//! Deterministic verification suites: each suite runs the invariant checks
//! of one identity or construction with fixed seeds and reports one
//! pass/fail line per check. The command-line `verify` subcommand and the
//! acceptance tests are both built on these.

use num_bigint::BigInt;
use serde::Serialize;

use crate::chi::{chi_naive, chi_orbit_from_reps, edge_subset_orbits, verify_congruence};
use crate::counting::{
    count_cp_hom, count_cp_indsub_prop, count_indsub_prop, count_sub, CountMode,
};
use crate::gen::{colored_host, gnp, planted_clique, rng_for, small_pattern};
use crate::graph::{
    clique, complete_bipartite, cycle, independent_set, path, EdgeSubset, Graph,
};
use crate::properties::{self, Property};
use crate::reductions::{
    classify_p_edge_transitive, clique_gadget, cp_hom_matrix, cp_indsub_coefficients,
    decolor_count, pipeline_clique_decision, pipeline_exact, random_isolation, tensor,
    PipelineOptions,
};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Lemma3,
    Lemma7,
    Lemma8,
    Lemma10,
    Lemma12,
    Lemma14,
    Classification,
    Pipeline,
    Isolation,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Result<Suite> {
        Ok(match name {
            "lemma3" => Suite::Lemma3,
            "lemma7" => Suite::Lemma7,
            "lemma8" => Suite::Lemma8,
            "lemma10" => Suite::Lemma10,
            "lemma12" => Suite::Lemma12,
            "lemma14" => Suite::Lemma14,
            "classification" => Suite::Classification,
            "pipeline" => Suite::Pipeline,
            "isolation" => Suite::Isolation,
            "all" => Suite::All,
            other => return Err(Error::UnknownProperty(format!("suite {other}"))),
        })
    }

    pub const NAMES: &'static [&'static str] = &[
        "lemma3",
        "lemma7",
        "lemma8",
        "lemma10",
        "lemma12",
        "lemma14",
        "classification",
        "pipeline",
        "isolation",
        "all",
    ];
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            passed: 0,
            failed: 0,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        if passed {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.checks.push(CheckOutcome {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Runs a fallible check; errors count as failures with the message.
    fn check<F: FnOnce() -> Result<(bool, String)>>(&mut self, name: &str, f: F) {
        match f() {
            Ok((passed, detail)) => self.push(name, passed, detail),
            Err(e) => self.push(name, false, format!("error: {e}")),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    fn merge(&mut self, other: SuiteReport) {
        for check in other.checks {
            if check.passed {
                self.passed += 1;
            } else {
                self.failed += 1;
            }
            self.checks.push(CheckOutcome {
                name: format!("{}::{}", other.suite, check.name),
                passed: check.passed,
                detail: check.detail,
            });
        }
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    match suite {
        Suite::Lemma3 => lemma3_suite(seed),
        Suite::Lemma7 => lemma7_suite(seed),
        Suite::Lemma8 => lemma8_suite(seed),
        Suite::Lemma10 => lemma10_suite(seed),
        Suite::Lemma12 => lemma12_suite(seed),
        Suite::Lemma14 => lemma14_suite(seed),
        Suite::Classification => classification_suite(seed),
        Suite::Pipeline => pipeline_suite(seed),
        Suite::Isolation => isolation_suite(seed),
        Suite::All => {
            let mut report = SuiteReport::new("all", seed);
            for s in [
                Suite::Lemma3,
                Suite::Lemma7,
                Suite::Lemma8,
                Suite::Lemma10,
                Suite::Lemma12,
                Suite::Lemma14,
                Suite::Classification,
                Suite::Pipeline,
                Suite::Isolation,
            ] {
                report.merge(run_suite(s, seed));
            }
            report
        }
    }
}

fn chi_test_graphs() -> Vec<(String, Graph)> {
    vec![
        ("K_2".into(), clique(2).unwrap()),
        ("P_3".into(), path(3).unwrap()),
        ("K_3".into(), clique(3).unwrap()),
        ("C_4".into(), cycle(4).unwrap()),
        ("C_5".into(), cycle(5).unwrap()),
        ("K_{2,2}".into(), complete_bipartite(2, 2).unwrap()),
        ("K_{2,4}".into(), complete_bipartite(2, 4).unwrap()),
        ("K_{3,3}".into(), complete_bipartite(3, 3).unwrap()),
        ("K_{4,4}".into(), complete_bipartite(4, 4).unwrap()),
    ]
}

fn builtin_properties() -> Vec<Property> {
    properties::BUILTIN_NAMES
        .iter()
        .map(|n| properties::by_name(n).unwrap())
        .collect()
}

/// Alternating-enumerator identities: orbit/naive agreement on the named
/// graph family for every built-in property, the pinned biclique value, and
/// the mod-p congruence on every applicable (property, pattern) pair.
fn lemma3_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma3", seed);
    let graphs = chi_test_graphs();
    let props = builtin_properties();
    for (name, h) in &graphs {
        report.check(&format!("orbit_equals_naive[{name}]"), || {
            let reps = edge_subset_orbits(h)?;
            let mut worst = String::new();
            let mut ok = true;
            for phi in &props {
                let naive = chi_naive(phi, h)?;
                let orbit = chi_orbit_from_reps(phi, h, &reps)?;
                if naive.value != orbit.value {
                    ok = false;
                    worst = format!(
                        "{}: naive {} vs orbit {}",
                        phi.name(),
                        naive.value,
                        orbit.value
                    );
                    break;
                }
            }
            Ok((ok, if ok { format!("{} properties agree", props.len()) } else { worst }))
        });
    }
    report.check("pinned_value[connected,K_{2,2}]", || {
        let r = chi_naive(&properties::connected(), &complete_bipartite(2, 2)?)?;
        Ok((
            r.value == -3 && r.residue(2) == 1,
            format!("chi = {}, residue mod 2 = {}", r.value, r.residue(2)),
        ))
    });
    for (name, h) in &graphs {
        for phi in [properties::connected(), properties::eulerian()] {
            let empty = Graph::empty(h.n()).unwrap();
            if phi.eval(&empty) == phi.eval(h) {
                continue;
            }
            report.check(&format!("congruence[{},{name}]", phi.name()), || {
                let rep = verify_congruence(&phi, h)?;
                if !rep.applicable {
                    return Ok((false, format!("preconditions unmet: {:?}", rep.unmet)));
                }
                let holds = rep.holds == Some(true);
                let in_range = rep
                    .actual_residue
                    .zip(rep.p)
                    .is_some_and(|(r, p)| r == 1 || r == p - 1);
                Ok((
                    holds && in_range,
                    format!(
                        "chi = {:?} = {:?} mod {:?}",
                        rep.chi, rep.actual_residue, rep.p
                    ),
                ))
            });
        }
    }
    report
}

/// Tensor multiplicativity on seeded random triples.
fn lemma7_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma7", seed);
    let mut rng = rng_for(seed, "lemma7");
    let mut failures = Vec::new();
    let trials = 100;
    for trial in 0..trials {
        let h = small_pattern(&mut rng, 4, 6);
        let a = colored_host(&mut rng, &h, 6, 0.6, false);
        let b = colored_host(&mut rng, &h, 6, 0.6, false);
        let t = match tensor(&a, &b) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("trial {trial}: tensor failed: {e}"));
                continue;
            }
        };
        for s in EdgeSubset::all(h.edge_count()) {
            let lhs = count_cp_hom(s, &t, CountMode::Exact).unwrap();
            let ra = count_cp_hom(s, &a, CountMode::Exact).unwrap();
            let rb = count_cp_hom(s, &b, CountMode::Exact).unwrap();
            let prod = ra.as_exact().unwrap() * rb.as_exact().unwrap();
            if lhs.as_exact().unwrap() != &prod {
                failures.push(format!("trial {trial}, S = {:#b}", s.mask()));
            }
        }
    }
    report.push(
        "multiplicativity_random_triples",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{trials} seeded triples, all edge subsets")
        } else {
            failures.join("; ")
        },
    );
    report
}

/// Evaluation-matrix structure in exact and mod-p arithmetic.
fn lemma8_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma8", seed);
    let patterns = [
        ("K_2", clique(2).unwrap()),
        ("P_3", path(3).unwrap()),
        ("K_3", clique(3).unwrap()),
        ("K_{2,2}", complete_bipartite(2, 2).unwrap()),
    ];
    for (name, h) in &patterns {
        for mode in [CountMode::Exact, CountMode::Mod(2), CountMode::Mod(3), CountMode::Mod(5)] {
            report.check(&format!("unitriangular[{name},{mode:?}]"), || {
                let m = cp_hom_matrix(h, mode)?;
                Ok((m.is_unitriangular(), format!("size {}", m.size())))
            });
        }
        report.check(&format!("determinant_one[{name}]"), || {
            let det = cp_hom_matrix(h, CountMode::Exact)?.determinant()?;
            Ok((det == BigInt::from(1), format!("det = {det}")))
        });
    }
    report.check("k2_matrix_pinned", || {
        let m = cp_hom_matrix(&clique(2)?, CountMode::Exact)?;
        let got = [[m.entry(0, 0), m.entry(0, 1)], [m.entry(1, 0), m.entry(1, 1)]];
        Ok((got == [[1, 1], [0, 1]], format!("{got:?}")))
    });
    report.check("substitution_matches_gaussian", || {
        let h = complete_bipartite(2, 2)?;
        let m = cp_hom_matrix(&h, CountMode::Exact)?;
        let mut rng = rng_for(seed, "lemma8-rhs");
        use rand::Rng;
        let y: Vec<BigInt> = (0..m.size())
            .map(|_| BigInt::from(rng.random_range(0..1000u32)))
            .collect();
        let subst = m.solve_substitution(&y)?;
        let gauss = m.solve_gaussian(&y)?;
        Ok((subst == gauss, format!("{} unknowns", m.size())))
    });
    report
}

/// Coefficient-expansion identity on random table properties, plus the
/// link between the top coefficient and the alternating enumerator.
fn lemma10_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma10", seed);
    let mut rng = rng_for(seed, "lemma10");
    let trials = 100;
    let mut identity_failures = Vec::new();
    let mut coeff_failures = Vec::new();
    for trial in 0..trials {
        let h = small_pattern(&mut rng, 4, 4);
        let phi = properties::random_table(&h, &mut rng).unwrap();
        let cg = colored_host(&mut rng, &h, 8, 0.5, trial % 4 != 0);
        let lc = cp_indsub_coefficients(&phi, &h).unwrap();
        let lhs = lc.evaluate(&cg).unwrap();
        let rhs = count_cp_indsub_prop(&phi, &cg, CountMode::Exact).unwrap();
        if lhs != BigInt::from(rhs.as_exact().unwrap().clone()) {
            identity_failures.push(trial);
        }
        let chi = chi_naive(&phi, &h).unwrap();
        if lc.full_coefficient().abs() != chi.value.abs() {
            coeff_failures.push(trial);
        }
    }
    report.push(
        "expansion_identity",
        identity_failures.is_empty(),
        format!("{trials} random table properties; failures: {identity_failures:?}"),
    );
    report.push(
        "top_coefficient_equals_enumerator",
        coeff_failures.is_empty(),
        format!("{trials} random table properties; failures: {coeff_failures:?}"),
    );
    report
}

/// Decoloring identity, call counts and query sizes.
fn lemma12_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma12", seed);
    let mut rng = rng_for(seed, "lemma12");
    let trials = 50;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let h = small_pattern(&mut rng, 4, 5);
        let surjective = trial % 10 != 9;
        let cg = colored_host(&mut rng, &h, 8, 0.5, surjective);
        let phi = [properties::connected(), properties::eulerian(), properties::even_edges()]
            [trial % 3]
            .clone();
        let expected = count_cp_indsub_prop(&phi, &cg, CountMode::Exact).unwrap();
        let mut oracle =
            |g: &Graph, k: usize| count_indsub_prop(&phi, k, g, CountMode::Exact);
        let out = decolor_count(&cg, CountMode::Exact, &mut oracle).unwrap();
        if out.value != expected {
            failures.push(format!("trial {trial}: value mismatch"));
        }
        if cg.is_surjective() {
            if out.queries.len() != 1 << h.n() {
                failures.push(format!("trial {trial}: {} calls", out.queries.len()));
            }
            if out.queries.iter().any(|q| q.n_vertices > cg.host().n()) {
                failures.push(format!("trial {trial}: oversized query"));
            }
        } else if !out.queries.is_empty() {
            failures.push(format!("trial {trial}: non-surjective made calls"));
        }
    }
    report.push(
        "decoloring_identity_and_call_counts",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{trials} seeded instances")
        } else {
            failures.join("; ")
        },
    );
    report
}

/// Parsimony of the clique gadget against brute-force clique counts.
fn lemma14_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lemma14", seed);
    report.check("pinned[K_3,l=2]", || {
        let cg = clique_gadget(&clique(3)?, 2)?;
        let full = EdgeSubset::full_of(cg.pattern())?;
        let got = count_cp_hom(full, &cg, CountMode::Exact)?;
        Ok((got.to_decimal() == "3", format!("count = {}", got.to_decimal())))
    });
    report.check("pinned[K_4,l=3]", || {
        let cg = clique_gadget(&clique(4)?, 3)?;
        let full = EdgeSubset::full_of(cg.pattern())?;
        let got = count_cp_hom(full, &cg, CountMode::Exact)?;
        Ok((got.to_decimal() == "4", format!("count = {}", got.to_decimal())))
    });
    let mut rng = rng_for(seed, "lemma14");
    let trials = 50;
    let mut failures = Vec::new();
    for trial in 0..trials {
        use rand::Rng;
        let n = rng.random_range(3..=7);
        let ell = rng.random_range(2..=3usize);
        let g = gnp(&mut rng, n, 0.5);
        let cg = clique_gadget(&g, ell).unwrap();
        let full = EdgeSubset::full_of(cg.pattern()).unwrap();
        let via_gadget = count_cp_hom(full, &cg, CountMode::Exact).unwrap();
        let direct = count_sub(&clique(ell).unwrap(), &g, CountMode::Exact).unwrap();
        if via_gadget != direct {
            failures.push(format!(
                "trial {trial}: gadget {} vs direct {}",
                via_gadget.to_decimal(),
                direct.to_decimal()
            ));
        }
    }
    report.push(
        "parsimony_random_instances",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{trials} seeded instances, l in 2..=3")
        } else {
            failures.join("; ")
        },
    );
    report
}

/// Exhaustive classification scan on up to 6 vertices.
fn classification_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("classification", seed);
    report.check("scan_max_n_6", || {
        let rep = classify_p_edge_transitive(6)?;
        Ok((
            rep.holds(),
            format!(
                "{} labeled graphs, {} classes, {} candidates, {} counterexamples",
                rep.labeled_graphs,
                rep.isomorphism_classes,
                rep.candidates.len(),
                rep.counterexamples.len()
            ),
        ))
    });
    report
}

/// End-to-end pipelines against direct counts, including mod-p consistency
/// of the deterministic chain.
fn pipeline_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("pipeline", seed);
    let opts = PipelineOptions::default();
    let mut rng = rng_for(seed, "pipeline");
    for phi in [properties::connected(), properties::eulerian()] {
        let mut failures = Vec::new();
        for trial in 0..5 {
            let g = gnp(&mut rng, 7, 0.5);
            let out = pipeline_exact(&phi, 2, &g, CountMode::Exact, &opts).unwrap();
            let direct =
                crate::counting::count_hom(&complete_bipartite(2, 2).unwrap(), &g, CountMode::Exact)
                    .unwrap();
            if out.value != direct {
                failures.push(trial);
            }
        }
        report.push(
            format!("exact_chain[{}]", phi.name()),
            failures.is_empty(),
            format!("5 hosts; failures: {failures:?}"),
        );
    }
    report.check("mod2_chain_matches_exact_mod2", || {
        let phi = properties::connected();
        let g = gnp(&mut rng_for(seed, "pipeline-mod"), 7, 0.5);
        let exact = pipeline_exact(&phi, 2, &g, CountMode::Exact, &opts)?;
        let modular = pipeline_exact(&phi, 2, &g, CountMode::Mod(2), &opts)?;
        let want = exact.value.residue_mod(2);
        let got = modular.value.as_residue().map(|(v, _)| v);
        Ok((got == Some(want), format!("exact mod 2 = {want}, mod chain = {got:?}")))
    });
    report.check("clique_decisions_match_brute_force", || {
        let phi = properties::connected();
        let mut rng = rng_for(seed, "pipeline-clique");
        let mut failures = Vec::new();
        for trial in 0..8 {
            use rand::Rng;
            let n = rng.random_range(4..=7);
            let k = rng.random_range(2..=3usize);
            let g = gnp(&mut rng, n, 0.5);
            let out = pipeline_clique_decision(&phi, &g, k, CountMode::Exact, seed, &opts)?;
            let truth = !count_sub(&clique(k)?, &g, CountMode::Exact)?.is_zero();
            if out.decision != truth {
                failures.push(trial);
            }
        }
        Ok((failures.is_empty(), format!("8 instances; failures: {failures:?}")))
    });
    report
}

/// Random-isolation behavior: retention frequency, the parity lower bound
/// on a clique host, and a short mod-2 decision sweep.
fn isolation_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("isolation", seed);
    report.check("retention_frequency", || {
        let g = independent_set(10)?;
        let mut rng = rng_for(seed, "isolation-freq");
        let draws = 10_000u64;
        let mut kept = 0u64;
        for _ in 0..draws {
            kept += random_isolation(&g, &mut rng).n() as u64;
        }
        let freq = kept as f64 / (draws as f64 * 10.0);
        Ok(((freq - 0.5).abs() < 0.02, format!("frequency {freq:.4}")))
    });
    report.check("parity_bound[K_3_in_K_5]", || {
        // Lower bound: odd triangle count with probability at least 2^-3,
        // up to three standard deviations of the Monte Carlo estimate.
        let g = clique(5)?;
        let k3 = clique(3)?;
        let mut rng = rng_for(seed, "isolation-parity");
        let draws = 10_000u64;
        let mut odd = 0u64;
        for _ in 0..draws {
            let sub = random_isolation(&g, &mut rng);
            let count = count_sub(&k3, &sub, CountMode::Exact)?;
            if count.residue_mod(2) == 1 {
                odd += 1;
            }
        }
        let p_hat = odd as f64 / draws as f64;
        let bound = 0.125f64;
        let sigma = (bound * (1.0 - bound) / draws as f64).sqrt();
        Ok((
            p_hat >= bound - 3.0 * sigma,
            format!("empirical {p_hat:.4} vs bound {:.4}", bound - 3.0 * sigma),
        ))
    });
    report.check("mod2_planted_sweep", || {
        let phi = properties::connected();
        let opts = PipelineOptions::default();
        let mut hits = 0;
        let sweeps = 10;
        for s in 0..sweeps {
            let mut rng = rng_for(seed.wrapping_add(s), "isolation-sweep");
            let g = planted_clique(&mut rng, 7, 3, 0.5);
            let out = pipeline_clique_decision(&phi, &g, 3, CountMode::Mod(2), seed.wrapping_add(s), &opts)?;
            if out.decision {
                hits += 1;
            }
        }
        Ok((hits == sweeps, format!("{hits}/{sweeps} planted instances detected")))
    });
    report
}
