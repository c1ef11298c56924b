//! Oracle-backed invariant suite, runnable from the CLI.
//!
//! Every check pits a fast path against an independent slow path (or a
//! closed-form count against full enumeration) on seeded inputs, and reports
//! one pass/fail line. Scales are chosen to finish in seconds.

use rand::Rng;

use crate::cliques::{count_cliques, count_cliques_reference};
use crate::corpus;
use crate::density::{conditional_density, hom_density};
use crate::error::Result;
use crate::limit::{clique_density, mixture_spectrum, moment_series, sigma_sq, factorial};
use crate::multigraph::LabeledMultigraph;
use crate::oracle::{
    classify_tuple, count_tuples_by_type, delta_exact, exact_distribution, tuple_count_formula,
    TupleClass,
};
use crate::sampler::{sample_graph, split_stream};
use crate::spectral::{cycle_density_spectral, cycle_density_transfer, spectrum};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            passed: false,
            detail,
        }
    }
}

fn wrap(name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    match body() {
        Ok((true, detail)) => CheckResult::pass(name, detail),
        Ok((false, detail)) => CheckResult::fail(name, detail),
        Err(e) => CheckResult::fail(name, format!("error: {e}")),
    }
}

/// Runs the full suite.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_tuple_count_formula(),
        check_delta_vanishes_on_x_class(),
        check_delta_product_formula(),
        check_marginal_consistency(),
        check_pair_graphon_identities(),
        check_spectral_cycle_agreement(),
        check_loose_cycle_identities(),
        check_moment_decomposition(),
        check_count_vs_reference(),
        check_pipeline_exact_law(),
    ]
}

fn check_tuple_count_formula() -> CheckResult {
    wrap("tuple-count-formula", || {
        let mut detail = String::new();
        for (n, r, m) in [(5usize, 2usize, 2usize), (6, 2, 3), (6, 3, 2), (7, 3, 2)] {
            let census = count_tuples_by_type(n, r, m)?;
            for (k, &count) in &census.f_counts {
                let formula = tuple_count_formula(n, r, k)? as u64;
                if count != formula {
                    return Ok((
                        false,
                        format!("(n={n}, r={r}, k={k:?}): enumerated {count}, formula {formula}"),
                    ));
                }
            }
            detail = format!("last census total {}", census.total);
        }
        Ok((true, detail))
    })
}

/// Random tuples over a small vertex range, rejection-sampled by class.
fn random_tuples_of_class(
    rng: &mut crate::sampler::RngStream,
    n: usize,
    r: usize,
    m: usize,
    want_x: bool,
    count: usize,
) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let tuple: Vec<Vec<usize>> = (0..m)
            .map(|_| {
                let mut set = Vec::with_capacity(r);
                while set.len() < r {
                    let v = rng.gen_range(0..n);
                    if !set.contains(&v) {
                        set.push(v);
                    }
                }
                set
            })
            .collect();
        let class = classify_tuple(&tuple).expect("valid tuple");
        if want_x == matches!(class.class, TupleClass::XClass) {
            out.push(tuple);
        }
    }
    out
}

fn check_delta_vanishes_on_x_class() -> CheckResult {
    wrap("delta-vanishes-on-x-class", || {
        let toy = corpus::two_cliques();
        let multi = corpus::balanced_multipartite(3);
        let mut rng = split_stream(0x0DDC0DE, 0);
        let mut worst = 0.0f64;
        for i in 0..200 {
            let (w, r) = if i % 2 == 0 { (&toy, 3) } else { (&multi, 3) };
            let m = 2 + i % 3;
            let tuple = random_tuples_of_class(&mut rng, 14, r, m, true, 1).remove(0);
            let d = delta_exact(&tuple, w)?.abs();
            worst = worst.max(d);
        }
        Ok((worst <= 1e-10, format!("max |delta| = {worst:.2e} over 200 tuples")))
    })
}

/// Places a fresh loose cycle of `len` r-sets starting at vertex `base`.
fn place_loose_cycle(base: usize, len: usize, r: usize) -> (Vec<Vec<usize>>, usize) {
    let mut sets = Vec::with_capacity(len);
    if len == 2 {
        // Two sets sharing two vertices.
        let shared = [base, base + 1];
        let mut used = base + 2;
        for _ in 0..2 {
            let mut set = shared.to_vec();
            set.extend(used..used + (r - 2));
            used += r - 2;
            sets.push(set);
        }
        (sets, used)
    } else {
        let joints: Vec<usize> = (base..base + len).collect();
        let mut used = base + len;
        for i in 0..len {
            let mut set = vec![joints[i], joints[(i + 1) % len]];
            set.extend(used..used + (r - 2));
            used += r - 2;
            sets.push(set);
        }
        (sets, used)
    }
}

fn check_delta_product_formula() -> CheckResult {
    wrap("delta-product-formula", || {
        let mut rng = split_stream(0xF00D, 0);
        // Members with at most 3 blocks keep the 2^m subset expansion cheap.
        let members = &corpus::regular_corpus()[..6];
        let mut worst = 0.0f64;
        let mut checked = 0usize;
        while checked < 100 {
            let w = &members[checked % members.len()];
            let r = 2 + checked % 2;
            // One or two cycles with total length at most 4.
            let shape = checked % 3;
            let (mut sets, cycle_lens): (Vec<Vec<usize>>, Vec<usize>) = match shape {
                0 => {
                    let len = 2 + rng.gen_range(0..3usize);
                    (place_loose_cycle(0, len, r).0, vec![len])
                }
                1 => {
                    let (a, next) = place_loose_cycle(0, 2, r);
                    let (b, _) = place_loose_cycle(next, 2, r);
                    ([a, b].concat(), vec![2, 2])
                }
                _ => {
                    let (a, next) = place_loose_cycle(0, 3, r);
                    let (b, _) = place_loose_cycle(next, 2, r);
                    ([a, b].concat(), vec![3, 2])
                }
            };
            let m: usize = cycle_lens.iter().sum();
            if (r - 1) * m > 10 {
                checked += 1;
                continue;
            }
            // The formula is label-independent; shuffle set order.
            if rng.gen_bool(0.5) {
                sets.reverse();
            }
            let t_r = clique_density(w, r)?;
            let mut expect = 1.0;
            for &len in &cycle_lens {
                let g = LabeledMultigraph::loose_cycle_graph(len, r)?;
                expect *= hom_density(&g, w)? - t_r.powi(len as i32);
            }
            let d = delta_exact(&sets, w)?;
            worst = worst.max((d - expect).abs());
            checked += 1;
        }
        Ok((worst <= 1e-10, format!("max error {worst:.2e} over 100 tuples")))
    })
}

fn check_marginal_consistency() -> CheckResult {
    wrap("marginal-consistency", || {
        let mut corpus_all = corpus::random_corpus(0xAB, 10, 4);
        corpus_all.extend(corpus::regular_corpus());
        let mut worst = 0.0f64;
        for w in &corpus_all {
            for r in 2..=4 {
                let profile = w.clique_profile(r)?;
                let integrated: f64 = w
                    .mu()
                    .iter()
                    .zip(profile.entries())
                    .map(|(m, p)| m * p)
                    .sum();
                let direct = clique_density(w, r)?;
                worst = worst.max((integrated - direct).abs());
            }
        }
        Ok((worst <= 1e-10, format!("max gap {worst:.2e}")))
    })
}

fn check_pair_graphon_identities() -> CheckResult {
    wrap("pair-graphon-identities", || {
        let corpus_all = corpus::random_corpus(0xCD, 8, 4);
        let mut worst_degree = 0.0f64;
        let mut worst_square = 0.0f64;
        for w in &corpus_all {
            for r in 2..=4 {
                let v = w.vwr(r)?;
                let profile = w.clique_profile(r)?;
                for i in 0..w.block_count() {
                    let row_integral: f64 = (0..w.block_count())
                        .map(|j| w.mu()[j] * v.value(i, j))
                        .sum();
                    worst_degree = worst_degree.max((row_integral - profile.entries()[i]).abs());
                }
                let doubled = LabeledMultigraph::glued_cliques(r, 2, true)?
                    .with_marked(vec![0, 1])?;
                for i in 0..w.block_count() {
                    for j in 0..w.block_count() {
                        let lhs = conditional_density(&doubled, w, &[i, j])?;
                        let rhs = v.value(i, j) * v.value(i, j);
                        worst_square = worst_square.max((lhs - rhs).abs());
                    }
                }
            }
        }
        Ok((
            worst_degree <= 1e-10 && worst_square <= 1e-10,
            format!("degree gap {worst_degree:.2e}, squaring gap {worst_square:.2e}"),
        ))
    })
}

fn check_spectral_cycle_agreement() -> CheckResult {
    wrap("spectral-cycle-agreement", || {
        let corpus_all = corpus::random_corpus(0xEF, 12, 5);
        let mut worst = 0.0f64;
        for w in &corpus_all {
            let spec = spectrum(w)?;
            for ell in 2..=6 {
                let brute = hom_density(&LabeledMultigraph::cycle(ell)?, w)?;
                worst = worst.max((cycle_density_spectral(&spec, ell)? - brute).abs());
            }
        }
        Ok((worst <= 1e-8, format!("max gap {worst:.2e}")))
    })
}

fn check_loose_cycle_identities() -> CheckResult {
    wrap("loose-cycle-identities", || {
        let corpus_all = corpus::random_corpus(0x11, 6, 3);
        let mut worst = 0.0f64;
        for w in &corpus_all {
            for r in 2..=3 {
                let v = w.vwr(r)?;
                for ell in 3..=4 {
                    let direct = hom_density(&LabeledMultigraph::loose_cycle_graph(ell, r)?, w)?;
                    let via_pairs = cycle_density_transfer(&v, ell)?;
                    worst = worst.max((direct - via_pairs).abs());
                }
                let doubled = hom_density(&LabeledMultigraph::glued_cliques(r, 2, true)?, w)?;
                worst = worst.max((doubled - cycle_density_transfer(&v, 2)?).abs());
            }
        }
        Ok((worst <= 1e-8, format!("max gap {worst:.2e}")))
    })
}

fn check_moment_decomposition() -> CheckResult {
    wrap("moment-decomposition", || {
        let mut worst = 0.0f64;
        for (w, r) in corpus::regular_corpus_cases() {
            let series = moment_series(&w, r, 8)?;
            let spec = mixture_spectrum(&w, r)?;
            let fact = factorial(r - 2)? as f64;
            let d2 = sigma_sq(&w, r)? / 2.0
                + 0.25
                    * spec
                        .eigenvalues()
                        .iter()
                        .map(|l| (l / fact).powi(2))
                        .sum::<f64>();
            worst = worst.max((series.d_coeffs()[2] - d2).abs());
            for ell in 3..=8usize {
                let dl = spec
                    .eigenvalues()
                    .iter()
                    .map(|l| (l / fact).powi(ell as i32))
                    .sum::<f64>()
                    / (2.0 * ell as f64);
                worst = worst.max((series.d_coeffs()[ell] - dl).abs());
            }
        }
        Ok((worst <= 1e-9, format!("max gap {worst:.2e}")))
    })
}

fn check_count_vs_reference() -> CheckResult {
    wrap("count-vs-reference", || {
        let w = corpus::constant(0.4);
        let skew = corpus::skewed_two_block();
        for t in 0..100u64 {
            let g = if t % 2 == 0 {
                sample_graph(&w, 6 + (t % 11) as usize, &mut split_stream(0x77, t))?
            } else {
                sample_graph(&skew, 6 + (t % 11) as usize, &mut split_stream(0x78, t))?
            };
            for r in 2..=5 {
                let fast = count_cliques(&g, r)?;
                let slow = count_cliques_reference(&g, r)?;
                if fast != slow {
                    return Ok((
                        false,
                        format!("trial {t}, r = {r}: {fast} vs reference {slow}"),
                    ));
                }
            }
        }
        Ok((true, "100 graphs, r = 2..=5".into()))
    })
}

fn check_pipeline_exact_law() -> CheckResult {
    wrap("pipeline-exact-law", || {
        let trials = 100_000usize;
        for (w, n, r, seed) in [
            (corpus::two_cliques(), 3usize, 2usize, 0x31u64),
            (corpus::constant(0.5), 4, 3, 0x32),
        ] {
            let exact = exact_distribution(&w, n, r)?;
            let mut histogram: std::collections::BTreeMap<u64, u64> = Default::default();
            for t in 0..trials {
                let g = sample_graph(&w, n, &mut split_stream(seed, t as u64))?;
                *histogram.entry(count_cliques(&g, r)?).or_insert(0) += 1;
            }
            for (count, &freq) in &histogram {
                if !exact.contains_key(count) {
                    return Ok((false, format!("impossible count {count} observed")));
                }
                let p = exact[count];
                let emp = freq as f64 / trials as f64;
                let se = (p * (1.0 - p) / trials as f64).sqrt();
                if (emp - p).abs() > 5.0 * se.max(1e-6) {
                    return Ok((
                        false,
                        format!("atom {count}: empirical {emp:.5} vs exact {p:.5} (se {se:.5})"),
                    ));
                }
            }
        }
        Ok((true, format!("{trials} trials per pipeline")))
    })
}
