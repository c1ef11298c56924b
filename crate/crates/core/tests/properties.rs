//! Cross-module property tests.

use proptest::prelude::*;

use graphon_cliques::cliques::count_cliques;
use graphon_cliques::corpus;
use graphon_cliques::density::hom_density;
use graphon_cliques::experiments::ks_statistic;
use graphon_cliques::multigraph::LabeledMultigraph;
use graphon_cliques::oracle::exact_distribution;
use graphon_cliques::sampler::{sample_graph, split_stream};
use graphon_cliques::StepGraphon;

/// Strategy for a valid step graphon with 1..=3 blocks.
fn graphon_strategy() -> impl Strategy<Value = StepGraphon> {
    (1usize..=3).prop_flat_map(|b| {
        let weights = prop::collection::vec(0.05f64..1.0, b);
        let upper = prop::collection::vec(0.0f64..=1.0, b * (b + 1) / 2);
        (weights, upper).prop_map(move |(raw, upper)| {
            let total: f64 = raw.iter().sum();
            let mu: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let mut values = vec![vec![0.0; b]; b];
            let mut it = upper.into_iter();
            for i in 0..b {
                for j in i..b {
                    let v = it.next().unwrap();
                    values[i][j] = v;
                    values[j][i] = v;
                }
            }
            StepGraphon::new(mu, values).unwrap()
        })
    })
}

/// Strategy for a simple graph on 3..=5 vertices as an edge subset mask.
fn graph_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (3usize..=5).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        let len = pairs.len();
        prop::collection::vec(prop::bool::ANY, len).prop_map(move |mask| {
            let chosen = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(&p, _)| p)
                .collect();
            (n, chosen)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Removing an edge never lowers the density.
    #[test]
    fn density_monotone_under_edge_removal(
        w in graphon_strategy(),
        (n, edges) in graph_strategy(),
        pick in 0usize..16,
    ) {
        prop_assume!(!edges.is_empty());
        let full = LabeledMultigraph::new_simple(n, &edges).unwrap();
        let mut fewer = edges.clone();
        fewer.remove(pick % edges.len());
        let sub = LabeledMultigraph::new_simple(n, &fewer).unwrap();
        let t_full = hom_density(&full, &w).unwrap();
        let t_sub = hom_density(&sub, &w).unwrap();
        prop_assert!(t_sub >= t_full - 1e-12, "sub {t_sub} < full {t_full}");
    }

    /// Densities stay inside [0, 1].
    #[test]
    fn density_in_unit_interval(
        w in graphon_strategy(),
        (n, edges) in graph_strategy(),
    ) {
        let h = LabeledMultigraph::new_simple(n, &edges).unwrap();
        let t = hom_density(&h, &w).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&t), "t = {t}");
    }

    /// The KS distance is a pseudometric value in [0, 1] and zero on equal
    /// samples.
    #[test]
    fn ks_statistic_bounds(
        xs in prop::collection::vec(-50.0f64..50.0, 1..40),
        ys in prop::collection::vec(-50.0f64..50.0, 1..40),
    ) {
        let d = ks_statistic(&xs, &ys);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(ks_statistic(&xs, &xs), 0.0);
    }

    /// Weights that do not sum to one are rejected; normalized ones pass.
    #[test]
    fn weight_validation(raw in prop::collection::vec(0.05f64..1.0, 1..4)) {
        let total: f64 = raw.iter().sum();
        let b = raw.len();
        let values = vec![vec![0.5; b]; b];
        if (total - 1.0).abs() > 1e-9 {
            prop_assert!(StepGraphon::new(raw.clone(), values.clone()).is_err());
        }
        let mu: Vec<f64> = raw.iter().map(|x| x / total).collect();
        prop_assert!(StepGraphon::new(mu, values).is_ok());
    }
}

/// Small-n exchangeability: the sampled edge-count law at n = 3 matches the
/// exact finite distribution atom by atom.
#[test]
fn sampled_three_vertex_law_matches_exact() {
    let toy = corpus::two_cliques();
    let exact = exact_distribution(&toy, 3, 2).unwrap();
    let trials = 100_000usize;
    let mut histogram = std::collections::BTreeMap::<u64, u64>::new();
    for t in 0..trials {
        let g = sample_graph(&toy, 3, &mut split_stream(0xE8C, t as u64)).unwrap();
        *histogram.entry(count_cliques(&g, 2).unwrap()).or_insert(0) += 1;
    }
    // The toy graphon on 3 vertices yields either one edge (split types) or
    // a triangle (all same), so the exact law has exactly two atoms.
    assert_eq!(exact.len(), 2);
    for (count, &freq) in &histogram {
        let p = exact[count];
        let emp = freq as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!(
            (emp - p).abs() <= 5.0 * se,
            "atom {count}: {emp} vs {p} (se {se:.2e})"
        );
    }
}
