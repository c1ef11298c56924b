//! Named graphons and seeded random corpora used across tests, the self-test
//! suite, and examples.

use rand::Rng;

use crate::graphon::StepGraphon;

/// The constant-`p` graphon (a single block).
pub fn constant(p: f64) -> StepGraphon {
    StepGraphon::new(vec![1.0], vec![vec![p]]).expect("constant graphon is valid")
}

/// Disjoint union of two equally sized cliques: samples are unions of two
/// complete graphs, split by vertex type.
pub fn two_cliques() -> StepGraphon {
    equal_clique_union(2)
}

/// Disjoint union of `k` equally sized cliques.
pub fn equal_clique_union(k: usize) -> StepGraphon {
    let mu = vec![1.0 / k as f64; k];
    let values = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    StepGraphon::new(mu, values).expect("clique union graphon is valid")
}

/// Two equal blocks with unequal degrees; the standard non-regular fixture.
pub fn skewed_two_block() -> StepGraphon {
    StepGraphon::new(vec![0.5, 0.5], vec![vec![0.8, 0.2], vec![0.2, 0.4]])
        .expect("skewed two-block graphon is valid")
}

/// Complete balanced `k`-partite graphon: zero within blocks, one across.
pub fn balanced_multipartite(k: usize) -> StepGraphon {
    let mu = vec![1.0 / k as f64; k];
    let values = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
        .collect();
    StepGraphon::new(mu, values).expect("multipartite graphon is valid")
}

/// Block-circulant graphon on `b` equal blocks: the value of a pair depends
/// only on the cyclic distance of their blocks, so the graphon is
/// vertex-transitive and has a constant r-clique profile for every r.
///
/// `ring_weights[d]` is the value at distance `d`, for `d = 0..=b/2`.
pub fn circulant(b: usize, ring_weights: &[f64]) -> StepGraphon {
    assert_eq!(ring_weights.len(), b / 2 + 1, "need one weight per distance");
    let mu = vec![1.0 / b as f64; b];
    let values = (0..b)
        .map(|i| {
            (0..b)
                .map(|j| {
                    let d = (i as i64 - j as i64).unsigned_abs() as usize;
                    ring_weights[d.min(b - d)]
                })
                .collect()
        })
        .collect();
    StepGraphon::new(mu, values).expect("circulant graphon is valid")
}

/// Two complete-tripartite layers of three blocks each (measure 1/6 per
/// block), plus a `link` value between the first blocks of the two layers
/// and no other cross-layer edges.
///
/// The triangle profile is constant (1/18) for any `link`, while wherever
/// the pair-of-triangles density is positive the value is 1, so at r = 3 the
/// mixture limit has no normal term.
pub fn paired_tripartite(link: f64) -> StepGraphon {
    let mut values = vec![vec![0.0; 6]; 6];
    for layer in [0usize, 3] {
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    values[layer + a][layer + b] = 1.0;
                }
            }
        }
    }
    values[0][3] = link;
    values[3][0] = link;
    StepGraphon::new(vec![1.0 / 6.0; 6], values).expect("paired tripartite graphon is valid")
}

/// A random step graphon on `blocks` blocks: weights uniform in [0.2, 1]
/// before normalization, symmetric values uniform in [0, 1].
pub fn random_graphon<R: Rng>(rng: &mut R, blocks: usize) -> StepGraphon {
    let raw: Vec<f64> = (0..blocks).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mu: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let mut values = vec![vec![0.0; blocks]; blocks];
    for i in 0..blocks {
        for j in i..blocks {
            let v: f64 = rng.gen_range(0.0..1.0);
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    StepGraphon::new(mu, values).expect("random graphon is valid")
}

/// Seeded corpus of random step graphons with block counts cycling through
/// `1..=max_blocks`.
pub fn random_corpus(seed: u64, count: usize, max_blocks: usize) -> Vec<StepGraphon> {
    let mut rng = crate::sampler::split_stream(seed, 0);
    (0..count)
        .map(|i| random_graphon(&mut rng, 1 + i % max_blocks))
        .collect()
}

/// Graphons with a constant r-clique profile for every r (constants and
/// vertex-transitive constructions), for mixture-regime tests.
pub fn regular_corpus() -> Vec<StepGraphon> {
    vec![
        constant(0.3),
        constant(0.5),
        constant(0.9),
        two_cliques(),
        equal_clique_union(3),
        balanced_multipartite(3),
        balanced_multipartite(4),
        circulant(4, &[0.7, 0.4, 0.2]),
        circulant(5, &[0.6, 0.3, 0.5]),
        circulant(3, &[0.9, 0.35]),
    ]
}

/// `(graphon, r)` pairs that classify into the chi-square mixture regime.
pub fn regular_corpus_cases() -> Vec<(StepGraphon, usize)> {
    let mut cases = Vec::new();
    for w in regular_corpus() {
        cases.push((w.clone(), 2));
        cases.push((w, 3));
    }
    cases.push((paired_tripartite(0.37), 3));
    // Keep the cases that are neither clique-free nor complete.
    cases.retain(|(w, r)| {
        crate::limit::clique_density(w, *r).unwrap() > 1e-9 && w.min_value() < 1.0 - 1e-9
    });
    cases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::REGULARITY_DEFAULT_TOL;

    #[test]
    fn named_graphons_validate() {
        for w in regular_corpus() {
            assert!(w.block_count() >= 1);
        }
        assert_eq!(two_cliques().block_count(), 2);
        assert_eq!(paired_tripartite(0.37).block_count(), 6);
    }

    #[test]
    fn regular_corpus_is_regular() {
        for (i, w) in regular_corpus().iter().enumerate() {
            for r in 2..=4 {
                assert!(
                    w.is_kr_regular(r, REGULARITY_DEFAULT_TOL).unwrap(),
                    "corpus member {i} not regular at r = {r}"
                );
            }
        }
        let paired = paired_tripartite(0.5);
        assert!(paired.is_kr_regular(3, REGULARITY_DEFAULT_TOL).unwrap());
        assert!(!paired.is_kr_regular(2, REGULARITY_DEFAULT_TOL).unwrap());
    }

    #[test]
    fn regular_cases_classify_to_mixture() {
        for (w, r) in regular_corpus_cases() {
            let law = crate::limit::classify_limit(&w, r, 1e-10).unwrap();
            assert!(
                matches!(law.kind, crate::limit::LawKind::ChiSquareMix { .. }),
                "case r = {r} classified as {law:?}"
            );
        }
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let a = random_corpus(7, 5, 3);
        let b = random_corpus(7, 5, 3);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
    }
}
