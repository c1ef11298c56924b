//! Brute-force ground truth for the moment combinatorics and the sampling
//! pipeline.
//!
//! Tuples of r-sets are classified by their overlap structure: a tuple is
//! negligible when some set meets the union of the others in at most one
//! vertex; the leading-order tuples are exactly the vertex-disjoint unions of
//! loose cycles, recognized by replacing each set with the 2-edge on its two
//! degree-2 vertices and reading off the resulting 2-regular multigraph.
//!
//! Everything here is deliberately slow and direct: full subset expansions,
//! full tuple enumerations, and exact finite distributions, with hard budget
//! limits. The fast paths elsewhere are tested against these.

use std::collections::BTreeMap;

use crate::cliques::binomial_u128;
use crate::density::hom_density;
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::limit::clique_density;
use crate::multigraph::LabeledMultigraph;

/// Hard cap on `C(n, r)^m` for full tuple enumeration.
const ENUMERATION_BUDGET: u128 = 10_000_000;

/// Hard cap on the subset expansion length in [`delta_exact`].
const MAX_TUPLE_LEN: usize = 12;

/// Overlap structure of an ordered tuple of r-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleClass {
    /// Some set meets the union of the others in at most one vertex.
    XClass,
    /// Vertex-disjoint union of loose cycles; `cycle_type[l - 2]` counts the
    /// cycles with `l` sets, for `l = 2..=m`.
    FClass { cycle_type: Vec<usize> },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleStructure {
    pub m: usize,
    pub vertex_count: usize,
    pub class: TupleClass,
}

fn validate_tuple(sets: &[Vec<usize>]) -> Result<usize> {
    if sets.is_empty() {
        return Err(Error::InvalidInput("empty tuple".into()));
    }
    let r = sets[0].len();
    if r < 2 {
        return Err(Error::InvalidInput("sets must have at least 2 elements".into()));
    }
    for set in sets {
        if set.len() != r {
            return Err(Error::InvalidInput(format!(
                "sets of mixed sizes: {} vs {r}",
                set.len()
            )));
        }
        let mut sorted = set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != r {
            return Err(Error::InvalidInput("set has repeated elements".into()));
        }
    }
    Ok(r)
}

/// Classifies an ordered tuple of r-sets by overlap structure.
pub fn classify_tuple(sets: &[Vec<usize>]) -> Result<TupleStructure> {
    let r = validate_tuple(sets)?;
    let m = sets.len();

    // Vertex degrees counting multiplicity across the tuple.
    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
    for set in sets {
        for &v in set {
            *degree.entry(v).or_insert(0) += 1;
        }
    }
    let vertex_count = degree.len();

    // A vertex of a set lies in the union of the others iff its total degree
    // is at least 2.
    for set in sets {
        let shared = set.iter().filter(|v| degree[v] >= 2).count();
        if shared <= 1 {
            return Ok(TupleStructure {
                m,
                vertex_count,
                class: TupleClass::XClass,
            });
        }
    }

    let other = TupleStructure {
        m,
        vertex_count,
        class: TupleClass::Other,
    };
    if vertex_count != (r - 1) * m || m < 2 {
        return Ok(other);
    }
    if degree.values().any(|&d| d > 2) {
        return Ok(other);
    }

    // Shrink each set to the 2-edge on its two degree-2 vertices; the result
    // must be 2-regular, i.e. a disjoint union of cycles (a doubled 2-edge
    // counts as a cycle of length 2).
    let mut endpoints = Vec::with_capacity(m);
    for set in sets {
        let two: Vec<usize> = set.iter().copied().filter(|v| degree[v] == 2).collect();
        if two.len() != 2 {
            return Ok(other);
        }
        endpoints.push((two[0], two[1]));
    }
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (edge, &(a, b)) in endpoints.iter().enumerate() {
        incident.entry(a).or_default().push(edge);
        incident.entry(b).or_default().push(edge);
    }
    if incident.values().any(|edges| edges.len() != 2) {
        return Ok(other);
    }

    let mut cycle_type = vec![0usize; m.saturating_sub(1)];
    let mut seen_edge = vec![false; m];
    for start in 0..m {
        if seen_edge[start] {
            continue;
        }
        // Walk the cycle through `start`, counting its edges.
        let mut len = 0usize;
        let mut edge = start;
        let mut vertex = endpoints[start].0;
        loop {
            seen_edge[edge] = true;
            len += 1;
            let (a, b) = endpoints[edge];
            vertex = if vertex == a { b } else { a };
            let next = incident[&vertex]
                .iter()
                .copied()
                .find(|&e| e != edge && !seen_edge[e]);
            match next {
                Some(e) => edge = e,
                None => break,
            }
        }
        if len < 2 {
            return Ok(other);
        }
        cycle_type[len - 2] += 1;
    }
    Ok(TupleStructure {
        m,
        vertex_count,
        class: TupleClass::FClass { cycle_type },
    })
}

/// `E[prod I_R]` over the tuple: the density of the union-of-cliques graph.
pub fn clique_product_expectation(sets: &[Vec<usize>], w: &StepGraphon) -> Result<f64> {
    if sets.is_empty() {
        return Ok(1.0);
    }
    validate_tuple(sets)?;
    let graph = union_graph(sets)?;
    hom_density(&graph, w)
}

fn union_graph(sets: &[Vec<usize>]) -> Result<LabeledMultigraph> {
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    for set in sets {
        for &v in set {
            let next = relabel.len();
            relabel.entry(v).or_insert(next);
        }
    }
    let n = relabel.len();
    if n > MAX_TUPLE_LEN {
        return Err(Error::InvalidInput(format!(
            "union of {n} vertices exceeds the {MAX_TUPLE_LEN}-vertex enumeration ceiling"
        )));
    }
    let renamed: Vec<Vec<usize>> = sets
        .iter()
        .map(|set| set.iter().map(|v| relabel[v]).collect())
        .collect();
    LabeledMultigraph::union_of_cliques(n, &renamed)
}

/// Centered product moment `E[prod (I_R - t_r)]`, by expanding over subsets.
pub fn delta_exact(sets: &[Vec<usize>], w: &StepGraphon) -> Result<f64> {
    let r = validate_tuple(sets)?;
    let m = sets.len();
    if m > MAX_TUPLE_LEN {
        return Err(Error::InvalidInput(format!(
            "tuple length {m} exceeds the subset-expansion cap {MAX_TUPLE_LEN}"
        )));
    }
    let t_r = clique_density(w, r)?;
    let mut total = 0.0;
    for mask in 0u32..(1u32 << m) {
        let chosen: Vec<Vec<usize>> = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| sets[i].clone())
            .collect();
        let density = if chosen.is_empty() {
            1.0
        } else {
            hom_density(&union_graph(&chosen)?, w)?
        };
        let sign_power = m - chosen.len();
        total += (-t_r).powi(sign_power as i32) * density;
    }
    Ok(total)
}

/// Census of all ordered m-tuples of r-subsets of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleCensus {
    pub x_count: u64,
    pub other_count: u64,
    /// Count per cycle-type vector.
    pub f_counts: BTreeMap<Vec<usize>, u64>,
    pub total: u64,
}

/// Enumerates and classifies every ordered m-tuple; budget-capped.
pub fn count_tuples_by_type(n: usize, r: usize, m: usize) -> Result<TupleCensus> {
    if r < 2 || m == 0 {
        return Err(Error::InvalidInput(format!(
            "need r >= 2 and m >= 1, got r = {r}, m = {m}"
        )));
    }
    let subsets = binomial_u128(n, r)?;
    let budget = subsets.checked_pow(m as u32);
    match budget {
        Some(b) if b <= ENUMERATION_BUDGET => {}
        _ => {
            return Err(Error::InvalidInput(format!(
                "C({n}, {r})^{m} exceeds the enumeration budget {ENUMERATION_BUDGET}"
            )))
        }
    }
    let mut census = TupleCensus {
        x_count: 0,
        other_count: 0,
        f_counts: BTreeMap::new(),
        total: 0,
    };
    if subsets == 0 {
        return Ok(census);
    }

    let mut all_subsets = Vec::with_capacity(subsets as usize);
    let mut current: Vec<usize> = (0..r).collect();
    loop {
        all_subsets.push(current.clone());
        let mut i = r;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if current[i] != i + n - r {
                break;
            }
        }
        if current[i] == i + n - r {
            break;
        }
        current[i] += 1;
        for j in i + 1..r {
            current[j] = current[j - 1] + 1;
        }
    }

    let mut odometer = vec![0usize; m];
    let mut tuple: Vec<Vec<usize>> = Vec::with_capacity(m);
    loop {
        tuple.clear();
        tuple.extend(odometer.iter().map(|&i| all_subsets[i].clone()));
        match classify_tuple(&tuple)?.class {
            TupleClass::XClass => census.x_count += 1,
            TupleClass::Other => census.other_count += 1,
            TupleClass::FClass { cycle_type } => {
                *census.f_counts.entry(cycle_type).or_insert(0) += 1;
            }
        }
        census.total += 1;
        let mut pos = 0;
        while pos < m {
            odometer[pos] += 1;
            if odometer[pos] < all_subsets.len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    Ok(census)
}

/// Closed-form count of ordered m-tuples realizing a given cycle type on `n`
/// vertices: `m! (n)_{(r-1)m} / prod_l (2l ((r-2)!)^l)^{k_l} k_l!`.
pub fn tuple_count_formula(n: usize, r: usize, cycle_type: &[usize]) -> Result<u128> {
    if r < 2 {
        return Err(Error::InvalidInput("need r >= 2".into()));
    }
    let m: usize = cycle_type
        .iter()
        .enumerate()
        .map(|(i, &k)| (i + 2) * k)
        .sum();
    if m == 0 {
        return Err(Error::InvalidInput("empty cycle type".into()));
    }
    let overflow = || Error::Overflow("tuple count exceeds u128".into());

    let vertices = (r - 1) * m;
    let mut numerator: u128 = 1;
    for k in 1..=m {
        numerator = numerator.checked_mul(k as u128).ok_or_else(overflow)?;
    }
    if vertices > n {
        return Ok(0);
    }
    for i in 0..vertices {
        numerator = numerator
            .checked_mul((n - i) as u128)
            .ok_or_else(overflow)?;
    }
    let fact_r2: u128 = (1..=(r as u128 - 2)).product();
    let mut denominator: u128 = 1;
    for (i, &k) in cycle_type.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let l = (i + 2) as u128;
        let per_cycle = (2 * l)
            .checked_mul(fact_r2.checked_pow(l as u32).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        for _ in 0..k {
            denominator = denominator.checked_mul(per_cycle).ok_or_else(overflow)?;
        }
        for j in 1..=k as u128 {
            denominator = denominator.checked_mul(j).ok_or_else(overflow)?;
        }
    }
    if numerator % denominator != 0 {
        return Err(Error::Numerical(format!(
            "tuple count {numerator}/{denominator} is not an integer"
        )));
    }
    Ok(numerator / denominator)
}

/// Exact law of the r-clique count of a sampled graph on `n <= 5` vertices
/// over a graphon with at most 4 blocks, by full enumeration of type
/// assignments and edge outcomes.
pub fn exact_distribution(w: &StepGraphon, n: usize, r: usize) -> Result<BTreeMap<u64, f64>> {
    if n == 0 || n > 5 {
        return Err(Error::InvalidInput(format!(
            "exact distribution supports 1 <= n <= 5, got {n}"
        )));
    }
    let b = w.block_count();
    if b > 4 {
        return Err(Error::InvalidInput(format!(
            "exact distribution supports at most 4 blocks, got {b}"
        )));
    }
    if r < 2 {
        return Err(Error::InvalidInput("need r >= 2".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let edge_count = pairs.len();

    // Clique count per edge mask.
    let mut cliques_of_mask = vec![0u64; 1 << edge_count];
    if r <= n {
        let mut subset: Vec<usize> = (0..r).collect();
        let mut subset_masks: Vec<u32> = Vec::new();
        loop {
            let mut mask = 0u32;
            for a in 0..r {
                for c in (a + 1)..r {
                    let (u, v) = (subset[a], subset[c]);
                    let idx = pairs
                        .iter()
                        .position(|&(x, y)| (x, y) == (u.min(v), u.max(v)))
                        .unwrap();
                    mask |= 1 << idx;
                }
            }
            subset_masks.push(mask);
            let mut i = r;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if subset[i] != i + n - r {
                    break;
                }
            }
            if subset[i] == i + n - r {
                break;
            }
            subset[i] += 1;
            for j in i + 1..r {
                subset[j] = subset[j - 1] + 1;
            }
        }
        for (mask, slot) in cliques_of_mask.iter_mut().enumerate() {
            *slot = subset_masks
                .iter()
                .filter(|&&sm| mask as u32 & sm == sm)
                .count() as u64;
        }
    }

    let mut law: BTreeMap<u64, f64> = BTreeMap::new();
    let mut types = vec![0usize; n];
    loop {
        let type_prob: f64 = types.iter().map(|&t| w.mu()[t]).product();
        let edge_probs: Vec<f64> = pairs
            .iter()
            .map(|&(i, j)| w.value(types[i], types[j]))
            .collect();
        for mask in 0usize..(1 << edge_count) {
            let mut prob = type_prob;
            for (e, &p) in edge_probs.iter().enumerate() {
                prob *= if mask >> e & 1 == 1 { p } else { 1.0 - p };
                if prob == 0.0 {
                    break;
                }
            }
            if prob > 0.0 {
                *law.entry(cliques_of_mask[mask]).or_insert(0.0) += prob;
            }
        }
        let mut pos = 0;
        while pos < n {
            types[pos] += 1;
            if types[pos] < b {
                break;
            }
            types[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    Ok(law)
}

/// Verifies that the centered product moment factorizes over vertex-disjoint
/// loose cycles and that proper sub-collections of one cycle contribute the
/// plain power of the clique density (the latter only when the graphon has a
/// constant r-clique profile).
///
/// Returns false on any structural or numerical violation.
pub fn factorization_check(
    sets: &[Vec<usize>],
    partition: &[Vec<usize>],
    w: &StepGraphon,
) -> bool {
    const TOL: f64 = 1e-10;
    let Ok(r) = validate_tuple(sets) else {
        return false;
    };
    let m = sets.len();

    // The partition must cover 0..m exactly once and split into
    // vertex-disjoint single loose cycles.
    let mut seen = vec![false; m];
    for part in partition {
        for &i in part {
            if i >= m || seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return false;
    }
    let mut part_vertices: Vec<std::collections::BTreeSet<usize>> = Vec::new();
    for part in partition {
        let subtuple: Vec<Vec<usize>> = part.iter().map(|&i| sets[i].clone()).collect();
        match classify_tuple(&subtuple) {
            Ok(TupleStructure {
                class: TupleClass::FClass { cycle_type },
                ..
            }) if cycle_type.iter().sum::<usize>() == 1 => {}
            _ => return false,
        }
        part_vertices.push(subtuple.into_iter().flatten().collect());
    }
    for a in 0..part_vertices.len() {
        for b in (a + 1)..part_vertices.len() {
            if !part_vertices[a].is_disjoint(&part_vertices[b]) {
                return false;
            }
        }
    }

    let Ok(whole) = delta_exact(sets, w) else {
        return false;
    };
    let mut product = 1.0;
    for part in partition {
        let subtuple: Vec<Vec<usize>> = part.iter().map(|&i| sets[i].clone()).collect();
        match delta_exact(&subtuple, w) {
            Ok(d) => product *= d,
            Err(_) => return false,
        }
    }
    if (whole - product).abs() > TOL {
        return false;
    }

    let Ok(regular) = w.is_kr_regular(r, 1e-10) else {
        return false;
    };
    if regular {
        let Ok(t_r) = clique_density(w, r) else {
            return false;
        };
        for part in partition {
            let len = part.len();
            for mask in 0u32..(1u32 << len) {
                if mask == (1 << len) - 1 {
                    continue; // proper sub-collections only
                }
                let chosen: Vec<Vec<usize>> = (0..len)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| sets[part[i]].clone())
                    .collect();
                let Ok(e) = clique_product_expectation(&chosen, w) else {
                    return false;
                };
                if (e - t_r.powi(chosen.len() as i32)).abs() > TOL {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn classify_disjoint_pair_is_x() {
        let sets = vec![vec![0, 1, 2], vec![3, 4, 5]];
        let s = classify_tuple(&sets).unwrap();
        assert_eq!(s.class, TupleClass::XClass);
    }

    #[test]
    fn classify_shared_pair_is_f() {
        let sets = vec![vec![1, 2, 3], vec![2, 3, 4]];
        let s = classify_tuple(&sets).unwrap();
        assert_eq!(s.vertex_count, 4);
        assert_eq!(s.class, TupleClass::FClass { cycle_type: vec![1] });
    }

    #[test]
    fn classify_loose_triangle() {
        let sets = vec![vec![0, 1, 10], vec![1, 2, 11], vec![2, 0, 12]];
        let s = classify_tuple(&sets).unwrap();
        assert_eq!(s.vertex_count, 6);
        assert_eq!(
            s.class,
            TupleClass::FClass {
                cycle_type: vec![0, 1]
            }
        );
    }

    #[test]
    fn classify_repeated_set_r2() {
        let sets = vec![vec![0, 1], vec![0, 1]];
        let s = classify_tuple(&sets).unwrap();
        assert_eq!(s.class, TupleClass::FClass { cycle_type: vec![1] });
    }

    #[test]
    fn classify_single_set_is_x() {
        let sets = vec![vec![0, 1, 2]];
        assert_eq!(classify_tuple(&sets).unwrap().class, TupleClass::XClass);
    }

    #[test]
    fn classify_other_structure() {
        // Three sets through one shared vertex pair pattern that collapses
        // the union below (r-1)m vertices.
        let sets = vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 0]];
        let s = classify_tuple(&sets).unwrap();
        assert_eq!(s.class, TupleClass::Other);
    }

    #[test]
    fn delta_is_zero_on_x_class_for_regular() {
        let toy = corpus::two_cliques();
        let sets = vec![vec![0, 1, 2], vec![2, 3, 4]]; // share one vertex
        assert_eq!(
            classify_tuple(&sets).unwrap().class,
            TupleClass::XClass
        );
        assert!(delta_exact(&sets, &toy).unwrap().abs() <= 1e-10);
        // Single set: always zero.
        assert!(delta_exact(&[vec![0, 1, 2]], &toy).unwrap().abs() <= 1e-15);
    }

    #[test]
    fn delta_shared_pair_constant_half() {
        let w = corpus::constant(0.5);
        let sets = vec![vec![0, 1, 2], vec![1, 2, 3]];
        let d = delta_exact(&sets, &w).unwrap();
        assert!((d - 1.0 / 64.0).abs() < 1e-14);
    }

    #[test]
    fn census_matches_formula() {
        let census = count_tuples_by_type(6, 3, 2).unwrap();
        assert_eq!(census.total, 400);
        assert_eq!(
            census.f_counts.get(&vec![1]).copied().unwrap_or(0),
            tuple_count_formula(6, 3, &[1]).unwrap() as u64
        );
        assert_eq!(tuple_count_formula(6, 3, &[1]).unwrap(), 180);

        let census = count_tuples_by_type(5, 2, 2).unwrap();
        assert_eq!(
            census.f_counts.get(&vec![1]).copied().unwrap_or(0),
            10
        );
        assert_eq!(tuple_count_formula(5, 2, &[1]).unwrap(), 10);
    }

    #[test]
    fn census_below_r_is_empty() {
        let census = count_tuples_by_type(2, 3, 2).unwrap();
        assert_eq!(census.total, 0);
    }

    #[test]
    fn census_budget_enforced() {
        assert!(count_tuples_by_type(30, 5, 4).is_err());
    }

    #[test]
    fn exact_distribution_examples() {
        let ones = corpus::constant(1.0);
        let law = exact_distribution(&ones, 4, 3).unwrap();
        assert_eq!(law.len(), 1);
        assert!((law[&4] - 1.0).abs() < 1e-15);

        let half = corpus::constant(0.5);
        let law = exact_distribution(&half, 3, 3).unwrap();
        assert!((law[&1] - 0.125).abs() < 1e-15);
        assert!((law[&0] - 0.875).abs() < 1e-15);

        // Expectation identity.
        let toy = corpus::two_cliques();
        for (n, r) in [(4usize, 2usize), (5, 3)] {
            let law = exact_distribution(&toy, n, r).unwrap();
            let mean: f64 = law.iter().map(|(&k, &p)| k as f64 * p).sum();
            let expect = crate::cliques::binomial_f64(n, r)
                * clique_density(&toy, r).unwrap();
            assert!((mean - expect).abs() < 1e-12, "n={n}, r={r}");
            let mass: f64 = law.values().sum();
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_distribution_limits() {
        let toy = corpus::two_cliques();
        assert!(exact_distribution(&toy, 6, 2).is_err());
        let mut rng = crate::sampler::split_stream(5, 5);
        let five_blocks = corpus::random_graphon(&mut rng, 5);
        assert!(exact_distribution(&five_blocks, 4, 2).is_err());
    }

    #[test]
    fn factorization_on_disjoint_pairs() {
        let toy = corpus::two_cliques();
        // Two vertex-disjoint shared-pair tuples.
        let sets = vec![
            vec![0, 1, 2],
            vec![1, 2, 3],
            vec![4, 5, 6],
            vec![5, 6, 7],
        ];
        assert!(factorization_check(
            &sets,
            &[vec![0, 1], vec![2, 3]],
            &toy
        ));
        // A partition that is not a union of single cycles is rejected.
        assert!(!factorization_check(
            &sets,
            &[vec![0, 1, 2, 3]],
            &toy
        ));
    }

    #[test]
    fn proper_subcycle_expectation_is_density_power() {
        let toy = corpus::two_cliques();
        // Two edges of a loose triangle.
        let sets = vec![vec![0, 1, 10], vec![1, 2, 11]];
        let e = clique_product_expectation(&sets, &toy).unwrap();
        let t3 = clique_density(&toy, 3).unwrap();
        assert!((e - t3 * t3).abs() < 1e-12);
        // A single clique.
        let e = clique_product_expectation(&[vec![0, 1, 2]], &toy).unwrap();
        assert!((e - t3).abs() < 1e-15);
    }
}
