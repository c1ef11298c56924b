//! Exact r-clique counting on bit-packed adjacency.
//!
//! `r = 2` is a popcount; `r = 3` intersects the two endpoint neighborhoods
//! of every edge and divides by 3; larger r recurses on candidate bit rows,
//! with vertices relabeled in degree order first so candidate sets shrink
//! quickly. Counts only, no clique materialization.

use crate::error::{Error, Result};
use crate::sampler::SampledGraph;

/// `C(n, k)` in `u128`, erroring on overflow.
pub fn binomial_u128(n: usize, k: usize) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        let factor = (n - k + i) as u128;
        c = c
            .checked_mul(factor)
            .ok_or_else(|| Error::Overflow(format!("binomial({n}, {k}) exceeds u128")))?
            / i as u128;
    }
    Ok(c)
}

/// `C(n, k)` as a float, exact whenever the integer value fits in u128.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    match binomial_u128(n, k) {
        Ok(c) => c as f64,
        Err(_) => {
            let k = k.min(n - k);
            let mut c = 1.0;
            for i in 1..=k {
                c = c * (n - k + i) as f64 / i as f64;
            }
            c
        }
    }
}

/// Number of r-subsets of the vertices that induce a clique.
pub fn count_cliques(g: &SampledGraph, r: usize) -> Result<u64> {
    if r < 2 {
        return Err(Error::InvalidInput(format!(
            "clique order r = {r} must be at least 2"
        )));
    }
    let n = g.n();
    if r > n {
        return Ok(0);
    }
    if binomial_u128(n, r)? > i64::MAX as u128 {
        return Err(Error::Overflow(format!(
            "C({n}, {r}) exceeds the 64-bit accumulator range"
        )));
    }
    match r {
        2 => {
            let total: u64 = (0..n)
                .map(|v| g.row(v).iter().map(|w| w.count_ones() as u64).sum::<u64>())
                .sum();
            Ok(total / 2)
        }
        3 => {
            let mut triples = 0u64;
            for u in 0..n {
                let row_u = g.row(u);
                for (wi, &word) in row_u.iter().enumerate() {
                    // Only edges with v > u, so each edge is visited once.
                    let mut bits = if wi * 64 <= u && u < (wi + 1) * 64 {
                        word & !((1u64 << (u % 64)) | ((1u64 << (u % 64)) - 1))
                    } else if wi * 64 < u {
                        0
                    } else {
                        word
                    };
                    while bits != 0 {
                        let v = wi * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let row_v = g.row(v);
                        let common: u64 = row_u
                            .iter()
                            .zip(row_v)
                            .map(|(a, b)| (a & b).count_ones() as u64)
                            .sum();
                        triples += common;
                    }
                }
            }
            Ok(triples / 3)
        }
        _ => count_general(g, r),
    }
}

fn count_general(g: &SampledGraph, r: usize) -> Result<u64> {
    let n = g.n();
    let words = n.div_ceil(64);

    // Relabel by ascending degree; ties by label.
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (degrees[v], v));
    let mut position = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }

    // rows_gt[p]: neighbors of the vertex at position p, restricted to
    // positions greater than p.
    let mut rows_gt = vec![0u64; n * words];
    for (p, &v) in order.iter().enumerate() {
        let row = g.row(v);
        let dst = &mut rows_gt[p * words..(p + 1) * words];
        for (wi, &word) in row.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let u = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let q = position[u];
                if q > p {
                    dst[q / 64] |= 1u64 << (q % 64);
                }
            }
        }
    }

    let mut scratch = vec![0u64; words * r];
    let mut total = 0u64;
    for p in 0..n {
        let cand = &rows_gt[p * words..(p + 1) * words];
        total += count_in_candidates(cand, r - 1, &rows_gt, words, &mut scratch);
    }
    Ok(total)
}

/// Counts (need)-cliques inside the candidate set, all of whose members are
/// above the current position.
fn count_in_candidates(
    cand: &[u64],
    need: usize,
    rows_gt: &[u64],
    words: usize,
    scratch: &mut [u64],
) -> u64 {
    if need == 1 {
        return cand.iter().map(|w| w.count_ones() as u64).sum();
    }
    let (level, rest) = scratch.split_at_mut(words);
    let mut total = 0u64;
    for (wi, &word) in cand.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let q = wi * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let row = &rows_gt[q * words..(q + 1) * words];
            for i in 0..words {
                level[i] = cand[i] & row[i];
            }
            total += count_in_candidates(level, need - 1, rows_gt, words, rest);
        }
    }
    total
}

/// Brute-force reference count over all r-subsets; capped at 20 vertices.
pub fn count_cliques_reference(g: &SampledGraph, r: usize) -> Result<u64> {
    if r < 2 {
        return Err(Error::InvalidInput(format!(
            "clique order r = {r} must be at least 2"
        )));
    }
    if g.n() > 20 {
        return Err(Error::InvalidInput(format!(
            "reference counter is capped at 20 vertices, got {}",
            g.n()
        )));
    }
    if r > g.n() {
        return Ok(0);
    }
    let mut subset: Vec<usize> = (0..r).collect();
    let n = g.n();
    let mut count = 0u64;
    loop {
        let mut ok = true;
        'check: for a in 0..r {
            for b in (a + 1)..r {
                if !g.has_edge(subset[a], subset[b]) {
                    ok = false;
                    break 'check;
                }
            }
        }
        if ok {
            count += 1;
        }
        // Next r-combination in lexicographic order.
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            if subset[i] != i + n - r {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..r {
            subset[j] = subset[j - 1] + 1;
        }
    }
}
