//! Exact homomorphism and conditional densities of small multigraphs in a
//! step graphon, by direct summation over block assignments.
//!
//! The density of a pattern `H` with `k` vertices is a sum over all `B^k`
//! assignments of vertices to blocks of `prod mu * prod value^multiplicity`.
//! Marked vertices are pinned to given blocks and contribute no `mu` factor.
//! Enumeration is capped at [`MAX_ENUM_VERTICES`] free vertices; longer cycle
//! patterns have a transfer-matrix path in the spectral module.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::multigraph::LabeledMultigraph;

/// Hard cap on the number of freely enumerated vertices.
pub const MAX_ENUM_VERTICES: usize = 12;

/// Assignment counts above this are split into prefix tasks and run on the
/// rayon pool. Branch sums are combined in task order, so the result does not
/// depend on the worker count.
const PARALLEL_LEAF_THRESHOLD: f64 = (1u64 << 20) as f64;

/// Homomorphism density `t(H, W)` of an unmarked multigraph.
pub fn hom_density(h: &LabeledMultigraph, w: &StepGraphon) -> Result<f64> {
    if !h.marked().is_empty() {
        return Err(Error::InvalidInput(
            "pattern has marked vertices; use conditional_density".into(),
        ));
    }
    assignment_sum(h, w, &[])
}

/// Conditional density with the marked vertices of `H` pinned to `blocks`, in
/// the order the marks were given.
pub fn conditional_density(
    h: &LabeledMultigraph,
    w: &StepGraphon,
    blocks: &[usize],
) -> Result<f64> {
    let marks = h.marked().len();
    if marks == 0 {
        return Err(Error::InvalidInput(
            "pattern has no marked vertices; use hom_density".into(),
        ));
    }
    if blocks.len() != marks {
        return Err(Error::InvalidInput(format!(
            "{} marked vertices but {} pinned blocks",
            marks,
            blocks.len()
        )));
    }
    for &b in blocks {
        if b >= w.block_count() {
            return Err(Error::InvalidInput(format!(
                "pinned block {b} outside range 0..{}",
                w.block_count()
            )));
        }
    }
    assignment_sum(h, w, blocks)
}

#[inline]
fn edge_power(x: f64, m: u32) -> f64 {
    match m {
        1 => x,
        2 => x * x,
        _ => x.powi(m as i32),
    }
}

/// Core enumeration. Slot order: marked vertices first (pinned), then the
/// free vertices in label order.
fn assignment_sum(h: &LabeledMultigraph, w: &StepGraphon, pinned: &[usize]) -> Result<f64> {
    let n = h.n_vertices();
    let marks = h.marked().len();
    let free = n - marks;
    if free > MAX_ENUM_VERTICES {
        return Err(Error::InvalidInput(format!(
            "{free} free vertices exceed the {MAX_ENUM_VERTICES}-vertex enumeration limit; \
             long cycle patterns go through the transfer-matrix path"
        )));
    }

    let mut slot_of = vec![usize::MAX; n];
    for (s, &v) in h.marked().iter().enumerate() {
        slot_of[v] = s;
    }
    let mut next = marks;
    for v in 0..n {
        if slot_of[v] == usize::MAX {
            slot_of[v] = next;
            next += 1;
        }
    }

    let mut assign = vec![0usize; n];
    assign[..marks].copy_from_slice(pinned);

    // Factor over edges between two pinned vertices; group the rest by their
    // later slot.
    let mut base = 1.0f64;
    let mut back: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for &(u, v, m) in h.edges() {
        let (a, b) = (slot_of[u], slot_of[v]);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if hi < marks {
            base *= edge_power(w.value(assign[lo], assign[hi]), m);
        } else {
            back[hi].push((lo, m));
        }
    }
    if base == 0.0 || free == 0 {
        return Ok(base);
    }

    let b = w.block_count();
    let leaves = (b as f64).powi(free as i32);
    if free >= 3 && leaves >= PARALLEL_LEAF_THRESHOLD {
        // Split on the first two free slots.
        let s0 = marks;
        let s1 = marks + 1;
        let sums: Vec<f64> = (0..b * b)
            .into_par_iter()
            .map(|task| {
                let (b0, b1) = (task / b, task % b);
                let mut assign = assign.clone();
                assign[s0] = b0;
                let w0 = level_weight(w, &assign, &back[s0], b0);
                if w0 == 0.0 {
                    return 0.0;
                }
                assign[s1] = b1;
                let w1 = level_weight(w, &assign, &back[s1], b1);
                if w1 == 0.0 {
                    return 0.0;
                }
                recurse(s1 + 1, n, base * w0 * w1, &mut assign, &back, w)
            })
            .collect();
        Ok(sums.iter().sum())
    } else {
        Ok(recurse(marks, n, base, &mut assign, &back, w))
    }
}

#[inline]
fn level_weight(w: &StepGraphon, assign: &[usize], back: &[(usize, u32)], blk: usize) -> f64 {
    let mut wgt = w.mu()[blk];
    for &(lo, m) in back {
        wgt *= edge_power(w.value(blk, assign[lo]), m);
    }
    wgt
}

fn recurse(
    slot: usize,
    n: usize,
    prod: f64,
    assign: &mut Vec<usize>,
    back: &[Vec<(usize, u32)>],
    w: &StepGraphon,
) -> f64 {
    let b = w.block_count();
    if slot == n - 1 {
        let mut tail = 0.0;
        for blk in 0..b {
            tail += level_weight(w, assign, &back[slot], blk);
        }
        return prod * tail;
    }
    let mut total = 0.0;
    for blk in 0..b {
        let wgt = level_weight(w, assign, &back[slot], blk);
        if wgt == 0.0 {
            continue;
        }
        assign[slot] = blk;
        total += recurse(slot + 1, n, prod * wgt, assign, back, w);
    }
    total
}
