//! Seeded, reproducible sampling of W-random graphs.
//!
//! A graph on `n` vertices is drawn in two steps: each vertex independently
//! receives a block with probabilities `mu`, then each pair is independently
//! joined with the probability given by the value matrix at the two blocks.
//! For step graphons the block is a sufficient statistic of the vertex type,
//! so only block indices are retained.
//!
//! Randomness comes from counter-based streams: `split_stream(seed, t)`
//! yields trial `t`'s generator directly, without sequencing through earlier
//! trials, so trials can run on any number of workers in any order with
//! identical output.

use std::io::{self, Write};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphon::StepGraphon;

/// Default cap on the vertex count (the adjacency matrix is `n^2` bits).
pub const DEFAULT_MAX_VERTICES: usize = 1 << 16;

/// One reproducible random stream. Identical seed and index give identical
/// output sequences.
#[derive(Debug, Clone)]
pub struct RngStream(ChaCha8Rng);

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}

/// Derives the stream for `(master_seed, index)`. The key comes from the
/// seed, the cipher stream counter from the index, so distinct indices give
/// independent-behaving streams at O(1) cost.
pub fn split_stream(master_seed: u64, index: u64) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    RngStream(rng)
}

/// Bit-packed adjacency of one sampled graph, with the vertex blocks kept
/// for diagnostics.
#[derive(Debug, Clone)]
pub struct SampledGraph {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    types: Vec<u16>,
}

impl SampledGraph {
    /// Builds a graph from an explicit edge list (test fixtures, oracle
    /// pipelines).
    pub fn from_edges(n: usize, types: Vec<u16>, edges: &[(usize, usize)]) -> Result<Self> {
        if types.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} type entries for {n} vertices",
                types.len()
            )));
        }
        let words_per_row = n.div_ceil(64);
        let mut g = SampledGraph {
            n,
            words_per_row,
            bits: vec![0; n * words_per_row],
            types,
        };
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad edge ({u}, {v})")));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.bits[u * self.words_per_row + v / 64] |= 1u64 << (v % 64);
        self.bits[v * self.words_per_row + u / 64] |= 1u64 << (u % 64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn types(&self) -> &[u16] {
        &self.types
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words_per_row..(v + 1) * self.words_per_row]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words_per_row + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            let row = self.row(u);
            for (wi, &word) in row.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let v = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if v > u {
                        out.push((u as u32, v as u32));
                    }
                }
            }
        }
        out
    }

    /// Writes the edge list, one `u v` pair per line, `u < v`, sorted.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum EdgeDraw {
    Never,
    Always,
    Threshold(u64),
}

/// Samples one W-random graph on `n` vertices from the given stream.
pub fn sample_graph(w: &StepGraphon, n: usize, stream: &mut RngStream) -> Result<SampledGraph> {
    sample_graph_with_limit(w, n, DEFAULT_MAX_VERTICES, stream)
}

/// Same as [`sample_graph`] with an explicit vertex-count ceiling.
pub fn sample_graph_with_limit(
    w: &StepGraphon,
    n: usize,
    max_vertices: usize,
    stream: &mut RngStream,
) -> Result<SampledGraph> {
    if n == 0 {
        return Err(Error::InvalidInput("vertex count must be positive".into()));
    }
    if n > max_vertices {
        return Err(Error::InvalidInput(format!(
            "n = {n} exceeds the vertex ceiling {max_vertices}"
        )));
    }
    let b = w.block_count();

    let mut cumulative = Vec::with_capacity(b);
    let mut acc = 0.0;
    for &m in w.mu() {
        acc += m;
        cumulative.push(acc);
    }

    let mut draws = Vec::with_capacity(b * b);
    for i in 0..b {
        for j in 0..b {
            let p = w.value(i, j);
            draws.push(if p <= 0.0 {
                EdgeDraw::Never
            } else if p >= 1.0 {
                EdgeDraw::Always
            } else {
                EdgeDraw::Threshold((p * 2f64.powi(64)) as u64)
            });
        }
    }

    let mut types = Vec::with_capacity(n);
    for _ in 0..n {
        let u = rand::Rng::gen::<f64>(stream);
        let mut blk = b - 1;
        for (i, &c) in cumulative.iter().enumerate() {
            if u < c {
                blk = i;
                break;
            }
        }
        types.push(blk as u16);
    }

    let words_per_row = n.div_ceil(64);
    let mut g = SampledGraph {
        n,
        words_per_row,
        bits: vec![0; n * words_per_row],
        types,
    };

    // 0/1-valued graphons determine all edges from the types alone (no edge
    // draws happen either way), so rows can be assembled from per-block
    // membership masks instead of the pair loop.
    let deterministic = !draws
        .iter()
        .any(|d| matches!(d, EdgeDraw::Threshold(_)));
    if deterministic {
        let mut block_masks = vec![0u64; b * words_per_row];
        for (v, &t) in g.types.iter().enumerate() {
            block_masks[t as usize * words_per_row + v / 64] |= 1u64 << (v % 64);
        }
        for i in 0..n {
            let ti = g.types[i] as usize;
            let row = &mut g.bits[i * words_per_row..(i + 1) * words_per_row];
            for tj in 0..b {
                if matches!(draws[ti * b + tj], EdgeDraw::Always) {
                    let mask = &block_masks[tj * words_per_row..(tj + 1) * words_per_row];
                    for (dst, &m) in row.iter_mut().zip(mask) {
                        *dst |= m;
                    }
                }
            }
            row[i / 64] &= !(1u64 << (i % 64));
        }
        return Ok(g);
    }

    for i in 0..n {
        let ti = g.types[i] as usize;
        for j in (i + 1)..n {
            let edge = match draws[ti * b + g.types[j] as usize] {
                EdgeDraw::Never => false,
                EdgeDraw::Always => true,
                EdgeDraw::Threshold(t) => stream.next_u64() < t,
            };
            if edge {
                g.set_edge(i, j);
            }
        }
    }
    Ok(g)
}
