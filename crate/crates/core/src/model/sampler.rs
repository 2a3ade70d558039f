//! Edge samplers for `G_{N,W}`.
//!
//! The fast sampler visits, for every vertex `u`, half of each distance ring
//! so that every unordered pair is considered from exactly one endpoint.
//! Rings are grouped in dyadic blocks `[2^k, 2^{k+1})`. Within a block a
//! proposal probability `q = min(c B^2 / (N r_min), 1)` dominates every pair
//! probability, so the number of proposals is `Bin(len, q)`, the proposed
//! positions are a uniform subset of that size, and each proposal is kept
//! with probability `p(u, v) / q`. Each pair is therefore an edge
//! independently with probability exactly `p(u, v)`.
//!
//! Vertex `u` draws from its own stream `u + 1` of the seed's generator;
//! stream 0 is reserved for the weights.

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::graph::Graph;
use super::{edge_probability_raw, ModelConfig};
use crate::error::{Error, Result};
use crate::geometry::TorusConfig;
use crate::rng::StreamFactory;

const WEIGHT_STREAM: u64 = 0;
const CHUNK: usize = 512;

#[derive(Debug, Clone, Copy)]
struct HalfOffset {
    s1: u32,
    s2: u32,
    ring: u32,
    /// `delta == -delta (mod N)`: the pair is seen from both endpoints and is
    /// kept only from the one with the smaller index.
    self_inverse: bool,
}

#[derive(Debug, Clone, Copy)]
struct Block {
    start: usize,
    end: usize,
    min_ring: u32,
}

/// Half-ring offsets of every ring, grouped into dyadic distance blocks.
#[derive(Debug, Clone)]
struct ProposalTable {
    offsets: Vec<HalfOffset>,
    blocks: Vec<Block>,
}

impl ProposalTable {
    fn new(torus: &TorusConfig) -> Result<Self> {
        let n = torus.side();
        let mut offsets = Vec::with_capacity(torus.n_vertices() / 2 + 2);
        let mut blocks = Vec::new();
        let mut lo = 1u32;
        while lo <= torus.max_dist() {
            let hi = (2 * lo).min(torus.max_dist() + 1);
            let start = offsets.len();
            for r in lo..hi {
                for (s1, s2) in torus.ring_offsets(r)? {
                    let neg = ((n - s1) % n, (n - s2) % n);
                    if (s1, s2) <= neg {
                        offsets.push(HalfOffset {
                            s1,
                            s2,
                            ring: r,
                            self_inverse: (s1, s2) == neg,
                        });
                    }
                }
            }
            blocks.push(Block {
                start,
                end: offsets.len(),
                min_ring: lo,
            });
            lo = hi;
        }
        Ok(Self { offsets, blocks })
    }
}

/// How each candidate pair is decided.
#[derive(Clone, Copy)]
enum Decision<'a> {
    /// Binomial proposals thinned with the vertex stream.
    Random,
    /// Every pair is proposed; `{a, b}` (with `a < b`) is an edge iff `oracle(a, b) < p`.
    Oracle(&'a (dyn Fn(usize, usize) -> f64 + Sync)),
}

fn vertex_edges(
    m: &ModelConfig,
    table: &ProposalTable,
    weights: &[f64],
    bound: f64,
    u_idx: usize,
    rng: &mut ChaCha8Rng,
    decision: Decision<'_>,
    out: &mut Vec<(u32, u32)>,
) {
    let torus = &m.torus;
    let n = torus.side() as f64;
    let u = torus.vertex(u_idx);
    let wu = weights[u_idx];
    for block in &table.blocks {
        let len = block.end - block.start;
        let q = (m.c * bound * bound / (n * block.min_ring as f64)).min(1.0);
        let mut consider = |pos: usize, rng: &mut ChaCha8Rng| {
            let off = table.offsets[block.start + pos];
            let v_idx = torus.index(torus.shift(u, off.s1, off.s2));
            if off.self_inverse && v_idx < u_idx {
                return;
            }
            let p = edge_probability_raw(m.c, n, off.ring, wu, weights[v_idx]);
            let keep = match decision {
                Decision::Random => p >= q || rng.random::<f64>() * q < p,
                Decision::Oracle(oracle) => oracle(u_idx.min(v_idx), u_idx.max(v_idx)) < p,
            };
            if keep {
                out.push((u_idx as u32, v_idx as u32));
            }
        };
        match decision {
            Decision::Oracle(_) => (0..len).for_each(|pos| consider(pos, rng)),
            Decision::Random if q <= 0.0 => {}
            Decision::Random if q >= 1.0 => (0..len).for_each(|pos| consider(pos, rng)),
            Decision::Random => {
                let k = Binomial::new(len as u64, q)
                    .expect("proposal probability in (0, 1)")
                    .sample(rng) as usize;
                if k == 0 {
                    continue;
                }
                for pos in index::sample(rng, len, k) {
                    consider(pos, rng);
                }
            }
        }
    }
}

fn weight_bound(m: &ModelConfig, weights: &[f64]) -> f64 {
    // Unbounded laws fall back to the realized maximum; thinning stays exact
    // conditional on the weights.
    let realized = weights.iter().cloned().fold(0.0, f64::max);
    match m.weights.support_bound() {
        Some(b) => b.max(realized),
        None => realized,
    }
}

fn run_fast(m: &ModelConfig, weights: Vec<f64>, decision: Decision<'_>) -> Result<Graph> {
    let n = m.torus.n_vertices();
    if weights.len() != n {
        return Err(Error::Parameter(format!("expected {n} weights, got {}", weights.len())));
    }
    let table = ProposalTable::new(&m.torus)?;
    let bound = weight_bound(m, &weights);
    let streams = StreamFactory::new(m.seed);
    let chunks: Vec<Vec<(u32, u32)>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut out = Vec::new();
            for u in chunk * CHUNK..((chunk + 1) * CHUNK).min(n) {
                let mut rng = streams.stream(u as u64 + 1);
                vertex_edges(m, &table, &weights, bound, u, &mut rng, decision, &mut out);
            }
            out
        })
        .collect();
    let edges: Vec<(u32, u32)> = chunks.into_iter().flatten().collect();
    Graph::from_edges(m.torus, weights, &edges)
}

/// Draw the vertex weights for `m` from the reserved weight stream.
pub fn model_weights(m: &ModelConfig) -> Result<Vec<f64>> {
    let mut rng = StreamFactory::new(m.seed).stream(WEIGHT_STREAM);
    super::weights::sample_weights(&m.weights, m.torus.n_vertices(), &mut rng)
}

/// Sample `G_{N,W}`: weights first, then edges. Deterministic in `m.seed`.
pub fn sample_graph(m: &ModelConfig) -> Result<Graph> {
    let weights = model_weights(m)?;
    sample_graph_with_weights(m, weights)
}

/// Fast sampler with given vertex weights.
pub fn sample_graph_with_weights(m: &ModelConfig, weights: Vec<f64>) -> Result<Graph> {
    run_fast(m, weights, Decision::Random)
}

/// Fast sampler's pair enumeration driven by a per-pair uniform `oracle(a, b)`, `a < b`.
pub fn sample_graph_with_oracle(
    m: &ModelConfig,
    weights: Vec<f64>,
    oracle: &(dyn Fn(usize, usize) -> f64 + Sync),
) -> Result<Graph> {
    run_fast(m, weights, Decision::Oracle(oracle))
}

/// Per-pair reference sampler, `O(N^4)`. Pairs are visited in index order.
pub fn sample_graph_reference<R: Rng + ?Sized>(
    m: &ModelConfig,
    weights: Vec<f64>,
    rng: &mut R,
) -> Result<Graph> {
    reference(m, weights, |_, _| rng.random::<f64>())
}

/// Reference sampler with the same per-pair oracle contract as [`sample_graph_with_oracle`].
pub fn sample_graph_reference_with_oracle(
    m: &ModelConfig,
    weights: Vec<f64>,
    oracle: &(dyn Fn(usize, usize) -> f64 + Sync),
) -> Result<Graph> {
    reference(m, weights, oracle)
}

fn reference<F: FnMut(usize, usize) -> f64>(m: &ModelConfig, weights: Vec<f64>, mut uniform: F) -> Result<Graph> {
    let torus = &m.torus;
    let n = torus.n_vertices();
    if weights.len() != n {
        return Err(Error::Parameter(format!("expected {n} weights, got {}", weights.len())));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let p = super::edge_probability(torus.vertex(a), torus.vertex(b), weights[a], weights[b], m)?;
            if uniform(a, b) < p {
                edges.push((a as u32, b as u32));
            }
        }
    }
    Graph::from_edges(*torus, weights, &edges)
}
