use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{TorusConfig, Vertex};

/// An immutable sampled graph on the `N^2` torus vertices.
///
/// Adjacency is stored in compressed rows; each row is sorted and free of
/// duplicates and self-loops, and `u` lists `v` iff `v` lists `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    torus: TorusConfig,
    weights: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Build from undirected edges given as vertex-index pairs. Duplicates collapse.
    pub fn from_edges(torus: TorusConfig, weights: Vec<f64>, edges: &[(u32, u32)]) -> Result<Self> {
        let n = torus.n_vertices();
        if weights.len() != n {
            return Err(Error::Parameter(format!(
                "expected {n} weights, got {}",
                weights.len()
            )));
        }
        let mut degree = vec![0usize; n];
        for &(a, b) in edges {
            if a == b {
                return Err(Error::Domain(format!("self-loop at vertex {a}")));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::Domain(format!("edge ({a}, {b}) outside 0..{n}")));
            }
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(a, b) in edges {
            targets[fill[a as usize]] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        // Sort and dedup each row, then compact.
        let mut compact = Vec::with_capacity(targets.len());
        let mut new_offsets = Vec::with_capacity(n + 1);
        new_offsets.push(0);
        for i in 0..n {
            let row = &mut targets[offsets[i]..offsets[i + 1]];
            row.sort_unstable();
            let start = compact.len();
            for &t in row.iter() {
                if compact.len() == start || *compact.last().unwrap() != t {
                    compact.push(t);
                }
            }
            new_offsets.push(compact.len());
        }
        Ok(Self {
            torus,
            weights,
            offsets: new_offsets,
            targets: compact,
        })
    }

    /// Graph with no edges.
    pub fn empty(torus: TorusConfig, weights: Vec<f64>) -> Result<Self> {
        Self::from_edges(torus, weights, &[])
    }

    pub fn torus(&self) -> &TorusConfig {
        &self.torus
    }

    pub fn n_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).binary_search(&(b as u32)).is_ok()
    }

    /// Each undirected edge once, as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_vertices()).flat_map(move |a| {
            self.neighbors(a)
                .iter()
                .map(|&b| b as usize)
                .filter(move |&b| a < b)
                .map(move |b| (a, b))
        })
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.torus.vertex(i)
    }

    /// Edge list, one `u1 u2 v1 v2` line per edge, endpoints in index order.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (a, b) in self.edges() {
            let (u, v) = (self.vertex(a), self.vertex(b));
            writeln!(out, "{} {} {} {}", u.u1, u.u2, v.u1, v.u2)?;
        }
        Ok(())
    }

    /// Weights, one `u1 u2 w` line per vertex in index order.
    pub fn write_weights<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, w) in self.weights.iter().enumerate() {
            let u = self.vertex(i);
            writeln!(out, "{} {} {}", u.u1, u.u2, w)?;
        }
        Ok(())
    }
}
