//! Geometry of the discrete torus `{1, ..., N}^2` with the folded L1 metric,
//! and of its rescaled continuous counterpart `[0, 1)^2`.
//!
//! Vertex coordinates are 1-based. Coordinate differences are reduced into
//! `{0, ..., N - 1}` before folding, so `fold` never sees an argument `>= N`;
//! in particular the even-N case needs no extension of the folding map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side length of the torus together with derived ring geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusConfig {
    n: u32,
}

impl TorusConfig {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("torus side must be > 1, got {n}")));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn side(&self) -> u32 {
        self.n
    }

    /// Number of vertices, `N^2`.
    #[inline]
    pub fn n_vertices(&self) -> usize {
        (self.n as usize) * (self.n as usize)
    }

    /// Largest distance with a non-empty ring: `N - 1` for odd `N`, `N` for even `N`.
    #[inline]
    pub fn max_dist(&self) -> u32 {
        2 * (self.n / 2)
    }

    /// One-dimensional folded distance for a coordinate difference `i` in `0..N`.
    #[inline]
    pub fn fold(&self, i: u32) -> u32 {
        debug_assert!(i < self.n);
        if 2 * i <= self.n {
            i
        } else {
            self.n - i
        }
    }

    /// Number of vertices at distance exactly `r` from any fixed vertex.
    ///
    /// Closed form, split by the parity of `N`. Rings past `max_dist` are
    /// empty rather than an error (only `r = N` for odd `N`).
    pub fn ring_size(&self, r: u32) -> Result<u64> {
        let n = self.n as u64;
        if r == 0 || r > self.n {
            return Err(Error::Domain(format!("ring index {r} outside 1..={n}")));
        }
        let r = r as u64;
        let half = n / 2;
        let size = if n % 2 == 1 {
            if r <= half {
                4 * r
            } else {
                4 * (n - r)
            }
        } else if r < half {
            4 * r
        } else if r == half {
            2 * (n - 1)
        } else if r < n {
            4 * (n - r)
        } else {
            1
        };
        Ok(size)
    }

    /// Linear index of a vertex, row-major over `(u1, u2)`.
    #[inline]
    pub fn index(&self, v: Vertex) -> usize {
        (v.u1 as usize - 1) * self.n as usize + (v.u2 as usize - 1)
    }

    /// Inverse of [`TorusConfig::index`].
    #[inline]
    pub fn vertex(&self, index: usize) -> Vertex {
        let n = self.n as usize;
        Vertex {
            u1: (index / n) as u32 + 1,
            u2: (index % n) as u32 + 1,
        }
    }

    /// Iterator over all vertices in index order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n_vertices()).map(move |i| self.vertex(i))
    }

    /// Reduce a coordinate difference `a - b` into `0..N`.
    #[inline]
    fn diff(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            self.n - (b - a)
        }
    }

    /// Vertex `u` translated by the offset `(s1, s2)` (offsets taken mod `N`).
    #[inline]
    pub fn shift(&self, u: Vertex, s1: u32, s2: u32) -> Vertex {
        Vertex {
            u1: (u.u1 - 1 + s1 % self.n) % self.n + 1,
            u2: (u.u2 - 1 + s2 % self.n) % self.n + 1,
        }
    }

    /// All offsets `(s1, s2)` in `0..N` squared whose folded length is `r`.
    ///
    /// Each coordinate fold class `d` has one preimage when `d = 0` or
    /// `2d = N`, and two (`d` and `N - d`) otherwise.
    pub fn ring_offsets(&self, r: u32) -> Result<Vec<(u32, u32)>> {
        let size = self.ring_size(r)? as usize;
        let half = self.n / 2;
        let mut out = Vec::with_capacity(size);
        let lo = r.saturating_sub(half);
        let hi = r.min(half);
        for d1 in lo..=hi {
            let d2 = r - d1;
            for s1 in self.preimages(d1) {
                for s2 in self.preimages(d2) {
                    out.push((s1, s2));
                }
            }
        }
        debug_assert_eq!(out.len(), size);
        Ok(out)
    }

    fn preimages(&self, d: u32) -> impl Iterator<Item = u32> {
        let n = self.n;
        let first = Some(d);
        let second = if d == 0 || 2 * d == n { None } else { Some(n - d) };
        first.into_iter().chain(second)
    }
}

/// A vertex of the discrete torus, coordinates in `{1, ..., N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub u1: u32,
    pub u2: u32,
}

impl Vertex {
    /// Build a vertex from arbitrary integer coordinates, reducing them into `{1, ..., N}`.
    pub fn new(u1: i64, u2: i64, cfg: &TorusConfig) -> Self {
        let n = cfg.side() as i64;
        let reduce = |x: i64| ((x - 1).rem_euclid(n) + 1) as u32;
        Self {
            u1: reduce(u1),
            u2: reduce(u2),
        }
    }

    /// The point `u / N` of the continuous torus, with `N` mapped to `0`.
    pub fn rescaled(&self, cfg: &TorusConfig) -> ContinuousPoint {
        let n = cfg.side();
        ContinuousPoint {
            x1: (self.u1 % n) as f64 / n as f64,
            x2: (self.u2 % n) as f64 / n as f64,
        }
    }
}

/// Folded L1 distance on the discrete torus.
pub fn torus_distance(u: Vertex, v: Vertex, cfg: &TorusConfig) -> u32 {
    cfg.fold(cfg.diff(u.u1, v.u1)) + cfg.fold(cfg.diff(u.u2, v.u2))
}

/// Ring size `N_r`; see [`TorusConfig::ring_size`].
pub fn ring_size(r: u32, cfg: &TorusConfig) -> Result<u64> {
    cfg.ring_size(r)
}

/// All vertices at distance exactly `r` from `u`.
pub fn ring_vertices(u: Vertex, r: u32, cfg: &TorusConfig) -> Result<Vec<Vertex>> {
    Ok(cfg
        .ring_offsets(r)?
        .into_iter()
        .map(|(s1, s2)| cfg.shift(u, s1, s2))
        .collect())
}

/// A point of the continuous torus `[0, 1)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousPoint {
    pub x1: f64,
    pub x2: f64,
}

impl ContinuousPoint {
    /// Wraps arbitrary real coordinates into `[0, 1)`.
    pub fn new(x1: f64, x2: f64) -> Self {
        let wrap = |x: f64| {
            let y = x.rem_euclid(1.0);
            if y >= 1.0 {
                0.0
            } else {
                y
            }
        };
        Self {
            x1: wrap(x1),
            x2: wrap(x2),
        }
    }
}

fn fold_unit(a: f64) -> f64 {
    if a <= 0.5 {
        a
    } else {
        1.0 - a
    }
}

/// Folded L1 distance on the continuous torus; lies in `[0, 1]`.
pub fn continuous_rho(p: ContinuousPoint, q: ContinuousPoint) -> f64 {
    fold_unit((p.x1 - q.x1).abs()) + fold_unit((p.x2 - q.x2).abs())
}

/// Product kernel `wp * wq / rho(p, q)` on the continuous torus times the weight axis.
pub fn kernel(p: ContinuousPoint, wp: f64, q: ContinuousPoint, wq: f64) -> Result<f64> {
    let rho = continuous_rho(p, q);
    if rho == 0.0 {
        return Err(Error::Singularity(format!(
            "kernel undefined on the diagonal at ({}, {})",
            p.x1, p.x2
        )));
    }
    Ok(wp * wq / rho)
}
