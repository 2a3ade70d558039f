//! The random distance graph model: weights, edge probabilities, sampling.

mod graph;
mod sampler;
mod weights;

pub use graph::Graph;
pub use sampler::{
    model_weights, sample_graph, sample_graph_reference, sample_graph_reference_with_oracle,
    sample_graph_with_oracle, sample_graph_with_weights,
};
pub use weights::{sample_weights, CustomDensity, Density, WeightKind, WeightSpec, TAIL_TOLERANCE};

use crate::error::{Error, Result};
use crate::geometry::{torus_distance, TorusConfig, Vertex};

/// Parameters of one graph draw.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub torus: TorusConfig,
    /// Edge intensity `c`.
    pub c: f64,
    pub weights: WeightSpec,
    pub seed: u64,
}

impl ModelConfig {
    /// `c = 0` is accepted and yields the empty graph.
    pub fn new(torus: TorusConfig, c: f64, weights: WeightSpec, seed: u64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::Parameter(format!("c must be finite and >= 0, got {c}")));
        }
        Ok(Self {
            torus,
            c,
            weights,
            seed,
        })
    }

    /// Homogeneous model `W = 1`.
    pub fn homogeneous(n: u32, c: f64, seed: u64) -> Result<Self> {
        Self::new(TorusConfig::new(n)?, c, WeightSpec::constant(1.0)?, seed)
    }

    /// Intensity `lambda = 4 c ln 2`.
    pub fn lambda(&self) -> f64 {
        lambda_of_c(self.c)
    }
}

#[inline]
pub(crate) fn edge_probability_raw(c: f64, n: f64, dist: u32, wu: f64, wv: f64) -> f64 {
    (c * wu * wv / (n * dist as f64)).min(1.0)
}

/// `p(u, v) = min{c wu wv / (N d(u, v)), 1}`.
pub fn edge_probability(u: Vertex, v: Vertex, wu: f64, wv: f64, m: &ModelConfig) -> Result<f64> {
    let d = torus_distance(u, v, &m.torus);
    if d == 0 {
        return Err(Error::Domain(format!("no self-loops: u = v = {u:?}")));
    }
    Ok(edge_probability_raw(m.c, m.torus.side() as f64, d, wu, wv))
}

/// `lambda = 4 c ln 2`.
pub fn lambda_of_c(c: f64) -> f64 {
    4.0 * c * std::f64::consts::LN_2
}

/// Inverse of [`lambda_of_c`].
pub fn c_of_lambda(lambda: f64) -> f64 {
    lambda / (4.0 * std::f64::consts::LN_2)
}

/// Finite-N Poisson intensity `sum_r -N_r ln(1 - p_r)` with `p_r = c / (N r)`.
pub fn lambda_n(c: f64, torus: &TorusConfig) -> Result<f64> {
    let n = torus.side();
    let mut total = 0.0;
    for r in 1..=n {
        let size = torus.ring_size(r)?;
        if size == 0 {
            continue;
        }
        let p = c / (n as f64 * r as f64);
        if p >= 1.0 {
            return Err(Error::Parameter(format!(
                "p_{r} = {p} >= 1: N = {n} is too small for c = {c}"
            )));
        }
        total -= size as f64 * (-p).ln_1p();
    }
    Ok(total)
}

/// Expected degree of a unit-weight vertex, `sum_r N_r min(p_r, 1)`.
pub fn mean_degree(c: f64, torus: &TorusConfig) -> Result<f64> {
    let n = torus.side();
    let mut total = 0.0;
    for r in 1..=n {
        total += torus.ring_size(r)? as f64 * edge_probability_raw(c, n as f64, r, 1.0, 1.0);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::kernel;

    #[test]
    fn edge_probability_examples() {
        let m = ModelConfig::homogeneous(10, 1.0, 0).unwrap();
        let t = m.torus;
        let (u, v) = (Vertex::new(1, 1, &t), Vertex::new(3, 4, &t));
        assert_eq!(torus_distance(u, v, &t), 5);
        assert!((edge_probability(u, v, 1.0, 1.0, &m).unwrap() - 0.02).abs() < 1e-15);
        assert!(matches!(edge_probability(u, u, 1.0, 1.0, &m), Err(Error::Domain(_))));

        let m = ModelConfig::homogeneous(2, 10.0, 0).unwrap();
        let t = m.torus;
        let p = edge_probability(Vertex::new(1, 1, &t), Vertex::new(1, 2, &t), 1.0, 1.0, &m).unwrap();
        assert_eq!(p, 1.0);
    }

    #[test]
    fn kernel_form_agrees() {
        let m = ModelConfig::new(TorusConfig::new(10).unwrap(), 1.7, WeightSpec::constant(1.0).unwrap(), 0).unwrap();
        let t = m.torus;
        let u = Vertex::new(2, 7, &t);
        for v in t.vertices().filter(|&v| v != u) {
            let (wu, wv) = (1.5, 0.25);
            let p = edge_probability(u, v, wu, wv, &m).unwrap();
            let k = kernel(u.rescaled(&t), wu, v.rescaled(&t), wv).unwrap();
            let q = (m.c * k / 100.0).min(1.0);
            assert!((p - q).abs() <= 4.0 * f64::EPSILON * p);
        }
    }

    #[test]
    fn lambda_examples() {
        assert!((lambda_of_c(1.0) - 2.772_588_722_239_781).abs() < 1e-15);
        assert!((lambda_of_c(1.0 / (4.0 * std::f64::consts::LN_2)) - 1.0).abs() < 1e-15);
        assert!((lambda_of_c(0.5) - 1.386_294_361_119_890_6).abs() < 1e-15);
    }

    #[test]
    fn lambda_n_matches_expansion() {
        let t = TorusConfig::new(1000).unwrap();
        let got = lambda_n(1.0, &t).unwrap();
        assert!((got - (lambda_of_c(1.0) - 2.0 / 1000.0)).abs() < 5e-3);
    }

    #[test]
    fn lambda_n_small_c_linearizes() {
        // lambda_N / c -> (1/N) sum_r N_r / r as c -> 0.
        let t = TorusConfig::new(501).unwrap();
        let harmonic: f64 = (1..=501).map(|r| t.ring_size(r).unwrap() as f64 / (501.0 * r as f64)).sum();
        let c = 1e-7;
        assert!((lambda_n(c, &t).unwrap() / c - harmonic).abs() < 1e-6);
        assert!((harmonic - 4.0 * std::f64::consts::LN_2).abs() < 1e-2);
    }

    #[test]
    fn lambda_n_rejects_capped_rings() {
        let t = TorusConfig::new(4).unwrap();
        assert!(matches!(lambda_n(4.0, &t), Err(Error::Parameter(_))));
        assert!(lambda_n(3.9, &t).is_ok());
    }
}
