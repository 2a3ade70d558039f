//! Galton-Watson oracles and simulators.
//!
//! * the Borel law of the total progeny of a Poisson(`lambda'`) tree;
//! * the multi-type process in which an individual of weight `x` has
//!   `Po(lambda x E W)` children with i.i.d. size-biased weights;
//! * the single-type process with compound Poisson `Po(W~ lambda E W)` offspring;
//! * the exact total-variation distance between `Bin(n, lambda / n)` and `Po(lambda)`.
//!
//! Trees are grown generation by generation and abandoned once the total
//! progeny exceeds a cap; [`Progeny::Exceeded`] is an ordinary outcome.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Density, WeightKind, WeightSpec};

/// Total progeny of a simulated tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Progeny {
    Finite(u64),
    /// More than `cap` individuals.
    Exceeded,
}

impl Progeny {
    pub fn finite(self) -> Option<u64> {
        match self {
            Progeny::Finite(t) => Some(t),
            Progeny::Exceeded => None,
        }
    }

    /// Total-order key with `Exceeded` above every finite size.
    pub fn rank(self) -> u64 {
        match self {
            Progeny::Finite(t) => t,
            Progeny::Exceeded => u64::MAX,
        }
    }
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
}

/// `alpha = lambda' - 1 - ln lambda'`, the exponential decay rate of the Borel law.
pub fn borel_rate(lambda_prime: f64) -> f64 {
    lambda_prime - 1.0 - lambda_prime.ln()
}

fn check_borel(lambda_prime: f64) -> Result<()> {
    if !(lambda_prime > 0.0 && lambda_prime < 1.0) {
        return Err(Error::Regime(format!("Borel tail needs 0 < lambda' < 1, got {lambda_prime}")));
    }
    Ok(())
}

/// `P{T = j} = e^{-lambda' j} (lambda' j)^{j - 1} / j!`.
pub fn borel_pmf(lambda_prime: f64, j: u64) -> Result<f64> {
    check_borel(lambda_prime)?;
    if j == 0 {
        return Ok(0.0);
    }
    let jf = j as f64;
    let ln_fact: f64 = (2..=j).map(|i| (i as f64).ln()).sum();
    Ok((-lambda_prime * jf + (jf - 1.0) * (lambda_prime * jf).ln() - ln_fact).exp())
}

/// `P{T >= k}` for the total progeny of a Poisson(`lambda'`) tree, `0 < lambda' < 1`.
///
/// Terms are summed from `j = k` until `j > k + 50 / alpha` and the term is
/// below `1e-16` of the partial sum.
pub fn borel_tail(lambda_prime: f64, k: u64) -> Result<f64> {
    check_borel(lambda_prime)?;
    if k <= 1 {
        return Ok(1.0);
    }
    let alpha = borel_rate(lambda_prime);
    let min_terms = k as f64 + 50.0 / alpha;
    let ln_lp = lambda_prime.ln();
    let mut ln_fact: f64 = (2..k).map(|i| (i as f64).ln()).sum();
    let mut sum = 0.0;
    let mut j = k;
    loop {
        let jf = j as f64;
        ln_fact += jf.ln();
        let term = (-lambda_prime * jf + (jf - 1.0) * (ln_lp + jf.ln()) - ln_fact).exp();
        sum += term;
        if jf > min_terms && term < 1e-16 * sum {
            break;
        }
        j += 1;
    }
    Ok(sum.min(1.0))
}

/// Stirling form `k^{-3/2} e^{-alpha k} / (sqrt(2 pi) lambda')` of the Borel pmf at `k`.
pub fn borel_asymptotic(lambda_prime: f64, k: u64) -> f64 {
    let kf = k as f64;
    (-borel_rate(lambda_prime) * kf).exp() / ((2.0 * std::f64::consts::PI).sqrt() * lambda_prime * kf.powf(1.5))
}

/// Total progeny of a Poisson(`lambda'`) Galton-Watson tree, or `Exceeded` past `cap`.
pub fn simulate_poisson_gw<R: Rng + ?Sized>(lambda_prime: f64, cap: u64, rng: &mut R) -> Progeny {
    let mut total = 1u64;
    let mut generation = 1u64;
    while generation > 0 {
        generation = poisson(lambda_prime * generation as f64, rng);
        total += generation;
        if total > cap {
            return Progeny::Exceeded;
        }
    }
    Progeny::Finite(total)
}

/// The size-biased law `y mu_W(dy) / E W`.
#[derive(Debug, Clone)]
pub struct SizeBiasedSpec {
    base: WeightSpec,
}

pub fn size_biased(w: &WeightSpec) -> Result<SizeBiasedSpec> {
    if !(w.mean() > 0.0) {
        return Err(Error::Degenerate("size-biasing needs E W > 0".into()));
    }
    Ok(SizeBiasedSpec { base: w.clone() })
}

impl SizeBiasedSpec {
    pub fn base(&self) -> &WeightSpec {
        &self.base
    }

    /// `E g(W~) = E[W g(W)] / E W`; `growth` as in [`WeightSpec::expectation`].
    pub fn expectation<F: Fn(f64) -> f64>(&self, g: F, growth: f64) -> Result<f64> {
        Ok(self.base.expectation(|y| y * g(y), growth)? / self.base.mean())
    }

    /// `E W~ = E W^2 / E W`.
    pub fn mean(&self) -> f64 {
        self.base.second_moment() / self.base.mean()
    }

    /// Re-weighted atoms `(y, y p_y / E W)` of a finite law.
    pub fn masses(&self) -> Option<Vec<(f64, f64)>> {
        let m = self.base.mean();
        match self.base.kind() {
            WeightKind::Constant(w) => Some(vec![(*w, 1.0)]),
            WeightKind::Discrete { values, probs } => {
                Some(values.iter().zip(probs).map(|(&v, &p)| (v, v * p / m)).collect())
            }
            WeightKind::Continuous(_) => None,
        }
    }

    pub fn sampler(&self) -> Result<SizeBiasedSampler> {
        let sampler = match self.base.kind() {
            WeightKind::Constant(w) => SizeBiasedSampler::Constant(*w),
            WeightKind::Discrete { values, probs } => {
                let masses: Vec<f64> = values.iter().zip(probs).map(|(v, p)| v * p).collect();
                SizeBiasedSampler::Indexed {
                    values: values.clone(),
                    index: WeightedIndex::new(&masses).map_err(|e| Error::Degenerate(e.to_string()))?,
                }
            }
            WeightKind::Continuous(Density::Exponential { rate }) => {
                SizeBiasedSampler::Gamma2 { gamma: gamma2(*rate)?, upper: f64::INFINITY }
            }
            WeightKind::Continuous(Density::TruncatedExponential { rate, upper }) => {
                if rate * upper >= 1.0 {
                    SizeBiasedSampler::Gamma2 { gamma: gamma2(*rate)?, upper: *upper }
                } else {
                    SizeBiasedSampler::LinearTilted { rate: *rate, upper: *upper }
                }
            }
            WeightKind::Continuous(Density::Uniform { low, high }) => {
                SizeBiasedSampler::LinearUniform { low: *low, high: *high }
            }
            WeightKind::Continuous(Density::Custom(_)) => {
                return Err(Error::Unsupported("custom densities have no size-biased sampler".into()))
            }
        };
        Ok(sampler)
    }
}

fn gamma2(rate: f64) -> Result<Gamma<f64>> {
    Gamma::new(2.0, 1.0 / rate).map_err(|e| Error::Parameter(e.to_string()))
}

/// Exact sampler for `W~`.
#[derive(Debug, Clone)]
pub enum SizeBiasedSampler {
    Constant(f64),
    Indexed { values: Vec<f64>, index: WeightedIndex<f64> },
    /// `y e^{-rate y}` on `[0, upper]`, via Gamma(2) draws rejected above `upper`.
    Gamma2 { gamma: Gamma<f64>, upper: f64 },
    /// `y e^{-rate y}` on `[0, upper]` with `rate * upper < 1`: linear proposal, accept with `e^{-rate y}`.
    LinearTilted { rate: f64, upper: f64 },
    /// `y` on `[low, high]`, by inversion.
    LinearUniform { low: f64, high: f64 },
}

impl SizeBiasedSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            SizeBiasedSampler::Constant(w) => *w,
            SizeBiasedSampler::Indexed { values, index } => values[index.sample(rng)],
            SizeBiasedSampler::Gamma2 { gamma, upper } => loop {
                let y = gamma.sample(rng);
                if y <= *upper {
                    return y;
                }
            },
            SizeBiasedSampler::LinearTilted { rate, upper } => loop {
                let y = upper * rng.random::<f64>().sqrt();
                if rng.random::<f64>() < (-rate * y).exp() {
                    return y;
                }
            },
            SizeBiasedSampler::LinearUniform { low, high } => {
                let u: f64 = rng.random();
                (low * low + u * (high * high - low * low)).sqrt()
            }
        }
    }
}

/// Samplers for the multi-type process and its single-type compound Poisson reduction.
#[derive(Debug, Clone)]
pub struct MultiTypeProcess {
    lambda: f64,
    mean: f64,
    tilted: SizeBiasedSampler,
}

impl MultiTypeProcess {
    pub fn new(lambda: f64, w: &WeightSpec) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::Parameter(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        Ok(Self {
            lambda,
            mean: w.mean(),
            tilted: size_biased(w)?.sampler()?,
        })
    }

    /// Mean offspring of the compound Poisson process, `lambda E W^2`.
    pub fn mean_offspring(&self, w: &WeightSpec) -> f64 {
        self.lambda * w.second_moment()
    }

    /// Total progeny from an ancestor of weight `x`. Children of a weight-`t`
    /// individual number `Po(lambda t E W)` and carry i.i.d. size-biased weights.
    pub fn simulate_b1<R: Rng + ?Sized>(&self, x: f64, cap: u64, rng: &mut R) -> Progeny {
        let mut total = 1u64;
        let mut generation = vec![x];
        let mut next = Vec::new();
        while !generation.is_empty() {
            let mass: f64 = generation.iter().sum();
            let born = poisson(self.lambda * self.mean * mass, rng);
            total += born;
            if total > cap {
                return Progeny::Exceeded;
            }
            next.clear();
            next.extend((0..born).map(|_| self.tilted.draw(rng)));
            std::mem::swap(&mut generation, &mut next);
        }
        Progeny::Finite(total)
    }

    /// Total progeny of the single-type process where every individual draws a
    /// fresh size-biased weight `W~` and has `Po(W~ lambda E W)` children.
    pub fn simulate_b2<R: Rng + ?Sized>(&self, cap: u64, rng: &mut R) -> Progeny {
        let mut total = 1u64;
        let mut generation = 1u64;
        while generation > 0 {
            let mut born = 0u64;
            for _ in 0..generation {
                let w = self.tilted.draw(rng);
                born += poisson(w * self.lambda * self.mean, rng);
            }
            total += born;
            if total > cap {
                return Progeny::Exceeded;
            }
            generation = born;
        }
        Progeny::Finite(total)
    }

    /// Root weight drawn from the size-biased law, then [`simulate_b1`](Self::simulate_b1).
    pub fn simulate_b1_size_biased_root<R: Rng + ?Sized>(&self, cap: u64, rng: &mut R) -> Progeny {
        let x = self.tilted.draw(rng);
        self.simulate_b1(x, cap, rng)
    }

    /// One compound Poisson offspring count.
    pub fn offspring_b2<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let w = self.tilted.draw(rng);
        poisson(w * self.lambda * self.mean, rng)
    }
}

pub fn simulate_b1<R: Rng + ?Sized>(x: f64, lambda: f64, w: &WeightSpec, cap: u64, rng: &mut R) -> Result<Progeny> {
    Ok(MultiTypeProcess::new(lambda, w)?.simulate_b1(x, cap, rng))
}

pub fn simulate_b2<R: Rng + ?Sized>(lambda: f64, w: &WeightSpec, cap: u64, rng: &mut R) -> Result<Progeny> {
    Ok(MultiTypeProcess::new(lambda, w)?.simulate_b2(cap, rng))
}

/// Exact `d_TV(Bin(n, lambda / n), Po(lambda))` by summing the pmfs in log space.
pub fn binomial_poisson_tv(n: u64, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) || lambda > n as f64 {
        return Err(Error::Domain(format!("need 0 <= lambda <= n, got lambda={lambda}, n={n}")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let p = lambda / n as f64;
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let ln_lambda = lambda.ln();
    let mut ln_bin = if p < 1.0 { n as f64 * ln_q } else { f64::NEG_INFINITY };
    let mut ln_poi = -lambda;
    let mut diff = 0.0;
    for k in 0..=n {
        let bin = if p < 1.0 {
            ln_bin.exp()
        } else if k == n {
            1.0
        } else {
            0.0
        };
        diff += (bin - ln_poi.exp()).abs();
        let kf = k as f64;
        if p < 1.0 && k < n {
            ln_bin += ((n - k) as f64).ln() - (kf + 1.0).ln() + ln_p - ln_q;
        }
        ln_poi += ln_lambda - (kf + 1.0).ln();
    }
    // Poisson mass above n.
    let mut k = n + 1;
    loop {
        let term = ln_poi.exp();
        diff += term;
        if k as f64 > lambda && term < 1e-18 {
            break;
        }
        ln_poi += ln_lambda - (k as f64 + 1.0).ln();
        k += 1;
    }
    Ok(0.5 * diff)
}
