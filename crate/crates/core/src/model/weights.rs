//! Vertex-weight distributions.
//!
//! Every law exposes its mean and second moment, and an expectation routine
//! for integrands of the form `poly(w) * exp(s * w)`. Finite laws are summed
//! exactly; continuous laws use composite Gauss-Legendre quadrature on a
//! support truncated where the integrand tail drops below [`TAIL_TOLERANCE`].

use std::fmt;
use std::num::NonZeroUsize;
use std::sync::{Arc, OnceLock};

use gauss_quad::legendre::GaussLegendre;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Exp;

use crate::error::{Error, Result};

/// Bound on the neglected mass `E[W^2 e^{sW}; W > T]` of a truncated support.
pub const TAIL_TOLERANCE: f64 = 1e-12;

const PROB_SUM_TOLERANCE: f64 = 1e-12;
const GL_DEGREE: usize = 32;

fn legendre_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(GL_DEGREE).unwrap()))
}

/// A probability density on `[low, high]` supplied by the caller.
///
/// `exp_radius` is a certificate that `E e^{sW} < inf` for every `s < exp_radius`;
/// use `f64::INFINITY` for bounded support.
#[derive(Clone)]
pub struct CustomDensity {
    pub pdf: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub low: f64,
    pub high: f64,
    pub exp_radius: f64,
}

impl fmt::Debug for CustomDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity")
            .field("low", &self.low)
            .field("high", &self.high)
            .field("exp_radius", &self.exp_radius)
            .finish_non_exhaustive()
    }
}

/// Continuous weight laws.
#[derive(Debug, Clone)]
pub enum Density {
    Exponential { rate: f64 },
    /// Exponential law conditioned on `W <= upper`.
    TruncatedExponential { rate: f64, upper: f64 },
    Uniform { low: f64, high: f64 },
    Custom(CustomDensity),
}

impl Density {
    fn support(&self) -> (f64, f64) {
        match *self {
            Density::Exponential { .. } => (0.0, f64::INFINITY),
            Density::TruncatedExponential { upper, .. } => (0.0, upper),
            Density::Uniform { low, high } => (low, high),
            Density::Custom(ref c) => (c.low, c.high),
        }
    }

    fn pdf(&self, w: f64) -> f64 {
        match *self {
            Density::Exponential { rate } => rate * (-rate * w).exp(),
            Density::TruncatedExponential { rate, upper } => {
                rate * (-rate * w).exp() / -(-rate * upper).exp_m1()
            }
            Density::Uniform { low, high } => 1.0 / (high - low),
            Density::Custom(ref c) => (c.pdf)(w),
        }
    }

    fn exp_radius(&self) -> f64 {
        match *self {
            Density::Exponential { rate } => rate,
            Density::Custom(ref c) if c.high.is_infinite() => c.exp_radius,
            _ => f64::INFINITY,
        }
    }

    /// Upper integration limit for an integrand growing like `w^2 e^{growth w}`.
    fn truncation(&self, growth: f64) -> f64 {
        let (low, high) = self.support();
        if high.is_finite() {
            return high;
        }
        // Tail of w^2 e^{-a w} times a density prefactor of order `scale`.
        let a = self.exp_radius() - growth;
        let scale = self.exp_radius().max(1.0);
        let tail = |t: f64| scale * (-a * t).exp() * (t * t / a + 2.0 * t / (a * a) + 2.0 / (a * a * a));
        let mut t = low.max(0.0) + 1.0 / a;
        while tail(t) > TAIL_TOLERANCE {
            t *= 1.5;
        }
        t
    }

    fn integrate<F: Fn(f64) -> f64>(&self, f: F, growth: f64) -> f64 {
        let (low, _) = self.support();
        let high = self.truncation(growth);
        let rate_scale = match *self {
            Density::Exponential { rate } | Density::TruncatedExponential { rate, .. } => rate,
            _ => 1.0,
        };
        // Panels short enough that e^{(growth - rate) w} varies by O(1) within each.
        let width = high - low;
        let decay = (rate_scale + growth.abs()).max(1.0);
        let panels = ((width * decay / 2.0).ceil() as usize).clamp(4, 4096);
        let h = width / panels as f64;
        let rule = legendre_rule();
        (0..panels)
            .map(|i| {
                let a = low + i as f64 * h;
                rule.integrate(a, a + h, |w| f(w) * self.pdf(w))
            })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub enum WeightKind {
    Constant(f64),
    Discrete { values: Vec<f64>, probs: Vec<f64> },
    Continuous(Density),
}

/// Distribution of the vertex weight `W`, with cached moments.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    kind: WeightKind,
    mean: f64,
    second_moment: f64,
    support_bound: Option<f64>,
}

impl WeightSpec {
    pub fn constant(w: f64) -> Result<Self> {
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::Parameter(format!("weight must be finite and >= 0, got {w}")));
        }
        Ok(Self {
            kind: WeightKind::Constant(w),
            mean: w,
            second_moment: w * w,
            support_bound: Some(w),
        })
    }

    /// Finite law from `(value, probability)` pairs. Zero-probability atoms are dropped.
    pub fn discrete(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Parameter("discrete weight law needs at least one atom".into()));
        }
        let mut values = Vec::with_capacity(pairs.len());
        let mut probs = Vec::with_capacity(pairs.len());
        for &(v, p) in pairs {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Parameter(format!("weight value must be finite and >= 0, got {v}")));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::Parameter(format!("probability must be in [0, 1], got {p}")));
            }
            if p > 0.0 {
                values.push(v);
                probs.push(p);
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::Parameter(format!("probabilities sum to {total}, expected 1")));
        }
        let mean = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
        let second_moment = values.iter().zip(&probs).map(|(v, p)| v * v * p).sum();
        let support_bound = values.iter().cloned().fold(0.0, f64::max);
        Ok(Self {
            kind: WeightKind::Discrete { values, probs },
            mean,
            second_moment,
            support_bound: Some(support_bound),
        })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::Parameter(format!("exponential rate must be > 0, got {rate}")));
        }
        Self::continuous(Density::Exponential { rate })
    }

    pub fn truncated_exponential(rate: f64, upper: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0 && upper.is_finite() && upper > 0.0) {
            return Err(Error::Parameter(format!(
                "truncated exponential needs rate > 0 and upper > 0, got rate={rate} upper={upper}"
            )));
        }
        Self::continuous(Density::TruncatedExponential { rate, upper })
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite() && low >= 0.0 && high > low) {
            return Err(Error::Parameter(format!("uniform weights need 0 <= low < high, got [{low}, {high}]")));
        }
        Self::continuous(Density::Uniform { low, high })
    }

    /// Continuous law from a caller-supplied density. Sampling is not available.
    pub fn custom(density: CustomDensity) -> Result<Self> {
        if !(density.low >= 0.0 && density.high > density.low) {
            return Err(Error::Parameter("custom density needs 0 <= low < high".into()));
        }
        if density.high.is_infinite() && !(density.exp_radius > 0.0) {
            return Err(Error::Assumption(
                "unbounded custom density needs a positive exponential-moment radius".into(),
            ));
        }
        Self::continuous(Density::Custom(density))
    }

    fn continuous(density: Density) -> Result<Self> {
        let (_, high) = density.support();
        let mass = density.integrate(|_| 1.0, 0.0);
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!("density integrates to {mass}, expected 1")));
        }
        let mean = density.integrate(|w| w, 0.0);
        let second_moment = density.integrate(|w| w * w, 0.0);
        if !second_moment.is_finite() {
            return Err(Error::Assumption("E W^2 is not finite".into()));
        }
        Ok(Self {
            kind: WeightKind::Continuous(density),
            mean,
            second_moment,
            support_bound: high.is_finite().then_some(high),
        })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// `M = E W`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `E W^2`.
    pub fn second_moment(&self) -> f64 {
        self.second_moment
    }

    /// Finite upper bound on the support, if there is one.
    pub fn support_bound(&self) -> Option<f64> {
        self.support_bound
    }

    /// Supremum of `s` with `E e^{sW} < inf`.
    pub fn exp_moment_radius(&self) -> f64 {
        match &self.kind {
            WeightKind::Continuous(d) => d.exp_radius(),
            _ => f64::INFINITY,
        }
    }

    /// `E f(W)` for an integrand bounded by a polynomial of degree <= 2 times `e^{growth * w}`.
    pub fn expectation<F: Fn(f64) -> f64>(&self, f: F, growth: f64) -> Result<f64> {
        let value = match &self.kind {
            WeightKind::Constant(w) => f(*w),
            WeightKind::Discrete { values, probs } => {
                values.iter().zip(probs).map(|(&v, &p)| p * f(v)).sum()
            }
            WeightKind::Continuous(d) => {
                if growth >= d.exp_radius() {
                    return Err(Error::Assumption(format!(
                        "exponential tilt {growth} is outside the moment radius {}",
                        d.exp_radius()
                    )));
                }
                d.integrate(f, growth)
            }
        };
        if !value.is_finite() {
            return Err(Error::Assumption("expectation is not finite".into()));
        }
        Ok(value)
    }

    /// One draw of `W`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        Ok(self.sampler()?.draw(rng))
    }

    pub(crate) fn sampler(&self) -> Result<WeightSampler> {
        match &self.kind {
            WeightKind::Constant(w) => Ok(WeightSampler::Constant(*w)),
            WeightKind::Discrete { values, probs } => Ok(WeightSampler::Indexed {
                values: values.clone(),
                index: WeightedIndex::new(probs).map_err(|e| Error::Parameter(e.to_string()))?,
            }),
            WeightKind::Continuous(Density::Exponential { rate }) => {
                Ok(WeightSampler::Exponential(Exp::new(*rate).map_err(|e| Error::Parameter(e.to_string()))?))
            }
            WeightKind::Continuous(Density::TruncatedExponential { rate, upper }) => {
                Ok(WeightSampler::TruncatedExponential { rate: *rate, upper: *upper })
            }
            WeightKind::Continuous(Density::Uniform { low, high }) => {
                Ok(WeightSampler::Uniform { low: *low, high: *high })
            }
            WeightKind::Continuous(Density::Custom(_)) => Err(Error::Unsupported(
                "custom densities have no sampler; use them for theory evaluations only".into(),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum WeightSampler {
    Constant(f64),
    Indexed { values: Vec<f64>, index: WeightedIndex<f64> },
    Exponential(Exp<f64>),
    TruncatedExponential { rate: f64, upper: f64 },
    Uniform { low: f64, high: f64 },
}

impl WeightSampler {
    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            WeightSampler::Constant(w) => *w,
            WeightSampler::Indexed { values, index } => values[index.sample(rng)],
            WeightSampler::Exponential(exp) => exp.sample(rng),
            WeightSampler::TruncatedExponential { rate, upper } => {
                // Inverse CDF of the conditioned law.
                let u: f64 = rng.random();
                let mass = -(-rate * upper).exp_m1();
                (-(-u * mass).ln_1p() / rate).min(*upper)
            }
            WeightSampler::Uniform { low, high } => low + rng.random::<f64>() * (high - low),
        }
    }
}

/// `n` i.i.d. draws of `W`.
pub fn sample_weights<R: Rng + ?Sized>(spec: &WeightSpec, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    let sampler = spec.sampler()?;
    Ok((0..n).map(|_| sampler.draw(rng)).collect())
}
