//! Small statistics helpers used by the harness and the test suites.

use serde::{Deserialize, Serialize};

/// Sample mean, standard deviation (n - 1 denominator) and standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub se: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self {
                n,
                mean: f64::NAN,
                std: f64::NAN,
                se: f64::NAN,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self {
            n,
            mean,
            std,
            se: std / (n as f64).sqrt(),
        }
    }
}

/// Outcome of a two-sample Kolmogorov-Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub critical: f64,
    pub alpha: f64,
    /// `statistic <= critical`: the samples are compatible at level `alpha`.
    pub passed: bool,
}

/// Two-sample KS test with the asymptotic critical value
/// `sqrt(-ln(alpha / 2) / 2) * sqrt((n + m) / (n m))`.
pub fn ks_two_sample<T: PartialOrd + Copy>(a: &[T], b: &[T], alpha: f64) -> KsOutcome {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        // Step past every copy of the smaller value in both samples, so ties count once.
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let (nf, mf) = (n as f64, m as f64);
    let critical = (-(alpha / 2.0).ln() / 2.0).sqrt() * ((nf + mf) / (nf * mf)).sqrt();
    KsOutcome {
        statistic: d,
        critical,
        alpha,
        passed: d <= critical,
    }
}

/// `|observed - p| / sqrt(p (1 - p) / n)` for a binomial proportion.
pub fn proportion_z(successes: usize, n: usize, p: f64) -> f64 {
    let observed = successes as f64 / n as f64;
    let sd = (p * (1.0 - p) / n as f64).sqrt();
    if sd == 0.0 {
        if observed == p {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (observed - p).abs() / sd
    }
}
