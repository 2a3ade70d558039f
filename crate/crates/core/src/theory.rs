//! Limit constants for the largest component.
//!
//! All fixed points are found by bisection on strictly monotone scalar
//! functions, using the negative-exponent survival forms
//! `beta = 1 - exp(-lambda beta)`.
//!
//! The weighted survival function satisfies
//! `f(x) = 1 - exp(-lambda x b)` with `b = E[W f(W)]`, so the functional
//! equation collapses to the scalar equation `b = E[W (1 - exp(-lambda W b))]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{WeightKind, WeightSpec};

/// Largest admissible residual of a returned fixed point.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// `|lambda E W^2 - 1|` at or below this is reported as critical.
pub const CRITICAL_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl Regime {
    pub fn classify(crit: f64) -> Self {
        if (crit - 1.0).abs() <= CRITICAL_BAND {
            Regime::Critical
        } else if crit < 1.0 {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        }
    }
}

/// Bisection for a decreasing `f` with `f(lo) > 0 >= f(hi)`, to full precision.
fn bisect_decreasing<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `1 / (lambda - 1 - ln lambda)`, the limit of `C / log(N^2)` for `lambda < 1`.
pub fn subcritical_constant(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Regime(format!("subcritical constant needs 0 < lambda < 1, got {lambda}")));
    }
    Ok(1.0 / (lambda - 1.0 - lambda.ln()))
}

/// Positive root of `beta = 1 - exp(-lambda beta)` for `lambda > 1`.
pub fn supercritical_beta(lambda: f64) -> Result<f64> {
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::Regime(format!("supercritical beta needs lambda > 1, got {lambda}")));
    }
    // (1 - e^{-lambda b}) / b - 1 decreases from lambda - 1 at 0+ to -e^{-lambda} at 1.
    let h = |b: f64| -(-lambda * b).exp_m1() / b - 1.0;
    Ok(bisect_decreasing(h, 0.0, 1.0))
}

/// `lambda E W^2`, the norm of the integral operator and the giant-component criterion.
pub fn critical_parameter(lambda: f64, w: &WeightSpec) -> Result<f64> {
    let m2 = w.second_moment();
    if !m2.is_finite() {
        return Err(Error::Assumption("E W^2 must be finite".into()));
    }
    Ok(lambda * m2)
}

/// Solution of the weighted survival equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaProfile {
    pub lambda: f64,
    /// Maximal root of `b = E[W (1 - exp(-lambda W b))]`.
    pub b_star: f64,
    /// `E beta(W)`, the limit of `C / N^2`.
    pub beta_hat: f64,
    /// `|b_star - E[W (1 - exp(-lambda W b_star))]|`.
    pub residual: f64,
}

impl BetaProfile {
    /// Survival probability from an ancestor of weight `x`.
    pub fn beta(&self, x: f64) -> f64 {
        -(-self.lambda * x * self.b_star).exp_m1()
    }
}

/// `E[W (1 - exp(-lambda W b))]`.
pub fn survival_map(lambda: f64, w: &WeightSpec, b: f64) -> Result<f64> {
    w.expectation(|x| x * -(-lambda * x * b).exp_m1(), 0.0)
}

pub fn weighted_beta_profile(lambda: f64, w: &WeightSpec) -> Result<BetaProfile> {
    let crit = critical_parameter(lambda, w)?;
    if crit <= 1.0 {
        return Ok(BetaProfile {
            lambda,
            b_star: 0.0,
            beta_hat: 0.0,
            residual: 0.0,
        });
    }
    // E[W (1 - e^{-lambda W b})] / b - 1 decreases from crit - 1 at 0+ and is <= 0 at b = E W.
    let ratio = |b: f64| {
        w.expectation(|x| x * -(-lambda * x * b).exp_m1() / b, 0.0)
            .map(|v| v - 1.0)
    };
    ratio(w.mean())?;
    let b_star = bisect_decreasing(|b| ratio(b).unwrap_or(f64::NAN), 0.0, w.mean());
    let residual = (b_star - survival_map(lambda, w, b_star)?).abs();
    let beta_hat = w.expectation(|x| -(-lambda * x * b_star).exp_m1(), 0.0)?;
    Ok(BetaProfile {
        lambda,
        b_star,
        beta_hat,
        residual,
    })
}

/// `E[W^k exp(s W)]` for `k` in `{0, 1, 2}`.
pub fn tilt_moments(w: &WeightSpec, s: f64, k: u32) -> Result<f64> {
    if k > 2 {
        return Err(Error::Domain(format!("tilted moment order must be 0, 1 or 2, got {k}")));
    }
    w.expectation(|x| x.powi(k as i32) * (s * x).exp(), s)
}

/// Constants of the weighted subcritical limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubcriticalWeighted {
    pub y: f64,
    pub gamma: f64,
    /// `1 / ln gamma`, the limit of `C / log(N^2)`.
    pub limit: f64,
    pub residual: f64,
}

/// Residual of the `y` equation: `y - E[W e^{sW}] / (lambda M E[W^2 e^{sW}])` with `s = lambda M (y - 1)`.
pub fn theorem3_residual(lambda: f64, w: &WeightSpec, y: f64) -> Result<f64> {
    let m = w.mean();
    let s = lambda * m * (y - 1.0);
    let m1 = tilt_moments(w, s, 1)?;
    let m2 = tilt_moments(w, s, 2)?;
    Ok(y - m1 / (lambda * m * m2))
}

/// Solve for the unique `y > 1` and return `gamma` and `1 / ln gamma`.
///
/// Requires `lambda E W^2 < 1` and a positive exponential-moment radius.
pub fn theorem3_constants(lambda: f64, w: &WeightSpec) -> Result<SubcriticalWeighted> {
    let crit = critical_parameter(lambda, w)?;
    if Regime::classify(crit) != Regime::Subcritical || !(lambda > 0.0) {
        return Err(Error::Regime(format!(
            "weighted subcritical constants need 0 < lambda E W^2 < 1, got {crit}"
        )));
    }
    let m = w.mean();
    if !(m > 0.0) {
        return Err(Error::Degenerate("E W must be positive".into()));
    }
    let radius = w.exp_moment_radius();
    if !(radius > 0.0) {
        return Err(Error::Assumption("no exponential moment certificate".into()));
    }
    let tilt = |y: f64| lambda * m * (y - 1.0);
    // R(1) = 1 - 1 / crit < 0 and R is strictly increasing; expand until it changes sign.
    let mut hi = 2.0f64.max(1.0 / lambda);
    loop {
        if tilt(hi) >= radius {
            return Err(Error::Assumption(format!(
                "tilt integrals diverge (s = {} >= radius {radius}) before the root is bracketed",
                tilt(hi)
            )));
        }
        if theorem3_residual(lambda, w, hi)? > 0.0 {
            break;
        }
        let next = 1.0 + 2.0 * (hi - 1.0);
        // Stay inside the moment radius while expanding.
        hi = if tilt(next) >= radius && radius.is_finite() {
            let cap = 1.0 + radius / (lambda * m);
            if hi >= cap * (1.0 - 1e-12) {
                return Err(Error::Assumption("tilt integrals diverge before the root is bracketed".into()));
            }
            0.5 * (hi + cap)
        } else {
            next
        };
    }
    let y = bisect_decreasing(|y| -theorem3_residual(lambda, w, y).unwrap_or(f64::NAN), 1.0, hi);
    let residual = theorem3_residual(lambda, w, y)?.abs();
    let ln_gamma = -(lambda * tilt_moments(w, tilt(y), 2)?).ln();
    let gamma = ln_gamma.exp();
    if !(ln_gamma > 0.0) {
        return Err(Error::Assumption(format!("gamma = {gamma} is not > 1")));
    }
    Ok(SubcriticalWeighted {
        y,
        gamma,
        limit: 1.0 / ln_gamma,
        residual,
    })
}

/// Every limit constant for one `(lambda, W)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub lambda: f64,
    pub c: f64,
    pub mean: f64,
    pub second_moment: f64,
    /// `lambda E W^2`.
    pub crit: f64,
    pub regime: Regime,
    /// Homogeneous `beta(lambda)`, when `lambda > 1`.
    pub beta: Option<f64>,
    pub b_star: Option<f64>,
    pub beta_hat: Option<f64>,
    /// Homogeneous `1 / (lambda - 1 - ln lambda)`, when `lambda < 1`.
    pub sub_const: Option<f64>,
    pub y: Option<f64>,
    pub gamma: Option<f64>,
    pub sub_const_weighted: Option<f64>,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub beta: Option<f64>,
    pub b_star: Option<f64>,
    pub y: Option<f64>,
}

/// Evaluate all constants. In the critical regime every constant is omitted.
pub fn theory_report(lambda: f64, w: &WeightSpec) -> Result<TheoryReport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    let crit = critical_parameter(lambda, w)?;
    let regime = Regime::classify(crit);
    let mut report = TheoryReport {
        lambda,
        c: crate::model::c_of_lambda(lambda),
        mean: w.mean(),
        second_moment: w.second_moment(),
        crit,
        regime,
        beta: None,
        b_star: None,
        beta_hat: None,
        sub_const: None,
        y: None,
        gamma: None,
        sub_const_weighted: None,
        residuals: Residuals::default(),
    };
    if regime == Regime::Critical {
        return Ok(report);
    }
    if lambda > 1.0 {
        let beta = supercritical_beta(lambda)?;
        report.beta = Some(beta);
        report.residuals.beta = Some((beta + (-lambda * beta).exp_m1()).abs());
    } else if lambda < 1.0 {
        report.sub_const = Some(subcritical_constant(lambda)?);
    }
    match regime {
        Regime::Supercritical => {
            let profile = weighted_beta_profile(lambda, w)?;
            report.b_star = Some(profile.b_star);
            report.beta_hat = Some(profile.beta_hat);
            report.residuals.b_star = Some(profile.residual);
        }
        Regime::Subcritical => {
            report.b_star = Some(0.0);
            report.beta_hat = Some(0.0);
            let t3 = theorem3_constants(lambda, w)?;
            report.y = Some(t3.y);
            report.gamma = Some(t3.gamma);
            report.sub_const_weighted = Some(t3.limit);
            report.residuals.y = Some(t3.residual);
        }
        Regime::Critical => unreachable!(),
    }
    Ok(report)
}

/// Whether `w` is the point mass at 1.
pub fn is_unit_weight(w: &WeightSpec) -> bool {
    matches!(w.kind(), WeightKind::Constant(x) if *x == 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed at 40 digits with an independent
    // arbitrary-precision root finder.
    const BETA_2: f64 = 0.796_812_130_020_020_05;
    const BETA_1_5: f64 = 0.582_811_643_865_811_4;
    const BETA_3: f64 = 0.940_479_790_707_359_6;
    const SUB_HALF: f64 = 5.177_398_899_124_179_7;
    const B_STAR_12_AT_1: f64 = 1.285_196_378_041_754_7;
    const BETA_HAT_12_AT_1: f64 = 0.823_449_123_804_331_6;
    const Y_12_AT_03: f64 = 1.309_596_132_105_276_8;
    const GAMMA_12_AT_03: f64 = 1.036_033_591_036_330_7;

    fn two_point() -> WeightSpec {
        WeightSpec::discrete(&[(1.0, 0.5), (2.0, 0.5)]).unwrap()
    }

    #[test]
    fn subcritical_examples() {
        assert!((subcritical_constant(0.5).unwrap() - SUB_HALF).abs() < 1e-12);
        let e = std::f64::consts::E;
        assert!((subcritical_constant(1.0 / e).unwrap() - e).abs() < 1e-12);
        assert!(subcritical_constant(1.0 - 1e-6).unwrap() > 1e11);
        assert!(matches!(subcritical_constant(1.0), Err(Error::Regime(_))));
        assert!(matches!(subcritical_constant(0.0), Err(Error::Regime(_))));
    }

    #[test]
    fn beta_examples() {
        for (lambda, want) in [(2.0, BETA_2), (1.5, BETA_1_5), (3.0, BETA_3)] {
            let b = supercritical_beta(lambda).unwrap();
            assert!((b - want).abs() < 1e-14, "lambda={lambda}: {b}");
            assert!((b + (-lambda * b).exp_m1()).abs() < 1e-12);
        }
        assert!(supercritical_beta(40.0).unwrap() > 1.0 - 1e-15);
        assert!(matches!(supercritical_beta(1.0), Err(Error::Regime(_))));
        assert!(matches!(supercritical_beta(0.5), Err(Error::Regime(_))));
    }

    #[test]
    fn beta_near_criticality() {
        let eps = 1e-6;
        let lambda = 1.0 + eps;
        let b = supercritical_beta(lambda).unwrap();
        let expansion = 2.0 * (lambda - 1.0) / (lambda * lambda);
        assert!((b / (2.0 * eps) - 1.0).abs() < 0.1);
        assert!((b / expansion - 1.0).abs() < 1e-5);
    }

    #[test]
    fn critical_parameter_examples() {
        let one = WeightSpec::constant(1.0).unwrap();
        assert_eq!(critical_parameter(2.0, &one).unwrap(), 2.0);
        assert_eq!(critical_parameter(0.5, &two_point()).unwrap(), 1.25);
        assert_eq!(Regime::classify(critical_parameter(0.4, &two_point()).unwrap()), Regime::Critical);
    }

    #[test]
    fn weighted_profile_examples() {
        let one = WeightSpec::constant(1.0).unwrap();
        let p = weighted_beta_profile(2.0, &one).unwrap();
        assert!((p.b_star - BETA_2).abs() < 1e-13);
        assert!((p.beta_hat - BETA_2).abs() < 1e-13);

        let p = weighted_beta_profile(0.35, &two_point()).unwrap();
        assert_eq!((p.b_star, p.beta_hat), (0.0, 0.0));

        let p = weighted_beta_profile(1.0, &two_point()).unwrap();
        assert!((p.b_star - B_STAR_12_AT_1).abs() < 1e-12);
        assert!((p.beta_hat - BETA_HAT_12_AT_1).abs() < 1e-12);
        assert!(p.residual < RESIDUAL_TOLERANCE);
        let hat = 0.5 * p.beta(1.0) + 0.5 * p.beta(2.0);
        assert!((hat - p.beta_hat).abs() < 1e-15);
    }

    #[test]
    fn tilt_examples() {
        let one = WeightSpec::constant(1.0).unwrap();
        for k in 0..=2 {
            assert!((tilt_moments(&one, 0.7, k).unwrap() - 0.7f64.exp()).abs() < 1e-15);
        }
        let w = two_point();
        assert_eq!(tilt_moments(&w, 0.0, 0).unwrap(), 1.0);
        assert_eq!(tilt_moments(&w, 0.0, 1).unwrap(), 1.5);
        assert_eq!(tilt_moments(&w, 0.0, 2).unwrap(), 2.5);
        assert!((tilt_moments(&w, 2f64.ln(), 1).unwrap() - 5.0).abs() < 1e-14);
        assert!(matches!(tilt_moments(&w, 0.0, 3), Err(Error::Domain(_))));
        let exp = WeightSpec::exponential(1.0).unwrap();
        assert!(matches!(tilt_moments(&exp, 1.0, 1), Err(Error::Assumption(_))));
    }

    #[test]
    fn weighted_subcritical_unit_weight_identity() {
        let one = WeightSpec::constant(1.0).unwrap();
        for lambda in [0.2, 0.5, 0.8] {
            let t = theorem3_constants(lambda, &one).unwrap();
            assert!((t.y - 1.0 / lambda).abs() < 1e-12);
            assert!((t.gamma - (lambda - 1.0).exp() / lambda).abs() < 1e-12);
            let want = subcritical_constant(lambda).unwrap();
            assert!((t.limit - want).abs() < 1e-10, "lambda={lambda}: {} vs {want}", t.limit);
        }
    }

    #[test]
    fn weighted_subcritical_two_point() {
        let t = theorem3_constants(0.3, &two_point()).unwrap();
        assert!(t.residual < RESIDUAL_TOLERANCE);
        assert!(t.gamma > 1.0);
        assert!((t.y - Y_12_AT_03).abs() < 1e-12);
        assert!((t.gamma - GAMMA_12_AT_03).abs() < 1e-12);
    }

    #[test]
    fn weighted_subcritical_exponential_closed_form() {
        // For W ~ Exp(1): y = (1 + lambda) / (3 lambda).
        let w = WeightSpec::exponential(1.0).unwrap();
        let lambda = 0.3;
        let t = theorem3_constants(lambda, &w).unwrap();
        assert!((t.y - (1.0 + lambda) / (3.0 * lambda)).abs() < 1e-9);
        assert!(t.residual < RESIDUAL_TOLERANCE);
    }

    #[test]
    fn weighted_subcritical_regime_errors() {
        assert!(matches!(theorem3_constants(0.5, &two_point()), Err(Error::Regime(_))));
        assert!(matches!(theorem3_constants(0.4, &two_point()), Err(Error::Regime(_))));
    }

    #[test]
    fn reports() {
        let one = WeightSpec::constant(1.0).unwrap();
        let r = theory_report(2.0, &one).unwrap();
        assert_eq!(r.regime, Regime::Supercritical);
        assert!((r.beta.unwrap() - BETA_2).abs() < 1e-13);

        let r = theory_report(0.5, &one).unwrap();
        assert_eq!(r.regime, Regime::Subcritical);
        assert!((r.sub_const.unwrap() - r.sub_const_weighted.unwrap()).abs() < 1e-10);

        let r = theory_report(0.4, &two_point()).unwrap();
        assert_eq!(r.regime, Regime::Critical);
        assert!(r.beta_hat.is_none() && r.sub_const.is_none() && r.gamma.is_none());
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"regime\":\"critical\""));
    }

    #[test]
    fn monotone_in_lambda() {
        let mut prev = 0.0;
        for i in 1..200 {
            let b = supercritical_beta(1.0 + i as f64 * 0.05).unwrap();
            assert!(b > prev);
            prev = b;
        }
        let w = two_point();
        let (mut prev_b, mut prev_hat) = (0.0, 0.0);
        for i in 0..100 {
            let p = weighted_beta_profile(0.2 + i as f64 * 0.02, &w).unwrap();
            assert!(p.b_star >= prev_b && p.beta_hat >= prev_hat);
            prev_b = p.b_star;
            prev_hat = p.beta_hat;
        }
    }

    #[test]
    fn maximal_root() {
        // No fixed point above the returned one.
        let beta = supercritical_beta(2.0).unwrap();
        for i in 1..=1000 {
            let x = beta + (1.0 - beta) * i as f64 / 1000.0;
            assert!(x - (1.0 - (-2.0 * x).exp()) > 0.0);
        }
        let w = two_point();
        let p = weighted_beta_profile(1.0, &w).unwrap();
        for i in 1..=1000 {
            let b = p.b_star + (w.mean() - p.b_star) * i as f64 / 1000.0;
            assert!(b - survival_map(1.0, &w, b).unwrap() > 0.0);
        }
    }
}
