//! Symmetric weight vectors `alpha_1 .. alpha_n` and the analytic log-weights.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{asymptotic_bound, ln_factorial};
use crate::enumeration::ConstraintClass;
use crate::geometry::FoldedProfile;
use crate::{Error, Result};

/// Slack allowed on analytic weighted volumes.
pub const ANALYTIC_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Exact(Vec<BigRational>),
    Analytic(Vec<f64>),
}

/// Weights indexed by column count `m = 1..=n` (stored 0-based). Always sums
/// to one and satisfies `alpha_m = alpha_{n+1-m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    n: usize,
    alpha: Weights,
}

impl WeightVector {
    pub fn exact(alpha: Vec<BigRational>) -> Result<Self> {
        let n = alpha.len();
        if n == 0 {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        let sum: BigRational = alpha.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
        }
        if (0..n).any(|m| alpha[m] != alpha[n - 1 - m]) {
            return Err(Error::InvalidWeights("weights are not symmetric".into()));
        }
        Ok(Self { n, alpha: Weights::Exact(alpha) })
    }

    /// `alpha_i = c - ln(i (n + 1 - i)) / 2` with `c = (1 + ln n!) / n`.
    pub fn analytic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionOutOfRange(n, "n >= 1"));
        }
        let c = (1.0 + ln_factorial(n)) / n as f64;
        let alpha: Vec<f64> = (1..=n)
            .map(|i| c - 0.5 * ((i * (n + 1 - i)) as f64).ln())
            .collect();
        let sum: f64 = alpha.iter().sum();
        if (sum - 1.0).abs() > 1e-12 * (n as f64).max(1.0) {
            return Err(Error::Internal(format!("analytic weights sum to {sum}")));
        }
        Ok(Self { n, alpha: Weights::Analytic(alpha) })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &Weights {
        &self.alpha
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.alpha, Weights::Exact(_))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match &self.alpha {
            Weights::Exact(a) => a.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect(),
            Weights::Analytic(a) => a.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyticViolation {
    pub volume: String,
    pub folded: FoldedProfile,
    pub weighted_volume: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyticReport {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub max_weighted_volume: f64,
    /// `(n+1)^((1-n)/2)`.
    pub threshold: f64,
    pub tolerance: f64,
    pub classes_checked: usize,
    pub violations: Vec<AnalyticViolation>,
    /// `F(n) = (n+1)^((n-1)/2)`, valid when there are no violations.
    pub implied_bound: f64,
}

impl AnalyticReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every class against `V^alpha(T) <= (n+1)^((1-n)/2)` with the
/// analytic weights.
pub fn verify_analytic_bound(n: usize, classes: &[ConstraintClass]) -> Result<AnalyticReport> {
    let weights = WeightVector::analytic(n)?;
    let threshold = ((1.0 - n as f64) / 2.0 * ((n + 1) as f64).ln()).exp();
    let evaluated = classes
        .par_iter()
        .map(|c| Ok((c, c.witness.weighted_volume(&weights)?.to_f64())))
        .collect::<Result<Vec<_>>>()?;
    let max_weighted_volume = evaluated.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let violations = evaluated
        .iter()
        .filter(|(_, v)| *v > threshold + ANALYTIC_TOLERANCE)
        .map(|(c, v)| AnalyticViolation {
            volume: crate::rational::to_pq(&c.volume),
            folded: c.folded.clone(),
            weighted_volume: *v,
        })
        .collect();
    Ok(AnalyticReport {
        n,
        alpha: weights.to_f64(),
        max_weighted_volume,
        threshold,
        tolerance: ANALYTIC_TOLERANCE,
        classes_checked: classes.len(),
        violations,
        implied_bound: asymptotic_bound(n),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HAnalysis {
    pub t_max: f64,
    /// `ln max h = ln n!`
    pub ln_h_max: f64,
    pub h_max: f64,
    /// `h(t_max +- delta) < h(t_max)` for every sampled delta.
    pub sampled_maximum: bool,
}

/// Maximum of `h(t) = e^t (1 + ln n! - t)`, attained at `t = ln n!` with value
/// `n!`. All comparisons run on `ln h`.
pub fn h_function_analysis(n: usize) -> HAnalysis {
    let l = ln_factorial(n);
    let ln_h = |t: f64| t + (1.0 + l - t).ln();
    let t_max = l;
    let at_max = ln_h(t_max);
    let sampled_maximum = [0.1, 0.01]
        .iter()
        .flat_map(|&d| [t_max - d, t_max + d])
        .all(|t| ln_h(t) < at_max);
    HAnalysis { t_max, ln_h_max: at_max, h_max: at_max.exp(), sampled_maximum }
}
