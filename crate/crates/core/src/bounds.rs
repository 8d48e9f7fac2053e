//! Closed-form lower bounds on `dis(n)`, evaluated in the log domain.
//!
//! Where a bound happens to be rational (odd `n`, or `n + 1` a perfect
//! square) an exact value is also available.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::rational::{factorial, to_f64};

/// Above this size `ln n!` comes from the Stirling series rather than a
/// compensated sum of logarithms.
const STIRLING_THRESHOLD: usize = 150;

/// Best known values of `dis(n)` for n = 3..=8 from the literature; reference
/// only, never produced by this crate.
pub const KNOWN_DIS: [(usize, u64); 6] = [(3, 5), (4, 16), (5, 61), (6, 270), (7, 1175), (8, 5522)];

pub fn known_dis_reference(n: usize) -> Option<u64> {
    KNOWN_DIS.iter().find(|(m, _)| *m == n).map(|(_, v)| *v)
}

fn ln_factorial_sum(n: usize) -> f64 {
    // Kahan summation
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 2..=n {
        let y = (k as f64).ln() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

fn ln_factorial_stirling(n: usize) -> f64 {
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

pub fn ln_factorial(n: usize) -> f64 {
    if n > STIRLING_THRESHOLD {
        ln_factorial_stirling(n)
    } else {
        ln_factorial_sum(n)
    }
}

/// `ln(2 (sqrt(n+1)/2)^(n+1))`
fn ln_rho_bound(n: usize) -> f64 {
    let m = (n + 1) as f64;
    std::f64::consts::LN_2 + m * (0.5 * m.ln() - std::f64::consts::LN_2)
}

fn ln_euclidean(n: usize) -> f64 {
    ln_factorial(n) - ln_rho_bound(n)
}

fn ln_asymptotic(n: usize) -> f64 {
    0.5 * (n as f64 - 1.0) * ((n + 1) as f64).ln()
}

/// Upper bound on `rho(n)`: `2 (sqrt(n+1)/2)^(n+1)`.
pub fn hadamard_rho_bound(n: usize) -> f64 {
    ln_rho_bound(n).exp()
}

/// `E(n) = n! / (2 (sqrt(n+1)/2)^(n+1))`.
pub fn euclidean_bound(n: usize) -> f64 {
    ln_euclidean(n).exp()
}

/// `(1/2) 6^(n/2) (n+1)^(-(n+1)/2) n!`, the closed-form lower expression for
/// the hyperbolic-volume bound. This is not that bound itself.
pub fn h_lower_bound(n: usize) -> f64 {
    let m = (n + 1) as f64;
    (-std::f64::consts::LN_2 + 0.5 * n as f64 * 6f64.ln() - 0.5 * m * m.ln() + ln_factorial(n)).exp()
}

/// `F(n) = (n+1)^((n-1)/2)`.
pub fn asymptotic_bound(n: usize) -> f64 {
    ln_asymptotic(n).exp()
}

/// `(F(n)/E(n))^(1/n)`, which tends to `e/2`.
pub fn ratio_diagnostic(n: usize) -> f64 {
    ((ln_asymptotic(n) - ln_euclidean(n)) / n as f64).exp()
}

/// `(n+1)^(e/2)` as an exact rational when `n + 1` is even or a perfect
/// square. `e` is an integer exponent.
fn sqrt_power_exact(base: usize, e: usize) -> Option<BigRational> {
    let b = BigInt::from(base);
    if e % 2 == 0 {
        return Some(BigRational::from_integer(b.pow(e as u32 / 2)));
    }
    let r = b.sqrt();
    (&r * &r == b).then(|| BigRational::from_integer(r.pow(e as u32)))
}

fn half_pow(e: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2).pow(e as u32))
}

pub fn hadamard_rho_bound_exact(n: usize) -> Option<BigRational> {
    let p = sqrt_power_exact(n + 1, n + 1)?;
    Some(BigRational::from_integer(BigInt::from(2)) * p * half_pow(n + 1))
}

pub fn euclidean_bound_exact(n: usize) -> Option<BigRational> {
    Some(BigRational::from_integer(factorial(n)) / hadamard_rho_bound_exact(n)?)
}

pub fn asymptotic_bound_exact(n: usize) -> Option<BigRational> {
    sqrt_power_exact(n + 1, n.checked_sub(1)?)
}

/// `(F(n)/E(n)) = (n+1)^n / (2^n n!)`, exact.
pub fn ratio_power_exact(n: usize) -> BigRational {
    BigRational::new(
        BigInt::from(n + 1).pow(n as u32),
        BigInt::from(2).pow(n as u32) * factorial(n),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub exact: Option<BigRational>,
}

impl BoundValue {
    fn new(value: f64, exact: Option<BigRational>) -> Self {
        Self { value, exact }
    }

    /// Integers print without a decimal point; everything else with ten
    /// significant digits.
    pub fn format(&self) -> String {
        match &self.exact {
            Some(r) if r.is_integer() => r.numer().to_string(),
            _ => format_sig10(self.value),
        }
    }
}

pub fn format_sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..15).contains(&mag) {
        let decimals = (9 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.9e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsRow {
    pub n: usize,
    pub euclidean: BoundValue,
    pub asymptotic: BoundValue,
    pub h_lower: BoundValue,
    pub rho_bound: BoundValue,
    pub known_dis: Option<u64>,
}

pub fn bounds_row(n: usize) -> BoundsRow {
    BoundsRow {
        n,
        euclidean: BoundValue::new(euclidean_bound(n), euclidean_bound_exact(n)),
        asymptotic: BoundValue::new(asymptotic_bound(n), asymptotic_bound_exact(n)),
        h_lower: BoundValue::new(h_lower_bound(n), None),
        rho_bound: BoundValue::new(hadamard_rho_bound(n), hadamard_rho_bound_exact(n)),
        known_dis: known_dis_reference(n),
    }
}

pub fn bounds_table(n_max: usize) -> Vec<BoundsRow> {
    (1..=n_max).map(bounds_row).collect()
}

pub const CSV_HEADER: &str = "n,E,F,H_lower,rho_bound,known_dis";

pub fn bounds_csv(rows: &[BoundsRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let known = r.known_dis.map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.euclidean.format(),
            r.asymptotic.format(),
            r.h_lower.format(),
            r.rho_bound.format(),
            known
        );
    }
    out
}

/// Relative gap between the float and the exact value, when one exists.
pub fn exact_agreement(v: &BoundValue) -> Option<f64> {
    v.exact.as_ref().map(|r| {
        let e = to_f64(r);
        ((v.value - e) / e).abs()
    })
}
