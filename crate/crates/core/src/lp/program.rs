//! The min-max weight program.
//!
//! For weights `x` (free) and a scalar `g` the program is
//!
//! ```text
//! minimize g  subject to  a_c . x <= g  for every constraint class c,
//!                         E x = r
//! ```
//!
//! where `a_c . x` is the weighted volume of class `c`. It is solved through
//! its dual, which is in standard form with only `1 + #weights` rows:
//!
//! ```text
//! maximize r . mu  subject to  sum_c y_c = 1,  sum_c y_c a_c = E^T mu,  y >= 0
//! ```
//!
//! The primal optimum `(g*, x*)` is read off the simplex multipliers of the
//! final basis and then re-checked against every constraint.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::simplex::{self, Outcome, StandardForm};
use super::weights::WeightVector;
use crate::enumeration::ConstraintClass;
use crate::geometry::FoldedProfile;
use crate::rational::{serde_pq, serde_pq_vec};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassKey {
    #[serde(with = "serde_pq")]
    pub volume: BigRational,
    pub folded: FoldedProfile,
}

impl From<&ConstraintClass> for ClassKey {
    fn from(c: &ConstraintClass) -> Self {
        Self { volume: c.volume.clone(), folded: c.folded.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variables {
    /// `beta_d` for `d = 1..=ceil(n/2)`, with `alpha_m = beta_min(m, n+1-m)`.
    Folded,
    /// `alpha_1 .. alpha_n` with explicit symmetry equations.
    Unfolded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub key: ClassKey,
    pub coeffs: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equality {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub n: usize,
    pub variables: Variables,
    pub num_weights: usize,
    pub constraints: Vec<Constraint>,
    pub equalities: Vec<Equality>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub n: usize,
    pub g_star: BigRational,
    /// Optimal values of the problem's own weight variables.
    pub weights: Vec<BigRational>,
    pub alpha_star: WeightVector,
    pub tight_classes: Vec<ClassKey>,
    pub bound: BigRational,
    pub pivots: usize,
}

fn folded_width(n: usize) -> usize {
    n.div_ceil(2)
}

/// Builds the program with symmetry imposed through folded variables.
pub fn build_lp(classes: &[ConstraintClass], n: usize) -> Result<LpProblem> {
    if classes.is_empty() {
        return Err(Error::EmptyClassList);
    }
    let k = folded_width(n);
    let constraints = classes
        .iter()
        .map(|c| {
            if c.witness.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.witness.dim() });
            }
            if !c.volume.is_positive() {
                return Err(Error::Internal(format!("class {} has non-positive volume", c.witness)));
            }
            let mut coeffs = vec![BigRational::zero(); k];
            for &d in &c.folded.0 {
                if d == 0 || d > k {
                    return Err(Error::DegenerateProfile { value: d, n });
                }
                coeffs[d - 1] += &c.volume;
            }
            Ok(Constraint { key: c.into(), coeffs })
        })
        .collect::<Result<Vec<_>>>()?;
    // each beta_d stands for alpha_d and alpha_{n+1-d}, except the middle one
    let normalisation = (1..=k)
        .map(|d| BigRational::from_integer(BigInt::from(if 2 * d == n + 1 { 1 } else { 2 })))
        .collect();
    Ok(LpProblem {
        n,
        variables: Variables::Folded,
        num_weights: k,
        constraints,
        equalities: vec![Equality { coeffs: normalisation, rhs: BigRational::one() }],
    })
}

/// Same program over `alpha_1 .. alpha_n`, using each class witness's raw
/// column profile and adding `alpha_m = alpha_{n+1-m}` explicitly.
pub fn build_unfolded_lp(classes: &[ConstraintClass], n: usize) -> Result<LpProblem> {
    if classes.is_empty() {
        return Err(Error::EmptyClassList);
    }
    let constraints = classes
        .iter()
        .map(|c| {
            let profile = c.witness.column_profile();
            if profile.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: profile.dim() });
            }
            let mut coeffs = vec![BigRational::zero(); n];
            for &i in &profile.0 {
                if i == 0 || i > n {
                    return Err(Error::DegenerateProfile { value: i, n });
                }
                coeffs[i - 1] += &c.volume;
            }
            Ok(Constraint { key: c.into(), coeffs })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut equalities = vec![Equality { coeffs: vec![BigRational::one(); n], rhs: BigRational::one() }];
    for m in 0..n {
        let mirror = n - 1 - m;
        if m < mirror {
            let mut coeffs = vec![BigRational::zero(); n];
            coeffs[m] = BigRational::one();
            coeffs[mirror] = -BigRational::one();
            equalities.push(Equality { coeffs, rhs: BigRational::zero() });
        }
    }
    Ok(LpProblem { n, variables: Variables::Unfolded, num_weights: n, constraints, equalities })
}

impl LpProblem {
    /// Multiplies every class volume by `lambda`.
    pub fn scaled(&self, lambda: &BigRational) -> Self {
        let mut out = self.clone();
        for c in &mut out.constraints {
            c.key.volume = &c.key.volume * lambda;
            for v in &mut c.coeffs {
                *v = &*v * lambda;
            }
        }
        out
    }

    /// Expands problem variables into `alpha_1 .. alpha_n`.
    pub fn alpha_from_weights(&self, weights: &[BigRational]) -> Vec<BigRational> {
        match self.variables {
            Variables::Folded => (1..=self.n).map(|m| weights[m.min(self.n + 1 - m) - 1].clone()).collect(),
            Variables::Unfolded => weights.to_vec(),
        }
    }

    pub fn evaluate(&self, c: &Constraint, weights: &[BigRational]) -> BigRational {
        c.coeffs.iter().zip(weights).map(|(a, x)| a * x).sum()
    }

    fn dual_standard_form(&self) -> StandardForm {
        let nc = self.constraints.len();
        let ne = self.equalities.len();
        let w = self.num_weights;
        let cols = nc + 2 * ne;
        let mut a = vec![vec![BigRational::zero(); cols]; 1 + w];
        let mut c = vec![BigRational::zero(); cols];
        for (j, con) in self.constraints.iter().enumerate() {
            a[0][j] = BigRational::one();
            for v in 0..w {
                a[1 + v][j] = con.coeffs[v].clone();
            }
        }
        for (e, eq) in self.equalities.iter().enumerate() {
            let plus = nc + 2 * e;
            let minus = plus + 1;
            for v in 0..w {
                a[1 + v][plus] = -&eq.coeffs[v];
                a[1 + v][minus] = eq.coeffs[v].clone();
            }
            c[plus] = -&eq.rhs;
            c[minus] = eq.rhs.clone();
        }
        let mut b = vec![BigRational::zero(); 1 + w];
        b[0] = BigRational::one();
        StandardForm { a, b, c }
    }
}

/// Solves the program exactly. The result is certified: every constraint is
/// re-evaluated at the optimum, the equalities are re-checked, and at least
/// one constraint must be tight.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    if p.constraints.is_empty() {
        return Err(Error::EmptyClassList);
    }
    let opt = match simplex::solve(&p.dual_standard_form()) {
        Outcome::Optimal(o) => o,
        Outcome::Infeasible => return Err(Error::Internal("weight program dual is infeasible".into())),
        Outcome::Unbounded => return Err(Error::Internal("weight program dual is unbounded".into())),
    };
    let g_star = -&opt.duals[0];
    let weights: Vec<BigRational> = opt.duals[1..].to_vec();
    if g_star != -&opt.objective {
        return Err(Error::Internal("dual objective and multipliers disagree".into()));
    }
    for eq in &p.equalities {
        let lhs: BigRational = eq.coeffs.iter().zip(&weights).map(|(a, x)| a * x).sum();
        if lhs != eq.rhs {
            return Err(Error::Internal("optimal weights violate an equality".into()));
        }
    }
    let mut tight_classes = Vec::new();
    for c in &p.constraints {
        let value = p.evaluate(c, &weights);
        if value > g_star {
            return Err(Error::Internal(format!("class {:?} exceeds g* at the optimum", c.key)));
        }
        if value == g_star {
            tight_classes.push(c.key.clone());
        }
    }
    if tight_classes.is_empty() || !g_star.is_positive() {
        return Err(Error::Internal("optimum is not attained by any class".into()));
    }
    let alpha_star = WeightVector::exact(p.alpha_from_weights(&weights))?;
    Ok(LpSolution {
        n: p.n,
        bound: g_star.recip(),
        g_star,
        weights,
        alpha_star,
        tight_classes,
        pivots: opt.pivots,
    })
}

/// `1 / g*`.
pub fn lower_bound_from_lp(s: &LpSolution) -> BigRational {
    s.g_star.recip()
}

/// On-disk LP result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpResultFile {
    pub n: usize,
    #[serde(with = "serde_pq")]
    pub g_star: BigRational,
    #[serde(with = "serde_pq")]
    pub bound: BigRational,
    #[serde(with = "serde_pq_vec")]
    pub alpha: Vec<BigRational>,
    pub tight_classes: Vec<ClassKey>,
}

impl From<&LpSolution> for LpResultFile {
    fn from(s: &LpSolution) -> Self {
        let alpha = match s.alpha_star.values() {
            super::Weights::Exact(a) => a.clone(),
            super::Weights::Analytic(_) => unreachable!("LP weights are exact"),
        };
        Self {
            n: s.n,
            g_star: s.g_star.clone(),
            bound: s.bound.clone(),
            alpha,
            tight_classes: s.tight_classes.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_classes, EnumerationOptions};
    use crate::rational::{int, ratio};

    fn classes(n: usize) -> Vec<ConstraintClass> {
        enumerate_classes(n, &EnumerationOptions::default()).unwrap().classes
    }

    #[test]
    fn segment() {
        let p = build_lp(&classes(1), 1).unwrap();
        assert_eq!(p.num_weights, 1);
        assert_eq!(p.constraints[0].coeffs, vec![int(1)]);
        assert_eq!(p.equalities[0].coeffs, vec![int(1)]);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.g_star, int(1));
        assert_eq!(lower_bound_from_lp(&s), int(1));
    }

    #[test]
    fn square() {
        let p = build_lp(&classes(2), 2).unwrap();
        assert_eq!(p.constraints.len(), 1);
        // (1/2)(beta_1 + beta_1) <= g, 2 beta_1 = 1
        assert_eq!(p.constraints[0].coeffs, vec![int(1)]);
        assert_eq!(p.equalities[0].coeffs, vec![int(2)]);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.g_star, ratio(1, 2));
        assert_eq!(s.bound, int(2));
    }

    #[test]
    fn cube_program_contains_central_class() {
        let p = build_lp(&classes(3), 3).unwrap();
        assert_eq!(p.num_weights, 2);
        assert_eq!(p.equalities[0].coeffs, vec![int(2), int(1)]);
        let central = p
            .constraints
            .iter()
            .find(|c| c.key.folded == FoldedProfile(vec![2, 2, 2]))
            .unwrap();
        assert_eq!(central.key.volume, ratio(1, 3));
        assert_eq!(central.coeffs, vec![int(0), int(1)]);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(build_lp(&[], 3), Err(Error::EmptyClassList)));
        assert!(matches!(build_unfolded_lp(&[], 3), Err(Error::EmptyClassList)));
    }

    #[test]
    fn result_file_round_trip() {
        let s = solve_lp(&build_lp(&classes(3), 3).unwrap()).unwrap();
        let file = LpResultFile::from(&s);
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.contains(r#""bound":"5/1""#));
        let back: LpResultFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, file);
    }
}
