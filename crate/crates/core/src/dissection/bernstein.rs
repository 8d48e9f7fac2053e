//! Bernstein-basis slice polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::rational::{binomial, serde_pq_vec};
use crate::{Error, Result};

/// `c_1 .. c_n` with `V(i) = c_i / (n C(n-1, i-1))`. The cross-section area
/// at height `t` is `sum_i c_i t^(n-i) (1-t)^(i-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BernsteinCoefficients {
    #[serde(with = "serde_pq_vec")]
    pub c: Vec<BigRational>,
}

fn pow(base: &BigRational, e: usize) -> BigRational {
    // 0^0 = 1
    if e == 0 {
        BigRational::one()
    } else {
        Pow::pow(base, e as u32)
    }
}

impl BernsteinCoefficients {
    pub fn from_class_volumes(volumes: &[BigRational]) -> Self {
        let n = volumes.len();
        let c = volumes
            .iter()
            .enumerate()
            .map(|(k, v)| v * BigRational::from_integer(BigInt::from(n) * binomial(n - 1, k)))
            .collect();
        Self { c }
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// Evaluates the slice polynomial at `t` in `[0, 1]`.
    pub fn section_at(&self, t: &BigRational) -> Result<BigRational> {
        if t.is_negative() || *t > BigRational::one() {
            return Err(Error::ParameterOutOfRange(t.to_string()));
        }
        let n = self.dim();
        let s = BigRational::one() - t;
        Ok(self
            .c
            .iter()
            .enumerate()
            .map(|(k, c)| c * pow(t, n - 1 - k) * pow(&s, k))
            .sum())
    }
}

/// Evaluation matrix of `t^i (1-t)^(m-i)`, `i = 0..=m`, at the points
/// `t = r/m`, `r = 0..=m`.
pub fn bernstein_evaluation_matrix(m: usize) -> Vec<Vec<BigRational>> {
    (0..=m)
        .map(|r| {
            let t = if m == 0 {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::from(r), BigInt::from(m))
            };
            let s = BigRational::one() - &t;
            (0..=m).map(|i| pow(&t, i) * pow(&s, m - i)).collect()
        })
        .collect()
}

/// Determinant by Gaussian elimination over the rationals.
pub fn rational_det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let size = a.len();
    let mut det = BigRational::one();
    for k in 0..size {
        let Some(p) = (k..size).find(|&r| !a[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in k + 1..size {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..size {
                let delta = &f * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

pub fn bernstein_evaluation_determinant(m: usize) -> BigRational {
    rational_det(bernstein_evaluation_matrix(m))
}

/// The degree-`m` Bernstein basis is linearly independent iff its evaluation
/// matrix at `m + 1` distinct points is non-singular.
pub fn bernstein_independence_check(m: usize) -> bool {
    !bernstein_evaluation_determinant(m).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn evaluation_matrices() {
        assert_eq!(bernstein_evaluation_matrix(1), vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        assert_eq!(bernstein_evaluation_determinant(1), int(1));
        assert_eq!(bernstein_evaluation_determinant(2).abs(), ratio(1, 4));
        assert_eq!(bernstein_evaluation_determinant(0), int(1));
        assert!(bernstein_independence_check(7));
    }

    #[test]
    fn determinant_of_singular_matrix() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(rational_det(a), int(0));
        let b = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(rational_det(b), int(-1));
    }

    #[test]
    fn cube_coefficients_and_section() {
        let v = vec![ratio(1, 3); 3];
        let c = BernsteinCoefficients::from_class_volumes(&v);
        assert_eq!(c.c, vec![int(1), int(2), int(1)]);
        assert_eq!(c.section_at(&ratio(1, 2)).unwrap(), int(1));
        assert_eq!(c.section_at(&int(0)).unwrap(), int(1));
        assert_eq!(c.section_at(&int(1)).unwrap(), int(1));
        assert!(c.section_at(&ratio(3, 2)).is_err());
        assert!(c.section_at(&ratio(-1, 2)).is_err());
        let seg = BernsteinCoefficients::from_class_volumes(&[int(1)]);
        assert_eq!(seg.c, vec![int(1)]);
        assert_eq!(seg.section_at(&ratio(2, 7)).unwrap(), int(1));
    }

    #[test]
    fn four_cube_binomial_row() {
        let c = BernsteinCoefficients::from_class_volumes(&vec![ratio(1, 4); 4]);
        assert_eq!(c.c, vec![int(1), int(3), int(3), int(1)]);
    }
}
