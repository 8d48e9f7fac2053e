//! Verification of explicit simplicial dissections of the unit n-cube.
//!
//! Besides checking that the simplices really dissect the cube, the verifier
//! computes the slice invariants every dissection must share: the class
//! volumes `V(i)` along an axis, their Bernstein coefficients, and the
//! per-coordinate table `sum_T V_{k,m}(T)`.

mod bernstein;

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bernstein::{
    bernstein_evaluation_determinant, bernstein_evaluation_matrix, bernstein_independence_check, rational_det,
    BernsteinCoefficients,
};

use crate::geometry::{Simplex01, Vertex01};
use crate::lp::simplex::{self, Outcome, StandardForm};
use crate::rational::{serde_pq, serde_pq_vec};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissectionFile {
    pub n: usize,
    pub polytope: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,
    pub simplices: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dissection {
    pub n: usize,
    /// Prismoid direction, 1-based.
    pub axis: usize,
    pub simplices: Vec<Simplex01>,
}

impl Dissection {
    pub fn new(n: usize, axis: usize, simplices: Vec<Simplex01>) -> Result<Self> {
        if axis == 0 || axis > n {
            return Err(Error::AxisOutOfRange { axis, n });
        }
        for (index, s) in simplices.iter().enumerate() {
            if s.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
            }
            if s.is_degenerate() {
                return Err(Error::DegenerateSimplex { index });
            }
        }
        Ok(Self { n, axis, simplices })
    }

    pub fn from_file(file: &DissectionFile) -> Result<Self> {
        if file.polytope != "cube" {
            return Err(Error::UnsupportedPolytope(file.polytope.clone()));
        }
        let n = file.n;
        let simplices = file
            .simplices
            .iter()
            .enumerate()
            .map(|(index, verts)| {
                if let Some(v) = verts.iter().find(|v| v.len() != n) {
                    return Err(Error::DimensionMismatch { expected: n, found: v.len() });
                }
                Simplex01::parse(n, verts).map_err(|e| match e {
                    Error::RepeatedVertex(_) => Error::DegenerateSimplex { index },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, file.axis.unwrap_or(1), simplices)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_file(&self) -> DissectionFile {
        DissectionFile {
            n: self.n,
            polytope: "cube".into(),
            axis: Some(self.axis),
            simplices: self
                .simplices
                .iter()
                .map(|s| s.vertices().iter().map(Vertex01::to_string).collect())
                .collect(),
        }
    }

    pub fn total_volume(&self) -> BigRational {
        self.simplices.iter().map(Simplex01::volume).sum()
    }
}

pub fn load_dissection(path: impl AsRef<Path>) -> Result<Dissection> {
    Dissection::from_json(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapWitness {
    pub first: usize,
    pub second: usize,
    /// A point interior to both simplices.
    #[serde(with = "serde_pq_vec")]
    pub point: Vec<BigRational>,
    /// Smallest barycentric coordinate of `point` in either simplex.
    #[serde(with = "serde_pq")]
    pub margin: BigRational,
}

/// Largest common margin `s` such that some point has all barycentric
/// coordinates `>= s` in both simplices, with that point. `None` when the
/// simplices do not meet at all.
pub fn max_common_margin(a: &Simplex01, b: &Simplex01) -> Option<(BigRational, Vec<BigRational>)> {
    let n = a.dim();
    let k = n + 1;
    // columns: lambda'_0..n, mu'_0..n, s   with lambda_i = lambda'_i + s
    let cols = 2 * k + 1;
    let s_col = 2 * k;
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut rows = vec![vec![BigRational::zero(); cols]; n + 2];
    let mut rhs = vec![BigRational::zero(); n + 2];
    for i in 0..k {
        rows[0][i] = BigRational::one();
        rows[1][k + i] = BigRational::one();
    }
    rows[0][s_col] = int(k as i64);
    rows[1][s_col] = int(k as i64);
    rhs[0] = BigRational::one();
    rhs[1] = BigRational::one();
    for j in 0..n {
        let row = &mut rows[2 + j];
        let mut s_coeff = 0i64;
        for (i, v) in a.vertices().iter().enumerate() {
            let x = i64::from(v.coord(j));
            row[i] = int(x);
            s_coeff += x;
        }
        for (i, w) in b.vertices().iter().enumerate() {
            let x = i64::from(w.coord(j));
            row[k + i] = int(-x);
            s_coeff -= x;
        }
        row[s_col] = int(s_coeff);
    }
    let mut cost = vec![BigRational::zero(); cols];
    cost[s_col] = -BigRational::one();
    match simplex::solve(&StandardForm { a: rows, b: rhs, c: cost }) {
        Outcome::Optimal(opt) => {
            let s = opt.x[s_col].clone();
            let point = (0..n)
                .map(|j| {
                    a.vertices()
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| v.coord(j) == 1)
                        .map(|(i, _)| &opt.x[i] + &s)
                        .sum()
                })
                .collect();
            Some((s, point))
        }
        Outcome::Infeasible => None,
        Outcome::Unbounded => unreachable!("margin is bounded by 1/(n+1)"),
    }
}

/// `Some` iff the open interiors of `a` and `b` intersect.
pub fn interior_overlap(a: &Simplex01, b: &Simplex01) -> Option<(BigRational, Vec<BigRational>)> {
    max_common_margin(a, b).filter(|(s, _)| s > &BigRational::zero())
}

/// `V(1) .. V(n)`: total volume of simplices with exactly `i` vertices on the
/// facet `x_axis = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVolumeVector {
    pub axis: usize,
    #[serde(with = "serde_pq_vec")]
    pub volumes: Vec<BigRational>,
}

pub fn class_volumes(d: &Dissection, axis: usize) -> Result<ClassVolumeVector> {
    if axis == 0 || axis > d.n {
        return Err(Error::AxisOutOfRange { axis, n: d.n });
    }
    let mut volumes = vec![BigRational::zero(); d.n];
    for s in &d.simplices {
        let on_zero = s.vertices().iter().filter(|v| v.coord(axis - 1) == 0).count();
        // non-degenerate: both facets carry at least one vertex
        if on_zero == 0 || on_zero > d.n {
            return Err(Error::Internal(format!("simplex {s} lies in one facet of axis {axis}")));
        }
        volumes[on_zero - 1] += s.volume();
    }
    Ok(ClassVolumeVector { axis, volumes })
}

pub fn bernstein_coefficients(d: &Dissection, axis: usize) -> Result<BernsteinCoefficients> {
    Ok(BernsteinCoefficients::from_class_volumes(&class_volumes(d, axis)?.volumes))
}

/// Area of the cross-section `x_axis = t` reconstructed from the dissection.
pub fn section_polynomial_eval(d: &Dissection, axis: usize, t: &BigRational) -> Result<BigRational> {
    bernstein_coefficients(d, axis)?.section_at(t)
}

/// `table[k][m]`: total volume of simplices whose coordinate `k + 1` has
/// exactly `m + 1` ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileVolumeTable {
    pub table: Vec<Vec<String>>,
    /// Every entry equals `1/n`.
    pub holds: bool,
    #[serde(skip)]
    pub values: Vec<Vec<BigRational>>,
}

pub fn profile_volume_table(d: &Dissection) -> ProfileVolumeTable {
    let n = d.n;
    let mut values = vec![vec![BigRational::zero(); n]; n];
    for s in &d.simplices {
        let vol = s.volume();
        for (k, &ones) in s.column_profile().0.iter().enumerate() {
            if (1..=n).contains(&ones) {
                values[k][ones - 1] += &vol;
            }
        }
    }
    let target = BigRational::new(BigInt::one(), BigInt::from(n));
    let holds = values.iter().flatten().all(|v| *v == target);
    ProfileVolumeTable {
        table: values.iter().map(|r| r.iter().map(crate::rational::to_pq).collect()).collect(),
        holds,
        values,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub partition_ok: bool,
    #[serde(with = "serde_pq")]
    pub volume_sum: BigRational,
    pub overlap_witness: Option<OverlapWitness>,
    pub class_volumes: Vec<ClassVolumeVector>,
    pub bernstein: Vec<BernsteinCoefficients>,
    /// Each axis's slice polynomial equals the constant 1 at `n + 1` points.
    pub section_ok: bool,
    pub profile_table: ProfileVolumeTable,
    pub profile_table_ok: bool,
}

/// Checks that the simplices tile the unit cube (total volume 1, pairwise
/// disjoint interiors) and gathers the slice invariants on every axis.
pub fn verify_partition(d: &Dissection) -> VerificationReport {
    let volume_sum = d.total_volume();
    let pairs: Vec<(usize, usize)> = (0..d.simplices.len())
        .flat_map(|i| (i + 1..d.simplices.len()).map(move |j| (i, j)))
        .collect();
    // collect keeps pair order, so the first witness is deterministic
    let overlap_witness = pairs
        .par_iter()
        .map(|&(i, j)| {
            interior_overlap(&d.simplices[i], &d.simplices[j])
                .map(|(margin, point)| OverlapWitness { first: i, second: j, point, margin })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    let partition_ok = volume_sum.is_one() && overlap_witness.is_none();

    let class_volumes: Vec<ClassVolumeVector> = (1..=d.n)
        .map(|axis| class_volumes(d, axis).expect("axis in range and simplices non-degenerate"))
        .collect();
    let bernstein: Vec<BernsteinCoefficients> = class_volumes
        .iter()
        .map(|cv| BernsteinCoefficients::from_class_volumes(&cv.volumes))
        .collect();
    let section_ok = bernstein.iter().all(|b| {
        (0..=d.n).all(|r| {
            let t = BigRational::new(BigInt::from(r), BigInt::from(d.n));
            b.section_at(&t).map(|v| v.is_one()).unwrap_or(false)
        })
    });
    let profile_table = profile_volume_table(d);
    VerificationReport {
        n: d.n,
        partition_ok,
        volume_sum,
        overlap_witness,
        class_volumes,
        bernstein,
        section_ok,
        profile_table_ok: profile_table.holds,
        profile_table,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn s3(v: &[&str]) -> Simplex01 {
        Simplex01::parse(3, v).unwrap()
    }

    #[test]
    fn identical_simplices_overlap() {
        let a = s3(&["000", "100", "010", "001"]);
        let (margin, point) = interior_overlap(&a, &a).unwrap();
        assert_eq!(margin, ratio(1, 4));
        assert_eq!(point, vec![ratio(1, 4); 3]);
    }

    #[test]
    fn touching_simplices_do_not_overlap() {
        let corner = s3(&["000", "100", "010", "001"]);
        let central = s3(&["100", "010", "001", "111"]);
        let (margin, _) = max_common_margin(&corner, &central).unwrap();
        assert!(margin.is_zero());
        assert!(interior_overlap(&corner, &central).is_none());
    }

    #[test]
    fn far_apart_simplices_do_not_meet() {
        let a = s3(&["000", "100", "010", "001"]);
        let b = s3(&["111", "011", "101", "110"]);
        assert!(max_common_margin(&a, &b).is_none());
    }

    #[test]
    fn corner_and_central_overlap() {
        let a = s3(&["000", "100", "010", "001"]);
        let b = s3(&["000", "110", "101", "011"]);
        let (margin, point) = interior_overlap(&a, &b).unwrap();
        assert!(margin > BigRational::zero());
        assert_eq!(point.len(), 3);
    }

    #[test]
    fn rejects_bad_files() {
        let repeat = r#"{"n":3,"polytope":"cube","simplices":[["000","100","100","001"]]}"#;
        assert!(matches!(Dissection::from_json(repeat), Err(Error::DegenerateSimplex { index: 0 })));
        let flat = r#"{"n":3,"polytope":"cube","simplices":[["000","100","010","001"],["000","100","010","110"]]}"#;
        assert!(matches!(Dissection::from_json(flat), Err(Error::DegenerateSimplex { index: 1 })));
        let short = r#"{"n":3,"polytope":"cube","simplices":[["000","10","010","001"]]}"#;
        assert!(matches!(Dissection::from_json(short), Err(Error::DimensionMismatch { .. })));
        let other = r#"{"n":3,"polytope":"prism","simplices":[]}"#;
        assert!(matches!(Dissection::from_json(other), Err(Error::UnsupportedPolytope(_))));
        let axis = r#"{"n":3,"polytope":"cube","axis":4,"simplices":[]}"#;
        assert!(matches!(Dissection::from_json(axis), Err(Error::AxisOutOfRange { .. })));
        assert!(matches!(Dissection::from_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn segment() {
        let d = Dissection::from_json(r#"{"n":1,"polytope":"cube","simplices":[["0","1"]]}"#).unwrap();
        let r = verify_partition(&d);
        assert!(r.partition_ok && r.section_ok && r.profile_table_ok);
        assert_eq!(r.class_volumes[0].volumes, vec![int(1)]);
        assert_eq!(r.bernstein[0].c, vec![int(1)]);
        assert_eq!(section_polynomial_eval(&d, 1, &ratio(1, 3)).unwrap(), int(1));
        assert!(class_volumes(&d, 2).is_err());
    }
}
