//! Exact geometry of 0/1-simplices.
//!
//! A simplex is stored as its vertex set in canonical order: ascending by the
//! integer whose binary digits, read left to right, are the coordinates
//! `x_1 .. x_n`. That is also the order used for every serialized form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lp::{WeightVector, Weights};
use crate::rational::factorial;
use crate::{Error, Result};

/// Largest ambient dimension representable by [`Vertex01`].
pub const MAX_DIM: usize = 63;

/// A vertex of the unit n-cube. Coordinate `j` (0-based) is bit `n - 1 - j`
/// of `code`, so the code is the binary number spelled by the coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex01 {
    n: u8,
    code: u64,
}

impl Vertex01 {
    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n, "1..=63"));
        }
        if code >> n != 0 {
            return Err(Error::InvalidVertex(format!("{code:#b} has more than {n} bits")));
        }
        Ok(Self { n: n as u8, code })
    }

    pub fn parse(n: usize, s: &str) -> Result<Self> {
        if s.len() != n || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::InvalidVertex(s.to_string()));
        }
        let code = s.bytes().fold(0u64, |acc, b| (acc << 1) | u64::from(b - b'0'));
        Self::from_code(n, code)
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    /// Coordinate `j`, 0-based.
    pub fn coord(&self, j: usize) -> u8 {
        ((self.code >> (self.dim() - 1 - j)) & 1) as u8
    }

    pub fn coords(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.dim()).map(|j| self.coord(j))
    }
}

impl fmt::Display for Vertex01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.coords() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Number of ones in each coordinate column, `i_1 .. i_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColumnProfile(pub Vec<usize>);

/// Sorted multiset of `min(i_j, n + 1 - i_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FoldedProfile(pub Vec<usize>);

impl ColumnProfile {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Folds each count about `(n + 1) / 2`. Zero and `n + 1` are rejected:
    /// they only occur for degenerate simplices.
    pub fn fold(&self) -> Result<FoldedProfile> {
        let n = self.dim();
        let mut folded = self
            .0
            .iter()
            .map(|&i| {
                if i == 0 || i > n {
                    Err(Error::DegenerateProfile { value: i, n })
                } else {
                    Ok(i.min(n + 1 - i))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        folded.sort_unstable();
        Ok(FoldedProfile(folded))
    }
}

/// An n-simplex spanned by n+1 distinct cube vertices (possibly degenerate).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex01 {
    n: usize,
    vertices: Vec<Vertex01>,
}

#[derive(Serialize, Deserialize)]
struct SimplexRepr {
    n: usize,
    vertices: Vec<String>,
}

impl Serialize for Simplex01 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SimplexRepr {
            n: self.n,
            vertices: self.vertices.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Simplex01 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SimplexRepr::deserialize(d)?;
        Simplex01::parse(repr.n, &repr.vertices).map_err(serde::de::Error::custom)
    }
}

impl Simplex01 {
    /// Builds a simplex from n+1 distinct vertices of the n-cube, in any order.
    pub fn new(n: usize, mut vertices: Vec<Vertex01>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n, "1..=63"));
        }
        if vertices.len() != n + 1 {
            return Err(Error::VertexCount { expected: n + 1, found: vertices.len() });
        }
        if let Some(v) = vertices.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(w[0].to_string()));
        }
        Ok(Self { n, vertices })
    }

    pub fn from_codes(n: usize, codes: &[u64]) -> Result<Self> {
        let vertices = codes
            .iter()
            .map(|&c| Vertex01::from_code(n, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, vertices)
    }

    pub fn parse<S: AsRef<str>>(n: usize, vertices: &[S]) -> Result<Self> {
        let vertices = vertices
            .iter()
            .map(|s| Vertex01::parse(n, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, vertices)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vertex01] {
        &self.vertices
    }

    pub fn codes(&self) -> Vec<u64> {
        self.vertices.iter().map(Vertex01::code).collect()
    }

    /// `det M(S)` for the canonical vertex order, where row `k` of `M` is
    /// `(1, x_1, .., x_n)` of vertex `k`.
    pub fn determinant(&self) -> BigInt {
        let rows: Vec<Vec<i128>> = self
            .vertices
            .iter()
            .map(|v| std::iter::once(1).chain(v.coords().map(i128::from)).collect())
            .collect();
        bareiss_det(rows)
    }

    pub fn volume(&self) -> BigRational {
        BigRational::new(self.determinant().abs(), factorial(self.n))
    }

    pub fn is_degenerate(&self) -> bool {
        self.determinant().is_zero()
    }

    pub fn column_profile(&self) -> ColumnProfile {
        ColumnProfile(
            (0..self.n)
                .map(|j| self.vertices.iter().filter(|v| v.coord(j) == 1).count())
                .collect(),
        )
    }

    pub fn folded_profile(&self) -> Result<FoldedProfile> {
        self.column_profile().fold()
    }

    /// `V(S) * sum_j alpha[i_j]`. The numeric mode follows the weight vector:
    /// exact weights give an exact result, analytic weights a float.
    pub fn weighted_volume(&self, weights: &WeightVector) -> Result<WeightedVolume> {
        if weights.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: weights.dim() });
        }
        let profile = self.column_profile();
        let volume = self.volume();
        if volume.is_zero() {
            return Ok(match weights.values() {
                Weights::Exact(_) => WeightedVolume::Exact(volume),
                Weights::Analytic(_) => WeightedVolume::Float(0.0),
            });
        }
        // non-degenerate, so every i_j lies in 1..=n
        Ok(match weights.values() {
            Weights::Exact(alpha) => {
                let sum: BigRational = profile.0.iter().map(|&i| &alpha[i - 1]).sum();
                WeightedVolume::Exact(volume * sum)
            }
            Weights::Analytic(alpha) => {
                let sum: f64 = profile.0.iter().map(|&i| alpha[i - 1]).sum();
                WeightedVolume::Float(crate::rational::to_f64(&volume) * sum)
            }
        })
    }

    /// Checks `det(M)^2 <= (n+1)^(1-n) * prod i_j * prod (n+1-i_j)` exactly.
    pub fn det_profile_check(&self) -> DetProfileReport {
        let n = self.n;
        let det = self.determinant();
        let det_squared = &det * &det;
        let profile = self.column_profile();
        let prod: BigInt = profile
            .0
            .iter()
            .map(|&i| BigInt::from(i) * BigInt::from(n + 1 - i))
            .product();
        let rhs = BigRational::new(prod, BigInt::from(n + 1).pow(n as u32 - 1));
        let slack = &rhs - BigRational::from_integer(det_squared.clone());
        DetProfileReport {
            holds: !slack.is_negative(),
            det_squared,
            rhs,
            slack,
        }
    }

    /// Applies `x_j -> x_{perm[j]}`: coordinate `j` of the image is coordinate
    /// `perm[j]` of the original.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: perm.len() });
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let code = perm.iter().fold(0u64, |acc, &p| (acc << 1) | u64::from(v.coord(p)));
                Vertex01::from_code(self.n, code)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.n, vertices)
    }

    /// Applies the reflection `x_axis -> 1 - x_axis` (0-based axis).
    pub fn reflect(&self, axis: usize) -> Result<Self> {
        if axis >= self.n {
            return Err(Error::AxisOutOfRange { axis: axis + 1, n: self.n });
        }
        let mask = 1u64 << (self.n - 1 - axis);
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex01::from_code(self.n, v.code ^ mask))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.n, vertices)
    }
}

impl fmt::Display for Simplex01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.vertices.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightedVolume {
    Exact(BigRational),
    /// Relative error of roughly `n` ulps of the summed weights.
    Float(f64),
}

impl WeightedVolume {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(r) => crate::rational::to_f64(r),
            Self::Float(x) => *x,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetProfileReport {
    pub holds: bool,
    pub det_squared: BigInt,
    pub rhs: BigRational,
    /// `rhs - det^2`.
    pub slack: BigRational,
}

/// Fraction-free (Bareiss) determinant. Runs in `i128` and restarts in
/// `BigInt` if an intermediate product overflows.
pub fn bareiss_det(rows: Vec<Vec<i128>>) -> BigInt {
    match bareiss_i128(rows.clone()) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        ),
    }
}

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let size = m.len();
    if size == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..size - 1 {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..size).find(|&r| m[r][k] != 0) else {
                return Some(0);
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[size - 1][size - 1])
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let size = m.len();
    if size == 0 {
        return BigInt::from(1);
    }
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..size).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[size - 1][size - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// `|det M|` for vertex codes of an n-cube, n <= 7, without allocating.
/// Hot path for enumeration.
pub(crate) fn abs_det_small(n: usize, codes: &[u64]) -> i64 {
    debug_assert!(n <= 7 && codes.len() == n + 1);
    let size = n + 1;
    let mut m = [[0i64; 8]; 8];
    for (k, &c) in codes.iter().enumerate() {
        m[k][0] = 1;
        for j in 0..n {
            m[k][j + 1] = ((c >> (n - 1 - j)) & 1) as i64;
        }
    }
    let mut prev = 1i64;
    for k in 0..size - 1 {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..size).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, r);
        }
        for i in k + 1..size {
            for j in k + 1..size {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    m[size - 1][size - 1].abs()
}
