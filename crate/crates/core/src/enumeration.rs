//! Exhaustive enumeration of the 0/1-simplices of the n-cube.
//!
//! Every (n+1)-subset of the `2^n` cube vertices is visited exactly once.
//! Non-degenerate subsets are grouped by `(volume, folded profile)`, the only
//! data the weight program depends on.

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{abs_det_small, FoldedProfile, Simplex01};
use crate::rational::{binomial, factorial};
use crate::{Error, Result};

pub const MAX_ENUM_DIM: usize = 6;

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerationOptions {
    /// Worker threads; 0 means rayon's default.
    pub threads: usize,
    /// Required for n = 6.
    pub long_running: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintClass {
    #[serde(with = "crate::rational::serde_pq")]
    pub volume: BigRational,
    pub folded: FoldedProfile,
    pub count: u64,
    /// The lexicographically first simplex of the class.
    pub witness: Simplex01,
}

impl ConstraintClass {
    pub fn key(&self) -> (BigRational, FoldedProfile) {
        (self.volume.clone(), self.folded.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationSummary {
    pub n: usize,
    pub total_subsets: u64,
    pub degenerate: u64,
    pub nondegenerate: u64,
    pub classes: Vec<ConstraintClass>,
    pub rho: u64,
    pub max_volume: BigRational,
}

/// On-disk class list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFile {
    pub n: usize,
    pub classes: Vec<ConstraintClass>,
    pub rho: u64,
}

impl ClassFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: ClassFile = serde_json::from_str(&text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn validate(&self) -> Result<()> {
        for c in &self.classes {
            if c.witness.dim() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, found: c.witness.dim() });
            }
            if c.witness.volume() != c.volume || c.witness.folded_profile()? != c.folded {
                return Err(Error::Internal(format!(
                    "class witness {} does not match its key",
                    c.witness
                )));
            }
        }
        Ok(())
    }
}

impl From<&EnumerationSummary> for ClassFile {
    fn from(s: &EnumerationSummary) -> Self {
        Self { n: s.n, classes: s.classes.clone(), rho: s.rho }
    }
}

/// Advances `codes` (strictly increasing, each `< total`) to the next subset
/// in lexicographic order. Returns false after the last one.
pub fn next_combination(codes: &mut [u64], total: u64) -> bool {
    let k = codes.len();
    for pos in (0..k).rev() {
        let limit = total - (k - pos) as u64;
        if codes[pos] < limit {
            codes[pos] += 1;
            for j in pos + 1..k {
                codes[j] = codes[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn check_range(n: usize, opts: &EnumerationOptions) -> Result<()> {
    if n == 0 || n > MAX_ENUM_DIM {
        return Err(Error::DimensionOutOfRange(n, "1..=6"));
    }
    if n == MAX_ENUM_DIM && !opts.long_running {
        return Err(Error::LongRunningRequired);
    }
    Ok(())
}

fn with_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Folds `visit` over every (n+1)-subset of cube vertices, in parallel.
///
/// The subset space is split by smallest vertex; each part is scanned in
/// lexicographic order and the partial states are combined with `merge`, so
/// the result is schedule-independent whenever `merge` is associative and
/// commutative.
pub fn par_scan<T, I, V, M>(n: usize, opts: &EnumerationOptions, identity: I, visit: V, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    V: Fn(&mut T, &[u64]) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    check_range(n, opts)?;
    let total = 1u64 << n;
    let k = n + 1;
    let result = with_pool(opts.threads, || {
        (0..=total - k as u64)
            .into_par_iter()
            .map(|first| {
                let mut state = identity();
                let mut codes: Vec<u64> = (0..k as u64).map(|j| first + j).collect();
                let mut tail_total_ok = true;
                while tail_total_ok {
                    visit(&mut state, &codes);
                    tail_total_ok = next_combination(&mut codes[1..], total);
                }
                state
            })
            .reduce(&identity, &merge)
    });
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PackedKey {
    abs_det: i64,
    /// Multiplicity of each folded value `v` in bits `4v..4v+4`.
    folded_counts: u64,
}

#[derive(Clone, Copy, Debug)]
struct PackedClass {
    count: u64,
    witness: [u64; 8],
}

#[derive(Default)]
struct ScanState {
    degenerate: u64,
    nondegenerate: u64,
    classes: HashMap<PackedKey, PackedClass>,
}

fn merge_states(mut a: ScanState, b: ScanState) -> ScanState {
    a.degenerate += b.degenerate;
    a.nondegenerate += b.nondegenerate;
    for (key, cls) in b.classes {
        a.classes
            .entry(key)
            .and_modify(|e| {
                e.count += cls.count;
                if cls.witness < e.witness {
                    e.witness = cls.witness;
                }
            })
            .or_insert(cls);
    }
    a
}

fn folded_counts(n: usize, codes: &[u64]) -> u64 {
    let mut packed = 0u64;
    for j in 0..n {
        let ones = codes.iter().filter(|&&c| (c >> (n - 1 - j)) & 1 == 1).count();
        let v = ones.min(n + 1 - ones);
        packed += 1 << (4 * v);
    }
    packed
}

fn unpack_folded(packed: u64) -> FoldedProfile {
    let mut out = Vec::new();
    for v in 0..16 {
        let mult = (packed >> (4 * v)) & 0xF;
        out.extend(std::iter::repeat_n(v as usize, mult as usize));
    }
    FoldedProfile(out)
}

/// Scans all (n+1)-subsets and aggregates the non-degenerate ones into
/// constraint classes, sorted by volume descending then folded profile.
pub fn enumerate_classes(n: usize, opts: &EnumerationOptions) -> Result<EnumerationSummary> {
    let state = par_scan(
        n,
        opts,
        ScanState::default,
        |st, codes| {
            let det = abs_det_small(n, codes);
            if det == 0 {
                st.degenerate += 1;
                return;
            }
            st.nondegenerate += 1;
            let key = PackedKey { abs_det: det, folded_counts: folded_counts(n, codes) };
            st.classes
                .entry(key)
                .and_modify(|e| e.count += 1)
                .or_insert_with(|| {
                    let mut witness = [u64::MAX; 8];
                    witness[..codes.len()].copy_from_slice(codes);
                    PackedClass { count: 1, witness }
                });
        },
        merge_states,
    )?;

    let nfact = factorial(n);
    let mut classes = state
        .classes
        .into_iter()
        .map(|(key, cls)| {
            let witness = Simplex01::from_codes(n, &cls.witness[..n + 1])?;
            Ok(ConstraintClass {
                volume: BigRational::new(BigInt::from(key.abs_det), nfact.clone()),
                folded: unpack_folded(key.folded_counts),
                count: cls.count,
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    classes.sort_by(|a, b| b.volume.cmp(&a.volume).then_with(|| a.folded.cmp(&b.folded)));

    let rho = classes
        .iter()
        .map(|c| (&c.volume * BigRational::from_integer(nfact.clone())).to_integer())
        .max()
        .map(|d| u64::try_from(d).expect("determinant fits in u64"))
        .unwrap_or(0);
    let total_subsets = u64::try_from(binomial(1 << n, n + 1)).expect("subset count fits in u64");
    if state.degenerate + state.nondegenerate != total_subsets {
        return Err(Error::Internal("subset scan did not cover the whole space".into()));
    }
    Ok(EnumerationSummary {
        n,
        total_subsets,
        degenerate: state.degenerate,
        nondegenerate: state.nondegenerate,
        max_volume: BigRational::new(BigInt::from(rho), nfact),
        classes,
        rho,
    })
}

/// Maximal `|det M(S)|` over all 0/1-simplices of the n-cube, which equals the
/// maximal determinant of an n x n 0/1-matrix.
pub fn rho(n: usize, opts: &EnumerationOptions) -> Result<u64> {
    let best = par_scan(
        n,
        opts,
        || 0i64,
        |best, codes| *best = (*best).max(abs_det_small(n, codes)),
        i64::max,
    )?;
    Ok(best as u64)
}

/// The trivial bound `dis(n) >= n! / rho(n)`.
pub fn euclidean_lower_bound_exact(n: usize, opts: &EnumerationOptions) -> Result<BigRational> {
    let r = rho(n, opts)?;
    Ok(BigRational::new(factorial(n), BigInt::from(r)))
}
