//! Brute-force oracles for the enumeration, the maximal determinant and the
//! weight program. Nothing here goes through the Bareiss or simplex code.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;
use simplexity::enumeration::{enumerate_classes, rho, ClassFile, EnumerationOptions};
use simplexity::geometry::FoldedProfile;
use simplexity::lp::{build_lp, build_unfolded_lp, solve_lp, WeightVector};
use simplexity::rational::{binomial, factorial};
use simplexity::Simplex01;

fn opts() -> EnumerationOptions {
    EnumerationOptions::default()
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// Cofactor expansion along the first row.
fn laplace_det(m: &[Vec<i64>]) -> i64 {
    let size = m.len();
    if size == 1 {
        return m[0][0];
    }
    let mut det = 0;
    for col in 0..size {
        if m[0][col] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| *v).collect())
            .collect();
        let sign = if col % 2 == 0 { 1 } else { -1 };
        det += sign * m[0][col] * laplace_det(&minor);
    }
    det
}

fn subsets(universe: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, universe: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..universe {
            cur.push(v);
            rec(v + 1, universe, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, universe, k, &mut Vec::new(), &mut out);
    out
}

fn bits(n: usize, code: usize) -> Vec<i64> {
    (0..n).map(|j| ((code >> (n - 1 - j)) & 1) as i64).collect()
}

/// Maximal |det| over all n x n 0/1-matrices. Reordering rows only flips the
/// sign and repeated rows give zero, so strictly increasing row codes suffice.
fn rho_oracle(n: usize) -> i64 {
    subsets(1 << n, n)
        .iter()
        .map(|rows| {
            let m: Vec<Vec<i64>> = rows.iter().map(|&r| bits(n, r)).collect();
            laplace_det(&m).abs()
        })
        .max()
        .unwrap()
}

/// Every non-degenerate simplex: (|det M|, column profile).
fn all_simplices(n: usize) -> Vec<(i64, Vec<usize>)> {
    subsets(1 << n, n + 1)
        .iter()
        .filter_map(|verts| {
            let m: Vec<Vec<i64>> = verts
                .iter()
                .map(|&v| std::iter::once(1).chain(bits(n, v)).collect())
                .collect();
            let det = laplace_det(&m).abs();
            let profile = (0..n)
                .map(|j| verts.iter().filter(|&&v| (v >> (n - 1 - j)) & 1 == 1).count())
                .collect();
            (det != 0).then_some((det, profile))
        })
        .collect()
}

#[test]
fn rho_matches_matrix_brute_force() {
    let expected = [1, 1, 2, 3, 5];
    for n in 1..=5 {
        let oracle = rho_oracle(n);
        assert_eq!(oracle, expected[n - 1], "oracle rho({n})");
        assert_eq!(rho(n, &opts()).unwrap() as i64, oracle, "rho({n})");
    }
}

#[test]
fn cube_class_breakdown_matches_brute_force() {
    let mut oracle: BTreeMap<(BigRational, Vec<usize>), u64> = BTreeMap::new();
    let simplices = all_simplices(3);
    assert_eq!(simplices.len(), 58);
    for (det, profile) in simplices {
        let mut folded: Vec<usize> = profile.iter().map(|&i| i.min(4 - i)).collect();
        folded.sort();
        *oracle.entry((q(det, 6), folded)).or_default() += 1;
    }
    let summary = enumerate_classes(3, &opts()).unwrap();
    assert_eq!(summary.nondegenerate, 58);
    assert_eq!(summary.degenerate, 12);
    let got: BTreeMap<(BigRational, Vec<usize>), u64> = summary
        .classes
        .iter()
        .map(|c| ((c.volume.clone(), c.folded.0.clone()), c.count))
        .collect();
    assert_eq!(got, oracle);
    // 8 corners, 2 central tetrahedra, 48 with profile a permutation of (1,2,3)
    assert_eq!(got[&(q(1, 3), vec![2, 2, 2])], 2);
    assert_eq!(got[&(q(1, 6), vec![1, 1, 1])], 8);
}

#[test]
fn summary_invariants() {
    for n in 1..=5 {
        let s = enumerate_classes(n, &opts()).unwrap();
        assert_eq!(BigInt::from(s.total_subsets), binomial(1 << n, n + 1));
        assert_eq!(s.degenerate + s.nondegenerate, s.total_subsets);
        assert_eq!(s.classes.iter().map(|c| c.count).sum::<u64>(), s.nondegenerate);
        assert_eq!(s.max_volume, BigRational::new(s.rho.into(), factorial(n)));
        let mut keys: Vec<_> = s.classes.iter().map(|c| c.key()).collect();
        keys.dedup();
        assert_eq!(keys.len(), s.classes.len());
        for w in s.classes.windows(2) {
            assert!(w[0].volume > w[1].volume || (w[0].volume == w[1].volume && w[0].folded < w[1].folded));
        }
        for c in &s.classes {
            assert_eq!(c.witness.volume(), c.volume);
            assert_eq!(c.witness.folded_profile().unwrap(), c.folded);
        }
    }
}

#[test]
fn enumeration_is_independent_of_thread_budget() {
    let reference = ClassFile::from(&enumerate_classes(5, &EnumerationOptions { threads: 1, long_running: false }).unwrap())
        .to_json()
        .unwrap();
    for threads in [2, 3, 8] {
        let s = enumerate_classes(5, &EnumerationOptions { threads, long_running: false }).unwrap();
        assert_eq!(ClassFile::from(&s).to_json().unwrap(), reference, "threads = {threads}");
    }
}

#[test]
fn det_profile_inequality_exhaustive_up_to_four() {
    for n in 1..=4 {
        for verts in subsets(1 << n, n + 1) {
            let codes: Vec<u64> = verts.iter().map(|&v| v as u64).collect();
            let s = Simplex01::from_codes(n, &codes).unwrap();
            let r = s.det_profile_check();
            assert!(r.holds, "{s}: det^2 = {} > {}", r.det_squared, r.rhs);
        }
    }
}

/// Minimises `g(x) = max_c (p_c + s_c x)` over the line by checking every
/// pairwise intersection of the constraint lines.
fn min_max_of_lines(lines: &[(BigRational, BigRational)]) -> BigRational {
    let unique: std::collections::BTreeSet<_> = lines.iter().cloned().collect();
    let lines: Vec<_> = unique.into_iter().collect();
    let eval = |x: &BigRational| lines.iter().map(|(p, s)| p + s * x).max().unwrap();
    assert!(lines.iter().any(|(_, s)| s.is_positive()) && lines.iter().any(|(_, s)| s.is_negative()));
    let mut best: Option<BigRational> = None;
    for (i, (p1, s1)) in lines.iter().enumerate() {
        for (p2, s2) in &lines[i + 1..] {
            if s1 == s2 {
                continue;
            }
            let x = (p2 - p1) / (s1 - s2);
            let g = eval(&x);
            if best.as_ref().is_none_or(|b| g < *b) {
                best = Some(g);
            }
        }
    }
    best.unwrap()
}

/// LP optimum for n = 3 or 4, where symmetric weights have one free parameter
/// `t = alpha_1`: n = 3 has `alpha_2 = 1 - 2t`, n = 4 has `alpha_2 = 1/2 - t`.
fn lp_oracle(n: usize) -> BigRational {
    let nfact = factorial(n);
    let lines: Vec<(BigRational, BigRational)> = all_simplices(n)
        .into_iter()
        .map(|(det, profile)| {
            let vol = BigRational::new(det.into(), nfact.clone());
            let outer = profile.iter().filter(|&&i| i == 1 || i == n).count() as i64;
            let inner = profile.len() as i64 - outer;
            // sum_j alpha_{i_j} = outer * t + inner * alpha_2(t)
            let (p, s) = match n {
                3 => (BigRational::from_integer(inner.into()), BigRational::from_integer((outer - 2 * inner).into())),
                4 => (q(inner, 2), BigRational::from_integer((outer - inner).into())),
                _ => unreachable!(),
            };
            (&vol * p, &vol * s)
        })
        .collect();
    min_max_of_lines(&lines)
}

#[test]
fn lp_agrees_with_line_oracle() {
    for (n, expected_bound) in [(3, 5), (4, 16)] {
        let g = lp_oracle(n);
        assert_eq!(g.recip(), BigRational::from_integer(expected_bound.into()), "oracle n = {n}");
        let classes = enumerate_classes(n, &opts()).unwrap().classes;
        let sol = solve_lp(&build_lp(&classes, n).unwrap()).unwrap();
        assert_eq!(sol.g_star, g, "n = {n}");
    }
}

#[test]
fn lp_certificate_and_anchors() {
    for n in 1..=5 {
        let s = enumerate_classes(n, &opts()).unwrap();
        let sol = solve_lp(&build_lp(&s.classes, n).unwrap()).unwrap();
        // optimality certificate through the weighted-volume route
        let max = s
            .classes
            .iter()
            .map(|c| match c.witness.weighted_volume(&sol.alpha_star).unwrap() {
                simplexity::geometry::WeightedVolume::Exact(v) => v,
                _ => unreachable!(),
            })
            .max()
            .unwrap();
        assert_eq!(max, sol.g_star, "n = {n}");
        // the uniform vector is feasible with g = max volume
        let uniform = WeightVector::exact(vec![q(1, n as i64); n]).unwrap();
        let g_uniform = s
            .classes
            .iter()
            .map(|c| c.witness.weighted_volume(&uniform).unwrap().to_f64())
            .fold(0.0, f64::max);
        assert!((g_uniform - simplexity::rational::to_f64(&s.max_volume)).abs() < 1e-15);
        assert!(sol.g_star <= s.max_volume);
        assert!(sol.bound >= BigRational::new(factorial(n), s.rho.into()));
        // folded and unfolded variables give the same optimum
        let unfolded = solve_lp(&build_unfolded_lp(&s.classes, n).unwrap()).unwrap();
        assert_eq!(unfolded.g_star, sol.g_star, "n = {n}");
    }
}

#[test]
fn lp_scales_with_volumes() {
    for n in [2, 3] {
        let classes = enumerate_classes(n, &opts()).unwrap().classes;
        let p = build_lp(&classes, n).unwrap();
        let base = solve_lp(&p).unwrap();
        for lambda in [q(3, 1), q(2, 7)] {
            let scaled = solve_lp(&p.scaled(&lambda)).unwrap();
            assert_eq!(scaled.g_star, &base.g_star * &lambda);
            assert_eq!(scaled.bound, &base.bound / &lambda);
        }
    }
}

#[test]
fn reported_lp_values() {
    let expected = [(1, 1), (2, 2), (3, 5), (4, 16), (5, 60)];
    for (n, bound) in expected {
        let classes = enumerate_classes(n, &opts()).unwrap().classes;
        let sol = solve_lp(&build_lp(&classes, n).unwrap()).unwrap();
        assert_eq!(sol.bound, BigRational::from_integer(bound.into()), "n = {n}");
        assert!(!sol.tight_classes.is_empty());
    }
}

#[test]
fn square_lp_is_pinned_by_one_class() {
    let classes = enumerate_classes(2, &opts()).unwrap().classes;
    let sol = solve_lp(&build_lp(&classes, 2).unwrap()).unwrap();
    assert_eq!(sol.tight_classes.len(), 1);
    assert_eq!(sol.tight_classes[0].folded, FoldedProfile(vec![1, 1]));
    assert_eq!(sol.g_star, q(1, 2));
    assert_eq!(sol.bound, q(2, 1));
}

fn arb_symmetry(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<bool>)> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_images_of_witnesses_stay_in_their_class((perm, flips) in arb_symmetry(4)) {
        let s = enumerate_classes(4, &opts()).unwrap();
        let keys: std::collections::HashSet<_> = s.classes.iter().map(|c| c.key()).collect();
        for c in &s.classes {
            let mut image = c.witness.permute_coordinates(&perm).unwrap();
            for (axis, &f) in flips.iter().enumerate() {
                if f {
                    image = image.reflect(axis).unwrap();
                }
            }
            let key = (image.volume(), image.folded_profile().unwrap());
            prop_assert!(keys.contains(&key));
            prop_assert_eq!(key, c.key());
        }
    }
}
