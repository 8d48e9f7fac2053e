//! Dense two-phase simplex method over exact rationals.
//!
//! Solves `min c.x  s.t.  A x = b, x >= 0`. Pivoting follows Bland's rule
//! (lowest-index entering column, lowest-index leaving basic variable among
//! ratio ties), so the method terminates on degenerate problems and the pivot
//! sequence is fully deterministic.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct StandardForm {
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    pub x: Vec<BigRational>,
    pub objective: BigRational,
    /// Simplex multipliers `pi = c_B B^-1`; they satisfy `A^T pi <= c` and
    /// `b.pi = objective`.
    pub duals: Vec<BigRational>,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Optimal(Optimum),
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    /// Reduced costs, with the negated objective value in the last slot.
    cost: Vec<BigRational>,
    basis: Vec<usize>,
    /// Columns at or beyond this index may never enter.
    enterable: usize,
    pivots: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len()
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let w = self.width();
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v = &*v / &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for j in 0..w {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &f * &pivot_row[j];
                }
            }
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for j in 0..w {
                if !pivot_row[j].is_zero() {
                    self.cost[j] = &self.cost[j] - &f * &pivot_row[j];
                }
            }
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    /// Runs Bland's rule to optimality. Returns false if unbounded.
    fn optimize(&mut self) -> bool {
        let rhs = self.width() - 1;
        loop {
            let Some(col) = (0..self.enterable).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }

    fn set_cost(&mut self, costs: &[BigRational]) {
        let w = self.width();
        self.cost = costs.to_vec();
        self.cost.resize(w, BigRational::zero());
        for (i, &bcol) in self.basis.iter().enumerate() {
            let f = self.cost[bcol].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..w {
                if !self.rows[i][j].is_zero() {
                    self.cost[j] = &self.cost[j] - &f * &self.rows[i][j];
                }
            }
        }
    }
}

pub fn solve(p: &StandardForm) -> Outcome {
    let m = p.b.len();
    let nv = p.c.len();
    debug_assert!(p.a.len() == m && p.a.iter().all(|r| r.len() == nv));
    let width = nv + m + 1;

    // rows negated so that b >= 0; artificial k is column nv + k
    let mut signs = vec![false; m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let neg = p.b[i].is_negative();
        signs[i] = neg;
        let mut row: Vec<BigRational> = p.a[i].iter().map(|v| if neg { -v } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        row.push(if neg { -&p.b[i] } else { p.b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        cost: vec![BigRational::zero(); width],
        basis: (nv..nv + m).collect(),
        enterable: nv,
        pivots: 0,
    };

    let mut phase1 = vec![BigRational::zero(); nv];
    phase1.extend((0..m).map(|_| BigRational::one()));
    t.set_cost(&phase1);
    t.optimize();
    if !t.cost[width - 1].is_zero() {
        return Outcome::Infeasible;
    }
    // Drive zero-level artificials out of the basis where possible; rows that
    // keep one are redundant and stay inert.
    for r in 0..m {
        if t.basis[r] >= nv {
            if let Some(col) = (0..nv).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, col);
            }
        }
    }

    t.set_cost(&p.c);
    if !t.optimize() {
        return Outcome::Unbounded;
    }

    let mut x = vec![BigRational::zero(); nv];
    for (i, &bcol) in t.basis.iter().enumerate() {
        if bcol < nv {
            x[bcol] = t.rows[i][width - 1].clone();
        }
    }
    // reduced cost of artificial k is -pi'_k for the sign-adjusted system
    let duals = (0..m)
        .map(|k| {
            let d = -&t.cost[nv + k];
            if signs[k] {
                -d
            } else {
                d
            }
        })
        .collect();
    Outcome::Optimal(Optimum {
        objective: -&t.cost[width - 1],
        x,
        duals,
        pivots: t.pivots,
    })
}
