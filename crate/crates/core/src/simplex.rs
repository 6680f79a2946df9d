//! Dense tableau simplex for `max cᵀx  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! The origin is always feasible, so only phase two is needed. Pivoting uses
//! Bland's rule. Several objectives can be optimized lexicographically: after
//! each stage, nonbasic columns with strictly negative reduced cost are frozen
//! at zero, which confines later stages to the current optimal face.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub(crate) struct DenseLp<T> {
    num_vars: usize,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
}

#[derive(Clone, Debug)]
pub(crate) struct LpSolution<T> {
    pub x: Vec<T>,
}

impl<T: Scalar> DenseLp<T> {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn add_le(&mut self, coeffs: Vec<T>, rhs: T) {
        assert_eq!(coeffs.len(), self.num_vars);
        assert!(rhs >= T::zero(), "phase-two simplex needs b >= 0");
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    pub fn solve_lexicographic(&self, objectives: &[Vec<T>]) -> Result<LpSolution<T>> {
        let n = self.num_vars;
        let m = self.rows.len();
        let width = n + m;
        let eps = T::epsilon() * T::lit(1e4);

        let mut tab: Vec<Vec<T>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.resize(width + 1, T::zero());
                r[n + i] = T::one();
                r[width] = self.rhs[i];
                r
            })
            .collect();
        let mut basis: Vec<usize> = (n..n + m).collect();
        let mut is_basic = vec![false; width];
        for &b in &basis {
            is_basic[b] = true;
        }
        let mut allowed = vec![true; width];
        let max_pivots = 10_000 + 50 * width;
        let mut pivots = 0usize;

        for c in objectives {
            assert_eq!(c.len(), n);
            let cost = |j: usize| if j < n { c[j] } else { T::zero() };
            loop {
                let reduced = |tab: &Vec<Vec<T>>, basis: &[usize], j: usize| {
                    let mut d = cost(j);
                    for (i, &b) in basis.iter().enumerate() {
                        d -= cost(b) * tab[i][j];
                    }
                    d
                };
                let entering = (0..width).find(|&j| allowed[j] && !is_basic[j] && reduced(&tab, &basis, j) > eps);
                let Some(j) = entering else {
                    for jj in 0..width {
                        if !is_basic[jj] && reduced(&tab, &basis, jj) < -eps {
                            allowed[jj] = false;
                        }
                    }
                    break;
                };

                let mut leave: Option<(usize, T)> = None;
                for i in 0..m {
                    let a = tab[i][j];
                    if a > eps {
                        let ratio = tab[i][width] / a;
                        leave = match leave {
                            None => Some((i, ratio)),
                            Some((li, lr)) => {
                                let tie = (ratio - lr).abs() <= eps * (T::one() + lr.abs());
                                if ratio < lr && !tie || tie && basis[i] < basis[li] {
                                    Some((i, ratio))
                                } else {
                                    Some((li, lr))
                                }
                            }
                        };
                    }
                }
                let Some((r, _)) = leave else {
                    return Err(Error::Solver(format!("unbounded direction on column {j}")));
                };

                let piv = tab[r][j];
                for v in tab[r].iter_mut() {
                    *v /= piv;
                }
                let pivot_row = tab[r].clone();
                for (i, row) in tab.iter_mut().enumerate() {
                    if i == r {
                        continue;
                    }
                    let f = row[j];
                    if f != T::zero() {
                        for (v, &p) in row.iter_mut().zip(&pivot_row) {
                            *v -= f * p;
                        }
                    }
                }
                is_basic[basis[r]] = false;
                is_basic[j] = true;
                basis[r] = j;

                pivots += 1;
                if pivots > max_pivots {
                    return Err(Error::Solver(format!(
                        "no convergence after {pivots} pivots ({m} constraints, {n} variables)"
                    )));
                }
            }
        }

        let mut x = vec![T::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                x[b] = tab[i][width].max(T::zero());
            }
        }
        Ok(LpSolution { x })
    }
}
