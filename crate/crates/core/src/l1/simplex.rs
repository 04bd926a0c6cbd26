//! Bounded-variable primal simplex over exact rationals.
//!
//! Solves `min c·x  s.t.  A x >= r,  0 <= x <= u` with finite `u`. Rows get a
//! surplus column, rows with positive right-hand side an artificial column;
//! phase one drives the artificials to zero, then they are fixed at zero and
//! phase two optimizes the real costs. Bland's rule everywhere, so the
//! pivot sequence is deterministic and cannot cycle.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One `>=` row in sparse form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub costs: Vec<Rational>,
    pub upper: Vec<Rational>,
    pub rows: Vec<LpRow>,
}

/// Primal solution with dual evidence of optimality. For the dual
/// `max r·y - u·w  s.t.  Aᵀy - w <= c,  y, w >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpCertificate {
    pub primal: Vec<Rational>,
    /// One multiplier per row.
    pub row_duals: Vec<Rational>,
    /// One multiplier per upper bound.
    pub bound_duals: Vec<Rational>,
    pub objective: Rational,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpCertificate),
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    status: Vec<Status>,
    value: Vec<Rational>,
    /// `None` is +infinity.
    upper: Vec<Option<Rational>>,
    reduced: Vec<Rational>,
    pivots: usize,
}

impl Tableau {
    fn set_costs(&mut self, costs: &[Rational]) {
        let mut reduced = costs.to_vec();
        for (r, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for (j, t) in row.iter().enumerate() {
                if !t.is_zero() {
                    reduced[j] -= cb * t;
                }
            }
        }
        self.reduced = reduced;
    }

    fn entering(&self) -> Option<usize> {
        (0..self.status.len()).find(|&j| match self.status[j] {
            Status::Basic => false,
            Status::AtLower => {
                self.reduced[j].is_negative() && self.upper[j].as_ref().is_none_or(|u| u.is_positive())
            }
            Status::AtUpper => self.reduced[j].is_positive(),
        })
    }

    fn iterate(&mut self) -> Result<()> {
        while let Some(j) = self.entering() {
            let increasing = self.status[j] == Status::AtLower;
            // (step, leaving row, leaving goes to its upper bound)
            let mut best: Option<(Rational, usize, bool)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                let t = &row[j];
                if t.is_zero() {
                    continue;
                }
                let alpha = if increasing { t.clone() } else { -t };
                let k = self.basis[r];
                let candidate = if alpha.is_positive() {
                    Some(((&self.value[k]) / &alpha, false))
                } else {
                    self.upper[k].as_ref().map(|u| ((u - &self.value[k]) / -&alpha, true))
                };
                if let Some((step, to_upper)) = candidate {
                    let better = match &best {
                        None => true,
                        Some((s, br, _)) => step < *s || (step == *s && k < self.basis[*br]),
                    };
                    if better {
                        best = Some((step, r, to_upper));
                    }
                }
            }
            let flip = self.upper[j].clone();
            let take_flip = match (&flip, &best) {
                (Some(u), Some((s, _, _))) => u <= s,
                (Some(_), None) => true,
                (None, _) => false,
            };
            if take_flip {
                let step = flip.expect("finite bound");
                self.shift(j, increasing, &step);
                self.status[j] = if increasing { Status::AtUpper } else { Status::AtLower };
                continue;
            }
            let (step, r, to_upper) = best.ok_or_else(|| Error::Internal("unbounded LP".into()))?;
            self.shift(j, increasing, &step);
            let leaving = self.basis[r];
            self.value[leaving] = if to_upper {
                self.upper[leaving].clone().expect("finite bound")
            } else {
                Rational::zero()
            };
            self.status[leaving] = if to_upper { Status::AtUpper } else { Status::AtLower };
            self.pivot(r, j);
        }
        Ok(())
    }

    fn shift(&mut self, j: usize, increasing: bool, step: &Rational) {
        if step.is_zero() {
            return;
        }
        let delta = if increasing { step.clone() } else { -step };
        self.value[j] += &delta;
        for (r, row) in self.rows.iter().enumerate() {
            if !row[j].is_zero() {
                let k = self.basis[r];
                self.value[k] -= &row[j] * &delta;
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        for t in self.rows[r].iter_mut() {
            if !t.is_zero() {
                *t /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (t, pr) in row.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *t -= &f * pr;
                }
            }
        }
        let f = self.reduced[j].clone();
        if !f.is_zero() {
            for (t, pr) in self.reduced.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *t -= &f * pr;
                }
            }
        }
        self.status[j] = Status::Basic;
        self.basis[r] = j;
        self.pivots += 1;
    }
}

pub fn solve(problem: &LpProblem) -> Result<LpOutcome> {
    let n = problem.costs.len();
    if problem.upper.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: problem.upper.len() });
    }
    if let Some(row) = problem.rows.iter().find(|row| row.coeffs.iter().any(|(j, _)| *j >= n)) {
        let got = row.coeffs.iter().map(|(j, _)| j + 1).max().unwrap_or(0);
        return Err(Error::DimensionMismatch { expected: n, got });
    }
    if problem.upper.iter().any(|u| u.is_negative()) {
        return Err(Error::NegativeDatum("upper bound".into()));
    }
    let m = problem.rows.len();
    let artificial_rows: Vec<usize> = (0..m).filter(|&r| problem.rows[r].rhs.is_positive()).collect();
    let total = n + m + artificial_rows.len();
    let surplus = |r: usize| n + r;

    let mut rows = vec![vec![Rational::zero(); total]; m];
    let mut basis = vec![0; m];
    let mut status = vec![Status::AtLower; total];
    let mut value = vec![Rational::zero(); total];
    let mut upper: Vec<Option<Rational>> = problem.upper.iter().cloned().map(Some).collect();
    upper.extend(std::iter::repeat_n(None, m + artificial_rows.len()));

    let mut next_artificial = n + m;
    for (r, row) in problem.rows.iter().enumerate() {
        let positive = row.rhs.is_positive();
        // Row r reads  A_r x - s_r (+ a_r) = rhs; negate it when s_r is basic.
        let sign = if positive { Rational::from_integer(1.into()) } else { Rational::from_integer((-1).into()) };
        for (j, a) in &row.coeffs {
            rows[r][*j] += a * &sign;
        }
        rows[r][surplus(r)] = -sign.clone();
        let basic = if positive {
            rows[r][next_artificial] = Rational::from_integer(1.into());
            next_artificial += 1;
            next_artificial - 1
        } else {
            surplus(r)
        };
        basis[r] = basic;
        status[basic] = Status::Basic;
        value[basic] = &row.rhs * &sign;
    }

    let mut tableau = Tableau { rows, basis, status, value, upper, reduced: Vec::new(), pivots: 0 };

    if !artificial_rows.is_empty() {
        let mut phase1 = vec![Rational::zero(); total];
        for c in phase1.iter_mut().skip(n + m) {
            *c = Rational::from_integer(1.into());
        }
        tableau.set_costs(&phase1);
        tableau.iterate()?;
        let infeasibility: Rational = tableau.value[n + m..].iter().sum();
        if infeasibility.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        for j in n + m..total {
            tableau.upper[j] = Some(Rational::zero());
        }
    }

    let mut phase2 = problem.costs.clone();
    phase2.resize(total, Rational::zero());
    tableau.set_costs(&phase2);
    tableau.iterate()?;

    let primal = tableau.value[..n].to_vec();
    let row_duals = (0..m).map(|r| tableau.reduced[surplus(r)].clone()).collect();
    let bound_duals = tableau.reduced[..n]
        .iter()
        .map(|d| if d.is_negative() { -d } else { Rational::zero() })
        .collect();
    let objective = problem.costs.iter().zip(&primal).map(|(c, x)| c * x).sum();
    Ok(LpOutcome::Optimal(LpCertificate {
        primal,
        row_duals,
        bound_duals,
        objective,
        pivots: tableau.pivots,
    }))
}

/// Re-verifies a certificate from scratch: primal feasibility, dual
/// feasibility and equal objectives, all exactly.
pub fn check_certificate(problem: &LpProblem, cert: &LpCertificate) -> std::result::Result<(), String> {
    let n = problem.costs.len();
    if cert.primal.len() != n || cert.bound_duals.len() != n || cert.row_duals.len() != problem.rows.len() {
        return Err("certificate dimensions do not match the problem".into());
    }
    for (j, (x, u)) in cert.primal.iter().zip(&problem.upper).enumerate() {
        if x.is_negative() || x > u {
            return Err(format!("x[{j}] = {x} outside [0, {u}]"));
        }
    }
    for (r, row) in problem.rows.iter().enumerate() {
        let lhs: Rational = row.coeffs.iter().map(|(j, a)| a * &cert.primal[*j]).sum();
        if lhs < row.rhs {
            return Err(format!("row {r}: {lhs} < {}", row.rhs));
        }
    }
    if let Some(r) = cert.row_duals.iter().position(|y| y.is_negative()) {
        return Err(format!("row dual {r} is negative"));
    }
    if let Some(j) = cert.bound_duals.iter().position(|w| w.is_negative()) {
        return Err(format!("bound dual {j} is negative"));
    }
    let mut column = vec![Rational::zero(); n];
    for (row, y) in problem.rows.iter().zip(&cert.row_duals) {
        for (j, a) in &row.coeffs {
            column[*j] += a * y;
        }
    }
    for (j, (col, w)) in column.iter().zip(&cert.bound_duals).enumerate() {
        if col - w > problem.costs[j] {
            return Err(format!("dual constraint {j} violated"));
        }
    }
    let primal_obj: Rational = problem.costs.iter().zip(&cert.primal).map(|(c, x)| c * x).sum();
    let dual_obj: Rational = problem.rows.iter().zip(&cert.row_duals).map(|(row, y)| &row.rhs * y).sum::<Rational>()
        - problem.upper.iter().zip(&cert.bound_duals).map(|(u, w)| u * w).sum::<Rational>();
    if primal_obj != dual_obj {
        return Err(format!("primal objective {primal_obj} != dual objective {dual_obj}"));
    }
    if primal_obj != cert.objective {
        return Err(format!("stated objective {} != {primal_obj}", cert.objective));
    }
    Ok(())
}
