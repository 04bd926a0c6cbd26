//! Brute-force reference solvers. They share only [`is_feasible`] and the
//! instance data with the production solvers; distances, budgets and
//! selections are recomputed here from scratch.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::{is_feasible, ModificationPlan, NormalizedInstance, Objective};
use crate::rational::{frac, Rational};
use crate::tree::Tree;

pub const MAXIAN_VERTEX_LIMIT: usize = 50;
pub const L1_GRID_LIMIT: u64 = 1_000_000;
pub const HAMMING_EDGE_LIMIT: usize = 20;

/// d(u, v) by a depth-first walk from `u` until `v` is reached.
fn walk_distance(tree: &Tree, u: usize, v: usize) -> Rational {
    let mut stack = vec![(u, usize::MAX, Rational::zero())];
    while let Some((x, from, d)) = stack.pop() {
        if x == v {
            return d;
        }
        for &(y, e) in tree.neighbors(x) {
            if y != from {
                stack.push((y, x, &d + &tree.lengths()[e]));
            }
        }
    }
    unreachable!("trees are connected")
}

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::with_capacity(p), &mut out);
    out
}

/// F(X) for every vertex set of size `p`, in lexicographic order.
pub fn maxian_table(tree: &Tree, p: usize) -> Result<Vec<(Vec<usize>, Rational)>> {
    let n = tree.vertex_count();
    if n > MAXIAN_VERTEX_LIMIT {
        return Err(Error::SizeLimitExceeded { size: n, limit: MAXIAN_VERTEX_LIMIT });
    }
    if p == 0 || p > 3 || p > n {
        return Err(Error::SizeLimitExceeded { size: p, limit: 3.min(n) });
    }
    let dist: Vec<Vec<Rational>> =
        (0..n).map(|u| (0..n).map(|v| walk_distance(tree, u, v)).collect()).collect();
    Ok(subsets(n, p)
        .into_iter()
        .map(|set| {
            let value = (0..n)
                .map(|i| {
                    let far = set.iter().map(|&x| dist[i][x].clone()).max().expect("p >= 1");
                    &tree.weights()[i] * far
                })
                .sum();
            (set, value)
        })
        .collect())
}

/// Exhaustive p-maxian for `p <= 3`, first maximizer in lexicographic order.
pub fn oracle_maxian(tree: &Tree, p: usize) -> Result<(Vec<usize>, Rational)> {
    let table = maxian_table(tree, p)?;
    let mut best = table[0].clone();
    for entry in table.into_iter().skip(1) {
        if entry.1 > best.1 {
            best = entry;
        }
    }
    Ok(best)
}

fn budget_plan(norm: &NormalizedInstance, budget: &Rational) -> ModificationPlan {
    ModificationPlan {
        amounts: norm
            .costs
            .iter()
            .zip(&norm.bounds)
            .map(|(c, ub)| {
                if c.is_zero() {
                    ub.clone()
                } else {
                    (budget / c).min(ub.clone())
                }
            })
            .collect(),
    }
}

/// Chebyshev optimum by bisection on the budget down to width 2^-40, then
/// snapped to the exact value: on each stretch of the final window between
/// consecutive `c_e x̄_e` values every row is affine in the budget, and the
/// first stretch whose row crossings are all inside it gives the answer.
pub fn oracle_chebyshev(norm: &NormalizedInstance) -> Result<Rational> {
    let feasible = |b: &Rational| is_feasible(norm, &budget_plan(norm, b));
    if feasible(&Rational::zero()) {
        return Ok(Rational::zero());
    }
    let top = norm.costs.iter().zip(&norm.bounds).map(|(c, ub)| c * ub).max().unwrap_or_default();
    if !feasible(&top) {
        return Err(Error::Infeasible { violations: norm.violated_rows(&budget_plan(norm, &top)) });
    }
    let (mut lo, mut hi) = (Rational::zero(), top);
    let width = frac(1, 1 << 40);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / frac(2, 1);
        if feasible(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let mut cuts: Vec<Rational> = norm
        .costs
        .iter()
        .zip(&norm.bounds)
        .map(|(c, ub)| c * ub)
        .filter(|v| *v > lo && *v < hi)
        .collect();
    cuts.sort();
    cuts.dedup();
    let mut stretches = Vec::new();
    let mut start = lo.clone();
    for cut in cuts {
        stretches.push((start, cut.clone()));
        start = cut;
    }
    stretches.push((start, hi.clone()));

    let supports: Vec<Vec<usize>> = norm.rows.iter().map(|r| norm.support(r)).collect();
    for (s0, s1) in stretches {
        let mut candidate = s0.clone();
        let mut blocked = false;
        for (row, support) in norm.rows.iter().zip(&supports) {
            let mut fixed = Rational::zero();
            let mut rate = Rational::zero();
            for &e in support {
                let cap = &norm.costs[e] * &norm.bounds[e];
                if cap <= s0 {
                    fixed += &norm.bounds[e];
                } else {
                    rate += norm.costs[e].recip();
                }
            }
            let need = &row.rhs - fixed;
            if need <= &s0 * &rate {
                continue;
            }
            if rate.is_zero() {
                blocked = true;
                break;
            }
            candidate = candidate.max(need / rate);
        }
        if !blocked && candidate <= s1 && feasible(&candidate) {
            return Ok(candidate);
        }
    }
    Err(Error::Internal("bisection window holds no exact threshold".into()))
}

/// Minimum l1 cost over all integer plans; `None` when no integer plan is
/// feasible. Requires integer bounds.
pub fn oracle_l1_integer(norm: &NormalizedInstance) -> Result<Option<Rational>> {
    let mut ubs = Vec::with_capacity(norm.edge_count());
    let mut grid: u64 = 1;
    for ub in &norm.bounds {
        if !ub.is_integer() {
            return Err(Error::Internal("integer oracle needs integer bounds".into()));
        }
        let u: u64 = ub.to_integer().try_into().map_err(|_| Error::SizeLimitExceeded {
            size: usize::MAX,
            limit: L1_GRID_LIMIT as usize,
        })?;
        grid = grid.saturating_mul(u + 1);
        ubs.push(u);
    }
    if grid > L1_GRID_LIMIT {
        return Err(Error::SizeLimitExceeded { size: grid as usize, limit: L1_GRID_LIMIT as usize });
    }
    let mut x = vec![0u64; ubs.len()];
    let mut best: Option<Rational> = None;
    loop {
        let plan = ModificationPlan { amounts: x.iter().map(|&v| frac(v as i64, 1)).collect() };
        if is_feasible(norm, &plan) {
            let cost: Rational = norm.costs.iter().zip(&plan.amounts).map(|(c, v)| c * v).sum();
            if best.as_ref().is_none_or(|b| cost < *b) {
                best = Some(cost);
            }
        }
        // odometer step
        let mut i = 0;
        loop {
            if i == x.len() {
                return Ok(best);
            }
            if x[i] < ubs[i] {
                x[i] += 1;
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Bottleneck Hamming optimum: thresholds tried in ascending order.
pub fn oracle_hamming_bottleneck(norm: &NormalizedInstance) -> Result<Rational> {
    let m = norm.edge_count();
    if m > HAMMING_EDGE_LIMIT {
        return Err(Error::SizeLimitExceeded { size: m, limit: HAMMING_EDGE_LIMIT });
    }
    let mut thresholds: Vec<Rational> = std::iter::once(Rational::zero()).chain(norm.costs.iter().cloned()).collect();
    thresholds.sort();
    thresholds.dedup();
    for t in &thresholds {
        let plan = ModificationPlan {
            amounts: (0..m)
                .map(|e| if norm.costs[e] <= *t { norm.bounds[e].clone() } else { Rational::zero() })
                .collect(),
        };
        if is_feasible(norm, &plan) {
            return Ok(Objective::HammingBottleneck.cost(&norm.costs, &plan.amounts));
        }
    }
    Err(Error::Infeasible { violations: norm.violated_rows(&ModificationPlan { amounts: norm.bounds.clone() }) })
}

/// Weighted-sum Hamming optimum by full subset enumeration over the edges
/// that can move; ties go to the lexicographically smallest subset.
pub fn oracle_hamming_sum(norm: &NormalizedInstance) -> Result<(Rational, Vec<usize>)> {
    let m = norm.edge_count();
    if m > HAMMING_EDGE_LIMIT {
        return Err(Error::SizeLimitExceeded { size: m, limit: HAMMING_EDGE_LIMIT });
    }
    let movable: Vec<usize> = (0..m).filter(|&e| norm.bounds[e].is_positive()).collect();
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for mask in 0u64..(1u64 << movable.len()) {
        let selection: Vec<usize> =
            movable.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let mut plan = ModificationPlan::zero(m);
        for &e in &selection {
            plan.amounts[e] = norm.bounds[e].clone();
        }
        if !is_feasible(norm, &plan) {
            continue;
        }
        let cost: Rational = selection.iter().map(|&e| norm.costs[e].clone()).sum();
        let better = match &best {
            None => true,
            Some((c, s)) => cost < *c || (cost == *c && selection < *s),
        };
        if better {
            best = Some((cost, selection));
        }
    }
    best.ok_or_else(|| Error::Infeasible {
        violations: norm.violated_rows(&ModificationPlan { amounts: norm.bounds.clone() }),
    })
}

pub fn oracle_hamming(norm: &NormalizedInstance, variant: Objective) -> Result<Rational> {
    match variant {
        Objective::HammingBottleneck => oracle_hamming_bottleneck(norm),
        Objective::HammingSum => oracle_hamming_sum(norm).map(|(c, _)| c),
        other => Err(Error::Internal(format!("{other} is not a Hamming objective"))),
    }
}
