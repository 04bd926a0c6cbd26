//! Inverse 2-maxian under Hamming costs, where an edge costs `c_e` as soon
//! as it is modified at all.
//!
//! The amount of a used edge does not affect the cost while larger amounts
//! only help the gap rows, so every used edge is pushed to its bound `x̄_e`.
//! A solution is therefore an edge subset `S`. The bottleneck variant
//! (`max_{e in S} c_e`) is a binary search over distinct costs; the
//! weighted-sum variant is NP-hard and solved exactly by branch and bound
//! for small trees only.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::{ModificationPlan, NormalizedInstance, Objective};
use crate::rational::Rational;
use crate::report::{Certificate, SolveReport};

pub const DEFAULT_SIZE_LIMIT: usize = 24;

/// Plan saturating exactly the edges in `selection`.
pub fn selection_plan(norm: &NormalizedInstance, selection: &[usize]) -> ModificationPlan {
    let mut plan = ModificationPlan::zero(norm.edge_count());
    for &e in selection {
        plan.amounts[e] = norm.bounds[e].clone();
    }
    plan
}

/// Plan saturating every edge with `c_e <= threshold`.
pub fn threshold_plan(norm: &NormalizedInstance, threshold: &Rational) -> ModificationPlan {
    let amounts = norm
        .costs
        .iter()
        .zip(&norm.bounds)
        .map(|(c, ub)| if c <= threshold { ub.clone() } else { Rational::zero() })
        .collect();
    ModificationPlan { amounts }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottleneckTrace {
    /// Distinct costs of edges that can move, ascending.
    pub ladder: Vec<Rational>,
    pub threshold: Rational,
    /// `(threshold, feasible)` in probe order.
    pub probes: Vec<(Rational, bool)>,
}

pub fn solve_hamming_bottleneck(norm: &NormalizedInstance) -> Result<SolveReport> {
    let mut ladder: Vec<Rational> = norm
        .costs
        .iter()
        .zip(&norm.bounds)
        .filter(|(_, ub)| ub.is_positive())
        .map(|(c, _)| c.clone())
        .collect();
    ladder.sort();
    ladder.dedup();

    let mut probes = Vec::new();
    let mut probe = |t: &Rational| {
        let ok = norm.satisfies_rows_linear(&threshold_plan(norm, t));
        probes.push((t.clone(), ok));
        ok
    };
    let threshold = if probe(&Rational::zero()) {
        Rational::zero()
    } else {
        match ladder.last() {
            Some(top) if probe(top) => {}
            _ => return Err(norm.ensure_feasible().err().unwrap_or_else(|| {
                Error::Internal("saturation feasible but no cost threshold is".into())
            })),
        }
        let (mut lo, mut hi) = (0usize, ladder.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if probe(&ladder[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        ladder[lo].clone()
    };
    let plan = threshold_plan(norm, &threshold);
    let trace = BottleneckTrace { ladder, threshold, probes };
    Ok(SolveReport::new(norm, Objective::HammingBottleneck, plan, Certificate::Bottleneck(trace)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumTrace {
    /// Modified edges, ascending.
    pub selection: Vec<usize>,
    pub nodes: usize,
    /// Cost of the bottleneck solution used as the first incumbent.
    pub initial_incumbent: Rational,
}

struct Node {
    depth: usize,
    chosen: Vec<bool>,
    cost: Rational,
}

/// Minimum-cost edge subset under weighted-sum Hamming cost; ties go to the
/// lexicographically smallest subset.
pub fn solve_hamming_sum_exact(norm: &NormalizedInstance, size_limit: usize) -> Result<SolveReport> {
    // infeasibility is cheap to detect at any size
    norm.ensure_feasible()?;
    if norm.edge_count() > size_limit {
        return Err(Error::SizeLimitExceeded { size: norm.edge_count(), limit: size_limit });
    }
    // most expensive first, so exclusion decisions settle early
    let mut candidates: Vec<usize> = (0..norm.edge_count()).filter(|&e| norm.bounds[e].is_positive()).collect();
    candidates.sort_by(|&x, &y| norm.costs[y].cmp(&norm.costs[x]).then(x.cmp(&y)));
    let k = candidates.len();

    let feasible = |chosen: &[bool], from: usize| {
        let selection: Vec<usize> = (0..k).filter(|&i| chosen[i] || i >= from).map(|i| candidates[i]).collect();
        norm.satisfies_rows_linear(&selection_plan(norm, &selection))
    };
    let to_selection = |chosen: &[bool]| {
        let mut s: Vec<usize> = (0..k).filter(|&i| chosen[i]).map(|i| candidates[i]).collect();
        s.sort_unstable();
        s
    };

    let bottleneck = solve_hamming_bottleneck(norm)?;
    let incumbent: Vec<usize> =
        (0..norm.edge_count()).filter(|&e| !bottleneck.plan.amounts[e].is_zero()).collect();
    let mut best_cost: Rational = incumbent.iter().map(|&e| norm.costs[e].clone()).sum();
    let initial_incumbent = best_cost.clone();
    let mut best = incumbent;
    let cheapest_from: Vec<Rational> = {
        let mut v = vec![Rational::zero(); k + 1];
        for i in (0..k).rev() {
            v[i] = if i + 1 == k { norm.costs[candidates[i]].clone() } else { norm.costs[candidates[i]].clone().min(v[i + 1].clone()) };
        }
        v
    };

    let mut nodes = 0usize;
    let mut stack = vec![Node { depth: 0, chosen: vec![false; k], cost: Rational::zero() }];
    while let Some(node) = stack.pop() {
        nodes += 1;
        if node.cost > best_cost || !feasible(&node.chosen, node.depth) {
            continue;
        }
        let done = feasible(&node.chosen, k);
        if done {
            let selection = to_selection(&node.chosen);
            if node.cost < best_cost || (node.cost == best_cost && selection < best) {
                best_cost = node.cost.clone();
                best = selection;
            }
        }
        if node.depth == k {
            continue;
        }
        // an infeasible partial selection needs at least one more edge
        if !done && &node.cost + &cheapest_from[node.depth] > best_cost {
            continue;
        }
        let e = candidates[node.depth];
        let mut with = node.chosen.clone();
        with[node.depth] = true;
        stack.push(Node { depth: node.depth + 1, chosen: with, cost: &node.cost + &norm.costs[e] });
        stack.push(Node { depth: node.depth + 1, chosen: node.chosen, cost: node.cost });
    }

    let plan = selection_plan(norm, &best);
    let trace = SumTrace { selection: best, nodes, initial_incumbent };
    Ok(SolveReport::new(norm, Objective::HammingSum, plan, Certificate::HammingSum(trace)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{is_feasible, normalize, InverseInstance};
    use crate::rational::int;
    use crate::tree::fixtures::*;
    use crate::tree::Tree;

    fn t1_norm(costs: [i64; 3], inc: [i64; 3], dec: [i64; 3], targets: (usize, usize)) -> NormalizedInstance {
        let inst = InverseInstance::new(
            t1(),
            vec![targets.0, targets.1],
            costs.iter().map(|&c| int(c)).collect(),
            inc.iter().map(|&c| int(c)).collect(),
            dec.iter().map(|&c| int(c)).collect(),
            Objective::HammingBottleneck,
        )
        .unwrap();
        normalize(&inst, targets.0, targets.1).unwrap()
    }

    /// Tries every subset of T1's three edges.
    fn enumerate_t1(norm: &NormalizedInstance) -> (Rational, Rational) {
        let mut best_sum: Option<Rational> = None;
        let mut best_max: Option<Rational> = None;
        for mask in 0u32..8 {
            let s: Vec<usize> = (0..3).filter(|e| mask >> e & 1 == 1).collect();
            if !is_feasible(norm, &selection_plan(norm, &s)) {
                continue;
            }
            let sum: Rational = s.iter().map(|&e| norm.costs[e].clone()).sum();
            let max = s.iter().map(|&e| norm.costs[e].clone()).max().unwrap_or_default();
            best_sum = Some(best_sum.map_or(sum.clone(), |b| b.min(sum)));
            best_max = Some(best_max.map_or(max.clone(), |b| b.min(max)));
        }
        (best_max.unwrap(), best_sum.unwrap())
    }

    #[test]
    fn t1_examples() {
        let norm = t1_norm([5, 2, 3], [10; 3], [10; 3], (A, B));
        let bottleneck = solve_hamming_bottleneck(&norm).unwrap();
        assert_eq!(bottleneck.cost, int(3));
        let sum = solve_hamming_sum_exact(&norm, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(sum.cost, int(3));
        let Certificate::HammingSum(trace) = &sum.certificate else { panic!() };
        assert_eq!(trace.selection, vec![2]);
        assert_eq!(enumerate_t1(&norm), (int(3), int(3)));
    }

    #[test]
    fn nothing_to_do() {
        let norm = t1_norm([5, 2, 3], [10; 3], [10; 3], (V, B));
        assert_eq!(solve_hamming_bottleneck(&norm).unwrap().cost, int(0));
        let sum = solve_hamming_sum_exact(&norm, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(sum.cost, int(0));
        assert_eq!(sum.plan, ModificationPlan::zero(3));
    }

    #[test]
    fn infeasible() {
        let norm = t1_norm([5, 2, 3], [0; 3], [0; 3], (A, B));
        assert!(solve_hamming_bottleneck(&norm).unwrap_err().is_infeasible());
        assert!(solve_hamming_sum_exact(&norm, DEFAULT_SIZE_LIMIT).unwrap_err().is_infeasible());
    }

    #[test]
    fn forced_pair_of_edges() {
        // T1 with (u,v) frozen: row (v,a) needs a-u, row (v,b) needs u-b
        let norm = t1_norm([2, 3, 1], [10, 10, 0], [0; 3], (A, B));
        let sum = solve_hamming_sum_exact(&norm, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(sum.cost, int(5));
        assert_eq!(enumerate_t1(&norm).1, int(5));
        assert_eq!(solve_hamming_bottleneck(&norm).unwrap().cost, int(3));
    }

    #[test]
    fn size_limit() {
        let n = 30;
        let tree = Tree::new(vec![int(1); n], (1..n).map(|i| (0, i)).collect(), vec![int(1); n - 1]).unwrap();
        let inst = InverseInstance::new(
            tree, vec![1, 2], vec![int(1); n - 1], vec![int(1); n - 1], vec![int(1); n - 1], Objective::HammingSum,
        )
        .unwrap();
        let norm = normalize(&inst, 1, 2).unwrap();
        assert_eq!(
            solve_hamming_sum_exact(&norm, DEFAULT_SIZE_LIMIT).unwrap_err(),
            Error::SizeLimitExceeded { size: 29, limit: 24 }
        );
    }

    #[test]
    fn zero_cost_edges_are_free() {
        let norm = t1_norm([5, 2, 0], [10; 3], [10; 3], (A, B));
        assert_eq!(solve_hamming_bottleneck(&norm).unwrap().cost, int(0));
        assert_eq!(solve_hamming_sum_exact(&norm, DEFAULT_SIZE_LIMIT).unwrap().cost, int(0));
    }
}
