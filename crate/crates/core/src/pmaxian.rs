//! The inverse p-maxian as a family of 2-maxian subproblems.
//!
//! A target set is a p-maxian exactly when two of its members span a
//! longest path, so the cheapest way to make it one is the cheapest
//! over target pairs.

use rayon::prelude::*;

use crate::cheb::solve_chebyshev;
use crate::error::{Error, Result};
use crate::hamming::{solve_hamming_bottleneck, solve_hamming_sum_exact, DEFAULT_SIZE_LIMIT};
use crate::instance::{normalize, InverseInstance, ModificationPlan, Objective};
use crate::l1::solve_l1;
use crate::rational::Rational;
use crate::report::SolveReport;

/// Solves the 2-maxian subproblem for one pair under the instance objective.
pub fn solve_pair(inst: &InverseInstance, a: usize, b: usize) -> Result<SolveReport> {
    let norm = normalize(inst, a, b)?;
    match inst.objective {
        Objective::L1 => solve_l1(&norm),
        Objective::Chebyshev => solve_chebyshev(&norm),
        Objective::HammingBottleneck => solve_hamming_bottleneck(&norm),
        Objective::HammingSum => solve_hamming_sum_exact(&norm, DEFAULT_SIZE_LIMIT),
    }
}

pub type PairOutcome = ((usize, usize), Result<SolveReport>);

/// Every unordered target pair with its outcome, in lexicographic pair order.
pub fn solve_all_pairs(inst: &InverseInstance) -> Result<Vec<PairOutcome>> {
    inst.validate()?;
    Ok(inst
        .target_pairs()
        .into_par_iter()
        .map(|(a, b)| ((a, b), solve_pair(inst, a, b)))
        .collect())
}

pub fn solve_inverse_pmaxian(inst: &InverseInstance) -> Result<SolveReport> {
    let outcomes = solve_all_pairs(inst)?;
    let mut best: Option<SolveReport> = None;
    let mut violations = Vec::new();
    for (_, outcome) in outcomes {
        match outcome {
            Ok(report) => {
                if best.as_ref().is_none_or(|b| report.cost < b.cost) {
                    best = Some(report);
                }
            }
            Err(Error::Infeasible { violations: v }) => violations.extend(v),
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| {
        violations.sort();
        violations.dedup();
        Error::Infeasible { violations }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub reasons: Vec<String>,
}

/// Independent check of a report: bounds, the longest-path criterion on the
/// rebuilt tree, and the stated cost.
pub fn verify_solution(inst: &InverseInstance, report: &SolveReport) -> Verification {
    verify_plan(inst, report.pair, report.objective, &report.plan, &report.cost)
}

/// [`verify_solution`] for a plan that arrived without a certificate.
pub fn verify_plan(
    inst: &InverseInstance,
    pair: (usize, usize),
    objective: Objective,
    plan: &ModificationPlan,
    stated_cost: &Rational,
) -> Verification {
    let mut reasons = Vec::new();
    let (a, b) = pair;
    if !inst.targets.contains(&a) || !inst.targets.contains(&b) {
        reasons.push(format!("pair ({a}, {b}) is not a pair of targets"));
    }
    let norm = match normalize(inst, a, b) {
        Ok(norm) => norm,
        Err(e) => {
            reasons.push(format!("pair ({a}, {b}) is invalid: {e}"));
            return Verification { ok: false, reasons };
        }
    };
    let ModificationPlan { amounts } = plan;
    if amounts.len() != norm.edge_count() {
        reasons.push(format!("plan has {} entries for {} edges", amounts.len(), norm.edge_count()));
        return Verification { ok: false, reasons };
    }
    for (e, (x, ub)) in amounts.iter().zip(&norm.bounds).enumerate() {
        if x < &num_traits::Zero::zero() || x > ub {
            reasons.push(format!("bound violated on edge {e}: {x} not in [0, {ub}]"));
        }
    }
    let lengths = norm.new_lengths(plan);
    match inst.tree.with_lengths(lengths) {
        Ok(modified) => match modified.is_weakly_longest(a, b) {
            Ok(check) if check.holds => {}
            Ok(check) => reasons.push(format!(
                "pair does not span a longest path ({} violated rows)",
                check.violations.len()
            )),
            Err(e) => reasons.push(e.to_string()),
        },
        Err(e) => reasons.push(format!("modified lengths invalid: {e}")),
    }
    let cost = objective.cost(&inst.costs, amounts);
    if cost != *stated_cost {
        reasons.push(format!("cost mismatch: stated {stated_cost} but plan costs {cost}"));
    }
    Verification { ok: reasons.is_empty(), reasons }
}
