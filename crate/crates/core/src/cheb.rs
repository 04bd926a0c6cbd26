//! Inverse 2-maxian under Chebyshev cost `max_e c_e x_e`.
//!
//! For a budget `C` the valid modification moves every edge as far as the
//! budget allows, `x_e(C) = min(C / c_e, x̄_e)`. It is componentwise
//! nondecreasing in `C`, so feasibility is monotone and the optimum is the
//! smallest feasible budget. Phase 1 binary-searches the sorted distinct
//! values of `c_e x̄_e` for the first feasible one. Inside the bracket
//! `(C_lo, C_hi]` every edge is either frozen at `x̄_e` or moving at rate
//! `1 / c_e`, so each gap row's left-hand side is affine in `C` and the
//! optimum is the largest per-row crossing point (phase 2).

use num_traits::{CheckedDiv, Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::{ModificationPlan, NormalizedInstance, Objective};
use crate::rational::{from_small, to_small, Rational, Small};
use crate::report::{Certificate, SolveReport};
use crate::tree::Side;

pub fn apply_valid_modification(norm: &NormalizedInstance, budget: &Rational) -> ModificationPlan {
    debug_assert!(!budget.is_negative());
    let amounts = norm
        .costs
        .iter()
        .zip(&norm.bounds)
        .map(|(c, ub)| if c * ub <= *budget { ub.clone() } else { budget / c })
        .collect();
    ModificationPlan { amounts }
}

fn feasible_at(norm: &NormalizedInstance, budget: &Rational) -> bool {
    if let (Some(small), Some(c)) = (&norm.small, to_small(budget)) {
        let amount = |e: usize| if small.caps[e] <= c { Some(small.bounds[e]) } else { c.checked_div(&small.costs[e]) };
        if let Some(violations) = norm.violations_small_with(amount) {
            return violations.is_empty();
        }
    }
    norm.satisfies_rows_linear(&apply_valid_modification(norm, budget))
}

/// Sorted distinct positive values of `c_e x̄_e`.
pub fn breakpoint_ladder(norm: &NormalizedInstance) -> Vec<Rational> {
    if let Some(small) = &norm.small {
        let mut caps: Vec<Small> = small.caps.iter().filter(|v| v.is_positive()).copied().collect();
        caps.sort_unstable();
        caps.dedup();
        return caps.iter().map(from_small).collect();
    }
    let mut ladder: Vec<Rational> = norm
        .costs
        .iter()
        .zip(&norm.bounds)
        .map(|(c, ub)| c * ub)
        .filter(|v| v.is_positive())
        .collect();
    ladder.sort();
    ladder.dedup();
    ladder
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub ladder: Vec<Rational>,
    /// 1-based index of the first feasible ladder value; 0 when the zero
    /// budget is already feasible.
    pub i0: usize,
    pub lo: Rational,
    pub hi: Rational,
    pub probes: usize,
}

impl Bracket {
    pub fn plan(&self, norm: &NormalizedInstance) -> ModificationPlan {
        apply_valid_modification(norm, &self.hi)
    }
}

pub fn phase1_bracket(norm: &NormalizedInstance) -> Result<Bracket> {
    let ladder = breakpoint_ladder(norm);
    if feasible_at(norm, &Rational::zero()) {
        return Ok(Bracket { ladder, i0: 0, lo: Rational::zero(), hi: Rational::zero(), probes: 1 });
    }
    // the top of the ladder is the saturated plan
    norm.ensure_feasible()?;
    let (mut lo, mut hi) = (0usize, ladder.len() - 1);
    let mut probes = 1;
    while lo < hi {
        let mid = (lo + hi) / 2;
        probes += 1;
        if feasible_at(norm, &ladder[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    debug_assert!(feasible_at(norm, &ladder[lo]));
    debug_assert!(lo == 0 || !feasible_at(norm, &ladder[lo - 1]));
    let lower = if lo == 0 { Rational::zero() } else { ladder[lo - 1].clone() };
    let upper = ladder[lo].clone();
    Ok(Bracket { ladder, i0: lo + 1, lo: lower, hi: upper, probes })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowThreshold {
    pub leaf: usize,
    pub side: Side,
    pub budget: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdTrace {
    pub ladder_len: usize,
    pub i0: usize,
    pub bracket: (Rational, Rational),
    /// Crossing budgets of the rows violated at the bottom of the bracket.
    pub thresholds: Vec<RowThreshold>,
    /// A row holding with equality at the optimum (none when it is zero).
    pub tight: Option<(usize, Side)>,
    pub budget: Rational,
}

/// Smallest feasible budget in `(lo, hi]`, given infeasibility at `lo` and
/// feasibility at `hi` with no ladder value strictly between them.
pub fn phase2_threshold(norm: &NormalizedInstance, lo: &Rational, hi: &Rational) -> Result<ThresholdTrace> {
    let frozen: Vec<bool> = norm.costs.iter().zip(&norm.bounds).map(|(c, ub)| c * ub <= *lo).collect();
    let fixed = |e: usize| if frozen[e] { norm.bounds[e].clone() } else { Rational::zero() };
    let rate = |e: usize| if frozen[e] { Rational::zero() } else { norm.costs[e].recip() };

    let layout = &norm.layout;
    let branch_fixed = layout.branch_sums(fixed);
    let branch_rate = layout.branch_sums(rate);
    let path_fixed = layout.path_prefix(fixed);
    let path_rate = layout.path_prefix(rate);
    let total_fixed = path_fixed.last().expect("nonempty");
    let total_rate = path_rate.last().expect("nonempty");

    let mut thresholds = Vec::new();
    let mut best: Option<(Rational, usize, Side)> = None;
    for row in &norm.rows {
        let i = row.anchor;
        let (pf, pr) = match row.side {
            Side::A => (path_fixed[i].clone(), path_rate[i].clone()),
            Side::B => (total_fixed - &path_fixed[i], total_rate - &path_rate[i]),
        };
        let need = &row.rhs - &branch_fixed[row.leaf] - pf;
        let slope = &branch_rate[row.leaf] + pr;
        if need <= lo * &slope {
            continue;
        }
        if slope.is_zero() {
            return Err(Error::Internal(format!(
                "row ({}, {}) is violated on the whole bracket",
                row.leaf, row.side
            )));
        }
        let budget = need / slope;
        if best.as_ref().is_none_or(|(b, _, _)| budget > *b) {
            best = Some((budget.clone(), row.leaf, row.side));
        }
        thresholds.push(RowThreshold { leaf: row.leaf, side: row.side, budget });
    }
    let (budget, tight) = match best {
        Some((b, leaf, side)) => (b, Some((leaf, side))),
        None => (lo.clone(), None),
    };
    if budget > *hi {
        return Err(Error::Internal(format!("threshold {budget} above bracket top {hi}")));
    }
    if let Some((leaf, side)) = tight {
        let plan = apply_valid_modification(norm, &budget);
        let row = norm.rows.iter().find(|r| r.leaf == leaf && r.side == side).expect("row exists");
        if norm.row_lhs(row, &plan.amounts) != row.rhs {
            return Err(Error::Internal("no gap row is tight at the threshold".into()));
        }
    }
    Ok(ThresholdTrace {
        ladder_len: 0,
        i0: 0,
        bracket: (lo.clone(), hi.clone()),
        thresholds,
        tight,
        budget,
    })
}

pub fn solve_chebyshev(norm: &NormalizedInstance) -> Result<SolveReport> {
    let bracket = phase1_bracket(norm)?;
    let trace = if bracket.i0 == 0 {
        ThresholdTrace {
            ladder_len: bracket.ladder.len(),
            i0: 0,
            bracket: (Rational::zero(), Rational::zero()),
            thresholds: Vec::new(),
            tight: None,
            budget: Rational::zero(),
        }
    } else {
        let mut trace = phase2_threshold(norm, &bracket.lo, &bracket.hi)?;
        trace.ladder_len = bracket.ladder.len();
        trace.i0 = bracket.i0;
        trace
    };
    let plan = apply_valid_modification(norm, &trace.budget);
    debug_assert!(norm.satisfies_rows_linear(&plan));
    let report = SolveReport::new(norm, Objective::Chebyshev, plan, Certificate::Chebyshev(trace));
    if let Certificate::Chebyshev(trace) = &report.certificate {
        debug_assert!(report.cost <= trace.budget);
        debug_assert!(trace.budget.is_zero() || report.cost == trace.budget);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{is_feasible, normalize, InverseInstance};
    use crate::random::{random_instance, InstanceParams};
    use crate::rational::{frac, int};
    use crate::tree::fixtures::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scaled(value: &Rational, factor: i64) -> Rational {
        value * int(factor)
    }

    fn t1_norm(costs: [i64; 3]) -> NormalizedInstance {
        let inst = InverseInstance::new(
            t1(),
            vec![A, B],
            costs.iter().map(|&c| int(c)).collect(),
            vec![int(10); 3],
            vec![int(10); 3],
            Objective::Chebyshev,
        )
        .unwrap();
        normalize(&inst, A, B).unwrap()
    }

    /// Plain bisection on the budget to 2^-40, independent of the ladder.
    fn bisection(norm: &NormalizedInstance) -> (Rational, Rational) {
        let feasible = |c: &Rational| is_feasible(norm, &apply_valid_modification(norm, c));
        let (mut lo, mut hi) = (int(0), int(1000));
        assert!(feasible(&hi));
        let width = frac(1, 1 << 40);
        while &hi - &lo > width {
            let mid = (&lo + &hi) / int(2);
            if feasible(&mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }

    #[test]
    fn valid_modification_examples() {
        let norm = t1_norm([1, 1, 1]);
        assert_eq!(apply_valid_modification(&norm, &int(1)).amounts, vec![int(1); 3]);
        assert_eq!(apply_valid_modification(&norm, &int(5)).amounts, vec![int(5), int(5), int(4)]);
        assert_eq!(apply_valid_modification(&norm, &int(0)), ModificationPlan::zero(3));
    }

    #[test]
    fn bracket_on_t1() {
        let norm = t1_norm([1, 1, 1]);
        let bracket = phase1_bracket(&norm).unwrap();
        assert_eq!(bracket.ladder, vec![int(4), int(10)]);
        assert_eq!(bracket.i0, 1);
        assert_eq!((bracket.lo.clone(), bracket.hi.clone()), (int(0), int(4)));
        assert!(is_feasible(&norm, &bracket.plan(&norm)));
    }

    #[test]
    fn threshold_on_t1() {
        let norm = t1_norm([1, 1, 1]);
        let trace = phase2_threshold(&norm, &int(0), &int(4)).unwrap();
        assert_eq!(trace.budget, int(1));
        assert_eq!(trace.tight, Some((V, Side::A)));
        let by_row: Vec<_> = trace.thresholds.iter().map(|t| (t.side, t.budget.clone())).collect();
        assert_eq!(by_row, vec![(Side::A, int(1)), (Side::B, frac(1, 2))]);
        let (lo, hi) = bisection(&norm);
        assert!(lo < int(1) && int(1) <= hi);
    }

    #[test]
    fn single_edge_threshold_is_cost_times_gap() {
        // a path a - m - b with leaf v on m; only v's edge can move
        let tree = crate::tree::Tree::new(
            vec![int(1); 4],
            vec![(0, 1), (1, 2), (1, 3)],
            vec![int(2), int(3), int(7)],
        )
        .unwrap();
        let inst = InverseInstance::new(
            tree,
            vec![0, 2],
            vec![int(1), int(1), int(3)],
            vec![int(0); 3],
            vec![int(0), int(0), int(7)],
            Objective::Chebyshev,
        )
        .unwrap();
        let norm = normalize(&inst, 0, 2).unwrap();
        // gap to a is 5, so C = 3 * 5
        assert_eq!(solve_chebyshev(&norm).unwrap().cost, int(15));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_chebyshev(&t1_norm([1, 1, 1])).unwrap().cost, int(1));
        let norm = t1_norm([5, 2, 3]);
        let report = solve_chebyshev(&norm).unwrap();
        assert_eq!(report.cost, frac(15, 4));
        let Certificate::Chebyshev(trace) = &report.certificate else { panic!() };
        assert_eq!(trace.tight, Some((V, Side::A)));
        let (lo, hi) = bisection(&norm);
        assert!(lo < frac(15, 4) && frac(15, 4) <= hi);

        let inst = InverseInstance::new(
            t1(), vec![V, B], vec![int(1); 3], vec![int(1); 3], vec![int(1); 3], Objective::Chebyshev,
        )
        .unwrap();
        assert_eq!(solve_chebyshev(&normalize(&inst, V, B).unwrap()).unwrap().cost, int(0));
    }

    #[test]
    fn infeasible_and_zero_cost_edges() {
        let inst = InverseInstance::new(
            t1(), vec![A, B], vec![int(1); 3], vec![int(0); 3], vec![int(0); 3], Objective::Chebyshev,
        )
        .unwrap();
        assert!(solve_chebyshev(&normalize(&inst, A, B).unwrap()).unwrap_err().is_infeasible());

        // a free edge saturates at budget zero
        let inst = InverseInstance::new(
            t1(), vec![A, B], vec![int(1), int(1), int(0)], vec![int(10); 3], vec![int(10); 3], Objective::Chebyshev,
        )
        .unwrap();
        let norm = normalize(&inst, A, B).unwrap();
        assert_eq!(apply_valid_modification(&norm, &int(0)).amounts, vec![int(0), int(0), int(4)]);
        assert_eq!(solve_chebyshev(&norm).unwrap().cost, int(0));
    }

    #[test]
    fn boundary_at_ladder_value() {
        // the optimum sits exactly on c_e x̄_e of a path edge
        let inst = InverseInstance::new(
            t1(), vec![A, B], vec![int(1), int(1), int(1)], vec![int(1), int(10), int(10)], vec![int(0); 3], Objective::Chebyshev,
        )
        .unwrap();
        let norm = normalize(&inst, A, B).unwrap();
        // only a-u can grow; it must cover the gap of 2 but is capped at 1
        assert!(solve_chebyshev(&norm).unwrap_err().is_infeasible());
        let inst = InverseInstance { inc_bounds: vec![int(2), int(10), int(10)], ..inst };
        let norm = normalize(&inst, A, B).unwrap();
        let report = solve_chebyshev(&norm).unwrap();
        assert_eq!(report.cost, int(2));
        let Certificate::Chebyshev(trace) = &report.certificate else { panic!() };
        assert_eq!(trace.i0, 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn optimal_budget_is_the_feasibility_threshold(seed in any::<u64>(), n in 3usize..80) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, &InstanceParams::new(n).max_denominator(3).max_bound(6));
            let norm = normalize(&inst, inst.targets[0], inst.targets[1]).unwrap();
            let Ok(report) = solve_chebyshev(&norm) else {
                prop_assert!(!is_feasible(&norm, &crate::instance::saturated_plan(&norm)));
                return Ok(());
            };
            let c = report.cost.clone();
            prop_assert!(is_feasible(&norm, &report.plan));
            prop_assert!(feasible_at(&norm, &c));
            if c.is_positive() {
                let Certificate::Chebyshev(trace) = &report.certificate else { panic!() };
                prop_assert!(trace.tight.is_some());
                prop_assert!(!feasible_at(&norm, &(&c * frac(999_999, 1_000_000))));
                let mid = (&trace.bracket.0 + &c) / int(2);
                if c > trace.bracket.0 {
                    prop_assert!(!feasible_at(&norm, &mid));
                }
            }
            // doubling costs doubles the optimum
            let doubled_costs = InverseInstance {
                costs: inst.costs.iter().map(|x| scaled(x, 2)).collect(),
                ..inst.clone()
            };
            let doubled = solve_chebyshev(&normalize(&doubled_costs, inst.targets[0], inst.targets[1]).unwrap()).unwrap();
            prop_assert_eq!(doubled.cost, scaled(&c, 2));
            // scaling lengths and bounds by 3 triples it
            let tree = inst.tree.with_lengths(inst.tree.lengths().iter().map(|l| scaled(l, 3)).collect()).unwrap();
            let tripled = InverseInstance {
                tree,
                inc_bounds: inst.inc_bounds.iter().map(|x| scaled(x, 3)).collect(),
                dec_bounds: inst.dec_bounds.iter().map(|x| scaled(x, 3)).collect(),
                ..inst.clone()
            };
            let tripled = solve_chebyshev(&normalize(&tripled, inst.targets[0], inst.targets[1]).unwrap()).unwrap();
            prop_assert_eq!(tripled.cost, scaled(&c, 3));
        }
    }
}
