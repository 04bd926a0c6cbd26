//! Inverse 2-maxian on a star under l1 cost.
//!
//! On a star the targets a, b span a longest path iff their two edges are
//! the two longest. With `l_a <= l_b`, either a is raised to some
//! `z <= l_b` and b stays put (case 1), or both are raised to a common
//! `z >= l_b` (case 2). Every other edge longer than `z` is cut to `z`. Each
//! case is a convex piecewise-linear program in `z`.

use num_traits::{Signed, Zero};

use super::pwl::{minimize_pwl_convex, ConvexPwl};
use crate::error::{Error, Result};
use crate::instance::{normalize, InverseInstance, ModificationPlan, Objective};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarCase {
    /// `l_a <= z <= l_b`, b unchanged.
    BelowLonger,
    /// `z >= l_b`, a and b both raised to `z`.
    AboveLonger,
}

impl StarCase {
    pub fn number(self) -> u8 {
        match self {
            StarCase::BelowLonger => 1,
            StarCase::AboveLonger => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCaseResult {
    pub case: StarCase,
    /// Common new length of the shorter target edge (and, in case 2, of both).
    pub z: Rational,
    pub cost: Rational,
    /// Cost of the forced adjustments below.
    pub presolve_cost: Rational,
    /// Raise of the shorter target edge forced before minimizing.
    pub forced_raise: Rational,
    /// `(edge, amount)` cuts forced on edges longer than the case allows.
    pub forced_cuts: Vec<(usize, Rational)>,
    /// Interval searched after presolve.
    pub interval: (Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSolution {
    pub best: StarCaseResult,
    /// Both cases; `None` where presolve found the case infeasible.
    pub cases: [Option<StarCaseResult>; 2],
    /// Per-edge amounts in the normalized sense for the pair (a, b).
    pub plan: ModificationPlan,
}

/// The center of a star with at least three vertices.
pub fn star_center(inst: &InverseInstance) -> Option<usize> {
    let n = inst.tree.vertex_count();
    (0..n).find(|&v| inst.tree.degree(v) == n - 1).filter(|_| n >= 3)
}

struct Spoke {
    edge: usize,
    length: Rational,
    cost: Rational,
    bound: Rational,
}

pub fn solve_star_l1(inst: &InverseInstance, a: usize, b: usize) -> Result<StarSolution> {
    let center = star_center(inst).ok_or(Error::NotAStar)?;
    let norm = normalize(inst, a, b)?;
    norm.ensure_feasible()?;

    let spoke = |leaf: usize| {
        let (_, edge) = inst.tree.neighbors(leaf)[0];
        Spoke {
            edge,
            length: norm.lengths[edge].clone(),
            cost: norm.costs[edge].clone(),
            bound: norm.bounds[edge].clone(),
        }
    };
    let (mut short, mut long) = (spoke(a), spoke(b));
    if short.length > long.length {
        std::mem::swap(&mut short, &mut long);
    }
    let others: Vec<Spoke> = (0..inst.tree.vertex_count())
        .filter(|&v| v != center && v != a && v != b)
        .map(spoke)
        .collect();
    // every other edge must end at or below z
    let floor = others.iter().map(|s| &s.length - &s.bound).max();

    let solve_case = |case: StarCase| -> Option<StarCaseResult> {
        let (base, hi) = match case {
            StarCase::BelowLonger => (
                short.length.clone(),
                (&short.length + &short.bound).min(long.length.clone()),
            ),
            StarCase::AboveLonger => (
                long.length.clone(),
                (&short.length + &short.bound).min(&long.length + &long.bound),
            ),
        };
        let lo = match &floor {
            Some(f) if *f > base => f.clone(),
            _ => base.clone(),
        };
        if lo > hi {
            return None;
        }
        let forced_raise = &lo - &short.length;
        let mut presolve_cost = &short.cost * &forced_raise;
        let mut slope = short.cost.clone();
        if case == StarCase::AboveLonger {
            presolve_cost += &long.cost * (&lo - &long.length);
            slope += &long.cost;
        }
        let mut f = ConvexPwl::new(-(&slope * &lo), slope);
        let mut forced_cuts = Vec::new();
        for s in &others {
            let capped = if s.length > hi {
                let cut = &s.length - &hi;
                presolve_cost += &s.cost * &cut;
                forced_cuts.push((s.edge, cut));
                hi.clone()
            } else {
                s.length.clone()
            };
            if capped > lo && !s.cost.is_zero() {
                f.add_excess_above(capped, s.cost.clone());
            }
        }
        let (z, residual) = minimize_pwl_convex(&f, &lo, &hi).expect("lo <= hi");
        Some(StarCaseResult {
            case,
            z,
            cost: presolve_cost.clone() + residual,
            presolve_cost,
            forced_raise,
            forced_cuts,
            interval: (lo, hi),
        })
    };

    let cases = [solve_case(StarCase::BelowLonger), solve_case(StarCase::AboveLonger)];
    let best = match &cases {
        [Some(one), Some(two)] => {
            if two.cost < one.cost {
                two.clone()
            } else {
                one.clone()
            }
        }
        [Some(one), None] => one.clone(),
        [None, Some(two)] => two.clone(),
        [None, None] => {
            return Err(Error::Internal("saturation feasible but both star cases infeasible".into()))
        }
    };

    let mut amounts = vec![Rational::zero(); norm.edge_count()];
    amounts[short.edge] = &best.z - &short.length;
    if best.case == StarCase::AboveLonger {
        amounts[long.edge] = &best.z - &long.length;
    }
    for s in &others {
        if s.length > best.z {
            amounts[s.edge] = &s.length - &best.z;
        }
    }
    let plan = ModificationPlan { amounts };
    debug_assert!(plan.amounts.iter().all(|x| !x.is_negative()));
    debug_assert_eq!(norm.plan_cost(&plan, Objective::L1), best.cost);
    Ok(StarSolution { best, cases, plan })
}
