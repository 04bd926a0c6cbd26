//! Inverse instances and their per-pair normal form.
//!
//! For a target pair (a, b) it never pays to shorten an edge of P(a, b) or to
//! lengthen an edge off it, so each edge carries a single nonnegative
//! variable `x_e`: lengthening on the path, shortening elsewhere. Making
//! P(a, b) a longest path is then the system of gap rows
//!
//! ```text
//! sum_{e in P(side, v_ab)} x_e + sum_{e in P(v, v_ab)} x_e >= d(v, v_ab) - d(side, v_ab)
//! ```
//!
//! for every other leaf `v` and both sides. Row left-hand sides are
//! nondecreasing in `x`, so feasibility is monotone: the saturated plan
//! `x = x̄` decides whether the pair can be made longest at all.

use std::fmt;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_small, Rational, Small};
use crate::tree::{PairLayout, Side, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Sum of c_e x_e.
    L1,
    /// Max of c_e x_e.
    Chebyshev,
    /// Max of c_e over modified edges.
    HammingBottleneck,
    /// Sum of c_e over modified edges.
    HammingSum,
}

impl Objective {
    pub const ALL: [Objective; 4] =
        [Objective::L1, Objective::Chebyshev, Objective::HammingBottleneck, Objective::HammingSum];

    pub fn name(self) -> &'static str {
        match self {
            Objective::L1 => "l1",
            Objective::Chebyshev => "chebyshev",
            Objective::HammingBottleneck => "hamming-bottleneck",
            Objective::HammingSum => "hamming-sum",
        }
    }

    pub fn from_name(name: &str) -> Option<Objective> {
        Objective::ALL.into_iter().find(|o| o.name() == name)
    }

    /// Cost of per-edge amounts under this objective.
    pub fn cost(self, costs: &[Rational], amounts: &[Rational]) -> Rational {
        let terms = costs.iter().zip(amounts);
        match self {
            Objective::L1 => terms.map(|(c, x)| c * x).sum(),
            Objective::Chebyshev => terms.map(|(c, x)| c * x).max().unwrap_or_else(Rational::zero),
            Objective::HammingBottleneck => terms
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, _)| c.clone())
                .max()
                .unwrap_or_else(Rational::zero),
            Objective::HammingSum => {
                terms.filter(|(_, x)| !x.is_zero()).map(|(c, _)| c.clone()).sum()
            }
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseInstance {
    pub tree: Tree,
    pub targets: Vec<usize>,
    pub costs: Vec<Rational>,
    pub inc_bounds: Vec<Rational>,
    pub dec_bounds: Vec<Rational>,
    pub objective: Objective,
}

impl InverseInstance {
    pub fn new(
        tree: Tree,
        targets: Vec<usize>,
        costs: Vec<Rational>,
        inc_bounds: Vec<Rational>,
        dec_bounds: Vec<Rational>,
        objective: Objective,
    ) -> Result<Self> {
        let inst = InverseInstance { tree, targets, costs, inc_bounds, dec_bounds, objective };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.tree.edge_count();
        for data in [&self.costs, &self.inc_bounds, &self.dec_bounds] {
            if data.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: data.len() });
            }
        }
        for (name, data) in
            [("cost", &self.costs), ("inc_bound", &self.inc_bounds), ("dec_bound", &self.dec_bounds)]
        {
            if let Some(e) = data.iter().position(|x| x.is_negative()) {
                return Err(Error::NegativeDatum(format!("{name} of edge {e}")));
            }
        }
        if self.targets.len() < 2 {
            return Err(Error::TooFewTargets(self.targets.len()));
        }
        for (i, &t) in self.targets.iter().enumerate() {
            self.tree.check_vertex(t)?;
            if !self.tree.is_leaf(t) {
                return Err(Error::NotALeaf(t));
            }
            if self.targets[..i].contains(&t) {
                return Err(Error::DegeneratePair(t));
            }
        }
        Ok(())
    }

    pub fn with_objective(&self, objective: Objective) -> InverseInstance {
        InverseInstance { objective, ..self.clone() }
    }

    pub fn with_targets(&self, targets: Vec<usize>) -> Result<InverseInstance> {
        let inst = InverseInstance { targets, ..self.clone() };
        inst.validate()?;
        Ok(inst)
    }

    /// Unordered target pairs, each with the smaller vertex first, in
    /// lexicographic order.
    pub fn target_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (i, &s) in self.targets.iter().enumerate() {
            for &t in &self.targets[i + 1..] {
                pairs.push((s.min(t), s.max(t)));
            }
        }
        pairs.sort_unstable();
        pairs
    }
}

/// One constraint of the longest-path system for a leaf `v` outside {a, b}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRow {
    pub leaf: usize,
    pub side: Side,
    /// Position of v_ab on P(a, b).
    pub anchor: usize,
    /// d(v, v_ab) - d(side, v_ab); may be nonpositive.
    pub rhs: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSign {
    /// On P(a, b): the edge may only be lengthened.
    Increase,
    /// Off P(a, b): the edge may only be shortened.
    Decrease,
}

impl EdgeSign {
    pub fn as_i8(self) -> i8 {
        match self {
            EdgeSign::Increase => 1,
            EdgeSign::Decrease => -1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormalizedInstance {
    pub layout: PairLayout,
    pub signs: Vec<EdgeSign>,
    pub bounds: Vec<Rational>,
    pub costs: Vec<Rational>,
    pub lengths: Vec<Rational>,
    pub rows: Vec<GapRow>,
    pub(crate) small: Option<SmallForm>,
}

/// `i128` copy of the edge data, present when every value fits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SmallForm {
    pub lengths: Vec<Small>,
    pub bounds: Vec<Small>,
    pub costs: Vec<Small>,
    /// `c_e x̄_e`
    pub caps: Vec<Small>,
}

impl SmallForm {
    fn new(lengths: &[Rational], bounds: &[Rational], costs: &[Rational]) -> Option<Self> {
        let convert = |v: &[Rational]| v.iter().map(to_small).collect::<Option<Vec<_>>>();
        let (lengths, bounds, costs) = (convert(lengths)?, convert(bounds)?, convert(costs)?);
        let caps = costs.iter().zip(&bounds).map(|(c, ub)| c.checked_mul(ub)).collect::<Option<_>>()?;
        Some(SmallForm { lengths, bounds, costs, caps })
    }
}

/// Per-pair normal form: signs, effective bounds and gap rows.
pub fn normalize(inst: &InverseInstance, a: usize, b: usize) -> Result<NormalizedInstance> {
    for v in [a, b] {
        inst.tree.check_vertex(v)?;
        if !inst.tree.is_leaf(v) {
            return Err(Error::NotALeaf(v));
        }
    }
    let layout = PairLayout::new(&inst.tree, a, b)?;
    let lengths = inst.tree.lengths().to_vec();
    let signs: Vec<EdgeSign> = layout
        .on_path_edge
        .iter()
        .map(|&on| if on { EdgeSign::Increase } else { EdgeSign::Decrease })
        .collect();
    let bounds: Vec<Rational> = signs
        .iter()
        .enumerate()
        .map(|(e, s)| match s {
            EdgeSign::Increase => inst.inc_bounds[e].clone(),
            // lengths stay nonnegative
            EdgeSign::Decrease => inst.dec_bounds[e].clone().min(lengths[e].clone()),
        })
        .collect();

    let depth = layout.branch_sums(|e| lengths[e].clone());
    let prefix = layout.path_prefix(|e| lengths[e].clone());
    let total = prefix.last().expect("nonempty").clone();
    let mut rows = Vec::with_capacity(2 * layout.other_leaves.len());
    for &v in &layout.other_leaves {
        let i = layout.anchor[v];
        rows.push(GapRow { leaf: v, side: Side::A, anchor: i, rhs: &depth[v] - &prefix[i] });
        rows.push(GapRow { leaf: v, side: Side::B, anchor: i, rhs: &depth[v] - (&total - &prefix[i]) });
    }
    let small = SmallForm::new(&lengths, &bounds, &inst.costs);
    Ok(NormalizedInstance { layout, signs, bounds, costs: inst.costs.clone(), lengths, rows, small })
}

impl NormalizedInstance {
    pub fn pair(&self) -> (usize, usize) {
        (self.layout.a, self.layout.b)
    }

    pub fn edge_count(&self) -> usize {
        self.signs.len()
    }

    /// Edge set of a row: P(side, v_ab) followed by P(v, v_ab).
    pub fn support(&self, row: &GapRow) -> Vec<usize> {
        let mut edges = self.layout.side_edges(row.side, row.anchor).to_vec();
        edges.extend(self.layout.branch_edges(row.leaf));
        edges
    }

    pub fn row_lhs(&self, row: &GapRow, amounts: &[Rational]) -> Rational {
        self.support(row).into_iter().map(|e| &amounts[e]).sum()
    }

    pub fn new_lengths(&self, plan: &ModificationPlan) -> Vec<Rational> {
        self.lengths
            .iter()
            .zip(&self.signs)
            .zip(&plan.amounts)
            .map(|((l, s), x)| match s {
                EdgeSign::Increase => l + x,
                EdgeSign::Decrease => l - x,
            })
            .collect()
    }

    pub fn in_bounds(&self, plan: &ModificationPlan) -> bool {
        plan.amounts.len() == self.edge_count()
            && plan.amounts.iter().zip(&self.bounds).all(|(x, ub)| !x.is_negative() && x <= ub)
    }

    /// Gap rows violated by the plan, evaluated row by row.
    pub fn violated_rows(&self, plan: &ModificationPlan) -> Vec<(usize, Side)> {
        self.rows
            .iter()
            .filter(|row| self.row_lhs(row, &plan.amounts) < row.rhs)
            .map(|row| (row.leaf, row.side))
            .collect()
    }

    /// Same verdict as [`violated_rows`](Self::violated_rows) in a single
    /// linear pass over the modified tree.
    pub fn violations_linear(&self, plan: &ModificationPlan) -> Vec<(usize, Side)> {
        self.violations_small_with(|e| to_small(&plan.amounts[e]))
            .unwrap_or_else(|| self.layout.violations(&self.new_lengths(plan)))
    }

    /// Linear check with edge `e` moved by `amount(e)`, all in `i128`;
    /// `None` when some value does not fit.
    pub(crate) fn violations_small_with<F>(&self, amount: F) -> Option<Vec<(usize, Side)>>
    where
        F: Fn(usize) -> Option<Small>,
    {
        let small = self.small.as_ref()?;
        let lengths = (0..self.edge_count())
            .map(|e| {
                let x = amount(e)?;
                match self.signs[e] {
                    EdgeSign::Increase => small.lengths[e].checked_add(&x),
                    EdgeSign::Decrease => small.lengths[e].checked_sub(&x),
                }
            })
            .collect::<Option<Vec<_>>>()?;
        self.layout.violations_small(&lengths)
    }

    pub fn satisfies_rows_linear(&self, plan: &ModificationPlan) -> bool {
        self.violations_linear(plan).is_empty()
    }

    pub fn plan_cost(&self, plan: &ModificationPlan, objective: Objective) -> Rational {
        objective.cost(&self.costs, &plan.amounts)
    }

    /// `Err(Infeasible)` with the violated rows when even saturation fails.
    pub fn ensure_feasible(&self) -> Result<()> {
        let violations = self.violations_linear(&saturated_plan(self));
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Infeasible { violations })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModificationPlan {
    pub amounts: Vec<Rational>,
}

impl ModificationPlan {
    pub fn zero(edges: usize) -> Self {
        ModificationPlan { amounts: vec![Rational::zero(); edges] }
    }
}

/// Every row holds and every amount lies in `[0, x̄_e]`.
pub fn is_feasible(norm: &NormalizedInstance, plan: &ModificationPlan) -> bool {
    norm.in_bounds(plan)
        && norm.rows.iter().all(|row| norm.row_lhs(row, &plan.amounts) >= row.rhs)
}

pub fn saturated_plan(norm: &NormalizedInstance) -> ModificationPlan {
    ModificationPlan { amounts: norm.bounds.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_instance, InstanceParams};
    use crate::rational::int;
    use crate::tree::fixtures::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn t1_instance(costs: [i64; 3], bounds: i64) -> InverseInstance {
        InverseInstance::new(
            t1(),
            vec![A, B],
            costs.iter().map(|&c| int(c)).collect(),
            vec![int(bounds); 3],
            vec![int(bounds); 3],
            Objective::L1,
        )
        .unwrap()
    }

    fn plan(xs: &[i64]) -> ModificationPlan {
        ModificationPlan { amounts: xs.iter().map(|&x| int(x)).collect() }
    }

    #[test]
    fn normalize_t1() {
        let norm = normalize(&t1_instance([1, 1, 1], 10), A, B).unwrap();
        assert_eq!(norm.signs, vec![EdgeSign::Increase, EdgeSign::Increase, EdgeSign::Decrease]);
        assert_eq!(norm.bounds, vec![int(10), int(10), int(4)]);
        assert_eq!(norm.rows.len(), 2);
        assert_eq!((norm.rows[0].leaf, norm.rows[0].side, norm.rows[0].rhs.clone()), (V, Side::A, int(2)));
        assert_eq!(norm.support(&norm.rows[0]), vec![0, 2]);
        assert_eq!((norm.rows[1].leaf, norm.rows[1].side, norm.rows[1].rhs.clone()), (V, Side::B, int(1)));
        assert_eq!(norm.support(&norm.rows[1]), vec![1, 2]);
    }

    #[test]
    fn already_longest_pair_has_nonpositive_rows() {
        let inst = t1_instance([1, 1, 1], 10).with_targets(vec![V, B]).unwrap();
        let norm = normalize(&inst, V, B).unwrap();
        assert!(norm.rows.iter().all(|r| !r.rhs.is_positive()));
    }

    #[test]
    fn normalize_rejects_internal_vertex() {
        let inst = t1_instance([1, 1, 1], 10);
        assert_eq!(normalize(&inst, U, B).unwrap_err(), Error::NotALeaf(U));
    }

    #[test]
    fn feasibility_examples() {
        let norm = normalize(&t1_instance([1, 1, 1], 10), A, B).unwrap();
        assert!(is_feasible(&norm, &plan(&[0, 0, 2])));
        assert!(!is_feasible(&norm, &plan(&[2, 0, 0])));
        assert_eq!(norm.violated_rows(&plan(&[2, 0, 0])), vec![(V, Side::B)]);
        assert!(!is_feasible(&norm, &plan(&[0, 0, 5])), "above the nonnegativity cap");

        let blocked = normalize(&t1_instance([1, 1, 1], 0), A, B).unwrap();
        assert!(!is_feasible(&blocked, &saturated_plan(&blocked)));
        assert!(blocked.ensure_feasible().unwrap_err().is_infeasible());
    }

    #[test]
    fn saturation_examples() {
        let norm = normalize(&t1_instance([1, 1, 1], 10), A, B).unwrap();
        let sat = saturated_plan(&norm);
        assert_eq!(sat, plan(&[10, 10, 4]));
        assert!(is_feasible(&norm, &sat));

        let inst = t1_instance([1, 1, 1], 0).with_targets(vec![V, B]).unwrap();
        let norm = normalize(&inst, V, B).unwrap();
        assert_eq!(saturated_plan(&norm), plan(&[0, 0, 0]));
        assert!(is_feasible(&norm, &saturated_plan(&norm)));
    }

    #[test]
    fn objective_costs() {
        let c = [int(5), int(2), int(3)];
        let x = [int(1), int(0), int(2)];
        assert_eq!(Objective::L1.cost(&c, &x), int(11));
        assert_eq!(Objective::Chebyshev.cost(&c, &x), int(6));
        assert_eq!(Objective::HammingBottleneck.cost(&c, &x), int(5));
        assert_eq!(Objective::HammingSum.cost(&c, &x), int(8));
        for o in Objective::ALL {
            assert_eq!(Objective::from_name(o.name()), Some(o));
        }
    }

    fn random_plan(rng: &mut ChaCha8Rng, norm: &NormalizedInstance) -> ModificationPlan {
        ModificationPlan {
            amounts: norm
                .bounds
                .iter()
                .map(|ub| {
                    let k: i64 = rng.gen_range(0..=4);
                    ub * crate::rational::frac(k, 4)
                })
                .collect(),
        }
    }

    #[test]
    fn huge_values_fall_back_to_exact_arithmetic() {
        let big = int(1i64 << 62) * int(1i64 << 62) * int(4);
        let tree = t1().with_lengths(vec![big.clone(), big.clone(), &big + int(1)]).unwrap();
        let inst = InverseInstance::new(tree, vec![A, B], vec![int(1); 3], vec![int(2); 3], vec![int(2); 3], Objective::L1).unwrap();
        let norm = normalize(&inst, A, B).unwrap();
        assert!(norm.small.is_some());
        let plan = saturated_plan(&norm);
        // the path length overflows i128
        assert!(norm.violations_small_with(|e| to_small(&plan.amounts[e])).is_none());
        assert_eq!(norm.violations_linear(&plan), norm.violated_rows(&plan));
        assert!(norm.satisfies_rows_linear(&plan));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(80))]

        #[test]
        fn rows_match_criterion_on_modified_tree(seed in any::<u64>(), n in 3usize..100) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, &InstanceParams::new(n).max_len(6).max_bound(4));
            let (a, b) = (inst.targets[0], inst.targets[1]);
            let norm = normalize(&inst, a, b).unwrap();
            for _ in 0..4 {
                let p = random_plan(&mut rng, &norm);
                let modified = inst.tree.with_lengths(norm.new_lengths(&p)).unwrap();
                let check = modified.is_weakly_longest(a, b).unwrap();
                prop_assert_eq!(is_feasible(&norm, &p), check.holds);
                prop_assert_eq!(norm.violated_rows(&p), check.violations.clone());
                prop_assert_eq!(norm.layout.violations(&norm.new_lengths(&p)), check.violations.clone());
                prop_assert_eq!(norm.violations_linear(&p), check.violations);
            }
        }

        #[test]
        fn feasibility_is_monotone(seed in any::<u64>(), n in 3usize..60) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, &InstanceParams::new(n).max_len(6).max_bound(4));
            let norm = normalize(&inst, inst.targets[0], inst.targets[1]).unwrap();
            let x = random_plan(&mut rng, &norm);
            let y = ModificationPlan {
                amounts: x.amounts.iter().zip(&norm.bounds)
                    .map(|(xe, ub)| if rng.gen_bool(0.5) { ub.clone() } else { xe.clone() })
                    .collect(),
            };
            if is_feasible(&norm, &x) {
                prop_assert!(is_feasible(&norm, &y));
            }
        }

        /// Lengthening off-path edges or shortening path edges never helps.
        #[test]
        fn projection_onto_sign_pattern_dominates(seed in any::<u64>(), n in 3usize..60) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, &InstanceParams::new(n).max_len(6).max_bound(4));
            let (a, b) = (inst.targets[0], inst.targets[1]);
            let norm = normalize(&inst, a, b).unwrap();
            let m = norm.edge_count();
            let lengths = inst.tree.lengths();
            // arbitrary increases p and decreases q within the raw bounds
            let inc: Vec<Rational> = (0..m).map(|e| &inst.inc_bounds[e] * crate::rational::frac(rng.gen_range(0..=2), 2)).collect();
            let dec: Vec<Rational> = (0..m).map(|e| inst.dec_bounds[e].clone().min(lengths[e].clone()) * crate::rational::frac(rng.gen_range(0..=2), 2)).collect();
            let mixed: Vec<Rational> = (0..m).map(|e| &lengths[e] + &inc[e] - &dec[e]).collect();
            let projected_amounts: Vec<Rational> = (0..m).map(|e| match norm.signs[e] {
                EdgeSign::Increase => inc[e].clone(),
                EdgeSign::Decrease => dec[e].clone(),
            }).collect();
            let projected = norm.new_lengths(&ModificationPlan { amounts: projected_amounts.clone() });

            let slack = |ls: &[Rational]| -> Vec<Rational> {
                let depth = norm.layout.branch_sums(|e| ls[e].clone());
                let prefix = norm.layout.path_prefix(|e| ls[e].clone());
                let total = prefix.last().unwrap().clone();
                norm.rows.iter().map(|r| match r.side {
                    Side::A => &prefix[r.anchor] - &depth[r.leaf],
                    Side::B => &total - &prefix[r.anchor] - &depth[r.leaf],
                }).collect()
            };
            for (p, q) in slack(&projected).iter().zip(slack(&mixed)) {
                prop_assert!(*p >= q);
            }
            let mixed_amounts: Vec<Rational> = (0..m).map(|e| &inc[e] + &dec[e]).collect();
            for o in Objective::ALL {
                prop_assert!(o.cost(&inst.costs, &projected_amounts) <= o.cost(&inst.costs, &mixed_amounts));
            }
        }
    }
}
