//! Seeded random trees and instances for tests, benchmarks and `gen`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::{InverseInstance, Objective};
use crate::rational::{frac, int, Rational};
use crate::tree::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeShape {
    /// Vertex i attaches to a uniform earlier vertex.
    Recursive,
    /// Vertex 0 is the center.
    Star,
    /// A spine with pendant leaves; long paths, many branches.
    Caterpillar,
}

/// Random topology with unit weights and integer lengths in `1..=max_len`.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, max_len: u64, shape: TreeShape) -> Tree {
    let ends = random_ends(rng, n, shape);
    let lengths = ends.iter().map(|_| int(rng.gen_range(1..=max_len) as i64)).collect();
    Tree::new(vec![int(1); n], ends, lengths).expect("generator builds trees")
}

fn random_ends<R: Rng>(rng: &mut R, n: usize, shape: TreeShape) -> Vec<(usize, usize)> {
    match shape {
        TreeShape::Recursive => (1..n).map(|i| (rng.gen_range(0..i), i)).collect(),
        TreeShape::Star => (1..n).map(|i| (0, i)).collect(),
        TreeShape::Caterpillar => {
            let spine = (n / 3).max(2).min(n);
            let mut ends: Vec<_> = (1..spine).map(|i| (i - 1, i)).collect();
            ends.extend((spine..n).map(|i| (rng.gen_range(0..spine), i)));
            ends
        }
    }
}

#[derive(Debug, Clone)]
pub struct InstanceParams {
    pub n: usize,
    pub max_len: u64,
    pub max_cost: u64,
    pub max_bound: u64,
    pub targets: usize,
    pub shape: TreeShape,
    /// Costs and bounds with denominators up to this value.
    pub max_denominator: u64,
    /// Integer vertex weights in `1..=max_weight`.
    pub max_weight: u64,
    pub objective: Objective,
}

impl InstanceParams {
    pub fn new(n: usize) -> Self {
        InstanceParams {
            n,
            max_len: 10,
            max_cost: 5,
            max_bound: 5,
            targets: 2,
            shape: TreeShape::Recursive,
            max_denominator: 1,
            max_weight: 1,
            objective: Objective::L1,
        }
    }

    pub fn max_len(mut self, v: u64) -> Self {
        self.max_len = v;
        self
    }

    pub fn max_cost(mut self, v: u64) -> Self {
        self.max_cost = v;
        self
    }

    pub fn max_bound(mut self, v: u64) -> Self {
        self.max_bound = v;
        self
    }

    pub fn targets(mut self, v: usize) -> Self {
        self.targets = v;
        self
    }

    pub fn shape(mut self, v: TreeShape) -> Self {
        self.shape = v;
        self
    }

    pub fn max_denominator(mut self, v: u64) -> Self {
        self.max_denominator = v;
        self
    }

    pub fn max_weight(mut self, v: u64) -> Self {
        self.max_weight = v;
        self
    }

    pub fn objective(mut self, v: Objective) -> Self {
        self.objective = v;
        self
    }
}

fn random_value<R: Rng>(rng: &mut R, max: u64, max_den: u64, positive: bool) -> Rational {
    let den = rng.gen_range(1..=max_den.max(1)) as i64;
    let lo = if positive { 1 } else { 0 };
    let num = rng.gen_range(lo..=(max as i64 * den).max(lo));
    frac(num, den)
}

/// A random instance whose tree has at least `targets` leaves (grown if
/// needed). Targets are distinct random leaves.
pub fn random_instance<R: Rng>(rng: &mut R, params: &InstanceParams) -> InverseInstance {
    let want = params.targets.max(2);
    let mut n = params.n.max(want + 1).max(2);
    let tree = loop {
        let ends = random_ends(rng, n, params.shape);
        let lengths = ends.iter().map(|_| int(rng.gen_range(1..=params.max_len.max(1)) as i64)).collect();
        let weights = (0..n).map(|_| int(rng.gen_range(1..=params.max_weight.max(1)) as i64)).collect();
        let tree = Tree::new(weights, ends, lengths).expect("generator builds trees");
        if tree.leaves().len() >= want {
            break tree;
        }
        n += 1;
    };
    let m = tree.edge_count();
    let costs = (0..m).map(|_| random_value(rng, params.max_cost, params.max_denominator, false)).collect();
    let inc = (0..m).map(|_| random_value(rng, params.max_bound, params.max_denominator, false)).collect();
    let dec = (0..m).map(|_| random_value(rng, params.max_bound, params.max_denominator, false)).collect();
    let mut leaves = tree.leaves();
    leaves.shuffle(rng);
    let targets = leaves[..want].to_vec();
    InverseInstance::new(tree, targets, costs, inc, dec, params.objective).expect("valid instance")
}
