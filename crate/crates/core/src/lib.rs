//! Forward and inverse p-maxian problems on trees with variable edge lengths.
//!
//! Given a tree and a set of target leaves, the inverse solvers find the
//! cheapest edge-length modification after which some pair of targets spans
//! a longest path, which makes the targets a p-maxian. Four cost models are
//! supported: weighted l1 ([`l1`]), Chebyshev ([`cheb`]), and bottleneck or
//! weighted-sum Hamming ([`hamming`]). All arithmetic is exact.

pub mod cheb;
pub mod error;
pub mod hamming;
pub mod instance;
pub mod l1;
pub mod oracle;
pub mod pmaxian;
pub mod random;
pub mod rational;
pub mod report;
pub mod tree;

pub use error::{Error, Result};
pub use instance::{
    is_feasible, normalize, saturated_plan, EdgeSign, GapRow, InverseInstance, ModificationPlan,
    NormalizedInstance, Objective,
};
pub use pmaxian::{solve_inverse_pmaxian, solve_pair, verify_plan, verify_solution, Verification};
pub use rational::Rational;
pub use report::{Certificate, SolveReport};
pub use tree::{CriterionCheck, LongestPathResult, PairLayout, PathQuery, Side, Tree};
