use crate::cheb::ThresholdTrace;
use crate::hamming::{BottleneckTrace, SumTrace};
use crate::instance::{ModificationPlan, NormalizedInstance, Objective};
use crate::l1::{LpCertificate, StarCaseResult};
use crate::rational::Rational;

/// Evidence that accompanies an optimal plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Lp(LpCertificate),
    Star(StarCaseResult),
    Chebyshev(ThresholdTrace),
    Bottleneck(BottleneckTrace),
    HammingSum(SumTrace),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Lp(_) => "lp-duality",
            Certificate::Star(_) => "star-case",
            Certificate::Chebyshev(_) => "threshold-trace",
            Certificate::Bottleneck(_) => "bottleneck-trace",
            Certificate::HammingSum(_) => "branch-and-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub pair: (usize, usize),
    pub objective: Objective,
    pub plan: ModificationPlan,
    pub cost: Rational,
    pub certificate: Certificate,
}

impl SolveReport {
    /// Cost is recomputed from the plan.
    pub fn new(
        norm: &NormalizedInstance,
        objective: Objective,
        plan: ModificationPlan,
        certificate: Certificate,
    ) -> Self {
        let cost = norm.plan_cost(&plan, objective);
        SolveReport { pair: norm.pair(), objective, plan, cost, certificate }
    }
}
