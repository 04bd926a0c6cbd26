//! Inverse 2-maxian under weighted l1 cost: the gap-row system as an exact
//! linear program, plus the closed-form star solver.

pub mod pwl;
pub mod simplex;
pub mod star;

use std::fmt::Write as _;

use num_traits::One;

use crate::error::{Error, Result};
use crate::instance::{ModificationPlan, NormalizedInstance, Objective};
use crate::rational::{to_exact_string, to_f64, to_terminating_decimal, Rational};
use crate::report::{Certificate, SolveReport};
use crate::tree::Side;

pub use pwl::{minimize_pwl_convex, ConvexPwl};
pub use simplex::{check_certificate, LpCertificate, LpOutcome, LpProblem, LpRow};
pub use star::{solve_star_l1, StarCase, StarCaseResult, StarSolution};

/// One variable per edge, one `>=` row per gap row (rows with nonpositive
/// right-hand side included, so row indices match the normalized instance).
pub fn build_lp(norm: &NormalizedInstance) -> LpProblem {
    LpProblem {
        costs: norm.costs.clone(),
        upper: norm.bounds.clone(),
        rows: norm
            .rows
            .iter()
            .map(|row| LpRow {
                coeffs: norm.support(row).into_iter().map(|e| (e, Rational::one())).collect(),
                rhs: row.rhs.clone(),
            })
            .collect(),
    }
}

pub fn solve_l1(norm: &NormalizedInstance) -> Result<SolveReport> {
    norm.ensure_feasible()?;
    let problem = build_lp(norm);
    match simplex::solve(&problem)? {
        LpOutcome::Optimal(cert) => {
            let plan = ModificationPlan { amounts: cert.primal.clone() };
            Ok(SolveReport::new(norm, Objective::L1, plan, Certificate::Lp(cert)))
        }
        LpOutcome::Infeasible => {
            Err(Error::Internal("LP reports infeasible although saturation is feasible".into()))
        }
    }
}

fn lp_number(value: &Rational) -> String {
    to_terminating_decimal(value).unwrap_or_else(|| format!("{:.17e}", to_f64(value)))
}

/// The LP in CPLEX LP text format. Variables are `x<edge>`; rows are named
/// `g<leaf>_<side>`. Values without a terminating decimal expansion are
/// written rounded and listed in a header comment with their exact form.
pub fn to_lp_format(norm: &NormalizedInstance, edge_names: &[String], vertex_names: &[String]) -> String {
    let problem = build_lp(norm);
    let mut inexact = Vec::new();
    let mut num = |v: &Rational, what: String| {
        if to_terminating_decimal(v).is_none() {
            inexact.push(format!("{what} = {}", to_exact_string(v)));
        }
        lp_number(v)
    };
    let (a, b) = norm.pair();
    let mut body = String::new();
    body.push_str("Minimize\n obj:");
    for (e, c) in problem.costs.iter().enumerate() {
        let _ = write!(body, " + {} x{e}", num(c, format!("cost of x{e}")));
    }
    body.push_str("\nSubject To\n");
    for (row, lp_row) in norm.rows.iter().zip(&problem.rows) {
        let side = match row.side {
            Side::A => "a",
            Side::B => "b",
        };
        let _ = write!(body, " g{}_{side}:", row.leaf);
        for (e, _) in &lp_row.coeffs {
            let _ = write!(body, " + x{e}");
        }
        if lp_row.coeffs.is_empty() {
            body.push_str(" 0 x0");
        }
        let _ = writeln!(body, " >= {}", num(&lp_row.rhs, format!("rhs of g{}_{side}", row.leaf)));
    }
    body.push_str("Bounds\n");
    for (e, u) in problem.upper.iter().enumerate() {
        let _ = writeln!(body, " 0 <= x{e} <= {}", num(u, format!("upper bound of x{e}")));
    }
    body.push_str("End\n");

    let mut out = String::new();
    let _ = writeln!(out, "\\ inverse 2-maxian, l1 cost, pair {} {}", vertex_names[a], vertex_names[b]);
    for (e, name) in edge_names.iter().enumerate() {
        let _ = writeln!(out, "\\ x{e} = edge {name} ({:+})", norm.signs[e].as_i8());
    }
    for line in &inexact {
        let _ = writeln!(out, "\\ rounded: {line}");
    }
    out.push_str(&body);
    out
}
