//! The symmetric weight program and the analytic log-weights.

mod program;
pub mod simplex;
mod weights;

pub use program::{
    build_lp, build_unfolded_lp, lower_bound_from_lp, solve_lp, ClassKey, Constraint, Equality, LpProblem,
    LpResultFile, LpSolution, Variables,
};
pub use weights::{
    h_function_analysis, verify_analytic_bound, AnalyticReport, AnalyticViolation, HAnalysis, WeightVector, Weights,
    ANALYTIC_TOLERANCE,
};
