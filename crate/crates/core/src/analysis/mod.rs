//! Closed-form convergence and hitting-time bounds, and exact oracles on
//! small graphs to check them against.

mod bounds;
mod oracle;
mod report;

pub use bounds::{
    dominance_m, highprob_hitting_bound, hitting_bound_exponential, hitting_bound_laplacian, theta_exponential,
    theta_laplacian, tv_bound_exponential, tv_bound_laplacian, BoundFamily, BoundInputs,
};
pub use oracle::{
    dense_kernel, dense_kernel_capped, exact_expected_hitting, exact_tv_curve, stationary_distribution, HittingTimes,
    DEFAULT_ORACLE_CAP,
};
pub use report::{bound_report, write_bound_report, BoundRecord};
