//! Transition kernels for the vanilla, exponentially weighted and Laplacian
//! walks, and the loop that runs them.

mod kernel;
mod run;

pub use kernel::{
    degree_distribution, exponential_row, laplacian_eps_row, laplacian_proposal_row, laplacian_row, vanilla_row,
    KernelKind, SparseRow, WalkKernel, LOG_SPACE_THRESHOLD,
};
pub use run::{
    occupation_distribution, run_walk, run_walk_to, total_variation, write_trace_csv, HitTime, RecordPolicy,
    WalkTrace,
};
