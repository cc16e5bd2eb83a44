//! Convex time-share optimization.

mod cost;
mod link;
mod problems;
mod solver;

pub use cost::{dual_stream_curvature, single_stream_curvature, UserCost};
pub use link::Link;
pub use problems::{AntennaSelection, SelectedShares, TdmaInstance};
pub use solver::{BarrierSettings, ShareProblem, ShareSolution, SolveStatus};
