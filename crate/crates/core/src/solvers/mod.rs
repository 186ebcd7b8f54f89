//! Exact coloring and bin counting for small instances.

mod bins;
mod chromatic;

pub use bins::{
    decreasing_volume_order, enumerate_configurations, enumerate_configurations_budgeted,
    first_fit_bins, first_fit_bins_budgeted, min_bins_exact, min_bins_exact_budgeted, BinSolution,
    Configuration, MAX_CONFIGURATION_BOXES,
};
pub use chromatic::{chromatic_number, chromatic_number_budgeted, greedy_clique, Coloring};
