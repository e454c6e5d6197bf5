//! Distance-limited shortcutting, repeated diameter reduction and the
//! reachability driver built on them.

mod algo;
mod diam;
mod params;
mod reach;
mod schedule;

pub use algo::{par_sc, Abort, Budget, BudgetKind, ParScOptions, ParScOutput, ParScStats};
pub use diam::{par_diam, DiamConfig, DiamError, ParDiamOutput};
pub use params::{
    ceil_two_thirds, default_budgets, default_tag_cap, make_params, paper_distance, ParScParams,
    ParamError, ParamOverrides, Profile,
};
pub use reach::{default_hop_cap, las_vegas, reachability, Reach, ReachConfig, ReachError};
pub use schedule::{
    draw_distance, group_size, half_length, layer_for, pivot_schedule, Group, PivotSchedule,
};
