//! The quotient sector complex and the countable Markov shift on its type-1
//! directed edges: fold-rule weights and exact path-count dynamic programming.

mod dp;
mod sector;
mod table;

pub use dp::{
    dp_f, dp_f_series, dp_f_with, dp_g, dp_g_series, dp_g_with, dp_profiles, dp_profiles_with,
    dp_taboo_profile, three_step_coefficients, three_step_expected, three_step_feeders,
    three_step_raw, CountProfile, ThreeStep, Transfer,
};
pub use sector::{fold, half, QVertex, QuotientEdge, Step, BASE_EDGE, ORIGIN};
pub use table::{build_graph, edge_transitions, interior_weight, WeightMismatch, WeightTable};
