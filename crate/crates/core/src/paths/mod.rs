//! Solvers for ordered loose paths on a realised hypergraph, plus the lazy
//! greedy simulation that never builds one.

mod count;
mod exact;
mod greedy;
mod unit;

pub use count::{count_paths, PathCount};
pub use exact::{brute_force_lmax, brute_force_lmax_with_limit, exact_lmax, PathWitness, BRUTE_FORCE_EDGE_LIMIT};
pub use greedy::{
    greedy_explicit, greedy_lazy, min_extension_lengths, sample_extension, sample_extension_with,
    Extension, GreedyStep, GreedyTrace, MinExtensions,
};
pub use unit::{unit_union_bruteforce, unit_union_greedy, UnitUnion, UNIT_BRUTE_FORCE_MAX_N};
