//! Independent oracles: brute-force enumeration, exact distributions,
//! statistical distances, closed-form subtree counts and the
//! sampling-to-counting partition function estimator.

pub mod enumerate;
mod estimator;
mod exact;
pub mod fixtures;
mod report;
mod stats;
mod subtree;
pub mod suites;

pub use estimator::{
    estimate_partition_function, samples_per_ratio, ZEstimate, MAX_SAMPLES_PER_RATIO,
};
pub use exact::{
    bichromatic_edges, exact_hardcore_distribution, exact_polymer_distribution,
    exact_potts_majority_distribution, exact_rooted_distribution, exact_unrooted_distribution,
    majority_color, z_f64, ExactDistribution, GraphletKey,
};
pub use report::VerificationReport;
pub use stats::{
    chi_square, expected_exact_tv, tv_between, tv_distance, within_binomial_band, ChiSquare,
    Empirical,
};
pub use subtree::{brute_force_subtree_count, regular_tree, tree_subtree_count};
