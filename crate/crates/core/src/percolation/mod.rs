//! Weighted graphlet sampling by subcritical vertex percolation.
//!
//! A breadth-first exploration keeps each newly reached vertex with
//! probability `p_hat`; the resulting cluster `gamma` appears with probability
//! `(p_hat/q)^|gamma| (1 - p_hat)^|boundary|`. A rejection filter then
//! cancels the boundary term, leaving a law proportional to
//! `lambda^|gamma| f(gamma)`. The search for `p_hat` succeeds exactly when
//! `lambda` is below [`critical_threshold`].

mod explore;
mod graphlet;
mod params;
mod sampler;

pub use explore::Explorer;
pub use graphlet::{Color, LabeledGraphlet, WeightSpec};
pub use params::{
    critical_threshold, effective_delta, find_percolation_param, g, PercolationParams,
};
pub use sampler::{
    acceptance_probability, sample_rooted, sample_unrooted, RootedSampler, Sample, UnrootedSampler,
};
