//! Spin systems sampled through the polymer engine: the hard-core model on
//! unbalanced bipartite graphs and the ferromagnetic Potts model on
//! expanders.

mod hardcore;
mod potts;

pub use hardcore::{
    check_unbalanced_condition, hardcore_lambda_bound, hardcore_polymer_weight,
    sample_hardcore_unbalanced, HardcoreParams, HardcoreSample, HardcoreSampler, UnbalancedReport,
};
pub use potts::{
    check_potts_condition, potts_cost, potts_polymer_weight, sample_potts_expander,
    PottsConditionReport, PottsParams, PottsSample, PottsSampler,
};
