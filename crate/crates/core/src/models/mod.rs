//! Random edge-subset models on finite graphs.

mod distribution;
mod domination;
mod fk;
mod loop_o1;
mod rng;
mod tree;

pub use distribution::{check_probability, tv_distance, SubsetDistribution, SubsetSampler, DEFAULT_EDGE_CAP};
pub use domination::{
    check_domination, check_domination_sampled, monotone_events, DominationReport, DOMINATION_TOLERANCE,
    EXHAUSTIVE_MAX_EDGES,
};
pub use fk::{
    bernoulli_from_uniforms, bernoulli_sample, fk_exact, fk_exact_capped, fk_glauber, fk_glauber_histogram,
    heat_bath_open_probability, uniforms, FkChain,
};
pub use loop_o1::{
    fk_parameter_for, identity_gap, loop_o1_exact, loop_parameter_for, loop_via_fk, ues_coin_count, ues_coinflip,
    ues_coinflip_from_coins, ues_pushforward, ues_spanning_tree, ues_spanning_tree_from_coins, FkSource,
    GeneratorProvider, LoopViaFk, UesMethod,
};
pub use rng::RngStream;
pub use tree::tree_survival;
