//! Rayleigh-fading Monte Carlo: channel draws, precoder gains, outage
//! probabilities and gain-distribution checks.

pub mod channel;
pub mod gains;
pub mod outage;
pub mod validate;

pub use channel::{sample_channel, shard_rng, ChannelMatrix};
pub use gains::{dpc_gains, zf_gains, EffectiveGains, GainSampler};
pub use outage::{
    confidence_interval, db_to_linear, outage_probability, outage_sweep, scalar_rayleigh_outage,
    weighted_capacity, MonteCarloPlan, OperatingPoint, OutageEstimate,
};
pub use validate::{validate_gain_distribution, validate_gains, GainReport};
