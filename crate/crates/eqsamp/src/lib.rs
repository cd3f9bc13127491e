//! Equilibrium play, sampled.
//!
//! Tools for finite normal-form games: ε-equilibrium verification (Nash,
//! correlated, coarse correlated), i.i.d. sampling and empirical
//! distributions, closed-form sample-size thresholds, sample-based
//! equilibrium tests, an exhaustive k-uniform equilibrium search, tail-bound
//! checks for sampled product measures, and a seeded Monte Carlo experiment
//! harness. The `eqsamp` binary exposes all of it on the command line.

pub mod concentration;
pub mod dist;
pub mod error;
pub mod experiments;
pub mod game;
pub mod regret;
pub mod rng;
pub mod solver;
pub mod tester;
pub mod thresholds;
pub mod zoo;

pub use dist::{
    draw_samples, joint_empirical, product_empirical, Distribution, JointDistribution,
    KUniformJoint, ProductDistribution, SampleBatch,
};
pub use error::{Error, Result};
pub use game::{ActionProfile, Game, ProfileIndex};
pub use regret::{
    is_eps_cce, is_eps_ce, is_eps_nash, nash_deviation_gain, RegretReport, SwitchingRule,
};
pub use rng::SeedInfo;
pub use thresholds::{EquilibriumKind, ThresholdPurpose, ThresholdResult};
