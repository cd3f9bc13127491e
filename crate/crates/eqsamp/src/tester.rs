//! Sample-based ε-tests for approximate equilibrium play.
//!
//! A test answers YES exactly when the empirical distribution of the batch
//! is a `(δ + ε/2)`-equilibrium of the relevant kind: the product empirical
//! for Nash, the joint empirical for correlated and coarse correlated. With
//! enough samples (`k_required` from the thresholds module) the answer is
//! correct with probability ≥ 1−α on δ-equilibria and on distributions that
//! are not `(δ+ε)`-equilibria; in between, anything goes.

use serde::{Deserialize, Serialize};

use crate::dist::{joint_empirical, product_empirical, SampleBatch};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::regret::{is_eps_cce, is_eps_ce, is_eps_nash, RegretReport};
use crate::thresholds::{self, EquilibriumKind};

/// Parameters a test ran with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSpec {
    pub kind: EquilibriumKind,
    pub delta: f64,
    pub eps: f64,
    pub alpha: f64,
    /// Samples actually supplied.
    pub k: u64,
    /// Samples the guarantee asks for.
    pub k_required: u64,
}

/// The decision plus everything needed to audit it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    pub spec: TestSpec,
    pub answer: Answer,
    pub threshold_used: f64,
    /// Whether `k ≥ k_required`; reported, never enforced.
    pub k_sufficient: bool,
    pub measured_regret: RegretReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
}

fn check_params(delta: f64, eps: f64, alpha: f64) -> Result<()> {
    if delta < 0.0 || delta.is_nan() {
        return Err(Error::InvalidArgument("δ must be ≥ 0".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument("ε must lie in (0,1)".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument("α must lie in (0,1)".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn build(
    kind: EquilibriumKind,
    game: &Game,
    batch: &SampleBatch,
    delta: f64,
    eps: f64,
    alpha: f64,
    passed: bool,
    report: RegretReport,
) -> Result<TestVerdict> {
    let n = game.players() as u64;
    let m = game.max_actions() as u64;
    let k_required = match kind {
        EquilibriumKind::Nash => thresholds::k_nash_test(eps, alpha, n, m)?.k,
        EquilibriumKind::Correlated => thresholds::k_ce_test(eps, alpha, n, m)?.k,
        EquilibriumKind::CoarseCorrelated => thresholds::k_cce_test(eps, alpha, n, m)?.k,
    };
    let k = batch.k() as u64;
    Ok(TestVerdict {
        spec: TestSpec {
            kind,
            delta,
            eps,
            alpha,
            k,
            k_required,
        },
        answer: if passed { Answer::Yes } else { Answer::No },
        threshold_used: delta + eps / 2.0,
        k_sufficient: k >= k_required,
        measured_regret: report,
    })
}

/// Nash test: YES iff the product empirical is a `(δ+ε/2)`-Nash equilibrium.
pub fn test_nash(
    game: &Game,
    batch: &SampleBatch,
    delta: f64,
    eps: f64,
    alpha: f64,
) -> Result<TestVerdict> {
    check_params(delta, eps, alpha)?;
    let empirical = product_empirical(batch, game)?;
    let (passed, report) = is_eps_nash(game, &empirical, delta + eps / 2.0)?;
    build(EquilibriumKind::Nash, game, batch, delta, eps, alpha, passed, report)
}

/// Correlated test: YES iff the joint empirical is a `(δ+ε/2)`-CE.
pub fn test_ce(
    game: &Game,
    batch: &SampleBatch,
    delta: f64,
    eps: f64,
    alpha: f64,
) -> Result<TestVerdict> {
    check_params(delta, eps, alpha)?;
    let empirical = joint_empirical(batch, game)?.to_joint();
    let (passed, report) = is_eps_ce(game, &empirical, delta + eps / 2.0)?;
    build(EquilibriumKind::Correlated, game, batch, delta, eps, alpha, passed, report)
}

/// Coarse-correlated test: YES iff the joint empirical is a `(δ+ε/2)`-CCE.
pub fn test_cce(
    game: &Game,
    batch: &SampleBatch,
    delta: f64,
    eps: f64,
    alpha: f64,
) -> Result<TestVerdict> {
    check_params(delta, eps, alpha)?;
    let empirical = joint_empirical(batch, game)?.to_joint();
    let (passed, report) = is_eps_cce(game, &empirical, delta + eps / 2.0)?;
    build(
        EquilibriumKind::CoarseCorrelated,
        game,
        batch,
        delta,
        eps,
        alpha,
        passed,
        report,
    )
}

/// Dispatch by kind.
pub fn run_test(
    kind: EquilibriumKind,
    game: &Game,
    batch: &SampleBatch,
    delta: f64,
    eps: f64,
    alpha: f64,
) -> Result<TestVerdict> {
    match kind {
        EquilibriumKind::Nash => test_nash(game, batch, delta, eps, alpha),
        EquilibriumKind::Correlated => test_ce(game, batch, delta, eps, alpha),
        EquilibriumKind::CoarseCorrelated => test_cce(game, batch, delta, eps, alpha),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{draw_samples, Distribution, JointDistribution, ProductDistribution};
    use crate::game::{ActionProfile, ProfileIndex};
    use crate::rng::SeedInfo;
    use crate::zoo;

    fn pennies() -> Game {
        zoo::matching_pennies().game
    }

    #[test]
    fn constant_batch_fails_nash() {
        let g = pennies();
        let batch = SampleBatch {
            profiles: vec![ActionProfile(vec![0, 0]); 40],
            seed: SeedInfo::new(0, 0),
        };
        let verdict = test_nash(&g, &batch, 0.0, 0.3, 0.1).unwrap();
        assert_eq!(verdict.answer, Answer::No);
        assert!((verdict.measured_regret.players[1].nash_gain.unwrap() - 1.0).abs() < 1e-12);
        assert!(!verdict.k_sufficient);
    }

    #[test]
    fn delta_one_always_yes() {
        let g = pennies();
        let batch = SampleBatch {
            profiles: vec![ActionProfile(vec![0, 0]); 3],
            seed: SeedInfo::new(0, 0),
        };
        for f in [test_nash, test_ce, test_cce] {
            let verdict = f(&g, &batch, 1.0, 0.3, 0.1).unwrap();
            assert_eq!(verdict.answer, Answer::Yes);
        }
    }

    #[test]
    fn single_sample_with_wide_threshold_is_yes() {
        let g = pennies();
        let batch = SampleBatch {
            profiles: vec![ActionProfile(vec![0, 1])],
            seed: SeedInfo::new(0, 0),
        };
        let verdict = test_ce(&g, &batch, 0.9, 0.2, 0.1).unwrap();
        assert_eq!(verdict.answer, Answer::Yes);
    }

    #[test]
    fn verdict_matches_direct_verifier() {
        let g = pennies();
        let ne = Distribution::Product(ProductDistribution::uniform(g.action_counts()));
        let batch = draw_samples(&g, &ne, 97, SeedInfo::new(5, 1)).unwrap();
        let verdict = test_nash(&g, &batch, 0.1, 0.2, 0.1).unwrap();
        let empirical = product_empirical(&batch, &g).unwrap();
        let (expected, _) = is_eps_nash(&g, &empirical, 0.1 + 0.1).unwrap();
        assert_eq!(verdict.answer == Answer::Yes, expected);
        // determinism: same inputs, same verdict
        let again = test_nash(&g, &batch, 0.1, 0.2, 0.1).unwrap();
        assert_eq!(verdict, again);
    }

    #[test]
    fn point_mass_cce_says_no() {
        let g = pennies();
        let x = Distribution::Joint(JointDistribution::point_mass(ProfileIndex(0)));
        let batch = draw_samples(&g, &x, 50, SeedInfo::new(9, 0)).unwrap();
        let verdict = test_cce(&g, &batch, 0.0, 0.3, 0.1).unwrap();
        assert_eq!(verdict.answer, Answer::No);
    }

    #[test]
    fn parameter_validation() {
        let g = pennies();
        let batch = SampleBatch {
            profiles: vec![ActionProfile(vec![0, 0])],
            seed: SeedInfo::new(0, 0),
        };
        assert!(test_nash(&g, &batch, -0.1, 0.3, 0.1).is_err());
        assert!(test_nash(&g, &batch, 0.0, 0.0, 0.1).is_err());
        assert!(test_nash(&g, &batch, 0.0, 0.3, 1.0).is_err());
    }
}
