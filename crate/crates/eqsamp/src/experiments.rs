//! Seeded Monte Carlo experiments over the zoo instances, reported as
//! fixed-schema CSV rows.
//!
//! Every experiment derives the stream for trial `t` at sample size `k` as
//! `(k << 32) | t`, so results are independent of evaluation order and any
//! single trial can be replayed in isolation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{
    draw_samples, joint_empirical, product_empirical, Distribution, SampleBatch,
};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::regret::{is_eps_cce, is_eps_ce, is_eps_nash};
use crate::rng::SeedInfo;
use crate::tester::{run_test, Answer};
use crate::thresholds::EquilibriumKind;
use crate::zoo;

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.959963984540054;
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the degenerate endpoints are exact; don't leak rounding dust
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// A success count with its rate and 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateStat {
    pub successes: u64,
    pub trials: u64,
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

impl RateStat {
    pub fn new(successes: u64, trials: u64) -> Self {
        let (wilson_lo, wilson_hi) = wilson_interval(successes, trials);
        Self {
            successes,
            trials,
            rate: successes as f64 / trials as f64,
            wilson_lo,
            wilson_hi,
        }
    }
}

/// One line of the experiment CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub experiment: String,
    pub instance: String,
    pub kind: String,
    pub eps: f64,
    pub delta: f64,
    pub alpha: Option<f64>,
    pub k: u64,
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub seed: u64,
}

impl ExperimentRow {
    #[allow(clippy::too_many_arguments)]
    fn from_stat(
        experiment: &str,
        instance: &str,
        kind: &str,
        eps: f64,
        delta: f64,
        alpha: Option<f64>,
        k: u64,
        stat: RateStat,
        seed: u64,
    ) -> Self {
        Self {
            experiment: experiment.to_string(),
            instance: instance.to_string(),
            kind: kind.to_string(),
            eps,
            delta,
            alpha,
            k,
            trials: stat.trials,
            successes: stat.successes,
            rate: stat.rate,
            wilson_lo: stat.wilson_lo,
            wilson_hi: stat.wilson_hi,
            seed,
        }
    }
}

/// Fixed-schema CSV used by every experiment.
pub fn experiment_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(
        "experiment,instance,kind,eps,delta,alpha,k,trials,successes,rate,wilson_lo,wilson_hi,seed\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            r.instance,
            r.kind,
            r.eps,
            r.delta,
            r.alpha.map(|a| a.to_string()).unwrap_or_default(),
            r.k,
            r.trials,
            r.successes,
            r.rate,
            r.wilson_lo,
            r.wilson_hi,
            r.seed
        ));
    }
    out
}

fn trial_seed(master_seed: u64, k: u64, trial: u64) -> SeedInfo {
    debug_assert!(k < (1 << 32) && trial < (1 << 32));
    SeedInfo::new(master_seed, (k << 32) | trial)
}

/// Whether the empirical object of a batch passes the ε-verifier of `kind`
/// (product empirical for Nash, joint empirical otherwise).
pub fn empirical_passes(
    game: &Game,
    batch: &SampleBatch,
    kind: EquilibriumKind,
    eps: f64,
) -> Result<bool> {
    Ok(match kind {
        EquilibriumKind::Nash => {
            let empirical = product_empirical(batch, game)?;
            is_eps_nash(game, &empirical, eps)?.0
        }
        EquilibriumKind::Correlated => {
            let empirical = joint_empirical(batch, game)?.to_joint();
            is_eps_ce(game, &empirical, eps)?.0
        }
        EquilibriumKind::CoarseCorrelated => {
            let empirical = joint_empirical(batch, game)?.to_joint();
            is_eps_cce(game, &empirical, eps)?.0
        }
    })
}

/// Convergence curve: success = sampled empirical play is an ε-equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCurve {
    pub instance: String,
    pub kind: EquilibriumKind,
    pub eps: f64,
    pub master_seed: u64,
    pub rows: Vec<(u64, RateStat)>,
}

/// For each `k` in the grid, sample `trials` batches from `source` and count
/// how often the empirical object passes the ε-verifier.
#[allow(clippy::too_many_arguments)]
pub fn run_convergence(
    game: &Game,
    source: &Distribution,
    instance: &str,
    kind: EquilibriumKind,
    eps: f64,
    k_grid: &[u64],
    trials: u64,
    master_seed: u64,
) -> Result<ConvergenceCurve> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be ≥ 1".into()));
    }
    if k_grid.is_empty() || k_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "k grid must be nonempty and ascending".into(),
        ));
    }
    let mut rows = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let mut successes = 0u64;
        for trial in 0..trials {
            let batch = draw_samples(game, source, k as usize, trial_seed(master_seed, k, trial))?;
            if empirical_passes(game, &batch, kind, eps)? {
                successes += 1;
            }
        }
        rows.push((k, RateStat::new(successes, trials)));
    }
    Ok(ConvergenceCurve {
        instance: instance.to_string(),
        kind,
        eps,
        master_seed,
        rows,
    })
}

impl ConvergenceCurve {
    pub fn rows(&self) -> Vec<ExperimentRow> {
        self.rows
            .iter()
            .map(|&(k, stat)| {
                ExperimentRow::from_stat(
                    "convergence",
                    &self.instance,
                    self.kind.label(),
                    self.eps,
                    0.0,
                    None,
                    k,
                    stat,
                    self.master_seed,
                )
            })
            .collect()
    }
}

/// Per-pair regrets in a matching-pennies pair whose players' empirical
/// frequencies of action 0 are `c_even/k` and `c_odd/k`. Both values are
/// clamped at the identity deviation, so they are ≥ 0.
pub(crate) fn pair_regrets(c_even: u64, c_odd: u64, k: u64) -> (f64, f64) {
    let p = c_even as f64 / k as f64;
    let q = c_odd as f64 / k as f64;
    let matcher_payoff = p * q + (1.0 - p) * (1.0 - q);
    let matcher = q.max(1.0 - q) - matcher_payoff;
    let mismatcher = p.max(1.0 - p) - (1.0 - matcher_payoff);
    (matcher.max(0.0), mismatcher.max(0.0))
}

/// Statistics for the many-pairs lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairsLowerBound {
    pub n_pairs: usize,
    pub k: u64,
    pub eps: f64,
    pub master_seed: u64,
    /// Frequency that at least one player's empirical marginal is pure.
    pub some_player_pure: RateStat,
    /// Frequency that the product empirical is an ε-CCE of the pairs game.
    pub cce_pass: RateStat,
}

/// Sample the all-uniform equilibrium of the pairs game and measure how often
/// empirical play survives as an ε-equilibrium.
///
/// Payoffs only couple partners, so regrets factor through the pairs; the
/// dense game is never materialized and thousands of players are fine.
pub fn run_lower_bound_ex_n(
    n_pairs: usize,
    k: u64,
    eps: f64,
    trials: u64,
    master_seed: u64,
) -> Result<PairsLowerBound> {
    if n_pairs == 0 || k == 0 || trials == 0 {
        return Err(Error::InvalidArgument(
            "n_pairs, k and trials must be ≥ 1".into(),
        ));
    }
    let mut pure_trials = 0u64;
    let mut pass_trials = 0u64;
    for trial in 0..trials {
        let mut rng = trial_seed(master_seed, k, trial).rng();
        let mut any_pure = false;
        let mut all_pairs_ok = true;
        for _ in 0..n_pairs {
            let mut counts = [0u64; 2];
            for slot in &mut counts {
                for _ in 0..k {
                    if rng.gen::<f64>() < 0.5 {
                        *slot += 1;
                    }
                }
            }
            for &c in &counts {
                if c == 0 || c == k {
                    any_pure = true;
                }
            }
            let (r1, r2) = pair_regrets(counts[0], counts[1], k);
            if r1.max(r2) > eps + crate::regret::VERIFIER_TOL {
                all_pairs_ok = false;
            }
        }
        if any_pure {
            pure_trials += 1;
        }
        if all_pairs_ok {
            pass_trials += 1;
        }
    }
    Ok(PairsLowerBound {
        n_pairs,
        k,
        eps,
        master_seed,
        some_player_pure: RateStat::new(pure_trials, trials),
        cce_pass: RateStat::new(pass_trials, trials),
    })
}

impl PairsLowerBound {
    pub fn rows(&self) -> Vec<ExperimentRow> {
        let instance = format!("pairs_matching_pennies({})", self.n_pairs);
        vec![
            ExperimentRow::from_stat(
                "pairs_pure_marginal",
                &instance,
                "cce",
                self.eps,
                0.0,
                None,
                self.k,
                self.some_player_pure,
                self.master_seed,
            ),
            ExperimentRow::from_stat(
                "pairs_cce_pass",
                &instance,
                "cce",
                self.eps,
                0.0,
                None,
                self.k,
                self.cce_pass,
                self.master_seed,
            ),
        ]
    }
}

/// Statistics for the covering-subsets lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetLowerBound {
    pub b: usize,
    pub k: u64,
    pub eps: f64,
    pub master_seed: u64,
    /// Frequency that player 1's empirical support has ≤ b actions.
    pub support_le_b: RateStat,
    /// Frequency that the product empirical passes the ε check.
    pub pass: RateStat,
    /// Whether every small-support trial failed the verifier.
    pub flagged_all_fail: bool,
}

/// Sample the uniform equilibrium of [`zoo::althofer_game`] and measure how
/// often a small player-1 support appears and how often empirical play passes.
pub fn run_lower_bound_ex_al(
    b: usize,
    k: u64,
    eps: f64,
    trials: u64,
    master_seed: u64,
) -> Result<SubsetLowerBound> {
    if k == 0 || trials == 0 {
        return Err(Error::InvalidArgument("k and trials must be ≥ 1".into()));
    }
    let instance = zoo::althofer_game(b)?;
    let game = &instance.game;
    let source = instance.distribution("uniform_ne")?;
    let mut small_support = 0u64;
    let mut passes = 0u64;
    let mut flagged_all_fail = true;
    for trial in 0..trials {
        let batch = draw_samples(game, source, k as usize, trial_seed(master_seed, k, trial))?;
        let empirical = product_empirical(&batch, game)?;
        let support = empirical.factor(0).iter().filter(|&&p| p > 0.0).count();
        let flagged = support <= b;
        if flagged {
            small_support += 1;
        }
        let joint = empirical.to_joint(game)?;
        let (ok, _) = is_eps_cce(game, &joint, eps)?;
        if ok {
            passes += 1;
            if flagged {
                flagged_all_fail = false;
            }
        }
    }
    Ok(SubsetLowerBound {
        b,
        k,
        eps,
        master_seed,
        support_le_b: RateStat::new(small_support, trials),
        pass: RateStat::new(passes, trials),
        flagged_all_fail,
    })
}

impl SubsetLowerBound {
    pub fn rows(&self) -> Vec<ExperimentRow> {
        let instance = format!("althofer({})", self.b);
        vec![
            ExperimentRow::from_stat(
                "subset_support_le_b",
                &instance,
                "cce",
                self.eps,
                0.0,
                None,
                self.k,
                self.support_le_b,
                self.master_seed,
            ),
            ExperimentRow::from_stat(
                "subset_cce_pass",
                &instance,
                "cce",
                self.eps,
                0.0,
                None,
                self.k,
                self.pass,
                self.master_seed,
            ),
        ]
    }
}

/// Number of dummy values (player 1 coordinate) sampled exactly once.
pub fn count_exactly_once_dummies(batch: &SampleBatch, m: usize) -> u64 {
    let mut counts = vec![0u64; m];
    for profile in &batch.profiles {
        counts[profile.0[0] % m] += 1;
    }
    counts.iter().filter(|&&c| c == 1).count() as u64
}

/// Number of samples whose dummy pair `(d₁, d₂)` appears exactly once in
/// both coordinates: `d₁` once among all first coordinates and `d₂` once
/// among all second coordinates.
pub fn count_exactly_once_pairs(batch: &SampleBatch, m: usize) -> u64 {
    let mut first = vec![0u64; m];
    let mut second = vec![0u64; m];
    for profile in &batch.profiles {
        first[profile.0[0] % m] += 1;
        second[profile.0[1] % m] += 1;
    }
    batch
        .profiles
        .iter()
        .filter(|p| first[p.0[0] % m] == 1 && second[p.0[1] % m] == 1)
        .count() as u64
}

/// Statistics for sampling the dummy game's mixed equilibrium in search of
/// correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeToCeStats {
    pub m: usize,
    pub k: u64,
    pub eps: f64,
    pub trials: u64,
    pub master_seed: u64,
    /// Mean number of exactly-once dummy pairs per trial.
    pub exactly_once_pair_mean: f64,
    pub exactly_once_pair_total: u64,
    /// Frequency that the joint empirical is an ε-correlated equilibrium.
    pub ce_pass: RateStat,
}

/// Sample `k` profiles from the uniform equilibrium of
/// [`zoo::dummy_matching_pennies`], count exactly-once dummy pairs, and
/// check the joint empirical for ε-correlated equilibrium.
pub fn run_ne_to_ce(
    m: usize,
    k: u64,
    eps: f64,
    trials: u64,
    master_seed: u64,
) -> Result<NeToCeStats> {
    if k == 0 || trials == 0 {
        return Err(Error::InvalidArgument("k and trials must be ≥ 1".into()));
    }
    let instance = zoo::dummy_matching_pennies(m)?;
    let game = &instance.game;
    let source = instance.distribution("uniform_ne")?;
    let mut total_pairs = 0u64;
    let mut passes = 0u64;
    for trial in 0..trials {
        let batch = draw_samples(game, source, k as usize, trial_seed(master_seed, k, trial))?;
        total_pairs += count_exactly_once_pairs(&batch, m);
        let joint = joint_empirical(&batch, game)?.to_joint();
        let (ok, _) = is_eps_ce(game, &joint, eps)?;
        if ok {
            passes += 1;
        }
    }
    Ok(NeToCeStats {
        m,
        k,
        eps,
        trials,
        master_seed,
        exactly_once_pair_mean: total_pairs as f64 / trials as f64,
        exactly_once_pair_total: total_pairs,
        ce_pass: RateStat::new(passes, trials),
    })
}

impl NeToCeStats {
    pub fn rows(&self) -> Vec<ExperimentRow> {
        let instance = format!("dummy_matching_pennies({})", self.m);
        // the count statistic is reported per dummy slot so the rate column
        // stays in [0,1]
        let slots = self.trials * self.m as u64;
        vec![
            ExperimentRow::from_stat(
                "ne_to_ce_exactly_once_pairs",
                &instance,
                "ce",
                self.eps,
                0.0,
                None,
                self.k,
                RateStat::new(self.exactly_once_pair_total, slots),
                self.master_seed,
            ),
            ExperimentRow::from_stat(
                "ne_to_ce_ce_pass",
                &instance,
                "ce",
                self.eps,
                0.0,
                None,
                self.k,
                self.ce_pass,
                self.master_seed,
            ),
        ]
    }
}

/// One row of the ε-dependence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsDependenceRow {
    pub k: u64,
    /// Deviation threshold `1/√k`.
    pub threshold: f64,
    pub stat: RateStat,
}

/// Statistics for the sampling-resolution floor on matching pennies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsDependence {
    pub trials: u64,
    pub master_seed: u64,
    pub rows: Vec<EpsDependenceRow>,
}

/// Sample the uniform equilibrium of matching pennies and record how often
/// player 1's empirical frequency misses 1/2 by at least `1/√k`.
pub fn run_eps_dependence(
    k_grid: &[u64],
    trials: u64,
    master_seed: u64,
) -> Result<EpsDependence> {
    if trials == 0 || k_grid.is_empty() {
        return Err(Error::InvalidArgument(
            "trials and k grid must be nonempty".into(),
        ));
    }
    let mut rows = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be ≥ 1".into()));
        }
        let threshold = 1.0 / (k as f64).sqrt();
        let mut hits = 0u64;
        for trial in 0..trials {
            let mut rng = trial_seed(master_seed, k, trial).rng();
            let mut count0 = 0u64;
            for _ in 0..k {
                // player 1's coordinate of a uniform profile draw
                if rng.gen::<f64>() < 0.5 {
                    count0 += 1;
                }
                let _ = rng.gen::<f64>(); // player 2's coordinate, discarded
            }
            let deviation = (count0 as f64 / k as f64 - 0.5).abs();
            if deviation >= threshold {
                hits += 1;
            }
        }
        rows.push(EpsDependenceRow {
            k,
            threshold,
            stat: RateStat::new(hits, trials),
        });
    }
    Ok(EpsDependence {
        trials,
        master_seed,
        rows,
    })
}

impl EpsDependence {
    pub fn rows(&self) -> Vec<ExperimentRow> {
        self.rows
            .iter()
            .map(|r| {
                ExperimentRow::from_stat(
                    "eps_dependence",
                    "matching_pennies",
                    "nash",
                    r.threshold,
                    0.0,
                    None,
                    r.k,
                    r.stat,
                    self.master_seed,
                )
            })
            .collect()
    }
}

/// Operating characteristic of a sample-based equilibrium test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCharacteristics {
    pub instance: String,
    pub kind: EquilibriumKind,
    pub delta: f64,
    pub eps: f64,
    pub alpha: f64,
    pub k: u64,
    pub master_seed: u64,
    /// YES frequency when sampling the equilibrium fixture.
    pub yes_rate: RateStat,
    /// NO frequency when sampling the far-from-equilibrium fixture.
    pub no_rate: RateStat,
}

/// Run the test `trials` times against a δ-equilibrium source (expect YES)
/// and a non-(δ+ε)-equilibrium source (expect NO) at sample size `k`.
#[allow(clippy::too_many_arguments)]
pub fn run_test_characteristics(
    game: &Game,
    yes_source: &Distribution,
    no_source: &Distribution,
    instance: &str,
    kind: EquilibriumKind,
    delta: f64,
    eps: f64,
    alpha: f64,
    k: u64,
    trials: u64,
    master_seed: u64,
) -> Result<TestCharacteristics> {
    if trials == 0 || k == 0 {
        return Err(Error::InvalidArgument("k and trials must be ≥ 1".into()));
    }
    let mut yes = 0u64;
    let mut no = 0u64;
    for trial in 0..trials {
        let batch = draw_samples(game, yes_source, k as usize, trial_seed(master_seed, k, 2 * trial))?;
        if run_test(kind, game, &batch, delta, eps, alpha)?.answer == Answer::Yes {
            yes += 1;
        }
        let batch = draw_samples(
            game,
            no_source,
            k as usize,
            trial_seed(master_seed, k, 2 * trial + 1),
        )?;
        if run_test(kind, game, &batch, delta, eps, alpha)?.answer == Answer::No {
            no += 1;
        }
    }
    Ok(TestCharacteristics {
        instance: instance.to_string(),
        kind,
        delta,
        eps,
        alpha,
        k,
        master_seed,
        yes_rate: RateStat::new(yes, trials),
        no_rate: RateStat::new(no, trials),
    })
}

impl TestCharacteristics {
    pub fn rows(&self) -> Vec<ExperimentRow> {
        vec![
            ExperimentRow::from_stat(
                "test_yes_on_equilibrium",
                &self.instance,
                self.kind.label(),
                self.eps,
                self.delta,
                Some(self.alpha),
                self.k,
                self.yes_rate,
                self.master_seed,
            ),
            ExperimentRow::from_stat(
                "test_no_on_far",
                &self.instance,
                self.kind.label(),
                self.eps,
                self.delta,
                Some(self.alpha),
                self.k,
                self.no_rate,
                self.master_seed,
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ProductDistribution;
    use crate::zoo;

    #[test]
    fn wilson_known_values() {
        // 8 of 10: interval straddles the point estimate asymmetrically
        let (lo, hi) = wilson_interval(8, 10);
        assert!(lo < 0.8 && 0.8 < hi);
        assert!((lo - 0.4901625).abs() < 1e-4);
        assert!((hi - 0.9433178).abs() < 1e-4);
        // degenerate counts stay inside [0,1]
        let (lo, hi) = wilson_interval(0, 20);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
        let (lo, hi) = wilson_interval(20, 20);
        assert!(lo < 1.0);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn pair_regrets_match_dense_verifier() {
        let inst = zoo::pairs_matching_pennies(1).unwrap();
        let g = &inst.game;
        let k = 6u64;
        for c0 in 0..=k {
            for c1 in 0..=k {
                let p = c0 as f64 / k as f64;
                let q = c1 as f64 / k as f64;
                let x = ProductDistribution::new(vec![vec![p, 1.0 - p], vec![q, 1.0 - q]])
                    .unwrap();
                let (_, report) = is_eps_nash(g, &x, 0.0).unwrap();
                let (r1, r2) = pair_regrets(c0, c1, k);
                assert!((report.players[0].nash_gain.unwrap() - r1).abs() < 1e-12);
                assert!((report.players[1].nash_gain.unwrap() - r2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn convergence_is_monotone_on_pennies() {
        let inst = zoo::matching_pennies();
        let source = inst.distribution("uniform_ne").unwrap();
        let curve = run_convergence(
            &inst.game,
            source,
            &inst.name,
            EquilibriumKind::Nash,
            0.3,
            &[4, 64, 620],
            100,
            7,
        )
        .unwrap();
        let rates: Vec<f64> = curve.rows.iter().map(|&(_, s)| s.rate).collect();
        // nondecreasing within generous Monte Carlo noise
        assert!(rates[0] <= rates[1] + 0.15);
        assert!(rates[1] <= rates[2] + 0.15);
        assert!(rates[2] >= 0.9);
    }

    #[test]
    fn single_sample_from_mixed_equilibrium_never_passes() {
        // every pure profile of matching pennies gives someone a unit gain
        let inst = zoo::matching_pennies();
        let source = inst.distribution("uniform_ne").unwrap();
        let curve = run_convergence(
            &inst.game,
            source,
            &inst.name,
            EquilibriumKind::Nash,
            0.3,
            &[1],
            200,
            11,
        )
        .unwrap();
        assert_eq!(curve.rows[0].1.successes, 0);
    }

    #[test]
    fn csv_shape_and_determinism() {
        let stats = run_eps_dependence(&[4, 16], 50, 3).unwrap();
        let again = run_eps_dependence(&[4, 16], 50, 3).unwrap();
        assert_eq!(experiment_csv(&stats.rows()), experiment_csv(&again.rows()));
        let csv = experiment_csv(&stats.rows());
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "experiment,instance,kind,eps,delta,alpha,k,trials,successes,rate,wilson_lo,wilson_hi,seed"
        );
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn eps_dependence_k1_never_hits() {
        // at k = 1 the deviation is exactly 1/2, below the threshold of 1
        let stats = run_eps_dependence(&[1], 100, 5).unwrap();
        assert_eq!(stats.rows[0].stat.successes, 0);
    }

    #[test]
    fn eps_dependence_matches_binomial_oracle() {
        // exact two-sided binomial tails P(|X/k − 1/2| ≥ 1/√k)
        let oracle = [(16u64, 0.07681274414062), (64, 0.05994118957), (256, 0.05247167333)];
        let trials = 3000u64;
        let stats = run_eps_dependence(&[16, 64, 256], trials, 2).unwrap();
        for (row, &(k, expected)) in stats.rows.iter().zip(&oracle) {
            assert_eq!(row.k, k);
            let slack = 3.0 * (expected * (1.0 - expected) / trials as f64).sqrt();
            assert!(
                (row.stat.rate - expected).abs() <= slack,
                "k={k}: {} vs {expected}",
                row.stat.rate
            );
        }
        // the frequencies plateau rather than decay with k
        let rates: Vec<f64> = stats.rows.iter().map(|r| r.stat.rate).collect();
        for a in &rates {
            for b in &rates {
                assert!((a - b).abs() <= 0.1);
            }
        }
    }

    #[test]
    fn exactly_once_counters() {
        use crate::game::ActionProfile;
        use crate::rng::SeedInfo;
        let m = 4;
        // dummies: d1 = [1,1,2], d2 = [0,3,3] → d1 counts: 2 once; d2: 0 once
        let batch = SampleBatch {
            profiles: vec![
                ActionProfile(vec![m + 1, 0]),
                ActionProfile(vec![1, 3]),
                ActionProfile(vec![2, m + 3]),
            ],
            seed: SeedInfo::new(0, 0),
        };
        assert_eq!(count_exactly_once_dummies(&batch, m), 1);
        // pairs: sample 0 has d1=1 (twice) → no; sample 1 same; sample 2 has
        // d1=2 once but d2=3 twice → no
        assert_eq!(count_exactly_once_pairs(&batch, m), 0);
        let batch = SampleBatch {
            profiles: vec![ActionProfile(vec![0, 1]), ActionProfile(vec![1, 2])],
            seed: SeedInfo::new(0, 0),
        };
        assert_eq!(count_exactly_once_pairs(&batch, m), 2);
    }

    #[test]
    fn degenerate_dummy_game_counts() {
        // m = 1: every sample shares the single dummy, so the exactly-once
        // count is 1 exactly when k = 1
        let stats = run_ne_to_ce(1, 1, 0.3, 20, 13).unwrap();
        assert_eq!(stats.exactly_once_pair_total, 20);
        let stats = run_ne_to_ce(1, 3, 0.3, 20, 13).unwrap();
        assert_eq!(stats.exactly_once_pair_total, 0);
    }

    #[test]
    fn pairs_small_scale_sanity() {
        let stats = run_lower_bound_ex_n(4, 200, 0.5, 60, 17).unwrap();
        // 200 samples of 8 fair coins: nobody is pure, everything passes
        assert_eq!(stats.some_player_pure.successes, 0);
        assert_eq!(stats.cce_pass.successes, 60);
        let stats = run_lower_bound_ex_n(4, 1, 0.4, 60, 17).unwrap();
        // one sample leaves every marginal pure
        assert_eq!(stats.some_player_pure.successes, 60);
        assert_eq!(stats.cce_pass.successes, 0);
    }

    #[test]
    fn saturated_delta_always_says_yes() {
        let inst = zoo::matching_pennies();
        let source = inst.distribution("uniform_ne").unwrap();
        let stats = run_test_characteristics(
            &inst.game,
            source,
            source,
            &inst.name,
            EquilibriumKind::Nash,
            1.0,
            0.3,
            0.1,
            10,
            40,
            29,
        )
        .unwrap();
        assert_eq!(stats.yes_rate.successes, 40);
    }

    #[test]
    fn subset_pigeonhole_at_k_le_b() {
        let stats = run_lower_bound_ex_al(3, 3, 0.25, 40, 19).unwrap();
        assert_eq!(stats.support_le_b.successes, 40);
        assert_eq!(stats.pass.successes, 0);
        assert!(stats.flagged_all_fail);
    }

    #[test]
    fn subset_flagged_trials_fail_at_k4() {
        let stats = run_lower_bound_ex_al(3, 4, 0.25, 80, 23).unwrap();
        // support can reach 4 now, so some trials are unflagged
        assert!(stats.support_le_b.successes < 80);
        assert!(stats.flagged_all_fail);
    }
}
