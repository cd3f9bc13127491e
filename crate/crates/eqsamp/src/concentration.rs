//! Empirical checks of tail bounds for sampled product measures.
//!
//! For a product space `μ = μ_1 ⊗ … ⊗ μ_n` and a bounded test function
//! `f: Ω → [0,1]`, the k-sample approximation replaces each factor by the
//! empirical measure of k i.i.d. draws. This module measures how often the
//! approximated expectation strays from the true one and compares the
//! frequency against two closed-form tails:
//!
//! * product-form bound `4·e^{−ε²k/8}/ε` (holds for any number of factors);
//! * classic Hoeffding `2·e^{−ε²k/2}` (the single-factor baseline).
//!
//! A sharper product-form constant `4·e^{−ε²k/2}/ε` is also exposed for
//! reporting; assertions in the test-suite use the weaker exponent.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::ProductDistribution;
use crate::error::{Error, Result};
use crate::game::Game;
use crate::rng::SeedInfo;

/// Cap on the dense table behind exact expectations.
const MAX_TABLE_CELLS: usize = 1_000_000;

/// Finitely-supported product measure with a bounded test function.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    components: Vec<Vec<f64>>,
    /// `f` over the mixed-radix product of component outcomes, first
    /// component most significant; values in [0,1].
    table: Vec<f64>,
}

impl ProductSpace {
    /// Build from explicit component distributions and a dense `f` table.
    pub fn from_tables(components: Vec<Vec<f64>>, table: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("need at least one component".into()));
        }
        let mut cells: usize = 1;
        for (i, c) in components.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidArgument(format!("component {i} is empty")));
            }
            if c.iter().any(|&p| p < 0.0 || p.is_nan()) {
                return Err(Error::InvalidDistribution(format!(
                    "component {i}: negative probability"
                )));
            }
            let sum: f64 = c.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidDistribution(format!(
                    "component {i} sums to {sum}"
                )));
            }
            cells = cells
                .checked_mul(c.len())
                .filter(|&v| v <= MAX_TABLE_CELLS)
                .ok_or_else(|| {
                    Error::CapabilityExceeded(format!(
                        "outcome space exceeds {MAX_TABLE_CELLS} cells; exact expectations infeasible"
                    ))
                })?;
        }
        if table.len() != cells {
            return Err(Error::DimensionMismatch(format!(
                "f table has {} entries, outcome space has {cells}",
                table.len()
            )));
        }
        if table.iter().any(|&v| !(0.0..=1.0).contains(&v) || v.is_nan()) {
            return Err(Error::InvalidArgument("f values must lie in [0,1]".into()));
        }
        Ok(Self { components, table })
    }

    /// View a game from one player's deviation: components are the other
    /// players' strategies and `f(a_{-i}) = u_i(a_i, a_{-i})`.
    pub fn from_game_view(
        game: &Game,
        x: &ProductDistribution,
        player: usize,
        action: usize,
    ) -> Result<Self> {
        if player >= game.players() {
            return Err(Error::PlayerOutOfRange {
                player,
                count: game.players(),
            });
        }
        if action >= game.action_count(player) {
            return Err(Error::ActionOutOfRange {
                player,
                action,
                limit: game.action_count(player),
            });
        }
        if game.players() < 2 {
            return Err(Error::InvalidArgument(
                "game view needs at least one opponent".into(),
            ));
        }
        let components: Vec<Vec<f64>> = (0..game.players())
            .filter(|&j| j != player)
            .map(|j| x.factor(j).to_vec())
            .collect();
        let cells: usize = components.iter().map(Vec::len).product();
        let mut table = Vec::with_capacity(cells);
        let opponents: Vec<usize> = (0..game.players()).filter(|&j| j != player).collect();
        let mut outcome = vec![0usize; opponents.len()];
        for _ in 0..cells {
            let mut profile = vec![0usize; game.players()];
            profile[player] = action;
            for (slot, &j) in outcome.iter().zip(&opponents) {
                profile[j] = *slot;
            }
            let index = game
                .profile_to_index(&crate::game::ActionProfile(profile))
                .expect("profile valid by construction");
            table.push(game.utility_at(player, index.0));
            // odometer over opponent outcomes, last component fastest
            for pos in (0..outcome.len()).rev() {
                outcome[pos] += 1;
                if outcome[pos] < components[pos].len() {
                    break;
                }
                outcome[pos] = 0;
            }
        }
        Self::from_tables(components, table)
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// `E_μ[f]` by dense enumeration.
    pub fn exact_mean(&self) -> f64 {
        self.mean_under(&self.components)
    }

    /// `E[f]` under given component distributions of the same shape.
    pub fn mean_under(&self, components: &[Vec<f64>]) -> f64 {
        let mut total = 0.0;
        let mut outcome = vec![0usize; components.len()];
        for &value in &self.table {
            let weight: f64 = outcome
                .iter()
                .zip(components)
                .map(|(&o, c)| c[o])
                .product();
            total += weight * value;
            for pos in (0..outcome.len()).rev() {
                outcome[pos] += 1;
                if outcome[pos] < components[pos].len() {
                    break;
                }
                outcome[pos] = 0;
            }
        }
        total
    }

    /// Exact per-component counts of `k` i.i.d. draws from each factor.
    pub fn sample_component_counts(&self, k: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        self.components
            .iter()
            .map(|c| {
                let mut counts = vec![0u64; c.len()];
                for _ in 0..k {
                    let u: f64 = rng.gen();
                    let mut cumulative = 0.0;
                    let mut picked = c.len() - 1;
                    for (i, &p) in c.iter().enumerate() {
                        cumulative += p;
                        if u < cumulative {
                            picked = i;
                            break;
                        }
                    }
                    counts[picked] += 1;
                }
                counts
            })
            .collect()
    }

    /// One k-sample approximation: the product of per-factor empirical measures.
    pub fn sample_product_approximation(&self, k: u64, seed: SeedInfo) -> Result<Vec<Vec<f64>>> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be ≥ 1".into()));
        }
        let mut rng = seed.rng();
        Ok(counts_to_frequencies(
            &self.sample_component_counts(k, &mut rng),
            k,
        ))
    }
}

fn counts_to_frequencies(counts: &[Vec<u64>], k: u64) -> Vec<Vec<f64>> {
    counts
        .iter()
        .map(|c| c.iter().map(|&x| x as f64 / k as f64).collect())
        .collect()
}

/// Monte Carlo estimate of a deviation probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub violations: u64,
    pub trials: u64,
    pub rate: f64,
}

impl RateEstimate {
    fn new(violations: u64, trials: u64) -> Self {
        Self {
            violations,
            trials,
            rate: violations as f64 / trials as f64,
        }
    }

    /// Binomial 3σ slack of the estimate.
    pub fn three_sigma(&self) -> f64 {
        3.0 * (self.rate * (1.0 - self.rate) / self.trials as f64).sqrt()
    }
}

fn run_trials(
    space: &ProductSpace,
    k: u64,
    eps: f64,
    trials: u64,
    seed: SeedInfo,
    inclusive: bool,
) -> Result<RateEstimate> {
    if k == 0 || trials == 0 {
        return Err(Error::InvalidArgument("k and trials must be ≥ 1".into()));
    }
    if eps <= 0.0 {
        return Err(Error::InvalidArgument("ε must be > 0".into()));
    }
    let truth = space.exact_mean();
    let mut violations = 0u64;
    for trial in 0..trials {
        let mut rng = seed.stream(seed.stream_id.wrapping_add(trial)).rng();
        let counts = space.sample_component_counts(k, &mut rng);
        let approx = space.mean_under(&counts_to_frequencies(&counts, k));
        let deviation = (approx - truth).abs();
        let violated = if inclusive {
            deviation >= eps
        } else {
            deviation > eps
        };
        if violated {
            violations += 1;
        }
    }
    Ok(RateEstimate::new(violations, trials))
}

/// Frequency of `|E_{approx}[f] − E_μ[f]| > ε` over independent
/// k-sample approximations (strict inequality, matching the tail bounds).
pub fn violation_rate(
    space: &ProductSpace,
    k: u64,
    eps: f64,
    trials: u64,
    seed: SeedInfo,
) -> Result<RateEstimate> {
    run_trials(space, k, eps, trials, seed, false)
}

/// Frequency of `|u_i(a_i, s^k_{-i}) − u_i(a_i, x_{-i})| ≥ ε` when the
/// opponents' product strategy is replaced by its k-sample approximation.
#[allow(clippy::too_many_arguments)]
pub fn utility_deviation_rate(
    game: &Game,
    x: &ProductDistribution,
    player: usize,
    action: usize,
    k: u64,
    eps: f64,
    trials: u64,
    seed: SeedInfo,
) -> Result<RateEstimate> {
    let space = ProductSpace::from_game_view(game, x, player, action)?;
    run_trials(&space, k, eps, trials, seed, true)
}

/// Product-form tail `4·e^{−ε²k/8}/ε`.
pub fn product_hoeffding_bound(eps: f64, k: u64) -> f64 {
    4.0 * (-eps * eps * k as f64 / 8.0).exp() / eps
}

/// Sharper product-form constant `4·e^{−ε²k/2}/ε`; reported alongside the
/// weaker exponent, never asserted against.
pub fn sharp_product_hoeffding_bound(eps: f64, k: u64) -> f64 {
    4.0 * (-eps * eps * k as f64 / 2.0).exp() / eps
}

/// Classic single-factor Hoeffding tail `2·e^{−ε²k/2}`.
pub fn classic_hoeffding_bound(eps: f64, k: u64) -> f64 {
    2.0 * (-eps * eps * k as f64 / 2.0).exp()
}
