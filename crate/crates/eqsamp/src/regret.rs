//! Regret functionals and ε-equilibrium verifiers.
//!
//! Three deviation models are supported:
//!
//! * unilateral pure deviations against a product distribution (Nash);
//! * per-recommendation switching rules `f: A_i → A_i` against a joint
//!   distribution (correlated);
//! * a single fixed action against a joint distribution (coarse correlated).
//!
//! Switching-rule regret is maximized per recommendation: the best rule
//! replaces each recommended action independently, so the maximum over all
//! `m^m` rules decomposes into `m` inner maxima over `m` replacement
//! actions. A brute-force enumerator over whole rules is kept as a test
//! oracle for this decomposition.

use serde::{Deserialize, Serialize};

use crate::dist::{Distribution, JointDistribution, ProductDistribution};
use crate::error::{Error, Result};
use crate::game::Game;

/// Slack added to every ε comparison so exact equilibria built in floating
/// point pass their ε = 0 checks.
pub const VERIFIER_TOL: f64 = 1e-9;

/// Deterministic map from recommended action to played action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchingRule(pub Vec<usize>);

impl SwitchingRule {
    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    pub fn apply(&self, action: usize) -> usize {
        self.0[action]
    }
}

/// Per-player regret figures with argmax witnesses.
///
/// Fields are present only for the deviation models a verifier evaluated;
/// [`RegretReport::evaluate`] fills in everything applicable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct PlayerRegret {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nash_gain: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nash_witness: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ce_regret: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ce_witness: Option<SwitchingRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cce_regret: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cce_witness: Option<usize>,
}

/// Regret figures for every player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub players: Vec<PlayerRegret>,
}

impl RegretReport {
    fn empty(n: usize) -> Self {
        Self {
            players: vec![PlayerRegret::default(); n],
        }
    }

    /// Largest Nash deviation gain over all players, if evaluated.
    pub fn max_nash_gain(&self) -> Option<f64> {
        self.players
            .iter()
            .filter_map(|p| p.nash_gain)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    pub fn max_ce_regret(&self) -> Option<f64> {
        self.players
            .iter()
            .filter_map(|p| p.ce_regret)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    pub fn max_cce_regret(&self) -> Option<f64> {
        self.players
            .iter()
            .filter_map(|p| p.cce_regret)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    /// Evaluate every applicable regret kind for `x`.
    ///
    /// Product distributions get Nash gains and are also scored as joints;
    /// joint distributions get switching-rule and fixed-action regrets only.
    pub fn evaluate(game: &Game, x: &Distribution) -> Result<Self> {
        let joint;
        let (mut report, joint_ref) = match x {
            Distribution::Product(p) => {
                let (_, report) = is_eps_nash(game, p, 0.0)?;
                joint = p.to_joint(game)?;
                (report, &joint)
            }
            Distribution::Joint(j) => (Self::empty(game.players()), j),
        };
        for player in 0..game.players() {
            let (ce, rule) = ce_max_regret(game, joint_ref, player)?;
            let (cce, action) = cce_max_regret(game, joint_ref, player)?;
            let entry = &mut report.players[player];
            entry.ce_regret = Some(ce);
            entry.ce_witness = Some(rule);
            entry.cce_regret = Some(cce);
            entry.cce_witness = Some(action);
        }
        Ok(report)
    }
}

/// Gain for player `i` from deviating to pure action `a_i` against the other
/// players' product strategies: `u_i(a_i, x_{-i}) − u_i(x)`.
pub fn nash_deviation_gain(
    game: &Game,
    x: &ProductDistribution,
    player: usize,
    action: usize,
) -> Result<f64> {
    x.check_shape(game)?;
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
    let payoffs = deviation_payoffs(game, x, player);
    let current: f64 = payoffs
        .iter()
        .zip(x.factor(player))
        .map(|(&u, &p)| p * u)
        .sum();
    Ok(payoffs[action] - current)
}

/// `u_i(a_i, x_{-i})` for every `a_i`, by one sweep over all profiles.
fn deviation_payoffs(game: &Game, x: &ProductDistribution, player: usize) -> Vec<f64> {
    let m = game.action_count(player);
    let mut payoffs = vec![0.0; m];
    let counts = game.action_counts();
    let n = counts.len();
    let mut profile = vec![0usize; n];
    let num_profiles = game.num_profiles();
    let mut index = 0usize;
    loop {
        if profile[player] == 0 {
            // opponent weight is shared by the m profiles differing only at `player`
            let weight: f64 = profile
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != player)
                .map(|(j, &a_j)| x.factor(j)[a_j])
                .product();
            if weight > 0.0 {
                for (a, payoff) in payoffs.iter_mut().enumerate() {
                    *payoff += weight * game.utility_at(player, game.switch_action(index, player, a));
                }
            }
        }
        index += 1;
        if index == num_profiles {
            break;
        }
        // odometer increment, least significant player last
        let mut pos = n;
        loop {
            pos -= 1;
            profile[pos] += 1;
            if profile[pos] < counts[pos] {
                break;
            }
            profile[pos] = 0;
            if pos == 0 {
                break;
            }
        }
    }
    payoffs
}

/// Largest Nash deviation gain and its witness (player, action).
pub fn max_nash_deviation(game: &Game, x: &ProductDistribution) -> Result<(f64, usize, usize)> {
    x.check_shape(game)?;
    let mut best = f64::NEG_INFINITY;
    let mut witness = (0, 0);
    for player in 0..game.players() {
        let payoffs = deviation_payoffs(game, x, player);
        let current: f64 = payoffs
            .iter()
            .zip(x.factor(player))
            .map(|(&u, &p)| p * u)
            .sum();
        for (action, &u) in payoffs.iter().enumerate() {
            let gain = u - current;
            if gain > best {
                best = gain;
                witness = (player, action);
            }
        }
    }
    Ok((best, witness.0, witness.1))
}

/// ε-Nash check: no player gains more than ε by any pure deviation.
pub fn is_eps_nash(game: &Game, x: &ProductDistribution, eps: f64) -> Result<(bool, RegretReport)> {
    if eps < 0.0 {
        return Err(Error::InvalidArgument("ε must be ≥ 0".into()));
    }
    x.check_shape(game)?;
    let mut report = RegretReport::empty(game.players());
    let mut worst = f64::NEG_INFINITY;
    for player in 0..game.players() {
        let payoffs = deviation_payoffs(game, x, player);
        let current: f64 = payoffs
            .iter()
            .zip(x.factor(player))
            .map(|(&u, &p)| p * u)
            .sum();
        let mut gain = f64::NEG_INFINITY;
        let mut witness = 0;
        for (action, &u) in payoffs.iter().enumerate() {
            if u - current > gain {
                gain = u - current;
                witness = action;
            }
        }
        report.players[player].nash_gain = Some(gain);
        report.players[player].nash_witness = Some(witness);
        worst = worst.max(gain);
    }
    Ok((worst <= eps + VERIFIER_TOL, report))
}

/// Expected regret of player `i` for not switching to fixed action `j`:
/// `E_{a~x}[u_i(j, a_{-i}) − u_i(a)]`. May be negative.
pub fn cce_regret(game: &Game, x: &JointDistribution, player: usize, action: usize) -> Result<f64> {
    x.check_shape(game)?;
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
    Ok(x.support()
        .map(|(index, prob)| {
            let switched = game.switch_action(index.0, player, action);
            prob * (game.utility_at(player, switched) - game.utility_at(player, index.0))
        })
        .sum())
}

/// Largest fixed-action regret for one player, clamped at the identity
/// deviation (gain 0). Witness is the lowest-index argmax action.
pub fn cce_max_regret(game: &Game, x: &JointDistribution, player: usize) -> Result<(f64, usize)> {
    let mut best = 0.0;
    let mut witness = 0;
    for action in 0..game.action_count(player) {
        let r = cce_regret(game, x, player, action)?;
        if r > best {
            best = r;
            witness = action;
        }
    }
    Ok((best, witness))
}

/// ε-coarse-correlated check over all (player, fixed action) pairs.
pub fn is_eps_cce(game: &Game, x: &JointDistribution, eps: f64) -> Result<(bool, RegretReport)> {
    if eps < 0.0 {
        return Err(Error::InvalidArgument("ε must be ≥ 0".into()));
    }
    x.check_shape(game)?;
    let mut report = RegretReport::empty(game.players());
    let mut worst = 0.0f64;
    for player in 0..game.players() {
        let (r, witness) = cce_max_regret(game, x, player)?;
        report.players[player].cce_regret = Some(r);
        report.players[player].cce_witness = Some(witness);
        worst = worst.max(r);
    }
    Ok((worst <= eps + VERIFIER_TOL, report))
}

/// Largest switching-rule regret for one player, with the witness rule.
///
/// Decomposition: group the support by the player's recommended action;
/// for each recommendation pick the replacement with the largest conditional
/// gain (ties → lowest action index). Cost is `O(m_i · |support| )` utility
/// switches rather than `m_i^{m_i}` whole rules. Recommendations outside the
/// support keep the identity.
pub fn ce_max_regret(
    game: &Game,
    x: &JointDistribution,
    player: usize,
) -> Result<(f64, SwitchingRule)> {
    x.check_shape(game)?;
    if player >= game.players() {
        return Err(Error::PlayerOutOfRange {
            player,
            count: game.players(),
        });
    }
    let m = game.action_count(player);
    // gains[rec][j] = Σ_{a in support, a_i = rec} x(a)·(u_i(j, a_{-i}) − u_i(a))
    let mut gains = vec![vec![0.0f64; m]; m];
    let mut recommended = vec![false; m];
    for (index, prob) in x.support() {
        let rec = game.action_of(index.0, player);
        recommended[rec] = true;
        let current = game.utility_at(player, index.0);
        let row = &mut gains[rec];
        for (j, slot) in row.iter_mut().enumerate() {
            let switched = game.switch_action(index.0, player, j);
            *slot += prob * (game.utility_at(player, switched) - current);
        }
    }
    let mut total = 0.0;
    let mut rule = SwitchingRule::identity(m);
    for rec in 0..m {
        if !recommended[rec] {
            continue;
        }
        let (best_action, best_gain) = gains[rec]
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |(ba, bg), (j, &g)| {
                if g > bg {
                    (j, g)
                } else {
                    (ba, bg)
                }
            });
        total += best_gain;
        rule.0[rec] = best_action;
    }
    Ok((total, rule))
}

/// Expected regret of one explicit switching rule.
pub fn switching_rule_regret(
    game: &Game,
    x: &JointDistribution,
    player: usize,
    rule: &SwitchingRule,
) -> Result<f64> {
    x.check_shape(game)?;
    if rule.0.len() != game.action_count(player) {
        return Err(Error::DimensionMismatch(format!(
            "rule over {} actions, player {player} has {}",
            rule.0.len(),
            game.action_count(player)
        )));
    }
    Ok(x.support()
        .map(|(index, prob)| {
            let rec = game.action_of(index.0, player);
            let switched = game.switch_action(index.0, player, rule.apply(rec));
            prob * (game.utility_at(player, switched) - game.utility_at(player, index.0))
        })
        .sum())
}

/// Exact switching-rule maximum by enumerating all `m_i^{m_i}` rules.
///
/// Test oracle only; guarded so the rule count stays ≤ 10^6.
pub fn ce_max_regret_bruteforce(game: &Game, x: &JointDistribution, player: usize) -> Result<f64> {
    x.check_shape(game)?;
    let m = game.action_count(player);
    let rule_count = (m as u128).checked_pow(m as u32);
    match rule_count {
        Some(c) if c <= 1_000_000 => {}
        _ => {
            return Err(Error::CapabilityExceeded(format!(
                "{m}^{m} switching rules exceed the brute-force guard of 10^6"
            )))
        }
    }
    let mut rule = vec![0usize; m];
    let mut best = f64::NEG_INFINITY;
    loop {
        let r = switching_rule_regret(game, x, player, &SwitchingRule(rule.clone()))?;
        best = best.max(r);
        // odometer over rules
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(best);
            }
            rule[pos] += 1;
            if rule[pos] < m {
                break;
            }
            rule[pos] = 0;
            pos += 1;
        }
    }
}

/// ε-correlated check: every player's best switching rule gains ≤ ε.
pub fn is_eps_ce(game: &Game, x: &JointDistribution, eps: f64) -> Result<(bool, RegretReport)> {
    if eps < 0.0 {
        return Err(Error::InvalidArgument("ε must be ≥ 0".into()));
    }
    x.check_shape(game)?;
    let mut report = RegretReport::empty(game.players());
    let mut worst = 0.0f64;
    for player in 0..game.players() {
        let (r, rule) = ce_max_regret(game, x, player)?;
        report.players[player].ce_regret = Some(r);
        report.players[player].ce_witness = Some(rule);
        worst = worst.max(r);
    }
    Ok((worst <= eps + VERIFIER_TOL, report))
}
