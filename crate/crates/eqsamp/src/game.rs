//! Finite normal-form games with dense utility tables.
//!
//! A game has `n` players, player `i` having `m_i` actions. Utilities are
//! stored as one dense array per player, indexed by the mixed-radix encoding
//! of action profiles with player 1 most significant. All payoffs live in
//! `[0,1]`.

use serde::{Deserialize, Serialize};

use crate::dist::{Distribution, JointDistribution, ProductDistribution};
use crate::error::{Error, Result};

/// One action per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionProfile(pub Vec<usize>);

impl ActionProfile {
    pub fn actions(&self) -> &[usize] {
        &self.0
    }
}

/// Flat index of an action profile under the game's mixed-radix encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProfileIndex(pub usize);

/// An `n`-player finite game with payoffs in the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    action_counts: Vec<usize>,
    /// `utilities[i][index]` = payoff of player `i` at the profile with that flat index.
    utilities: Vec<Vec<f64>>,
    /// `strides[i]` = number of profiles of players after `i`; player 1 is most significant.
    strides: Vec<usize>,
}

/// Wire format for game files: UTF-8 JSON with dense per-player utility arrays.
#[derive(Serialize, Deserialize)]
struct GameFile {
    players: usize,
    actions: Vec<usize>,
    utilities: Vec<Vec<f64>>,
}

impl Game {
    /// Build a game from per-player action counts and dense utility tables.
    pub fn new(action_counts: Vec<usize>, utilities: Vec<Vec<f64>>) -> Result<Self> {
        if action_counts.is_empty() {
            return Err(Error::InvalidArgument("game needs at least one player".into()));
        }
        if action_counts.contains(&0) {
            return Err(Error::InvalidArgument("every player needs at least one action".into()));
        }
        let num_profiles = action_counts.iter().try_fold(1usize, |acc, &m| {
            acc.checked_mul(m)
                .ok_or_else(|| Error::CapabilityExceeded("profile count overflows usize".into()))
        })?;
        if utilities.len() != action_counts.len() {
            return Err(Error::InvalidArgument(format!(
                "{} utility tables for {} players",
                utilities.len(),
                action_counts.len()
            )));
        }
        for (player, table) in utilities.iter().enumerate() {
            if table.len() != num_profiles {
                return Err(Error::UtilityLength {
                    player,
                    expected: num_profiles,
                    got: table.len(),
                });
            }
            for (profile, &value) in table.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) || value.is_nan() {
                    return Err(Error::PayoffOutOfRange {
                        player,
                        profile,
                        value,
                    });
                }
            }
        }
        let strides = strides_for(&action_counts);
        Ok(Self {
            action_counts,
            utilities,
            strides,
        })
    }

    /// Build a game by evaluating `payoff(player, profile)` over all profiles.
    pub fn from_fn<F>(action_counts: Vec<usize>, payoff: F) -> Result<Self>
    where
        F: Fn(usize, &[usize]) -> f64,
    {
        let n = action_counts.len();
        let strides = strides_for(&action_counts);
        let num_profiles = action_counts.iter().product();
        let mut utilities = vec![Vec::with_capacity(num_profiles); n];
        let mut profile = vec![0usize; n];
        for index in 0..num_profiles {
            decode_into(index, &action_counts, &strides, &mut profile);
            for (i, table) in utilities.iter_mut().enumerate() {
                table.push(payoff(i, &profile));
            }
        }
        Self::new(action_counts, utilities)
    }

    /// Affine rescale of arbitrary bounded payoffs into `[0,1]`, per player.
    ///
    /// A player whose payoffs are constant maps to 1/2 everywhere.
    pub fn from_unnormalized(action_counts: Vec<usize>, raw: Vec<Vec<f64>>) -> Result<Self> {
        let normalized = raw
            .into_iter()
            .map(|table| {
                let lo = table.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = table.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if !(lo.is_finite() && hi.is_finite()) {
                    return Err(Error::InvalidArgument("payoffs must be finite".into()));
                }
                let span = hi - lo;
                Ok(table
                    .into_iter()
                    .map(|v| if span > 0.0 { (v - lo) / span } else { 0.5 })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(action_counts, normalized)
    }

    pub fn players(&self) -> usize {
        self.action_counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn action_count(&self, player: usize) -> usize {
        self.action_counts[player]
    }

    /// Largest action count over all players (the `m` in sample-size formulas).
    pub fn max_actions(&self) -> usize {
        *self.action_counts.iter().max().expect("nonempty")
    }

    pub fn num_profiles(&self) -> usize {
        self.utilities[0].len()
    }

    fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.players() {
            return Err(Error::PlayerOutOfRange {
                player,
                count: self.players(),
            });
        }
        Ok(())
    }

    fn check_profile(&self, a: &ActionProfile) -> Result<()> {
        if a.0.len() != self.players() {
            return Err(Error::ProfileLength {
                expected: self.players(),
                got: a.0.len(),
            });
        }
        for (player, (&action, &limit)) in a.0.iter().zip(&self.action_counts).enumerate() {
            if action >= limit {
                return Err(Error::ActionOutOfRange {
                    player,
                    action,
                    limit,
                });
            }
        }
        Ok(())
    }

    /// Mixed-radix encoding: `Σ_i a_i · Π_{j>i} m_j`.
    pub fn profile_to_index(&self, a: &ActionProfile) -> Result<ProfileIndex> {
        self.check_profile(a)?;
        let flat = a
            .0
            .iter()
            .zip(&self.strides)
            .map(|(&a_i, &stride)| a_i * stride)
            .sum();
        Ok(ProfileIndex(flat))
    }

    /// Inverse of [`Game::profile_to_index`].
    pub fn index_to_profile(&self, index: ProfileIndex) -> Result<ActionProfile> {
        if index.0 >= self.num_profiles() {
            return Err(Error::InvalidArgument(format!(
                "profile index {} out of range (game has {} profiles)",
                index.0,
                self.num_profiles()
            )));
        }
        let mut profile = vec![0usize; self.players()];
        decode_into(index.0, &self.action_counts, &self.strides, &mut profile);
        Ok(ActionProfile(profile))
    }

    /// Payoff of `player` at a pure profile.
    pub fn pure_utility(&self, player: usize, a: &ActionProfile) -> Result<f64> {
        self.check_player(player)?;
        let index = self.profile_to_index(a)?;
        Ok(self.utilities[player][index.0])
    }

    /// Payoff of `player` at the profile with the given flat index (no checks).
    #[inline]
    pub fn utility_at(&self, player: usize, index: usize) -> f64 {
        self.utilities[player][index]
    }

    /// Flat index of the profile obtained from `index` by switching `player`'s
    /// action to `action`.
    #[inline]
    pub fn switch_action(&self, index: usize, player: usize, action: usize) -> usize {
        let stride = self.strides[player];
        let current = index / stride % self.action_counts[player];
        index - current * stride + action * stride
    }

    /// `player`'s action in the profile with the given flat index.
    #[inline]
    pub fn action_of(&self, index: usize, player: usize) -> usize {
        index / self.strides[player] % self.action_counts[player]
    }

    /// Expected payoff `E_{a~x}[u_i(a)]` under a product or joint distribution.
    pub fn expected_utility(&self, x: &Distribution, player: usize) -> Result<f64> {
        match x {
            Distribution::Product(p) => self.expected_utility_product(p, player),
            Distribution::Joint(j) => self.expected_utility_joint(j, player),
        }
    }

    /// Expected payoff under a product distribution (full profile enumeration).
    pub fn expected_utility_product(&self, x: &ProductDistribution, player: usize) -> Result<f64> {
        self.check_player(player)?;
        x.check_shape(self)?;
        let mut total = 0.0;
        let mut profile = vec![0usize; self.players()];
        for index in 0..self.num_profiles() {
            decode_into(index, &self.action_counts, &self.strides, &mut profile);
            let weight: f64 = profile
                .iter()
                .enumerate()
                .map(|(j, &a_j)| x.factor(j)[a_j])
                .product();
            if weight > 0.0 {
                total += weight * self.utilities[player][index];
            }
        }
        Ok(total)
    }

    /// Expected payoff under a sparse joint distribution (support iteration).
    pub fn expected_utility_joint(&self, x: &JointDistribution, player: usize) -> Result<f64> {
        self.check_player(player)?;
        x.check_shape(self)?;
        Ok(x.support()
            .map(|(index, prob)| prob * self.utilities[player][index.0])
            .sum())
    }

    /// Serialize to the game file format.
    pub fn to_text(&self) -> String {
        let file = GameFile {
            players: self.players(),
            actions: self.action_counts.clone(),
            utilities: self.utilities.clone(),
        };
        serde_json::to_string_pretty(&file).expect("game serializes")
    }

    /// Parse the game file format, validating payoffs and table lengths.
    pub fn from_text(text: &str) -> Result<Self> {
        let file: GameFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        if file.players != file.actions.len() {
            return Err(Error::Malformed(format!(
                "players field is {} but actions lists {} entries",
                file.players,
                file.actions.len()
            )));
        }
        Self::new(file.actions, file.utilities)
    }
}

fn strides_for(action_counts: &[usize]) -> Vec<usize> {
    let n = action_counts.len();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * action_counts[i + 1];
    }
    strides
}

#[inline]
fn decode_into(index: usize, action_counts: &[usize], strides: &[usize], out: &mut [usize]) {
    for i in 0..action_counts.len() {
        out[i] = index / strides[i] % action_counts[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn index_zero_profile() {
        let g = zoo::matching_pennies().game;
        let idx = g.profile_to_index(&ActionProfile(vec![0, 0])).unwrap();
        assert_eq!(idx, ProfileIndex(0));
        let idx = g.profile_to_index(&ActionProfile(vec![1, 0])).unwrap();
        assert_eq!(idx, ProfileIndex(2));
    }

    #[test]
    fn mixed_radix_three_players() {
        // hand mixed-radix arithmetic: 1*6 + 2*2 + 1 = 11
        let g = Game::from_fn(vec![2, 3, 2], |_, _| 0.0).unwrap();
        let idx = g.profile_to_index(&ActionProfile(vec![1, 2, 1])).unwrap();
        assert_eq!(idx, ProfileIndex(11));
        let back = g.index_to_profile(idx).unwrap();
        assert_eq!(back, ActionProfile(vec![1, 2, 1]));
    }

    #[test]
    fn out_of_range_action_names_player() {
        let g = zoo::matching_pennies().game;
        let err = g.profile_to_index(&ActionProfile(vec![0, 2])).unwrap_err();
        match err {
            Error::ActionOutOfRange { player, action, limit } => {
                assert_eq!((player, action, limit), (1, 2, 2));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn pennies_pure_payoffs() {
        let g = zoo::matching_pennies().game;
        // matcher wins on equal real actions, opponent takes the complement
        assert_eq!(g.pure_utility(0, &ActionProfile(vec![0, 0])).unwrap(), 1.0);
        assert_eq!(g.pure_utility(1, &ActionProfile(vec![0, 0])).unwrap(), 0.0);
        for idx in 0..g.num_profiles() {
            for player in 0..2 {
                let v = g.utility_at(player, idx);
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn expected_utility_point_mass_and_uniform() {
        let g = zoo::matching_pennies().game;
        let uniform = ProductDistribution::uniform(g.action_counts());
        let v = g
            .expected_utility(&Distribution::Product(uniform), 0)
            .unwrap();
        assert!((v - 0.5).abs() < 1e-12);

        let point = JointDistribution::point_mass(ProfileIndex(0));
        assert_eq!(g.expected_utility_joint(&point, 0).unwrap(), 1.0);

        // joint uniform on {(H,H),(T,T)}: mismatcher never wins
        let anti = JointDistribution::uniform_over(&[ProfileIndex(0), ProfileIndex(3)]).unwrap();
        assert_eq!(g.expected_utility_joint(&anti, 1).unwrap(), 0.0);
    }

    #[test]
    fn round_trip_text() {
        let g = zoo::matching_pennies().game;
        let text = g.to_text();
        let back = Game::from_text(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn load_rejects_bad_payoff_and_length() {
        let bad_payoff = r#"{"players":1,"actions":[2],"utilities":[[0.5,1.5]]}"#;
        assert!(matches!(
            Game::from_text(bad_payoff),
            Err(Error::PayoffOutOfRange { .. })
        ));
        let bad_len = r#"{"players":1,"actions":[2],"utilities":[[0.5]]}"#;
        assert!(matches!(
            Game::from_text(bad_len),
            Err(Error::UtilityLength { .. })
        ));
        assert!(matches!(
            Game::from_text("not json"),
            Err(Error::Malformed(_))
        ));
        let bad_players = r#"{"players":2,"actions":[2],"utilities":[[0.5,0.5]]}"#;
        assert!(matches!(
            Game::from_text(bad_players),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn renormalization_maps_into_unit_interval() {
        let g = Game::from_unnormalized(vec![2, 2], vec![
            vec![-1.0, 1.0, 3.0, -1.0],
            vec![5.0, 5.0, 5.0, 5.0],
        ])
        .unwrap();
        assert_eq!(g.utility_at(0, 0), 0.0);
        assert_eq!(g.utility_at(0, 2), 1.0);
        assert_eq!(g.utility_at(0, 1), 0.5);
        // constant payoffs land mid-interval
        assert_eq!(g.utility_at(1, 3), 0.5);
    }
}
