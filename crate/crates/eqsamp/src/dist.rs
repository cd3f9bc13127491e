//! Product, joint and k-uniform distributions over action profiles, plus
//! i.i.d. sampling and empirical-distribution construction.
//!
//! Empirical objects keep exact integer counts; probabilities are derived as
//! `count / k` only when a caller needs them.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionProfile, Game, ProfileIndex};
use crate::rng::SeedInfo;

const SUM_TOL: f64 = 1e-9;

/// Independent per-player mixed strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductDistribution {
    factors: Vec<Vec<f64>>,
}

impl ProductDistribution {
    pub fn new(factors: Vec<Vec<f64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDistribution("no players".into()));
        }
        for (player, factor) in factors.iter().enumerate() {
            if factor.is_empty() {
                return Err(Error::InvalidDistribution(format!(
                    "player {player}: empty strategy vector"
                )));
            }
            if factor.iter().any(|&p| p < 0.0 || p.is_nan()) {
                return Err(Error::InvalidDistribution(format!(
                    "player {player}: negative probability"
                )));
            }
            let sum: f64 = factor.iter().sum();
            if (sum - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "player {player}: probabilities sum to {sum}"
                )));
            }
        }
        Ok(Self { factors })
    }

    /// Uniform strategy for every player.
    pub fn uniform(action_counts: &[usize]) -> Self {
        let factors = action_counts
            .iter()
            .map(|&m| vec![1.0 / m as f64; m])
            .collect();
        Self { factors }
    }

    /// Every player deterministically plays the given profile.
    pub fn point_mass(profile: &ActionProfile, action_counts: &[usize]) -> Result<Self> {
        let factors = profile
            .0
            .iter()
            .zip(action_counts)
            .enumerate()
            .map(|(player, (&a, &m))| {
                if a >= m {
                    return Err(Error::ActionOutOfRange {
                        player,
                        action: a,
                        limit: m,
                    });
                }
                let mut v = vec![0.0; m];
                v[a] = 1.0;
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { factors })
    }

    pub fn players(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, player: usize) -> &[f64] {
        &self.factors[player]
    }

    pub fn factors(&self) -> &[Vec<f64>] {
        &self.factors
    }

    pub(crate) fn check_shape(&self, game: &Game) -> Result<()> {
        if self.factors.len() != game.players() {
            return Err(Error::DimensionMismatch(format!(
                "distribution has {} factors, game has {} players",
                self.factors.len(),
                game.players()
            )));
        }
        for (player, factor) in self.factors.iter().enumerate() {
            if factor.len() != game.action_count(player) {
                return Err(Error::DimensionMismatch(format!(
                    "player {player}: strategy over {} actions, game has {}",
                    factor.len(),
                    game.action_count(player)
                )));
            }
        }
        Ok(())
    }

    /// Materialize as a sparse joint distribution (skips zero-mass profiles).
    pub fn to_joint(&self, game: &Game) -> Result<JointDistribution> {
        self.check_shape(game)?;
        let mut map = BTreeMap::new();
        for index in 0..game.num_profiles() {
            let profile = game.index_to_profile(ProfileIndex(index))?;
            let mass: f64 = profile
                .0
                .iter()
                .enumerate()
                .map(|(j, &a_j)| self.factors[j][a_j])
                .product();
            if mass > 0.0 {
                map.insert(ProfileIndex(index), mass);
            }
        }
        JointDistribution::new(map)
    }
}

/// Sparse distribution over action profiles, keyed by flat profile index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    support: BTreeMap<ProfileIndex, f64>,
}

impl JointDistribution {
    pub fn new(support: BTreeMap<ProfileIndex, f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if support.values().any(|&p| p <= 0.0 || p.is_nan()) {
            return Err(Error::InvalidDistribution(
                "support probabilities must be positive".into(),
            ));
        }
        let sum: f64 = support.values().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(Self { support })
    }

    pub fn point_mass(index: ProfileIndex) -> Self {
        let mut support = BTreeMap::new();
        support.insert(index, 1.0);
        Self { support }
    }

    pub fn uniform_over(indices: &[ProfileIndex]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let p = 1.0 / indices.len() as f64;
        let mut support = BTreeMap::new();
        for &idx in indices {
            *support.entry(idx).or_insert(0.0) += p;
        }
        Self::new(support)
    }

    /// Ascending-index iteration over (profile, probability) pairs.
    pub fn support(&self) -> impl Iterator<Item = (ProfileIndex, f64)> + '_ {
        self.support.iter().map(|(&i, &p)| (i, p))
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn probability(&self, index: ProfileIndex) -> f64 {
        self.support.get(&index).copied().unwrap_or(0.0)
    }

    pub(crate) fn check_shape(&self, game: &Game) -> Result<()> {
        if let Some((&max, _)) = self.support.iter().next_back() {
            if max.0 >= game.num_profiles() {
                return Err(Error::DimensionMismatch(format!(
                    "support contains profile index {} but game has {} profiles",
                    max.0,
                    game.num_profiles()
                )));
            }
        }
        Ok(())
    }

    /// Per-player marginal probability vector.
    pub fn marginal(&self, game: &Game, player: usize) -> Result<Vec<f64>> {
        self.check_shape(game)?;
        let mut out = vec![0.0; game.action_count(player)];
        for (index, prob) in self.support() {
            let profile = game.index_to_profile(index)?;
            out[profile.0[player]] += prob;
        }
        Ok(out)
    }
}

/// Uniform distribution over a size-`k` multiset of profiles, stored as counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KUniformJoint {
    k: u64,
    counts: BTreeMap<ProfileIndex, u64>,
}

impl KUniformJoint {
    pub fn new(k: u64, counts: BTreeMap<ProfileIndex, u64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        if counts.values().any(|&c| c == 0) {
            return Err(Error::InvalidDistribution("zero count in support".into()));
        }
        let total: u64 = counts.values().sum();
        if total != k {
            return Err(Error::InvalidDistribution(format!(
                "counts sum to {total}, expected {k}"
            )));
        }
        Ok(Self { k, counts })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn counts(&self) -> impl Iterator<Item = (ProfileIndex, u64)> + '_ {
        self.counts.iter().map(|(&i, &c)| (i, c))
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    /// Induced probabilities `count / k`.
    pub fn to_joint(&self) -> JointDistribution {
        let k = self.k as f64;
        let support = self
            .counts
            .iter()
            .map(|(&i, &c)| (i, c as f64 / k))
            .collect();
        JointDistribution { support }
    }
}

/// A product or joint distribution, as contexts require.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Distribution {
    Product(ProductDistribution),
    Joint(JointDistribution),
}

impl Distribution {
    pub fn as_product(&self) -> Result<&ProductDistribution> {
        match self {
            Distribution::Product(p) => Ok(p),
            Distribution::Joint(_) => Err(Error::NotProductForm),
        }
    }

    pub fn as_joint(&self) -> Option<&JointDistribution> {
        match self {
            Distribution::Joint(j) => Some(j),
            Distribution::Product(_) => None,
        }
    }
}

/// Ordered i.i.d. draws of action profiles, with seed provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub profiles: Vec<ActionProfile>,
    pub seed: SeedInfo,
}

impl SampleBatch {
    pub fn k(&self) -> usize {
        self.profiles.len()
    }

    /// CSV with a sidecar comment recording provenance, then a header row.
    pub fn to_csv(&self) -> String {
        let n = self.profiles.first().map_or(0, |p| p.0.len());
        let mut out = format!(
            "# master_seed={} stream_id={} k={}\n",
            self.seed.master_seed,
            self.seed.stream_id,
            self.k()
        );
        let header: Vec<String> = (1..=n).map(|i| format!("a_{i}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for profile in &self.profiles {
            let row: Vec<String> = profile.0.iter().map(|a| a.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let sidecar = lines
            .next()
            .ok_or_else(|| Error::Malformed("empty sample file".into()))?;
        let sidecar = sidecar
            .strip_prefix('#')
            .ok_or_else(|| Error::Malformed("missing provenance comment".into()))?;
        let mut master_seed = None;
        let mut stream_id = None;
        let mut k = None;
        for field in sidecar.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("bad sidecar field {field:?}")))?;
            let value: u64 = value
                .parse()
                .map_err(|_| Error::Malformed(format!("bad sidecar value {value:?}")))?;
            match key {
                "master_seed" => master_seed = Some(value),
                "stream_id" => stream_id = Some(value),
                "k" => k = Some(value),
                _ => return Err(Error::Malformed(format!("unknown sidecar key {key:?}"))),
            }
        }
        let (master_seed, stream_id, k) = match (master_seed, stream_id, k) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(Error::Malformed("incomplete sidecar".into())),
        };
        let header = lines
            .next()
            .ok_or_else(|| Error::Malformed("missing header row".into()))?;
        let n = header.split(',').count();
        let mut profiles = Vec::new();
        for line in lines {
            let actions = line
                .split(',')
                .map(|cell| {
                    cell.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Malformed(format!("bad action {cell:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if actions.len() != n {
                return Err(Error::Malformed(format!(
                    "row has {} columns, header has {n}",
                    actions.len()
                )));
            }
            profiles.push(ActionProfile(actions));
        }
        if profiles.len() as u64 != k {
            return Err(Error::Malformed(format!(
                "sidecar says k={k} but file has {} rows",
                profiles.len()
            )));
        }
        Ok(Self {
            profiles,
            seed: SeedInfo::new(master_seed, stream_id),
        })
    }
}

/// One inverse-CDF draw over cumulative weights; `weights` must sum to ~1.
fn inverse_cdf_draw(weights: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        cumulative += w;
        if u < cumulative {
            return i;
        }
    }
    weights.len() - 1
}

/// Draw `k` i.i.d. action profiles from `x`.
///
/// Product case: one uniform variate per (sample, player), players in order.
/// Joint case: one uniform variate per sample over the ascending support.
/// Deterministic given the seed.
pub fn draw_samples(
    game: &Game,
    x: &Distribution,
    k: usize,
    seed: SeedInfo,
) -> Result<SampleBatch> {
    if k == 0 {
        return Err(Error::InvalidArgument("sample count k must be ≥ 1".into()));
    }
    let mut rng = seed.rng();
    let mut profiles = Vec::with_capacity(k);
    match x {
        Distribution::Product(p) => {
            p.check_shape(game)?;
            for _ in 0..k {
                let actions = (0..game.players())
                    .map(|i| inverse_cdf_draw(p.factor(i), rng.gen::<f64>()))
                    .collect();
                profiles.push(ActionProfile(actions));
            }
        }
        Distribution::Joint(j) => {
            j.check_shape(game)?;
            let support: Vec<(ProfileIndex, f64)> = j.support().collect();
            let weights: Vec<f64> = support.iter().map(|&(_, p)| p).collect();
            for _ in 0..k {
                let pick = inverse_cdf_draw(&weights, rng.gen::<f64>());
                profiles.push(game.index_to_profile(support[pick].0)?);
            }
        }
    }
    Ok(SampleBatch { profiles, seed })
}

/// Per-player empirical frequencies `s_i(a) = #{t : a_i(t)=a} / k`.
pub fn product_empirical(batch: &SampleBatch, game: &Game) -> Result<ProductDistribution> {
    if batch.profiles.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    let counts = empirical_counts_per_player(batch, game)?;
    let k = batch.k() as f64;
    let factors = counts
        .into_iter()
        .map(|player_counts| player_counts.into_iter().map(|c| c as f64 / k).collect())
        .collect();
    ProductDistribution::new(factors)
}

/// Exact per-player action counts of a batch.
pub fn empirical_counts_per_player(batch: &SampleBatch, game: &Game) -> Result<Vec<Vec<u64>>> {
    let mut counts: Vec<Vec<u64>> = game
        .action_counts()
        .iter()
        .map(|&m| vec![0u64; m])
        .collect();
    for profile in &batch.profiles {
        if profile.0.len() != game.players() {
            return Err(Error::ProfileLength {
                expected: game.players(),
                got: profile.0.len(),
            });
        }
        for (player, &action) in profile.0.iter().enumerate() {
            if action >= game.action_count(player) {
                return Err(Error::ActionOutOfRange {
                    player,
                    action,
                    limit: game.action_count(player),
                });
            }
            counts[player][action] += 1;
        }
    }
    Ok(counts)
}

/// Empirical distribution of whole profiles; k-uniform by construction.
pub fn joint_empirical(batch: &SampleBatch, game: &Game) -> Result<KUniformJoint> {
    if batch.profiles.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    let mut counts: BTreeMap<ProfileIndex, u64> = BTreeMap::new();
    for profile in &batch.profiles {
        let index = game.profile_to_index(profile)?;
        *counts.entry(index).or_insert(0) += 1;
    }
    KUniformJoint::new(batch.k() as u64, counts)
}
