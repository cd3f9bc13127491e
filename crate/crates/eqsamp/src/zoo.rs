//! Constructors for the benchmark games and distributions used by the
//! experiments, each bundled with named reference distributions whose
//! equilibrium claims are verified when the instance is built.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::dist::{Distribution, JointDistribution, ProductDistribution};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, Game};
use crate::regret::{is_eps_ce, is_eps_nash};

/// Hard cap on total utility cells so zoo games stay desk-scale.
const MAX_UTILITY_CELLS: usize = 10_000_000;

/// A game plus named reference distributions.
#[derive(Debug, Clone)]
pub struct LabeledInstance {
    pub name: String,
    pub game: Game,
    pub distributions: BTreeMap<String, Distribution>,
    /// What the instance demonstrates.
    pub note: String,
}

impl LabeledInstance {
    pub fn distribution(&self, name: &str) -> Result<&Distribution> {
        self.distributions.get(name).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "instance {:?} has no distribution {name:?} (knows: {})",
                self.name,
                self.distributions.keys().join(", ")
            ))
        })
    }
}

fn check_cells(players: usize, profiles: usize) -> Result<()> {
    let cells = players.checked_mul(profiles);
    match cells {
        Some(c) if c <= MAX_UTILITY_CELLS => Ok(()),
        _ => Err(Error::CapabilityExceeded(format!(
            "game needs {players} x {profiles} utility cells, cap is {MAX_UTILITY_CELLS}"
        ))),
    }
}

fn assert_exact_nash(game: &Game, x: &ProductDistribution, what: &str) {
    let (ok, report) = is_eps_nash(game, x, 0.0).expect("verifier accepts zoo fixture");
    assert!(
        ok,
        "{what} is not an exact Nash equilibrium (max gain {:?})",
        report.max_nash_gain()
    );
}

fn assert_exact_ce(game: &Game, x: &JointDistribution, what: &str) {
    let (ok, report) = is_eps_ce(game, x, 0.0).expect("verifier accepts zoo fixture");
    assert!(
        ok,
        "{what} is not an exact correlated equilibrium (max regret {:?})",
        report.max_ce_regret()
    );
}

/// Two-player matching pennies with payoffs in {0,1}: the matcher (player 1)
/// wins on equal actions, the mismatcher (player 2) otherwise. Ships the
/// uniform mixed profile, the unique exact Nash equilibrium.
pub fn matching_pennies() -> LabeledInstance {
    let game = Game::from_fn(vec![2, 2], |player, a| {
        let matched = a[0] == a[1];
        if (player == 0) == matched {
            1.0
        } else {
            0.0
        }
    })
    .expect("static construction");
    let uniform = ProductDistribution::uniform(game.action_counts());
    assert_exact_nash(&game, &uniform, "matching pennies uniform profile");
    let mut distributions = BTreeMap::new();
    distributions.insert("uniform_ne".to_string(), Distribution::Product(uniform));
    LabeledInstance {
        name: "matching_pennies".into(),
        game,
        note: "2x2 zero-sum coordination/anti-coordination; unique mixed equilibrium".into(),
        distributions,
    }
}

/// `2·n_pairs` players arranged in independent matching-pennies pairs:
/// players `2i` and `2i+1` play against each other and ignore everyone else.
/// Ships the all-uniform product profile, an exact Nash equilibrium.
///
/// Needs `2P·4^P` utility cells, so only small pair counts materialize; the
/// experiments module has a pair-factored path for large ones.
pub fn pairs_matching_pennies(n_pairs: usize) -> Result<LabeledInstance> {
    if n_pairs == 0 {
        return Err(Error::InvalidArgument("need at least one pair".into()));
    }
    let players = 2 * n_pairs;
    let profiles = 1usize
        .checked_shl(players as u32)
        .ok_or_else(|| Error::CapabilityExceeded("profile count overflows".into()))?;
    check_cells(players, profiles)?;
    let game = Game::from_fn(vec![2; players], |player, a| {
        let partner = player ^ 1;
        let matched = a[player] == a[partner];
        // even-indexed players are the matchers of their pair
        if (player % 2 == 0) == matched {
            1.0
        } else {
            0.0
        }
    })?;
    let uniform = ProductDistribution::uniform(game.action_counts());
    assert_exact_nash(&game, &uniform, "all-uniform pairs profile");
    let mut distributions = BTreeMap::new();
    distributions.insert("all_uniform".to_string(), Distribution::Product(uniform));
    Ok(LabeledInstance {
        name: format!("pairs_matching_pennies({n_pairs})"),
        game,
        note: "independent 2x2 pairs; some marginal goes pure unless k ≳ log(players)".into(),
        distributions,
    })
}

/// Player 2's action set for [`althofer_game`]: all size-`b` subsets of
/// `{0,…,2b−1}` in lexicographic order.
pub fn althofer_subsets(b: usize) -> Vec<Vec<usize>> {
    (0..2 * b).combinations(b).collect()
}

/// Hide-and-cover zero-sum game: player 1 picks an element of `{0,…,2b−1}`,
/// player 2 picks a size-`b` subset and wins when it covers the element.
/// Payoffs stored in `[0,1]` as `u_2 ∈ {0,1}`, `u_1 = 1 − u_2`, which is an
/// affine relabeling of the ±1 zero-sum form and preserves all regrets.
/// Ships the mutually-uniform exact equilibrium.
///
/// Any distribution giving player 1 at most `b` distinct actions hands
/// player 2 a covering subset worth a full unit, so small supports can never
/// be quarter-equilibria.
pub fn althofer_game(b: usize) -> Result<LabeledInstance> {
    if b == 0 {
        return Err(Error::InvalidArgument("b must be ≥ 1".into()));
    }
    let subsets = althofer_subsets(b);
    let m1 = 2 * b;
    let m2 = subsets.len();
    check_cells(2, m1.checked_mul(m2).ok_or_else(|| {
        Error::CapabilityExceeded("profile count overflows".into())
    })?)?;
    let game = Game::from_fn(vec![m1, m2], |player, a| {
        let covered = subsets[a[1]].binary_search(&a[0]).is_ok();
        if (player == 1) == covered {
            1.0
        } else {
            0.0
        }
    })?;
    let uniform = ProductDistribution::uniform(game.action_counts());
    assert_exact_nash(&game, &uniform, "uniform element vs uniform subsets");
    let mut distributions = BTreeMap::new();
    distributions.insert("uniform_ne".to_string(), Distribution::Product(uniform));
    Ok(LabeledInstance {
        name: format!("althofer({b})"),
        game,
        note: "element-vs-covering-subset game; supports of ≤ b actions lose a full unit".into(),
    distributions,
    })
}

/// Matching pennies where each player also announces a payoff-irrelevant
/// "dummy" coordinate `d ∈ {0,…,m−1}`. Action `(r, d)` has index `r·m + d`.
///
/// Ships two reference distributions:
/// * `canonical_ce` — both players draw the same uniform dummy and play
///   independent fair coins on the real coordinate; an exact correlated
///   equilibrium with support `4m`.
/// * `uniform_ne` — both players uniform over all `2m` actions; an exact
///   Nash equilibrium.
pub fn dummy_matching_pennies(m: usize) -> Result<LabeledInstance> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be ≥ 1".into()));
    }
    let actions = 2 * m;
    check_cells(2, actions * actions)?;
    let game = Game::from_fn(vec![actions, actions], |player, a| {
        let r1 = a[0] / m;
        let r2 = a[1] / m;
        if (player == 0) == (r1 == r2) {
            1.0
        } else {
            0.0
        }
    })?;

    let mut support = BTreeMap::new();
    let mass = 1.0 / (4 * m) as f64;
    for d in 0..m {
        for r1 in 0..2 {
            for r2 in 0..2 {
                let index = game
                    .profile_to_index(&ActionProfile(vec![r1 * m + d, r2 * m + d]))
                    .expect("profile valid by construction");
                support.insert(index, mass);
            }
        }
    }
    let canonical = JointDistribution::new(support)?;
    assert_exact_ce(&game, &canonical, "shared-dummy coin-flip distribution");

    let uniform = ProductDistribution::uniform(game.action_counts());
    assert_exact_nash(&game, &uniform, "uniform profile of the dummy game");

    let mut distributions = BTreeMap::new();
    distributions.insert("canonical_ce".to_string(), Distribution::Joint(canonical));
    distributions.insert("uniform_ne".to_string(), Distribution::Product(uniform));
    Ok(LabeledInstance {
        name: format!("dummy_matching_pennies({m})"),
        game,
        note: "pennies with m payoff-irrelevant dummy actions; correlation hides in the dummies"
            .into(),
        distributions,
    })
}

/// Deterministic-given-the-dummy member of the adversarial family for
/// [`dummy_matching_pennies`]: for each dummy `d`, mass `1/m` on the single
/// profile `((r₁, d), (r₂, d))` where the code `codes[d] ∈ {0,1,2,3}` packs
/// `r₁ = code >> 1` and `r₂ = code & 1`.
///
/// On any recommendation each player can read off the opponent's realized
/// action, so one of the two players always has switching regret ≥ 1/2.
pub fn dummy_y_b(game: &Game, m: usize, codes: &[u8]) -> Result<JointDistribution> {
    if codes.len() != m {
        return Err(Error::InvalidArgument(format!(
            "need {m} codes, got {}",
            codes.len()
        )));
    }
    if codes.iter().any(|&c| c > 3) {
        return Err(Error::InvalidArgument("codes must be 2-bit values".into()));
    }
    let mut support = BTreeMap::new();
    let mass = 1.0 / m as f64;
    for (d, &code) in codes.iter().enumerate() {
        let r1 = (code >> 1) as usize;
        let r2 = (code & 1) as usize;
        let index = game.profile_to_index(&ActionProfile(vec![r1 * m + d, r2 * m + d]))?;
        *support.entry(index).or_insert(0.0) += mass;
    }
    JointDistribution::new(support)
}

/// Probability that `k` draws of a uniform dummy in `{0,…,m−1}` are all
/// distinct: `∏_{t<k} (1 − t/m)`, computed exactly in one pass.
pub fn omega_probability(m: u64, k: u64) -> f64 {
    assert!(m >= 1, "m must be ≥ 1");
    let mut p = 1.0;
    for t in 0..k.min(m) {
        p *= 1.0 - t as f64 / m as f64;
    }
    if k > m {
        0.0
    } else {
        p
    }
}

/// Catalog for the command line: (name, parameter hint, note).
pub fn catalog() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        (
            "matching_pennies",
            "no parameter",
            "2x2 zero-sum; uniform_ne",
        ),
        (
            "pairs_matching_pennies",
            "--param <n_pairs>",
            "independent 2x2 pairs; all_uniform",
        ),
        (
            "althofer",
            "--param <b>",
            "element vs covering b-subsets of 2b; uniform_ne",
        ),
        (
            "dummy_matching_pennies",
            "--param <m>",
            "pennies with m dummy coordinates; canonical_ce, uniform_ne",
        ),
    ]
}

/// Build a catalog instance by name.
pub fn by_name(name: &str, param: Option<usize>) -> Result<LabeledInstance> {
    match name {
        "matching_pennies" => Ok(matching_pennies()),
        "pairs_matching_pennies" => pairs_matching_pennies(param.ok_or_else(|| {
            Error::InvalidArgument("pairs_matching_pennies needs --param <n_pairs>".into())
        })?),
        "althofer" => althofer_game(param.ok_or_else(|| {
            Error::InvalidArgument("althofer needs --param <b>".into())
        })?),
        "dummy_matching_pennies" => dummy_matching_pennies(param.ok_or_else(|| {
            Error::InvalidArgument("dummy_matching_pennies needs --param <m>".into())
        })?),
        other => Err(Error::InvalidArgument(format!(
            "unknown zoo instance {other:?}"
        ))),
    }
}
