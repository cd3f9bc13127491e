//! Exhaustive search for ε-Nash equilibria over k-uniform strategy tuples.
//!
//! Candidates are n-tuples of compositions of `k` into `m_i` nonnegative
//! parts, taken in lexicographic order (player 1 most significant). The
//! first tuple whose induced product distribution passes the ε-Nash check
//! wins, so output is deterministic.

use serde::{Deserialize, Serialize};

use crate::dist::ProductDistribution;
use crate::error::{Error, Result};
use crate::game::Game;
use crate::regret::{is_eps_nash, max_nash_deviation, RegretReport, VERIFIER_TOL};

/// A mixed strategy with all probabilities integer multiples of `1/k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KUniformStrategy {
    pub k: u64,
    pub counts: Vec<u64>,
}

impl KUniformStrategy {
    pub fn new(k: u64, counts: Vec<u64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be ≥ 1".into()));
        }
        let total: u64 = counts.iter().sum();
        if total != k {
            return Err(Error::InvalidDistribution(format!(
                "counts sum to {total}, expected {k}"
            )));
        }
        Ok(Self { k, counts })
    }

    /// Induced probability vector `counts / k`.
    pub fn mixed(&self) -> Vec<f64> {
        let k = self.k as f64;
        self.counts.iter().map(|&c| c as f64 / k).collect()
    }
}

/// Lexicographic stream of all compositions of `k` into `m` nonnegative parts.
pub struct CompositionIter {
    next: Option<Vec<u64>>,
}

impl CompositionIter {
    fn new(m: usize, k: u64) -> Self {
        let mut first = vec![0u64; m];
        if let Some(last) = first.last_mut() {
            *last = k;
        }
        Self {
            next: if m == 0 { None } else { Some(first) },
        }
    }
}

impl Iterator for CompositionIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        // lexicographic successor: bump the rightmost position (except the
        // last) that still has mass to its right, zero the tail into the
        // final slot
        let m = current.len();
        let mut successor = None;
        if m > 1 {
            let mut tail: u64 = 0;
            for i in (0..m - 1).rev() {
                tail += current[i + 1];
                if tail > 0 {
                    let mut next = current.clone();
                    next[i] += 1;
                    for slot in next.iter_mut().skip(i + 1) {
                        *slot = 0;
                    }
                    next[m - 1] = tail - 1;
                    successor = Some(next);
                    break;
                }
            }
        }
        self.next = successor;
        Some(current)
    }
}

/// All `C(k+m−1, m−1)` compositions of `k` into `m` parts, lexicographic.
pub fn enumerate_k_uniform(m: usize, k: u64) -> Result<CompositionIter> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be ≥ 1".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be ≥ 1".into()));
    }
    Ok(CompositionIter::new(m, k))
}

/// `C(k+m−1, m−1)` with overflow detection.
pub fn composition_count(m: usize, k: u64) -> Option<u128> {
    binomial(k + m as u64 - 1, m as u64 - 1)
}

fn binomial(n: u64, r: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut value: u128 = 1;
    for i in 0..r {
        value = value.checked_mul((n - i) as u128)?;
        value /= (i + 1) as u128;
    }
    Some(value)
}

/// Knobs for the exhaustive search.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Abort if the candidate count exceeds this.
    pub cap: u128,
    /// Heuristic accelerator: only consider strategies whose support size is
    /// at most this. Narrows the search beyond the guaranteed regime; a
    /// NOT_FOUND under a restriction is not evidence of nonexistence.
    pub max_support: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            cap: 100_000_000,
            max_support: None,
        }
    }
}

/// Outcome of the exhaustive search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SolveOutcome {
    Found {
        strategies: Vec<KUniformStrategy>,
        report: RegretReport,
    },
    NotFound,
}

/// Search all k-uniform strategy tuples for an ε-Nash equilibrium.
///
/// Returns the first passing tuple in candidate order; NOT_FOUND can only
/// occur when `k` is below the support-size existence threshold (or when a
/// support restriction is active).
pub fn exhaustive_k_uniform_nash(
    game: &Game,
    eps: f64,
    k: u64,
    options: &SolverOptions,
) -> Result<SolveOutcome> {
    if eps < 0.0 {
        return Err(Error::InvalidArgument("ε must be ≥ 0".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be ≥ 1".into()));
    }
    let mut total: u128 = 1;
    for &m in game.action_counts() {
        let per_player = composition_count(m, k).ok_or_else(|| {
            Error::CapabilityExceeded("composition count overflows 128 bits".into())
        })?;
        total = total.checked_mul(per_player).ok_or_else(|| {
            Error::CapabilityExceeded("candidate count overflows 128 bits".into())
        })?;
    }
    if total > options.cap {
        return Err(Error::CapabilityExceeded(format!(
            "{total} candidate tuples exceed the cap of {}",
            options.cap
        )));
    }

    // materialize per-player candidate lists once
    let per_player: Vec<Vec<Vec<u64>>> = game
        .action_counts()
        .iter()
        .map(|&m| -> Result<Vec<Vec<u64>>> {
            let all = enumerate_k_uniform(m, k)?;
            Ok(match options.max_support {
                Some(s) => all
                    .filter(|c| c.iter().filter(|&&x| x > 0).count() <= s)
                    .collect(),
                None => all.collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if per_player.iter().any(|candidates| candidates.is_empty()) {
        return Ok(SolveOutcome::NotFound);
    }

    let n = game.players();
    let kf = k as f64;
    let mut cursor = vec![0usize; n];
    let mut factors: Vec<Vec<f64>> = cursor
        .iter()
        .enumerate()
        .map(|(i, &c)| per_player[i][c].iter().map(|&x| x as f64 / kf).collect())
        .collect();
    loop {
        let x = ProductDistribution::new(factors.clone())?;
        let (gain, _, _) = max_nash_deviation(game, &x)?;
        if gain <= eps + VERIFIER_TOL {
            let (ok, report) = is_eps_nash(game, &x, eps)?;
            debug_assert!(ok);
            let strategies = cursor
                .iter()
                .enumerate()
                .map(|(i, &c)| KUniformStrategy::new(k, per_player[i][c].clone()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(SolveOutcome::Found { strategies, report });
        }
        // odometer, last player fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(SolveOutcome::NotFound);
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < per_player[pos].len() {
                factors[pos] = per_player[pos][cursor[pos]]
                    .iter()
                    .map(|&x| x as f64 / kf)
                    .collect();
                break;
            }
            cursor[pos] = 0;
            factors[pos] = per_player[pos][0].iter().map(|&x| x as f64 / kf).collect();
        }
    }
}
