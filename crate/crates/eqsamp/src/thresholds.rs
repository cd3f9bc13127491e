//! Closed-form sample-complexity and support-size thresholds.
//!
//! Each function evaluates one bound of the form `k > B(ε, α, n, m)` and
//! returns both the real-valued right-hand side and the smallest integer
//! strictly exceeding it. Natural logarithms throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which equilibrium notion a threshold refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    Nash,
    Correlated,
    CoarseCorrelated,
}

impl EquilibriumKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nash" | "ne" => Ok(Self::Nash),
            "ce" | "correlated" => Ok(Self::Correlated),
            "cce" | "coarse" | "coarse_correlated" | "coarse-correlated" => {
                Ok(Self::CoarseCorrelated)
            }
            other => Err(Error::InvalidArgument(format!(
                "unknown equilibrium kind {other:?}"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Nash => "nash",
            Self::Correlated => "ce",
            Self::CoarseCorrelated => "cce",
        }
    }
}

/// What the sample count is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdPurpose {
    /// Empirical play converges to an ε-equilibrium with probability > 1−α.
    EmpiricalConvergence,
    /// A k-uniform ε-equilibrium exists (probability argument, no α).
    SupportSize,
    /// ε-test with error probability α.
    Test,
}

impl ThresholdPurpose {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "convergence" | "empirical" | "empirical_convergence" => Ok(Self::EmpiricalConvergence),
            "support" | "support_size" => Ok(Self::SupportSize),
            "test" => Ok(Self::Test),
            other => Err(Error::InvalidArgument(format!(
                "unknown threshold purpose {other:?}"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::EmpiricalConvergence => "convergence",
            Self::SupportSize => "support_size",
            Self::Test => "test",
        }
    }
}

/// An evaluated bound: the real right-hand side and the minimal integer
/// strictly above it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub raw_bound: f64,
    pub k: u64,
}

impl ThresholdResult {
    fn from_raw(raw_bound: f64) -> Self {
        let k = if raw_bound < 0.0 {
            1
        } else {
            raw_bound.floor() as u64 + 1
        };
        Self { raw_bound, k }
    }
}

fn check_eps(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "ε must lie in (0,1), got {eps}"
        )));
    }
    Ok(eps)
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "α must lie in (0,1), got {alpha}"
        )));
    }
    Ok(alpha)
}

fn check_counts(n: u64, m: u64, min_m: u64) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be ≥ 1".into()));
    }
    if m < min_m {
        return Err(Error::InvalidArgument(format!("m must be ≥ {min_m}")));
    }
    Ok((n as f64, m as f64))
}

/// Convergence to an ε-Nash equilibrium: `8(ln m + ln n − ln α − ln ε + ln 8)/ε²`.
pub fn k_nash(eps: f64, alpha: f64, n: u64, m: u64) -> Result<ThresholdResult> {
    let eps = check_eps(eps)?;
    let alpha = check_alpha(alpha)?;
    let (nf, mf) = check_counts(n, m, 1)?;
    let raw = 8.0 * (mf.ln() + nf.ln() - alpha.ln() - eps.ln() + 8f64.ln()) / (eps * eps);
    Ok(ThresholdResult::from_raw(raw))
}

/// Existence of a k-uniform ε-Nash equilibrium: `8(ln m + ln n − ln ε + ln 8)/ε²`.
pub fn k_nash_support(eps: f64, n: u64, m: u64) -> Result<ThresholdResult> {
    let eps = check_eps(eps)?;
    let (nf, mf) = check_counts(n, m, 1)?;
    let raw = 8.0 * (mf.ln() + nf.ln() - eps.ln() + 8f64.ln()) / (eps * eps);
    Ok(ThresholdResult::from_raw(raw))
}

/// ε-test for δ-Nash equilibrium: `72(ln(m+1) + ln n − ln α − ln ε + ln 24)/ε²`.
///
/// Independent of δ.
pub fn k_nash_test(eps: f64, alpha: f64, n: u64, m: u64) -> Result<ThresholdResult> {
    let eps = check_eps(eps)?;
    let alpha = check_alpha(alpha)?;
    let (nf, mf) = check_counts(n, m, 1)?;
    let raw =
        72.0 * ((mf + 1.0).ln() + nf.ln() - alpha.ln() - eps.ln() + 24f64.ln()) / (eps * eps);
    Ok(ThresholdResult::from_raw(raw))
}

/// Convergence to an ε-correlated equilibrium: `2(m·ln m + ln n − ln α)/ε²`.
pub fn k_ce(eps: f64, alpha: f64, n: u64, m: u64) -> Result<ThresholdResult> {
    let eps = check_eps(eps)?;
    let alpha = check_alpha(alpha)?;
    let (nf, mf) = check_counts(n, m, 1)?;
    let raw = 2.0 * (mf * mf.ln() + nf.ln() - alpha.ln()) / (eps * eps);
    Ok(ThresholdResult::from_raw(raw))
}

/// Existence of a k-uniform ε-correlated equilibrium:
/// `(264/ε⁴)·ln m·(ln m + ln n − ln ε + ln 16)`.
///
/// Rejects m = 1, where the leading `ln m` factor collapses the bound.
pub fn k_ce_support(eps: f64, n: u64, m: u64) -> Result<ThresholdResult> {
    let eps = check_eps(eps)?;
    let (nf, mf) = check_counts(n, m, 2)?;
    let raw = 264.0 / eps.powi(4) * mf.ln() * (mf.ln() + nf.ln() - eps.ln() + 16f64.ln());
    Ok(ThresholdResult::from_raw(raw))
}

/// ε-test for δ-correlated equilibrium: `8(m·ln m + ln n − ln α)/ε²`.
pub fn k_ce_test(eps: f64, alpha: f64, n: u64, m: u64) -> Result<ThresholdResult> {
    let eps = check_eps(eps)?;
    let alpha = check_alpha(alpha)?;
    let (nf, mf) = check_counts(n, m, 1)?;
    let raw = 8.0 * (mf * mf.ln() + nf.ln() - alpha.ln()) / (eps * eps);
    Ok(ThresholdResult::from_raw(raw))
}

/// Convergence to an ε-coarse-correlated equilibrium: `2(ln m + ln n − ln α)/ε²`.
pub fn k_cce(eps: f64, alpha: f64, n: u64, m: u64) -> Result<ThresholdResult> {
    let eps = check_eps(eps)?;
    let alpha = check_alpha(alpha)?;
    let (nf, mf) = check_counts(n, m, 1)?;
    let raw = 2.0 * (mf.ln() + nf.ln() - alpha.ln()) / (eps * eps);
    Ok(ThresholdResult::from_raw(raw))
}

/// Existence of a k-uniform ε-coarse-correlated equilibrium: `2(ln m + ln n)/ε²`.
pub fn k_cce_support(eps: f64, n: u64, m: u64) -> Result<ThresholdResult> {
    let eps = check_eps(eps)?;
    let (nf, mf) = check_counts(n, m, 1)?;
    let raw = 2.0 * (mf.ln() + nf.ln()) / (eps * eps);
    Ok(ThresholdResult::from_raw(raw))
}

/// ε-test for δ-coarse-correlated equilibrium: `8(ln m + ln n − ln α)/ε²`.
pub fn k_cce_test(eps: f64, alpha: f64, n: u64, m: u64) -> Result<ThresholdResult> {
    let eps = check_eps(eps)?;
    let alpha = check_alpha(alpha)?;
    let (nf, mf) = check_counts(n, m, 1)?;
    let raw = 8.0 * (mf.ln() + nf.ln() - alpha.ln()) / (eps * eps);
    Ok(ThresholdResult::from_raw(raw))
}

/// Dispatch on (kind, purpose). `alpha` is ignored for support-size bounds.
pub fn threshold(
    kind: EquilibriumKind,
    purpose: ThresholdPurpose,
    eps: f64,
    alpha: Option<f64>,
    n: u64,
    m: u64,
) -> Result<ThresholdResult> {
    use EquilibriumKind::*;
    use ThresholdPurpose::*;
    let need_alpha = || {
        alpha.ok_or_else(|| {
            Error::InvalidArgument("this threshold requires an error probability α".into())
        })
    };
    match (kind, purpose) {
        (Nash, EmpiricalConvergence) => k_nash(eps, need_alpha()?, n, m),
        (Nash, SupportSize) => k_nash_support(eps, n, m),
        (Nash, Test) => k_nash_test(eps, need_alpha()?, n, m),
        (Correlated, EmpiricalConvergence) => k_ce(eps, need_alpha()?, n, m),
        (Correlated, SupportSize) => k_ce_support(eps, n, m),
        (Correlated, Test) => k_ce_test(eps, need_alpha()?, n, m),
        (CoarseCorrelated, EmpiricalConvergence) => k_cce(eps, need_alpha()?, n, m),
        (CoarseCorrelated, SupportSize) => k_cce_support(eps, n, m),
        (CoarseCorrelated, Test) => k_cce_test(eps, need_alpha()?, n, m),
    }
}

/// Minimum samples any correlated-equilibrium test needs: `√(m/2)`.
pub fn cor_im_lower_bound(m: u64) -> f64 {
    (m as f64 / 2.0).sqrt()
}

/// `base^exponent`, exact while it fits below 2^63, else a base-10 logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BigPow {
    Exact(u64),
    Log10(f64),
}

impl BigPow {
    fn compute(base: u64, exponent: u64) -> Self {
        if exponent == 0 || base == 1 {
            return BigPow::Exact(1);
        }
        if base == 0 {
            return BigPow::Exact(0);
        }
        let bits = exponent as f64 * (base as f64).log2();
        if bits <= 63.0 {
            let mut value: u64 = 1;
            for _ in 0..exponent {
                match value.checked_mul(base) {
                    Some(v) => value = v,
                    None => return BigPow::Log10(exponent as f64 * (base as f64).log10()),
                }
            }
            BigPow::Exact(value)
        } else {
            BigPow::Log10(exponent as f64 * (base as f64).log10())
        }
    }

    pub fn log10(self) -> f64 {
        match self {
            BigPow::Exact(v) => (v as f64).log10(),
            BigPow::Log10(l) => l,
        }
    }
}

impl std::fmt::Display for BigPow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BigPow::Exact(v) => write!(f, "{v}"),
            BigPow::Log10(l) => write!(f, "10^{l:.3}"),
        }
    }
}

/// Running-time bound of the exhaustive k-uniform search: `(m^{nk}, k^{nm})`.
pub fn solver_time_bound(n: u64, m: u64, k: u64) -> (BigPow, BigPow) {
    (
        BigPow::compute(m, n.saturating_mul(k)),
        BigPow::compute(k, n.saturating_mul(m)),
    )
}

/// The smaller of the two branches of [`solver_time_bound`].
pub fn solver_time_min(n: u64, m: u64, k: u64) -> BigPow {
    let (a, b) = solver_time_bound(n, m, k);
    if a.log10() <= b.log10() {
        a
    } else {
        b
    }
}
