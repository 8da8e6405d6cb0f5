//! Reinforcement reputation updates, experience factors, and seller
//! classification.
//!
//! A buyer's reputation for a seller lives in `[0, 1)`. After each purchase
//! the individual update moves it by an amount tied to the transaction value
//! (through `eta`), discounted by the pair's repeat-transaction factor `beta`,
//! and penalised by `gamma` when the delivered good falls short. The overall
//! value blends the individual update with the aggregate opinion of other
//! buyers, weighted by the experience factor `alpha`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ids::SellerId;
use crate::real::{c, show, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReputationError {
    #[error("transaction value must be non-negative, got {0}")]
    NegativeValue(f64),
    #[error("penalty factor must exceed 1, got {0}")]
    PenaltyFactor(f64),
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("invalid reputation record: {0}")]
    InvalidRecord(String),
}

/// Maps a transaction value into `[0, 1)`: `1 - e_base^(-lambda * x)`.
///
/// Strictly increasing in `x`, with `eta(0) = 0`; `e_base` is 1.01 by
/// convention.
pub fn eta<T: Real>(x: T, lambda: T, e_base: T) -> Result<T, ReputationError> {
    if !(x >= T::zero()) {
        return Err(ReputationError::NegativeValue(show(x)));
    }
    Ok(T::one() - e_base.powf(-(lambda * x)))
}

/// Effective reputation increase factor: `eta / (1 + beta)`.
pub fn mu<T: Real>(eta: T, beta: T) -> T {
    eta / (T::one() + beta)
}

/// Effective reputation decrease factor: `gamma * eta / (1 + beta)`.
///
/// Computed as `gamma * mu` so the decrease/increase ratio is exactly the
/// penalty factor.
pub fn xi<T: Real>(eta: T, beta: T, gamma: T) -> Result<T, ReputationError> {
    if !(gamma > T::one()) {
        return Err(ReputationError::PenaltyFactor(show(gamma)));
    }
    Ok(gamma * mu(eta, beta))
}

fn clamp_unit_interval<T: Real>(v: T) -> T {
    // Keep the half-open interval: 1 is an asymptote, never a value.
    v.max(T::zero()).min(T::one() - T::epsilon())
}

/// One reputation step from the value surprise `delta = v - f`.
///
/// `delta > 0` reinforces (`or + mu*(1 - or)`), `delta < 0` penalises
/// (`or - xi*(1 - or)`), `delta = 0` leaves the value unchanged. The result
/// is clamped to `[0, 1)`; only the floor clamp is ever load-bearing (large
/// penalties can overshoot below zero).
pub fn update_individual<T: Real>(
    or_t: T,
    delta: T,
    x: T,
    beta: T,
    gamma: T,
    lambda: T,
    e_base: T,
) -> Result<T, ReputationError> {
    debug_assert!(or_t >= T::zero() && or_t < T::one());
    let next = if delta > T::zero() {
        let m = mu(eta(x, lambda, e_base)?, beta);
        or_t + m * (T::one() - or_t)
    } else if delta < T::zero() {
        let p = xi(eta(x, lambda, e_base)?, beta, gamma)?;
        or_t - p * (T::one() - or_t)
    } else {
        or_t
    };
    Ok(clamp_unit_interval(next))
}

/// Overall reputation: `alpha * r + (1 - alpha) * shared`, or `r` alone when
/// no other buyer has an opinion.
pub fn combine_overall<T: Real>(r: T, shared: Option<T>, alpha: T) -> T {
    match shared {
        Some(s) => alpha * r + (T::one() - alpha) * s,
        None => r,
    }
}

/// Starting reputation for a seller unknown to this buyer: the aggregate of
/// other buyers' opinions when one exists, zero for a globally new seller.
pub fn bootstrap_reputation<T: Real>(shared: Option<T>) -> T {
    shared.unwrap_or_else(T::zero)
}

/// Per-buyer behaviour parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct BuyerPolicy<T> {
    /// Reputation threshold (capital theta): `or >= threshold` is reputed.
    pub reputation_threshold: T,
    /// Dis-reputation threshold (small theta): `or <= threshold` is
    /// dis-reputed, permanently.
    pub disreputation_threshold: T,
    /// Penalty factor, strictly greater than 1.
    pub gamma: T,
    /// Value-mapping constant in (0, 1).
    pub lambda: T,
    /// Base of the value-mapping exponential.
    pub e_base: T,
    /// Per-transaction increment of the experience gain factor alpha.
    pub alpha_rate: T,
    /// Per-transaction increment of the repeat-transaction discount beta.
    pub beta_rate: T,
    /// Per-purchase increment of the weight blend factor delta.
    pub delta_rate: T,
    /// Weight history window (k most recent purchases).
    pub history_window: usize,
    /// Exploration probability toward new sellers, and its decay schedule.
    pub rho_initial: T,
    pub rho_decay: T,
    pub rho_min: T,
}

impl<T: Real> Default for BuyerPolicy<T> {
    fn default() -> Self {
        Self {
            reputation_threshold: c(0.45),
            disreputation_threshold: c(0.15),
            gamma: c(2.0),
            lambda: c(0.001),
            e_base: c(1.01),
            alpha_rate: c(0.01),
            beta_rate: c(0.001),
            delta_rate: c(0.01),
            history_window: 100,
            rho_initial: c(1.0),
            rho_decay: c(0.995),
            rho_min: c(0.05),
        }
    }
}

impl<T: Real> BuyerPolicy<T> {
    pub fn validate(&self) -> Result<(), ReputationError> {
        let fail = |msg: String| Err(ReputationError::InvalidPolicy(msg));
        if !(self.disreputation_threshold > T::zero()
            && self.disreputation_threshold < self.reputation_threshold
            && self.reputation_threshold < T::one())
        {
            return fail(format!(
                "thresholds must satisfy 0 < {} < {} < 1",
                show(self.disreputation_threshold),
                show(self.reputation_threshold)
            ));
        }
        if !(self.gamma > T::one()) {
            return fail(format!("gamma must exceed 1, got {}", show(self.gamma)));
        }
        if !(self.lambda > T::zero() && self.lambda < T::one()) {
            return fail(format!("lambda must lie in (0, 1), got {}", show(self.lambda)));
        }
        if !(self.e_base > T::one()) {
            return fail(format!("e_base must exceed 1, got {}", show(self.e_base)));
        }
        if !(self.alpha_rate >= T::zero() && self.beta_rate >= T::zero() && self.delta_rate >= T::zero()) {
            return fail("experience rates must be non-negative".to_string());
        }
        if self.history_window == 0 {
            return fail("history window must be positive".to_string());
        }
        let rho_ok = self.rho_min >= T::zero()
            && self.rho_min <= self.rho_initial
            && self.rho_initial <= T::one()
            && self.rho_decay > T::zero()
            && self.rho_decay <= T::one();
        if !rho_ok {
            return fail(format!(
                "rho schedule must satisfy 0 <= min ({}) <= initial ({}) <= 1 with decay in (0, 1]",
                show(self.rho_min),
                show(self.rho_initial)
            ));
        }
        Ok(())
    }
}

/// Per (buyer, seller) reputation state.
///
/// `alpha` and `beta` stay consistent with the transaction count by
/// construction: `alpha = min(1, count * alpha_rate)`,
/// `beta = count * beta_rate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReputationRecord<T> {
    overall: T,
    alpha: T,
    beta: T,
    count: u32,
}

impl<T: Real> ReputationRecord<T> {
    /// Record for a seller first encountered now.
    pub fn bootstrap(shared: Option<T>) -> Self {
        Self {
            overall: bootstrap_reputation(shared),
            alpha: T::zero(),
            beta: T::zero(),
            count: 0,
        }
    }

    /// Record seeded from prior state.
    pub fn seeded(
        overall: T,
        count: u32,
        policy: &BuyerPolicy<T>,
    ) -> Result<Self, ReputationError> {
        if !(overall >= T::zero() && overall < T::one()) {
            return Err(ReputationError::InvalidRecord(format!(
                "overall reputation must lie in [0, 1), got {}",
                show(overall)
            )));
        }
        Ok(Self {
            overall,
            alpha: Self::derive_alpha(count, policy),
            beta: Self::derive_beta(count, policy),
            count,
        })
    }

    fn derive_alpha(count: u32, policy: &BuyerPolicy<T>) -> T {
        T::one().min(c::<T>(count as f64) * policy.alpha_rate)
    }

    fn derive_beta(count: u32, policy: &BuyerPolicy<T>) -> T {
        c::<T>(count as f64) * policy.beta_rate
    }

    pub fn overall(&self) -> T {
        self.overall
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn transaction_count(&self) -> u32 {
        self.count
    }

    pub fn set_overall(&mut self, overall: T) {
        debug_assert!(overall >= T::zero() && overall < T::one());
        self.overall = overall;
    }

    /// Advances the pair's experience after a completed transaction.
    pub fn advance_experience(&mut self, policy: &BuyerPolicy<T>) {
        self.count += 1;
        self.alpha = Self::derive_alpha(self.count, policy);
        self.beta = Self::derive_beta(self.count, policy);
    }
}

/// The four seller lists a buyer maintains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SellerCategory {
    Reputed,
    NonReputed,
    DisReputed,
    New,
}

impl SellerCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Reputed => "R",
            Self::NonReputed => "NR",
            Self::DisReputed => "DR",
            Self::New => "NEW",
        }
    }
}

impl std::fmt::Display for SellerCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Category after an update.
///
/// Dis-reputation is permanent. A new seller stays in the new list until its
/// reputation crosses the dis-reputation threshold, but cheating before that
/// crossing moves it straight to dis-reputed.
pub fn classify<T: Real>(
    or_next: T,
    policy: &BuyerPolicy<T>,
    current: SellerCategory,
    cheated: bool,
) -> SellerCategory {
    use SellerCategory::*;
    match current {
        DisReputed => DisReputed,
        New => {
            if or_next > policy.disreputation_threshold {
                if or_next >= policy.reputation_threshold {
                    Reputed
                } else {
                    NonReputed
                }
            } else if cheated {
                DisReputed
            } else {
                New
            }
        }
        Reputed | NonReputed => {
            if or_next >= policy.reputation_threshold {
                Reputed
            } else if or_next <= policy.disreputation_threshold {
                DisReputed
            } else {
                NonReputed
            }
        }
    }
}

/// Category assignment for a seeded record (scenario load): thresholds only.
pub fn classify_seeded<T: Real>(overall: T, policy: &BuyerPolicy<T>) -> SellerCategory {
    classify(overall, policy, SellerCategory::NonReputed, false)
}

/// A buyer's partition of known sellers into the four category lists.
///
/// Sellers absent from the index are new. Each seller maps to exactly one
/// category, so the lists are disjoint by construction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SellerCategoryIndex {
    map: BTreeMap<SellerId, SellerCategory>,
}

impl SellerCategoryIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn category(&self, seller: SellerId) -> SellerCategory {
        self.map
            .get(&seller)
            .copied()
            .unwrap_or(SellerCategory::New)
    }

    pub fn set(&mut self, seller: SellerId, category: SellerCategory) {
        self.map.insert(seller, category);
    }

    pub fn sellers_in(&self, category: SellerCategory) -> Vec<SellerId> {
        self.map
            .iter()
            .filter(|(_, c)| **c == category)
            .map(|(s, _)| *s)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SellerId, SellerCategory)> + '_ {
        self.map.iter().map(|(s, c)| (*s, *c))
    }
}
