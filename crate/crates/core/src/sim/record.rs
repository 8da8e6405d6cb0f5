//! Run outputs: the transaction transcript, reputation series, event log,
//! and aggregate metrics.

use std::collections::BTreeMap;

use crate::ids::{BuyerId, GoodId, SellerId};
use crate::reputation::SellerCategory;

/// One completed purchase, with every quantity needed to replay the
/// reputation update from the log alone.
#[derive(Debug, Clone, PartialEq)]
pub struct TransactionRecord {
    pub step: u32,
    pub buyer: BuyerId,
    pub seller: SellerId,
    pub good: GoodId,
    /// Transaction value (the seller's price).
    pub x: f64,
    /// Crisp expected value of the offer.
    pub expected: f64,
    /// Crisp actual value of the delivered good.
    pub actual: f64,
    /// Value surprise `actual - expected`.
    pub delta: f64,
    /// Individual reputation after this transaction.
    pub r_next: f64,
    /// Aggregate opinion of the other buyers, when one existed.
    pub shared: Option<f64>,
    /// Experience factors in force during the update.
    pub alpha: f64,
    pub beta: f64,
    /// Overall reputation after this transaction.
    pub or_next: f64,
    pub category_before: SellerCategory,
    pub category_after: SellerCategory,
}

/// Snapshot of one (buyer, seller) reputation at the end of a step.
#[derive(Debug, Clone, PartialEq)]
pub struct ReputationSample {
    pub step: u32,
    pub buyer: BuyerId,
    pub seller: SellerId,
    pub overall: f64,
    pub category: SellerCategory,
}

/// Noteworthy run events outside the transaction transcript.
#[derive(Debug, Clone, PartialEq)]
pub enum SimEvent {
    /// A demand found no admissible seller; the step was skipped for it.
    NoAdmissibleSeller {
        step: u32,
        buyer: BuyerId,
        good: GoodId,
    },
    /// A seller left the market.
    SellerExited { step: u32, seller: SellerId },
    /// A seller re-entered under a fresh identity.
    SellerReentered {
        step: u32,
        old: SellerId,
        new: SellerId,
    },
    /// A sudden-exit script armed: the seller will cheat maximally on its
    /// next sale and then leave.
    MaxCheatArmed { step: u32, seller: SellerId },
}

/// Shared-reputation manipulation observed during a stuffing window.
#[derive(Debug, Clone, PartialEq)]
pub struct BsEffectSample {
    pub step: u32,
    pub buyer: BuyerId,
    pub seller: SellerId,
    pub individual: f64,
    pub overall: f64,
    /// Signed percent change of the overall value relative to the
    /// individual one; absent when the individual value is zero.
    pub effect: Option<f64>,
}

/// Aggregate counters for one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMetrics {
    pub orders_per_seller: BTreeMap<SellerId, u32>,
    pub honest_orders: u32,
    pub dishonest_orders: u32,
    pub skipped_demands: u32,
    /// Multiplication-repair firings during the run (expected 0 on
    /// scale-derived inputs).
    pub repair_events: u64,
    pub bs_effects: Vec<BsEffectSample>,
}

/// Participant names in id order, including sellers that joined mid-run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NameTable {
    pub buyers: Vec<String>,
    pub sellers: Vec<String>,
    pub goods: Vec<String>,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub transcript: Vec<TransactionRecord>,
    pub series: Vec<ReputationSample>,
    pub events: Vec<SimEvent>,
    pub metrics: RunMetrics,
    pub names: NameTable,
}

/// Signed percent change of overall reputation relative to the individual
/// update: `100 * (overall - individual) / individual`. Undefined (None)
/// when the individual value is zero.
pub fn bs_effect_metric(r_individual: f64, or_overall: f64) -> Option<f64> {
    (r_individual > 0.0).then(|| 100.0 * (or_overall - r_individual) / r_individual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bs_effect_examples() {
        let e = bs_effect_metric(0.528, 0.858).unwrap();
        assert!((e - 62.5).abs() < 0.01);
        let e = bs_effect_metric(0.448, 0.689).unwrap();
        assert!((e - 53.79).abs() < 0.01);
        assert_eq!(bs_effect_metric(0.473, 0.473), Some(0.0));
        assert_eq!(bs_effect_metric(0.0, 0.5), None);
    }
}
