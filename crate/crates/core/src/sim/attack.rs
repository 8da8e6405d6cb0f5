//! Scripted attack injectors.
//!
//! Rating attacks (ballot stuffing, badmouthing, reciprocal collusion)
//! override a colluder's contribution to the shared-reputation aggregate;
//! behavioural attacks (value imbalance, sudden exit, re-entry) change how or
//! whether a seller trades.

use crate::ids::{BuyerId, SellerId};

/// Inclusive step window during which a script is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepWindow {
    pub from_step: u32,
    pub to_step: u32,
}

impl StepWindow {
    pub fn contains(&self, step: u32) -> bool {
        (self.from_step..=self.to_step).contains(&step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttackScript {
    /// Colluders report an abnormally high rating for the target seller.
    BallotStuffing {
        seller: SellerId,
        colluders: Vec<BuyerId>,
        level: f64,
        window: StepWindow,
        /// Optional gate: stuff only once the victim pair has at least this
        /// many transactions.
        min_transactions: Option<u32>,
    },
    /// Colluders report an abnormally low rating for the target seller.
    Badmouthing {
        seller: SellerId,
        colluders: Vec<BuyerId>,
        level: f64,
        window: StepWindow,
        min_transactions: Option<u32>,
    },
    /// The seller trades honestly below a price threshold and cheats above it.
    ValueImbalance {
        seller: SellerId,
        threshold: f64,
        below_levels: i32,
        above_levels: i32,
        from_step: u32,
    },
    /// A low-rated seller exits and re-enters under a fresh identity.
    ReEntry {
        seller: SellerId,
        new_name: String,
        at_step: u32,
    },
    /// The seller cheats maximally on its next sale, then leaves the market.
    SuddenExit { seller: SellerId, at_step: u32 },
    /// A colluding buyer-seller pair: the buyer reports an extreme rating for
    /// its partner (high for reciprocity, low for retaliation).
    ReciprocalRating {
        buyer: BuyerId,
        seller: SellerId,
        level: f64,
        window: StepWindow,
    },
}

impl AttackScript {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::BallotStuffing { .. } => "BS",
            Self::Badmouthing { .. } => "BM",
            Self::ValueImbalance { .. } => "VIM",
            Self::ReEntry { .. } => "REN",
            Self::SuddenExit { .. } => "SE",
            Self::ReciprocalRating { .. } => "REC_RET",
        }
    }

    /// Stuffed rating this script injects into the shared aggregate that
    /// `observer` reports about `seller`, if any.
    ///
    /// `victim_pair_count` is the transaction count between the requesting
    /// buyer and the seller, used by the optional gate.
    pub fn stuffed_level(
        &self,
        step: u32,
        observer: BuyerId,
        seller: SellerId,
        victim_pair_count: u32,
    ) -> Option<f64> {
        match self {
            Self::BallotStuffing {
                seller: target,
                colluders,
                level,
                window,
                min_transactions,
            }
            | Self::Badmouthing {
                seller: target,
                colluders,
                level,
                window,
                min_transactions,
            } => {
                let gate_open = min_transactions.is_none_or(|m| victim_pair_count >= m);
                (*target == seller
                    && window.contains(step)
                    && gate_open
                    && colluders.contains(&observer))
                .then_some(*level)
            }
            Self::ReciprocalRating {
                buyer,
                seller: target,
                level,
                window,
            } => (*target == seller && *buyer == observer && window.contains(step))
                .then_some(*level),
            _ => None,
        }
    }

    pub(super) fn validate(
        &self,
        index: usize,
        n_buyers: u32,
        n_sellers: u32,
        errors: &mut Vec<String>,
    ) {
        let mut check_seller = |s: SellerId| {
            if s.0 >= n_sellers {
                errors.push(format!(
                    "attacks[{index}] ({}): unknown seller #{s}",
                    self.kind()
                ));
            }
        };
        match self {
            Self::BallotStuffing {
                seller,
                colluders,
                level,
                ..
            }
            | Self::Badmouthing {
                seller,
                colluders,
                level,
                ..
            } => {
                check_seller(*seller);
                for b in colluders {
                    if b.0 >= n_buyers {
                        errors.push(format!(
                            "attacks[{index}] ({}): unknown colluder buyer #{b}",
                            self.kind()
                        ));
                    }
                }
                if !(0.0..1.0).contains(level) {
                    errors.push(format!(
                        "attacks[{index}] ({}): stuffed level {level} outside [0, 1)",
                        self.kind()
                    ));
                }
            }
            Self::ValueImbalance { seller, threshold, .. } => {
                check_seller(*seller);
                if !(*threshold > 0.0) {
                    errors.push(format!(
                        "attacks[{index}] (VIM): threshold must be positive, got {threshold}"
                    ));
                }
            }
            Self::ReEntry { seller, new_name, .. } => {
                check_seller(*seller);
                if new_name.is_empty() {
                    errors.push(format!("attacks[{index}] (REN): new identity needs a name"));
                }
            }
            Self::SuddenExit { seller, .. } => check_seller(*seller),
            Self::ReciprocalRating {
                buyer,
                seller,
                level,
                ..
            } => {
                check_seller(*seller);
                if buyer.0 >= n_buyers {
                    errors.push(format!(
                        "attacks[{index}] (REC_RET): unknown buyer #{buyer}"
                    ));
                }
                if !(0.0..1.0).contains(level) {
                    errors.push(format!(
                        "attacks[{index}] (REC_RET): level {level} outside [0, 1)"
                    ));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stuffing_respects_window_colluders_and_gate() {
        let script = AttackScript::BallotStuffing {
            seller: SellerId(2),
            colluders: vec![BuyerId(1)],
            level: 0.94,
            window: StepWindow {
                from_step: 5,
                to_step: 10,
            },
            min_transactions: Some(20),
        };
        assert_eq!(
            script.stuffed_level(7, BuyerId(1), SellerId(2), 25),
            Some(0.94)
        );
        assert_eq!(script.stuffed_level(4, BuyerId(1), SellerId(2), 25), None);
        assert_eq!(script.stuffed_level(7, BuyerId(0), SellerId(2), 25), None);
        assert_eq!(script.stuffed_level(7, BuyerId(1), SellerId(3), 25), None);
        assert_eq!(script.stuffed_level(7, BuyerId(1), SellerId(2), 19), None);
    }

    #[test]
    fn reciprocal_rating_binds_the_pair() {
        let script = AttackScript::ReciprocalRating {
            buyer: BuyerId(3),
            seller: SellerId(1),
            level: 0.99,
            window: StepWindow {
                from_step: 0,
                to_step: 100,
            },
        };
        assert_eq!(
            script.stuffed_level(0, BuyerId(3), SellerId(1), 0),
            Some(0.99)
        );
        assert_eq!(script.stuffed_level(0, BuyerId(2), SellerId(1), 0), None);
    }
}
