//! Fully-resolved scenario description consumed by the runner.

use crate::fuzzy::TrapezoidalFuzzyNumber;
use crate::ids::{BuyerId, GoodId, SellerId};
use crate::reputation::BuyerPolicy;
use crate::scale::{ImportanceScale, PerformanceScale, PerformanceTerm};
use crate::weights::FuzzyPairwiseMatrix;

use super::attack::AttackScript;

pub type Tfn = TrapezoidalFuzzyNumber<f64>;

/// How a seller's delivered ratings relate to its advertised ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HonestyProfile {
    /// Delivers exactly what it advertises.
    Honest,
    /// Delivers the advertised terms shifted down by this many levels
    /// (negative shifts deliver above the advertisement).
    DegradeByLevels(i32),
    /// Value-conditional behaviour: one shift at or below the price
    /// threshold, another above it.
    ValueConditional {
        threshold: f64,
        below_levels: i32,
        above_levels: i32,
    },
}

impl HonestyProfile {
    /// Level shift applied to the advertised ratings at a given price.
    pub fn shift_for(self, price: f64) -> i32 {
        match self {
            Self::Honest => 0,
            Self::DegradeByLevels(levels) => levels,
            Self::ValueConditional {
                threshold,
                below_levels,
                above_levels,
            } => {
                if price > threshold {
                    above_levels
                } else {
                    below_levels
                }
            }
        }
    }

    /// True for profiles that ever deliver below the advertisement.
    pub fn is_dishonest(self) -> bool {
        match self {
            Self::Honest => false,
            Self::DegradeByLevels(levels) => levels > 0,
            Self::ValueConditional {
                below_levels,
                above_levels,
                ..
            } => below_levels > 0 || above_levels > 0,
        }
    }
}

/// One good in a seller's catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct Offer {
    pub good: GoodId,
    pub ratings: Vec<PerformanceTerm>,
    pub price: f64,
    pub honesty: HonestyProfile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SellerSpec {
    pub name: String,
    pub offers: Vec<Offer>,
}

impl SellerSpec {
    pub fn offer_for(&self, good: GoodId) -> Option<&Offer> {
        self.offers.iter().find(|o| o.good == good)
    }
}

/// Seeded prior reputation between one buyer and one seller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeededReputation {
    pub seller: SellerId,
    pub overall: f64,
    pub transactions: u32,
}

/// Seeded weight history between one buyer and one good.
#[derive(Debug, Clone, PartialEq)]
pub struct SeededWeights {
    pub good: GoodId,
    pub delta: f64,
    pub history: Vec<Vec<Tfn>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuyerSpec {
    pub name: String,
    pub policy: BuyerPolicy<f64>,
    pub seeded_reputation: Vec<SeededReputation>,
    pub seeded_weights: Vec<SeededWeights>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodSpec {
    pub name: String,
    pub attributes: Vec<String>,
    pub importance: FuzzyPairwiseMatrix<f64>,
}

/// A scheduled purchase demand: one buyer wants one good at one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Demand {
    pub step: u32,
    pub buyer: BuyerId,
    pub good: GoodId,
}

/// Complete market description: agents, goods, schedule, attacks, scales.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketSetup {
    pub importance_scale: ImportanceScale<f64>,
    pub performance_scale: PerformanceScale<f64>,
    pub goods: Vec<GoodSpec>,
    pub buyers: Vec<BuyerSpec>,
    pub sellers: Vec<SellerSpec>,
    pub schedule: Vec<Demand>,
    pub attacks: Vec<AttackScript>,
    pub steps: u32,
}

impl MarketSetup {
    /// Checks every cross-reference and invariant, returning the full list of
    /// problems rather than the first.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut errors = Vec::new();
        let n_buyers = self.buyers.len() as u32;
        let n_sellers = self.sellers.len() as u32;
        let n_goods = self.goods.len() as u32;

        if self.buyers.is_empty() {
            errors.push("buyers: at least one buyer is required".into());
        }
        if self.steps == 0 {
            errors.push("steps: must be positive".into());
        }

        for (i, b) in self.buyers.iter().enumerate() {
            if let Err(e) = b.policy.validate() {
                errors.push(format!("buyers[{i}] ({}): {e}", b.name));
            }
            for s in &b.seeded_reputation {
                if s.seller.0 >= n_sellers {
                    errors.push(format!(
                        "buyers[{i}] ({}): seeded reputation references unknown seller #{}",
                        b.name, s.seller
                    ));
                }
                if !(0.0..1.0).contains(&s.overall) {
                    errors.push(format!(
                        "buyers[{i}] ({}): seeded reputation {} outside [0, 1)",
                        b.name, s.overall
                    ));
                }
            }
            for w in &b.seeded_weights {
                if w.good.0 >= n_goods {
                    errors.push(format!(
                        "buyers[{i}] ({}): seeded weights reference unknown good #{}",
                        b.name, w.good
                    ));
                    continue;
                }
                if !(0.0..=1.0).contains(&w.delta) {
                    errors.push(format!(
                        "buyers[{i}] ({}): seeded delta {} outside [0, 1]",
                        b.name, w.delta
                    ));
                }
                if w.history.len() > b.policy.history_window {
                    errors.push(format!(
                        "buyers[{i}] ({}): seeded history longer than window {}",
                        b.name, b.policy.history_window
                    ));
                }
                let n_attr = self.goods[w.good.index()].attributes.len();
                for v in &w.history {
                    if v.len() != n_attr {
                        errors.push(format!(
                            "buyers[{i}] ({}): seeded weight vector has {} entries, good has {} attributes",
                            b.name,
                            v.len(),
                            n_attr
                        ));
                    }
                }
            }
        }

        for (i, g) in self.goods.iter().enumerate() {
            if g.attributes.is_empty() {
                errors.push(format!("goods[{i}] ({}): needs at least one attribute", g.name));
            }
            if g.importance.size() != g.attributes.len() {
                errors.push(format!(
                    "goods[{i}] ({}): importance matrix is {}x{} but the good has {} attributes",
                    g.name,
                    g.importance.size(),
                    g.importance.size(),
                    g.attributes.len()
                ));
            }
        }

        for (i, s) in self.sellers.iter().enumerate() {
            for o in &s.offers {
                if o.good.0 >= n_goods {
                    errors.push(format!(
                        "sellers[{i}] ({}): offer references unknown good #{}",
                        s.name, o.good
                    ));
                    continue;
                }
                let n_attr = self.goods[o.good.index()].attributes.len();
                if o.ratings.len() != n_attr {
                    errors.push(format!(
                        "sellers[{i}] ({}): offer for {} has {} ratings, good has {} attributes",
                        s.name,
                        self.goods[o.good.index()].name,
                        o.ratings.len(),
                        n_attr
                    ));
                }
                if !(o.price > 0.0) {
                    errors.push(format!(
                        "sellers[{i}] ({}): price must be positive, got {}",
                        s.name, o.price
                    ));
                }
            }
        }

        for (i, d) in self.schedule.iter().enumerate() {
            if d.step >= self.steps {
                errors.push(format!(
                    "schedule[{i}]: step {} is outside the run of {} steps",
                    d.step, self.steps
                ));
            }
            if d.buyer.0 >= n_buyers {
                errors.push(format!("schedule[{i}]: unknown buyer #{}", d.buyer));
            }
            if d.good.0 >= n_goods {
                errors.push(format!("schedule[{i}]: unknown good #{}", d.good));
            }
        }

        for (i, a) in self.attacks.iter().enumerate() {
            a.validate(i, n_buyers, n_sellers, &mut errors);
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}
