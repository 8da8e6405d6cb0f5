//! The deterministic transaction loop.
//!
//! One seeded random stream drives the whole run and is consumed in a fixed,
//! documented order: exactly one `f64` draw per scheduled demand that finds
//! at least one responding seller (the exploration draw), taken before the
//! candidate pool is formed. Everything else is pure. Identical
//! (setup, seed) pairs therefore produce identical outputs.
//!
//! Within a step, demands execute in ascending (buyer, good) order; a
//! buyer's exploration probability decays after every pooling decision.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fuzzy;
use crate::ids::{BuyerId, GoodId, SellerId};
use crate::reputation::{
    classify, classify_seeded, combine_overall, update_individual, BuyerPolicy, ReputationError,
    ReputationRecord, SellerCategory, SellerCategoryIndex,
};
use crate::scale::PerformanceTerm;
use crate::valuation::{
    argmax_seller, assess_actual_value, evaluate_offers, PerformanceMatrix, ValuationError,
};
use crate::weights::{
    blend_weights, empirical_weights, subjective_weights, WeightError, WeightHistory, WeightRole,
    WeightVector,
};

use super::attack::AttackScript;
use super::record::{
    bs_effect_metric, BsEffectSample, NameTable, ReputationSample, RunMetrics, SimEvent,
    SimOutput, TransactionRecord,
};
use super::setup::{HonestyProfile, MarketSetup, SellerSpec, Tfn};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("scenario validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Reputation(#[from] ReputationError),
}

struct BuyerAgent {
    policy: BuyerPolicy<f64>,
    rho: f64,
    records: BTreeMap<SellerId, ReputationRecord<f64>>,
    categories: SellerCategoryIndex,
    weights: BTreeMap<GoodId, WeightHistory<f64>>,
}

#[derive(Default, Clone)]
struct SellerState {
    exited: bool,
    max_cheat_pending: bool,
}

/// Forms the pool a buyer will rank for this purchase.
///
/// Dis-reputed sellers are always excluded. With probability `rho` (decided
/// by `draw < rho`) the pool is the responding new sellers, when any exist;
/// otherwise reputed responders are preferred, then non-reputed ones. An
/// empty result means no admissible seller.
pub fn candidate_pool(
    categories: &SellerCategoryIndex,
    responders: &[SellerId],
    rho: f64,
    draw: f64,
) -> Vec<SellerId> {
    let of = |cat: SellerCategory| -> Vec<SellerId> {
        responders
            .iter()
            .copied()
            .filter(|s| categories.category(*s) == cat)
            .collect()
    };
    let new = of(SellerCategory::New);
    if draw < rho && !new.is_empty() {
        return new;
    }
    let reputed = of(SellerCategory::Reputed);
    if !reputed.is_empty() {
        return reputed;
    }
    of(SellerCategory::NonReputed)
}

/// Mean opinion of the other buyers about a seller, with any active rating
/// scripts overriding their colluders' contributions. Returns the aggregate
/// (absent when nobody contributes) and whether any contribution was stuffed.
fn aggregate_shared(
    buyers: &[BuyerAgent],
    requesting: BuyerId,
    seller: SellerId,
    attacks: &[AttackScript],
    step: u32,
    victim_pair_count: u32,
) -> (Option<f64>, bool) {
    let mut sum = 0.0;
    let mut n = 0u32;
    let mut stuffed_any = false;
    for (i, other) in buyers.iter().enumerate() {
        let oid = BuyerId(i as u32);
        if oid == requesting {
            continue;
        }
        let stuffed = attacks
            .iter()
            .find_map(|a| a.stuffed_level(step, oid, seller, victim_pair_count));
        if let Some(level) = stuffed {
            sum += level;
            n += 1;
            stuffed_any = true;
        } else if let Some(rec) = other.records.get(&seller) {
            if rec.transaction_count() >= 1 {
                sum += rec.overall();
                n += 1;
            }
        }
    }
    if n == 0 {
        (None, false)
    } else {
        (Some(sum / f64::from(n)), stuffed_any)
    }
}

fn active_profile(
    attacks: &[AttackScript],
    seller: SellerId,
    step: u32,
    base: HonestyProfile,
) -> HonestyProfile {
    for a in attacks {
        if let AttackScript::ValueImbalance {
            seller: target,
            threshold,
            below_levels,
            above_levels,
            from_step,
        } = a
        {
            if *target == seller && step >= *from_step {
                return HonestyProfile::ValueConditional {
                    threshold: *threshold,
                    below_levels: *below_levels,
                    above_levels: *above_levels,
                };
            }
        }
    }
    base
}

/// Executes the scheduled demands and attack scripts, returning the full
/// transcript, per-step reputation series, event log, and metrics.
pub fn run_scenario(setup: &MarketSetup, seed: u64) -> Result<SimOutput, SimError> {
    setup.validate().map_err(SimError::Validation)?;
    let repair_start = fuzzy::repair_tally();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut buyers: Vec<BuyerAgent> = setup
        .buyers
        .iter()
        .map(|spec| {
            let mut records = BTreeMap::new();
            let mut categories = SellerCategoryIndex::new();
            for s in &spec.seeded_reputation {
                let rec = ReputationRecord::seeded(s.overall, s.transactions, &spec.policy)
                    .expect("seeded reputation validated");
                records.insert(s.seller, rec);
                categories.set(s.seller, classify_seeded(s.overall, &spec.policy));
            }
            let mut weights = BTreeMap::new();
            for w in &spec.seeded_weights {
                let entries = w
                    .history
                    .iter()
                    .map(|v| WeightVector::new(WeightRole::Overall, v.clone()))
                    .collect();
                let history = WeightHistory::seeded(
                    spec.policy.history_window,
                    w.delta,
                    spec.policy.delta_rate,
                    entries,
                )
                .expect("seeded weights validated");
                weights.insert(w.good, history);
            }
            BuyerAgent {
                policy: spec.policy.clone(),
                rho: spec.policy.rho_initial,
                records,
                categories,
                weights,
            }
        })
        .collect();

    let mut sellers: Vec<SellerSpec> = setup.sellers.clone();
    let mut seller_state = vec![SellerState::default(); sellers.len()];

    let mut schedule = setup.schedule.clone();
    schedule.sort();

    let mut transcript = Vec::new();
    let mut series = Vec::new();
    let mut events = Vec::new();
    let mut metrics = RunMetrics::default();

    for step in 0..setup.steps {
        for script in &setup.attacks {
            match script {
                AttackScript::ReEntry {
                    seller,
                    new_name,
                    at_step,
                } if *at_step == step => {
                    if !seller_state[seller.index()].exited {
                        seller_state[seller.index()].exited = true;
                        events.push(SimEvent::SellerExited {
                            step,
                            seller: *seller,
                        });
                    }
                    let new_id = SellerId(sellers.len() as u32);
                    sellers.push(SellerSpec {
                        name: new_name.clone(),
                        offers: sellers[seller.index()].offers.clone(),
                    });
                    seller_state.push(SellerState::default());
                    events.push(SimEvent::SellerReentered {
                        step,
                        old: *seller,
                        new: new_id,
                    });
                }
                AttackScript::SuddenExit { seller, at_step } if *at_step == step => {
                    seller_state[seller.index()].max_cheat_pending = true;
                    events.push(SimEvent::MaxCheatArmed {
                        step,
                        seller: *seller,
                    });
                }
                _ => {}
            }
        }

        for demand in schedule.iter().filter(|d| d.step == step) {
            run_demand(
                setup,
                &sellers,
                &mut seller_state,
                &mut buyers,
                demand.buyer,
                demand.good,
                step,
                &mut rng,
                &mut transcript,
                &mut events,
                &mut metrics,
            )?;
        }

        for (i, buyer) in buyers.iter().enumerate() {
            for (seller, rec) in &buyer.records {
                series.push(ReputationSample {
                    step,
                    buyer: BuyerId(i as u32),
                    seller: *seller,
                    overall: rec.overall(),
                    category: buyer.categories.category(*seller),
                });
            }
        }
    }

    metrics.repair_events = fuzzy::repair_tally() - repair_start;
    let names = NameTable {
        buyers: setup.buyers.iter().map(|b| b.name.clone()).collect(),
        sellers: sellers.iter().map(|s| s.name.clone()).collect(),
        goods: setup.goods.iter().map(|g| g.name.clone()).collect(),
    };
    Ok(SimOutput {
        transcript,
        series,
        events,
        metrics,
        names,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_demand(
    setup: &MarketSetup,
    sellers: &[SellerSpec],
    seller_state: &mut [SellerState],
    buyers: &mut [BuyerAgent],
    buyer_id: BuyerId,
    good_id: GoodId,
    step: u32,
    rng: &mut ChaCha8Rng,
    transcript: &mut Vec<TransactionRecord>,
    events: &mut Vec<SimEvent>,
    metrics: &mut RunMetrics,
) -> Result<(), SimError> {
    let good = &setup.goods[good_id.index()];
    let responders: Vec<SellerId> = sellers
        .iter()
        .enumerate()
        .filter(|(i, s)| !seller_state[*i].exited && s.offer_for(good_id).is_some())
        .map(|(i, _)| SellerId(i as u32))
        .collect();

    let b = buyer_id.index();
    if responders.is_empty() {
        events.push(SimEvent::NoAdmissibleSeller {
            step,
            buyer: buyer_id,
            good: good_id,
        });
        metrics.skipped_demands += 1;
        return Ok(());
    }

    let draw: f64 = rng.gen();
    let pool = candidate_pool(&buyers[b].categories, &responders, buyers[b].rho, draw);
    buyers[b].rho = buyers[b].policy.rho_min.max(buyers[b].policy.rho_decay * buyers[b].rho);
    if pool.is_empty() {
        events.push(SimEvent::NoAdmissibleSeller {
            step,
            buyer: buyer_id,
            good: good_id,
        });
        metrics.skipped_demands += 1;
        return Ok(());
    }

    // Phase I: attribute weights, offer valuation, seller selection.
    let weights = {
        let buyer = &buyers[b];
        let sw = subjective_weights(&good.importance)?;
        let (ew, delta) = match buyer.weights.get(&good_id) {
            Some(h) if !h.is_empty() => (Some(empirical_weights(h)?), h.delta()),
            _ => (None, 0.0),
        };
        blend_weights(&sw, ew.as_ref(), delta)?
    };
    let rows: Vec<(SellerId, Vec<PerformanceTerm>)> = pool
        .iter()
        .map(|sid| {
            let offer = sellers[sid.index()].offer_for(good_id).expect("responder");
            (*sid, offer.ratings.clone())
        })
        .collect();
    let pm = PerformanceMatrix::from_terms(&setup.performance_scale, good.attributes.len(), &rows)?;
    let valuations = evaluate_offers(&pm, &weights)?;
    let chosen = argmax_seller(&valuations)?;
    let expected = valuations
        .iter()
        .find(|o| o.seller == chosen)
        .expect("chosen seller came from the valuation list")
        .crisp;
    let offer = sellers[chosen.index()].offer_for(good_id).expect("responder");
    let x = offer.price;

    // Delivery per the seller's honesty profile (or an armed max-cheat).
    let max_cheat = seller_state[chosen.index()].max_cheat_pending;
    let delivered_terms: Vec<PerformanceTerm> = if max_cheat {
        vec![PerformanceTerm::P; offer.ratings.len()]
    } else {
        let profile = active_profile(&setup.attacks, chosen, step, offer.honesty);
        let shift = profile.shift_for(x);
        offer.ratings.iter().map(|t| t.shifted_down(shift)).collect()
    };
    let delivered: Vec<Tfn> = delivered_terms
        .iter()
        .map(|t| setup.performance_scale.quadruple(*t))
        .collect();
    let actual = assess_actual_value(&delivered, &weights)?;
    let delta_v = actual - expected;

    // Phase II: individual update, shared aggregation, overall blend.
    let pair_count = buyers[b]
        .records
        .get(&chosen)
        .map_or(0, |r| r.transaction_count());
    let (shared, stuffed) = aggregate_shared(
        buyers,
        buyer_id,
        chosen,
        &setup.attacks,
        step,
        pair_count,
    );

    let buyer = &mut buyers[b];
    let mut rec = buyer
        .records
        .get(&chosen)
        .copied()
        .unwrap_or_else(|| ReputationRecord::bootstrap(shared));
    let prior = rec.overall();
    let alpha = rec.alpha();
    let beta = rec.beta();
    let r_next = update_individual(
        prior,
        delta_v,
        x,
        beta,
        buyer.policy.gamma,
        buyer.policy.lambda,
        buyer.policy.e_base,
    )?;
    let or_next = combine_overall(r_next, shared, alpha);

    // Phase III: list maintenance.
    let category_before = buyer.categories.category(chosen);
    let category_after = classify(or_next, &buyer.policy, category_before, delta_v < 0.0);
    buyer.categories.set(chosen, category_after);
    rec.set_overall(or_next);
    rec.advance_experience(&buyer.policy);
    buyer.records.insert(chosen, rec);
    let history = buyer
        .weights
        .entry(good_id)
        .or_insert_with(|| WeightHistory::new(buyer.policy.history_window, buyer.policy.delta_rate));
    history.advance(weights.clone());

    *metrics.orders_per_seller.entry(chosen).or_insert(0) += 1;
    let dishonest = max_cheat
        || active_profile(&setup.attacks, chosen, step, offer.honesty).is_dishonest();
    if dishonest {
        metrics.dishonest_orders += 1;
    } else {
        metrics.honest_orders += 1;
    }
    if stuffed {
        metrics.bs_effects.push(BsEffectSample {
            step,
            buyer: buyer_id,
            seller: chosen,
            individual: r_next,
            overall: or_next,
            effect: bs_effect_metric(r_next, or_next),
        });
    }
    if max_cheat {
        seller_state[chosen.index()].max_cheat_pending = false;
        seller_state[chosen.index()].exited = true;
        events.push(SimEvent::SellerExited {
            step,
            seller: chosen,
        });
    }

    transcript.push(TransactionRecord {
        step,
        buyer: buyer_id,
        seller: chosen,
        good: good_id,
        x,
        expected,
        actual,
        delta: delta_v,
        r_next,
        shared,
        alpha,
        beta,
        or_next,
        category_before,
        category_after,
    });
    Ok(())
}
