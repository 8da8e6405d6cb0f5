//! Deterministic agent-based marketplace.
//!
//! A scenario declares buyers (with policies and optional seeded state),
//! sellers (catalogs plus honesty profiles), goods (attributes plus a
//! pairwise importance matrix), a purchase schedule, and attack scripts.
//! [`run_scenario`] executes the whole thing reproducibly from a seed.

mod attack;
mod record;
mod runner;
mod setup;

pub use attack::{AttackScript, StepWindow};
pub use record::{
    bs_effect_metric, BsEffectSample, NameTable, ReputationSample, RunMetrics, SimEvent,
    SimOutput, TransactionRecord,
};
pub use runner::{candidate_pool, run_scenario, SimError};
pub use setup::{
    BuyerSpec, Demand, GoodSpec, HonestyProfile, MarketSetup, Offer, SeededReputation,
    SeededWeights, SellerSpec,
};
