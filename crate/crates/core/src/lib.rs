//! Reputation engine and deterministic e-market simulator.
//!
//! The numeric kernel (fuzzy algebra, attribute weights, offer valuation,
//! reputation updates) is generic over the scalar type through [`Real`];
//! the simulator and the type aliases below fix `f64`.

pub mod fuzzy;
pub mod ids;
pub mod real;
pub mod reputation;
pub mod scale;
pub mod sim;
pub mod valuation;
pub mod weights;

pub use ids::{BuyerId, GoodId, SellerId};
pub use real::Real;

/// Trapezoidal fuzzy number over `f64`.
pub type Tfn = fuzzy::TrapezoidalFuzzyNumber<f64>;
/// Pairwise comparison matrix over `f64`.
pub type Fpm = weights::FuzzyPairwiseMatrix<f64>;
/// Weight vector over `f64`.
pub type WeightVec = weights::WeightVector<f64>;
/// Buyer policy over `f64`.
pub type Policy = reputation::BuyerPolicy<f64>;
