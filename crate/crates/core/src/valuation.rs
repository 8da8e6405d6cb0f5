//! Seller-offer valuation: fuzzy attribute scoring, centroid collapse, argmax.
//!
//! The same pipeline values an offer before purchase (expected value) and the
//! delivered good after purchase (actual value).

use thiserror::Error;

use crate::fuzzy::TrapezoidalFuzzyNumber;
use crate::ids::SellerId;
use crate::real::Real;
use crate::scale::{PerformanceScale, PerformanceTerm};
use crate::weights::WeightVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValuationError {
    #[error("rating row has {got} attributes, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no offers to rank")]
    NoOffers,
}

/// Rectangular matrix of per-seller, per-attribute fuzzy performance ratings.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceMatrix<T> {
    n_attributes: usize,
    rows: Vec<(SellerId, Vec<TrapezoidalFuzzyNumber<T>>)>,
}

impl<T: Real> PerformanceMatrix<T> {
    pub fn new(n_attributes: usize) -> Self {
        Self {
            n_attributes,
            rows: Vec::new(),
        }
    }

    pub fn push_row(
        &mut self,
        seller: SellerId,
        ratings: Vec<TrapezoidalFuzzyNumber<T>>,
    ) -> Result<(), ValuationError> {
        if ratings.len() != self.n_attributes {
            return Err(ValuationError::DimensionMismatch {
                expected: self.n_attributes,
                got: ratings.len(),
            });
        }
        self.rows.push((seller, ratings));
        Ok(())
    }

    /// Builds a matrix from linguistic ratings on a performance scale.
    pub fn from_terms(
        scale: &PerformanceScale<T>,
        n_attributes: usize,
        rows: &[(SellerId, Vec<PerformanceTerm>)],
    ) -> Result<Self, ValuationError> {
        let mut pm = Self::new(n_attributes);
        for (seller, terms) in rows {
            let ratings = terms.iter().map(|t| scale.quadruple(*t)).collect();
            pm.push_row(*seller, ratings)?;
        }
        Ok(pm)
    }

    pub fn n_attributes(&self) -> usize {
        self.n_attributes
    }

    pub fn rows(&self) -> &[(SellerId, Vec<TrapezoidalFuzzyNumber<T>>)] {
        &self.rows
    }
}

/// Fuzzy and crisp value of one seller's offer.
#[derive(Debug, Clone, PartialEq)]
pub struct OfferValuation<T> {
    pub seller: SellerId,
    pub fuzzy: TrapezoidalFuzzyNumber<T>,
    pub crisp: T,
}

fn weighted_row_value<T: Real>(
    ratings: &[TrapezoidalFuzzyNumber<T>],
    weights: &WeightVector<T>,
) -> Result<TrapezoidalFuzzyNumber<T>, ValuationError> {
    if ratings.len() != weights.len() {
        return Err(ValuationError::DimensionMismatch {
            expected: weights.len(),
            got: ratings.len(),
        });
    }
    Ok(ratings
        .iter()
        .zip(weights.entries())
        .fold(TrapezoidalFuzzyNumber::zero(), |acc, (p, w)| {
            acc + p.approx_mul(w)
        }))
}

/// Per-seller fuzzy value: the fuzzy sum over attributes of
/// `rating * weight`.
pub fn fuzzy_values<T: Real>(
    pm: &PerformanceMatrix<T>,
    weights: &WeightVector<T>,
) -> Result<Vec<TrapezoidalFuzzyNumber<T>>, ValuationError> {
    pm.rows()
        .iter()
        .map(|(_, ratings)| weighted_row_value(ratings, weights))
        .collect()
}

/// Centre-of-area defuzzification of each fuzzy value.
pub fn crisp_values<T: Real>(fuzzy: &[TrapezoidalFuzzyNumber<T>]) -> Vec<T> {
    fuzzy.iter().map(|f| f.coa()).collect()
}

/// Values every row of the matrix, pairing each seller with its fuzzy and
/// crisp value.
pub fn evaluate_offers<T: Real>(
    pm: &PerformanceMatrix<T>,
    weights: &WeightVector<T>,
) -> Result<Vec<OfferValuation<T>>, ValuationError> {
    pm.rows()
        .iter()
        .map(|(seller, ratings)| {
            let fuzzy = weighted_row_value(ratings, weights)?;
            Ok(OfferValuation {
                seller: *seller,
                fuzzy,
                crisp: fuzzy.coa(),
            })
        })
        .collect()
}

/// Seller with the highest crisp value; ties go to the lowest seller id.
pub fn argmax_seller<T: Real>(offers: &[OfferValuation<T>]) -> Result<SellerId, ValuationError> {
    let mut best: Option<(&OfferValuation<T>,)> = None;
    for o in offers {
        best = match best {
            None => Some((o,)),
            Some((b,)) => {
                if o.crisp > b.crisp || (o.crisp == b.crisp && o.seller < b.seller) {
                    Some((o,))
                } else {
                    Some((b,))
                }
            }
        };
    }
    best.map(|(o,)| o.seller).ok_or(ValuationError::NoOffers)
}

/// Crisp value of a single delivered-ratings row; the post-purchase
/// counterpart of the expected value.
pub fn assess_actual_value<T: Real>(
    delivered: &[TrapezoidalFuzzyNumber<T>],
    weights: &WeightVector<T>,
) -> Result<T, ValuationError> {
    Ok(weighted_row_value(delivered, weights)?.coa())
}
