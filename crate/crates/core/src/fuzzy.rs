//! Trapezoidal fuzzy number algebra.
//!
//! All fuzzy quantities in the engine are positive trapezoidal numbers
//! `(a1, a2, a3, a4)` with `a1 <= a2 <= a3 <= a4`. The product of two
//! trapezoidal numbers is not trapezoidal, so multiplication uses a
//! trapezoidal approximation whose middle components are the exact products
//! `a2*b2` and `a3*b3`.

use std::cell::Cell;
use std::ops::Add;

use thiserror::Error;

use crate::real::{c, show, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("components must be finite and ordered a1 <= a2 <= a3 <= a4, got ({0}, {1}, {2}, {3})")]
    InvalidComponents(f64, f64, f64, f64),
    #[error("inverse requires a strictly positive fuzzy number, got a1 = {0}")]
    NonPositiveInverse(f64),
    #[error("scale factor must be non-negative, got {0}")]
    NegativeScale(f64),
    #[error("unknown linguistic term `{0}`")]
    UnknownTerm(String),
    #[error("scale is invalid: {0}")]
    InvalidScale(String),
}

thread_local! {
    static REPAIR_TALLY: Cell<u64> = const { Cell::new(0) };
}

/// Number of times the multiplication repair fired on this thread.
///
/// The approximation can emit `c1 > c2` or `c4 < c3` for wide-spread inputs;
/// the repair clamps the outer components so the ordering invariant stays
/// total. On scale-derived inputs the repair must never fire, which tests
/// assert through this tally.
pub fn repair_tally() -> u64 {
    REPAIR_TALLY.with(|t| t.get())
}

/// Resets the per-thread repair tally to zero.
pub fn reset_repair_tally() {
    REPAIR_TALLY.with(|t| t.set(0));
}

fn bump_repair_tally() {
    REPAIR_TALLY.with(|t| t.set(t.get() + 1));
}

/// A trapezoidal fuzzy number `(a1, a2, a3, a4)`.
///
/// Crisp reals are the degenerate case `a1 = a2 = a3 = a4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidalFuzzyNumber<T> {
    a1: T,
    a2: T,
    a3: T,
    a4: T,
}

impl<T: Real> TrapezoidalFuzzyNumber<T> {
    /// Builds a fuzzy number, enforcing the ordering invariant exactly
    /// (no epsilon: inputs are scale constants or already-repaired products).
    pub fn new(a1: T, a2: T, a3: T, a4: T) -> Result<Self, FuzzyError> {
        let finite = a1.is_finite() && a2.is_finite() && a3.is_finite() && a4.is_finite();
        if !finite || !(a1 <= a2 && a2 <= a3 && a3 <= a4) {
            return Err(FuzzyError::InvalidComponents(
                show(a1),
                show(a2),
                show(a3),
                show(a4),
            ));
        }
        Ok(Self { a1, a2, a3, a4 })
    }

    /// A crisp value `(v, v, v, v)`.
    pub fn crisp(v: T) -> Result<Self, FuzzyError> {
        Self::new(v, v, v, v)
    }

    /// The additive identity `(0, 0, 0, 0)`.
    pub fn zero() -> Self {
        Self {
            a1: T::zero(),
            a2: T::zero(),
            a3: T::zero(),
            a4: T::zero(),
        }
    }

    /// The multiplicative identity `(1, 1, 1, 1)`.
    pub fn one() -> Self {
        Self {
            a1: T::one(),
            a2: T::one(),
            a3: T::one(),
            a4: T::one(),
        }
    }

    pub fn a1(&self) -> T {
        self.a1
    }

    pub fn a2(&self) -> T {
        self.a2
    }

    pub fn a3(&self) -> T {
        self.a3
    }

    pub fn a4(&self) -> T {
        self.a4
    }

    pub fn components(&self) -> [T; 4] {
        [self.a1, self.a2, self.a3, self.a4]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.a1 > T::zero()
    }

    /// Inverse `(1/a4, 1/a3, 1/a2, 1/a1)`; defined for strictly positive numbers.
    pub fn inverse(&self) -> Result<Self, FuzzyError> {
        if !self.is_strictly_positive() {
            return Err(FuzzyError::NonPositiveInverse(show(self.a1)));
        }
        Ok(Self {
            a1: T::one() / self.a4,
            a2: T::one() / self.a3,
            a3: T::one() / self.a2,
            a4: T::one() / self.a1,
        })
    }

    /// Trapezoidal product approximation.
    ///
    /// The middle components are the exact products `a2*b2` and `a3*b3`. The
    /// outer components use the expanded endpoint form
    /// `c1 = (a1*b1 + a1*b2 + a2*b1 - a2*b2) / 2` (and symmetrically for
    /// `c4`), which collapses bit-exactly to `a1*k`/`a4*k` when the other
    /// operand is crisp. Both operands are expected non-negative.
    pub fn approx_mul(&self, other: &Self) -> Self {
        self.approx_mul_detailed(other).0
    }

    /// Like [`approx_mul`](Self::approx_mul), also reporting whether the
    /// ordering repair fired.
    pub fn approx_mul_detailed(&self, other: &Self) -> (Self, bool) {
        debug_assert!(
            self.a1 >= T::zero() && other.a1 >= T::zero(),
            "approx_mul expects non-negative operands"
        );
        let (a1, a2, a3, a4) = (self.a1, self.a2, self.a3, self.a4);
        let (b1, b2, b3, b4) = (other.a1, other.a2, other.a3, other.a4);
        let half = c::<T>(0.5);
        // The endpoint correction vanishes algebraically when either operand
        // pair is degenerate; taking that branch keeps those cases bit-exact.
        let mut c1 = if a1 == a2 || b1 == b2 {
            a1 * b1
        } else {
            half * ((a1 * b1 + a1 * b2) + (a2 * b1 - a2 * b2))
        };
        let c2 = a2 * b2;
        let c3 = a3 * b3;
        let mut c4 = if a3 == a4 || b3 == b4 {
            a4 * b4
        } else {
            half * ((a4 * b4 + a4 * b3) + (a3 * b4 - a3 * b3))
        };
        let mut repaired = false;
        if c1 > c2 {
            c1 = c2;
            repaired = true;
        }
        if c4 < c3 {
            c4 = c3;
            repaired = true;
        }
        if repaired {
            bump_repair_tally();
        }
        debug_assert!(c1 <= c2 && c2 <= c3 && c3 <= c4);
        (
            Self {
                a1: c1,
                a2: c2,
                a3: c3,
                a4: c4,
            },
            repaired,
        )
    }

    /// Scales every component by a non-negative crisp factor.
    pub fn scale(&self, factor: T) -> Result<Self, FuzzyError> {
        if !(factor >= T::zero()) {
            return Err(FuzzyError::NegativeScale(show(factor)));
        }
        Ok(Self {
            a1: factor * self.a1,
            a2: factor * self.a2,
            a3: factor * self.a3,
            a4: factor * self.a4,
        })
    }

    /// Centre-of-area defuzzification: `(a1 + a2 + a3 + a4) / 4`.
    pub fn coa(&self) -> T {
        (self.a1 + self.a2 + self.a3 + self.a4) / c::<T>(4.0)
    }
}

impl<T: Real> Add for TrapezoidalFuzzyNumber<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            a1: self.a1 + rhs.a1,
            a2: self.a2 + rhs.a2,
            a3: self.a3 + rhs.a3,
            a4: self.a4 + rhs.a4,
        }
    }
}

impl<T: Real> std::iter::Sum for TrapezoidalFuzzyNumber<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}
