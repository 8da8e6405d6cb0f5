//! Per-attribute fuzzy weights for a good.
//!
//! Subjective weights come from a reciprocal pairwise-comparison matrix via
//! extent analysis; empirical weights average the overall weights of past
//! purchases; the two blend through the experience factor `delta`.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::fuzzy::{FuzzyError, TrapezoidalFuzzyNumber};
use crate::real::{show, Real};
use crate::scale::{Comparison, ImportanceScale};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpmViolationKind {
    /// Entry count does not form a square matrix.
    Shape,
    /// Diagonal entry differs from `(1, 1, 1, 1)`.
    Diagonal,
    /// Lower-triangle entry is not the exact inverse of its mirror.
    Reciprocity,
    /// Entry is not strictly positive.
    NonPositive,
}

impl fmt::Display for FpmViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Shape => "entry count does not match the declared size",
            Self::Diagonal => "diagonal entry must be (1, 1, 1, 1)",
            Self::Reciprocity => "entry must equal the inverse of its mirror entry",
            Self::NonPositive => "entry must be strictly positive",
        };
        f.write_str(s)
    }
}

/// First violation found while validating a pairwise matrix.
/// Row and column are 1-based, matching matrix notation.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("pairwise matrix violation at ({row}, {col}): {kind}")]
pub struct FpmViolation {
    pub row: usize,
    pub col: usize,
    pub kind: FpmViolationKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error(transparent)]
    Fpm(#[from] FpmViolation),
    #[error("weight history is empty: no empirical data")]
    EmptyHistory,
    #[error("blend factor delta must lie in [0, 1], got {0}")]
    DeltaOutOfRange(f64),
    #[error("delta = {0} > 0 requires empirical weights")]
    MissingEmpirical(f64),
    #[error("weight vectors must have equal lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("history holds {0} vectors, window allows at most {1}")]
    HistoryOverflow(usize, usize),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// Validates the reciprocal-matrix invariants over a row-major entry grid.
///
/// Checks, in order: shape, strict positivity, unit diagonal, and exact
/// component-wise reciprocity `a_ji = inverse(a_ij)`; reports the first
/// violating entry (1-based indices).
pub fn validate_fpm<T: Real>(
    n: usize,
    entries: &[TrapezoidalFuzzyNumber<T>],
) -> Result<(), FpmViolation> {
    if n == 0 || entries.len() != n * n {
        return Err(FpmViolation {
            row: 0,
            col: 0,
            kind: FpmViolationKind::Shape,
        });
    }
    let at = |i: usize, j: usize| &entries[i * n + j];
    for i in 0..n {
        for j in 0..n {
            if !at(i, j).is_strictly_positive() {
                return Err(FpmViolation {
                    row: i + 1,
                    col: j + 1,
                    kind: FpmViolationKind::NonPositive,
                });
            }
        }
    }
    let one = TrapezoidalFuzzyNumber::one();
    for i in 0..n {
        if *at(i, i) != one {
            return Err(FpmViolation {
                row: i + 1,
                col: i + 1,
                kind: FpmViolationKind::Diagonal,
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let expected = at(i, j).inverse().expect("positivity already checked");
            if *at(j, i) != expected {
                return Err(FpmViolation {
                    row: j + 1,
                    col: i + 1,
                    kind: FpmViolationKind::Reciprocity,
                });
            }
        }
    }
    Ok(())
}

/// Reciprocal n-by-n matrix of pairwise attribute comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyPairwiseMatrix<T> {
    n: usize,
    entries: Vec<TrapezoidalFuzzyNumber<T>>,
}

impl<T: Real> FuzzyPairwiseMatrix<T> {
    /// Builds a matrix from a full row-major grid, validating all invariants.
    pub fn new(n: usize, entries: Vec<TrapezoidalFuzzyNumber<T>>) -> Result<Self, WeightError> {
        validate_fpm(n, &entries)?;
        Ok(Self { n, entries })
    }

    /// Builds a matrix from the strict upper triangle (row-major), deriving
    /// the diagonal and the reciprocal lower triangle.
    pub fn from_upper_triangle(
        n: usize,
        upper: &[TrapezoidalFuzzyNumber<T>],
    ) -> Result<Self, WeightError> {
        if n == 0 || upper.len() != n * (n - 1) / 2 {
            return Err(FpmViolation {
                row: 0,
                col: 0,
                kind: FpmViolationKind::Shape,
            }
            .into());
        }
        let one = TrapezoidalFuzzyNumber::one();
        let mut entries = vec![one; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let e = upper[k];
                k += 1;
                entries[i * n + j] = e;
                entries[j * n + i] = e.inverse().map_err(WeightError::Fuzzy)?;
            }
        }
        Self::new(n, entries)
    }

    /// Builds a matrix from upper-triangle linguistic comparisons on a scale.
    pub fn from_comparisons(
        scale: &ImportanceScale<T>,
        n: usize,
        upper: &[Comparison],
    ) -> Result<Self, WeightError> {
        let values = upper
            .iter()
            .map(|c| scale.comparison(*c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_upper_triangle(n, &values)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> TrapezoidalFuzzyNumber<T> {
        self.entries[i * self.n + j]
    }
}

/// Which stage of the weighting pipeline a vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightRole {
    Subjective,
    Empirical,
    Overall,
}

/// Per-attribute fuzzy weights with a pipeline role tag.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    role: WeightRole,
    entries: Vec<TrapezoidalFuzzyNumber<T>>,
}

impl<T: Real> WeightVector<T> {
    pub fn new(role: WeightRole, entries: Vec<TrapezoidalFuzzyNumber<T>>) -> Self {
        Self { role, entries }
    }

    pub fn role(&self) -> WeightRole {
        self.role
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[TrapezoidalFuzzyNumber<T>] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> TrapezoidalFuzzyNumber<T> {
        self.entries[i]
    }
}

/// Subjective weights via extent analysis: each attribute's fuzzy row sum
/// times the inverse of the grand sum over all entries.
pub fn subjective_weights<T: Real>(
    m: &FuzzyPairwiseMatrix<T>,
) -> Result<WeightVector<T>, WeightError> {
    let n = m.size();
    let mut grand = TrapezoidalFuzzyNumber::zero();
    for i in 0..n {
        for j in 0..n {
            grand = grand + m.entry(i, j);
        }
    }
    let inv_grand = grand.inverse()?;
    let entries = (0..n)
        .map(|i| {
            let row = (0..n).fold(TrapezoidalFuzzyNumber::zero(), |acc, j| acc + m.entry(i, j));
            row.approx_mul(&inv_grand)
        })
        .collect();
    Ok(WeightVector::new(WeightRole::Subjective, entries))
}

/// Empirical weights: the component-wise mean of the stored overall weight
/// vectors (at most the window size, most recent first evicted last).
pub fn empirical_weights<T: Real>(h: &WeightHistory<T>) -> Result<WeightVector<T>, WeightError> {
    let mut iter = h.iter();
    let first = iter.next().ok_or(WeightError::EmptyHistory)?;
    // A run of identical vectors must average to that vector bit-exactly;
    // the fold below can drift by an ulp.
    if h.iter().all(|v| v == first) {
        return Ok(WeightVector::new(
            WeightRole::Empirical,
            first.entries.clone(),
        ));
    }
    let n = first.len();
    let count = crate::real::c::<T>(h.len() as f64);
    let mut sums = vec![TrapezoidalFuzzyNumber::zero(); n];
    for v in h.iter() {
        debug_assert_eq!(v.len(), n);
        for (s, e) in sums.iter_mut().zip(v.entries()) {
            *s = *s + *e;
        }
    }
    let entries = sums
        .into_iter()
        .map(|s| {
            let [a1, a2, a3, a4] = s.components();
            TrapezoidalFuzzyNumber::new(a1 / count, a2 / count, a3 / count, a4 / count)
                .expect("mean of valid numbers is valid")
        })
        .collect();
    Ok(WeightVector::new(WeightRole::Empirical, entries))
}

/// Overall weights: `delta * empirical + (1 - delta) * subjective`,
/// component-wise. `delta = 0` returns the subjective entries unchanged;
/// `delta = 1` the empirical ones.
pub fn blend_weights<T: Real>(
    subjective: &WeightVector<T>,
    empirical: Option<&WeightVector<T>>,
    delta: T,
) -> Result<WeightVector<T>, WeightError> {
    if !(delta >= T::zero() && delta <= T::one()) {
        return Err(WeightError::DeltaOutOfRange(show(delta)));
    }
    let Some(emp) = empirical else {
        if delta > T::zero() {
            return Err(WeightError::MissingEmpirical(show(delta)));
        }
        return Ok(WeightVector::new(
            WeightRole::Overall,
            subjective.entries.clone(),
        ));
    };
    if emp.len() != subjective.len() {
        return Err(WeightError::LengthMismatch(subjective.len(), emp.len()));
    }
    if delta == T::zero() {
        return Ok(WeightVector::new(
            WeightRole::Overall,
            subjective.entries.clone(),
        ));
    }
    if delta == T::one() {
        return Ok(WeightVector::new(WeightRole::Overall, emp.entries.clone()));
    }
    let complement = T::one() - delta;
    let entries = subjective
        .entries()
        .iter()
        .zip(emp.entries())
        .map(|(s, e)| {
            let scaled_e = e.scale(delta).expect("delta validated non-negative");
            let scaled_s = s.scale(complement).expect("complement non-negative");
            scaled_e + scaled_s
        })
        .collect();
    Ok(WeightVector::new(WeightRole::Overall, entries))
}

/// Rolling window of past overall weight vectors plus the blend factor
/// `delta` for one (buyer, good) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightHistory<T> {
    window: usize,
    delta: T,
    delta_rate: T,
    entries: VecDeque<WeightVector<T>>,
}

impl<T: Real> WeightHistory<T> {
    /// Fresh history: no purchases yet, `delta = 0`.
    pub fn new(window: usize, delta_rate: T) -> Self {
        Self {
            window: window.max(1),
            delta: T::zero(),
            delta_rate,
            entries: VecDeque::new(),
        }
    }

    /// History seeded from prior state (scenario fixtures).
    pub fn seeded(
        window: usize,
        delta: T,
        delta_rate: T,
        entries: Vec<WeightVector<T>>,
    ) -> Result<Self, WeightError> {
        if !(delta >= T::zero() && delta <= T::one()) {
            return Err(WeightError::DeltaOutOfRange(show(delta)));
        }
        let window = window.max(1);
        if entries.len() > window {
            return Err(WeightError::HistoryOverflow(entries.len(), window));
        }
        Ok(Self {
            window,
            delta,
            delta_rate,
            entries: entries.into(),
        })
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &WeightVector<T>> {
        self.entries.iter()
    }

    /// Records a completed purchase: appends the overall weights used
    /// (evicting beyond the window, oldest first) and advances
    /// `delta` by its rate, capped at 1.
    pub fn advance(&mut self, overall: WeightVector<T>) {
        self.entries.push_back(overall);
        while self.entries.len() > self.window {
            self.entries.pop_front();
        }
        self.delta = T::one().min(self.delta + self.delta_rate);
    }
}
