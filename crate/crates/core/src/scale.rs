//! Linguistic rating scales and their trapezoidal anchors.
//!
//! Two five-term scales drive the valuation pipeline: attribute importance
//! (pairwise comparisons) and seller performance (offer ratings). Both are
//! overridable per scenario; the defaults below anchor `H = (3,5,5,7)` on the
//! importance side and `VH = (7,9,10,12)` on the performance side.

use std::fmt;
use std::str::FromStr;

use crate::fuzzy::{FuzzyError, TrapezoidalFuzzyNumber};
use crate::real::Real;

/// Relative importance of one attribute over another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImportanceTerm {
    /// Equally important.
    E,
    /// Moderately important.
    M,
    /// Highly important.
    H,
    /// Very highly important.
    Vh,
    /// Extremely important.
    Ei,
}

impl ImportanceTerm {
    pub const ALL: [Self; 5] = [Self::E, Self::M, Self::H, Self::Vh, Self::Ei];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::E => "E",
            Self::M => "M",
            Self::H => "H",
            Self::Vh => "VH",
            Self::Ei => "EI",
        }
    }
}

impl fmt::Display for ImportanceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ImportanceTerm {
    type Err = FuzzyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E" => Ok(Self::E),
            "M" => Ok(Self::M),
            "H" => Ok(Self::H),
            "VH" => Ok(Self::Vh),
            "EI" => Ok(Self::Ei),
            other => Err(FuzzyError::UnknownTerm(other.to_string())),
        }
    }
}

/// Linguistic performance rating of a seller's offer for one attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PerformanceTerm {
    /// Poor.
    P,
    /// Average.
    A,
    /// High.
    H,
    /// Very high.
    Vh,
    /// Excellent.
    Ex,
}

impl PerformanceTerm {
    pub const ALL: [Self; 5] = [Self::P, Self::A, Self::H, Self::Vh, Self::Ex];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::P => "P",
            Self::A => "A",
            Self::H => "H",
            Self::Vh => "VH",
            Self::Ex => "EX",
        }
    }

    /// Position on the scale, `P = 0` through `EX = 4`.
    pub fn level(self) -> i32 {
        match self {
            Self::P => 0,
            Self::A => 1,
            Self::H => 2,
            Self::Vh => 3,
            Self::Ex => 4,
        }
    }

    /// Term at the given position, clamped to the scale ends.
    pub fn from_level(level: i32) -> Self {
        match level.clamp(0, 4) {
            0 => Self::P,
            1 => Self::A,
            2 => Self::H,
            3 => Self::Vh,
            _ => Self::Ex,
        }
    }

    /// Delivers `shift` levels below the term (negative `shift` is above).
    pub fn shifted_down(self, shift: i32) -> Self {
        Self::from_level(self.level() - shift)
    }
}

impl fmt::Display for PerformanceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PerformanceTerm {
    type Err = FuzzyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P" => Ok(Self::P),
            "A" => Ok(Self::A),
            "H" => Ok(Self::H),
            "VH" => Ok(Self::Vh),
            "EX" => Ok(Self::Ex),
            other => Err(FuzzyError::UnknownTerm(other.to_string())),
        }
    }
}

/// A pairwise comparison entry: a term, or the reciprocal of one (`1/H`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Direct(ImportanceTerm),
    Reciprocal(ImportanceTerm),
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Direct(t) => write!(f, "{t}"),
            Self::Reciprocal(t) => write!(f, "1/{t}"),
        }
    }
}

impl FromStr for Comparison {
    type Err = FuzzyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("1/") {
            Ok(Self::Reciprocal(rest.parse()?))
        } else {
            Ok(Self::Direct(s.parse()?))
        }
    }
}

fn check_centroid_order<T: Real>(
    entries: &[TrapezoidalFuzzyNumber<T>; 5],
    names: [&str; 5],
) -> Result<(), FuzzyError> {
    for w in entries.windows(2) {
        if !(w[0].coa() < w[1].coa()) {
            return Err(FuzzyError::InvalidScale(format!(
                "term centroids must strictly increase along {}",
                names.join(" < ")
            )));
        }
    }
    Ok(())
}

/// Importance scale: maps the five comparison terms to fuzzy anchors.
///
/// Every anchor must be strictly positive (entries get inverted inside
/// pairwise matrices) and the centroids must strictly increase E through EI.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceScale<T> {
    entries: [TrapezoidalFuzzyNumber<T>; 5],
}

impl<T: Real> ImportanceScale<T> {
    pub fn new(entries: [TrapezoidalFuzzyNumber<T>; 5]) -> Result<Self, FuzzyError> {
        for (term, e) in ImportanceTerm::ALL.iter().zip(&entries) {
            if !e.is_strictly_positive() {
                return Err(FuzzyError::InvalidScale(format!(
                    "importance anchor {term} must be strictly positive"
                )));
            }
        }
        check_centroid_order(&entries, ["E", "M", "H", "VH", "EI"])?;
        Ok(Self { entries })
    }

    /// Fuzzy anchor for a term.
    pub fn quadruple(&self, term: ImportanceTerm) -> TrapezoidalFuzzyNumber<T> {
        self.entries[ImportanceTerm::ALL.iter().position(|t| *t == term).unwrap()]
    }

    /// Fuzzy value of a pairwise comparison entry.
    pub fn comparison(&self, c: Comparison) -> Result<TrapezoidalFuzzyNumber<T>, FuzzyError> {
        match c {
            Comparison::Direct(t) => Ok(self.quadruple(t)),
            Comparison::Reciprocal(t) => self.quadruple(t).inverse(),
        }
    }
}

impl<T: Real> Default for ImportanceScale<T> {
    fn default() -> Self {
        let q = |a: f64, b: f64, c_: f64, d: f64| {
            TrapezoidalFuzzyNumber::new(
                crate::real::c(a),
                crate::real::c(b),
                crate::real::c(c_),
                crate::real::c(d),
            )
            .unwrap()
        };
        Self::new([
            q(1.0, 1.0, 1.0, 1.0),
            q(1.0, 3.0, 3.0, 5.0),
            q(3.0, 5.0, 5.0, 7.0),
            q(5.0, 7.0, 7.0, 9.0),
            q(7.0, 9.0, 9.0, 11.0),
        ])
        .unwrap()
    }
}

/// Performance scale: maps the five rating terms to fuzzy anchors.
///
/// Anchors must be non-negative (the default `P` starts at 0; ratings are
/// never inverted) with strictly increasing centroids P through EX.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceScale<T> {
    entries: [TrapezoidalFuzzyNumber<T>; 5],
}

impl<T: Real> PerformanceScale<T> {
    pub fn new(entries: [TrapezoidalFuzzyNumber<T>; 5]) -> Result<Self, FuzzyError> {
        for (term, e) in PerformanceTerm::ALL.iter().zip(&entries) {
            if e.a1() < T::zero() || !(e.a4() > T::zero()) {
                return Err(FuzzyError::InvalidScale(format!(
                    "performance anchor {term} must be non-negative and not identically zero"
                )));
            }
        }
        check_centroid_order(&entries, ["P", "A", "H", "VH", "EX"])?;
        Ok(Self { entries })
    }

    pub fn quadruple(&self, term: PerformanceTerm) -> TrapezoidalFuzzyNumber<T> {
        self.entries[term.level() as usize]
    }
}

impl<T: Real> Default for PerformanceScale<T> {
    fn default() -> Self {
        let q = |a: f64, b: f64, c_: f64, d: f64| {
            TrapezoidalFuzzyNumber::new(
                crate::real::c(a),
                crate::real::c(b),
                crate::real::c(c_),
                crate::real::c(d),
            )
            .unwrap()
        };
        Self::new([
            q(0.0, 1.0, 2.0, 4.0),
            q(1.0, 3.0, 4.0, 6.0),
            q(4.0, 6.0, 7.0, 9.0),
            q(7.0, 9.0, 10.0, 12.0),
            q(10.0, 12.0, 13.0, 13.0),
        ])
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Tfn = TrapezoidalFuzzyNumber<f64>;

    #[test]
    fn default_anchors() {
        let imp = ImportanceScale::<f64>::default();
        assert_eq!(
            imp.quadruple(ImportanceTerm::H).components(),
            [3.0, 5.0, 5.0, 7.0]
        );
        let perf = PerformanceScale::<f64>::default();
        assert_eq!(
            perf.quadruple(PerformanceTerm::Vh).components(),
            [7.0, 9.0, 10.0, 12.0]
        );
        assert_eq!(
            perf.quadruple(PerformanceTerm::Ex).components(),
            [10.0, 12.0, 13.0, 13.0]
        );
    }

    #[test]
    fn term_parsing() {
        assert_eq!("VH".parse::<ImportanceTerm>().unwrap(), ImportanceTerm::Vh);
        assert_eq!("EX".parse::<PerformanceTerm>().unwrap(), PerformanceTerm::Ex);
        assert!(matches!(
            "XL".parse::<PerformanceTerm>(),
            Err(FuzzyError::UnknownTerm(t)) if t == "XL"
        ));
        assert_eq!(
            "1/H".parse::<Comparison>().unwrap(),
            Comparison::Reciprocal(ImportanceTerm::H)
        );
    }

    #[test]
    fn comparison_reciprocal_value() {
        let imp = ImportanceScale::<f64>::default();
        let v = imp
            .comparison(Comparison::Reciprocal(ImportanceTerm::M))
            .unwrap();
        assert_eq!(v.components(), [0.2, 1.0 / 3.0, 1.0 / 3.0, 1.0]);
    }

    #[test]
    fn misordered_scale_rejected() {
        let q = |a: f64, b: f64, c: f64, d: f64| Tfn::new(a, b, c, d).unwrap();
        let r = ImportanceScale::new([
            q(1.0, 1.0, 1.0, 1.0),
            q(3.0, 5.0, 5.0, 7.0), // H ahead of M
            q(1.0, 3.0, 3.0, 5.0),
            q(5.0, 7.0, 7.0, 9.0),
            q(7.0, 9.0, 9.0, 11.0),
        ]);
        assert!(matches!(r, Err(FuzzyError::InvalidScale(_))));
    }

    #[test]
    fn zero_anchor_rejected_for_importance_only() {
        let q = |a: f64, b: f64, c: f64, d: f64| Tfn::new(a, b, c, d).unwrap();
        let entries = [
            q(0.0, 1.0, 2.0, 4.0),
            q(1.0, 3.0, 4.0, 6.0),
            q(4.0, 6.0, 7.0, 9.0),
            q(7.0, 9.0, 10.0, 12.0),
            q(10.0, 12.0, 13.0, 13.0),
        ];
        assert!(ImportanceScale::new(entries).is_err());
        assert!(PerformanceScale::new(entries).is_ok());
    }

    #[test]
    fn level_shifts_clamp_at_scale_ends() {
        assert_eq!(PerformanceTerm::Vh.shifted_down(2), PerformanceTerm::A);
        assert_eq!(PerformanceTerm::A.shifted_down(3), PerformanceTerm::P);
        assert_eq!(PerformanceTerm::Vh.shifted_down(-2), PerformanceTerm::Ex);
    }
}
