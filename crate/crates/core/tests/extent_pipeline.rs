//! The worked 4-attribute example: pairwise matrix -> subjective weights ->
//! blended overall weights -> offer valuation.
//!
//! Expected values are frozen from an independent oracle that evaluates the
//! published formulas directly over raw quadruples, with a different
//! evaluation order than the library (the unexpanded endpoint form), so the
//! two routes cross-check each other.

use repute_core::ids::SellerId;
use repute_core::scale::{Comparison, ImportanceScale, ImportanceTerm, PerformanceScale, PerformanceTerm};
use repute_core::valuation::{argmax_seller, evaluate_offers, PerformanceMatrix};
use repute_core::weights::{blend_weights, subjective_weights, FuzzyPairwiseMatrix, WeightRole, WeightVector};
use repute_core::Tfn;

/// Raw-quadruple oracle, independent of the library's fuzzy type.
mod oracle {
    pub type Q = [f64; 4];

    pub fn add(a: Q, b: Q) -> Q {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
    }

    pub fn inv(a: Q) -> Q {
        [1.0 / a[3], 1.0 / a[2], 1.0 / a[1], 1.0 / a[0]]
    }

    pub fn mul(a: Q, b: Q) -> Q {
        let c1 = 1.5 * (a[1] - a[0]) * (b[1] - b[0])
            + 2.0 * ((a[1] - a[0]) * b[0] + (b[1] - b[0]) * a[0])
            + 3.0 * a[0] * b[0]
            - 2.0 * a[1] * b[1];
        let c4 = 1.5 * (a[3] - a[2]) * (b[3] - b[2])
            - 2.0 * ((a[3] - a[2]) * b[3] + (b[3] - b[2]) * a[3])
            + 3.0 * a[3] * b[3]
            - 2.0 * a[2] * b[2];
        [c1, a[1] * b[1], a[2] * b[2], c4]
    }

    pub fn scale(a: Q, c: f64) -> Q {
        [c * a[0], c * a[1], c * a[2], c * a[3]]
    }

    pub fn coa(a: Q) -> f64 {
        (a[0] + a[1] + a[2] + a[3]) / 4.0
    }

    /// Extent analysis over a full row-major matrix.
    pub fn subjective(n: usize, m: &[Q]) -> Vec<Q> {
        let mut grand = [0.0; 4];
        for e in m {
            grand = add(grand, *e);
        }
        let inv_grand = inv(grand);
        (0..n)
            .map(|i| {
                let row = (0..n).fold([0.0; 4], |acc, j| add(acc, m[i * n + j]));
                mul(row, inv_grand)
            })
            .collect()
    }
}

const EW: [[f64; 4]; 4] = [
    [0.0405, 0.115, 0.115, 0.2435],
    [0.11, 0.46, 0.46, 0.87],
    [0.074, 0.196, 0.196, 0.443],
    [0.0875, 0.367, 0.367, 0.718],
];

const DELTA: f64 = 0.27;

// Frozen oracle outputs for the worked pairwise matrix (attributes
// P, Q, DP, SO).
const SW_GOLDEN: [[f64; 4]; 4] = [
    [0.03498503491852345, 0.07216494845360824, 0.07216494845360824, 0.22617660242043927],
    [0.04752244762221483, 0.28350515463917525, 0.28350515463917525, 0.825713431943822],
    [0.09005653475224476, 0.25773195876288657, 0.25773195876288657, 0.6984909607052144],
    [0.05337545726637846, 0.3865979381443299, 0.3865979381443299, 1.1051098162259076],
];

const W_GOLDEN: [[f64; 4]; 4] = [
    [0.03647407549052212, 0.08373041237113402, 0.08373041237113402, 0.23085391976692066],
    [0.06439138676421682, 0.33115876288659796, 0.33115876288659796, 0.83767080531899],
    [0.08572127036913867, 0.24106432989690718, 0.24106432989690718, 0.6295084013148066],
    [0.06258908380445627, 0.38130649484536083, 0.38130649484536083, 1.0005901658449126],
];

// Frozen crisp valuations for the four-seller offer matrix under W_GOLDEN.
const CVS_GOLDEN: [(u32, f64); 4] = [
    (1, 10.107862327522014),
    (3, 9.977830103634997),
    (4, 11.134173539759882),
    (6, 9.457289110878964),
];

fn worked_example_fpm() -> FuzzyPairwiseMatrix<f64> {
    use Comparison::{Direct, Reciprocal};
    use ImportanceTerm::{H, M};
    let upper = [
        Reciprocal(M),
        Reciprocal(H),
        Reciprocal(M),
        Direct(M),
        Reciprocal(M),
        Reciprocal(M),
    ];
    FuzzyPairwiseMatrix::from_comparisons(&ImportanceScale::default(), 4, &upper).unwrap()
}

fn assert_quad_close(got: [f64; 4], want: [f64; 4], tol: f64, what: &str) {
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "{what}: {g} vs {w}");
    }
}

fn overall_weights() -> WeightVector<f64> {
    let fpm = worked_example_fpm();
    let sw = subjective_weights(&fpm).unwrap();
    let ew = WeightVector::new(
        WeightRole::Empirical,
        EW.iter()
            .map(|q| Tfn::new(q[0], q[1], q[2], q[3]).unwrap())
            .collect(),
    );
    blend_weights(&sw, Some(&ew), DELTA).unwrap()
}

#[test]
fn subjective_weights_match_oracle_and_goldens() {
    let fpm = worked_example_fpm();
    let raw: Vec<[f64; 4]> = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| fpm.entry(i, j).components())
        .collect();
    let oracle_sw = oracle::subjective(4, &raw);
    let sw = subjective_weights(&fpm).unwrap();
    for (i, (got, want)) in sw.entries().iter().zip(&oracle_sw).enumerate() {
        assert_quad_close(got.components(), *want, 1e-12, &format!("sw[{i}] vs oracle"));
    }
    for (i, (got, want)) in sw.entries().iter().zip(SW_GOLDEN).enumerate() {
        assert_quad_close(got.components(), want, 1e-12, &format!("sw[{i}] vs golden"));
    }
}

#[test]
fn subjective_centroids_rank_service_and_quality_over_delivery_over_price() {
    let sw = subjective_weights(&worked_example_fpm()).unwrap();
    let coa: Vec<f64> = sw.entries().iter().map(|e| e.coa()).collect();
    let (p, q, dp, so) = (coa[0], coa[1], coa[2], coa[3]);
    assert!(so > dp && q > dp, "SO and Q must outrank DP: {coa:?}");
    assert!(dp > p, "DP must outrank P: {coa:?}");
}

#[test]
fn blended_weights_match_goldens() {
    let w = overall_weights();
    assert_eq!(w.role(), WeightRole::Overall);
    for (i, (got, want)) in w.entries().iter().zip(W_GOLDEN).enumerate() {
        assert_quad_close(got.components(), want, 1e-12, &format!("w[{i}] vs golden"));
    }
    // Independent route: oracle blend over the oracle subjective weights.
    let fpm = worked_example_fpm();
    let raw: Vec<[f64; 4]> = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| fpm.entry(i, j).components())
        .collect();
    let oracle_w: Vec<[f64; 4]> = oracle::subjective(4, &raw)
        .into_iter()
        .zip(EW)
        .map(|(sw, ew)| oracle::add(oracle::scale(ew, DELTA), oracle::scale(sw, 1.0 - DELTA)))
        .collect();
    for (i, (got, want)) in w.entries().iter().zip(&oracle_w).enumerate() {
        assert_quad_close(got.components(), *want, 1e-12, &format!("w[{i}] vs oracle"));
    }
}

#[test]
fn offer_matrix_valuations_match_oracle_goldens() {
    use PerformanceTerm::{A, Ex, Vh, H};
    let rows = [
        (SellerId(1), vec![Vh, Vh, Vh, A]),
        (SellerId(3), vec![H, H, Vh, H]),
        (SellerId(4), vec![H, Ex, H, H]),
        (SellerId(6), vec![Ex, Vh, H, A]),
    ];
    let pm = PerformanceMatrix::from_terms(&PerformanceScale::default(), 4, &rows).unwrap();
    let w = overall_weights();
    let valuations = evaluate_offers(&pm, &w).unwrap();

    // Independent oracle route over raw quadruples.
    let w_raw: Vec<[f64; 4]> = w.entries().iter().map(|e| e.components()).collect();
    for (valuation, (seller, terms)) in valuations.iter().zip(&rows) {
        let scale = PerformanceScale::<f64>::default();
        let oracle_fv = terms.iter().zip(&w_raw).fold([0.0; 4], |acc, (t, wq)| {
            oracle::add(acc, oracle::mul(scale.quadruple(*t).components(), *wq))
        });
        assert_eq!(valuation.seller, *seller);
        assert!(
            (valuation.crisp - oracle::coa(oracle_fv)).abs() < 1e-9,
            "seller {seller}: {} vs oracle {}",
            valuation.crisp,
            oracle::coa(oracle_fv)
        );
    }
    for (valuation, (seller, want)) in valuations.iter().zip(CVS_GOLDEN) {
        assert_eq!(valuation.seller.0, seller);
        assert!(
            (valuation.crisp - want).abs() < 1e-9,
            "seller {seller}: {} vs golden {want}",
            valuation.crisp
        );
    }
    // Under the recomputed weights the fourth seller's offer tops the list.
    assert_eq!(argmax_seller(&valuations).unwrap(), SellerId(4));
}

#[test]
fn pipeline_fires_no_multiplication_repairs() {
    repute_core::fuzzy::reset_repair_tally();
    let _ = overall_weights();
    let _ = subjective_weights(&worked_example_fpm()).unwrap();
    assert_eq!(repute_core::fuzzy::repair_tally(), 0);
}
