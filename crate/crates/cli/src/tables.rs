//! Reference-table reproductions.
//!
//! Three built-in tables pin the engine against published reference values:
//! monotone reputation increase (table1), monotone decrease under the
//! penalty factor (table2), and the fading effect of ballot stuffing with
//! pair experience (table6). Every printed number is recomputed from the
//! engine; the reference values are data, shown alongside with their deltas.

use std::fmt::Write as _;

use repute_core::reputation::{
    combine_overall, eta, mu, update_individual, xi, BuyerPolicy, ReputationRecord,
};
use repute_core::sim::bs_effect_metric;

const E_BASE: f64 = 1.01;
const LAMBDA: f64 = 0.001;
const PRIOR: f64 = 0.37;
const GAMMA: f64 = 2.0;
const X_GRID: [f64; 6] = [100.0, 500.0, 2000.0, 5000.0, 10000.0, 20000.0];

/// Absolute tolerance for reputation-valued cells (references round to 3-4
/// digits).
pub const REPUTATION_TOL: f64 = 0.005;
/// Absolute tolerance for percentage cells, in points.
pub const PERCENT_TOL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Table1,
    Table2,
    Table6,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Table1 => "table1",
            Self::Table2 => "table2",
            Self::Table6 => "table6",
        }
    }
}

/// Reference rows for the monotone-increase table: for each transaction
/// value, (mu, updated reputation, % increase) at beta = 0 and beta = 0.5.
pub const TABLE1_REFERENCE: [(f64, [f64; 6]); 6] = [
    (100.0, [0.001, 0.371, 0.169, 0.0007, 0.37, 0.113]),
    (500.0, [0.005, 0.373, 0.845, 0.003, 0.372, 0.563]),
    (2000.0, [0.02, 0.3824, 3.355, 0.013, 0.378, 2.237]),
    (5000.0, [0.049, 0.401, 8.264, 0.032, 0.39, 5.509]),
    (10000.0, [0.095, 0.4297, 16.127, 0.063, 0.4098, 10.751]),
    (20000.0, [0.18, 0.4837, 30.726, 0.12, 0.446, 20.484]),
];

/// Reference rows for the monotone-decrease table (gamma = 2): for each
/// transaction value, (xi, updated reputation, % change) at beta = 0 and
/// beta = 0.5.
pub const TABLE2_REFERENCE: [(f64, [f64; 6]); 6] = [
    (100.0, [0.002, 0.3687, -0.339, 0.0013, 0.3692, -0.226]),
    (500.0, [0.01, 0.3637, -1.69, 0.006, 0.3658, -1.127]),
    (2000.0, [0.039, 0.3452, -6.71, 0.026, 0.3534, -4.473]),
    (5000.0, [0.097, 0.3088, -16.53, 0.064, 0.3292, -11.02]),
    (10000.0, [0.189, 0.2507, -32.25, 0.126, 0.2904, -21.5]),
    (20000.0, [0.361, 0.1426, -61.45, 0.24, 0.2184, -40.97]),
];

/// One stuffing-experiment row: prior overall reputation, prior transaction
/// count, transaction value, stuffed shared rating, then the reference
/// individual update, overall value, and effect percentage. `checked` is
/// false for the one row whose reference overall value is inconsistent with
/// its own transaction count (kept for display and ordering only).
#[derive(Debug, Clone, Copy)]
pub struct Table6Row {
    pub prior: f64,
    pub transactions: u32,
    pub x: f64,
    pub stuffed: f64,
    pub ref_individual: f64,
    pub ref_overall: f64,
    pub ref_effect: f64,
    pub checked: bool,
}

pub const TABLE6_REFERENCE: [Table6Row; 5] = [
    Table6Row { prior: 0.47, transactions: 20, x: 12000.0, stuffed: 0.94, ref_individual: 0.528, ref_overall: 0.858, ref_effect: 62.29, checked: true },
    Table6Row { prior: 0.44, transactions: 50, x: 1500.0, stuffed: 0.93, ref_individual: 0.448, ref_overall: 0.689, ref_effect: 53.83, checked: true },
    Table6Row { prior: 0.48, transactions: 75, x: 5300.0, stuffed: 0.95, ref_individual: 0.505, ref_overall: 0.616, ref_effect: 22.01, checked: true },
    Table6Row { prior: 0.51, transactions: 95, x: 3000.0, stuffed: 0.94, ref_individual: 0.523, ref_overall: 0.565, ref_effect: 3.98, checked: false },
    Table6Row { prior: 0.46, transactions: 100, x: 2700.0, stuffed: 0.95, ref_individual: 0.473, ref_overall: 0.473, ref_effect: 0.0, checked: true },
];

/// One recomputed cell next to its reference.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub checked: bool,
}

impl Cell {
    fn new(computed: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            computed,
            reference,
            tolerance,
            checked: true,
        }
    }

    fn unchecked(computed: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            computed,
            reference,
            tolerance,
            checked: false,
        }
    }

    pub fn delta(&self) -> f64 {
        self.computed - self.reference
    }

    pub fn within_tolerance(&self) -> bool {
        !self.checked || self.delta().abs() <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct ComputedTable {
    pub kind: TableKind,
    pub header: Vec<&'static str>,
    /// Row label (the x value or transaction count) plus its cells.
    pub rows: Vec<(String, Vec<Cell>)>,
}

impl ComputedTable {
    pub fn all_within_tolerance(&self) -> bool {
        self.rows
            .iter()
            .all(|(_, cells)| cells.iter().all(Cell::within_tolerance))
    }
}

fn factor_rows(kind: TableKind) -> ComputedTable {
    let increase = kind == TableKind::Table1;
    let reference: &[(f64, [f64; 6])] = if increase {
        &TABLE1_REFERENCE
    } else {
        &TABLE2_REFERENCE
    };
    let factor_name = if increase { "mu" } else { "xi" };
    let header = vec![
        "x",
        factor_name,
        "updated",
        "pct",
        "mu_b05",
        "updated_b05",
        "pct_b05",
    ];
    let rows = X_GRID
        .iter()
        .zip(reference)
        .map(|(&x, (ref_x, refs))| {
            debug_assert_eq!(x, *ref_x);
            let mut cells = Vec::new();
            for (i, beta) in [0.0, 0.5].into_iter().enumerate() {
                let e = eta(x, LAMBDA, E_BASE).expect("grid values are non-negative");
                let factor = if increase {
                    mu(e, beta)
                } else {
                    xi(e, beta, GAMMA).expect("gamma fixed above 1")
                };
                let delta = if increase { 1.0 } else { -1.0 };
                let updated =
                    update_individual(PRIOR, delta, x, beta, GAMMA, LAMBDA, E_BASE).unwrap();
                let pct = 100.0 * (updated - PRIOR) / PRIOR;
                cells.push(Cell::new(factor, refs[3 * i], REPUTATION_TOL));
                cells.push(Cell::new(updated, refs[3 * i + 1], REPUTATION_TOL));
                cells.push(Cell::new(pct, refs[3 * i + 2], PERCENT_TOL));
            }
            (format!("{x}"), cells)
        })
        .collect();
    ComputedTable { kind, header, rows }
}

fn stuffing_rows() -> ComputedTable {
    let policy = BuyerPolicy::<f64> {
        lambda: LAMBDA,
        gamma: GAMMA,
        ..BuyerPolicy::default()
    };
    let rows = TABLE6_REFERENCE
        .iter()
        .map(|row| {
            let rec = ReputationRecord::seeded(row.prior, row.transactions, &policy)
                .expect("reference priors are in range");
            let r = update_individual(
                row.prior,
                1.0,
                row.x,
                rec.beta(),
                GAMMA,
                LAMBDA,
                E_BASE,
            )
            .unwrap();
            let overall = combine_overall(r, Some(row.stuffed), rec.alpha());
            let effect = bs_effect_metric(r, overall).unwrap_or(0.0);
            let mk = if row.checked { Cell::new } else { Cell::unchecked };
            let cells = vec![
                Cell::new(r, row.ref_individual, REPUTATION_TOL),
                mk(overall, row.ref_overall, REPUTATION_TOL),
                mk(effect, row.ref_effect, PERCENT_TOL),
            ];
            (format!("{}", row.transactions), cells)
        })
        .collect();
    ComputedTable {
        kind: TableKind::Table6,
        header: vec!["transactions", "individual", "overall", "effect_pct"],
        rows,
    }
}

/// Recomputes a table from the engine.
pub fn compute_table(kind: TableKind) -> ComputedTable {
    match kind {
        TableKind::Table1 | TableKind::Table2 => factor_rows(kind),
        TableKind::Table6 => stuffing_rows(),
    }
}

/// Human-readable rendering: computed values, references, deltas.
pub fn render_table(table: &ComputedTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", table.kind.name());
    let _ = writeln!(
        s,
        "{:<14}{}",
        table.header[0],
        table.header[1..]
            .iter()
            .map(|h| format!("{h:>28}"))
            .collect::<String>()
    );
    for (label, cells) in &table.rows {
        let mut line = format!("{label:<14}");
        for cell in cells {
            let marker = if !cell.checked {
                " (excl.)"
            } else if cell.within_tolerance() {
                ""
            } else {
                " (!)"
            };
            let _ = write!(
                line,
                "{:>28}",
                format!(
                    "{:.4} [{} d={:+.4}{marker}]",
                    cell.computed, cell.reference, cell.delta()
                )
            );
        }
        let _ = writeln!(s, "{line}");
    }
    let _ = writeln!(
        s,
        "tolerances: {REPUTATION_TOL} absolute on reputation cells, {PERCENT_TOL} points on percentages; (excl.) rows are display-only"
    );
    s
}

/// CSV rendering: one row per cell group, full precision.
pub fn render_table_csv(table: &ComputedTable) -> String {
    let mut s = String::from("row");
    for h in &table.header[1..] {
        let _ = write!(s, ",{h},{h}_reference,{h}_delta");
    }
    s.push('\n');
    for (label, cells) in &table.rows {
        let _ = write!(s, "{label}");
        for cell in cells {
            let _ = write!(s, ",{},{},{}", cell.computed, cell.reference, cell.delta());
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_three_tables_reproduce_within_tolerance() {
        for kind in [TableKind::Table1, TableKind::Table2, TableKind::Table6] {
            let table = compute_table(kind);
            assert!(
                table.all_within_tolerance(),
                "{} drifted:\n{}",
                kind.name(),
                render_table(&table)
            );
        }
    }

    #[test]
    fn table1_spot_values() {
        let t = compute_table(TableKind::Table1);
        // x = 5000, beta = 0: updated reputation 0.401.
        let cells = &t.rows[3].1;
        assert!((cells[1].computed - 0.401).abs() < 5e-4);
    }

    #[test]
    fn table2_spot_values() {
        let t = compute_table(TableKind::Table2);
        // x = 10000, beta = 0.5: updated reputation 0.2904.
        let cells = &t.rows[4].1;
        assert!((cells[4].computed - 0.2904).abs() < 5e-4);
        // x = 20000, beta = 0 pins four digits.
        let cells = &t.rows[5].1;
        assert!((cells[1].computed - 0.1426).abs() < 5e-4);
    }

    #[test]
    fn table6_effect_fades_to_zero() {
        let t = compute_table(TableKind::Table6);
        let effects: Vec<f64> = t.rows.iter().map(|(_, c)| c[2].computed).collect();
        assert!(effects.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(*effects.last().unwrap(), 0.0);
        // The excluded row is display-only and never fails the check.
        assert!(t.all_within_tolerance());
        assert!(!t.rows[3].1[1].checked);
        assert!((t.rows[3].1[1].delta().abs() - 0.021).abs() < 5e-3);
    }
}
