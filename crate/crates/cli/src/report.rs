//! CSV and text reports for a finished run.
//!
//! CSV output is locale-independent: fixed column order, `.` decimal point,
//! full float precision (the shortest representation that round-trips).
//! The human-readable summary rounds to four decimal places.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use repute_core::reputation::SellerCategory;
use repute_core::sim::{SimEvent, SimOutput};

pub const TRANSCRIPT_COLUMNS: &str =
    "step,buyer,seller,good,x,f,v,delta,r_next,shared,alpha,beta,or_next,category";
pub const SERIES_COLUMNS: &str = "step,buyer,seller,or,category";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders the transaction transcript as CSV.
pub fn render_transcript_csv(out: &SimOutput) -> String {
    let names = &out.names;
    let mut s = String::from(TRANSCRIPT_COLUMNS);
    s.push('\n');
    for t in &out.transcript {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            t.step,
            names.buyers[t.buyer.index()],
            names.sellers[t.seller.index()],
            names.goods[t.good.index()],
            t.x,
            t.expected,
            t.actual,
            t.delta,
            t.r_next,
            opt(t.shared),
            t.alpha,
            t.beta,
            t.or_next,
            t.category_after,
        );
    }
    s
}

/// Renders the per-step reputation series as CSV.
pub fn render_series_csv(out: &SimOutput) -> String {
    let names = &out.names;
    let mut s = String::from(SERIES_COLUMNS);
    s.push('\n');
    for r in &out.series {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.step,
            names.buyers[r.buyer.index()],
            names.sellers[r.seller.index()],
            r.overall,
            r.category,
        );
    }
    s
}

fn describe_event(out: &SimOutput, e: &SimEvent) -> String {
    let names = &out.names;
    match e {
        SimEvent::NoAdmissibleSeller { step, buyer, good } => format!(
            "step {step}: no admissible seller for buyer {} wanting {}",
            names.buyers[buyer.index()],
            names.goods[good.index()]
        ),
        SimEvent::SellerExited { step, seller } => format!(
            "step {step}: seller {} exited",
            names.sellers[seller.index()]
        ),
        SimEvent::SellerReentered { step, old, new } => format!(
            "step {step}: seller {} re-entered as {}",
            names.sellers[old.index()],
            names.sellers[new.index()]
        ),
        SimEvent::MaxCheatArmed { step, seller } => format!(
            "step {step}: seller {} armed a maximal cheat before exit",
            names.sellers[seller.index()]
        ),
    }
}

/// Renders the human-readable run summary.
pub fn render_summary(out: &SimOutput, seed: u64) -> String {
    let names = &out.names;
    let mut s = String::new();
    let _ = writeln!(s, "run summary (seed {seed})");
    let _ = writeln!(s, "================================");
    let _ = writeln!(s, "transactions: {}", out.transcript.len());
    let _ = writeln!(s, "skipped demands: {}", out.metrics.skipped_demands);
    let _ = writeln!(
        s,
        "orders to honest sellers: {}, to dishonest sellers: {}",
        out.metrics.honest_orders, out.metrics.dishonest_orders
    );
    let _ = writeln!(s, "multiplication repairs: {}", out.metrics.repair_events);
    let _ = writeln!(s);

    let _ = writeln!(s, "orders per seller:");
    for (seller, count) in &out.metrics.orders_per_seller {
        let _ = writeln!(s, "  {}: {count}", names.sellers[seller.index()]);
    }
    let _ = writeln!(s);

    let _ = writeln!(s, "final reputation and category lists:");
    let final_step = out.series.iter().map(|r| r.step).max();
    for (b, buyer_name) in names.buyers.iter().enumerate() {
        let last_step: Vec<_> = out
            .series
            .iter()
            .filter(|r| r.buyer.index() == b && Some(r.step) == final_step)
            .collect();
        let _ = writeln!(s, "  buyer {buyer_name}:");
        if last_step.is_empty() {
            let _ = writeln!(s, "    (no known sellers)");
            continue;
        }
        for r in &last_step {
            let _ = writeln!(
                s,
                "    or({}) = {:.4}  [{}]",
                names.sellers[r.seller.index()],
                r.overall,
                r.category
            );
        }
        for cat in [
            SellerCategory::Reputed,
            SellerCategory::NonReputed,
            SellerCategory::DisReputed,
            SellerCategory::New,
        ] {
            let members: Vec<&str> = last_step
                .iter()
                .filter(|r| r.category == cat)
                .map(|r| names.sellers[r.seller.index()].as_str())
                .collect();
            let _ = writeln!(s, "    {}: {{{}}}", cat, members.join(", "));
        }
    }
    let _ = writeln!(s);

    if !out.metrics.bs_effects.is_empty() {
        let _ = writeln!(s, "shared-rating manipulation observed:");
        for sample in &out.metrics.bs_effects {
            let effect = sample
                .effect
                .map(|e| format!("{e:.4}%"))
                .unwrap_or_else(|| "n/a".into());
            let _ = writeln!(
                s,
                "  step {}: buyer {} about seller {}: individual {:.4} -> overall {:.4} (effect {effect})",
                sample.step,
                names.buyers[sample.buyer.index()],
                names.sellers[sample.seller.index()],
                sample.individual,
                sample.overall,
            );
        }
        let _ = writeln!(s);
    }

    if !out.events.is_empty() {
        let _ = writeln!(s, "events:");
        for e in &out.events {
            let _ = writeln!(s, "  {}", describe_event(out, e));
        }
    }
    s
}

/// Writes the three run artifacts into `dir`.
pub fn write_run_artifacts(dir: &Path, out: &SimOutput, seed: u64) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("transcript.csv"), render_transcript_csv(out))?;
    fs::write(dir.join("reputation_series.csv"), render_series_csv(out))?;
    fs::write(dir.join("summary.txt"), render_summary(out, seed))?;
    Ok(())
}
