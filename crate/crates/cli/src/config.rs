//! Scenario configuration files.
//!
//! Configs are TOML with named sections: `goods`, `buyers`, `sellers`,
//! `schedule`, `attacks`, plus optional `scales`, `reputation` (seeded
//! reputation records) and `weights` (seeded weight histories). Agents and
//! goods are referenced by their string ids; internal dense ids follow
//! declaration order, which is also the argmax tie-break order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use repute_core::ids::{BuyerId, GoodId, SellerId};
use repute_core::reputation::BuyerPolicy;
use repute_core::scale::{
    Comparison, ImportanceScale, PerformanceScale, PerformanceTerm,
};
use repute_core::sim::{
    AttackScript, BuyerSpec, Demand, GoodSpec, HonestyProfile, MarketSetup, Offer,
    SeededReputation, SeededWeights, SellerSpec, StepWindow,
};
use repute_core::weights::FuzzyPairwiseMatrix;
use repute_core::Tfn;

/// A parsed and fully validated scenario plus its default seed.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub setup: MarketSetup,
    pub seed: u64,
}

#[derive(Debug)]
pub enum ConfigError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Parse {
        path: PathBuf,
        message: String,
    },
    Invalid {
        path: PathBuf,
        issues: Vec<String>,
    },
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Io { path, source } => write!(f, "cannot read {}: {source}", path.display()),
            Self::Parse { path, message } => {
                write!(f, "parse error in {}: {message}", path.display())
            }
            Self::Invalid { path, issues } => {
                writeln!(f, "{} is invalid:", path.display())?;
                for issue in issues {
                    writeln!(f, "  - {issue}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    steps: u32,
    seed: Option<u64>,
    scales: Option<RawScales>,
    #[serde(default)]
    goods: Vec<RawGood>,
    #[serde(default)]
    buyers: Vec<RawBuyer>,
    #[serde(default)]
    sellers: Vec<RawSeller>,
    #[serde(default)]
    schedule: Vec<RawDemand>,
    #[serde(default)]
    attacks: Vec<RawAttack>,
    #[serde(default)]
    reputation: Vec<RawSeededReputation>,
    #[serde(default)]
    weights: Vec<RawSeededWeights>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScales {
    importance: Option<BTreeMap<String, [f64; 4]>>,
    performance: Option<BTreeMap<String, [f64; 4]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGood {
    id: String,
    attributes: Vec<String>,
    /// Strict upper triangle, one row per attribute except the last;
    /// entries are importance terms, optionally reciprocal (`1/H`).
    importance: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBuyer {
    id: String,
    reputation_threshold: Option<f64>,
    disreputation_threshold: Option<f64>,
    gamma: Option<f64>,
    lambda: Option<f64>,
    alpha_rate: Option<f64>,
    beta_rate: Option<f64>,
    delta_rate: Option<f64>,
    history_window: Option<usize>,
    rho_initial: Option<f64>,
    rho_decay: Option<f64>,
    rho_min: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeller {
    id: String,
    #[serde(default)]
    offers: Vec<RawOffer>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOffer {
    good: String,
    ratings: Vec<String>,
    price: f64,
    #[serde(default)]
    honesty: RawHonesty,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawHonesty {
    Named(String),
    Degrade { degrade: i32 },
    ValueConditional { value_conditional: RawVim },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVim {
    threshold: f64,
    #[serde(default)]
    below: i32,
    above: i32,
}

impl Default for RawHonesty {
    fn default() -> Self {
        Self::Named("honest".into())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDemand {
    step: Option<u32>,
    from_step: Option<u32>,
    to_step: Option<u32>,
    buyer: Option<String>,
    buyers: Option<Vec<String>>,
    good: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttack {
    kind: String,
    seller: Option<String>,
    colluders: Option<Vec<String>>,
    buyer: Option<String>,
    level: Option<f64>,
    from_step: Option<u32>,
    to_step: Option<u32>,
    min_transactions: Option<u32>,
    threshold: Option<f64>,
    below: Option<i32>,
    above: Option<i32>,
    new_id: Option<String>,
    at_step: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeededReputation {
    buyer: String,
    seller: String,
    overall: f64,
    transactions: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeededWeights {
    buyer: String,
    good: String,
    delta: f64,
    history: Vec<Vec<[f64; 4]>>,
}

struct NameIndex {
    map: BTreeMap<String, u32>,
    kind: &'static str,
}

impl NameIndex {
    fn build(kind: &'static str, names: impl Iterator<Item = String>, issues: &mut Vec<String>) -> Self {
        let mut map = BTreeMap::new();
        for (i, name) in names.enumerate() {
            if map.insert(name.clone(), i as u32).is_some() {
                issues.push(format!("{kind} `{name}` is declared more than once"));
            }
        }
        Self { map, kind }
    }

    fn resolve(&self, name: &str, at: &str, issues: &mut Vec<String>) -> Option<u32> {
        let found = self.map.get(name).copied();
        if found.is_none() {
            issues.push(format!("{at}: unknown {} `{name}`", self.kind));
        }
        found
    }
}

fn scale_quadruples(
    section: &BTreeMap<String, [f64; 4]>,
    terms: [&str; 5],
    section_name: &str,
    issues: &mut Vec<String>,
) -> Option<[Tfn; 5]> {
    let mut extra: Vec<&String> = section
        .keys()
        .filter(|k| !terms.contains(&k.as_str()))
        .collect();
    extra.sort();
    for k in extra {
        issues.push(format!("scales.{section_name}: unknown term `{k}`"));
    }
    let mut out = Vec::with_capacity(5);
    for t in terms {
        match section.get(t) {
            None => {
                issues.push(format!("scales.{section_name}: missing term `{t}`"));
                return None;
            }
            Some(q) => match Tfn::new(q[0], q[1], q[2], q[3]) {
                Ok(v) => out.push(v),
                Err(e) => {
                    issues.push(format!("scales.{section_name}.{t}: {e}"));
                    return None;
                }
            },
        }
    }
    Some(out.try_into().unwrap())
}

fn parse_honesty(raw: &RawHonesty, at: &str, issues: &mut Vec<String>) -> HonestyProfile {
    match raw {
        RawHonesty::Named(s) if s == "honest" => HonestyProfile::Honest,
        RawHonesty::Named(s) => {
            issues.push(format!(
                "{at}: honesty must be \"honest\", {{ degrade = n }} or {{ value_conditional = ... }}, got `{s}`"
            ));
            HonestyProfile::Honest
        }
        RawHonesty::Degrade { degrade } => HonestyProfile::DegradeByLevels(*degrade),
        RawHonesty::ValueConditional { value_conditional } => HonestyProfile::ValueConditional {
            threshold: value_conditional.threshold,
            below_levels: value_conditional.below,
            above_levels: value_conditional.above,
        },
    }
}

fn parse_policy(raw: &RawBuyer) -> BuyerPolicy<f64> {
    let d = BuyerPolicy::<f64>::default();
    BuyerPolicy {
        reputation_threshold: raw.reputation_threshold.unwrap_or(d.reputation_threshold),
        disreputation_threshold: raw
            .disreputation_threshold
            .unwrap_or(d.disreputation_threshold),
        gamma: raw.gamma.unwrap_or(d.gamma),
        lambda: raw.lambda.unwrap_or(d.lambda),
        e_base: d.e_base,
        alpha_rate: raw.alpha_rate.unwrap_or(d.alpha_rate),
        beta_rate: raw.beta_rate.unwrap_or(d.beta_rate),
        delta_rate: raw.delta_rate.unwrap_or(d.delta_rate),
        history_window: raw.history_window.unwrap_or(d.history_window),
        rho_initial: raw.rho_initial.unwrap_or(d.rho_initial),
        rho_decay: raw.rho_decay.unwrap_or(d.rho_decay),
        rho_min: raw.rho_min.unwrap_or(d.rho_min),
    }
}

fn parse_importance_matrix(
    good: &RawGood,
    index: usize,
    scale: &ImportanceScale<f64>,
    issues: &mut Vec<String>,
) -> Option<FuzzyPairwiseMatrix<f64>> {
    let n = good.attributes.len();
    if n == 0 {
        issues.push(format!("goods[{index}] ({}): needs at least one attribute", good.id));
        return None;
    }
    let expected_rows = n - 1;
    if good.importance.len() != expected_rows {
        issues.push(format!(
            "goods[{index}] ({}): importance needs {expected_rows} upper-triangle rows, got {}",
            good.id,
            good.importance.len()
        ));
        return None;
    }
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for (r, row) in good.importance.iter().enumerate() {
        let expected = n - 1 - r;
        if row.len() != expected {
            issues.push(format!(
                "goods[{index}] ({}): importance row {r} needs {expected} entries, got {}",
                good.id,
                row.len()
            ));
            return None;
        }
        for (c, cell) in row.iter().enumerate() {
            match Comparison::from_str(cell) {
                Ok(cmp) => upper.push(cmp),
                Err(e) => {
                    issues.push(format!(
                        "goods[{index}] ({}): importance[{r}][{c}]: {e}",
                        good.id
                    ));
                    return None;
                }
            }
        }
    }
    match FuzzyPairwiseMatrix::from_comparisons(scale, n, &upper) {
        Ok(m) => Some(m),
        Err(e) => {
            issues.push(format!("goods[{index}] ({}): {e}", good.id));
            None
        }
    }
}

fn parse_attack(
    raw: &RawAttack,
    index: usize,
    buyers: &NameIndex,
    sellers: &NameIndex,
    issues: &mut Vec<String>,
) -> Option<AttackScript> {
    let at = format!("attacks[{index}]");
    let need = |field: &str, issues: &mut Vec<String>| {
        issues.push(format!("{at} ({}): missing field `{field}`", raw.kind));
    };
    let seller = |issues: &mut Vec<String>| -> Option<SellerId> {
        match &raw.seller {
            Some(s) => sellers.resolve(s, &at, issues).map(SellerId),
            None => {
                need("seller", issues);
                None
            }
        }
    };
    let window = StepWindow {
        from_step: raw.from_step.unwrap_or(0),
        to_step: raw.to_step.unwrap_or(u32::MAX),
    };
    match raw.kind.as_str() {
        "BS" | "BM" => {
            let target = seller(issues)?;
            let Some(colluder_names) = &raw.colluders else {
                need("colluders", issues);
                return None;
            };
            let colluders: Vec<BuyerId> = colluder_names
                .iter()
                .filter_map(|n| buyers.resolve(n, &at, issues).map(BuyerId))
                .collect();
            let Some(level) = raw.level else {
                need("level", issues);
                return None;
            };
            Some(if raw.kind == "BS" {
                AttackScript::BallotStuffing {
                    seller: target,
                    colluders,
                    level,
                    window,
                    min_transactions: raw.min_transactions,
                }
            } else {
                AttackScript::Badmouthing {
                    seller: target,
                    colluders,
                    level,
                    window,
                    min_transactions: raw.min_transactions,
                }
            })
        }
        "VIM" => {
            let target = seller(issues)?;
            let Some(threshold) = raw.threshold else {
                need("threshold", issues);
                return None;
            };
            let Some(above) = raw.above else {
                need("above", issues);
                return None;
            };
            Some(AttackScript::ValueImbalance {
                seller: target,
                threshold,
                below_levels: raw.below.unwrap_or(0),
                above_levels: above,
                from_step: raw.from_step.unwrap_or(0),
            })
        }
        "REN" => {
            let target = seller(issues)?;
            let Some(new_id) = &raw.new_id else {
                need("new_id", issues);
                return None;
            };
            Some(AttackScript::ReEntry {
                seller: target,
                new_name: new_id.clone(),
                at_step: raw.at_step.unwrap_or(0),
            })
        }
        "SE" => Some(AttackScript::SuddenExit {
            seller: seller(issues)?,
            at_step: raw.at_step.unwrap_or(0),
        }),
        "REC_RET" => {
            let target = seller(issues)?;
            let Some(buyer_name) = &raw.buyer else {
                need("buyer", issues);
                return None;
            };
            let buyer = BuyerId(buyers.resolve(buyer_name, &at, issues)?);
            let Some(level) = raw.level else {
                need("level", issues);
                return None;
            };
            Some(AttackScript::ReciprocalRating {
                buyer,
                seller: target,
                level,
                window,
            })
        }
        other => {
            issues.push(format!(
                "{at}: unknown attack kind `{other}` (expected BS, BM, VIM, REN, SE or REC_RET)"
            ));
            None
        }
    }
}

/// Loads, parses and validates a scenario config; on failure reports the
/// full list of problems.
pub fn load_config(path: &Path) -> Result<LoadedScenario, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: RawConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;

    let mut issues = Vec::new();

    let importance_scale = match raw.scales.as_ref().and_then(|s| s.importance.as_ref()) {
        None => Some(ImportanceScale::default()),
        Some(section) => scale_quadruples(section, ["E", "M", "H", "VH", "EI"], "importance", &mut issues)
            .and_then(|q| match ImportanceScale::new(q) {
                Ok(s) => Some(s),
                Err(e) => {
                    issues.push(format!("scales.importance: {e}"));
                    None
                }
            }),
    };
    let performance_scale = match raw.scales.as_ref().and_then(|s| s.performance.as_ref()) {
        None => Some(PerformanceScale::default()),
        Some(section) => scale_quadruples(section, ["P", "A", "H", "VH", "EX"], "performance", &mut issues)
            .and_then(|q| match PerformanceScale::new(q) {
                Ok(s) => Some(s),
                Err(e) => {
                    issues.push(format!("scales.performance: {e}"));
                    None
                }
            }),
    };

    let buyer_names = NameIndex::build("buyer", raw.buyers.iter().map(|b| b.id.clone()), &mut issues);
    let seller_names =
        NameIndex::build("seller", raw.sellers.iter().map(|s| s.id.clone()), &mut issues);
    let good_names = NameIndex::build("good", raw.goods.iter().map(|g| g.id.clone()), &mut issues);

    let goods: Vec<GoodSpec> = match &importance_scale {
        None => Vec::new(),
        Some(scale) => raw
            .goods
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                parse_importance_matrix(g, i, scale, &mut issues).map(|importance| GoodSpec {
                    name: g.id.clone(),
                    attributes: g.attributes.clone(),
                    importance,
                })
            })
            .collect(),
    };

    let mut buyers: Vec<BuyerSpec> = raw
        .buyers
        .iter()
        .map(|b| BuyerSpec {
            name: b.id.clone(),
            policy: parse_policy(b),
            seeded_reputation: Vec::new(),
            seeded_weights: Vec::new(),
        })
        .collect();

    for (i, r) in raw.reputation.iter().enumerate() {
        let at = format!("reputation[{i}]");
        let buyer = buyer_names.resolve(&r.buyer, &at, &mut issues);
        let seller = seller_names.resolve(&r.seller, &at, &mut issues);
        if let (Some(b), Some(s)) = (buyer, seller) {
            buyers[b as usize].seeded_reputation.push(SeededReputation {
                seller: SellerId(s),
                overall: r.overall,
                transactions: r.transactions,
            });
        }
    }

    for (i, w) in raw.weights.iter().enumerate() {
        let at = format!("weights[{i}]");
        let buyer = buyer_names.resolve(&w.buyer, &at, &mut issues);
        let good = good_names.resolve(&w.good, &at, &mut issues);
        let mut history = Vec::new();
        let mut ok = true;
        for (vi, vector) in w.history.iter().enumerate() {
            let mut entries = Vec::new();
            for (qi, q) in vector.iter().enumerate() {
                match Tfn::new(q[0], q[1], q[2], q[3]) {
                    Ok(t) => entries.push(t),
                    Err(e) => {
                        issues.push(format!("{at}: history[{vi}][{qi}]: {e}"));
                        ok = false;
                    }
                }
            }
            history.push(entries);
        }
        if let (Some(b), Some(g), true) = (buyer, good, ok) {
            buyers[b as usize].seeded_weights.push(SeededWeights {
                good: GoodId(g),
                delta: w.delta,
                history,
            });
        }
    }

    let sellers: Vec<SellerSpec> = raw
        .sellers
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let offers = s
                .offers
                .iter()
                .enumerate()
                .filter_map(|(oi, o)| {
                    let at = format!("sellers[{i}] ({}).offers[{oi}]", s.id);
                    let good = good_names.resolve(&o.good, &at, &mut issues)?;
                    let mut ratings = Vec::new();
                    for (ri, r) in o.ratings.iter().enumerate() {
                        match PerformanceTerm::from_str(r) {
                            Ok(t) => ratings.push(t),
                            Err(e) => {
                                issues.push(format!("{at}: ratings[{ri}]: {e}"));
                                return None;
                            }
                        }
                    }
                    Some(Offer {
                        good: GoodId(good),
                        ratings,
                        price: o.price,
                        honesty: parse_honesty(&o.honesty, &at, &mut issues),
                    })
                })
                .collect();
            SellerSpec {
                name: s.id.clone(),
                offers,
            }
        })
        .collect();

    let mut schedule = Vec::new();
    for (i, d) in raw.schedule.iter().enumerate() {
        let at = format!("schedule[{i}]");
        let steps: Vec<u32> = match (d.step, d.from_step, d.to_step) {
            (Some(s), None, None) => vec![s],
            (None, Some(a), Some(b)) if a <= b => (a..=b).collect(),
            (None, Some(a), Some(b)) => {
                issues.push(format!("{at}: from_step {a} exceeds to_step {b}"));
                continue;
            }
            _ => {
                issues.push(format!(
                    "{at}: give either `step` or both `from_step` and `to_step`"
                ));
                continue;
            }
        };
        let buyer_list: Vec<String> = match (&d.buyer, &d.buyers) {
            (Some(b), None) => vec![b.clone()],
            (None, Some(list)) => list.clone(),
            _ => {
                issues.push(format!("{at}: give either `buyer` or `buyers`"));
                continue;
            }
        };
        let Some(good) = good_names.resolve(&d.good, &at, &mut issues) else {
            continue;
        };
        for name in &buyer_list {
            if let Some(b) = buyer_names.resolve(name, &at, &mut issues) {
                for step in &steps {
                    schedule.push(Demand {
                        step: *step,
                        buyer: BuyerId(b),
                        good: GoodId(good),
                    });
                }
            }
        }
    }

    let attacks: Vec<AttackScript> = raw
        .attacks
        .iter()
        .enumerate()
        .filter_map(|(i, a)| parse_attack(a, i, &buyer_names, &seller_names, &mut issues))
        .collect();

    let (Some(importance_scale), Some(performance_scale)) = (importance_scale, performance_scale)
    else {
        return Err(ConfigError::Invalid {
            path: path.to_path_buf(),
            issues,
        });
    };

    let setup = MarketSetup {
        importance_scale,
        performance_scale,
        goods,
        buyers,
        sellers,
        schedule,
        attacks,
        steps: raw.steps,
    };

    if let Err(semantic) = setup.validate() {
        issues.extend(semantic);
    }
    if !issues.is_empty() {
        return Err(ConfigError::Invalid {
            path: path.to_path_buf(),
            issues,
        });
    }
    Ok(LoadedScenario {
        setup,
        seed: raw.seed.unwrap_or(0),
    })
}
