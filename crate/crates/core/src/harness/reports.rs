//! Report records, the empirical-constant ledger, and seeded function
//! generators shared by sweeps and suites.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fourier::{FuncC, Side};
use crate::group::GroupSpec;

/// Default ratio budget for inequality reports.
pub const DEFAULT_BUDGET: f64 = 64.0;

/// Absolute slack allowed on the left side of a degenerate instance (zero
/// right side); anything above it fails the report.
pub const DEGENERATE_ATOL: f64 = 1e-6;

/// One inequality evaluation. `rhs_core` is the inequality's right side with
/// its absolute constant stripped; `ratio = lhs / rhs_core` unless the
/// instance is degenerate (vanishing right side), in which case the ratio is
/// reported as zero and the record passes only for a vanishing left side.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub instance: String,
    pub lhs: f64,
    pub rhs_core: f64,
    pub ratio: f64,
    pub variant: Option<String>,
    pub degenerate: bool,
    pub pass: bool,
    pub seed: u64,
}

impl InequalityReport {
    pub fn build(
        name: &str,
        instance: String,
        lhs: f64,
        rhs_core: f64,
        variant: Option<&str>,
        budget: f64,
        seed: u64,
    ) -> Self {
        let degenerate = rhs_core <= 0.0 || !rhs_core.is_finite() || rhs_core.is_nan();
        let (ratio, pass) = if degenerate {
            (0.0, lhs.abs() <= DEGENERATE_ATOL)
        } else {
            let r = lhs / rhs_core;
            (r, r <= budget)
        };
        Self {
            name: name.to_string(),
            instance,
            lhs,
            rhs_core,
            ratio,
            variant: variant.map(str::to_string),
            degenerate,
            pass,
            seed,
        }
    }

    pub fn to_jsonl(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn csv_header() -> &'static str {
        "name,instance,lhs,rhs_core,ratio,variant,degenerate,pass,seed"
    }

    pub fn to_csv_row(&self) -> String {
        let variant = self.variant.as_deref().unwrap_or("");
        [
            csv_field(&self.name),
            csv_field(&self.instance),
            format!("{}", self.lhs),
            format!("{}", self.rhs_core),
            format!("{}", self.ratio),
            csv_field(variant),
            format!("{}", self.degenerate),
            format!("{}", self.pass),
            format!("{}", self.seed),
        ]
        .join(",")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Serialize a report batch as JSON lines.
pub fn to_jsonl(reports: &[InequalityReport]) -> Result<String> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.to_jsonl()?);
        out.push('\n');
    }
    Ok(out)
}

/// Serialize a report batch as CSV with the same columns.
pub fn to_csv(reports: &[InequalityReport]) -> String {
    let mut out = String::from(InequalityReport::csv_header());
    out.push('\n');
    for r in reports {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

/// Persisted per-inequality maxima of observed ratios. Merging is a max
/// reduction, so repeated or partial runs only ever tighten the record.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConstantsLedger {
    pub max_ratio: BTreeMap<String, f64>,
}

impl ConstantsLedger {
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(Self::default());
        }
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn observe(&mut self, name: &str, ratio: f64) {
        let entry = self.max_ratio.entry(name.to_string()).or_insert(0.0);
        if ratio > *entry {
            *entry = ratio;
        }
    }

    pub fn observe_all(&mut self, reports: &[InequalityReport]) {
        for r in reports {
            if !r.degenerate {
                self.observe(&r.name, r.ratio);
            }
        }
    }

    pub fn merge(&mut self, other: &ConstantsLedger) {
        for (k, &v) in &other.max_ratio {
            self.observe(k, v);
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Random complex function with entries uniform in the unit square.
pub fn random_complex_func(group: &GroupSpec, rng: &mut ChaCha8Rng) -> FuncC {
    let values = (0..group.order())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    FuncC::from_values(group.clone(), values, Side::Time).expect("length matches")
}

/// Random real-valued function.
pub fn random_real_func(group: &GroupSpec, rng: &mut ChaCha8Rng) -> FuncC {
    let values = (0..group.order())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    FuncC::from_values(group.clone(), values, Side::Time).expect("length matches")
}
