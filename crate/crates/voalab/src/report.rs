//! Deterministic verification reports.
//!
//! A [`Report`] has a canonical body — schema version, tool version, config
//! echo, check records, solved constants, dimension tables — whose JSON
//! serialization is byte-identical across reruns with the same configuration.
//! Wall-clock timings live in a side section outside the canonical body so
//! they never perturb it.  CSV export covers the dimension tables only.

use serde::Serialize;
use std::collections::BTreeMap;

/// Version of the canonical report schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of a single named check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    /// The identity or property held exactly on the whole test set.
    Pass,
    /// A counterexample was found; it is recorded on the check.
    Fail,
    /// A truncated computation did not stabilize across its budgets, so no
    /// verdict is claimed.
    Unstable,
}

/// One verified (or refuted) statement, as it appears in the report.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRecord {
    /// `suite/check` identifier, unique within a report.
    pub name: String,
    /// The formula being checked, written in plain text.
    pub paper_anchor: String,
    pub status: CheckStatus,
    /// Human-readable summary: what was swept, how many states, what held.
    pub details: String,
    /// First counterexample, present exactly when `status` is `fail`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckRecord {
    pub fn pass(name: impl Into<String>, anchor: impl Into<String>, details: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: CheckStatus::Pass,
            details: details.into(),
            counterexample: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        anchor: impl Into<String>,
        details: impl Into<String>,
        counterexample: impl Into<String>,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: CheckStatus::Fail,
            details: details.into(),
            counterexample: Some(counterexample.into()),
        }
    }

    pub fn unstable(name: impl Into<String>, anchor: impl Into<String>, details: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: CheckStatus::Unstable,
            details: details.into(),
            counterexample: None,
        }
    }

    /// Pass when `ok`, otherwise fail with the given counterexample.
    pub fn verdict(
        name: impl Into<String>,
        anchor: impl Into<String>,
        details: impl Into<String>,
        ok: bool,
        counterexample: impl Into<String>,
    ) -> Self {
        if ok {
            CheckRecord::pass(name, anchor, details)
        } else {
            CheckRecord::fail(name, anchor, details, counterexample)
        }
    }
}

/// A per-weight dimension table, the only content exported as CSV.
#[derive(Debug, Clone, Serialize)]
pub struct DimTable {
    pub name: String,
    /// `(weight, dimension)` rows in ascending weight order; weights are
    /// rendered as exact rationals.
    pub rows: Vec<(String, usize)>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CanonicalBody<'a> {
    schema_version: u32,
    tool_version: &'a str,
    config: &'a BTreeMap<String, String>,
    checks: &'a [CheckRecord],
    solved_constants: &'a BTreeMap<String, String>,
    dimension_tables: &'a [DimTable],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FullDocument<'a> {
    canonical: CanonicalBody<'a>,
    /// Milliseconds per suite; excluded from the canonical body.
    timings_ms: &'a BTreeMap<String, u128>,
}

/// The result of running a set of suites.
#[derive(Debug, Clone)]
pub struct Report {
    /// Echo of the effective configuration, key-sorted.
    pub config: BTreeMap<String, String>,
    /// Check records in canonical suite order.
    pub checks: Vec<CheckRecord>,
    /// Exactly solved constants, as rational strings.
    pub solved_constants: BTreeMap<String, String>,
    pub dimension_tables: Vec<DimTable>,
    /// Wall-clock milliseconds per suite (outside the canonical body).
    pub timings_ms: BTreeMap<String, u128>,
}

impl Report {
    fn canonical_body(&self) -> CanonicalBody<'_> {
        CanonicalBody {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            config: &self.config,
            checks: &self.checks,
            solved_constants: &self.solved_constants,
            dimension_tables: &self.dimension_tables,
        }
    }

    /// The canonical body alone: byte-identical across reruns with the same
    /// configuration.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.canonical_body()).expect("report serializes")
    }

    /// The full document: canonical body plus the timing side section.
    pub fn full_json(&self) -> String {
        let doc = FullDocument {
            canonical: self.canonical_body(),
            timings_ms: &self.timings_ms,
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    /// CSV of the dimension tables only: `table,weight,dim` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,weight,dim\n");
        for table in &self.dimension_tables {
            for (w, d) in &table.rows {
                out.push_str(&format!("{},{},{}\n", table.name, w, d));
            }
        }
        out
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    /// Process exit code for this report: 0 iff every check passed.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut config = BTreeMap::new();
        config.insert("p".to_string(), "2".to_string());
        let mut constants = BTreeMap::new();
        constants.insert("nu".to_string(), "-81/16".to_string());
        let mut timings = BTreeMap::new();
        timings.insert("virasoro".to_string(), 12345u128);
        Report {
            config,
            checks: vec![
                CheckRecord::pass("virasoro/closure", "[L(m), L(n)] = (m-n) L(m+n) + c-term", "49 pairs"),
                CheckRecord::fail("demo/failing", "x = y", "1 state", "x=1 y=2"),
                CheckRecord::unstable("demo/unstable", "z in span", "budgets 8,10"),
            ],
            solved_constants: constants,
            dimension_tables: vec![DimTable {
                name: "demo-dims".to_string(),
                rows: vec![("0".to_string(), 1), ("3/2".to_string(), 2)],
            }],
            timings_ms: timings,
        }
    }

    #[test]
    fn canonical_body_is_stable_and_excludes_timings() {
        let a = sample();
        let mut b = sample();
        b.timings_ms.insert("virasoro".to_string(), 99999);
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert!(!a.canonical_json().contains("timings"));
        assert!(a.full_json().contains("timingsMs"));
    }

    #[test]
    fn status_serialization_and_exit_codes() {
        let r = sample();
        let json = r.canonical_json();
        assert!(json.contains("\"status\": \"pass\""));
        assert!(json.contains("\"status\": \"fail\""));
        assert!(json.contains("\"status\": \"unstable\""));
        assert!(json.contains("\"schemaVersion\": 1"));
        assert_eq!(r.exit_code(), 1);
        let all_pass = Report {
            checks: vec![CheckRecord::pass("a/b", "f", "d")],
            ..sample()
        };
        assert_eq!(all_pass.exit_code(), 0);
    }

    #[test]
    fn csv_covers_dimension_tables_only() {
        let csv = sample().to_csv();
        assert_eq!(csv, "table,weight,dim\ndemo-dims,0,1\ndemo-dims,3/2,2\n");
    }

    #[test]
    fn counterexample_is_omitted_from_passing_records() {
        let json = sample().canonical_json();
        // Exactly one record carries a counterexample field.
        assert_eq!(json.matches("counterexample").count(), 1);
    }
}
