//! Plain-text run configuration: one `key = value` pair per line, `#` starts
//! a comment.  Unknown keys and malformed lines are rejected, and unknown
//! suite names are rejected before any computation starts.

use crate::exactmath::{int, rat, Scalar};
use crate::VoalabError;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

/// Output format for the `run` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Full JSON document: canonical body plus the timing side section.
    Json,
    /// CSV of the dimension tables only.
    Csv,
}

impl FromStr for ReportFormat {
    type Err = VoalabError;

    fn from_str(s: &str) -> Result<Self, VoalabError> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(VoalabError::Config(format!(
                "format must be json or csv, got {other:?}"
            ))),
        }
    }
}

/// Effective configuration of a `run` invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Rescaling exponent of the rank-one lattice.
    pub p: u32,
    /// Second exponent for the two-parameter family; `None` selects the
    /// one-parameter context.
    pub pprime: Option<u32>,
    /// Suites to run; executed and reported in canonical catalog order
    /// regardless of the order given here.
    pub suites: Vec<String>,
    /// Weight cutoff for basis sweeps.
    pub max_weight: Scalar,
    /// Pair-degree budget for truncated quotient spans.
    pub generator_budget: u32,
    /// Seed for the sampled (m, n) pairs outside the fixed windows.
    pub seed: u64,
    /// Report destination; stdout when absent.
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 2,
            pprime: None,
            suites: crate::suites::SUITE_ORDER.iter().map(|s| s.to_string()).collect(),
            max_weight: int(6),
            generator_budget: 12,
            seed: 7,
            output: None,
            format: ReportFormat::Json,
        }
    }
}

impl RunConfig {
    /// The key-sorted echo embedded in the canonical report body.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        map.insert("lattice".to_string(), "A1".to_string());
        map.insert("p".to_string(), self.p.to_string());
        if let Some(pp) = self.pprime {
            map.insert("pprime".to_string(), pp.to_string());
        }
        map.insert("suites".to_string(), self.suites.join(","));
        map.insert("maxWeight".to_string(), self.max_weight.to_string());
        map.insert("generatorBudget".to_string(), self.generator_budget.to_string());
        map.insert("seed".to_string(), self.seed.to_string());
        map.insert(
            "format".to_string(),
            match self.format {
                ReportFormat::Json => "json".to_string(),
                ReportFormat::Csv => "csv".to_string(),
            },
        );
        map
    }
}

/// Parse an exact rational written as `n` or `n/d` (optionally signed).
pub fn parse_scalar(text: &str) -> Result<Scalar, VoalabError> {
    let bad = || VoalabError::Config(format!("not a rational: {text:?}"));
    let text = text.trim();
    match text.split_once('/') {
        None => text.parse::<i64>().map(int).map_err(|_| bad()),
        Some((n, d)) => {
            let n = n.trim().parse::<i64>().map_err(|_| bad())?;
            let d = d.trim().parse::<i64>().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(rat(n, d))
        }
    }
}

fn parse_key<T: FromStr>(key: &str, value: &str) -> Result<T, VoalabError> {
    value
        .parse::<T>()
        .map_err(|_| VoalabError::Config(format!("bad value for {key}: {value:?}")))
}

/// Parse the plain `key = value` configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, VoalabError> {
    let mut cfg = RunConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            VoalabError::Config(format!("line {}: expected key = value, got {raw:?}", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "lattice" => {
                if value != "A1" {
                    return Err(VoalabError::Config(format!(
                        "only the A1 lattice is supported, got {value:?}"
                    )));
                }
            }
            "p" => cfg.p = parse_key(key, value)?,
            "pprime" => cfg.pprime = Some(parse_key(key, value)?),
            "suites" => {
                cfg.suites = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if cfg.suites.is_empty() {
                    return Err(VoalabError::Config("suites list is empty".to_string()));
                }
            }
            "maxWeight" | "max_weight" => cfg.max_weight = parse_scalar(value)?,
            "generatorBudget" | "generator_budget" => cfg.generator_budget = parse_key(key, value)?,
            "seed" => cfg.seed = parse_key(key, value)?,
            "output" => cfg.output = Some(PathBuf::from(value)),
            "format" => cfg.format = value.parse()?,
            other => {
                return Err(VoalabError::Config(format!("unknown key: {other:?}")));
            }
        }
    }
    if cfg.p < 2 {
        return Err(VoalabError::Config("p must be at least 2".to_string()));
    }
    if let Some(pp) = cfg.pprime {
        if pp < 2 || pp >= cfg.p || num_integer::gcd(pp, cfg.p) != 1 {
            return Err(VoalabError::Config(
                "pprime must satisfy 2 <= pprime < p with gcd(p, pprime) = 1".to_string(),
            ));
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let cfg = parse_config(
            "# demo\nlattice = A1\np = 3\npprime = 2\nsuites = virasoro, wpp2-generators\nmaxWeight = 15/2\ngeneratorBudget = 10\nseed = 42\nformat = csv\n",
        )
        .unwrap();
        assert_eq!(cfg.p, 3);
        assert_eq!(cfg.pprime, Some(2));
        assert_eq!(cfg.suites, vec!["virasoro", "wpp2-generators"]);
        assert_eq!(cfg.max_weight, rat(15, 2));
        assert_eq!(cfg.generator_budget, 10);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.format, ReportFormat::Csv);
    }

    #[test]
    fn defaults_cover_every_suite() {
        let cfg = parse_config("p = 2\n").unwrap();
        assert_eq!(cfg.suites.len(), crate::suites::SUITE_ORDER.len());
        assert_eq!(cfg.max_weight, int(6));
        assert_eq!(cfg.format, ReportFormat::Json);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_config("p 2"), Err(VoalabError::Config(_))));
        assert!(matches!(parse_config("mystery = 1"), Err(VoalabError::Config(_))));
        assert!(matches!(parse_config("p = nope"), Err(VoalabError::Config(_))));
        assert!(matches!(parse_config("lattice = E8"), Err(VoalabError::Config(_))));
        assert!(matches!(parse_config("p = 1"), Err(VoalabError::Config(_))));
        assert!(matches!(
            parse_config("p = 4\npprime = 2"),
            Err(VoalabError::Config(_))
        ));
        assert!(matches!(parse_config("suites = "), Err(VoalabError::Config(_))));
        assert!(matches!(
            parse_config("maxWeight = 1/0"),
            Err(VoalabError::Config(_))
        ));
        assert!(matches!(parse_config("format = yaml"), Err(VoalabError::Config(_))));
    }

    #[test]
    fn scalar_parser_accepts_signed_rationals() {
        assert_eq!(parse_scalar("-1/8").unwrap(), rat(-1, 8));
        assert_eq!(parse_scalar("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_scalar("6").unwrap(), int(6));
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn echo_is_deterministic_and_complete() {
        let cfg = parse_config("p = 2\nseed = 9\n").unwrap();
        let echo = cfg.echo();
        assert_eq!(echo["p"], "2");
        assert_eq!(echo["seed"], "9");
        assert_eq!(echo["maxWeight"], "6");
        assert!(echo["suites"].contains("tv1-com2"));
    }
}
