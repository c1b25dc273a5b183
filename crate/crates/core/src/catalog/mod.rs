//! Regression catalog of hypersurfaces with known polar degree.
//!
//! The catalog ships inside the crate as a versioned JSON document. Each entry
//! carries an equation, a singularity profile, or both; [`run_suite`] pushes
//! every entry through the formula engine and, when an equation is present,
//! through the numerical oracle, and reports one row per entry.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{self, bezout, FormulaError, SingularityProfile};
use crate::oracle::{self, OracleError, TrackerConfig};
use crate::poly::{parse, PolyError, Polynomial};

const CATALOG_JSON: &str = include_str!("../../data/catalog.json");

/// Catalog format version this build understands.
pub const CATALOG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("catalog is not valid JSON: {0}")]
    Json(String),
    #[error("catalog version {found} is not supported (expected {CATALOG_VERSION})")]
    Version { found: u32 },
    #[error("entry {name:?}: {msg}")]
    Entry { name: String, msg: String },
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CubicSurfaces,
    Examples,
    Unions,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::CubicSurfaces, Suite::Examples, Suite::Unions];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CubicSurfaces => "cubic-surfaces",
            Suite::Examples => "examples",
            Suite::Unions => "unions",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| CatalogError::UnknownSuite(s.to_string()))
    }
}

/// `V = V1 ∪ V2` with the Euler characteristic of `V1 ∩ V2` minus a generic
/// hyperplane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnionData {
    pub parts: [String; 2],
    pub chi_affine_intersection: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub suites: Vec<Suite>,
    pub n: u32,
    pub d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<SingularityProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub union: Option<UnionData>,
    pub expected_pol: i64,
    pub provenance: String,
}

impl CatalogEntry {
    fn err(&self, msg: impl Into<String>) -> CatalogError {
        CatalogError::Entry { name: self.name.clone(), msg: msg.into() }
    }

    /// Number of homogeneous variables.
    pub fn nvars(&self) -> usize {
        self.n as usize + 1
    }

    pub fn polynomial(&self) -> Option<Result<Polynomial, PolyError>> {
        self.equation.as_deref().map(|e| parse(e, self.nvars()))
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.equation.is_none() && self.profile.is_none() {
            return Err(self.err("needs an equation or a profile"));
        }
        if self.suites.is_empty() {
            return Err(self.err("belongs to no suite"));
        }
        let top = bezout(self.n, self.d).map_err(|e| self.err(e.to_string()))?;
        if !(0..=top).contains(&self.expected_pol) {
            return Err(self.err(format!("expected_pol {} outside [0, {top}]", self.expected_pol)));
        }
        if let Some(f) = self.polynomial() {
            let f = f.map_err(|e| self.err(e.to_string()))?;
            if !f.is_homogeneous() || f.degree() != self.d {
                return Err(self.err(format!("equation is not homogeneous of degree {}", self.d)));
            }
        }
        if let Some(p) = &self.profile {
            if (p.n, p.d) != (self.n, self.d) {
                return Err(self.err("profile (n, d) differs from the entry"));
            }
            p.validate().map_err(|e| self.err(e.to_string()))?;
        }
        if let Some(u) = &self.union {
            let mut total = 0;
            for part in &u.parts {
                let g = parse(part, self.nvars()).map_err(|e| self.err(e.to_string()))?;
                if !g.is_homogeneous() || g.is_zero() {
                    return Err(self.err("union parts must be nonzero homogeneous polynomials"));
                }
                total += g.degree();
            }
            if total != self.d {
                return Err(self.err("union part degrees do not add up to d"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub version: u32,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let cat: Catalog = serde_json::from_str(text).map_err(|e| CatalogError::Json(e.to_string()))?;
        if cat.version != CATALOG_VERSION {
            return Err(CatalogError::Version { found: cat.version });
        }
        for (i, e) in cat.entries.iter().enumerate() {
            e.validate()?;
            if cat.entries[..i].iter().any(|o| o.name == e.name) {
                return Err(e.err("duplicate name"));
            }
        }
        Ok(cat)
    }

    /// The catalog bundled with the crate.
    pub fn builtin() -> Self {
        Catalog::from_json(CATALOG_JSON).expect("bundled catalog is valid")
    }

    pub fn suite(&self, suite: Suite) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.suites.contains(&suite))
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub pol_estimate: u64,
    pub per_trial_counts: Vec<u64>,
    pub consensus: bool,
}

/// Outcome of one catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryOutcome {
    pub name: String,
    pub expected: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    /// Union formula applied to the parts' polar degrees.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub union: Option<i64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub rows: Vec<EntryOutcome>,
    pub all_pass: bool,
}

/// Polar degree of one part of a union. A hyperplane has a constant gradient
/// map and polar degree 0.
fn part_pol(g: &Polynomial, cfg: &TrackerConfig) -> Result<i64, OracleError> {
    if g.degree() == 1 {
        return Ok(0);
    }
    let r = oracle::solve_count(g, cfg)?;
    if !r.consensus {
        return Err(OracleError::Degenerate("no consensus on a union part".into()));
    }
    Ok(r.pol_estimate as i64)
}

fn formula_pol(p: &SingularityProfile) -> Result<i64, FormulaError> {
    Ok(formula::pol_one_dim(p)?.pol)
}

/// Runs a single entry through every route it supports.
pub fn run_entry(entry: &CatalogEntry, cfg: &TrackerConfig) -> EntryOutcome {
    let mut problems = Vec::new();
    let expected = entry.expected_pol;

    let formula = entry.profile.as_ref().and_then(|p| match formula_pol(p) {
        Ok(v) => Some(v),
        Err(e) => {
            problems.push(format!("formula: {e}"));
            None
        }
    });
    if let Some(v) = formula.filter(|&v| v != expected) {
        problems.push(format!("formula gives {v}, expected {expected}"));
    }

    let oracle = match entry.polynomial() {
        None => None,
        Some(Err(e)) => {
            problems.push(format!("equation: {e}"));
            None
        }
        Some(Ok(f)) => match oracle::solve_count(&f, cfg) {
            Ok(r) => Some(OracleSummary {
                pol_estimate: r.pol_estimate,
                per_trial_counts: r.per_trial_counts,
                consensus: r.consensus,
            }),
            Err(e) => {
                problems.push(format!("oracle: {e}"));
                None
            }
        },
    };
    if let Some(o) = &oracle {
        if !o.consensus {
            problems.push(format!("oracle trials disagree: {:?}", o.per_trial_counts));
        }
        if o.pol_estimate as i64 != expected {
            problems.push(format!("oracle gives {}, expected {expected}", o.pol_estimate));
        }
    }

    let union = entry.union.as_ref().and_then(|u| {
        let pols: Result<Vec<i64>, String> = u
            .parts
            .iter()
            .map(|s| {
                let g = parse(s, entry.nvars()).map_err(|e| e.to_string())?;
                part_pol(&g, cfg).map_err(|e| e.to_string())
            })
            .collect();
        let value = pols.and_then(|p| {
            formula::union_pol(p[0], p[1], entry.n, u.chi_affine_intersection).map_err(|e| e.to_string())
        });
        match value {
            Ok(v) => Some(v),
            Err(e) => {
                problems.push(format!("union: {e}"));
                None
            }
        }
    });
    if let Some(v) = union.filter(|&v| v != expected) {
        problems.push(format!("union formula gives {v}, expected {expected}"));
    }

    EntryOutcome { name: entry.name.clone(), expected, formula, oracle, union, pass: problems.is_empty(), problems }
}

/// Runs every entry of `suite` in catalog order.
pub fn run_suite(catalog: &Catalog, suite: Suite, cfg: &TrackerConfig) -> SuiteReport {
    let rows: Vec<EntryOutcome> = catalog.suite(suite).map(|e| run_entry(e, cfg)).collect();
    SuiteReport { suite, seed: cfg.seed, all_pass: rows.iter().all(|r| r.pass), rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_loads() {
        let cat = Catalog::builtin();
        assert_eq!(cat.version, CATALOG_VERSION);
        assert_eq!(cat.suite(Suite::CubicSurfaces).count(), 29);
        assert_eq!(cat.suite(Suite::Unions).count(), 3);
        assert!(cat.suite(Suite::Examples).count() >= 3);
    }

    #[test]
    fn every_profile_matches_its_expected_value() {
        for e in &Catalog::builtin().entries {
            if let Some(p) = &e.profile {
                assert_eq!(formula_pol(p).unwrap(), e.expected_pol, "{}", e.name);
                assert!(formula::consistency_check(p), "{}", e.name);
            }
        }
    }

    #[test]
    fn rejects_bad_catalogs() {
        assert!(matches!(Catalog::from_json("{"), Err(CatalogError::Json(_))));
        assert!(matches!(Catalog::from_json(r#"{"version": 9, "entries": []}"#), Err(CatalogError::Version { found: 9 })));
        let neither = r#"{"version": 1, "entries": [
            {"name": "x", "suites": ["examples"], "n": 3, "d": 3, "expected_pol": 1, "provenance": ""}]}"#;
        assert!(matches!(Catalog::from_json(neither), Err(CatalogError::Entry { .. })));
        let too_big = r#"{"version": 1, "entries": [
            {"name": "x", "suites": ["examples"], "n": 2, "d": 3, "equation": "x0^3+x1^3+x2^3",
             "expected_pol": 5, "provenance": ""}]}"#;
        assert!(matches!(Catalog::from_json(too_big), Err(CatalogError::Entry { .. })));
        let wrong_degree = r#"{"version": 1, "entries": [
            {"name": "x", "suites": ["examples"], "n": 2, "d": 3, "equation": "x0^2+x1^2+x2^2",
             "expected_pol": 1, "provenance": ""}]}"#;
        assert!(Catalog::from_json(wrong_degree).is_err());
        assert!("cubics".parse::<Suite>().is_err());
        assert_eq!("unions".parse::<Suite>().unwrap(), Suite::Unions);
    }

    #[test]
    fn profile_only_entry_runs_without_oracle() {
        let cat = Catalog::builtin();
        let a1 = cat.get("A1").unwrap();
        let out = run_entry(a1, &TrackerConfig::default());
        assert!(out.pass);
        assert_eq!(out.formula, Some(7));
        assert!(out.oracle.is_none());
    }
}
