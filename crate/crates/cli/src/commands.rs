use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use polardeg_core::catalog::{run_suite, Catalog, SuiteReport};
use polardeg_core::formula::{self, PolResult};
use polardeg_core::oracle::{self, random_linear_form, restrict_to_hyperplane, OracleReport};
use polardeg_core::poly::{deform as deform_poly, parse_rational};
use polardeg_core::{parse, Polynomial, SingularityProfile, Suite, TrackerConfig};

use crate::error::{CliError, EXIT_MISMATCH};

pub struct Output {
    pub json: bool,
}

impl Output {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("report serialises"));
        } else {
            print!("{}", text());
        }
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

fn read_source(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_profile(path: &Path) -> Result<SingularityProfile, CliError> {
    Ok(SingularityProfile::from_json(&read_source(path)?)?)
}

fn parse_poly(text: &str, n: u32) -> Result<Polynomial, CliError> {
    let f = parse(text, n as usize + 1)?;
    if f.is_zero() {
        return Err(CliError::input("zero polynomial"));
    }
    if !f.is_homogeneous() {
        return Err(CliError::input(format!("{f} is not homogeneous")));
    }
    Ok(f)
}

fn formula_text(r: &PolResult) -> String {
    let mut s = format!("pol = {}\n", r.pol);
    let width = r.breakdown.iter().map(|t| t.label.len()).max().unwrap_or(0);
    for t in &r.breakdown {
        s += &format!("  {:<width$}  {:>6}\n", t.label, t.value);
    }
    s
}

pub fn formula(out: &Output, path: &Path) -> Result<ExitCode, CliError> {
    let p = read_profile(path)?;
    let r = formula::pol_one_dim(&p)?;
    out.emit(&r, || formula_text(&r));
    Ok(ExitCode::SUCCESS)
}

fn oracle_text(r: &OracleReport) -> String {
    let counts: Vec<String> = r.per_trial_counts.iter().map(u64::to_string).collect();
    let d = &r.discarded;
    format!(
        "pol = {}\nper-trial counts: {} ({})\npaths: {} tracked; discarded: diverged {}, singular endpoint {}, \
         on singular locus {}, step failure {}, duplicate {}\n",
        r.pol_estimate,
        counts.join(" "),
        if r.consensus { "consensus" } else { "NO CONSENSUS" },
        r.paths_total,
        d.diverged,
        d.singular_endpoint,
        d.on_singular_locus,
        d.step_failure,
        d.duplicate,
    )
}

pub fn oracle(out: &Output, poly: &str, n: u32, cfg: &TrackerConfig) -> Result<ExitCode, CliError> {
    let f = parse_poly(poly, n)?;
    let r = oracle::solve_count(&f, cfg)?;
    out.emit(&r, || oracle_text(&r));
    Ok(status(r.consensus))
}

pub fn verify(out: &Output, poly: &str, profile: &Path, cfg: &TrackerConfig) -> Result<ExitCode, CliError> {
    let p = read_profile(profile)?;
    let f = parse_poly(poly, p.n)?;
    let r = oracle::verify(&f, &p, cfg)?;
    out.emit(&r, || {
        format!(
            "formula: {}oracle:  {}{}\n",
            formula_text(&r.formula),
            oracle_text(&r.oracle),
            if r.matches { "match" } else { "MISMATCH" }
        )
    });
    Ok(status(r.matches))
}

fn catalog_text(r: &SuiteReport) -> String {
    let opt = |v: Option<i64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
    let width = r.rows.iter().map(|row| row.name.len()).max().unwrap_or(4).max(4);
    let mut s = format!("suite {} (seed {})\n", r.suite.name(), r.seed);
    s += &format!("{:<width$}  {:>8}  {:>7}  {:>6}  {:>5}  status\n", "name", "expected", "formula", "oracle", "union");
    for row in &r.rows {
        let oracle = match &row.oracle {
            None => "-".to_string(),
            Some(o) if o.consensus => o.pol_estimate.to_string(),
            Some(o) => format!("{}?", o.pol_estimate),
        };
        s += &format!(
            "{:<width$}  {:>8}  {:>7}  {:>6}  {:>5}  {}\n",
            row.name,
            row.expected,
            opt(row.formula),
            oracle,
            opt(row.union),
            if row.pass { "pass" } else { "FAIL" }
        );
    }
    let passed = r.rows.iter().filter(|row| row.pass).count();
    s += &format!("{passed}/{} pass\n", r.rows.len());
    for row in r.rows.iter().filter(|row| !row.pass) {
        for p in &row.problems {
            s += &format!("  {}: {p}\n", row.name);
        }
    }
    s
}

pub fn catalog(out: &Output, suite: Suite, cfg: &TrackerConfig) -> Result<ExitCode, CliError> {
    let r = run_suite(&Catalog::builtin(), suite, cfg);
    out.emit(&r, || catalog_text(&r));
    Ok(status(r.all_pass))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformRun {
    pub l: String,
    pub s: String,
    pub pol_estimate: u64,
    pub per_trial_counts: Vec<u64>,
    pub consensus: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformReport {
    pub base: u64,
    pub base_consensus: bool,
    pub d: u32,
    pub runs: Vec<DeformRun>,
    pub holds: bool,
}

pub struct DeformArgs<'a> {
    pub poly: &'a str,
    pub n: u32,
    pub forms: Vec<String>,
    pub random_forms: u32,
    pub s_values: Vec<String>,
    pub d: Option<u32>,
}

fn linear_forms(given: &[String], random: u32, nvars: usize, seed: u64) -> Result<Vec<Polynomial>, CliError> {
    if given.is_empty() {
        return Ok((0..random).map(|k| random_linear_form(nvars, seed ^ (u64::from(k) + 1).wrapping_mul(0x9E37_79B9))).collect());
    }
    given
        .iter()
        .map(|t| {
            let l = parse(t, nvars)?;
            if l.is_zero() || !l.is_homogeneous() || l.degree() != 1 {
                return Err(CliError::input(format!("{t} is not a linear form")));
            }
            Ok(l)
        })
        .collect()
}

fn consensus_count(f: &Polynomial, cfg: &TrackerConfig) -> Result<OracleReport, CliError> {
    Ok(oracle::solve_count(f, cfg)?)
}

pub fn deform(out: &Output, a: &DeformArgs<'_>, cfg: &TrackerConfig) -> Result<ExitCode, CliError> {
    let f = parse_poly(a.poly, a.n)?;
    let d = a.d.unwrap_or(f.degree());
    let s_values: Vec<BigRational> = a.s_values.iter().map(|s| parse_rational(s.trim())).collect::<Result<_, _>>()?;
    let forms = linear_forms(&a.forms, a.random_forms, f.nvars(), cfg.seed)?;
    let base = consensus_count(&f, cfg)?;
    let mut runs = Vec::new();
    for l in &forms {
        for s in &s_values {
            let g = deform_poly(&f, l, d, s)?;
            let r = consensus_count(&g, cfg)?;
            runs.push(DeformRun {
                l: l.to_string(),
                s: s.to_string(),
                holds: r.consensus && r.pol_estimate >= base.pol_estimate,
                pol_estimate: r.pol_estimate,
                per_trial_counts: r.per_trial_counts,
                consensus: r.consensus,
            });
        }
    }
    let holds = base.consensus && runs.iter().all(|r| r.holds);
    let report = DeformReport { base: base.pol_estimate, base_consensus: base.consensus, d, runs, holds };
    out.emit(&report, || {
        let mut s = format!("pol(f) = {}\n", report.base);
        for r in &report.runs {
            s += &format!(
                "  s = {:<8} l = {:<32} pol = {}{}\n",
                r.s,
                r.l,
                r.pol_estimate,
                if r.holds { "" } else { "  VIOLATION" }
            );
        }
        s += if report.holds { "semi-continuity holds\n" } else { "semi-continuity FAILED\n" };
        s
    });
    Ok(status(holds))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceReport {
    pub l: String,
    pub s: String,
    pub d: u32,
    pub pol: u64,
    pub pol_slice: u64,
    pub pol_deformed: u64,
    pub consensus: bool,
    /// `pol_deformed == (d - 1) * pol_slice`.
    pub identity_holds: bool,
    /// `pol <= pol_deformed`.
    pub inequality_holds: bool,
}

pub fn slice_yomdin(
    out: &Output,
    poly: &str,
    n: u32,
    form: Option<&str>,
    s: &str,
    cfg: &TrackerConfig,
) -> Result<ExitCode, CliError> {
    if n < 2 {
        return Err(CliError::input("slicing needs n >= 2"));
    }
    let f = parse_poly(poly, n)?;
    let given: Vec<String> = form.map(str::to_string).into_iter().collect();
    let l = linear_forms(&given, 1, f.nvars(), cfg.seed)?.remove(0);
    let s = parse_rational(s.trim())?;
    let d = f.degree();
    let whole = consensus_count(&f, cfg)?;
    let slice = consensus_count(&restrict_to_hyperplane(&f, &l)?, cfg)?;
    let deformed = consensus_count(&deform_poly(&f, &l, d, &s)?, cfg)?;
    let report = SliceReport {
        l: l.to_string(),
        s: s.to_string(),
        d,
        pol: whole.pol_estimate,
        pol_slice: slice.pol_estimate,
        pol_deformed: deformed.pol_estimate,
        consensus: whole.consensus && slice.consensus && deformed.consensus,
        identity_holds: deformed.pol_estimate == u64::from(d - 1) * slice.pol_estimate,
        inequality_holds: whole.pol_estimate <= deformed.pol_estimate,
    };
    out.emit(&report, || {
        format!(
            "l = {}\ns = {}\npol(V) = {}\npol(V ∩ H) = {}\npol(V_s) = {}\n(d-1) * pol(V ∩ H) = {} {}\npol(V) <= pol(V_s): {}\n",
            report.l,
            report.s,
            report.pol,
            report.pol_slice,
            report.pol_deformed,
            u64::from(d - 1) * report.pol_slice,
            if report.identity_holds { "(holds)" } else { "(FAILED)" },
            report.inequality_holds,
        )
    });
    Ok(status(report.consensus && report.identity_holds && report.inequality_holds))
}
