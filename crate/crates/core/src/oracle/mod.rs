//! Numerical polar degree: count the regular points of a generic fiber of
//! the gradient map `P^n \ Sing(V) -> P^n` by homotopy continuation.
//!
//! Each trial draws a random rational rotation, a random target `b` and a
//! random projective patch, tracks all `(d-1)^n` total-degree paths, drops
//! endpoints that are singular or lie on `Sing V`, and counts the distinct
//! projective points left. The reported estimate is the modal count over an
//! odd number of trials.
//!
//! Results depend only on `(f, config)`: all randomness is derived from the
//! seed and the trial index, and paths are merged in start-root order no
//! matter how many worker threads tracked them.

mod start;
mod system;
mod tracker;

pub use start::{start_system, StartSystem};
pub use system::{build_fiber_system, random_linear_form, restrict_to_hyperplane, FiberSystem};
pub use tracker::{track_path, Homotopy, PathStatus, TrackResult};

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{self, FormulaError, PolResult, SingularityProfile};
use crate::poly::{PolyError, Polynomial};

/// Largest path count per trial the oracle accepts.
pub const PATH_BUDGET: u64 = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} < 2: the gradient map is constant")]
    DegreeTooLow(u32),
    #[error("{paths} paths per trial exceed the budget of {PATH_BUDGET}")]
    Budget { paths: u64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub seed: u64,
    /// Number of independent targets; must be odd.
    pub trials: u32,
    pub newton_tol: f64,
    pub dedup_tol: f64,
    /// Affine coordinate magnitude treated as a point at infinity of the chart.
    pub divergence_bound: f64,
    pub max_steps: usize,
    pub min_step: f64,
    pub singular_grad_tol: f64,
    /// Endpoints whose Jacobian condition number exceeds this are singular.
    pub max_condition: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            seed: 42,
            trials: 5,
            newton_tol: 1e-10,
            dedup_tol: 1e-6,
            divergence_bound: 1e8,
            max_steps: 10_000,
            min_step: 1e-14,
            singular_grad_tol: 1e-8,
            max_condition: 1e8,
        }
    }
}

impl TrackerConfig {
    pub fn with_seed(seed: u64) -> Self {
        TrackerConfig { seed, ..TrackerConfig::default() }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let positive = [
            ("newton_tol", self.newton_tol),
            ("dedup_tol", self.dedup_tol),
            ("divergence_bound", self.divergence_bound),
            ("min_step", self.min_step),
            ("singular_grad_tol", self.singular_grad_tol),
            ("max_condition", self.max_condition),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(OracleError::Config(format!("{name} must be positive and finite")));
        }
        if self.trials.is_multiple_of(2) {
            return Err(OracleError::Config(format!("trials must be odd, got {}", self.trials)));
        }
        if self.max_steps == 0 {
            return Err(OracleError::Config("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// Path counts by endpoint class, over all trials.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discards {
    pub diverged: usize,
    pub singular_endpoint: usize,
    pub on_singular_locus: usize,
    pub step_failure: usize,
    /// Regular endpoints reached by more than one path.
    pub duplicate: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: u32,
    pub d: u32,
    pub pol_estimate: u64,
    pub per_trial_counts: Vec<u64>,
    pub paths_total: u64,
    pub discarded: Discards,
    pub consensus: bool,
}

/// Outcome of one trial.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub count: u64,
    pub paths: Vec<TrackResult>,
}

fn mix(seed: u64, k: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_budget(f: &Polynomial) -> Result<u64, OracleError> {
    system::check_input(f)?;
    let n = f.nvars() as u32 - 1;
    let paths = u64::from(f.degree() - 1)
        .checked_pow(n)
        .ok_or(OracleError::Budget { paths: u64::MAX })?;
    if paths > PATH_BUDGET {
        return Err(OracleError::Budget { paths });
    }
    Ok(paths)
}

/// Projective distance between two max-normalised points: rescale `b` so its
/// coordinate at `a`'s pivot is 1 and take the largest coordinate gap.
fn projective_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    let k = (0..a.len()).max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm())).unwrap_or(0);
    if b[k].norm() < 1e-300 {
        return f64::INFINITY;
    }
    let s = a[k] / b[k];
    a.iter().zip(b).map(|(x, y)| (x - y * s).norm()).fold(0.0, f64::max)
}

/// Runs one trial of the oracle.
pub fn run_trial(f: &Polynomial, cfg: &TrackerConfig, trial: u32) -> Result<TrialResult, OracleError> {
    let trial_seed = mix(cfg.seed, u64::from(trial));
    let fiber = build_fiber_system(f, trial_seed)?;
    let start = start_system(&fiber.equations.degrees(), mix(trial_seed, 1));
    let mut rng = ChaCha8Rng::seed_from_u64(mix(trial_seed, 2));
    let gamma = system::random_complex(&mut rng, 1.0, 1.0);
    let homotopy = Homotopy {
        start: start.homogeneous(),
        target: fiber.equations.clone(),
        patch: fiber.patch.clone(),
        gamma,
        gradient: Some(fiber.gradient.clone()),
    };
    let roots = start.known_roots();
    let paths: Vec<TrackResult> = roots.par_iter().map(|r| track_path(r, &homotopy, cfg)).collect();

    let mut distinct: Vec<&[Complex64]> = Vec::new();
    for p in paths.iter().filter(|p| p.status == PathStatus::Regular) {
        let z = p.endpoint.as_ref().expect("regular endpoint").coords();
        if !distinct.iter().any(|q| projective_gap(q, z) < cfg.dedup_tol) {
            distinct.push(z);
        }
    }
    Ok(TrialResult { count: distinct.len() as u64, paths })
}

/// Numerical polar degree of `V(f)`.
pub fn solve_count(f: &Polynomial, cfg: &TrackerConfig) -> Result<OracleReport, OracleError> {
    cfg.validate()?;
    let paths = check_budget(f)?;
    let mut counts = Vec::with_capacity(cfg.trials as usize);
    let mut discarded = Discards::default();
    for trial in 0..cfg.trials {
        let r = run_trial(f, cfg, trial)?;
        let regular = r.paths.iter().filter(|p| p.status == PathStatus::Regular).count();
        discarded.duplicate += regular - r.count as usize;
        for p in &r.paths {
            match p.status {
                PathStatus::Regular => {}
                PathStatus::Diverged => discarded.diverged += 1,
                PathStatus::SingularEndpoint => discarded.singular_endpoint += 1,
                PathStatus::OnSingularLocus => discarded.on_singular_locus += 1,
                PathStatus::StepFailure => discarded.step_failure += 1,
            }
        }
        counts.push(r.count);
    }
    let mut freq: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in &counts {
        *freq.entry(c).or_default() += 1;
    }
    // highest frequency; ties go to the larger count, since missed paths are
    // the typical numerical failure
    let pol_estimate = freq.iter().max_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0))).map(|(&c, _)| c).unwrap_or(0);
    Ok(OracleReport {
        n: f.nvars() as u32 - 1,
        d: f.degree(),
        pol_estimate,
        consensus: freq.len() == 1,
        per_trial_counts: counts,
        paths_total: paths * u64::from(cfg.trials),
        discarded,
    })
}

/// Formula and oracle side by side for the same hypersurface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub formula: PolResult,
    pub oracle: OracleReport,
    pub matches: bool,
}

pub fn verify(f: &Polynomial, profile: &SingularityProfile, cfg: &TrackerConfig) -> Result<VerifyReport, OracleError> {
    let n = f.nvars() as u32 - 1;
    if profile.n != n || profile.d != f.degree() {
        return Err(OracleError::Degenerate(format!(
            "profile is for (n, d) = ({}, {}) but the equation has ({n}, {})",
            profile.n,
            profile.d,
            f.degree()
        )));
    }
    let formula = formula::pol_one_dim(profile)?;
    let oracle = solve_count(f, cfg)?;
    let matches = oracle.consensus && i64::try_from(oracle.pol_estimate).ok() == Some(formula.pol);
    Ok(VerifyReport { formula, oracle, matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    #[test]
    fn config_validation() {
        assert!(TrackerConfig::default().validate().is_ok());
        let even = TrackerConfig { trials: 4, ..TrackerConfig::default() };
        assert!(matches!(even.validate(), Err(OracleError::Config(_))));
        let neg = TrackerConfig { newton_tol: -1.0, ..TrackerConfig::default() };
        assert!(neg.validate().is_err());
    }

    #[test]
    fn budget_is_enforced() {
        // (5-1)^4 = 256 is allowed; (5-1)^5 is not
        let ok = parse("x0^5+x1^5+x2^5+x3^5+x4^5", 5).unwrap();
        assert_eq!(check_budget(&ok).unwrap(), 256);
        let big = parse("x0^5+x1^5+x2^5+x3^5+x4^5+x5^5", 6).unwrap();
        assert!(matches!(check_budget(&big), Err(OracleError::Budget { paths: 1024 })));
    }

    #[test]
    fn projective_gap_ignores_scaling() {
        let a = vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.5)];
        let b: Vec<Complex64> = a.iter().map(|z| z * Complex64::new(0.0, 3.0)).collect();
        assert!(projective_gap(&a, &b) < 1e-15);
        let c = vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.6)];
        assert!(projective_gap(&a, &c) > 0.05);
    }

    #[test]
    fn fermat_plane_cubic() {
        let f = parse("x0^3+x1^3+x2^3", 3).unwrap();
        let r = solve_count(&f, &TrackerConfig::default()).unwrap();
        assert_eq!(r.pol_estimate, 4);
        assert!(r.consensus);
    }
}
