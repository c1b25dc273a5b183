//! Predictor-corrector continuation on
//! `H(z, t) = (1 - t) * gamma * G(z) + t * F(z)` together with the patch
//! equation `a . z = 1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::TrackerConfig;
use crate::poly::{ComplexPoint, PolySystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStatus {
    Regular,
    Diverged,
    SingularEndpoint,
    OnSingularLocus,
    StepFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackResult {
    pub status: PathStatus,
    /// Homogeneous endpoint scaled so its largest coordinate is 1.
    #[serde(skip)]
    pub endpoint: Option<ComplexPoint>,
    pub residual: f64,
    pub condition_estimate: f64,
    pub steps: usize,
    pub attempts: usize,
}

/// Homogeneous homotopy between a start and a target system in `n + 1`
/// unknowns, closed off by a linear patch.
#[derive(Debug, Clone)]
pub struct Homotopy {
    pub start: PolySystem,
    pub target: PolySystem,
    pub patch: Vec<Complex64>,
    pub gamma: Complex64,
    /// Gradient of the hypersurface, used to detect landings on its singular
    /// locus. `None` for plain systems.
    pub gradient: Option<PolySystem>,
}

struct Eval {
    h: DVector<Complex64>,
    hz: DMatrix<Complex64>,
    ht: DVector<Complex64>,
}

impl Homotopy {
    fn dim(&self) -> usize {
        self.patch.len()
    }

    fn patch_value(&self, z: &DVector<Complex64>) -> Complex64 {
        self.patch.iter().zip(z.iter()).map(|(a, x)| a * x).sum()
    }

    fn eval(&self, z: &DVector<Complex64>, t: f64) -> Eval {
        let n = self.dim();
        let zs = z.as_slice();
        let (g, gz) = self.start.evaluate_with_jacobian(zs).expect("dimension");
        let (f, fz) = self.target.evaluate_with_jacobian(zs).expect("dimension");
        let s = self.gamma * (1.0 - t);
        let mut h = DVector::zeros(n);
        let mut ht = DVector::zeros(n);
        let mut hz = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            h[i] = s * g[i] + f[i] * t;
            ht[i] = f[i] - self.gamma * g[i];
            for j in 0..n {
                hz[(i, j)] = s * gz[(i, j)] + fz[(i, j)] * t;
            }
        }
        h[n - 1] = self.patch_value(z) - 1.0;
        for j in 0..n {
            hz[(n - 1, j)] = self.patch[j];
        }
        Eval { h, hz, ht }
    }

    /// Target system plus patch, with its Jacobian.
    fn eval_target(&self, z: &DVector<Complex64>) -> (DVector<Complex64>, DMatrix<Complex64>) {
        let n = self.dim();
        let (f, fz) = self.target.evaluate_with_jacobian(z.as_slice()).expect("dimension");
        let mut h = DVector::zeros(n);
        let mut hz = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            h[i] = f[i];
            for j in 0..n {
                hz[(i, j)] = fz[(i, j)];
            }
        }
        h[n - 1] = self.patch_value(z) - 1.0;
        for j in 0..n {
            hz[(n - 1, j)] = self.patch[j];
        }
        (h, hz)
    }

    /// Start root of the affine start system lifted onto the patch.
    pub fn lift(&self, affine_root: &[Complex64]) -> DVector<Complex64> {
        let mut z = DVector::from_iterator(
            affine_root.len() + 1,
            std::iter::once(Complex64::new(1.0, 0.0)).chain(affine_root.iter().copied()),
        );
        let s = self.patch_value(&z);
        z /= s;
        z
    }
}

fn rel_norm(dz: &DVector<Complex64>, z: &DVector<Complex64>) -> f64 {
    dz.norm() / (1.0 + z.norm())
}

/// Per-attempt step policy; retries tighten it.
#[derive(Debug, Clone, Copy)]
struct StepPolicy {
    initial: f64,
    max: f64,
    track_tol: f64,
    max_first_correction: f64,
}

impl StepPolicy {
    fn attempt(k: usize) -> Self {
        let shrink = 0.25f64.powi(k as i32);
        StepPolicy {
            initial: 0.01 * shrink,
            max: 0.05 * shrink,
            track_tol: 1e-8,
            max_first_correction: 0.05 * shrink.sqrt(),
        }
    }
}

/// Distance from `t = 1` inside which a stalled path goes straight to endpoint
/// classification instead of being reported as a step failure.
const END_ZONE: f64 = 1e-6;
const MAX_ATTEMPTS: usize = 4;

/// Final point, the `t` it belongs to, and the number of steps taken.
fn run(h: &Homotopy, start: &DVector<Complex64>, cfg: &TrackerConfig, pol: StepPolicy) -> (DVector<Complex64>, f64, usize) {
    let mut z = start.clone();
    let mut t = 0.0f64;
    let mut dt = pol.initial;
    let mut streak = 0;
    let mut steps = 0;
    while t < 1.0 {
        if steps >= cfg.max_steps {
            return (z, t, steps);
        }
        steps += 1;
        let step = dt.min(1.0 - t);
        let t1 = if step >= 1.0 - t { 1.0 } else { t + step };
        let e = h.eval(&z, t);
        let Some(dzdt) = e.hz.lu().solve(&(-&e.ht)) else {
            return (z, t, steps);
        };
        let mut zc = &z + dzdt * Complex64::new(t1 - t, 0.0);
        let mut ok = false;
        let mut prev = f64::INFINITY;
        for k in 0..3 {
            let ec = h.eval(&zc, t1);
            let Some(dz) = ec.hz.lu().solve(&(-&ec.h)) else { break };
            let r = rel_norm(&dz, &zc);
            zc += dz;
            if k == 0 && r > pol.max_first_correction {
                break;
            }
            if k > 0 && r > 0.5 * prev {
                break;
            }
            prev = r;
            if r < pol.track_tol {
                ok = true;
                break;
            }
        }
        if ok && zc.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            z = zc;
            t = t1;
            streak += 1;
            if streak >= 3 {
                dt = (dt * 2.0).min(pol.max);
                streak = 0;
            }
        } else {
            dt *= 0.5;
            streak = 0;
            if dt < cfg.min_step {
                return (z, t, steps);
            }
        }
    }
    (z, t, steps)
}

/// Tracks one path from `start_root` (an affine root of the start system) to
/// `t = 1` and classifies the endpoint.
pub fn track_path(start_root: &[Complex64], h: &Homotopy, cfg: &TrackerConfig) -> TrackResult {
    let z0 = h.lift(start_root);
    let mut total_steps = 0;
    for attempt in 0..MAX_ATTEMPTS {
        let (z, t, steps) = run(h, &z0, cfg, StepPolicy::attempt(attempt));
        total_steps += steps;
        // a stall is only acceptable right next to t = 1
        if t < 1.0 - END_ZONE {
            continue;
        }
        let mut r = classify(h, z, cfg);
        r.steps = total_steps;
        r.attempts = attempt + 1;
        return r;
    }
    TrackResult {
        status: PathStatus::StepFailure,
        endpoint: None,
        residual: f64::INFINITY,
        condition_estimate: f64::INFINITY,
        steps: total_steps,
        attempts: MAX_ATTEMPTS,
    }
}

fn normalize_max(z: &DVector<Complex64>) -> Vec<Complex64> {
    let k = (0..z.len()).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm())).unwrap_or(0);
    let p = z[k];
    z.iter().map(|c| c / p).collect()
}

fn condition_number(m: DMatrix<Complex64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Gauss-Newton on `grad f = 0` from the max-normalised point `z`; true when
/// it settles on a zero of the gradient within `dedup_tol` of `z`.
fn projects_onto_locus(g: &PolySystem, z: &[Complex64], cfg: &TrackerConfig) -> bool {
    let n = z.len();
    let k = (0..n).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm())).unwrap_or(0);
    let mut w = DVector::from_column_slice(z);
    for _ in 0..30 {
        let (v, j) = g.evaluate_with_jacobian(w.as_slice()).expect("dimension");
        // keep the pivot coordinate fixed so the projective scale cannot drift
        let mut a = DMatrix::zeros(n + 1, n);
        a.view_mut((0, 0), (n, n)).copy_from(&j);
        a[(n, k)] = Complex64::new(1.0, 0.0);
        let mut rhs = DVector::zeros(n + 1);
        rhs.rows_mut(0, n).copy_from(&(-v));
        let Ok(dw) = a.svd(true, true).solve(&rhs, 1e-14) else { return false };
        w += &dw;
        if !w.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return false;
        }
        if dw.norm() < 1e-14 {
            break;
        }
    }
    let grad = g.evaluate(w.as_slice()).expect("dimension").norm();
    let gap = w.iter().zip(z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    grad < cfg.singular_grad_tol * 1e-4 && gap < cfg.dedup_tol
}

/// Newton refinement on the target system at `t = 1`, then classification.
fn classify(h: &Homotopy, mut z: DVector<Complex64>, cfg: &TrackerConfig) -> TrackResult {
    let mut converged = false;
    let mut last = f64::INFINITY;
    for _ in 0..12 {
        let (v, j) = h.eval_target(&z);
        let Some(dz) = j.lu().solve(&(-v)) else { break };
        let r = rel_norm(&dz, &z);
        if !r.is_finite() {
            break;
        }
        z += dz;
        if r < cfg.newton_tol {
            converged = true;
            break;
        }
        // stagnation, not quadratic convergence
        if r > 0.9 * last && last < 1e-6 {
            break;
        }
        last = r;
    }
    let (_, j) = h.eval_target(&z);
    let cond = condition_number(j);
    let zn = normalize_max(&z);
    // residual of the homogeneous equations at the normalised point
    let residual = {
        let zv = DVector::from_column_slice(&zn);
        let (f, _) = h.target.evaluate_with_jacobian(zv.as_slice()).expect("dimension");
        f.norm()
    };
    let well_posed = converged && residual < cfg.newton_tol && cond.is_finite() && cond < cfg.max_condition;
    let on_locus = h.gradient.as_ref().is_some_and(|g| {
        let small = g.evaluate(&zn).expect("dimension").norm() < cfg.singular_grad_tol;
        // a simple fibre point can sit close enough to an isolated singular
        // point for its gradient to pass the threshold; only accept it if the
        // point itself is a zero of the gradient
        small && (!well_posed || projects_onto_locus(g, &zn, cfg))
    });
    let at_infinity = zn[0].norm() < 1.0 / cfg.divergence_bound;
    let status = if on_locus {
        PathStatus::OnSingularLocus
    } else if !well_posed {
        PathStatus::SingularEndpoint
    } else if at_infinity {
        PathStatus::Diverged
    } else {
        PathStatus::Regular
    };
    TrackResult {
        status,
        endpoint: ComplexPoint::new(zn).ok(),
        residual,
        condition_estimate: cond,
        steps: 0,
        attempts: 0,
    }
}
