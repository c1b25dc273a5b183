//! Closed-form polar degree formulas over a [`SingularityProfile`].
//!
//! Everything here is exact integer arithmetic. Milnor numbers, fibre Euler
//! characteristics, genera and sectional data are inputs; nothing is derived
//! from an equation.

mod bounds;
mod profile;
mod yomdin;

pub use bounds::{alpha_jump, homaloidal_filter, lower_bounds, special_alphas, AlphaEntry, AlphaReport};
pub use profile::{CurveComponent, IsolatedPoint, SingularityProfile, SpecialPoint};
pub use yomdin::{
    yomdin_betti_mu, yomdin_check, yomdin_inequality, yomdin_line_mu, yomdin_local_mu, yomdin_pol, YomdinReport,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("invalid profile: {0}")]
    Schema(String),
    #[error("profile has {0} curve component(s); the isolated formula does not apply")]
    HasCurves(usize),
    #[error("inconsistent profile: {0}")]
    Inconsistent(String),
    #[error("missing sectional Milnor number at {0}")]
    MissingSectional(String),
    #[error("Yomdin bound violated: {lhs} > {rhs} ({what})")]
    YomdinViolation { what: String, lhs: i64, rhs: i64 },
    #[error("integer overflow evaluating {0}")]
    Overflow(&'static str),
    #[error("non-integral Euler characteristic for n={n}, d={d}")]
    NonIntegral { n: u32, d: u32 },
}

/// Which route produced a [`PolResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    IsolatedFormula,
    OneDimFormula,
    Union,
    Yomdin,
    Oracle,
}

/// One labelled summand of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolResult {
    pub pol: i64,
    pub method: Method,
    pub breakdown: Vec<Term>,
}

fn term(label: impl Into<String>, value: i64) -> Term {
    Term { label: label.into(), value }
}

pub(crate) fn sign(n: u32) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn ipow(base: i64, exp: u32) -> Result<i64, FormulaError> {
    base.checked_pow(exp).ok_or(FormulaError::Overflow("power"))
}

/// The Bezout number `(d-1)^n`: polar degree of a smooth hypersurface.
pub fn bezout(n: u32, d: u32) -> Result<i64, FormulaError> {
    ipow(i64::from(d) - 1, n)
}

fn check_range(pol: i64, n: u32, d: u32, what: &str) -> Result<(), FormulaError> {
    let top = bezout(n, d)?;
    if pol < 0 || pol > top {
        return Err(FormulaError::Inconsistent(format!("{what} gives pol = {pol}, outside [0, {top}]")));
    }
    Ok(())
}

/// `(d-1)^n - sum mu_p` for a profile with isolated singularities only.
pub fn pol_isolated(p: &SingularityProfile) -> Result<PolResult, FormulaError> {
    p.validate()?;
    if !p.curves.is_empty() {
        return Err(FormulaError::HasCurves(p.curves.len()));
    }
    let mut breakdown = vec![term("(d-1)^n", bezout(p.n, p.d)?)];
    for (k, pt) in p.isolated.iter().enumerate() {
        breakdown.push(term(format!("-mu_p[{k}]"), -i64::from(pt.mu)));
    }
    let pol = breakdown.iter().map(|t| t.value).sum();
    check_range(pol, p.n, p.d, "isolated formula")?;
    Ok(PolResult { pol, method: Method::IsolatedFormula, breakdown })
}

/// `c_i = 2 g_i + gamma_i + (d+1) deg - 2`.
pub fn curve_coefficient(c: &CurveComponent, d: u32) -> i64 {
    2 * i64::from(c.genus) + c.punctures() + (i64::from(d) + 1) * i64::from(c.degree) - 2
}

fn one_dim_terms(p: &SingularityProfile) -> Result<Vec<Term>, FormulaError> {
    let mut out = vec![term("(d-1)^n", bezout(p.n, p.d)?)];
    for (k, pt) in p.isolated.iter().enumerate() {
        out.push(term(format!("-mu_p[{k}]"), -i64::from(pt.mu)));
    }
    for (i, c) in p.curves.iter().enumerate() {
        out.push(term(format!("-c_i*mu_perp_i[{i}]"), -curve_coefficient(c, p.d) * i64::from(c.mu_transversal)));
    }
    for q in p.distinct_special_points() {
        out.push(term(format!("(-1)^n*(chi(A_q)-1)[{}]", q.key), sign(p.n) * (q.chi_fiber - 1)));
    }
    Ok(out)
}

/// Polar degree of a hypersurface with at most 1-dimensional singular locus:
/// `(d-1)^n - sum mu_p - sum c_i mu_perp_i + (-1)^n sum_q (chi(A_q) - 1)`.
pub fn pol_one_dim(p: &SingularityProfile) -> Result<PolResult, FormulaError> {
    p.validate()?;
    let breakdown = one_dim_terms(p)?;
    let pol = breakdown.iter().map(|t| t.value).sum();
    check_range(pol, p.n, p.d, "one-dimensional formula")?;
    let method = if p.curves.is_empty() { Method::IsolatedFormula } else { Method::OneDimFormula };
    Ok(PolResult { pol, method, breakdown })
}

/// Value of the one-dimensional formula without range checks.
pub(crate) fn pol_one_dim_raw(p: &SingularityProfile) -> Result<i64, FormulaError> {
    Ok(one_dim_terms(p)?.iter().map(|t| t.value).sum())
}

/// Euler characteristic of a smooth degree `d` hypersurface in `P^n`:
/// `n + 1 - (1 + (-1)^n (d-1)^(n+1)) / d`.
pub fn chi_smooth(n: u32, d: u32) -> Result<i64, FormulaError> {
    if n < 1 || d < 1 {
        return Err(FormulaError::Schema(format!("need n >= 1 and d >= 1, got n={n} d={d}")));
    }
    let numer = 1 + sign(n) * ipow(i64::from(d) - 1, n + 1)?;
    let d64 = i64::from(d);
    if numer % d64 != 0 {
        return Err(FormulaError::NonIntegral { n, d });
    }
    Ok(i64::from(n) + 1 - numer / d64)
}

/// `chi(V)`, from the smooth value plus the vanishing-homology correction.
pub fn chi_v(p: &SingularityProfile) -> Result<i64, FormulaError> {
    p.validate()?;
    let s = sign(p.n);
    let mut chi = chi_smooth(p.n, p.d)?;
    for c in &p.curves {
        chi += s * (2 * i64::from(c.genus) + c.punctures() + c.axis_points(p.d) - 2) * i64::from(c.mu_transversal);
    }
    for q in p.distinct_special_points() {
        chi -= q.chi_fiber - 1;
    }
    chi += s * p.isolated.iter().map(|pt| i64::from(pt.mu)).sum::<i64>();
    Ok(chi)
}

/// `chi(V ∩ H)` for a generic hyperplane `H`.
pub fn chi_slice(p: &SingularityProfile) -> Result<i64, FormulaError> {
    p.validate()?;
    let sum: i64 = p.curves.iter().map(|c| i64::from(c.degree) * i64::from(c.mu_transversal)).sum();
    Ok(chi_smooth(p.n - 1, p.d).or_else(|e| if p.n == 1 { Ok(0) } else { Err(e) })? + sign(p.n - 1) * sum)
}

/// Self-test: `chi(V) - chi(V ∩ H) = 1 + (-1)^(n-1) pol(V)`.
pub fn consistency_check(p: &SingularityProfile) -> bool {
    let (Ok(cv), Ok(cs), Ok(pol)) = (chi_v(p), chi_slice(p), pol_one_dim_raw(p)) else {
        return false;
    };
    cv - cs == 1 + sign(p.n - 1) * pol
}

/// Polar degree of `V1 ∪ V2` from the parts and `chi(V1 ∩ V2 \ H)`.
pub fn union_pol(pol1: i64, pol2: i64, n: u32, chi_affine_intersection: i64) -> Result<i64, FormulaError> {
    let pol = pol1 + pol2 + sign(n) * (chi_affine_intersection - 1);
    if pol < 0 {
        return Err(FormulaError::Inconsistent(format!("union formula gives pol = {pol}")));
    }
    Ok(pol)
}

/// Euler characteristic of the Milnor fibre at the apex of a cone over a
/// hypersurface of `P^(n-1)` with isolated singularities of the given
/// Milnor numbers: `1 + (-1)^(n-1) ((d-1)^n - d sum mu)`.
///
/// The apex germ is homogeneous, so its Milnor fibre is a `d`-fold cover of
/// the complement of the base in `P^(n-1)`.
pub fn cone_chi_fiber(n: u32, d: u32, transversal_mus: &[u32]) -> Result<i64, FormulaError> {
    let total: i64 = transversal_mus.iter().map(|&m| i64::from(m)).sum();
    Ok(1 + sign(n - 1) * (bezout(n, d)? - i64::from(d) * total))
}

/// Profile of the cone in `P^n` over a degree `d` hypersurface with the given
/// isolated Milnor numbers. A smooth base gives an isolated apex of Milnor
/// number `(d-1)^n`; otherwise every base singularity spans a line through
/// the apex, which is the single shared special point.
pub fn cone_profile(n: u32, d: u32, transversal_mus: &[u32]) -> Result<SingularityProfile, FormulaError> {
    if transversal_mus.is_empty() {
        let mu = u32::try_from(bezout(n, d)?).map_err(|_| FormulaError::Overflow("apex Milnor number"))?;
        return Ok(if mu == 0 {
            SingularityProfile::smooth(n, d)
        } else {
            SingularityProfile::isolated(n, d, &[mu])
        });
    }
    let chi = cone_chi_fiber(n, d, transversal_mus)?;
    let curves = transversal_mus
        .iter()
        .map(|&mu| CurveComponent {
            genus: 0,
            degree: 1,
            mu_transversal: mu,
            special_points: vec![SpecialPoint {
                chi_fiber: chi,
                branch_count: 1,
                branch_multiplicities: None,
                mu_section: None,
                label: Some("apex".into()),
            }],
        })
        .collect();
    Ok(SingularityProfile { n, d, isolated: Vec::new(), curves })
}

/// True iff the one-dimensional formula returns 0 on the cone profile.
pub fn cone_pol_check(n: u32, d: u32, transversal_mus: &[u32]) -> Result<bool, FormulaError> {
    let p = cone_profile(n, d, transversal_mus)?;
    Ok(pol_one_dim_raw(&p)? == 0)
}

/// Lower semi-continuity: a nearby member of a fixed-degree family never has
/// smaller polar degree.
pub fn semicontinuity_expectation(pol_special: i64, pol_nearby: i64) -> bool {
    pol_nearby >= pol_special
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn line_profile(n: u32, d: u32, mu_perp: u32, chis: &[i64]) -> SingularityProfile {
        SingularityProfile {
            n,
            d,
            isolated: vec![],
            curves: vec![CurveComponent {
                genus: 0,
                degree: 1,
                mu_transversal: mu_perp,
                special_points: chis
                    .iter()
                    .map(|&chi_fiber| SpecialPoint {
                        chi_fiber,
                        branch_count: 1,
                        branch_multiplicities: None,
                        mu_section: None,
                        label: None,
                    })
                    .collect(),
            }],
        }
    }

    #[test]
    fn isolated_cubic_surfaces() {
        assert_eq!(pol_isolated(&SingularityProfile::smooth(3, 3)).unwrap().pol, 8);
        assert_eq!(pol_isolated(&SingularityProfile::isolated(3, 3, &[1, 1, 1, 1])).unwrap().pol, 4);
        assert_eq!(pol_isolated(&SingularityProfile::isolated(3, 3, &[8])).unwrap().pol, 0);
        let r = pol_isolated(&SingularityProfile::isolated(3, 3, &[9]));
        assert!(matches!(r, Err(FormulaError::Inconsistent(_))));
        assert!(matches!(pol_isolated(&line_profile(3, 3, 1, &[2, 2])), Err(FormulaError::HasCurves(1))));
    }

    #[test]
    fn curve_coefficients() {
        let c = |g, gamma: usize, deg| CurveComponent {
            genus: g,
            degree: deg,
            mu_transversal: 1,
            special_points: vec![
                SpecialPoint {
                    chi_fiber: 0,
                    branch_count: 1,
                    branch_multiplicities: None,
                    mu_section: None,
                    label: None
                };
                gamma
            ],
        };
        assert_eq!(curve_coefficient(&c(0, 2, 1), 3), 4);
        assert_eq!(curve_coefficient(&c(0, 1, 1), 3), 3);
        assert_eq!(curve_coefficient(&c(1, 0, 2), 2), 6);
    }

    #[test]
    fn worked_line_examples() {
        let e1 = line_profile(3, 3, 1, &[2, 2]);
        let r = pol_one_dim(&e1).unwrap();
        assert_eq!(r.pol, 2);
        assert_eq!(r.method, Method::OneDimFormula);
        assert_eq!(r.breakdown.iter().map(|t| t.value).sum::<i64>(), 2);
        assert_eq!(r.breakdown.iter().map(|t| t.value).collect::<Vec<_>>(), vec![8, -4, -1, -1]);

        let e1b = line_profile(4, 3, 2, &[-1, -1]);
        assert_eq!(pol_one_dim(&e1b).unwrap().pol, 4);

        for (n, d) in [(2, 3), (3, 3), (4, 2), (2, 5)] {
            assert_eq!(pol_one_dim(&SingularityProfile::smooth(n, d)).unwrap().pol, bezout(n, d).unwrap());
        }
    }

    #[test]
    fn smooth_euler_characteristics() {
        assert_eq!(chi_smooth(3, 1).unwrap(), 3);
        assert_eq!(chi_smooth(3, 3).unwrap(), 9);
        assert_eq!(chi_smooth(2, 3).unwrap(), 0);
        assert_eq!(chi_smooth(2, 2).unwrap(), 2);
        // quartic K3 surface
        assert_eq!(chi_smooth(3, 4).unwrap(), 24);
        assert!(chi_smooth(0, 3).is_err());
    }

    #[test]
    fn euler_characteristics_of_line_example() {
        let e1 = line_profile(3, 3, 1, &[2, 2]);
        assert_eq!(chi_v(&e1).unwrap(), 4);
        assert_eq!(chi_slice(&e1).unwrap(), 1);
        assert!(consistency_check(&e1));
        assert_eq!(chi_v(&SingularityProfile::smooth(3, 3)).unwrap(), 9);
        assert_eq!(chi_slice(&SingularityProfile::smooth(3, 2)).unwrap(), 2);
        // isolated points enter chi(V) with sign (-1)^n
        assert_eq!(chi_v(&SingularityProfile::isolated(3, 3, &[1, 2])).unwrap(), 9 - 3);
    }

    #[test]
    fn unions() {
        assert_eq!(union_pol(1, 0, 3, 0).unwrap(), 2);
        assert_eq!(union_pol(5, 0, 3, 1).unwrap(), 5);
        assert_eq!(union_pol(0, 0, 3, 0).unwrap(), 1);
        assert_eq!(union_pol(1, 0, 3, 1).unwrap(), 1);
        assert!(union_pol(0, 0, 3, 5).is_err());
    }

    #[test]
    fn cones() {
        assert_eq!(cone_chi_fiber(3, 3, &[1]).unwrap(), 6);
        assert_eq!(cone_chi_fiber(3, 3, &[2]).unwrap(), 3);
        assert!(cone_pol_check(3, 3, &[1]).unwrap());
        assert!(cone_pol_check(3, 3, &[2]).unwrap());
        assert!(cone_pol_check(3, 3, &[]).unwrap());
        let cn = cone_profile(3, 3, &[1]).unwrap();
        assert_eq!(pol_one_dim(&cn).unwrap().pol, 0);
        // cone over a smooth cubic curve: isolated apex of Milnor number 8
        assert_eq!(cone_profile(3, 3, &[]).unwrap(), SingularityProfile::isolated(3, 3, &[8]));
    }

    #[test]
    fn semicontinuity() {
        assert!(semicontinuity_expectation(2, 6));
        assert!(semicontinuity_expectation(3, 3));
        assert!(!semicontinuity_expectation(3, 2));
    }
}
