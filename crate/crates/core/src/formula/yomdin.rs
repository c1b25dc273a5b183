//! Yomdin-type deformations `f + s l^d` and generic slicing.

use serde::{Deserialize, Serialize};

use super::{bezout, pol_one_dim_raw, FormulaError, SingularityProfile};

/// Polar degree of the generic hyperplane section and of the Yomdin
/// deformation, as computed from the curve data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YomdinReport {
    pub pol: i64,
    pub pol_slice: i64,
    pub pol_deformed: i64,
    /// `sum_i deg_i * mu_perp_i`, the total Milnor number of the slice.
    pub slice_mu: i64,
    /// `(d-1)^(n-1)`.
    pub slice_bezout: i64,
}

impl YomdinReport {
    pub fn holds(&self) -> bool {
        self.pol <= self.pol_deformed && self.slice_mu <= self.slice_bezout
    }
}

/// `(pol(V ∩ H_gen), pol(V_s))` with `pol(V_s) = (d-1) pol(V ∩ H_gen)`. The
/// generic intersection number of each component with a hyperplane is its
/// degree.
pub fn yomdin_pol(p: &SingularityProfile) -> Result<(i64, i64), FormulaError> {
    let r = yomdin_check(p)?;
    Ok((r.pol_slice, r.pol_deformed))
}

pub fn yomdin_check(p: &SingularityProfile) -> Result<YomdinReport, FormulaError> {
    p.validate()?;
    if p.n < 2 {
        return Err(FormulaError::Schema("generic slicing needs n >= 2".into()));
    }
    let slice_bezout = bezout(p.n - 1, p.d)?;
    let slice_mu: i64 = p.curves.iter().map(|c| i64::from(c.degree) * i64::from(c.mu_transversal)).sum();
    let pol_slice = slice_bezout - slice_mu;
    Ok(YomdinReport {
        pol: pol_one_dim_raw(p)?,
        pol_slice,
        pol_deformed: (i64::from(p.d) - 1) * pol_slice,
        slice_mu,
        slice_bezout,
    })
}

/// Checks `pol(V) <= pol(V_s)` and `sum deg_i mu_perp_i <= (d-1)^(n-1)`.
pub fn yomdin_inequality(p: &SingularityProfile) -> Result<YomdinReport, FormulaError> {
    let r = yomdin_check(p)?;
    if r.slice_mu > r.slice_bezout {
        return Err(FormulaError::YomdinViolation {
            what: "sum deg_i * mu_perp_i <= (d-1)^(n-1)".into(),
            lhs: r.slice_mu,
            rhs: r.slice_bezout,
        });
    }
    if r.pol > r.pol_deformed {
        return Err(FormulaError::YomdinViolation {
            what: "pol(V) <= pol(V_s)".into(),
            lhs: r.pol,
            rhs: r.pol_deformed,
        });
    }
    Ok(r)
}

fn branch_sum(branches: &[(u32, u32)]) -> i64 {
    branches.iter().map(|&(d, mu)| i64::from(d) * i64::from(mu)).sum()
}

/// Local Yomdin series with empty polar locus:
/// `mu(g + s l^N) = -mu(g|_{l=0}) + N sum_j d_j mu_perp_j`.
pub fn yomdin_local_mu(mu_slice: u32, big_n: u32, branches: &[(u32, u32)]) -> Result<i64, FormulaError> {
    if big_n < 2 {
        return Err(FormulaError::Schema(format!("Yomdin exponent must be >= 2, got {big_n}")));
    }
    let mu = -i64::from(mu_slice) + i64::from(big_n) * branch_sum(branches);
    if mu < 0 {
        return Err(FormulaError::Inconsistent(format!("Yomdin series Milnor number {mu} < 0")));
    }
    Ok(mu)
}

/// General form over supplied Milnor fibre Betti numbers:
/// `mu(g_N) = b_top - b_sub + N sum_j d_j mu_perp_j`.
pub fn yomdin_betti_mu(b_top: u32, b_sub: u32, big_n: u32, branches: &[(u32, u32)]) -> Result<i64, FormulaError> {
    if big_n < 2 {
        return Err(FormulaError::Schema(format!("Yomdin exponent must be >= 2, got {big_n}")));
    }
    let mu = i64::from(b_top) - i64::from(b_sub) + i64::from(big_n) * branch_sum(branches);
    if mu < 0 {
        return Err(FormulaError::Inconsistent(format!("Yomdin series Milnor number {mu} < 0")));
    }
    Ok(mu)
}

/// Milnor number of `V_s` at a generic point of a singular curve with
/// transversal Milnor number `mu_perp`: `(d-1) mu_perp`.
pub fn yomdin_line_mu(mu_perp: u32, d: u32) -> Result<i64, FormulaError> {
    yomdin_local_mu(mu_perp, d, &[(1, mu_perp)])
}

#[cfg(test)]
mod tests {
    use super::super::tests::line_profile;
    use super::*;

    #[test]
    fn line_examples() {
        let e1 = line_profile(3, 3, 1, &[2, 2]);
        assert_eq!(yomdin_pol(&e1).unwrap(), (3, 6));
        let r = yomdin_inequality(&e1).unwrap();
        assert_eq!(r.pol, 2);
        assert!(r.holds());

        let e1b = line_profile(4, 3, 2, &[-1, -1]);
        assert_eq!(yomdin_pol(&e1b).unwrap(), (6, 12));
        assert_eq!(yomdin_inequality(&e1b).unwrap().pol, 4);

        let smooth = SingularityProfile::smooth(3, 4);
        let r = yomdin_check(&smooth).unwrap();
        assert_eq!(r.pol_deformed, 27);
        assert_eq!(r.pol_deformed, r.pol);
    }

    #[test]
    fn violations_are_reported() {
        // transversal mu larger than the slice allows
        let bad = line_profile(3, 3, 5, &[]);
        match yomdin_inequality(&bad) {
            Err(FormulaError::YomdinViolation { lhs: 5, rhs: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn local_series() {
        assert_eq!(yomdin_line_mu(1, 3).unwrap(), 2);
        assert_eq!(yomdin_line_mu(2, 3).unwrap(), 4);
        assert_eq!(yomdin_local_mu(3, 5, &[(1, 1), (2, 1)]).unwrap(), 12);
        assert!(yomdin_local_mu(3, 1, &[(1, 1)]).is_err());
        assert!(yomdin_local_mu(30, 2, &[(1, 1)]).is_err());
        // Betti form with b_top = 0, b_sub = mu(g|l=0) agrees with the short form
        assert_eq!(yomdin_betti_mu(0, 3, 5, &[(1, 1), (2, 1)]).unwrap(), 12);
    }
}
