//! Milnor number jumps at special points and the lower bounds they give.

use serde::{Deserialize, Serialize};

use super::{pol_one_dim_raw, FormulaError, SingularityProfile};

/// `mu(V ∩ H, p) - sum_i mult_i * mu_perp_i`, over the local branches at `p`.
pub fn alpha_jump(mu_section: u32, branch_multiplicities: &[u32], mu_transversals: &[u32]) -> Result<i64, FormulaError> {
    if branch_multiplicities.is_empty() || branch_multiplicities.len() != mu_transversals.len() {
        return Err(FormulaError::Schema(format!(
            "alpha_jump needs equally long non-empty branch lists, got {} and {}",
            branch_multiplicities.len(),
            mu_transversals.len()
        )));
    }
    let generic: i64 =
        branch_multiplicities.iter().zip(mu_transversals).map(|(&m, &mu)| i64::from(m) * i64::from(mu)).sum();
    let alpha = i64::from(mu_section) - generic;
    if alpha < 0 {
        return Err(FormulaError::Inconsistent(format!(
            "negative Milnor jump: section mu {mu_section} < generic contribution {generic}"
        )));
    }
    Ok(alpha)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaEntry {
    pub point: String,
    pub alpha: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub alphas: Vec<AlphaEntry>,
    pub bound: i64,
    /// `pol - alpha_q` at the point realising the bound; the remainder not
    /// explained by the special point.
    pub beta: i64,
}

/// The jump `alpha_q` at every special point: isolated points contribute
/// their sectional Milnor number, curve points their Milnor jump.
pub fn special_alphas(p: &SingularityProfile) -> Result<Vec<AlphaEntry>, FormulaError> {
    p.validate()?;
    let mut out = Vec::new();
    for (k, pt) in p.isolated.iter().enumerate() {
        let name = format!("isolated[{k}]");
        let mu = pt.mu_section.ok_or_else(|| FormulaError::MissingSectional(name.clone()))?;
        out.push(AlphaEntry { point: name, alpha: i64::from(mu) });
    }
    for q in p.distinct_special_points() {
        let mu = q.mu_section.ok_or_else(|| FormulaError::MissingSectional(q.key.clone()))?;
        let mut mults = Vec::new();
        let mut mus = Vec::new();
        for (i, sp) in &q.members {
            let mu_perp = p.curves[*i].mu_transversal;
            match &sp.branch_multiplicities {
                Some(m) => mults.extend_from_slice(m),
                None => mults.extend(std::iter::repeat_n(1, sp.branch_count as usize)),
            }
            mus.extend(std::iter::repeat_n(mu_perp, sp.branch_count as usize));
        }
        out.push(AlphaEntry { point: q.key.clone(), alpha: alpha_jump(mu, &mults, &mus)? });
    }
    Ok(out)
}

/// `max_q alpha_q`, a lower bound for `pol(V)` whenever `V` is not a cone.
pub fn lower_bounds(p: &SingularityProfile) -> Result<AlphaReport, FormulaError> {
    let alphas = special_alphas(p)?;
    let bound = alphas.iter().map(|a| a.alpha).max().unwrap_or(0);
    let beta = pol_one_dim_raw(p)? - bound;
    Ok(AlphaReport { alphas, bound, beta })
}

/// Necessary condition for `pol(V) = 1`: every special point has jump 1.
pub fn homaloidal_filter(p: &SingularityProfile) -> Result<bool, FormulaError> {
    Ok(special_alphas(p)?.iter().all(|a| a.alpha == 1))
}
