use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FormulaError;

/// Isolated singular point of `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsolatedPoint {
    /// Milnor number.
    pub mu: u32,
    /// Milnor number of the section by a generic hyperplane through the point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_section: Option<u32>,
}

/// A point of a singular curve where the transversal type jumps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecialPoint {
    /// Euler characteristic of the local Milnor fibre of `(V, q)`.
    pub chi_fiber: i64,
    /// Number of local branches of this curve component at the point.
    pub branch_count: u32,
    /// Multiplicity of each local branch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_multiplicities: Option<Vec<u32>>,
    /// Milnor number of the generic hyperplane section at the point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_section: Option<u32>,
    /// Points on different components carrying the same label are one point
    /// of `V`: its fibre term is counted once and its Milnor jump is taken
    /// over the branches of all of them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Irreducible component of the 1-dimensional singular locus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveComponent {
    /// Genus of the normalization.
    pub genus: u32,
    /// Degree as a reduced curve.
    pub degree: u32,
    /// Transversal Milnor number at a generic point.
    pub mu_transversal: u32,
    #[serde(default)]
    pub special_points: Vec<SpecialPoint>,
}

impl CurveComponent {
    /// Number of punctures of the normalization: total local branches over
    /// all special points.
    pub fn punctures(&self) -> i64 {
        self.special_points.iter().map(|q| i64::from(q.branch_count)).sum()
    }

    /// Number of points of the curve on the axis of a generic pencil of
    /// degree `d`.
    pub fn axis_points(&self, d: u32) -> i64 {
        i64::from(d) * i64::from(self.degree)
    }
}

/// Singular locus data of a hypersurface `V` of degree `d` in `P^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularityProfile {
    pub n: u32,
    pub d: u32,
    #[serde(default)]
    pub isolated: Vec<IsolatedPoint>,
    #[serde(default)]
    pub curves: Vec<CurveComponent>,
}

/// A distinct special point of `V`, possibly shared by several components.
#[derive(Debug, Clone)]
pub(crate) struct DistinctSpecial<'a> {
    pub key: String,
    pub chi_fiber: i64,
    pub mu_section: Option<u32>,
    /// `(component index, point)` for every component through the point.
    pub members: Vec<(usize, &'a SpecialPoint)>,
}

impl SingularityProfile {
    pub fn smooth(n: u32, d: u32) -> Self {
        SingularityProfile { n, d, isolated: Vec::new(), curves: Vec::new() }
    }

    /// Profile with isolated singularities only.
    pub fn isolated(n: u32, d: u32, mus: &[u32]) -> Self {
        SingularityProfile {
            n,
            d,
            isolated: mus.iter().map(|&mu| IsolatedPoint { mu, mu_section: None }).collect(),
            curves: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, FormulaError> {
        let p: SingularityProfile = serde_json::from_str(text).map_err(|e| FormulaError::Schema(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    /// Checks the structural invariants of the profile.
    pub fn validate(&self) -> Result<(), FormulaError> {
        let bad = |m: String| Err(FormulaError::Schema(m));
        if self.n < 1 || self.d < 1 {
            return bad(format!("need n >= 1 and d >= 1, got n={} d={}", self.n, self.d));
        }
        for (k, p) in self.isolated.iter().enumerate() {
            if p.mu < 1 {
                return bad(format!("isolated[{k}]: mu must be >= 1"));
            }
            if p.mu_section == Some(0) {
                return bad(format!("isolated[{k}]: mu_section must be >= 1"));
            }
        }
        for (i, c) in self.curves.iter().enumerate() {
            if c.degree < 1 {
                return bad(format!("curves[{i}]: degree must be >= 1"));
            }
            if c.mu_transversal < 1 {
                return bad(format!("curves[{i}]: mu_transversal must be >= 1"));
            }
            for (k, q) in c.special_points.iter().enumerate() {
                if q.branch_count < 1 {
                    return bad(format!("curves[{i}].special_points[{k}]: branch_count must be >= 1"));
                }
                if let Some(m) = &q.branch_multiplicities {
                    if m.len() != q.branch_count as usize {
                        return bad(format!(
                            "curves[{i}].special_points[{k}]: {} multiplicities for {} branches",
                            m.len(),
                            q.branch_count
                        ));
                    }
                    if m.contains(&0) {
                        return bad(format!("curves[{i}].special_points[{k}]: zero branch multiplicity"));
                    }
                }
                if q.mu_section == Some(0) {
                    return bad(format!("curves[{i}].special_points[{k}]: mu_section must be >= 1"));
                }
            }
        }
        for q in self.distinct_special_points() {
            let first = q.members[0].1;
            for (i, other) in &q.members[1..] {
                if other.chi_fiber != first.chi_fiber || other.mu_section != first.mu_section {
                    return bad(format!("special point {:?} on curve {i} disagrees with its other occurrences", q.key));
                }
            }
            let mut seen = std::collections::BTreeSet::new();
            for (i, _) in &q.members {
                if !seen.insert(*i) {
                    return bad(format!("special point {:?} listed twice on curve {i}", q.key));
                }
            }
        }
        Ok(())
    }

    /// The set `Q` of special points, merging labelled occurrences.
    pub(crate) fn distinct_special_points(&self) -> Vec<DistinctSpecial<'_>> {
        let mut labelled: BTreeMap<&str, usize> = BTreeMap::new();
        let mut out: Vec<DistinctSpecial<'_>> = Vec::new();
        for (i, c) in self.curves.iter().enumerate() {
            for (k, q) in c.special_points.iter().enumerate() {
                if let Some(label) = q.label.as_deref() {
                    if let Some(&idx) = labelled.get(label) {
                        out[idx].members.push((i, q));
                        continue;
                    }
                    labelled.insert(label, out.len());
                }
                out.push(DistinctSpecial {
                    key: q.label.clone().unwrap_or_else(|| format!("curve{i}.q{k}")),
                    chi_fiber: q.chi_fiber,
                    mu_section: q.mu_section,
                    members: vec![(i, q)],
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_unknown_keys() {
        let text = r#"{"n":3,"d":3,"isolated":[],"curves":[{"genus":0,"degree":1,"mu_transversal":1,
            "special_points":[{"chi_fiber":2,"branch_count":1},{"chi_fiber":2,"branch_count":1}]}]}"#;
        let p = SingularityProfile::from_json(text).unwrap();
        assert_eq!(p.curves[0].punctures(), 2);
        assert_eq!(SingularityProfile::from_json(&p.to_json()).unwrap(), p);

        let extra = r#"{"n":3,"d":3,"isolated":[],"curves":[],"colour":"red"}"#;
        assert!(matches!(SingularityProfile::from_json(extra), Err(FormulaError::Schema(_))));
        let nested = r#"{"n":3,"d":3,"isolated":[{"mu":1,"tau":1}]}"#;
        assert!(matches!(SingularityProfile::from_json(nested), Err(FormulaError::Schema(_))));
        let fractional = r#"{"n":3,"d":3,"isolated":[{"mu":1.5}]}"#;
        assert!(SingularityProfile::from_json(fractional).is_err());
    }

    #[test]
    fn structural_validation() {
        let mut p = SingularityProfile::isolated(3, 3, &[0]);
        assert!(p.validate().is_err());
        p = SingularityProfile::smooth(0, 3);
        assert!(p.validate().is_err());
        let text = r#"{"n":3,"d":3,"curves":[{"genus":0,"degree":1,"mu_transversal":1,
            "special_points":[{"chi_fiber":2,"branch_count":2,"branch_multiplicities":[1]}]}]}"#;
        assert!(SingularityProfile::from_json(text).is_err());
    }

    #[test]
    fn shared_points_merge_by_label() {
        let text = r#"{"n":3,"d":3,"curves":[
            {"genus":0,"degree":1,"mu_transversal":1,"special_points":[{"chi_fiber":2,"branch_count":1,"label":"q"}]},
            {"genus":0,"degree":1,"mu_transversal":1,"special_points":[{"chi_fiber":2,"branch_count":1,"label":"q"}]}]}"#;
        let p = SingularityProfile::from_json(text).unwrap();
        let q = p.distinct_special_points();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].members.len(), 2);

        let clash = text.replacen("\"chi_fiber\":2", "\"chi_fiber\":3", 1);
        assert!(SingularityProfile::from_json(&clash).is_err());
    }
}
