use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{PolyError, Polynomial};

/// A point of `C^k` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoint(Vec<Complex64>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, PolyError> {
        if coords.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(ComplexPoint(coords))
        } else {
            Err(PolyError::NonFinite)
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

impl Polynomial {
    /// Evaluates the double precision lowering of `self` at `p`.
    pub fn evaluate_complex(&self, p: &ComplexPoint) -> Result<Complex64, PolyError> {
        self.to_complex().evaluate(p.coords())
    }
}

/// Sparse polynomial with complex double coefficients. This is the form the
/// path tracker works with.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    nvars: usize,
    max_exp: u32,
    terms: Vec<(Complex64, Vec<u32>)>,
}

impl CPoly {
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Complex64, Vec<u32>)>,
    {
        let terms: Vec<_> = terms.into_iter().filter(|(c, _)| *c != Complex64::new(0.0, 0.0)).collect();
        let max_exp = terms.iter().flat_map(|(_, e)| e.iter().copied()).max().unwrap_or(0);
        CPoly { nvars, max_exp, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Complex64, Vec<u32>)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> CPoly {
        CPoly::from_terms(self.nvars, self.terms.iter().map(|(a, e)| (a * c, e.clone())))
    }

    /// Sum of two polynomials; like monomials are merged.
    pub fn add(&self, other: &CPoly) -> CPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut merged: std::collections::BTreeMap<Vec<u32>, Complex64> = std::collections::BTreeMap::new();
        for (c, e) in self.terms.iter().chain(&other.terms) {
            *merged.entry(e.clone()).or_default() += c;
        }
        CPoly::from_terms(self.nvars, merged.into_iter().map(|(e, c)| (c, e)))
    }

    pub fn derivative(&self, index: usize) -> CPoly {
        CPoly::from_terms(
            self.nvars,
            self.terms.iter().filter(|(_, e)| e[index] > 0).map(|(c, e)| {
                let mut e2 = e.clone();
                e2[index] -= 1;
                (c * f64::from(e[index]), e2)
            }),
        )
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Result<Complex64, PolyError> {
        if x.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: x.len() });
        }
        Ok(self.eval_unchecked(&power_table(x, self.max_exp)))
    }

    fn eval_unchecked(&self, powers: &[Vec<Complex64>]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, e) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= powers[i][k as usize];
                }
            }
            acc += t;
        }
        acc
    }
}

fn power_table(x: &[Complex64], max_exp: u32) -> Vec<Vec<Complex64>> {
    x.iter()
        .map(|&xi| {
            let mut row = Vec::with_capacity(max_exp as usize + 1);
            row.push(Complex64::new(1.0, 0.0));
            for k in 1..=max_exp as usize {
                row.push(row[k - 1] * xi);
            }
            row
        })
        .collect()
}

/// A list of complex polynomials in a common set of unknowns together with
/// their symbolic Jacobian.
#[derive(Debug, Clone)]
pub struct PolySystem {
    nvars: usize,
    max_exp: u32,
    equations: Vec<CPoly>,
    jacobian: Vec<Vec<CPoly>>,
}

impl PolySystem {
    pub fn new(equations: Vec<CPoly>) -> Result<Self, PolyError> {
        let nvars = equations.first().map_or(0, CPoly::nvars);
        if let Some(bad) = equations.iter().find(|e| e.nvars != nvars) {
            return Err(PolyError::DimensionMismatch { expected: nvars, got: bad.nvars });
        }
        let jacobian: Vec<Vec<CPoly>> =
            equations.iter().map(|e| (0..nvars).map(|j| e.derivative(j)).collect()).collect();
        let max_exp = equations.iter().map(|e| e.max_exp).max().unwrap_or(0);
        Ok(PolySystem { nvars, max_exp, equations, jacobian })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn equations(&self) -> &[CPoly] {
        &self.equations
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.equations.iter().map(CPoly::degree).collect()
    }

    fn check(&self, x: &[Complex64]) -> Result<(), PolyError> {
        if x.len() == self.nvars {
            Ok(())
        } else {
            Err(PolyError::DimensionMismatch { expected: self.nvars, got: x.len() })
        }
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Result<DVector<Complex64>, PolyError> {
        self.check(x)?;
        let pw = power_table(x, self.max_exp);
        Ok(DVector::from_iterator(self.len(), self.equations.iter().map(|e| e.eval_unchecked(&pw))))
    }

    pub fn jacobian(&self, x: &[Complex64]) -> Result<DMatrix<Complex64>, PolyError> {
        self.check(x)?;
        let pw = power_table(x, self.max_exp);
        Ok(DMatrix::from_fn(self.len(), self.nvars, |i, j| self.jacobian[i][j].eval_unchecked(&pw)))
    }

    /// Values and Jacobian from one shared power table.
    pub fn evaluate_with_jacobian(
        &self,
        x: &[Complex64],
    ) -> Result<(DVector<Complex64>, DMatrix<Complex64>), PolyError> {
        self.check(x)?;
        let pw = power_table(x, self.max_exp);
        let v = DVector::from_iterator(self.len(), self.equations.iter().map(|e| e.eval_unchecked(&pw)));
        let j = DMatrix::from_fn(self.len(), self.nvars, |i, k| self.jacobian[i][k].eval_unchecked(&pw));
        Ok((v, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_square() {
        let f = parse("x0^2", 1).unwrap();
        let p = ComplexPoint::new(vec![c(2.0, 0.0)]).unwrap();
        assert_eq!(f.evaluate_complex(&p).unwrap(), c(4.0, 0.0));
        let bad = ComplexPoint::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(f.evaluate_complex(&bad), Err(PolyError::DimensionMismatch { .. })));
    }

    #[test]
    fn jacobian_of_diagonal_system() {
        let sys = PolySystem::new(vec![
            parse("x0^2 - 1", 2).unwrap().to_complex(),
            parse("x1^2 - 1", 2).unwrap().to_complex(),
        ])
        .unwrap();
        let x = [c(1.0, 0.0), c(1.0, 0.0)];
        let j = sys.jacobian(&x).unwrap();
        assert_eq!(j, DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]));
        assert_eq!(sys.evaluate(&x).unwrap().norm(), 0.0);
    }

    #[test]
    fn rejects_non_finite_points() {
        assert!(ComplexPoint::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexPoint::new(vec![c(0.0, f64::INFINITY)]).is_err());
    }
}
