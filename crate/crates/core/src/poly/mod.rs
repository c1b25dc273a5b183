//! Exact sparse multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] lives in a fixed ambient ring `Q[x0, ..., x(nvars-1)]`.
//! Terms are stored in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic, so iteration order is the canonical printing order
//! reversed. Zero coefficients are never stored.

mod complex;
mod parse;

pub use complex::{CPoly, ComplexPoint, PolySystem};
pub use parse::{parse, parse_rational};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} out of range for {nvars} variables (position {pos})")]
    VariableOutOfRange { index: usize, nvars: usize, pos: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("non-finite coordinate in complex point")]
    NonFinite,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

/// Exponent vector `[e0, ..., en]` standing for `x0^e0 * ... * xn^en`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: higher total degree is greater; ties broken by
    /// comparing exponents of x0, then x1, and so on.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients in a fixed number of
/// variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, BigRational::one())
    }

    /// The coordinate function `x_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::var(nvars, index), BigRational::one());
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, combining
    /// repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, Vec<u32>)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Linear form `sum_i coeffs[i] * x_i`.
    pub fn linear_form(coeffs: &[BigRational]) -> Self {
        let n = coeffs.len();
        let mut p = Polynomial::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Maximum total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::total_degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.total_degree() == d)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to `x_index`.
    pub fn derivative(&self, index: usize) -> Polynomial {
        assert!(index < self.nvars, "derivative index out of range");
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[index] -= 1;
            out.add_term(Monomial(exps), c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Substitutes `x_i -> images[i]`; every image must live in the same
    /// ring, which becomes the ring of the result.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: images.len() });
        }
        let target = images.first().map_or(0, Polynomial::nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(PolyError::DimensionMismatch { expected: target, got: bad.nvars });
        }
        // cache powers of each image
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Applies the linear change of coordinates `x = M y`, i.e. substitutes
    /// `x_i -> sum_j M[i][j] y_j`.
    pub fn linear_change(&self, matrix: &[Vec<BigRational>]) -> Result<Polynomial, PolyError> {
        let images: Vec<Polynomial> = matrix.iter().map(|row| Polynomial::linear_form(row)).collect();
        if let Some(row) = matrix.iter().find(|r| r.len() != self.nvars) {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: row.len() });
        }
        self.compose(&images)
    }

    /// Restricts to the affine chart where the chart form equals 1 and
    /// drops one variable.
    pub fn substitute_affine_chart(&self, chart: &Chart) -> Result<Polynomial, PolyError> {
        let n = self.nvars;
        if n < 2 {
            return Err(PolyError::DimensionMismatch { expected: 2, got: n });
        }
        let (drop, image) = match chart {
            Chart::Coordinate(i) => {
                if *i >= n {
                    return Err(PolyError::VariableOutOfRange { index: *i, nvars: n, pos: 0 });
                }
                (*i, Polynomial::one(n - 1))
            }
            Chart::Linear(l) => {
                if l.nvars != n {
                    return Err(PolyError::DimensionMismatch { expected: n, got: l.nvars });
                }
                if !(l.is_homogeneous() && l.degree() == 1) {
                    return Err(PolyError::DegreeMismatch("chart form must be linear".into()));
                }
                let coeffs: Vec<BigRational> = (0..n).map(|i| l.coefficient(&Monomial::var(n, i))).collect();
                let k = coeffs.iter().rposition(|c| !c.is_zero()).expect("nonzero linear form");
                // x_k = (1 - sum_{j != k} l_j x_j) / l_k, in the remaining variables
                let inv = coeffs[k].recip();
                let mut img = Polynomial::constant(n - 1, inv.clone());
                for (j, c) in coeffs.iter().enumerate() {
                    if j == k || c.is_zero() {
                        continue;
                    }
                    let jj = if j < k { j } else { j - 1 };
                    img = &img - &Polynomial::var(n - 1, jj).scale(&(c * &inv));
                }
                (k, img)
            }
        };
        let images: Vec<Polynomial> = (0..n)
            .map(|i| match i.cmp(&drop) {
                Ordering::Less => Polynomial::var(n - 1, i),
                Ordering::Equal => image.clone(),
                Ordering::Greater => Polynomial::var(n - 1, i - 1),
            })
            .collect();
        self.compose(&images)
    }

    /// Exact rational evaluation.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Lowers coefficients to double precision complex numbers.
    pub fn to_complex(&self) -> CPoly {
        CPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (num_complex::Complex64::new(rational_to_f64(c), 0.0), m.0.clone())),
        )
    }

    /// Sum of absolute values of the coefficients, as a double.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| rational_to_f64(&c.abs())).sum()
    }
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    if let Some(v) = c.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Scale down huge numerators/denominators before dividing.
    let n = c.numer().to_f64().unwrap_or(f64::INFINITY);
    let d = c.denom().to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Affine chart selector.
#[derive(Debug, Clone, PartialEq)]
pub enum Chart {
    /// `x_i = 1`.
    Coordinate(usize),
    /// `l = 1` for a linear form `l`.
    Linear(Polynomial),
}

/// Returns `f + s * l^d`. `f` must be homogeneous of degree `d` (or zero) and
/// `l` a linear form in the same ring.
pub fn deform(f: &Polynomial, l: &Polynomial, d: u32, s: &BigRational) -> Result<Polynomial, PolyError> {
    if f.nvars() != l.nvars() {
        return Err(PolyError::DimensionMismatch { expected: f.nvars(), got: l.nvars() });
    }
    if l.is_zero() || !l.is_homogeneous() || l.degree() != 1 {
        return Err(PolyError::DegreeMismatch("deformation form must be a nonzero linear form".into()));
    }
    if !f.is_zero() && (!f.is_homogeneous() || f.degree() != d) {
        return Err(PolyError::DegreeMismatch(format!(
            "l^{d} has degree {d} but f has degree {} (homogeneous: {})",
            f.degree(),
            f.is_homogeneous()
        )));
    }
    Ok(f + &l.pow(d).scale(s))
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        parse::write_canonical(self, f)
    }
}
