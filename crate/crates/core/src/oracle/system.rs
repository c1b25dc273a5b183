use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OracleError;
use crate::poly::{CPoly, Monomial, PolySystem, Polynomial};

/// Square system whose regular solutions are the points of `P^n` where
/// `grad f` is parallel to a fixed generic target `b`.
///
/// Equations are `b0 * d_i f - b_i * d_0 f` for `i = 1..n`, written in
/// rotated coordinates `x = R y`. They are homogeneous of degree `d - 1` in
/// `y0..yn`; the tracker works on the projective patch `patch . y = 1`.
#[derive(Debug, Clone)]
pub struct FiberSystem {
    pub source: Polynomial,
    /// `x = R y` with `R` rational orthogonal.
    pub rotation: Vec<Vec<BigRational>>,
    /// `f(R y)`.
    pub rotated: Polynomial,
    pub target: Vec<Complex64>,
    /// Coefficients of the linear form fixing the projective patch.
    pub patch: Vec<Complex64>,
    pub equations: PolySystem,
    /// Gradient of the rotated polynomial, coefficients scaled as in `equations`.
    pub gradient: PolySystem,
    pub degree: u32,
}

impl FiberSystem {
    /// Number of unknowns of the affine chart `y0 = 1`.
    pub fn n(&self) -> usize {
        self.equations.len()
    }

    /// Total-degree bound `(d-1)^n`.
    pub fn bezout(&self) -> u64 {
        self.equations.degrees().iter().map(|&k| u64::from(k)).product()
    }

    /// The equations restricted to the chart `y0 = 1`, as polynomials in the
    /// `n` affine unknowns `y1..yn`.
    pub fn affine_equations(&self) -> Vec<CPoly> {
        self.equations
            .equations()
            .iter()
            .map(|e| {
                CPoly::from_terms(self.n(), e.terms().iter().map(|(c, exps)| (*c, exps[1..].to_vec())))
            })
            .collect()
    }
}

/// Builds the fiber system of `f` with randomness drawn from `seed`.
pub fn build_fiber_system(f: &Polynomial, seed: u64) -> Result<FiberSystem, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    check_input(f)?;
    let nv = f.nvars();
    let d = f.degree();
    let rotation = random_rotation(nv, &mut rng);
    let rotated = f.linear_change(&rotation)?;

    let target: Vec<Complex64> = (0..nv).map(|_| random_complex(&mut rng, 0.5, 1.5)).collect();
    let patch: Vec<Complex64> = (0..nv).map(|_| random_complex(&mut rng, 0.5, 1.5)).collect();

    // normalise so the largest coefficient has modulus one
    let lowered = rotated.to_complex();
    let big = lowered.terms().iter().map(|(c, _)| c.norm()).fold(0.0, f64::max);
    let lowered = lowered.scale(Complex64::new(1.0 / big, 0.0));
    let grad: Vec<CPoly> = (0..nv).map(|i| lowered.derivative(i)).collect();

    let equations: Vec<CPoly> =
        (1..nv).map(|i| grad[i].scale(target[0]).add(&grad[0].scale(-target[i]))).collect();
    if let Some(k) = equations.iter().position(|e| e.terms().is_empty()) {
        return Err(OracleError::Degenerate(format!("fiber equation {} vanishes identically", k + 1)));
    }
    Ok(FiberSystem {
        source: f.clone(),
        rotation,
        rotated,
        target,
        patch,
        equations: PolySystem::new(equations)?,
        gradient: PolySystem::new(grad)?,
        degree: d,
    })
}

pub(crate) fn check_input(f: &Polynomial) -> Result<(), OracleError> {
    if f.is_zero() {
        return Err(OracleError::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(OracleError::NotHomogeneous);
    }
    if f.nvars() < 2 {
        return Err(OracleError::Degenerate("need at least two homogeneous variables".into()));
    }
    if f.degree() < 2 {
        return Err(OracleError::DegreeTooLow(f.degree()));
    }
    Ok(())
}

/// Uniform modulus in `[lo, hi]`, uniform phase.
pub(crate) fn random_complex(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let r = rng.random_range(lo..=hi);
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, theta)
}

/// Random rational orthogonal matrix via the Cayley transform
/// `(I - S)(I + S)^-1` of a random integer skew-symmetric `S`.
pub(crate) fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<BigRational>> {
    let q = |v: i64| BigRational::from_integer(v.into());
    let mut s = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let mut v = 0;
            while v == 0 {
                v = rng.random_range(-3i64..=3);
            }
            s[i][j] = q(v);
            s[j][i] = q(-v);
        }
    }
    let ident = |i: usize, j: usize| if i == j { BigRational::one() } else { BigRational::zero() };
    let minus: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| ident(i, j) - &s[i][j]).collect()).collect();
    let plus: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| ident(i, j) + &s[i][j]).collect()).collect();
    let inv = invert(plus).expect("I + S is invertible for real skew-symmetric S");
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &minus[i][k] * &inv[k][j]))
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse over the rationals.
pub(crate) fn invert(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].recip();
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let t = &factor * &a[col][j];
                a[r][j] = &a[r][j] - t;
                let t = &factor * &inv[col][j];
                inv[r][j] = &inv[r][j] - t;
            }
        }
    }
    Some(inv)
}

/// Random rational linear form with small integer coefficients, all nonzero.
pub fn random_linear_form(nvars: usize, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<BigRational> = (0..nvars)
        .map(|_| {
            let mut v = 0;
            while v == 0 {
                v = rng.random_range(-9i64..=9);
            }
            BigRational::from_integer(v.into())
        })
        .collect();
    Polynomial::linear_form(&coeffs)
}

/// Restriction of `f` to the hyperplane `l = 0`, as a polynomial in one
/// variable fewer. The last variable with nonzero coefficient in `l` is
/// eliminated.
pub fn restrict_to_hyperplane(f: &Polynomial, l: &Polynomial) -> Result<Polynomial, OracleError> {
    let n = f.nvars();
    let coeffs: Vec<BigRational> =
        (0..n).map(|i| l.coefficient(&Monomial::var(n, i))).collect();
    if !(l.is_homogeneous() && l.degree() == 1) || coeffs.iter().all(Zero::is_zero) {
        return Err(OracleError::Degenerate("hyperplane must be a nonzero linear form".into()));
    }
    let k = coeffs.iter().rposition(|c| !c.is_zero()).expect("nonzero");
    let inv = coeffs[k].recip();
    let mut image = Polynomial::zero(n - 1);
    for (j, c) in coeffs.iter().enumerate() {
        if j == k || c.is_zero() {
            continue;
        }
        let jj = if j < k { j } else { j - 1 };
        image = &image - &Polynomial::var(n - 1, jj).scale(&(c * &inv));
    }
    let images: Vec<Polynomial> = (0..n)
        .map(|i| match i.cmp(&k) {
            std::cmp::Ordering::Less => Polynomial::var(n - 1, i),
            std::cmp::Ordering::Equal => image.clone(),
            std::cmp::Ordering::Greater => Polynomial::var(n - 1, i - 1),
        })
        .collect();
    Ok(f.compose(&images)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    #[test]
    fn rotation_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = random_rotation(4, &mut rng);
        for i in 0..4 {
            for j in 0..4 {
                let dot = (0..4).fold(BigRational::zero(), |acc, k| acc + &r[k][i] * &r[k][j]);
                let expected = if i == j { BigRational::one() } else { BigRational::zero() };
                assert_eq!(dot, expected);
            }
        }
    }

    #[test]
    fn fermat_and_e1_systems() {
        let fermat = parse("x0^3+x1^3+x2^3+x3^3", 4).unwrap();
        let sys = build_fiber_system(&fermat, 1).unwrap();
        assert_eq!(sys.n(), 3);
        assert_eq!(sys.equations.degrees(), vec![2, 2, 2]);
        assert_eq!(sys.bezout(), 8);
        let aff = sys.affine_equations();
        assert_eq!(aff.len(), 3);
        assert!(aff.iter().all(|e| e.nvars() == 3 && e.degree() <= 2));

        let e1 = parse("x0^2*x2 + x1^2*x3", 4).unwrap();
        let sys = build_fiber_system(&e1, 2).unwrap();
        assert_eq!(sys.equations.degrees(), vec![2, 2, 2]);
        assert_eq!(sys.bezout(), 8);
        assert!(sys.rotated.is_homogeneous());
        assert_eq!(sys.rotated.degree(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(build_fiber_system(&parse("x0+x1", 2).unwrap(), 0), Err(OracleError::DegreeTooLow(1))));
        assert!(matches!(build_fiber_system(&parse("0", 3).unwrap(), 0), Err(OracleError::ZeroPolynomial)));
        assert!(matches!(build_fiber_system(&parse("x0^2+x1", 2).unwrap(), 0), Err(OracleError::NotHomogeneous)));
    }

    #[test]
    fn hyperplane_restriction() {
        let f = parse("x0^2*x2 + x1^2*x3", 4).unwrap();
        // x3 = x0 + x1 - x2
        let l = parse("x0 + x1 - x2 - x3", 4).unwrap();
        let g = restrict_to_hyperplane(&f, &l).unwrap();
        assert_eq!(g, parse("x0^2*x2 + x1^2*x0 + x1^3 - x1^2*x2", 3).unwrap());
    }
}
