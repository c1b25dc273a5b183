use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::system::random_complex;
use crate::poly::{CPoly, PolySystem};

/// Total-degree start system `x_i^{d_i} - r_i = 0`.
#[derive(Debug, Clone)]
pub struct StartSystem {
    pub degrees: Vec<u32>,
    pub constants: Vec<Complex64>,
}

impl StartSystem {
    /// Affine equations in `n` unknowns.
    pub fn equations(&self) -> Vec<CPoly> {
        let n = self.degrees.len();
        self.degrees
            .iter()
            .zip(&self.constants)
            .enumerate()
            .map(|(i, (&d, &r))| {
                let mut e = vec![0; n];
                e[i] = d;
                CPoly::from_terms(n, [(Complex64::new(1.0, 0.0), e), (-r, vec![0; n])])
            })
            .collect()
    }

    /// Homogenised equations `z_i^{d_i} - r_i z_0^{d_i}` in `n + 1` unknowns.
    pub fn homogeneous(&self) -> PolySystem {
        let n = self.degrees.len();
        let eqs = self
            .degrees
            .iter()
            .zip(&self.constants)
            .enumerate()
            .map(|(i, (&d, &r))| {
                let mut top = vec![0; n + 1];
                top[i + 1] = d;
                let mut low = vec![0; n + 1];
                low[0] = d;
                CPoly::from_terms(n + 1, [(Complex64::new(1.0, 0.0), top), (-r, low)])
            })
            .collect();
        PolySystem::new(eqs).expect("square start system")
    }

    pub fn root_count(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).product()
    }

    /// The `prod d_i` affine roots, in mixed-radix order of the root-of-unity
    /// indices (first coordinate varies slowest).
    pub fn known_roots(&self) -> Vec<Vec<Complex64>> {
        let bases: Vec<Complex64> =
            self.degrees.iter().zip(&self.constants).map(|(&d, &r)| r.powf(1.0 / f64::from(d))).collect();
        let total = self.root_count();
        (0..total)
            .map(|mut idx| {
                let mut root = vec![Complex64::new(0.0, 0.0); self.degrees.len()];
                for i in (0..self.degrees.len()).rev() {
                    let d = self.degrees[i] as usize;
                    let k = idx % d;
                    idx /= d;
                    let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64);
                    root[i] = bases[i] * w;
                }
                root
            })
            .collect()
    }
}

/// Start system for the given degrees with random constants of modulus in
/// `[0.5, 1.5]`.
pub fn start_system(degrees: &[u32], seed: u64) -> StartSystem {
    assert!(degrees.iter().all(|&d| d >= 1), "start degrees must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let constants = degrees.iter().map(|_| random_complex(&mut rng, 0.5, 1.5)).collect();
    StartSystem { degrees: degrees.to_vec(), constants }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        assert_eq!(start_system(&[2, 2, 2], 1).known_roots().len(), 8);
        assert_eq!(start_system(&[1], 1).known_roots().len(), 1);
        assert_eq!(start_system(&[3, 2], 1).known_roots().len(), 6);
    }

    #[test]
    fn roots_solve_the_start_system() {
        let s = start_system(&[2, 3, 2], 11);
        let sys = PolySystem::new(s.equations()).unwrap();
        let roots = s.known_roots();
        for r in &roots {
            assert!(sys.evaluate(r).unwrap().norm() < 1e-12);
            // nonsingular: Jacobian is diagonal with entries d_i x_i^(d_i - 1)
            let j = sys.jacobian(r).unwrap();
            assert!(j.determinant().norm() > 1e-3);
        }
        // pairwise distinct
        for (a, ra) in roots.iter().enumerate() {
            for rb in &roots[a + 1..] {
                let dist: f64 = ra.iter().zip(rb).map(|(x, y)| (x - y).norm()).sum();
                assert!(dist > 1e-3);
            }
        }
        let hom = s.homogeneous();
        let mut z = vec![Complex64::new(1.0, 0.0)];
        z.extend_from_slice(&roots[3]);
        assert!(hom.evaluate(&z).unwrap().norm() < 1e-12);
    }
}
