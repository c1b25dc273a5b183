use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use polardeg_core::formula::{
    bezout, chi_slice, chi_v, cone_pol_check, consistency_check, pol_isolated, pol_one_dim, CurveComponent,
    FormulaError, IsolatedPoint, SpecialPoint,
};
use polardeg_core::poly::ComplexPoint;
use polardeg_core::{parse, Polynomial, SingularityProfile};

const NV: usize = 3;

fn seeded(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed), ..ProptestConfig::default() }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((rational(), prop::collection::vec(0u32..=3, NV)), 0..6)
        .prop_map(|terms| Polynomial::from_terms(NV, terms))
}

fn homogeneous(d: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((rational(), 0u32..=d, 0u32..=d), 1..6).prop_map(move |raw| {
        let terms = raw.into_iter().filter(|(_, a, b)| a + b <= d).map(|(c, a, b)| (c, vec![a, b, d - a - b]));
        Polynomial::from_terms(NV, terms)
    })
}

fn point() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(rational(), NV)
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

proptest! {
    #![proptest_config(seeded(100))]

    #[test]
    fn ring_axioms(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(NV), a.clone());
    }

    #[test]
    fn leibniz_rule(a in polynomial(), b in polynomial(), i in 0usize..NV) {
        let lhs = (&a * &b).derivative(i);
        let rhs = &(&a.derivative(i) * &b) + &(&a * &b.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_relation((d, f) in (1u32..=4).prop_flat_map(|d| (Just(d), homogeneous(d)))) {
        let euler = f
            .gradient()
            .iter()
            .enumerate()
            .fold(Polynomial::zero(NV), |acc, (i, g)| &acc + &(&Polynomial::var(NV, i) * g));
        prop_assert_eq!(euler, f.scale(&BigRational::from_integer(d.into())));
    }

    #[test]
    fn parse_print_round_trip(a in polynomial()) {
        let text = a.to_string();
        prop_assert_eq!(parse(&text, NV).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in polynomial(), b in polynomial(), x in point()) {
        let ab = (&a * &b).evaluate(&x).unwrap();
        prop_assert_eq!(ab, a.evaluate(&x).unwrap() * b.evaluate(&x).unwrap());
    }
}

proptest! {
    #![proptest_config(seeded(50))]

    #[test]
    fn complex_evaluation_matches_exact(a in polynomial(), x in point()) {
        let exact = to_f64(&a.evaluate(&x).unwrap());
        let z = ComplexPoint::new(x.iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect()).unwrap();
        let approx = a.evaluate_complex(&z).unwrap();
        let scale = 1.0 + exact.abs();
        prop_assert!((approx.re - exact).abs() <= 1e-12 * scale, "{} vs {}", approx, exact);
        prop_assert!(approx.im.abs() <= 1e-12 * scale);
    }
}

fn special_point() -> impl Strategy<Value = SpecialPoint> {
    (-6i64..=8, 1u32..=3, prop::option::of(1u32..=6)).prop_map(|(chi_fiber, branch_count, mu_section)| SpecialPoint {
        chi_fiber,
        branch_count,
        branch_multiplicities: None,
        mu_section,
        label: None,
    })
}

fn profile() -> impl Strategy<Value = SingularityProfile> {
    (1u32..=5, 2u32..=5).prop_flat_map(|(n, d)| {
        let isolated = prop::collection::vec((1u32..=6).prop_map(|mu| IsolatedPoint { mu, mu_section: None }), 0..4);
        let curves = prop::collection::vec(
            (0u32..=2, 1u32..=3, 1u32..=4, prop::collection::vec(special_point(), 0..3)).prop_map(
                |(genus, degree, mu_transversal, special_points)| CurveComponent {
                    genus,
                    degree,
                    mu_transversal,
                    special_points,
                },
            ),
            0..3,
        );
        (Just(n), Just(d), isolated, curves).prop_map(|(n, d, isolated, curves)| SingularityProfile { n, d, isolated, curves })
    })
}

fn isolated_profile() -> impl Strategy<Value = SingularityProfile> {
    (1u32..=5, 2u32..=5).prop_flat_map(|(n, d)| {
        let top = bezout(n, d).unwrap() as u32;
        prop::collection::vec(1u32..=top.max(1), 0..5).prop_map(move |mus| {
            // keep sum mu within the Bezout number
            let mut left = top;
            let kept: Vec<u32> = mus
                .into_iter()
                .filter(|&m| {
                    let ok = m <= left;
                    if ok {
                        left -= m;
                    }
                    ok
                })
                .collect();
            SingularityProfile::isolated(n, d, &kept)
        })
    })
}

proptest! {
    #![proptest_config(seeded(1000))]

    #[test]
    fn euler_characteristics_are_consistent(p in profile()) {
        prop_assert!(consistency_check(&p), "chi_v {:?} chi_slice {:?}", chi_v(&p), chi_slice(&p));
    }

    #[test]
    fn formula_values_stay_in_range(p in profile()) {
        let top = bezout(p.n, p.d).unwrap();
        match pol_one_dim(&p) {
            Ok(r) => prop_assert!((0..=top).contains(&r.pol)),
            Err(FormulaError::Inconsistent(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn curve_free_profiles_agree_with_the_isolated_formula(p in isolated_profile()) {
        let a = pol_one_dim(&p).unwrap();
        let b = pol_isolated(&p).unwrap();
        prop_assert_eq!(a.pol, b.pol);
        prop_assert!(a.pol >= 0 && a.pol <= bezout(p.n, p.d).unwrap());
    }

    #[test]
    fn cones_have_polar_degree_zero(n in 2u32..=5, d in 2u32..=5, mus in prop::collection::vec(1u32..=8, 0..4)) {
        prop_assert!(cone_pol_check(n, d, &mus).unwrap());
    }
}

#[test]
fn zero_polynomial_prints_and_parses() {
    let z = Polynomial::zero(NV);
    assert_eq!(parse(&z.to_string(), NV).unwrap(), z);
}
