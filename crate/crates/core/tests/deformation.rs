use num_bigint::BigInt;
use num_rational::BigRational;
use polardeg_core::formula::{yomdin_inequality, yomdin_pol};
use polardeg_core::oracle::{random_linear_form, restrict_to_hyperplane, solve_count};
use polardeg_core::poly::deform;
use polardeg_core::{parse, Catalog, Polynomial, TrackerConfig};

fn s_values() -> Vec<BigRational> {
    [1000, 100, 10].iter().map(|&k| BigRational::new(BigInt::from(1), BigInt::from(k))).collect()
}

fn count(f: &Polynomial) -> u64 {
    let r = solve_count(f, &TrackerConfig::default()).unwrap();
    assert!(r.consensus, "no consensus: {:?}", r.per_trial_counts);
    r.pol_estimate
}

#[test]
fn polar_degree_is_lower_semicontinuous() {
    let cat = Catalog::builtin();
    for name in ["E1", "E2", "CN"] {
        let f = cat.get(name).unwrap().polynomial().unwrap().unwrap();
        let base = count(&f);
        for k in 0..3 {
            let l = random_linear_form(4, 100 + k);
            for s in s_values() {
                let g = deform(&f, &l, 3, &s).unwrap();
                let c = count(&g);
                assert!(c >= base, "{name}: pol(f + {s} l^3) = {c} < {base} with l = {l}");
            }
        }
    }
}

#[test]
fn yomdin_identity_on_e1() {
    let cat = Catalog::builtin();
    let entry = cat.get("E1").unwrap();
    let f = entry.polynomial().unwrap().unwrap();
    let l = random_linear_form(4, 7);
    let slice = count(&restrict_to_hyperplane(&f, &l).unwrap());
    let deformed = count(&deform(&f, &l, 3, &BigRational::new(1.into(), 100.into())).unwrap());
    assert_eq!(slice, 3);
    assert_eq!(deformed, 6);
    assert_eq!(deformed, 2 * slice);

    let profile = entry.profile.as_ref().unwrap();
    assert_eq!(yomdin_pol(profile).unwrap(), (3, 6));
    let r = yomdin_inequality(profile).unwrap();
    assert!(r.pol <= r.pol_deformed);
}

#[test]
fn yomdin_identity_on_the_four_dimensional_example() {
    let f = parse("x0^2*x2 + x1^2*x3 + x4^3", 5).unwrap();
    let l = random_linear_form(5, 11);
    let slice = count(&restrict_to_hyperplane(&f, &l).unwrap());
    let deformed = count(&deform(&f, &l, 3, &BigRational::new(1.into(), 100.into())).unwrap());
    assert_eq!(slice, 6);
    assert_eq!(deformed, 12);
}
