use projdyn::fixtures::{
    all_fixtures, fixture_source, load_fixture, parse_fixture, period3_factor, period8_factor, verify_all, verify_fixtures,
    FixtureError, FIXTURE_IDS,
};
use projdyn::format::{map_to_string, to_canonical_string};
use projdyn_core::morphism_cert::{is_morphism, MorphismDecision};
use projdyn_core::orbits::{assert_primitive_period, OrbitLimits};
use projdyn_core::products::product_map;
use projdyn_core::rational::{parse_rational, Rational};
use projdyn_core::{HomogeneousForm, Monomial, ProjectivePoint};

/// Builds a form from `(coefficient, [variables])` pairs, e.g.
/// `("-38/45", &[0, 0])` for -38/45 x0^2.
fn form(dim: usize, terms: &[(&str, &[usize])]) -> HomogeneousForm {
    let parsed = terms.iter().map(|(c, vars)| {
        let mut e = vec![0u32; dim + 1];
        for &v in *vars {
            e[v] += 1;
        }
        (Monomial::new(e), parse_rational(c).unwrap())
    });
    HomogeneousForm::from_terms(dim, 2, parsed).unwrap()
}

#[test]
fn printed_coefficients() {
    let ex1 = load_fixture("ex1_p2_period9").unwrap().map;
    assert_eq!(
        ex1.coordinates()[0],
        form(2, &[("-38/45", &[0, 0]), ("2", &[0, 1]), ("-7/45", &[0, 2]), ("-1/2", &[1, 1]), ("-1/2", &[1, 2]), ("1", &[2, 2])])
    );
    assert_eq!(ex1.coordinates()[1], form(2, &[("-67/90", &[0, 0]), ("2", &[0, 1]), ("157/90", &[0, 2]), ("-1", &[1, 2])]));

    let ex2 = load_fixture("ex2_p3_period24").unwrap().map;
    assert_eq!(
        ex2.coordinates()[0],
        form(3, &[("-1", &[0, 1]), ("-1", &[0, 3]), ("-13/30", &[1, 1]), ("13/30", &[1, 3]), ("1", &[3, 3])])
    );
    assert_eq!(
        ex2.coordinates()[1],
        form(3, &[("-1/2", &[0, 0]), ("-1", &[0, 1]), ("3/2", &[0, 3]), ("-1/3", &[1, 1]), ("4/3", &[1, 3])])
    );
    assert_eq!(ex2.coordinates()[2], form(3, &[("-3/2", &[2, 2]), ("5/2", &[2, 3]), ("1", &[3, 3])]));

    let sec1 = load_fixture("sec1_p1_period3").unwrap().map;
    assert_eq!(sec1.coordinates()[0], form(1, &[("-3/2", &[0, 0]), ("5/2", &[0, 1]), ("1", &[1, 1])]));
    for f in all_fixtures() {
        let n = f.map.dimension();
        assert_eq!(f.map.coordinates()[n], form(n, &[("1", &[n, n])]));
        assert_eq!(f.point, ProjectivePoint::base(n));
    }
}

#[test]
fn serialization_round_trips_byte_exactly() {
    for id in FIXTURE_IDS {
        let text = fixture_source(id).unwrap();
        let parsed = parse_fixture(text).unwrap();
        assert_eq!(parsed.to_canonical_string(), text, "{}", id);
    }
}

#[test]
fn larger_example_reuses_period_nine_forms() {
    let ex1 = load_fixture("ex1_p2_period9").unwrap().map;
    let ex3 = load_fixture("ex3_p4_period72").unwrap().map;
    for i in 0..2 {
        assert_eq!(ex1.coordinates()[i].remap(4, &[0, 1, 4]), ex3.coordinates()[i]);
    }
}

#[test]
fn examples_are_products_of_their_factors() {
    let p8 = period8_factor();
    assert_eq!(assert_primitive_period(&p8, &ProjectivePoint::base(2), 8).unwrap().period, 8);
    assert_eq!(is_morphism(&p8).decision, MorphismDecision::Morphism);
    let sec1 = load_fixture("sec1_p1_period3").unwrap().map;
    assert_eq!(period3_factor(), sec1);

    let ex2 = load_fixture("ex2_p3_period24").unwrap().map;
    assert_eq!(map_to_string(&product_map(&p8, &sec1).unwrap()), map_to_string(&ex2));
    let ex1 = load_fixture("ex1_p2_period9").unwrap().map;
    let ex3 = load_fixture("ex3_p4_period72").unwrap().map;
    assert_eq!(map_to_string(&product_map(&ex1, &p8).unwrap()), map_to_string(&ex3));
}

#[test]
fn verify_all_passes() {
    let report = verify_all(&OrbitLimits::default());
    assert!(report.passed(), "{}", to_canonical_string(&report));
    assert_eq!(report.period_passes(), 4);
    assert_eq!(report.morphism_passes(), 3);
}

#[test]
fn corrupted_coefficient_breaks_the_orbit() {
    let text = fixture_source("ex1_p2_period9").unwrap().replace("\"-38/45\"", "\"-38/44\"");
    let corrupted = parse_fixture(&text).unwrap();
    // Independent oracle: plain iteration never returns within 100 steps
    // (or the heights explode first).
    let mut p = corrupted.point.clone();
    let mut returned = false;
    for _ in 0..100 {
        p = corrupted.map.evaluate(&p).unwrap();
        if p == corrupted.point {
            returned = true;
            break;
        }
        if p.bit_height() > 100_000 {
            break;
        }
    }
    assert!(!returned);
    let report = verify_fixtures(&[corrupted], &OrbitLimits::default());
    assert!(!report.checks[0].period_ok);
    assert!(!report.passed());
}

#[test]
fn empty_fixture_set() {
    let report = verify_fixtures(&[], &OrbitLimits::default());
    assert!(report.checks.is_empty());
    assert!(report.passed());
}

#[test]
fn unknown_fixture() {
    assert!(matches!(load_fixture("ex9"), Err(FixtureError::UnknownFixture(_))));
}

/// Rational to F_p.
fn reduce(r: &Rational, p: i64) -> i64 {
    let m = |v: &num_bigint::BigInt| -> i64 {
        let x: i64 = (v % p).try_into().unwrap();
        (x + p) % p
    };
    let (n, d) = (m(r.numer()), m(r.denom()));
    let mut inv = 1i64;
    let (mut b, mut e) = (d, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    n * inv % p
}

fn eval_mod(f: &HomogeneousForm, x: &[i64], p: i64) -> i64 {
    f.terms().fold(0, |acc, (m, c)| {
        let mono = m.exponents().iter().zip(x).fold(1i64, |a, (&e, &v)| (0..e).fold(a, |a, _| a * v % p));
        (acc + reduce(c, p) * mono) % p
    })
}

/// On x4 = 0 the P^4 example splits into two binary blocks, so a common
/// zero needs a common zero of one block over P^1(F_p) (the other block's
/// variables may vanish). Every point of P^1(F_p) is checked.
#[test]
fn no_common_zero_at_infinity_mod_small_primes() {
    let ex3 = load_fixture("ex3_p4_period72").unwrap().map;
    for p in [101i64, 10007] {
        for (forms, vars) in [([0usize, 1], [0usize, 1]), ([2, 3], [2, 3])] {
            let points = std::iter::once((1i64, 0i64)).chain((0..p).map(|t| (t, 1)));
            for (a, b) in points {
                let mut x = vec![0i64; 5];
                x[vars[0]] = a;
                x[vars[1]] = b;
                let zero = forms.iter().all(|&i| eval_mod(&ex3.coordinates()[i], &x, p) == 0);
                assert!(!zero, "common zero mod {} at {:?}", p, x);
            }
        }
    }
}
