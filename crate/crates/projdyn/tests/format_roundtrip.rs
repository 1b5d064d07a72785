use projdyn::format::{map_from_str, map_to_string, point_from_str, to_canonical_string, PointJson};
use projdyn_core::map::quadratic_map;
use projdyn_core::rational::rat;
use projdyn_core::ProjectivePoint;
use proptest::prelude::*;

proptest! {
    #[test]
    fn maps_round_trip(dim in 1usize..=4, seed in proptest::collection::vec((-40i64..=40, 1i64..=12), 40)) {
        let mut it = seed.into_iter().cycle();
        let map = quadratic_map(dim, |_, _, _| {
            let (n, d) = it.next().unwrap();
            rat(n, d)
        });
        let text = map_to_string(&map);
        let back = map_from_str(&text).unwrap();
        prop_assert_eq!(&back, &map);
        prop_assert_eq!(map_to_string(&back), text);
    }

    #[test]
    fn points_round_trip(coords in proptest::collection::vec((-40i64..=40, 1i64..=12), 2..6)) {
        let raw: Vec<_> = coords.iter().map(|&(n, d)| rat(n, d)).collect();
        prop_assume!(raw.iter().any(|r| *r != rat(0, 1)));
        let p = ProjectivePoint::normalize(raw).unwrap();
        let text = to_canonical_string(&PointJson::from(&p));
        prop_assert_eq!(point_from_str(&text).unwrap(), p);
    }
}

#[test]
fn inline_points() {
    assert_eq!(point_from_str("0, 0, 1").unwrap(), ProjectivePoint::base(2));
    assert_eq!(point_from_str("[2, 4]").unwrap(), ProjectivePoint::normalize(vec![rat(1, 2), rat(1, 1)]).unwrap());
    assert!(point_from_str("0, 0").is_err());
    assert!(point_from_str("1/0, 1").is_err());
}

#[test]
fn rejects_malformed_maps() {
    assert!(map_from_str("{").is_err());
    // Last coordinate must be x1^2.
    let bad = r#"{"dimension":1,"degree":2,"coordinates":[[{"exponents":[2,0],"coefficient":"1"}],[{"exponents":[2,0],"coefficient":"1"}]]}"#;
    assert!(map_from_str(bad).is_err());
    // Wrong degree monomial.
    let bad = r#"{"dimension":1,"degree":2,"coordinates":[[{"exponents":[3,0],"coefficient":"1"}],[{"exponents":[0,2],"coefficient":"1"}]]}"#;
    assert!(map_from_str(bad).is_err());
    let bad = r#"{"dimension":1,"degree":2,"coordinates":[[{"exponents":[2,0],"coefficient":"x"}],[{"exponents":[0,2],"coefficient":"1"}]]}"#;
    assert!(map_from_str(bad).is_err());
}
