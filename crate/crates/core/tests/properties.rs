use proptest::prelude::*;
use secpoly::census::{enumerate_subdivisions, EnumerateOptions};
use secpoly::gale::{arc_crossings, chamber_count, SphericalVectors};
use secpoly::geometry::cross;
use secpoly::rational::{int, ratio};
use secpoly::{
    convex_hull, in_general_position, is_regular, lift_subdivision, orientation, refine_with, refines,
    validate_subdivision, HeightVector, Point2, PointConfiguration, Rational,
};

fn config(n: usize) -> impl Strategy<Value = PointConfiguration> {
    prop::collection::vec((-20i64..=20, -20i64..=20), n)
        .prop_filter_map("general position", |pts| {
            PointConfiguration::from_ints(&pts).ok().filter(in_general_position)
        })
}

fn config_with_heights(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (PointConfiguration, Vec<i64>)> {
    sizes.prop_flat_map(|n| (config(n), prop::collection::vec(-6i64..=6, n)))
}

fn heights(values: &[i64]) -> HeightVector {
    HeightVector::new(values.iter().map(|&h| int(h)).collect())
}

fn point() -> impl Strategy<Value = Point2> {
    (-50i64..=50, -50i64..=50).prop_map(|(x, y)| Point2::from_ints(x, y))
}

fn vectors(n: usize) -> impl Strategy<Value = Vec<[i64; 3]>> {
    prop::collection::vec(prop::array::uniform3(-9i64..=9), n)
        .prop_filter("nonzero", |vs| vs.iter().all(|v| v.iter().any(|&x| x != 0)))
}

fn spherical(vs: &[[i64; 3]]) -> SphericalVectors {
    SphericalVectors::new(vs.iter().map(|v| [int(v[0]), int(v[1]), int(v[2])]).collect()).unwrap()
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Whether `p` lies strictly inside the short great-circle arc from `a` to `b`.
fn on_arc(a: [f64; 3], b: [f64; 3], p: [f64; 3]) -> bool {
    let n = cross3(a, b);
    dot3(cross3(a, p), n) > 0.0 && dot3(cross3(p, b), n) > 0.0
}

/// Crossing count from the intersection of the two great circles, in floating point.
fn float_crossings(vs: &[[i64; 3]]) -> u64 {
    let v: Vec<[f64; 3]> = vs.iter().map(|x| [x[0] as f64, x[1] as f64, x[2] as f64]).collect();
    let n = v.len();
    let arcs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut c = 0;
    for (x, &(a, b)) in arcs.iter().enumerate() {
        for &(p, q) in &arcs[x + 1..] {
            if a == p || a == q || b == p || b == q {
                continue;
            }
            let m = cross3(cross3(v[a], v[b]), cross3(v[p], v[q]));
            let neg = [-m[0], -m[1], -m[2]];
            if [m, neg].iter().any(|&m| on_arc(v[a], v[b], m) && on_arc(v[p], v[q], m)) {
                c += 1;
            }
        }
    }
    c
}

fn has_coplanar_triple(vs: &[[i64; 3]]) -> bool {
    let n = vs.len();
    let det = |a: [i64; 3], b: [i64; 3], c: [i64; 3]| {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
    };
    (0..n).any(|i| (i + 1..n).any(|j| (j + 1..n).any(|k| det(vs[i], vs[j], vs[k]) == 0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn orientation_is_alternating(p in point(), q in point(), r in point()) {
        let s = orientation(&p, &q, &r);
        prop_assert_eq!(orientation(&q, &r, &p), s);
        prop_assert_eq!(orientation(&q, &p, &r), -s);
        prop_assert_eq!(orientation(&p, &r, &q), -s);
        prop_assert_eq!(cross(&p, &q, &r), -cross(&r, &q, &p));
    }

    #[test]
    fn hull_is_convex_and_contains_everything(c in (3usize..=9).prop_flat_map(config)) {
        let hull = convex_hull(&c).unwrap();
        let k = hull.cycle.len();
        for i in 0..k {
            let (a, b) = (hull.cycle[i], hull.cycle[(i + 1) % k]);
            for p in 0..c.len() {
                if p != a && p != b {
                    prop_assert_eq!(c.orient(a, b, p), 1);
                }
            }
        }
        prop_assert!(hull.boundary_collinear.is_empty());
    }

    #[test]
    fn lifts_are_valid_regular_and_affinely_invariant(
        (c, h) in config_with_heights(4..=8),
        (a, b, k) in (-3i64..=3, -3i64..=3, -3i64..=3),
    ) {
        let sub = lift_subdivision(&c, &heights(&h)).unwrap();
        prop_assert!(validate_subdivision(&c, &sub).is_empty());
        prop_assert!(is_regular(&c, &sub).unwrap().is_regular());
        let shifted: Vec<Rational> = c
            .points()
            .iter()
            .zip(&h)
            .map(|(p, &hi)| int(hi) + int(a) * &p.x + int(b) * &p.y + int(k))
            .collect();
        prop_assert_eq!(lift_subdivision(&c, &HeightVector::new(shifted)).unwrap(), sub);
    }

    #[test]
    fn perturbation_refines((c, h) in config_with_heights(4..=8), w in prop::collection::vec(-6i64..=6, 8)) {
        let alpha = heights(&h);
        let omega = heights(&w[..c.len()]);
        let coarse = lift_subdivision(&c, &alpha).unwrap();
        let fine = refine_with(&c, &alpha, &omega).unwrap();
        prop_assert!(validate_subdivision(&c, &fine).is_empty());
        prop_assert!(refines(&fine, &coarse));
        prop_assert!(refines(&coarse, &coarse));
    }

    #[test]
    fn crossing_count_matches_float_oracle(vs in vectors(6)) {
        prop_assume!(!has_coplanar_triple(&vs));
        let report = arc_crossings(&spherical(&vs)).unwrap();
        prop_assert_eq!(report.c, float_crossings(&vs));
    }

    #[test]
    fn crossing_count_survives_rescaling_and_rotation(
        vs in vectors(7),
        scales in prop::collection::vec(1i64..=7, 7),
    ) {
        prop_assume!(!has_coplanar_triple(&vs));
        let base = arc_crossings(&spherical(&vs)).unwrap().c;
        let (cos, sin) = (ratio(3, 5), ratio(4, 5));
        let moved: Vec<[Rational; 3]> = vs
            .iter()
            .zip(&scales)
            .map(|(v, &s)| {
                let (x, y, z) = (int(v[0] * s), int(v[1] * s), int(v[2] * s));
                [&cos * &x - &sin * &y, &sin * &x + &cos * &y, z]
            })
            .collect();
        prop_assert_eq!(arc_crossings(&SphericalVectors::new(moved).unwrap()).unwrap().c, base);
    }

    #[test]
    fn generic_chambers_agree_with_euler(vs in vectors(6)) {
        let report = arc_crossings(&spherical(&vs));
        prop_assume!(report.as_ref().map(|r| r.generic).unwrap_or(false));
        let chambers = chamber_count(&spherical(&vs)).unwrap();
        prop_assert_eq!(chambers.formula, chambers.euler);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_lifts_are_enumerated((c, h) in config_with_heights(5..=6)) {
        let sub = lift_subdivision(&c, &heights(&h)).unwrap();
        let options = EnumerateOptions { regular_only: true, ..Default::default() };
        let regular = enumerate_subdivisions(&c, &options).unwrap();
        prop_assert!(regular.contains(&sub));
    }
}
