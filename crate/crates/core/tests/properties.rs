//! Property tests: interval arithmetic against exact rational references,
//! range-bound soundness, derivative checks, and decimal round-trips.

mod common;

use abelint::decimal;
use abelint::interval::Interval;
use abelint::poly::{BivarPoly, MonoIndex, Point2, Var};
use common::rat;
use num_rational::BigRational;
use proptest::prelude::*;

fn finite_f64() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6..1e6f64,
        -1.0..1.0f64,
        Just(0.0),
        Just(1.0),
        Just(-1.0),
        Just(0.1),
        Just(1e-30),
        Just(-1e20),
    ]
}

fn interval() -> impl Strategy<Value = Interval> {
    (finite_f64(), finite_f64()).prop_map(|(a, b)| Interval::from_points(a, b))
}

fn rational_in(iv: &Interval, t: f64) -> BigRational {
    // A rational point inside the interval: convex combination in exact
    // arithmetic.
    let t = rat(t.clamp(0.0, 1.0));
    rat(iv.lo()) .clone()* (rat(1.0) - t.clone()) + rat(iv.hi()) * t
}

fn contains_rat(iv: &Interval, r: &BigRational) -> bool {
    rat(iv.lo()) <= *r && *r <= rat(iv.hi())
}

proptest! {
    #[test]
    fn containment_add_sub_mul(a in interval(), b in interval(), ta in 0.0..1.0f64, tb in 0.0..1.0f64) {
        let xa = rational_in(&a, ta);
        let xb = rational_in(&b, tb);
        prop_assert!(contains_rat(&a.add(&b), &(xa.clone() + xb.clone())));
        prop_assert!(contains_rat(&a.sub(&b), &(xa.clone() - xb.clone())));
        prop_assert!(contains_rat(&a.mul(&b), &(xa * xb)));
    }

    #[test]
    fn containment_div(a in interval(), lo in 0.01..1e4f64, w in 0.0..10.0f64, ta in 0.0..1.0f64, tb in 0.0..1.0f64, neg in any::<bool>()) {
        let b = if neg {
            Interval::new(-(lo + w), -lo)
        } else {
            Interval::new(lo, lo + w)
        };
        let xa = rational_in(&a, ta);
        let xb = rational_in(&b, tb);
        prop_assert!(contains_rat(&a.div(&b), &(xa / xb)));
    }

    #[test]
    fn containment_pow(a in interval(), n in 0u32..7, t in 0.0..1.0f64) {
        let x = rational_in(&a, t);
        let mut want = BigRational::from_integer(1.into());
        for _ in 0..n {
            want *= x.clone();
        }
        prop_assert!(contains_rat(&a.pow_int(n), &want));
    }

    #[test]
    fn inclusion_monotonicity(a in interval(), b in interval(), s in 0.0..0.5f64) {
        // Shrink both intervals symmetrically; results must shrink too.
        let shrink = |iv: &Interval| {
            let w = iv.width();
            Interval::new(iv.lo() + s * 0.5 * w, iv.hi() - s * 0.5 * w)
        };
        let (a2, b2) = (shrink(&a), shrink(&b));
        prop_assert!(a2.add(&b2).is_subset(&a.add(&b)));
        prop_assert!(a2.sub(&b2).is_subset(&a.sub(&b)));
        prop_assert!(a2.mul(&b2).is_subset(&a.mul(&b)));
        prop_assert!(a2.pow_int(3).is_subset(&a.pow_int(3)));
    }

    #[test]
    fn hull_intersect_lattice(a in interval(), b in interval()) {
        let h = a.hull(&b);
        prop_assert!(a.is_subset(&h) && b.is_subset(&h));
        // intersect(A, hull(A,B)) == A whenever A ⊆ hull(A,B).
        let i = a.intersect(&h).unwrap();
        prop_assert_eq!((i.lo(), i.hi()), (a.lo(), a.hi()));
    }

    #[test]
    fn decimal_outward_roundtrip(x in finite_f64(), digits in 1u32..10) {
        let lo = decimal::format_down(x, digits);
        let hi = decimal::format_up(x, digits);
        let rlo = decimal::parse_rational(&lo).unwrap();
        let rhi = decimal::parse_rational(&hi).unwrap();
        prop_assert!(rlo <= rat(x) && rat(x) <= rhi);
    }

    #[test]
    fn decimal_parse_containment(digits in "[0-9]{1,12}", exp in -20i32..20, neg in any::<bool>()) {
        let text = format!("{}0.{}e{}", if neg { "-" } else { "" }, digits, exp);
        let iv = decimal::parse_interval(&text).unwrap();
        let r = decimal::parse_rational(&text).unwrap();
        prop_assert!(contains_rat(&iv, &r));
        prop_assert!(iv.width() <= f64::EPSILON * iv.lo().abs().max(1e-300) * 2.0 + f64::MIN_POSITIVE);
    }
}

fn small_poly() -> impl Strategy<Value = BivarPoly> {
    proptest::collection::vec(((0u32..4, 0u32..4), -3.0..3.0f64), 1..6).prop_map(|terms| {
        BivarPoly::from_terms(
            terms
                .into_iter()
                .map(|((i, j), c)| (MonoIndex::new(i, j), Interval::point(c))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn range_bound_contains_samples(
        p in small_poly(),
        cx in -2.0..2.0f64, cy in -2.0..2.0f64,
        wx in 0.0..1.5f64, wy in 0.0..1.5f64,
        samples in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64), 32),
    ) {
        let bx = Interval::new(cx - wx, cx + wx);
        let by = Interval::new(cy - wy, cy + wy);
        let bound = p.range_on_box(&bx, &by);
        for (sx, sy) in samples {
            let x = bx.lo() + bx.width() * sx;
            let y = by.lo() + by.width() * sy;
            let v = p.eval_point(Point2::new(x, y));
            prop_assert!(v.is_subset(&bound), "point ({x}, {y}) value {v:?} outside {bound:?}");
        }
    }

    #[test]
    fn partial_matches_finite_difference(
        p in small_poly(),
        x in -1.5..1.5f64, y in -1.5..1.5f64,
    ) {
        let hstep = 1e-6;
        let px = p.partial(Var::X);
        let fd = (common::eval_f64(&p, x + hstep, y) - common::eval_f64(&p, x - hstep, y)) / (2.0 * hstep);
        let sym = px.eval_point(Point2::new(x, y));
        // Second-order finite differences: O(h²·f''') error plus rounding.
        let tol = 1e-6 * (1.0 + fd.abs()) + 1e-7;
        prop_assert!(sym.lo() - tol <= fd && fd <= sym.hi() + tol,
            "fd {fd} vs symbolic {sym:?}");
    }

    #[test]
    fn segment_restriction_encloses_pointwise(
        p in small_poly(),
        ax in -1.0..1.0f64, ay in -1.0..1.0f64,
        bx in -1.0..1.0f64, by in -1.0..1.0f64,
        t in 0.0..1.0f64,
    ) {
        prop_assume!((ax, ay) != (bx, by));
        let s = abelint::poly::Segment::new(Point2::new(ax, ay), Point2::new(bx, by));
        let q = p.restrict_to_segment(&s);
        let via = q.eval(&Interval::point(t));
        let direct = common::eval_f64(&p, ax + t * (bx - ax), ay + t * (by - ay));
        // `direct` uses a different evaluation order; allow rounding noise.
        let tol = 1e-9 * (1.0 + direct.abs());
        prop_assert!(via.lo() - tol <= direct && direct <= via.hi() + tol);
    }
}
