//! Verified integration of monomial 2-forms `x^i y^j dx∧dy` over the pieces
//! of an oval cover, and the summation enclosing one monomial Abelian
//! integral.
//!
//! Inside boxes integrate exactly (antiderivative product). Inside triangles
//! use the box-hull bound `□T₁^i □T₂^j |T|`. Fail boxes and tube
//! parallelepipeds contribute the hull of zero and the extreme over the whole
//! piece, which dominates the integral over any sub-region and in particular
//! over the unknown part lying in the oval interior.

use crate::cover::{Box2, OvalCover, Parallelepiped, Triangle};
use crate::interval::Interval;
use crate::poly::MonoIndex;

/// Enclosure of one monomial integral over one oval, with the per-piece-kind
/// breakdown. `value` is the interval sum of the four parts in fixed order:
/// boxes, triangles, fail boxes, parallelepipeds.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MonomialIntegralResult {
    pub index: MonoIndex,
    pub h: f64,
    #[serde(skip)]
    pub value: Interval,
    #[serde(skip)]
    pub breakdown: [Interval; 4],
}

/// Exact integral of `x^i y^j` over an axis-aligned box:
/// `(sup(B₁)^{i+1} - inf(B₁)^{i+1})/(i+1) · (sup(B₂)^{j+1} - inf(B₂)^{j+1})/(j+1)`.
pub fn integrate_box(b: &Box2, m: MonoIndex) -> Interval {
    let factor = |iv: &Interval, k: u32| -> Interval {
        let n = k + 1;
        let hi = Interval::point(iv.hi()).pow_int(n);
        let lo = Interval::point(iv.lo()).pow_int(n);
        hi.sub(&lo).div(&Interval::point(n as f64))
    };
    factor(&b.x, m.i).mul(&factor(&b.y, m.j))
}

/// Hull-formula enclosure for a certified-inside triangle:
/// `□T₁^i · □T₂^j · |T|`.
pub fn integrate_triangle(t: &Triangle, m: MonoIndex) -> Interval {
    let hull = t.hull_box();
    hull.x
        .pow_int(m.i)
        .mul(&hull.y.pow_int(m.j))
        .mul(&t.area_interval())
}

/// Enclosure for the tube piece: the oval interior covers an unknown part of
/// it, so the result is `Hull(0, □P₁^i □P₂^j |P|)`.
pub fn integrate_parallelepiped(p: &Parallelepiped, m: MonoIndex) -> Interval {
    let hull = p.hull_box();
    let full = hull
        .x
        .pow_int(m.i)
        .mul(&hull.y.pow_int(m.j))
        .mul(&p.area_interval());
    full.hull(&Interval::ZERO)
}

/// Enclosure for an unresolved box: `Hull(0, range(x^i y^j on B) · |B|)`,
/// which contains the integral over every sub-region of `B`.
pub fn integrate_fail_box(b: &Box2, m: MonoIndex) -> Interval {
    let full = b
        .x
        .pow_int(m.i)
        .mul(&b.y.pow_int(m.j))
        .mul(&b.area_interval());
    full.hull(&Interval::ZERO)
}

/// Sums the per-piece enclosures over the cover in its deterministic piece
/// order. The breakdown parts are summed separately and `value` is their sum,
/// on the same rounding path every run.
pub fn monomial_abelian_integral(cover: &OvalCover, m: MonoIndex) -> MonomialIntegralResult {
    let mut boxes = Interval::ZERO;
    for b in &cover.inside_boxes {
        boxes = boxes.add(&integrate_box(b, m));
    }
    let mut triangles = Interval::ZERO;
    for t in &cover.inside_triangles {
        triangles = triangles.add(&integrate_triangle(t, m));
    }
    let mut fails = Interval::ZERO;
    for b in &cover.fail_boxes {
        fails = fails.add(&integrate_fail_box(b, m));
    }
    let mut tubes = Interval::ZERO;
    for d in &cover.on_pieces {
        tubes = tubes.add(&integrate_parallelepiped(&d.tube, m));
    }
    let breakdown = [boxes, triangles, fails, tubes];
    let value = boxes.add(&triangles).add(&fails).add(&tubes);
    MonomialIntegralResult {
        index: m,
        h: cover.h,
        value,
        breakdown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_cover, trapping_box, Hamiltonian};
    use crate::interval::Interval;
    use crate::poly::{BivarPoly, Point2};

    fn unit_box() -> Box2 {
        Box2::new(Interval::new(0.0, 1.0), Interval::new(0.0, 1.0))
    }

    #[test]
    fn box_moments() {
        let r = integrate_box(&unit_box(), MonoIndex::new(0, 0));
        assert!(r.contains(1.0) && r.width() < 1e-15);
        let r = integrate_box(&unit_box(), MonoIndex::new(1, 0));
        assert!(r.contains(0.5) && r.width() < 1e-15);
        let b = Box2::new(Interval::new(-1.0, 2.0), Interval::new(0.0, 1.0));
        let r = integrate_box(&b, MonoIndex::new(2, 1));
        // (8 - (-1))/3 * (1 - 0)/2 = 1.5
        assert!(r.contains(1.5) && r.width() < 1e-14);
    }

    #[test]
    fn triangle_moments() {
        let t = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        );
        let r = integrate_triangle(&t, MonoIndex::new(0, 0));
        assert!(r.contains(0.5));
        assert!(r.lo() >= 0.5 - 1e-12 && r.hi() <= 0.5 + 1e-12);
        // Exact first moment is 1/6; the hull bound is [0, 1]·0.5.
        let r = integrate_triangle(&t, MonoIndex::new(1, 0));
        assert!(r.contains(1.0 / 6.0));
        assert!(r.lo() >= -1e-15 && r.hi() <= 0.5 + 1e-15);
        // Degenerate triangle: zero area, zero integral.
        let d = Triangle::new(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(2.0, 2.0),
        );
        let r = integrate_triangle(&d, MonoIndex::new(0, 0));
        assert!(r.contains(0.0) && r.width() < 1e-14);
    }

    #[test]
    fn parallelepiped_contains_zero() {
        let p = Parallelepiped {
            v: [
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
            ],
        };
        let r = integrate_parallelepiped(&p, MonoIndex::new(0, 0));
        assert!(r.contains(0.0) && r.contains(1.0));
        assert!(r.lo() >= -1e-15 && r.hi() <= 1.0 + 1e-15);
        // Thin slab: Hull(0, [1,2]·0.1·1) = [0, 0.2].
        let p = Parallelepiped {
            v: [
                Point2::new(1.0, 0.0),
                Point2::new(2.0, 0.0),
                Point2::new(2.0, 0.1),
                Point2::new(1.0, 0.1),
            ],
        };
        let r = integrate_parallelepiped(&p, MonoIndex::new(1, 0));
        assert!(r.contains(0.0) && r.contains(0.2));
        assert!(r.hi() <= 0.2 + 1e-12);
    }

    #[test]
    fn fail_box_hull() {
        let r = integrate_fail_box(&unit_box(), MonoIndex::new(0, 0));
        assert!(r.contains(0.0) && r.contains(1.0));
        let b = Box2::new(Interval::new(-1.0, 1.0), Interval::new(0.0, 1.0));
        let r = integrate_fail_box(&b, MonoIndex::new(1, 0));
        // Hull(0, [-1,1]·2) = [-2, 2].
        assert!(r.lo() <= -2.0 + 1e-12 && r.hi() >= 2.0 - 1e-12);
        assert!(r.lo() >= -2.0 - 1e-12 && r.hi() <= 2.0 + 1e-12);
        // Width bound example: x² on [0.5,0.6]×[0.1,0.2].
        let b = Box2::new(Interval::new(0.5, 0.6), Interval::new(0.1, 0.2));
        let r = integrate_fail_box(&b, MonoIndex::new(2, 0));
        assert!(r.width() <= 0.36 * 0.01 * 1.01);
    }

    fn disk_cover(minsize: f64) -> OvalCover {
        let ham = Hamiltonian::new(BivarPoly::parse("1/2*x^2 + 1/2*y^2").unwrap());
        let domain = trapping_box(&ham, 0.5, Point2::new(0.0, 0.0)).unwrap();
        build_cover(&ham, 0.5, &domain, minsize, Point2::new(0.0, 0.0))
    }

    #[test]
    fn disk_area_and_moments() {
        let cover = disk_cover(1.0 / 256.0);
        // Unit disk: area π, ∫x = ∫y = 0, ∫y² = π/4.
        let a = monomial_abelian_integral(&cover, MonoIndex::new(0, 0));
        assert!(a.value.contains(std::f64::consts::PI));
        assert!(a.value.width() <= 0.01, "width {}", a.value.width());
        let x = monomial_abelian_integral(&cover, MonoIndex::new(1, 0));
        assert!(x.value.contains(0.0));
        let y = monomial_abelian_integral(&cover, MonoIndex::new(0, 1));
        assert!(y.value.contains(0.0));
        let yy = monomial_abelian_integral(&cover, MonoIndex::new(0, 2));
        assert!(yy.value.contains(std::f64::consts::PI / 4.0));
        assert!(yy.value.width() <= 0.01);
        // Symmetry: the x² and y² enclosures intersect.
        let xx = monomial_abelian_integral(&cover, MonoIndex::new(2, 0));
        assert!(xx.value.intersect(&yy.value).is_some());
    }

    #[test]
    fn breakdown_sums_to_value() {
        let cover = disk_cover(1.0 / 128.0);
        let r = monomial_abelian_integral(&cover, MonoIndex::new(2, 0));
        let s = r.breakdown[0]
            .add(&r.breakdown[1])
            .add(&r.breakdown[2])
            .add(&r.breakdown[3]);
        assert_eq!((s.lo(), s.hi()), (r.value.lo(), r.value.hi()));
    }

    #[test]
    fn deterministic_integration() {
        let cover = disk_cover(1.0 / 128.0);
        let a = monomial_abelian_integral(&cover, MonoIndex::new(0, 0));
        let b = monomial_abelian_integral(&cover, MonoIndex::new(0, 0));
        assert_eq!((a.value.lo(), a.value.hi()), (b.value.lo(), b.value.hi()));
    }

    #[test]
    fn width_dominated_by_uncertain_pieces() {
        let cover = disk_cover(1.0 / 128.0);
        let r = monomial_abelian_integral(&cover, MonoIndex::new(0, 0));
        let uncertain = r.breakdown[2].width() + r.breakdown[3].width();
        let pieces = cover.inside_boxes.len() + cover.inside_triangles.len();
        let slack = pieces as f64 * 1e-14;
        assert!(
            r.value.width() <= uncertain + slack,
            "width {} vs uncertain {} + slack {}",
            r.value.width(),
            uncertain,
            slack
        );
    }
}
