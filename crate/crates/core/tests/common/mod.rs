//! Shared oracles for integration tests: exact rational reference
//! arithmetic, a non-rigorous grid quadrature, and a contour tracer. All of
//! these are independent of the interval code paths they check.

#![allow(dead_code)]

use abelint::cover::Hamiltonian;
use abelint::poly::{BivarPoly, MonoIndex, Point2};
use num_bigint::BigInt;
use num_rational::BigRational;

pub fn figure_eight() -> Hamiltonian {
    Hamiltonian::new(BivarPoly::parse("1/2*y^2 + 1/4*x^4 + 1/60*x^3 - 19/40*x^2").unwrap())
}

pub fn disk() -> Hamiltonian {
    Hamiltonian::new(BivarPoly::parse("1/2*x^2 + 1/2*y^2").unwrap())
}

/// Exact rational value of a finite f64.
pub fn rat(x: f64) -> BigRational {
    assert!(x.is_finite());
    let bits = x.to_bits();
    let sign: i64 = if bits >> 63 == 0 { 1 } else { -1 };
    let mut exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    exponent -= 1075;
    let mut numer = BigInt::from(mantissa) * BigInt::from(sign);
    let mut denom = BigInt::from(1);
    if exponent >= 0 {
        numer <<= exponent as usize;
    } else {
        denom <<= (-exponent) as usize;
    }
    BigRational::new(numer, denom)
}

/// Plain f64 evaluation of a polynomial at a point (the non-rigorous path
/// used by oracles).
pub fn eval_f64(p: &BivarPoly, x: f64, y: f64) -> f64 {
    p.terms()
        .iter()
        .map(|(m, c)| c.midpoint() * x.powi(m.i as i32) * y.powi(m.j as i32))
        .sum()
}

/// Non-rigorous quadrature of `∫ x^i y^j` over the component of
/// `{H <= h}` containing the whole grid window. Cells are classified by
/// their corner values on an `(n+1)²` grid; fully-inside cells use the
/// midpoint rule, boundary cells use the polygon fraction cut by linear
/// interpolation along the cell edges.
pub fn grid_quadrature(
    ham: &BivarPoly,
    h: f64,
    m: MonoIndex,
    window: (f64, f64, f64, f64),
    n: usize,
) -> f64 {
    let (x0, x1, y0, y1) = window;
    let dx = (x1 - x0) / n as f64;
    let dy = (y1 - y0) / n as f64;
    // Corner values of H - h on the grid.
    let mut vals = vec![0.0f64; (n + 1) * (n + 1)];
    for iy in 0..=n {
        for ix in 0..=n {
            let x = x0 + ix as f64 * dx;
            let y = y0 + iy as f64 * dy;
            vals[iy * (n + 1) + ix] = eval_f64(ham, x, y) - h;
        }
    }
    let mut total = 0.0f64;
    for iy in 0..n {
        for ix in 0..n {
            let c = [
                vals[iy * (n + 1) + ix],
                vals[iy * (n + 1) + ix + 1],
                vals[(iy + 1) * (n + 1) + ix + 1],
                vals[(iy + 1) * (n + 1) + ix],
            ];
            let inside = c.iter().filter(|v| **v < 0.0).count();
            if inside == 0 {
                continue;
            }
            let xa = x0 + ix as f64 * dx;
            let ya = y0 + iy as f64 * dy;
            let xc = xa + 0.5 * dx;
            let yc = ya + 0.5 * dy;
            let f = xc.powi(m.i as i32) * yc.powi(m.j as i32);
            if inside == 4 {
                total += f * dx * dy;
            } else {
                // Clip the cell polygon against the linear interpolant of
                // H - h along its edges.
                let corners = [
                    (xa, ya, c[0]),
                    (xa + dx, ya, c[1]),
                    (xa + dx, ya + dy, c[2]),
                    (xa, ya + dy, c[3]),
                ];
                let mut poly: Vec<(f64, f64)> = Vec::with_capacity(6);
                for k in 0..4 {
                    let (px, py, pv) = corners[k];
                    let (qx, qy, qv) = corners[(k + 1) % 4];
                    if pv < 0.0 {
                        poly.push((px, py));
                    }
                    if (pv < 0.0) != (qv < 0.0) {
                        let t = pv / (pv - qv);
                        poly.push((px + t * (qx - px), py + t * (qy - py)));
                    }
                }
                let mut area2 = 0.0;
                for k in 0..poly.len() {
                    let (px, py) = poly[k];
                    let (qx, qy) = poly[(k + 1) % poly.len()];
                    area2 += px * qy - qx * py;
                }
                total += f * 0.5 * area2.abs();
            }
        }
    }
    total
}

/// Dense non-rigorous trace of the component of `{H = h}` near `start`:
/// predictor-corrector marching with tangent steps and gradient projection.
pub fn trace_contour(ham: &Hamiltonian, h: f64, start: Point2, steps: usize) -> Vec<Point2> {
    // Project the start onto the contour first.
    let mut p = start;
    for _ in 0..50 {
        let v = eval_f64(&ham.poly, p.x, p.y) - h;
        let gx = eval_f64(ham.grad_x(), p.x, p.y);
        let gy = eval_f64(ham.grad_y(), p.x, p.y);
        let g2 = gx * gx + gy * gy;
        if g2 == 0.0 {
            break;
        }
        p = Point2::new(p.x - v * gx / g2, p.y - v * gy / g2);
        if v.abs() < 1e-14 {
            break;
        }
    }
    let mut out = Vec::with_capacity(steps);
    let step = 1.0 / steps as f64 * 8.0; // generous perimeter estimate
    for _ in 0..steps {
        out.push(p);
        let gx = eval_f64(ham.grad_x(), p.x, p.y);
        let gy = eval_f64(ham.grad_y(), p.x, p.y);
        let norm = (gx * gx + gy * gy).sqrt().max(1e-12);
        // Tangent predictor.
        let mut q = Point2::new(p.x - step * gy / norm, p.y + step * gx / norm);
        // Newton corrector back onto the contour.
        for _ in 0..8 {
            let v = eval_f64(&ham.poly, q.x, q.y) - h;
            let gx = eval_f64(ham.grad_x(), q.x, q.y);
            let gy = eval_f64(ham.grad_y(), q.x, q.y);
            let g2 = gx * gx + gy * gy;
            if g2 == 0.0 {
                break;
            }
            q = Point2::new(q.x - v * gx / g2, q.y - v * gy / g2);
        }
        p = q;
    }
    out
}
