//! One-dimensional interval Newton method on a parametrized segment.
//!
//! Certifies existence and uniqueness of a zero of a univariate polynomial
//! inside a parameter interval: when the Newton image
//! `N(X) = m - f(m)/f'(X)` lands in the interior of `X`, the function has
//! exactly one simple zero there (Moore). The iteration only ever intersects,
//! so the returned enclosure never leaves the initial search interval.

use crate::interval::{Interval, SignClass};
use crate::poly::UnivarPoly;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum NewtonError {
    /// The derivative range over the search interval contains zero; the
    /// method cannot certify a unique root. Callers fall back to splitting.
    #[error("derivative range contains zero over the search interval")]
    DerivativeContainsZero,
    /// No contraction could be certified (either the iteration proved the
    /// interval root-free, stalled above tolerance, or the final
    /// interior-inclusion check failed).
    #[error("interval Newton failed to certify a contraction")]
    NoContraction,
}

/// A certified enclosure of a unique simple zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedRoot {
    /// Tight enclosure of the root in segment parameter space.
    pub t: Interval,
    /// The interval on which the contraction `N(verified) ⊂ interior(verified)`
    /// was established; `t ⊆ verified ⊆` the search interval. Uniqueness holds
    /// on all of `verified`.
    pub verified: Interval,
    /// Always true on success; kept explicit because the certificate is the
    /// point of the type.
    pub unique: bool,
}

const MAX_ITER: usize = 50;

/// Certifies a unique zero of `f` inside `x0`, started from the hint `t0`.
///
/// `tol` is the target enclosure width; iteration stops earlier at a fixed
/// point. The final enclosure is re-verified: `N` applied to the returned
/// interval must land in its interior, which proves existence and uniqueness.
pub fn certify_root(
    f: &UnivarPoly,
    t0: f64,
    x0: &Interval,
    tol: f64,
) -> Result<CertifiedRoot, NewtonError> {
    let df = f.derivative();
    let dfx = df.eval(x0);
    if dfx.sign() == SignClass::ContainsZero {
        return Err(NewtonError::DerivativeContainsZero);
    }

    let mut x = *x0;
    let mut mid = if x.contains(t0) { t0 } else { x.midpoint() };
    for _ in 0..MAX_ITER {
        let n = newton_image(f, &df, mid, &x)?;
        match x.intersect(&n) {
            // Empty intersection proves there is no root; for callers this
            // is simply a failure to certify the expected crossing.
            None => return Err(NewtonError::NoContraction),
            Some(next) => {
                if next.width() <= tol || next.width() >= x.width() {
                    x = next;
                    break;
                }
                x = next;
            }
        }
        mid = x.midpoint();
    }
    if x.width() > tol {
        return Err(NewtonError::NoContraction);
    }

    // Re-verify the contraction certificate on a slightly inflated interval
    // (a point enclosure has empty interior, so verification needs slack),
    // clipped to the original search range.
    let pad = (x.width() + tol).max(1e-14);
    let v = x
        .inflate(pad)
        .intersect(x0)
        .expect("inflated interval intersects its source");
    let n = newton_image(f, &df, v.midpoint(), &v)?;
    if n.is_interior_subset(&v) {
        let t = n.intersect(&x).unwrap_or(n);
        Ok(CertifiedRoot {
            t,
            verified: v,
            unique: true,
        })
    } else {
        Err(NewtonError::NoContraction)
    }
}

fn newton_image(
    f: &UnivarPoly,
    df: &UnivarPoly,
    mid: f64,
    x: &Interval,
) -> Result<Interval, NewtonError> {
    let m = Interval::point(mid);
    let fm = f.eval(&m);
    let dfx = df.eval(x);
    let quot = fm
        .checked_div(&dfx)
        .map_err(|_| NewtonError::DerivativeContainsZero)?;
    Ok(m.sub(&quot))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[f64]) -> UnivarPoly {
        UnivarPoly::new(coeffs.iter().map(|&c| Interval::point(c)).collect())
    }

    #[test]
    fn linear_root_is_immediate() {
        // f(t) = t - 0.5 on [0, 1].
        let f = poly(&[-0.5, 1.0]);
        let r = certify_root(&f, 0.4, &Interval::new(0.0, 1.0), 1e-12).unwrap();
        assert!(r.unique);
        assert!(r.t.contains(0.5));
        assert!(r.t.width() <= 1e-12);
        assert!(r.t.is_subset(&Interval::new(0.0, 1.0)));
    }

    #[test]
    fn sqrt_two() {
        // f(t) = t² - 2 on [1, 2].
        let f = poly(&[-2.0, 0.0, 1.0]);
        let r = certify_root(&f, 1.5, &Interval::new(1.0, 2.0), 1e-10).unwrap();
        assert!(r.t.contains(std::f64::consts::SQRT_2));
        assert!(r.t.is_subset(&Interval::new(1.0, 2.0)));
    }

    #[test]
    fn derivative_straddles_zero() {
        // f(t) = t² - 0.25 on [-1, 1]: two roots, derivative spans zero.
        let f = poly(&[-0.25, 0.0, 1.0]);
        let e = certify_root(&f, 0.4, &Interval::new(-1.0, 1.0), 1e-10);
        assert_eq!(e, Err(NewtonError::DerivativeContainsZero));
    }

    #[test]
    fn no_root_is_not_certified() {
        // f(t) = t + 1 on [0, 1]: monotone but root-free.
        let f = poly(&[1.0, 1.0]);
        let e = certify_root(&f, 0.5, &Interval::new(0.0, 1.0), 1e-10);
        assert_eq!(e, Err(NewtonError::NoContraction));
    }

    #[test]
    fn root_sign_change_sanity() {
        let f = poly(&[-2.0, 0.0, 1.0]);
        let r = certify_root(&f, 1.5, &Interval::new(1.0, 2.0), 1e-10).unwrap();
        let at_lo = f.eval(&Interval::point(r.t.lo()));
        let at_hi = f.eval(&Interval::point(r.t.hi()));
        assert!(at_lo.lo() <= 0.0 && at_hi.hi() >= 0.0);
    }

    #[test]
    fn contraction_reverifies_post_hoc() {
        let f = poly(&[-2.0, 0.0, 1.0]);
        let r = certify_root(&f, 1.5, &Interval::new(1.0, 2.0), 1e-10).unwrap();
        let df = f.derivative();
        let m = Interval::point(r.verified.midpoint());
        let n = m.sub(&f.eval(&m).div(&df.eval(&r.verified)));
        // The Newton image of the verified enclosure lands in its interior.
        assert!(n.is_interior_subset(&r.verified));
        assert!(r.t.is_subset(&r.verified));
    }
}
