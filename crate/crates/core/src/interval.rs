//! Closed interval arithmetic with outward rounding.
//!
//! Every operation returns an interval guaranteed to contain the exact real
//! result for all points of the operands (the containment property), with
//! endpoints rounded outward via the primitives in [`crate::round`]. An
//! `Interval` is never empty; operations that can produce an empty set
//! (`intersect`) return an `Option`.

use crate::round;
use std::fmt;

/// Sign classification of an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SignClass {
    /// Every point of the interval is `> 0`.
    StrictlyPositive,
    /// Every point of the interval is `< 0`.
    StrictlyNegative,
    /// The interval contains `0`.
    ContainsZero,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DomainError,
}

/// A closed, non-empty real interval `[lo, hi]` with f64 endpoints.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Interval from explicit endpoints. Panics if `lo > hi` or either is NaN.
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Interval {
        assert!(!x.is_nan());
        Interval { lo: x, hi: x }
    }

    /// Smallest interval containing both `a` and `b` as points.
    pub fn from_points(a: f64, b: f64) -> Interval {
        Interval::new(a.min(b), a.max(b))
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Non-rigorous midpoint; not guaranteed to be the exact centre.
    #[inline]
    pub fn midpoint(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Non-rigorous width `hi - lo` (round to nearest).
    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn is_subset(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// True when `self` lies in the topological interior of `other`.
    #[inline]
    pub fn is_interior_subset(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    #[inline]
    pub fn sign(&self) -> SignClass {
        if self.lo > 0.0 {
            SignClass::StrictlyPositive
        } else if self.hi < 0.0 {
            SignClass::StrictlyNegative
        } else {
            SignClass::ContainsZero
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Intersection, or `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    #[inline]
    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    #[inline]
    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: round::add_down(self.lo, other.lo),
            hi: round::add_up(self.hi, other.hi),
        }
    }

    #[inline]
    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: round::sub_down(self.lo, other.hi),
            hi: round::sub_up(self.hi, other.lo),
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let (a, b) = (self.lo, self.hi);
        let (c, d) = (other.lo, other.hi);
        let lo = min4(
            round::mul_down(a, c),
            round::mul_down(a, d),
            round::mul_down(b, c),
            round::mul_down(b, d),
        );
        let hi = max4(
            round::mul_up(a, c),
            round::mul_up(a, d),
            round::mul_up(b, c),
            round::mul_up(b, d),
        );
        Interval { lo, hi }
    }

    /// Division. Panics when `0 ∈ other`; use [`Interval::checked_div`] where
    /// the divisor is not known to exclude zero.
    pub fn div(&self, other: &Interval) -> Interval {
        self.checked_div(other)
            .expect("division by an interval containing zero")
    }

    pub fn checked_div(&self, other: &Interval) -> Result<Interval, IntervalError> {
        if other.contains(0.0) {
            return Err(IntervalError::DomainError);
        }
        let (a, b) = (self.lo, self.hi);
        let (c, d) = (other.lo, other.hi);
        let lo = min4(
            round::div_down(a, c),
            round::div_down(a, d),
            round::div_down(b, c),
            round::div_down(b, d),
        );
        let hi = max4(
            round::div_up(a, c),
            round::div_up(a, d),
            round::div_up(b, c),
            round::div_up(b, d),
        );
        Ok(Interval { lo, hi })
    }

    /// `n`-th power. For even `n` with `0 ∈ self` this is tighter than
    /// repeated multiplication: the lower endpoint is exactly zero.
    pub fn pow_int(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        if n == 1 {
            return *self;
        }
        if n % 2 == 1 {
            // Odd powers are monotone.
            return Interval {
                lo: pow_point_down(self.lo, n),
                hi: pow_point_up(self.hi, n),
            };
        }
        // Even power: range of |x|^n over |self|.
        let (alo, ahi) = if self.lo >= 0.0 {
            (self.lo, self.hi)
        } else if self.hi <= 0.0 {
            (-self.hi, -self.lo)
        } else {
            (0.0, self.lo.abs().max(self.hi.abs()))
        };
        Interval {
            lo: pow_nonneg_down(alo, n),
            hi: pow_nonneg_up(ahi, n),
        }
    }

    /// Scales by a point value.
    pub fn scale(&self, c: f64) -> Interval {
        self.mul(&Interval::point(c))
    }

    /// Range of `|x|` over the interval (exact endpoint arithmetic).
    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    /// Symmetric inflation by `delta >= 0` (rounded outward).
    pub fn inflate(&self, delta: f64) -> Interval {
        debug_assert!(delta >= 0.0);
        Interval {
            lo: round::sub_down(self.lo, delta),
            hi: round::add_up(self.hi, delta),
        }
    }
}

fn min4(a: f64, b: f64, c: f64, d: f64) -> f64 {
    a.min(b).min(c.min(d))
}

fn max4(a: f64, b: f64, c: f64, d: f64) -> f64 {
    a.max(b).max(c.max(d))
}

/// Lower bound of `x^n` for `x >= 0`.
fn pow_nonneg_down(x: f64, n: u32) -> f64 {
    debug_assert!(x >= 0.0);
    let mut acc = x;
    for _ in 1..n {
        acc = round::mul_down(acc, x);
    }
    acc
}

/// Upper bound of `x^n` for `x >= 0`.
fn pow_nonneg_up(x: f64, n: u32) -> f64 {
    debug_assert!(x >= 0.0);
    let mut acc = x;
    for _ in 1..n {
        acc = round::mul_up(acc, x);
    }
    acc
}

fn pow_point_down(x: f64, n: u32) -> f64 {
    if x >= 0.0 {
        pow_nonneg_down(x, n)
    } else if n % 2 == 0 {
        pow_nonneg_down(-x, n)
    } else {
        -pow_nonneg_up(-x, n)
    }
}

fn pow_point_up(x: f64, n: u32) -> f64 {
    if x >= 0.0 {
        pow_nonneg_up(x, n)
    } else if n % 2 == 0 {
        pow_nonneg_up(-x, n)
    } else {
        -pow_nonneg_down(-x, n)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(4);
        let (lo, hi) = crate::decimal::format_outward(self, digits);
        write!(f, "[{lo}, {hi}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_exact_endpoints() {
        let r = Interval::new(1.0, 2.0).add(&Interval::new(3.0, 4.0));
        assert_eq!((r.lo(), r.hi()), (4.0, 6.0));
    }

    #[test]
    fn mul_sign_cases() {
        let r = Interval::new(-1.0, 2.0).mul(&Interval::new(3.0, 4.0));
        assert_eq!((r.lo(), r.hi()), (-4.0, 8.0));
    }

    #[test]
    fn div_third_is_tight() {
        let r = Interval::point(1.0).div(&Interval::point(3.0));
        assert!(r.contains(1.0 / 3.0));
        assert!(r.width() <= 2.0 * f64::EPSILON * (1.0f64 / 3.0));
        assert_eq!(crate::round::next_up(r.lo()), r.hi());
    }

    #[test]
    fn div_by_zero_interval() {
        let e = Interval::ONE.checked_div(&Interval::new(-1.0, 1.0));
        assert_eq!(e, Err(IntervalError::DomainError));
    }

    #[test]
    fn pow_even_over_zero() {
        let r = Interval::new(-2.0, 1.0).pow_int(2);
        assert_eq!((r.lo(), r.hi()), (0.0, 4.0));
    }

    #[test]
    fn pow_zero_is_one() {
        let r = Interval::new(2.0, 3.0).pow_int(0);
        assert_eq!((r.lo(), r.hi()), (1.0, 1.0));
    }

    #[test]
    fn pow_odd_monotone() {
        let r = Interval::new(-1.0, 2.0).pow_int(3);
        assert_eq!((r.lo(), r.hi()), (-1.0, 8.0));
    }

    #[test]
    fn hull_and_intersect() {
        let a = Interval::new(0.0, 0.0);
        let b = Interval::new(3.0, 5.0);
        let h = a.hull(&b);
        assert_eq!((h.lo(), h.hi()), (0.0, 5.0));
        assert!(Interval::new(1.0, 2.0)
            .intersect(&Interval::new(3.0, 4.0))
            .is_none());
        // intersect(A, hull(A, B)) == A for A ⊆ hull(A, B)
        let i = a.intersect(&h).unwrap();
        assert_eq!((i.lo(), i.hi()), (a.lo(), a.hi()));
    }

    #[test]
    fn sign_classes() {
        assert_eq!(Interval::new(0.1, 0.2).sign(), SignClass::StrictlyPositive);
        assert_eq!(
            Interval::new(-0.2, -0.1).sign(),
            SignClass::StrictlyNegative
        );
        assert_eq!(Interval::new(-0.1, 0.2).sign(), SignClass::ContainsZero);
        assert_eq!(Interval::ZERO.sign(), SignClass::ContainsZero);
    }
}
