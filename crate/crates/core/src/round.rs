//! Directed-rounding primitives for f64.
//!
//! Rust gives no portable access to the hardware rounding mode, so outward
//! rounding is emulated: every operation is computed in round-to-nearest,
//! the rounding error is recovered with an error-free transformation (2Sum
//! for sums, a Dekker split for products), and the result is nudged by one
//! ulp only when the error term shows the nearest result lies on the wrong
//! side. Exact results are returned unchanged, so integer arithmetic stays
//! exact. Outside a conservative magnitude window the error terms are not
//! guaranteed representable and we nudge unconditionally, which is always
//! sound: a correctly rounded result is within half an ulp of the true
//! value, so its neighbour in the target direction brackets it.

/// 2^27 + 1, Dekker's splitter for 53-bit significands.
const SPLITTER: f64 = 134_217_729.0;

/// Magnitude window in which the Dekker product error is exactly
/// representable (no under/overflow in the split or the partial products).
const SAFE_LO: f64 = 1e-140;
const SAFE_HI: f64 = 1e140;

#[inline]
pub fn next_up(x: f64) -> f64 {
    debug_assert!(!x.is_nan());
    if x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    if x > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

#[inline]
pub fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// Error-free sum: returns `(s, e)` with `s = RN(a + b)` and `a + b = s + e`
/// exactly, for finite `s`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let (p, q) = if a.abs() >= b.abs() { (a, b) } else { (b, a) };
    (s, q - (s - p))
}

#[inline]
fn split(x: f64) -> (f64, f64) {
    let t = x * SPLITTER;
    let hi = t - (t - x);
    (hi, x - hi)
}

/// Error-free product: `(p, e)` with `p = RN(a * b)` and `a * b = p + e`
/// exactly. Only valid when both magnitudes lie in the safe window.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

#[inline]
fn in_safe_window(x: f64) -> bool {
    let a = x.abs();
    a > SAFE_LO && a < SAFE_HI
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s == f64::INFINITY {
        return f64::MAX;
    }
    if !s.is_finite() {
        return s;
    }
    if e < 0.0 {
        next_down(s)
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s == f64::NEG_INFINITY {
        return f64::MIN;
    }
    if !s.is_finite() {
        return s;
    }
    if e > 0.0 {
        next_up(s)
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p == f64::INFINITY {
        return f64::MAX;
    }
    if !p.is_finite() {
        return p;
    }
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if p == 0.0 {
        // Underflowed a nonzero product; the sign decides the bound.
        return if a.is_sign_positive() == b.is_sign_positive() {
            0.0
        } else {
            -f64::from_bits(1)
        };
    }
    if in_safe_window(a) && in_safe_window(b) {
        let (p, e) = two_prod(a, b);
        if e < 0.0 {
            next_down(p)
        } else {
            p
        }
    } else {
        next_down(p)
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p == f64::NEG_INFINITY {
        return f64::MIN;
    }
    if !p.is_finite() {
        return p;
    }
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if p == 0.0 {
        return if a.is_sign_positive() == b.is_sign_positive() {
            f64::from_bits(1)
        } else {
            -0.0
        };
    }
    if in_safe_window(a) && in_safe_window(b) {
        let (p, e) = two_prod(a, b);
        if e > 0.0 {
            next_up(p)
        } else {
            p
        }
    } else {
        next_up(p)
    }
}

/// Compares `q * b` against `a` exactly via the error-free product.
/// Requires `q`, `b` in the safe window.
#[inline]
fn prod_cmp(q: f64, b: f64, a: f64) -> std::cmp::Ordering {
    let (p, e) = two_prod(q, b);
    match p.partial_cmp(&a).unwrap() {
        std::cmp::Ordering::Equal => e.partial_cmp(&0.0).unwrap(),
        ord => ord,
    }
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    debug_assert!(b != 0.0);
    let q = a / b;
    if q == f64::INFINITY {
        return f64::MAX;
    }
    if !q.is_finite() {
        return q;
    }
    if a == 0.0 {
        return 0.0;
    }
    if in_safe_window(q) && in_safe_window(b) {
        // q is a valid lower bound iff q <= a/b, i.e. q*b <= a for b > 0.
        let ord = prod_cmp(q, b, a);
        let ok = if b > 0.0 { ord != std::cmp::Ordering::Greater } else { ord != std::cmp::Ordering::Less };
        if ok {
            q
        } else {
            next_down(q)
        }
    } else {
        next_down(q)
    }
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    debug_assert!(b != 0.0);
    let q = a / b;
    if q == f64::NEG_INFINITY {
        return f64::MIN;
    }
    if !q.is_finite() {
        return q;
    }
    if a == 0.0 {
        return 0.0;
    }
    if in_safe_window(q) && in_safe_window(b) {
        let ord = prod_cmp(q, b, a);
        let ok = if b > 0.0 { ord != std::cmp::Ordering::Less } else { ord != std::cmp::Ordering::Greater };
        if ok {
            q
        } else {
            next_up(q)
        }
    } else {
        next_up(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sums_stay_exact() {
        assert_eq!(add_down(1.0, 3.0), 4.0);
        assert_eq!(add_up(1.0, 3.0), 4.0);
        assert_eq!(sub_down(0.5, 0.25), 0.25);
        assert_eq!(sub_up(0.5, 0.25), 0.25);
    }

    #[test]
    fn exact_products_stay_exact() {
        assert_eq!(mul_down(3.0, 4.0), 12.0);
        assert_eq!(mul_up(3.0, 4.0), 12.0);
        assert_eq!(mul_down(-2.0, 2.0), -4.0);
        assert_eq!(mul_up(0.0, 1e300), 0.0);
    }

    #[test]
    fn inexact_ops_bracket() {
        // 0.1 + 0.2 is inexact in binary.
        let lo = add_down(0.1, 0.2);
        let hi = add_up(0.1, 0.2);
        assert!(lo < hi);
        assert_eq!(next_up(lo), hi);
        // 1/3: one ulp wide, bracketing the nearest double.
        let lo = div_down(1.0, 3.0);
        let hi = div_up(1.0, 3.0);
        assert!(lo <= 1.0 / 3.0 && 1.0 / 3.0 <= hi);
        assert_eq!(next_up(lo), hi);
    }

    #[test]
    fn exact_division() {
        assert_eq!(div_down(1.0, 4.0), 0.25);
        assert_eq!(div_up(1.0, 4.0), 0.25);
        assert_eq!(div_down(-6.0, 3.0), -2.0);
        assert_eq!(div_up(-6.0, 3.0), -2.0);
    }

    #[test]
    fn overflow_saturates() {
        assert_eq!(add_down(f64::MAX, f64::MAX), f64::MAX);
        assert_eq!(add_up(f64::MAX, f64::MAX), f64::INFINITY);
        assert_eq!(mul_up(f64::MIN, 2.0), f64::MIN);
    }
}
