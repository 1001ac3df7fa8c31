//! Exact conversions between decimal text and binary intervals.
//!
//! Decimal literals in configs are generally not representable in binary, and
//! binary endpoints are generally not representable in decimal. Both
//! directions here go through exact rational arithmetic so that parsing
//! produces an interval containing the written value, and printing produces
//! decimals bracketing the binary interval (outward decimal rounding).

use crate::interval::Interval;
use crate::round;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Exact rational value of a finite f64.
pub fn rational_of_f64(x: f64) -> BigRational {
    assert!(x.is_finite());
    let (mantissa, exponent, sign) = integer_decode(x);
    let mut numer = BigInt::from(mantissa) * BigInt::from(sign);
    let mut denom = BigInt::from(1);
    if exponent >= 0 {
        numer <<= exponent as usize;
    } else {
        denom <<= (-exponent) as usize;
    }
    BigRational::new(numer, denom)
}

fn integer_decode(x: f64) -> (u64, i16, i8) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let mut exponent = ((bits >> 52) & 0x7ff) as i16;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    exponent -= 1075;
    (mantissa, exponent, sign)
}

/// Parses a number literal as an exact rational. Accepts decimal notation
/// with optional exponent (`-0.0121`, `1.5e-3`) and fractions (`1/60`).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mant_str, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mant_str.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant_str, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return None;
    }
    let mantissa: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    Some(rational_times_pow10(BigRational::from(mantissa), scale))
}

fn rational_times_pow10(r: BigRational, k: i32) -> BigRational {
    let p = BigInt::from(10).pow(k.unsigned_abs());
    if k >= 0 {
        r * BigRational::from(p)
    } else {
        r / BigRational::from(p)
    }
}

/// Largest f64 `<= r` and smallest f64 `>= r`, as a (possibly degenerate)
/// interval. The returned interval is the tightest one containing `r`.
pub fn interval_containing(r: &BigRational) -> Interval {
    let approx = r.to_f64().unwrap_or(0.0);
    let mut lo = if approx.is_finite() { approx } else { f64::MAX.copysign(approx) };
    // to_f64 on rationals is not correctly rounded; walk to the floor.
    for _ in 0..8 {
        if rational_of_f64(lo) <= *r {
            break;
        }
        lo = round::next_down(lo);
    }
    loop {
        let up = round::next_up(lo);
        if up.is_finite() && rational_of_f64(up) <= *r {
            lo = up;
        } else {
            break;
        }
    }
    assert!(rational_of_f64(lo) <= *r);
    let hi = if rational_of_f64(lo) == *r {
        lo
    } else {
        round::next_up(lo)
    };
    Interval::new(lo, hi)
}

/// Parses a decimal or fraction literal into the tightest containing interval.
pub fn parse_interval(s: &str) -> Option<Interval> {
    parse_rational(s).map(|r| interval_containing(&r))
}

/// A decimal `m * 10^k` with a fixed number of significant digits.
struct Decimal {
    negative: bool,
    mantissa: BigInt,
    exp: i32,
}

impl Decimal {
    fn value(&self) -> BigRational {
        let m = if self.negative {
            -self.mantissa.clone()
        } else {
            self.mantissa.clone()
        };
        rational_times_pow10(BigRational::from(m), self.exp)
    }

    /// One unit in the last decimal place toward -inf / +inf, renormalizing
    /// to keep the digit count.
    fn step(&mut self, digits: u32, toward_neg: bool) {
        let one = BigInt::from(1);
        let lo_limit = BigInt::from(10).pow(digits - 1);
        let hi_limit = BigInt::from(10).pow(digits);
        let grow = self.negative == toward_neg;
        if grow {
            self.mantissa += &one;
            if self.mantissa >= hi_limit {
                self.mantissa /= 10;
                self.exp += 1;
            }
        } else {
            self.mantissa -= &one;
            if self.mantissa < lo_limit && !self.mantissa.is_zero() {
                // 1000 -> 999: renormalize to 9990 * 10^(exp-1).
                self.mantissa *= 10;
                self.exp -= 1;
            }
        }
    }

    fn render(&self) -> String {
        let digits = self.mantissa.to_string();
        let sign = if self.negative && !self.mantissa.is_zero() {
            "-"
        } else {
            ""
        };
        // Position of the decimal point relative to the digit string.
        let point = digits.len() as i32 + self.exp;
        if point <= 0 && point > -4 {
            let zeros = "0".repeat((-point) as usize);
            format!("{sign}0.{zeros}{digits}")
        } else if point > 0 && point <= digits.len() as i32 + 3 {
            if self.exp >= 0 {
                let zeros = "0".repeat(self.exp as usize);
                format!("{sign}{digits}{zeros}")
            } else {
                let (i, f) = digits.split_at(point as usize);
                format!("{sign}{i}.{f}")
            }
        } else {
            // Scientific notation.
            let (first, rest) = digits.split_at(1);
            let e = point - 1;
            if rest.is_empty() {
                format!("{sign}{first}e{e}")
            } else {
                format!("{sign}{first}.{rest}e{e}")
            }
        }
    }
}

/// Nearest decimal with `digits` significant digits.
fn nearest_decimal(x: f64, digits: u32) -> Decimal {
    debug_assert!(digits >= 1);
    let s = format!("{:.*e}", digits as usize - 1, x.abs());
    let (mant_str, exp_str) = s.split_once('e').expect("scientific format");
    let digit_chars: String = mant_str.chars().filter(|c| c.is_ascii_digit()).collect();
    let exp: i32 = exp_str.parse().expect("exponent");
    Decimal {
        negative: x.is_sign_negative(),
        mantissa: digit_chars.parse().expect("mantissa digits"),
        exp: exp - (digits as i32 - 1),
    }
}

/// Decimal string with `digits` significant digits, rounded toward -inf.
pub fn format_down(x: f64, digits: u32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mut d = nearest_decimal(x, digits);
    let target = rational_of_f64(x);
    if d.value() > target {
        d.step(digits, true);
    }
    debug_assert!(d.value() <= target);
    d.render()
}

/// Decimal string with `digits` significant digits, rounded toward +inf.
pub fn format_up(x: f64, digits: u32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mut d = nearest_decimal(x, digits);
    let target = rational_of_f64(x);
    if d.value() < target {
        d.step(digits, false);
    }
    debug_assert!(d.value() >= target);
    d.render()
}

/// Outward decimal endpoints of an interval: the printed decimal interval
/// always contains the binary one.
pub fn format_outward(iv: &Interval, digits: usize) -> (String, String) {
    let digits = digits.max(1) as u32;
    (format_down(iv.lo(), digits), format_up(iv.hi(), digits))
}
