//! Exact rational time values and the handful of conversions the solvers need.

use alloc::string::String;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for every duration, work amount and profit.
pub type Q = BigRational;

#[inline]
pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[inline]
pub fn uint(n: u64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[inline]
pub fn ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// `floor(x)` as `u64`, saturating at the ends of the range.
pub fn floor_u64(x: &Q) -> u64 {
    if x.is_negative() {
        return 0;
    }
    x.floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// `ceil(x)` as `u64`, saturating at the ends of the range.
pub fn ceil_u64(x: &Q) -> u64 {
    if x.is_negative() {
        return 0;
    }
    x.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact value of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Largest multiple of `2^-bits` that is `<= sqrt(x)`, for `x >= 0`.
pub fn sqrt_floor(x: &Q, bits: u32) -> Q {
    assert!(!x.is_negative(), "sqrt of negative value");
    let scale = BigInt::one() << (2 * bits as usize);
    // floor(sqrt(n/d * 4^bits)) = floor(sqrt(floor(n * 4^bits / d)))
    let scaled = (x.numer() * scale).div_floor(x.denom());
    Q::new(scaled.sqrt(), BigInt::one() << bits as usize)
}

/// `x` rounded down to a multiple of `2^-bits`.
pub fn floor_dyadic(x: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << bits as usize;
    let n = (x.numer() * &scale).div_floor(x.denom());
    Q::new(n, scale)
}

/// Parses `"p/q"`, integers and plain decimals such as `"0.25"` exactly.
pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut digits = String::from(whole);
    digits.push_str(frac);
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10u32), frac.len());
    let n = if neg {
        BigInt::from_biguint(Sign::Minus, n.magnitude().clone())
    } else {
        n
    };
    Some(Q::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/10"), Some(ratio(3, 10)));
        assert_eq!(parse("0.3"), Some(ratio(3, 10)));
        assert_eq!(parse("12"), Some(int(12)));
        assert_eq!(parse("-1.5"), Some(ratio(-3, 2)));
        assert_eq!(parse(".5"), Some(ratio(1, 2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("abc"), None);
        assert_eq!(parse(""), None);
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(floor_u64(&ratio(7, 2)), 3);
        assert_eq!(ceil_u64(&ratio(7, 2)), 4);
        assert_eq!(ceil_u64(&int(4)), 4);
        assert_eq!(floor_u64(&int(-3)), 0);
    }

    #[test]
    fn sqrt_is_a_tight_lower_bound() {
        let two = int(2);
        let r = sqrt_floor(&two, 30);
        assert!(&r * &r <= two);
        let step = Q::new(BigInt::one(), BigInt::one() << 30usize);
        let up = &r + &step;
        assert!(&up * &up > two);
        assert_eq!(sqrt_floor(&int(9), 10), int(3));
    }
}
