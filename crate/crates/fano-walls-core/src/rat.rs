//! Shared exact-arithmetic helpers: short constructors for `BigRational`,
//! the `p/q` string codec used by every JSON encoding, and square-root
//! bounds needed by the scanner's certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Rational `p/q`. Panics on `q == 0`, as does `BigRational::new`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Canonical decimal-free rendering: `"p"` for integers, `"p/q"` otherwise,
/// always in lowest terms with the sign on the numerator.
pub fn rat_to_string(x: &Rat) -> String {
    x.to_string()
}

pub fn rat_from_str(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| format!("invalid rational {s:?}: {e}"))
}

/// Serde adapter for `BigRational` fields rendered as `p/q` strings.
pub mod rat_string {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&rat_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        rat_from_str(&s).map_err(D::Error::custom)
    }
}

/// Positive generator of the subgroup `xZ + yZ` of `(Q, +)`.
///
/// For `x = a/b`, `y = c/d` in lowest terms this is `gcd(ad, cb) / bd`,
/// reduced. Returns zero iff both inputs are zero.
pub fn rat_gcd(x: &Rat, y: &Rat) -> Rat {
    if x.is_zero() {
        return y.abs();
    }
    if y.is_zero() {
        return x.abs();
    }
    let num = (x.numer() * y.denom()).gcd(&(y.numer() * x.denom()));
    Rat::new(num, x.denom() * y.denom())
}

/// Floor of the square root of a non-negative integer.
pub fn int_sqrt_floor(n: &Int) -> Int {
    assert!(!n.is_negative(), "int_sqrt_floor of negative");
    n.sqrt()
}

/// Rational upper bound for `sqrt(x)`, `x >= 0`: with `x = p/q`,
/// `sqrt(x) = sqrt(pq)/q <= (floor(sqrt(pq)) + 1)/q`.
pub fn sqrt_upper_bound(x: &Rat) -> Rat {
    sqrt_upper_bound_prec(x, 1)
}

/// Rational lower bound for `sqrt(x)`, `x >= 0`.
pub fn sqrt_lower_bound(x: &Rat) -> Rat {
    sqrt_lower_bound_prec(x, 1)
}

/// Upper bound for `sqrt(x)` within `1/(scale * denom)` of the true value:
/// `sqrt(p/q) = sqrt(p q scale^2)/(q scale)`.
pub fn sqrt_upper_bound_prec(x: &Rat, scale: u64) -> Rat {
    assert!(!x.is_negative(), "sqrt_upper_bound of negative");
    assert!(scale > 0);
    let s = Int::from(scale);
    let n = x.numer() * x.denom() * &s * &s;
    Rat::new(int_sqrt_floor(&n) + 1, x.denom() * s)
}

/// Lower bound counterpart of `sqrt_upper_bound_prec`.
pub fn sqrt_lower_bound_prec(x: &Rat, scale: u64) -> Rat {
    assert!(!x.is_negative(), "sqrt_lower_bound of negative");
    assert!(scale > 0);
    let s = Int::from(scale);
    let n = x.numer() * x.denom() * &s * &s;
    Rat::new(int_sqrt_floor(&n), x.denom() * s)
}

/// Compares `sqrt(x)` with a rational `r`, exactly. Requires `x >= 0`.
pub fn cmp_sqrt(x: &Rat, r: &Rat) -> std::cmp::Ordering {
    assert!(!x.is_negative(), "cmp_sqrt of negative radicand");
    if r.is_negative() {
        return std::cmp::Ordering::Greater;
    }
    (x).cmp(&(r * r))
}

/// Formats a float with 12 significant digits, no exponent notation.
/// Used only for SVG coordinates; all mathematics stays rational.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // trim trailing zeros and a dangling point, keeping determinism
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn string_codec_round_trips() {
        for s in ["0", "3", "-3", "1/2", "-7/8", "115/48"] {
            let x = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&x), s);
        }
        assert_eq!(rat_to_string(&rat_from_str("2/4").unwrap()), "1/2");
        assert_eq!(rat_to_string(&rat_from_str("4/2").unwrap()), "2");
        assert!(rat_from_str("1.5").is_err());
        assert!(rat_from_str("1/0").is_err());
    }

    #[test]
    fn gcd_of_rationals() {
        assert_eq!(rat_gcd(&ratio(1, 2), &ratio(1, 3)), ratio(1, 6));
        assert_eq!(rat_gcd(&rat(4), &rat(6)), rat(2));
        assert_eq!(rat_gcd(&rat(0), &ratio(-3, 4)), ratio(3, 4));
        assert_eq!(rat_gcd(&ratio(-1, 1), &ratio(1, 1)), rat(1));
        assert_eq!(rat_gcd(&rat(0), &rat(0)), rat(0));
    }

    #[test]
    fn sqrt_bounds_bracket() {
        for x in [ratio(1, 4), rat(2), ratio(9, 4), ratio(17, 3), rat(0)] {
            let lo = sqrt_lower_bound(&x);
            let hi = sqrt_upper_bound(&x);
            assert!(&lo * &lo <= x, "lower bound too big for {x}");
            assert!(&hi * &hi > x || (x.is_zero() && hi > Rat::zero()));
        }
        // exact square: lower bound is exact
        assert_eq!(sqrt_lower_bound(&ratio(9, 4)), ratio(3, 2));
    }

    #[test]
    fn scaled_sqrt_bounds_tighten() {
        let x = rat(6);
        let coarse = sqrt_upper_bound_prec(&x, 1) - sqrt_lower_bound_prec(&x, 1);
        let fine = sqrt_upper_bound_prec(&x, 1000) - sqrt_lower_bound_prec(&x, 1000);
        assert!(fine < coarse);
        assert!(fine <= ratio(2, 1000));
        let lo = sqrt_lower_bound_prec(&x, 1000);
        let hi = sqrt_upper_bound_prec(&x, 1000);
        assert!(&lo * &lo <= x && x < &hi * &hi);
        // sqrt(6) = 2.449...: the scaled bracket pins three decimals
        assert_eq!(lo, ratio(2449, 1000));
        assert_eq!(hi, ratio(2450, 1000));
    }

    #[test]
    fn sqrt_comparison_is_exact() {
        assert_eq!(cmp_sqrt(&rat(2), &ratio(3, 2)), Ordering::Less);
        assert_eq!(cmp_sqrt(&rat(2), &ratio(7, 5)), Ordering::Greater);
        assert_eq!(cmp_sqrt(&ratio(9, 4), &ratio(3, 2)), Ordering::Equal);
        assert_eq!(cmp_sqrt(&rat(2), &rat(-1)), Ordering::Greater);
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(fmt_sig12(0.0), "0");
        assert_eq!(fmt_sig12(1.5), "1.5");
        assert_eq!(fmt_sig12(-0.125), "-0.125");
        assert_eq!(fmt_sig12(2.0f64.sqrt()), "1.41421356237");
        assert_eq!(fmt_sig12(150.0), "150");
    }
}
