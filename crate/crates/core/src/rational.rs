//! Exact rational helpers on top of `num-rational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Parses `"3"`, `"-0.25"`, `"2/3"` or `"1e-3"` exactly.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_q(n)?;
        let d = parse_q(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s}")));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..]
                .parse()
                .map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().unwrap() };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Q::from_integer(numer);
    if scale >= 0 {
        value *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// Rising factorial `(a)_n`.
pub fn rising(a: &Q, n: u32) -> Q {
    let mut acc = Q::one();
    let mut t = a.clone();
    for _ in 0..n {
        acc *= &t;
        t += Q::one();
    }
    acc
}

/// `Γ(a + n) / Γ(a)` for any integer `n`, as a rational; `None` at a pole.
pub fn gamma_ratio(a: &Q, n: i64) -> Option<Q> {
    if n >= 0 {
        Some(rising(a, n as u32))
    } else {
        let base = a + q_int(n);
        let den = rising(&base, (-n) as u32);
        if den.is_zero() {
            None
        } else {
            Some(den.recip())
        }
    }
}

/// Whether `x` is a nonpositive integer.
pub fn is_nonpositive_integer(x: &Q) -> bool {
    x.is_integer() && !x.is_positive()
}

pub fn factorial(n: u32) -> Q {
    rising(&Q::one(), n)
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_decimals() {
        assert_eq!(parse_q("0.25").unwrap(), q_frac(1, 4));
        assert_eq!(parse_q("-0.25").unwrap(), q_frac(-1, 4));
        assert_eq!(parse_q("2/3").unwrap(), q_frac(2, 3));
        assert_eq!(parse_q("0.1").unwrap(), q_frac(1, 10));
        assert_eq!(parse_q("12").unwrap(), q_int(12));
        assert_eq!(parse_q("1.5e1").unwrap(), q_int(15));
        assert_eq!(parse_q("2.5e-1").unwrap(), q_frac(1, 4));
        assert!(parse_q("abc").is_err());
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn rising_and_gamma_ratio() {
        assert_eq!(rising(&q_int(3), 2), q_int(12));
        assert_eq!(rising(&q_frac(1, 2), 2), q_frac(3, 4));
        assert_eq!(gamma_ratio(&q_int(3), -2), Some(q_frac(1, 2)));
        assert_eq!(gamma_ratio(&q_int(1), -1), None);
        assert_eq!(factorial(5), q_int(120));
    }
}
