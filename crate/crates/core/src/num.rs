//! Exact rational helpers shared by the geometry kernel.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses a decimal literal (`-0.002`, `1e-3`, `17`) or a fraction (`p/q`)
/// into an exact rational.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid number `{token}`"));
    let token = token.trim();
    if token.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{token}`")));
        }
        return Ok(Rational::new(num, den));
    }

    let (mantissa, exponent) = match token.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = token[pos + 1..].parse().map_err(|_| bad())?;
            (&token[..pos], exp)
        }
        None => (token, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    // Exponents are bounded so hostile input cannot request 10^(2^60).
    let shift = exponent - frac_part.len() as i64;
    if shift.abs() > 4096 {
        return Err(Error::Parse(format!("exponent out of range in `{token}`")));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| bad())?
    };
    if negative {
        value = -value;
    }
    let ten = BigInt::from(10u32);
    let out = if shift >= 0 {
        Rational::from_integer(value * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(value, num_traits::pow(ten, (-shift) as usize))
    };
    Ok(out)
}

/// The exact value of a finite binary64 float.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Degenerate(format!("non-finite coordinate {x}")))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Only reached for magnitudes beyond f64 range.
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Rounds `x` to the nearest multiple of `2^-bits`, exactly representable
/// as a small dyadic rational.
pub fn snap_dyadic(x: f64, bits: u32) -> Rational {
    let scale = (bits as f64).exp2();
    let scaled = (x * scale).round();
    let num = BigInt::from(scaled as i128);
    Rational::new(num, BigInt::one() << bits)
}

/// Smallest bit count `b` such that `2^-b <= tol`, clamped to a sane range.
pub fn bits_for_resolution(tol: f64) -> u32 {
    if !(tol > 0.0) || !tol.is_finite() {
        return 52;
    }
    (-tol.log2()).ceil().clamp(8.0, 80.0) as u32
}

/// Scales a rational row to a primitive integer row with the same direction
/// (multiplying by the positive lcm of denominators, then dividing by the gcd).
pub fn primitive_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = row
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    primitive(ints)
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

pub fn sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
