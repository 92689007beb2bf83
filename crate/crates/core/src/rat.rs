//! Exact rational scalars used everywhere in the engine. No floats, ever.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Parses `"p"` or `"p/q"` with optional leading sign.
pub fn rat_from_str(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("bad integer `{num}` in rational literal `{s}`"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("bad integer `{den}` in rational literal `{s}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in rational literal `{s}`"));
    }
    Ok(Rat::new(n, d))
}

/// Prints as `p` or `p/q` (reduced, denominator positive).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = bigint_sqrt_exact(r.numer())?;
    let d = bigint_sqrt_exact(r.denom())?;
    Some(Rat::new(n, d))
}

/// Largest rational `s > 0` with `s^2` dividing `r` in the sense `r = s^2 * r'`
/// where the numerator and denominator of `r'` are squarefree integers.
pub fn rat_square_part(r: &Rat) -> Rat {
    Rat::new(int_square_part(r.numer()), int_square_part(r.denom()))
}

fn int_square_part(n: &BigInt) -> BigInt {
    // Trial division is plenty at the coefficient sizes the engine sees.
    let mut n = n.abs();
    let mut part = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let sq = &p * &p;
        while n.is_multiple_of(&sq) {
            n = &n / &sq;
            part *= &p;
        }
        p += 1;
    }
    part
}
