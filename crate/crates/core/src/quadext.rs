//! Exact arithmetic in a real quadratic extension Q(sqrt(d)): values
//! `a + b sqrt(d)` with rational a, b and a fixed nonnegative non-square d.
//! Signs are decided exactly by rational squaring, never by approximation.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::rat::{rat_sqrt_exact, rat_to_string, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadExt {
    a: Rat,
    b: Rat,
    /// Radicand; zero when the value is rational (b = 0).
    d: Rat,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuadError {
    NegativeRadicand(String),
    MixedRadicands(String),
    DivisionByZero,
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::NegativeRadicand(s) => write!(f, "negative radicand: {s}"),
            QuadError::MixedRadicands(s) => write!(f, "incompatible radicands: {s}"),
            QuadError::DivisionByZero => write!(f, "division by zero"),
        }
    }
}

impl std::error::Error for QuadError {}

impl QuadExt {
    pub fn from_rat(a: Rat) -> Self {
        QuadExt {
            a,
            b: Rat::zero(),
            d: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        QuadExt::from_rat(crate::rat::rat_int(n))
    }

    /// `sqrt(r)` for rational `r >= 0`: exact rational when possible, else
    /// the surd `0 + 1 sqrt(r)`.
    pub fn sqrt_of(r: &Rat) -> Result<Self, QuadError> {
        if r.is_negative() {
            return Err(QuadError::NegativeRadicand(rat_to_string(r)));
        }
        if let Some(root) = rat_sqrt_exact(r) {
            return Ok(QuadExt::from_rat(root));
        }
        Ok(QuadExt {
            a: Rat::zero(),
            b: Rat::from_integer(1.into()),
            d: r.clone(),
        })
    }

    fn normalized(a: Rat, b: Rat, d: Rat) -> Self {
        if b.is_zero() || d.is_zero() {
            return QuadExt::from_rat(a);
        }
        if let Some(root) = rat_sqrt_exact(&d) {
            return QuadExt::from_rat(a + b * root);
        }
        QuadExt { a, b, d }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_d(&self, other: &Self) -> Result<Rat, QuadError> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => Ok(Rat::zero()),
            (false, true) => Ok(self.d.clone()),
            (true, false) => Ok(other.d.clone()),
            (false, false) => {
                if self.d == other.d {
                    Ok(self.d.clone())
                } else {
                    Err(QuadError::MixedRadicands(format!(
                        "sqrt({}) vs sqrt({})",
                        rat_to_string(&self.d),
                        rat_to_string(&other.d)
                    )))
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, QuadError> {
        let d = self.common_d(other)?;
        Ok(QuadExt::normalized(
            self.a.clone() + &other.a,
            self.b.clone() + &other.b,
            d,
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QuadError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, QuadError> {
        let d = self.common_d(other)?;
        // (a1 + b1 s)(a2 + b2 s) = a1 a2 + b1 b2 d + (a1 b2 + a2 b1) s
        let a = self.a.clone() * &other.a + self.b.clone() * &other.b * &d;
        let b = self.a.clone() * &other.b + other.a.clone() * &self.b;
        Ok(QuadExt::normalized(a, b, d))
    }

    pub fn div(&self, other: &Self) -> Result<Self, QuadError> {
        if other.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let d = self.common_d(other)?;
        // 1/(a + b s) = (a - b s)/(a^2 - b^2 d)
        let denom = other.a.clone() * &other.a - other.b.clone() * &other.b * &d;
        if denom.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let conj = QuadExt {
            a: other.a.clone(),
            b: -other.b.clone(),
            d: d.clone(),
        };
        let num = self.mul(&conj)?;
        Ok(QuadExt::normalized(num.a / &denom, num.b / &denom, d))
    }

    /// Exact sign: -1, 0 or +1.
    pub fn sign(&self) -> i32 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // opposite signs: compare a^2 with b^2 d
        let a2 = self.a.clone() * &self.a;
        let b2d = self.b.clone() * &self.b * &self.d;
        if a2 == b2d {
            0
        } else if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> i32 {
        self.sub(&QuadExt::from_rat(r.clone()))
            .expect("rational is compatible with any radicand")
            .sign()
    }
}

fn rat_sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", rat_to_string(&self.a))
        } else if self.a.is_zero() {
            write!(
                f,
                "{}*sqrt({})",
                rat_to_string(&self.b),
                rat_to_string(&self.d)
            )
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                rat_to_string(&self.a),
                rat_to_string(&self.b),
                rat_to_string(&self.d)
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn rational_folding() {
        let r = QuadExt::sqrt_of(&rat(9, 4)).unwrap();
        assert_eq!(r.as_rational(), Some(&rat(3, 2)));
        let s = QuadExt::sqrt_of(&rat_int(2)).unwrap();
        assert!(!s.is_rational());
        let two = s.mul(&s).unwrap();
        assert_eq!(two.as_rational(), Some(&rat_int(2)));
    }

    #[test]
    fn field_operations() {
        let s = QuadExt::sqrt_of(&rat_int(5)).unwrap();
        let x = QuadExt::from_int(2).add(&s).unwrap(); // 2 + sqrt 5
        let inv = QuadExt::from_int(1).div(&x).unwrap();
        assert_eq!(x.mul(&inv).unwrap(), QuadExt::from_int(1));
        assert!(QuadExt::from_int(1).div(&QuadExt::from_int(0)).is_err());
    }

    #[test]
    fn exact_signs() {
        let s5 = QuadExt::sqrt_of(&rat_int(5)).unwrap();
        // 2 - sqrt(5) < 0, 3 - sqrt(5) > 0, sqrt(5) - sqrt(5) = 0
        assert_eq!(QuadExt::from_int(2).sub(&s5).unwrap().sign(), -1);
        assert_eq!(QuadExt::from_int(3).sub(&s5).unwrap().sign(), 1);
        assert_eq!(s5.sub(&s5).unwrap().sign(), 0);
        assert_eq!(s5.cmp_rat(&rat(9, 4)), -1);
        assert_eq!(s5.cmp_rat(&rat_int(2)), 1);
    }

    #[test]
    fn mixed_radicands_rejected() {
        let s2 = QuadExt::sqrt_of(&rat_int(2)).unwrap();
        let s3 = QuadExt::sqrt_of(&rat_int(3)).unwrap();
        assert!(s2.add(&s3).is_err());
    }
}
