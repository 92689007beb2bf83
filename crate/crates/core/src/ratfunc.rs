//! Canonical multivariate rational functions: coprime numerator/denominator,
//! denominator monic in graded-lex order. Structural equality of canonical
//! forms decides equality as rational functions.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::{EvalError, ExprError};
use crate::poly::{extract_square_factor, poly_gcd, poly_sqrt, MPoly, Symbol};
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    /// Canonicalizes `num/den`: reduces by the GCD and scales the denominator
    /// monic (leading graded-lex coefficient 1, hence positive).
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFunc, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: MPoly::zero(),
                den: MPoly::one(),
            });
        }
        let g = poly_gcd(&num, &den);
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            num = num.mul_rat(&inv);
            den = den.mul_rat(&inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: MPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(MPoly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(MPoly::one())
    }

    pub fn constant(c: Rat) -> RatFunc {
        RatFunc::from_poly(MPoly::constant(c))
    }

    pub fn symbol(s: Symbol) -> RatFunc {
        RatFunc::from_poly(MPoly::symbol(s))
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == MPoly::one() && self.den == MPoly::one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        // Henrici reduction: with reduced inputs a/b + c/d and g = gcd(b, d),
        // the only factor the raw sum can share with b(d/g) lies in g.
        let g = poly_gcd(&self.den, &other.den);
        if g.as_constant().is_some() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            return RatFunc::raw_monic(num, den);
        }
        let b1 = self.den.exact_div(&g).expect("gcd divides");
        let d1 = other.den.exact_div(&g).expect("gcd divides");
        let t = self.num.mul(&d1).add(&other.num.mul(&b1));
        let g2 = poly_gcd(&t, &g);
        let (num, den) = if g2.as_constant().is_some() {
            (t, self.den.mul(&d1))
        } else {
            (
                t.exact_div(&g2).expect("gcd divides"),
                self.den
                    .exact_div(&g2)
                    .expect("gcd divides")
                    .mul(&d1),
            )
        };
        RatFunc::raw_monic(num, den)
    }

    /// Scales an already-coprime pair to the monic-denominator normal form.
    fn raw_monic(mut num: MPoly, mut den: MPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            num = num.mul_rat(&inv);
            den = den.mul_rat(&inv);
        }
        RatFunc { num, den }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        // cross-cancel first: with reduced inputs the only common factors of
        // the product are gcd(n1, d2) and gcd(n2, d1)
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = other.den.exact_div(&g1).expect("gcd divides");
        let n2 = other.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        RatFunc::raw_monic(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn mul_rat(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.mul_rat(c),
            den: self.den.clone(),
        }
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, ExprError> {
        if other.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        // the flipped pair stays coprime; only the scaling changes
        let inv = RatFunc::raw_monic(other.den.clone(), other.num.clone());
        Ok(self.mul(&inv))
    }

    pub fn inverse(&self) -> Result<RatFunc, ExprError> {
        RatFunc::one().div(self)
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc, ExprError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Exact partial derivative by the quotient rule.
    pub fn diff(&self, s: &Symbol) -> RatFunc {
        let dd = self.den.partial_derivative(s);
        if dd.is_zero() {
            // constant denominator: derivative of the numerator only
            return RatFunc::raw_monic(self.num.partial_derivative(s), self.den.clone());
        }
        let dn = self.num.partial_derivative(s);
        let t = dn.mul(&self.den).sub(&self.num.mul(&dd));
        // reduce against one factor of den first, then finish canonically
        let g = poly_gcd(&t, &self.den);
        if g.as_constant().is_some() {
            RatFunc::new(t, self.den.mul(&self.den)).expect("nonzero denominator")
        } else {
            let tn = t.exact_div(&g).expect("gcd divides");
            let dred = self.den.exact_div(&g).expect("gcd divides");
            RatFunc::new(tn, dred.mul(&self.den)).expect("nonzero denominator")
        }
    }

    pub fn eval(&self, point: &BTreeMap<Symbol, Rat>) -> Result<Rat, EvalError> {
        let d = self
            .den
            .eval(point)
            .map_err(EvalError::MissingCoordinate)?;
        if d.is_zero() {
            return Err(EvalError::Domain(format!(
                "denominator {} vanishes",
                self.den
            )));
        }
        let n = self
            .num
            .eval(point)
            .map_err(EvalError::MissingCoordinate)?;
        Ok(n / d)
    }

    /// Exact square root within rational functions, when one exists. The
    /// representative returned has positive leading numerator coefficient.
    pub fn sqrt_exact(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return Some(RatFunc::zero());
        }
        let dn = poly_sqrt(&self.den)?;
        let lead = self.num.leading().expect("nonzero").1;
        let num = if lead.is_negative() {
            return None; // negative leading coefficient: not a square
        } else {
            poly_sqrt(&self.num)?
        };
        let num = if num.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            num.neg()
        } else {
            num
        };
        Some(RatFunc { num, den: dn })
    }

    /// Splits `self = square^2 * rest`, pulling evident square factors out of
    /// the numerator and denominator.
    pub fn extract_square_factor(&self) -> (RatFunc, RatFunc) {
        let (sn, rn) = extract_square_factor(&self.num);
        let (sd, rd) = extract_square_factor(&self.den);
        let square = RatFunc::new(sn, sd).expect("nonzero");
        let rest = RatFunc::new(rn, rd).expect("nonzero");
        (square, rest)
    }

    /// Sound but incomplete nonnegativity certificate: every monomial of
    /// both numerator and denominator has even exponents and a positive
    /// coefficient.
    pub fn evidently_nonnegative(&self) -> bool {
        !self.is_zero()
            && self.num.evidently_nonnegative()
            && self.den.evidently_nonnegative()
            || self.is_zero()
    }
}

impl std::fmt::Display for RatFunc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            if self.num.num_terms() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
