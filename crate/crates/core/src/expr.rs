//! Exact symbolic scalars: a canonical rational function plus a linear
//! combination of square roots of rational functions. Construction always
//! normalizes, so structural equality decides equality (completely so on the
//! rational subclass; radicands are canonicalized by square-factor
//! extraction).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;

use crate::error::{EvalError, ExprError};
use crate::poly::Symbol;
use crate::rat::{rat_sqrt_exact, Rat};
use crate::ratfunc::RatFunc;

/// One radical summand `coeff * sqrt(radicand)`. The radicand is canonical,
/// not a perfect square, with evident square factors already pulled out.
#[derive(Clone, PartialEq, Eq, Debug)]
struct RadTerm {
    coeff: RatFunc,
    radicand: RatFunc,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expr {
    base: RatFunc,
    radicals: Vec<RadTerm>, // sorted by radicand (by its display form), coeffs nonzero
}

impl Expr {
    pub fn zero() -> Expr {
        Expr {
            base: RatFunc::zero(),
            radicals: Vec::new(),
        }
    }

    pub fn one() -> Expr {
        Expr::from_ratfunc(RatFunc::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::from_ratfunc(RatFunc::constant(crate::rat::rat_int(n)))
    }

    pub fn rational(r: Rat) -> Expr {
        Expr::from_ratfunc(RatFunc::constant(r))
    }

    pub fn symbol(name: &str) -> Expr {
        Expr::from_ratfunc(RatFunc::symbol(Symbol::new(name)))
    }

    pub fn sym(s: Symbol) -> Expr {
        Expr::from_ratfunc(RatFunc::symbol(s))
    }

    pub fn from_ratfunc(r: RatFunc) -> Expr {
        Expr {
            base: r,
            radicals: Vec::new(),
        }
    }

    /// The rational-function part, when the expression carries no radicals.
    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        if self.radicals.is_empty() {
            Some(&self.base)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.radicals.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.base.is_one() && self.radicals.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.radicals.is_empty() {
            self.base.as_constant()
        } else {
            None
        }
    }

    pub fn has_radicals(&self) -> bool {
        !self.radicals.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        let mut v = self.base.variables();
        for t in &self.radicals {
            v.extend(t.coeff.variables());
            v.extend(t.radicand.variables());
        }
        v
    }

    fn from_parts(base: RatFunc, mut terms: Vec<RadTerm>) -> Expr {
        terms.retain(|t| !t.coeff.is_zero());
        terms.sort_by_key(|t| radicand_key(&t.radicand));
        // merge equal radicands
        let mut merged: Vec<RadTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = merged.last_mut() {
                if last.radicand == t.radicand {
                    last.coeff = last.coeff.add(&t.coeff);
                    continue;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| !t.coeff.is_zero());
        Expr {
            base,
            radicals: merged,
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let mut terms = self.radicals.clone();
        terms.extend(other.radicals.iter().cloned());
        Expr::from_parts(self.base.add(&other.base), terms)
    }

    pub fn neg(&self) -> Expr {
        Expr {
            base: self.base.neg(),
            radicals: self
                .radicals
                .iter()
                .map(|t| RadTerm {
                    coeff: t.coeff.neg(),
                    radicand: t.radicand.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        let mut base = self.base.mul(&other.base);
        let mut terms: Vec<RadTerm> = Vec::new();
        for t in &other.radicals {
            terms.push(RadTerm {
                coeff: self.base.mul(&t.coeff),
                radicand: t.radicand.clone(),
            });
        }
        for t in &self.radicals {
            terms.push(RadTerm {
                coeff: other.base.mul(&t.coeff),
                radicand: t.radicand.clone(),
            });
        }
        for a in &self.radicals {
            for b in &other.radicals {
                let c = a.coeff.mul(&b.coeff);
                if a.radicand == b.radicand {
                    base = base.add(&c.mul(&a.radicand));
                } else {
                    // sqrt(r) * sqrt(s) = sqrt(r s); the sqrt constructor
                    // re-extracts square factors and perfect squares.
                    let prod = a.radicand.mul(&b.radicand);
                    let (b2, ts) = sqrt_of_ratfunc(&prod).scale(&c).split();
                    base = base.add(&b2);
                    terms.extend(ts);
                }
            }
        }
        Expr::from_parts(base, terms)
    }

    fn scale(&self, c: &RatFunc) -> Expr {
        Expr {
            base: self.base.mul(c),
            radicals: self
                .radicals
                .iter()
                .map(|t| RadTerm {
                    coeff: t.coeff.mul(c),
                    radicand: t.radicand.clone(),
                })
                .collect(),
        }
    }

    fn split(self) -> (RatFunc, Vec<RadTerm>) {
        (self.base, self.radicals)
    }

    pub fn div(&self, other: &Expr) -> Result<Expr, ExprError> {
        if other.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if other.radicals.is_empty() {
            let inv = other.base.inverse()?;
            return Ok(self.scale(&inv));
        }
        if other.radicals.len() == 1 {
            let t = &other.radicals[0];
            if other.base.is_zero() {
                // 1/(c sqrt(r)) = sqrt(r)/(c r)
                let denom = t.coeff.mul(&t.radicand);
                let inv = Expr::from_parts(
                    RatFunc::zero(),
                    vec![RadTerm {
                        coeff: denom.inverse()?,
                        radicand: t.radicand.clone(),
                    }],
                );
                return Ok(self.mul(&inv));
            }
            // 1/(p + c sqrt(r)) = (p - c sqrt(r)) / (p^2 - c^2 r)
            let conj = Expr::from_parts(
                other.base.clone(),
                vec![RadTerm {
                    coeff: t.coeff.neg(),
                    radicand: t.radicand.clone(),
                }],
            );
            let denom = other
                .base
                .mul(&other.base)
                .sub(&t.coeff.mul(&t.coeff).mul(&t.radicand));
            if denom.is_zero() {
                // p^2 = c^2 r means sqrt(r) is rational, which normalization
                // would have removed; treat as unsupported.
                return Err(ExprError::UnsupportedRadicalDivision);
            }
            let inv = conj.scale(&denom.inverse()?);
            return Ok(self.mul(&inv));
        }
        Err(ExprError::UnsupportedRadicalDivision)
    }

    pub fn pow(&self, e: i64) -> Result<Expr, ExprError> {
        let base = if e < 0 {
            Expr::one().div(self)?
        } else {
            self.clone()
        };
        let mut out = Expr::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Guarded square root. The radicand must be radical-free; perfect
    /// squares of rational functions are rewritten to the rational function
    /// when the root is evidently nonnegative on the domain.
    pub fn sqrt(&self) -> Result<Expr, ExprError> {
        if !self.radicals.is_empty() {
            return Err(ExprError::NestedRadical);
        }
        Ok(sqrt_of_ratfunc(&self.base))
    }

    pub fn diff(&self, s: &Symbol) -> Expr {
        let mut out = Expr::from_ratfunc(self.base.diff(s));
        for t in &self.radicals {
            // d(c sqrt(r)) = (c' + c r'/(2r)) sqrt(r)
            let dr = t.radicand.diff(s);
            let half = RatFunc::constant(crate::rat::rat(1, 2));
            let coeff = t.coeff.diff(s).add(
                &t.coeff
                    .mul(&dr)
                    .mul(&half)
                    .div(&t.radicand)
                    .expect("radicand nonzero"),
            );
            out = out.add(&Expr::from_parts(
                RatFunc::zero(),
                vec![RadTerm {
                    coeff,
                    radicand: t.radicand.clone(),
                }],
            ));
        }
        out
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &BTreeMap<Symbol, Rat>) -> Result<Rat, EvalError> {
        let mut acc = self.base.eval(point)?;
        for t in &self.radicals {
            let r = t.radicand.eval(point)?;
            if r.is_negative() {
                return Err(EvalError::Domain(format!(
                    "negative radicand {} at point",
                    t.radicand
                )));
            }
            let root = rat_sqrt_exact(&r).ok_or_else(|| {
                EvalError::IrrationalAtPoint(format!(
                    "sqrt({}) evaluates to the non-square rational {}",
                    t.radicand,
                    crate::rat::rat_to_string(&r)
                ))
            })?;
            acc += t.coeff.eval(point)? * root;
        }
        Ok(acc)
    }
}

fn radicand_key(r: &RatFunc) -> String {
    r.to_string()
}

/// Square root of a rational function as an `Expr`, extracting perfect
/// squares and evident square factors.
fn sqrt_of_ratfunc(r: &RatFunc) -> Expr {
    if r.is_zero() {
        return Expr::zero();
    }
    if let Some(root) = r.sqrt_exact() {
        if root.evidently_nonnegative() {
            return Expr::from_ratfunc(root);
        }
    }
    let (square, rest) = r.extract_square_factor();
    // `square` has all-even variable exponents by construction, hence is an
    // admissible nonnegative factor to pull out of the root.
    debug_assert!(square.evidently_nonnegative() || square.is_one());
    Expr::from_parts(
        RatFunc::zero(),
        vec![RadTerm {
            coeff: square,
            radicand: rest,
        }],
    )
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if !self.base.is_zero() {
            write!(f, "{}", self.base)?;
            first = false;
        }
        for t in &self.radicals {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if t.coeff.is_one() {
                write!(f, "sqrt({})", t.radicand)?;
            } else {
                write!(f, "{}*sqrt({})", t.coeff, t.radicand)?;
            }
        }
        Ok(())
    }
}
