//! Multivariate polynomials over exact rationals, with graded-lex monomial
//! order, exact division, GCD by primitive pseudo-remainder sequences, and
//! perfect-square detection. This is the substrate the canonical form of
//! rational functions is built on.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::rat::{rat_sqrt_exact, rat_square_part, Rat};

/// Interned variable name. Ordering is by name, which fixes the variable
/// order of the monomial order once and for all.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Monomial: sorted list of (variable, positive exponent) pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(s, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| *e as u64).sum()
    }

    pub fn exponent_of(&self, s: &Symbol) -> u32 {
        self.0
            .iter()
            .find(|(v, _)| v == s)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Symbol> {
        self.0.iter().map(|(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Exact monomial quotient, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut i = 0;
        for (v, e) in &other.0 {
            loop {
                if i >= self.0.len() {
                    return None;
                }
                match self.0[i].0.cmp(v) {
                    Ordering::Less => {
                        out.push(self.0[i].clone());
                        i += 1;
                    }
                    Ordering::Equal => {
                        if self.0[i].1 < *e {
                            return None;
                        }
                        if self.0[i].1 > *e {
                            out.push((v.clone(), self.0[i].1 - e));
                        }
                        i += 1;
                        break;
                    }
                    Ordering::Greater => return None,
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        Some(Monomial(out))
    }

    /// Drops the given variable from the monomial.
    fn without(&self, s: &Symbol) -> Monomial {
        Monomial(self.0.iter().filter(|(v, _)| v != s).cloned().collect())
    }
}

// Graded lex: first by total degree, then lexicographically with earlier
// variables weighing more. `Ord::Greater` means "later in the order", so the
// leading monomial of a polynomial is the maximum.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Merge-compare exponents variable by variable in variable order;
        // a missing variable counts as exponent 0.
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => {
                    // self has an extra (earlier-ordered leftover) variable
                    return Ordering::Greater;
                }
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater, // self has earlier var with exp > 0
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with rational coefficients; no explicit zero terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MPoly { terms }
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(s, 1), Rat::one());
        MPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            out.extend(m.vars().cloned());
        }
        out
    }

    /// Leading (maximal) monomial and coefficient in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_rat(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn partial_derivative(&self, s: &Symbol) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(s);
            if e == 0 {
                continue;
            }
            let dm = m
                .div(&Monomial::var(s.clone(), 1))
                .expect("exponent checked positive");
            out.add_term(dm, c * Rat::from_integer(e.into()));
        }
        out
    }

    /// Evaluates at a full assignment of the polynomial's variables.
    pub fn eval(&self, point: &BTreeMap<Symbol, Rat>) -> Result<Rat, Symbol> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in &m.0 {
                let val = point.get(v).ok_or_else(|| v.clone())?;
                for _ in 0..*e {
                    term *= val;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Exact polynomial quotient. `None` when `other` does not divide `self`.
    pub fn exact_div(&self, other: &MPoly) -> Option<MPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = other.as_constant() {
            return Some(self.mul_rat(&(Rat::one() / c)));
        }
        let (lm, lc) = other.leading().unwrap();
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quo = MPoly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            let qm = rm.div(&lm)?;
            let qc = rc / &lc;
            let mut t = BTreeMap::new();
            t.insert(qm, qc);
            let t = MPoly { terms: t };
            rem = rem.sub(&t.mul(other));
            quo = quo.add(&t);
        }
        Some(quo)
    }

    /// Signed rational content: positive rational `c` such that `self / c`
    /// has coprime integer coefficients, carrying the sign of the leading
    /// coefficient. Zero polynomial gives 1.
    pub fn rational_content(&self) -> Rat {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return Rat::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        content
    }

    /// Integer-primitive normalization: divides by the signed rational
    /// content, so coefficients are coprime integers with positive leading
    /// coefficient.
    pub fn primitive_normalized(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let c = self.rational_content();
        self.mul_rat(&(Rat::one() / c))
    }

    /// Dense coefficient list of `self` viewed in `R[s]`, index = power of `s`.
    pub fn coeffs_in(&self, s: &Symbol) -> Vec<MPoly> {
        let deg = self
            .terms
            .keys()
            .map(|m| m.exponent_of(s))
            .max()
            .unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent_of(s) as usize;
            out[e].add_term(m.without(s), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(s: &Symbol, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let se = MPoly {
                terms: {
                    let mut t = BTreeMap::new();
                    t.insert(Monomial::var(s.clone(), e as u32), Rat::one());
                    t
                },
            };
            out = out.add(&c.mul(&se));
        }
        out
    }

    /// True when every monomial has all-even exponents and a positive
    /// coefficient, which makes the polynomial nonnegative everywhere.
    pub fn evidently_nonnegative(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| c.is_positive() && m.0.iter().all(|(_, e)| e % 2 == 0))
    }
}

/// Polynomial GCD, normalized integer-primitive with positive leading
/// coefficient. Constant nonzero inputs act as units, giving gcd 1.
pub fn poly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.primitive_normalized();
    }
    if b.is_zero() {
        return a.primitive_normalized();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return MPoly::one();
    }
    if a == b {
        return a.primitive_normalized();
    }
    // Monomial fast path: the gcd with a monomial is the largest monomial
    // dividing every term of the other operand.
    if a.num_terms() == 1 {
        return monomial_gcd(a, b);
    }
    if b.num_terms() == 1 {
        return monomial_gcd(b, a);
    }
    let mut vars = a.variables();
    vars.extend(b.variables());
    if vars.len() == 1 {
        let v = vars.into_iter().next().expect("one variable");
        return univariate_gcd(a, b, &v);
    }
    let v = vars.into_iter().next_back().expect("non-constant inputs");

    let ac = a.coeffs_in(&v);
    let bc = b.coeffs_in(&v);
    if ac.len() == 1 {
        // `a` does not involve v: gcd(a, content_v(b))
        return poly_gcd(a, &content_in(&bc)).primitive_normalized();
    }
    if bc.len() == 1 {
        return poly_gcd(b, &content_in(&ac)).primitive_normalized();
    }

    let cont_a = content_in(&ac);
    let cont_b = content_in(&bc);
    let g_cont = poly_gcd(&cont_a, &cont_b);

    let pp_a = a.exact_div(&cont_a).expect("content divides");
    let pp_b = b.exact_div(&cont_b).expect("content divides");

    // Subresultant pseudo-remainder sequence: coefficient growth is tamed by
    // exact divisions with known factors, so no content gcds occur inside
    // the loop.
    let mut r0 = pp_a.coeffs_in(&v);
    let mut r1 = pp_b.coeffs_in(&v);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let d = (r0.len() - 1) - (r1.len() - 1);
        let rem = pseudo_rem(&r0, &r1, &v);
        if rem.iter().all(|c| c.is_zero()) {
            let g1 = MPoly::from_coeffs_in(&v, &r1);
            let cont = content_in(&r1);
            let pp = g1.exact_div(&cont).expect("content divides");
            return g_cont.mul(&pp).primitive_normalized();
        }
        let divisor = g.mul(&h.pow(d as u32));
        let rem: Vec<MPoly> = rem
            .iter()
            .map(|c| c.exact_div(&divisor).expect("subresultant divisor divides"))
            .collect();
        g = r1[r1.len() - 1].clone();
        h = if d == 0 {
            h
        } else {
            // h <- g^d / h^(d-1), exact in the coefficient ring
            let num = g.pow(d as u32);
            if d == 1 {
                num
            } else {
                num.exact_div(&h.pow((d - 1) as u32))
                    .expect("subresultant h update divides")
            }
        };
        r0 = r1;
        r1 = rem;
        if r1.len() == 1 {
            // degree zero remainder: the primitive gcd is the content gcd
            return g_cont.primitive_normalized();
        }
    }
}

fn monomial_gcd(mono: &MPoly, other: &MPoly) -> MPoly {
    let (m, _) = mono.leading().expect("nonzero monomial");
    let mut common: Option<Vec<(Symbol, u32)>> = None;
    for (om, _) in other.terms() {
        let mut this: Vec<(Symbol, u32)> = Vec::new();
        for v in m.vars() {
            let e = m.exponent_of(v).min(om.exponent_of(v));
            if e > 0 {
                this.push((v.clone(), e));
            }
        }
        common = Some(match common {
            None => this,
            Some(prev) => prev
                .into_iter()
                .filter_map(|(v, e)| {
                    let e2 = this
                        .iter()
                        .find(|(w, _)| w == &v)
                        .map(|(_, e2)| *e2)
                        .unwrap_or(0);
                    let m = e.min(e2);
                    if m > 0 {
                        Some((v, m))
                    } else {
                        None
                    }
                })
                .collect(),
        });
        if common.as_ref().map(|c| c.is_empty()).unwrap_or(false) {
            break;
        }
    }
    let mut g = Monomial::one();
    for (v, e) in common.unwrap_or_default() {
        g = g.mul(&Monomial::var(v, e));
    }
    MPoly::from_terms([(g, Rat::one())])
}

/// Plain Euclid over the field of rationals for univariate inputs.
fn univariate_gcd(a: &MPoly, b: &MPoly, v: &Symbol) -> MPoly {
    let mut r0 = a.coeffs_in(v);
    let mut r1 = b.coeffs_in(v);
    loop {
        let d1 = match r1.iter().rposition(|c| !c.is_zero()) {
            None => {
                let g = MPoly::from_coeffs_in(v, &r0);
                return g.primitive_normalized();
            }
            Some(d) => d,
        };
        let lc1 = r1[d1].as_constant().expect("univariate");
        loop {
            let d0 = match r0.iter().rposition(|c| !c.is_zero()) {
                None => break,
                Some(d) => d,
            };
            if d0 < d1 {
                break;
            }
            let lc0 = r0[d0].as_constant().expect("univariate");
            let q = lc0 / &lc1;
            for i in 0..=d1 {
                let sub = r1[i].mul_rat(&q);
                r0[i + d0 - d1] = r0[i + d0 - d1].sub(&sub);
            }
        }
        std::mem::swap(&mut r0, &mut r1);
    }
}

/// GCD of the coefficients (content of a polynomial in `R[v]`).
fn content_in(coeffs: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero();
    for c in coeffs {
        if !c.is_zero() {
            g = poly_gcd(&g, c);
            if g.as_constant().is_some() && !g.is_zero() {
                return MPoly::one();
            }
        }
    }
    if g.is_zero() {
        MPoly::one()
    } else {
        g
    }
}

/// Classical pseudo-remainder of dense coefficient vectors in `R[v]`:
/// `prem(a, b) = lc(b)^(deg a - deg b + 1) a  mod  b`, with the full
/// canonical power applied even when intermediate degrees drop early.
fn pseudo_rem(a: &[MPoly], b: &[MPoly], v: &Symbol) -> Vec<MPoly> {
    let _ = v;
    let db = b.len() - 1;
    let lb = b[db].clone();
    let da = match a.iter().rposition(|c| !c.is_zero()) {
        None => return vec![MPoly::zero()],
        Some(d) => d,
    };
    debug_assert!(da >= db);
    let needed = da - db + 1;
    let mut mults = 0usize;
    let mut r: Vec<MPoly> = a.to_vec();
    loop {
        let dr = match r.iter().rposition(|c| !c.is_zero()) {
            None => {
                r = vec![MPoly::zero()];
                break;
            }
            Some(d) => d,
        };
        if dr < db {
            r.truncate(dr + 1);
            break;
        }
        let lr = r[dr].clone();
        // r <- lb * r - lr * v^(dr-db) * b
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        mults += 1;
        for (i, bc) in b.iter().enumerate() {
            let idx = i + dr - db;
            r[idx] = r[idx].sub(&lr.mul(bc));
        }
        debug_assert!(r[dr].is_zero());
    }
    // top up to the canonical lc(b)^(da - db + 1) scaling
    while mults < needed {
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        mults += 1;
    }
    r
}

/// Exact polynomial square root, if `p` is a perfect square.
pub fn poly_sqrt(p: &MPoly) -> Option<MPoly> {
    if p.is_zero() {
        return Some(MPoly::zero());
    }
    if let Some(c) = p.as_constant() {
        return rat_sqrt_exact(&c).map(MPoly::constant);
    }
    let v = p.variables().into_iter().next_back().unwrap();
    let coeffs = p.coeffs_in(&v);
    let n = coeffs.len() - 1;
    if !n.is_multiple_of(2) {
        return None;
    }
    let m = n / 2;
    let mut s = vec![MPoly::zero(); m + 1];
    s[m] = poly_sqrt(&coeffs[n])?;
    let two_sm = s[m].mul_rat(&Rat::from_integer(2.into()));
    for k in (0..m).rev() {
        // coefficient of v^(m+k) in s^2 is 2 s_m s_k plus the already-known
        // products s_i s_j with i + j = m + k and k < i <= j < m
        let t = m + k;
        let mut acc = coeffs[t].clone();
        for i in (k + 1)..=(t / 2) {
            let j = t - i;
            if j >= m {
                continue;
            }
            if i == j {
                acc = acc.sub(&s[i].mul(&s[i]));
            } else {
                acc = acc.sub(&s[i].mul(&s[j]).mul_rat(&Rat::from_integer(2.into())));
            }
        }
        s[k] = acc.exact_div(&two_sm)?;
    }
    let cand = MPoly::from_coeffs_in(&v, &s);
    if cand.mul(&cand) == *p {
        Some(cand)
    } else {
        None
    }
}

/// Splits `p = square^2 * rest` pulling out the evident square factors:
/// the square part of the rational content and even powers of variables
/// common to all monomials. `rest` keeps integer-primitive-positive scaling.
pub fn extract_square_factor(p: &MPoly) -> (MPoly, MPoly) {
    if p.is_zero() {
        return (MPoly::one(), MPoly::zero());
    }
    let content = p.rational_content();
    let content_sq = rat_square_part(&content.abs());
    // common variable exponents
    let mut common: Option<BTreeMap<Symbol, u32>> = None;
    for (m, _) in p.terms() {
        let mut this: BTreeMap<Symbol, u32> = BTreeMap::new();
        for (v, e) in m.0.iter() {
            this.insert(v.clone(), *e);
        }
        common = Some(match common {
            None => this,
            Some(prev) => prev
                .into_iter()
                .filter_map(|(v, e)| this.get(&v).map(|e2| (v.clone(), e.min(*e2))))
                .collect(),
        });
    }
    let mut sq_mono = Monomial::one();
    for (v, e) in common.unwrap_or_default() {
        if e >= 2 {
            sq_mono = sq_mono.mul(&Monomial::var(v, e / 2));
        }
    }
    let square = MPoly::from_terms([(sq_mono, content_sq)]);
    let sq2 = square.mul(&square);
    let rest = p.exact_div(&sq2).expect("square factor divides");
    (square, rest)
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending graded-lex order for stable, readable output.
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_str = crate::rat::rat_to_string(&mag);
            if m.is_one() {
                write!(f, "{coeff_str}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{coeff_str}*")?;
                }
                let mut firstv = true;
                for (v, e) in m.0.iter() {
                    if !firstv {
                        write!(f, "*")?;
                    }
                    firstv = false;
                    if *e == 1 {
                        write!(f, "{v}")?;
                    } else {
                        write!(f, "{v}^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn x() -> Symbol {
        Symbol::new("x")
    }
    fn y() -> Symbol {
        Symbol::new("y")
    }

    fn xp() -> MPoly {
        MPoly::symbol(x())
    }
    fn yp() -> MPoly {
        MPoly::symbol(y())
    }

    #[test]
    fn monomial_order_graded_lex() {
        let m1 = Monomial::var(x(), 2); // x^2
        let m2 = Monomial::var(x(), 1).mul(&Monomial::var(y(), 1)); // x y
        let m3 = Monomial::var(y(), 2); // y^2
        let m4 = Monomial::var(x(), 1); // x
        assert!(m1 > m2 && m2 > m3 && m3 > m4);
        assert!(Monomial::var(y(), 3) > m1); // degree dominates
    }

    #[test]
    fn arithmetic_and_exact_division() {
        // (x + y)^2 = x^2 + 2xy + y^2
        let s = xp().add(&yp());
        let sq = s.mul(&s);
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(sq.exact_div(&s), Some(s.clone()));
        assert_eq!(sq.exact_div(&xp()), None);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let s = xp().add(&yp()); // x + y
        let a = s.mul(&xp()); // x(x+y)
        let b = s.mul(&yp()).mul(&s); // y(x+y)^2
        let g = poly_gcd(&a, &b);
        assert_eq!(g, s.primitive_normalized());
    }

    #[test]
    fn gcd_univariate_cancellation() {
        // gcd(x^4 - 1, x^4) = 1; gcd(x^2 - 1, x^3 - x) = x^2 - 1
        let x4 = xp().pow(4);
        let a = x4.sub(&MPoly::one());
        assert_eq!(poly_gcd(&a, &x4), MPoly::one());
        let b = xp().pow(2).sub(&MPoly::one());
        let c = xp().pow(3).sub(&xp());
        assert_eq!(poly_gcd(&b, &c), b.primitive_normalized());
    }

    #[test]
    fn sqrt_detection() {
        let s = xp().add(&yp().mul_rat(&rat(2, 1))).add(&MPoly::constant(rat(1, 2)));
        let sq = s.mul(&s);
        let root = poly_sqrt(&sq).unwrap();
        assert!(root == s || root == s.neg());
        assert_eq!(poly_sqrt(&xp()), None);
        assert_eq!(poly_sqrt(&xp().pow(2).add(&MPoly::one())), None);
        assert_eq!(poly_sqrt(&xp().pow(4)), Some(xp().pow(2)));
    }

    #[test]
    fn square_factor_extraction() {
        // 12 x^2 y = (2x)^2 * 3y
        let p = xp().pow(2).mul(&yp()).mul_rat(&rat_int(12));
        let (sq, rest) = extract_square_factor(&p);
        assert_eq!(sq, xp().mul_rat(&rat_int(2)));
        assert_eq!(rest, yp().mul_rat(&rat_int(3)));
    }

    #[test]
    fn derivative_and_eval() {
        // d/dx (x^3 y) = 3 x^2 y
        let p = xp().pow(3).mul(&yp());
        let d = p.partial_derivative(&x());
        assert_eq!(d, xp().pow(2).mul(&yp()).mul_rat(&rat_int(3)));
        let mut pt = BTreeMap::new();
        pt.insert(x(), rat_int(2));
        pt.insert(y(), rat(1, 2));
        assert_eq!(p.eval(&pt).unwrap(), rat_int(4));
    }
}
