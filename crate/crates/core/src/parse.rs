//! Infix expression parser: `+ - * / ^` with integer powers, `sqrt(...)`,
//! parenthesized subexpressions, integer literals (rationals are written
//! `p/q` and handled by exact division). Parsing normalizes, so
//! `parse(print(e)) == e` for every normalized expression.

use num_bigint::BigInt;

use crate::error::ExprError;
use crate::expr::Expr;
use crate::rat::Rat;

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<Tok>, ExprError> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                out.push(Tok::Plus);
                chars.next();
            }
            '-' => {
                out.push(Tok::Minus);
                chars.next();
            }
            '*' => {
                out.push(Tok::Star);
                chars.next();
            }
            '/' => {
                out.push(Tok::Slash);
                chars.next();
            }
            '^' => {
                out.push(Tok::Caret);
                chars.next();
            }
            '(' => {
                out.push(Tok::LParen);
                chars.next();
            }
            ')' => {
                out.push(Tok::RParen);
                chars.next();
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Int(s.parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(s));
            }
            other => {
                return Err(ExprError::Parse(format!(
                    "unexpected character `{other}` at byte {i}"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ExprError> {
        match self.next() {
            Some(ref got) if got == t => Ok(()),
            got => Err(ExprError::Parse(format!("expected {what}, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.next();
                    acc = acc.div(&self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.next();
            let e = self.exponent()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ExprError> {
        let mut neg = false;
        let mut parens = false;
        if let Some(Tok::LParen) = self.peek() {
            self.next();
            parens = true;
        }
        if let Some(Tok::Minus) = self.peek() {
            self.next();
            neg = true;
        }
        let n = match self.next() {
            Some(Tok::Int(n)) => n,
            got => {
                return Err(ExprError::Parse(format!(
                    "expected integer exponent, found {got:?}"
                )))
            }
        };
        if parens {
            self.expect(&Tok::RParen, "`)` after exponent")?;
        }
        let v: i64 = n
            .try_into()
            .map_err(|_| ExprError::Parse("exponent too large".into()))?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(Expr::rational(Rat::from_integer(n))),
            Some(Tok::Ident(name)) => {
                if name == "sqrt" {
                    self.expect(&Tok::LParen, "`(` after sqrt")?;
                    let inner = self.expr()?;
                    self.expect(&Tok::RParen, "`)` closing sqrt")?;
                    inner.sqrt()
                } else {
                    Ok(Expr::symbol(&name))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            got => Err(ExprError::Parse(format!(
                "expected a value, found {got:?}"
            ))),
        }
    }
}

/// Parses an expression string into normalized form.
pub fn parse_expr(input: &str) -> Result<Expr, ExprError> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(ExprError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::Parse(format!(
            "trailing input after expression: {:?}",
            &p.toks[p.pos..]
        )));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_chart_style_expressions() {
        let k = parse_expr("(x3^4 - 1)/x3^4").unwrap();
        let alt = parse_expr("1 - 1/x3^4").unwrap();
        assert_eq!(k, alt);
        let mu = parse_expr("2*(1 - 1/x3^2)").unwrap();
        assert_eq!(mu, parse_expr("2 - 2/x3^2").unwrap());
        assert!(parse_expr("x3^-2").unwrap().is_one() == false);
        assert_eq!(
            parse_expr("x3^-2").unwrap(),
            parse_expr("1/x3^2").unwrap()
        );
    }

    #[test]
    fn sqrt_and_rationals() {
        let e = parse_expr("sqrt((1/x3^2)^2)").unwrap();
        assert_eq!(e, parse_expr("1/x3^2").unwrap());
        let c = parse_expr("sqrt(9/4)").unwrap();
        assert_eq!(c, parse_expr("3/2").unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("").is_err());
        assert!(parse_expr("x +").is_err());
        assert!(parse_expr("1/0").is_err());
        assert!(parse_expr("$").is_err());
        assert!(parse_expr("x^y").is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "(x3^4 - 1)/x3^4",
            "2*(1 - 1/x3^2)",
            "-3 + 2/x3^2 + 1/x3^4 + 2/x3^6",
            "sqrt(x3 + 1)",
            "1/2 + 3*sqrt(2*x1)",
            "x1*x2*x3 - 7/5",
            "0",
            "-x1",
        ] {
            let e = parse_expr(s).unwrap();
            let printed = e.to_string();
            let back = parse_expr(&printed).unwrap();
            assert_eq!(back, e, "round trip failed for `{s}` printed as `{printed}`");
        }
    }
}
