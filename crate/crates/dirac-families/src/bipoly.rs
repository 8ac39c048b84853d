//! Bivariate polynomials in the rung variable `n` and the base variable
//! `t`, with the small expression grammar used by ladder JSON files:
//! rational literals, `n`, `t`, `+`, `-`, `*` (or `·`), integer powers
//! `^`, and parentheses.

use std::collections::BTreeMap;
use std::fmt;

use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Map `(n-exponent, t-exponent) → coefficient`, no zero entries stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn monomial(c: Scalar, n_exp: u32, t_exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((n_exp, t_exp), c);
        }
        BiPoly { terms }
    }

    pub fn constant(c: Scalar) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            let s = out.terms.get(k).map(|a| a + c).unwrap_or_else(|| c.clone());
            if s.is_zero() {
                out.terms.remove(k);
            } else {
                out.terms.insert(*k, s);
            }
        }
        out
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((na, ta), ca) in &self.terms {
            for ((nb, tb), cb) in &other.terms {
                let key = (na + nb, ta + tb);
                let add = ca * cb;
                let s = out.terms.get(&key).map(|a| a + &add).unwrap_or(add);
                if s.is_zero() {
                    out.terms.remove(&key);
                } else {
                    out.terms.insert(key, s);
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> BiPoly {
        let mut base = self.clone();
        let mut acc = BiPoly::constant(Scalar::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Substitute an integer rung for `n`, leaving a polynomial in `t`.
    pub fn eval_n(&self, n: i64) -> Poly {
        let nv = Scalar::from_int(n);
        let mut out = Poly::zero();
        for ((ne, te), c) in &self.terms {
            let mut scale = c.clone();
            for _ in 0..*ne {
                scale = &scale * &nv;
            }
            out = out.add(&Poly::monomial(scale, *te));
        }
        out
    }

    /// The maximal `n`-degree.
    pub fn n_degree(&self) -> u32 {
        self.terms.keys().map(|(ne, _)| *ne).max().unwrap_or(0)
    }

    /// The value of a constant polynomial, if it is one.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&(0, 0)) {
                return Some(c.clone());
            }
        }
        None
    }

    /// View as a polynomial in `n` with `Poly`-in-`t` coefficients:
    /// `coeffs[k]` is the coefficient of `n^k`.
    pub fn n_coefficients(&self) -> Vec<Poly> {
        let deg = self.n_degree() as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for ((ne, te), c) in &self.terms {
            out[*ne as usize] = out[*ne as usize].add(&Poly::monomial(c.clone(), *te));
        }
        out
    }

    /// Parse the expression grammar (see module docs).
    pub fn parse(input: &str) -> Result<BiPoly> {
        let tokens = tokenize(input)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::ParseExpr(format!("trailing input in {input:?}")));
        }
        Ok(e)
    }
}

impl fmt::Display for BiPoly {
    /// Canonical expression string, re-parseable by [`BiPoly::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((ne, te), c) in &self.terms {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if *ne == 1 {
                write!(f, "*n")?;
            } else if *ne > 1 {
                write!(f, "*n^{ne}")?;
            }
            if *te == 1 {
                write!(f, "*t")?;
            } else if *te > 1 {
                write!(f, "*t^{te}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Debug)]
enum Token {
    Num(Scalar),
    VarN,
    VarT,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            'n' => {
                out.push(Token::VarN);
                i += 1;
            }
            't' => {
                out.push(Token::VarT);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                // A directly attached /digits is part of the literal.
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                let s: Scalar = lit
                    .parse()
                    .map_err(|_| Error::ParseExpr(format!("bad literal {lit:?}")))?;
                out.push(Token::Num(s));
            }
            other => return Err(Error::ParseExpr(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let d = self.factor()?;
                    let c = d.as_constant().filter(|c| !c.is_zero()).ok_or_else(|| {
                        Error::ParseExpr(
                            "division is only by nonzero rational constants".to_string(),
                        )
                    })?;
                    acc = acc.mul(&BiPoly::constant(c.inv()?));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Num(s)) if s.is_rational() => {
                    self.pos += 1;
                    let num = s.re.numer().clone();
                    let exp: u32 = num
                        .try_into()
                        .map_err(|_| Error::ParseExpr("exponent must be a small non-negative integer".to_string()))?;
                    if !s.re.denom().eq(&num_bigint::BigInt::from(1)) {
                        return Err(Error::ParseExpr("exponent must be an integer".to_string()));
                    }
                    return Ok(base.pow(exp));
                }
                _ => return Err(Error::ParseExpr("expected integer exponent after ^".to_string())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly> {
        match self.peek().cloned() {
            Some(Token::Num(s)) => {
                self.pos += 1;
                Ok(BiPoly::constant(s))
            }
            Some(Token::VarN) => {
                self.pos += 1;
                Ok(BiPoly::monomial(Scalar::one(), 1, 0))
            }
            Some(Token::VarT) => {
                self.pos += 1;
                Ok(BiPoly::monomial(Scalar::one(), 0, 1))
            }
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::ParseExpr("missing closing parenthesis".to_string())),
                }
            }
            other => Err(Error::ParseExpr(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let p = BiPoly::parse("t/2*(3-2-n)").unwrap();
        // at n = 1: t/2·0 = 0; at n = -1: t/2·2 = t
        assert!(p.eval_n(1).is_zero());
        assert_eq!(p.eval_n(-1), Poly::t());

        let q = BiPoly::parse("1/8*t^2*n^2 + 1/4*t^2*n").unwrap();
        assert_eq!(q.eval_n(2), Poly::monomial(Scalar::from_int(1), 2));

        let r = BiPoly::parse("(n - 1)*(n + 1)").unwrap();
        assert_eq!(r.eval_n(3), Poly::from_int(8));
    }

    #[test]
    fn display_roundtrip() {
        let p = BiPoly::parse("-1/2 + 3*n*t^2 - t").unwrap();
        let q = BiPoly::parse(&p.to_string()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_garbage() {
        assert!(BiPoly::parse("x + 1").is_err());
        assert!(BiPoly::parse("(1 + t").is_err());
        assert!(BiPoly::parse("t^n").is_err());
    }
}
