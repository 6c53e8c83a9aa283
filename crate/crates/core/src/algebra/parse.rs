//! Text forms: the `num: ... / den: ...` serialization and a small infix
//! expression reader used for coefficient input on the command line.

use num_bigint::BigInt;

use super::poly::{Monomial, Poly, Var};
use super::{AlgebraError, RatExpr};

fn perr(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse(msg.into())
}

fn parse_monomial_list(text: &str) -> Result<Poly, AlgebraError> {
    let text = text.trim();
    if text == "0" {
        return Ok(Poly::zero());
    }
    let mut terms = Vec::new();
    for raw in text.split('+') {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(perr(format!("empty term in `{text}`")));
        }
        let mut factors = raw.split('*').map(str::trim);
        let first = factors.next().unwrap();
        let (coef, mut mono) = match first.parse::<BigInt>() {
            Ok(c) => (c, Monomial::one()),
            Err(_) => {
                let (sign, body) = match first.strip_prefix('-') {
                    Some(b) => (BigInt::from(-1), b),
                    None => (BigInt::from(1), first),
                };
                (sign, parse_power(body)?)
            }
        };
        for f in factors {
            mono = mono * parse_power(f)?;
        }
        terms.push((mono, coef));
    }
    Ok(Poly::from_terms(terms))
}

fn parse_power(f: &str) -> Result<Monomial, AlgebraError> {
    let (name, e) = match f.split_once('^') {
        Some((n, e)) => (
            n.trim(),
            e.trim()
                .parse::<u32>()
                .map_err(|_| perr(format!("bad exponent in `{f}`")))?,
        ),
        None => (f, 1),
    };
    let v = Var::parse(name).ok_or_else(|| perr(format!("unknown symbol `{name}`")))?;
    Ok(Monomial::var(v.slot(), e))
}

/// Reads the `num: <monomials> / den: <monomials>` form.
pub fn parse_ratexpr_text(text: &str) -> Result<RatExpr, AlgebraError> {
    let rest = text
        .trim()
        .strip_prefix("num:")
        .ok_or_else(|| perr("expected `num:`"))?;
    let (n, d) = rest
        .split_once("/ den:")
        .ok_or_else(|| perr("expected `/ den:`"))?;
    RatExpr::new(parse_monomial_list(n)?, parse_monomial_list(d)?)
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatExpr, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatExpr, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatExpr, AlgebraError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: i32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| perr("bad exponent"))?;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatExpr, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(perr("missing `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let v: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(RatExpr::from_poly(Poly::constant(v)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "b2" {
                    return Ok(RatExpr::b2());
                }
                Var::parse(name)
                    .map(RatExpr::var)
                    .ok_or_else(|| perr(format!("unknown symbol `{name}`")))
            }
            _ => Err(perr(format!("unexpected input at byte {}", self.pos))),
        }
    }
}

/// Reads an infix expression over integers and the symbols `s`, `u`, `b2`,
/// `C`, `T`, `c0..c5`, `dc0..dc5`, with `+ - * / ^` and parentheses.
pub fn parse_expr(text: &str) -> Result<RatExpr, AlgebraError> {
    let mut r = Reader {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = r.expr()?;
    if r.peek().is_some() {
        return Err(perr(format!("trailing input in `{text}`")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let e = parse_expr("(s^2 - u)/(3*u^2 + C*T)").unwrap();
        let back = parse_ratexpr_text(&e.to_string()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn infix_reader() {
        assert_eq!(parse_expr("b2").unwrap(), RatExpr::b2());
        assert_eq!(parse_expr("u^-1").unwrap(), RatExpr::u().recip().unwrap());
        assert_eq!(parse_expr("-2*s + 2*s").unwrap(), RatExpr::zero());
        assert!(parse_expr("x + 1").is_err());
        assert!(parse_expr("1/0").is_err());
    }
}
