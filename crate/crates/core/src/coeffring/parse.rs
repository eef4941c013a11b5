//! Recursive-descent parser for polynomial expressions.
//!
//! Accepts the canonical text form and general arithmetic built from
//! integers, variables, `zeta3`, `+ - * / ^` and parentheses. Division is
//! allowed only by nonzero constants.

use num_bigint::BigInt;

use super::{CoeffError, Poly, Scalar, VarList};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, CoeffError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(CoeffError::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a VarList,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, CoeffError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = &acc + &self.term()?;
            } else if self.eat_op('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, CoeffError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat_op('/') {
                let d = self.unary()?;
                let c =
                    d.as_scalar().ok_or_else(|| CoeffError::Parse("division by a non-constant".into()))?;
                acc = acc.scale(&c.inv()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, CoeffError> {
        if self.eat_op('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, CoeffError> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| CoeffError::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(CoeffError::Parse("expected a nonnegative integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, CoeffError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.vars, Scalar::Integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "zeta3" && self.vars.index("zeta3").is_none() {
                    Ok(Poly::constant(self.vars, Scalar::zeta3()))
                } else {
                    Poly::var(self.vars, &name)
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat_op(')') {
                    return Err(CoeffError::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            Some(t) => Err(CoeffError::Parse(format!("unexpected token {t:?}"))),
            None => Err(CoeffError::Parse("unexpected end of input".into())),
        }
    }
}

/// Parse `text` into a polynomial over `vars`.
pub fn parse_poly(text: &str, vars: &VarList) -> Result<Poly, CoeffError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(CoeffError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}
