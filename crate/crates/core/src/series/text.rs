//! Canonical text and JSON forms of [`TSeries`].
//!
//! Text: terms by ascending total degree, lex descending within a degree,
//! then ` + O(N)`. A multi-term coefficient is parenthesized, with a leading
//! minus pulled out: `1 - (a1*a2 - 3*a3)*x0*x1*x2 + O(4)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{SeriesError, TSeries};
use crate::coeffring::{Monomial, Poly, VarList};

/// Write one `coefficient * monomial` summand.
pub(crate) fn write_coeff_term(out: &mut String, c: &Poly, mono: &str, first: bool) {
    let text = c.to_string();
    let negative = text.starts_with('-');
    let body = if negative { (-c).to_string() } else { text };
    let compound = body.contains(' ');
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    if mono.is_empty() {
        if compound && (negative || !first) {
            out.push('(');
            out.push_str(&body);
            out.push(')');
        } else {
            out.push_str(&body);
        }
    } else if body == "1" {
        out.push_str(mono);
    } else {
        if compound {
            out.push('(');
            out.push_str(&body);
            out.push(')');
        } else {
            out.push_str(&body);
        }
        out.push('*');
        out.push_str(mono);
    }
}

impl TSeries {
    /// Terms in printing order.
    pub fn display_terms(&self) -> Vec<(&Monomial, &Poly)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| b.0.lex_cmp(a.0)));
        v
    }

    /// Parse the canonical text form. The coefficient variables must be
    /// declared; series variables take precedence on a name clash.
    pub fn parse(text: &str, vars: &VarList, coeff_vars: &VarList) -> Result<TSeries, SeriesError> {
        let text = text.trim();
        let pos = text.rfind("O(").ok_or_else(|| SeriesError::Parse("missing `O(N)` marker".into()))?;
        let tail = text[pos + 2..]
            .strip_suffix(')')
            .ok_or_else(|| SeriesError::Parse("unterminated `O(`".into()))?;
        let order: u32 =
            tail.trim().parse().map_err(|_| SeriesError::Parse(format!("bad order `{tail}`")))?;
        let head = text[..pos].trim_end();
        let body = match head.strip_suffix('+') {
            Some(b) => b.trim_end(),
            None if head.is_empty() => "",
            None => return Err(SeriesError::Parse("expected `+ O(N)`".into())),
        };
        let all = vars.union(coeff_vars);
        let p = if body.is_empty() { Poly::zero(&all) } else { Poly::parse(body, &all)? };
        TSeries::from_poly(&p, vars, coeff_vars, order)
    }

    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            vars: self.vars.names().to_vec(),
            coeff_vars: self.coeff_vars.names().to_vec(),
            order: self.order,
            terms: self
                .display_terms()
                .into_iter()
                .map(|(m, c)| TermRecord { exponents: m.exps().to_vec(), coefficient: c.to_string() })
                .collect(),
            text: self.to_string(),
        }
    }

    pub fn from_record(r: &SeriesRecord) -> Result<TSeries, SeriesError> {
        let vars = VarList::new(&r.vars);
        let cvars = VarList::new(&r.coeff_vars);
        let mut s = TSeries::zero(&vars, &cvars, r.order);
        for t in &r.terms {
            if t.exponents.len() != vars.len() {
                return Err(SeriesError::Parse(format!(
                    "exponent vector {:?} has the wrong length",
                    t.exponents
                )));
            }
            let m = Monomial::from_exps(&t.exponents);
            if m.degree() >= r.order {
                return Err(SeriesError::BeyondTruncation { degree: m.degree(), order: r.order });
            }
            s.add_term(m, &Poly::parse(&t.coefficient, &cvars)?);
        }
        Ok(s)
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, (m, c)) in self.display_terms().into_iter().enumerate() {
            let mut mono = String::new();
            m.write(&self.vars, &mut mono);
            write_coeff_term(&mut out, c, &mono, i == 0);
        }
        if out.is_empty() {
            write!(f, "O({})", self.order)
        } else {
            write!(f, "{out} + O({})", self.order)
        }
    }
}

/// JSON form of a series: variable lists, order, and each term's exponent
/// vector with its coefficient in canonical text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub vars: Vec<String>,
    pub coeff_vars: Vec<String>,
    pub order: u32,
    pub terms: Vec<TermRecord>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}
