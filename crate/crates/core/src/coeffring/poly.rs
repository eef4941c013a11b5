use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{is_prime, CoeffError, Monomial, Scalar, VarList};

/// Sparse multivariate polynomial over [`Scalar`] in a declared variable list.
///
/// No zero coefficients are stored. Terms are kept sorted by (total degree,
/// lex); the text form prints the highest terms first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: VarList,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(vars: &VarList) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarList, c: Scalar) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &VarList) -> Self {
        Self::constant(vars, Scalar::one())
    }

    pub fn int(vars: &VarList, n: i64) -> Self {
        Self::constant(vars, Scalar::int(n))
    }

    pub fn var(vars: &VarList, name: &str) -> Result<Self, CoeffError> {
        let i = vars.index(name).ok_or_else(|| CoeffError::UnknownVariable(name.to_string()))?;
        Ok(Self::term(vars, Monomial::var_power(vars.len(), i, 1), Scalar::one()))
    }

    pub fn term(vars: &VarList, m: Monomial, c: Scalar) -> Self {
        debug_assert_eq!(m.0.len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: &VarList, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Number of nonzero terms; `is_zero` is the emptiness test.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is constant.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += other`. Panics on a variable-list mismatch.
    pub fn add_assign_poly(&mut self, other: &Poly) {
        self.vars.check_same(&other.vars).expect("poly add");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        self.vars.check_same(&other.vars).expect("poly add");
        if c.is_one() {
            return self.add_assign_poly(other);
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), &(d * c));
        }
    }

    /// `self += a * b` without a temporary product.
    pub fn add_product(&mut self, a: &Poly, b: &Poly) {
        self.vars.check_same(&a.vars).expect("poly mul");
        a.vars.check_same(&b.vars).expect("poly mul");
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                self.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, CoeffError> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, CoeffError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, CoeffError> {
        self.vars.check_same(&other.vars)?;
        let mut out = Poly::zero(&self.vars);
        out.add_product(self, other);
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `value` for the variable `name`.
    pub fn substitute(&self, name: &str, value: &Poly) -> Result<Poly, CoeffError> {
        let i = self.vars.index(name).ok_or_else(|| CoeffError::UnknownVariable(name.to_string()))?;
        self.vars.check_same(&value.vars)?;
        let mut out = Poly::zero(&self.vars);
        let mut powers: Vec<Poly> = vec![Poly::one(&self.vars)];
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[i] = 0;
            let t = Poly::term(&self.vars, rest, c.clone());
            out = &out + &(&t * &powers[e]);
        }
        Ok(out)
    }

    /// Re-express over a different variable list, matching by name.
    /// Every variable occurring with nonzero exponent must exist in `target`.
    pub fn embed(&self, target: &VarList) -> Result<Poly, CoeffError> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.vars.iter().map(|n| target.index(n)).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(target.len());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| CoeffError::UnknownVariable(self.vars[i].clone()))?;
                nm.0[j] += e;
            }
            out.add_term(nm, c);
        }
        Ok(out)
    }

    /// Drop all terms of degree `> max_degree` in the variable `name`.
    pub fn truncate_in(&self, name: &str, max_degree: u32) -> Poly {
        let Some(i) = self.vars.index(name) else {
            return self.clone();
        };
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[i] <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reduce modulo the ideal `(prime, killed_vars...)`: drop every monomial
    /// containing a killed variable and reduce the remaining coefficients
    /// into `{0, .., prime-1}`.
    pub fn reduce_mod_ideal(&self, prime: Option<u64>, killed: &[&str]) -> Result<Poly, CoeffError> {
        if let Some(p) = prime {
            if !is_prime(p) {
                return Err(CoeffError::InvalidPrime(p));
            }
        }
        let idx = killed
            .iter()
            .map(|k| self.vars.index(k).ok_or_else(|| CoeffError::UnknownVariable(k.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            if idx.iter().any(|&i| m.0[i] > 0) {
                continue;
            }
            let c = match prime {
                Some(p) => c.reduce_mod(p)?,
                None => c.clone(),
            };
            out.add_term(m.clone(), &c);
        }
        Ok(out)
    }

    /// Map every coefficient; zero results are dropped.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        Poly::from_terms(&self.vars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Terms in printing order: total degree descending, then lex descending.
    pub fn display_terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    /// The first printed coefficient is negative (used to pull out a sign).
    pub fn leading_is_negative(&self) -> bool {
        self.display_terms().next().is_some_and(|(_, c)| prints_negative(c))
    }

    /// True when the printed form has more than one summand.
    pub fn is_compound(&self) -> bool {
        self.terms.len() > 1 || self.terms.values().any(Scalar::is_compound)
    }

    /// Parse the canonical text form (or any arithmetic expression) over `vars`.
    pub fn parse(text: &str, vars: &VarList) -> Result<Poly, CoeffError> {
        super::parse_poly(text, vars)
    }
}

/// Write `c*m` with sign handling. `first` controls whether a leading ` + `
/// separator is emitted.
pub(crate) fn write_signed_term(out: &mut String, c: &Scalar, mono: &str, first: bool) {
    let negative = prints_negative(c);
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let abs = if negative { -c } else { c.clone() };
    let wrap = abs.is_compound() && (negative || !mono.is_empty());
    if !mono.is_empty() && abs.is_one() {
        out.push_str(mono);
        return;
    }
    if wrap {
        out.push('(');
    }
    out.push_str(&abs.to_string());
    if wrap {
        out.push(')');
    }
    if !mono.is_empty() {
        out.push('*');
        out.push_str(mono);
    }
}

/// The scalar's own text form starts with a minus sign.
pub(crate) fn prints_negative(c: &Scalar) -> bool {
    c.to_string().starts_with('-')
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.display_terms().enumerate() {
            let mut mono = String::new();
            m.write(&self.vars, &mut mono);
            write_signed_term(&mut out, c, &mono, i == 0);
        }
        f.write_str(&out)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Panics on a variable-list mismatch; use [`Poly::try_add`] to handle it.
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("poly add")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("poly sub")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("poly mul")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn avars() -> VarList {
        VarList::new(&["a1", "a2", "a3", "a4", "a6"])
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, &avars()).unwrap()
    }

    #[test]
    fn discriminant_product() {
        let d = &p("a1^3 - 27*a3") * &p("a3^3");
        assert_eq!(d, p("a1^3*a3^3 - 27*a3^4"));
    }

    #[test]
    fn additive_inverse_and_binomial() {
        let x = p("a1*a2 - 3*a3 + 7");
        assert!((&x + &-&x).is_zero());
        assert_eq!(p("a1 + a3").pow(2), p("a1^2 + 2*a1*a3 + a3^2"));
    }

    #[test]
    fn mismatch_is_reported() {
        let other = VarList::new(&["t"]);
        let a = Poly::one(&avars());
        let b = Poly::one(&other);
        assert!(matches!(a.try_add(&b), Err(CoeffError::VariableMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(CoeffError::VariableMismatch { .. })));
    }

    #[test]
    fn reduce_mod_two_a1_a2() {
        let r = p("a1*a2 - 3*a3").reduce_mod_ideal(Some(2), &["a1", "a2"]).unwrap();
        assert_eq!(r, p("a3"));
        let r = p("a1*a3 - a2^2 + 5*a4").reduce_mod_ideal(Some(2), &["a1", "a2"]).unwrap();
        assert_eq!(r, p("a4"));
        let r = Poly::zero(&avars()).reduce_mod_ideal(Some(2), &["a1", "a2"]).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn reduce_errors() {
        assert!(matches!(p("a1").reduce_mod_ideal(Some(4), &[]), Err(CoeffError::InvalidPrime(4))));
        assert!(matches!(p("a1").reduce_mod_ideal(None, &["b"]), Err(CoeffError::UnknownVariable(_))));
        assert!(matches!(
            p("a1/2").reduce_mod_ideal(Some(2), &[]),
            Err(CoeffError::NonIntegerCoefficient(_))
        ));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(p("3*a3 - a1*a2").to_string(), "-a1*a2 + 3*a3");
        assert_eq!(p("a2 + a1^2").to_string(), "a1^2 + a2");
        assert_eq!(p("a3 + 2*a1*a2 + a1^3").to_string(), "a1^3 + 2*a1*a2 + a3");
        assert_eq!(p("5*a4 + a1*a3 - a2^2").to_string(), "a1*a3 - a2^2 + 5*a4");
        assert_eq!(Poly::zero(&avars()).to_string(), "0");
        // the explicit unit coefficient form parses to the same value
        assert_eq!(p("-1*a1*a2 + 3*a3"), p("3*a3 - a1*a2"));
    }

    #[test]
    fn substitute_and_embed() {
        let x = p("a1^2 + a1*a3");
        let y = x.substitute("a1", &p("a3 + 1")).unwrap();
        assert_eq!(y, p("(a3 + 1)^2 + (a3 + 1)*a3"));
        let wide = VarList::new(&["a1", "a2", "a3", "a4", "a6", "t"]);
        let e = x.embed(&wide).unwrap();
        assert_eq!(e.vars(), &wide);
        assert_eq!(e.embed(&avars()).unwrap(), x);
    }
}
