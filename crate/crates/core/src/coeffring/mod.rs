//! Exact coefficient arithmetic: scalars (integers, rationals, 2-local
//! rationals, `Q(zeta3)`), exponent vectors, and sparse multivariate
//! polynomials over a declared ordered variable list.

mod parse;
mod poly;
mod scalar;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

pub use parse::parse_poly;
pub(crate) use poly::write_signed_term;
pub use poly::Poly;
pub use scalar::{Eisenstein, Scalar, ScalarKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not invertible in Z_(2)")]
    NotTwoLocallyInvertible(String),
    #[error("{0} has an even denominator and is not 2-local")]
    NotTwoLocal(String),
    #[error("variable lists differ: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },
    #[error("coefficient {0} cannot be reduced modulo the given prime")]
    NonIntegerCoefficient(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("{0} is not a prime")]
    InvalidPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Exponent vector aligned with a [`VarList`].
///
/// Ordered by total degree, then lexicographically on the exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub SmallVec<[u32; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// `x_i^e` in `nvars` variables.
    pub fn var_power(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    /// Apply a permutation of positions: result[perm[i]] = self[i].
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        let mut out = Self::one(self.0.len());
        for (i, &e) in self.0.iter().enumerate() {
            out.0[perm[i]] = e;
        }
        out
    }

    /// Descending lexicographic comparison, used for printing order.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// Write as `x^2*y`, no leading coefficient. Empty for the unit monomial.
    pub fn write(&self, vars: &[String], out: &mut String) {
        let mut first = true;
        for (name, &e) in vars.iter().zip(self.0.iter()) {
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(name);
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Shared, ordered list of variable names.
#[derive(Clone, Debug, Eq)]
pub struct VarList(Arc<[String]>);

impl VarList {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        VarList(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    /// This list followed by every name of `other` not already present.
    pub fn union(&self, other: &VarList) -> VarList {
        let mut names: Vec<String> = self.0.to_vec();
        for n in other.0.iter() {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        VarList(names.into())
    }

    pub(crate) fn check_same(&self, other: &VarList) -> Result<(), CoeffError> {
        if self == other {
            Ok(())
        } else {
            Err(CoeffError::VariableMismatch { left: self.0.join(","), right: other.0.join(",") })
        }
    }
}

// Pointer equality is only a shortcut; both impls go by the names.
impl PartialEq for VarList {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for VarList {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl Deref for VarList {
    type Target = [String];
    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for VarList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(", "))
    }
}

/// Checks primality by trial division; primes used here are tiny.
pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order_is_degree_then_lex() {
        let a = Monomial::from_exps(&[0, 0, 1]);
        let b = Monomial::from_exps(&[1, 1, 0]);
        let c = Monomial::from_exps(&[2, 0, 0]);
        assert!(a < b);
        assert!(b < c);
        assert_eq!(b.mul(&a), Monomial::from_exps(&[1, 1, 1]));
        assert_eq!(c.div(&b), None);
        assert_eq!(b.div(&Monomial::from_exps(&[1, 0, 0])), Some(Monomial::from_exps(&[0, 1, 0])));
    }

    #[test]
    fn monomial_text() {
        let vars = VarList::new(&["x0", "x1"]);
        let mut s = String::new();
        Monomial::from_exps(&[2, 1]).write(&vars, &mut s);
        assert_eq!(s, "x0^2*x1");
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(9));
    }
}
