//! The homotopy fixed point spectral sequence with
//! `E1 = Z_(2)[a, u1, u2][sigma^{±1}]`, its differentials `d1`, `d3`, `d7`,
//! and windowed page homology.
//!
//! Degrees are `k + l*alpha` in the cohomological convention:
//! `|a| = alpha`, `|sigma| = 1 - alpha`, `|u1| = -1 - alpha`,
//! `|u2| = -3 - 3*alpha`. The filtration of a monomial is its `a`-exponent.

mod lattice;
mod pages;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffring::{Scalar, ScalarKind};

pub use pages::{
    e_infinity_chart, page_homology, CellPresentation, Chart, ChartCell, ClassGenerator, ClassStatus,
    Generator, PagePresentation, Pages, Window,
};

/// Pages carrying a nonzero differential.
pub const DIFFERENTIAL_PAGES: [u32; 3] = [1, 3, 7];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsqError {
    #[error("malformed page element: {0}")]
    MalformedElement(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("d{r} composed with itself is nonzero on {element}")]
    DSquaredNonzero { r: u32, element: String },
}

/// `k + l*alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Degree {
    pub k: i64,
    pub l: i64,
}

impl Degree {
    pub const ZERO: Degree = Degree { k: 0, l: 0 };

    pub fn new(k: i64, l: i64) -> Self {
        Degree { k, l }
    }

    pub fn is_integral(&self) -> bool {
        self.l == 0
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.k + o.k, self.l + o.l)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alpha = match self.l {
            0 => String::new(),
            1 => "alpha".into(),
            -1 => "-alpha".into(),
            l => format!("{l}alpha"),
        };
        match (self.k, alpha.is_empty()) {
            (k, true) => write!(f, "{k}"),
            (0, false) => f.write_str(&alpha),
            (k, false) if self.l > 0 => write!(f, "{k}+{alpha}"),
            (k, false) => write!(f, "{k}{alpha}"),
        }
    }
}

/// `a^a * sigma^sigma * u1^u1 * u2^u2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SsqMonomial {
    pub a: u32,
    pub sigma: i64,
    pub u1: u32,
    pub u2: u32,
}

impl SsqMonomial {
    pub const ONE: SsqMonomial = SsqMonomial { a: 0, sigma: 0, u1: 0, u2: 0 };

    pub fn new(a: u32, sigma: i64, u1: u32, u2: u32) -> Self {
        SsqMonomial { a, sigma, u1, u2 }
    }

    pub fn degree(&self) -> Degree {
        let (j, k, p, m) = (self.a as i64, self.sigma, self.u1 as i64, self.u2 as i64);
        Degree::new(k - p - 3 * m, j - k - p - 3 * m)
    }

    pub fn filtration(&self) -> u32 {
        self.a
    }

    pub fn mul(&self, o: &SsqMonomial) -> SsqMonomial {
        SsqMonomial::new(self.a + o.a, self.sigma + o.sigma, self.u1 + o.u1, self.u2 + o.u2)
    }

    /// The generator formula for `d_r`: coefficient and target, or `None`
    /// when the formula vanishes.
    ///
    /// `d1(sigma^k) = 2 a sigma^{k+1}` for odd `k`; `d3(sigma^{2i}) =
    /// u1 a^3 sigma^{2i+2}` for odd `i`; `d7(sigma^{4i}) = u2 a^7 sigma^{4i+4}`
    /// for odd `i`. Coefficients of `d3`, `d7` are taken mod 2, exact on
    /// their pages since the targets are 2-torsion there.
    pub fn differential(&self, r: u32) -> Option<(i64, SsqMonomial)> {
        let k = self.sigma;
        match r {
            1 if k.rem_euclid(2) == 1 => Some((2, SsqMonomial::new(self.a + 1, k + 1, self.u1, self.u2))),
            3 if k.rem_euclid(4) == 2 => Some((1, SsqMonomial::new(self.a + 3, k + 2, self.u1 + 1, self.u2))),
            7 if k.rem_euclid(8) == 4 => Some((1, SsqMonomial::new(self.a + 7, k + 4, self.u1, self.u2 + 1))),
            _ => None,
        }
    }

    /// The same monomial over `Z_(2)[a1, a3]` via `u1 = a1 sigma`,
    /// `u2 = a3 sigma^3`.
    pub fn e1_form(&self) -> String {
        let k = self.sigma + self.u1 as i64 + 3 * self.u2 as i64;
        let mut parts = Vec::new();
        let mut push = |name: &str, e: i64| match e {
            0 => {}
            1 => parts.push(name.to_string()),
            e => parts.push(format!("{name}^{e}")),
        };
        push("a", self.a as i64);
        push("a1", self.u1 as i64);
        push("a3", self.u2 as i64);
        push("sigma", k);
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for SsqMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |name: &str, e: i64| match e {
            0 => {}
            1 => parts.push(name.to_string()),
            e => parts.push(format!("{name}^{e}")),
        };
        push("a", self.a as i64);
        push("sigma", self.sigma);
        push("u1", self.u1 as i64);
        push("u2", self.u2 as i64);
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// A `Z_(2)`-combination of [`SsqMonomial`]s, zero terms removed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PageElement {
    terms: BTreeMap<SsqMonomial, Scalar>,
}

impl PageElement {
    pub fn zero() -> Self {
        PageElement::default()
    }

    pub fn one() -> Self {
        Self::monomial(Scalar::one(), SsqMonomial::ONE)
    }

    pub fn monomial(c: Scalar, m: SsqMonomial) -> Self {
        let mut e = Self::zero();
        e.add_term(m, &c);
        e
    }

    pub fn a() -> Self {
        Self::monomial(Scalar::one(), SsqMonomial::new(1, 0, 0, 0))
    }

    pub fn sigma(k: i64) -> Self {
        Self::monomial(Scalar::one(), SsqMonomial::new(0, k, 0, 0))
    }

    pub fn u1() -> Self {
        Self::monomial(Scalar::one(), SsqMonomial::new(0, 0, 1, 0))
    }

    pub fn u2() -> Self {
        Self::monomial(Scalar::one(), SsqMonomial::new(0, 0, 0, 1))
    }

    pub fn add_term(&mut self, m: SsqMonomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SsqMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, &(v * c));
        }
        out
    }

    pub fn mul(&self, o: &PageElement) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    /// Common degree and filtration of all terms; `None` for zero.
    pub fn bidegree(&self) -> Result<Option<(Degree, u32)>, SsqError> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Ok(None) };
        let key = (first.degree(), first.filtration());
        if let Some(m) = it.find(|m| (m.degree(), m.filtration()) != key) {
            return Err(SsqError::MalformedElement(format!(
                "terms {first} and {m} lie in different bidegrees"
            )));
        }
        Ok(Some(key))
    }

    pub fn degree(&self) -> Result<Option<Degree>, SsqError> {
        Ok(self.bidegree()?.map(|(d, _)| d))
    }

    fn check(&self) -> Result<(), SsqError> {
        for c in self.terms.values() {
            if c.kind() == ScalarKind::Eisenstein || !c.is_two_integral() {
                return Err(SsqError::MalformedElement(format!("coefficient {c} is not a 2-local integer")));
            }
        }
        self.bidegree().map(|_| ())
    }

    /// The `E1` form over `Z_(2)[a1, a3][sigma^{±1}, a]`.
    pub fn e1_form(&self) -> String {
        self.render(|m| m.e1_form())
    }

    fn render(&self, mono: impl Fn(&SsqMonomial) -> String) -> String {
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let text = mono(m);
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (abs.is_one(), text.as_str()) {
                (true, t) => out.push_str(t),
                (false, "1") => out.push_str(&abs.to_string()),
                (false, t) => {
                    out.push_str(&abs.to_string());
                    out.push('*');
                    out.push_str(t);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for PageElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|m| m.to_string()))
    }
}

/// `d_r` extended linearly from the generator formula; zero for
/// `r` outside `{1, 3, 7}`.
///
/// The formula satisfies `d(ef) = d(e) f + (-1)^s e d(f)` with `s` the
/// `sigma`-exponent of `e`, exactly for `r = 1` and modulo the `2a`-multiples
/// killed on the earlier pages for `r = 3, 7`.
pub fn d_r(r: u32, e: &PageElement) -> Result<PageElement, SsqError> {
    e.check()?;
    let mut out = PageElement::zero();
    for (m, c) in e.terms() {
        if let Some((f, t)) = m.differential(r) {
            out.add_term(t, &(c * &Scalar::int(f)));
        }
    }
    Ok(out)
}

/// The listed permanent cycles `a, sigma^8, sigma^-8, u1, u2, u2^3 sigma^-8`.
pub fn permanent_cycles() -> Vec<(&'static str, PageElement)> {
    vec![
        ("a", PageElement::a()),
        ("sigma^8", PageElement::sigma(8)),
        ("sigma^-8", PageElement::sigma(-8)),
        ("u1", PageElement::u1()),
        ("u2", PageElement::u2()),
        (
            "u2^3*sigma^-8",
            PageElement::u2().mul(&PageElement::u2()).mul(&PageElement::u2()).mul(&PageElement::sigma(-8)),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        assert_eq!(PageElement::a().degree().unwrap(), Some(Degree::new(0, 1)));
        assert_eq!(PageElement::sigma(1).degree().unwrap(), Some(Degree::new(1, -1)));
        assert_eq!(PageElement::u1().degree().unwrap(), Some(Degree::new(-1, -1)));
        assert_eq!(PageElement::u2().degree().unwrap(), Some(Degree::new(-3, -3)));
        assert_eq!(Degree::new(-1, 1).to_string(), "-1+alpha");
        assert_eq!(Degree::new(-3, -3).to_string(), "-3-3alpha");
        assert_eq!(Degree::new(0, -1).to_string(), "-alpha");
        assert_eq!(Degree::new(2, 0).to_string(), "2");
    }

    #[test]
    fn generator_differentials() {
        let d = |r, e: &PageElement| d_r(r, e).unwrap().to_string();
        assert_eq!(d(1, &PageElement::sigma(-1)), "2*a");
        assert_eq!(d(1, &PageElement::sigma(1)), "2*a*sigma^2");
        assert_eq!(d(3, &PageElement::sigma(-2)), "a^3*u1");
        assert_eq!(d(7, &PageElement::sigma(-4)), "a^7*u2");
        assert_eq!(d(3, &PageElement::u1().mul(&PageElement::sigma(-2))), "a^3*u1^2");
        assert!(d_r(5, &PageElement::sigma(-1)).unwrap().is_zero());
        for r in DIFFERENTIAL_PAGES {
            for e in [PageElement::a(), PageElement::u1(), PageElement::u2(), PageElement::one()] {
                assert!(d_r(r, &e).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn sigma_product_rule() {
        // d1(sigma * sigma^-1) = d1(sigma) sigma^-1 - sigma d1(sigma^-1) = 0
        let s = PageElement::sigma(1);
        let si = PageElement::sigma(-1);
        let lhs = d_r(1, &s).unwrap().mul(&si);
        let rhs = s.mul(&d_r(1, &si).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn malformed_elements() {
        let mut e = PageElement::a();
        e.add_term(SsqMonomial::ONE, &Scalar::one());
        assert!(matches!(d_r(1, &e), Err(SsqError::MalformedElement(_))));
        let half = PageElement::monomial(Scalar::rational(1, 2).unwrap(), SsqMonomial::ONE);
        assert!(matches!(d_r(1, &half), Err(SsqError::MalformedElement(_))));
    }

    #[test]
    fn e1_translation() {
        let y = &permanent_cycles()[5].1;
        assert_eq!(y.to_string(), "sigma^-8*u2^3");
        assert_eq!(y.e1_form(), "a3^3*sigma");
        let a1 = PageElement::u1().mul(&PageElement::sigma(-1));
        assert_eq!(a1.e1_form(), "a1");
        assert_eq!(a1.degree().unwrap(), Some(Degree::new(-2, 0)));
    }
}
