//! Theta function, Eisenstein series and the level-3 character as exact
//! double expansions in `q` and formal root variables.
//!
//! A [`QXSeries`] truncates the two directions independently: total degree
//! in the root variables below `x_order`, and `q`-degree below `q_order`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffring::{write_signed_term, CoeffError, Monomial, Poly, Scalar, ScalarKind, VarList};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QCharError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("constant term `{0}` is not invertible")]
    DivisionByNonUnit(String),
    #[error("root variable lists differ: {left} vs {right}")]
    VariableMismatch { left: String, right: String },
    #[error("malformed q-series text: {0}")]
    Parse(String),
}

/// Coefficient field of a [`QXSeries`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Q(zeta3)")]
    Eisenstein,
}

impl Field {
    fn of(c: &Scalar) -> Field {
        match c.kind() {
            ScalarKind::Eisenstein => Field::Eisenstein,
            _ => Field::Rational,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Rational => "Q",
            Field::Eisenstein => "Q(zeta3)",
        })
    }
}

type Key = (Monomial, u32);

/// Exact expansion `sum c[m, j] * m * q^j` over `m` of total degree below
/// `x_order` and `j < q_order`.
///
/// Equality compares values and truncation orders; the field tag is the
/// declared coefficient field and does not take part.
#[derive(Clone, Debug)]
pub struct QXSeries {
    field: Field,
    x_vars: VarList,
    x_order: u32,
    q_order: u32,
    terms: BTreeMap<Key, Scalar>,
}

impl PartialEq for QXSeries {
    fn eq(&self, other: &Self) -> bool {
        self.x_vars == other.x_vars
            && self.x_order == other.x_order
            && self.q_order == other.q_order
            && self.terms == other.terms
    }
}

impl Eq for QXSeries {}

impl QXSeries {
    pub fn zero(x_vars: &VarList, x_order: u32, q_order: u32) -> Self {
        QXSeries { field: Field::Rational, x_vars: x_vars.clone(), x_order, q_order, terms: BTreeMap::new() }
    }

    pub fn constant(x_vars: &VarList, x_order: u32, q_order: u32, c: Scalar) -> Self {
        let mut s = Self::zero(x_vars, x_order, q_order);
        s.add_term(Monomial::one(x_vars.len()), 0, &c);
        s
    }

    pub fn one(x_vars: &VarList, x_order: u32, q_order: u32) -> Self {
        Self::constant(x_vars, x_order, q_order, Scalar::one())
    }

    /// The root variable `name` itself.
    pub fn var(x_vars: &VarList, name: &str, x_order: u32, q_order: u32) -> Result<Self, QCharError> {
        let i = x_vars.index(name).ok_or_else(|| CoeffError::UnknownVariable(name.to_string()))?;
        let mut s = Self::zero(x_vars, x_order, q_order);
        s.add_term(Monomial::var_power(x_vars.len(), i, 1), 0, &Scalar::one());
        Ok(s)
    }

    /// `c * q^j`.
    pub fn q_power(x_vars: &VarList, x_order: u32, q_order: u32, j: u32, c: Scalar) -> Self {
        let mut s = Self::zero(x_vars, x_order, q_order);
        s.add_term(Monomial::one(x_vars.len()), j, &c);
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn x_vars(&self) -> &VarList {
        &self.x_vars
    }

    pub fn x_order(&self) -> u32 {
        self.x_order
    }

    pub fn q_order(&self) -> u32 {
        self.q_order
    }

    /// Number of nonzero terms; `is_zero` is the emptiness test.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms as `(x-monomial, q-degree, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32, &Scalar)> {
        self.terms.iter().map(|((m, j), c)| (m, *j, c))
    }

    /// Coefficient of `x-monomial * q^j`; zero outside the window.
    pub fn coefficient(&self, exps: &[u32], j: u32) -> Scalar {
        self.terms.get(&(Monomial::from_exps(exps), j)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Terms kept below the truncation orders; zero sums are dropped.
    pub fn add_term(&mut self, m: Monomial, j: u32, c: &Scalar) {
        if c.is_zero() || m.degree() >= self.x_order || j >= self.q_order {
            return;
        }
        self.field = self.field.max(Field::of(c));
        let key = (m, j);
        match self.terms.get_mut(&key) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    /// Restrict to the `q^j` slice, as a series with `q_order = 1`.
    pub fn q_slice(&self, j: u32) -> QXSeries {
        let mut s = Self::zero(&self.x_vars, self.x_order, 1);
        s.field = self.field;
        for ((m, k), c) in &self.terms {
            if *k == j {
                s.add_term(m.clone(), 0, c);
            }
        }
        s
    }

    pub fn truncate(&self, x_order: u32, q_order: u32) -> QXSeries {
        let mut s = Self::zero(&self.x_vars, x_order.min(self.x_order), q_order.min(self.q_order));
        s.field = self.field;
        for ((m, j), c) in &self.terms {
            s.add_term(m.clone(), *j, c);
        }
        s
    }

    fn check_vars(&self, other: &QXSeries) -> Result<(), QCharError> {
        if self.x_vars == other.x_vars {
            Ok(())
        } else {
            Err(QCharError::VariableMismatch {
                left: self.x_vars.to_string(),
                right: other.x_vars.to_string(),
            })
        }
    }

    /// Result orders are the minima of the operands'.
    pub fn try_add(&self, other: &QXSeries) -> Result<QXSeries, QCharError> {
        self.check_vars(other)?;
        let mut s = self.truncate(other.x_order, other.q_order);
        s.field = self.field.max(other.field);
        for ((m, j), c) in &other.terms {
            s.add_term(m.clone(), *j, c);
        }
        Ok(s)
    }

    pub fn try_sub(&self, other: &QXSeries) -> Result<QXSeries, QCharError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> QXSeries {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> QXSeries {
        let mut s = Self::zero(&self.x_vars, self.x_order, self.q_order);
        s.field = self.field.max(Field::of(c));
        for ((m, j), v) in &self.terms {
            s.add_term(m.clone(), *j, &(v * c));
        }
        s
    }

    /// Result orders are the minima of the operands'.
    pub fn try_mul(&self, other: &QXSeries) -> Result<QXSeries, QCharError> {
        self.check_vars(other)?;
        let xo = self.x_order.min(other.x_order);
        let qo = self.q_order.min(other.q_order);
        let mut s = Self::zero(&self.x_vars, xo, qo);
        s.field = self.field.max(other.field);
        for ((m1, j1), c1) in &self.terms {
            if m1.degree() >= xo || *j1 >= qo {
                continue;
            }
            for ((m2, j2), c2) in &other.terms {
                if m1.degree() + m2.degree() < xo && j1 + j2 < qo {
                    s.add_term(m1.mul(m2), j1 + j2, &(c1 * c2));
                }
            }
        }
        Ok(s)
    }

    fn constant_term(&self) -> Scalar {
        self.coefficient(&vec![0; self.x_vars.len()], 0)
    }

    /// Powers `1, f, f^2, ...` of a series with zero constant term, until
    /// the truncation window empties.
    fn nilpotent_powers(&self) -> Vec<QXSeries> {
        let mut out = vec![Self::one(&self.x_vars, self.x_order, self.q_order)];
        loop {
            let next = out.last().unwrap().try_mul(self).expect("same variables");
            if next.is_zero() {
                return out;
            }
            out.push(next);
        }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn invert_unit(&self) -> Result<QXSeries, QCharError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(QCharError::DivisionByNonUnit(c0.to_string()));
        }
        let c0_inv = c0.inv()?;
        // f = c0 (1 + g), 1/f = c0^-1 sum (-g)^n
        let mut minus_g = self.scale(&c0_inv).neg();
        minus_g.add_term(Monomial::one(self.x_vars.len()), 0, &Scalar::one());
        let mut acc = Self::zero(&self.x_vars, self.x_order, self.q_order);
        for p in minus_g.nilpotent_powers() {
            acc = acc.try_add(&p)?;
        }
        Ok(acc.scale(&c0_inv))
    }

    pub fn try_div(&self, other: &QXSeries) -> Result<QXSeries, QCharError> {
        self.try_mul(&other.invert_unit()?)
    }

    /// `exp(f)` for `f` with zero constant term.
    pub fn exp(&self) -> Result<QXSeries, QCharError> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(QCharError::DivisionByNonUnit(format!("exp needs a zero constant term, found {c0}")));
        }
        let mut acc = Self::zero(&self.x_vars, self.x_order, self.q_order);
        let mut fact = BigInt::one();
        for (n, p) in self.nilpotent_powers().into_iter().enumerate() {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            let inv = Scalar::from(BigRational::new(BigInt::one(), fact.clone()));
            acc = acc.try_add(&p.scale(&inv))?;
        }
        Ok(acc)
    }

    /// `f(-x)` in every root variable.
    pub fn negate_x(&self) -> QXSeries {
        let mut s = Self::zero(&self.x_vars, self.x_order, self.q_order);
        s.field = self.field;
        for ((m, j), c) in &self.terms {
            let c = if m.degree() % 2 == 1 { -c } else { c.clone() };
            s.add_term(m.clone(), *j, &c);
        }
        s
    }

    /// Move a univariate series to variable `index` of `target`.
    pub fn univariate_in(&self, target: &VarList, index: usize) -> QXSeries {
        assert_eq!(self.x_vars.len(), 1, "univariate_in needs one root variable");
        let mut s = Self::zero(target, self.x_order, self.q_order);
        s.field = self.field;
        for ((m, j), c) in &self.terms {
            s.add_term(Monomial::var_power(target.len(), index, m.exps()[0]), *j, c);
        }
        s
    }

    /// Terms in printing order: ascending `q`-degree, then ascending total
    /// degree, lex descending within a degree.
    pub fn display_terms(&self) -> Vec<(&Monomial, u32, &Scalar)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| {
            a.1.cmp(&b.1).then_with(|| a.0.degree().cmp(&b.0.degree())).then_with(|| b.0.lex_cmp(a.0))
        });
        v
    }

    /// Parse the text form `... + O(N, q^M)`.
    pub fn parse(text: &str, x_vars: &VarList) -> Result<QXSeries, QCharError> {
        let text = text.trim();
        let pos = text.rfind("O(").ok_or_else(|| QCharError::Parse("missing `O(N, q^M)` marker".into()))?;
        let tail =
            text[pos + 2..].strip_suffix(')').ok_or_else(|| QCharError::Parse("unterminated `O(`".into()))?;
        let (xo, qo) =
            tail.split_once(',').ok_or_else(|| QCharError::Parse(format!("bad orders `{tail}`")))?;
        let bad = || QCharError::Parse(format!("bad orders `{tail}`"));
        let x_order: u32 = xo.trim().parse().map_err(|_| bad())?;
        let q_order: u32 = qo.trim().strip_prefix("q^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let head = text[..pos].trim_end();
        let body = match head.strip_suffix('+') {
            Some(b) => b.trim_end(),
            None if head.is_empty() => "",
            None => return Err(QCharError::Parse("expected `+ O(N, q^M)`".into())),
        };
        let mut names = x_vars.names().to_vec();
        names.push("q".to_string());
        let all = VarList::new(&names);
        let mut s = Self::zero(x_vars, x_order, q_order);
        if body.is_empty() {
            return Ok(s);
        }
        let n = x_vars.len();
        for (m, c) in Poly::parse(body, &all)?.terms() {
            let exps = m.exps();
            if exps[..n].iter().sum::<u32>() >= x_order || exps[n] >= q_order {
                return Err(QCharError::Parse(format!("term beyond the truncation window in `{text}`")));
            }
            s.add_term(Monomial::from_exps(&exps[..n]), exps[n], c);
        }
        Ok(s)
    }

    pub fn to_record(&self) -> QXRecord {
        let terms = self
            .display_terms()
            .into_iter()
            .map(|(m, j, c)| {
                let e = c.to_eisenstein();
                QXTermRecord {
                    x_exponents: m.exps().to_vec(),
                    x_degree: m.degree(),
                    q_degree: j,
                    re: e.re.to_string(),
                    zeta: e.zeta.to_string(),
                }
            })
            .collect();
        QXRecord {
            field: self.field,
            x_vars: self.x_vars.names().to_vec(),
            x_order: self.x_order,
            q_order: self.q_order,
            terms,
            text: self.to_string(),
        }
    }

    pub fn from_record(r: &QXRecord) -> Result<QXSeries, QCharError> {
        let vars = VarList::new(&r.x_vars);
        let mut s = Self::zero(&vars, r.x_order, r.q_order);
        s.field = r.field;
        let rat = |t: &str| -> Result<BigRational, QCharError> {
            t.parse::<BigRational>().map_err(|_| QCharError::Parse(format!("bad rational `{t}`")))
        };
        for t in &r.terms {
            if t.x_exponents.len() != vars.len() {
                return Err(QCharError::Parse(format!(
                    "exponent vector {:?} has the wrong length",
                    t.x_exponents
                )));
            }
            let m = Monomial::from_exps(&t.x_exponents);
            if m.degree() >= r.x_order || t.q_degree >= r.q_order {
                return Err(QCharError::Parse("term beyond the truncation window".into()));
            }
            let (re, zeta) = (rat(&t.re)?, rat(&t.zeta)?);
            let c = if zeta.is_zero() { Scalar::from(re) } else { Scalar::eisenstein(re, zeta) };
            s.add_term(m, t.q_degree, &c);
        }
        Ok(s)
    }
}

impl fmt::Display for QXSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut names = self.x_vars.names().to_vec();
        names.push("q".to_string());
        for (i, (m, j, c)) in self.display_terms().into_iter().enumerate() {
            let mut exps = m.exps().to_vec();
            exps.push(j);
            let mut mono = String::new();
            Monomial::from_exps(&exps).write(&names, &mut mono);
            write_signed_term(&mut out, c, &mono, i == 0);
        }
        if out.is_empty() {
            write!(f, "O({}, q^{})", self.x_order, self.q_order)
        } else {
            write!(f, "{out} + O({}, q^{})", self.x_order, self.q_order)
        }
    }
}

/// JSON form of a [`QXSeries`]: one entry per `(x-monomial, q-degree)` with
/// the coefficient split as `re + zeta*zeta3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QXRecord {
    pub field: Field,
    pub x_vars: Vec<String>,
    pub x_order: u32,
    pub q_order: u32,
    pub terms: Vec<QXTermRecord>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QXTermRecord {
    pub x_exponents: Vec<u32>,
    pub x_degree: u32,
    pub q_degree: u32,
    pub re: String,
    pub zeta: String,
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Scalar {
    let mut b: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    b.push(BigRational::one());
    for m in 1..=n as usize {
        // sum_{j=0}^{m} binom(m+1, j) B_j = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from(BigInt::from(m + 1)));
    }
    Scalar::from(b.pop().unwrap())
}

fn divisor_power_sum(n: u64, p: u32) -> BigInt {
    (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(d).pow(p)).sum()
}

fn x_var() -> VarList {
    VarList::new(&["x"])
}

fn z_var() -> VarList {
    VarList::new(&["z"])
}

/// `G_{2k} = -B_{2k}/(4k) + sum_{n>=1} sigma_{2k-1}(n) q^n`, in the root
/// variable `x` with `x_order = 1`.
pub fn eisenstein_g(two_k: u32, q_order: u32) -> QXSeries {
    assert!(two_k >= 2 && two_k % 2 == 0, "weight must be even and positive");
    let vars = x_var();
    let c0 = &-bernoulli(two_k) * &Scalar::rational(1, 2 * two_k as i64).expect("nonzero");
    let mut s = QXSeries::constant(&vars, 1, q_order, c0);
    for n in 1..q_order {
        let c = Scalar::from(divisor_power_sum(n as u64, two_k - 1));
        s.add_term(Monomial::one(1), n, &c);
    }
    s
}

/// Shift applied to the theta argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Shift {
    #[default]
    None,
    /// `x -> x - omega` with `omega = 2 pi i / 3`.
    MinusOmega,
}

fn exp_linear(vars: &VarList, name: &str, c: Scalar, x_order: u32, q_order: u32) -> QXSeries {
    QXSeries::var(vars, name, x_order, q_order)
        .expect("declared variable")
        .scale(&c)
        .exp()
        .expect("zero constant term")
}

fn phi_in(vars: &VarList, name: &str, x_order: u32, q_order: u32, shift: Shift) -> QXSeries {
    let half = Scalar::rational(1, 2).expect("nonzero");
    let e_half = exp_linear(vars, name, half.clone(), x_order, q_order);
    let e_mhalf = exp_linear(vars, name, -half, x_order, q_order);
    let e_x = exp_linear(vars, name, Scalar::one(), x_order, q_order);
    let e_mx = exp_linear(vars, name, Scalar::int(-1), x_order, q_order);
    let zeta = Scalar::zeta3();
    // e^{-omega/2} = -zeta, e^{omega/2} = 1 + zeta, e^{-omega} = zeta^2, e^{omega} = zeta
    let (lead_plus, lead_minus, mult_plus, mult_minus) = match shift {
        Shift::None => (Scalar::one(), Scalar::int(-1), Scalar::one(), Scalar::one()),
        Shift::MinusOmega => (-&zeta, -&(&Scalar::one() + &zeta), &zeta * &zeta, zeta.clone()),
    };
    let mut acc = e_half.scale(&lead_plus).try_add(&e_mhalf.scale(&lead_minus)).expect("same variables");
    let one = QXSeries::one(vars, x_order, q_order);
    for n in 1..q_order {
        let qn = QXSeries::q_power(vars, x_order, q_order, n, Scalar::one());
        let f1 = one.try_sub(&qn.try_mul(&e_x).unwrap().scale(&mult_plus)).unwrap();
        let f2 = one.try_sub(&qn.try_mul(&e_mx).unwrap().scale(&mult_minus)).unwrap();
        let den = one.try_sub(&qn).unwrap();
        let den_inv = den.invert_unit().expect("unit constant term");
        acc = acc
            .try_mul(&f1)
            .and_then(|a| a.try_mul(&f2))
            .and_then(|a| a.try_mul(&den_inv))
            .and_then(|a| a.try_mul(&den_inv))
            .expect("same variables");
    }
    acc
}

/// `Phi(tau, x) = (e^{x/2} - e^{-x/2}) prod_n (1 - q^n e^x)(1 - q^n e^{-x}) / (1 - q^n)^2`,
/// optionally at `x - omega`. Exact through `(x_order, q_order)`.
pub fn phi_product(x_order: u32, q_order: u32, shift: Shift) -> QXSeries {
    phi_in(&x_var(), "x", x_order, q_order, shift)
}

/// `Phi(tau, x) = x exp(-sum_k 2/(2k)! G_{2k} x^{2k})` with the given
/// Eisenstein series, `g[k - 1] = G_{2k}`; missing entries count as zero.
pub fn phi_exp_with(x_order: u32, q_order: u32, g: &[QXSeries]) -> QXSeries {
    let vars = x_var();
    let mut exponent = QXSeries::zero(&vars, x_order, q_order);
    let mut fact = BigInt::one();
    for k in 1..=x_order / 2 {
        let two_k = 2 * k;
        fact *= BigInt::from(two_k - 1) * BigInt::from(two_k);
        let Some(gk) = g.get(k as usize - 1) else { break };
        let c = Scalar::from(BigRational::new(BigInt::from(-2), fact.clone()));
        for (_, j, v) in gk.terms() {
            exponent.add_term(Monomial::from_exps(&[two_k]), j, &(v * &c));
        }
    }
    let x = QXSeries::var(&vars, "x", x_order, q_order).expect("declared variable");
    x.try_mul(&exponent.exp().expect("zero constant term")).expect("same variables")
}

/// The exponential form with `G_{2k} = eisenstein_g(2k, q_order)`.
pub fn phi_exp(x_order: u32, q_order: u32) -> QXSeries {
    let g: Vec<_> = (1..=x_order / 2).map(|k| eisenstein_g(2 * k, q_order)).collect();
    phi_exp_with(x_order, q_order, &g)
}

/// `Phi(tau, -omega)` as a pure `q`-series in the root variable `z`.
pub fn phi_at_minus_omega(q_order: u32) -> QXSeries {
    phi_in(&z_var(), "z", 1, q_order, Shift::MinusOmega)
}

/// `psi(z) = Phi(tau, -omega) / Phi(tau, z - omega)` over `Q(zeta3)`.
pub fn psi_series(x_order: u32, q_order: u32) -> Result<QXSeries, QCharError> {
    let vars = z_var();
    let num = phi_in(&vars, "z", x_order, q_order, Shift::MinusOmega).q_constant_part();
    let den = phi_in(&vars, "z", x_order, q_order, Shift::MinusOmega);
    num.try_div(&den)
}

impl QXSeries {
    /// The part of degree zero in the root variables, same orders.
    fn q_constant_part(&self) -> QXSeries {
        let mut s = Self::zero(&self.x_vars, self.x_order, self.q_order);
        s.field = self.field;
        for ((m, j), c) in &self.terms {
            if m.is_one() {
                s.add_term(m.clone(), *j, c);
            }
        }
        s
    }
}

/// The level-3 genus `x(z) = Phi(tau, z) psi(z)`.
pub fn level3_genus_x(x_order: u32, q_order: u32) -> Result<QXSeries, QCharError> {
    let phi = phi_in(&z_var(), "z", x_order, q_order, Shift::None);
    phi.try_mul(&psi_series(x_order, q_order)?)
}

/// `prod_i Phi(tau, x_i - omega) / Phi(tau, -omega)`, i.e. `prod_i 1/psi(x_i)`,
/// in the given root variables.
pub fn character_product<S: AsRef<str>>(
    roots: &[S],
    x_order: u32,
    q_order: u32,
) -> Result<QXSeries, QCharError> {
    let vars = VarList::new(roots);
    let mut acc = QXSeries::one(&vars, x_order, q_order);
    acc.field = Field::Eisenstein;
    if roots.is_empty() {
        return Ok(acc);
    }
    let factor = psi_series(x_order, q_order)?.invert_unit()?;
    for i in 0..vars.len() {
        acc = acc.try_mul(&factor.univariate_in(&vars, i))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::rational(n, d).unwrap()
    }

    #[test]
    fn bernoulli_numbers() {
        assert_eq!(bernoulli(1), r(-1, 2));
        assert_eq!(bernoulli(2), r(1, 6));
        assert_eq!(bernoulli(4), r(-1, 30));
        assert_eq!(bernoulli(6), r(1, 42));
        assert_eq!(bernoulli(12), r(-691, 2730));
        assert!(bernoulli(7).is_zero());
    }

    #[test]
    fn eisenstein_coefficients() {
        let g2 = eisenstein_g(2, 6);
        assert_eq!(g2.coefficient(&[0], 0), r(-1, 24));
        assert_eq!(g2.coefficient(&[0], 1), Scalar::int(1));
        assert_eq!(g2.coefficient(&[0], 4), Scalar::int(7));
        let g4 = eisenstein_g(4, 6);
        assert_eq!(g4.coefficient(&[0], 0), r(1, 240));
        assert_eq!(g4.coefficient(&[0], 2), Scalar::int(9));
    }

    #[test]
    fn unshifted_q0_slice_is_twice_sinh() {
        let phi = phi_product(10, 6, Shift::None);
        let s = phi.q_slice(0);
        assert_eq!(s.coefficient(&[1], 0), Scalar::int(1));
        assert_eq!(s.coefficient(&[3], 0), r(1, 24));
        assert_eq!(s.coefficient(&[5], 0), r(1, 1920));
        assert_eq!(s.coefficient(&[7], 0), r(1, 322560));
        assert_eq!(s.coefficient(&[9], 0), r(1, 92897280));
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn product_equals_exponential_form() {
        let p = phi_product(10, 6, Shift::None);
        let e = phi_exp(10, 6);
        assert_eq!(p, e);
    }

    #[test]
    fn zero_eisenstein_gives_x() {
        let e = phi_exp_with(10, 6, &[]);
        assert_eq!(e.to_string(), "x + O(10, q^6)");
    }

    #[test]
    fn theta_is_odd() {
        let p = phi_product(10, 6, Shift::None);
        assert_eq!(p.negate_x(), p.neg());
        assert!(p.terms().all(|(m, _, _)| m.degree() % 2 == 1));
    }

    #[test]
    fn shifted_constant_term() {
        let c = phi_at_minus_omega(4).coefficient(&[0], 0);
        let zeta = Scalar::zeta3();
        assert_eq!(c, &(&zeta * &zeta) - &zeta);
    }

    #[test]
    fn psi_and_genus() {
        let psi = psi_series(6, 4).unwrap();
        assert_eq!(psi.field(), Field::Eisenstein);
        assert_eq!(psi.coefficient(&[0], 0), Scalar::one());
        for j in 1..4 {
            assert!(psi.coefficient(&[0], j).is_zero());
        }
        let x = level3_genus_x(6, 4).unwrap();
        assert!(x.q_slice(0).coefficient(&[0], 0).is_zero());
        assert_eq!(x.coefficient(&[1], 0), Scalar::one());
        for j in 1..4 {
            assert!(x.coefficient(&[0], j).is_zero());
            assert!(x.coefficient(&[1], j).is_zero());
        }
    }

    #[test]
    fn character_multiplicative() {
        let empty: [&str; 0] = [];
        let one = character_product(&empty, 6, 3).unwrap();
        assert_eq!(one.to_string(), "1 + O(6, q^3)");
        let both = character_product(&["x1", "x2"], 6, 3).unwrap();
        let vars = VarList::new(&["x1", "x2"]);
        let a = character_product(&["x1"], 6, 3).unwrap().univariate_in(&vars, 0);
        let b = character_product(&["x2"], 6, 3).unwrap().univariate_in(&vars, 1);
        assert_eq!(both, a.try_mul(&b).unwrap());
        assert_eq!(both.coefficient(&[0, 0], 0), Scalar::one());
    }

    #[test]
    fn text_and_json_round_trip() {
        let psi = psi_series(5, 3).unwrap();
        let text = psi.to_string();
        assert_eq!(QXSeries::parse(&text, psi.x_vars()).unwrap(), psi);
        let json = serde_json::to_string(&psi.to_record()).unwrap();
        let back: QXRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(QXSeries::from_record(&back).unwrap(), psi);
        let zero = QXSeries::zero(&x_var(), 4, 2);
        assert_eq!(QXSeries::parse(&zero.to_string(), &x_var()).unwrap(), zero);
    }
}
