//! Total-degree-truncated multivariate power series with [`Poly`]
//! coefficients.
//!
//! A [`TSeries`] of order `N` stores exact coefficients for every monomial of
//! total degree `< N` in its series variables; everything of degree `>= N` is
//! unknown. Coefficient variables (the `a_i`, a formal `t`, ...) are never
//! truncated. Every operation documents the order of its result, which is
//! the largest order at which the result is guaranteed exact.

mod text;

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::coeffring::{CoeffError, Monomial, Poly, Scalar, VarList};

pub use text::{SeriesRecord, TermRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("series variable lists differ: {left} vs {right}")]
    VariableMismatch { left: String, right: String },
    #[error("constant term `{0}` is not a unit")]
    NonUnitConstantTerm(String),
    #[error("series substituted for `{0}` has a nonzero constant term")]
    NonPositiveValuation(String),
    #[error("quotient is not a power series: residual {residual} in degree {degree}")]
    NotDivisible { degree: u32, residual: String },
    #[error("degree {degree} is not below the truncation order {order}")]
    BeyondTruncation { degree: u32, order: u32 },
    #[error("unknown series variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed series text: {0}")]
    Parse(String),
}

/// Products with at least this many term pairs are split across threads.
const PARALLEL_THRESHOLD: usize = 4096;

type Terms = BTreeMap<Monomial, Poly>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    vars: VarList,
    coeff_vars: VarList,
    order: u32,
    terms: Terms,
}

impl TSeries {
    pub fn zero(vars: &VarList, coeff_vars: &VarList, order: u32) -> Self {
        TSeries { vars: vars.clone(), coeff_vars: coeff_vars.clone(), order, terms: Terms::new() }
    }

    pub fn constant(vars: &VarList, c: Poly, order: u32) -> Self {
        let mut s = Self::zero(vars, c.vars(), order);
        s.add_term(Monomial::one(vars.len()), &c);
        s
    }

    pub fn one(vars: &VarList, coeff_vars: &VarList, order: u32) -> Self {
        Self::constant(vars, Poly::one(coeff_vars), order)
    }

    pub fn var(vars: &VarList, coeff_vars: &VarList, name: &str, order: u32) -> Result<Self, SeriesError> {
        let i = vars.index(name).ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))?;
        let mut s = Self::zero(vars, coeff_vars, order);
        s.add_term(Monomial::var_power(vars.len(), i, 1), &Poly::one(coeff_vars));
        Ok(s)
    }

    /// Build from `(exponents, coefficient)` pairs; terms at or beyond
    /// `order` are dropped.
    pub fn from_terms(
        vars: &VarList,
        coeff_vars: &VarList,
        order: u32,
        terms: impl IntoIterator<Item = (Monomial, Poly)>,
    ) -> Self {
        let mut s = Self::zero(vars, coeff_vars, order);
        for (m, c) in terms {
            s.add_term(m, &c);
        }
        s
    }

    /// Interpret a polynomial over `vars ∪ coeff_vars` as a series.
    pub fn from_poly(
        p: &Poly,
        vars: &VarList,
        coeff_vars: &VarList,
        order: u32,
    ) -> Result<Self, SeriesError> {
        let sidx: Vec<Option<usize>> = p.vars().iter().map(|n| vars.index(n)).collect();
        let cidx: Vec<Option<usize>> = p.vars().iter().map(|n| coeff_vars.index(n)).collect();
        let mut s = Self::zero(vars, coeff_vars, order);
        for (m, c) in p.terms() {
            let mut sm = Monomial::one(vars.len());
            let mut cm = Monomial::one(coeff_vars.len());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match (sidx[i], cidx[i]) {
                    (Some(j), _) => sm.0[j] += e,
                    (None, Some(j)) => cm.0[j] += e,
                    (None, None) => {
                        return Err(SeriesError::UnknownVariable(p.vars()[i].clone()));
                    }
                }
            }
            s.add_term(sm, &Poly::term(coeff_vars, cm, c.clone()));
        }
        Ok(s)
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn coeff_vars(&self) -> &VarList {
        &self.coeff_vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Poly)> {
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

    /// Adds `c * m` in place, ignoring terms at or beyond the order.
    pub fn add_term(&mut self, m: Monomial, c: &Poly) {
        debug_assert_eq!(m.exps().len(), self.vars.len());
        if m.degree() >= self.order || c.is_zero() {
            return;
        }
        add_into(&mut self.terms, m, c);
    }

    /// Exact coefficient of the monomial with the given exponents.
    pub fn coefficient(&self, exps: &[u32]) -> Result<Poly, SeriesError> {
        if exps.len() != self.vars.len() {
            return Err(SeriesError::Parse(format!(
                "expected {} exponents, got {}",
                self.vars.len(),
                exps.len()
            )));
        }
        let m = Monomial::from_exps(exps);
        let degree = m.degree();
        if degree >= self.order {
            return Err(SeriesError::BeyondTruncation { degree, order: self.order });
        }
        Ok(self.coeff(&m))
    }

    fn coeff(&self, m: &Monomial) -> Poly {
        self.terms.get(m).cloned().unwrap_or_else(|| Poly::zero(&self.coeff_vars))
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Poly {
        self.coeff(&Monomial::one(self.vars.len()))
    }

    /// Lowest total degree carrying a nonzero term.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// Terms of total degree exactly `d`, in ascending lex order.
    pub fn degree_terms(&self, d: u32) -> impl DoubleEndedIterator<Item = (&Monomial, &Poly)> {
        let n = self.vars.len();
        let (lo, hi) = if n == 0 {
            (Monomial::one(0), Monomial::one(0))
        } else {
            (Monomial::var_power(n, n - 1, d), Monomial::var_power(n, 0, d))
        };
        let empty = n == 0 && d > 0;
        self.terms.range(lo..=hi).filter(move |_| !empty)
    }

    /// Homogeneous part of degree `d` as a series of order `d + 1`.
    pub fn homogeneous_part(&self, d: u32) -> TSeries {
        let mut s = TSeries::zero(&self.vars, &self.coeff_vars, d + 1);
        s.terms = self.degree_terms(d).map(|(m, c)| (m.clone(), c.clone())).collect();
        s
    }

    /// Lowest nonzero homogeneous form.
    pub fn lowest_form(&self) -> Option<TSeries> {
        self.valuation().map(|d| self.homogeneous_part(d))
    }

    /// Keep only terms below `order` (which may only shrink the order).
    pub fn truncate(&self, order: u32) -> TSeries {
        let order = order.min(self.order);
        TSeries {
            vars: self.vars.clone(),
            coeff_vars: self.coeff_vars.clone(),
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Declare a higher order for a series known to be an exact polynomial:
    /// the missing terms are asserted to be zero.
    pub fn extend_order(&self, order: u32) -> TSeries {
        let mut out = self.clone();
        out.order = order.max(self.order);
        out
    }

    /// Equal as series up to (exclusive) total degree `order`.
    pub fn agrees_to(&self, other: &TSeries, order: u32) -> bool {
        self.vars == other.vars
            && self.coeff_vars == other.coeff_vars
            && self.truncate(order).terms == other.truncate(order).terms
    }

    fn check_compatible(&self, other: &TSeries) -> Result<(), SeriesError> {
        if self.vars != other.vars {
            return Err(SeriesError::VariableMismatch {
                left: self.vars.to_string(),
                right: other.vars.to_string(),
            });
        }
        self.coeff_vars.check_same(&other.coeff_vars)?;
        Ok(())
    }

    /// Sum; order is the minimum of the two orders.
    pub fn try_add(&self, other: &TSeries) -> Result<TSeries, SeriesError> {
        self.check_compatible(other)?;
        let mut out = self.truncate(other.order);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TSeries) -> Result<TSeries, SeriesError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> TSeries {
        TSeries {
            vars: self.vars.clone(),
            coeff_vars: self.coeff_vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// Product; order is the minimum of the two orders.
    pub fn try_mul(&self, other: &TSeries) -> Result<TSeries, SeriesError> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let mut out = TSeries::zero(&self.vars, &self.coeff_vars, order);
        out.terms = mul_terms(&self.terms, &other.terms, order, &self.coeff_vars);
        Ok(out)
    }

    /// Multiply every coefficient by the polynomial `c`.
    pub fn scale_poly(&self, c: &Poly) -> Result<TSeries, SeriesError> {
        self.coeff_vars.check_same(c.vars())?;
        let mut out = TSeries::zero(&self.vars, &self.coeff_vars, self.order);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), &(d * c));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> TSeries {
        let mut out = TSeries::zero(&self.vars, &self.coeff_vars, self.order);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), &d.scale(c));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> TSeries {
        let mut acc = TSeries::one(&self.vars, &self.coeff_vars, self.order);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse of a series whose constant term is a unit
    /// scalar. Same order as the input.
    pub fn invert_unit(&self) -> Result<TSeries, SeriesError> {
        let c0 = self.constant_term();
        let unit = c0
            .as_scalar()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| SeriesError::NonUnitConstantTerm(c0.to_string()))?;
        let inv0 = unit.inv().map_err(|_| SeriesError::NonUnitConstantTerm(c0.to_string()))?;
        let n = self.vars.len();
        let by_degree = self.by_degree();
        // r_k = -c0^{-1} * sum_{j=1..k} s_j r_{k-j}
        let mut parts: Vec<Terms> = Vec::with_capacity(self.order as usize);
        let mut first = Terms::new();
        if self.order > 0 {
            first.insert(Monomial::one(n), Poly::constant(&self.coeff_vars, inv0.clone()));
        }
        parts.push(first);
        let minus_inv = -&inv0;
        for k in 1..self.order as usize {
            let mut acc = Terms::new();
            for j in 1..=k {
                for (m1, c1) in &by_degree[j] {
                    for (m2, c2) in &parts[k - j] {
                        add_product_into(&mut acc, m1.mul(m2), c1, c2, &self.coeff_vars);
                    }
                }
            }
            let scaled = acc
                .into_iter()
                .map(|(m, c)| (m, c.scale(&minus_inv)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            parts.push(scaled);
        }
        let mut out = TSeries::zero(&self.vars, &self.coeff_vars, self.order);
        out.terms = parts.into_iter().flatten().collect();
        Ok(out)
    }

    /// Terms grouped by total degree, indices `0..order`.
    fn by_degree(&self) -> Vec<Vec<(&Monomial, &Poly)>> {
        let mut out: Vec<Vec<(&Monomial, &Poly)>> = vec![Vec::new(); self.order as usize];
        for (m, c) in &self.terms {
            out[m.degree() as usize].push((m, c));
        }
        out
    }

    /// Substitute `images[i]` for the i-th series variable.
    ///
    /// All images share one variable list and have zero constant term. The
    /// result order is the minimum of `self.order` and the image orders.
    pub fn compose(&self, images: &[TSeries]) -> Result<TSeries, SeriesError> {
        if images.len() != self.vars.len() {
            return Err(SeriesError::VariableMismatch {
                left: self.vars.to_string(),
                right: format!("{} images", images.len()),
            });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let target = first.vars.clone();
        let mut order = self.order;
        for (i, img) in images.iter().enumerate() {
            if img.vars != target {
                return Err(SeriesError::VariableMismatch {
                    left: target.to_string(),
                    right: img.vars.to_string(),
                });
            }
            self.coeff_vars.check_same(&img.coeff_vars)?;
            if !img.constant_term().is_zero() {
                return Err(SeriesError::NonPositiveValuation(self.vars[i].clone()));
            }
            order = order.min(img.order);
        }
        let images: Vec<TSeries> = images.iter().map(|s| s.truncate(order)).collect();
        let vals: Vec<u32> = images.iter().map(|s| s.valuation().unwrap_or(order)).collect();
        let mut powers: Vec<Vec<TSeries>> =
            images.iter().map(|s| vec![TSeries::one(&target, &self.coeff_vars, order), s.clone()]).collect();
        let mut out = TSeries::zero(&target, &self.coeff_vars, order);
        for (m, c) in &self.terms {
            let lower: u32 = m.exps().iter().zip(&vals).map(|(e, v)| e * v).sum();
            if lower >= order {
                continue;
            }
            let mut prod: Option<TSeries> = None;
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                prod = Some(match prod {
                    None => powers[i][e].clone(),
                    Some(p) => &p * &powers[i][e],
                });
            }
            match prod {
                None => out.add_term(Monomial::one(target.len()), c),
                Some(p) => {
                    for (pm, pc) in &p.terms {
                        out.add_term(pm.clone(), &(pc * c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Substitute series for some variables by name. Unassigned variables
    /// map to the same-named variable of the target list, which is the
    /// common variable list of the assigned series.
    pub fn substitute(&self, assignments: &[(&str, &TSeries)]) -> Result<TSeries, SeriesError> {
        let Some((_, first)) = assignments.first() else {
            return Ok(self.clone());
        };
        let target = first.vars.clone();
        for (name, _) in assignments {
            if self.vars.index(name).is_none() {
                return Err(SeriesError::UnknownVariable(name.to_string()));
            }
        }
        let order = assignments.iter().map(|(_, s)| s.order).max().unwrap_or(self.order);
        let images = self
            .vars
            .iter()
            .map(|name| match assignments.iter().find(|(n, _)| n == name) {
                Some((_, s)) => Ok((*s).clone()),
                None => TSeries::var(&target, &self.coeff_vars, name, order.max(self.order)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.compose(&images)
    }

    /// Rename or reorder series variables: variable `i` becomes `new_vars[map[i]]`.
    pub fn relabel(&self, new_vars: &VarList, map: &[usize]) -> TSeries {
        let mut out = TSeries::zero(new_vars, &self.coeff_vars, self.order);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(new_vars.len());
            for (i, &e) in m.exps().iter().enumerate() {
                nm.0[map[i]] += e;
            }
            out.add_term(nm, c);
        }
        out
    }

    /// Permute the variables among themselves: variable `i` is replaced by
    /// variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> TSeries {
        self.relabel(&self.vars.clone(), perm)
    }

    /// Re-express the coefficients over a larger coefficient variable list.
    pub fn embed_coeffs(&self, coeff_vars: &VarList) -> Result<TSeries, SeriesError> {
        let mut out = TSeries::zero(&self.vars, coeff_vars, self.order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.embed(coeff_vars)?);
        }
        Ok(out)
    }

    /// Apply `f` to each coefficient; zero results are dropped.
    pub fn try_map_coeffs(
        &self,
        f: impl Fn(&Poly) -> Result<Poly, CoeffError>,
    ) -> Result<TSeries, SeriesError> {
        let mut out = TSeries::zero(&self.vars, &self.coeff_vars, self.order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c)?);
        }
        Ok(out)
    }

    /// Reduce every coefficient modulo `(prime, killed...)`.
    pub fn reduce_mod_ideal(&self, prime: Option<u64>, killed: &[&str]) -> Result<TSeries, SeriesError> {
        self.try_map_coeffs(|c| c.reduce_mod_ideal(prime, killed))
    }

    /// Substitute polynomials for coefficient variables.
    pub fn specialize(&self, assignments: &[(&str, Poly)]) -> Result<TSeries, SeriesError> {
        self.try_map_coeffs(|c| {
            let mut c = c.clone();
            for (name, value) in assignments {
                c = c.substitute(name, value)?;
            }
            Ok(c)
        })
    }

    /// Divide by a monomial that divides every term. Order drops by its degree.
    pub fn div_monomial(&self, m: &Monomial) -> Result<TSeries, SeriesError> {
        let deg = m.degree();
        let order = self.order.saturating_sub(deg);
        let mut out = TSeries::zero(&self.vars, &self.coeff_vars, order);
        for (t, c) in &self.terms {
            let q = t.div(m).ok_or_else(|| SeriesError::NotDivisible {
                degree: t.degree(),
                residual: format!("term {} not divisible by monomial", self.term_text(t, c)),
            })?;
            out.add_term(q, c);
        }
        Ok(out)
    }

    /// Exact graded division `num / den`.
    ///
    /// Let `d` be the valuation of `den` and `e = val(num) - d >= 0`. The
    /// quotient is built degree by degree: each homogeneous residual must be
    /// an exact multiple of the lowest form of `den`, whose lex-leading
    /// coefficient must be an invertible scalar. Result order is
    /// `min(order(num) - d, order(den) - d + e)`.
    pub fn graded_divide(num: &TSeries, den: &TSeries) -> Result<TSeries, SeriesError> {
        num.check_compatible(den)?;
        let d = den
            .valuation()
            .ok_or_else(|| SeriesError::NotDivisible { degree: 0, residual: "denominator is zero".into() })?;
        let vars = num.vars.clone();
        let cvars = num.coeff_vars.clone();
        let Some(vn) = num.valuation() else {
            return Ok(TSeries::zero(&vars, &cvars, num.order.saturating_sub(d)));
        };
        if vn < d {
            return Err(SeriesError::NotDivisible {
                degree: vn,
                residual: num.homogeneous_part(vn).to_string(),
            });
        }
        let e = vn - d;
        let order = (num.order - d).min(den.order - d + e);
        let lowest: Vec<(Monomial, Poly)> =
            den.degree_terms(d).map(|(m, c)| (m.clone(), c.clone())).collect();
        let (lead_m, lead_c) =
            lowest.iter().max_by(|a, b| a.0.lex_cmp(&b.0)).cloned().expect("nonzero lowest form");
        let lead_inv = lead_c
            .as_scalar()
            .and_then(|c| c.inv().ok())
            .ok_or_else(|| SeriesError::NonUnitConstantTerm(lead_c.to_string()))?;
        // Residual only needs degrees below order + d. Since the quotient has
        // valuation >= e, den terms of degree >= order + d - e never matter.
        let mut residual = num.truncate(order + d);
        let den_t = den.truncate(order + d - e);
        let mut out = TSeries::zero(&vars, &cvars, order);
        for k in e..order {
            let deg = k + d;
            let mut h: Terms = residual.degree_terms(deg).map(|(m, c)| (m.clone(), c.clone())).collect();
            let mut q = Terms::new();
            while let Some((m, c)) =
                h.iter().max_by(|a, b| a.0.lex_cmp(b.0)).map(|(m, c)| (m.clone(), c.clone()))
            {
                let qm = m.div(&lead_m).ok_or_else(|| SeriesError::NotDivisible {
                    degree: deg,
                    residual: residual.homogeneous_part(deg).to_string(),
                })?;
                let qc = c.scale(&lead_inv);
                for (lm, lc) in &lowest {
                    let mut neg = Poly::zero(&cvars);
                    neg.add_product(&qc, lc);
                    add_into(&mut h, qm.mul(lm), &-&neg);
                }
                add_into(&mut q, qm, &qc);
            }
            if q.is_empty() {
                continue;
            }
            for (m, c) in mul_terms(&q, &den_t.terms, order + d, &cvars) {
                add_into(&mut residual.terms, m, &-&c);
            }
            for (m, c) in q {
                out.add_term(m, &c);
            }
        }
        Ok(out)
    }

    /// Divided difference of a univariate series:
    /// `(f(b) - f(a)) / (b - a)` as a series in `[a, b]`, order `order - 1`.
    pub fn divided_difference(&self, a: &str, b: &str) -> Result<TSeries, SeriesError> {
        if self.vars.len() != 1 {
            return Err(SeriesError::VariableMismatch {
                left: self.vars.to_string(),
                right: "a univariate series".into(),
            });
        }
        let vars = VarList::new(&[a, b]);
        let order = self.order.saturating_sub(1);
        let mut out = TSeries::zero(&vars, &self.coeff_vars, order);
        for (m, c) in &self.terms {
            let n = m.exps()[0];
            for i in 0..n {
                out.add_term(Monomial::from_exps(&[i, n - 1 - i]), c);
            }
        }
        Ok(out)
    }

    /// Add new series variables at the end, with exponent 0.
    pub fn extend_vars(&self, new_vars: &VarList) -> Result<TSeries, SeriesError> {
        let map = self
            .vars
            .iter()
            .map(|n| new_vars.index(n).ok_or_else(|| SeriesError::UnknownVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.relabel(new_vars, &map))
    }

    /// Expand a univariate series `f(x)` into `f(name)` over another variable list.
    pub fn univariate_in(&self, target: &VarList, name: &str) -> Result<TSeries, SeriesError> {
        let image = TSeries::var(target, &self.coeff_vars, name, self.order)?;
        self.compose(&[image])
    }

    fn term_text(&self, m: &Monomial, c: &Poly) -> String {
        let mut mono = String::new();
        m.write(&self.vars, &mut mono);
        format!("({c})*{mono}")
    }
}

fn add_into(terms: &mut Terms, m: Monomial, c: &Poly) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            o.get_mut().add_assign_poly(c);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn add_product_into(terms: &mut Terms, m: Monomial, a: &Poly, b: &Poly, cvars: &VarList) {
    let entry = terms.entry(m).or_insert_with(|| Poly::zero(cvars));
    entry.add_product(a, b);
}

fn bucket(t: &Terms, order: u32) -> Vec<Vec<(&Monomial, &Poly)>> {
    let mut v: Vec<Vec<(&Monomial, &Poly)>> = vec![Vec::new(); order as usize];
    for (m, c) in t {
        let d = m.degree();
        if d < order {
            v[d as usize].push((m, c));
        }
    }
    v
}

fn mul_terms(a: &Terms, b: &Terms, order: u32, cvars: &VarList) -> Terms {
    let (ab, bb) = (bucket(a, order), bucket(b, order));
    let degree_product = |deg: usize| -> Terms {
        let mut acc = Terms::new();
        for i in 0..=deg {
            for (m1, c1) in &ab[i] {
                for (m2, c2) in &bb[deg - i] {
                    add_product_into(&mut acc, m1.mul(m2), c1, c2, cvars);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    };
    let work = a.len().saturating_mul(b.len());
    let parts: Vec<Terms> = if work >= PARALLEL_THRESHOLD {
        (0..order as usize).into_par_iter().map(degree_product).collect()
    } else {
        (0..order as usize).map(degree_product).collect()
    };
    parts.into_iter().flatten().collect()
}

impl<'a> std::ops::Add<&'a TSeries> for &'a TSeries {
    type Output = TSeries;
    /// Panics on incompatible variable lists; see [`TSeries::try_add`].
    fn add(self, rhs: &TSeries) -> TSeries {
        self.try_add(rhs).expect("series add")
    }
}

impl<'a> std::ops::Sub<&'a TSeries> for &'a TSeries {
    type Output = TSeries;
    fn sub(self, rhs: &TSeries) -> TSeries {
        self.try_sub(rhs).expect("series sub")
    }
}

impl<'a> std::ops::Mul<&'a TSeries> for &'a TSeries {
    type Output = TSeries;
    fn mul(self, rhs: &TSeries) -> TSeries {
        self.try_mul(rhs).expect("series mul")
    }
}

impl std::ops::Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        TSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn avars() -> VarList {
        VarList::new(&["a1", "a2", "a3", "a4", "a6"])
    }

    fn s(text: &str, vars: &[&str], order: u32) -> TSeries {
        let p = Poly::parse(text, &VarList::new(vars).union(&avars())).unwrap();
        TSeries::from_poly(&p, &VarList::new(vars), &avars(), order).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let v = ["x0", "x1"];
        let p = &s("x0 + x1", &v, 5) * &s("x0 - x1", &v, 5);
        assert_eq!(p, s("x0^2 - x1^2", &v, 5));
        let z = TSeries::zero(&VarList::new(&v), &avars(), 5);
        assert_eq!(&p + &z, p);
    }

    #[test]
    fn geometric_series_truncates() {
        let p = &s("1 + x", &["x"], 4) * &s("1 - x + x^2 - x^3", &["x"], 4);
        assert_eq!(p, s("1", &["x"], 4));
    }

    #[test]
    fn inverse_of_unit() {
        let inv = s("1 + a1*x + a3*x^3", &["x"], 5).invert_unit().unwrap();
        let expect = s("1 - a1*x + a1^2*x^2 - (a1^3 + a3)*x^3 + (a1^4 + 2*a1*a3)*x^4", &["x"], 5);
        assert_eq!(inv, expect);
        assert_eq!(s("1", &["x"], 5).invert_unit().unwrap(), s("1", &["x"], 5));
        let geo = s("1 + a1*x", &["x"], 4).invert_unit().unwrap();
        assert_eq!(geo, s("1 - a1*x + a1^2*x^2 - a1^3*x^3", &["x"], 4));
        assert!(matches!(s("a1 + x", &["x"], 4).invert_unit(), Err(SeriesError::NonUnitConstantTerm(_))));
    }

    #[test]
    fn substitution() {
        let sq = s("x^2", &["x"], 6);
        let sum = s("x0 + x1", &["x0", "x1"], 6);
        assert_eq!(sq.compose(&[sum]).unwrap(), s("x0^2 + 2*x0*x1 + x1^2", &["x0", "x1"], 6));
        let f = s("x + a1*x^2 + x^5", &["x"], 6);
        let id = s("x", &["x"], 6);
        assert_eq!(f.substitute(&[("x", &id)]).unwrap(), f);
        let bad = s("1 + x", &["x"], 6);
        assert!(matches!(f.compose(&[bad]), Err(SeriesError::NonPositiveValuation(_))));
        let z = TSeries::zero(&VarList::new(&["x"]), &avars(), 6);
        assert_eq!(f.compose(std::slice::from_ref(&z)).unwrap(), z);
    }

    #[test]
    fn division() {
        let v = ["x0", "x1"];
        let q = TSeries::graded_divide(&s("x0^2 - x1^2", &v, 6), &s("x0 - x1", &v, 6)).unwrap();
        assert_eq!(q, s("x0 + x1", &v, 5));
        let n = s("x0 + a1*x0*x1 + x1^3", &v, 6);
        assert_eq!(TSeries::graded_divide(&n, &n).unwrap(), s("1", &v, 5));
        let err = TSeries::graded_divide(&s("x0^2 + x1^2", &v, 6), &s("x0 - x1", &v, 6));
        assert!(matches!(err, Err(SeriesError::NotDivisible { .. })));
    }

    #[test]
    fn shifted_valuation_division() {
        let v = ["x0", "x1", "x2"];
        let w = s("x0^2*x1 + x1^2*x2", &v, 4);
        let num = s("a3*x0^3*x1^2*x2 + a3*x0*x1^3*x2^2", &v, 7);
        let q = TSeries::graded_divide(&num, &w).unwrap();
        assert_eq!(q, s("a3*x0*x1*x2", &v, 4));
    }

    #[test]
    fn divided_differences() {
        let f = s("x^2", &["x"], 5).divided_difference("x0", "x1").unwrap();
        assert_eq!(f, s("x0 + x1", &["x0", "x1"], 4));
        let f = s("x", &["x"], 5).divided_difference("x0", "x1").unwrap();
        assert_eq!(f, s("1", &["x0", "x1"], 4));
        let f = s("x^3 + a3*x^6", &["x"], 8).divided_difference("x0", "x1").unwrap();
        let expect = s(
            "x0^2 + x0*x1 + x1^2 + a3*(x0^5 + x0^4*x1 + x0^3*x1^2 + x0^2*x1^3 + x0*x1^4 + x1^5)",
            &["x0", "x1"],
            7,
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn coefficient_lookup() {
        let t = s("x0 + x1", &["x0", "x1"], 4);
        assert!(t.coefficient(&[2, 0]).unwrap().is_zero());
        assert!(t.coefficient(&[1, 0]).unwrap().is_one());
        assert!(matches!(t.coefficient(&[2, 2]), Err(SeriesError::BeyondTruncation { degree: 4, order: 4 })));
    }

    #[test]
    fn mul_order_is_minimum() {
        let p = &s("1 + x", &["x"], 3) * &s("1 + x", &["x"], 7);
        assert_eq!(p.order(), 3);
        assert_eq!(p, s("1 + 2*x + x^2", &["x"], 3));
    }
}
