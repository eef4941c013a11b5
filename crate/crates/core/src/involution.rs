//! Coordinate changes of Weierstrass curves as series in `x`, the
//! `Gamma_1(3)` involution `g(x) = x/(1 + a1 x + a3 z(x))`, the
//! multiplicative sequence `Q(x) = x/g(x)`, maximal-torus restriction and
//! the Pontryagin series.
//!
//! `g` maps the coordinate of a curve to the coordinate of the curve with
//! `a1, a3` negated, so its inverse is `g` with negated parameters. The
//! same-parameter composite `g(g(x))` is the identity only modulo 2.

use thiserror::Error;

use crate::coeffring::{Monomial, Poly, VarList};
use crate::series::{SeriesError, TSeries};
use crate::weierstrass::{formal_inverse, x_vars, z_series, WeierstrassCurve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("scaling parameter u = {0} is not a unit")]
    NonUnitU(String),
    #[error("the two forms of {0} disagree")]
    InternalMismatch(String),
    #[error("series is not symmetric under {0}")]
    NotSymmetric(String),
}

/// Parameters of `X' = u^2 X + r Z, Y' = s u^2 X + u^3 Y + t Z, Z' = Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoParams {
    pub u: Poly,
    pub r: Poly,
    pub s: Poly,
    pub t: Poly,
}

impl IsoParams {
    pub fn identity(coeff_vars: &VarList) -> Self {
        IsoParams {
            u: Poly::one(coeff_vars),
            r: Poly::zero(coeff_vars),
            s: Poly::zero(coeff_vars),
            t: Poly::zero(coeff_vars),
        }
    }

    /// `(u, r, s, t) = (1, 0, a1, a3)`: the `Gamma_1(3)` involution.
    pub fn gamma13(c: &WeierstrassCurve) -> Self {
        IsoParams { s: c.a1().clone(), t: c.a3().clone(), ..Self::identity(c.coeff_vars()) }
    }
}

/// `g(x) = (u^-1 x + r u^-3 z) / (1 + t u^-3 z + s u^-1 x)`.
pub fn coordinate_change_g(
    c: &WeierstrassCurve,
    p: &IsoParams,
    order: u32,
) -> Result<TSeries, InvolutionError> {
    let u_inv =
        p.u.as_scalar()
            .and_then(|u| u.inv().ok())
            .ok_or_else(|| InvolutionError::NonUnitU(p.u.to_string()))?;
    let u_inv3 = u_inv.pow(3);
    let vars = x_vars();
    let cv = c.coeff_vars();
    let x = TSeries::var(&vars, cv, "x", order)?;
    let z = z_series(c, order);
    let num = &x.scale(&u_inv) + &z.scale_poly(&p.r.scale(&u_inv3))?;
    let one = TSeries::one(&vars, cv, order);
    let den = &(&one + &z.scale_poly(&p.t.scale(&u_inv3))?) + &x.scale_poly(&p.s.scale(&u_inv))?;
    Ok(&num * &den.invert_unit()?)
}

/// `g(x) = x/(1 + a1 x + a3 z(x))` for a `Gamma_1(3)` curve.
pub fn gamma13_g_for(c: &WeierstrassCurve, order: u32) -> TSeries {
    coordinate_change_g(c, &IsoParams::gamma13(c), order).expect("u = 1")
}

/// `g` for the symbolic `Gamma_1(3)` curve.
pub fn gamma13_g(order: u32) -> TSeries {
    gamma13_g_for(&WeierstrassCurve::gamma13(), order)
}

/// Outcome of composing `g` with itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposeReport {
    pub order: u32,
    /// `g_{-a}(g_a(x))`, expected to be `x`.
    pub twisted: TSeries,
    pub twisted_is_identity: bool,
    /// `g_a(g_a(x))`.
    pub plain: TSeries,
    pub plain_mod2: TSeries,
    pub plain_mod2_is_identity: bool,
}

/// Compose `g` with itself in the twisted form (second factor with
/// negated `a1, a3`) and in the plain form.
pub fn twisted_compose_check(order: u32) -> ComposeReport {
    let c = WeierstrassCurve::gamma13();
    let g = gamma13_g_for(&c, order);
    let g_neg = gamma13_g_for(&c.negate_odd(), order);
    let x = TSeries::var(&x_vars(), c.coeff_vars(), "x", order).expect("x");
    let twisted = g_neg.compose(std::slice::from_ref(&g)).expect("valuation 1");
    let plain = g.compose(std::slice::from_ref(&g)).expect("valuation 1");
    let plain_mod2 = plain.reduce_mod_ideal(Some(2), &[]).expect("integral");
    ComposeReport {
        order,
        twisted_is_identity: twisted == x,
        plain_mod2_is_identity: plain_mod2 == x,
        twisted,
        plain,
        plain_mod2,
    }
}

/// `Q(x) = x/g(x)`, checked against the closed form `1 + a1 x + a3 z(x)`.
pub fn q_series_for(c: &WeierstrassCurve, order: u32) -> Result<TSeries, InvolutionError> {
    let vars = x_vars();
    let cv = c.coeff_vars();
    // g has valuation 1, so x/g loses one degree; compute g one degree higher.
    let g = gamma13_g_for(c, order + 1);
    let x = TSeries::var(&vars, cv, "x", order + 1)?;
    let x_mono = Monomial::from_exps(&[1]);
    let quotient = TSeries::graded_divide(&x, &g)?;
    let z = z_series(c, order);
    let closed = &(&TSeries::one(&vars, cv, order)
        + &TSeries::var(&vars, cv, "x", order)?.scale_poly(c.a1())?)
        + &z.scale_poly(c.a3())?;
    let by_division = g.div_monomial(&x_mono)?.invert_unit()?;
    if quotient.truncate(order) != closed || by_division.truncate(order) != closed {
        return Err(InvolutionError::InternalMismatch("Q(x)".into()));
    }
    Ok(closed)
}

/// `Q(x)` for the symbolic `Gamma_1(3)` curve.
pub fn q_series(order: u32) -> Result<TSeries, InvolutionError> {
    q_series_for(&WeierstrassCurve::gamma13(), order)
}

/// `Q(x) * Q^tau(g(x))` where `Q^tau` has `a1, a3` negated; equals 1.
pub fn q_tau_product(order: u32) -> Result<TSeries, InvolutionError> {
    let c = WeierstrassCurve::gamma13();
    let q = q_series_for(&c, order)?;
    let q_tau = q_series_for(&c.negate_odd(), order)?;
    let g = gamma13_g_for(&c, order);
    Ok(&q * &q_tau.compose(&[g])?)
}

/// Variables `y1, ..., y_{2m+1}`.
pub fn y_vars(m: usize) -> VarList {
    let names: Vec<String> = (1..=2 * m + 1).map(|k| format!("y{k}")).collect();
    VarList::new(&names)
}

/// Variables `x1, ..., x_m`.
pub fn torus_vars(m: usize) -> VarList {
    let names: Vec<String> = (1..=m).map(|k| format!("x{k}")).collect();
    VarList::new(&names)
}

/// `prod_{k=1}^{2m+1} Q(y_k)`.
pub fn q_product(m: usize, order: u32) -> Result<TSeries, InvolutionError> {
    let q = q_series(order)?;
    let ys = y_vars(m);
    let mut acc = TSeries::one(&ys, q.coeff_vars(), order);
    for name in ys.iter() {
        acc = &acc * &q.univariate_in(&ys, name)?;
    }
    Ok(acc)
}

/// Substitute `y_{2k-1} -> x_k`, `y_{2k} -> g(x_k)`, `y_{2m+1} -> 0` into
/// a symmetric series in `y1, ..., y_{2m+1}`.
pub fn torus_restriction(m: usize, s: &TSeries, order: u32) -> Result<TSeries, InvolutionError> {
    let ys = y_vars(m);
    if s.vars() != &ys {
        return Err(
            SeriesError::VariableMismatch { left: s.vars().to_string(), right: ys.to_string() }.into()
        );
    }
    let n = ys.len();
    for i in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        if s.permute(&perm) != *s {
            return Err(InvolutionError::NotSymmetric(format!("{} <-> {}", ys[i], ys[i + 1])));
        }
    }
    let c = WeierstrassCurve::gamma13().embed(s.coeff_vars());
    let g = gamma13_g_for(&c, order);
    let xs = torus_vars(m);
    let cv = s.coeff_vars();
    let mut images = Vec::with_capacity(n);
    for k in 0..m {
        let xk = TSeries::var(&xs, cv, &xs[k], order)?;
        images.push(xk);
        images.push(g.univariate_in(&xs, &xs[k])?);
    }
    images.push(TSeries::zero(&xs, cv, order));
    Ok(s.compose(&images)?)
}

/// Coefficient variables of the Pontryagin series: the curve's plus `t`.
pub fn pontryagin_coeff_vars(c: &WeierstrassCurve) -> VarList {
    c.coeff_vars().union(&VarList::new(&["t"]))
}

/// `x * iota(x)` for the formal inverse `iota`.
pub fn pontryagin_root(c: &WeierstrassCurve, order: u32) -> TSeries {
    let iota = formal_inverse(c, order);
    let x = TSeries::var(iota.vars(), c.coeff_vars(), "x", order).expect("x");
    &x * &iota
}

/// `prod_k (1 - t * x_k iota(x_k))` over `x1, ..., x_m`, keeping powers of
/// `t` below `t_order`.
pub fn pontryagin_series(
    c: &WeierstrassCurve,
    m: usize,
    order: u32,
    t_order: u32,
) -> Result<TSeries, InvolutionError> {
    let cv = pontryagin_coeff_vars(c);
    let root = pontryagin_root(c, order).embed_coeffs(&cv)?;
    let xs = torus_vars(m);
    let t = Poly::var(&cv, "t").expect("t");
    let mut acc = TSeries::one(&xs, &cv, order);
    for name in xs.iter() {
        let ck = root.univariate_in(&xs, name)?;
        let factor = &TSeries::one(&xs, &cv, order) - &ck.scale_poly(&t)?;
        acc = (&acc * &factor).try_map_coeffs(|p| Ok(p.truncate_in("t", t_order.saturating_sub(1))))?;
    }
    Ok(acc)
}

/// `c(iota(x)) - c(x)` for `c(x) = x iota(x)`; zero when invariant.
pub fn pontryagin_invariance_defect(c: &WeierstrassCurve, order: u32) -> TSeries {
    let iota = formal_inverse(c, order);
    let x = TSeries::var(iota.vars(), c.coeff_vars(), "x", order).expect("x");
    let root = &x * &iota;
    &root.compose(&[iota]).expect("valuation 1") - &root
}
