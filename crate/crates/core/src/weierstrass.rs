//! Series attached to a Weierstrass curve
//! `Y^2 Z + a1 XYZ + a3 YZ^2 = X^3 + a2 X^2 Z + a4 XZ^2 + a6 Z^3`
//! in the chart `x = X/Y`, `z = Z/Y` around the origin `O = [0:1:0]`.
//!
//! The formal group law comes from the chord construction: the line through
//! two points of the formal group meets the curve in a third point, whose
//! abscissa follows from Vieta's formula, and the sum is the inverse of that
//! third point. No logarithm is used, so all coefficients stay integral.

use std::fmt;

use crate::coeffring::{Poly, Scalar, VarList};
use crate::series::TSeries;

/// Names of the curve coefficients, in storage order.
pub const CURVE_VARS: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];

/// The five Weierstrass coefficients as polynomials over a coefficient
/// variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    coeff_vars: VarList,
    a: [Poly; 5],
    label: String,
}

impl WeierstrassCurve {
    /// The curve with symbolic generators `a1, a2, a3, a4, a6`.
    pub fn general() -> Self {
        let vars = VarList::new(&CURVE_VARS);
        let a = CURVE_VARS.map(|n| Poly::var(&vars, n).expect("declared"));
        WeierstrassCurve { coeff_vars: vars, a, label: "general".into() }
    }

    /// The `Gamma_1(3)` curve `y^2 + a1 xy + a3 y = x^3`: `a2 = a4 = a6 = 0`.
    pub fn gamma13() -> Self {
        Self::general().specialize(&[("a2", 0), ("a4", 0), ("a6", 0)]).with_label("gamma13")
    }

    /// All coefficients zero: the additive formal group.
    pub fn additive() -> Self {
        Self::general()
            .specialize(&[("a1", 0), ("a2", 0), ("a3", 0), ("a4", 0), ("a6", 0)])
            .with_label("additive")
    }

    /// A curve from explicit coefficients `[a1, a2, a3, a4, a6]`.
    pub fn from_coeffs(coeff_vars: &VarList, a: [Poly; 5]) -> Self {
        for p in &a {
            assert_eq!(p.vars(), coeff_vars, "curve coefficients must share one variable list");
        }
        WeierstrassCurve { coeff_vars: coeff_vars.clone(), a, label: "custom".into() }
    }

    fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    /// Replace coefficients by integers, e.g. `a2 = 0`.
    pub fn specialize(&self, values: &[(&str, i64)]) -> Self {
        let mut out = self.clone();
        for (name, v) in values {
            if let Some(i) = CURVE_VARS.iter().position(|n| n == name) {
                out.a[i] = Poly::int(&self.coeff_vars, *v);
            }
        }
        out.label = format!("{}{}", self.label, describe(values));
        out
    }

    /// The curve with `a1, a3` negated: the target of the coordinate change
    /// `Y -> Y + a1 X + a3 Z` applied to a `Gamma_1(3)` curve.
    pub fn negate_odd(&self) -> Self {
        let mut out = self.clone();
        out.a[0] = -&self.a[0];
        out.a[2] = -&self.a[2];
        out.label = format!("{}(a1,a3 negated)", self.label);
        out
    }

    /// Re-express the coefficients over a larger variable list.
    pub fn embed(&self, coeff_vars: &VarList) -> Self {
        let a = self.a.clone().map(|p| p.embed(coeff_vars).expect("superset of variables"));
        WeierstrassCurve { coeff_vars: coeff_vars.clone(), a, label: self.label.clone() }
    }

    pub fn coeff_vars(&self) -> &VarList {
        &self.coeff_vars
    }

    /// Coefficient by name (`"a1"`, ..., `"a6"`).
    pub fn coeff(&self, name: &str) -> &Poly {
        let i = CURVE_VARS
            .iter()
            .position(|n| *n == name)
            .unwrap_or_else(|| panic!("no curve coefficient `{name}`"));
        &self.a[i]
    }

    pub fn a1(&self) -> &Poly {
        &self.a[0]
    }
    pub fn a2(&self) -> &Poly {
        &self.a[1]
    }
    pub fn a3(&self) -> &Poly {
        &self.a[2]
    }
    pub fn a4(&self) -> &Poly {
        &self.a[3]
    }
    pub fn a6(&self) -> &Poly {
        &self.a[4]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_gamma13(&self) -> bool {
        self.a2().is_zero() && self.a4().is_zero() && self.a6().is_zero()
    }
}

fn describe(values: &[(&str, i64)]) -> String {
    let parts: Vec<String> = values.iter().map(|(n, v)| format!("{n}={v}")).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a1 = {}, a2 = {}, a3 = {}, a4 = {}, a6 = {}",
            self.a[0], self.a[1], self.a[2], self.a[3], self.a[4]
        )
    }
}

pub(crate) fn x_vars() -> VarList {
    VarList::new(&["x"])
}

pub(crate) fn x01_vars() -> VarList {
    VarList::new(&["x0", "x1"])
}

/// `z(x)`: the unique series `x^3 + O(x^4)` with
/// `z + a1 x z + a3 z^2 = x^3 + a2 x^2 z + a4 x z^2 + a6 z^3`, to `order`.
pub fn z_series(c: &WeierstrassCurve, order: u32) -> TSeries {
    let vars = x_vars();
    let cv = &c.coeff_vars;
    let x = TSeries::var(&vars, cv, "x", order).expect("x");
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let mut z = TSeries::zero(&vars, cv, order);
    // Each pass fixes one more degree.
    for _ in 0..=order {
        let z2 = &z * &z;
        let z3 = &z2 * &z;
        let rhs = &(&(&x3 + &(&x2 * &z).scale_poly(c.a2()).expect("vars"))
            + &(&x * &z2).scale_poly(c.a4()).expect("vars"))
            + &z3.scale_poly(c.a6()).expect("vars");
        let lhs_extra = &(&x * &z).scale_poly(c.a1()).expect("vars") + &z2.scale_poly(c.a3()).expect("vars");
        z = &rhs - &lhs_extra;
    }
    z
}

/// Abscissa `x3(x0, x1)` of the third intersection of the chord through the
/// points with abscissae `x0, x1`. Needs `z` to `order + 1`.
pub fn chord_third_point(c: &WeierstrassCurve, order: u32) -> TSeries {
    let z = z_series(c, order + 1);
    let vars = x01_vars();
    let cv = &c.coeff_vars;
    let x0 = TSeries::var(&vars, cv, "x0", order + 1).expect("x0");
    let x1 = TSeries::var(&vars, cv, "x1", order + 1).expect("x1");
    let lambda = z.divided_difference("x0", "x1").expect("univariate");
    let z0 = z.univariate_in(&vars, "x0").expect("x0");
    let nu = &z0 - &(&lambda * &x0);
    let l2 = &lambda * &lambda;
    let l3 = &l2 * &lambda;
    let one = TSeries::one(&vars, cv, order);
    let a = &(&(&one + &lambda.scale_poly(c.a2()).expect("vars")) + &l2.scale_poly(c.a4()).expect("vars"))
        + &l3.scale_poly(c.a6()).expect("vars");
    let two = Scalar::int(2);
    let three = Scalar::int(3);
    let b = &(&(&(&nu.scale_poly(c.a2()).expect("vars")
        + &(&lambda * &nu).scale_poly(c.a4()).expect("vars").scale(&two))
        + &(&l2 * &nu).scale_poly(c.a6()).expect("vars").scale(&three))
        - &lambda.scale_poly(c.a1()).expect("vars"))
        - &l2.scale_poly(c.a3()).expect("vars");
    let a_inv = a.invert_unit().expect("constant term 1");
    let ratio = &b * &a_inv;
    (&(&ratio.neg() - &x0) - &x1).truncate(order)
}

/// Inverse obtained from the chord through a point and the origin:
/// `x3(x, 0)`. Equal to [`formal_inverse`], computed without it.
pub fn chord_inverse(c: &WeierstrassCurve, order: u32) -> TSeries {
    let x3 = chord_third_point(c, order);
    chord_inverse_from(c, &x3, order)
}

fn chord_inverse_from(c: &WeierstrassCurve, x3: &TSeries, order: u32) -> TSeries {
    let vars = x_vars();
    let x = TSeries::var(&vars, &c.coeff_vars, "x", order).expect("x");
    let zero = TSeries::zero(&vars, &c.coeff_vars, order);
    x3.compose(&[x, zero]).expect("valuation >= 1")
}

/// The formal group law `F(x0, x1)` to `order`.
pub fn fgl(c: &WeierstrassCurve, order: u32) -> TSeries {
    let x3 = chord_third_point(c, order);
    let inv = chord_inverse_from(c, &x3, order);
    inv.compose(&[x3]).expect("valuation >= 1")
}

/// `F(a, b)` for two series over a common variable list.
pub fn formal_sum(f: &TSeries, a: &TSeries, b: &TSeries) -> TSeries {
    f.compose(&[a.clone(), b.clone()]).expect("positive valuation")
}

/// The formal inverse `[-1](x)`: fixed point of
/// `i <- -x - (F(x, i) - x - i)`, one pass per degree, starting at `-x`.
pub fn formal_inverse(c: &WeierstrassCurve, order: u32) -> TSeries {
    let f = fgl(c, order);
    formal_inverse_of(&f, order)
}

/// Formal inverse for an already computed group law.
pub fn formal_inverse_of(f: &TSeries, order: u32) -> TSeries {
    let vars = x_vars();
    let cv = f.coeff_vars();
    let x = TSeries::var(&vars, cv, "x", order).expect("x");
    let mut iota = x.neg();
    for _ in 0..=order {
        let sum = formal_sum(f, &x, &iota);
        iota = &(&x.neg() - &sum) + &(&x + &iota);
    }
    iota.truncate(order)
}

/// The `n`-series `[n](x)`.
pub fn n_series(c: &WeierstrassCurve, n: i64, order: u32) -> TSeries {
    let f = fgl(c, order);
    n_series_of(&f, n, order)
}

/// `[n](x)` for an already computed group law.
pub fn n_series_of(f: &TSeries, n: i64, order: u32) -> TSeries {
    let vars = x_vars();
    let cv = f.coeff_vars();
    let x = TSeries::var(&vars, cv, "x", order).expect("x");
    let mut acc = TSeries::zero(&vars, cv, order);
    for _ in 0..n.unsigned_abs() {
        acc = formal_sum(f, &x, &acc);
    }
    if n < 0 {
        let iota = formal_inverse_of(f, order);
        acc = iota.compose(&[acc]).expect("positive valuation");
    }
    acc
}

/// The discriminant `a3^3 (a1^3 - 27 a3)` of a `Gamma_1(3)` curve.
pub fn discriminant(a1: &Poly, a3: &Poly) -> Poly {
    let inner = &a1.pow(3) - &a3.scale(&Scalar::int(27));
    &a3.pow(3) * &inner
}
