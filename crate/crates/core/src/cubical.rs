//! The cubical structure `r_U = t/u` of a Weierstrass formal group and the
//! mod-`(2, a1, a2)` verification of its leading terms.
//!
//! `t` and `u` are quotients of series in `x0, x1, x2` that are not power
//! series on their own; only the combined quotient
//! `N/D = (num(t) den(u)) / (den(t) num(u))` is. Both `N` and `D` are divisible
//! by `x0^3 x1^3 x2^3`; the factor is cancelled piece by piece before the
//! graded division so that the working order is only `order + 7`.

use thiserror::Error;

use crate::coeffring::{Monomial, Poly, VarList};
use crate::series::{SeriesError, TSeries};
use crate::weierstrass::{fgl, formal_sum, z_series, WeierstrassCurve};

/// Lowest total degree of the cancelled numerator and denominator.
pub const REDUCED_VALUATION: u32 = 7;

/// Default order for `r_U`: enough for the degree-3 and degree-4 families.
pub const DEFAULT_ORDER: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicalError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("denominator of the fraction is zero to the computed order")]
    ZeroDenominator,
    #[error("mismatch in `{check}`: offending term {term}")]
    PinnedValueMismatch { check: String, term: String },
}

/// A quotient of two series in `x0, x1, x2`, with the lowest total degrees
/// of both parts recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesFraction {
    pub numerator: TSeries,
    pub denominator: TSeries,
    pub numerator_valuation: Option<u32>,
    pub denominator_valuation: u32,
}

impl SeriesFraction {
    pub fn new(numerator: TSeries, denominator: TSeries) -> Result<Self, CubicalError> {
        let denominator_valuation = denominator.valuation().ok_or(CubicalError::ZeroDenominator)?;
        Ok(SeriesFraction {
            numerator_valuation: numerator.valuation(),
            numerator,
            denominator,
            denominator_valuation,
        })
    }

    /// The quotient as a power series, by graded division.
    pub fn quotient(&self) -> Result<TSeries, CubicalError> {
        Ok(TSeries::graded_divide(&self.numerator, &self.denominator)?)
    }
}

pub fn x012_vars() -> VarList {
    VarList::new(&["x0", "x1", "x2"])
}

const CYCLE: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];
const NAMES: [&str; 3] = ["x0", "x1", "x2"];

struct Lifted {
    x: Vec<TSeries>,
    z: Vec<TSeries>,
}

fn lift(c: &WeierstrassCurve, z: &TSeries, order: u32) -> Lifted {
    let v = x012_vars();
    let x = NAMES.iter().map(|n| TSeries::var(&v, c.coeff_vars(), n, order).expect("declared")).collect();
    let z = NAMES.iter().map(|n| z.univariate_in(&v, n).expect("declared")).collect();
    Lifted { x, z }
}

fn product(items: impl IntoIterator<Item = TSeries>) -> TSeries {
    items.into_iter().reduce(|a, b| &a * &b).expect("nonempty product")
}

/// The pair sums `F(x0,x1), F(x1,x2), F(x2,x0)` and `F(F(x0,x1),x2)`.
fn pair_sums(c: &WeierstrassCurve, order: u32) -> ([TSeries; 3], TSeries) {
    let f = fgl(c, order);
    let v = x012_vars();
    let x: Vec<TSeries> =
        NAMES.iter().map(|n| TSeries::var(&v, c.coeff_vars(), n, order).expect("declared")).collect();
    let pairs = CYCLE.map(|(i, j)| formal_sum(&f, &x[i], &x[j]));
    let triple = formal_sum(&f, &pairs[0], &x[2]);
    (pairs, triple)
}

/// `x_i z_j - x_j z_i` for the chord determinant with rows `(x_i, z_i)`,
/// as a series in `x0, x1`.
pub fn cyclic_factor(c: &WeierstrassCurve, order: u32) -> TSeries {
    let v = VarList::new(&["x0", "x1"]);
    let z = z_series(c, order);
    let x0 = TSeries::var(&v, c.coeff_vars(), "x0", order).expect("x0");
    let x1 = TSeries::var(&v, c.coeff_vars(), "x1", order).expect("x1");
    let z0 = z.univariate_in(&v, "x0").expect("x0");
    let z1 = z.univariate_in(&v, "x1").expect("x1");
    &(&x0 * &z1) - &(&x1 * &z0)
}

/// `det(x_i, 1, z_i) = sum_cyc (x1 z0 - x0 z1)`.
fn det3(l: &Lifted) -> TSeries {
    let terms = CYCLE.map(|(i, j)| &(&l.x[j] * &l.z[i]) - &(&l.x[i] * &l.z[j]));
    &(&terms[0] + &terms[1]) + &terms[2]
}

/// `t = prod_cyc (x0 z1 - x1 z0) / (det(x_i, 1, z_i) z0 z1 z2)`, both parts
/// exact below `order`.
pub fn t_fraction(c: &WeierstrassCurve, order: u32) -> Result<SeriesFraction, CubicalError> {
    let z = z_series(c, order);
    let l = lift(c, &z, order);
    let num = product(CYCLE.map(|(i, j)| &(&l.x[i] * &l.z[j]) - &(&l.x[j] * &l.z[i])));
    let den = &det3(&l) * &product(l.z.clone());
    SeriesFraction::new(num, den)
}

/// `u = prod_cyc F(x0, x1) / (x0 x1 x2 F(x0, x1, x2))`, both parts exact
/// below `order`.
pub fn u_fraction(c: &WeierstrassCurve, order: u32) -> Result<SeriesFraction, CubicalError> {
    let (pairs, triple) = pair_sums(c, order);
    let num = product(pairs);
    let v = x012_vars();
    let xyz = TSeries::from_terms(
        &v,
        c.coeff_vars(),
        order,
        [(Monomial::from_exps(&[1, 1, 1]), Poly::one(c.coeff_vars()))],
    );
    SeriesFraction::new(num, &xyz * &triple)
}

/// `N / D` for `r_U` after cancelling `x0^3 x1^3 x2^3`:
/// `N = prod_cyc (w(x1) - w(x0)) * F(x0,x1,x2)` with `w = z/x`, and
/// `D = det(x_i, 1, z_i) * prod zeta(x_i) * prod_cyc F(x0, x1)` with
/// `zeta = z/x^3`. Both parts are exact below `order`.
pub fn reduced_fraction(c: &WeierstrassCurve, order: u32) -> Result<SeriesFraction, CubicalError> {
    let z = z_series(c, order + 3);
    let xm = |e: u32| Monomial::from_exps(&[e]);
    let w = z.div_monomial(&xm(1))?;
    let zeta = z.div_monomial(&xm(3))?;
    let l = lift(c, &z, order + 3);
    let v = x012_vars();
    let wl: Vec<TSeries> = NAMES.iter().map(|n| w.univariate_in(&v, n).expect("declared")).collect();
    let zl: Vec<TSeries> = NAMES.iter().map(|n| zeta.univariate_in(&v, n).expect("declared")).collect();
    let ((pairs, triple), det) = rayon::join(|| pair_sums(c, order), || det3(&l));
    let diffs = product(CYCLE.map(|(i, j)| &wl[j] - &wl[i]));
    let num = (&diffs * &triple).truncate(order);
    let den = (&(&det * &product(zl)) * &product(pairs)).truncate(order);
    SeriesFraction::new(num, den)
}

/// The cubical structure `r_U = t/u` to `order`.
pub fn cubical_structure(c: &WeierstrassCurve, order: u32) -> Result<TSeries, CubicalError> {
    reduced_fraction(c, order + REDUCED_VALUATION)?.quotient()
}

/// One named check of the mod-2 pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Intermediate results of the mod-`(2, a1, a2)` computation on the
/// `Gamma_1(3)` curve, as canonical text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixBReport {
    pub order: u32,
    /// `(sum_sym x0^4 x1^2)(sum_cyc x0)`, the common lowest form.
    pub w: String,
    pub numerator_lowest: String,
    pub denominator_lowest: String,
    /// Degree-10 difference of numerator and denominator.
    pub v: String,
    pub v_over_w: String,
    /// `r_U` from `1 + v/w`, truncated to order 4.
    pub r_u_leading: String,
    /// `r_U` from the full cubical structure, reduced.
    pub r_u: String,
    pub checks: Vec<Check>,
}

const IDEAL: [&str; 2] = ["a1", "a2"];

fn reduce(s: &TSeries) -> Result<TSeries, CubicalError> {
    Ok(s.reduce_mod_ideal(Some(2), &IDEAL)?)
}

/// `(sum_sym x0^4 x1^2) * (x0 + x1 + x2)`, reduced mod 2.
pub fn appendix_b_w(coeff_vars: &VarList) -> TSeries {
    let v = x012_vars();
    let mut sym = TSeries::zero(&v, coeff_vars, 8);
    for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)] {
        let mut e = [0u32; 3];
        e[i] = 4;
        e[j] = 2;
        sym.add_term(Monomial::from_exps(&e), &Poly::one(coeff_vars));
    }
    let mut lin = TSeries::zero(&v, coeff_vars, 8);
    for i in 0..3 {
        lin.add_term(Monomial::var_power(3, i, 1), &Poly::one(coeff_vars));
    }
    (&sym * &lin).reduce_mod_ideal(Some(2), &[]).expect("integer coefficients")
}

/// Verify the leading terms of `r_U` on the `Gamma_1(3)` curve modulo
/// `(2, a1, a2)`. Any failed identity is returned as
/// [`CubicalError::PinnedValueMismatch`] with the offending term.
pub fn appendix_b_pipeline(order: u32) -> Result<AppendixBReport, CubicalError> {
    let order = order.max(4);
    let c = WeierstrassCurve::gamma13();
    let cv = c.coeff_vars().clone();
    let v7 = REDUCED_VALUATION;
    let frac = reduced_fraction(&c, order + v7)?;
    let num = reduce(&frac.numerator)?;
    let den = reduce(&frac.denominator)?;
    let w = appendix_b_w(&cv);
    let mut checks = Vec::new();

    let mismatch = |check: &str, s: &TSeries| CubicalError::PinnedValueMismatch {
        check: check.into(),
        term: s.to_string(),
    };
    // All comparisons are modulo the ideal.
    let mut expect_eq = |name: &str, got: &TSeries, want: &TSeries| {
        let diff = reduce(&(got - want))?;
        if !diff.is_zero() {
            return Err(mismatch(name, &diff));
        }
        checks.push(Check { name: name.into(), passed: true });
        Ok(())
    };
    let n7 = num.homogeneous_part(v7);
    let d7 = den.homogeneous_part(v7);
    expect_eq("numerator lowest form equals w", &n7, &w)?;
    expect_eq("denominator lowest form equals w", &d7, &w)?;
    for d in [v7 + 1, v7 + 2] {
        let zero = TSeries::zero(n7.vars(), &cv, d + 1);
        expect_eq(&format!("numerator degree {d} vanishes"), &num.homogeneous_part(d), &zero)?;
        expect_eq(&format!("denominator degree {d} vanishes"), &den.homogeneous_part(d), &zero)?;
    }
    let v = reduce(&(&num.homogeneous_part(v7 + 3) - &den.homogeneous_part(v7 + 3)))?;
    let a3 = Poly::var(&cv, "a3").expect("a3");
    let xyz = TSeries::from_terms(w.vars(), &cv, 4, [(Monomial::from_exps(&[1, 1, 1]), a3)]);
    let expected_v = (&xyz.extend_order(v7 + 4) * &w.extend_order(v7 + 4)).truncate(v7 + 4);
    let expected_v = reduce(&expected_v)?;
    expect_eq("v equals a3*x0*x1*x2*w", &v, &expected_v)?;
    let v_over_w = TSeries::graded_divide(&v, &w)?;
    let one = TSeries::one(w.vars(), &cv, 4);
    let leading = reduce(&(&one + &v_over_w))?;
    let expected_leading = &one + &xyz;
    expect_eq("1 + v/w equals 1 + a3*x0*x1*x2", &leading, &expected_leading)?;
    let r_u = reduce(&TSeries::graded_divide(&frac.numerator, &frac.denominator)?)?;
    expect_eq("r_U mod (2,a1,a2) to order 4", &r_u.truncate(4), &expected_leading)?;

    Ok(AppendixBReport {
        order,
        w: w.to_string(),
        numerator_lowest: n7.to_string(),
        denominator_lowest: d7.to_string(),
        v: v.to_string(),
        v_over_w: v_over_w.to_string(),
        r_u_leading: leading.to_string(),
        r_u: r_u.to_string(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weierstrass::CURVE_VARS;

    fn x3(text: &str, order: u32) -> TSeries {
        TSeries::parse(&format!("{text} + O({order})"), &x012_vars(), &VarList::new(&CURVE_VARS)).unwrap()
    }

    #[test]
    fn additive_curve_gives_one() {
        let r = cubical_structure(&WeierstrassCurve::additive(), 6).unwrap();
        assert_eq!(r, x3("1", 6));
    }

    #[test]
    fn gamma13_mod_two_leading_terms() {
        let r = cubical_structure(&WeierstrassCurve::gamma13(), 4).unwrap();
        let r = r.reduce_mod_ideal(Some(2), &IDEAL).unwrap();
        assert_eq!(r, x3("1 + a3*x0*x1*x2", 4));
    }

    #[test]
    fn t_numerator_for_additive_curve() {
        let t = t_fraction(&WeierstrassCurve::additive(), 14).unwrap();
        let lowest = t.numerator.lowest_form().unwrap();
        let expect = x3("x0*x1*(x1^2 - x0^2)*x1*x2*(x2^2 - x1^2)*x2*x0*(x0^2 - x2^2)", 14);
        assert_eq!(lowest, expect.homogeneous_part(12));
        assert_eq!(t.numerator_valuation, Some(12));
        assert_eq!(t.denominator_valuation, 13);
    }

    #[test]
    fn t_swaps_sign() {
        let t = t_fraction(&WeierstrassCurve::general(), 16).unwrap();
        assert_eq!(t.numerator.permute(&[1, 0, 2]), t.numerator.neg());
        assert_eq!(t.denominator.permute(&[1, 0, 2]), t.denominator.neg());
    }

    #[test]
    fn cyclic_factor_mod_two() {
        let f = cyclic_factor(&WeierstrassCurve::gamma13(), 8).reduce_mod_ideal(Some(2), &IDEAL).unwrap();
        let v = VarList::new(&["x0", "x1"]);
        let expect = TSeries::parse(
            "x0*x1^3 - x0^3*x1 + a3*(x0*x1^6 - x0^6*x1) + O(8)",
            &v,
            &VarList::new(&CURVE_VARS),
        )
        .unwrap()
        .reduce_mod_ideal(Some(2), &[])
        .unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn u_for_additive_and_symmetry() {
        let u = u_fraction(&WeierstrassCurve::additive(), 6).unwrap();
        assert_eq!(u.numerator, x3("(x0 + x1)*(x1 + x2)*(x2 + x0)", 6));
        assert_eq!(u.denominator, x3("x0*x1*x2*(x0 + x1 + x2)", 6));
        let u = u_fraction(&WeierstrassCurve::general(), 7).unwrap();
        for p in [[1, 0, 2], [0, 2, 1], [2, 0, 1]] {
            assert_eq!(u.numerator.permute(&p), u.numerator);
            assert_eq!(u.denominator.permute(&p), u.denominator);
        }
        let u = u_fraction(&WeierstrassCurve::gamma13(), 5).unwrap();
        let num = u.numerator.reduce_mod_ideal(Some(2), &IDEAL).unwrap();
        let expect = x3("(x0 + x1 + a3*x0^2*x1^2)*(x1 + x2 + a3*x1^2*x2^2)*(x2 + x0 + a3*x2^2*x0^2)", 5);
        assert_eq!(num, expect.reduce_mod_ideal(Some(2), &[]).unwrap());
    }

    #[test]
    fn fractions_combine_to_the_reduced_quotient() {
        // Brute force: N = num(t) den(u), D = den(t) num(u) without cancellation.
        let c = WeierstrassCurve::gamma13();
        let order = 3;
        let work = order + 16;
        let t = t_fraction(&c, work).unwrap();
        let u = u_fraction(&c, work).unwrap();
        let n = &t.numerator * &u.denominator;
        let d = &t.denominator * &u.numerator;
        let r = TSeries::graded_divide(&n, &d).unwrap();
        assert_eq!(r, cubical_structure(&c, order).unwrap());
    }

    #[test]
    fn w_has_expected_shape() {
        let w = appendix_b_w(&VarList::new(&CURVE_VARS));
        let lowest = x3("(x1^2 - x0^2)*(x2^2 - x1^2)*(x0^2 - x2^2)*(x0 + x1 + x2)", 8)
            .reduce_mod_ideal(Some(2), &[])
            .unwrap();
        assert_eq!(w, lowest);
        assert_eq!(w.len(), 18);
    }

    #[test]
    fn pipeline_passes() {
        let report = appendix_b_pipeline(4).unwrap();
        assert!(report.checks.iter().all(|c| c.passed));
        assert_eq!(report.v_over_w, "a3*x0*x1*x2 + O(4)");
        assert_eq!(report.r_u_leading, "1 + a3*x0*x1*x2 + O(4)");
    }
}
