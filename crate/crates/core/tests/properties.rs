//! Randomized algebraic laws for scalars, series, the cubical construction
//! and the spectral sequence differentials.

use cubicalforms_core::coeffring::{Monomial, Poly, Scalar, ScalarKind, VarList};
use cubicalforms_core::cubical::cubical_structure;
use cubicalforms_core::qchar::{character_product, QXSeries};
use cubicalforms_core::series::TSeries;
use cubicalforms_core::ssq::{d_r, PageElement, SsqMonomial};
use cubicalforms_core::weierstrass::WeierstrassCurve;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-20i64..20).prop_map(Scalar::int),
        (-20i64..20, 0i64..5).prop_map(|(n, d)| Scalar::two_local(n, 2 * d + 1).unwrap()),
        (-20i64..20, 1i64..9).prop_map(|(n, d)| Scalar::rational(n, d).unwrap()),
        (-9i64..9, 1i64..4, -9i64..9, 1i64..4).prop_map(|(a, b, c, d)| Scalar::eisenstein(q(a, b), q(c, d))),
    ]
}

fn two_local() -> impl Strategy<Value = Scalar> {
    (-30i64..30, 0i64..6).prop_map(|(n, d)| Scalar::two_local(n, 2 * d + 1).unwrap())
}

fn cvars() -> VarList {
    VarList::new(&["a1", "a3"])
}

fn xvars() -> VarList {
    VarList::new(&["x"])
}

fn xy() -> VarList {
    VarList::new(&["x", "y"])
}

/// A series in `vars` with small integer polynomial coefficients in `a1, a3`.
fn series(vars: VarList, order: u32, constant: Option<i64>, min_deg: u32) -> impl Strategy<Value = TSeries> {
    let n = vars.len();
    let term = (proptest::collection::vec(0u32..order, n), -3i64..4, 0u32..2, 0u32..2);
    proptest::collection::vec(term, 0..8).prop_map(move |terms| {
        let cv = cvars();
        let mut s = TSeries::zero(&vars, &cv, order);
        if let Some(c) = constant {
            s.add_term(Monomial::one(n), &Poly::int(&cv, c));
        }
        for (exps, c, e1, e3) in terms {
            let m = Monomial::from_exps(&exps);
            if m.degree() < min_deg || m.degree() >= order {
                continue;
            }
            let coeff = Poly::term(&cv, Monomial::from_exps(&[e1, e3]), Scalar::int(c));
            s.add_term(m, &coeff);
        }
        s
    })
}

fn ssq_monomial(sigma_step: i64) -> impl Strategy<Value = SsqMonomial> {
    (0u32..6, -6i64..6, 0u32..3, 0u32..3)
        .prop_map(move |(a, k, p, m)| SsqMonomial::new(a, k * sigma_step, p, m))
}

/// Every coefficient even and every term of positive filtration: a sum of
/// `2a`-multiples, zero on the pages after `E1`.
fn killed_after_e1(e: &PageElement) -> bool {
    e.terms().all(|(m, c)| m.a >= 1 && c.to_integer().is_some_and(|n| n % 2 == BigInt::from(0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            match a.inv() {
                Ok(i) => prop_assert!((&a * &i).is_one()),
                // only 2-local non-units lack an inverse
                Err(_) => prop_assert!(a.kind() == ScalarKind::TwoLocal && a.two_valuation() > Some(0)),
            }
        }
    }

    #[test]
    fn eisenstein_norm_is_multiplicative(a in scalar(), b in scalar()) {
        let (x, y) = (a.to_eisenstein(), b.to_eisenstein());
        let xy = (&a * &b).to_eisenstein();
        prop_assert_eq!(xy.norm(), x.norm() * y.norm());
    }

    #[test]
    fn reduction_mod_two_is_a_ring_map(a in two_local(), b in two_local()) {
        let r = |s: &Scalar| s.reduce_mod(2).unwrap();
        prop_assert_eq!(r(&(&a + &b)), r(&(&r(&a) + &r(&b))));
        prop_assert_eq!(r(&(&a * &b)), r(&(&r(&a) * &r(&b))));
        prop_assert_eq!(r(&Scalar::one()), Scalar::one());
    }

    #[test]
    fn unit_inverse(s in series(xy(), 6, Some(1), 1)) {
        let inv = s.invert_unit().unwrap();
        let one = TSeries::one(&xy(), &cvars(), 6);
        prop_assert_eq!(s.try_mul(&inv).unwrap(), one);
    }

    #[test]
    fn graded_divide_inverts_multiplication(
        q in series(xy(), 6, None, 0),
        den in series(xy(), 6, Some(-1), 1),
    ) {
        let num = q.try_mul(&den).unwrap();
        let back = TSeries::graded_divide(&num, &den).unwrap();
        prop_assert_eq!(back.try_mul(&den).unwrap(), num);
        prop_assert!(back.agrees_to(&q, back.order()));
    }

    #[test]
    fn composition_is_associative(
        f in series(xvars(), 6, Some(2), 1),
        g in series(xvars(), 6, None, 1),
        h in series(xvars(), 6, None, 1),
    ) {
        let fg_h = f.compose(std::slice::from_ref(&g)).unwrap().compose(std::slice::from_ref(&h)).unwrap();
        let f_gh = f.compose(&[g.compose(&[h]).unwrap()]).unwrap();
        prop_assert_eq!(fg_h, f_gh);
    }

    #[test]
    fn divided_difference_identity(f in series(xvars(), 7, Some(1), 1)) {
        let ab = VarList::new(&["a", "b"]);
        let dd = f.divided_difference("a", "b").unwrap();
        let fa = f.univariate_in(&ab, "a").unwrap();
        let fb = f.univariate_in(&ab, "b").unwrap();
        let a = TSeries::var(&ab, &cvars(), "a", 7).unwrap();
        let b = TSeries::var(&ab, &cvars(), "b", 7).unwrap();
        let lhs = b.try_sub(&a).unwrap().try_mul(&dd).unwrap();
        let rhs = fb.try_sub(&fa).unwrap().truncate(lhs.order());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d1_is_a_derivation(m in ssq_monomial(1), n in ssq_monomial(1), c in -5i64..5) {
        let e = PageElement::monomial(Scalar::int(c), m);
        let f = PageElement::monomial(Scalar::one(), n);
        let sign = if m.sigma.rem_euclid(2) == 0 { 1 } else { -1 };
        let lhs = d_r(1, &e.mul(&f)).unwrap();
        let mut rhs = d_r(1, &e).unwrap().mul(&f);
        for (t, v) in e.mul(&d_r(1, &f).unwrap()).terms() {
            rhs.add_term(*t, &(v * &Scalar::int(sign)));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d3_d7_are_derivations_on_their_pages(m in ssq_monomial(2), n in ssq_monomial(2)) {
        for (r, step) in [(3u32, 2i64), (7, 4)] {
            if m.sigma % step != 0 || n.sigma % step != 0 {
                continue;
            }
            let e = PageElement::monomial(Scalar::one(), m);
            let f = PageElement::monomial(Scalar::one(), n);
            let lhs = d_r(r, &e.mul(&f)).unwrap();
            let mut diff = lhs;
            for (t, v) in d_r(r, &e).unwrap().mul(&f).terms() {
                diff.add_term(*t, &-v);
            }
            for (t, v) in e.mul(&d_r(r, &f).unwrap()).terms() {
                diff.add_term(*t, &-v);
            }
            prop_assert!(killed_after_e1(&diff), "d{}: defect {}", r, diff);
        }
    }

    #[test]
    fn differentials_shift_degree_uniformly(m in ssq_monomial(1)) {
        let e = PageElement::monomial(Scalar::one(), m);
        for r in [1u32, 3, 7] {
            let d = d_r(r, &e).unwrap();
            if let Some(deg) = d.degree().unwrap() {
                let src = m.degree();
                prop_assert_eq!((deg.k - src.k, deg.l - src.l), (1, 0));
                prop_assert_eq!(d.bidegree().unwrap().unwrap().1, m.a + r);
            }
        }
    }

    #[test]
    fn character_concatenation(split in 0usize..3) {
        let roots = ["x1", "x2", "x3"];
        let (left, right) = roots.split_at(split);
        let whole = character_product(&roots, 4, 2).unwrap();
        let vars = VarList::new(&roots);
        let lift = |part: &[&str], offset: usize| -> QXSeries {
            let mut acc = QXSeries::one(&vars, 4, 2);
            for i in 0..part.len() {
                let single = character_product(&["t"], 4, 2).unwrap();
                acc = acc.try_mul(&single.univariate_in(&vars, offset + i)).unwrap();
            }
            acc
        };
        let product = lift(left, 0).try_mul(&lift(right, split)).unwrap();
        prop_assert_eq!(whole, product);
    }
}

#[test]
fn general_curve_specializes_to_gamma13() {
    let order = 4;
    let general = cubical_structure(&WeierstrassCurve::general(), order).unwrap();
    let cv = general.coeff_vars().clone();
    let zero = Poly::zero(&cv);
    let specialized =
        general.specialize(&[("a2", zero.clone()), ("a4", zero.clone()), ("a6", zero)]).unwrap();
    let gamma = cubical_structure(&WeierstrassCurve::gamma13(), order).unwrap();
    assert_eq!(specialized, gamma);
    let both = |s: &TSeries| s.reduce_mod_ideal(Some(2), &["a1", "a2"]).unwrap();
    assert_eq!(both(&specialized), both(&gamma));
    assert_eq!(both(&gamma).to_string(), "1 + a3*x0*x1*x2 + O(4)");
}
