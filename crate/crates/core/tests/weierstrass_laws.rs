//! Group-law identities of the Weierstrass formal group.

use std::time::Instant;

use cubicalforms_core::coeffring::VarList;
use cubicalforms_core::series::TSeries;
use cubicalforms_core::weierstrass::{fgl, formal_inverse_of, formal_sum, z_series, WeierstrassCurve};

fn xyw(order: u32, c: &WeierstrassCurve) -> (TSeries, TSeries, TSeries) {
    let v = VarList::new(&["x", "y", "w"]);
    let cv = c.coeff_vars();
    (
        TSeries::var(&v, cv, "x", order).unwrap(),
        TSeries::var(&v, cv, "y", order).unwrap(),
        TSeries::var(&v, cv, "w", order).unwrap(),
    )
}

#[test]
fn associative_to_degree_six() {
    let c = WeierstrassCurve::general();
    let start = Instant::now();
    let f = fgl(&c, 7);
    let (x, y, w) = xyw(7, &c);
    let left = formal_sum(&f, &formal_sum(&f, &x, &y), &w);
    let right = formal_sum(&f, &x, &formal_sum(&f, &y, &w));
    assert!(left.agrees_to(&right, 7));
    eprintln!("associativity to order 7 in {:?}", start.elapsed());
}

#[test]
fn commutative_and_unital() {
    let c = WeierstrassCurve::general();
    let f = fgl(&c, 9);
    assert_eq!(f.permute(&[1, 0]), f);
    let v = VarList::new(&["x0", "x1"]);
    let x0 = TSeries::var(&v, c.coeff_vars(), "x0", 9).unwrap();
    let zero = TSeries::zero(&v, c.coeff_vars(), 9);
    assert_eq!(formal_sum(&f, &x0, &zero), x0);
}

#[test]
fn z_satisfies_the_curve_equation() {
    let c = WeierstrassCurve::general();
    let n = 12;
    let z = z_series(&c, n);
    let x = TSeries::var(z.vars(), c.coeff_vars(), "x", n).unwrap();
    let z2 = &z * &z;
    let lhs = &(&z + &(&x * &z).scale_poly(c.a1()).unwrap()) + &z2.scale_poly(c.a3()).unwrap();
    let rhs = &(&(&(&x * &x) * &x) + &(&(&x * &x) * &z).scale_poly(c.a2()).unwrap())
        + &(&(&x * &z2).scale_poly(c.a4()).unwrap() + &(&z2 * &z).scale_poly(c.a6()).unwrap());
    assert!((&lhs - &rhs).is_zero());
}

#[test]
fn inverse_is_an_involution() {
    let c = WeierstrassCurve::general();
    let f = fgl(&c, 9);
    let iota = formal_inverse_of(&f, 9);
    let twice = iota.compose(std::slice::from_ref(&iota)).unwrap();
    let x = TSeries::var(iota.vars(), c.coeff_vars(), "x", 9).unwrap();
    assert_eq!(twice, x);
    let zero = formal_sum(&f, &x, &iota);
    assert!(zero.is_zero());
}

#[test]
fn symbolic_gamma13_inverse_cancels_to_order_eight() {
    let c = WeierstrassCurve::gamma13();
    let f = fgl(&c, 8);
    let iota = formal_inverse_of(&f, 8);
    let x = TSeries::var(iota.vars(), c.coeff_vars(), "x", 8).unwrap();
    assert!(formal_sum(&f, &x, &iota).is_zero());
}

#[test]
fn fgl_high_order_timing() {
    let start = Instant::now();
    let f = fgl(&WeierstrassCurve::general(), 13);
    eprintln!("fgl order 13: {} terms in {:?}", f.len(), start.elapsed());
}
