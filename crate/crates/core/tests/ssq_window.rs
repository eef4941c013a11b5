//! Page computations on the full default window.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use cubicalforms_core::coeffring::Scalar;
use cubicalforms_core::ssq::{
    e_infinity_chart, permanent_cycles, ClassStatus, Degree, PageElement, Pages, SsqMonomial, Window,
    DIFFERENTIAL_PAGES,
};

fn pages() -> &'static Pages {
    static P: OnceLock<Pages> = OnceLock::new();
    P.get_or_init(|| {
        let start = Instant::now();
        let p = Pages::compute(&Window::default()).unwrap();
        eprintln!("default window computed in {:?}", start.elapsed());
        p
    })
}

#[test]
fn d_squared_on_window_basis() {
    for r in DIFFERENTIAL_PAGES {
        assert!(Window::default().check_d_squared(r).unwrap() > 1000);
    }
}

#[test]
fn permanent_cycles_survive() {
    for (name, e) in permanent_cycles() {
        for r in DIFFERENTIAL_PAGES {
            assert!(cubicalforms_core::ssq::d_r(r, &e).unwrap().is_zero(), "d{r}({name})");
        }
        let status = pages().class_status(8, &e).unwrap();
        assert!(status.is_nonzero_class(), "{name}: {status:?}");
    }
    assert_eq!(pages().class_status(8, &PageElement::a()).unwrap(), ClassStatus::Torsion(1));
}

#[test]
fn a_has_order_two_on_e2() {
    assert_eq!(pages().class_status(2, &PageElement::a()).unwrap(), ClassStatus::Torsion(1));
}

/// Monomials `a1^p a3^m` of homotopy degree `2p + 6m = t` fixed by
/// `a1 -> -a1, a3 -> -a3`, found by enumerating all pairs and testing the sign.
fn invariant_monomials(t: i64) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    for p in 0..=t.max(0) as u32 {
        for m in 0..=t.max(0) as u32 {
            let sign = if (p + m) % 2 == 0 { 1 } else { -1 };
            if 2 * p as i64 + 6 * m as i64 == t && sign == 1 {
                out.insert((p, m));
            }
        }
    }
    out
}

#[test]
fn filtration_zero_row_of_e2_is_the_invariant_span() {
    let w = Window::default();
    let mut checked = 0;
    for k in -(w.kmax as i64)..=0 {
        let degree = Degree::new(k, 0);
        let Some(cell) = pages().cell(2, degree, 0).unwrap() else { continue };
        if !cell.determinate {
            continue;
        }
        let expected = invariant_monomials(-k);
        assert!(cell.generators.iter().all(|g| g.order.is_none()), "torsion at {degree}");
        assert_eq!(cell.generators.len(), expected.len(), "rank at {degree}");
        for &(p, m) in &expected {
            // a1^p a3^m = u1^p u2^m sigma^{-p-3m}
            let mono = SsqMonomial::new(0, -(p as i64) - 3 * m as i64, p, m);
            let e = PageElement::monomial(Scalar::one(), mono);
            assert_eq!(pages().class_status(2, &e).unwrap(), ClassStatus::Free);
        }
        let gens = pages().generators(2, degree, 0).unwrap().unwrap();
        for (g, _) in &gens {
            for (m, c) in g.terms() {
                let (p, q) = (m.u1, m.u2);
                assert!(expected.contains(&(p, q)), "{g} leaves the invariant span");
                assert!(c.to_integer().is_some(), "{g} has a non-integral coefficient");
            }
        }
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} cells checked");
}

#[test]
fn e_infinity_chart_contains_unit() {
    let start = Instant::now();
    let chart = e_infinity_chart(&Window { kmax: 24, filtration_max: 12, u2_max: 4 }).unwrap();
    assert!(start.elapsed().as_secs() < 300);
    let unit = chart.cells.iter().find(|c| c.stem == 0 && c.filtration == 0).unwrap();
    assert!(unit.determinate);
    assert!(unit.generators.iter().any(|g| g.element == "1" && g.order.is_none()));
    assert!(chart.to_ascii().contains('O'));
}
