//! The reproduction suite behind `verify --suite paper`.
//!
//! Every check recomputes from scratch. Series are compared exactly; a
//! failure reports the first term of `computed - expected` in canonical
//! order. Criteria with a runtime budget get an extra timing check.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use cubicalforms_core::coeffring::{Scalar, VarList};
use cubicalforms_core::cubical::{appendix_b_pipeline, cubical_structure, x012_vars, CubicalError};
use cubicalforms_core::involution::{gamma13_g, q_tau_product, twisted_compose_check};
use cubicalforms_core::qchar::{level3_genus_x, phi_exp, phi_product, psi_series, Field, QXSeries, Shift};
use cubicalforms_core::series::TSeries;
use cubicalforms_core::ssq::{
    d_r, permanent_cycles, ClassStatus, Degree, PageElement, Pages, SsqMonomial, Window, DIFFERENTIAL_PAGES,
};
use cubicalforms_core::weierstrass::{fgl, formal_inverse, formal_sum, z_series, WeierstrassCurve};
use serde::Serialize;
use serde_json::json;

use crate::golden;

/// Runtime budgets in seconds, by criterion.
pub const BUDGETS: [(u32, f64); 5] = [(1, 1.0), (2, 60.0), (3, 300.0), (7, 30.0), (9, 300.0)];

/// Runtime budget of the whole suite in seconds.
pub const SUITE_BUDGET: f64 = 900.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub criterion: u32,
    pub name: String,
    pub passed: bool,
    /// Summary on success, first offending term on failure.
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn from_checks(checks: Vec<CheckResult>) -> Self {
        let seconds = checks.iter().map(|c| c.seconds).sum();
        SuiteReport { checks, seconds }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.checks.iter().find(|c| !c.passed).map(|c| format!("[{}] {}: {}", c.criterion, c.name, c.detail))
    }

    /// Checks of one criterion.
    pub fn criterion(&self, n: u32) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(move |c| c.criterion == n)
    }
}

type Outcome = Result<String, String>;

/// Runs checks of one criterion and records per-check wall time.
struct Recorder {
    criterion: u32,
    start: Instant,
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn new(criterion: u32) -> Self {
        Recorder { criterion, start: Instant::now(), checks: Vec::new() }
    }

    fn check(&mut self, name: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let result = f();
        self.push(name, result, t.elapsed());
    }

    fn push(&mut self, name: &str, result: Outcome, elapsed: Duration) {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult {
            criterion: self.criterion,
            name: name.to_string(),
            passed,
            detail,
            seconds: elapsed.as_secs_f64(),
        });
    }

    fn finish(mut self) -> Vec<CheckResult> {
        let elapsed = self.start.elapsed();
        if let Some(&(_, budget)) = BUDGETS.iter().find(|(c, _)| *c == self.criterion) {
            let secs = elapsed.as_secs_f64();
            let result = if secs < budget {
                Ok("within budget".to_string())
            } else {
                Err(format!("{secs:.2}s exceeds {budget}s"))
            };
            self.push(&format!("runtime under {budget}s"), result, Duration::ZERO);
        }
        self.checks
    }
}

/// First term of `got - want`, as a one-term series in canonical text.
pub fn first_difference(got: &TSeries, want: &TSeries) -> Option<String> {
    if got.order() != want.order() {
        return Some(format!("truncation O({}) vs O({})", got.order(), want.order()));
    }
    let diff = got.try_sub(want).map_err(|e| e.to_string());
    match diff {
        Err(e) => Some(e),
        Ok(d) if d.is_zero() => None,
        Ok(d) => {
            let (m, c) = d.display_terms()[0];
            let one = TSeries::from_terms(d.vars(), d.coeff_vars(), d.order(), [(m.clone(), c.clone())]);
            Some(one.to_string())
        }
    }
}

fn same_series(got: &TSeries, want: &TSeries) -> Outcome {
    match first_difference(got, want) {
        None => Ok(format!("{} terms agree", got.len())),
        Some(t) => Err(t),
    }
}

fn first_qx_difference(got: &QXSeries, want: &QXSeries) -> Option<String> {
    let d = got.try_sub(want).map_err(|e| e.to_string());
    match d {
        Err(e) => Some(e),
        Ok(d) if d.is_zero() => None,
        Ok(d) => {
            let (m, j, c) = d.display_terms()[0];
            let mut one = QXSeries::zero(d.x_vars(), d.x_order(), d.q_order());
            one.add_term(m.clone(), j, c);
            Some(one.to_string())
        }
    }
}

fn against_golden(got: &TSeries, text: &str) -> Outcome {
    let want = golden::parse(text, got.vars()).map_err(|e| format!("golden file: {e}"))?;
    same_series(got, &want)
}

fn associativity(c: &WeierstrassCurve, order: u32) -> Outcome {
    let f = fgl(c, order);
    let v = VarList::new(&["x", "y", "w"]);
    let var = |n: &str| TSeries::var(&v, c.coeff_vars(), n, order).map_err(|e| e.to_string());
    let (x, y, w) = (var("x")?, var("y")?, var("w")?);
    let left = formal_sum(&f, &formal_sum(&f, &x, &y), &w);
    let right = formal_sum(&f, &x, &formal_sum(&f, &y, &w));
    same_series(&left, &right).map(|_| format!("F(F(x,y),w) = F(x,F(y,w)) below degree {order}"))
}

fn criterion_1() -> Vec<CheckResult> {
    let mut r = Recorder::new(1);
    r.check("z-series to order 7", || {
        against_golden(&z_series(&WeierstrassCurve::general(), 7), golden::ZSERIES_ORDER7)
    });
    r.finish()
}

fn criterion_2() -> Vec<CheckResult> {
    let mut r = Recorder::new(2);
    let c = WeierstrassCurve::general();
    r.check("formal group law to order 4", || against_golden(&fgl(&c, 4), golden::FGL_ORDER4));
    r.check("associativity through total degree 6", || associativity(&c, 7));
    r.finish()
}

fn criterion_3() -> Vec<CheckResult> {
    let mut r = Recorder::new(3);
    r.check("cubical structure at order 5, general curve", || {
        let s = cubical_structure(&WeierstrassCurve::general(), 5).map_err(|e| e.to_string())?;
        against_golden(&s, golden::CUBICAL_ORDER5)
    });
    r.finish()
}

fn criterion_4() -> Vec<CheckResult> {
    let mut r = Recorder::new(4);
    r.check("Gamma_1(3) cubical structure mod (2,a1,a2) at order 4", || {
        let s = cubical_structure(&WeierstrassCurve::gamma13(), 4).map_err(|e| e.to_string())?;
        let s = s.reduce_mod_ideal(Some(2), &["a1", "a2"]).map_err(|e| e.to_string())?;
        against_golden(&s, golden::CUBICAL_GAMMA13_MOD2_ORDER4)
    });
    let t = Instant::now();
    match appendix_b_pipeline(4) {
        Ok(report) => {
            let elapsed = t.elapsed() / report.checks.len().max(1) as u32;
            for c in &report.checks {
                let result = if c.passed { Ok("holds mod 2".to_string()) } else { Err("failed".to_string()) };
                r.push(&format!("mod-2 pipeline: {}", c.name), result, elapsed);
            }
        }
        Err(CubicalError::PinnedValueMismatch { check, term }) => {
            r.push(&format!("mod-2 pipeline: {check}"), Err(term), t.elapsed());
        }
        Err(e) => r.push("mod-2 pipeline", Err(e.to_string()), t.elapsed()),
    }
    r.finish()
}

fn criterion_5() -> Vec<CheckResult> {
    let mut r = Recorder::new(5);
    let order = 6;
    let t = Instant::now();
    let s = match cubical_structure(&WeierstrassCurve::general(), order) {
        Ok(s) => s,
        Err(e) => {
            r.push("cubical structure at order 6", Err(e.to_string()), t.elapsed());
            return r.finish();
        }
    };
    r.push("cubical structure at order 6", Ok(format!("{} terms", s.len())), t.elapsed());
    for perm in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
        r.check(&format!("invariant under permutation {perm:?}"), || same_series(&s.permute(&perm), &s));
    }
    let v = x012_vars();
    for k in 0..3 {
        r.check(&format!("equals 1 at {} = 0", v[k]), || {
            let images: Vec<TSeries> = (0..3)
                .map(|i| {
                    if i == k {
                        TSeries::zero(&v, s.coeff_vars(), order)
                    } else {
                        TSeries::var(&v, s.coeff_vars(), &v[i], order).expect("declared")
                    }
                })
                .collect();
            let restricted = s.compose(&images).map_err(|e| e.to_string())?;
            same_series(&restricted, &TSeries::one(&v, s.coeff_vars(), order))
        });
    }
    r.finish()
}

/// Involution identities: composition and the multiplicative sequence at
/// `order`, the mod-2 and invariance statements at `mod2_order`.
pub fn involution_checks(order: u32, mod2_order: u32) -> Vec<CheckResult> {
    let mut r = Recorder::new(6);
    r.check(&format!("g_(-a)(g_a(x)) = x to order {order}"), || {
        let report = twisted_compose_check(order);
        let x = TSeries::var(report.twisted.vars(), report.twisted.coeff_vars(), "x", order).expect("x");
        same_series(&report.twisted, &x)
    });
    r.check(&format!("Q(x) Q^tau(g(x)) = 1 to order {order}"), || {
        let p = q_tau_product(order).map_err(|e| e.to_string())?;
        same_series(&p, &TSeries::one(p.vars(), p.coeff_vars(), order))
    });
    r.check(&format!("g = [-1] mod 2 to order {mod2_order}"), || {
        let g = gamma13_g(mod2_order).reduce_mod_ideal(Some(2), &[]).map_err(|e| e.to_string())?;
        let inv = formal_inverse(&WeierstrassCurve::gamma13(), mod2_order)
            .reduce_mod_ideal(Some(2), &[])
            .map_err(|e| e.to_string())?;
        same_series(&g, &inv)
    });
    r.check(&format!("x iota(x) invariant under x -> iota(x) to order {mod2_order}"), || {
        let c = WeierstrassCurve::general();
        let iota = formal_inverse(&c, mod2_order);
        let x = TSeries::var(iota.vars(), c.coeff_vars(), "x", mod2_order).expect("x");
        let root = &x * &iota;
        let moved = root.compose(&[iota]).map_err(|e| e.to_string())?;
        same_series(&moved, &root)
    });
    r.finish()
}

fn criterion_7() -> Vec<CheckResult> {
    let mut r = Recorder::new(7);
    r.check("theta product equals exponential form through x^9, q^5", || {
        let product = phi_product(10, 6, Shift::None);
        let exp = phi_exp(10, 6);
        if product.field() != Field::Rational {
            return Err(format!("product form lives over {}", product.field()));
        }
        match first_qx_difference(&product, &exp) {
            None => Ok(format!("{} terms agree", product.len())),
            Some(t) => Err(t),
        }
    });
    r.finish()
}

fn criterion_8() -> Vec<CheckResult> {
    let mut r = Recorder::new(8);
    let (xo, qo) = (6, 4);
    r.check("level-3 genus x(z) = z + O(z^2) through z^5, q^3", || {
        let x = level3_genus_x(xo, qo).map_err(|e| e.to_string())?;
        if x.field() != Field::Eisenstein {
            return Err(format!("genus lives over {}", x.field()));
        }
        for j in 0..qo {
            let c0 = x.coefficient(&[0], j);
            if !c0.is_zero() {
                return Err(format!("{c0}*q^{j}"));
            }
            let c1 = x.coefficient(&[1], j);
            let want = if j == 0 { Scalar::one() } else { Scalar::zero() };
            if c1 != want {
                return Err(format!("({c1})*z*q^{j}"));
            }
        }
        Ok(format!("{} terms, linear coefficient 1", x.len()))
    });
    r.check("psi(0) = 1", || {
        let psi = psi_series(xo, qo).map_err(|e| e.to_string())?;
        for j in 0..qo {
            let c = psi.coefficient(&[0], j);
            let want = if j == 0 { Scalar::one() } else { Scalar::zero() };
            if c != want {
                return Err(format!("({c})*q^{j}"));
            }
        }
        Ok("constant term 1".into())
    });
    r.finish()
}

/// `(p, m)` with `a1^p a3^m` of degree `2p + 6m = t` fixed by
/// `a1 -> -a1, a3 -> -a3`; found by enumerating every pair and testing the sign.
pub fn invariant_monomials(t: i64) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    let bound = t.max(0) as u32;
    for p in 0..=bound {
        for m in 0..=bound {
            let sign = if (p + m) % 2 == 0 { 1 } else { -1 };
            if 2 * p as i64 + 6 * m as i64 == t && sign == 1 {
                out.insert((p, m));
            }
        }
    }
    out
}

fn filtration_zero_row(pages: &Pages) -> Outcome {
    let w = *pages.window();
    let mut checked = 0;
    for k in -(w.kmax as i64)..=0 {
        let degree = Degree::new(k, 0);
        let cell = pages.cell(2, degree, 0).map_err(|e| e.to_string())?;
        let Some(cell) = cell else { continue };
        if !cell.determinate {
            continue;
        }
        let expected = invariant_monomials(-k);
        if let Some(g) = cell.generators.iter().find(|g| g.order.is_some()) {
            return Err(format!("torsion class {} in degree {degree}", g.element));
        }
        if cell.generators.len() != expected.len() {
            return Err(format!(
                "rank {} in degree {degree}, expected {}",
                cell.generators.len(),
                expected.len()
            ));
        }
        for &(p, m) in &expected {
            let mono = SsqMonomial::new(0, -(p as i64) - 3 * m as i64, p, m);
            let e = PageElement::monomial(Scalar::one(), mono);
            let status = pages.class_status(2, &e).map_err(|e| e.to_string())?;
            if status != ClassStatus::Free {
                return Err(format!("{e} is {status:?}"));
            }
        }
        let gens = pages.generators(2, degree, 0).map_err(|e| e.to_string())?.unwrap_or_default();
        for (g, _) in &gens {
            if let Some((m, _)) = g.terms().find(|(m, _)| !expected.contains(&(m.u1, m.u2))) {
                return Err(format!("generator {g} has term {m} outside the invariant span"));
            }
        }
        checked += 1;
    }
    if checked < 20 {
        return Err(format!("only {checked} determinate cells in the row"));
    }
    Ok(format!("{checked} cells match the invariant span"))
}

fn criterion_9() -> Vec<CheckResult> {
    let mut r = Recorder::new(9);
    let w = Window::default();
    for dr in DIFFERENTIAL_PAGES {
        r.check(&format!("d{dr} d{dr} = 0 on the window basis"), || {
            w.check_d_squared(dr).map(|n| format!("{n} basis elements")).map_err(|e| e.to_string())
        });
    }
    let t = Instant::now();
    let pages = match Pages::compute(&w) {
        Ok(p) => p,
        Err(e) => {
            r.push("pages of the window", Err(e.to_string()), t.elapsed());
            return r.finish();
        }
    };
    r.push("pages of the window", Ok(format!("{w:?}")), t.elapsed());
    for (name, e) in permanent_cycles() {
        r.check(&format!("{name} survives to E-infinity"), || {
            for dr in DIFFERENTIAL_PAGES {
                let d = d_r(dr, &e).map_err(|e| e.to_string())?;
                if !d.is_zero() {
                    return Err(format!("d{dr}({name}) = {d}"));
                }
            }
            match pages.class_status(8, &e).map_err(|e| e.to_string())? {
                s if s.is_nonzero_class() => Ok(format!("{s:?}")),
                s => Err(format!("{name} is {s:?} on E-infinity")),
            }
        });
    }
    r.check("a has order 2 on E2", || match pages.class_status(2, &PageElement::a()) {
        Ok(ClassStatus::Torsion(1)) => Ok("Z/2".into()),
        Ok(s) => Err(format!("a is {s:?}")),
        Err(e) => Err(e.to_string()),
    });
    r.check("filtration-0 row of E2 is the invariant span", || filtration_zero_row(&pages));
    r.finish()
}

/// Run criterion `n` (1 to 9) alone.
pub fn run_criterion(n: u32) -> Vec<CheckResult> {
    match n {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => involution_checks(10, 8),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        _ => Vec::new(),
    }
}

/// Every pinned check, in criterion order.
pub fn run_pinned_suite() -> SuiteReport {
    let start = Instant::now();
    let checks = (1..=9).flat_map(run_criterion).collect();
    SuiteReport { checks, seconds: start.elapsed().as_secs_f64() }
}

/// One line per check. Wall times are included only when asked for, so the
/// default output is byte-identical across runs.
pub fn to_text(report: &SuiteReport, timings: bool) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = write!(s, "{status} [{}] {}: {}", c.criterion, c.name, c.detail);
        if timings {
            let _ = write!(s, " ({:.2}s)", c.seconds);
        }
        s.push('\n');
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    let _ = write!(s, "{passed}/{} checks passed", report.checks.len());
    if timings {
        let _ = write!(s, " in {:.2}s", report.seconds);
    }
    s.push('\n');
    s
}

pub fn to_json(report: &SuiteReport, timings: bool) -> String {
    let mut v = serde_json::to_value(report).expect("serializable");
    if !timings {
        if let Some(obj) = v.as_object_mut() {
            obj.remove("seconds");
        }
        for c in v["checks"].as_array_mut().into_iter().flatten() {
            if let Some(obj) = c.as_object_mut() {
                obj.remove("seconds");
            }
        }
    }
    v["passed"] = json!(report.passed());
    crate::commands::pretty(&v)
}
