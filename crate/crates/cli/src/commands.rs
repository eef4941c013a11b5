//! Handlers for the computational subcommands.

use std::fmt::Write as _;

use cubicalforms_core::coeffring::Monomial;
use cubicalforms_core::cubical::{appendix_b_pipeline, cubical_structure, CubicalError, DEFAULT_ORDER};
use cubicalforms_core::involution::{gamma13_g, pontryagin_series};
use cubicalforms_core::qchar::{
    character_product, level3_genus_x, phi_exp, phi_product, psi_series, QXSeries, Shift,
};
use cubicalforms_core::series::TSeries;
use cubicalforms_core::ssq::{e_infinity_chart, Pages, SsqError, Window};
use cubicalforms_core::weierstrass::{fgl, formal_inverse, n_series, z_series, WeierstrassCurve, CURVE_VARS};
use serde_json::{json, Value};

use crate::verify;
use crate::{
    compute, CliError, CubicalCmd, CurveArgs, Format, InvolutionCmd, Outcome, PhiForm, QOrders, QcharCmd,
    ShiftArg, SsqCmd, WeierstrassCmd, WindowArgs,
};

/// Coefficient ideal from `--mod`: an optional prime followed by curve
/// coefficients sent to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Ideal {
    pub prime: Option<u64>,
    pub killed: Vec<String>,
}

impl Ideal {
    pub(crate) fn parse(spec: &str) -> Result<Ideal, CliError> {
        let mut prime = None;
        let mut killed = Vec::new();
        for (i, raw) in spec.split(',').enumerate() {
            let item = raw.trim();
            if item.is_empty() {
                return Err(CliError::Usage(format!("empty entry in --mod `{spec}`")));
            }
            if let Ok(p) = item.parse::<u64>() {
                if i != 0 || p < 2 {
                    return Err(CliError::Usage(format!(
                        "--mod: `{item}` must be a modulus >= 2 in first position"
                    )));
                }
                prime = Some(p);
            } else if CURVE_VARS.contains(&item) {
                killed.push(item.to_string());
            } else {
                return Err(CliError::Usage(format!(
                    "--mod: `{item}` is neither a modulus nor one of {}",
                    CURVE_VARS.join(", ")
                )));
            }
        }
        Ok(Ideal { prime, killed })
    }

    pub(crate) fn apply(&self, s: &TSeries) -> Result<TSeries, CliError> {
        let killed: Vec<&str> = self.killed.iter().map(String::as_str).collect();
        s.reduce_mod_ideal(self.prime, &killed).map_err(compute)
    }

    fn describe(&self) -> String {
        let mut parts: Vec<String> = self.prime.iter().map(u64::to_string).collect();
        parts.extend(self.killed.iter().cloned());
        format!("({})", parts.join(","))
    }
}

fn ideal_of(spec: Option<&str>) -> Result<Option<Ideal>, CliError> {
    spec.map(Ideal::parse).transpose()
}

fn positive(name: &str, n: u32) -> Result<u32, CliError> {
    if n == 0 {
        return Err(CliError::Usage(format!("{name} must be positive")));
    }
    Ok(n)
}

fn curve_of(args: &CurveArgs) -> WeierstrassCurve {
    if args.gamma13 {
        WeierstrassCurve::gamma13()
    } else {
        WeierstrassCurve::general()
    }
}

pub(crate) fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn series_json(command: &str, curve: &WeierstrassCurve, ideal: Option<&Ideal>, s: &TSeries) -> Value {
    json!({
        "command": command,
        "curve": curve.label(),
        "ideal": ideal.map(Ideal::describe),
        "series": s.to_record(),
    })
}

fn render_series(
    command: &str,
    curve: &WeierstrassCurve,
    ideal: Option<&Ideal>,
    s: &TSeries,
    format: Format,
) -> String {
    match format {
        Format::Json => pretty(&series_json(command, curve, ideal, s)),
        _ => format!("{s}\n"),
    }
}

/// Compute a series on the selected curve, reduce it, and render it.
fn curve_series(
    command: &str,
    args: &CurveArgs,
    default_order: u32,
    format: Format,
    f: impl FnOnce(&WeierstrassCurve, u32) -> Result<TSeries, CliError>,
) -> Result<Outcome, CliError> {
    let order = positive("--order", args.order.unwrap_or(default_order))?;
    let ideal = ideal_of(args.modulus.as_deref())?;
    let curve = curve_of(args);
    let mut s = f(&curve, order)?;
    if let Some(i) = &ideal {
        s = i.apply(&s)?;
    }
    Ok(Outcome::ok(render_series(command, &curve, ideal.as_ref(), &s, format)))
}

pub(crate) fn weierstrass(cmd: &WeierstrassCmd, format: Format) -> Result<Outcome, CliError> {
    match cmd {
        WeierstrassCmd::Fgl(a) => curve_series("weierstrass fgl", a, 4, format, |c, n| Ok(fgl(c, n))),
        WeierstrassCmd::Zseries(a) => {
            curve_series("weierstrass zseries", a, 7, format, |c, n| Ok(z_series(c, n)))
        }
        WeierstrassCmd::Inverse(a) => {
            curve_series("weierstrass inverse", a, 6, format, |c, n| Ok(formal_inverse(c, n)))
        }
        WeierstrassCmd::Nseries { n, curve } => {
            let k = *n;
            curve_series("weierstrass nseries", curve, 5, format, move |c, order| Ok(n_series(c, k, order)))
        }
    }
}

/// The degree-3 and degree-4 coefficient families of `r_U`.
fn families(s: &TSeries) -> Result<(Vec<Value>, Option<String>), CliError> {
    let groups: [(u32, &[[u32; 3]]); 2] = [(3, &[[1, 1, 1]]), (4, &[[2, 1, 1], [1, 2, 1], [1, 1, 2]])];
    let mut out = Vec::new();
    let mut mismatch = None;
    for (degree, exps) in groups {
        if s.order() <= degree {
            continue;
        }
        let mut names = Vec::new();
        let mut coeffs = Vec::new();
        for e in exps {
            let mut name = String::new();
            Monomial::from_exps(e).write(s.vars().names(), &mut name);
            names.push(name);
            coeffs.push(s.coefficient(e).map_err(compute)?.to_string());
        }
        if coeffs.iter().any(|c| *c != coeffs[0]) && mismatch.is_none() {
            mismatch = Some(format!("degree-{degree} family is not symmetric: {}", coeffs.join(" vs ")));
        }
        out.push(json!({ "degree": degree, "monomials": names, "coefficient": coeffs[0] }));
    }
    Ok((out, mismatch))
}

fn appendix_b_outcome(order: u32, format: Format) -> Result<Outcome, CliError> {
    let report = match appendix_b_pipeline(order) {
        Ok(r) => r,
        Err(CubicalError::PinnedValueMismatch { check, term }) => {
            let body = match format {
                Format::Json => pretty(&json!({ "check": check, "passed": false, "term": term })),
                _ => format!("FAIL {check}: {term}\n"),
            };
            return Ok(Outcome { body, mismatch: Some(format!("{check}: {term}")) });
        }
        Err(e) => return Err(compute(e)),
    };
    let body = match format {
        Format::Json => pretty(&json!({
            "order": report.order,
            "w": report.w,
            "numerator_lowest": report.numerator_lowest,
            "denominator_lowest": report.denominator_lowest,
            "v": report.v,
            "v_over_w": report.v_over_w,
            "r_u_leading": report.r_u_leading,
            "r_u": report.r_u,
            "checks": report.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "w = {}", report.w);
            let _ = writeln!(s, "numerator lowest form = {}", report.numerator_lowest);
            let _ = writeln!(s, "denominator lowest form = {}", report.denominator_lowest);
            let _ = writeln!(s, "v = {}", report.v);
            let _ = writeln!(s, "v/w = {}", report.v_over_w);
            let _ = writeln!(s, "1 + v/w = {}", report.r_u_leading);
            let _ = writeln!(s, "r_U = {}", report.r_u);
            for c in &report.checks {
                let _ = writeln!(s, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            s
        }
    };
    Ok(Outcome::ok(body))
}

pub(crate) fn cubical(cmd: &CubicalCmd, format: Format) -> Result<Outcome, CliError> {
    match cmd {
        CubicalCmd::RU(a) => {
            let order = positive("--order", a.order.unwrap_or(DEFAULT_ORDER))?;
            let ideal = ideal_of(a.modulus.as_deref())?;
            let curve = curve_of(a);
            let mut s = cubical_structure(&curve, order).map_err(compute)?;
            if let Some(i) = &ideal {
                s = i.apply(&s)?;
            }
            if format != Format::Json {
                return Ok(Outcome::ok(format!("{s}\n")));
            }
            let (fams, mismatch) = families(&s)?;
            let mut v = series_json("cubical rU", &curve, ideal.as_ref(), &s);
            v["families"] = Value::Array(fams);
            Ok(Outcome { body: pretty(&v), mismatch })
        }
        CubicalCmd::AppendixB { order } => appendix_b_outcome(positive("--order", *order)?, format),
    }
}

pub(crate) fn involution(cmd: &InvolutionCmd, format: Format) -> Result<Outcome, CliError> {
    match cmd {
        InvolutionCmd::G { order, modulus } => {
            let ideal = ideal_of(modulus.as_deref())?;
            let mut g = gamma13_g(positive("--order", *order)?);
            if let Some(i) = &ideal {
                g = i.apply(&g)?;
            }
            let curve = WeierstrassCurve::gamma13();
            Ok(Outcome::ok(render_series("involution g", &curve, ideal.as_ref(), &g, format)))
        }
        InvolutionCmd::Check { order } => {
            let order = positive("--order", *order)?;
            let checks = verify::involution_checks(order, order);
            let report = verify::SuiteReport::from_checks(checks);
            let body = match format {
                Format::Json => verify::to_json(&report, false),
                _ => verify::to_text(&report, false),
            };
            Ok(Outcome { body, mismatch: report.first_failure() })
        }
        InvolutionCmd::Pontryagin { m, t_order, curve } => {
            let t_order = positive("--t-order", *t_order)?;
            let m = *m;
            curve_series("involution pontryagin", curve, 6, format, move |c, order| {
                pontryagin_series(c, m, order, t_order).map_err(compute)
            })
        }
    }
}

fn render_qx(command: &str, s: &QXSeries, format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({ "command": command, "series": s.to_record() })),
        _ => format!("{s}\n"),
    }
}

fn orders(o: &QOrders) -> Result<(u32, u32), CliError> {
    Ok((positive("--x-order", o.x_order)?, positive("--q-order", o.q_order)?))
}

pub(crate) fn qchar(cmd: &QcharCmd, format: Format) -> Result<Outcome, CliError> {
    let (name, s) = match cmd {
        QcharCmd::Phi { orders: o, form, shift } => {
            let (x, q) = orders(o)?;
            let s = match (form, shift) {
                (PhiForm::Product, ShiftArg::None) => phi_product(x, q, Shift::None),
                (PhiForm::Product, ShiftArg::MinusOmega) => phi_product(x, q, Shift::MinusOmega),
                (PhiForm::Exp, ShiftArg::None) => phi_exp(x, q),
                (PhiForm::Exp, ShiftArg::MinusOmega) => {
                    return Err(CliError::Usage("--form exp only supports --shift none".into()))
                }
            };
            ("qchar phi", s)
        }
        QcharCmd::Psi { orders: o } => {
            let (x, q) = orders(o)?;
            ("qchar psi", psi_series(x, q).map_err(compute)?)
        }
        QcharCmd::Genus { orders: o } => {
            let (x, q) = orders(o)?;
            ("qchar genus", level3_genus_x(x, q).map_err(compute)?)
        }
        QcharCmd::Character { roots, orders: o } => {
            let (x, q) = orders(o)?;
            let names: Vec<String> = (1..=*roots).map(|i| format!("x{i}")).collect();
            ("qchar character", character_product(&names, x, q).map_err(compute)?)
        }
    };
    Ok(Outcome::ok(render_qx(name, &s, format)))
}

fn window(w: &WindowArgs) -> Window {
    Window { kmax: w.kmax, filtration_max: w.filtration_max, u2_max: w.u2_max }
}

fn ssq_error(e: SsqError) -> CliError {
    match e {
        SsqError::WindowTooSmall(_) | SsqError::MalformedElement(_) => CliError::Usage(e.to_string()),
        other => compute(other),
    }
}

fn generator_list(gens: &[cubicalforms_core::ssq::Generator]) -> String {
    gens.iter()
        .map(|g| match g.order {
            None => format!("{} [free]", g.element),
            Some(e) => format!("{} [Z/{}]", g.element, 1u64 << e.min(63)),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn ssq(cmd: &SsqCmd, format: Format) -> Result<Outcome, CliError> {
    match cmd {
        SsqCmd::Chart { window: w } => {
            let chart = e_infinity_chart(&window(w)).map_err(ssq_error)?;
            let body = match format {
                Format::Json => pretty(&serde_json::to_value(&chart).expect("serializable")),
                Format::AsciiChart => chart.to_ascii(),
                Format::Text => {
                    let mut s = String::new();
                    for c in &chart.cells {
                        let gens = if c.determinate { generator_list(&c.generators) } else { "?".into() };
                        let _ = writeln!(s, "stem {} filtration {}: {}", c.stem, c.filtration, gens);
                    }
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
        SsqCmd::Page { page, integral, window: w } => {
            let pages = Pages::compute(&window(w)).map_err(ssq_error)?;
            let p = pages.presentation(*page, *integral).map_err(ssq_error)?;
            let body = match format {
                Format::Json => pretty(&serde_json::to_value(&p).expect("serializable")),
                _ => {
                    let mut s = String::new();
                    for c in &p.cells {
                        let gens = if c.determinate { generator_list(&c.generators) } else { "?".into() };
                        let _ = writeln!(s, "degree {} filtration {}: {}", c.degree, c.filtration, gens);
                    }
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
    }
}
