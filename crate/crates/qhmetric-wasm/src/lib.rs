//! Browser bindings: the interactive demo page calls these three entry
//! points and gets JSON strings back. Precision is capped for
//! interactivity; the CLI is the tool for full-precision work.
//!
//! Every function returns `{"error": "..."}` instead of throwing, so the
//! page can surface bad inputs inline.

use std::collections::HashMap;

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use qhmetric::dieudonne::solve_metric;
use qhmetric::error::{Error, Result};
use qhmetric::gegenbauer::secular_roots;
use qhmetric::hamiltonian::{build_hamiltonian, Convention};
use qhmetric::positivity::{scan_domain, ParameterLine};
use qhmetric::rational::{parse_rational, rational_to_f64, render_rational, Rational};
use qhmetric::ratfunc::{free_symbols, parse_ratfunc, RatFunc};

const MAX_N: usize = 12;
const MAX_GRID: usize = 1201;
const DEMO_DIGITS: u32 = 25;

fn err_json(e: &Error) -> String {
    json!({ "error": e.to_string() }).to_string()
}

fn check_n(n: u32) -> Result<usize> {
    let n = n as usize;
    if n < 1 || n > MAX_N {
        return Err(Error::precondition(
            "N",
            format!("demo supports 1 <= N <= {MAX_N}"),
        ));
    }
    Ok(n)
}

/// Hamiltonian entries (exact text + numeric at `a`) and the energy
/// spectrum at alpha = a.
#[wasm_bindgen]
pub fn model_json(n: u32, a: &str, convention: &str) -> String {
    match model_impl(n, a, convention) {
        Ok(v) => v.to_string(),
        Err(e) => err_json(&e),
    }
}

fn model_impl(n: u32, a: &str, convention: &str) -> Result<Value> {
    let n = check_n(n)?;
    let conv = Convention::parse(convention)?;
    let a0 = parse_rational(a, "a")?;
    let h = build_hamiltonian(n, conv)?;
    let numeric = h.instantiate(&a0)?;
    let spectrum = secular_roots(n, &a0, DEMO_DIGITS)?;
    let floats: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| rational_to_f64(numeric.get(i, j))).collect())
        .collect();
    Ok(json!({
        "N": n,
        "a": render_rational(&a0),
        "convention": conv.as_str(),
        "entries": h.render_rows(),
        "numeric": floats,
        "spectrum": spectrum.roots.iter().map(|r| r.to_f64()).collect::<Vec<_>>(),
        "spectrum_text": spectrum.roots.iter().map(|r| r.to_decimal(20)).collect::<Vec<_>>(),
    }))
}

/// Exact symbolic metric for a comma-separated first row (each entry a
/// rational function of `a`, optionally times one free symbol).
#[wasm_bindgen]
pub fn metric_json(n: u32, convention: &str, first_row: &str) -> String {
    match metric_impl(n, convention, first_row) {
        Ok(v) => v.to_string(),
        Err(e) => err_json(&e),
    }
}

fn metric_impl(n: u32, convention: &str, first_row: &str) -> Result<Value> {
    let n = check_n(n)?;
    let conv = Convention::parse(convention)?;
    let items: Vec<&str> = first_row.split(',').collect();
    if items.len() != n {
        return Err(Error::precondition(
            "first_row",
            format!("expected {n} entries, got {}", items.len()),
        ));
    }
    // split each entry into (optional symbol, coefficient)
    let mut parsed: Vec<(Option<String>, RatFunc)> = Vec::with_capacity(n);
    for item in &items {
        let item = item.trim();
        let symbols = free_symbols(item, "first_row")?;
        match symbols.len() {
            0 => parsed.push((None, parse_ratfunc(item, "first_row", &HashMap::new())?)),
            1 => {
                let sym = symbols.into_iter().next().unwrap();
                let eval_at = |v: i64| -> Result<RatFunc> {
                    let mut binds = HashMap::new();
                    binds.insert(sym.clone(), Rational::new(v.into(), 1.into()));
                    parse_ratfunc(item, "first_row", &binds)
                };
                let at0 = eval_at(0)?;
                let at1 = eval_at(1)?;
                let at2 = eval_at(2)?;
                if !at0.is_zero() || at2 != at1.mul(&RatFunc::from_i64(2)) {
                    return Err(Error::precondition(
                        "first_row",
                        format!("entry `{item}` must be linear in `{sym}`"),
                    ));
                }
                parsed.push((Some(sym), at1));
            }
            _ => {
                return Err(Error::precondition(
                    "first_row",
                    format!("entry `{item}` uses more than one symbol"),
                ))
            }
        }
    }
    let const_row: Vec<RatFunc> = parsed
        .iter()
        .map(|(s, f)| if s.is_none() { f.clone() } else { RatFunc::zero() })
        .collect();
    let theta_const = solve_metric(n, conv, &const_row)?;
    let mut symbols: Vec<String> = Vec::new();
    for (s, _) in &parsed {
        if let Some(s) = s {
            if !symbols.contains(s) {
                symbols.push(s.clone());
            }
        }
    }
    let mut per_symbol = Vec::new();
    for s in &symbols {
        let row: Vec<RatFunc> = parsed
            .iter()
            .map(|(sym, f)| {
                if sym.as_deref() == Some(s.as_str()) {
                    f.clone()
                } else {
                    RatFunc::zero()
                }
            })
            .collect();
        per_symbol.push(solve_metric(n, conv, &row)?);
    }
    // entries as display strings: const + coeff*sym terms
    let entries: Vec<Vec<String>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut parts: Vec<String> = Vec::new();
                    let c = theta_const.get(i, j);
                    if !c.is_zero() {
                        parts.push(c.render());
                    }
                    for (s, m) in symbols.iter().zip(&per_symbol) {
                        let coeff = m.get(i, j);
                        if coeff.is_zero() {
                            continue;
                        }
                        if coeff.is_one() {
                            parts.push(s.clone());
                        } else {
                            parts.push(format!("({})*{}", coeff.render(), s));
                        }
                    }
                    if parts.is_empty() {
                        "0".to_string()
                    } else {
                        parts.join(" + ")
                    }
                })
                .collect()
        })
        .collect();
    Ok(json!({
        "N": n,
        "convention": conv.as_str(),
        "entries": entries,
    }))
}

/// Eigenvalue curves of Theta(kappa(t)) along the toy or default line, with
/// exact positivity intervals, shaped for plotting.
#[wasm_bindgen]
pub fn curves_json(
    n: u32,
    a: &str,
    line_kind: &str,
    t_min: f64,
    t_max: f64,
    grid: u32,
    convention: &str,
) -> String {
    match curves_impl(n, a, line_kind, t_min, t_max, grid, convention) {
        Ok(v) => v.to_string(),
        Err(e) => err_json(&e),
    }
}

fn curves_impl(
    n: u32,
    a: &str,
    line_kind: &str,
    t_min: f64,
    t_max: f64,
    grid: u32,
    convention: &str,
) -> Result<Value> {
    let n = check_n(n)?;
    let conv = Convention::parse(convention)?;
    let a0 = parse_rational(a, "a")?;
    let grid = grid as usize;
    if grid > MAX_GRID {
        return Err(Error::precondition(
            "grid",
            format!("demo supports at most {MAX_GRID} grid points"),
        ));
    }
    let lo = qhmetric::rational::rational_from_f64(t_min)
        .ok_or_else(|| Error::precondition("range", "t_min must be finite"))?;
    let hi = qhmetric::rational::rational_from_f64(t_max)
        .ok_or_else(|| Error::precondition("range", "t_max must be finite"))?;
    let line = match line_kind {
        "toy" => ParameterLine::toy(n, &a0, lo, hi, grid)?,
        "default" => ParameterLine::default_line(n, &a0, lo, hi, grid)?,
        other => {
            return Err(Error::precondition(
                "line",
                format!("unknown line `{other}` (toy|default)"),
            ))
        }
    };
    let refine_tol = parse_rational("1e-10", "refine_tol")?;
    let scan = scan_domain(n, conv, &a0, &line, DEMO_DIGITS, &refine_tol)?;
    let ts: Vec<f64> = scan.ts.iter().map(rational_to_f64).collect();
    // per-curve layout
    let mut curves = vec![Vec::with_capacity(ts.len()); n];
    for point in &scan.curves {
        for (j, v) in point.iter().enumerate() {
            curves[j].push(v.to_f64());
        }
    }
    Ok(json!({
        "N": n,
        "a": render_rational(&a0),
        "convention": conv.as_str(),
        "line": line_kind,
        "t": ts,
        "curves": curves,
        "intervals": scan
            .intervals
            .iter()
            .map(|iv| vec![rational_to_f64(&iv.lo), rational_to_f64(&iv.hi)])
            .collect::<Vec<_>>(),
        "open_at_edge": scan
            .intervals
            .iter()
            .map(|iv| vec![iv.lo_open_at_edge, iv.hi_open_at_edge])
            .collect::<Vec<_>>(),
        "digits": DEMO_DIGITS,
    }))
}
