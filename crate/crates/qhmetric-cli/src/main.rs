//! Command-line front end: exact Hamiltonians and metrics, spectra,
//! positivity domains, eigenvalue curves, hermitization, and the
//! acceptance-suite runner.
//!
//! Exact quantities enter and leave as `p/q` strings or canonical
//! rational-function text; numeric payloads always carry the decimal digit
//! count they were computed with. Outputs are deterministic for identical
//! configurations.

mod svg;

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qhmetric::bigfloat::bits_for_digits;
use qhmetric::dieudonne::{pseudometric_basis, residual, solve_metric};
use qhmetric::error::Error;
use qhmetric::gegenbauer::secular_roots;
use qhmetric::hamiltonian::{build_hamiltonian, instantiate, Convention};
use qhmetric::matrix::RatFuncMatrix;
use qhmetric::positivity::{
    eigencurves, hermitize, scan_domain, sym_eigen, CurveTable, ParameterLine,
};
use qhmetric::rational::{parse_rational, render_rational, Rational};
use qhmetric::ratfunc::{free_symbols, parse_ratfunc, RatFunc};
use qhmetric::verify;

const SCHEMA: &str = "v1";
/// Significant digits for plot-grade numeric output (curves, intervals).
const PLOT_DIGITS: u32 = 17;

#[derive(Parser)]
#[command(
    name = "qhmetric",
    version,
    about = "Hilbert-space metrics for Gegenbauer quantum lattices: exact Dieudonne solver, spectra, positivity domains"
)]
struct Cli {
    /// Decimal digits of working precision on numeric paths
    #[arg(long, global = true, env = "QHMETRIC_DIGITS", default_value_t = 50)]
    digits: u32,

    /// Write the output to a file instead of stdout
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Displayed,
    Recurrence,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Convention {
        match c {
            ConventionArg::Displayed => Convention::Displayed,
            ConventionArg::Recurrence => Convention::Recurrence,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct LineArgs {
    /// Parameter line through the metric family
    #[arg(long, default_value = "toy")]
    line: String,

    /// Comma-separated first-row base point (line=custom)
    #[arg(long, allow_hyphen_values = true)]
    base: Option<String>,

    /// Comma-separated direction vector (line=custom)
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,

    /// Scan range lo:hi
    #[arg(long, default_value = "-1:1", allow_hyphen_values = true)]
    range: String,

    /// Number of grid points
    #[arg(long, default_value_t = 201)]
    grid: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Hamiltonian entries, optionally instantiated at a coupling
    Hamiltonian {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum, default_value = "displayed")]
        convention: ConventionArg,
        /// Coupling a as p/q or decimal
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Allow instantiation at a <= 0
        #[arg(long, default_value_t = false)]
        force_nonpositive: bool,
    },
    /// Bound-state energies: roots of the N-th Gegenbauer polynomial
    Spectrum {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Solve the quasi-Hermiticity equation for a given first row
    Metric {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum, default_value = "displayed")]
        convention: ConventionArg,
        /// Comma-separated first-row entries; each is a rational function
        /// of a, optionally times one free symbol (k, b, 2*g*a, ...)
        #[arg(long, allow_hyphen_values = true)]
        first_row: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// The N basis pseudometrics with unit first rows
    Basis {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum, default_value = "displayed")]
        convention: ConventionArg,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// H^T Theta - Theta H for the metric built from a first row
    Residual {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum, default_value = "displayed")]
        convention: ConventionArg,
        #[arg(long, allow_hyphen_values = true)]
        first_row: String,
    },
    /// Positivity intervals of Theta(kappa(t)) along a parameter line
    Domain {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum, default_value = "displayed")]
        convention: ConventionArg,
        #[command(flatten)]
        line: LineArgs,
        /// Boundary bisection tolerance
        #[arg(long, default_value = "1e-12")]
        refine_tol: String,
    },
    /// Eigenvalue curves p_1..p_N along a parameter line
    Curves {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum, default_value = "displayed")]
        convention: ConventionArg,
        #[command(flatten)]
        line: LineArgs,
        /// Tabulate ln p_j instead of p_j (display transform only)
        #[arg(long, default_value_t = false)]
        log: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: CurveFormat,
    },
    /// Symmetric-root similarity transform h = Omega H Omega^{-1}
    Hermitize {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum, default_value = "displayed")]
        convention: ConventionArg,
        /// Numeric first row of Theta (rational functions of a, no symbols)
        #[arg(long, allow_hyphen_values = true)]
        first_row: String,
    },
    /// Run the full acceptance suite
    Verify {
        /// Run a single criterion (1..=8)
        #[arg(long)]
        only: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let digits = cli.digits;
    if digits < 15 {
        eprintln!("error: digits must be at least 15");
        return ExitCode::from(2);
    }
    let result = run(&cli.command, digits);
    match result {
        Ok(RunOutput::Text(text)) => match write_output(&cli.output, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Ok(RunOutput::VerifyFailed(text)) => {
            let _ = write_output(&cli.output, &text);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Indeterminate { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

enum RunOutput {
    Text(String),
    VerifyFailed(String),
}

fn write_output(path: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())
        }
    }
}

fn run(command: &Command, digits: u32) -> Result<RunOutput, Error> {
    match command {
        Command::Hamiltonian {
            n,
            convention,
            a,
            force_nonpositive,
        } => {
            let conv: Convention = (*convention).into();
            let h = build_hamiltonian(*n, conv)?;
            let mut doc = json_base("hamiltonian");
            doc.insert("N".into(), json!(n));
            doc.insert("convention".into(), json!(conv.as_str()));
            doc.insert("entries".into(), json!(h.render_rows()));
            doc.insert("symmetric".into(), json!(h.is_symmetric()));
            if let Some(a_str) = a {
                let a0 = parse_rational(a_str, "a")?;
                let numeric = instantiate(&h, &a0, digits, *force_nonpositive)?;
                doc.insert("a".into(), json!(render_rational(&a0)));
                doc.insert("digits".into(), json!(digits));
                doc.insert("numeric".into(), json!(numeric.render_rows(digits)));
            }
            Ok(RunOutput::Text(to_pretty(doc)))
        }
        Command::Spectrum { n, alpha } => {
            let alpha = parse_rational(alpha, "alpha")?;
            let spectrum = secular_roots(*n, &alpha, digits)?;
            let mut doc = json_base("spectrum");
            doc.insert("N".into(), json!(n));
            doc.insert("alpha".into(), json!(render_rational(&alpha)));
            doc.insert("digits".into(), json!(digits));
            doc.insert(
                "roots".into(),
                json!(spectrum
                    .roots
                    .iter()
                    .map(|r| r.to_decimal(digits))
                    .collect::<Vec<_>>()),
            );
            Ok(RunOutput::Text(to_pretty(doc)))
        }
        Command::Metric {
            n,
            convention,
            first_row,
            a,
        } => {
            let conv: Convention = (*convention).into();
            let row = parse_first_row(first_row, *n)?;
            let mut doc = json_base("metric");
            doc.insert("N".into(), json!(n));
            doc.insert("convention".into(), json!(conv.as_str()));
            doc.insert("first_row".into(), json!(first_row.split(',').collect::<Vec<_>>()));

            // by linearity: Theta = Theta(const part) + sum_s s * Theta(row_s)
            let const_row: Vec<RatFunc> = row
                .iter()
                .map(|(sym, f)| {
                    if sym.is_none() {
                        f.clone()
                    } else {
                        RatFunc::zero()
                    }
                })
                .collect();
            let theta_const = solve_metric(*n, conv, &const_row)?;
            let mut symbols: Vec<String> = Vec::new();
            for (sym, _) in &row {
                if let Some(s) = sym {
                    if !symbols.contains(s) {
                        symbols.push(s.clone());
                    }
                }
            }
            let mut theta_syms: Vec<(String, RatFuncMatrix)> = Vec::new();
            for s in &symbols {
                let srow: Vec<RatFunc> = row
                    .iter()
                    .map(|(sym, f)| {
                        if sym.as_deref() == Some(s.as_str()) {
                            f.clone()
                        } else {
                            RatFunc::zero()
                        }
                    })
                    .collect();
                theta_syms.push((s.clone(), solve_metric(*n, conv, &srow)?));
            }
            let entries: Vec<Vec<Value>> = (0..*n)
                .map(|i| {
                    (0..*n)
                        .map(|j| {
                            let mut obj = Map::new();
                            obj.insert(
                                "const".into(),
                                json!(theta_const.get(i, j).render()),
                            );
                            let mut coeffs = Map::new();
                            for (s, m) in &theta_syms {
                                let c = m.get(i, j);
                                if !c.is_zero() {
                                    coeffs.insert(s.clone(), json!(c.render()));
                                }
                            }
                            if !coeffs.is_empty() {
                                obj.insert("coeffs".into(), Value::Object(coeffs));
                            }
                            Value::Object(obj)
                        })
                        .collect()
                })
                .collect();
            doc.insert("entries".into(), json!(entries));

            if let Some(a_str) = a {
                if !symbols.is_empty() {
                    return Err(Error::precondition(
                        "a",
                        "numeric instantiation requires a symbol-free first row",
                    ));
                }
                let a0 = parse_rational(a_str, "a")?;
                let numeric = theta_const.instantiate(&a0)?;
                doc.insert("a".into(), json!(render_rational(&a0)));
                doc.insert("digits".into(), json!(digits));
                doc.insert(
                    "numeric".into(),
                    json!(numeric.to_numeric(bits_for_digits(digits)).render_rows(digits)),
                );
            }
            Ok(RunOutput::Text(to_pretty(doc)))
        }
        Command::Basis { n, convention, a } => {
            let conv: Convention = (*convention).into();
            let sol = pseudometric_basis(*n, conv)?;
            let mut doc = json_base("basis");
            doc.insert("N".into(), json!(n));
            doc.insert("convention".into(), json!(conv.as_str()));
            doc.insert("parameters".into(), json!(sol.parameter_names));
            doc.insert(
                "basis".into(),
                json!(sol
                    .basis
                    .iter()
                    .map(|p| p.render_rows())
                    .collect::<Vec<_>>()),
            );
            if let Some(a_str) = a {
                let a0 = parse_rational(a_str, "a")?;
                let numeric: Result<Vec<_>, Error> = sol
                    .basis
                    .iter()
                    .map(|p| {
                        Ok(p.instantiate(&a0)?
                            .to_numeric(bits_for_digits(digits))
                            .render_rows(digits))
                    })
                    .collect();
                doc.insert("a".into(), json!(render_rational(&a0)));
                doc.insert("digits".into(), json!(digits));
                doc.insert("numeric".into(), json!(numeric?));
            }
            Ok(RunOutput::Text(to_pretty(doc)))
        }
        Command::Residual {
            n,
            convention,
            first_row,
        } => {
            let conv: Convention = (*convention).into();
            let row = parse_first_row(first_row, *n)?;
            if row.iter().any(|(sym, _)| sym.is_some()) {
                return Err(Error::precondition(
                    "first_row",
                    "residual needs a symbol-free first row",
                ));
            }
            let values: Vec<RatFunc> = row.into_iter().map(|(_, f)| f).collect();
            let theta = solve_metric(*n, conv, &values)?;
            let h = build_hamiltonian(*n, conv)?;
            let r = residual(&h, &theta)?;
            let mut doc = json_base("residual");
            doc.insert("N".into(), json!(n));
            doc.insert("convention".into(), json!(conv.as_str()));
            doc.insert("is_zero".into(), json!(r.is_zero()));
            doc.insert("entries".into(), json!(r.render_rows()));
            doc.insert("theta".into(), json!(theta.render_rows()));
            Ok(RunOutput::Text(to_pretty(doc)))
        }
        Command::Domain {
            n,
            a,
            convention,
            line,
            refine_tol,
        } => {
            let conv: Convention = (*convention).into();
            let a0 = parse_rational(a, "a")?;
            let pline = build_line(line, *n, &a0)?;
            let tol = parse_rational(refine_tol, "refine_tol")?;
            let scan = scan_domain(*n, conv, &a0, &pline, digits, &tol)?;
            let mut doc = json_base("domain");
            doc.insert("N".into(), json!(n));
            doc.insert("convention".into(), json!(conv.as_str()));
            doc.insert("a0".into(), json!(render_rational(&a0)));
            doc.insert("line".into(), line_json(&pline));
            doc.insert("digits".into(), json!(digits));
            doc.insert("refine_tol".into(), json!(render_rational(&tol)));
            doc.insert(
                "intervals".into(),
                json!(scan
                    .intervals
                    .iter()
                    .map(|iv| vec![
                        decimal_of_rational(&iv.lo),
                        decimal_of_rational(&iv.hi)
                    ])
                    .collect::<Vec<_>>()),
            );
            doc.insert(
                "open_at_edge".into(),
                json!(scan
                    .intervals
                    .iter()
                    .map(|iv| vec![iv.lo_open_at_edge, iv.hi_open_at_edge])
                    .collect::<Vec<_>>()),
            );
            Ok(RunOutput::Text(to_pretty(doc)))
        }
        Command::Curves {
            n,
            a,
            convention,
            line,
            log,
            format,
        } => {
            let conv: Convention = (*convention).into();
            let a0 = parse_rational(a, "a")?;
            let pline = build_line(line, *n, &a0)?;
            let table = eigencurves(*n, conv, &a0, &pline, digits, *log)?;
            let text = match format {
                CurveFormat::Csv => curves_csv(&table, *n),
                CurveFormat::Json => curves_json(&table, *n, conv, &a0, &pline),
                CurveFormat::Svg => {
                    svg::curves_svg(&table, *n, &render_rational(&a0), "")
                }
            };
            Ok(RunOutput::Text(text))
        }
        Command::Hermitize {
            n,
            a,
            convention,
            first_row,
        } => {
            let conv: Convention = (*convention).into();
            let a0 = parse_rational(a, "a")?;
            let row = parse_first_row(first_row, *n)?;
            if row.iter().any(|(sym, _)| sym.is_some()) {
                return Err(Error::precondition(
                    "first_row",
                    "hermitize needs a symbol-free first row",
                ));
            }
            let values: Vec<RatFunc> = row.into_iter().map(|(_, f)| f).collect();
            let theta = solve_metric(*n, conv, &values)?;
            let theta_rat = theta.instantiate(&a0)?;
            let mut theta_num = theta_rat.to_numeric(bits_for_digits(digits));
            theta_num.set_symmetric_flag(theta.is_symmetric());
            let h = build_hamiltonian(*n, conv)?;
            let h_num = instantiate(&h, &a0, digits, false)?;
            let result = hermitize(&h_num, &theta_num, digits)?;

            // spectra: h via its symmetrized Jacobi decomposition, H via the
            // exact characteristic polynomial
            let eig_h = sym_eigen(&result.h.symmetrize(), digits)?;
            let h_rat = h.instantiate(&a0)?;
            let cp = qhmetric::positivity::char_poly_exact(&h_rat)?;
            let h_eigs = qhmetric::roots::real_roots(&cp, digits)?;
            let mut max_gap = 0f64;
            for (x, y) in h_eigs.iter().zip(eig_h.eigenvalues.iter()) {
                max_gap = max_gap.max(x.sub(y).abs().to_f64());
            }

            let mut doc = json_base("hermitize");
            doc.insert("N".into(), json!(n));
            doc.insert("convention".into(), json!(conv.as_str()));
            doc.insert("a0".into(), json!(render_rational(&a0)));
            doc.insert("digits".into(), json!(digits));
            doc.insert(
                "symmetry_defect".into(),
                json!(result.symmetry_defect.to_decimal(6)),
            );
            doc.insert("sqrt_defect".into(), json!(result.sqrt_defect.to_decimal(6)));
            doc.insert("omega".into(), json!(result.omega.render_rows(digits)));
            doc.insert("h".into(), json!(result.h.render_rows(digits)));
            doc.insert(
                "spectrum_h".into(),
                json!(eig_h
                    .eigenvalues
                    .iter()
                    .map(|v| v.to_decimal(digits))
                    .collect::<Vec<_>>()),
            );
            doc.insert(
                "spectrum_H".into(),
                json!(h_eigs
                    .iter()
                    .map(|v| v.to_decimal(digits))
                    .collect::<Vec<_>>()),
            );
            doc.insert("max_spectral_gap".into(), json!(format!("{max_gap:.3e}")));
            Ok(RunOutput::Text(to_pretty(doc)))
        }
        Command::Verify { only } => {
            let reports = match only {
                None => verify::run_all(),
                Some(1) => vec![verify::criterion_1()],
                Some(2) => vec![verify::criterion_2()],
                Some(3) => vec![verify::criterion_3()],
                Some(4) => vec![verify::criterion_4()],
                Some(5) => vec![verify::criterion_5()],
                Some(6) => vec![verify::criterion_6()],
                Some(7) => vec![verify::criterion_7()],
                Some(8) => vec![verify::criterion_8()],
                Some(other) => {
                    return Err(Error::precondition(
                        "only",
                        format!("criterion {other} does not exist (1..=8)"),
                    ))
                }
            };
            let all_passed = reports.iter().all(|r| r.passed);
            let mut text: String = reports
                .iter()
                .map(|r| r.line())
                .collect::<Vec<_>>()
                .join("\n");
            text.push('\n');
            if all_passed {
                Ok(RunOutput::Text(text))
            } else {
                Ok(RunOutput::VerifyFailed(text))
            }
        }
    }
}

fn json_base(kind: &str) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("kind".into(), json!(kind));
    doc
}

fn to_pretty(doc: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    s.push('\n');
    s
}

fn decimal_of_rational(r: &Rational) -> String {
    qhmetric::BigFloat::from_rational(r, bits_for_digits(PLOT_DIGITS + 4)).to_decimal(PLOT_DIGITS)
}

/// Parses one first-row entry: a rational function of `a` optionally
/// multiplied by a single free symbol. Linearity in the symbol is enforced
/// by evaluating at three bindings.
fn parse_first_row_entry(
    item: &str,
    field: &str,
) -> Result<(Option<String>, RatFunc), Error> {
    let symbols = free_symbols(item, field)?;
    match symbols.len() {
        0 => Ok((None, parse_ratfunc(item, field, &HashMap::new())?)),
        1 => {
            let sym = symbols.into_iter().next().unwrap();
            let eval_at = |v: i64| -> Result<RatFunc, Error> {
                let mut binds = HashMap::new();
                binds.insert(
                    sym.clone(),
                    Rational::new(v.into(), 1.into()),
                );
                parse_ratfunc(item, field, &binds)
            };
            let at0 = eval_at(0)?;
            let at1 = eval_at(1)?;
            let at2 = eval_at(2)?;
            let two = RatFunc::from_i64(2);
            if !at0.is_zero() || at2 != at1.mul(&two) {
                return Err(Error::precondition(
                    field,
                    format!("entry `{item}` must be linear in the symbol `{sym}`"),
                ));
            }
            Ok((Some(sym), at1))
        }
        _ => Err(Error::precondition(
            field,
            format!("entry `{item}` uses more than one free symbol"),
        )),
    }
}

fn parse_first_row(spec: &str, n: usize) -> Result<Vec<(Option<String>, RatFunc)>, Error> {
    let items: Vec<&str> = spec.split(',').collect();
    if items.len() != n {
        return Err(Error::precondition(
            "first_row",
            format!("expected {n} comma-separated entries, got {}", items.len()),
        ));
    }
    items
        .iter()
        .map(|item| parse_first_row_entry(item.trim(), "first_row"))
        .collect()
}

fn build_line(args: &LineArgs, n: usize, a0: &Rational) -> Result<ParameterLine, Error> {
    let (lo_str, hi_str) = args
        .range
        .split_once(':')
        .ok_or_else(|| Error::precondition("range", "expected lo:hi"))?;
    let t_min = parse_rational(lo_str, "range")?;
    let t_max = parse_rational(hi_str, "range")?;
    match args.line.as_str() {
        "toy" => ParameterLine::toy(n, a0, t_min, t_max, args.grid),
        "default" => ParameterLine::default_line(n, a0, t_min, t_max, args.grid),
        "custom" => {
            let base = parse_rational_list(
                args.base
                    .as_deref()
                    .ok_or_else(|| Error::precondition("base", "required for line=custom"))?,
                n,
                "base",
            )?;
            let direction = parse_rational_list(
                args.direction
                    .as_deref()
                    .ok_or_else(|| Error::precondition("direction", "required for line=custom"))?,
                n,
                "direction",
            )?;
            ParameterLine::new(base, direction, t_min, t_max, args.grid)
        }
        other => Err(Error::precondition(
            "line",
            format!("unknown line `{other}` (toy|default|custom)"),
        )),
    }
}

fn parse_rational_list(spec: &str, n: usize, field: &str) -> Result<Vec<Rational>, Error> {
    let items: Vec<&str> = spec.split(',').collect();
    if items.len() != n {
        return Err(Error::precondition(
            field,
            format!("expected {n} comma-separated rationals, got {}", items.len()),
        ));
    }
    items.iter().map(|s| parse_rational(s.trim(), field)).collect()
}

fn line_json(line: &ParameterLine) -> Value {
    json!({
        "base": line.base.iter().map(render_rational).collect::<Vec<_>>(),
        "direction": line.direction.iter().map(render_rational).collect::<Vec<_>>(),
        "range": [render_rational(&line.t_min), render_rational(&line.t_max)],
        "grid": line.grid_points,
    })
}

fn curves_csv(table: &CurveTable, n: usize) -> String {
    let mut out = String::from("t");
    for j in 1..=n {
        out.push_str(&format!(",p{j}"));
    }
    out.push('\n');
    for (k, t) in table.ts.iter().enumerate() {
        out.push_str(&decimal_of_rational(t));
        if table.log_scale {
            let logs = table.log_curves.as_ref().expect("log mode tabulates logs");
            for curve in logs.iter() {
                match curve[k] {
                    Some(v) => out.push_str(&format!(",{v:.17e}")),
                    None => out.push_str(",nan"),
                }
            }
        } else {
            for curve in table.curves.iter() {
                out.push(',');
                out.push_str(&curve[k].to_decimal(PLOT_DIGITS));
            }
        }
        out.push('\n');
    }
    out
}

fn curves_json(
    table: &CurveTable,
    n: usize,
    conv: Convention,
    a0: &Rational,
    line: &ParameterLine,
) -> String {
    let mut doc = json_base("curves");
    doc.insert("N".into(), json!(n));
    doc.insert("convention".into(), json!(conv.as_str()));
    doc.insert("a0".into(), json!(render_rational(a0)));
    doc.insert("line".into(), line_json(line));
    doc.insert("digits".into(), json!(table.digits));
    doc.insert("log".into(), json!(table.log_scale));
    doc.insert(
        "t".into(),
        json!(table.ts.iter().map(decimal_of_rational).collect::<Vec<_>>()),
    );
    if table.log_scale {
        let logs = table.log_curves.as_ref().expect("log mode tabulates logs");
        doc.insert(
            "curves".into(),
            json!(logs
                .iter()
                .map(|curve| curve
                    .iter()
                    .map(|v| v.map(|x| json!(format!("{x:.17e}"))).unwrap_or(Value::Null))
                    .collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        );
    } else {
        doc.insert(
            "curves".into(),
            json!(table
                .curves
                .iter()
                .map(|curve| curve
                    .iter()
                    .map(|v| v.to_decimal(PLOT_DIGITS))
                    .collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        );
    }
    to_pretty(doc)
}

