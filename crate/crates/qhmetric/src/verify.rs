//! The acceptance suite: every claim the artifact certifies, with its
//! tolerance pinned in code. Run through the CLI `verify` subcommand or the
//! `acceptance` integration test target.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bigfloat::{bits_for_digits, BigFloat};
use crate::dieudonne::{
    in_span, nullspace_oracle, pseudometric_basis, residual, solve_metric, solve_symbolic,
};
use crate::error::Result;
use crate::hamiltonian::{build_hamiltonian, instantiate, verify_eigensystem, Convention};
use crate::matrix::RatMatrix;
use crate::poly::RatPoly;
use crate::positivity::{
    char_poly_exact, hermitize, is_positive_definite_exact, scan_domain, sym_eigen,
    ParameterLine,
};
use crate::rational::{rat, rat_i64, Rational};
use crate::ratfunc::{parse_ratfunc, RatFunc};
use crate::roots::real_roots;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {}: {} ({} ms) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.detail
        )
    }
}

/// Deterministic small-rational sampler (the suite must be reproducible).
struct RationalSampler {
    state: u64,
}

impl RationalSampler {
    fn new(seed: u64) -> Self {
        RationalSampler {
            state: seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407),
        }
    }

    fn next_u64(&mut self) -> u64 {
        // xorshift64*
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Nonzero rational with numerator in [-bound, bound], small denominator.
    fn rational(&mut self, bound: i64) -> Rational {
        loop {
            let num = (self.next_u64() % (2 * bound as u64 + 1)) as i64 - bound;
            let den = (self.next_u64() % 9 + 1) as i64;
            if num != 0 {
                return rat(num, den);
            }
        }
    }
}

fn rf(expr: &str) -> RatFunc {
    parse_ratfunc(expr, "verify", &HashMap::new()).expect("fixed expression parses")
}

fn rf_with(expr: &str, binds: &HashMap<String, Rational>) -> RatFunc {
    parse_ratfunc(expr, "verify", binds).expect("fixed expression parses")
}

pub fn run_all() -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}

fn report(
    id: usize,
    name: &'static str,
    started: Instant,
    outcome: Result<(bool, String)>,
) -> CriterionReport {
    let elapsed_ms = started.elapsed().as_millis();
    match outcome {
        Ok((passed, detail)) => CriterionReport {
            id,
            name,
            passed,
            detail,
            elapsed_ms,
        },
        Err(e) => CriterionReport {
            id,
            name,
            passed: false,
            detail: format!("error: {e}"),
            elapsed_ms,
        },
    }
}

/// Criterion 1: the six printed N=4 closed forms, exact structural equality.
pub fn criterion_1() -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        // positions in the 4x4 ansatz [[k,b,c,d],[b,f,g,h],[c,g,m,n],[d,h,n,j]]
        let targets: [(usize, usize, &str); 6] = [
            (1, 3, "1/2*c*(a+1)/((a+2)*a)"),
            (1, 2, "1/2*(b*a+3*b+2*d*a^2+4*d*a+2*d)/((a+3)*a)"),
            (2, 3, "1/2*(-6*d*a-10*d+b*a+3*b)/((a+3)*a*(2*a+1))"),
            (1, 1, "1/2*(2*c*a^2+k*a+c*a+2*k)*(a+1)/((a+2)*a^2)"),
            (
                2,
                2,
                "1/2*(2*c*a^3+c*a^2-7*c*a+k*a^2+5*k*a+6*k)/((a+3)*a^2*(2*a+1))",
            ),
            (
                3,
                3,
                "-1/4*(6*c*a^2+10*c*a-k*a^2-5*k*a-6*k)/(a^2*(2*a+1)*(a+2)*(a+1))",
            ),
        ];
        let params = ["k", "b", "c", "d"];
        let sym = solve_symbolic(4, Convention::Displayed)?;
        let mut mismatches = Vec::new();
        for (i, j, formula) in targets {
            for (idx, sym_name) in params.iter().enumerate() {
                let mut binds: HashMap<String, Rational> = params
                    .iter()
                    .map(|p| (p.to_string(), Rational::zero()))
                    .collect();
                binds.insert(sym_name.to_string(), Rational::one());
                let golden = rf_with(formula, &binds);
                let got = sym.get(i, j).coeff(idx);
                if got != &golden {
                    mismatches.push(format!(
                        "entry ({},{}) coeff of {}: got {}, want {}",
                        i + 1,
                        j + 1,
                        sym_name,
                        got.render(),
                        golden.render()
                    ));
                }
            }
        }
        let within_time = started.elapsed().as_secs_f64() < 1.0;
        let passed = mismatches.is_empty() && within_time;
        let detail = if mismatches.is_empty() {
            format!(
                "six closed forms match exactly; runtime bound 1 s {}",
                ok(within_time)
            )
        } else {
            mismatches.join("; ")
        };
        Ok((passed, detail))
    })();
    report(1, "N=4 closed-form regression", started, outcome)
}

/// Criterion 2: the 3x3 toy metric at 5 random rational g, plus exact zero
/// residual.
pub fn criterion_2() -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let mut sampler = RationalSampler::new(0x51EC7);
        let h = build_hamiltonian(3, Convention::Displayed)?;
        let mut failures = Vec::new();
        for _ in 0..5 {
            let g = sampler.rational(12);
            let mut binds = HashMap::new();
            binds.insert("g".to_string(), g.clone());
            let first_row = [rf("2*a^2"), rf_with("2*g*a", &binds), RatFunc::zero()];
            let theta = solve_metric(3, Convention::Displayed, &first_row)?;
            let expected: [[RatFunc; 3]; 3] = [
                [rf("2*a^2"), rf_with("2*g*a", &binds), RatFunc::zero()],
                [rf_with("2*g*a", &binds), rf("a+1"), rf_with("g", &binds)],
                [RatFunc::zero(), rf_with("g", &binds), rf("(a+2)/(2*a+1)")],
            ];
            for i in 0..3 {
                for j in 0..3 {
                    if theta.get(i, j) != &expected[i][j] {
                        failures.push(format!(
                            "g={}: entry ({},{}) = {}",
                            crate::rational::render_rational(&g),
                            i + 1,
                            j + 1,
                            theta.get(i, j).render()
                        ));
                    }
                }
            }
            if !residual(&h, &theta)?.is_zero() {
                failures.push(format!(
                    "g={}: nonzero residual",
                    crate::rational::render_rational(&g)
                ));
            }
        }
        let within_time = started.elapsed().as_secs_f64() < 1.0;
        let passed = failures.is_empty() && within_time;
        let detail = if failures.is_empty() {
            format!(
                "toy metric reproduced at 5 rational g, residual exactly zero; runtime bound 1 s {}",
                ok(within_time)
            )
        } else {
            failures.join("; ")
        };
        Ok((passed, detail))
    })();
    report(2, "toy-metric regression", started, outcome)
}

/// Criterion 3: characteristic polynomial of the toy metric at a=1 equals
/// -l^3 + 5 l^2 - (8-5g^2) l + (4-6g^2) exactly.
pub fn criterion_3() -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let mut sampler = RationalSampler::new(0xC4A5);
        let mut failures = Vec::new();
        for _ in 0..5 {
            let g = sampler.rational(10);
            let mut binds = HashMap::new();
            binds.insert("g".to_string(), g.clone());
            let first_row = [rf("2*a^2"), rf_with("2*g*a", &binds), RatFunc::zero()];
            let theta = solve_metric(3, Convention::Displayed, &first_row)?;
            let theta_1 = theta.instantiate(&rat_i64(1))?;
            let cp = char_poly_exact(&theta_1)?;
            let g2 = &g * &g;
            let expected = RatPoly::new(vec![
                rat_i64(4) - rat_i64(6) * &g2,
                -(rat_i64(8) - rat_i64(5) * &g2),
                rat_i64(5),
                rat_i64(-1),
            ]);
            if cp != expected {
                failures.push(format!(
                    "g={}: unexpected char poly",
                    crate::rational::render_rational(&g)
                ));
            }
        }
        let passed = failures.is_empty();
        let detail = if passed {
            "det(Theta - l I) matches the printed expansion exactly at 5 rational g".to_string()
        } else {
            failures.join("; ")
        };
        Ok((passed, detail))
    })();
    report(3, "characteristic-polynomial match", started, outcome)
}

/// Criterion 4: oracle nullspace dimension N and mutual span containment
/// with the recurrent basis, N in 2..=6, both conventions, a0 in {1/2,1,3}.
pub fn criterion_4() -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let mut failures = Vec::new();
        for n in 2..=6usize {
            for conv in [Convention::Displayed, Convention::Recurrence] {
                let basis = pseudometric_basis(n, conv)?;
                for a0 in [rat(1, 2), rat_i64(1), rat_i64(3)] {
                    let oracle = nullspace_oracle(n, conv, &a0)?;
                    if oracle.dimension != n {
                        failures.push(format!(
                            "N={n} {} a0={}: dimension {}",
                            conv.as_str(),
                            crate::rational::render_rational(&a0),
                            oracle.dimension
                        ));
                        continue;
                    }
                    let instantiated: Vec<RatMatrix> = basis
                        .basis
                        .iter()
                        .map(|p| p.instantiate(&a0))
                        .collect::<Result<_>>()?;
                    let forward = instantiated.iter().all(|p| in_span(&oracle.basis, p));
                    let backward = oracle.basis.iter().all(|o| in_span(&instantiated, o));
                    if !forward || !backward {
                        failures.push(format!(
                            "N={n} {} a0={}: span mismatch",
                            conv.as_str(),
                            crate::rational::render_rational(&a0)
                        ));
                    }
                }
            }
        }
        let within_time = started.elapsed().as_secs_f64() < 30.0;
        let passed = failures.is_empty() && within_time;
        let detail = if failures.is_empty() {
            format!(
                "30 oracle runs: dimension N, exact mutual span containment; runtime bound 30 s {}",
                ok(within_time)
            )
        } else {
            failures.join("; ")
        };
        Ok((passed, detail))
    })();
    report(4, "solution-space dimension", started, outcome)
}

/// Criterion 5: toy positivity boundary |t*| = sqrt(2/3) within 1e-10.
pub fn criterion_5() -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let line = ParameterLine::toy(3, &rat_i64(1), rat_i64(-1), rat_i64(1), 41)?;
        let refine_tol = Rational::new(BigInt::one(), BigInt::from(10).pow(12));
        let scan = scan_domain(3, Convention::Displayed, &rat_i64(1), &line, 30, &refine_tol)?;
        let prec = bits_for_digits(60);
        let target = BigFloat::from_rational(&rat(2, 3), prec).sqrt();
        let tol = BigFloat::from_rational(
            &Rational::new(BigInt::one(), BigInt::from(10).pow(10)),
            prec,
        );
        let mut passed = scan.intervals.len() == 1;
        let mut detail;
        if let Some(iv) = scan.intervals.first() {
            let lo = BigFloat::from_rational(&iv.lo, prec).abs();
            let hi = BigFloat::from_rational(&iv.hi, prec).abs();
            let err_lo = lo.sub(&target).abs();
            let err_hi = hi.sub(&target).abs();
            passed = passed
                && err_lo.cmp_value(&tol) == std::cmp::Ordering::Less
                && err_hi.cmp_value(&tol) == std::cmp::Ordering::Less;
            detail = format!(
                "boundary - sqrt(2/3): lo {:.2e}, hi {:.2e} (tol 1e-10)",
                err_lo.to_f64(),
                err_hi.to_f64()
            );
        } else {
            detail = "no positivity interval found".to_string();
        }
        let within_time = started.elapsed().as_secs_f64() < 5.0;
        passed = passed && within_time;
        detail.push_str(&format!("; runtime bound 5 s {}", ok(within_time)));
        Ok((passed, detail))
    })();
    report(5, "positivity boundary", started, outcome)
}

/// Criterion 6: recurrence-convention eigensystem residuals below 1e-40 at
/// 50 digits for N in 2..=8, and the documented displayed-convention
/// spectral gap at N=3, a=1, to 1e-40.
pub fn criterion_6() -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let digits = 50u32;
        let tol = 1e-40f64;
        let mut failures = Vec::new();
        let mut worst = 0f64;
        for n in 2..=8usize {
            let rep = verify_eigensystem(n, &rat_i64(1), Convention::Recurrence, digits)?;
            let r = rep.max_residual.to_f64();
            worst = worst.max(r);
            if !(r < tol) {
                failures.push(format!("N={n}: residual {r:.2e}"));
            }
        }
        // displayed N=3 gap: |sqrt((4a+5)/(4(a+1)(a+2))) - sqrt(3/(2(a+2)))|
        // at a=1, i.e. |sqrt(9/24) - sqrt(3/6)|
        let rep = verify_eigensystem(3, &rat_i64(1), Convention::Displayed, digits)?;
        let prec = bits_for_digits(digits + 10);
        let e_h = BigFloat::from_rational(&rat(9, 24), prec).sqrt();
        let e_g = BigFloat::from_rational(&rat(3, 6), prec).sqrt();
        let expected_gap = e_g.sub(&e_h).abs();
        let gap_err = rep.spectral_gap.sub(&expected_gap).abs().to_f64();
        if !(gap_err < tol) {
            failures.push(format!("displayed N=3 gap error {gap_err:.2e}"));
        }
        let passed = failures.is_empty();
        let detail = if passed {
            format!(
                "max recurrence residual {worst:.2e} < 1e-40; displayed N=3 gap error {gap_err:.2e} < 1e-40"
            )
        } else {
            failures.join("; ")
        };
        Ok((passed, detail))
    })();
    report(6, "eigenvector/secular consistency", started, outcome)
}

/// Criterion 7: hermitization at N in 2..=7, a=1, three random SPD points:
/// symmetry defect < 1e-38, spectra of h and H agree to 1e-38 at 50 digits.
pub fn criterion_7() -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let digits = 50u32;
        let tol = 1e-38f64;
        let mut sampler = RationalSampler::new(0x0E16);
        let mut failures = Vec::new();
        let mut worst_defect = 0f64;
        let mut worst_gap = 0f64;
        for n in 2..=7usize {
            let basis = pseudometric_basis(n, Convention::Displayed)?;
            let instantiated: Vec<RatMatrix> = basis
                .basis
                .iter()
                .map(|p| p.instantiate(&rat_i64(1)))
                .collect::<Result<_>>()?;
            let h = build_hamiltonian(n, Convention::Displayed)?;
            let h_rat = h.instantiate(&rat_i64(1))?;
            let h_num = instantiate(&h, &rat_i64(1), digits, false)?;
            let cp = char_poly_exact(&h_rat)?;
            let h_eigs = real_roots(&cp, digits)?;

            let mut found = 0usize;
            let mut attempts = 0usize;
            while found < 3 && attempts < 200 {
                attempts += 1;
                // P_1-dominant sampling keeps Theta inside the positivity
                // domain for most draws
                let mut kappa = vec![rat_i64(2)];
                for _ in 1..n {
                    kappa.push(sampler.rational(8) / rat_i64(16));
                }
                let mut theta = RatMatrix::zero(n);
                for (p, k) in instantiated.iter().zip(&kappa) {
                    theta = theta.add_scaled(p, k)?;
                }
                if is_positive_definite_exact(&theta)?.is_some() {
                    continue;
                }
                found += 1;
                let theta_num = theta.to_numeric(bits_for_digits(digits));
                let result = hermitize(&h_num, &theta_num, digits)?;
                let defect = result.symmetry_defect.to_f64();
                worst_defect = worst_defect.max(defect);
                if !(defect < tol) {
                    failures.push(format!("N={n}: symmetry defect {defect:.2e}"));
                }
                let eig_h = sym_eigen(&result.h.symmetrize(), digits)?;
                for (x, y) in h_eigs.iter().zip(eig_h.eigenvalues.iter()) {
                    let d = x.sub(y).abs().to_f64();
                    worst_gap = worst_gap.max(d);
                    if !(d < tol) {
                        failures.push(format!("N={n}: spectral gap {d:.2e}"));
                    }
                }
            }
            if found < 3 {
                failures.push(format!("N={n}: only {found} SPD sample points found"));
            }
        }
        let within_time = started.elapsed().as_secs_f64() < 30.0;
        let passed = failures.is_empty() && within_time;
        let detail = if failures.is_empty() {
            format!(
                "18 hermitizations: worst defect {worst_defect:.2e}, worst spectral gap {worst_gap:.2e} (tol 1e-38); runtime bound 30 s {}",
                ok(within_time)
            )
        } else {
            failures.join("; ")
        };
        Ok((passed, detail))
    })();
    report(7, "hermitization", started, outcome)
}

/// Criterion 8: the exact parameter families behind the paper's figures live
/// in an external reference, so a property suite substitutes: N in {7, 9},
/// a=1, the documented default line at grid 401 -- continuity of all N
/// curves, sign-flip spectral symmetry, and exact Sylvester verification at
/// 10 random rational points inside every reported positivity interval.
pub fn criterion_8() -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let digits = 30u32;
        let mut sampler = RationalSampler::new(0xF1C5);
        let mut failures = Vec::new();
        let mut refined_total = 0usize;
        for n in [7usize, 9] {
            let line = ParameterLine::default_line(n, &rat_i64(1), rat_i64(-2), rat_i64(2), 401)?;
            let refine_tol = Rational::new(BigInt::one(), BigInt::from(10).pow(10));
            let scan = scan_domain(
                n,
                Convention::Displayed,
                &rat_i64(1),
                &line,
                digits,
                &refine_tol,
            )?;
            let basis =
                crate::positivity::instantiated_basis(n, Convention::Displayed, &rat_i64(1))?;
            // per-curve layout of the scan's per-point eigenvalues
            let m = scan.ts.len();
            let mut curves: Vec<Vec<BigFloat>> = vec![Vec::with_capacity(m); n];
            for point in &scan.curves {
                for (j, v) in point.iter().enumerate() {
                    curves[j].push(v.clone());
                }
            }

            // global scale for the continuity floor
            let mut scale = 0f64;
            for curve in &curves {
                for v in curve {
                    scale = scale.max(v.to_f64().abs());
                }
            }
            let floor = scale * 1e-12;

            let eig_at = |t: &Rational| -> Result<Vec<BigFloat>> {
                let kappa = line.kappa_at(t);
                let mut theta = RatMatrix::zero(n);
                for (p, kv) in basis.iter().zip(&kappa) {
                    theta = theta.add_scaled(p, kv)?;
                }
                Ok(sym_eigen(&theta.to_numeric(bits_for_digits(digits)), digits)?.eigenvalues)
            };

            // Continuity: every step below 10x the neighbor-slope estimate.
            // Sorted eigenvalue curves pass through avoided crossings whose
            // transition can be narrower than the grid step, so a flagged
            // step is accepted if its jump spreads out under local bisection
            // (a genuine discontinuity would keep its full height at every
            // refinement level).
            for (j, curve) in curves.iter().enumerate() {
                let steps: Vec<f64> = curve
                    .windows(2)
                    .map(|w| w[1].sub(&w[0]).abs().to_f64())
                    .collect();
                for (k, &d) in steps.iter().enumerate() {
                    let mut est = floor;
                    if k >= 1 {
                        est = est.max(steps[k - 1]);
                    }
                    if k + 1 < steps.len() {
                        est = est.max(steps[k + 1]);
                    }
                    if d < 10.0 * est {
                        continue;
                    }
                    refined_total += 1;
                    if !step_spreads(
                        &eig_at,
                        j,
                        scan.ts[k].clone(),
                        scan.ts[k + 1].clone(),
                        scale * 1e-9,
                    )? {
                        failures.push(format!(
                            "N={n} curve {j}: jump {d:.3e} at step {k} stays concentrated under refinement"
                        ));
                    }
                }
            }

            // sign-flip symmetry: spectra at t and -t coincide
            for k in 0..m {
                let mirror = m - 1 - k;
                for j in 0..n {
                    let d = curves[j][k].sub(&curves[j][mirror]).abs().to_f64();
                    if !(d <= 1e-18 * (1.0 + scale)) {
                        failures.push(format!(
                            "N={n}: sign-flip mismatch at grid {k} curve {j}: {d:.3e}"
                        ));
                    }
                }
            }

            // positivity intervals exist and verify pointwise
            if scan.intervals.is_empty() {
                failures.push(format!("N={n}: no positivity interval reported"));
            }
            for iv in &scan.intervals {
                for _ in 0..10 {
                    let u = Rational::new(
                        BigInt::from(sampler.next_u64() % 1_000_000 + 1),
                        BigInt::from(1_000_002u64),
                    );
                    let t = &iv.lo + (&iv.hi - &iv.lo) * u;
                    let kappa = line.kappa_at(&t);
                    let mut theta = RatMatrix::zero(n);
                    for (p, kv) in basis.iter().zip(&kappa) {
                        theta = theta.add_scaled(p, kv)?;
                    }
                    if is_positive_definite_exact(&theta)?.is_some() {
                        failures.push(format!(
                            "N={n}: Sylvester failed inside reported interval at t={}",
                            crate::rational::render_rational(&t)
                        ));
                    }
                }
            }
        }
        let passed = failures.is_empty();
        let detail = if passed {
            format!(
                "N in {{7,9}}: 401-point curves continuous ({refined_total} steep steps certified by refinement), sign-flip symmetric, intervals verified by exact Sylvester at 10 interior points each"
            )
        } else {
            failures.iter().take(4).cloned().collect::<Vec<_>>().join("; ")
        };
        Ok((passed, detail))
    })();
    report(8, "figure-analog property suite", started, outcome)
}

/// Certifies that a large one-grid-step jump of curve `j` is a resolved
/// continuous transition: repeatedly bisect, following the half that carries
/// the larger share of the jump. A continuous curve sheds jump height
/// geometrically once the transition is resolved; a discontinuity keeps it.
fn step_spreads(
    eig_at: &dyn Fn(&Rational) -> Result<Vec<BigFloat>>,
    j: usize,
    mut lo: Rational,
    mut hi: Rational,
    floor: f64,
) -> Result<bool> {
    let mut v_lo = eig_at(&lo)?[j].clone();
    let mut v_hi = eig_at(&hi)?[j].clone();
    for _ in 0..64 {
        let jump = v_hi.sub(&v_lo).abs().to_f64();
        if jump < floor {
            return Ok(true);
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        let v_mid = eig_at(&mid)?[j].clone();
        let left = v_mid.sub(&v_lo).abs().to_f64();
        let right = v_hi.sub(&v_mid).abs().to_f64();
        if left >= right {
            hi = mid;
            v_hi = v_mid;
        } else {
            lo = mid;
            v_lo = v_mid;
        }
    }
    Ok(false)
}

fn ok(b: bool) -> &'static str {
    if b {
        "met"
    } else {
        "EXCEEDED"
    }
}
