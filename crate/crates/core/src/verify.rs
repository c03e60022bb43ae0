//! Named verification suites.
//!
//! Each suite exercises one acceptance-level property end to end — closed
//! form reductions, oracle roundtrips, mass identities, scans, exponent
//! identities — and reports one line per check with the measured quantity
//! and its pinned tolerance. The CLI `verify` subcommand and the acceptance
//! test target both drive these.

use serde::{Deserialize, Serialize};

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::foxh::{convolve_specs, power_scale, HEvaluator, HFunctionSpec, ParamPair};
use crate::kernels::oracle::{gl_fractional_derivative, inverse_fourier_oracle, kernel_mass};
use crate::kernels::{
    calibrate_envelope, esth_ratio, kernel_spec, nonnegativity_case, FracParams, KernelEvaluator,
    KernelKind,
};
use crate::specfun::gamma::{erfc, gamma_real};
use crate::specfun::{mittag_leffler_series, MittagLeffler, MittagLefflerParams};
use crate::spde::{
    chaos_second_moment, existence_certificate, exponents, lower_bound_base, moment_lower_bound,
    simplex_integral, simplex_integral_mc, CertStatus, NoiseSpec, TemporalCorrelation,
};
use crate::util::{linear_fit, log_grid, rel_diff};

/// One verified property: passes when `measured <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub description: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Result of one suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub criterion: String,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    pub config_hash: String,
}

impl SuiteReport {
    fn new(suite: &str, criterion: &str, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport {
            suite: suite.to_string(),
            criterion: criterion.to_string(),
            checks,
            passed,
            config_hash: EvalConfig::default().hash(),
        }
    }
}

fn check(id: impl Into<String>, desc: impl Into<String>, measured: f64, tol: f64) -> CheckResult {
    CheckResult {
        id: id.into(),
        description: desc.into(),
        measured,
        tolerance: tol,
        passed: measured.is_finite() && measured <= tol,
    }
}

fn bool_check(id: impl Into<String>, desc: impl Into<String>, ok: bool) -> CheckResult {
    check(id, desc, if ok { 0.0 } else { 1.0 }, 0.5)
}

/// Names of all suites, in criterion order.
pub fn suite_names() -> &'static [&'static str] {
    &[
        "reductions",
        "fourier-roundtrip",
        "masses",
        "nonneg-scan",
        "rl-link",
        "envelope",
        "mittag-leffler",
        "dalang",
        "certificate",
        "exponents",
        "chaos-ml",
        "simplex",
        "convolution",
    ]
}

/// Runs one named suite.
pub fn run_suite(name: &str) -> Result<SuiteReport> {
    match name {
        "reductions" => reductions(),
        "fourier-roundtrip" => fourier_roundtrip(),
        "masses" => masses(),
        "nonneg-scan" => nonneg_scan(),
        "rl-link" => rl_link(),
        "envelope" => envelope(),
        "mittag-leffler" => mittag_leffler_suite(),
        "dalang" => dalang(),
        "certificate" => certificate(),
        "exponents" => exponents_suite(),
        "chaos-ml" => chaos_ml(),
        "simplex" => simplex(),
        "convolution" => convolution(),
        other => Err(Error::InvalidParameter(format!("unknown suite '{other}'"))),
    }
}

const T_GRID: [f64; 3] = [0.5, 1.0, 2.0];
const R_GRID: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 4.0];

/// Criteria 1 and 2: heat-kernel and Cauchy reductions of Z.
fn reductions() -> Result<SuiteReport> {
    let cfg = EvalConfig::default();
    let mut checks = Vec::new();
    for d in [1usize, 2, 3] {
        for nu in [1.0, 2.0] {
            let p = FracParams::new(2.0, 1.0, d, nu)?;
            let ev = KernelEvaluator::new(KernelKind::Z, p, cfg.clone())?;
            let mut worst: f64 = 0.0;
            for t in T_GRID {
                for r in R_GRID {
                    let got = ev.eval_value(t, r)?;
                    let truth = (2.0 * std::f64::consts::PI * nu * t).powf(-(d as f64) / 2.0)
                        * (-r * r / (2.0 * nu * t)).exp();
                    worst = worst.max(rel_diff(got, truth));
                }
            }
            checks.push(check(
                format!("heat-d{d}-nu{nu}"),
                format!("Z vs Gaussian heat kernel, d={d}, nu={nu} (max rel err)"),
                worst,
                1e-6,
            ));
        }
    }
    for nu in [1.0, 2.0] {
        let p = FracParams::new(1.0, 1.0, 1, nu)?;
        let ev = KernelEvaluator::new(KernelKind::Z, p, cfg.clone())?;
        let mut worst: f64 = 0.0;
        for t in T_GRID {
            let a = nu * t / 2.0;
            for r in R_GRID {
                let got = ev.eval_value(t, r)?;
                let truth = a / (std::f64::consts::PI * (a * a + r * r));
                worst = worst.max(rel_diff(got, truth));
            }
        }
        checks.push(check(
            format!("cauchy-nu{nu}"),
            format!("Z vs Poisson kernel, alpha=beta=1, d=1, nu={nu} (max rel err)"),
            worst,
            1e-6,
        ));
    }
    Ok(SuiteReport::new(
        "reductions",
        "criteria 1-2: closed-form kernel reductions",
        checks,
    ))
}

/// Criterion 3: Fourier roundtrip of every kernel against the radial
/// Bessel-quadrature oracle.
fn fourier_roundtrip() -> Result<SuiteReport> {
    let cfg = EvalConfig::default();
    let sets = [
        (2.0, 0.75, 1usize),
        (1.5, 0.75, 2),
        (2.0, 1.5, 3),
        (1.2, 0.9, 1),
    ];
    let mut checks = Vec::new();
    for (alpha, beta, d) in sets {
        let p = FracParams::new(alpha, beta, d, 1.0)?;
        let mut kinds = vec![KernelKind::Z, KernelKind::Y];
        if beta > 1.0 {
            kinds.push(KernelKind::Zstar);
        }
        for kind in kinds {
            let ev = KernelEvaluator::new(kind, p, cfg.clone())?;
            let mut worst: f64 = 0.0;
            for t in [0.5, 1.0] {
                for r in [0.5, 1.0, 2.0] {
                    let direct = ev.eval_value(t, r)?;
                    let oracle = inverse_fourier_oracle(kind, &p, t, r, 1e-7)?;
                    worst = worst.max((direct - oracle).abs());
                }
            }
            checks.push(check(
                format!("roundtrip-{kind}-a{alpha}-b{beta}-d{d}"),
                format!(
                    "{kind} kernel vs inverse-Fourier oracle ({alpha},{beta},{d}) (max abs err)"
                ),
                worst,
                1e-5,
            ));
        }
    }
    Ok(SuiteReport::new(
        "fourier-roundtrip",
        "criterion 3: H-evaluation vs radial Fourier inversion",
        checks,
    ))
}

/// Criterion 4: mass identities of Z, Y and Z*.
fn masses() -> Result<SuiteReport> {
    let sets = [
        (2.0, 0.8, 1usize, 1.0),
        (1.5, 0.75, 2, 1.0),
        (2.0, 1.5, 3, 1.0),
        (1.2, 0.9, 1, 2.0),
        (0.8, 0.7, 1, 1.0),
        (1.7, 1.6, 1, 1.0),
        (2.0, 1.25, 2, 1.0),
        (1.0, 0.75, 3, 1.5),
    ];
    let t = 0.8;
    let mut checks = Vec::new();
    for (alpha, beta, d, nu) in sets {
        let p = FracParams::new(alpha, beta, d, nu)?;
        let mz = kernel_mass(KernelKind::Z, &p, t)?;
        let truth_z = t.powi(p.ceil_beta() as i32 - 1);
        checks.push(check(
            format!("mass-z-a{alpha}-b{beta}-d{d}"),
            format!("int Z = t^(ceil(beta)-1) at ({alpha},{beta},{d},{nu}) (abs err)"),
            (mz - truth_z).abs(),
            1e-6,
        ));
        let my = kernel_mass(KernelKind::Y, &p, t)?;
        let truth_y = t.powf(beta - 1.0) / gamma_real(beta);
        checks.push(check(
            format!("mass-y-a{alpha}-b{beta}-d{d}"),
            format!("int Y = t^(beta-1)/Gamma(beta) at ({alpha},{beta},{d},{nu}) (abs err)"),
            (my - truth_y).abs(),
            1e-6,
        ));
        if beta > 1.0 {
            let ms = kernel_mass(KernelKind::Zstar, &p, t)?;
            checks.push(check(
                format!("mass-zstar-a{alpha}-b{beta}-d{d}"),
                format!("int Z* = 1 at ({alpha},{beta},{d},{nu}) (abs err)"),
                (ms - 1.0).abs(),
                1e-6,
            ));
        }
    }
    Ok(SuiteReport::new(
        "masses",
        "criterion 4: kernel mass identities",
        checks,
    ))
}

/// Criterion 5: grid nonnegativity scans over each certified regime.
fn nonneg_scan() -> Result<SuiteReport> {
    let cfg = EvalConfig::default();
    // Samples from the three certified regimes.
    let sets: [(f64, f64, usize); 7] = [
        (1.5, 0.8, 2),
        (0.7, 0.6, 1),
        (2.0, 1.0, 3),
        (2.0, 1.5, 2),
        (2.0, 1.7, 3),
        (1.8, 1.5, 1),
        (2.0, 1.2, 1),
    ];
    let rs = log_grid(1e-2, 50.0, 200);
    let mut checks = Vec::new();
    for (alpha, beta, d) in sets {
        let p = FracParams::new(alpha, beta, d, 1.0)?;
        let case = nonnegativity_case(&p)?;
        if !case.certified() {
            checks.push(bool_check(
                format!("cert-a{alpha}-b{beta}-d{d}"),
                "parameter set unexpectedly uncertified",
                false,
            ));
            continue;
        }
        let mut kinds = vec![KernelKind::Z, KernelKind::Y];
        if case.zstar == Some(crate::kernels::Certify::CertifiedNonneg) {
            kinds.push(KernelKind::Zstar);
        }
        for kind in kinds {
            let ev = KernelEvaluator::new(kind, p, cfg.clone())?;
            let mut min_val = f64::INFINITY;
            for t in [0.25, 1.0, 4.0] {
                for &r in &rs {
                    min_val = min_val.min(ev.eval_value(t, r)?);
                }
            }
            checks.push(check(
                format!("nonneg-{kind}-a{alpha}-b{beta}-d{d}"),
                format!("min {kind}(t,r) over grid at ({alpha},{beta},{d}); negated minimum"),
                -min_val,
                1e-8,
            ));
        }
    }
    Ok(SuiteReport::new(
        "nonneg-scan",
        "criterion 5: certified regimes scan nonnegative",
        checks,
    ))
}

/// Criterion 6: finite-difference fractional derivative links Z to Y.
fn rl_link() -> Result<SuiteReport> {
    let cfg = EvalConfig::default();
    let mut checks = Vec::new();
    for (alpha, beta, d) in [(2.0, 0.8, 1usize), (2.0, 1.5, 2)] {
        let p = FracParams::new(alpha, beta, d, 1.0)?;
        let z = KernelEvaluator::new(KernelKind::Z, p, cfg.clone())?;
        let y = KernelEvaluator::new(KernelKind::Y, p, cfg.clone())?;
        let order = p.ceil_beta() as f64 - beta;
        let mut worst: f64 = 0.0;
        for r in [0.5, 1.0] {
            let got = gl_fractional_derivative(|t| z.eval_value(t, r), order, 1.0, 512)?;
            let truth = y.eval_value(1.0, r)?;
            worst = worst.max(rel_diff(got, truth));
        }
        checks.push(check(
            format!("rl-a{alpha}-b{beta}-d{d}"),
            format!(
                "Gruenwald-Letnikov D^(ceil(beta)-beta) Z vs Y at ({alpha},{beta},{d}) (max rel err)"
            ),
            worst,
            1e-3,
        ));
    }
    Ok(SuiteReport::new(
        "rl-link",
        "criterion 6: Riemann-Liouville link between Z and Y",
        checks,
    ))
}

/// Criterion 7: envelope ratio bounded and stable, with the resonance
/// small-z behaviours.
fn envelope() -> Result<SuiteReport> {
    let cfg = EvalConfig::default();
    let mut checks = Vec::new();
    // (alpha, beta, d, zeta): generic, d = alpha resonance, d = 2 alpha.
    let sets = [
        (1.5, 1.25, 2usize, 1.2),
        (1.0, 1.25, 1, 0.8),
        (1.0, 1.25, 2, 1.2),
    ];
    for (alpha, beta, d, zeta) in sets {
        let p = FracParams::new(alpha, beta, d, 1.0)?;
        let h = HEvaluator::new(kernel_spec(KernelKind::Y, &p)?, cfg.clone())?;
        let sup_on = |n: usize| -> Result<f64> {
            let mut sup: f64 = 0.0;
            for z in log_grid(1e-6, 1e6, n) {
                sup = sup.max(esth_ratio(&h, zeta, z)?);
            }
            Ok(sup)
        };
        let s41 = sup_on(41)?;
        let s81 = sup_on(81)?;
        checks.push(bool_check(
            format!("env-finite-a{alpha}-b{beta}-d{d}"),
            format!("sup ratio finite on [1e-6,1e6] ({alpha},{beta},{d}): {s41:.6e}"),
            s41.is_finite() && s41 > 0.0,
        ));
        checks.push(check(
            format!("env-stable-a{alpha}-b{beta}-d{d}"),
            format!("sup variation under 2x grid refinement ({alpha},{beta},{d})"),
            (s81 - s41).abs() / s41,
            0.05,
        ));
        // The calibrated envelope constant exists for the same zeta.
        let env = calibrate_envelope(&p, zeta, &cfg, 100)?;
        checks.push(bool_check(
            format!("env-cal-a{alpha}-b{beta}-d{d}"),
            format!("calibrated envelope constant finite: C = {:.6e}", env.c),
            env.c.is_finite() && env.c > 0.0,
        ));
    }
    // Case II: d = alpha makes the H-function linear at zero.
    {
        let p = FracParams::new(1.0, 1.25, 1, 1.0)?;
        let h = HEvaluator::new(kernel_spec(KernelKind::Y, &p)?, cfg.clone())?;
        let zs = log_grid(1e-6, 1e-4, 10);
        let lnz: Vec<f64> = zs.iter().map(|z| z.ln()).collect();
        let lnh: Vec<f64> = zs
            .iter()
            .map(|&z| Ok::<f64, Error>(h.eval(z)?.value.ln()))
            .collect::<Result<_>>()?;
        let (_, slope, _) = linear_fit(&lnz, &lnh);
        checks.push(check(
            "env-case2-slope",
            format!("d = alpha resonance: small-z log-log slope {slope:.6} vs 1"),
            (slope - 1.0).abs(),
            0.02,
        ));
    }
    // Case III: d = 2 alpha gives z^2 log(1/z) with a positive coefficient.
    {
        let p = FracParams::new(1.0, 1.25, 2, 1.0)?;
        let h = HEvaluator::new(kernel_spec(KernelKind::Y, &p)?, cfg)?;
        let zs = log_grid(1e-6, 1e-3, 14);
        let lnz: Vec<f64> = zs.iter().map(|z| z.ln()).collect();
        let scaled: Vec<f64> = zs
            .iter()
            .map(|&z| Ok::<f64, Error>(h.eval(z)?.value / (z * z)))
            .collect::<Result<_>>()?;
        let (_, slope, r2) = linear_fit(&lnz, &scaled);
        checks.push(check(
            "env-case3-fit",
            format!("d = 2 alpha resonance: H/z^2 linear in ln z (R^2 = {r2:.6})"),
            1.0 - r2,
            0.01,
        ));
        // The slope of H/z^2 against ln z is the coefficient of z^2 log z.
        checks.push(bool_check(
            "env-case3-sign",
            format!("z^2 log z coefficient positive (slope {slope:.4e})"),
            slope > 0.0,
        ));
    }
    Ok(SuiteReport::new(
        "envelope",
        "criterion 7: uniform H-ratio envelope with resonance behaviour",
        checks,
    ))
}

/// Criterion 8: Mittag-Leffler identities and route agreement.
fn mittag_leffler_suite() -> Result<SuiteReport> {
    let cfg = EvalConfig::default();
    let mut checks = Vec::new();
    // E_{1/2}(-x) = exp(x^2) erfc(x) on x in [0, 5].
    {
        let m = MittagLeffler::new(MittagLefflerParams::new(0.5, 1.0)?, cfg.clone());
        let mut worst: f64 = 0.0;
        for i in 0..=20 {
            let x = 5.0 * i as f64 / 20.0;
            let got = if x == 0.0 { 1.0 } else { m.eval_neg(x)? };
            let truth = (x * x).exp() * erfc(x);
            worst = worst.max(rel_diff(got, truth));
        }
        checks.push(check(
            "ml-erfc",
            "E_{1/2}(-x) vs exp(x^2) erfc(x), x in [0,5] (max rel err)",
            worst,
            1e-8,
        ));
    }
    // Series and Fox-H routes agree on the overlap window.
    for (rho, mu) in [(0.75, 0.75), (0.75, 1.0), (1.5, 2.0)] {
        let m = MittagLeffler::new(MittagLefflerParams::new(rho, mu)?, cfg.clone());
        let mut worst: f64 = 0.0;
        for i in 0..=18 {
            let x = 0.5 + 4.5 * i as f64 / 18.0;
            let s = mittag_leffler_series(m.params(), num_complex::Complex64::new(-x, 0.0))?
                .0
                .re;
            let h = m.eval_neg_foxh(x)?;
            worst = worst.max(rel_diff(s, h));
        }
        checks.push(check(
            format!("ml-routes-{rho}-{mu}"),
            format!("series vs Fox-H route for E_{{{rho},{mu}}}(-x), x in [0.5,5] (max rel err)"),
            worst,
            1e-8,
        ));
    }
    // E_{1,1} = exp on the disk |z| <= 10.
    {
        let m = MittagLeffler::new(MittagLefflerParams::new(1.0, 1.0)?, cfg);
        let mut worst: f64 = 0.0;
        for k in 0..16 {
            let phi = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / 16.0;
            for rad in [2.0, 7.0, 10.0] {
                let z = num_complex::Complex64::from_polar(rad, phi);
                let got = m.eval(z)?;
                let truth = z.exp();
                worst = worst.max((got - truth).norm() / truth.norm());
            }
        }
        checks.push(check(
            "ml-exp-disk",
            "E_{1,1}(z) vs exp(z) on |z| <= 10 (max rel err)",
            worst,
            1e-10,
        ));
    }
    Ok(SuiteReport::new(
        "mittag-leffler",
        "criterion 8: Mittag-Leffler identities and route agreement",
        checks,
    ))
}

/// Criterion 9: Dalang reductions, exact on a rational sweep.
fn dalang() -> Result<SuiteReport> {
    use num_rational::Rational64;
    let mut checks = Vec::new();
    let rat = Rational64::new;
    // Exact sweep: the implemented predicate d < 2a - a/b must coincide with
    // the reduction d/a + 1/b < 2 in exact arithmetic.
    let mut mismatches = 0usize;
    let mut count = 0usize;
    for na in 1..=8i64 {
        let alpha = rat(na, 4); // 1/4 ..= 2
        for nb in 4..=11i64 {
            let beta = rat(nb, 6);
            if beta <= rat(1, 2) || beta >= rat(2, 1) {
                continue;
            }
            for d in 1..=3i64 {
                count += 1;
                let via_exponent =
                    Rational64::from_integer(d) < exponents::dalang_exponent(alpha, beta);
                let via_reduction = exponents::white_noise_dalang_holds(alpha, beta, d);
                if via_exponent != via_reduction {
                    mismatches += 1;
                }
            }
        }
    }
    checks.push(check(
        "dalang-rational-sweep",
        format!(
            "white-noise condition equals d/a + 1/b < 2 on {count} rational points (mismatches)"
        ),
        mismatches as f64,
        0.5,
    ));
    // Boundary beta = 2/3 at alpha = 2, d = 1 (exact).
    checks.push(bool_check(
        "dalang-boundary-beta",
        "alpha=2, d=1: fails at beta = 2/3, holds just above",
        !exponents::white_noise_dalang_holds(rat(2, 1), rat(2, 3), 1)
            && exponents::white_noise_dalang_holds(rat(2, 1), rat(667, 1000), 1),
    ));
    // Boundary alpha = 1 at beta = 1, d = 1, plain and smoothed.
    checks.push(bool_check(
        "dalang-boundary-alpha",
        "beta=1, d=1: boundary at alpha = 1 for plain and smoothed conditions",
        !exponents::white_noise_dalang_holds(rat(1, 1), rat(1, 1), 1)
            && exponents::white_noise_dalang_holds(rat(1001, 1000), rat(1, 1), 1)
            && !exponents::white_noise_smoothed_holds(rat(1, 1), rat(1, 1), 1, 1)
            && exponents::white_noise_smoothed_holds(rat(1001, 1000), rat(1, 1), 1, 1),
    ));
    // Smoothed reduction at alpha = 2, d = 1: holds throughout beta < 2.
    let mut smoothed_all = true;
    for nb in 4..=11i64 {
        let beta = rat(nb, 6);
        if beta >= rat(2, 1) || beta <= rat(1, 2) {
            continue;
        }
        let ceil = if beta > rat(1, 1) { 2 } else { 1 };
        smoothed_all &= exponents::white_noise_smoothed_holds(rat(2, 1), beta, ceil, 1);
    }
    checks.push(bool_check(
        "dalang-smoothed-reduction",
        "smoothed condition at alpha=2, d=1 reduces to beta < 2",
        smoothed_all,
    ));
    // The f64 path agrees with the reduction away from boundaries.
    let noise = NoiseSpec::white_in_space(TemporalCorrelation::Constant { level: 1.0 });
    let mut f64_mismatch = 0usize;
    for (a, b, d) in [
        (2.0, 1.0, 1usize),
        (2.0, 0.6, 1),
        (1.5, 0.9, 2),
        (1.0, 0.9, 1),
        (2.0, 1.8, 3),
    ] {
        let p = FracParams::new(a, b, d, 1.0)?;
        let holds = crate::spde::dalang_check(&noise, &p, false)?.holds;
        let reduction = d as f64 / a + 1.0 / b < 2.0;
        if holds != reduction {
            f64_mismatch += 1;
        }
    }
    checks.push(check(
        "dalang-f64-agreement",
        "f64 dalang_check agrees with the reduction (mismatches)",
        f64_mismatch as f64,
        0.5,
    ));
    Ok(SuiteReport::new(
        "dalang",
        "criterion 9: Dalang condition reductions and boundaries",
        checks,
    ))
}

/// Criterion 10: existence certificate outcomes.
fn certificate() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let noise = NoiseSpec::white_in_space(TemporalCorrelation::Constant { level: 1.0 });
    let p = FracParams::new(2.0, 0.8, 1, 1.0)?;
    let cert = existence_certificate(&noise, &p, 1.0)?;
    checks.push(bool_check(
        "cert-found",
        format!(
            "white noise (2, 0.8, 1, 1), t=1: certified with N = {:?}, contraction = {:?}",
            cert.n_cutoff, cert.contraction
        ),
        cert.status == CertStatus::Certified
            && cert.contraction.is_some_and(|c| c < 1.0)
            && cert.n_cutoff.is_some_and(f64::is_finite),
    ));
    let bad = FracParams { beta: 0.5, ..p };
    let cert = existence_certificate(&noise, &bad, 1.0)?;
    checks.push(bool_check(
        "cert-beta-half",
        format!("beta = 1/2 reports precondition_failed: {:?}", cert.violated),
        cert.status == CertStatus::PreconditionFailed
            && cert
                .violated
                .as_deref()
                .is_some_and(|v| v.contains("C_nu_beta")),
    ));
    Ok(SuiteReport::new(
        "certificate",
        "criterion 10: existence certificate search",
        checks,
    ))
}

/// Criterion 11: moment-exponent identities, exact where stated.
fn exponents_suite() -> Result<SuiteReport> {
    use num_rational::Rational64;
    use rand::{Rng, SeedableRng};
    let rat = Rational64::new;
    let mut checks = Vec::new();
    // p-exponent reduction at beta = 1, alpha = 2 for kappa in {1/2, 1, 3/2}.
    let mut ok = true;
    for kappa in [rat(1, 2), rat(1, 1), rat(3, 2)] {
        let got = exponents::p_exponent(rat(2, 1), rat(1, 1), kappa);
        let expect = (rat(4, 1) - kappa) / (rat(2, 1) - kappa);
        ok &= got == expect;
    }
    checks.push(bool_check(
        "p-exponent-reduction",
        "p-exponent equals (4-kappa)/(2-kappa) at beta=1, alpha=2 (exact rationals)",
        ok,
    ));
    // theta_series = theta_moment - 1/2 on 100 random rational draws.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_250_814);
    let mut failures = 0usize;
    for _ in 0..100 {
        let alpha = rat(rng.gen_range(1..=16), rng.gen_range(1..=8));
        let beta = rat(rng.gen_range(1..=16), rng.gen_range(1..=8));
        let kappa = rat(rng.gen_range(1..=16), rng.gen_range(1..=8));
        if exponents::theta_series(alpha, beta, kappa)
            != exponents::theta_moment(alpha, beta, kappa) - rat(1, 2)
        {
            failures += 1;
        }
    }
    checks.push(check(
        "theta-identity",
        "theta_series = theta_moment - 1/2 on 100 random rational draws (failures)",
        failures as f64,
        0.5,
    ));
    // t-exponent with riesz-time correlation reduces at beta=1, alpha=2:
    // 1 + (1 - bt) t_base = (4 - 2 bt - kappa)/(2 - kappa).
    let mut ok = true;
    for (bt, kappa) in [(rat(1, 2), rat(1, 2)), (rat(1, 4), rat(1, 1))] {
        let base = exponents::t_exponent_base(rat(2, 1), rat(1, 1), kappa);
        let total = rat(1, 1) + (rat(1, 1) - bt) * base;
        let expect = (rat(4, 1) - rat(2, 1) * bt - kappa) / (rat(2, 1) - kappa);
        ok &= total == expect;
    }
    checks.push(bool_check(
        "t-exponent-reduction",
        "riesz-time t-exponent equals (4-2bt-kappa)/(2-kappa) at beta=1, alpha=2",
        ok,
    ));
    Ok(SuiteReport::new(
        "exponents",
        "criterion 11: moment exponent identities",
        checks,
    ))
}

/// Criterion 12: chaos and lower-bound series match their Mittag-Leffler
/// closed forms; divergence flag flips at the spectral boundary.
fn chaos_ml() -> Result<SuiteReport> {
    use num_rational::Rational64;
    let mut checks = Vec::new();
    // Lower-bound series vs u0^2 E_rho(K t^rho).
    {
        let p = FracParams::new(2.0, 0.8, 1, 1.0)?;
        let noise = NoiseSpec::riesz(TemporalCorrelation::DiracDelta, 0.5);
        let u0 = 1.3;
        let t = 0.9;
        let series = moment_lower_bound(&p, &noise, u0, t)?;
        let k = lower_bound_base(&p, &noise, 0.5)?;
        let rho = exponents::lower_bound_rho(p.alpha, p.beta, 0.5);
        let ml = crate::specfun::mittag_leffler(
            MittagLefflerParams::new(rho, 1.0)?,
            num_complex::Complex64::new(k * t.powf(rho), 0.0),
        )?
        .re;
        checks.push(check(
            "lower-series-ml",
            "lower-bound series vs u0^2 E_rho(K t^rho) (rel err)",
            rel_diff(series, u0 * u0 * ml),
            1e-10,
        ));
    }
    // Upper chaos series vs its closed form. The horizon is picked so the
    // series argument is O(1): x = C C_t Gamma(rho) t^rho with C_t = 2t.
    {
        let p = FracParams::new(1.0, 0.95, 2, 1.0)?;
        let noise = NoiseSpec::riesz(TemporalCorrelation::Constant { level: 1.0 }, 0.1);
        let probe = chaos_second_moment(&p, &noise, 1.0, 1.0, 1)?;
        let rho = 2.0 * probe.theta_series + 1.0;
        let scale = probe.calibration_c * 2.0 * gamma_real(rho);
        let t = (1.0 / scale).powf(1.0 / (1.0 + rho)).min(1.0);
        let rep = chaos_second_moment(&p, &noise, 1.0, t, 80)?;
        let closed = rep.closed_form.ok_or_else(|| {
            Error::NonConvergence("chaos closed form missing in convergent regime".into())
        })?;
        let partial = *rep.partial_sums.last().unwrap();
        checks.push(check(
            "chaos-series-ml",
            "chaos upper series vs u0^2 E_{2 theta + 1}(x) (rel err)",
            rel_diff(partial, closed),
            1e-10,
        ));
        checks.push(bool_check(
            "chaos-ratio-flag",
            "ratio test agrees with the convergence predicate",
            rep.converges == rep.ratio_test_converges,
        ));
        checks.push(bool_check(
            "chaos-n0-term",
            "n = 0 chaos term equals u0^2",
            (rep.terms[0] - 1.0).abs() < 1e-14,
        ));
    }
    // Divergence flag flips exactly at kappa = 2 alpha - alpha / beta.
    {
        let rat = Rational64::new;
        let (alpha, beta) = (rat(1, 1), rat(4, 5));
        let boundary = exponents::dalang_exponent(alpha, beta);
        let at = exponents::theta_series(alpha, beta, boundary);
        let below = exponents::theta_series(alpha, beta, boundary - rat(1, 1_000_000));
        checks.push(bool_check(
            "flag-flip-exact",
            "theta_series = -1/2 exactly at the boundary, > -1/2 below (exact rationals)",
            at == rat(-1, 2) && below > rat(-1, 2),
        ));
        // And the f64 report flips across the boundary.
        let p = FracParams::new(1.0, 0.8, 2, 1.0)?;
        let kb = 2.0 * 1.0 - 1.0 / 0.8;
        let n_lo = NoiseSpec::riesz(TemporalCorrelation::Constant { level: 1.0 }, kb - 1e-6);
        let n_hi = NoiseSpec::riesz(TemporalCorrelation::Constant { level: 1.0 }, kb + 1e-6);
        let lo = chaos_second_moment(&p, &n_lo, 1.0, 1.0, 40)?;
        let hi = chaos_second_moment(&p, &n_hi, 1.0, 1.0, 40)?;
        checks.push(bool_check(
            "flag-flip-f64",
            "convergence flag true below the boundary, false above",
            lo.converges && !hi.converges,
        ));
    }
    Ok(SuiteReport::new(
        "chaos-ml",
        "criterion 12: chaos series closed forms and divergence boundary",
        checks,
    ))
}

/// Criterion 13: simplex integral vs seeded Monte Carlo.
fn simplex() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for n in [2usize, 3, 4] {
        for h in [0.0, 0.5, 1.0] {
            let exact = simplex_integral(h, n, 1.0)?;
            let (est, se) = simplex_integral_mc(h, n, 1.0, 1_000_000, 1_234_567)?;
            let err = (est - exact).abs();
            checks.push(check(
                format!("simplex-n{n}-h{h}"),
                format!("closed form vs 1e6-sample MC, n={n}, h={h} (|err| - 3 SE)"),
                err - 3.0 * se,
                1e-12 * exact.abs().max(1e-300),
            ));
        }
    }
    Ok(SuiteReport::new(
        "simplex",
        "criterion 13: ordered-simplex integral vs Monte Carlo",
        checks,
    ))
}

/// Criterion 14: the convolution theorem on the kernel factorization.
fn convolution() -> Result<SuiteReport> {
    let cfg = EvalConfig::default();
    let mut checks = Vec::new();
    let (alpha, beta, d) = (1.5, 0.8, 1usize);
    // Stable-density block power-scaled by 1/beta.
    let stable = crate::kernels::stable_spec(alpha, d)?;
    let f1 = power_scale(&stable, 1.0 / beta)?.spec;
    // Subordinator-type block H^{1,0}_{1,1}[(beta,1); (1,1/beta)].
    let f2 = HFunctionSpec::new(
        1,
        0,
        vec![ParamPair::new(beta, 1.0)],
        vec![ParamPair::new(1.0, 1.0 / beta)],
    )?;
    let merged = convolve_specs(&f1, &f2)?;
    // The merged block is the Y-kernel block power-scaled by 1/beta.
    let p = FracParams::new(alpha, beta, d, 1.0)?;
    let y_scaled = power_scale(&kernel_spec(KernelKind::Y, &p)?, 1.0 / beta)?.spec;
    checks.push(bool_check(
        "conv-structure",
        "merged spec equals the power-scaled Y-kernel spec",
        merged == y_scaled,
    ));
    // The A/B minima of the condition, as stated for this factorization:
    // A1 = 0, A2 = beta, B1 = d beta / alpha, B2 = +inf.
    let a1 = (1.0 - f1.upper()[0].coeff) / f1.upper()[0].scale;
    let b1 = f1.lower()[0].coeff / f1.lower()[0].scale;
    let a2 = f2.lower()[0].coeff / f2.lower()[0].scale;
    checks.push(bool_check(
        "conv-minima",
        format!("condition minima A1={a1}, A2={a2}, B1={b1}, B2=inf"),
        a1 == 0.0 && (a2 - beta).abs() < 1e-14 && (b1 - d as f64 * beta / alpha).abs() < 1e-14,
    ));
    // Pointwise: int H1(z tau) H2(x / tau) d tau / tau = H_merged(z x).
    let ev1 = HEvaluator::new(f1, cfg.clone())?;
    let ev2 = HEvaluator::new(f2, cfg.clone())?;
    let evm = HEvaluator::new(merged, cfg)?;
    let mut worst: f64 = 0.0;
    for (z, x) in [(0.8, 1.1), (0.5, 0.6), (1.4, 0.9)] {
        let integrand = |tau: f64| {
            let h1 = ev1.eval(z * tau).map(|o| o.value).unwrap_or(0.0);
            let h2 = ev2.eval(x / tau).map(|o| o.value).unwrap_or(0.0);
            h1 * h2 / tau
        };
        let (quad, _) = crate::quad::integrate_log_axis(&integrand, 1e-10, 1e-9, 60.0)?;
        let direct = evm.eval(z * x)?.value;
        worst = worst.max(rel_diff(quad, direct));
    }
    checks.push(check(
        "conv-pointwise",
        "Mellin-convolution quadrature vs merged-spec evaluation (max rel err)",
        worst,
        1e-4,
    ));
    Ok(SuiteReport::new(
        "convolution",
        "criterion 14: convolution theorem on the kernel factorization",
        checks,
    ))
}
