//! Residue expansions of `H^{m,n}_{p,q}(z)` at zero and at infinity.
//!
//! The expansion at zero sums residues of `Hs(s) z^{-s}` over the poles of
//! the lower numerator gammas; coinciding poles produce `log z` powers. The
//! expansion at infinity sums over the upper-family poles and requires them
//! to be simple. Coefficients are assembled in log-space so that deep layers
//! of factorially growing asymptotic coefficients neither overflow nor lose
//! their sign.

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::foxh::{HFunctionSpec, NEAR_RESONANCE_GAP};
use crate::specfun::gamma::{
    digamma_real, is_nonpositive_integer, ln_gamma_sign, trigamma_int,
};
use crate::util::KahanSum;

/// One gamma factor of `Hs`, as the affine argument map `w(s) = c + h s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GammaFactor {
    /// Which family the factor belongs to (determines numerator/denominator).
    pub family: Family,
    /// Row index within the family.
    pub index: usize,
    /// Intercept of the argument map.
    pub intercept: f64,
    /// Slope of the argument map.
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Family {
    LowerNum,
    UpperNum,
    UpperDen,
    LowerDen,
}

impl GammaFactor {
    pub fn is_numerator(&self) -> bool {
        matches!(self.family, Family::LowerNum | Family::UpperNum)
    }

    pub fn arg_at(&self, s: f64) -> f64 {
        self.intercept + self.slope * s
    }
}

pub(crate) fn factors_of(spec: &HFunctionSpec) -> Vec<GammaFactor> {
    let mut fs = Vec::with_capacity(spec.p() + spec.q());
    for (j, pr) in spec.lower().iter().enumerate() {
        if j < spec.m() {
            fs.push(GammaFactor {
                family: Family::LowerNum,
                index: j,
                intercept: pr.coeff,
                slope: pr.scale,
            });
        } else {
            fs.push(GammaFactor {
                family: Family::LowerDen,
                index: j,
                intercept: 1.0 - pr.coeff,
                slope: -pr.scale,
            });
        }
    }
    for (i, pr) in spec.upper().iter().enumerate() {
        if i < spec.n() {
            fs.push(GammaFactor {
                family: Family::UpperNum,
                index: i,
                intercept: 1.0 - pr.coeff,
                slope: -pr.scale,
            });
        } else {
            fs.push(GammaFactor {
                family: Family::UpperDen,
                index: i,
                intercept: pr.coeff,
                slope: pr.scale,
            });
        }
    }
    fs
}

/// `Hs(s)` at real `s`, as `(sign, ln |Hs|)`. Errors on a numerator pole.
pub(crate) fn h_integrand_real(factors: &[GammaFactor], s: f64) -> Result<(f64, f64)> {
    let mut sign = 1.0;
    let mut ln = 0.0;
    for f in factors {
        let w = f.arg_at(s);
        if is_nonpositive_integer(w, 1e-12) {
            if f.is_numerator() {
                return Err(Error::GammaPole(w));
            }
            // Reciprocal gamma vanishes: the whole product is zero.
            return Ok((0.0, f64::NEG_INFINITY));
        }
        let (lg, sg) = ln_gamma_sign(w);
        if f.is_numerator() {
            ln += lg;
            sign *= sg;
        } else {
            ln -= lg;
            sign *= sg;
        }
    }
    Ok((sign, ln))
}

/// Coefficient block of one pole group.
#[derive(Debug, Clone)]
pub(crate) enum GroupCoeffs {
    /// Simple pole: contribution `sign * exp(ln_abs) * z^e`.
    Simple { sign: f64, ln_abs: f64 },
    /// Pole of order N: contribution `z^e * sum_k coeffs[k] (-ln z)^k / k!`,
    /// with `coeffs[k] = p_{N-1-k}` from the Taylor series of
    /// `(s-s0)^N Hs(s)` at the pole.
    Log { coeffs: Vec<f64> },
}

#[derive(Debug, Clone)]
pub(crate) struct SeriesGroup {
    /// Power of z carried by the group (`(b_j+l)/beta_j` at zero,
    /// `(a_i-1-k)/alpha_i` at infinity).
    pub exponent: f64,
    pub coeffs: GroupCoeffs,
}

#[derive(Debug, Clone)]
pub(crate) struct SeriesTable {
    /// Groups sorted so that successive contributions shrink:
    /// ascending exponent at zero, descending at infinity.
    pub groups: Vec<SeriesGroup>,
    /// Smallest gap between distinct pole groups when below the guard.
    pub near_resonant: Option<f64>,
    /// Pole order > 3 or another defect found while building.
    pub defect: Option<Error>,
    pub delta: f64,
    pub a_star: f64,
    /// Convergence radius when `delta == 0`.
    pub radius: f64,
    /// `(mu + 1/2)/delta` and `delta * delta_param^{1/delta}` pieces of the
    /// exponentially small bound, when `delta > 0`.
    pub exp_small: Option<(f64, f64, f64)>,
}

fn exp_small_bound(table: &SeriesTable, z: f64) -> f64 {
    match table.exp_small {
        Some((pow, dd, ln_dp)) => {
            // 10 * z^pow * exp(-delta * (z * delta_param)^{1/delta})
            let ln = pow * z.ln() - dd * ((z.ln() + ln_dp) / table.delta).exp();
            10.0 * ln.exp()
        }
        None => f64::INFINITY,
    }
}

const MAX_POLE_ORDER: usize = 3;

/// Builds the residue table at zero.
pub(crate) fn build_zero_table(spec: &HFunctionSpec, cfg: &EvalConfig) -> SeriesTable {
    let factors = factors_of(spec);
    let ch = spec.characteristics();
    // Enumerate enough layers of every lower-numerator factor, keep the
    // series_terms smallest exponents.
    let mut raw: Vec<(f64, usize, usize)> = Vec::new();
    for (j, pr) in spec.lower()[..spec.m()].iter().enumerate() {
        for l in 0..cfg.series_terms {
            raw.push(((pr.coeff + l as f64) / pr.scale, j, l));
        }
    }
    raw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    raw.truncate(cfg.series_terms);
    let groups_raw = group_by_exponent(raw, cfg.collision_tol);
    let near_resonant = nearest_gap(&groups_raw).filter(|&g| g < NEAR_RESONANCE_GAP);

    let mut groups = Vec::with_capacity(groups_raw.len());
    let mut defect = None;
    for (exponent, members) in groups_raw {
        let s0 = -exponent;
        let built = match members.len() {
            1 => simple_zero_coeff(&factors, members[0], s0),
            2 => log_coeffs_order2(&factors, &members, s0, true),
            3 => log_coeffs_order3(&factors, &members, s0, true),
            order => Err(Error::PoleOrderTooHigh { order }),
        };
        match built {
            Ok(coeffs) => groups.push(SeriesGroup { exponent, coeffs }),
            Err(e) => {
                defect.get_or_insert(e);
                break;
            }
        }
    }

    let exp_small = if ch.delta > 0.0 {
        Some(exp_small_params(spec, ch.delta, ch.mu))
    } else {
        None
    };
    SeriesTable {
        groups,
        near_resonant,
        defect,
        delta: ch.delta,
        a_star: ch.a_star,
        radius: spec.convergence_radius(),
        exp_small,
    }
}

/// Builds the residue table at infinity. Coinciding upper poles are a defect
/// (the paper's expansion requires them simple).
pub(crate) fn build_infinity_table(spec: &HFunctionSpec, cfg: &EvalConfig) -> SeriesTable {
    let factors = factors_of(spec);
    let ch = spec.characteristics();
    let mut raw: Vec<(f64, usize, usize)> = Vec::new();
    for (i, pr) in spec.upper()[..spec.n()].iter().enumerate() {
        for k in 0..cfg.series_terms {
            // Pole at s = (1 - a_i + k)/alpha_i; z-exponent is its negative.
            raw.push(((1.0 - pr.coeff + k as f64) / pr.scale, i, k));
        }
    }
    raw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    raw.truncate(cfg.series_terms);
    let groups_raw = group_by_exponent(raw, cfg.collision_tol);
    let near_resonant = nearest_gap(&groups_raw).filter(|&g| g < NEAR_RESONANCE_GAP);

    let mut groups = Vec::with_capacity(groups_raw.len());
    let mut defect = None;
    for (loc, members) in groups_raw {
        if members.len() > 1 {
            defect.get_or_insert(Error::CoincidentUpperPoles { location: loc });
            break;
        }
        match simple_infinity_coeff(&factors, members[0], loc) {
            Ok(coeffs) => groups.push(SeriesGroup {
                exponent: -loc,
                coeffs,
            }),
            Err(e) => {
                defect.get_or_insert(e);
                break;
            }
        }
    }
    let exp_small = if ch.delta > 0.0 {
        Some(exp_small_params(spec, ch.delta, ch.mu))
    } else {
        None
    };
    SeriesTable {
        groups,
        near_resonant,
        defect,
        delta: ch.delta,
        a_star: ch.a_star,
        radius: spec.convergence_radius(),
        exp_small,
    }
}

fn exp_small_params(spec: &HFunctionSpec, delta: f64, mu: f64) -> (f64, f64, f64) {
    // H(z) ~ C z^{(mu+1/2)/delta} exp(-delta (z dp)^{1/delta}),
    // dp = prod alpha^alpha / prod beta^beta.
    let mut ln_dp = 0.0;
    for p in spec.upper() {
        ln_dp += p.scale * p.scale.ln();
    }
    for p in spec.lower() {
        ln_dp -= p.scale * p.scale.ln();
    }
    ((mu + 0.5) / delta, delta, ln_dp)
}

fn group_by_exponent(
    raw: Vec<(f64, usize, usize)>,
    tol: f64,
) -> Vec<(f64, Vec<(usize, usize)>)> {
    let mut out: Vec<(f64, Vec<(usize, usize)>)> = Vec::new();
    for (e, idx, layer) in raw {
        match out.last_mut() {
            Some((e0, members)) if (e - *e0).abs() <= tol => members.push((idx, layer)),
            _ => out.push((e, vec![(idx, layer)])),
        }
    }
    out
}

fn nearest_gap(groups: &[(f64, Vec<(usize, usize)>)]) -> Option<f64> {
    groups
        .windows(2)
        .map(|w| (w[1].0 - w[0].0).abs())
        .fold(None, |acc, g| Some(acc.map_or(g, |a: f64| a.min(g))))
}

/// Is this factor one of the group members (a lower-numerator factor with
/// matching row index)?
fn is_member(f: &GammaFactor, members: &[(usize, usize)], lower_side: bool) -> bool {
    let fam = if lower_side { Family::LowerNum } else { Family::UpperNum };
    f.family == fam && members.iter().any(|&(idx, _)| idx == f.index)
}

/// h*_{jl} for a simple lower pole, in log space.
fn simple_zero_coeff(
    factors: &[GammaFactor],
    member: (usize, usize),
    s0: f64,
) -> Result<GroupCoeffs> {
    let (j, l) = member;
    let mut sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let beta_j = factors
        .iter()
        .find(|f| f.family == Family::LowerNum && f.index == j)
        .expect("member factor exists")
        .slope;
    let mut ln_abs = -ln_factorial(l) - beta_j.ln();
    for f in factors {
        if f.family == Family::LowerNum && f.index == j {
            continue;
        }
        let w = f.arg_at(s0);
        if is_nonpositive_integer(w, 1e-9) {
            if f.is_numerator() {
                // A second numerator factor is singular here: an undetected
                // coincidence, which the grouping should have caught.
                return Err(Error::PoleCollision { lower: s0, upper: w });
            }
            return Ok(GroupCoeffs::Simple {
                sign: 0.0,
                ln_abs: f64::NEG_INFINITY,
            });
        }
        let (lg, sg) = ln_gamma_sign(w);
        sign *= sg;
        ln_abs += if f.is_numerator() { lg } else { -lg };
    }
    Ok(GroupCoeffs::Simple { sign, ln_abs })
}

/// h_{ik} for a simple upper pole, in log space.
fn simple_infinity_coeff(
    factors: &[GammaFactor],
    member: (usize, usize),
    s0: f64,
) -> Result<GroupCoeffs> {
    let (i, k) = member;
    let mut sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let alpha_i = -factors
        .iter()
        .find(|f| f.family == Family::UpperNum && f.index == i)
        .expect("member factor exists")
        .slope;
    let mut ln_abs = -ln_factorial(k) - alpha_i.ln();
    for f in factors {
        if f.family == Family::UpperNum && f.index == i {
            continue;
        }
        let w = f.arg_at(s0);
        if is_nonpositive_integer(w, 1e-9) {
            if f.is_numerator() {
                return Err(Error::CoincidentUpperPoles { location: s0 });
            }
            return Ok(GroupCoeffs::Simple {
                sign: 0.0,
                ln_abs: f64::NEG_INFINITY,
            });
        }
        let (lg, sg) = ln_gamma_sign(w);
        sign *= sg;
        ln_abs += if f.is_numerator() { lg } else { -lg };
    }
    Ok(GroupCoeffs::Simple { sign, ln_abs })
}

/// First-order Taylor data `(value, derivative)` of one factor of
/// `(s-s0)^N Hs(s)` at `s0`.
fn factor_taylor1(f: &GammaFactor, s0: f64, regularized: bool) -> Result<(f64, f64)> {
    let w0 = f.arg_at(s0);
    if regularized {
        // (s - s0) Gamma(w(s)) with w0 = -n_k.
        let n = (-w0).round();
        debug_assert!(n >= -0.25);
        let nu = n.max(0.0) as usize;
        let a = sign_pow(nu) / (factorial(nu) * f.slope);
        let psi1 = digamma_real(nu as f64 + 1.0)?;
        return Ok((a, a * f.slope * psi1));
    }
    if is_nonpositive_integer(w0, 1e-9) {
        if f.is_numerator() {
            return Err(Error::PoleCollision { lower: s0, upper: w0 });
        }
        // 1/Gamma has a simple zero: series slope' * (-1)^n n! (s-s0).
        let n = (-w0).round().max(0.0) as usize;
        return Ok((0.0, sign_pow(n) * factorial(n) * f.slope));
    }
    let (lg, sg) = ln_gamma_sign(w0);
    let psi = digamma_real(w0)?;
    if f.is_numerator() {
        let v = sg * lg.exp();
        Ok((v, v * f.slope * psi))
    } else {
        let v = sg * (-lg).exp();
        Ok((v, -v * f.slope * psi))
    }
}

/// Second-order Taylor data `(value, d1, d2/2)` of one factor (coefficients
/// of `1, u, u^2` with `u = s - s0`).
fn factor_taylor2(f: &GammaFactor, s0: f64, regularized: bool) -> Result<(f64, f64, f64)> {
    let w0 = f.arg_at(s0);
    let pi2_6 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
    if regularized {
        // (s-s0) Gamma(w) = A exp(c1 h u + c2 h^2 u^2 + ...),
        // c1 = psi(n+1), c2 = pi^2/6 - psi'(n+1)/2.
        let n = (-w0).round().max(0.0) as usize;
        let a = sign_pow(n) / (factorial(n) * f.slope);
        let c1 = digamma_real(n as f64 + 1.0)? * f.slope;
        let c2 = (pi2_6 - 0.5 * trigamma_int(n + 1)) * f.slope * f.slope;
        return Ok((a, a * c1, a * (c2 + 0.5 * c1 * c1)));
    }
    if is_nonpositive_integer(w0, 1e-9) {
        if f.is_numerator() {
            return Err(Error::PoleCollision { lower: s0, upper: w0 });
        }
        // 1/Gamma(w) = (-1)^n n! eps exp(-c1 eps - ...), eps = h u.
        let n = (-w0).round().max(0.0) as usize;
        let lead = sign_pow(n) * factorial(n) * f.slope;
        let c1 = digamma_real(n as f64 + 1.0)?;
        return Ok((0.0, lead, -lead * c1 * f.slope));
    }
    let psi = digamma_real(w0)?;
    // General trigamma via the derivative of digamma is only needed here;
    // a central difference of psi is accurate enough for these O(1) factors.
    let h = 1e-4;
    let psi_p = (digamma_real(w0 + h)? - digamma_real(w0 - h)?) / (2.0 * h);
    let (lg, sg) = ln_gamma_sign(w0);
    let (c1, c2) = if f.is_numerator() {
        (f.slope * psi, 0.5 * f.slope * f.slope * psi_p)
    } else {
        (-f.slope * psi, -0.5 * f.slope * f.slope * psi_p)
    };
    let v = sg * if f.is_numerator() { lg.exp() } else { (-lg).exp() };
    Ok((v, v * c1, v * (c2 + 0.5 * c1 * c1)))
}

/// Residue coefficients for an order-2 pole via analytic log-derivatives.
fn log_coeffs_order2(
    factors: &[GammaFactor],
    members: &[(usize, usize)],
    s0: f64,
    lower_side: bool,
) -> Result<GroupCoeffs> {
    let mut v = 1.0;
    let mut d = 0.0;
    for f in factors {
        let regularized = is_member(f, members, lower_side);
        let (fv, fd) = factor_taylor1(f, s0, regularized)?;
        let nv = v * fv;
        let nd = v * fd + d * fv;
        v = nv;
        d = nd;
    }
    if !(v.is_finite() && d.is_finite()) {
        return Err(Error::SeriesNotConverged { estimate: f64::INFINITY });
    }
    // coeffs[k] = p_{N-1-k}: [p1, p0]
    Ok(GroupCoeffs::Log { coeffs: vec![d, v] })
}

/// Residue coefficients for an order-3 pole. The paper's cases stop at
/// order 2; order 3 goes through Richardson-extrapolated differentiation of
/// the regularized product, assembled from second-order factor data.
fn log_coeffs_order3(
    factors: &[GammaFactor],
    members: &[(usize, usize)],
    s0: f64,
    lower_side: bool,
) -> Result<GroupCoeffs> {
    // Analytic series to order 2 for p0, p1.
    let mut c = [1.0, 0.0, 0.0];
    for f in factors {
        let regularized = is_member(f, members, lower_side);
        let (f0, f1, f2) = factor_taylor2(f, s0, regularized)?;
        c = [
            c[0] * f0,
            c[0] * f1 + c[1] * f0,
            c[0] * f2 + c[1] * f1 + c[2] * f0,
        ];
    }
    // Richardson refinement of p2 from the regularized product evaluated
    // off the pole: P(s) = (s-s0)^3 Hs(s).
    let p2_analytic = c[2];
    let p2 = richardson_p2(factors, s0, c[0]).unwrap_or(p2_analytic);
    if ![c[0], c[1], p2].iter().all(|x| x.is_finite()) {
        return Err(Error::SeriesNotConverged { estimate: f64::INFINITY });
    }
    Ok(GroupCoeffs::Log {
        coeffs: vec![p2, c[1], c[0]],
    })
}

fn richardson_p2(factors: &[GammaFactor], s0: f64, p0: f64) -> Option<f64> {
    let pval = |s: f64| -> Option<f64> {
        let (sg, ln) = h_integrand_real(factors, s).ok()?;
        Some((s - s0).powi(3) * sg * ln.exp())
    };
    let second = |h: f64| -> Option<f64> {
        let a = pval(s0 + h)?;
        let b = pval(s0 - h)?;
        Some((a + b - 2.0 * p0) / (h * h))
    };
    let h = 1e-2;
    let s1 = second(h)?;
    let s2 = second(h / 2.0)?;
    let s4 = second(h / 4.0)?;
    let r1 = (4.0 * s2 - s1) / 3.0;
    let r2 = (4.0 * s4 - s2) / 3.0;
    Some(0.5 * ((16.0 * r2 - r1) / 15.0))
}

fn sign_pow(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Where a series table may be summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SeriesKind {
    Zero,
    Infinity,
}

/// Sums a residue table at argument `z`, returning `(value, error estimate)`.
///
/// Convergent regime: truncation at relative tolerance. Asymptotic regime:
/// truncation at the smallest term, with that term as the estimate. The
/// estimate also carries a cancellation floor from the largest partial sum.
pub(crate) fn sum_table(
    table: &SeriesTable,
    kind: SeriesKind,
    z: f64,
    cfg: &EvalConfig,
) -> Result<(f64, f64)> {
    if let Some(gap) = table.near_resonant {
        return Err(Error::NearResonance { gap });
    }
    let convergent = match kind {
        SeriesKind::Zero => {
            table.delta > 1e-13 || (table.delta.abs() <= 1e-13 && z < 0.995 * table.radius)
        }
        SeriesKind::Infinity => {
            table.delta < -1e-13 || (table.delta.abs() <= 1e-13 && z > 1.005 * table.radius)
        }
    };
    let asymptotic_ok = match kind {
        SeriesKind::Zero => table.delta < 0.0 && table.a_star > 0.0,
        SeriesKind::Infinity => table.delta > 0.0,
    };
    if !convergent && !asymptotic_ok {
        return Err(Error::SeriesNotConverged {
            estimate: f64::INFINITY,
        });
    }

    let ln_z = z.ln();
    let mut sum = KahanSum::new();
    let mut abs_sum: f64 = 0.0;
    let mut prev_mag = f64::INFINITY;
    let mut small_streak = 0usize;
    let mut seen_nonzero = false;
    let mut trunc_est = f64::INFINITY;
    let mut exhausted = true;

    for group in &table.groups {
        let term = eval_group(group, z, ln_z);
        let mag = term.abs();
        if mag > 0.0 {
            seen_nonzero = true;
        }
        if !convergent && seen_nonzero && mag > prev_mag {
            // Asymptotic series started diverging: stop at the smallest term.
            trunc_est = prev_mag.min(mag);
            exhausted = false;
            break;
        }
        sum.add(term);
        abs_sum += mag;
        if mag > 0.0 {
            prev_mag = mag;
        }
        let scale = sum.value().abs().max(1e-300);
        if seen_nonzero && mag <= 0.05 * cfg.rel_tol * scale {
            small_streak += 1;
            if small_streak >= 2 && convergent {
                trunc_est = mag;
                exhausted = false;
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    if let (true, Some(defect)) = (exhausted, table.defect.as_ref()) {
        // The table stopped early on a defect the sum actually reached.
        return Err(defect.clone());
    }
    let value = sum.value();
    if exhausted {
        trunc_est = if table.groups.is_empty() || !seen_nonzero {
            // Empty (or identically vanishing) algebraic expansion: the
            // function is exponentially small; bound it when we can.
            if kind == SeriesKind::Infinity && asymptotic_ok {
                exp_small_bound(table, z)
            } else if convergent {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            prev_mag
        };
    }
    // Each term is assembled fresh from log-gamma sums (~1e-15 relative),
    // so the rounding floor scales with the sum of magnitudes.
    let est = trunc_est + abs_sum * 2e-15;
    Ok((value, est))
}

fn eval_group(group: &SeriesGroup, _z: f64, ln_z: f64) -> f64 {
    match &group.coeffs {
        GroupCoeffs::Simple { sign, ln_abs } => {
            if *sign == 0.0 {
                0.0
            } else {
                sign * (ln_abs + group.exponent * ln_z).exp()
            }
        }
        GroupCoeffs::Log { coeffs } => {
            let ze = (group.exponent * ln_z).exp();
            let mut acc = 0.0;
            let mut lpow = 1.0;
            for (k, c) in coeffs.iter().enumerate() {
                if k > 0 {
                    lpow *= -ln_z / k as f64;
                }
                acc += c * lpow;
            }
            ze * acc
        }
    }
}

/// Ingredients for the kernel-at-origin limit: structural leading terms of
/// the zero expansion as `(exponent, log-power, coefficient)`.
pub(crate) fn structural_terms(table: &SeriesTable) -> Vec<(f64, usize, f64)> {
    let mut out = Vec::new();
    for g in &table.groups {
        match &g.coeffs {
            GroupCoeffs::Simple { sign, ln_abs } => {
                let c = if *sign == 0.0 { 0.0 } else { sign * ln_abs.exp() };
                out.push((g.exponent, 0, c));
            }
            GroupCoeffs::Log { coeffs } => {
                // coeffs[k] multiplies (-ln z)^k / k!
                for (k, c) in coeffs.iter().enumerate() {
                    out.push((g.exponent, k, *c));
                }
            }
        }
    }
    out
}
