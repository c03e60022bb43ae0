//! Symbolic transform rules on H-function parameter blocks.
//!
//! Every operation returns the new spec together with explicit prefactor and
//! argument rewrite rules instead of baking them into the parameters, so
//! chains of transforms stay auditable: if the input represents `H(z)`, the
//! output of a transform represents
//! `coeff * x^{power} * H_new(arg_coeff * x^{arg_power})` in the transform
//! variable `x`.

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::foxh::{HEvaluator, HFunctionSpec, ParamPair};

/// A spec plus the prefactor/argument rewrite it is to be read under.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedSpec {
    pub spec: HFunctionSpec,
    /// Multiplicative constant in front.
    pub coeff: f64,
    /// Power of the transform variable in front.
    pub power: f64,
    /// Constant inside the H-argument.
    pub arg_coeff: f64,
    /// Power of the transform variable inside the H-argument.
    pub arg_power: f64,
}

impl TransformedSpec {
    /// Identity wrapper around a plain spec.
    pub fn plain(spec: HFunctionSpec) -> Self {
        TransformedSpec {
            spec,
            coeff: 1.0,
            power: 0.0,
            arg_coeff: 1.0,
            arg_power: 1.0,
        }
    }

    /// Evaluates `coeff * x^{power} * H(arg_coeff * x^{arg_power})`.
    pub fn evaluate(&self, x: f64, cfg: &EvalConfig) -> Result<f64> {
        let ev = HEvaluator::new(self.spec.clone(), cfg.clone())?;
        self.evaluate_with(&ev, x)
    }

    /// Same, reusing a prepared evaluator for `self.spec`.
    pub fn evaluate_with(&self, ev: &HEvaluator, x: f64) -> Result<f64> {
        debug_assert_eq!(ev.spec(), &self.spec);
        let h = ev.eval(self.arg_coeff * x.powf(self.arg_power))?;
        Ok(self.coeff * x.powf(self.power) * h.value)
    }
}

fn pairs_equal(a: ParamPair, b: ParamPair) -> bool {
    (a.coeff - b.coeff).abs() <= 1e-12 && (a.scale - b.scale).abs() <= 1e-12
}

/// Cancels one matching parameter pair: an upper-numerator pair against a
/// lower-denominator pair, or a lower-numerator pair against an
/// upper-denominator pair. Within each of the four groups the parameter
/// order is immaterial, so any cross-group match is cancellable.
pub fn reduce(spec: &HFunctionSpec) -> Result<HFunctionSpec> {
    let (m, n) = (spec.m(), spec.n());
    let upper = spec.upper();
    let lower = spec.lower();
    // Upper numerator vs lower denominator.
    for i in 0..n {
        for j in m..spec.q() {
            if pairs_equal(upper[i], lower[j]) {
                let mut new_upper = upper.to_vec();
                let mut new_lower = lower.to_vec();
                new_upper.remove(i);
                new_lower.remove(j);
                return HFunctionSpec::new(m, n - 1, new_upper, new_lower);
            }
        }
    }
    // Lower numerator vs upper denominator.
    for j in 0..m {
        for i in n..spec.p() {
            if pairs_equal(lower[j], upper[i]) {
                let mut new_upper = upper.to_vec();
                let mut new_lower = lower.to_vec();
                new_upper.remove(i);
                new_lower.remove(j);
                return HFunctionSpec::new(m - 1, n, new_upper, new_lower);
            }
        }
    }
    Err(Error::NotReducible)
}

/// Repeated reduction until no pair cancels.
pub fn reduce_fully(spec: &HFunctionSpec) -> HFunctionSpec {
    let mut current = spec.clone();
    while let Ok(next) = reduce(&current) {
        current = next;
    }
    current
}

/// Argument inversion: `H^{m,n}_{p,q}(1/z)` equals the swapped spec
/// `H^{n,m}_{q,p}[z | (1-b_j,beta_j); (1-a_i,alpha_i)]`.
pub fn reciprocal_argument(spec: &HFunctionSpec) -> HFunctionSpec {
    let new_upper: Vec<ParamPair> = spec
        .lower()
        .iter()
        .map(|p| ParamPair::new(1.0 - p.coeff, p.scale))
        .collect();
    let new_lower: Vec<ParamPair> = spec
        .upper()
        .iter()
        .map(|p| ParamPair::new(1.0 - p.coeff, p.scale))
        .collect();
    HFunctionSpec::new(spec.n(), spec.m(), new_upper, new_lower)
        .expect("swapping preserves validity")
}

/// Power scaling: `H(z) = k H_new(z^k)` where the new spec carries scales
/// multiplied by `k > 0`.
pub fn power_scale(spec: &HFunctionSpec, k: f64) -> Result<TransformedSpec> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "power_scale requires k > 0, got {k}"
        )));
    }
    let scale = |p: &ParamPair| ParamPair::new(p.coeff, p.scale * k);
    let new = HFunctionSpec::new(
        spec.m(),
        spec.n(),
        spec.upper().iter().map(scale).collect(),
        spec.lower().iter().map(scale).collect(),
    )?;
    Ok(TransformedSpec {
        spec: new,
        coeff: k,
        power: 0.0,
        arg_coeff: 1.0,
        arg_power: k,
    })
}

fn min_lower_ratio(spec: &HFunctionSpec) -> f64 {
    spec.lower()[..spec.m()]
        .iter()
        .map(|p| p.coeff / p.scale)
        .fold(f64::INFINITY, f64::min)
}

fn min_upper_ratio(spec: &HFunctionSpec) -> f64 {
    spec.upper()[..spec.n()]
        .iter()
        .map(|p| (1.0 - p.coeff) / p.scale)
        .fold(f64::INFINITY, f64::min)
}

/// Laplace image of `x^w H(a x^sigma)`:
/// `t^{-(w+1)} H^{m,n+1}_{p+1,q}[a t^{-sigma} | (-w,sigma),(a_i,alpha_i); (b_j,beta_j)]`.
pub fn laplace_transform_spec(
    spec: &HFunctionSpec,
    w: f64,
    a: f64,
    sigma: f64,
) -> Result<TransformedSpec> {
    if !(a > 0.0) || !(sigma > 0.0) {
        return Err(Error::InvalidParameter(
            "laplace transform requires a > 0 and sigma > 0".into(),
        ));
    }
    let ch = spec.characteristics();
    if !(ch.a_star > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "laplace transform requires a* > 0 (a* = {})",
            ch.a_star
        )));
    }
    if !(sigma * min_lower_ratio(spec) + w > -1.0) {
        return Err(Error::PreconditionViolated(
            "laplace transform requires sigma min_j b_j/beta_j + w > -1".into(),
        ));
    }
    let mut upper = vec![ParamPair::new(-w, sigma)];
    upper.extend_from_slice(spec.upper());
    let new = HFunctionSpec::new(spec.m(), spec.n() + 1, upper, spec.lower().to_vec())?;
    Ok(TransformedSpec {
        spec: new,
        coeff: 1.0,
        power: -(w + 1.0),
        arg_coeff: a,
        arg_power: -sigma,
    })
}

/// Hankel (Bessel-weighted radial) image of
/// `int_0^inf (xt)^w J_eta(a (xt)^sigma) H(b t^tau) dt` as a function of x.
pub fn hankel_transform_spec(
    spec: &HFunctionSpec,
    eta: f64,
    w: f64,
    sigma: f64,
    tau: f64,
    a: f64,
    b: f64,
) -> Result<TransformedSpec> {
    if !(a > 0.0 && b > 0.0 && sigma > 0.0 && tau > 0.0) {
        return Err(Error::InvalidParameter(
            "hankel transform requires a, b, sigma, tau > 0".into(),
        ));
    }
    let ch = spec.characteristics();
    let degenerate_ok = ch.a_star == 0.0 && ch.delta == 0.0 && ch.mu < -1.0;
    if !(ch.a_star > 0.0 || degenerate_ok) {
        return Err(Error::PreconditionViolated(format!(
            "hankel transform requires a* > 0, or a* = Delta = 0 with mu < -1 (a* = {}, Delta = {}, mu = {})",
            ch.a_star, ch.delta, ch.mu
        )));
    }
    if !(eta > -0.5) {
        return Err(Error::PreconditionViolated(
            "hankel transform requires eta > -1/2".into(),
        ));
    }
    if !(sigma * eta + w + tau * min_lower_ratio(spec) > -1.0) {
        return Err(Error::PreconditionViolated(
            "hankel transform requires sigma eta + w + tau min_j b_j/beta_j > -1".into(),
        ));
    }
    if !(tau * min_upper_ratio(spec) > w - sigma / 2.0 + 1.0) {
        return Err(Error::PreconditionViolated(
            "hankel transform requires tau min_i (1-a_i)/alpha_i > w - sigma/2 + 1".into(),
        ));
    }
    let half = tau / (2.0 * sigma);
    let front = ParamPair::new(1.0 - (w + 1.0) / (2.0 * sigma) - eta / 2.0, half);
    let back = ParamPair::new(1.0 - (w + 1.0) / (2.0 * sigma) + eta / 2.0, half);
    let mut upper = vec![front];
    upper.extend_from_slice(spec.upper());
    upper.push(back);
    let new = HFunctionSpec::new(spec.m(), spec.n() + 1, upper, spec.lower().to_vec())?;
    let two_over_a = 2.0 / a;
    Ok(TransformedSpec {
        spec: new,
        coeff: two_over_a.powf((w + 1.0) / sigma) / (2.0 * sigma),
        power: -1.0,
        arg_coeff: b * two_over_a.powf(tau / sigma),
        arg_power: -tau,
    })
}

/// Riemann–Liouville derivative of order `frac_order` in (0,1) applied to
/// `t^w H(t^sigma)`:
/// `x^{w-frac_order} H^{m,n+1}_{p+1,q+1}[x^sigma | (-w,sigma),... ; ..., (-w+frac_order,sigma)]`.
pub fn rl_derivative_spec(
    spec: &HFunctionSpec,
    frac_order: f64,
    w: f64,
    sigma: f64,
) -> Result<TransformedSpec> {
    if !(frac_order > 0.0 && frac_order < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "fractional order must lie in (0,1), got {frac_order}"
        )));
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter("sigma must be positive".into()));
    }
    let ch = spec.characteristics();
    if !(ch.a_star > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "RL derivative requires a* > 0 (a* = {})",
            ch.a_star
        )));
    }
    if !(sigma * min_lower_ratio(spec) + w > -1.0) {
        return Err(Error::PreconditionViolated(
            "RL derivative requires sigma min_j b_j/beta_j + w > -1".into(),
        ));
    }
    let mut upper = vec![ParamPair::new(-w, sigma)];
    upper.extend_from_slice(spec.upper());
    let mut lower = spec.lower().to_vec();
    lower.push(ParamPair::new(-w + frac_order, sigma));
    let new = HFunctionSpec::new(spec.m(), spec.n() + 1, upper, lower)?;
    Ok(TransformedSpec {
        spec: new,
        coeff: 1.0,
        power: w - frac_order,
        arg_coeff: 1.0,
        arg_power: sigma,
    })
}

/// Mellin convolution of two H-functions:
/// `int_0^inf H1(z t) H2(x/t) dt/t = H_merged(z x)` with the interleaved
/// parameter rows, under one of five regularity alternatives plus the four
/// `A/B` positivity inequalities.
pub fn convolve_specs(s1: &HFunctionSpec, s2: &HFunctionSpec) -> Result<HFunctionSpec> {
    let c1 = s1.characteristics();
    let c2 = s2.characteristics();
    // The source theorem announces four alternatives but lists five; all
    // five are accepted here.
    let cond = (c1.a_star > 0.0 && c2.a_star >= 0.0 && c2.delta != 0.0)
        || (c1.a_star >= 0.0 && c2.a_star > 0.0 && c1.delta != 0.0)
        || (c1.a_star == 0.0 && c1.delta == 0.0 && c1.mu < -1.0 && c2.a_star > 0.0)
        || (c2.a_star == 0.0 && c2.delta == 0.0 && c2.mu < -1.0 && c1.a_star > 0.0)
        || (c1.a_star == 0.0
            && c1.delta == 0.0
            && c1.mu < -1.0
            && c2.a_star == 0.0
            && c2.delta == 0.0
            && c2.mu < -1.0);
    if !cond {
        return Err(Error::PreconditionViolated(
            "convolution: none of the five regularity alternatives holds".into(),
        ));
    }
    let a1 = min_upper_ratio(s1);
    let b1 = min_lower_ratio(s1);
    let a2 = min_lower_ratio(s2);
    let b2 = min_upper_ratio(s2);
    for (name, v) in [
        ("A1+B1", a1 + b1),
        ("A2+B2", a2 + b2),
        ("A1+A2", a1 + a2),
        ("B1+B2", b1 + b2),
    ] {
        if !(v > 0.0) {
            return Err(Error::PreconditionViolated(format!(
                "convolution inequality {name} > 0 fails ({name} = {v})"
            )));
        }
    }
    let mut upper = Vec::with_capacity(s1.p() + s2.p());
    upper.extend_from_slice(&s1.upper()[..s1.n()]);
    upper.extend_from_slice(s2.upper());
    upper.extend_from_slice(&s1.upper()[s1.n()..]);
    let mut lower = Vec::with_capacity(s1.q() + s2.q());
    lower.extend_from_slice(&s1.lower()[..s1.m()]);
    lower.extend_from_slice(s2.lower());
    lower.extend_from_slice(&s1.lower()[s1.m()..]);
    HFunctionSpec::new(s1.m() + s2.m(), s1.n() + s2.n(), upper, lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reduce_cancels_padded_exponential() {
        // H^{2,0}_{1,2}[z | (1/2,1); (1/2,1),(0,1)]: the (1/2,1) pair cancels
        // between the lower numerator and the upper denominator, leaving exp(-z).
        let padded = HFunctionSpec::new(
            2,
            0,
            vec![ParamPair::new(0.5, 1.0)],
            vec![ParamPair::new(0.5, 1.0), ParamPair::new(0.0, 1.0)],
        )
        .unwrap();
        let reduced = reduce(&padded).unwrap();
        assert_eq!(reduced, HFunctionSpec::exponential());

        let cfg = EvalConfig::default();
        let ev_pad = HEvaluator::new(padded, cfg.clone()).unwrap();
        let ev_red = HEvaluator::new(reduced, cfg).unwrap();
        for &z in &[0.5, 1.0, 2.0] {
            assert_relative_eq!(
                ev_pad.eval(z).unwrap().value,
                ev_red.eval(z).unwrap().value,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn reduce_errors_without_match() {
        assert!(matches!(
            reduce(&HFunctionSpec::exponential()),
            Err(Error::NotReducible)
        ));
    }

    #[test]
    fn reciprocal_is_involutive_and_numerically_consistent() {
        let spec = HFunctionSpec::mittag_leffler(0.8, 1.1).unwrap();
        let twice = reciprocal_argument(&reciprocal_argument(&spec));
        assert_eq!(spec, twice);

        // eval(new, z) = eval(old, 1/z) on the exponential spec.
        let cfg = EvalConfig::default();
        let old = HFunctionSpec::exponential();
        let new = reciprocal_argument(&old);
        let ev_old = HEvaluator::new(old, cfg.clone()).unwrap();
        let ev_new = HEvaluator::new(new, cfg).unwrap();
        for &z in &[2.0, 0.5] {
            assert_relative_eq!(
                ev_new.eval(z).unwrap().value,
                ev_old.eval(1.0 / z).unwrap().value,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn power_scale_identity() {
        let spec = HFunctionSpec::exponential();
        // k = 1 is the identity.
        let t = power_scale(&spec, 1.0).unwrap();
        assert_eq!(t.spec, spec);
        assert_relative_eq!(t.coeff, 1.0);

        // k = 2: eval(old, z) = 2 eval(new, z^2).
        let cfg = EvalConfig::default();
        let t = power_scale(&spec, 2.0).unwrap();
        let ev_old = HEvaluator::new(spec, cfg.clone()).unwrap();
        let ev_new = HEvaluator::new(t.spec.clone(), cfg).unwrap();
        for &z in &[0.25, 1.0, 4.0] {
            let lhs = ev_old.eval(z).unwrap().value;
            let rhs = t.coeff * ev_new.eval(z.powf(t.arg_power)).unwrap().value;
            assert_relative_eq!(lhs, rhs, max_relative = 1e-8);
        }
        assert!(power_scale(&HFunctionSpec::exponential(), 0.0).is_err());
    }

    #[test]
    fn laplace_of_exponential_is_geometric() {
        // L[exp(-x)](t) = 1/(1+t); the transformed spec must reproduce it.
        let t = laplace_transform_spec(&HFunctionSpec::exponential(), 0.0, 1.0, 1.0).unwrap();
        let cfg = EvalConfig::default();
        for &s in &[0.5, 1.0, 2.0] {
            assert_relative_eq!(
                t.evaluate(s, &cfg).unwrap(),
                1.0 / (1.0 + s),
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn rl_derivative_of_exponential() {
        // D^a e^{-t} = x^{-a} E_{1,1-a}(-x).
        let a = 0.3;
        let t = rl_derivative_spec(&HFunctionSpec::exponential(), a, 0.0, 1.0).unwrap();
        let cfg = EvalConfig::default();
        let x = 1.5f64;
        let got = t.evaluate(x, &cfg).unwrap();
        // Oracle: x^{-a} sum (-x)^l / Gamma(l + 1 - a).
        let mut s = 0.0;
        let mut term;
        for l in 0..60 {
            term = (-x).powi(l) * crate::specfun::gamma::recip_gamma_real(l as f64 + 1.0 - a);
            s += term;
        }
        assert_relative_eq!(got, x.powf(-a) * s, max_relative = 1e-8);
    }

    #[test]
    fn convolution_conditions_reported() {
        // Two exponential specs: n = 0 on both sides makes A1 = B2 = inf,
        // B1 = 0, A2 = 0, so A1+B1 > 0 holds but ... A2+B2 = inf, B1+B2 = inf,
        // A1+A2 = inf; all inequalities hold, condition (1) holds too
        // (a1* > 0, a2* > 0, delta2 = 1 != 0).
        let e = HFunctionSpec::exponential();
        let merged = convolve_specs(&e, &e).unwrap();
        assert_eq!(merged.m(), 2);
        assert_eq!(merged.q(), 2);

        // Force a failing inequality: B1 + B2 = 0 when both sides have a
        // lower numerator pole at 0 and no upper rows.
        let err = convolve_specs(&e, &reciprocal_argument(&e));
        assert!(err.is_err());
    }
}
