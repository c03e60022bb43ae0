//! Fundamental solutions of the space-time fractional diffusion equation
//! `(d^beta/dt^beta + (nu/2)(-Laplace)^{alpha/2}) u = f`:
//!
//! * `Z` propagates the highest-order initial condition,
//! * `Y` propagates the forcing through the Duhamel formula,
//! * `Z* = dZ/dt` (for beta in (1,2)) propagates the zeroth initial condition,
//!
//! together with their Fourier symbols, the spherically symmetric stable
//! densities, the initial-value field `J_0`, Duhamel solves, the
//! nonnegativity classification, and the envelope bound used by the SPDE
//! layer. Each evaluation path is paired with an independent quadrature
//! oracle in [`oracle`].

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::foxh::{HEvaluator, HFunctionSpec, ParamPair, Route};
use crate::specfun::{MittagLeffler, MittagLefflerParams};

/// Parameter tuple `(alpha, beta, d, nu, lambda)` of the equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    /// Spatial order, in (0, 2].
    pub alpha: f64,
    /// Temporal order, in (1/2, 2).
    pub beta: f64,
    /// Spatial dimension.
    pub d: usize,
    /// Diffusivity, positive.
    pub nu: f64,
    /// Noise strength; carried here but only the SPDE layer uses it.
    pub lambda: f64,
}

impl FracParams {
    pub fn new(alpha: f64, beta: f64, d: usize, nu: f64) -> Result<Self> {
        let p = FracParams {
            alpha,
            beta,
            d,
            nu,
            lambda: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 2], got {}",
                self.alpha
            )));
        }
        if !(self.beta > 0.5 && self.beta < 2.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must lie in (1/2, 2), got {}",
                self.beta
            )));
        }
        if self.d == 0 {
            return Err(Error::InvalidParameter("d must be >= 1".into()));
        }
        if !(self.nu > 0.0) || !self.nu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "nu must be positive, got {}",
                self.nu
            )));
        }
        if !self.lambda.is_finite() {
            return Err(Error::InvalidParameter("lambda must be finite".into()));
        }
        Ok(())
    }

    /// Smallest integer >= beta, in {1, 2}.
    pub fn ceil_beta(&self) -> usize {
        self.beta.ceil() as usize
    }

    /// Argument of the H-function: `r^alpha / (2^{alpha-1} nu t^beta)`.
    pub fn h_argument(&self, t: f64, r: f64) -> f64 {
        r.powf(self.alpha) * self.arg_coeff(t)
    }

    /// Coefficient `1 / (2^{alpha-1} nu t^beta)`.
    pub fn arg_coeff(&self, t: f64) -> f64 {
        1.0 / (2f64.powf(self.alpha - 1.0) * self.nu * t.powf(self.beta))
    }
}

/// Which fundamental solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Z,
    Y,
    Zstar,
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelKind::Z => write!(f, "z"),
            KernelKind::Y => write!(f, "y"),
            KernelKind::Zstar => write!(f, "zstar"),
        }
    }
}

/// H-function block of the requested kernel; the upper row's second pair is
/// the only difference between the three.
pub fn kernel_spec(kind: KernelKind, params: &FracParams) -> Result<HFunctionSpec> {
    params.validate()?;
    if kind == KernelKind::Zstar && params.beta <= 1.0 {
        return Err(Error::PreconditionViolated(
            "Z* requires beta in (1, 2)".into(),
        ));
    }
    let (alpha, beta, d) = (params.alpha, params.beta, params.d as f64);
    let second = match kind {
        KernelKind::Z => ParamPair::new(params.ceil_beta() as f64, beta),
        KernelKind::Y => ParamPair::new(beta, beta),
        KernelKind::Zstar => ParamPair::new(1.0, beta),
    };
    HFunctionSpec::new(
        2,
        1,
        vec![ParamPair::new(1.0, 1.0), second],
        vec![
            ParamPair::new(d / 2.0, alpha / 2.0),
            ParamPair::new(1.0, 1.0),
            ParamPair::new(1.0, alpha / 2.0),
        ],
    )
}

/// H-function block of the spherically symmetric alpha-stable density.
pub fn stable_spec(alpha: f64, d: usize) -> Result<HFunctionSpec> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 2], got {alpha}"
        )));
    }
    HFunctionSpec::new(
        1,
        1,
        vec![ParamPair::new(1.0, 1.0)],
        vec![
            ParamPair::new(d as f64 / 2.0, alpha / 2.0),
            ParamPair::new(1.0, alpha / 2.0),
        ],
    )
}

/// One kernel value with its route and error estimate, as dumped to CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    /// None when the value came from the origin limit.
    pub route: Option<Route>,
    pub est_error: f64,
}

/// Cached evaluator for one `(kind, params)` pair; reusable across `(t, r)`
/// grids, which share a single H-function table.
#[derive(Debug)]
pub struct KernelEvaluator {
    kind: KernelKind,
    params: FracParams,
    h: HEvaluator,
}

impl KernelEvaluator {
    pub fn new(kind: KernelKind, params: FracParams, cfg: EvalConfig) -> Result<Self> {
        let spec = kernel_spec(kind, &params)?;
        Ok(KernelEvaluator {
            kind,
            params,
            h: HEvaluator::new(spec, cfg)?,
        })
    }

    pub fn spec(&self) -> &HFunctionSpec {
        self.h.spec()
    }

    pub fn params(&self) -> &FracParams {
        &self.params
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    fn t_prefactor(&self, t: f64) -> f64 {
        let p = &self.params;
        let d_half = p.d as f64 / 2.0;
        let base = std::f64::consts::PI.powf(-d_half);
        match self.kind {
            KernelKind::Z => base * t.powi(p.ceil_beta() as i32 - 1),
            KernelKind::Y => base * t.powf(p.beta - 1.0),
            KernelKind::Zstar => base,
        }
    }

    /// Kernel value at time `t > 0` and radius `r = |x| >= 0`. The origin is
    /// evaluated as a limit of the residue expansion and rejected when the
    /// kernel genuinely diverges there.
    pub fn eval(&self, t: f64, r: f64) -> Result<KernelValue> {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("t must be > 0, got {t}")));
        }
        if !(r >= 0.0) {
            return Err(Error::InvalidParameter(format!("r must be >= 0, got {r}")));
        }
        let p = &self.params;
        if r == 0.0 {
            let lim = self
                .h
                .origin_limit(p.arg_coeff(t), p.alpha, p.d as f64)
                .map_err(|e| match e {
                    Error::SingularAtOrigin(msg) => {
                        Error::SingularAtOrigin(format!("{} kernel at r = 0: {msg}", self.kind))
                    }
                    other => other,
                })?;
            return Ok(KernelValue {
                value: self.t_prefactor(t) * lim,
                route: None,
                est_error: 0.0,
            });
        }
        let z = p.h_argument(t, r);
        let out = self.h.eval(z)?;
        let pref = self.t_prefactor(t) * r.powi(-(p.d as i32));
        Ok(KernelValue {
            value: pref * out.value,
            route: Some(out.route),
            est_error: pref.abs() * out.abs_err,
        })
    }

    pub fn eval_value(&self, t: f64, r: f64) -> Result<f64> {
        Ok(self.eval(t, r)?.value)
    }
}

/// `Z(t, x)` at radius `r = |x|`.
pub fn z_kernel(params: &FracParams, t: f64, r: f64) -> Result<f64> {
    KernelEvaluator::new(KernelKind::Z, *params, EvalConfig::default())?.eval_value(t, r)
}

/// `Y(t, x)` at radius `r = |x|`.
pub fn y_kernel(params: &FracParams, t: f64, r: f64) -> Result<f64> {
    KernelEvaluator::new(KernelKind::Y, *params, EvalConfig::default())?.eval_value(t, r)
}

/// `Z*(t, x) = dZ/dt` at radius `r = |x|`; requires beta in (1, 2).
pub fn zstar_kernel(params: &FracParams, t: f64, r: f64) -> Result<f64> {
    KernelEvaluator::new(KernelKind::Zstar, *params, EvalConfig::default())?.eval_value(t, r)
}

fn ml_params_for(kind: KernelKind, params: &FracParams) -> Result<MittagLefflerParams> {
    let mu = match kind {
        KernelKind::Z => params.ceil_beta() as f64,
        KernelKind::Y => params.beta,
        KernelKind::Zstar => {
            if params.beta <= 1.0 {
                return Err(Error::PreconditionViolated(
                    "Z* requires beta in (1, 2)".into(),
                ));
            }
            1.0
        }
    };
    MittagLefflerParams::new(params.beta, mu)
}

/// Fourier transforms of the fundamental solutions:
/// `F Z = t^{ceil(beta)-1} E_{beta,ceil(beta)}(-nu t^beta |xi|^alpha / 2)`,
/// `F Y = t^{beta-1} E_{beta,beta}(...)`, `F Z* = E_beta(...)`.
pub fn fourier_kernel(kind: KernelKind, params: &FracParams, t: f64, xi_norm: f64) -> Result<f64> {
    params.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be > 0, got {t}")));
    }
    let ml = MittagLeffler::new(ml_params_for(kind, params)?, EvalConfig::default());
    let arg = 0.5 * params.nu * t.powf(params.beta) * xi_norm.powf(params.alpha);
    let e = ml.eval_neg(arg)?;
    Ok(match kind {
        KernelKind::Z => t.powi(params.ceil_beta() as i32 - 1) * e,
        KernelKind::Y => t.powf(params.beta - 1.0) * e,
        KernelKind::Zstar => e,
    })
}

/// Cached evaluator for the spherically symmetric alpha-stable density with
/// characteristic function `exp(-|xi|^alpha)`.
#[derive(Debug)]
pub struct StableDensity {
    alpha: f64,
    d: usize,
    h: HEvaluator,
}

impl StableDensity {
    pub fn new(alpha: f64, d: usize, cfg: EvalConfig) -> Result<Self> {
        Ok(StableDensity {
            alpha,
            d,
            h: HEvaluator::new(stable_spec(alpha, d)?, cfg)?,
        })
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        let d_half = self.d as f64 / 2.0;
        let base = std::f64::consts::PI.powf(-d_half);
        if r == 0.0 {
            let lim = self
                .h
                .origin_limit(2f64.powf(-self.alpha), self.alpha, self.d as f64)?;
            return Ok(base * lim);
        }
        let z = (r / 2.0).powf(self.alpha);
        Ok(base * r.powi(-(self.d as i32)) * self.h.eval(z)?.value)
    }
}

/// Density of the d-dimensional spherically symmetric alpha-stable law.
pub fn stable_density(alpha: f64, d: usize, r: f64) -> Result<f64> {
    StableDensity::new(alpha, d, EvalConfig::default())?.eval(r)
}

/// Nonnegativity certification status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certify {
    CertifiedNonneg,
    Unknown,
}

/// Per-kernel certification for a parameter set, with the matched case of
/// the three certified regimes (when any).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonnegCase {
    /// 1: beta <= 1; 2: alpha = 2, d in {2,3}; 3: d = 1, beta <= alpha.
    pub case: Option<u8>,
    pub z: Certify,
    pub y: Certify,
    /// None when beta <= 1 (Z* undefined there).
    pub zstar: Option<Certify>,
}

impl NonnegCase {
    /// Z and Y both certified.
    pub fn certified(&self) -> bool {
        self.z == Certify::CertifiedNonneg && self.y == Certify::CertifiedNonneg
    }
}

/// Classifies a parameter set against the three certified-nonnegative
/// regimes. Whether Y stays nonnegative for beta in (1,2), alpha < 2, d >= 2
/// is open; such sets report `Unknown` regardless of what scans observe.
pub fn nonnegativity_case(params: &FracParams) -> Result<NonnegCase> {
    params.validate()?;
    let (alpha, beta, d) = (params.alpha, params.beta, params.d);
    if beta <= 1.0 {
        return Ok(NonnegCase {
            case: Some(1),
            z: Certify::CertifiedNonneg,
            y: Certify::CertifiedNonneg,
            zstar: None,
        });
    }
    // Case 3 also certifies Z*, so it takes precedence over case 2.
    if d == 1 && alpha >= beta {
        return Ok(NonnegCase {
            case: Some(3),
            z: Certify::CertifiedNonneg,
            y: Certify::CertifiedNonneg,
            zstar: Some(Certify::CertifiedNonneg),
        });
    }
    if (alpha - 2.0).abs() < 1e-12 && (d == 2 || d == 3) {
        return Ok(NonnegCase {
            case: Some(2),
            z: Certify::CertifiedNonneg,
            y: Certify::CertifiedNonneg,
            zstar: Some(Certify::Unknown),
        });
    }
    Ok(NonnegCase {
        case: None,
        z: Certify::Unknown,
        y: Certify::Unknown,
        zstar: Some(Certify::Unknown),
    })
}

/// Calibrated envelope `|Y(t,x)| <= C t^{beta-1-beta d/alpha} Theta(x / t^{beta/alpha})`
/// with `Theta(u) = 1 / (u^{alpha+d} + u^{d-zeta alpha})`.
#[derive(Debug, Clone)]
pub struct Envelope {
    pub params: FracParams,
    pub zeta: f64,
    /// Constant from maximizing the ratio over the calibration grid.
    pub c: f64,
    /// Identifier of the calibration grid baked into reports.
    pub grid_id: String,
}

impl Envelope {
    pub fn theta(&self, u: f64) -> f64 {
        let (a, d) = (self.params.alpha, self.params.d as f64);
        1.0 / (u.powf(a + d) + u.powf(d - self.zeta * a))
    }

    /// The envelope value at `(t, r)`.
    pub fn bound(&self, t: f64, r: f64) -> f64 {
        let p = &self.params;
        let scale = t.powf(p.beta - 1.0 - p.beta * p.d as f64 / p.alpha);
        self.c * scale * self.theta(r / t.powf(p.beta / p.alpha))
    }
}

/// Ratio `|H(z)| (z^{zeta+1} + 1) / z^zeta` of the Y-kernel H-function, the
/// quantity bounded by the envelope lemma.
pub fn esth_ratio(h: &HEvaluator, zeta: f64, z: f64) -> Result<f64> {
    let v = h.eval(z)?.value;
    Ok(v.abs() * (z.powf(zeta + 1.0) + 1.0) / z.powf(zeta))
}

/// Calibrates the envelope constant as the maximum ratio over a log grid of
/// H-arguments (default 200 points on [1e-6, 1e6]).
pub fn calibrate_envelope(
    params: &FracParams,
    zeta: f64,
    cfg: &EvalConfig,
    grid_points: usize,
) -> Result<Envelope> {
    params.validate()?;
    let max_zeta = (params.d as f64 / params.alpha).min(2.0);
    if !(zeta > 0.0 && zeta < max_zeta) {
        return Err(Error::InvalidParameter(format!(
            "zeta must lie in (0, {max_zeta}), got {zeta}"
        )));
    }
    let h = HEvaluator::new(kernel_spec(KernelKind::Y, params)?, cfg.clone())?;
    let d = params.d as f64;
    let base = std::f64::consts::PI.powf(-d / 2.0);
    // Ratio in the u variable: |Y|-part / Theta with t scaled out; the
    // argument coefficient at t = 1 relates u to z by z = c u^alpha.
    let c_arg = params.arg_coeff(1.0);
    let mut cmax: f64 = 0.0;
    for z in crate::util::log_grid(1e-6, 1e6, grid_points) {
        let u = (z / c_arg).powf(1.0 / params.alpha);
        let hval = h.eval(z)?.value;
        let theta = 1.0 / (u.powf(params.alpha + d) + u.powf(d - zeta * params.alpha));
        let ratio = base * u.powf(-d) * hval.abs() / theta;
        if ratio > cmax {
            cmax = ratio;
        }
    }
    Ok(Envelope {
        params: *params,
        zeta,
        c: cmax,
        grid_id: format!("log[1e-6,1e6]x{grid_points}"),
    })
}

/// One-shot envelope bound value at `(t, r)`.
pub fn envelope_bound(params: &FracParams, zeta: f64, t: f64, r: f64) -> Result<f64> {
    Ok(calibrate_envelope(params, zeta, &EvalConfig::default(), 200)?.bound(t, r))
}

/// Initial data for the Cauchy problem: `ceil(beta)` functions.
#[derive(Debug, Clone)]
pub enum InitialData {
    /// Constant initial conditions `u_k(x) = c_k`.
    Constant(Vec<f64>),
    /// Uniformly sampled functions on a grid (d = 1 only).
    Sampled(Vec<GridFn>),
}

/// Uniform grid samples of a bounded function on `[x0, x0 + dx (n-1)]`,
/// assumed negligible outside.
#[derive(Debug, Clone)]
pub struct GridFn {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl InitialData {
    pub fn count(&self) -> usize {
        match self {
            InitialData::Constant(v) => v.len(),
            InitialData::Sampled(v) => v.len(),
        }
    }

    fn check(&self, params: &FracParams) -> Result<()> {
        if self.count() != params.ceil_beta() {
            return Err(Error::InvalidParameter(format!(
                "initial data carries {} functions but ceil(beta) = {}",
                self.count(),
                params.ceil_beta()
            )));
        }
        if let InitialData::Sampled(grids) = self {
            if params.d != 1 {
                return Err(Error::InvalidParameter(
                    "sampled initial data requires d = 1".into(),
                ));
            }
            for g in grids {
                if g.values.len() < 2 || !(g.dx > 0.0) {
                    return Err(Error::InvalidParameter(
                        "sampled grid needs >= 2 points and dx > 0".into(),
                    ));
                }
                if g.values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "sampled values must be bounded".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// J_0 evaluation result; the computation proceeds even when it had to use
/// an uncertified Z*, but says so.
#[derive(Debug, Clone, PartialEq)]
pub struct J0Value {
    pub value: f64,
    /// Set when beta > 1 and the Z* kernel entering the field has no
    /// nonnegativity certificate.
    pub zstar_uncertified: bool,
}

/// Homogeneous-problem field `J_0(t, x)`.
///
/// Constant data has the closed form `u_0` (beta <= 1) or `u_0 + t u_1`
/// (beta > 1), from the unit mass of `Z*` and the mass `t` of `Z`. Sampled
/// data (d = 1) is convolved by trapezoid quadrature: `u_0 * Z` for
/// beta <= 1, and `u_1 * Z + u_0 * Z*` for beta > 1.
pub fn j0_field(params: &FracParams, init: &InitialData, t: f64, x: f64) -> Result<J0Value> {
    params.validate()?;
    init.check(params)?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be > 0, got {t}")));
    }
    let two_ic = params.ceil_beta() == 2;
    let zstar_uncertified =
        two_ic && nonnegativity_case(params)?.zstar != Some(Certify::CertifiedNonneg);
    match init {
        InitialData::Constant(c) => {
            let value = if two_ic { c[0] + t * c[1] } else { c[0] };
            Ok(J0Value {
                value,
                zstar_uncertified,
            })
        }
        InitialData::Sampled(grids) => {
            let cfg = EvalConfig::default();
            let mut value = 0.0;
            if two_ic {
                // u_1 rides on Z, u_0 on Z* = dZ/dt.
                let z_ev = KernelEvaluator::new(KernelKind::Z, *params, cfg.clone())?;
                let zs_ev = KernelEvaluator::new(KernelKind::Zstar, *params, cfg)?;
                value += convolve_grid(&z_ev, &grids[1], t, x)?;
                value += convolve_grid(&zs_ev, &grids[0], t, x)?;
            } else {
                let z_ev = KernelEvaluator::new(KernelKind::Z, *params, cfg)?;
                value += convolve_grid(&z_ev, &grids[0], t, x)?;
            }
            Ok(J0Value {
                value,
                zstar_uncertified,
            })
        }
    }
}

/// Trapezoid convolution `int u(y) K(t, x - y) dy` over the grid support.
fn convolve_grid(kernel: &KernelEvaluator, grid: &GridFn, t: f64, x: f64) -> Result<f64> {
    let n = grid.values.len();
    let mut acc = 0.0;
    for (j, &u) in grid.values.iter().enumerate() {
        let y = grid.x0 + grid.dx * j as f64;
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        if u != 0.0 {
            acc += w * u * kernel.eval_value(t, (x - y).abs())?;
        }
    }
    Ok(acc * grid.dx)
}

/// Mild solution of the deterministic problem by Duhamel's formula:
/// `u(t,x) = J_0(t,x) + int_0^t int f(s,y) Y(t-s, x-y) dy ds` (d = 1).
pub fn duhamel_solve<F>(
    params: &FracParams,
    init: &InitialData,
    forcing: F,
    t: f64,
    x: f64,
    abs_tol: f64,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    params.validate()?;
    if params.d != 1 {
        return Err(Error::InvalidParameter(
            "duhamel_solve quadrature supports d = 1".into(),
        ));
    }
    let j0 = j0_field(params, init, t, x)?.value;
    let cfg = EvalConfig::default();
    let y_ev = KernelEvaluator::new(KernelKind::Y, *params, cfg)?;
    let beta = params.beta;

    // Inner spatial integral against Y(w, x - y), window grown until the
    // tail shells stop contributing.
    let spatial = |w: f64, s: f64| -> Result<f64> {
        let scale =
            (2f64.powf(params.alpha - 1.0) * params.nu * w.powf(beta)).powf(1.0 / params.alpha);
        let mut radius = (10.0 * scale).max(4.0);
        let integrand = |y: f64| {
            let r = (x - y).abs().max(1e-12);
            forcing(s, y) * y_ev.eval_value(w, r).unwrap_or(0.0)
        };
        let (mut total, _) =
            crate::quad::adaptive(&integrand, x - radius, x + radius, abs_tol * 0.02, 1e-9)?;
        for _ in 0..16 {
            let (left, _) = crate::quad::adaptive(
                &integrand,
                x - 2.0 * radius,
                x - radius,
                abs_tol * 0.02,
                1e-9,
            )?;
            let (right, _) = crate::quad::adaptive(
                &integrand,
                x + radius,
                x + 2.0 * radius,
                abs_tol * 0.02,
                1e-9,
            )?;
            total += left + right;
            radius *= 2.0;
            if left.abs() + right.abs() < 0.05 * abs_tol {
                return Ok(total);
            }
        }
        Err(Error::NonConvergence(
            "duhamel spatial window did not close".into(),
        ))
    };

    // Time integral with the substitution v = (t - s)^beta, which flattens
    // the (t-s)^{beta-1} weight carried by Y.
    let g = |v: f64| -> f64 {
        let w = v.powf(1.0 / beta);
        if w == 0.0 {
            return 0.0;
        }
        let s = t - w;
        spatial(w, s).map_or(0.0, |inner| inner * w.powf(1.0 - beta))
    };
    let (forced, _) = crate::quad::adaptive(&g, 0.0, t.powf(beta), abs_tol * 0.3, 1e-8)?;
    Ok(j0 + forced / beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn heat_truth(nu: f64, d: usize, t: f64, r: f64) -> f64 {
        (2.0 * std::f64::consts::PI * nu * t).powf(-(d as f64) / 2.0)
            * (-r * r / (2.0 * nu * t)).exp()
    }

    #[test]
    fn heat_kernel_reduction_spot_checks() {
        // alpha = 2, beta = 1 collapses the PDE to the heat equation.
        let p = FracParams::new(2.0, 1.0, 1, 1.0).unwrap();
        let ev = KernelEvaluator::new(KernelKind::Z, p, EvalConfig::default()).unwrap();
        assert_relative_eq!(
            ev.eval_value(1.0, 0.0).unwrap(),
            (2.0 * std::f64::consts::PI).powf(-0.5),
            max_relative = 1e-10
        );
        for &(t, r) in &[(1.0, 1.0), (0.5, 2.0), (2.0, 0.5)] {
            assert_relative_eq!(
                ev.eval_value(t, r).unwrap(),
                heat_truth(1.0, 1, t, r),
                max_relative = 1e-8
            );
        }
        // CLI-facing example value.
        assert_relative_eq!(
            ev.eval_value(1.0, 1.0).unwrap(),
            0.24197072451914337,
            max_relative = 1e-9
        );
    }

    #[test]
    fn cauchy_kernel_reduction() {
        // alpha = 1, beta = 1, d = 1, nu = 2: Poisson kernel with scale nu t / 2.
        let p = FracParams::new(1.0, 1.0, 1, 2.0).unwrap();
        let ev = KernelEvaluator::new(KernelKind::Z, p, EvalConfig::default()).unwrap();
        let a = 1.0; // nu t / 2 at t = 1
        assert_relative_eq!(
            ev.eval_value(1.0, 0.0).unwrap(),
            1.0 / std::f64::consts::PI,
            max_relative = 1e-9
        );
        for &r in &[0.5, 1.0, 3.0] {
            let truth = a / (std::f64::consts::PI * (a * a + r * r));
            assert_relative_eq!(ev.eval_value(1.0, r).unwrap(), truth, max_relative = 1e-8);
        }
    }

    #[test]
    fn y_equals_z_at_beta_one() {
        let p = FracParams::new(1.5, 1.0, 2, 1.0).unwrap();
        let z = KernelEvaluator::new(KernelKind::Z, p, EvalConfig::default()).unwrap();
        let y = KernelEvaluator::new(KernelKind::Y, p, EvalConfig::default()).unwrap();
        for &(t, r) in &[(0.5, 0.5), (1.0, 1.0), (2.0, 4.0)] {
            assert_relative_eq!(
                z.eval_value(t, r).unwrap(),
                y.eval_value(t, r).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn self_similarity_scaling() {
        // Z(t, x) = t^{ceil(beta)-1-beta d/alpha} Z(1, x/t^{beta/alpha}).
        let p = FracParams::new(1.4, 0.8, 2, 1.3).unwrap();
        let ev = KernelEvaluator::new(KernelKind::Z, p, EvalConfig::default()).unwrap();
        for &(t, r) in &[(0.7f64, 0.9f64), (2.5, 1.7)] {
            let lhs = ev.eval_value(t, r).unwrap();
            let scale = t.powf(0.0 - p.beta * 2.0 / p.alpha);
            let rhs = scale * ev.eval_value(1.0, r / t.powf(p.beta / p.alpha)).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
        }
    }

    #[test]
    fn fourier_kernel_examples() {
        // Heat semigroup symbol.
        let p = FracParams::new(2.0, 1.0, 1, 1.0).unwrap();
        let f = fourier_kernel(KernelKind::Z, &p, 1.0, 2f64.sqrt()).unwrap();
        assert_relative_eq!(f, (-1.0f64).exp(), max_relative = 1e-11);

        // F Y at xi = 0: t^{beta-1}/Gamma(beta).
        let p = FracParams::new(1.5, 0.75, 2, 1.0).unwrap();
        let f = fourier_kernel(KernelKind::Y, &p, 2.0, 0.0).unwrap();
        assert_relative_eq!(
            f,
            2.0f64.powf(-0.25) / crate::specfun::gamma::gamma_real(0.75),
            max_relative = 1e-12
        );

        // F Z at xi = 0 for beta = 1.5, t = 2: t E_{1.5,2}(0) = t.
        let p = FracParams::new(2.0, 1.5, 3, 1.0).unwrap();
        let f = fourier_kernel(KernelKind::Z, &p, 2.0, 0.0).unwrap();
        assert_relative_eq!(f, 2.0, max_relative = 1e-13);
    }

    #[test]
    fn zstar_requires_superdiffusive_beta() {
        let p = FracParams::new(2.0, 0.8, 1, 1.0).unwrap();
        assert!(matches!(
            kernel_spec(KernelKind::Zstar, &p),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(fourier_kernel(KernelKind::Zstar, &p, 1.0, 1.0).is_err());
    }

    #[test]
    fn stable_density_reductions() {
        // alpha = 2: Gaussian with characteristic function e^{-xi^2},
        // density (4 pi)^{-d/2} e^{-r^2/4}.
        let s = StableDensity::new(2.0, 1, EvalConfig::default()).unwrap();
        assert_relative_eq!(
            s.eval(0.0).unwrap(),
            (4.0 * std::f64::consts::PI).powf(-0.5),
            max_relative = 1e-10
        );
        assert_relative_eq!(
            s.eval(1.5).unwrap(),
            (4.0 * std::f64::consts::PI).powf(-0.5) * (-1.5f64 * 1.5 / 4.0).exp(),
            max_relative = 1e-9
        );
        // alpha = 1, d = 1: Cauchy 1/(pi (1 + r^2)).
        let s = StableDensity::new(1.0, 1, EvalConfig::default()).unwrap();
        assert_relative_eq!(
            s.eval(1.0).unwrap(),
            1.0 / (2.0 * std::f64::consts::PI),
            max_relative = 1e-9
        );
        assert_relative_eq!(
            s.eval(0.0).unwrap(),
            1.0 / std::f64::consts::PI,
            max_relative = 1e-9
        );
    }

    #[test]
    fn nonnegativity_classifier() {
        let case_a = FracParams::new(2.0, 0.8, 5, 1.0).unwrap();
        let c = nonnegativity_case(&case_a).unwrap();
        assert_eq!(c.case, Some(1));
        assert!(c.certified());
        assert_eq!(c.zstar, None);

        let case_b = FracParams::new(2.0, 1.5, 3, 1.0).unwrap();
        let c = nonnegativity_case(&case_b).unwrap();
        assert_eq!(c.case, Some(2));
        assert!(c.certified());
        assert_eq!(c.zstar, Some(Certify::Unknown));

        let case_c = FracParams::new(1.8, 1.5, 1, 1.0).unwrap();
        let c = nonnegativity_case(&case_c).unwrap();
        assert_eq!(c.case, Some(3));
        assert_eq!(c.zstar, Some(Certify::CertifiedNonneg));

        let open = FracParams::new(1.2, 1.5, 2, 1.0).unwrap();
        let c = nonnegativity_case(&open).unwrap();
        assert_eq!(c.case, None);
        assert!(!c.certified());
    }

    #[test]
    fn j0_constant_closed_forms() {
        let p = FracParams::new(2.0, 0.8, 3, 1.0).unwrap();
        let j = j0_field(&p, &InitialData::Constant(vec![3.0]), 2.0, 0.7).unwrap();
        assert_eq!(j.value, 3.0);
        assert!(!j.zstar_uncertified);

        // beta > 1: u_0 + t u_1 (Z carries the velocity, Z* the position).
        let p = FracParams::new(2.0, 1.5, 1, 1.0).unwrap();
        let j = j0_field(&p, &InitialData::Constant(vec![1.0, 2.0]), 4.0, 0.0).unwrap();
        assert_relative_eq!(j.value, 1.0 + 4.0 * 2.0, max_relative = 1e-14);
        assert!(!j.zstar_uncertified); // case 3 certifies Z*

        let p_unc = FracParams::new(2.0, 1.5, 2, 1.0).unwrap();
        let j = j0_field(&p_unc, &InitialData::Constant(vec![1.0, 0.0]), 1.0, 0.0).unwrap();
        assert!(j.zstar_uncertified);

        // Count mismatch rejected.
        assert!(j0_field(&p, &InitialData::Constant(vec![1.0]), 1.0, 0.0).is_err());
    }

    #[test]
    fn envelope_zeta_domain() {
        let p = FracParams::new(1.5, 1.25, 2, 1.0).unwrap();
        assert!(calibrate_envelope(&p, 1.2, &EvalConfig::default(), 50).is_ok());
        assert!(calibrate_envelope(&p, 1.4, &EvalConfig::default(), 50).is_err());
    }
}
