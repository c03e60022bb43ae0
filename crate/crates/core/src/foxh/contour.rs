//! Truncated Mellin–Barnes quadrature along a vertical line.
//!
//! The integrand `Hs(gamma + i tau) z^{-s}` decays like
//! `exp(-a* pi |tau| / 2)` when `a* > 0`, so Gauss–Legendre panels of unit
//! width resolve both the decay and the `exp(-i tau ln z)` oscillation as
//! long as `|ln z|` stays below roughly twice the node count per panel.
//! The gamma values along the line do not depend on `z`, so the table of
//! `log Hs` values is built once per spec and reused across a whole grid
//! sweep.

use num_complex::Complex64;

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::foxh::series::{factors_of, GammaFactor};
use crate::foxh::HFunctionSpec;
use crate::quad::gauss_legendre;
use crate::specfun::gamma::log_gamma;

#[derive(Debug, Clone)]
struct Node {
    s: Complex64,
    weight: f64,
    log_h: Complex64,
}

#[derive(Debug, Clone)]
pub(crate) struct ContourTable {
    pub gamma_abscissa: f64,
    /// Panels in pairs of increasing |tau|: ([k,k+1], [-k-1,-k]).
    panels: Vec<Vec<Node>>,
    nodes_per_panel: usize,
}

fn log_h_at(factors: &[GammaFactor], s: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for f in factors {
        let w = Complex64::new(f.intercept, 0.0) + f.slope * s;
        let lg = log_gamma(w)?;
        if f.is_numerator() {
            acc += lg;
        } else {
            acc -= lg;
        }
    }
    Ok(acc)
}

/// Chooses the line abscissa from the admissible strip
/// (max lower pole, min upper pole).
pub(crate) fn choose_abscissa(spec: &HFunctionSpec) -> Result<f64> {
    match (spec.max_lower_pole(), spec.min_upper_pole()) {
        (Some(lo), Some(up)) => {
            let halfwidth = 0.5 * (up - lo);
            if halfwidth <= 0.0 {
                Err(Error::NoAdmissibleLine)
            } else if halfwidth < 1e-6 {
                Err(Error::PoleTooCloseToLine { halfwidth })
            } else {
                Ok(0.5 * (lo + up))
            }
        }
        (Some(lo), None) => Ok(lo + 0.5),
        (None, Some(up)) => Ok(up - 0.5),
        (None, None) => Ok(0.0),
    }
}

pub(crate) fn build_table(spec: &HFunctionSpec, cfg: &EvalConfig) -> Result<ContourTable> {
    let gamma_abscissa = choose_abscissa(spec)?;
    build_table_at(spec, cfg, gamma_abscissa, 1.0)
}

/// Fraction of the full `a* pi/2` decay assumed when sizing tables meant
/// for complex arguments: `exp(-i tau arg w)` eats into the gamma decay, so
/// those tables run four times longer.
pub(crate) const COMPLEX_DECAY_FRACTION: f64 = 0.25;

/// Largest `|arg w| / (a* pi / 2)` accepted by the complex-argument route.
pub(crate) const COMPLEX_SECTOR_FRACTION: f64 = 0.7;

/// Builds the node table along the line `Re s = gamma_abscissa`. The caller
/// is responsible for the abscissa being pole-free; residues of any upper
/// poles left of the line must be added separately. `decay_fraction` scales
/// the assumed exponential decay rate when sizing the truncation.
pub(crate) fn build_table_at(
    spec: &HFunctionSpec,
    cfg: &EvalConfig,
    gamma_abscissa: f64,
    decay_fraction: f64,
) -> Result<ContourTable> {
    let ch = spec.characteristics();
    if !(ch.a_star > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "contour route requires a* > 0 (a* = {})",
            ch.a_star
        )));
    }
    let factors = factors_of(spec);

    // Estimate the integrand scale near tau = 0 to size the truncation.
    let probe = log_h_at(&factors, Complex64::new(gamma_abscissa, 0.7))?;
    let decay = 0.5 * ch.a_star * std::f64::consts::PI * decay_fraction;
    let t_target = 8.0 + ((probe.re - cfg.abs_tol.ln() + 12.0) / decay).max(0.0);
    let t_max = t_target.clamp(8.0, cfg.contour_halfheight).ceil();

    let n = cfg.quadrature_points;
    let (xs, ws) = gauss_legendre(n);
    let mut panels = Vec::new();
    let mut k = 0.0;
    while k < t_max {
        for half in [1.0, -1.0] {
            let (lo, hi) = if half > 0.0 { (k, k + 1.0) } else { (-k - 1.0, -k) };
            let c = 0.5 * (lo + hi);
            let h = 0.5 * (hi - lo);
            let mut nodes = Vec::with_capacity(n);
            for (x, w) in xs.iter().zip(&ws) {
                let tau = c + h * x;
                let s = Complex64::new(gamma_abscissa, tau);
                let log_h = log_h_at(&factors, s)?;
                nodes.push(Node {
                    s,
                    weight: w * h,
                    log_h,
                });
            }
            panels.push(nodes);
        }
        k += 1.0;
    }
    Ok(ContourTable {
        gamma_abscissa,
        panels,
        nodes_per_panel: n,
    })
}

impl ContourTable {
    /// Integrates against `exp(-s ln_z)` with pairwise tail control.
    /// Returns the complex integral value divided by 2 pi and an absolute
    /// error estimate.
    fn integrate(&self, ln_z: Complex64, abs_tol: f64) -> Result<(Complex64, f64)> {
        // Oscillation guard: GL(n) on a unit panel resolves e^{i w tau} up
        // to |w| about 1.6 n.
        if ln_z.re.abs() > 1.6 * self.nodes_per_panel as f64 {
            return Err(Error::NonConvergence(format!(
                "contour oscillation too fast (|ln z| = {:.1})",
                ln_z.re.abs()
            )));
        }
        // Sum every built panel; the table is sized so that the integrand is
        // negligible at the cutoff, and the leftover tail is extrapolated
        // geometrically from the last pair magnitudes.
        let mut total = Complex64::new(0.0, 0.0);
        let mut abs_acc = 0.0f64;
        let mut prev_pair = f64::INFINITY;
        let mut last_pair = f64::INFINITY;
        for pair in self.panels.chunks(2) {
            let mut c = Complex64::new(0.0, 0.0);
            for node in pair.iter().flatten() {
                let term = (node.log_h - node.s * ln_z).exp() * node.weight;
                c += term;
                abs_acc += term.norm();
            }
            total += c;
            prev_pair = last_pair;
            last_pair = c.norm();
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        if !total.is_finite() {
            return Err(Error::NonConvergence(
                "contour integrand overflowed".into(),
            ));
        }
        let tail_est = if last_pair == 0.0 {
            0.0
        } else {
            let r = (last_pair / prev_pair.max(1e-300)).min(0.9);
            last_pair * r / (1.0 - r)
        };
        let scale_tol = abs_tol.max(1e-11 * total.norm());
        if tail_est > scale_tol {
            return Err(Error::TailNotConverged {
                estimate: tail_est / two_pi,
            });
        }
        let rounding = abs_acc * 5e-15;
        Ok((total / two_pi, (tail_est + rounding) / two_pi))
    }

    /// H(z) for real z > 0. The imaginary part must vanish within
    /// `10 abs_tol` for real-parameter specs; it is folded into the error
    /// estimate and discarded.
    pub fn eval_real(&self, z: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
        let ln_z = Complex64::new(z.ln(), 0.0);
        let (value, est) = self.integrate(ln_z, cfg.abs_tol)?;
        if value.im.abs() > 10.0 * (cfg.abs_tol + est) {
            return Err(Error::NonConvergence(format!(
                "contour produced imaginary part {:.3e} for a real spec",
                value.im
            )));
        }
        Ok((value.re, est + value.im.abs()))
    }

    /// H(w) for complex w off the negative axis, used by the Mittag-Leffler
    /// route. Requires `|arg w| < 0.95 a* pi / 2`.
    pub fn eval_complex(
        &self,
        w: Complex64,
        a_star: f64,
        cfg: &EvalConfig,
    ) -> Result<(Complex64, f64)> {
        let arg = w.arg().abs();
        if arg >= COMPLEX_SECTOR_FRACTION * a_star * std::f64::consts::FRAC_PI_2 {
            return Err(Error::PreconditionViolated(format!(
                "contour argument sector: |arg w| = {arg:.3} outside a* pi/2 = {:.3}",
                a_star * std::f64::consts::FRAC_PI_2
            )));
        }
        self.integrate(w.ln(), cfg.abs_tol)
    }
}
