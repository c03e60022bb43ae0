//! Fox H-functions: symbolic parameter blocks, pole analysis, numerical
//! evaluation (Mellin–Barnes contour and residue series), and the transform
//! algebra (reduction, reciprocal argument, power scaling, Laplace, Hankel,
//! Riemann–Liouville derivative, Mellin convolution).
//!
//! The function `H^{m,n}_{p,q}(z)` is defined by the contour integral of
//!
//! ```text
//!            prod_{j<=m} G(b_j + beta_j s) * prod_{i<=n} G(1 - a_i - alpha_i s)
//! Hs(s) = -----------------------------------------------------------------------
//!          prod_{i>n} G(a_i + alpha_i s) * prod_{j>m} G(1 - b_j - beta_j s)
//! ```
//!
//! against `z^{-s}`, along a vertical line separating the poles of the two
//! numerator gamma families.

mod contour;
mod evaluator;
mod series;
mod transforms;

pub use evaluator::{EvalOutcome, HEvaluator, Route};
pub use transforms::{
    convolve_specs, hankel_transform_spec, laplace_transform_spec, power_scale,
    reciprocal_argument, reduce, rl_derivative_spec, TransformedSpec,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `(coefficient, scale)` parameter pair of an H-function row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct ParamPair {
    pub coeff: f64,
    pub scale: f64,
}

impl ParamPair {
    pub fn new(coeff: f64, scale: f64) -> Self {
        ParamPair { coeff, scale }
    }
}

impl From<(f64, f64)> for ParamPair {
    fn from(t: (f64, f64)) -> Self {
        ParamPair::new(t.0, t.1)
    }
}

impl From<ParamPair> for (f64, f64) {
    fn from(p: ParamPair) -> Self {
        (p.coeff, p.scale)
    }
}

/// Derived characteristic sums `a*`, `Delta`, `mu` of an H-function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HCharacteristics {
    pub a_star: f64,
    pub delta: f64,
    pub mu: f64,
}

/// Validated parameter block of `H^{m,n}_{p,q}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct HFunctionSpec {
    m: usize,
    n: usize,
    upper: Vec<ParamPair>,
    lower: Vec<ParamPair>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    upper: Vec<(f64, f64)>,
    lower: Vec<(f64, f64)>,
}

impl From<HFunctionSpec> for SpecJson {
    fn from(s: HFunctionSpec) -> SpecJson {
        SpecJson {
            m: s.m,
            n: s.n,
            p: s.upper.len(),
            q: s.lower.len(),
            upper: s.upper.iter().map(|&p| p.into()).collect(),
            lower: s.lower.iter().map(|&p| p.into()).collect(),
        }
    }
}

impl TryFrom<SpecJson> for HFunctionSpec {
    type Error = Error;
    fn try_from(j: SpecJson) -> Result<HFunctionSpec> {
        if j.p != j.upper.len() || j.q != j.lower.len() {
            return Err(Error::ShapeInvalid(format!(
                "declared (p,q)=({},{}) but rows have lengths ({},{})",
                j.p,
                j.q,
                j.upper.len(),
                j.lower.len()
            )));
        }
        HFunctionSpec::new(
            j.m,
            j.n,
            j.upper.into_iter().map(Into::into).collect(),
            j.lower.into_iter().map(Into::into).collect(),
        )
    }
}

/// Default tolerance under which two poles are considered coincident.
pub const DEFAULT_COLLISION_TOL: f64 = 1e-9;

/// Gap below which a pole pair counts as nearly resonant; residue formulas
/// are unstable there and evaluation falls back to the contour route.
pub const NEAR_RESONANCE_GAP: f64 = 1e-6;

impl HFunctionSpec {
    /// Validated constructor: shape constraints plus the pole-separation
    /// condition between the two numerator gamma families.
    pub fn new(m: usize, n: usize, upper: Vec<ParamPair>, lower: Vec<ParamPair>) -> Result<Self> {
        let (p, q) = (upper.len(), lower.len());
        if m > q {
            return Err(Error::ShapeInvalid(format!("m = {m} exceeds q = {q}")));
        }
        if n > p {
            return Err(Error::ShapeInvalid(format!("n = {n} exceeds p = {p}")));
        }
        for pair in upper.iter().chain(lower.iter()) {
            if !(pair.scale > 0.0) || !pair.scale.is_finite() || !pair.coeff.is_finite() {
                return Err(Error::ShapeInvalid(format!(
                    "parameter pair ({}, {}) must have a finite coefficient and positive scale",
                    pair.coeff, pair.scale
                )));
            }
        }
        let spec = HFunctionSpec { m, n, upper, lower };
        spec.check_pole_separation(DEFAULT_COLLISION_TOL)?;
        Ok(spec)
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.upper.len()
    }
    pub fn q(&self) -> usize {
        self.lower.len()
    }
    pub fn upper(&self) -> &[ParamPair] {
        &self.upper
    }
    pub fn lower(&self) -> &[ParamPair] {
        &self.lower
    }

    /// The three characteristic sums of the parameter block.
    pub fn characteristics(&self) -> HCharacteristics {
        let (p, q) = (self.p(), self.q());
        let mut a_star = 0.0;
        for (i, pr) in self.upper.iter().enumerate() {
            if i < self.n {
                a_star += pr.scale;
            } else {
                a_star -= pr.scale;
            }
        }
        for (j, pr) in self.lower.iter().enumerate() {
            if j < self.m {
                a_star += pr.scale;
            } else {
                a_star -= pr.scale;
            }
        }
        let delta = self.lower.iter().map(|p| p.scale).sum::<f64>()
            - self.upper.iter().map(|p| p.scale).sum::<f64>();
        let mu = self.lower.iter().map(|p| p.coeff).sum::<f64>()
            - self.upper.iter().map(|p| p.coeff).sum::<f64>()
            + (p as f64 - q as f64) / 2.0;
        HCharacteristics { a_star, delta, mu }
    }

    /// Radius separating the convergence regions of the two residue series
    /// when `Delta = 0`: `prod alpha_i^{-alpha_i} * prod beta_j^{beta_j}`.
    pub fn convergence_radius(&self) -> f64 {
        let mut ln_r = 0.0;
        for p in &self.upper {
            ln_r -= p.scale * p.scale.ln();
        }
        for p in &self.lower {
            ln_r += p.scale * p.scale.ln();
        }
        ln_r.exp()
    }

    /// Largest pole of the lower numerator family (`max_j -b_j/beta_j`).
    pub fn max_lower_pole(&self) -> Option<f64> {
        self.lower[..self.m]
            .iter()
            .map(|p| -p.coeff / p.scale)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    /// Smallest pole of the upper numerator family (`min_i (1-a_i)/alpha_i`).
    pub fn min_upper_pole(&self) -> Option<f64> {
        self.upper[..self.n]
            .iter()
            .map(|p| (1.0 - p.coeff) / p.scale)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
    }

    fn check_pole_separation(&self, tol: f64) -> Result<()> {
        // Lower poles fill a half-line going down from max_lower, upper poles
        // a half-line going up from min_upper; a collision is only possible
        // inside the overlap window.
        let (Some(max_lower), Some(min_upper)) = (self.max_lower_pole(), self.min_upper_pole())
        else {
            return Ok(());
        };
        if max_lower < min_upper - tol {
            return Ok(());
        }
        let lower = self.enumerate_lower_in(min_upper - tol, max_lower + tol);
        let upper = self.enumerate_upper_in(min_upper - tol, max_lower + tol);
        for &(lo, _, _) in &lower {
            for &(up, _, _) in &upper {
                if (lo - up).abs() <= tol {
                    return Err(Error::PoleCollision { lower: lo, upper: up });
                }
            }
        }
        Ok(())
    }

    /// Lower numerator poles in `[lo, hi]` as `(location, j, l)`.
    pub(crate) fn enumerate_lower_in(&self, lo: f64, hi: f64) -> Vec<(f64, usize, usize)> {
        let mut out = Vec::new();
        for (j, pr) in self.lower[..self.m].iter().enumerate() {
            // -(b_j + l)/beta_j in [lo, hi]  <=>  l in [-b_j - hi*beta_j, -b_j - lo*beta_j]
            let l_min = (-pr.coeff - hi * pr.scale).ceil().max(0.0);
            let l_max = (-pr.coeff - lo * pr.scale).floor();
            let mut l = l_min;
            while l <= l_max && out.len() < 100_000 {
                out.push((-(pr.coeff + l) / pr.scale, j, l as usize));
                l += 1.0;
            }
        }
        out
    }

    /// Upper numerator poles in `[lo, hi]` as `(location, i, k)`.
    pub(crate) fn enumerate_upper_in(&self, lo: f64, hi: f64) -> Vec<(f64, usize, usize)> {
        let mut out = Vec::new();
        for (i, pr) in self.upper[..self.n].iter().enumerate() {
            // (1 - a_i + k)/alpha_i in [lo, hi]
            let k_min = (lo * pr.scale - 1.0 + pr.coeff).ceil().max(0.0);
            let k_max = (hi * pr.scale - 1.0 + pr.coeff).floor();
            let mut k = k_min;
            while k <= k_max && out.len() < 100_000 {
                out.push(((1.0 - pr.coeff + k) / pr.scale, i, k as usize));
                k += 1.0;
            }
        }
        out
    }

    /// Enumerate and group poles of both numerator families, `layers` layers
    /// deep per gamma factor.
    pub fn pole_table(&self, layers: usize) -> PoleTable {
        assert!(layers >= 1);
        let mut lower_raw = Vec::new();
        for (j, pr) in self.lower[..self.m].iter().enumerate() {
            for l in 0..layers {
                lower_raw.push((-(pr.coeff + l as f64) / pr.scale, j, l));
            }
        }
        let mut upper_raw = Vec::new();
        for (i, pr) in self.upper[..self.n].iter().enumerate() {
            for k in 0..layers {
                upper_raw.push(((1.0 - pr.coeff + k as f64) / pr.scale, i, k));
            }
        }
        PoleTable {
            lower: group_poles(lower_raw, DEFAULT_COLLISION_TOL),
            upper: group_poles(upper_raw, DEFAULT_COLLISION_TOL),
            layers,
        }
    }

    // --- named constructors for the specs used throughout the crate ---

    /// `H^{1,0}_{0,1}[z | - ; (b, beta)] = (1/beta) z^{b/beta} exp(-z^{1/beta})`.
    pub fn exp_power(b: f64, beta: f64) -> Self {
        HFunctionSpec::new(1, 0, vec![], vec![ParamPair::new(b, beta)])
            .expect("exp spec is always valid")
    }

    /// The pure exponential `H^{1,0}_{0,1}[z | - ; (0,1)] = exp(-z)`.
    pub fn exponential() -> Self {
        Self::exp_power(0.0, 1.0)
    }

    /// Mittag-Leffler block: `E_{rho,mu}(-x) = H^{1,1}_{1,2}[x | (0,1); (0,1), (1-mu,rho)]`.
    pub fn mittag_leffler(rho: f64, mu: f64) -> Result<Self> {
        HFunctionSpec::new(
            1,
            1,
            vec![ParamPair::new(0.0, 1.0)],
            vec![ParamPair::new(0.0, 1.0), ParamPair::new(1.0 - mu, rho)],
        )
    }

    /// Cosine block: `cos z = sqrt(pi) H^{1,0}_{0,2}[z^2/4 | - ; (0,1), (1/2,1)]`.
    pub fn cosine() -> Self {
        HFunctionSpec::new(
            1,
            0,
            vec![],
            vec![ParamPair::new(0.0, 1.0), ParamPair::new(0.5, 1.0)],
        )
        .expect("cos spec is always valid")
    }
}

/// A group of coinciding poles of one gamma family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleGroup {
    /// Pole location on the real axis.
    pub location: f64,
    /// Multiplicity (number of coinciding factor poles).
    pub order: usize,
    /// Originating `(factor index, layer)` pairs.
    pub members: Vec<(usize, usize)>,
}

/// Grouped pole enumeration of a spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleTable {
    pub lower: Vec<PoleGroup>,
    pub upper: Vec<PoleGroup>,
    /// Number of layers enumerated per gamma factor.
    pub layers: usize,
}

fn group_poles(mut raw: Vec<(f64, usize, usize)>, tol: f64) -> Vec<PoleGroup> {
    raw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut groups: Vec<PoleGroup> = Vec::new();
    for (loc, idx, layer) in raw {
        match groups.last_mut() {
            Some(g) if (g.location - loc).abs() <= tol => {
                g.order += 1;
                g.members.push((idx, layer));
            }
            _ => groups.push(PoleGroup {
                location: loc,
                order: 1,
                members: vec![(idx, layer)],
            }),
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_kernel_spec(alpha: f64, beta: f64, d: usize) -> Result<HFunctionSpec> {
        let ceil_beta = beta.ceil().max(1.0);
        HFunctionSpec::new(
            2,
            1,
            vec![ParamPair::new(1.0, 1.0), ParamPair::new(ceil_beta, beta)],
            vec![
                ParamPair::new(d as f64 / 2.0, alpha / 2.0),
                ParamPair::new(1.0, 1.0),
                ParamPair::new(1.0, alpha / 2.0),
            ],
        )
    }

    #[test]
    fn z_kernel_spec_is_valid_across_ranges() {
        for &(alpha, beta, d) in &[
            (2.0, 1.0, 1),
            (2.0, 0.6, 3),
            (1.5, 1.9, 2),
            (0.7, 0.51, 5),
            (2.0, 2.0 - 1e-6, 1),
        ] {
            assert!(z_kernel_spec(alpha, beta, d).is_ok(), "({alpha},{beta},{d})");
        }
    }

    #[test]
    fn shape_violations_rejected() {
        // m > q
        let err = HFunctionSpec::new(2, 0, vec![], vec![ParamPair::new(0.0, 1.0)]);
        assert!(matches!(err, Err(Error::ShapeInvalid(_))));
        // nonpositive scale
        let err = HFunctionSpec::new(1, 0, vec![], vec![ParamPair::new(0.0, 0.0)]);
        assert!(matches!(err, Err(Error::ShapeInvalid(_))));
    }

    #[test]
    fn pole_collision_detected() {
        // Upper (1,1) has poles {0,1,2,...}, lower (0,1) has {0,-1,-2,...}:
        // they meet at s = 0.
        let err = HFunctionSpec::new(
            1,
            1,
            vec![ParamPair::new(1.0, 1.0)],
            vec![ParamPair::new(0.0, 1.0)],
        );
        assert!(matches!(err, Err(Error::PoleCollision { .. })));
    }

    #[test]
    fn separated_families_accepted() {
        // Upper (0,1): poles {1,2,...}; lower (0,1): poles {0,-1,...}.
        let ok = HFunctionSpec::new(
            1,
            1,
            vec![ParamPair::new(0.0, 1.0)],
            vec![ParamPair::new(0.0, 1.0)],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn characteristics_of_named_specs() {
        // Mittag-Leffler spec with rho = beta: a* = 2 - beta.
        let beta = 0.75;
        let ml = HFunctionSpec::mittag_leffler(beta, beta).unwrap();
        let ch = ml.characteristics();
        assert!((ch.a_star - (2.0 - beta)).abs() < 1e-14);

        // Z-kernel (alpha=2, beta=0.75, d=1): Delta = alpha - beta.
        let z = z_kernel_spec(2.0, 0.75, 1).unwrap();
        let ch = z.characteristics();
        assert!((ch.delta - (2.0 - 0.75)).abs() < 1e-14);
        // a* = 2 - beta for the Z spec.
        assert!((ch.a_star - (2.0 - 0.75)).abs() < 1e-14);

        // Empty upper row: a* = sum_{j<=m} beta_j - sum_{j>m} beta_j.
        let e = HFunctionSpec::exp_power(0.3, 0.8);
        assert!((e.characteristics().a_star - 0.8).abs() < 1e-14);
        assert!((e.characteristics().delta - 0.8).abs() < 1e-14);
    }

    #[test]
    fn pole_table_orders_at_resonances() {
        // Y-kernel spec with d = alpha: s = -1 is a double pole.
        let alpha = 1.3;
        let y = HFunctionSpec::new(
            2,
            1,
            vec![ParamPair::new(1.0, 1.0), ParamPair::new(1.25, 1.25)],
            vec![
                ParamPair::new(alpha / 2.0, alpha / 2.0),
                ParamPair::new(1.0, 1.0),
                ParamPair::new(1.0, alpha / 2.0),
            ],
        )
        .unwrap();
        let table = y.pole_table(6);
        let at_minus_1 = table
            .lower
            .iter()
            .find(|g| (g.location + 1.0).abs() < 1e-12)
            .unwrap();
        assert_eq!(at_minus_1.order, 2);

        // d = 2 alpha: pole at -1 simple, pole at -2 double.
        let alpha = 1.0;
        let d = 2.0;
        let y = HFunctionSpec::new(
            2,
            1,
            vec![ParamPair::new(1.0, 1.0), ParamPair::new(1.25, 1.25)],
            vec![
                ParamPair::new(d / 2.0, alpha / 2.0),
                ParamPair::new(1.0, 1.0),
                ParamPair::new(1.0, alpha / 2.0),
            ],
        )
        .unwrap();
        let table = y.pole_table(6);
        let g1 = table.lower.iter().find(|g| (g.location + 1.0).abs() < 1e-12).unwrap();
        let g2 = table.lower.iter().find(|g| (g.location + 2.0).abs() < 1e-12).unwrap();
        assert_eq!(g1.order, 1);
        assert_eq!(g2.order, 2);
    }

    #[test]
    fn pole_splitting_under_perturbation() {
        // Perturbing d away from the d = alpha resonance splits the double
        // pole into two simple ones.
        let alpha = 1.0;
        let d = 1.0 + 1e-6;
        let y = HFunctionSpec::new(
            2,
            1,
            vec![ParamPair::new(1.0, 1.0), ParamPair::new(1.25, 1.25)],
            vec![
                ParamPair::new(d / 2.0, alpha / 2.0),
                ParamPair::new(1.0, 1.0),
                ParamPair::new(1.0, alpha / 2.0),
            ],
        )
        .unwrap();
        let table = y.pole_table(4);
        let near_minus_1: Vec<_> = table
            .lower
            .iter()
            .filter(|g| (g.location + 1.0).abs() < 1e-3)
            .collect();
        assert_eq!(near_minus_1.len(), 2);
        assert!(near_minus_1.iter().all(|g| g.order == 1));
    }

    #[test]
    fn generic_specs_have_simple_poles() {
        // d/alpha irrational: all enumerated lower poles simple.
        let alpha = std::f64::consts::SQRT_2;
        let y = z_kernel_spec(alpha, 0.9, 1).unwrap();
        let table = y.pole_table(12);
        assert!(table.lower.iter().all(|g| g.order == 1));
    }

    #[test]
    fn json_round_trip_and_shape_check() {
        let spec = z_kernel_spec(1.5, 0.75, 2).unwrap();
        let js = serde_json::to_string(&spec).unwrap();
        assert!(js.contains("\"p\":2") && js.contains("\"q\":3"));
        let back: HFunctionSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(spec, back);

        let bad = r#"{"m":1,"n":0,"p":3,"q":1,"upper":[],"lower":[[0.0,1.0]]}"#;
        assert!(serde_json::from_str::<HFunctionSpec>(bad).is_err());
    }
}
