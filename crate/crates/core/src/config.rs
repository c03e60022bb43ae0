//! Evaluation configuration: quadrature, truncation and tolerance policy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadrature, truncation, and tolerance policy for every evaluation path.
///
/// The same config is threaded through contour quadrature, residue series,
/// kernel evaluation and the SPDE integrals so that a single hash pins down
/// every numerical knob of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Maximum half-height `T` of the truncated Mellin–Barnes contour.
    pub contour_halfheight: f64,
    /// Gauss–Legendre nodes per unit-length contour panel.
    pub quadrature_points: usize,
    /// Maximum number of residue layers summed in a series expansion.
    pub series_terms: usize,
    /// Absolute tolerance for contour tails and quadrature remainders.
    pub abs_tol: f64,
    /// Relative tolerance for series truncation and route agreement.
    pub rel_tol: f64,
    /// Two poles closer than this coincide (multiple pole).
    pub collision_tol: f64,
    /// Residue series at zero are preferred below this argument,
    /// series at infinity above its reciprocal scale.
    pub switch_radius: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            contour_halfheight: 200.0,
            quadrature_points: 48,
            series_terms: 160,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            collision_tol: 1e-9,
            switch_radius: 1.0,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.quadrature_points < 32 {
            return Err(Error::InvalidParameter(
                "quadrature_points must be >= 32".into(),
            ));
        }
        let positive = [
            self.contour_halfheight,
            self.abs_tol,
            self.rel_tol,
            self.collision_tol,
            self.switch_radius,
        ];
        if positive.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "all EvalConfig fields must be positive and finite".into(),
            ));
        }
        if self.series_terms == 0 {
            return Err(Error::InvalidParameter("series_terms must be >= 1".into()));
        }
        Ok(())
    }

    /// FNV-1a hash of the canonical JSON encoding, echoed in reports so that
    /// published numbers are reproducible.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("EvalConfig is serializable");
        format!("{:016x}", fnv1a64(json.as_bytes()))
    }
}

/// 64-bit FNV-1a over a byte string.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_hash_is_stable() {
        let cfg = EvalConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.hash(), cfg.hash());
        let mut other = cfg.clone();
        other.rel_tol = 1e-8;
        assert_ne!(cfg.hash(), other.hash());
    }

    #[test]
    fn rejects_too_few_nodes() {
        let cfg = EvalConfig {
            quadrature_points: 8,
            ..EvalConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
