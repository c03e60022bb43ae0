//! Bessel function of the first kind for real order eta >= -1/2, used by the
//! radial Fourier-inversion oracle.

use crate::error::{Error, Result};
use crate::specfun::gamma::recip_gamma_real;

/// J_eta(x) for eta >= -1/2 and x >= 0.
///
/// Power series up to x = 14, Hankel asymptotic expansion beyond.
pub fn bessel_j(eta: f64, x: f64) -> Result<f64> {
    if eta < -0.5 {
        return Err(Error::InvalidParameter(format!(
            "bessel_j requires eta >= -1/2, got {eta}"
        )));
    }
    if x < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "bessel_j requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(if eta == 0.0 {
            1.0
        } else if eta > 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    if x <= 14.0 {
        Ok(series(eta, x))
    } else {
        Ok(asymptotic(eta, x))
    }
}

fn series(eta: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = half.powf(eta) * recip_gamma_real(eta + 1.0);
    let mut sum = term;
    let h2 = half * half;
    for k in 1..400 {
        term *= -h2 / (k as f64 * (eta + k as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-290) && k > 4 {
            break;
        }
    }
    sum
}

fn asymptotic(eta: f64, x: f64) -> f64 {
    // J_eta(x) ~ sqrt(2/(pi x)) [cos(chi) P(eta,x) - sin(chi) Q(eta,x)],
    // chi = x - (eta/2 + 1/4) pi, with the standard a_k(eta) coefficients.
    let mu = 4.0 * eta * eta;
    let chi = x - (0.5 * eta + 0.25) * std::f64::consts::PI;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut ak = 1.0; // a_0
    let mut prev = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        ak *= (mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (kf * 8.0 * x);
        if ak.abs() > prev {
            break; // asymptotic series started diverging
        }
        prev = ak.abs();
        match k % 4 {
            1 => q += ak,
            2 => p -= ak,
            3 => q -= ak,
            _ => p += ak,
        }
        if ak.abs() < 1e-17 {
            break;
        }
    }
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (chi.cos() * p - chi.sin() * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn half_order_closed_forms() {
        // J_{1/2}(x) = sqrt(2/(pi x)) sin x
        for &x in &[0.3, 1.0, std::f64::consts::PI / 2.0, 7.0, 40.0] {
            let expect = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
            assert_relative_eq!(bessel_j(0.5, x).unwrap(), expect, epsilon = 1e-12);
        }
        // J_{-1/2}(x) = sqrt(2/(pi x)) cos x
        for &x in &[0.4, 2.0, 9.0, 55.0] {
            let expect = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.cos();
            assert_relative_eq!(bessel_j(-0.5, x).unwrap(), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn spec_examples() {
        assert!(bessel_j(0.5, std::f64::consts::PI).unwrap().abs() < 1e-14);
        assert_relative_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            bessel_j(0.5, std::f64::consts::PI / 2.0).unwrap(),
            (4.0 / (std::f64::consts::PI * std::f64::consts::PI)).sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn j0_reference_values() {
        // Abramowitz & Stegun table values.
        assert_relative_eq!(bessel_j(0.0, 1.0).unwrap(), 0.7651976865579666, max_relative = 1e-12);
        assert_relative_eq!(bessel_j(0.0, 5.0).unwrap(), -0.17759677131433830, max_relative = 1e-11);
        assert_relative_eq!(bessel_j(1.0, 2.0).unwrap(), 0.5767248077568734, max_relative = 1e-12);
    }

    #[test]
    fn series_asymptotic_join_smoothly() {
        for &eta in &[0.0, 0.5, 1.0, 2.3] {
            for &x in &[13.0, 14.0, 15.0] {
                let a = series(eta, x);
                let b = asymptotic(eta, x);
                assert!((a - b).abs() < 1e-9, "mismatch at eta={eta}, x={x}: {a} vs {b}");
            }
        }
    }
}
