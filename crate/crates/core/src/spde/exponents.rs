//! Exponent algebra of the moment bounds and Dalang conditions.
//!
//! Every formula here is a rational function of the parameters, so the whole
//! module is generic over the scalar: `f64` for the numeric layer and exact
//! rationals for the identity checks (the p-exponent reduction and the theta
//! relation are asserted in exact arithmetic).

use num_traits::Num;

/// Scalar the exponent formulas are computed over.
pub trait Scalar: Num + Clone + PartialOrd {
    fn from_int(n: i64) -> Self;
}

impl Scalar for f64 {
    fn from_int(n: i64) -> f64 {
        n as f64
    }
}

impl Scalar for f32 {
    fn from_int(n: i64) -> f32 {
        n as f32
    }
}

impl Scalar for num_rational::Rational64 {
    fn from_int(n: i64) -> Self {
        num_rational::Rational64::from_integer(n)
    }
}

fn two<S: Scalar>() -> S {
    S::from_int(2)
}

/// Spectral decay exponent of the generalized Dalang condition:
/// `2 alpha - alpha / beta`.
pub fn dalang_exponent<S: Scalar>(alpha: S, beta: S) -> S {
    two::<S>() * alpha.clone() - alpha / beta
}

/// Decay exponent of the smoothed-equation condition:
/// `alpha (2 ceil(beta) - 1) / beta`.
pub fn smoothed_dalang_exponent<S: Scalar>(alpha: S, beta: S, ceil_beta: i64) -> S {
    alpha * (two::<S>() * S::from_int(ceil_beta) - S::one()) / beta
}

/// White-noise Dalang condition `d/alpha + 1/beta < 2`.
pub fn white_noise_dalang_holds<S: Scalar>(alpha: S, beta: S, d: i64) -> bool {
    S::from_int(d) / alpha + S::one() / beta < two::<S>()
}

/// White-noise smoothed condition `d < alpha (2 ceil(beta) - 1) / beta`.
pub fn white_noise_smoothed_holds<S: Scalar>(alpha: S, beta: S, ceil_beta: i64, d: i64) -> bool {
    S::from_int(d) < smoothed_dalang_exponent(alpha, beta, ceil_beta)
}

/// Exponent driving the p-th moment bound: `beta - 1/2 - beta kappa / (2 alpha)`.
pub fn theta_moment<S: Scalar>(alpha: S, beta: S, kappa: S) -> S {
    beta.clone() - S::one() / two::<S>() - beta * kappa / (two::<S>() * alpha)
}

/// Exponent of the chaos-series term bound: `beta - 1 - beta kappa / (2 alpha)`.
pub fn theta_series<S: Scalar>(alpha: S, beta: S, kappa: S) -> S {
    beta.clone() - S::one() - beta * kappa / (two::<S>() * alpha)
}

/// Growth order of the second-moment lower-bound series:
/// `2 beta - 1 - beta kappa / alpha` (twice [`theta_moment`]).
pub fn lower_bound_rho<S: Scalar>(alpha: S, beta: S, kappa: S) -> S {
    two::<S>() * beta.clone() - S::one() - beta * kappa / alpha
}

/// Exponent of `p` in the p-th moment bound:
/// `(2 alpha beta - beta kappa) / (2 alpha beta - alpha - beta kappa)`.
pub fn p_exponent<S: Scalar>(alpha: S, beta: S, kappa: S) -> S {
    let ab = alpha.clone() * beta.clone();
    let bk = beta * kappa;
    (two::<S>() * ab.clone() - bk.clone()) / (two::<S>() * ab - alpha - bk)
}

/// Exponent applied to `Theta_t` inside the bound:
/// `alpha / (2 alpha beta - alpha - beta kappa)`.
pub fn t_exponent_base<S: Scalar>(alpha: S, beta: S, kappa: S) -> S {
    let ab = alpha.clone() * beta.clone();
    alpha.clone() / (two::<S>() * ab - alpha - beta * kappa)
}

/// Smoothed-equation variant of [`p_exponent`]:
/// `(2 alpha ceil(beta) - beta kappa) / (2 alpha ceil(beta) - alpha - beta kappa)`.
pub fn smoothed_p_exponent<S: Scalar>(alpha: S, beta: S, kappa: S, ceil_beta: i64) -> S {
    let am = alpha.clone() * S::from_int(ceil_beta);
    let bk = beta * kappa;
    (two::<S>() * am.clone() - bk.clone()) / (two::<S>() * am - alpha - bk)
}

/// Smoothed-equation variant of [`t_exponent_base`].
pub fn smoothed_t_exponent_base<S: Scalar>(alpha: S, beta: S, kappa: S, ceil_beta: i64) -> S {
    let am = alpha.clone() * S::from_int(ceil_beta);
    alpha.clone() / (two::<S>() * am - alpha - beta * kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn rat(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn p_exponent_reduces_exactly_at_heat_parameters() {
        // beta = 1, alpha = 2: (4 - kappa)/(2 - kappa), exact in rationals.
        for kappa in [rat(1, 2), rat(1, 1), rat(3, 2)] {
            let got = p_exponent(rat(2, 1), rat(1, 1), kappa);
            let expect = (rat(4, 1) - kappa) / (rat(2, 1) - kappa);
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn theta_identity_exact() {
        // theta_series = theta_moment - 1/2 as an exact rational identity.
        for (a, b, k) in [
            (rat(3, 2), rat(4, 5), rat(1, 3)),
            (rat(2, 1), rat(7, 6), rat(5, 4)),
            (rat(1, 4), rat(9, 10), rat(1, 8)),
        ] {
            assert_eq!(
                theta_series(a, b, k),
                theta_moment(a, b, k) - rat(1, 2)
            );
        }
    }

    #[test]
    fn dalang_white_noise_boundaries() {
        // alpha = 2, d = 1: boundary at beta = 2/3.
        assert!(!white_noise_dalang_holds(rat(2, 1), rat(2, 3), 1));
        assert!(white_noise_dalang_holds(rat(2, 1), rat(2, 3) + rat(1, 1000), 1));
        // beta = 1, d = 1: boundary at alpha = 1.
        assert!(!white_noise_dalang_holds(rat(1, 1), rat(1, 1), 1));
        assert!(white_noise_dalang_holds(rat(1, 1) + rat(1, 1000), rat(1, 1), 1));
    }

    #[test]
    fn smoothed_exponents_collapse_at_beta_one() {
        let (a, k) = (1.7f64, 0.6f64);
        assert_eq!(
            smoothed_p_exponent(a, 1.0, k, 1),
            p_exponent(a, 1.0, k)
        );
        assert_eq!(
            smoothed_t_exponent_base(a, 1.0, k, 1),
            t_exponent_base(a, 1.0, k)
        );
    }

    #[test]
    fn kappa_to_zero_limit_is_finite() {
        // p-exponent -> 2 alpha beta / (2 alpha beta - alpha) > 1.
        let v = p_exponent(1.3f64, 0.9, 1e-12);
        let lim = 2.0 * 1.3 * 0.9 / (2.0 * 1.3 * 0.9 - 1.3);
        assert!((v - lim).abs() < 1e-9);
        assert!(v > 1.0);
    }
}
