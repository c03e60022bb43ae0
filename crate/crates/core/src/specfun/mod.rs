//! Scalar special functions: gamma family on real and complex arguments,
//! Mittag-Leffler functions, Bessel J, and the erfc oracle.
//!
//! All operations are pure functions of their arguments with no shared
//! mutable state.

pub mod bessel;
pub mod gamma;
pub mod mittag_leffler;

pub use bessel::bessel_j;
pub use gamma::{digamma, digamma_real, erfc, gamma_real, log_gamma, recip_gamma_real, EULER};
pub use mittag_leffler::{
    ln_mittag_leffler_pos, mittag_leffler, mittag_leffler_series, MittagLeffler,
    MittagLefflerParams,
};
