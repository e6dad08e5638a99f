//! Special functions: Bessel `J_n` and the Mathieu eigen-system.

mod bessel;
mod mathieu;
pub mod tridiag;

pub use bessel::{
    bessel_j, bessel_j_all, MAX_ARGUMENT as BESSEL_MAX_ARGUMENT, MAX_ORDER as BESSEL_MAX_ORDER,
};
pub use mathieu::{
    mathieu_angular_derivative, mathieu_ce, mathieu_ce_radial, mathieu_eigen,
    mathieu_eigen_with_truncation, mathieu_norm_constant, mathieu_se, mathieu_se_radial,
    radial_xi_max, MathieuClass, MathieuEigen, Parity, MAX_TRUNCATION, RADIAL_ARGUMENT_LIMIT,
    RADIAL_XI_CAP, TAIL_TOLERANCE,
};
