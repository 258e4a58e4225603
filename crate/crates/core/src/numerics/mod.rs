//! Small dense symmetric linear algebra and scalar special functions.

mod eigen;
mod matrix;
mod special;

pub use eigen::{
    cond, inv_sqrt, inverse_pd, log_det, sqrt_pd, sym_eig, EigenDecomp, JACOBI_TOL, PD_TOL,
};
pub use matrix::SymMatrix;
pub use special::{
    c_d_constant, ellipsoid_volume, lambert_w_m1, ln_gamma, normal_cdf, normal_quantile,
};
