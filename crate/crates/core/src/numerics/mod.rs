//! Randomness, special functions, quadrature and finite differences.

mod diff;
mod quadrature;
mod rng;
mod special;

pub use diff::{default_step, finite_diff_gradient, finite_diff_jacobian, DEFAULT_FD_STEP};
pub use quadrature::{
    integrate, integrate_semi_infinite, QuadratureConfig, QuadratureResult, DEFAULT_TRUNCATION_TOL,
};
pub use rng::{gauss_draw, RngStream};
pub use special::{log_binomial, log_binomial_real, log_factorial, log_gamma};

/// Maximizer of a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol * (1.0 + lo.abs() + hi.abs()) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}
