use super::{AssumptionConstants, Convexity, Potential};
use crate::linalg::{norm_sq, SquareMatrix};
use crate::real::Real;

/// `U(θ) = |θ|⁴/4 - |θ|²/2`, minimized on the unit sphere.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleWell;

impl DoubleWell {
    pub fn constants() -> AssumptionConstants {
        AssumptionConstants {
            r: 2,
            nu: 1,
            lipschitz: 1.0,
            growth: 2.0,
            convexity: Convexity::AtInfinity {
                a: 0.5,
                b: 1.0,
                r_bar: 0.0,
            },
            hessian_lipschitz: 3.0,
        }
    }
}

impl<T: Real> Potential<T> for DoubleWell {
    fn value(&self, theta: &[T]) -> T {
        let s = norm_sq(theta);
        T::of(0.25) * s * s - T::of(0.5) * s
    }

    fn gradient_into(&self, theta: &[T], out: &mut [T]) {
        let f = norm_sq(theta) - T::one();
        for (o, &x) in out.iter_mut().zip(theta) {
            *o = f * x;
        }
    }

    fn hessian(&self, theta: &[T]) -> SquareMatrix<T> {
        let mut m = SquareMatrix::scaled_identity(theta.len(), norm_sq(theta) - T::one());
        m.add_outer(T::of(2.0), theta, theta);
        m
    }
}
