use super::{AssumptionConstants, Convexity, Potential};
use crate::linalg::{norm_sq, SquareMatrix};
use crate::real::Real;

#[derive(Debug, Clone, Copy, Default)]
pub struct StandardGaussian;

impl StandardGaussian {
    pub fn constants() -> AssumptionConstants {
        AssumptionConstants {
            r: 0,
            nu: 0,
            lipschitz: 1.0,
            growth: 1.0,
            convexity: Convexity::Dissipative {
                a_tilde: 1.0,
                b_tilde: 1.0,
            },
            hessian_lipschitz: 1.0,
        }
    }
}

impl<T: Real> Potential<T> for StandardGaussian {
    fn value(&self, theta: &[T]) -> T {
        T::of(0.5) * norm_sq(theta)
    }

    fn gradient_into(&self, theta: &[T], out: &mut [T]) {
        out.copy_from_slice(theta);
    }

    fn hessian(&self, theta: &[T]) -> SquareMatrix<T> {
        SquareMatrix::identity(theta.len())
    }
}
