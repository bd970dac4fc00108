use super::{AssumptionConstants, Convexity, Potential};
use crate::linalg::{dot, norm, SquareMatrix};
use crate::real::Real;

/// Mixture of `N(ȧ, I)` and `N(-ȧ, I)` with equal weights.
#[derive(Debug, Clone)]
pub struct GaussianMixture<T> {
    center: Vec<T>,
}

/// Center with all components equal and `|ȧ| = 2`.
pub fn default_mixture_center<T: Real>(d: usize) -> Vec<T> {
    vec![T::of(2.0 / (d as f64).sqrt()); d]
}

/// `1 / (1 + e^{-y})` without overflow.
#[inline]
fn sigmoid<T: Real>(y: T) -> T {
    if y >= T::zero() {
        T::one() / (T::one() + (-y).exp())
    } else {
        let e = y.exp();
        e / (T::one() + e)
    }
}

/// `log(1 + e^{y})` without overflow.
#[inline]
fn softplus<T: Real>(y: T) -> T {
    y.max(T::zero()) + (-y.abs()).exp().ln_1p()
}

impl<T: Real> GaussianMixture<T> {
    pub fn new(center: Vec<T>) -> Self {
        Self { center }
    }

    pub fn center(&self) -> &[T] {
        &self.center
    }

    pub fn constants(&self) -> AssumptionConstants {
        let a = norm(&self.center).as_f64();
        AssumptionConstants {
            r: 0,
            nu: 0,
            lipschitz: 1.0 + 4.0 * a * a,
            growth: a.max(1.0),
            convexity: Convexity::Dissipative {
                a_tilde: 0.5,
                b_tilde: 2.0,
            },
            hessian_lipschitz: 8.0 * a * a * a,
        }
    }
}

impl<T: Real> Potential<T> for GaussianMixture<T> {
    fn value(&self, theta: &[T]) -> T {
        let x = dot(&self.center, theta);
        let sq: T = theta
            .iter()
            .zip(&self.center)
            .map(|(&t, &a)| (t - a) * (t - a))
            .sum();
        T::of(0.5) * sq - softplus(T::of(-2.0) * x)
    }

    fn gradient_into(&self, theta: &[T], out: &mut [T]) {
        // h(θ) = θ - ȧ + 2ȧ / (1 + e^{2⟨ȧ,θ⟩})
        let x = dot(&self.center, theta);
        let w = T::of(2.0) * sigmoid(T::of(-2.0) * x) - T::one();
        for ((o, &t), &a) in out.iter_mut().zip(theta).zip(&self.center) {
            *o = t + w * a;
        }
    }

    fn hessian(&self, theta: &[T]) -> SquareMatrix<T> {
        let x = T::of(2.0) * dot(&self.center, theta);
        let s = sigmoid(x) * sigmoid(-x);
        let mut m = SquareMatrix::identity(theta.len());
        m.add_outer(T::of(-4.0) * s, &self.center, &self.center);
        m
    }
}
