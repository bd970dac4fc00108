use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Floating point scalar used for points, gradients and samples: f32 or f64.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to every Real")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("every Real converts to f64")
    }
}

impl Real for f32 {
    #[inline]
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f64 {
    #[inline]
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}
