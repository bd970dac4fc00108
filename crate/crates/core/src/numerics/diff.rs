use crate::real::Real;

/// Default central-difference step, scaled by `1 + |θ|`.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Central differences `(U(θ + h e_i) - U(θ - h e_i)) / 2h` per coordinate.
pub fn finite_diff_gradient<T, F>(u: F, theta: &[T], step: T) -> Vec<T>
where
    T: Real,
    F: Fn(&[T]) -> T,
{
    let mut probe = theta.to_vec();
    let two = T::of(2.0);
    (0..theta.len())
        .map(|i| {
            let x = theta[i];
            probe[i] = x + step;
            let up = u(&probe);
            probe[i] = x - step;
            let down = u(&probe);
            probe[i] = x;
            (up - down) / (two * step)
        })
        .collect()
}

/// Step `DEFAULT_FD_STEP * (1 + |θ|)`.
pub fn default_step<T: Real>(theta: &[T]) -> T {
    T::of(DEFAULT_FD_STEP) * (T::one() + crate::linalg::norm(theta))
}

/// Central differences of a vector field: column `j` approximates
/// `∂F/∂θ_j`, returned as the Jacobian `J[i][j]`.
pub fn finite_diff_jacobian<T, F>(field: F, theta: &[T], step: T) -> crate::linalg::SquareMatrix<T>
where
    T: Real,
    F: Fn(&[T]) -> Vec<T>,
{
    let d = theta.len();
    let mut probe = theta.to_vec();
    let mut jac = crate::linalg::SquareMatrix::zeros(d);
    let two = T::of(2.0);
    for j in 0..d {
        let x = theta[j];
        probe[j] = x + step;
        let up = field(&probe);
        probe[j] = x - step;
        let down = field(&probe);
        probe[j] = x;
        for i in 0..d {
            jac.set(i, j, (up[i] - down[i]) / (two * step));
        }
    }
    jac
}
