use crate::error::Result;
use crate::numerics::{integrate, QuadratureConfig};
use crate::potentials::MarginalDensity;

pub const CDF_GRID_POINTS: usize = 4096;

/// CDF of an analytic first-component marginal, tabulated on a uniform
/// grid by integrating the density cell by cell and interpolated linearly.
#[derive(Debug, Clone)]
pub struct AnalyticCdf {
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl AnalyticCdf {
    /// Tabulates on `[-L, L]`, where `L` is widened until the density at the
    /// edge is below `1e-14` of its largest grid value.
    pub fn new(density: &MarginalDensity) -> Result<Self> {
        let mut half_width = 12.0 * density.scale();
        loop {
            let table = Self::tabulate(density, half_width)?;
            let peak = (0..CDF_GRID_POINTS)
                .map(|i| density.pdf(table.lo + i as f64 * table.step))
                .fold(0.0, f64::max);
            if density.pdf(half_width) < 1e-14 * peak || half_width > 1e6 {
                return Ok(table);
            }
            half_width *= 2.0;
        }
    }

    fn tabulate(density: &MarginalDensity, half_width: f64) -> Result<Self> {
        let lo = -half_width;
        let step = 2.0 * half_width / (CDF_GRID_POINTS - 1) as f64;
        let cfg = QuadratureConfig {
            abs_tol: 1e-15,
            rel_tol: 1e-10,
            ..QuadratureConfig::default()
        };
        let mut values = Vec::with_capacity(CDF_GRID_POINTS);
        let mut acc = 0.0;
        values.push(0.0);
        for i in 1..CDF_GRID_POINTS {
            let a = lo + (i - 1) as f64 * step;
            acc += integrate(|x| density.pdf(x), a, a + step, &cfg)?.value;
            values.push(acc);
        }
        // The mass outside the grid is below the quadrature tolerance; fold
        // the residual normalization error into the table.
        let total = acc;
        for v in &mut values {
            *v /= total;
        }
        Ok(Self { lo, step, values })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let t = (x - self.lo) / self.step;
        if !(t > 0.0) {
            return 0.0;
        }
        let i = t.floor() as usize;
        if i >= CDF_GRID_POINTS - 1 {
            return 1.0;
        }
        let w = t - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}
