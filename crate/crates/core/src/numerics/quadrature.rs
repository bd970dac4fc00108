//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and semi-infinite
//! intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_evaluations: 1_000_000,
        }
    }
}

/// Truncation tolerance for semi-infinite integrals, relative to the peak.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-16;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Gauss–Kronrod panel with the QUADPACK error heuristic.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Panel {
        a,
        b,
        value,
        error,
        abs_value: resabs,
    }
}

/// Adaptive bisection of the panel with the largest error until the summed
/// error estimate meets `max(abs_tol, rel_tol |I|)`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureResult> {
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 1,
        });
    }
    let first = gk15(&mut f, a, b);
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    loop {
        let target = config.abs_tol.max(config.rel_tol * value.abs());
        if error <= target {
            break;
        }
        if evaluations + 30 > config.max_evaluations {
            return Err(Error::QuadratureNonConvergence {
                evaluations,
                error_estimate: error,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel is at floating point resolution; accept it as is.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            error -= worst.error;
            continue;
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to avoid drift from the incremental updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(QuadratureResult {
        value,
        abs_error_estimate: error,
        evaluations,
    })
}

/// Integral of `f` over (0, ∞).
///
/// The cut-off `R` is doubled until `|f(R)| < truncation_tol * peak`, where
/// the peak is the largest `|f|` seen on the probed points; the truncated
/// tail is estimated on `[R, 2R]` and added to the error estimate.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    truncation_tol: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureResult> {
    const PROBES: usize = 16;
    let mut evaluations = 0usize;
    let mut peak = 0.0f64;
    let mut lo = 0.0;
    let mut cut = 1.0;
    let mut doublings = 0;
    loop {
        for i in 0..PROBES {
            let x = lo + (cut - lo) * (i as f64 + 0.5) / PROBES as f64;
            peak = peak.max(f(x).abs());
        }
        let at_cut = f(cut).abs();
        peak = peak.max(at_cut);
        evaluations += PROBES + 1;
        if at_cut < truncation_tol * peak || (peak == 0.0 && doublings > 8) {
            break;
        }
        doublings += 1;
        if doublings > 1000 || evaluations > config.max_evaluations {
            return Err(Error::QuadratureNonConvergence {
                evaluations,
                error_estimate: f64::INFINITY,
            });
        }
        lo = cut;
        cut *= 2.0;
    }
    let body = integrate(&mut f, 0.0, cut, config)?;
    let tail = gk15(&mut f, cut, 2.0 * cut);
    evaluations += body.evaluations + 15;
    Ok(QuadratureResult {
        value: body.value,
        abs_error_estimate: body.abs_error_estimate + tail.abs_value + tail.error,
        evaluations,
    })
}
