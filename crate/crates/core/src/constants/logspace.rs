//! Non-negative reals carried by their natural logarithm.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

use serde::{Deserialize, Serialize};

/// Magnitude beyond which a value is reported in log form only.
pub const REPRESENTABLE_LOG10: f64 = 300.0;

/// A non-negative real stored as `ln x` (`-∞` for zero, `+∞` for an
/// infinite value). Only the operations that keep the result non-negative
/// are provided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogPos {
    ln: f64,
}

impl LogPos {
    pub const ZERO: LogPos = LogPos {
        ln: f64::NEG_INFINITY,
    };
    pub const ONE: LogPos = LogPos { ln: 0.0 };
    pub const INFINITY: LogPos = LogPos { ln: f64::INFINITY };

    /// Panics on negative or NaN input: every constant in the pipeline is
    /// non-negative by construction, so a negative value is a bug.
    pub fn new(x: f64) -> Self {
        assert!(x >= 0.0, "LogPos::new({x})");
        Self { ln: x.ln() }
    }

    pub fn from_ln(ln: f64) -> Self {
        assert!(!ln.is_nan(), "LogPos::from_ln(NaN)");
        Self { ln }
    }

    /// `e^x` for a plain exponent.
    pub fn exp(x: f64) -> Self {
        Self::from_ln(x)
    }

    /// `e^self`.
    pub fn exp_of(self) -> Self {
        Self::from_ln(self.value())
    }

    pub fn ln(self) -> f64 {
        self.ln
    }

    pub fn log10(self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    /// The plain value; `+∞` once it overflows.
    pub fn value(self) -> f64 {
        self.ln.exp()
    }

    pub fn is_representable(self) -> bool {
        self.ln.is_finite() && self.log10().abs() <= REPRESENTABLE_LOG10
    }

    pub fn is_zero(self) -> bool {
        self.ln == f64::NEG_INFINITY
    }

    pub fn is_infinite(self) -> bool {
        self.ln == f64::INFINITY
    }

    pub fn powf(self, p: f64) -> Self {
        if p == 0.0 {
            return Self::ONE;
        }
        Self::from_ln(self.ln * p)
    }

    pub fn powi(self, p: u32) -> Self {
        self.powf(p as f64)
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(self) -> Self {
        Self::from_ln(-self.ln)
    }

    pub fn scale(self, s: f64) -> Self {
        self * LogPos::new(s)
    }

    pub fn min(self, other: Self) -> Self {
        if self.ln <= other.ln {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self.ln >= other.ln {
            self
        } else {
            other
        }
    }

    pub fn sum<I: IntoIterator<Item = LogPos>>(terms: I) -> Self {
        terms.into_iter().fold(Self::ZERO, |acc, t| acc + t)
    }
}

impl From<f64> for LogPos {
    fn from(x: f64) -> Self {
        LogPos::new(x)
    }
}

impl Mul for LogPos {
    type Output = LogPos;
    fn mul(self, rhs: LogPos) -> LogPos {
        if self.is_zero() || rhs.is_zero() {
            return LogPos::ZERO;
        }
        LogPos::from_ln(self.ln + rhs.ln)
    }
}

impl Mul<f64> for LogPos {
    type Output = LogPos;
    fn mul(self, rhs: f64) -> LogPos {
        self * LogPos::new(rhs)
    }
}

impl Div for LogPos {
    type Output = LogPos;
    // Division of values is subtraction of logarithms.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogPos) -> LogPos {
        Self::from_ln(self.ln - rhs.ln)
    }
}

impl Add for LogPos {
    type Output = LogPos;
    /// Log-sum-exp.
    fn add(self, rhs: LogPos) -> LogPos {
        let (hi, lo) = if self.ln >= rhs.ln {
            (self.ln, rhs.ln)
        } else {
            (rhs.ln, self.ln)
        };
        if lo == f64::NEG_INFINITY || hi == f64::INFINITY {
            return LogPos::from_ln(hi);
        }
        LogPos::from_ln(hi + (lo - hi).exp().ln_1p())
    }
}

impl Add<f64> for LogPos {
    type Output = LogPos;
    fn add(self, rhs: f64) -> LogPos {
        self + LogPos::new(rhs)
    }
}

impl PartialOrd for LogPos {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.ln.partial_cmp(&other.ln)
    }
}

impl fmt::Display for LogPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_representable() || self.is_zero() {
            write!(f, "{}", self.value())
        } else {
            write!(f, "10^{:.6}", self.log10())
        }
    }
}
