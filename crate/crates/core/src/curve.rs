//! Right-continuous step functions over time.

use crate::error::{Error, Result};

/// A right-continuous step function: `initial_value` on `[0, jump_times[0])`
/// and `values[k]` on `[jump_times[k], jump_times[k+1])`.
///
/// Survival curves start at 1 and are nonincreasing in [0, 1]; cumulative
/// hazard curves start at 0 and are nondecreasing. Jumps are stored only
/// where the value actually changes (event times), so censoring times never
/// appear here. Beyond the last jump the curve stays at its last value.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCurve {
    initial_value: f64,
    jump_times: Vec<f64>,
    values: Vec<f64>,
}

impl StepCurve {
    pub fn new(initial_value: f64, jump_times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if jump_times.len() != values.len() {
            return Err(Error::InvalidArgument(
                "jump_times and values must have equal length".into(),
            ));
        }
        if jump_times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidArgument(
                "jump times must be finite and nonnegative".into(),
            ));
        }
        if jump_times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "jump times must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            initial_value,
            jump_times,
            values,
        })
    }

    /// The curve that is `value` everywhere.
    pub fn constant(value: f64) -> Self {
        Self {
            initial_value: value,
            jump_times: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Right-continuous evaluation: the value attached to the largest jump
    /// time `<= t` (binary search), or the initial value before every jump.
    pub fn eval(&self, t: f64) -> f64 {
        let k = self.jump_times.partition_point(|&jt| jt <= t);
        if k == 0 {
            self.initial_value
        } else {
            self.values[k - 1]
        }
    }

    /// Evaluate on many points at once.
    pub fn eval_many(&self, ts: &[f64]) -> Vec<f64> {
        ts.iter().map(|&t| self.eval(t)).collect()
    }

    pub fn initial_value(&self) -> f64 {
        self.initial_value
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value after the final jump (the plateau level).
    pub fn final_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(self.initial_value)
    }
}

/// Trapezoidal rule on a uniform grid with spacing `step`.
pub fn trapezoid_uniform(values: &[f64], step: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    step * (0.5 * (values[0] + values[values.len() - 1]) + interior)
}

/// `m` equally spaced points covering `[a, b]`, endpoints exact.
pub fn uniform_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    assert!(m >= 2, "grid needs at least two points");
    let step = (b - a) / (m - 1) as f64;
    (0..m)
        .map(|i| if i == m - 1 { b } else { a + i as f64 * step })
        .collect()
}
