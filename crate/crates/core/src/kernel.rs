//! Kernel functions and Nadaraya-Watson weights.
//!
//! All estimators in this crate localize at a covariate value `x` through the
//! same weight construction: a symmetric density kernel, rescaled by a
//! bandwidth `h`, evaluated at each observation and normalized over the
//! sample. Weights are computed once per evaluation point and shared by every
//! curve built at that point.

use crate::error::{Error, Result};

/// Kernel family. Both members are symmetric densities supported on (-1, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `K(u) = 0.75 (1 - u^2)` on (-1, 1).
    Epanechnikov,
    /// `K(u) = 0.5` on (-1, 1).
    Uniform,
}

impl Kernel {
    /// Kernel density at `u` (unscaled; zero outside (-1, 1)).
    pub fn density(self, u: f64) -> f64 {
        if u.abs() >= 1.0 {
            return 0.0;
        }
        match self {
            Kernel::Epanechnikov => 0.75 * (1.0 - u * u),
            Kernel::Uniform => 0.5,
        }
    }
}

/// A kernel family together with a positive bandwidth in covariate units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub family: Kernel,
    pub bandwidth: f64,
}

impl KernelSpec {
    pub fn new(family: Kernel, bandwidth: f64) -> Result<Self> {
        if !bandwidth.is_finite() || bandwidth <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "bandwidth must be positive and finite, got {bandwidth}"
            )));
        }
        Ok(Self { family, bandwidth })
    }

    /// Unnormalized weight of an observation at `xi` for evaluation point `x`:
    /// the kernel density at `(x - xi) / h`. Zero whenever `|x - xi| >= h`.
    pub fn weight_at(&self, x: f64, xi: f64) -> f64 {
        self.family.density((x - xi) / self.bandwidth)
    }
}

/// Normalized kernel weights for one evaluation point.
///
/// Entries are nonnegative, sum to one, and are aligned with the covariate
/// vector they were computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
    x: f64,
}

impl WeightVector {
    /// Normalize a raw nonnegative weight vector. The sum must be positive.
    pub fn new(raw: Vec<f64>, x: f64) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySample);
        }
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidArgument("weights sum to zero".into()));
        }
        let weights = raw.into_iter().map(|w| w / sum).collect();
        Ok(Self { weights, x })
    }

    /// Uniform weights `1/n`, the unconditional special case.
    pub fn uniform(n: usize, x: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
            x,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn evaluation_point(&self) -> f64 {
        self.x
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Nadaraya-Watson weights at `x`: kernel values normalized over the sample.
///
/// Fails with [`Error::DegenerateWeights`] when no observation lies within
/// one bandwidth of `x`; a hard error here keeps NaN out of every downstream
/// product and bootstrap average.
pub fn nw_weights(spec: &KernelSpec, xs: &[f64], x: f64) -> Result<WeightVector> {
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    let raw: Vec<f64> = xs.iter().map(|&xi| spec.weight_at(x, xi)).collect();
    let sum: f64 = raw.iter().sum();
    if sum <= 0.0 {
        return Err(Error::DegenerateWeights {
            x,
            bandwidth: spec.bandwidth,
        });
    }
    Ok(WeightVector {
        weights: raw.into_iter().map(|w| w / sum).collect(),
        x,
    })
}
