//! Product-limit estimators of the conditional survival function, with and
//! without verified-cured information, plus their classical reductions.
//!
//! All conditional estimators share one construction: per-record hazard
//! increments at the ordered event times, turned into either a cumulative sum
//! (hazard) or a product of complements (survival). The cure-informed
//! estimator differs from Beran's only in its risk mass: censored subjects
//! verified to be cured are kept in the denominator after their censoring
//! time.
//!
//! Conventions, fixed once here:
//! - a record with zero kernel weight contributes no factor (the limit of a
//!   vanishing-weight term), so events outside the kernel support never
//!   produce 0/0;
//! - curves jump only at event times and are evaluated right-continuously;
//! - beyond the largest observed time the curve stays on its last plateau.

use crate::curve::StepCurve;
use crate::error::{Error, Result};
use crate::kernel::WeightVector;
use crate::sample::{OrderedSample, SurvivalRecord};

fn check_alignment(sample: &OrderedSample, weights: &WeightVector) {
    assert_eq!(
        sample.len(),
        weights.len(),
        "weight vector must be aligned with the ordered sample"
    );
}

/// Per-record hazard increments.
///
/// For the i-th ordered record the increment is
/// `w_i / (sum_{j>=i} w_j [+ sum_{j<i, cured} w_j])` if the record is an
/// event with positive weight, else 0. The bracketed cured mass is included
/// exactly when `retain_cured` is set (the cure-informed risk mass).
fn hazard_increments(
    sample: &OrderedSample,
    weights: &WeightVector,
    retain_cured: bool,
) -> Vec<f64> {
    let recs = sample.records();
    let w = weights.weights();
    let n = recs.len();

    // tail[i] = w[i] + w[i+1] + ... accumulated right to left
    let mut tail = vec![0.0; n + 1];
    for i in (0..n).rev() {
        tail[i] = tail[i + 1] + w[i];
    }

    let mut increments = vec![0.0; n];
    let mut cured_mass = 0.0;
    for i in 0..n {
        if recs[i].outcome.is_event() && w[i] > 0.0 {
            let denom = if retain_cured {
                tail[i] + cured_mass
            } else {
                tail[i]
            };
            // denom >= w[i] > 0, so the increment lies in (0, 1]
            increments[i] = w[i] / denom;
        }
        if recs[i].outcome.is_cured() {
            cured_mass += w[i];
        }
    }
    increments
}

/// Fold per-record increments into a survival step curve, one jump per
/// distinct event time carrying positive mass.
fn product_limit_curve(sample: &OrderedSample, increments: &[f64]) -> StepCurve {
    let recs = sample.records();
    let n = recs.len();
    let mut jump_times = Vec::new();
    let mut values = Vec::new();
    let mut survival = 1.0;
    let mut i = 0;
    while i < n {
        let t = recs[i].time;
        let mut factor = 1.0;
        let mut jumped = false;
        while i < n && recs[i].time == t {
            if increments[i] > 0.0 {
                factor *= 1.0 - increments[i];
                jumped = true;
            }
            i += 1;
        }
        if jumped {
            survival *= factor;
            jump_times.push(t);
            values.push(survival);
        }
    }
    StepCurve::new(1.0, jump_times, values).expect("distinct event times are strictly increasing")
}

fn cumulative_curve(sample: &OrderedSample, increments: &[f64]) -> StepCurve {
    let recs = sample.records();
    let n = recs.len();
    let mut jump_times = Vec::new();
    let mut values = Vec::new();
    let mut hazard = 0.0;
    let mut i = 0;
    while i < n {
        let t = recs[i].time;
        let mut step = 0.0;
        let mut jumped = false;
        while i < n && recs[i].time == t {
            if increments[i] > 0.0 {
                step += increments[i];
                jumped = true;
            }
            i += 1;
        }
        if jumped {
            hazard += step;
            jump_times.push(t);
            values.push(hazard);
        }
    }
    StepCurve::new(0.0, jump_times, values).expect("distinct event times are strictly increasing")
}

/// Kernel estimate of the event subdistribution `P(T <= t, event)` at `t`.
pub fn subdist_h1(sample: &OrderedSample, weights: &WeightVector, t: f64) -> f64 {
    check_alignment(sample, weights);
    sample
        .records()
        .iter()
        .zip(weights.weights())
        .filter(|(r, _)| r.outcome.is_event() && r.time <= t)
        .map(|(_, w)| w)
        .sum()
}

/// Kernel estimate of the risk mass just before `t`: everything still under
/// observation at `t` plus the known-cured mass censored earlier, which
/// re-enters the denominator.
pub fn risk_j(sample: &OrderedSample, weights: &WeightVector, t: f64) -> f64 {
    check_alignment(sample, weights);
    let recs = sample.records();
    let w = weights.weights();
    let idx = recs.partition_point(|r| r.time < t);
    // summation order mirrors hazard_increments so the identity
    // increment = delta_subdist / risk holds to the bit on tie-free samples
    let mut at_risk = 0.0;
    for j in (idx..recs.len()).rev() {
        at_risk += w[j];
    }
    let mut cured_mass = 0.0;
    for j in 0..idx {
        if recs[j].outcome.is_cured() {
            cured_mass += w[j];
        }
    }
    at_risk + cured_mass
}

/// Cumulative hazard with known-cured subjects retained in the risk mass.
pub fn cumulative_hazard_c(sample: &OrderedSample, weights: &WeightVector) -> StepCurve {
    check_alignment(sample, weights);
    let inc = hazard_increments(sample, weights, true);
    cumulative_curve(sample, &inc)
}

/// The cure-informed product-limit estimator of conditional survival.
pub fn survival_c(sample: &OrderedSample, weights: &WeightVector) -> StepCurve {
    check_alignment(sample, weights);
    let inc = hazard_increments(sample, weights, true);
    product_limit_curve(sample, &inc)
}

/// Beran's conditional product-limit estimator (cure status ignored).
pub fn survival_beran(sample: &OrderedSample, weights: &WeightVector) -> StepCurve {
    check_alignment(sample, weights);
    let inc = hazard_increments(sample, weights, false);
    product_limit_curve(sample, &inc)
}

/// Kernel estimator of conditional survival for fully uncensored samples:
/// the weight mass strictly beyond `t`.
pub fn survival_kernel_nocensor(
    sample: &OrderedSample,
    weights: &WeightVector,
) -> Result<StepCurve> {
    check_alignment(sample, weights);
    let recs = sample.records();
    if recs.iter().any(|r| !r.outcome.is_event()) {
        return Err(Error::ContainsCensoring);
    }
    let w = weights.weights();
    let n = recs.len();
    let mut tail = vec![0.0; n + 1];
    for i in (0..n).rev() {
        tail[i] = tail[i + 1] + w[i];
    }
    let mut jump_times = Vec::new();
    let mut values = Vec::new();
    let mut i = 0;
    while i < n {
        let t = recs[i].time;
        let mut mass = 0.0;
        while i < n && recs[i].time == t {
            mass += w[i];
            i += 1;
        }
        if mass > 0.0 {
            jump_times.push(t);
            values.push(tail[i]);
        }
    }
    StepCurve::new(1.0, jump_times, values)
}

/// The cure-informed estimator in the unconditional (weightless) setting:
/// at the i-th ordered event the factor is
/// `1 - 1 / (n - i + 1 + #cured among the first i-1 records)`.
pub fn survival_unconditional_c(records: &[SurvivalRecord]) -> Result<StepCurve> {
    let sample = OrderedSample::new(records.to_vec())?;
    let recs = sample.records();
    let n = recs.len();
    let mut increments = vec![0.0; n];
    let mut cured_count = 0usize;
    for (i, r) in recs.iter().enumerate() {
        if r.outcome.is_event() {
            increments[i] = 1.0 / (n - i + cured_count) as f64;
        }
        if r.outcome.is_cured() {
            cured_count += 1;
        }
    }
    Ok(product_limit_curve(&sample, &increments))
}

/// Classical Kaplan-Meier estimator; known-cured records are treated as
/// plain censorings.
pub fn survival_kaplan_meier(records: &[SurvivalRecord]) -> Result<StepCurve> {
    let sample = OrderedSample::new(records.to_vec())?;
    let recs = sample.records();
    let n = recs.len();
    let mut jump_times = Vec::new();
    let mut values = Vec::new();
    let mut survival = 1.0;
    let mut at_risk = n;
    let mut i = 0;
    while i < n {
        let t = recs[i].time;
        let mut events = 0usize;
        let mut removed = 0usize;
        while i < n && recs[i].time == t {
            if recs[i].outcome.is_event() {
                events += 1;
            }
            removed += 1;
            i += 1;
        }
        if events > 0 {
            survival *= 1.0 - events as f64 / at_risk as f64;
            jump_times.push(t);
            values.push(survival);
        }
        at_risk -= removed;
    }
    StepCurve::new(1.0, jump_times, values)
}
