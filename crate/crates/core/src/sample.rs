//! Survival records and the ordered-sample representation.

use crate::error::{Error, Result};

/// Observed outcome of one subject.
///
/// Exactly three states are observable under right censoring with partially
/// known cure status: the event occurred; the time was censored with unknown
/// status; or the time was censored and the subject is known to never
/// experience the event.
///
/// The declaration order doubles as the tie-breaking rank used when sorting
/// records that share an observed time (events first, then unknown-status
/// censorings, then known-cured censorings), so that tied events keep tied
/// censored records in their risk set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    /// The event was observed; the subject is known to be susceptible.
    Event,
    /// Censored with unknown cure status.
    CensoredUnknown,
    /// Censored and verified to be cured.
    CensoredCured,
}

impl Outcome {
    pub fn is_event(self) -> bool {
        self == Outcome::Event
    }

    pub fn is_cured(self) -> bool {
        self == Outcome::CensoredCured
    }
}

/// One observation: covariate, observed time `T = min(Y, C)` and outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalRecord {
    pub x: f64,
    pub time: f64,
    pub outcome: Outcome,
}

impl SurvivalRecord {
    pub fn new(x: f64, time: f64, outcome: Outcome) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "covariate must be finite, got {x}"
            )));
        }
        if !time.is_finite() || time < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "observed time must be finite and nonnegative, got {time}"
            )));
        }
        Ok(Self { x, time, outcome })
    }
}

/// Records sorted by observed time, covariates and outcomes carried along.
///
/// Ties in time are broken by outcome rank (see [`Outcome`]) and then by
/// covariate, which makes every estimator in this crate a pure function of
/// the record *set*, independent of input order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSample {
    records: Vec<SurvivalRecord>,
}

impl OrderedSample {
    pub fn new(mut records: Vec<SurvivalRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptySample);
        }
        for r in &records {
            if !r.time.is_finite() || r.time < 0.0 || !r.x.is_finite() {
                return Err(Error::InvalidArgument(
                    "records must have finite covariates and nonnegative finite times".into(),
                ));
            }
        }
        records.sort_by(|a, b| {
            a.time
                .total_cmp(&b.time)
                .then(a.outcome.cmp(&b.outcome))
                .then(a.x.total_cmp(&b.x))
        });
        Ok(Self { records })
    }

    pub fn records(&self) -> &[SurvivalRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Covariates in sample order, e.g. for weight computation.
    pub fn covariates(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.x).collect()
    }

    /// Largest observed time.
    pub fn max_time(&self) -> f64 {
        self.records.last().map(|r| r.time).unwrap_or(0.0)
    }

    /// Largest observed event time, if any event was observed.
    pub fn max_event_time(&self) -> Option<f64> {
        self.records
            .iter()
            .rev()
            .find(|r| r.outcome.is_event())
            .map(|r| r.time)
    }
}
