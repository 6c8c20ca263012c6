//! Generative models for the two benchmark scenarios, Monte Carlo
//! replication, and the integrated squared bias / variance / MISE
//! decomposition of a survival estimator against the true curve.
//!
//! Both scenarios share the latency (a truncated exponential whose rate grows
//! with the covariate) and the censoring law (exponential, mean 10/3 by
//! default); they differ only in how the cure probability depends on the
//! covariate. Covariates are uniform on [-20, 20] by default.

use rayon::prelude::*;

use crate::curve::{trapezoid_uniform, uniform_grid};
use crate::error::{Error, Result};
use crate::estimators::{
    survival_beran, survival_c, survival_kaplan_meier, survival_unconditional_c,
};
use crate::kernel::{nw_weights, Kernel, KernelSpec};
use crate::rng::substream;
use crate::sample::{OrderedSample, Outcome, SurvivalRecord};

/// Time beyond which the latency survival is identically zero.
pub const LATENCY_HORIZON: f64 = 4.605;

/// Quadrature points used for every MISE-type integral in this module.
const TIME_GRID_POINTS: usize = 100;

/// Which cure-probability profile drives the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Logistic uncured probability in the covariate.
    One,
    /// Cubic cure probability, antisymmetric around the range midpoint.
    Two,
}

impl Scenario {
    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Scenario::One),
            2 => Ok(Scenario::Two),
            other => Err(Error::InvalidArgument(format!(
                "unknown scenario id {other}, expected 1 or 2"
            ))),
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Scenario::One => 1,
            Scenario::Two => 2,
        }
    }
}

/// Full generative description of a simulation scenario.
///
/// `covariate_range` must stay inside [-20, 20], the domain on which both
/// cure profiles are valid probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    /// Probability that a cured subject's status is actually observed.
    pub pi: f64,
    pub n: usize,
    pub censoring_mean: f64,
    pub covariate_range: (f64, f64),
}

impl ScenarioSpec {
    pub fn new(scenario: Scenario, pi: f64, n: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&pi) {
            return Err(Error::InvalidArgument(format!(
                "pi must lie in [0, 1], got {pi}"
            )));
        }
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Self {
            scenario,
            pi,
            n,
            censoring_mean: 10.0 / 3.0,
            covariate_range: (-20.0, 20.0),
        })
    }
}

fn latency_rate(x: f64) -> f64 {
    ((x + 20.0) / 40.0).exp()
}

/// Conditional survival of the uncured subpopulation: a unit-scale
/// exponential with covariate-dependent rate, truncated so that it hits zero
/// at [`LATENCY_HORIZON`].
pub fn latency_s0(t: f64, x: f64) -> f64 {
    if t >= LATENCY_HORIZON {
        return 0.0;
    }
    let a = latency_rate(x);
    let tail = (-LATENCY_HORIZON * a).exp();
    ((-a * t).exp() - tail) / (1.0 - tail)
}

/// The time at which the latency survival reaches `q`, by closed-form
/// inversion of the truncated exponential.
fn latency_quantile(q: f64, x: f64) -> f64 {
    let a = latency_rate(x);
    let tail = (-LATENCY_HORIZON * a).exp();
    -(q * (1.0 - tail) + tail).ln() / a
}

/// 90th percentile of the uncured lifetime distribution: the unique `t` with
/// `latency_s0(t, x) = 0.1`. Used as the right endpoint of MISE integrals.
pub fn tau_x(x: f64) -> f64 {
    latency_quantile(0.1, x)
}

/// Cure probability at `x` for the given scenario. Both profiles stay inside
/// [0, 1] on the default covariate range; anything outside is rejected.
pub fn cure_rate(scenario: Scenario, x: f64) -> Result<f64> {
    let value = match scenario {
        Scenario::One => {
            let z = 0.476 + 0.358 * x;
            1.0 - 1.0 / (1.0 + (-z).exp())
        }
        Scenario::Two => 0.5 - x * x * x / 16000.0,
    };
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange {
            x,
            lo: -20.0,
            hi: 20.0,
        });
    }
    Ok(value)
}

/// Closed-form truth functions for one scenario.
#[derive(Debug, Clone, Copy)]
pub struct TruthOracle {
    scenario: Scenario,
}

impl TruthOracle {
    pub fn new(scenario: Scenario) -> Self {
        Self { scenario }
    }

    pub fn latency(&self, t: f64, x: f64) -> f64 {
        latency_s0(t, x)
    }

    pub fn cure_rate(&self, x: f64) -> Result<f64> {
        cure_rate(self.scenario, x)
    }

    /// Mixture survival: cure mass plus the uncured share of the latency.
    pub fn survival(&self, t: f64, x: f64) -> Result<f64> {
        let cured = self.cure_rate(x)?;
        Ok(cured + (1.0 - cured) * latency_s0(t, x))
    }

    pub fn tau(&self, x: f64) -> f64 {
        tau_x(x)
    }
}

/// Draw one uncured lifetime at covariate `x` by inverse transform.
pub fn sample_latency(x: f64, rng: &mut impl rand::Rng) -> f64 {
    latency_quantile(rng.random::<f64>(), x)
}

/// Draw one censoring time: exponential with the given mean.
pub fn sample_censoring(mean: f64, rng: &mut impl rand::Rng) -> f64 {
    -mean * (1.0 - rng.random::<f64>()).ln()
}

/// Generate one dataset.
///
/// Per subject: draw the covariate uniformly; decide cure status from the
/// scenario's cure probability; cured subjects are observed at their
/// censoring time and identified with probability `pi`, while uncured
/// subjects are observed at the minimum of lifetime and censoring time.
/// Censoring is drawn without reference to lifetime or cure status.
pub fn draw_dataset(spec: &ScenarioSpec, rng: &mut impl rand::Rng) -> Vec<SurvivalRecord> {
    let (lo, hi) = spec.covariate_range;
    (0..spec.n)
        .map(|_| {
            let x = lo + rng.random::<f64>() * (hi - lo);
            let cured_prob = cure_rate(spec.scenario, x)
                .expect("cure probability stays in [0, 1] on the covariate range");
            let cured = rng.random::<f64>() < cured_prob;
            if cured {
                let c = sample_censoring(spec.censoring_mean, rng);
                let identified = rng.random::<f64>() < spec.pi;
                let outcome = if identified {
                    Outcome::CensoredCured
                } else {
                    Outcome::CensoredUnknown
                };
                SurvivalRecord {
                    x,
                    time: c,
                    outcome,
                }
            } else {
                let y = sample_latency(x, rng);
                let c = sample_censoring(spec.censoring_mean, rng);
                if y <= c {
                    SurvivalRecord {
                        x,
                        time: y,
                        outcome: Outcome::Event,
                    }
                } else {
                    SurvivalRecord {
                        x,
                        time: c,
                        outcome: Outcome::CensoredUnknown,
                    }
                }
            }
        })
        .collect()
}

/// Which survival estimator a Monte Carlo experiment evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    /// Cure-informed conditional product-limit estimator.
    Proposed,
    /// Beran's conditional estimator, cure labels ignored.
    Beran,
    /// Classical Kaplan-Meier, unconditional.
    KaplanMeier,
    /// Cure-informed unconditional estimator.
    Unconditional,
    /// The true curve itself; a diagnostic that must score zero error.
    Oracle,
}

/// Monte Carlo error decomposition of one estimator at one `(x, h)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MiseReport {
    pub x: f64,
    pub h: f64,
    pub ibias2: f64,
    pub ivar: f64,
    pub mise: f64,
    /// Replicates that produced a usable curve.
    pub replicates: usize,
    /// Replicates dropped because the kernel had no support at `x`.
    pub dropped: usize,
}

fn curve_on_grid(
    records: &[SurvivalRecord],
    x: f64,
    h: f64,
    family: Kernel,
    estimator: EstimatorKind,
    grid: &[f64],
    truth: &[f64],
) -> Result<Option<Vec<f64>>> {
    let curve = match estimator {
        EstimatorKind::Oracle => return Ok(Some(truth.to_vec())),
        EstimatorKind::KaplanMeier => survival_kaplan_meier(records)?,
        EstimatorKind::Unconditional => survival_unconditional_c(records)?,
        EstimatorKind::Proposed | EstimatorKind::Beran => {
            let sample = OrderedSample::new(records.to_vec())?;
            let spec = KernelSpec::new(family, h)?;
            let weights = match nw_weights(&spec, &sample.covariates(), x) {
                Ok(w) => w,
                Err(Error::DegenerateWeights { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            if estimator == EstimatorKind::Proposed {
                survival_c(&sample, &weights)
            } else {
                survival_beran(&sample, &weights)
            }
        }
    };
    Ok(Some(curve.eval_many(grid)))
}

/// Estimate integrated squared bias, integrated variance and MISE of an
/// estimator at `(x, h)` over independent replicate datasets.
///
/// The integrals run over `[0, tau_x]` on a uniform grid; the decomposition
/// `mise = ibias2 + ivar` holds pointwise over the common Monte Carlo sample
/// by construction. Replicates whose kernel weights degenerate at `x` are
/// dropped and counted.
pub fn mise_decompose(
    spec: &ScenarioSpec,
    x: f64,
    h: f64,
    family: Kernel,
    estimator: EstimatorKind,
    replicates: usize,
    seed: u64,
) -> Result<MiseReport> {
    if replicates < 2 {
        return Err(Error::InvalidArgument(
            "MISE decomposition needs at least two replicates".into(),
        ));
    }
    let oracle = TruthOracle::new(spec.scenario);
    let tau = oracle.tau(x);
    let grid = uniform_grid(0.0, tau, TIME_GRID_POINTS);
    let step = grid[1] - grid[0];
    let truth: Vec<f64> = grid
        .iter()
        .map(|&t| oracle.survival(t, x))
        .collect::<Result<_>>()?;

    let rows: Vec<Option<Vec<f64>>> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = substream(seed, r as u64);
            let records = draw_dataset(spec, &mut rng);
            curve_on_grid(&records, x, h, family, estimator, &grid, &truth)
        })
        .collect::<Result<_>>()?;

    let used: Vec<&Vec<f64>> = rows.iter().flatten().collect();
    let dropped = replicates - used.len();
    if used.is_empty() {
        return Err(Error::DegenerateWeights { x, bandwidth: h });
    }

    let m = grid.len();
    let inv = 1.0 / used.len() as f64;
    let mut mean = vec![0.0; m];
    for row in &used {
        for (acc, v) in mean.iter_mut().zip(row.iter()) {
            *acc += v;
        }
    }
    for v in &mut mean {
        *v *= inv;
    }

    let mut sq_bias = vec![0.0; m];
    let mut var = vec![0.0; m];
    let mut msq = vec![0.0; m];
    for j in 0..m {
        let b = mean[j] - truth[j];
        sq_bias[j] = b * b;
    }
    for row in &used {
        for j in 0..m {
            let dv = row[j] - mean[j];
            var[j] += dv * dv;
            let de = row[j] - truth[j];
            msq[j] += de * de;
        }
    }
    for j in 0..m {
        var[j] *= inv;
        msq[j] *= inv;
    }

    Ok(MiseReport {
        x,
        h,
        ibias2: trapezoid_uniform(&sq_bias, step),
        ivar: trapezoid_uniform(&var, step),
        mise: trapezoid_uniform(&msq, step),
        replicates: used.len(),
        dropped,
    })
}

/// Monte Carlo scan of the true MISE over a bandwidth grid, reusing the same
/// replicate datasets for every candidate (the seed pins them).
///
/// Returns the minimizing bandwidth (smallest on ties) and the full
/// per-candidate decomposition.
pub fn optimal_bandwidth_scan(
    spec: &ScenarioSpec,
    x: f64,
    grid: &[f64],
    family: Kernel,
    estimator: EstimatorKind,
    replicates: usize,
    seed: u64,
) -> Result<(f64, Vec<MiseReport>)> {
    if grid.is_empty() {
        return Err(Error::InvalidRange("bandwidth grid is empty".into()));
    }
    let reports: Vec<MiseReport> = grid
        .iter()
        .map(|&h| mise_decompose(spec, x, h, family, estimator, replicates, seed))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, r) in reports.iter().enumerate().skip(1) {
        if r.mise < reports[best].mise {
            best = i;
        }
    }
    Ok((reports[best].h, reports))
}
