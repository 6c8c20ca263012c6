//! Bootstrap bandwidth selection.
//!
//! The selected bandwidth minimizes, over a grid, a bootstrap estimate of the
//! weighted mean integrated squared error of the survival curve at the target
//! covariate value. The reference curve is the estimate computed from the
//! original sample with an oversmoothing pilot bandwidth; bootstrap resamples
//! keep every covariate fixed and redraw each record's (time, outcome) pair
//! from the pilot-bandwidth empirical law localized at that record's own
//! covariate, so the resampled data keep the covariate structure of the
//! original sample.

use rayon::prelude::*;

use crate::curve::{trapezoid_uniform, uniform_grid};
use crate::error::{Error, Result};
use crate::estimators::survival_c;
use crate::kernel::{nw_weights, Kernel, KernelSpec, WeightVector};
use crate::rng::substream;
use crate::sample::{OrderedSample, SurvivalRecord};

/// Everything a bandwidth search needs besides the data: candidate grid,
/// bootstrap replicate count, pilot bandwidth, the interval `[a, b]` the
/// squared error is integrated over, and the quadrature grid size.
#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthSearch {
    pub grid: Vec<f64>,
    pub replicates: usize,
    pub pilot: f64,
    pub weight_bounds: (f64, f64),
    pub time_grid_size: usize,
}

impl BandwidthSearch {
    pub fn new(
        grid: Vec<f64>,
        replicates: usize,
        pilot: f64,
        weight_bounds: (f64, f64),
        time_grid_size: usize,
    ) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidRange(
                "bandwidth grid needs at least two candidates".into(),
            ));
        }
        if grid.iter().any(|h| !h.is_finite() || *h <= 0.0) {
            return Err(Error::InvalidArgument(
                "bandwidth candidates must be positive and finite".into(),
            ));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRange(
                "bandwidth grid must be strictly increasing".into(),
            ));
        }
        if replicates == 0 {
            return Err(Error::InvalidArgument(
                "at least one bootstrap replicate is required".into(),
            ));
        }
        if !pilot.is_finite() || pilot <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "pilot bandwidth must be positive and finite, got {pilot}"
            )));
        }
        let (a, b) = weight_bounds;
        if !a.is_finite() || !b.is_finite() || a < 0.0 || a >= b {
            return Err(Error::InvalidRange(format!(
                "weight bounds must satisfy 0 <= a < b, got ({a}, {b})"
            )));
        }
        if time_grid_size < 2 {
            return Err(Error::InvalidArgument(
                "time grid needs at least two points".into(),
            ));
        }
        Ok(Self {
            grid,
            replicates,
            pilot,
            weight_bounds,
            time_grid_size,
        })
    }
}

/// Bootstrap MISE estimates along the candidate grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MiseProfile {
    bandwidths: Vec<f64>,
    mise_star: Vec<f64>,
    argmin_index: usize,
}

impl MiseProfile {
    pub fn bandwidths(&self) -> &[f64] {
        &self.bandwidths
    }

    pub fn mise_star(&self) -> &[f64] {
        &self.mise_star
    }

    pub fn argmin_index(&self) -> usize {
        self.argmin_index
    }

    /// The minimizing bandwidth (ties resolved toward the smallest).
    pub fn selected(&self) -> f64 {
        self.bandwidths[self.argmin_index]
    }
}

/// Index of the minimum, first occurrence on ties so the smallest bandwidth
/// wins (undersmoothing is the conservative failure mode).
fn argmin_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// `count` log-equispaced bandwidths from `h_min` to `h_max`, endpoints exact.
pub fn default_grid(h_min: f64, h_max: f64, count: usize) -> Result<Vec<f64>> {
    if !h_min.is_finite() || !h_max.is_finite() || h_min <= 0.0 || h_min >= h_max {
        return Err(Error::InvalidRange(format!(
            "need 0 < h_min < h_max, got ({h_min}, {h_max})"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidRange("grid needs at least two points".into()));
    }
    let log_ratio = (h_max / h_min).ln();
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                h_max
            } else {
                h_min * (log_ratio * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// Default neighbor count for the pilot bandwidth: `n / 4`, at least 1.
pub fn default_pilot_k(n: usize) -> usize {
    (n / 4).max(1)
}

/// Local pilot bandwidth at `x` from k-nearest-neighbor distances:
/// `g = (d_k_right + d_k_left) / 2 * 100^(1/9) * n^(-1/9)`.
///
/// When one side has fewer than `k` neighbors its distance is mirrored from
/// the other side; if both sides fall short the pilot is undefined.
pub fn pilot_bandwidth(xs: &[f64], x: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "neighbor count k must be >= 1".into(),
        ));
    }
    let mut right: Vec<f64> = xs.iter().filter(|&&v| v > x).map(|v| v - x).collect();
    let mut left: Vec<f64> = xs.iter().filter(|&&v| v < x).map(|v| x - v).collect();
    right.sort_unstable_by(f64::total_cmp);
    left.sort_unstable_by(f64::total_cmp);
    let d_right = right.get(k - 1).copied();
    let d_left = left.get(k - 1).copied();
    let (dp, dm) = match (d_right, d_left) {
        (Some(r), Some(l)) => (r, l),
        (Some(r), None) => (r, r),
        (None, Some(l)) => (l, l),
        (None, None) => return Err(Error::InsufficientNeighbors { x, k }),
    };
    let n = xs.len() as f64;
    Ok(0.5 * (dp + dm) * 100f64.powf(1.0 / 9.0) * n.powf(-1.0 / 9.0))
}

/// Resample `(time, outcome)` pairs from a single weighted empirical law,
/// keeping every covariate fixed. Each of the `n` output records keeps the
/// covariate of the ordered record at its position and copies the time and
/// outcome of an index drawn with the given probabilities.
pub fn resample_conditional(
    sample: &OrderedSample,
    pilot_weights: &WeightVector,
    rng: &mut impl rand::Rng,
) -> Vec<SurvivalRecord> {
    assert_eq!(
        sample.len(),
        pilot_weights.len(),
        "weights must align with the sample"
    );
    let recs = sample.records();
    let cum = cumulative(pilot_weights.weights());
    recs.iter()
        .map(|r| {
            let j = draw_index(&cum, rng);
            SurvivalRecord {
                x: r.x,
                time: recs[j].time,
                outcome: recs[j].outcome,
            }
        })
        .collect()
}

fn cumulative(weights: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .iter()
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

fn draw_index(cum: &[f64], rng: &mut impl rand::Rng) -> usize {
    let total = *cum.last().expect("nonempty cumulative weights");
    let u: f64 = rng.random::<f64>() * total;
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

/// The bootstrap MISE of the survival estimate at `x` along the candidate
/// bandwidth grid.
///
/// Candidates with no kernel support at `x` get an infinite entry and can
/// never win the argmin; replicate cells that fail individually are skipped
/// and the average renormalized over the cells that remain.
pub fn bootstrap_mise(
    sample: &OrderedSample,
    x: f64,
    search: &BandwidthSearch,
    family: Kernel,
    seed: u64,
) -> Result<MiseProfile> {
    let n = sample.len();
    let recs = sample.records();

    let pilot_spec = KernelSpec::new(family, search.pilot)?;
    let pilot_weights = nw_weights(&pilot_spec, &sample.covariates(), x)?;
    let pilot_curve = survival_c(sample, &pilot_weights);

    let (a, b) = search.weight_bounds;
    let time_grid = uniform_grid(a, b, search.time_grid_size);
    let step = time_grid[1] - time_grid[0];
    let pilot_vals = pilot_curve.eval_many(&time_grid);

    // Kernel numerators per candidate bandwidth, indexed by the position of
    // each record in the ordered sample. Covariates never change across
    // resamples, so the weight denominators are resample-invariant too.
    let kmat: Vec<Vec<f64>> = search
        .grid
        .iter()
        .map(|&h| recs.iter().map(|r| family.density((x - r.x) / h)).collect())
        .collect();
    let denom: Vec<f64> = kmat.iter().map(|k| k.iter().sum()).collect();

    // Cumulative resampling law per record, localized at its own covariate
    // with the pilot bandwidth. The diagonal kernel value is positive, so
    // every row is a valid distribution.
    let rows: Vec<Vec<f64>> = recs
        .iter()
        .map(|ri| {
            let raw: Vec<f64> = recs
                .iter()
                .map(|rj| family.density((ri.x - rj.x) / search.pilot))
                .collect();
            cumulative(&raw)
        })
        .collect();

    let l_count = search.grid.len();
    let cells: Vec<Vec<Option<f64>>> = (0..search.replicates)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(seed, b as u64);
            // draw the resample, remembering each record's original position
            // so kernel numerators can be looked up after reordering
            let mut drawn: Vec<(SurvivalRecord, usize)> = (0..n)
                .map(|i| {
                    let j = draw_index(&rows[i], &mut rng);
                    (
                        SurvivalRecord {
                            x: recs[i].x,
                            time: recs[j].time,
                            outcome: recs[j].outcome,
                        },
                        i,
                    )
                })
                .collect();
            drawn.sort_by(|(p, _), (q, _)| {
                p.time
                    .total_cmp(&q.time)
                    .then(p.outcome.cmp(&q.outcome))
                    .then(p.x.total_cmp(&q.x))
            });
            let ordered = OrderedSample::new(drawn.iter().map(|(r, _)| *r).collect())
                .expect("resample is nonempty");

            (0..l_count)
                .map(|l| {
                    if denom[l] <= 0.0 {
                        return None;
                    }
                    let raw: Vec<f64> = drawn.iter().map(|&(_, i)| kmat[l][i]).collect();
                    let weights = WeightVector::new(raw, x).ok()?;
                    let curve = survival_c(&ordered, &weights);
                    let sq: Vec<f64> = time_grid
                        .iter()
                        .zip(&pilot_vals)
                        .map(|(&t, &p)| {
                            let d = curve.eval(t) - p;
                            d * d
                        })
                        .collect();
                    Some(trapezoid_uniform(&sq, step))
                })
                .collect()
        })
        .collect();

    // aggregate in replicate order: identical results at any thread count
    let mut mise_star = vec![0.0; l_count];
    let mut used = vec![0usize; l_count];
    for row in &cells {
        for (l, cell) in row.iter().enumerate() {
            if let Some(v) = cell {
                mise_star[l] += v;
                used[l] += 1;
            }
        }
    }
    for l in 0..l_count {
        mise_star[l] = if used[l] == 0 {
            f64::INFINITY
        } else {
            mise_star[l] / used[l] as f64
        };
    }

    let argmin_index = argmin_first(&mise_star);
    Ok(MiseProfile {
        bandwidths: search.grid.clone(),
        mise_star,
        argmin_index,
    })
}

/// Run [`bootstrap_mise`] and return the winning bandwidth with its profile.
/// Deterministic in `(sample, x, search, seed)`.
pub fn select_bandwidth(
    sample: &OrderedSample,
    x: f64,
    search: &BandwidthSearch,
    family: Kernel,
    seed: u64,
) -> Result<(f64, MiseProfile)> {
    let profile = bootstrap_mise(sample, x, search, family, seed)?;
    Ok((profile.selected(), profile))
}
