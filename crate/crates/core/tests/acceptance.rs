//! Acceptance suite: one test per exit criterion, each at its stated
//! tolerance. Test names double as the pass/fail lines; run with
//! `cargo test --test acceptance -- --nocapture` to see the measured values.

use cureplim::curve::{trapezoid_uniform, uniform_grid};
use cureplim::rng::substream;
use cureplim::*;
use rand::seq::SliceRandom;
use rand::Rng;

const EXACT: f64 = 1e-12;

// ---------------------------------------------------------------------------
// randomized sample machinery
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq)]
enum Mix {
    NoCured,
    WithCured,
    AllEvent,
    ThresholdCured,
}

fn random_records(rng: &mut impl Rng, mix: Mix) -> Vec<SurvivalRecord> {
    let n = 1 + (rng.random::<u32>() % 50) as usize;
    (0..n)
        .map(|_| {
            let x = -5.0 + 10.0 * rng.random::<f64>();
            let u: f64 = rng.random();
            let (time, outcome) = match mix {
                Mix::AllEvent => (5.0 * rng.random::<f64>(), Outcome::Event),
                Mix::NoCured => {
                    let o = if u < 0.6 {
                        Outcome::Event
                    } else {
                        Outcome::CensoredUnknown
                    };
                    (5.0 * rng.random::<f64>(), o)
                }
                Mix::WithCured => {
                    let o = if u < 0.45 {
                        Outcome::Event
                    } else if u < 0.7 {
                        Outcome::CensoredUnknown
                    } else {
                        Outcome::CensoredCured
                    };
                    (5.0 * rng.random::<f64>(), o)
                }
                Mix::ThresholdCured => {
                    // cured records live strictly above every other time
                    if u < 0.3 {
                        (5.0 + 5.0 * rng.random::<f64>(), Outcome::CensoredCured)
                    } else if u < 0.75 {
                        (5.0 * rng.random::<f64>(), Outcome::Event)
                    } else {
                        (5.0 * rng.random::<f64>(), Outcome::CensoredUnknown)
                    }
                }
            };
            SurvivalRecord::new(x, time, outcome).unwrap()
        })
        .collect()
}

fn has_tied_times(records: &[SurvivalRecord]) -> bool {
    let mut ts: Vec<f64> = records.iter().map(|r| r.time).collect();
    ts.sort_unstable_by(f64::total_cmp);
    ts.windows(2).any(|w| w[0] == w[1])
}

/// Alternate between arbitrary normalized weights and genuine kernel weights
/// at a random data point with a random bandwidth.
fn random_weights(rng: &mut impl Rng, sample: &OrderedSample, iteration: usize) -> WeightVector {
    if iteration.is_multiple_of(2) {
        loop {
            let raw: Vec<f64> = (0..sample.len()).map(|_| rng.random::<f64>()).collect();
            if raw.iter().sum::<f64>() > 0.0 {
                return WeightVector::new(raw, 0.0).unwrap();
            }
        }
    } else {
        let xs = sample.covariates();
        let x = xs[(rng.random::<u32>() as usize) % xs.len()];
        let h = 0.5 + 7.5 * rng.random::<f64>();
        let spec = KernelSpec::new(Kernel::Epanechnikov, h).unwrap();
        nw_weights(&spec, &xs, x).unwrap()
    }
}

fn eval_points(records: &[SurvivalRecord]) -> Vec<f64> {
    let mut ts: Vec<f64> = records.iter().map(|r| r.time).collect();
    ts.sort_unstable_by(f64::total_cmp);
    let max = ts.last().copied().unwrap_or(0.0);
    let mut points = vec![0.0];
    for w in ts.windows(2) {
        points.push(0.5 * (w[0] + w[1]));
    }
    points.extend(ts);
    points.push(max + 1.0);
    points
}

fn max_abs_diff(a: &StepCurve, b: &StepCurve, points: &[f64]) -> f64 {
    points
        .iter()
        .map(|&t| (a.eval(t) - b.eval(t)).abs())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// exact / property criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_reductions_over_randomized_samples() {
    let mut rng = substream(101, 0);
    let mut worst = [0.0f64; 5];
    for iteration in 0..1000 {
        // (a) no known-cured records: cure-informed == Beran
        let recs = random_records(&mut rng, Mix::NoCured);
        let sample = OrderedSample::new(recs.clone()).unwrap();
        let w = random_weights(&mut rng, &sample, iteration);
        let pts = eval_points(&recs);
        let d = max_abs_diff(&survival_c(&sample, &w), &survival_beran(&sample, &w), &pts);
        worst[0] = worst[0].max(d);

        // (b) cured records all beyond a threshold: cure-informed == Beran
        let recs = random_records(&mut rng, Mix::ThresholdCured);
        let sample = OrderedSample::new(recs.clone()).unwrap();
        let w = random_weights(&mut rng, &sample, iteration);
        let pts = eval_points(&recs);
        let d = max_abs_diff(&survival_c(&sample, &w), &survival_beran(&sample, &w), &pts);
        worst[1] = worst[1].max(d);

        // (c) fully uncensored: cure-informed == kernel estimator
        let recs = random_records(&mut rng, Mix::AllEvent);
        let sample = OrderedSample::new(recs.clone()).unwrap();
        let w = random_weights(&mut rng, &sample, iteration);
        let pts = eval_points(&recs);
        let kernel = survival_kernel_nocensor(&sample, &w).unwrap();
        let d = max_abs_diff(&survival_c(&sample, &w), &kernel, &pts);
        worst[2] = worst[2].max(d);

        // (d) uniform weights: cure-informed == unconditional form;
        //     and with no cured records the unconditional form == Kaplan-Meier
        let recs = random_records(&mut rng, Mix::WithCured);
        let sample = OrderedSample::new(recs.clone()).unwrap();
        let w = WeightVector::uniform(sample.len(), 0.0).unwrap();
        let pts = eval_points(&recs);
        let uncond = survival_unconditional_c(&recs).unwrap();
        let d = max_abs_diff(&survival_c(&sample, &w), &uncond, &pts);
        worst[3] = worst[3].max(d);

        let recs = random_records(&mut rng, Mix::NoCured);
        let pts = eval_points(&recs);
        let d = max_abs_diff(
            &survival_unconditional_c(&recs).unwrap(),
            &survival_kaplan_meier(&recs).unwrap(),
            &pts,
        );
        worst[4] = worst[4].max(d);
    }
    println!("criterion 1: worst reduction gaps {worst:?} (tolerance {EXACT:e})");
    for (k, w) in worst.iter().enumerate() {
        assert!(*w <= EXACT, "reduction {k} differs by {w}");
    }
}

#[test]
fn criterion_02_dominance_over_beran() {
    let mut rng = substream(102, 0);
    for iteration in 0..1000 {
        let recs = random_records(&mut rng, Mix::WithCured);
        let sample = OrderedSample::new(recs.clone()).unwrap();
        let w = random_weights(&mut rng, &sample, iteration);
        let informed = survival_c(&sample, &w);
        let beran = survival_beran(&sample, &w);
        for t in eval_points(&recs) {
            assert!(
                informed.eval(t) >= beran.eval(t),
                "dominance violated at t = {t}"
            );
        }
    }
    println!("criterion 2: dominance holds on 1000 randomized samples");
}

#[test]
fn criterion_03_hazard_survival_consistency() {
    let mut rng = substream(103, 0);
    let mut worst_product = 0.0f64;
    let mut worst_jump = 0.0f64;
    let mut done = 0;
    while done < 1000 {
        let recs = random_records(&mut rng, Mix::WithCured);
        if has_tied_times(&recs) {
            continue;
        }
        done += 1;
        let sample = OrderedSample::new(recs).unwrap();
        let w = random_weights(&mut rng, &sample, done);
        let survival = survival_c(&sample, &w);
        let hazard = cumulative_hazard_c(&sample, &w);

        // survival equals the running product of hazard-jump complements
        let mut product = 1.0;
        let mut prev_level = 0.0;
        for (k, &t) in hazard.jump_times().iter().enumerate() {
            let jump = hazard.values()[k] - prev_level;
            prev_level = hazard.values()[k];
            product *= 1.0 - jump;
            worst_product = worst_product.max((survival.eval(t) - product).abs());

            // each hazard jump equals the subdistribution increment over the
            // risk mass just before the event time
            let prev_t = if k == 0 {
                0.0
            } else {
                hazard.jump_times()[k - 1]
            };
            let delta_sub = subdist_h1(&sample, &w, t)
                - if k == 0 {
                    0.0
                } else {
                    subdist_h1(&sample, &w, prev_t)
                };
            let identity = delta_sub / risk_j(&sample, &w, t);
            worst_jump = worst_jump.max((jump - identity).abs());
        }
    }
    println!(
        "criterion 3: product gap {worst_product:e}, jump identity gap {worst_jump:e} (tolerance {EXACT:e})"
    );
    assert!(worst_product <= EXACT);
    assert!(worst_jump <= EXACT);
}

#[test]
fn criterion_04_curve_invariants_and_permutation_invariance() {
    let mut rng = substream(104, 0);
    for iteration in 0..1000 {
        let mut recs = random_records(&mut rng, Mix::WithCured);
        let sample = OrderedSample::new(recs.clone()).unwrap();
        let w = random_weights(&mut rng, &sample, iteration);

        for curve in [survival_c(&sample, &w), survival_beran(&sample, &w)] {
            assert_eq!(curve.initial_value(), 1.0);
            let mut prev = 1.0;
            for &v in curve.values() {
                assert!((0.0..=1.0).contains(&v) && v <= prev);
                prev = v;
            }
        }
        let hazard = cumulative_hazard_c(&sample, &w);
        let mut prev = 0.0;
        for &v in hazard.values() {
            assert!(v >= prev && v >= 0.0);
            prev = v;
        }

        // estimates depend on the record set, not the input order
        recs.shuffle(&mut rng);
        let shuffled = OrderedSample::new(recs).unwrap();
        assert_eq!(sample, shuffled);
        assert_eq!(survival_c(&sample, &w), survival_c(&shuffled, &w));
        assert_eq!(
            cumulative_hazard_c(&sample, &w),
            cumulative_hazard_c(&shuffled, &w)
        );
    }
    println!("criterion 4: curve invariants and permutation invariance hold");
}

#[test]
fn criterion_05_three_record_hand_oracle() {
    let recs = vec![
        SurvivalRecord::new(0.0, 1.0, Outcome::Event).unwrap(),
        SurvivalRecord::new(0.0, 2.0, Outcome::CensoredCured).unwrap(),
        SurvivalRecord::new(0.0, 3.0, Outcome::Event).unwrap(),
    ];
    let sample = OrderedSample::new(recs).unwrap();
    let w = WeightVector::uniform(3, 0.0).unwrap();
    let informed = survival_c(&sample, &w);
    let beran = survival_beran(&sample, &w);

    for (t, expect) in [
        (0.5, 1.0),
        (1.0, 2.0 / 3.0),
        (2.9, 2.0 / 3.0),
        (3.0, 1.0 / 3.0),
    ] {
        assert!(
            (informed.eval(t) - expect).abs() <= EXACT,
            "cure-informed at {t}"
        );
    }
    for (t, expect) in [(0.5, 1.0), (1.0, 2.0 / 3.0), (3.0, 0.0), (9.0, 0.0)] {
        assert!((beran.eval(t) - expect).abs() <= EXACT, "beran at {t}");
    }
    println!("criterion 5: hand-worked plateaus (1, 2/3, 1/3) and (1, 2/3, 0) reproduced");
}

#[test]
fn criterion_06_truth_oracle_and_decomposition_identities() {
    // mixture identity at 1e-14 on a (t, x) grid
    for scenario in [Scenario::One, Scenario::Two] {
        let oracle = TruthOracle::new(scenario);
        for i in 0..=40 {
            let x = -20.0 + i as f64;
            let p_cured = oracle.cure_rate(x).unwrap();
            for j in 0..=50 {
                let t = 0.1 * j as f64;
                let expect = p_cured + (1.0 - p_cured) * latency_s0(t, x);
                assert!((oracle.survival(t, x).unwrap() - expect).abs() <= 1e-14);
            }
        }
    }

    // quantile inversion round trip at 1e-12
    for i in 0..=80 {
        let x = -20.0 + 0.5 * i as f64;
        assert!((latency_s0(tau_x(x), x) - 0.1).abs() <= EXACT);
    }

    // mise = ibias2 + ivar at 1e-10 on real Monte Carlo cells
    let spec = ScenarioSpec::new(Scenario::One, 0.8, 100).unwrap();
    for kind in [
        EstimatorKind::Proposed,
        EstimatorKind::Beran,
        EstimatorKind::KaplanMeier,
    ] {
        let r = mise_decompose(&spec, -10.0, 6.582, Kernel::Epanechnikov, kind, 200, 606).unwrap();
        let gap = (r.mise - (r.ibias2 + r.ivar)).abs();
        assert!(gap <= 1e-10, "{kind:?} decomposition gap {gap}");
    }
    println!("criterion 6: oracle identities and MISE decomposition hold");
}

#[test]
fn criterion_07_bootstrap_determinism_across_thread_counts() {
    let spec = ScenarioSpec::new(Scenario::One, 0.8, 80).unwrap();
    let data = draw_dataset(&spec, &mut substream(707, 0));
    let sample = OrderedSample::new(data).unwrap();
    let x = -10.0;
    let xs = sample.covariates();
    let pilot = pilot_bandwidth(&xs, x, default_pilot_k(sample.len())).unwrap();
    let search = BandwidthSearch::new(
        default_grid(3.0, 20.0, 12).unwrap(),
        64,
        pilot,
        (0.0, tau_x(x)),
        100,
    )
    .unwrap();

    let run = || select_bandwidth(&sample, x, &search, Kernel::Epanechnikov, 99).unwrap();
    let (h_base, profile_base) = run();
    for threads in [1usize, 2, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let (h, profile) = pool.install(run);
        assert_eq!(h.to_bits(), h_base.to_bits(), "{threads} threads");
        for (a, b) in profile.mise_star().iter().zip(profile_base.mise_star()) {
            assert_eq!(a.to_bits(), b.to_bits(), "{threads} threads");
        }
    }
    println!("criterion 7: selected h = {h_base} bit-identical on 1, 2, 4 and 8 threads");
}

// ---------------------------------------------------------------------------
// statistical criteria (desk scale)
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_generator_calibration() {
    let mut failures = Vec::new();
    for (scenario, seed, cens_range, cure_range) in [
        (Scenario::One, 808u64, (0.53, 0.55), (0.457, 0.477)),
        (Scenario::Two, 809u64, (0.60, 0.62), (0.49, 0.51)),
    ] {
        // pi = 1 makes every cured subject observable
        let spec = ScenarioSpec::new(scenario, 1.0, 100_000).unwrap();
        let data = draw_dataset(&spec, &mut substream(seed, 0));
        let n = data.len() as f64;
        let censored = data.iter().filter(|r| !r.outcome.is_event()).count() as f64 / n;
        let cured = data.iter().filter(|r| r.outcome.is_cured()).count() as f64 / n;
        println!(
            "criterion 8: scenario {} censored = {censored:.4} (target {:?}), cured = {cured:.4} (target {:?})",
            scenario.id(),
            cens_range,
            cure_range
        );
        if !(cens_range.0..=cens_range.1).contains(&censored) {
            failures.push(format!(
                "scenario {} censoring {censored:.4} outside {cens_range:?}",
                scenario.id()
            ));
        }
        if !(cure_range.0..=cure_range.1).contains(&cured) {
            failures.push(format!(
                "scenario {} cure fraction {cured:.4} outside {cure_range:?}",
                scenario.id()
            ));
        }
    }
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_09_benchmark_mise_cells() {
    struct Cell {
        scenario: Scenario,
        x: f64,
        h: f64,
        kind: EstimatorKind,
        target: f64,
        seed: u64,
    }
    let cells = [
        Cell {
            scenario: Scenario::One,
            x: -10.0,
            h: 6.582,
            kind: EstimatorKind::Proposed,
            target: 1.141e-3,
            seed: 901,
        },
        Cell {
            scenario: Scenario::One,
            x: -10.0,
            h: 6.334,
            kind: EstimatorKind::Beran,
            target: 1.340e-3,
            seed: 902,
        },
        Cell {
            scenario: Scenario::One,
            x: 0.0,
            h: 20.0,
            kind: EstimatorKind::Proposed,
            target: 2.205e-3,
            seed: 903,
        },
        Cell {
            scenario: Scenario::Two,
            x: -10.0,
            h: 25.874,
            kind: EstimatorKind::Proposed,
            target: 2.282e-3,
            seed: 904,
        },
    ];
    let mut failures = Vec::new();
    for cell in &cells {
        let spec = ScenarioSpec::new(cell.scenario, 0.8, 100).unwrap();
        let report = mise_decompose(
            &spec,
            cell.x,
            cell.h,
            Kernel::Epanechnikov,
            cell.kind,
            1000,
            cell.seed,
        )
        .unwrap();
        let rel = (report.mise - cell.target) / cell.target;
        println!(
            "criterion 9: scenario {} {:?} (x = {}, h = {}): mise = {:.4e}, target {:.3e}, rel. dev. {:+.1}% (limit 15%)",
            cell.scenario.id(),
            cell.kind,
            cell.x,
            cell.h,
            report.mise,
            cell.target,
            100.0 * rel
        );
        if rel.abs() > 0.15 {
            failures.push(format!(
                "scenario {} {:?} (x = {}, h = {}): mise {:.4e} deviates {:+.1}% from {:.3e}",
                cell.scenario.id(),
                cell.kind,
                cell.x,
                cell.h,
                report.mise,
                100.0 * rel,
                cell.target
            ));
        }
    }
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_10_variance_reduction_at_minus_ten() {
    for (scenario, h, seed) in [
        (Scenario::One, 6.582, 1001u64),
        (Scenario::Two, 25.874, 1002u64),
    ] {
        let spec = ScenarioSpec::new(scenario, 0.8, 100).unwrap();
        let informed = mise_decompose(
            &spec,
            -10.0,
            h,
            Kernel::Epanechnikov,
            EstimatorKind::Proposed,
            1000,
            seed,
        )
        .unwrap();
        let beran = mise_decompose(
            &spec,
            -10.0,
            h,
            Kernel::Epanechnikov,
            EstimatorKind::Beran,
            1000,
            seed,
        )
        .unwrap();
        println!(
            "criterion 10: scenario {} ivar informed = {:.4e}, beran = {:.4e} (one-sided limit 1.10x)",
            scenario.id(),
            informed.ivar,
            beran.ivar
        );
        assert!(
            informed.ivar <= 1.10 * beran.ivar,
            "scenario {}: {} > 1.10 * {}",
            scenario.id(),
            informed.ivar,
            beran.ivar
        );
    }
}

#[test]
fn criterion_11_bootstrap_bandwidth_tracks_the_optimum() {
    let spec = ScenarioSpec::new(Scenario::One, 0.8, 100).unwrap();
    let x = -10.0;
    let grid = default_grid(3.0, 20.0, 100).unwrap();
    let tau = tau_x(x);
    let tgrid = uniform_grid(0.0, tau, 100);
    let step = tgrid[1] - tgrid[0];
    let oracle = TruthOracle::new(Scenario::One);
    let truth: Vec<f64> = tgrid
        .iter()
        .map(|&t| oracle.survival(t, x).unwrap())
        .collect();

    let ise = |sample: &OrderedSample, h: f64| -> Option<f64> {
        let spec_h = KernelSpec::new(Kernel::Epanechnikov, h).unwrap();
        let w = nw_weights(&spec_h, &sample.covariates(), x).ok()?;
        let curve = survival_c(sample, &w);
        let sq: Vec<f64> = tgrid
            .iter()
            .zip(&truth)
            .map(|(&t, &s)| {
                let d = curve.eval(t) - s;
                d * d
            })
            .collect();
        Some(trapezoid_uniform(&sq, step))
    };

    let repetitions = 100;
    let mut grid_sum = vec![0.0; grid.len()];
    let mut grid_count = vec![0usize; grid.len()];
    let mut at_selected = Vec::with_capacity(repetitions);
    let mut selected = Vec::with_capacity(repetitions);
    for r in 0..repetitions {
        let data = draw_dataset(&spec, &mut substream(1100, r as u64));
        let sample = OrderedSample::new(data).unwrap();
        for (l, &h) in grid.iter().enumerate() {
            if let Some(v) = ise(&sample, h) {
                grid_sum[l] += v;
                grid_count[l] += 1;
            }
        }
        let pilot =
            pilot_bandwidth(&sample.covariates(), x, default_pilot_k(sample.len())).unwrap();
        let search = BandwidthSearch::new(grid.clone(), 200, pilot, (0.0, tau), 100).unwrap();
        let (h_star, _) =
            select_bandwidth(&sample, x, &search, Kernel::Epanechnikov, 1200 + r as u64).unwrap();
        selected.push(h_star);
        if let Some(v) = ise(&sample, h_star) {
            at_selected.push(v);
        }
    }

    let mise_at_selected = at_selected.iter().sum::<f64>() / at_selected.len() as f64;
    let mise_grid_min = grid_sum
        .iter()
        .zip(&grid_count)
        .filter(|(_, &c)| c > 0)
        .map(|(&s, &c)| s / c as f64)
        .fold(f64::INFINITY, f64::min);
    selected.sort_unstable_by(f64::total_cmp);
    let (q1, q3) = (selected[repetitions / 4], selected[3 * repetitions / 4]);
    let ratio = mise_at_selected / mise_grid_min;
    println!(
        "criterion 11: mise at selected h = {mise_at_selected:.4e}, grid minimum = {mise_grid_min:.4e}, ratio = {ratio:.3} (limit 1.5); selected h quartiles = ({q1:.3}, {:.3}, {q3:.3})",
        selected[repetitions / 2],
    );
    assert!(ratio <= 1.5, "ratio {ratio} exceeds 1.5");
    // the selected bandwidths also bracket the benchmark optimum 6.582
    assert!(
        q1 <= 6.582 && 6.582 <= q3,
        "quartiles ({q1}, {q3}) do not bracket 6.582"
    );
}
