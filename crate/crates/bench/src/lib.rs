//! Shared fixtures for the benchmark suite.

use cureplim::rng::substream;
use cureplim::{draw_dataset, OrderedSample, Scenario, ScenarioSpec};

/// A reproducible scenario-1 sample of size `n`.
pub fn scenario_sample(n: usize, seed: u64) -> OrderedSample {
    let spec = ScenarioSpec::new(Scenario::One, 0.8, n).unwrap();
    OrderedSample::new(draw_dataset(&spec, &mut substream(seed, 0))).unwrap()
}
