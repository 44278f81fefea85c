//! Parallel execution of simulation trials.
//!
//! Trials run on the rayon pool, but per-trial pmfs are collected in trial
//! order and averaged sequentially, so results are bit-identical for any
//! number of worker threads.

use bearing_core::{AngularPmf, Scenario};
use rayon::prelude::*;

use crate::Result;

/// Averages `trials` trials of `scenario` in cell `cell`.
pub fn run_cell(scenario: &Scenario, seed: u64, cell: u64, trials: u64) -> Result<AngularPmf> {
    let pmfs = (0..trials)
        .into_par_iter()
        .map(|t| scenario.trial_pmf(seed, cell, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AngularPmf::average(&pmfs)?)
}

/// Cell identifier of grid position `(row, column)` in a sweep. A single
/// simulation is cell `(0, 0)`.
pub fn cell_id(row: usize, column: usize) -> u64 {
    ((row as u64) << 32) | column as u64
}

/// Runs `f` on a dedicated pool of `workers` threads (`None` or 0: rayon's
/// default).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers.filter(|&n| n > 0) {
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?.install(f))
}
