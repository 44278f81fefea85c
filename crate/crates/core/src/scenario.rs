//! One simulation cell: a fixed environment and antenna, repeated over
//! independent trials whose pmfs are averaged.

use alloc::vec::Vec;

use crate::estimation::{path_set_pmf, AngularGrid};
use crate::montecarlo::{trial_rng, PathPlan};
use crate::{
    AngularPmf, AntennaConfig, ClusterSet, DispersionReport, GeometryConfig, PathSet, Result,
    ScatteringConfig,
};

#[derive(Debug, Clone)]
pub struct Scenario {
    plan: PathPlan,
    antenna: AntennaConfig,
    grid: AngularGrid,
}

impl Scenario {
    pub fn new(
        clusters: &ClusterSet,
        geometry: &GeometryConfig,
        antenna: AntennaConfig,
        scattering: &ScatteringConfig,
        bin_width_deg: f64,
    ) -> Result<Self> {
        Ok(Scenario {
            plan: PathPlan::new(clusters, geometry, scattering)?,
            antenna,
            grid: AngularGrid::new(bin_width_deg)?,
        })
    }

    /// Same environment, different antenna.
    pub fn with_antenna(&self, antenna: AntennaConfig) -> Self {
        Scenario { antenna, ..self.clone() }
    }

    pub fn antenna(&self) -> &AntennaConfig {
        &self.antenna
    }

    pub fn grid(&self) -> AngularGrid {
        self.grid
    }

    /// Path set of trial `trial` in cell `cell`.
    pub fn trial_paths(&self, seed: u64, cell: u64, trial: u64) -> PathSet {
        self.plan.generate(&self.antenna, &mut trial_rng(seed, cell, trial))
    }

    pub fn trial_pmf(&self, seed: u64, cell: u64, trial: u64) -> Result<AngularPmf> {
        path_set_pmf(&self.trial_paths(seed, cell, trial), self.grid)
    }

    /// Runs `trials` trials in order on the current thread and averages them.
    pub fn run(&self, seed: u64, cell: u64, trials: u64) -> Result<AngularPmf> {
        let pmfs = (0..trials)
            .map(|t| self.trial_pmf(seed, cell, t))
            .collect::<Result<Vec<_>>>()?;
        AngularPmf::average(&pmfs)
    }

    pub fn report(&self, seed: u64, cell: u64, trials: u64, sigma0_deg: f64) -> Result<DispersionReport> {
        Ok(DispersionReport::from_pmf(&self.run(seed, cell, trials)?, sigma0_deg))
    }
}
