//! The five commands: analyze, simulate, sweep, correct, compare.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use bearing_core::estimation::{self, pre_extremum_mask, Correction};
use bearing_core::geometry::ellipse_from_delay;
use bearing_core::profile::{self, DEFAULT_NOISE_FLOOR_DB};
use bearing_core::{
    AngularPmf, AntennaConfig, ClusterOptions, ClusterSet, DelayProfile, DispersionReport, GeometryConfig,
    PathCounts, PathSet, Scenario, ScatteringConfig,
};
use serde::Serialize;

use crate::formats::{
    format_matrix, format_pairs, format_path_set, format_pmf, to_json, write_file, ClusterReport, DispersionDoc,
    EllipseDoc, PairRecord, RegressionDoc,
};
use crate::runner::{cell_id, run_cell};
use crate::{Error, Result};

/// How the profile is turned into an environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvOptions {
    pub distance_m: f64,
    pub prominence_db: f64,
    pub min_separation_ns: Option<f64>,
    pub noise_floor_db: f64,
}

impl Default for EnvOptions {
    fn default() -> Self {
        EnvOptions {
            distance_m: 300.0,
            prominence_db: 1.0,
            min_separation_ns: None,
            noise_floor_db: DEFAULT_NOISE_FLOOR_DB,
        }
    }
}

impl EnvOptions {
    pub fn clusters(&self, profile: &DelayProfile) -> Result<ClusterSet> {
        let trend = profile::fit_trend(profile, self.noise_floor_db)?;
        let options = ClusterOptions { prominence_db: self.prominence_db, min_separation_ns: self.min_separation_ns };
        Ok(profile::extract_clusters(profile, &trend, &options)?)
    }

    pub fn geometry(&self) -> Result<GeometryConfig> {
        Ok(GeometryConfig::new(self.distance_m)?)
    }
}

/// Transmit antenna beam: a Gaussian lobe of given HPBW, or omnidirectional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beam {
    Hpbw(f64),
    Omni,
}

impl Beam {
    pub fn antenna(&self, alpha_deg: f64) -> Result<AntennaConfig> {
        match *self {
            Beam::Hpbw(h) => Ok(AntennaConfig::gaussian(h, alpha_deg)?),
            Beam::Omni => Ok(AntennaConfig::omni()),
        }
    }

    pub fn hpbw_deg(&self) -> Option<f64> {
        match *self {
            Beam::Hpbw(h) => Some(h),
            Beam::Omni => None,
        }
    }
}

impl fmt::Display for Beam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beam::Hpbw(h) => write!(f, "{h}"),
            Beam::Omni => f.write_str("omni"),
        }
    }
}

impl FromStr for Beam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("omni") {
            return Ok(Beam::Omni);
        }
        s.parse::<f64>().map(Beam::Hpbw).map_err(|_| format!("`{s}` is neither a beamwidth nor `omni`"))
    }
}

/// Everything a single simulation needs besides the profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub env: EnvOptions,
    pub beam: Beam,
    pub alpha_deg: f64,
    pub mu: f64,
    pub kappa: f64,
    pub paths_per_cluster: usize,
    pub trials: u64,
    pub seed: u64,
    pub bin_deg: f64,
    pub sigma0_deg: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            env: EnvOptions::default(),
            beam: Beam::Hpbw(30.0),
            alpha_deg: 0.0,
            mu: 60.0,
            kappa: 0.0,
            paths_per_cluster: 60,
            trials: 500,
            seed: 0,
            bin_deg: 1.0,
            sigma0_deg: 0.2,
        }
    }
}

impl SimOptions {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(self.sigma0_deg >= 0.0) {
            return Err(Error::Config(format!("sigma0 must be non-negative, got {}", self.sigma0_deg)));
        }
        Ok(())
    }

    pub fn scattering(&self) -> Result<ScatteringConfig> {
        Ok(ScatteringConfig::new(self.mu, self.kappa, PathCounts::Uniform(self.paths_per_cluster))?)
    }

    pub fn scenario(&self, clusters: &ClusterSet) -> Result<Scenario> {
        Ok(Scenario::new(
            clusters,
            &self.env.geometry()?,
            self.beam.antenna(self.alpha_deg)?,
            &self.scattering()?,
            self.bin_deg,
        )?)
    }
}

pub fn analyze(profile: &DelayProfile, env: &EnvOptions) -> Result<ClusterReport> {
    let clusters = env.clusters(profile)?;
    let geometry = env.geometry()?;
    let ellipses = clusters
        .clusters
        .iter()
        .map(|c| ellipse_from_delay(&geometry, c.delay_ns, c.index).map(|e| EllipseDoc::from(&e)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = ClusterReport::from(&clusters);
    report.rms_delay_spread_ns = Some(profile::rms_delay_spread(profile)?);
    report.distance_m = Some(env.distance_m);
    report.ellipses = ellipses;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub pmf: AngularPmf,
    pub report: DispersionReport,
    /// Path set of trial 0, for diagnostics.
    pub first_trial: PathSet,
}

impl SimulateOutput {
    /// Writes `pmf.txt` and `report.json` (and `paths.jsonl` when asked).
    pub fn write(&self, out_dir: &Path, with_paths: bool) -> Result<()> {
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        write_file(&out_dir.join("pmf.txt"), &format_pmf(&self.pmf))?;
        write_file(&out_dir.join("report.json"), &to_json(&DispersionDoc::from(&self.report)))?;
        if with_paths {
            write_file(&out_dir.join("paths.jsonl"), &format_path_set(&self.first_trial))?;
        }
        Ok(())
    }
}

pub fn simulate(profile: &DelayProfile, options: &SimOptions) -> Result<SimulateOutput> {
    options.validate()?;
    let clusters = options.env.clusters(profile)?;
    let scenario = options.scenario(&clusters)?;
    let cell = cell_id(0, 0);
    let pmf = run_cell(&scenario, options.seed, cell, options.trials)?;
    Ok(SimulateOutput {
        report: DispersionReport::from_pmf(&pmf, options.sigma0_deg),
        first_trial: scenario.trial_paths(options.seed, cell, 0),
        pmf,
    })
}

/// Statistics of every (beam, α) cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub beams: Vec<Beam>,
    pub alphas_deg: Vec<f64>,
    /// `reports[row][column]`.
    pub reports: Vec<Vec<DispersionReport>>,
    pub pairs: Vec<PairRecord>,
}

impl SweepOutput {
    fn matrix(&self, stat: impl Fn(&DispersionReport) -> f64) -> Vec<Vec<f64>> {
        self.reports.iter().map(|row| row.iter().map(&stat).collect()).collect()
    }

    pub fn sigma_e(&self) -> Vec<Vec<f64>> {
        self.matrix(|r| r.sigma_e_deg)
    }

    pub fn phi_bar(&self) -> Vec<Vec<f64>> {
        self.matrix(|r| r.phi_bar_deg)
    }

    pub fn delta_phi(&self) -> Vec<Vec<f64>> {
        self.matrix(|r| r.delta_phi_deg)
    }

    /// Text of every output file, as `(file name, contents)`.
    pub fn files(&self) -> Vec<(&'static str, String)> {
        let labels: Vec<String> = self.beams.iter().map(Beam::to_string).collect();
        let m = |values: Vec<Vec<f64>>| format_matrix(&labels, &self.alphas_deg, &values);
        vec![
            ("sigma_e_deg.csv", m(self.sigma_e())),
            ("phi_bar_deg.csv", m(self.phi_bar())),
            ("delta_phi_deg.csv", m(self.delta_phi())),
            ("sigma_total_deg.csv", m(self.matrix(|r| r.sigma_total_deg))),
            ("delta_percent.csv", m(self.matrix(|r| r.delta_percent.unwrap_or(f64::NAN)))),
            ("pairs.csv", format_pairs(&self.pairs)),
        ]
    }

    pub fn write(&self, out_dir: &Path) -> Result<()> {
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        for (name, text) in self.files() {
            write_file(&out_dir.join(name), &text)?;
        }
        Ok(())
    }
}

/// Simulates every (beam, α) combination. Cell `(row, column)` draws from its
/// own random streams, so adding rows or columns never changes other cells,
/// and a 1×1 sweep reproduces [`simulate`].
pub fn sweep(profile: &DelayProfile, base: &SimOptions, beams: &[Beam], alphas_deg: &[f64]) -> Result<SweepOutput> {
    base.validate()?;
    if beams.is_empty() || alphas_deg.is_empty() {
        return Err(Error::Config("sweep needs at least one beamwidth and one alpha".into()));
    }
    let clusters = base.env.clusters(profile)?;
    let template = base.scenario(&clusters)?;
    let mut reports = Vec::with_capacity(beams.len());
    for (row, beam) in beams.iter().enumerate() {
        let mut row_reports = Vec::with_capacity(alphas_deg.len());
        for (column, &alpha) in alphas_deg.iter().enumerate() {
            let scenario = template.with_antenna(beam.antenna(alpha)?);
            let pmf = run_cell(&scenario, base.seed, cell_id(row, column), base.trials)?;
            row_reports.push(DispersionReport::from_pmf(&pmf, base.sigma0_deg));
        }
        reports.push(row_reports);
    }

    let mut pairs = Vec::new();
    for (beam, row) in beams.iter().zip(&reports) {
        let offsets: Vec<f64> = row.iter().map(|r| r.phi_bar_deg).collect();
        let mask = match beam {
            Beam::Hpbw(_) => pre_extremum_mask(alphas_deg, &offsets),
            Beam::Omni => vec![false; alphas_deg.len()],
        };
        for ((r, &alpha), pre) in row.iter().zip(alphas_deg).zip(mask) {
            pairs.push(PairRecord {
                hpbw_deg: beam.hpbw_deg(),
                alpha_deg: Some(alpha),
                phi_bar_deg: r.phi_bar_deg,
                delta_phi_deg: r.delta_phi_deg,
                pre_extremum: pre,
            });
        }
    }
    Ok(SweepOutput { beams: beams.to_vec(), alphas_deg: alphas_deg.to_vec(), reports, pairs })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BeamRegression {
    pub hpbw_deg: Option<f64>,
    #[serde(flatten)]
    pub fit: RegressionDoc,
}

/// Regression of bearing-line error on mean offset, and the effect of the
/// correction rule on the pairs used.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PairsCorrection {
    #[serde(flatten)]
    pub pooled: RegressionDoc,
    /// Separate fits per beamwidth, when the pairs name their beamwidth.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_hpbw: Vec<BeamRegression>,
    /// Gradient used for the correction (given, or the pooled fit).
    pub applied_gradient: f64,
    pub limit_deg: f64,
    /// Mean |Δφ| over pairs inside the correction range.
    pub mean_abs_delta_phi_deg: f64,
    /// Mean |Δφ + ϑ| over the same pairs.
    pub mean_abs_corrected_deg: f64,
    pub corrected_pairs: usize,
}

/// Fits the through-origin line to the pre-extremum pairs and applies the
/// correction with `gradient` (or the fitted one when `None`).
pub fn correct_pairs(pairs: &[PairRecord], gradient: Option<f64>, limit_deg: f64) -> Result<PairsCorrection> {
    let used: Vec<&PairRecord> = pairs.iter().filter(|p| p.pre_extremum).collect();
    let xy: Vec<(f64, f64)> = used.iter().map(|p| (p.phi_bar_deg, p.delta_phi_deg)).collect();
    let pooled = estimation::fit_gradient(&xy)?;

    let mut beams: Vec<f64> = used.iter().filter_map(|p| p.hpbw_deg).collect();
    beams.sort_by(f64::total_cmp);
    beams.dedup();
    let per_hpbw = if beams.len() > 1 {
        beams
            .iter()
            .filter_map(|&h| {
                let xy: Vec<(f64, f64)> = used
                    .iter()
                    .filter(|p| p.hpbw_deg == Some(h))
                    .map(|p| (p.phi_bar_deg, p.delta_phi_deg))
                    .collect();
                estimation::fit_gradient(&xy)
                    .ok()
                    .map(|r| BeamRegression { hpbw_deg: Some(h), fit: RegressionDoc::from(&r) })
            })
            .collect()
    } else {
        Vec::new()
    };

    let g = gradient.unwrap_or(pooled.gradient);
    let (mut before, mut after, mut n) = (0.0, 0.0, 0usize);
    for p in &used {
        if let Correction::Applied(theta) = estimation::correction(p.phi_bar_deg, g, limit_deg) {
            before += p.delta_phi_deg.abs();
            after += (p.delta_phi_deg + theta).abs();
            n += 1;
        }
    }
    let mean = |s: f64| if n > 0 { s / n as f64 } else { 0.0 };
    Ok(PairsCorrection {
        pooled: RegressionDoc::from(&pooled),
        per_hpbw,
        applied_gradient: g,
        limit_deg,
        mean_abs_delta_phi_deg: mean(before),
        mean_abs_corrected_deg: mean(after),
        corrected_pairs: n,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ValueCorrection {
    pub phi_bar_deg: f64,
    pub gradient: f64,
    pub limit_deg: f64,
    pub in_range: bool,
    /// `null` when the mean offset is outside the correction range.
    pub correction_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_phi_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected_delta_phi_deg: Option<f64>,
}

pub fn correct_value(phi_bar_deg: f64, gradient: f64, limit_deg: f64, delta_phi_deg: Option<f64>) -> ValueCorrection {
    let c = estimation::correction(phi_bar_deg, gradient, limit_deg).angle();
    ValueCorrection {
        phi_bar_deg,
        gradient,
        limit_deg,
        in_range: c.is_some(),
        correction_deg: c,
        delta_phi_deg,
        corrected_delta_phi_deg: delta_phi_deg.zip(c).map(|(d, t)| d + t),
    }
}

pub fn compare(a: &AngularPmf, b: &AngularPmf) -> Result<f64> {
    Ok(estimation::lse(a, b)?)
}
