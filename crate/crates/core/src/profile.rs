//! Power delay profiles and time-cluster extraction.
//!
//! A profile is compared against an affine trend in the dB domain. Local
//! maxima of the residual that stand out by at least a prominence threshold
//! are time-clusters; each cluster owns the profile power between the residual
//! minima on either side of it. Everything before the first cluster boundary
//! is local scattering power `P_0`.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Residual assigned to zero-power samples, relative to the lowest finite one.
const ZERO_POWER_RESIDUAL_DB: f64 = -300.0;

/// Sampled power-vs-delay characteristic.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayProfile {
    delays_ns: Vec<f64>,
    powers: Vec<f64>,
    resolution_ns: f64,
}

impl DelayProfile {
    /// Builds a profile from `(delay_ns, linear power)` samples.
    ///
    /// Delays must start at 0 and strictly increase; powers must be
    /// non-negative with at least one positive value. The resolution is the
    /// smallest delay step.
    pub fn new(samples: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (delays_ns, powers): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        if delays_ns.is_empty() {
            return Err(Error::InvalidProfile("no samples"));
        }
        if delays_ns[0] != 0.0 {
            return Err(Error::InvalidProfile("first delay must be 0"));
        }
        if delays_ns.iter().any(|d| !d.is_finite()) || powers.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidProfile("non-finite value"));
        }
        if delays_ns.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile("delays not strictly increasing"));
        }
        if powers.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidProfile("negative power"));
        }
        if powers.iter().all(|&p| p == 0.0) {
            return Err(Error::InvalidProfile("all-zero profile"));
        }
        let resolution_ns = delays_ns
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let resolution_ns = if resolution_ns.is_finite() { resolution_ns } else { 0.0 };
        Ok(DelayProfile { delays_ns, powers, resolution_ns })
    }

    /// Builds a profile from powers given in dB.
    pub fn from_db(samples: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::new(samples.into_iter().map(|(d, db)| (d, db_to_linear(db))))
    }

    pub fn len(&self) -> usize {
        self.delays_ns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delays_ns.is_empty()
    }

    pub fn delays_ns(&self) -> &[f64] {
        &self.delays_ns
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn resolution_ns(&self) -> f64 {
        self.resolution_ns
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.delays_ns.iter().copied().zip(self.powers.iter().copied())
    }

    pub fn total_power(&self) -> f64 {
        self.powers.iter().sum()
    }

    pub fn max_power(&self) -> f64 {
        self.powers.iter().copied().fold(0.0, f64::max)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

pub fn linear_to_db(p: f64) -> f64 {
    10.0 * libm::log10(p)
}

/// Affine trend of the profile in dB: `power_db(τ) = intercept_db + slope_db_per_ns·τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trend {
    pub intercept_db: f64,
    pub slope_db_per_ns: f64,
}

impl Trend {
    pub fn at(&self, delay_ns: f64) -> f64 {
        self.intercept_db + self.slope_db_per_ns * delay_ns
    }
}

/// Default dynamic range of the trend fit below the profile maximum.
pub const DEFAULT_NOISE_FLOOR_DB: f64 = 40.0;

/// Least-squares affine fit of the dB profile, using samples no more than
/// `floor_db` below the maximum.
pub fn fit_trend(profile: &DelayProfile, floor_db: f64) -> Result<Trend> {
    let threshold = linear_to_db(profile.max_power()) - floor_db;
    let usable: Vec<(f64, f64)> = profile
        .samples()
        .filter(|&(_, p)| p > 0.0)
        .map(|(d, p)| (d, linear_to_db(p)))
        .filter(|&(_, db)| db >= threshold)
        .collect();
    if usable.len() < 2 {
        return Err(Error::TrendFit(usable.len()));
    }
    let n = usable.len() as f64;
    let mean_x = usable.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_y = usable.iter().map(|s| s.1).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in &usable {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    Ok(Trend { intercept_db: mean_y - slope * mean_x, slope_db_per_ns: slope })
}

/// Peak-picking options for [`extract_clusters`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterOptions {
    /// Minimum prominence of a residual maximum, dB.
    pub prominence_db: f64,
    /// Minimum delay separation between retained maxima, ns. `None` means one
    /// profile resolution step.
    pub min_separation_ns: Option<f64>,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        ClusterOptions { prominence_db: 1.0, min_separation_ns: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    /// 1-based cluster index; 0 is reserved for local scattering.
    pub index: usize,
    pub delay_ns: f64,
    pub power: f64,
}

/// Time-clusters of a profile plus the local-scattering power.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSet {
    pub clusters: Vec<Cluster>,
    pub local_power: f64,
    pub total_power: f64,
}

impl ClusterSet {
    /// Builds a cluster set directly from `(delay_ns, power)` pairs of the
    /// delayed clusters. The total is `local_power` plus the cluster powers.
    pub fn new(local_power: f64, delayed: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        if !(local_power > 0.0) || !local_power.is_finite() {
            return Err(Error::domain("local power", local_power));
        }
        let clusters: Vec<Cluster> = delayed
            .into_iter()
            .enumerate()
            .map(|(k, (delay_ns, power))| Cluster { index: k + 1, delay_ns, power })
            .collect();
        let mut prev = 0.0;
        for c in &clusters {
            if !(c.delay_ns > prev) {
                return Err(Error::domain("cluster delay", c.delay_ns));
            }
            if !(c.power >= 0.0) || !c.power.is_finite() {
                return Err(Error::domain("cluster power", c.power));
            }
            prev = c.delay_ns;
        }
        let total_power = local_power + clusters.iter().map(|c| c.power).sum::<f64>();
        Ok(ClusterSet { clusters, local_power, total_power })
    }

    /// Number of delayed clusters `N`.
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Extracts time-clusters from the residual `profile_dB − trend_dB`.
///
/// Maxima at `τ = 0` or at the last sample are never clusters. A profile with
/// no qualifying maxima yields `N = 0` with all power in `P_0`.
pub fn extract_clusters(
    profile: &DelayProfile,
    trend: &Trend,
    options: &ClusterOptions,
) -> Result<ClusterSet> {
    let delays = profile.delays_ns();
    let powers = profile.powers();
    let residual = residual_db(profile, trend);
    let min_sep = options.min_separation_ns.unwrap_or(profile.resolution_ns());

    let mut peaks: Vec<usize> = local_maxima(&residual)
        .into_iter()
        .filter(|&i| prominence(&residual, i) >= options.prominence_db)
        .collect();
    peaks = enforce_separation(&peaks, &residual, delays, min_sep);

    // Cluster boundaries: residual minimum between consecutive peaks, and
    // between τ = 0 and the first peak. Segments are half-open [b_k, b_{k+1}).
    let mut bounds = Vec::with_capacity(peaks.len() + 1);
    // Sample 0 always belongs to local scattering.
    let mut prev = 1;
    for &p in &peaks {
        bounds.push(argmin(&residual, prev, p));
        prev = p;
    }
    bounds.push(powers.len());

    let segment = |lo: usize, hi: usize| powers[lo..hi].iter().sum::<f64>();
    let local_power = match bounds.first() {
        Some(&b) if !peaks.is_empty() => segment(0, b),
        _ => profile.total_power(),
    };
    let clusters = peaks
        .iter()
        .enumerate()
        .map(|(k, &p)| Cluster {
            index: k + 1,
            delay_ns: delays[p],
            power: segment(bounds[k], bounds[k + 1]),
        })
        .collect::<Vec<_>>();

    if !(local_power > 0.0) {
        return Err(Error::InvalidProfile("no power before the first cluster"));
    }
    Ok(ClusterSet { clusters, local_power, total_power: profile.total_power() })
}

fn residual_db(profile: &DelayProfile, trend: &Trend) -> Vec<f64> {
    let raw: Vec<Option<f64>> = profile
        .samples()
        .map(|(d, p)| (p > 0.0).then(|| linear_to_db(p) - trend.at(d)))
        .collect();
    let lowest = raw.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    raw.into_iter()
        .map(|r| r.unwrap_or(lowest + ZERO_POWER_RESIDUAL_DB))
        .collect()
}

/// Interior local maxima. A flat-topped maximum reports its middle sample
/// (lower middle for even plateaus).
fn local_maxima(x: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    if x.len() < 3 {
        return out;
    }
    let mut i = 1;
    let last = x.len() - 1;
    while i < last {
        if x[i - 1] < x[i] {
            let mut ahead = i + 1;
            while ahead < last && x[ahead] == x[i] {
                ahead += 1;
            }
            if x[ahead] < x[i] {
                out.push((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        i += 1;
    }
    out
}

/// Height of a peak above the higher of the two lowest points reachable on
/// either side before climbing above the peak (topographic prominence).
fn prominence(x: &[f64], peak: usize) -> f64 {
    let h = x[peak];
    let mut left_min = h;
    for &v in x[..peak].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &x[peak + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// Keeps the highest peaks first, discarding any lower peak closer than
/// `min_sep` to one already kept.
fn enforce_separation(peaks: &[usize], residual: &[f64], delays: &[f64], min_sep: f64) -> Vec<usize> {
    let mut order: Vec<usize> = peaks.to_vec();
    order.sort_by(|&a, &b| residual[b].total_cmp(&residual[a]).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::with_capacity(peaks.len());
    for p in order {
        if kept.iter().all(|&k| libm::fabs(delays[k] - delays[p]) >= min_sep) {
            kept.push(p);
        }
    }
    kept.sort_unstable();
    kept
}

/// Index of the smallest value in `x[lo..=hi]`; the earliest on ties.
fn argmin(x: &[f64], lo: usize, hi: usize) -> usize {
    let mut best = lo;
    for i in lo..=hi {
        if x[i] < x[best] {
            best = i;
        }
    }
    best
}

/// Power-weighted RMS delay spread in ns.
pub fn rms_delay_spread(profile: &DelayProfile) -> Result<f64> {
    let total = profile.total_power();
    if !(total > 0.0) {
        return Err(Error::ZeroPower);
    }
    let (mut m1, mut m2) = (0.0, 0.0);
    for (d, p) in profile.samples() {
        let w = p / total;
        m1 += d * w;
        m2 += d * d * w;
    }
    Ok(libm::sqrt((m2 - m1 * m1).max(0.0)))
}
