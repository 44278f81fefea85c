//! Angular probability mass function of the arrival angle and the bearing
//! error statistics computed from it.
//!
//! Bins are centred on integer multiples of the bin width `w`, so the true
//! Tx→Rx direction (0°) is always a bin centre. Bin `c` collects arrival
//! angles in `(c − w/2, c + w/2]`; the grid wraps at ±180°.
//!
//! Moments are taken over signed angles in `(-180°, 180°]`, not as circular
//! moments. When 180° is a bin centre, that bin straddles the seam and its
//! mass is counted half at +180° and half at −180°.

use alloc::vec;
use alloc::vec::Vec;

use crate::angle::{rad_to_deg, wrap_deg};
use crate::montecarlo::PathSet;
use crate::{Error, Result};

/// Default correction gradient.
pub const DEFAULT_GRADIENT: f64 = 0.21;
/// Default half-width of the mean-offset range where a correction applies, degrees.
pub const DEFAULT_CORRECTION_LIMIT_DEG: f64 = 15.0;

/// Regular azimuth grid covering `(-180°, 180°]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularGrid {
    bin_width_deg: f64,
    bins: usize,
    /// Multiple of the bin width of the first (lowest) centre.
    first: i64,
}

impl AngularGrid {
    pub fn new(bin_width_deg: f64) -> Result<Self> {
        if !(bin_width_deg > 0.0) || !bin_width_deg.is_finite() {
            return Err(Error::BinWidth(bin_width_deg));
        }
        let k = libm::round(360.0 / bin_width_deg);
        if k < 1.0 || libm::fabs(k * bin_width_deg - 360.0) > 1e-9 {
            return Err(Error::BinWidth(bin_width_deg));
        }
        let bins = k as usize;
        // Lowest integer multiple strictly above -180°.
        let first = -((bins as i64 - 1) / 2);
        Ok(AngularGrid { bin_width_deg, bins, first })
    }

    pub fn bin_width_deg(&self) -> f64 {
        self.bin_width_deg
    }

    pub fn len(&self) -> usize {
        self.bins
    }

    pub fn is_empty(&self) -> bool {
        self.bins == 0
    }

    pub fn center(&self, index: usize) -> f64 {
        (self.first + index as i64) as f64 * self.bin_width_deg
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.bins).map(|k| self.center(k))
    }

    /// Index of the bin centred on 180°, which straddles the ±180° seam. Only
    /// grids with an even number of bins have one.
    pub fn seam_index(&self) -> Option<usize> {
        self.bins.is_multiple_of(2).then(|| self.bins - 1)
    }

    /// Index of the bin holding `angle_deg` (any real angle; wrapped first).
    pub fn index_of(&self, angle_deg: f64) -> usize {
        let x = wrap_deg(angle_deg);
        let n = self.bins as i64;
        let mut k = libm::ceil(x / self.bin_width_deg - 0.5) as i64;
        if k >= self.first + n {
            k -= n;
        }
        if k < self.first {
            k += n;
        }
        (k - self.first) as usize
    }
}

/// Power-normalised probability masses over an [`AngularGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct AngularPmf {
    grid: AngularGrid,
    masses: Vec<f64>,
}

impl AngularPmf {
    /// Builds a pmf from raw non-negative weights, normalising them.
    pub fn from_weights(grid: AngularGrid, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::Degenerate("weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::ZeroPower);
        }
        let masses = weights.into_iter().map(|w| w / total).collect();
        Ok(AngularPmf { grid, masses })
    }

    /// Wraps masses that already sum to one (within 1e-9) without
    /// renormalising them.
    pub fn from_masses(grid: AngularGrid, masses: Vec<f64>) -> Result<Self> {
        if masses.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if masses.iter().any(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(Error::Degenerate("masses must be finite and non-negative"));
        }
        if libm::fabs(masses.iter().sum::<f64>() - 1.0) > 1e-9 {
            return Err(Error::Degenerate("masses do not sum to one"));
        }
        Ok(AngularPmf { grid, masses })
    }

    /// Builds a pmf from `(angle_deg, weight)` pairs binned on a grid of
    /// width `bin_width_deg`.
    pub fn from_points(bin_width_deg: f64, points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let grid = AngularGrid::new(bin_width_deg)?;
        let mut weights = vec![0.0; grid.len()];
        for (angle, w) in points {
            weights[grid.index_of(angle)] += w;
        }
        Self::from_weights(grid, weights)
    }

    pub fn grid(&self) -> &AngularGrid {
        &self.grid
    }

    pub fn bin_width_deg(&self) -> f64 {
        self.grid.bin_width_deg
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// `(center_deg, mass)` for every bin.
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.centers().zip(self.masses.iter().copied())
    }

    /// Mass of the bin holding `angle_deg`.
    pub fn mass_at(&self, angle_deg: f64) -> f64 {
        self.masses[self.grid.index_of(angle_deg)]
    }

    /// Equal-weight bin-wise average of several pmfs on the same grid.
    ///
    /// Summation runs in slice order, so the result only depends on the
    /// order of `pmfs`, never on how they were produced.
    pub fn average(pmfs: &[AngularPmf]) -> Result<Self> {
        let first = pmfs.first().ok_or(Error::Degenerate("no pmfs to average"))?;
        let mut acc = vec![0.0; first.grid.len()];
        for pmf in pmfs {
            if pmf.grid != first.grid {
                return Err(Error::GridMismatch);
            }
            for (a, m) in acc.iter_mut().zip(&pmf.masses) {
                *a += m;
            }
        }
        Self::from_weights(first.grid, acc)
    }
}

/// Power-weighted histogram of one path set's arrival angles.
pub fn path_set_pmf(paths: &PathSet, grid: AngularGrid) -> Result<AngularPmf> {
    let mut weights = vec![0.0; grid.len()];
    for p in &paths.paths {
        weights[grid.index_of(rad_to_deg(p.aoa))] += p.power;
    }
    AngularPmf::from_weights(grid, weights)
}

/// Estimates the arrival-angle pmf from one or more path sets (trials).
/// Each trial is normalised by its own total power and trials are averaged
/// with equal weight.
pub fn estimate_pmf(path_sets: &[PathSet], bin_width_deg: f64) -> Result<AngularPmf> {
    let grid = AngularGrid::new(bin_width_deg)?;
    let per_trial = path_sets
        .iter()
        .map(|set| path_set_pmf(set, grid))
        .collect::<Result<Vec<_>>>()?;
    AngularPmf::average(&per_trial)
}

/// `(first-moment position, centre, mass)` of every bin. The seam bin is
/// split evenly between ±180° and so has no first moment.
fn moment_terms(pmf: &AngularPmf) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
    let seam = pmf.grid().seam_index();
    pmf.bins()
        .enumerate()
        .map(move |(k, (phi, f))| (if Some(k) == seam { 0.0 } else { phi }, phi, f))
}

/// RMS angle spread `σ_e`, degrees.
pub fn angle_spread(pmf: &AngularPmf) -> f64 {
    let (mut m1, mut m2) = (0.0, 0.0);
    for (signed, phi, f) in moment_terms(pmf) {
        m1 += signed * f;
        m2 += phi * phi * f;
    }
    libm::sqrt((m2 - m1 * m1).max(0.0))
}

/// Mean offset `φ̄_e` of the arrival angle, degrees.
pub fn mean_offset(pmf: &AngularPmf) -> f64 {
    moment_terms(pmf).map(|(signed, _, f)| signed * f).sum()
}

/// Bearing-line error `Δφ`: centre of the most probable bin, degrees.
/// Ties go to the smallest `|φ|`, then to the positive side.
pub fn peak_direction(pmf: &AngularPmf) -> f64 {
    let mut best: Option<(f64, f64)> = None;
    for (phi, f) in pmf.bins() {
        best = match best {
            None => Some((phi, f)),
            Some((bp, bf)) => {
                let better = f > bf
                    || (f == bf && (phi.abs() < bp.abs() || (phi.abs() == bp.abs() && phi > bp)));
                Some(if better { (phi, f) } else { (bp, bf) })
            }
        };
    }
    best.map_or(0.0, |(phi, _)| phi)
}

/// Resulting bearing error `σ̃ = σ_0 + |φ̄_e| + σ_e`, degrees.
pub fn resulting_error(sigma0_deg: f64, mean_offset_deg: f64, spread_deg: f64) -> f64 {
    sigma0_deg + mean_offset_deg.abs() + spread_deg
}

/// Share of the resulting error caused by the environment, percent.
pub fn environment_share(sigma0_deg: f64, mean_offset_deg: f64, spread_deg: f64) -> Result<f64> {
    let total = resulting_error(sigma0_deg, mean_offset_deg, spread_deg);
    if !(total > 0.0) {
        return Err(Error::Degenerate("resulting error is zero"));
    }
    Ok((mean_offset_deg.abs() + spread_deg) / total * 100.0)
}

/// Mean squared difference of two pmfs on the same grid.
pub fn lse(a: &AngularPmf, b: &AngularPmf) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let k = a.masses.len() as f64;
    Ok(a.masses.iter().zip(&b.masses).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / k)
}

/// Correlation coefficient about the origin, `Σxy / sqrt(Σx²·Σy²)`.
pub fn uncentered_correlation(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Degenerate("sequences differ in length"));
    }
    if xs.len() < 2 {
        return Err(Error::Degenerate("need at least two values"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    let denom = libm::sqrt(sxx * syy);
    if !(denom > 0.0) {
        return Err(Error::Degenerate("zero denominator"));
    }
    Ok((sxy / denom).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionResult {
    pub gradient: f64,
    pub rho: f64,
    pub pairs: usize,
}

/// Least-squares line through the origin of `Δφ` against `φ̄_e`, from
/// `(mean_offset, bearing_line_error)` pairs.
pub fn fit_gradient(pairs: &[(f64, f64)]) -> Result<RegressionResult> {
    if pairs.len() < 2 {
        return Err(Error::Degenerate("need at least two pairs"));
    }
    let sxx: f64 = pairs.iter().map(|(x, _)| x * x).sum();
    if !(sxx > 0.0) {
        return Err(Error::Degenerate("all mean offsets are zero"));
    }
    let sxy: f64 = pairs.iter().map(|(x, y)| x * y).sum();
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
    Ok(RegressionResult {
        gradient: sxy / sxx,
        rho: uncentered_correlation(&xs, &ys)?,
        pairs: pairs.len(),
    })
}

/// Selects the pairs of one α-sweep that lie between the extremes of the
/// mean offset: for α ≥ 0 up to the α of the largest `φ̄_e`, for α ≤ 0 down
/// to the α of the smallest. Returns one flag per input.
///
/// `alphas_deg` and `mean_offsets` describe one antenna beamwidth.
pub fn pre_extremum_mask(alphas_deg: &[f64], mean_offsets: &[f64]) -> Vec<bool> {
    let extreme = |positive: bool| {
        alphas_deg
            .iter()
            .zip(mean_offsets)
            .filter(|(a, _)| if positive { **a >= 0.0 } else { **a <= 0.0 })
            .fold(None, |best: Option<(f64, f64)>, (&a, &m)| {
                let m = if positive { m } else { -m };
                match best {
                    Some((_, bm)) if bm >= m => best,
                    _ => Some((a, m)),
                }
            })
            .map(|(a, _)| a)
    };
    let upper = extreme(true);
    let lower = extreme(false);
    alphas_deg
        .iter()
        .map(|&a| {
            if a >= 0.0 {
                upper.is_some_and(|u| a <= u)
            } else {
                lower.is_some_and(|l| a >= l)
            }
        })
        .collect()
}

/// Outcome of the bearing correction rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Correction {
    /// Angle to add to the bearing line, degrees.
    Applied(f64),
    /// Mean offset outside the range where the rule is defined.
    OutOfRange,
}

impl Correction {
    pub fn angle(&self) -> Option<f64> {
        match self {
            Correction::Applied(x) => Some(*x),
            Correction::OutOfRange => None,
        }
    }
}

/// `ϑ = −g·φ̄_e` for `|φ̄_e| < limit`.
pub fn correction(mean_offset_deg: f64, gradient: f64, limit_deg: f64) -> Correction {
    if mean_offset_deg.abs() < limit_deg {
        Correction::Applied(-gradient * mean_offset_deg)
    } else {
        Correction::OutOfRange
    }
}

/// Bearing-error summary of one simulated scenario, degrees unless noted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionReport {
    pub sigma_e_deg: f64,
    pub phi_bar_deg: f64,
    pub delta_phi_deg: f64,
    pub sigma_total_deg: f64,
    /// `None` when the resulting error is zero.
    pub delta_percent: Option<f64>,
}

impl DispersionReport {
    pub fn from_pmf(pmf: &AngularPmf, sigma0_deg: f64) -> Self {
        let sigma_e_deg = angle_spread(pmf);
        let phi_bar_deg = mean_offset(pmf);
        DispersionReport {
            sigma_e_deg,
            phi_bar_deg,
            delta_phi_deg: peak_direction(pmf),
            sigma_total_deg: resulting_error(sigma0_deg, phi_bar_deg, sigma_e_deg),
            delta_percent: environment_share(sigma0_deg, phi_bar_deg, sigma_e_deg).ok(),
        }
    }
}
