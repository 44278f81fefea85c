//! Generation of the propagation-path set: arrival angles and powers of the
//! delayed-scattering, local-scattering and direct components.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::antenna::{sample_aod, uniform_angle, AntennaConfig};
use crate::geometry::{aoa_from_aod_unchecked, ellipse_from_delay, GeometryConfig};
use crate::profile::ClusterSet;
use crate::{Error, Result};

/// Paths per cluster `M_i`, either shared by every cluster or listed per
/// cluster index `0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub enum PathCounts {
    Uniform(usize),
    PerCluster(Vec<usize>),
}

impl PathCounts {
    pub fn get(&self, cluster: usize) -> Option<usize> {
        match self {
            PathCounts::Uniform(m) => Some(*m),
            PathCounts::PerCluster(ms) => ms.get(cluster).copied(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringConfig {
    /// von Mises concentration of local scattering, `μ ≥ 0`.
    pub mu: f64,
    /// Rice factor `κ ≥ 0`; 0 means no direct path.
    pub kappa: f64,
    pub paths: PathCounts,
}

impl ScatteringConfig {
    pub fn new(mu: f64, kappa: f64, paths: PathCounts) -> Result<Self> {
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::domain("von Mises concentration", mu));
        }
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::domain("Rice factor", kappa));
        }
        let any_zero = match &paths {
            PathCounts::Uniform(m) => *m == 0,
            PathCounts::PerCluster(ms) => ms.is_empty() || ms.contains(&0),
        };
        if any_zero {
            return Err(Error::Degenerate("every cluster needs at least one path"));
        }
        Ok(ScatteringConfig { mu, kappa, paths })
    }
}

impl Default for ScatteringConfig {
    fn default() -> Self {
        ScatteringConfig { mu: 60.0, kappa: 0.0, paths: PathCounts::Uniform(60) }
    }
}

/// One propagation path at the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    /// Cluster index, 0 for local scattering and the direct path.
    pub cluster: usize,
    /// Arrival angle in radians, `(-π, π]`.
    pub aoa: f64,
    pub power: f64,
    pub direct: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathSet {
    pub paths: Vec<Path>,
    /// Number of scattered paths generated for each cluster index `0..=N`.
    pub counts: Vec<usize>,
}

impl PathSet {
    pub fn total_power(&self) -> f64 {
        self.paths.iter().map(|p| p.power).sum()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Draws an arrival angle of local scattering from the von Mises law with
/// mean 0 and concentration `mu`.
///
/// Best & Fisher (1979) rejection sampler; `mu = 0` is the uniform law.
pub fn sample_local_aoa<R: Rng + ?Sized>(rng: &mut R, mu: f64) -> Result<f64> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::domain("von Mises concentration", mu));
    }
    Ok(VonMises::new(mu).sample(rng))
}

/// Precomputed envelope of the Best–Fisher sampler.
#[derive(Debug, Clone, Copy)]
pub(crate) struct VonMises {
    mu: f64,
    r: f64,
}

impl VonMises {
    pub(crate) fn new(mu: f64) -> Self {
        if mu < 1e-9 {
            return VonMises { mu: 0.0, r: 0.0 };
        }
        let tau = 1.0 + libm::sqrt(1.0 + 4.0 * mu * mu);
        let rho = (tau - libm::sqrt(2.0 * tau)) / (2.0 * mu);
        VonMises { mu, r: (1.0 + rho * rho) / (2.0 * rho) }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.mu == 0.0 {
            return uniform_angle(rng);
        }
        loop {
            let u1: f64 = rng.random();
            let u2: f64 = rng.random();
            let z = libm::cos(PI * u1);
            let f = (1.0 + self.r * z) / (self.r + z);
            let c = self.mu * (self.r - f);
            let accept = c * (2.0 - c) - u2 > 0.0 || (u2 > 0.0 && libm::log(c / u2) + 1.0 - c >= 0.0);
            if accept {
                let theta = libm::acos(f.clamp(-1.0, 1.0));
                let u3: f64 = rng.random();
                return if u3 < 0.5 { -theta } else { theta };
            }
        }
    }
}

/// Power of one delayed-scattering path: uniform on `[0, 2·P_i/M_i]`.
pub fn sample_cluster_power<R: Rng + ?Sized>(rng: &mut R, cluster_power: f64, paths: usize) -> f64 {
    uniform_up_to(rng, 2.0 * cluster_power / paths as f64)
}

/// Power of one local-scattering path: uniform on `[0, 2·P_0/((κ+1)·M_0)]`.
pub fn sample_local_power<R: Rng + ?Sized>(rng: &mut R, local_power: f64, paths: usize, kappa: f64) -> f64 {
    uniform_up_to(rng, 2.0 * local_power / ((kappa + 1.0) * paths as f64))
}

fn uniform_up_to<R: Rng + ?Sized>(rng: &mut R, upper: f64) -> f64 {
    if upper == 0.0 {
        return 0.0;
    }
    let u: f64 = rng.random();
    u * upper
}

/// Generates one path set: `M_i` paths per delayed cluster mapped through
/// its ellipse, `M_0` local-scattering paths, and a direct path at 0 with
/// power `κ·P_0/(κ+1)` when `κ > 0`.
pub fn generate_path_set<R: Rng + ?Sized>(
    clusters: &ClusterSet,
    geometry: &GeometryConfig,
    antenna: &AntennaConfig,
    scattering: &ScatteringConfig,
    rng: &mut R,
) -> Result<PathSet> {
    let plan = PathPlan::new(clusters, geometry, scattering)?;
    Ok(plan.generate(antenna, rng))
}

/// Everything about a path set that does not depend on the random stream.
#[derive(Debug, Clone)]
pub(crate) struct PathPlan {
    /// `(cluster index, eccentricity, P_i, M_i)` for i = 1..=N.
    delayed: Vec<(usize, f64, f64, usize)>,
    local_power: f64,
    local_paths: usize,
    kappa: f64,
    von_mises: VonMises,
}

impl PathPlan {
    pub(crate) fn new(clusters: &ClusterSet, geometry: &GeometryConfig, scattering: &ScatteringConfig) -> Result<Self> {
        let count = |i: usize| {
            scattering
                .paths
                .get(i)
                .ok_or(Error::Degenerate("fewer path counts than clusters"))
        };
        let mut delayed = Vec::with_capacity(clusters.len());
        for c in &clusters.clusters {
            let ellipse = ellipse_from_delay(geometry, c.delay_ns, c.index)?;
            delayed.push((c.index, ellipse.eccentricity, c.power, count(c.index)?));
        }
        if !(scattering.mu >= 0.0) {
            return Err(Error::domain("von Mises concentration", scattering.mu));
        }
        Ok(PathPlan {
            delayed,
            local_power: clusters.local_power,
            local_paths: count(0)?,
            kappa: scattering.kappa,
            von_mises: VonMises::new(scattering.mu),
        })
    }

    pub(crate) fn generate<R: Rng + ?Sized>(&self, antenna: &AntennaConfig, rng: &mut R) -> PathSet {
        let total = self.local_paths + self.delayed.iter().map(|d| d.3).sum::<usize>() + 1;
        let mut paths = Vec::with_capacity(total);
        let mut counts = Vec::with_capacity(self.delayed.len() + 1);
        counts.push(self.local_paths);

        for &(cluster, e, power, m) in &self.delayed {
            for _ in 0..m {
                let aod = sample_aod(rng, antenna);
                paths.push(Path {
                    cluster,
                    aoa: aoa_from_aod_unchecked(aod, e),
                    power: sample_cluster_power(rng, power, m),
                    direct: false,
                });
            }
            counts.push(m);
        }
        for _ in 0..self.local_paths {
            paths.push(Path {
                cluster: 0,
                aoa: self.von_mises.sample(rng),
                power: sample_local_power(rng, self.local_power, self.local_paths, self.kappa),
                direct: false,
            });
        }
        if self.kappa > 0.0 {
            paths.push(Path {
                cluster: 0,
                aoa: 0.0,
                power: self.kappa * self.local_power / (self.kappa + 1.0),
                direct: true,
            });
        }
        PathSet { paths, counts }
    }
}

/// Independent random stream for trial `trial` of simulation cell `cell`
/// under master seed `seed`.
///
/// `(seed, cell)` selects the ChaCha key and `trial` the stream, so streams
/// never overlap and any trial can be regenerated on its own.
pub fn trial_rng(seed: u64, cell: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = seed ^ cell.rotate_left(32) ^ 0x6a09_e667_f3bc_c908;
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
