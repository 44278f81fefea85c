use std::path::PathBuf;
use std::process::ExitCode;

use bearing_core::estimation::{DEFAULT_CORRECTION_LIMIT_DEG, DEFAULT_GRADIENT};
use bearing_core::DelayProfile;
use bearing_sim::commands::{self, Beam, EnvOptions, SimOptions};
use bearing_sim::formats::{self, to_json, DispersionDoc};
use bearing_sim::{fixture, runner, Error, Result};
use clap::{Args, Parser, Subcommand};

/// Angle-of-arrival dispersion and bearing-error analysis for sources with
/// directional antennas in multipath environments.
#[derive(Debug, Parser)]
#[command(name = "bearing-sim", version)]
struct Cli {
    /// Worker threads for Monte Carlo trials (default: all cores). Results do
    /// not depend on this value.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract time-clusters and ellipse parameters from a delay profile.
    Analyze {
        #[command(flatten)]
        env: EnvArgs,
        /// Also write clusters.json here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Simulate one antenna configuration and report its dispersion.
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        /// Beamwidth of the Gaussian transmit pattern, degrees.
        #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
        hpbw: f64,
        /// Use an omnidirectional transmit pattern instead.
        #[arg(long)]
        omni: bool,
        /// Boresight offset from the Tx→Rx direction, degrees.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        /// Write pmf.txt and report.json here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write the path set of trial 0 as paths.jsonl.
        #[arg(long, requires = "out_dir")]
        dump_paths: bool,
    },
    /// Simulate a grid of beamwidths and boresight offsets.
    Sweep {
        #[command(flatten)]
        sim: SimArgs,
        /// Beamwidths, degrees; `omni` adds an omnidirectional row.
        #[arg(long, value_delimiter = ',', default_value = "30,60,90,120")]
        hpbw: Vec<Beam>,
        /// Boresight offsets, degrees.
        #[arg(long, value_delimiter = ',', default_value = "0,30,60,90,120,150,180", allow_negative_numbers = true)]
        alpha: Vec<f64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Fit the bearing-line correction from sweep pairs, or apply it to one
    /// mean offset.
    Correct {
        /// Pairs file written by `sweep` (or two columns phi_bar_deg, delta_phi_deg).
        #[arg(long, conflicts_with = "phi_bar", required_unless_present = "phi_bar")]
        pairs: Option<PathBuf>,
        /// Mean offset of the arrival angle, degrees.
        #[arg(long, allow_negative_numbers = true)]
        phi_bar: Option<f64>,
        /// Measured bearing-line error to correct, degrees.
        #[arg(long, requires = "phi_bar", allow_negative_numbers = true)]
        delta_phi: Option<f64>,
        /// Correction gradient. With --pairs, defaults to the fitted one.
        #[arg(long)]
        gradient: Option<f64>,
        /// Correction applies only for |phi_bar| below this, degrees.
        #[arg(long, default_value_t = DEFAULT_CORRECTION_LIMIT_DEG)]
        limit_deg: f64,
    },
    /// Least-squares error between two pmf files on the same grid.
    Compare { a: PathBuf, b: PathBuf },
}

#[derive(Debug, Args)]
struct EnvArgs {
    /// Delay profile file; the built-in canonical profile when omitted.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Tx–Rx distance, metres.
    #[arg(long, default_value_t = 300.0)]
    distance_m: f64,
    /// Minimum prominence of a cluster peak above the trend, dB.
    #[arg(long, default_value_t = 1.0)]
    prominence_db: f64,
    /// Minimum separation of cluster peaks, ns (default: profile resolution).
    #[arg(long)]
    min_sep_ns: Option<f64>,
}

impl EnvArgs {
    fn options(&self) -> EnvOptions {
        EnvOptions {
            distance_m: self.distance_m,
            prominence_db: self.prominence_db,
            min_separation_ns: self.min_sep_ns,
            ..EnvOptions::default()
        }
    }

    fn profile(&self) -> Result<DelayProfile> {
        match &self.profile {
            Some(path) => formats::read_profile(path),
            None => Ok(fixture::canonical_profile()),
        }
    }
}

#[derive(Debug, Args)]
struct SimArgs {
    #[command(flatten)]
    env: EnvArgs,
    /// von Mises concentration of local scattering.
    #[arg(long, default_value_t = 60.0)]
    mu: f64,
    /// Rice factor; 0 means no direct path.
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    /// Paths per cluster.
    #[arg(long, default_value_t = 60)]
    paths: usize,
    #[arg(long, default_value_t = 500)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Angular bin width, degrees; must divide 360.
    #[arg(long, default_value_t = 1.0)]
    bin_deg: f64,
    /// RMS bearing spread of the direction finder itself, degrees.
    #[arg(long, default_value_t = 0.2)]
    sigma0: f64,
}

impl SimArgs {
    fn options(&self, beam: Beam, alpha_deg: f64) -> SimOptions {
        SimOptions {
            env: self.env.options(),
            beam,
            alpha_deg,
            mu: self.mu,
            kappa: self.kappa,
            paths_per_cluster: self.paths,
            trials: self.trials,
            seed: self.seed,
            bin_deg: self.bin_deg,
            sigma0_deg: self.sigma0,
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { env, out_dir } => {
            let report = commands::analyze(&env.profile()?, &env.options())?;
            let json = to_json(&report);
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
                formats::write_file(&dir.join("clusters.json"), &json)?;
            }
            print!("{json}");
        }
        Command::Simulate { sim, hpbw, omni, alpha, out_dir, dump_paths } => {
            let beam = if omni { Beam::Omni } else { Beam::Hpbw(hpbw) };
            let options = sim.options(beam, alpha);
            let profile = sim.env.profile()?;
            let out = runner::with_workers(cli.workers, || commands::simulate(&profile, &options))??;
            if let Some(dir) = out_dir {
                out.write(&dir, dump_paths)?;
            }
            print!("{}", to_json(&DispersionDoc::from(&out.report)));
        }
        Command::Sweep { sim, hpbw, alpha, out_dir } => {
            let options = sim.options(Beam::Hpbw(30.0), 0.0);
            let profile = sim.env.profile()?;
            let out = runner::with_workers(cli.workers, || commands::sweep(&profile, &options, &hpbw, &alpha))??;
            out.write(&out_dir)?;
            let (_, sigma) = &out.files()[0];
            print!("{sigma}");
        }
        Command::Correct { pairs: Some(path), gradient, limit_deg, .. } => {
            let pairs = formats::parse_pairs(&formats::read_to_string(&path)?)?;
            print!("{}", to_json(&commands::correct_pairs(&pairs, gradient, limit_deg)?));
        }
        Command::Correct { phi_bar, delta_phi, gradient, limit_deg, .. } => {
            let phi_bar = phi_bar.expect("clap enforces --pairs or --phi-bar");
            let report = commands::correct_value(phi_bar, gradient.unwrap_or(DEFAULT_GRADIENT), limit_deg, delta_phi);
            print!("{}", to_json(&report));
        }
        Command::Compare { a, b } => {
            let lse = commands::compare(&formats::read_pmf(&a)?, &formats::read_pmf(&b)?)?;
            println!("{lse:e}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
