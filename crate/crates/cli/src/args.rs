use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use relaysec_core::config::{parse_positions, ConfigOverrides, SimConfig};

use crate::file::FileConfig;
use crate::Result;

#[derive(Debug, Parser)]
#[command(
    name = "relaysec",
    version,
    about = "Secrecy rate of three-hop untrusted relaying with cooperative jamming"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ergodic secrecy rate over an SNR grid, one CSV row per (snr, scheme, method)
    Sweep(RunArgs),
    /// Compare closed forms against independent oracles; nonzero exit if a gating check fails
    Validate(RunArgs),
    /// High-SNR slope, power offset and asymptote line over the SNR grid
    Asymptote(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Node positions "xS,xR1,xR2,xD"
    #[arg(long, allow_hyphen_values = true)]
    pub topology: Option<String>,
    /// Path-loss exponent
    #[arg(long)]
    pub pathloss: Option<f64>,
    /// Transmit SNR grid in dB, "A:B:STEP" or a single value
    #[arg(long, allow_hyphen_values = true)]
    pub snr: Option<String>,
    /// three-hop, two-hop-1, two-hop-2 or direct (repeatable)
    #[arg(long = "scheme")]
    pub schemes: Vec<String>,
    /// mc-exact, mc-highsnr, closed-form-lb or asymptote (repeatable)
    #[arg(long = "method")]
    pub methods: Vec<String>,
    /// Monte Carlo samples per estimate
    #[arg(long)]
    pub samples: Option<u64>,
    /// Random seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// TOML config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write CSV here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> Result<ConfigOverrides> {
        Ok(ConfigOverrides {
            positions: self.topology.as_deref().map(parse_positions).transpose()?,
            pathloss: self.pathloss,
            snr: self.snr.as_deref().map(str::parse).transpose()?,
            schemes: self
                .schemes
                .iter()
                .map(|s| s.parse())
                .collect::<relaysec_core::Result<_>>()?,
            methods: self
                .methods
                .iter()
                .map(|s| s.parse())
                .collect::<relaysec_core::Result<_>>()?,
            samples: self.samples,
            seed: self.seed,
        })
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<SimConfig> {
        let mut cfg = SimConfig::default();
        if let Some(path) = &self.config {
            cfg = FileConfig::load(path)?.overrides()?.apply(cfg);
        }
        cfg = self.overrides()?.apply(cfg);
        cfg.validate()?;
        Ok(cfg)
    }
}
