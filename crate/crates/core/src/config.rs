//! Simulation configuration: the SNR grid, schemes, methods and sample
//! budget of one run. File formats live with the front end; this module only
//! holds the typed values and how partial settings layer over defaults.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::Topology;
use crate::montecarlo::DEFAULT_SAMPLES;
use crate::sinr::SchemeKind;

/// How an ESR curve is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EsrMethod {
    McExact,
    McHighSnr,
    ClosedFormLowerBound,
    Asymptote,
}

impl EsrMethod {
    pub const ALL: [EsrMethod; 4] = [
        EsrMethod::McExact,
        EsrMethod::McHighSnr,
        EsrMethod::ClosedFormLowerBound,
        EsrMethod::Asymptote,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EsrMethod::McExact => "mc-exact",
            EsrMethod::McHighSnr => "mc-highsnr",
            EsrMethod::ClosedFormLowerBound => "closed-form-lb",
            EsrMethod::Asymptote => "asymptote",
        }
    }

    /// Whether this method produces a value for `scheme`. Closed forms and
    /// high-SNR SINRs exist only for the three-hop scheme.
    pub fn applies_to(self, scheme: SchemeKind) -> bool {
        self == EsrMethod::McExact || scheme == SchemeKind::ThreeHop
    }
}

impl fmt::Display for EsrMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EsrMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mc-exact" => Ok(EsrMethod::McExact),
            "mc-highsnr" => Ok(EsrMethod::McHighSnr),
            "closed-form-lb" => Ok(EsrMethod::ClosedFormLowerBound),
            "asymptote" => Ok(EsrMethod::Asymptote),
            other => Err(Error::Config(format!(
                "unknown method '{other}' (expected mc-exact, mc-highsnr, closed-form-lb, asymptote)"
            ))),
        }
    }
}

/// Inclusive SNR grid in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrRange {
    start_db: f64,
    stop_db: f64,
    step_db: f64,
}

impl SnrRange {
    pub fn new(start_db: f64, stop_db: f64, step_db: f64) -> Result<Self> {
        if !(start_db.is_finite() && stop_db.is_finite() && step_db.is_finite()) {
            return Err(Error::Config("SNR range must be finite".into()));
        }
        if step_db <= 0.0 {
            return Err(Error::Config(format!(
                "SNR step must be positive, got {step_db}"
            )));
        }
        if start_db > stop_db {
            return Err(Error::Config(format!(
                "SNR start {start_db} exceeds stop {stop_db}"
            )));
        }
        Ok(Self {
            start_db,
            stop_db,
            step_db,
        })
    }

    pub fn start_db(&self) -> f64 {
        self.start_db
    }
    pub fn stop_db(&self) -> f64 {
        self.stop_db
    }
    pub fn step_db(&self) -> f64 {
        self.step_db
    }

    /// Grid points `start + k * step` up to `stop` (with a small tolerance
    /// so that `0:60:5` includes 60).
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as u64 + 1;
        (0..count)
            .map(|k| self.start_db + k as f64 * self.step_db)
            .collect()
    }
}

impl FromStr for SnrRange {
    type Err = Error;

    /// `A:B:STEP` or a single value `A`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| Error::Config(format!("bad SNR value '{p}' in '{s}'")))
        };
        match parts.as_slice() {
            [a] => {
                let a = num(a)?;
                Self::new(a, a, 1.0)
            }
            [a, b, step] => Self::new(num(a)?, num(b)?, num(step)?),
            _ => Err(Error::Config(format!(
                "SNR range must be A:B:STEP, got '{s}'"
            ))),
        }
    }
}

/// Parses `xS,xR1,xR2,xD` into positions.
pub fn parse_positions(s: &str) -> Result<[f64; 4]> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad position '{}' in '{s}'", p.trim())))
        })
        .collect::<Result<_>>()?;
    <[f64; 4]>::try_from(vals)
        .map_err(|v| Error::Config(format!("topology needs 4 positions, got {}", v.len())))
}

/// Everything one run of the tool needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub positions: [f64; 4],
    pub pathloss: f64,
    pub snr: SnrRange,
    pub schemes: Vec<SchemeKind>,
    pub methods: Vec<EsrMethod>,
    pub samples: u64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            positions: [-3.0, -1.0, 1.0, 3.0],
            pathloss: 2.7,
            snr: SnrRange::new(0.0, 60.0, 5.0).expect("valid default"),
            schemes: vec![SchemeKind::ThreeHop],
            methods: EsrMethod::ALL.to_vec(),
            samples: DEFAULT_SAMPLES,
            seed: 1,
        }
    }
}

/// Partially specified settings; `None` or an empty list keeps the base value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub positions: Option<[f64; 4]>,
    pub pathloss: Option<f64>,
    pub snr: Option<SnrRange>,
    pub schemes: Vec<SchemeKind>,
    pub methods: Vec<EsrMethod>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl ConfigOverrides {
    /// Layers `self` over `base`; list keys replace the base list when given.
    pub fn apply(&self, mut base: SimConfig) -> SimConfig {
        if let Some(p) = self.positions {
            base.positions = p;
        }
        if let Some(n) = self.pathloss {
            base.pathloss = n;
        }
        if let Some(s) = self.snr {
            base.snr = s;
        }
        if !self.schemes.is_empty() {
            base.schemes = self.schemes.clone();
        }
        if !self.methods.is_empty() {
            base.methods = self.methods.clone();
        }
        if let Some(n) = self.samples {
            base.samples = n;
        }
        if let Some(s) = self.seed {
            base.seed = s;
        }
        base
    }
}

impl SimConfig {
    pub fn topology(&self) -> Result<Topology<f64>> {
        let [s, r1, r2, d] = self.positions;
        Topology::new(s, r1, r2, d, self.pathloss)
    }

    pub fn validate(&self) -> Result<()> {
        self.topology()?;
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.schemes.is_empty() || self.methods.is_empty() {
            return Err(Error::Config(
                "at least one scheme and one method required".into(),
            ));
        }
        Ok(())
    }
}
