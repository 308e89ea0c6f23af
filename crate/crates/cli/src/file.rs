//! TOML config files.
//!
//! ```toml
//! topology = [-3.0, -1.0, 1.0, 3.0]   # xS, xR1, xR2, xD
//! pathloss = 2.7
//! snr = "0:60:5"
//! scheme = ["three-hop", "direct"]
//! method = ["mc-exact", "closed-form-lb"]
//! samples = 1000000
//! seed = 1
//! ```

use std::path::Path;

use relaysec_core::config::ConfigOverrides;
use serde::Deserialize;

use crate::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub topology: Option<[f64; 4]>,
    pub pathloss: Option<f64>,
    pub snr: Option<String>,
    #[serde(default)]
    pub scheme: Vec<String>,
    #[serde(default)]
    pub method: Vec<String>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn overrides(&self) -> Result<ConfigOverrides> {
        Ok(ConfigOverrides {
            positions: self.topology,
            pathloss: self.pathloss,
            snr: self.snr.as_deref().map(str::parse).transpose()?,
            schemes: self
                .scheme
                .iter()
                .map(|s| s.parse())
                .collect::<relaysec_core::Result<_>>()?,
            methods: self
                .method
                .iter()
                .map(|s| s.parse())
                .collect::<relaysec_core::Result<_>>()?,
            samples: self.samples,
            seed: self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use relaysec_core::config::{EsrMethod, SimConfig};
    use relaysec_core::SchemeKind;

    #[test]
    fn full_file() {
        let f = FileConfig::parse(
            r#"
topology = [-1.0, -0.5, 0.5, 1.0]
snr = "0:30:10"
scheme = ["three-hop", "direct"]
method = ["mc-exact"]
samples = 5000
seed = 99
"#,
        )
        .unwrap();
        let cfg = f.overrides().unwrap().apply(SimConfig::default());
        assert_eq!(cfg.positions, [-1.0, -0.5, 0.5, 1.0]);
        assert_eq!(cfg.pathloss, 2.7);
        assert_eq!(cfg.snr.points(), vec![0.0, 10.0, 20.0, 30.0]);
        assert_eq!(cfg.schemes, vec![SchemeKind::ThreeHop, SchemeKind::Direct]);
        assert_eq!(cfg.methods, vec![EsrMethod::McExact]);
        assert_eq!((cfg.samples, cfg.seed), (5000, 99));
    }

    #[test]
    fn rejects_unknown_keys_and_names() {
        assert!(matches!(
            FileConfig::parse("bogus = 1"),
            Err(CliError::Usage(_))
        ));
        let f = FileConfig::parse(r#"scheme = ["four-hop"]"#).unwrap();
        assert!(matches!(f.overrides(), Err(CliError::Usage(_))));
        let f = FileConfig::parse(r#"snr = "10:0:5""#).unwrap();
        assert!(matches!(f.overrides(), Err(CliError::Usage(_))));
    }
}
