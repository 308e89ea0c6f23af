use std::io::Write;

use relaysec_core::analytics::{esr_asymptote, esr_lower_bound, high_snr_offset_for};
use relaysec_core::config::{EsrMethod, SimConfig};
use relaysec_core::model::{db_to_linear, topology_to_stats, ChannelStats};
use relaysec_core::montecarlo::estimate_esr;
use relaysec_core::{SchemeKind, SinrMethod};

use crate::report::{csv_writer, sig9};
use crate::Result;

pub const HEADER: [&str; 7] = [
    "snr_db",
    "scheme",
    "method",
    "esr_bits",
    "std_error",
    "n_samples",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub scheme: SchemeKind,
    pub method: EsrMethod,
    pub esr_bits: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl SweepRow {
    fn record(&self) -> [String; 7] {
        [
            sig9(self.snr_db),
            self.scheme.to_string(),
            self.method.to_string(),
            sig9(self.esr_bits),
            sig9(self.std_error),
            self.n_samples.to_string(),
            self.seed.to_string(),
        ]
    }
}

/// One sweep point. Every point reuses the configured seed, so schemes and
/// SNRs are compared on common random numbers.
pub fn evaluate(
    stats: &ChannelStats<f64>,
    scheme: SchemeKind,
    method: EsrMethod,
    cfg: &SimConfig,
) -> relaysec_core::Result<(f64, f64, u64)> {
    let mc = |m| {
        estimate_esr(stats, scheme, m, cfg.samples, cfg.seed)
            .map(|e| (e.mean, e.std_error, e.n_samples))
    };
    match method {
        EsrMethod::McExact => mc(SinrMethod::ExactSinr),
        EsrMethod::McHighSnr => mc(SinrMethod::HighSnrSinr),
        EsrMethod::ClosedFormLowerBound => Ok((esr_lower_bound(stats)?, 0.0, 0)),
        EsrMethod::Asymptote => {
            let params = high_snr_offset_for(stats)?;
            Ok((esr_asymptote(stats.rho(), &params), 0.0, 0))
        }
    }
}

/// Writes the sweep CSV. Scheme/method pairs without a defined value are
/// skipped. On a numeric failure a diagnostic row with NaN values is written
/// before the error is returned.
pub fn run_sweep<W: Write>(cfg: &SimConfig, out: W) -> Result<Vec<SweepRow>> {
    let topology = cfg.topology()?;
    let mut w = csv_writer(out);
    w.write_record(HEADER)?;
    let mut rows = Vec::new();
    for snr_db in cfg.snr.points() {
        for &scheme in &cfg.schemes {
            for &method in cfg.methods.iter().filter(|m| m.applies_to(scheme)) {
                let row = |(esr_bits, std_error, n_samples)| SweepRow {
                    snr_db,
                    scheme,
                    method,
                    esr_bits,
                    std_error,
                    n_samples,
                    seed: cfg.seed,
                };
                let value = topology_to_stats(&topology, db_to_linear(snr_db))
                    .and_then(|st| evaluate(&st, scheme, method, cfg));
                match value {
                    Ok(v) => {
                        let r = row(v);
                        w.write_record(r.record())?;
                        rows.push(r);
                    }
                    Err(e) => {
                        w.write_record(row((f64::NAN, f64::NAN, 0)).record())?;
                        w.flush()?;
                        return Err(e.into());
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SimConfig {
        SimConfig {
            snr: "0:60:5".parse().unwrap(),
            samples: 2000,
            ..SimConfig::default()
        }
    }

    #[test]
    fn row_count_all_methods() {
        let mut buf = Vec::new();
        let rows = run_sweep(&small(), &mut buf).unwrap();
        assert_eq!(rows.len(), 13 * 4);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 13 * 4 + 1);
        assert_eq!(text.lines().next().unwrap(), HEADER.join(","));
    }

    #[test]
    fn baselines_only_get_monte_carlo() {
        let cfg = SimConfig {
            schemes: SchemeKind::ALL.to_vec(),
            snr: "10".parse().unwrap(),
            ..small()
        };
        let rows = run_sweep(&cfg, Vec::new()).unwrap();
        assert_eq!(rows.len(), 4 + 3);
        assert!(rows
            .iter()
            .filter(|r| r.scheme != SchemeKind::ThreeHop)
            .all(|r| r.method == EsrMethod::McExact));
    }

    #[test]
    fn closed_form_rows_have_no_samples() {
        let rows = run_sweep(&small(), Vec::new()).unwrap();
        for r in rows
            .iter()
            .filter(|r| !matches!(r.method, EsrMethod::McExact | EsrMethod::McHighSnr))
        {
            assert_eq!((r.std_error, r.n_samples), (0.0, 0));
        }
    }
}
