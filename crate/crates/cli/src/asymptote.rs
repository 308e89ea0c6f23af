use std::io::Write;

use relaysec_core::analytics::{esr_asymptote, high_snr_offset_for};
use relaysec_core::config::SimConfig;
use relaysec_core::model::{db_to_linear, topology_to_stats};
use relaysec_core::AsymptoteParams;

use crate::report::{csv_writer, sig9};
use crate::Result;

pub const HEADER: [&str; 7] = [
    "snr_db",
    "s_infinity",
    "l_infinity",
    "a_term",
    "b_term",
    "c_term",
    "asymptote_bits",
];

/// Slope and offset depend only on the geometry; the asymptote line is
/// sampled at every SNR of the grid.
pub fn run_asymptote<W: Write>(cfg: &SimConfig, out: W) -> Result<AsymptoteParams> {
    let topology = cfg.topology()?;
    let params = high_snr_offset_for(&topology_to_stats(&topology, 1.0)?)?;
    let mut w = csv_writer(out);
    w.write_record(HEADER)?;
    for snr_db in cfg.snr.points() {
        w.write_record([
            sig9(snr_db),
            sig9(params.s_infinity),
            sig9(params.l_infinity),
            sig9(params.a_term),
            sig9(params.b_term),
            sig9(params.c_term),
            sig9(esr_asymptote(db_to_linear(snr_db), &params)),
        ])?;
    }
    w.flush()?;
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_slope_and_smaller_offset_for_shorter_links() {
        let mut buf = Vec::new();
        let p1 = run_asymptote(&SimConfig::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 14);
        for line in text.lines().skip(1) {
            assert_eq!(line.split(',').nth(1), Some("3.33333333e-1"));
        }
        let t2 = SimConfig {
            positions: [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0],
            ..SimConfig::default()
        };
        let p2 = run_asymptote(&t2, Vec::new()).unwrap();
        assert!(p2.l_infinity < p1.l_infinity);
    }
}
