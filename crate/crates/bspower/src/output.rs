//! CSV and JSON encodings of sweep results and channel dumps.
//!
//! Column meanings are documented in `docs/output.md`.

use std::io::Write;

use bspower_core::channel::{FrameChannels, Scenario};
use bspower_core::harness::PointStats;

use crate::config::Format;

/// Columns of the sweep CSV, in order.
pub const SWEEP_COLUMNS: [&str; 9] = [
    "scheme",
    "rate_bps",
    "mean_supply_w",
    "outage_frac",
    "trials",
    "energy_eff_bpj",
    "included",
    "mean_sleep_slots",
    "two_antenna_frac",
];

fn opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes sweep results in `format`.
pub fn write_points<W: Write>(
    points: &[PointStats],
    format: Format,
    mut out: W,
) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut out);
            csv.write_record(SWEEP_COLUMNS)?;
            for p in points {
                csv.write_record([
                    p.scheme.to_string(),
                    p.rate_bps.to_string(),
                    opt(p.mean_supply_w),
                    p.outage_frac.to_string(),
                    p.trials.to_string(),
                    opt(p.energy_eff_bpj),
                    u8::from(p.included).to_string(),
                    opt(p.mean_sleep_slots),
                    opt(p.two_antenna_frac),
                ])?;
            }
            csv.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, points)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Columns of the channel dump CSV, in order.
pub const CHANNEL_COLUMNS: [&str; 9] = [
    "user",
    "distance_m",
    "gain_db",
    "subcarrier",
    "slot",
    "antennas",
    "eigen_1",
    "eigen_2",
    "quality",
];

/// Writes the eigenvalues of every block, user and antenna count as CSV.
pub fn write_channel_dump<W: Write>(
    scenario: &Scenario,
    distance_m: &[f64],
    gain: &[f64],
    frame: &FrameChannels,
    out: W,
) -> std::io::Result<()> {
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(CHANNEL_COLUMNS)?;
    for user in 0..frame.users() {
        let gain_db = 10.0 * gain[user].log10();
        for slot in 0..frame.slots() {
            for subcarrier in 0..frame.subcarriers() {
                for antennas in 1..=scenario.max_transmit_antennas {
                    let modes = frame.eigenmodes(user, subcarrier, slot, antennas);
                    let eigen = |i: usize| {
                        if i < modes.len() {
                            modes.get(i).to_string()
                        } else {
                            String::new()
                        }
                    };
                    csv.write_record([
                        user.to_string(),
                        distance_m[user].to_string(),
                        gain_db.to_string(),
                        subcarrier.to_string(),
                        slot.to_string(),
                        antennas.to_string(),
                        eigen(0),
                        eigen(1),
                        frame.quality(user, subcarrier, slot, antennas).to_string(),
                    ])?;
                }
            }
        }
    }
    csv.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use bspower_core::harness::Scheme;

    fn point(mean: Option<f64>) -> PointStats {
        PointStats {
            scheme: Scheme::Dtx,
            rate_bps: 1e6,
            mean_supply_w: mean,
            outage_frac: 0.0,
            trials: 2,
            energy_eff_bpj: mean.map(|m| 1e7 / m),
            included: true,
            mean_sleep_slots: None,
            two_antenna_frac: None,
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_points(&[point(Some(200.0)), point(None)], Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_COLUMNS.join(","));
        assert_eq!(lines[1], "dtx,1000000,200,0,2,50000,1,,");
        assert_eq!(lines[2], "dtx,1000000,,0,2,,1,,");
    }

    #[test]
    fn json_mirrors_columns() {
        let mut buf = Vec::new();
        write_points(&[point(Some(200.0))], Format::Json, &mut buf).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let record = value[0].as_object().unwrap();
        for column in SWEEP_COLUMNS {
            assert!(record.contains_key(column), "{column}");
        }
        assert_eq!(record["mean_supply_w"], 200.0);
    }
}
