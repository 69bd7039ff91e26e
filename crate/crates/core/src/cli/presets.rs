//! Circuit presets for the three qubit families. Values are kept as decimal
//! strings so the table can be checksummed and echoed exactly.

use serde::Serialize;

use crate::Error;

/// name, ω₀/2π (GHz), η/2π (GHz), T1 (ns), T2 (ns), T (mK), Ω_c/2π (GHz),
/// ω_q range (GHz), Δ range (GHz).
pub const PRESET_TABLE: [(&str, [&str; 10]); 3] = [
    (
        "charge",
        ["7", "0.1", "700", "48", "20", "0.012", "3.3", "3.7", "-0.025", "0.025"],
    ),
    (
        "phase",
        [
            "6.57", "0.019", "650", "150", "25", "0.00385", "3.2", "3.37", "-0.0065", "0.0065",
        ],
    ),
    (
        "flux",
        [
            "9.907", "0.1", "1900", "1000", "50", "0.00063", "4.7", "5.2", "-0.0015", "0.0015",
        ],
    ),
];

/// Normalising constants used on the figure axes: Δ′/2π and ω_q′/2π, GHz.
pub const FIGURE_DELTA_SCALE_GHZ: f64 = 0.025;
pub const FIGURE_WQ_SCALE_GHZ: f64 = 3.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitPreset {
    pub name: &'static str,
    pub omega_0_ghz: f64,
    pub eta_ghz: f64,
    pub t1_ns: f64,
    pub t2_ns: f64,
    pub temperature_mk: f64,
    pub omega_c_rabi_ghz: f64,
    pub omega_q_range_ghz: (f64, f64),
    pub delta_range_ghz: (f64, f64),
}

fn parse(s: &str) -> f64 {
    s.parse().expect("preset table holds valid decimals")
}

impl QubitPreset {
    pub fn get(name: &str) -> Result<Self, Error> {
        PRESET_TABLE
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(n, v)| QubitPreset {
                name: n,
                omega_0_ghz: parse(v[0]),
                eta_ghz: parse(v[1]),
                t1_ns: parse(v[2]),
                t2_ns: parse(v[3]),
                temperature_mk: parse(v[4]),
                omega_c_rabi_ghz: parse(v[5]),
                omega_q_range_ghz: (parse(v[6]), parse(v[7])),
                delta_range_ghz: (parse(v[8]), parse(v[9])),
            })
            .ok_or_else(|| {
                Error::invalid(
                    "preset",
                    format!("unknown preset '{name}' (expected charge, phase or flux)"),
                )
            })
    }

    pub fn all() -> Vec<Self> {
        PRESET_TABLE
            .iter()
            .map(|(n, _)| Self::get(n).expect("table entry"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    #[test]
    fn table_checksum() {
        let mut h = Sha256::new();
        for (name, values) in PRESET_TABLE {
            h.update(name);
            for v in values {
                h.update(",");
                h.update(v);
            }
            h.update("\n");
        }
        let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, PINNED);
    }

    const PINNED: &str = "0566c03a9fc4a3a5ded580cc6bf359fe9b626f6c2224e4e328248959fa281985";

    #[test]
    fn parsed_values() {
        let c = QubitPreset::get("charge").unwrap();
        assert_eq!((c.omega_0_ghz, c.eta_ghz, c.t1_ns, c.t2_ns), (7.0, 0.1, 700.0, 48.0));
        assert_eq!((c.temperature_mk, c.omega_c_rabi_ghz), (20.0, 0.012));
        let p = QubitPreset::get("phase").unwrap();
        assert_eq!(
            (p.omega_0_ghz, p.eta_ghz, p.t1_ns, p.t2_ns),
            (6.57, 0.019, 650.0, 150.0)
        );
        assert_eq!((p.temperature_mk, p.omega_c_rabi_ghz), (25.0, 0.00385));
        let f = QubitPreset::get("flux").unwrap();
        assert_eq!(
            (f.omega_0_ghz, f.eta_ghz, f.t1_ns, f.t2_ns),
            (9.907, 0.1, 1900.0, 1000.0)
        );
        assert_eq!((f.temperature_mk, f.omega_c_rabi_ghz), (50.0, 0.00063));
        assert!(QubitPreset::get("transmon").is_err());
    }
}
