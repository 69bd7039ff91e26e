//! Unit conversions at the crate boundary.

use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// k_B/ħ in rad/ns per kelvin (k_B/h = 20.837 GHz/K).
pub const KB_OVER_HBAR: f64 = TWO_PI * 20.837;

/// Ordinary frequency in GHz to angular frequency in rad/ns.
pub fn ghz_to_rad_ns(f_ghz: f64) -> f64 {
    TWO_PI * f_ghz
}

/// Angular frequency in rad/ns to ordinary frequency in GHz.
pub fn rad_ns_to_ghz(omega: f64) -> f64 {
    omega / TWO_PI
}

/// Lifetime in ns to a decay rate in 1/ns.
pub fn lifetime_ns_to_rate(lifetime_ns: f64) -> f64 {
    1.0 / lifetime_ns
}

pub fn mk_to_kelvin(t_mk: f64) -> f64 {
    t_mk * 1e-3
}

/// Thermal angular frequency k_B T/ħ in rad/ns.
pub fn thermal_frequency(temperature_k: f64) -> f64 {
    KB_OVER_HBAR * temperature_k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_round_trip() {
        let f = 3.47;
        assert!((rad_ns_to_ghz(ghz_to_rad_ns(f)) - f).abs() < 1e-15);
    }

    #[test]
    fn thermal_frequency_at_20_mk() {
        // 20 mK is 0.41674 GHz of ordinary frequency.
        let w = thermal_frequency(0.020);
        assert!((rad_ns_to_ghz(w) - 0.41674).abs() < 1e-12);
    }
}
