//! Thermal environment of the qubit and the decay rates it induces between
//! dressed levels.
//!
//! The bath couples through (c_x σ_x + c_y σ_y + c_z σ_z)X. Only two
//! aggregate products ever reach the dressed rates, so the model stores
//! them directly:
//!
//! * `kappa_rel` ≡ |c_x + i c_y|² S_X(ω)/4, the transverse (relaxation) prefactor;
//! * `kappa_deph` ≡ |c_z|² S_X(0)/2, the longitudinal (pure dephasing) prefactor.
//!
//! Rates are in 1/ns and enter the equations of motion on the same footing as
//! angular frequencies in rad/ns.

use std::f64::consts::PI;

use serde::Serialize;

use crate::units::thermal_frequency;
use crate::{Error, Result};

/// Classical bath spectrum S_X(ω) = (Rω/2π) coth(ω/2k_BT), even in ω.
///
/// At ω = 0 the limit R k_B T/π is returned.
pub fn power_spectrum(omega: f64, resistance: f64, temperature: f64) -> f64 {
    let kt = thermal_frequency(temperature);
    let x = omega / (2.0 * kt);
    // x coth x, with its series near the origin
    let x_coth_x = if x.abs() < 1e-4 {
        1.0 + x * x / 3.0
    } else {
        x / x.tanh()
    };
    resistance * kt / PI * x_coth_x
}

/// How the measured relaxation rate r₁ = r_↓ + r_↑ maps onto `kappa_rel`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum RelaxationSplit {
    /// κ_rel = r₁.
    #[default]
    Total,
    /// κ_rel = r_↓ = r₁/2 (the classical spectrum is even, so r_↑ = r_↓).
    DownOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    pub kappa_rel: f64,
    pub kappa_deph: f64,
    /// Kelvin.
    pub temperature: f64,
    /// Resonator angular frequency, rad/ns.
    pub omega_0: f64,
}

impl NoiseModel {
    pub fn new(kappa_rel: f64, kappa_deph: f64, temperature: f64, omega_0: f64) -> Result<Self> {
        let model = Self {
            kappa_rel,
            kappa_deph,
            temperature,
            omega_0,
        };
        model.validate()?;
        Ok(model)
    }

    /// Build the prefactors from bath couplings. `spectrum_omega` picks the
    /// frequency at which S_X enters `kappa_rel`; it defaults to ω₀.
    pub fn from_couplings(
        c_xy_sq: f64,
        c_z_sq: f64,
        resistance: f64,
        temperature: f64,
        omega_0: f64,
        spectrum_omega: Option<f64>,
    ) -> Result<Self> {
        if temperature.is_nan() || temperature <= 0.0 {
            return Err(Error::invalid("temperature", "must be > 0"));
        }
        let omega = spectrum_omega.unwrap_or(omega_0);
        Self::new(
            c_xy_sq * power_spectrum(omega, resistance, temperature) / 4.0,
            c_z_sq * power_spectrum(0.0, resistance, temperature) / 2.0,
            temperature,
            omega_0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa_rel.is_finite() && self.kappa_rel >= 0.0) {
            return Err(Error::invalid(
                "kappa_rel",
                format!("must be finite and >= 0, got {}", self.kappa_rel),
            ));
        }
        if !(self.kappa_deph.is_finite() && self.kappa_deph >= 0.0) {
            return Err(Error::invalid(
                "kappa_deph",
                format!("must be finite and >= 0, got {}", self.kappa_deph),
            ));
        }
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::invalid(
                "temperature",
                format!("must be finite and > 0, got {}", self.temperature),
            ));
        }
        if !(self.omega_0.is_finite() && self.omega_0 > 0.0) {
            return Err(Error::invalid(
                "omega_0",
                format!("must be finite and > 0, got {}", self.omega_0),
            ));
        }
        Ok(())
    }

    /// βω₀ with β = ħ/k_BT.
    pub fn beta_omega0(&self) -> f64 {
        self.omega_0 / thermal_frequency(self.temperature)
    }

    /// exp(−βω₀), the resonator Boltzmann factor.
    pub fn boltzmann_factor(&self) -> f64 {
        (-self.beta_omega0()).exp()
    }

    pub fn with_temperature(self, temperature: f64) -> Self {
        Self { temperature, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UndressedRates {
    pub r1: f64,
    pub r_phi: f64,
    pub r2: f64,
}

impl UndressedRates {
    /// From measured relaxation r₁ and total dephasing r₂ = r₁/2 + r_φ.
    pub fn from_measured(r1: f64, r2: f64) -> Result<Self> {
        if !(r1.is_finite() && r1 >= 0.0) {
            return Err(Error::invalid("r1", format!("must be finite and >= 0, got {r1}")));
        }
        if !r2.is_finite() {
            return Err(Error::invalid("r2", "must be finite"));
        }
        if r2 < 0.5 * r1 {
            return Err(Error::InvalidRates { r2, half_r1: 0.5 * r1 });
        }
        Ok(Self {
            r1,
            r_phi: r2 - 0.5 * r1,
            r2,
        })
    }

    pub fn from_lifetimes(t1_ns: f64, t2_ns: f64) -> Result<Self> {
        for (name, t) in [("t1", t1_ns), ("t2", t2_ns)] {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::invalid(name, format!("lifetime must be > 0 ns, got {t}")));
            }
        }
        Self::from_measured(1.0 / t1_ns, 1.0 / t2_ns)
    }
}

/// Identify κ_rel with r₁ and κ_deph with r_φ = r₂ − r₁/2.
pub fn noise_from_measured(r1: f64, r2: f64, temperature: f64, omega_0: f64) -> Result<NoiseModel> {
    noise_from_measured_with(r1, r2, temperature, omega_0, RelaxationSplit::Total)
}

pub fn noise_from_measured_with(
    r1: f64,
    r2: f64,
    temperature: f64,
    omega_0: f64,
    split: RelaxationSplit,
) -> Result<NoiseModel> {
    let rates = UndressedRates::from_measured(r1, r2)?;
    let kappa_rel = match split {
        RelaxationSplit::Total => rates.r1,
        RelaxationSplit::DownOnly => 0.5 * rates.r1,
    };
    NoiseModel::new(kappa_rel, rates.r_phi, temperature, omega_0)
}

/// Population and coherence decay rates among |μ₀⟩, |ν₀⟩, |μ₁⟩.
///
/// `gamma_mu1` and `gamma_munu` carry signs: they are odd in θ₀.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct DressedRates {
    pub gamma_mu: f64,
    pub gamma_nu: f64,
    pub gamma_1: f64,
    pub gamma_mu1: f64,
    pub gamma_nu1: f64,
    pub gamma_munu: f64,
}

impl DressedRates {
    pub fn total_relaxation(&self) -> f64 {
        total_relaxation(self)
    }

    /// Drop the population decay terms, keeping the coherence rates.
    pub fn without_population_decay(self) -> Self {
        Self {
            gamma_mu: 0.0,
            gamma_nu: 0.0,
            gamma_1: 0.0,
            ..self
        }
    }

    pub fn max_abs(&self) -> f64 {
        [
            self.gamma_mu,
            self.gamma_nu,
            self.gamma_1,
            self.gamma_mu1,
            self.gamma_nu1,
            self.gamma_munu,
        ]
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

pub fn dressed_rates(noise: &NoiseModel, theta0: f64, theta1: f64) -> DressedRates {
    let q = noise.boltzmann_factor();
    let one_q = 1.0 - q;
    let (s0, c0) = theta0.sin_cos();
    let (s1, c1) = theta1.sin_cos();
    let rel = noise.kappa_rel;
    let deph = noise.kappa_deph;
    DressedRates {
        gamma_mu: rel * one_q * (c0 * c0 + q * s0 * s0),
        gamma_nu: rel * one_q * (s0 * s0 + q * c0 * c0),
        gamma_1: rel * q * one_q * (c1 * c1 + q * s1 * s1),
        gamma_mu1: -deph * q * one_q * s0 * c1,
        gamma_nu1: deph * q * one_q * c0 * c1,
        gamma_munu: rel * one_q * one_q * c0 * s0,
    }
}

/// Γ = Γ_μ + Γ_ν + Γ₁.
pub fn total_relaxation(rates: &DressedRates) -> f64 {
    rates.gamma_mu + rates.gamma_nu + rates.gamma_1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ghz_to_rad_ns;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn charge_noise() -> NoiseModel {
        noise_from_measured(1.0 / 700.0, 1.0 / 48.0, 0.020, ghz_to_rad_ns(7.0)).unwrap()
    }

    #[test]
    fn spectrum_limits() {
        let (r, t) = (2.5, 0.05);
        let kt = thermal_frequency(t);
        assert!(rel(power_spectrum(0.0, r, t), r * kt / PI) < 1e-15);
        assert!(rel(power_spectrum(1e-9, r, t), r * kt / PI) < 1e-12);
        let w = 200.0 * kt;
        assert!(rel(power_spectrum(w, r, t), r * w / (2.0 * PI)) < 1e-12);
        for w in [0.01, 0.3, 2.0, 40.0] {
            assert_eq!(power_spectrum(-w, r, t), power_spectrum(w, r, t));
        }
    }

    #[test]
    fn charge_preset_prefactors() {
        let n = charge_noise();
        assert!(rel(n.kappa_rel, 1.4286e-3) < 1e-4);
        assert!(rel(n.kappa_deph, 2.0119e-2) < 1e-4);
    }

    #[test]
    fn measured_rate_edges() {
        let n = noise_from_measured(0.2, 0.1, 0.02, 1.0).unwrap();
        assert_eq!(n.kappa_deph, 0.0);
        let n = noise_from_measured(0.0, 0.3, 0.02, 1.0).unwrap();
        assert_eq!((n.kappa_rel, n.kappa_deph), (0.0, 0.3));
        assert!(matches!(
            noise_from_measured(0.2, 0.09, 0.02, 1.0),
            Err(Error::InvalidRates { .. })
        ));
        let n = noise_from_measured_with(0.2, 0.3, 0.02, 1.0, RelaxationSplit::DownOnly).unwrap();
        assert_eq!(n.kappa_rel, 0.1);
    }

    #[test]
    fn undressed_rate_sum() {
        let r = UndressedRates::from_lifetimes(700.0, 48.0).unwrap();
        assert_eq!(r.r2, r.r1 / 2.0 + r.r_phi);
    }

    #[test]
    fn couplings_use_omega0_by_default() {
        let (w0, t) = (ghz_to_rad_ns(7.0), 0.02);
        let n = NoiseModel::from_couplings(4.0, 2.0, 1.0, t, w0, None).unwrap();
        assert!(rel(n.kappa_rel, power_spectrum(w0, 1.0, t)) < 1e-15);
        assert!(rel(n.kappa_deph, power_spectrum(0.0, 1.0, t)) < 1e-15);
        let m = NoiseModel::from_couplings(4.0, 2.0, 1.0, t, w0, Some(1.0)).unwrap();
        assert!(rel(m.kappa_rel, power_spectrum(1.0, 1.0, t)) < 1e-15);
    }

    #[test]
    fn boltzmann_factor_charge() {
        let q = charge_noise().boltzmann_factor();
        // hf/k_BT from the SI constants
        let x = 6.626_070_15e-34 * 7e9 / (1.380_649e-23 * 0.020);
        assert!((q.ln() + x).abs() < 1e-3, "{q}");
        assert!(q > 0.0 && q < 1.0);
    }

    #[test]
    fn zero_temperature_limit() {
        let n = charge_noise().with_temperature(1e-5);
        assert_eq!(n.boltzmann_factor(), 0.0);
        let (t0, t1) = (0.3, 0.4);
        let r = dressed_rates(&n, t0, t1);
        assert_eq!((r.gamma_1, r.gamma_mu1, r.gamma_nu1), (0.0, 0.0, 0.0));
        assert!(rel(r.gamma_mu, n.kappa_rel * t0.cos().powi(2)) < 1e-15);
        assert!(rel(r.gamma_munu, n.kappa_rel * t0.cos() * t0.sin()) < 1e-15);
        assert!(rel(r.total_relaxation(), n.kappa_rel) < 1e-15);
    }

    #[test]
    fn resonance_symmetry() {
        let n = charge_noise().with_temperature(0.2);
        let q = n.boltzmann_factor();
        let r = dressed_rates(&n, FRAC_PI_4, FRAC_PI_4);
        let expected = n.kappa_rel * (1.0 - q * q) / 2.0;
        assert!(rel(r.gamma_mu, expected) < 1e-14);
        assert!(rel(r.gamma_nu, expected) < 1e-14);
    }

    #[test]
    fn charge_preset_rates_at_3_4_ghz() {
        // θ₀ = −π/8, θ₁ = ½ arctan(−√2); values from an independent evaluation
        let n = charge_noise();
        let t1 = 0.5 * (-std::f64::consts::SQRT_2).atan();
        let r = dressed_rates(&n, -FRAC_PI_8, t1);
        let expected = [
            (r.gamma_mu, 0.0012193619353319128),
            (r.gamma_nu, 0.00020920949323951216),
            (r.gamma_1, 5.7139533768054916e-11),
            (r.gamma_mu1, 3.467629838805541e-10),
            (r.gamma_nu1, 8.371598986133965e-10),
            (r.gamma_munu, -0.0005050762210462003),
        ];
        for (got, want) in expected {
            assert!(rel(got, want) < 1e-9, "{got} vs {want}");
        }
        assert!(rel(total_relaxation(&r), 0.0014285714857109587) < 1e-9);
        assert_eq!(total_relaxation(&DressedRates::default()), 0.0);
    }

    #[test]
    fn role_exchange() {
        let n = charge_noise().with_temperature(0.15);
        let doubled = NoiseModel {
            kappa_rel: 2.0 * n.kappa_rel,
            ..n
        };
        let (a, b) = (dressed_rates(&n, 0.3, 0.35), dressed_rates(&doubled, 0.3, 0.35));
        assert!(rel(b.gamma_munu, 2.0 * a.gamma_munu) < 1e-15);
        assert_eq!(a.gamma_mu1, b.gamma_mu1);
        assert_eq!(a.gamma_nu1, b.gamma_nu1);
    }

    #[test]
    fn mirror_sign_table() {
        // ω_q → ω₀ − ω_q flips θ₀ and θ₁
        let n = charge_noise().with_temperature(0.1);
        for (t0, t1) in [(0.2, 0.27), (-0.6, -0.68), (FRAC_PI_8, 0.47)] {
            let a = dressed_rates(&n, t0, t1);
            let b = dressed_rates(&n, -t0, -t1);
            assert_eq!(a.gamma_mu, b.gamma_mu);
            assert_eq!(a.gamma_nu, b.gamma_nu);
            assert_eq!(a.gamma_1, b.gamma_1);
            assert_eq!(a.gamma_nu1, b.gamma_nu1);
            assert_eq!(a.gamma_mu1, -b.gamma_mu1);
            assert_eq!(a.gamma_munu, -b.gamma_munu);
        }
    }

    #[test]
    fn twofold_temperature_dependence() {
        let base = charge_noise();
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=90 {
            let t = 0.010 + 0.001 * f64::from(i);
            let n = base.with_temperature(t);
            let g1 = dressed_rates(&n, 0.3, 0.4).gamma_1;
            let gmu = dressed_rates(&n, 0.0, 0.0).gamma_mu;
            if let Some((p1, pmu)) = prev {
                assert!(g1 > p1, "Γ₁ not increasing at {t} K");
                assert!(gmu < pmu, "Γ_μ(θ₀=0) not decreasing at {t} K");
            }
            prev = Some((g1, gmu));
        }
    }

    #[test]
    fn mu1_sign_follows_angles() {
        let n = charge_noise().with_temperature(0.1);
        assert!(dressed_rates(&n, 0.3, 0.4).gamma_mu1 < 0.0);
        assert!(dressed_rates(&n, 0.3, 0.4).gamma_munu > 0.0);
    }

    proptest! {
        #[test]
        fn population_rates_nonnegative(
            t0 in -3.2f64..3.2, t1 in -3.2f64..3.2,
            temp in 1e-3f64..5.0, kr in 0.0f64..1.0, kd in 0.0f64..1.0,
        ) {
            let n = NoiseModel::new(kr, kd, temp, 40.0).unwrap();
            let r = dressed_rates(&n, t0, t1);
            prop_assert!(r.gamma_mu >= 0.0 && r.gamma_nu >= 0.0 && r.gamma_1 >= 0.0);
        }
    }
}
