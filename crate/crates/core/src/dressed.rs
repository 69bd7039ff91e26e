//! Dressed states of the Jaynes-Cummings circuit.
//!
//! Each invariant subspace V_n = span{|n,e⟩, |n+1,g⟩} is rotated by an angle
//! θ_n into the dressed pair
//!
//! ```text
//! |μ_n⟩ = cos θ_n |n,e⟩ − sin θ_n |n+1,g⟩
//! |ν_n⟩ = sin θ_n |n,e⟩ + cos θ_n |n+1,g⟩
//! ```
//!
//! with energies E_n^{μ,ν} = (n + ½)ω₀ ± √((ω_q − ω₀/2)² + η²(n+1)).
//! The ground state |0,g⟩ belongs to no V_n and never appears here.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::sync::atomic::{AtomicBool, Ordering};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Circuit parameters, all angular frequencies in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Qubit level spacing ω_q.
    pub omega_q: f64,
    /// Resonator frequency ω₀.
    pub omega_0: f64,
    /// Qubit-resonator coupling η.
    pub eta: f64,
}

impl SystemParams {
    pub fn new(omega_q: f64, omega_0: f64, eta: f64) -> Result<Self> {
        let params = Self { omega_q, omega_0, eta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_q.is_finite() && self.omega_q > 0.0) {
            return Err(Error::invalid(
                "omega_q",
                format!("must be finite and > 0, got {}", self.omega_q),
            ));
        }
        if !(self.omega_0.is_finite() && self.omega_0 > 0.0) {
            return Err(Error::invalid(
                "omega_0",
                format!("must be finite and > 0, got {}", self.omega_0),
            ));
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::invalid(
                "eta",
                format!("must be finite and >= 0, got {}", self.eta),
            ));
        }
        Ok(())
    }

    /// Same circuit with a different qubit spacing.
    pub fn with_omega_q(self, omega_q: f64) -> Self {
        Self { omega_q, ..self }
    }

    /// Qubit detuning from half the resonator frequency, ω_q − ω₀/2.
    pub fn detuning(&self) -> f64 {
        self.omega_q - 0.5 * self.omega_0
    }

    /// The mirror spacing ω₀ − ω_q (reflection about resonance).
    pub fn mirrored(self) -> Self {
        Self {
            omega_q: self.omega_0 - self.omega_q,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedAngles {
    pub n: u32,
    pub theta_n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedLevels {
    pub n: u32,
    pub e_mu: f64,
    pub e_nu: f64,
}

impl DressedLevels {
    /// Rabi splitting E_n^μ − E_n^ν.
    pub fn splitting(&self) -> f64 {
        self.e_mu - self.e_nu
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DressedLabel {
    Mu(u32),
    Nu(u32),
}

/// One nonzero entry ⟨to|σ₊|from⟩ of σ₊ in the dressed basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaPlusElement {
    pub from_state: DressedLabel,
    pub to_state: DressedLabel,
    pub amplitude: f64,
}

/// Classical probe and control drives, rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveFields {
    /// Probe Rabi amplitude Ω_p.
    pub omega_p_rabi: f64,
    /// Control Rabi amplitude Ω_c.
    pub omega_c_rabi: f64,
    /// Probe carrier frequency ω_p.
    pub omega_p: f64,
    /// Control carrier frequency ω_c.
    pub omega_c: f64,
}

/// Ratio Ω_p/Ω_c above which first-order (weak probe) results are suspect.
pub const WEAK_PROBE_RATIO: f64 = 0.1;

// warn once per process, sweeps build thousands of drives
static STRONG_PROBE_WARNED: AtomicBool = AtomicBool::new(false);

impl DriveFields {
    pub fn new(omega_p_rabi: f64, omega_c_rabi: f64, omega_p: f64, omega_c: f64) -> Result<Self> {
        let drives = Self {
            omega_p_rabi,
            omega_c_rabi,
            omega_p,
            omega_c,
        };
        drives.validate()?;
        Ok(drives)
    }

    /// Drives tuned to the dressed three-level system of `params`: the
    /// control is resonant with |ν₀⟩ → |μ₁⟩ and the probe sits at detuning
    /// `delta` below the |μ₀⟩ → |μ₁⟩ spacing.
    pub fn tuned(params: &SystemParams, omega_p_rabi: f64, omega_c_rabi: f64, delta: f64) -> Result<Self> {
        let e0 = dressed_energies(params, 0)?;
        let e1 = dressed_energies(params, 1)?;
        Self::new(omega_p_rabi, omega_c_rabi, e1.e_mu - e0.e_mu - delta, e1.e_mu - e0.e_nu)
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [("omega_p_rabi", self.omega_p_rabi), ("omega_c_rabi", self.omega_c_rabi)];
        for (name, v) in checks {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !self.omega_p.is_finite() {
            return Err(Error::invalid("omega_p", "must be finite"));
        }
        if !self.omega_c.is_finite() {
            return Err(Error::invalid("omega_c", "must be finite"));
        }
        Ok(())
    }

    pub fn is_weak_probe(&self) -> bool {
        self.omega_p_rabi <= WEAK_PROBE_RATIO * self.omega_c_rabi
    }

    /// Log once per process when a first-order result is requested outside
    /// the weak-probe regime.
    pub(crate) fn warn_if_strong_probe(&self) {
        if !self.is_weak_probe() && !STRONG_PROBE_WARNED.swap(true, Ordering::Relaxed) {
            log::warn!(
                "probe amplitude {} is not small against control {}; first-order results may not apply",
                self.omega_p_rabi,
                self.omega_c_rabi
            );
        }
    }
}

/// The Λ system {|μ₀⟩, |ν₀⟩, |μ₁⟩} driven by probe and control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeLevelSystem {
    pub e_mu0: f64,
    pub e_nu0: f64,
    pub e_mu1: f64,
    pub theta0: f64,
    pub theta1: f64,
    /// Ω_p cos θ₁ sin θ₀. The probe term of the Hamiltonian carries −ζ̄_p.
    pub zeta_p_bar: f64,
    /// Ω_c cos θ₁ cos θ₀.
    pub zeta_c_bar: f64,
    /// Control carrier frequency, resonant with |ν₀⟩ → |μ₁⟩ unless overridden.
    pub omega_c: f64,
}

impl ThreeLevelSystem {
    /// cos θ₁ sin θ₀, the probe coupling per unit Rabi amplitude.
    pub fn probe_factor(&self) -> f64 {
        self.theta1.cos() * self.theta0.sin()
    }

    /// cos θ₁ cos θ₀, the control coupling per unit Rabi amplitude.
    pub fn control_factor(&self) -> f64 {
        self.theta1.cos() * self.theta0.cos()
    }

    /// E₁^μ − E₀^μ.
    pub fn probe_spacing(&self) -> f64 {
        self.e_mu1 - self.e_mu0
    }

    /// E₁^μ − E₀^ν.
    pub fn control_spacing(&self) -> f64 {
        self.e_mu1 - self.e_nu0
    }

    /// Δ = (E₁^μ − E₀^μ) − ω_p.
    pub fn probe_detuning(&self, omega_p: f64) -> f64 {
        self.probe_spacing() - omega_p
    }

    /// (E₁^μ − E₀^ν) − ω_c; zero unless the control was overridden.
    pub fn control_detuning(&self) -> f64 {
        self.control_spacing() - self.omega_c
    }

    pub fn with_control_frequency(self, omega_c: f64) -> Self {
        Self { omega_c, ..self }
    }
}

/// θ_n = ½ arctan(η√(n+1)/(ω_q − ω₀/2)) on the principal branch, with
/// θ_n = π/4 exactly at ω_q = ω₀/2.
pub fn rotation_angle(params: &SystemParams, n: u32) -> Result<DressedAngles> {
    let detuning = params.detuning();
    let theta_n = if detuning == 0.0 {
        if params.eta == 0.0 {
            return Err(Error::UndefinedAngle);
        }
        FRAC_PI_4
    } else {
        0.5 * (params.eta * f64::from(n + 1).sqrt() / detuning).atan()
    };
    Ok(DressedAngles { n, theta_n })
}

pub fn dressed_energies(params: &SystemParams, n: u32) -> Result<DressedLevels> {
    params.validate()?;
    let nf = f64::from(n);
    let centre = (nf + 0.5) * params.omega_0;
    let half_split = params.detuning().hypot(params.eta * (nf + 1.0).sqrt());
    Ok(DressedLevels {
        n,
        e_mu: centre + half_split,
        e_nu: centre - half_split,
    })
}

/// θ₁ as a function of θ₀ via tan 2θ₁ = √2 tan 2θ₀.
///
/// Defined on all of ℝ. At the non-differentiable points θ₀ = lπ/2 + π/4 the
/// limit value π/4 is returned.
pub fn theta1_of_theta0(theta0: f64) -> f64 {
    // distance from the nearest pole of tan 2θ₀
    let phase = (2.0 * theta0 - FRAC_PI_2).rem_euclid(std::f64::consts::PI);
    if phase.min(std::f64::consts::PI - phase) < 1e-15 {
        return FRAC_PI_4;
    }
    0.5 * (SQRT_2 * (2.0 * theta0).tan()).atan()
}

/// The four nonzero elements of σ₊ connecting V_n to V_{n+1}, in the order
/// |μ_{n+1}⟩⟨μ_n|, |ν_{n+1}⟩⟨ν_n|, |ν_{n+1}⟩⟨μ_n|, |μ_{n+1}⟩⟨ν_n|.
pub fn sigma_plus_elements(params: &SystemParams, n: u32) -> Result<[SigmaPlusElement; 4]> {
    let (sn, cn) = rotation_angle(params, n)?.theta_n.sin_cos();
    let (sm, cm) = rotation_angle(params, n + 1)?.theta_n.sin_cos();
    use DressedLabel::{Mu, Nu};
    let element = |from_state, to_state, amplitude| SigmaPlusElement {
        from_state,
        to_state,
        amplitude,
    };
    Ok([
        element(Mu(n), Mu(n + 1), -cm * sn),
        element(Nu(n), Nu(n + 1), sm * cn),
        element(Mu(n), Nu(n + 1), -sm * sn),
        element(Nu(n), Mu(n + 1), cm * cn),
    ])
}

/// Assemble the Λ system with the control carrier set to exact resonance
/// ω_c = E₁^μ − E₀^ν. Use [`ThreeLevelSystem::with_control_frequency`] to
/// override it.
pub fn build_three_level(params: &SystemParams, drives: &DriveFields) -> Result<ThreeLevelSystem> {
    params.validate()?;
    drives.validate()?;
    let theta0 = rotation_angle(params, 0)?.theta_n;
    let theta1 = rotation_angle(params, 1)?.theta_n;
    let l0 = dressed_energies(params, 0)?;
    let l1 = dressed_energies(params, 1)?;
    let (s0, c0) = theta0.sin_cos();
    let c1 = theta1.cos();
    Ok(ThreeLevelSystem {
        e_mu0: l0.e_mu,
        e_nu0: l0.e_nu,
        e_mu1: l1.e_mu,
        theta0,
        theta1,
        zeta_p_bar: drives.omega_p_rabi * c1 * s0,
        zeta_c_bar: drives.omega_c_rabi * c1 * c0,
        omega_c: l1.e_mu - l0.e_nu,
    })
}

/// Control amplitude whose first-order level shift of |ν₀⟩ equals the
/// minimal lower-doublet splitting 2η:
/// Ω_c = √(2η[ω₀ − (√2+1)η]).
pub fn degeneracy_threshold(params: &SystemParams) -> Result<f64> {
    let gap = level_gap_for_shift(params)?;
    Ok((2.0 * params.eta * gap).sqrt())
}

/// First-order shift Ω_c²/(ω₀ − (√2+1)η) of |ν₀⟩ under the control drive.
pub fn first_order_shift(params: &SystemParams, omega_c_rabi: f64) -> Result<f64> {
    Ok(omega_c_rabi * omega_c_rabi / level_gap_for_shift(params)?)
}

fn level_gap_for_shift(params: &SystemParams) -> Result<f64> {
    let gap = params.omega_0 - (SQRT_2 + 1.0) * params.eta;
    if gap <= 0.0 {
        return Err(Error::Domain(format!(
            "omega_0 = {} must exceed (sqrt2 + 1) eta = {}",
            params.omega_0,
            (SQRT_2 + 1.0) * params.eta
        )));
    }
    Ok(gap)
}

/// Qubit spacing at which the superposition (|μ₀⟩ + |ν₀⟩)/√2 is dark:
/// ω_q = ω₀/2 + η / tan[2 arctan(Ω_c/Ω_p)].
///
/// With principal-branch angles this is dark only for Ω_c ≤ Ω_p.
pub fn trapping_spacing(drives: &DriveFields, params: &SystemParams) -> Result<f64> {
    if drives.omega_c_rabi == 0.0 {
        return Err(Error::NoTrappingSpacing);
    }
    if drives.omega_p_rabi.is_nan() || drives.omega_p_rabi <= 0.0 {
        return Err(Error::invalid("omega_p_rabi", "trapping spacing needs a nonzero probe"));
    }
    let t = (2.0 * (drives.omega_c_rabi / drives.omega_p_rabi).atan()).tan();
    let omega_q = 0.5 * params.omega_0 + params.eta / t;
    if !omega_q.is_finite() {
        return Err(Error::NoTrappingSpacing);
    }
    Ok(omega_q)
}
