//! Density-matrix dynamics of the driven Λ system {|μ₀⟩, |ν₀⟩, |μ₁⟩}.
//!
//! Two frames are available. The lab frame keeps the drive phases
//! ζ_p(t) = −Ω_p cos θ₁ sin θ₀ e^{−iω_p t}, ζ_c(t) = Ω_c cos θ₁ cos θ₀ e^{−iω_c t}
//! and the bare energy terms on the coherences. The rotating frame has
//! time-independent coefficients: H̃ = diag(Δ, Δ_c, 0) on (μ, ν, 1) with
//! couplings ⟨μ|H̃|1⟩ = −ζ̄_p and ⟨ν|H̃|1⟩ = ζ̄_c.
//!
//! In both frames the equations are −i[H, ρ] with the populations decaying
//! at Γ_a and the coherences at γ_ab. Population decay is not fed back into
//! other levels, so the trace is conserved only when Γ_a = 0.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::Serialize;

use crate::dressed::{build_three_level, DriveFields, SystemParams, ThreeLevelSystem};
use crate::noise::DressedRates;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Upper triangle of the 3×3 density matrix; ρ_ba = ρ_ab*.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct DensityState {
    pub rho_mumu: f64,
    pub rho_nunu: f64,
    pub rho_11: f64,
    pub rho_mu1: Complex64,
    pub rho_nu1: Complex64,
    pub rho_munu: Complex64,
}

impl DensityState {
    /// All population in |μ₀⟩.
    pub fn ground() -> Self {
        Self {
            rho_mumu: 1.0,
            ..Self::default()
        }
    }

    /// (|μ₀⟩ + |ν₀⟩)/√2.
    pub fn dark() -> Self {
        Self::pure([
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, 0.0),
        ])
    }

    /// |ψ⟩⟨ψ| for amplitudes on (μ₀, ν₀, μ₁).
    pub fn pure(psi: [Complex64; 3]) -> Self {
        let [a, b, c] = psi;
        Self {
            rho_mumu: a.norm_sqr(),
            rho_nunu: b.norm_sqr(),
            rho_11: c.norm_sqr(),
            rho_mu1: a * c.conj(),
            rho_nu1: b * c.conj(),
            rho_munu: a * b.conj(),
        }
    }

    pub fn trace(&self) -> f64 {
        self.rho_mumu + self.rho_nunu + self.rho_11
    }

    /// Largest magnitude of any matrix entry.
    pub fn max_abs(&self) -> f64 {
        [
            self.rho_mumu.abs(),
            self.rho_nunu.abs(),
            self.rho_11.abs(),
            self.rho_mu1.norm(),
            self.rho_nu1.norm(),
            self.rho_munu.norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.rho_mumu.is_finite()
            && self.rho_nunu.is_finite()
            && self.rho_11.is_finite()
            && self.rho_mu1.is_finite()
            && self.rho_nu1.is_finite()
            && self.rho_munu.is_finite()
    }
}

impl Add for DensityState {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            rho_mumu: self.rho_mumu + o.rho_mumu,
            rho_nunu: self.rho_nunu + o.rho_nunu,
            rho_11: self.rho_11 + o.rho_11,
            rho_mu1: self.rho_mu1 + o.rho_mu1,
            rho_nu1: self.rho_nu1 + o.rho_nu1,
            rho_munu: self.rho_munu + o.rho_munu,
        }
    }
}

impl Mul<f64> for DensityState {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self {
            rho_mumu: self.rho_mumu * k,
            rho_nunu: self.rho_nunu * k,
            rho_11: self.rho_11 * k,
            rho_mu1: self.rho_mu1 * k,
            rho_nu1: self.rho_nu1 * k,
            rho_munu: self.rho_munu * k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Frame {
    Lab,
    #[default]
    Rotating,
}

/// Generic right-hand side: couplings z_p = ⟨μ|H|1⟩, z_c = ⟨ν|H|1⟩ and the
/// diagonal energies h = (H_μμ, H_νν, H_11).
fn commutator_rhs(s: &DensityState, h: [f64; 3], zp: Complex64, zc: Complex64, r: &DressedRates) -> DensityState {
    let rho_1mu = s.rho_mu1.conj();
    let rho_1nu = s.rho_nu1.conj();
    DensityState {
        rho_mumu: -r.gamma_mu * s.rho_mumu + (-I * zp * rho_1mu + I * zp.conj() * s.rho_mu1).re,
        rho_nunu: -r.gamma_nu * s.rho_nunu + (-I * zc * rho_1nu + I * zc.conj() * s.rho_nu1).re,
        rho_11: -r.gamma_1 * s.rho_11
            + (I * zp * rho_1mu + I * zc * rho_1nu - I * zp.conj() * s.rho_mu1 - I * zc.conj() * s.rho_nu1).re,
        rho_mu1: -(I * (h[0] - h[2]) + r.gamma_mu1) * s.rho_mu1 - I * zp * (s.rho_11 - s.rho_mumu)
            + I * zc * s.rho_munu,
        rho_nu1: -(I * (h[1] - h[2]) + r.gamma_nu1) * s.rho_nu1 - I * zc * (s.rho_11 - s.rho_nunu)
            + I * zp * s.rho_munu.conj(),
        rho_munu: -(I * (h[0] - h[1]) + r.gamma_munu) * s.rho_munu - I * zp * s.rho_nu1.conj()
            + I * zc.conj() * s.rho_mu1,
    }
}

/// Lab-frame equations of motion at time `t` (ns). The probe carrier is
/// `drives.omega_p`; the control carrier is `system.omega_c`.
pub fn bloch_rhs(
    state: &DensityState,
    system: &ThreeLevelSystem,
    rates: &DressedRates,
    drives: &DriveFields,
    t: f64,
) -> DensityState {
    let zp = -system.zeta_p_bar * Complex64::from_polar(1.0, -drives.omega_p * t);
    let zc = system.zeta_c_bar * Complex64::from_polar(1.0, -system.omega_c * t);
    commutator_rhs(state, [system.e_mu0, system.e_nu0, system.e_mu1], zp, zc, rates)
}

/// Rotating-frame equations with Δ = (E₁^μ − E₀^μ) − ω_p and
/// Δ_c = (E₁^μ − E₀^ν) − ω_c.
pub fn bloch_rhs_rotating(
    state: &DensityState,
    system: &ThreeLevelSystem,
    rates: &DressedRates,
    drives: &DriveFields,
) -> DensityState {
    let delta = system.probe_detuning(drives.omega_p);
    let delta_c = system.control_detuning();
    let zp = Complex64::new(-system.zeta_p_bar, 0.0);
    let zc = Complex64::new(system.zeta_c_bar, 0.0);
    commutator_rhs(state, [delta, delta_c, 0.0], zp, zc, rates)
}

/// A Λ system, its decay rates, the drives and the frame to integrate in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochModel {
    pub system: ThreeLevelSystem,
    pub rates: DressedRates,
    pub drives: DriveFields,
    pub frame: Frame,
}

impl BlochModel {
    pub fn new(params: &SystemParams, drives: DriveFields, rates: DressedRates, frame: Frame) -> Result<Self> {
        Ok(Self {
            system: build_three_level(params, &drives)?,
            rates,
            drives,
            frame,
        })
    }

    pub fn rhs(&self, state: &DensityState, t: f64) -> DensityState {
        match self.frame {
            Frame::Lab => bloch_rhs(state, &self.system, &self.rates, &self.drives, t),
            Frame::Rotating => bloch_rhs_rotating(state, &self.system, &self.rates, &self.drives),
        }
    }

    /// Largest rate or frequency the integrator has to resolve.
    pub fn fastest_scale(&self) -> f64 {
        let s = &self.system;
        let spacings = match self.frame {
            Frame::Lab => vec![
                s.e_mu0 - s.e_mu1,
                s.e_nu0 - s.e_mu1,
                s.e_mu0 - s.e_nu0,
                self.drives.omega_p,
                s.omega_c,
            ],
            Frame::Rotating => {
                let d = s.probe_detuning(self.drives.omega_p);
                let dc = s.control_detuning();
                vec![d, dc, d - dc]
            }
        };
        spacings
            .into_iter()
            .chain([s.zeta_p_bar, s.zeta_c_bar, self.rates.max_abs()])
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationConfig {
    /// ns.
    pub t_max: f64,
    /// Largest allowed step, ns.
    pub dt: f64,
    /// Record every `record_stride` steps (the final state is always kept).
    pub record_stride: usize,
}

/// dt times the fastest scale must stay below this.
pub const STABILITY_LIMIT: f64 = 0.1;

impl IntegrationConfig {
    pub fn new(t_max: f64, dt: f64, record_stride: usize) -> Result<Self> {
        let config = Self {
            t_max,
            dt,
            record_stride,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return Err(Error::invalid(
                "t_max",
                format!("must be finite and >= 0, got {}", self.t_max),
            ));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid("dt", format!("must be finite and > 0, got {}", self.dt)));
        }
        if self.record_stride == 0 {
            return Err(Error::invalid("record_stride", "must be >= 1"));
        }
        Ok(())
    }

    pub fn check_stability(&self, model: &BlochModel) -> Result<()> {
        let fastest = model.fastest_scale();
        if self.dt * fastest >= STABILITY_LIMIT {
            return Err(Error::StabilityGuard {
                dt: self.dt,
                fastest,
                suggested_dt: 0.5 * STABILITY_LIMIT / fastest,
            });
        }
        Ok(())
    }

    /// Number of equal steps covering [0, t_max] with step ≤ dt.
    pub fn steps(&self) -> usize {
        ((self.t_max / self.dt) * (1.0 - 1e-12)).ceil().max(0.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: DensityState,
}

fn rk4_step(model: &BlochModel, s: &DensityState, t: f64, h: f64) -> DensityState {
    let k1 = model.rhs(s, t);
    let k2 = model.rhs(&(*s + k1 * (0.5 * h)), t + 0.5 * h);
    let k3 = model.rhs(&(*s + k2 * (0.5 * h)), t + 0.5 * h);
    let k4 = model.rhs(&(*s + k3 * h), t + h);
    *s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Fixed-step RK4 from t = 0 to `t_max`, calling `observe` after every step
/// (and once for the initial state). Returns the final state.
pub fn integrate_with<F>(
    initial: DensityState,
    config: &IntegrationConfig,
    model: &BlochModel,
    mut observe: F,
) -> Result<DensityState>
where
    F: FnMut(usize, f64, &DensityState),
{
    config.validate()?;
    config.check_stability(model)?;
    let n = config.steps();
    let h = if n == 0 { 0.0 } else { config.t_max / n as f64 };
    let mut state = initial;
    observe(0, 0.0, &state);
    for k in 0..n {
        let t = k as f64 * h;
        state = rk4_step(model, &state, t, h);
        if !state.is_finite() {
            return Err(Error::Domain(format!("integration diverged at t = {t} ns")));
        }
        observe(k + 1, (k + 1) as f64 * h, &state);
    }
    Ok(state)
}

/// Sampled trajectory: t = 0, every `record_stride` steps, and the end point.
pub fn integrate(initial: DensityState, config: &IntegrationConfig, model: &BlochModel) -> Result<Vec<Sample>> {
    let n = config.steps();
    let mut out = Vec::with_capacity(n / config.record_stride.max(1) + 2);
    integrate_with(initial, config, model, |k, t, s| {
        if k % config.record_stride == 0 || k == n {
            out.push(Sample { t, state: *s });
        }
    })?;
    Ok(out)
}

/// First-order steady state of ρ_μ1 with the ground state fully populated:
/// ρ_μ1 = −iζ̄_p(iΔ + γ_μν)/[(iΔ + γ_μ1)(iΔ + γ_μν) + ζ̄_c²].
pub fn steady_state_first_order(
    system: &ThreeLevelSystem,
    rates: &DressedRates,
    drives: &DriveFields,
    delta: f64,
) -> Result<Complex64> {
    drives.warn_if_strong_probe();
    let a = Complex64::new(rates.gamma_mu1, delta);
    let b = Complex64::new(rates.gamma_munu, delta);
    let denom = a * b + system.zeta_c_bar * system.zeta_c_bar;
    if denom == Complex64::new(0.0, 0.0) || !denom.is_finite() {
        return Err(Error::SingularPoint { delta });
    }
    Ok(-I * system.zeta_p_bar * b / denom)
}

/// Drives with both carriers resonant with the dressed transitions of
/// `params`, decay off, rotating frame.
pub fn resonant_model(drives: &DriveFields, params: &SystemParams) -> Result<BlochModel> {
    let tuned = DriveFields::tuned(params, drives.omega_p_rabi, drives.omega_c_rabi, 0.0)?;
    BlochModel::new(params, tuned, DressedRates::default(), Frame::Rotating)
}

/// Largest ρ₁₁ reached from `initial` with resonant drives and decay off.
pub fn max_excited_population(
    initial: DensityState,
    drives: &DriveFields,
    params: &SystemParams,
    config: &IntegrationConfig,
) -> Result<f64> {
    let model = resonant_model(drives, params)?;
    let mut peak = f64::NEG_INFINITY;
    integrate_with(initial, config, &model, |_, _, s| peak = peak.max(s.rho_11))?;
    Ok(peak)
}

/// Max ρ₁₁ starting from (|μ₀⟩ + |ν₀⟩)/√2. Zero up to rounding when ω_q sits
/// at the trapping spacing for these drives.
pub fn trapping_check(drives: &DriveFields, params: &SystemParams, config: &IntegrationConfig) -> Result<f64> {
    max_excited_population(DensityState::dark(), drives, params, config)
}
