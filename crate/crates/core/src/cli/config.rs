//! Config-file merging and resolution of command-line units.

use std::fs;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::presets::QubitPreset;
use super::{
    BlochArgs, CliError, CommonArgs, CriticalArgs, MapArgs, ParamArgs, PresetsArgs, SpectrumArgs, SplitArg, TrapArgs,
};
use crate::dressed::{DriveFields, SystemParams};
use crate::noise::{noise_from_measured_with, NoiseModel, RelaxationSplit, UndressedRates};
use crate::susceptibility::{OperatingPoint, SusceptibilityScale};
use crate::units::{ghz_to_rad_ns, mk_to_kelvin};

pub trait CommandArgs: Serialize + DeserializeOwned + Default {
    fn common(&self) -> &CommonArgs;
    fn common_mut(&mut self) -> &mut CommonArgs;
}

macro_rules! command_args {
    ($($t:ty),*) => {$(
        impl CommandArgs for $t {
            fn common(&self) -> &CommonArgs {
                &self.common
            }
            fn common_mut(&mut self) -> &mut CommonArgs {
                &mut self.common
            }
        }
    )*};
}

command_args!(SpectrumArgs, MapArgs, CriticalArgs, TrapArgs, BlochArgs, PresetsArgs);

/// Overlay command-line flags on the `--config` file, if any.
///
/// Unknown keys in the file are rejected. Absent flags and unset switches
/// leave the file value in place.
pub fn with_config<T: CommandArgs>(flags: T) -> Result<T, CliError> {
    let Some(path) = flags.common().config.clone() else {
        return Ok(flags);
    };
    let bad = |why: String| CliError::invalid(format!("invalid-parameter: config: {why}"));
    let text = fs::read_to_string(&path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    let Value::Object(mut merged) = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))? else {
        return Err(bad("top level must be a JSON object".into()));
    };
    let Ok(Value::Object(known)) = serde_json::to_value(T::default()) else {
        unreachable!("argument structs serialize to objects");
    };
    if let Some(k) = merged.keys().find(|k| !known.contains_key(*k)) {
        return Err(bad(format!("unknown key '{k}'")));
    }
    if let Ok(Value::Object(given)) = serde_json::to_value(&flags) {
        for (k, v) in given {
            if !(v.is_null() || v == Value::Bool(false)) {
                merged.insert(k, v);
            }
        }
    }
    let mut out: T = serde_json::from_value(Value::Object(merged)).map_err(|e| bad(e.to_string()))?;
    out.common_mut().config = Some(path);
    Ok(out)
}

/// The parameters a command actually ran with, keyed by flag name. Feeding
/// this object back through `--config` reproduces the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct EffectiveParams {
    pub preset: String,
    pub w0_ghz: f64,
    pub eta_ghz: f64,
    pub t1_ns: f64,
    pub t2_ns: f64,
    pub temp_mk: f64,
    pub wc_rabi_ghz: f64,
    pub wp_rabi_ghz: f64,
    pub wq_ghz: f64,
    pub dipole_factor: f64,
    pub relaxation_split: SplitArg,
}

/// Probe amplitude used when `--wp-rabi-ghz` is absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefaultProbe {
    /// 10⁻³ Ω_c, well inside the weak-probe regime.
    Weak,
    /// Ω_p = Ω_c.
    EqualToControl,
}

/// Effective parameters converted to rad/ns, ns and K.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub echo: EffectiveParams,
    pub preset: QubitPreset,
    pub params: SystemParams,
    pub noise: NoiseModel,
    pub omega_p_rabi: f64,
    pub omega_c_rabi: f64,
    pub scale: SusceptibilityScale,
    /// `--wq-ghz` was given (otherwise ω_q defaulted to resonance).
    pub wq_explicit: bool,
}

pub fn resolve(common: &CommonArgs, p: &ParamArgs, probe: DefaultProbe) -> Result<Resolved, CliError> {
    let preset = QubitPreset::get(common.preset.as_deref().unwrap_or("charge"))?;
    let w0 = p.w0_ghz.unwrap_or(preset.omega_0_ghz);
    let wc = p.wc_rabi_ghz.unwrap_or(preset.omega_c_rabi_ghz);
    let wp = p.wp_rabi_ghz.unwrap_or(match probe {
        DefaultProbe::Weak => 1e-3 * wc,
        DefaultProbe::EqualToControl => wc,
    });
    let echo = EffectiveParams {
        preset: preset.name.to_string(),
        w0_ghz: w0,
        eta_ghz: p.eta_ghz.unwrap_or(preset.eta_ghz),
        t1_ns: p.t1_ns.unwrap_or(preset.t1_ns),
        t2_ns: p.t2_ns.unwrap_or(preset.t2_ns),
        temp_mk: p.temp_mk.unwrap_or(preset.temperature_mk),
        wc_rabi_ghz: wc,
        wp_rabi_ghz: wp,
        wq_ghz: p.wq_ghz.unwrap_or(0.5 * w0),
        dipole_factor: p.dipole_factor.unwrap_or(1.0),
        relaxation_split: p.relaxation_split.unwrap_or_default(),
    };
    let params = SystemParams::new(
        ghz_to_rad_ns(echo.wq_ghz),
        ghz_to_rad_ns(echo.w0_ghz),
        ghz_to_rad_ns(echo.eta_ghz),
    )?;
    let rates = UndressedRates::from_lifetimes(echo.t1_ns, echo.t2_ns)?;
    let split = match echo.relaxation_split {
        SplitArg::Total => RelaxationSplit::Total,
        SplitArg::Down => RelaxationSplit::DownOnly,
    };
    let noise = noise_from_measured_with(rates.r1, rates.r2, mk_to_kelvin(echo.temp_mk), params.omega_0, split)?;
    let omega_p_rabi = ghz_to_rad_ns(echo.wp_rabi_ghz);
    let omega_c_rabi = ghz_to_rad_ns(echo.wc_rabi_ghz);
    // validates the amplitudes
    DriveFields::new(omega_p_rabi, omega_c_rabi, 0.0, 0.0)?;
    Ok(Resolved {
        scale: SusceptibilityScale::new(echo.dipole_factor)?,
        echo,
        preset,
        params,
        noise,
        omega_p_rabi,
        omega_c_rabi,
        wq_explicit: p.wq_ghz.is_some(),
    })
}

impl Resolved {
    /// Drives tuned to this circuit with probe detuning `delta` (rad/ns).
    pub fn drives(&self, params: &SystemParams, omega_c_rabi: f64, delta: f64) -> crate::Result<DriveFields> {
        DriveFields::tuned(params, self.omega_p_rabi, omega_c_rabi, delta)
    }

    pub fn point(&self) -> crate::Result<OperatingPoint> {
        self.point_at(self.params.omega_q, self.omega_c_rabi)
    }

    /// Operating point with ω_q and Ω_c replaced (rad/ns).
    pub fn point_at(&self, omega_q: f64, omega_c_rabi: f64) -> crate::Result<OperatingPoint> {
        let params = self.params.with_omega_q(omega_q);
        params.validate()?;
        let drives = self.drives(&params, omega_c_rabi, 0.0)?;
        OperatingPoint::new(params, drives, self.noise)
    }
}
