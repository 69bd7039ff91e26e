use rayon::prelude::*;
use serde::Serialize;

use super::config::{resolve, DefaultProbe, EffectiveParams, Resolved};
use super::output::{normalize_max, open_out, write_json, write_table, Cell};
use super::presets::{QubitPreset, PRESET_TABLE};
use super::{
    BlochArgs, CliError, CommonArgs, CriticalArgs, FrameArg, InitialArg, MapArgs, MapOutput, Normalize, PresetsArgs,
    SpectrumArgs, TrapArgs, EXIT_NO_BRACKET,
};
use crate::bloch::{self, BlochModel, DensityState, Frame, IntegrationConfig};
use crate::dressed::{trapping_spacing, DriveFields};
use crate::noise::{dressed_rates, DressedRates};
use crate::susceptibility::{
    classify_regime, critical_spacings, f_factor, numeric_switching, ClassifyOptions, Regime, DEFAULT_GRID_POINTS,
};
use crate::units::{ghz_to_rad_ns, rad_ns_to_ghz};

const DEFAULT_SPECTRUM_POINTS: usize = 401;

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::invalid("invalid-parameter: threads: must be >= 1"));
        }
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| CliError::invalid(format!("invalid-parameter: threads: {e}")))
}

fn emit_table(
    common: &CommonArgs,
    parameters: &impl Serialize,
    columns: &[String],
    rows: &[Vec<Cell>],
) -> Result<(), CliError> {
    let mut out = open_out(common.out.as_deref())?;
    write_table(&mut *out, common.format.unwrap_or_default(), parameters, columns, rows)
}

fn emit_json(common: &CommonArgs, report: &impl Serialize) -> Result<(), CliError> {
    let mut out = open_out(common.out.as_deref())?;
    write_json(&mut *out, report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Delta,
    OmegaQ,
    OmegaCRabi,
}

impl AxisKind {
    fn name(self) -> &'static str {
        match self {
            AxisKind::Delta => "delta",
            AxisKind::OmegaQ => "omega_q",
            AxisKind::OmegaCRabi => "omega_c_rabi",
        }
    }
}

/// Uniform grid `min..=max` in GHz; symmetric ranges hit 0 exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub kind: AxisKind,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(kind: AxisKind, min: f64, max: f64, points: usize) -> Result<Self, CliError> {
        let bad = |why: String| CliError::invalid(format!("invalid-parameter: {}: {why}", kind.name()));
        if points < 2 {
            return Err(bad(format!("need at least 2 points, got {points}")));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(bad(format!("need finite min < max, got {min}..{max}")));
        }
        Ok(Self { kind, min, max, points })
    }

    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let bad = || {
            CliError::invalid(format!(
                "invalid-parameter: axis: expected name:min:max:points, got '{spec}'"
            ))
        };
        let parts: Vec<&str> = spec.split(':').collect();
        let [name, min, max, points] = parts[..] else {
            return Err(bad());
        };
        let kind = match name {
            "delta" => AxisKind::Delta,
            "omega_q" => AxisKind::OmegaQ,
            "omega_c_rabi" => AxisKind::OmegaCRabi,
            _ => {
                return Err(CliError::invalid(format!(
                    "invalid-parameter: axis: unknown axis '{name}' (delta, omega_q, omega_c_rabi)"
                )))
            }
        };
        let min: f64 = min.parse().map_err(|_| bad())?;
        let max: f64 = max.parse().map_err(|_| bad())?;
        let points: usize = points.parse().map_err(|_| bad())?;
        Self::new(kind, min, max, points)
    }

    pub fn value(&self, i: usize) -> f64 {
        let m = (self.points - 1) as f64;
        let i = i as f64;
        (self.min * (m - i) + self.max * i) / m
    }
}

fn scaled_column(kind: AxisKind, scale: Option<f64>) -> Result<(String, f64), CliError> {
    match scale {
        None => Ok((format!("{}_ghz", kind.name()), 1.0)),
        Some(s) if s.is_finite() && s > 0.0 => Ok((format!("{}_scaled", kind.name()), s)),
        Some(s) => Err(CliError::invalid(format!(
            "invalid-parameter: {}_scale: must be > 0, got {s}",
            kind.name()
        ))),
    }
}

pub fn spectrum(a: SpectrumArgs) -> Result<(), CliError> {
    let r = resolve(&a.common, &a.params, DefaultProbe::Weak)?;
    let (lo, hi) = r.preset.delta_range_ghz;
    let axis = Axis::new(
        AxisKind::Delta,
        a.delta_min_ghz.unwrap_or(lo),
        a.delta_max_ghz.unwrap_or(hi),
        a.points.unwrap_or(DEFAULT_SPECTRUM_POINTS),
    )?;
    let (delta_col, delta_scale) = scaled_column(AxisKind::Delta, a.delta_scale_ghz)?;
    let point = r.point()?;
    let chis = pool(a.common.threads)?.install(|| {
        (0..axis.points)
            .into_par_iter()
            .map(|i| point.chi(ghz_to_rad_ns(axis.value(i)), &r.scale))
            .collect::<crate::Result<Vec<_>>>()
    })?;
    let mut rows: Vec<Vec<Cell>> = chis
        .iter()
        .enumerate()
        .map(|(i, c)| {
            vec![
                Cell::Num(axis.value(i) / delta_scale),
                Cell::Num(c.chi_re),
                Cell::Num(c.chi_im),
            ]
        })
        .collect();
    if a.common.normalize == Some(Normalize::Max) {
        normalize_max(&mut rows, &[1, 2]);
    }
    let columns = vec![delta_col, "chi_re".into(), "chi_im".into()];
    emit_table(&a.common, &r.echo, &columns, &rows)
}

fn map_cell(
    r: &Resolved,
    a1: (AxisKind, f64),
    a2: (AxisKind, f64),
    delta_default: f64,
    output: MapOutput,
) -> crate::Result<Cell> {
    let mut omega_q = r.params.omega_q;
    let mut omega_c = r.omega_c_rabi;
    let mut delta = delta_default;
    for (kind, v) in [a1, a2] {
        let w = ghz_to_rad_ns(v);
        match kind {
            AxisKind::Delta => delta = w,
            AxisKind::OmegaQ => omega_q = w,
            AxisKind::OmegaCRabi => omega_c = w,
        }
    }
    let point = r.point_at(omega_q, omega_c)?;
    Ok(match output {
        MapOutput::ChiRe => Cell::Num(point.chi(delta, &r.scale)?.chi_re),
        MapOutput::ChiIm => Cell::Num(point.chi(delta, &r.scale)?.chi_im),
        MapOutput::Regime => {
            let opts = ClassifyOptions {
                scale: r.scale,
                ..Default::default()
            };
            Cell::Text(classify_regime(&point, &opts)?.regime.to_string())
        }
    })
}

pub fn map(a: MapArgs) -> Result<(), CliError> {
    let r = resolve(&a.common, &a.params, DefaultProbe::Weak)?;
    let (dlo, dhi) = r.preset.delta_range_ghz;
    let (wlo, whi) = r.preset.omega_q_range_ghz;
    let axis1 = match &a.axis1 {
        Some(s) => Axis::parse(s)?,
        None => Axis::new(AxisKind::Delta, dlo, dhi, 201)?,
    };
    let axis2 = match &a.axis2 {
        Some(s) => Axis::parse(s)?,
        None => Axis::new(AxisKind::OmegaQ, wlo, whi, 81)?,
    };
    if axis1.kind == axis2.kind {
        return Err(CliError::invalid("invalid-parameter: axis2: must differ from axis1"));
    }
    let output = a.output.unwrap_or_default();
    let delta_default = ghz_to_rad_ns(a.delta_ghz.unwrap_or(0.0));
    let scale_for = |k: AxisKind| match k {
        AxisKind::Delta => a.delta_scale_ghz,
        AxisKind::OmegaQ => a.wq_scale_ghz,
        AxisKind::OmegaCRabi => None,
    };
    let (c1, s1) = scaled_column(axis1.kind, scale_for(axis1.kind))?;
    let (c2, s2) = scaled_column(axis2.kind, scale_for(axis2.kind))?;
    let n2 = axis2.points;
    let cells = pool(a.common.threads)?.install(|| {
        (0..axis1.points * n2)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n2, k % n2);
                map_cell(
                    &r,
                    (axis1.kind, axis1.value(i)),
                    (axis2.kind, axis2.value(j)),
                    delta_default,
                    output,
                )
            })
            .collect::<crate::Result<Vec<_>>>()
    })?;
    let mut rows: Vec<Vec<Cell>> = cells
        .into_iter()
        .enumerate()
        .map(|(k, cell)| {
            let (i, j) = (k / n2, k % n2);
            vec![Cell::Num(axis1.value(i) / s1), Cell::Num(axis2.value(j) / s2), cell]
        })
        .collect();
    if a.common.normalize == Some(Normalize::Max) {
        normalize_max(&mut rows, &[2]);
    }
    let value_col = match output {
        MapOutput::ChiRe => "chi_re",
        MapOutput::ChiIm => "chi_im",
        MapOutput::Regime => "regime",
    };
    emit_table(&a.common, &r.echo, &[c1, c2, value_col.to_string()], &rows)
}

#[derive(Debug, Serialize)]
struct NumericReport {
    status: &'static str,
    bracket_lo_ghz: f64,
    bracket_hi_ghz: f64,
    tol_ghz: f64,
    regime_at_lo: Regime,
    regime_at_hi: Regime,
    switching_ghz: Option<f64>,
}

#[derive(Debug, Serialize)]
struct CriticalReport {
    parameters: EffectiveParams,
    ln_f_factor: f64,
    f_factor: Option<f64>,
    lambda_c_minus_ghz: f64,
    lambda_c_plus_ghz: f64,
    large_f_limit_minus_ghz: f64,
    large_f_limit_plus_ghz: f64,
    numeric: Option<NumericReport>,
}

pub fn critical(a: CriticalArgs) -> Result<(), CliError> {
    let r = resolve(&a.common, &a.params, DefaultProbe::Weak)?;
    let crit = critical_spacings(&r.noise, r.omega_c_rabi, &r.params)?;
    let (w0, eta) = (r.echo.w0_ghz, r.echo.eta_ghz);
    let mut report = CriticalReport {
        parameters: r.echo.clone(),
        ln_f_factor: crit.ln_f,
        f_factor: f_factor(&r.noise, r.omega_c_rabi).ok(),
        lambda_c_minus_ghz: rad_ns_to_ghz(crit.lambda_minus),
        lambda_c_plus_ghz: rad_ns_to_ghz(crit.lambda_plus),
        large_f_limit_minus_ghz: 0.5 * (w0 - 2.0 * eta),
        large_f_limit_plus_ghz: 0.5 * (w0 + 2.0 * eta),
        numeric: None,
    };
    let mut failure = None;
    if !a.analytic_only {
        let lo = a.bracket_lo_ghz.unwrap_or(0.5 * w0 - 3.0 * eta);
        let hi = a.bracket_hi_ghz.unwrap_or(0.5 * w0);
        let tol = a.tol_ghz.unwrap_or(1e-5);
        if !(lo < hi && tol > 0.0) {
            return Err(CliError::invalid(
                "invalid-parameter: bracket: need lo < hi and tol > 0",
            ));
        }
        let opts = ClassifyOptions {
            points: a.points.unwrap_or(DEFAULT_GRID_POINTS),
            scale: r.scale,
            ..Default::default()
        };
        let build = |wq: f64| r.point_at(wq, r.omega_c_rabi);
        let regime_at = |wq_ghz: f64| -> Result<Regime, CliError> {
            Ok(classify_regime(&build(ghz_to_rad_ns(wq_ghz))?, &opts)?.regime)
        };
        let (ra, rb) = (regime_at(lo)?, regime_at(hi)?);
        let found = numeric_switching(build, ghz_to_rad_ns(lo), ghz_to_rad_ns(hi), &opts, ghz_to_rad_ns(tol));
        let switching_ghz = match found {
            Ok(w) => Some(rad_ns_to_ghz(w)),
            Err(e @ crate::Error::NoBracket { .. }) => {
                failure = Some(CliError::from(e));
                None
            }
            Err(e) => return Err(e.into()),
        };
        report.numeric = Some(NumericReport {
            status: if switching_ghz.is_some() { "found" } else { "no-bracket" },
            bracket_lo_ghz: lo,
            bracket_hi_ghz: hi,
            tol_ghz: tol,
            regime_at_lo: ra,
            regime_at_hi: rb,
            switching_ghz,
        });
    }
    emit_json(&a.common, &report)?;
    match failure {
        Some(e) => Err(CliError {
            code: EXIT_NO_BRACKET,
            message: e.message,
        }),
        None => Ok(()),
    }
}

#[derive(Debug, Serialize)]
struct TrapReport {
    parameters: EffectiveParams,
    trapping_wq_ghz: f64,
    simulated_wq_ghz: f64,
    initial: InitialArg,
    t_max_ns: f64,
    dt_ns: f64,
    max_rho_11: f64,
}

pub fn trap(a: TrapArgs) -> Result<(), CliError> {
    let mut r = resolve(&a.common, &a.params, DefaultProbe::EqualToControl)?;
    let drives = DriveFields::new(r.omega_p_rabi, r.omega_c_rabi, 0.0, 0.0)?;
    let base = r.params;
    let trapping_wq = trapping_spacing(&drives, &base)?;
    let params = if r.wq_explicit {
        base
    } else {
        r.echo.wq_ghz = rad_ns_to_ghz(trapping_wq);
        base.with_omega_q(trapping_wq)
    };
    params.validate()?;
    let model = bloch::resonant_model(&drives, &params)?;
    let t_max = a.t_max_ns.unwrap_or(1e3 / r.omega_p_rabi);
    let dt = a.dt_ns.unwrap_or(0.05 / model.fastest_scale());
    let config = IntegrationConfig::new(t_max, dt, 1)?;
    let initial = a.initial.unwrap_or(InitialArg::Dark);
    let start = match initial {
        InitialArg::Dark => DensityState::dark(),
        InitialArg::Ground => DensityState::ground(),
    };
    let max_rho_11 = bloch::max_excited_population(start, &drives, &params, &config)?;
    emit_json(
        &a.common,
        &TrapReport {
            parameters: r.echo,
            trapping_wq_ghz: rad_ns_to_ghz(trapping_wq),
            simulated_wq_ghz: rad_ns_to_ghz(params.omega_q),
            initial,
            t_max_ns: t_max,
            dt_ns: dt,
            max_rho_11,
        },
    )
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct BlochEcho {
    #[serde(flatten)]
    params: EffectiveParams,
    delta_ghz: f64,
    frame: FrameArg,
    initial: InitialArg,
    t_max_ns: f64,
    dt_ns: f64,
    stride: usize,
    // the rates actually used, as overrides so the echo replays the run
    gamma_mu: f64,
    gamma_nu: f64,
    gamma_1: f64,
    gamma_mu1: f64,
    gamma_nu1: f64,
    gamma_munu: f64,
}

pub fn bloch(a: BlochArgs) -> Result<(), CliError> {
    let r = resolve(&a.common, &a.params, DefaultProbe::Weak)?;
    let delta_ghz = a.delta_ghz.unwrap_or(0.0);
    let drives = r.drives(&r.params, r.omega_c_rabi, ghz_to_rad_ns(delta_ghz))?;
    let frame_arg = a.frame.unwrap_or_default();
    let frame = match frame_arg {
        FrameArg::Lab => Frame::Lab,
        FrameArg::Rotating => Frame::Rotating,
    };
    let mut model = BlochModel::new(&r.params, drives, DressedRates::default(), frame)?;
    let mut rates = if a.zero_rates {
        DressedRates::default()
    } else {
        dressed_rates(&r.noise, model.system.theta0, model.system.theta1)
    };
    if a.no_population_decay {
        rates = rates.without_population_decay();
    }
    let overrides = [
        (a.gamma_mu, &mut rates.gamma_mu),
        (a.gamma_nu, &mut rates.gamma_nu),
        (a.gamma_1, &mut rates.gamma_1),
        (a.gamma_mu1, &mut rates.gamma_mu1),
        (a.gamma_nu1, &mut rates.gamma_nu1),
        (a.gamma_munu, &mut rates.gamma_munu),
    ];
    for (v, slot) in overrides {
        if let Some(v) = v {
            if !v.is_finite() {
                return Err(CliError::invalid(
                    "invalid-parameter: gamma: rate overrides must be finite",
                ));
            }
            *slot = v;
        }
    }
    model.rates = rates;

    let t_max = a.t_max_ns.unwrap_or(1000.0);
    let fastest = model.fastest_scale();
    let dt = a.dt_ns.unwrap_or(if fastest > 0.0 {
        0.05 / fastest
    } else {
        t_max.max(1.0) / 1000.0
    });
    let probe = IntegrationConfig::new(t_max, dt, 1)?;
    let stride = a.stride.unwrap_or_else(|| probe.steps().div_ceil(2000).max(1));
    let config = IntegrationConfig::new(t_max, dt, stride)?;
    let initial = a.initial.unwrap_or_default();
    let start = match initial {
        InitialArg::Ground => DensityState::ground(),
        InitialArg::Dark => DensityState::dark(),
    };
    let samples = bloch::integrate(start, &config, &model)?;
    let rows: Vec<Vec<Cell>> = samples
        .iter()
        .map(|s| {
            let st = &s.state;
            [
                s.t,
                st.rho_mumu,
                st.rho_nunu,
                st.rho_11,
                st.rho_mu1.re,
                st.rho_mu1.im,
                st.rho_nu1.re,
                st.rho_nu1.im,
                st.rho_munu.re,
                st.rho_munu.im,
            ]
            .into_iter()
            .map(Cell::Num)
            .collect()
        })
        .collect();
    let columns: Vec<String> = [
        "t_ns", "rho_mumu", "rho_nunu", "rho_11", "re_mu1", "im_mu1", "re_nu1", "im_nu1", "re_munu", "im_munu",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    let echo = BlochEcho {
        params: r.echo,
        delta_ghz,
        frame: frame_arg,
        initial,
        t_max_ns: t_max,
        dt_ns: dt,
        stride,
        gamma_mu: rates.gamma_mu,
        gamma_nu: rates.gamma_nu,
        gamma_1: rates.gamma_1,
        gamma_mu1: rates.gamma_mu1,
        gamma_nu1: rates.gamma_nu1,
        gamma_munu: rates.gamma_munu,
    };
    emit_table(&a.common, &echo, &columns, &rows)
}

pub fn presets(a: PresetsArgs) -> Result<(), CliError> {
    let columns: Vec<String> = [
        "name",
        "omega_0_ghz",
        "eta_ghz",
        "t1_ns",
        "t2_ns",
        "temperature_mk",
        "omega_c_rabi_ghz",
        "omega_q_min_ghz",
        "omega_q_max_ghz",
        "delta_min_ghz",
        "delta_max_ghz",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    match a.common.format.unwrap_or_default() {
        super::Format::Csv => {
            // the decimal strings verbatim
            let rows: Vec<Vec<Cell>> = PRESET_TABLE
                .iter()
                .map(|(n, v)| {
                    std::iter::once(n)
                        .chain(v.iter())
                        .map(|s| Cell::Text(s.to_string()))
                        .collect()
                })
                .collect();
            emit_table(&a.common, &(), &columns, &rows)
        }
        super::Format::Json => emit_json(&a.common, &QubitPreset::all()),
    }
}
