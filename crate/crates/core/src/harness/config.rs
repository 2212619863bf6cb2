//! Plain-text scenario configuration.
//!
//! One `section.key = value` per line; `#` starts a comment. Physical
//! quantities accept a unit suffix and are converted to linear SI units here:
//!
//! ```text
//! # all keys are optional
//! geometry.n_tx = 64
//! hardware.p_max = -5 dBW
//! hardware.p_rf = 30 mW
//! hardware.bandwidth = 20 MHz
//! sweep.parameter = p_max
//! sweep.values = -15 dBW, -10 dBW, -5 dBW
//! ```

use std::path::Path;

use crate::baselines::Scheme;
use crate::channel::{GeometrySpec, ScenarioGeometry};
use crate::metrics::{noise_power_from_psd, EavesFormula, HardwareProfile};
use crate::optimizer::SolverParams;
use crate::{Error, Result};

use super::sweep::{SweepSpec, SweptParameter};

/// Everything a config file describes, before geometry validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: GeometrySpec,
    pub hardware: HardwareProfile,
    pub solver: SolverParams,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            geometry: GeometrySpec::default(),
            hardware: HardwareProfile::default(),
            solver: SolverParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Count,
    Real,
    Power,
    Frequency,
    Decibel,
    Distance,
    Psd,
    Rate,
    Flag,
    Text,
}

/// Parse a number with an optional unit suffix into the linear SI value.
fn parse_quantity(text: &str, unit: Unit) -> std::result::Result<f64, String> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(i, c)| {
            c.is_ascii_alphabetic()
                && !((c == 'e' || c == 'E')
                    && text[i + 1..].starts_with(|d: char| d.is_ascii_digit() || d == '-' || d == '+'))
        })
        .map_or(text.len(), |(i, _)| i);
    let (num, suffix) = text.split_at(split);
    let num: f64 = num.trim().parse().map_err(|_| format!("`{text}` is not a number"))?;
    if !num.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    let suffix = suffix.trim();
    let db = |x: f64| 10f64.powf(x / 10.0);
    let value = match (unit, suffix) {
        (_, "") => num,
        (Unit::Power, "W") => num,
        (Unit::Power, "mW") => num * 1e-3,
        (Unit::Power, "dBW") => db(num),
        (Unit::Power, "dBm") => db(num) * 1e-3,
        (Unit::Frequency, "Hz") => num,
        (Unit::Frequency, "kHz") => num * 1e3,
        (Unit::Frequency, "MHz") => num * 1e6,
        (Unit::Frequency, "GHz") => num * 1e9,
        (Unit::Decibel, "dB") => num,
        (Unit::Distance, "m") => num,
        (Unit::Distance, "km") => num * 1e3,
        (Unit::Psd, "dBm/Hz") => num,
        (Unit::Psd, "dBW/Hz") => num + 30.0,
        (Unit::Rate, "bit/s/Hz") => num,
        _ => return Err(format!("unit `{suffix}` not accepted here")),
    };
    Ok(value)
}

fn parse_count(text: &str) -> std::result::Result<usize, String> {
    text.trim().parse().map_err(|_| format!("`{}` is not a nonnegative integer", text.trim()))
}

fn parse_flag(text: &str) -> std::result::Result<bool, String> {
    match text.trim() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

const KEYS: &[(&str, Unit)] = &[
    ("geometry.n_tx", Unit::Count),
    ("geometry.n_rf", Unit::Count),
    ("geometry.k", Unit::Count),
    ("geometry.m", Unit::Count),
    ("geometry.target", Unit::Count),
    ("geometry.actuator_distance", Unit::Distance),
    ("geometry.eaves_distance", Unit::Distance),
    ("geometry.path_loss_exponent", Unit::Real),
    ("geometry.shadowing_std", Unit::Decibel),
    ("geometry.shadowing", Unit::Flag),
    ("geometry.shared_shadowing", Unit::Flag),
    ("geometry.strong_eavesdropper", Unit::Flag),
    ("hardware.p_max", Unit::Power),
    ("hardware.min_secrecy", Unit::Rate),
    ("hardware.p_constant", Unit::Power),
    ("hardware.p_rf", Unit::Power),
    ("hardware.p_ps", Unit::Power),
    ("hardware.alpha", Unit::Real),
    ("hardware.noise_psd", Unit::Psd),
    ("hardware.noise_power", Unit::Power),
    ("hardware.bandwidth", Unit::Frequency),
    ("hardware.eaves_formula", Unit::Text),
    ("solver.dinkelbach_tol", Unit::Real),
    ("solver.max_dinkelbach_iters", Unit::Count),
    ("solver.penalty_init", Unit::Real),
    ("solver.penalty_growth", Unit::Real),
    ("solver.penalty_tol", Unit::Real),
    ("solver.penalty_max_iters", Unit::Count),
    ("solver.alternate_tol", Unit::Real),
    ("solver.alternate_max_iters", Unit::Count),
    ("solver.aux_t", Unit::Rate),
    ("solver.dc_tol", Unit::Real),
    ("solver.dc_max_iters", Unit::Count),
    ("solver.pg_max_iters", Unit::Count),
    ("solver.max_backtracks", Unit::Count),
    ("solver.eta_init", Unit::Real),
    ("sweep.parameter", Unit::Text),
    ("sweep.values", Unit::Text),
    ("sweep.trials", Unit::Count),
    ("sweep.schemes", Unit::Text),
    ("sweep.seed", Unit::Count),
];

/// Parsed config file.
#[derive(Debug, Clone)]
pub struct Config {
    pub scenario: Scenario,
    pub sweep: SweepSpec,
}

impl Config {
    /// Validated geometry of the base scenario.
    pub fn geometry(&self) -> Result<ScenarioGeometry> {
        ScenarioGeometry::new(self.scenario.geometry.clone())
    }
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<(ScenarioGeometry, HardwareProfile, SolverParams, SweepSpec)> {
    let config = parse_config_str(&std::fs::read_to_string(path)?)?;
    let geometry = config.geometry()?;
    Ok((geometry, config.scenario.hardware, config.scenario.solver, config.sweep))
}

/// Parse and validate config text. Unknown keys and invariant violations are
/// errors naming the key or invariant.
pub fn parse_config_str(text: &str) -> Result<Config> {
    let mut scenario = Scenario::default();
    let mut sweep = SweepSpec::default();
    let mut noise_psd = None;
    let mut noise_power = None;
    let mut sweep_values: Option<(usize, String)> = None;
    let mut seen = std::collections::HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Config { line, message };
        let (key, value) =
            content.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let &(_, unit) = KEYS.iter().find(|(k, _)| *k == key).ok_or_else(|| err(format!("unknown key `{key}`")))?;
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        let num = || parse_quantity(value, unit).map_err(|m| err(format!("{key}: {m}")));
        let count = || parse_count(value).map_err(|m| err(format!("{key}: {m}")));
        let flag = || parse_flag(value).map_err(|m| err(format!("{key}: {m}")));
        let g = &mut scenario.geometry;
        let h = &mut scenario.hardware;
        let s = &mut scenario.solver;
        match key {
            "geometry.n_tx" => g.dims.n_tx = count()?,
            "geometry.n_rf" => g.dims.n_rf = count()?,
            "geometry.k" => g.dims.k = count()?,
            "geometry.m" => g.dims.m = count()?,
            "geometry.target" => g.dims.target = count()?,
            "geometry.actuator_distance" => {
                g.actuator_distances = value
                    .split(',')
                    .map(|v| parse_quantity(v, unit).map_err(|m| err(format!("{key}: {m}"))))
                    .collect::<Result<_>>()?
            }
            "geometry.eaves_distance" => g.eaves_distance = num()?,
            "geometry.path_loss_exponent" => g.path_loss_exponent = num()?,
            "geometry.shadowing_std" => g.shadowing_std_db = num()?,
            "geometry.shadowing" => g.shadowing_enabled = flag()?,
            "geometry.shared_shadowing" => g.shared_shadowing = flag()?,
            "geometry.strong_eavesdropper" => g.strong_eavesdropper = flag()?,
            "hardware.p_max" => h.p_max = num()?,
            "hardware.min_secrecy" => h.min_secrecy = num()?,
            "hardware.p_constant" => h.p_constant = num()?,
            "hardware.p_rf" => h.p_rf_chain = num()?,
            "hardware.p_ps" => h.p_phase_shifter = num()?,
            "hardware.alpha" => h.amp_efficiency = num()?,
            "hardware.noise_psd" => noise_psd = Some(num()?),
            "hardware.noise_power" => noise_power = Some(num()?),
            "hardware.bandwidth" => h.bandwidth = num()?,
            "hardware.eaves_formula" => {
                h.eaves_formula = match value {
                    "per_actuator" => EavesFormula::PerActuator,
                    "aggregate" => EavesFormula::Aggregate,
                    other => return Err(err(format!("{key}: expected `per_actuator` or `aggregate`, got `{other}`"))),
                }
            }
            "solver.dinkelbach_tol" => s.dinkelbach_tol = num()?,
            "solver.max_dinkelbach_iters" => s.max_dinkelbach_iters = count()?,
            "solver.penalty_init" => s.penalty_init = num()?,
            "solver.penalty_growth" => s.penalty_growth = num()?,
            "solver.penalty_tol" => s.penalty_tol = num()?,
            "solver.penalty_max_iters" => s.penalty_max_iters = count()?,
            "solver.alternate_tol" => s.alternate_tol = num()?,
            "solver.alternate_max_iters" => s.alternate_max_iters = count()?,
            "solver.aux_t" => s.aux_t = num()?,
            "solver.dc_tol" => s.dc_tol = num()?,
            "solver.dc_max_iters" => s.dc_max_iters = count()?,
            "solver.pg_max_iters" => s.pg_max_iters = count()?,
            "solver.max_backtracks" => s.max_backtracks = count()?,
            "solver.eta_init" => s.eta_init = Some(num()?),
            "sweep.parameter" => {
                sweep.parameter = value.parse().map_err(|e: Error| err(e.to_string()))?;
            }
            "sweep.values" => sweep_values = Some((line, value.to_string())),
            "sweep.trials" => sweep.trials = count()?,
            "sweep.schemes" => sweep.schemes = parse_schemes(value).map_err(|e| err(e.to_string()))?,
            "sweep.seed" => {
                sweep.root_seed = value.trim().parse().map_err(|_| err(format!("{key}: `{value}` is not a seed")))?
            }
            _ => unreachable!("key table and match arms agree"),
        }
    }

    if noise_psd.is_some() && noise_power.is_some() {
        return Err(Error::Config {
            line: 0,
            message: "set only one of hardware.noise_psd and hardware.noise_power".into(),
        });
    }
    scenario.hardware.noise_power = match (noise_power, noise_psd) {
        (Some(p), _) => p,
        (None, psd) => noise_power_from_psd(psd.unwrap_or(-174.0), scenario.hardware.bandwidth),
    };
    match sweep_values {
        Some((line, text)) => {
            sweep.values = parse_values(&text, sweep.parameter).map_err(|message| Error::Config { line, message })?;
        }
        None if seen.contains("sweep.parameter") => sweep.values = sweep.parameter.default_values(),
        None => {}
    }

    ScenarioGeometry::new(scenario.geometry.clone())?;
    scenario.hardware.validate()?;
    scenario.solver.validate()?;
    sweep.validate()?;
    Ok(Config { scenario, sweep })
}

pub fn parse_schemes(text: &str) -> Result<Vec<Scheme>> {
    text.split(',').map(str::parse).collect()
}

/// Comma-separated values in the swept parameter's unit.
pub fn parse_values(text: &str, parameter: SweptParameter) -> std::result::Result<Vec<f64>, String> {
    let unit = match parameter {
        SweptParameter::PMax => Unit::Power,
        SweptParameter::MinSecrecy => Unit::Rate,
        _ => Unit::Count,
    };
    text.split(',')
        .map(|v| match unit {
            Unit::Count => parse_count(v).map(|n| n as f64),
            u => parse_quantity(v, u),
        })
        .collect()
}
