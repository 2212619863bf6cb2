use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::baselines::{solve_scheme, Scheme};
use crate::channel::ScenarioGeometry;
use crate::optimizer::{OptimizationTrace, Status};
use crate::{Error, Result};

use super::config::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParameter {
    /// Transmit budget, watts.
    PMax,
    /// Required secrecy capacity, bit/s/Hz.
    MinSecrecy,
    NTx,
    NRf,
    K,
    M,
}

impl SweptParameter {
    /// Column label in the CSV output.
    pub fn label(self) -> &'static str {
        match self {
            SweptParameter::PMax => "p_max_w",
            SweptParameter::MinSecrecy => "min_secrecy",
            SweptParameter::NTx => "n_tx",
            SweptParameter::NRf => "n_rf",
            SweptParameter::K => "k",
            SweptParameter::M => "m",
        }
    }

    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweptParameter::PMax => [-15.0, -10.0, -5.0, 0.0, 5.0].iter().map(|d: &f64| 10f64.powf(d / 10.0)).collect(),
            SweptParameter::MinSecrecy => (1..=6).map(f64::from).collect(),
            SweptParameter::NTx => vec![60.0, 110.0, 160.0, 210.0],
            SweptParameter::NRf => vec![42.0, 50.0, 70.0, 100.0, 130.0],
            SweptParameter::K => vec![10.0, 20.0, 30.0, 40.0, 48.0],
            SweptParameter::M => vec![12.0, 20.0, 30.0, 40.0],
        }
    }

    fn is_count(self) -> bool {
        !matches!(self, SweptParameter::PMax | SweptParameter::MinSecrecy)
    }

    /// Scenario with this parameter set to `value`.
    pub fn apply(self, base: &Scenario, value: f64) -> Scenario {
        let mut s = base.clone();
        let n = value as usize;
        match self {
            SweptParameter::PMax => s.hardware.p_max = value,
            SweptParameter::MinSecrecy => s.hardware.min_secrecy = value,
            SweptParameter::NTx => s.geometry.dims.n_tx = n,
            SweptParameter::NRf => s.geometry.dims.n_rf = n,
            SweptParameter::K => s.geometry.dims.k = n,
            SweptParameter::M => s.geometry.dims.m = n,
        }
        s
    }
}

impl fmt::Display for SweptParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SweptParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "p_max" | "p_max_w" => SweptParameter::PMax,
            "min_secrecy" | "c0" => SweptParameter::MinSecrecy,
            "n_tx" => SweptParameter::NTx,
            "n_rf" => SweptParameter::NRf,
            "k" => SweptParameter::K,
            "m" => SweptParameter::M,
            other => return Err(Error::InvalidParams(format!("unknown sweep parameter `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweptParameter,
    pub values: Vec<f64>,
    pub trials: usize,
    pub schemes: Vec<Scheme>,
    pub root_seed: u64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            parameter: SweptParameter::PMax,
            values: SweptParameter::PMax.default_values(),
            trials: 200,
            schemes: Scheme::ALL.to_vec(),
            root_seed: 0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidParams("sweep needs at least one value".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials >= 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidParams("sweep needs at least one scheme".into()));
        }
        if self.parameter.is_count() && self.values.iter().any(|v| v.fract() != 0.0 || *v < 0.0) {
            return Err(Error::InvalidParams(format!("{} takes nonnegative integers", self.parameter)));
        }
        Ok(())
    }
}

/// A named sweep over one parameter with scenario adjustments.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub parameter: SweptParameter,
    /// Some values of the sweep break `M > N_RF - K`, so the check is lifted.
    pub weak_eavesdropper_allowed: bool,
    /// Antenna count for the whole sweep when the default cannot hold every value.
    pub n_tx: Option<usize>,
}

pub const PRESETS: &[Preset] = &[
    Preset { name: "fig2", parameter: SweptParameter::PMax, weak_eavesdropper_allowed: false, n_tx: None },
    Preset { name: "fig3", parameter: SweptParameter::PMax, weak_eavesdropper_allowed: false, n_tx: None },
    Preset { name: "fig4", parameter: SweptParameter::MinSecrecy, weak_eavesdropper_allowed: false, n_tx: None },
    Preset { name: "fig5", parameter: SweptParameter::NTx, weak_eavesdropper_allowed: false, n_tx: None },
    Preset { name: "fig6", parameter: SweptParameter::NRf, weak_eavesdropper_allowed: true, n_tx: Some(210) },
    Preset { name: "fig7k", parameter: SweptParameter::K, weak_eavesdropper_allowed: true, n_tx: None },
    Preset { name: "fig7m", parameter: SweptParameter::M, weak_eavesdropper_allowed: false, n_tx: None },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    /// Sweep over the preset's values, keeping trials, schemes and seed from
    /// `base`.
    pub fn sweep(&self, base: &SweepSpec) -> SweepSpec {
        SweepSpec { parameter: self.parameter, values: self.parameter.default_values(), ..base.clone() }
    }

    pub fn scenario(&self, base: &Scenario) -> Scenario {
        let mut s = base.clone();
        if self.weak_eavesdropper_allowed {
            s.geometry.strong_eavesdropper = false;
        }
        if let Some(n) = self.n_tx {
            s.geometry.dims.n_tx = n;
        }
        s
    }
}

/// Aggregate over the trials of one `(scheme, value)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub value: f64,
    pub mean_ee: f64,
    pub se_ee: f64,
    pub mean_secrecy: f64,
    pub se_secrecy: f64,
    pub trials: usize,
    pub infeasible: usize,
    pub iters_dinkelbach: f64,
    pub iters_penalty: f64,
    pub iters_alternate: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub parameter: SweptParameter,
    /// Ordered by scheme as given in the spec, then by value.
    pub rows: Vec<SweepRow>,
    /// One trace per `(scheme, value)` point, labelled `SCHEME:index`.
    pub traces: Vec<(String, OptimizationTrace)>,
}

impl SweepResult {
    pub fn row(&self, scheme: Scheme, value_index: usize) -> Option<&SweepRow> {
        self.rows.iter().filter(|r| r.scheme == scheme).nth(value_index)
    }

    /// Mean secure EE per value for one scheme.
    pub fn ee_curve(&self, scheme: Scheme) -> Vec<f64> {
        self.rows.iter().filter(|r| r.scheme == scheme).map(|r| r.mean_ee).collect()
    }

    pub fn all_infeasible(&self) -> bool {
        self.rows.iter().all(|r| r.infeasible == r.trials)
    }
}

struct TrialOutcome {
    ee: f64,
    secrecy: f64,
    iters: [usize; 3],
}

/// Sample mean and standard error of the mean.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    if xs.iter().all(|&x| x == xs[0]) {
        return (xs[0], 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Run every scheme at every value for the configured number of trials.
///
/// Geometry invariants are checked for all values before any solve. The
/// closed-form objective does not depend on the channel draw, so one solve per
/// `(scheme, value)` serves all of its trials and the standard errors are zero.
/// Channel-level quantities per trial use `trial_seed(root_seed, value_index,
/// trial_index)`; see the `exact_vs_closed_form` example.
pub fn run_sweep(spec: &SweepSpec, base: &Scenario) -> Result<SweepResult> {
    spec.validate()?;
    let scenarios: Vec<(Scenario, ScenarioGeometry)> = spec
        .values
        .iter()
        .map(|&v| {
            let s = spec.parameter.apply(base, v);
            let g = ScenarioGeometry::new(s.geometry.clone()).map_err(|e| match e {
                Error::InvalidGeometry(m) => Error::InvalidGeometry(format!("{} = {v}: {m}", spec.parameter)),
                other => other,
            })?;
            s.hardware.validate()?;
            Ok((s, g))
        })
        .collect::<Result<_>>()?;

    let points: Vec<(Scheme, usize)> =
        spec.schemes.iter().flat_map(|&sc| (0..spec.values.len()).map(move |i| (sc, i))).collect();

    let solved: Vec<(Option<TrialOutcome>, OptimizationTrace)> = points
        .par_iter()
        .map(|&(scheme, i)| {
            let (scenario, geometry) = &scenarios[i];
            match solve_scheme(&scheme.spec(), geometry, &scenario.hardware, &scenario.solver) {
                Ok(r) => {
                    let t = &r.trace;
                    let outcome = (r.status != Status::Infeasible).then(|| TrialOutcome {
                        ee: r.eta,
                        secrecy: r.secrecy,
                        iters: [t.dinkelbach_iters, t.penalty_steps, t.alternate_sweeps],
                    });
                    Ok((outcome, r.trace))
                }
                Err(Error::InfeasibleApproximation(_)) => Ok((None, OptimizationTrace::default())),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(points.len());
    let mut traces = Vec::with_capacity(points.len());
    for (&(scheme, i), (outcome, trace)) in points.iter().zip(solved) {
        let feasible: Vec<&TrialOutcome> = std::iter::repeat_n(outcome.as_ref(), spec.trials).flatten().collect();
        let (mean_ee, se_ee) = mean_se(&feasible.iter().map(|o| o.ee).collect::<Vec<_>>());
        let (mean_secrecy, se_secrecy) = mean_se(&feasible.iter().map(|o| o.secrecy).collect::<Vec<_>>());
        let iter_mean = |j: usize| {
            if feasible.is_empty() {
                0.0
            } else {
                feasible.iter().map(|o| o.iters[j] as f64).sum::<f64>() / feasible.len() as f64
            }
        };
        rows.push(SweepRow {
            scheme,
            value: spec.values[i],
            mean_ee,
            se_ee,
            mean_secrecy,
            se_secrecy,
            trials: spec.trials,
            infeasible: spec.trials - feasible.len(),
            iters_dinkelbach: iter_mean(0),
            iters_penalty: iter_mean(1),
            iters_alternate: iter_mean(2),
        });
        traces.push((format!("{scheme}:{i}"), trace));
    }
    Ok(SweepResult { parameter: spec.parameter, rows, traces })
}
