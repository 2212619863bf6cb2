//! Secure-EE power allocation.
//!
//! Three nested loops:
//!
//! 1. a Dinkelbach iteration on the ratio `W C_sec / P_total`,
//! 2. a penalty loop with weights `omega_0, mu omega_0, ...` on the
//!    eavesdropper term,
//! 3. an alternate search over the actuator powers, the artificial-noise power
//!    and both jointly, each step solved by the convex-concave procedure.
//!
//! All three work on the closed-form metrics, so the result depends on the
//! scenario dimensions and hardware profile but not on a channel draw.
//!
//! The relaxed feasible set carries an auxiliary level `t >= 0` that bounds
//! the eavesdropper term from below, `C_E >= -t`. With a strong eavesdropper
//! (`M > N_RF - K`) that term is negative, and `t = 0` forces `S = 0`; the
//! default is therefore `t = 1`.

mod dc;
mod objective;
mod trace;

pub use dc::{project_band, project_capped_cone, project_halfspace, project_simplex, projected_gradient, PgOutcome};
pub use objective::{dinkelbach_objective, eta_update, gamma1, gamma2, Block};
pub use trace::{OptimizationTrace, TraceEvent, TRACE_HEADER};

use crate::channel::{ArrayDims, ScenarioGeometry};
use crate::metrics::{HardwareProfile, PowerAllocation};
use crate::{Error, Result};

use dc::{ccp, max_abs_diff, DcSettings};
use objective::{from_vec, to_vec, Problem, AN_FLOOR};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    /// Ratio-loop residual tolerance per unit bandwidth, bit/s/Hz.
    pub dinkelbach_tol: f64,
    pub max_dinkelbach_iters: usize,
    pub penalty_init: f64,
    pub penalty_growth: f64,
    pub penalty_tol: f64,
    pub penalty_max_iters: usize,
    /// Alternate-search tolerance on the objective change per unit bandwidth.
    pub alternate_tol: f64,
    pub alternate_max_iters: usize,
    /// Auxiliary level `t` in bit/s/Hz.
    pub aux_t: f64,
    /// Convex-concave step tolerance, relative to `P_max`.
    pub dc_tol: f64,
    pub dc_max_iters: usize,
    pub pg_max_iters: usize,
    pub max_backtracks: usize,
    /// Starting ratio parameter; `None` takes the secure EE of the start point.
    pub eta_init: Option<f64>,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            dinkelbach_tol: 1e-4,
            max_dinkelbach_iters: 50,
            penalty_init: 1.0,
            penalty_growth: 10.0,
            penalty_tol: 1e-3,
            penalty_max_iters: 20,
            alternate_tol: 1e-3,
            alternate_max_iters: 50,
            aux_t: 1.0,
            dc_tol: 1e-6,
            dc_max_iters: 100,
            pg_max_iters: 2000,
            max_backtracks: 60,
            eta_init: None,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParams(what.into()));
        let tols = [self.dinkelbach_tol, self.penalty_tol, self.alternate_tol, self.aux_t];
        if tols.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return bad("tolerances and t must be finite and >= 0");
        }
        if !(self.penalty_init > 0.0) {
            return bad("omega_0 > 0");
        }
        if !(self.penalty_growth > 1.0) {
            return bad("mu > 1");
        }
        if !(self.dc_tol > 0.0) {
            return bad("DC tolerance > 0");
        }
        if self.penalty_max_iters == 0 || self.alternate_max_iters == 0 {
            return bad("J >= 1 and J' >= 1");
        }
        if self.max_dinkelbach_iters == 0 || self.dc_max_iters == 0 || self.pg_max_iters == 0 {
            return bad("iteration caps >= 1");
        }
        Ok(())
    }

    fn dc_settings(&self) -> DcSettings {
        DcSettings {
            tol: self.dc_tol,
            max_iters: self.dc_max_iters,
            pg_max_iters: self.pg_max_iters,
            max_backtracks: self.max_backtracks,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIters,
    /// No allocation in the budget reaches the secrecy requirement.
    Infeasible,
}

/// What the outer layer maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    SecureEe,
    /// Secrecy capacity alone; skips the ratio loop.
    SecrecyCapacity,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub allocation: PowerAllocation,
    /// Secure EE at the allocation, bit/J.
    pub eta: f64,
    /// Secrecy lower bound at the allocation, bit/s/Hz.
    pub secrecy: f64,
    pub trace: OptimizationTrace,
    pub status: Status,
}

/// Maximize the secure EE for the scenario.
pub fn solve(
    geometry: &ScenarioGeometry,
    hw: &HardwareProfile,
    params: &SolverParams,
    warm_start: Option<&PowerAllocation>,
) -> Result<SolveResult> {
    solve_with_objective(geometry.dims(), hw, params, warm_start, Objective::SecureEe)
}

pub fn solve_with_objective(
    dims: &ArrayDims,
    hw: &HardwareProfile,
    params: &SolverParams,
    warm_start: Option<&PowerAllocation>,
    objective: Objective,
) -> Result<SolveResult> {
    let problem = Problem::new(dims, hw, params)?;
    let mut trace = OptimizationTrace::default();
    let probe = feasibility_probe(&problem);
    if !probe.feasible {
        return Ok(finish(&problem, probe.x, trace, Status::Infeasible));
    }
    let x0 = warm_start
        .filter(|w| w.signal.len() == problem.k)
        .map(to_vec)
        .filter(|x| problem.in_relaxed_set(x))
        .unwrap_or_else(|| initial_point(&problem, &probe.x));

    let (x, status) = match objective {
        Objective::SecrecyCapacity => {
            let out = penalty_loop(&problem, params, 0.0, &x0, 0, &mut trace);
            // keep the start when the penalty run lost secrecy, as the ratio loop does
            let secrecy = |x: &[f64]| problem.secrecy(x).unwrap_or(0.0);
            let x = if secrecy(&out.x) >= secrecy(&x0) { out.x } else { x0 };
            (x, Status::Converged)
        }
        Objective::SecureEe => dinkelbach(&problem, params, &x0, &mut trace),
    };
    Ok(finish(&problem, x, trace, status))
}

fn finish(problem: &Problem, mut x: Vec<f64>, trace: OptimizationTrace, status: Status) -> SolveResult {
    let total: f64 = x.iter().sum();
    if total > problem.p_max {
        x.iter_mut().for_each(|v| *v *= problem.p_max / total);
    }
    let secrecy = problem.secrecy(&x).unwrap_or(0.0);
    let eta = problem.bandwidth * secrecy / problem.total_power(&x);
    let status = if meets_requirement(secrecy, problem.min_secrecy) { status } else { Status::Infeasible };
    SolveResult { allocation: from_vec(&x), eta, secrecy, trace, status }
}

fn dinkelbach(
    problem: &Problem,
    params: &SolverParams,
    x0: &[f64],
    trace: &mut OptimizationTrace,
) -> (Vec<f64>, Status) {
    let tol = params.dinkelbach_tol * problem.bandwidth;
    let mut best = x0.to_vec();
    let mut eta = params.eta_init.unwrap_or_else(|| problem.ee(x0).unwrap_or(0.0));
    for iter in 0..params.max_dinkelbach_iters {
        let out = penalty_loop(problem, params, eta, &best, iter, trace);
        let ratio_value = |x: &[f64]| {
            problem.secrecy(x).map_or(f64::NEG_INFINITY, |s| problem.bandwidth * s - eta * problem.total_power(x))
        };
        let candidate = ratio_value(&out.x);
        // the kept point is feasible for this subproblem too
        let value = candidate.max(ratio_value(&best));
        trace.dinkelbach_iters += 1;
        trace.events.push(TraceEvent::Dinkelbach { iter, eta, objective: value, residual: value.abs() });
        if candidate <= 0.0 {
            return (best, Status::Converged);
        }
        best = out.x;
        if candidate <= tol {
            return (best, Status::Converged);
        }
        eta = problem.ee(&best).unwrap_or(eta);
    }
    (best, Status::MaxIters)
}

/// Relative slack on the secrecy requirement; the EE optimum sits on it when
/// the requirement binds.
const REQUIREMENT_SLACK: f64 = 1e-9;

fn meets_requirement(secrecy: f64, min_secrecy: f64) -> bool {
    secrecy > min_secrecy - REQUIREMENT_SLACK * min_secrecy.max(1.0)
}

struct PenaltyRun {
    x: Vec<f64>,
    omega: f64,
    violation: f64,
}

fn penalty_loop(
    problem: &Problem,
    params: &SolverParams,
    eta: f64,
    start: &[f64],
    iter: usize,
    trace: &mut OptimizationTrace,
) -> PenaltyRun {
    let mut omega = params.penalty_init;
    let mut x = start.to_vec();
    for step in 0..params.penalty_max_iters {
        x = alternate_loop(problem, params, eta, omega, &x, (iter, step), trace).x;
        let violation = (problem.min_secrecy - problem.secrecy(&x).unwrap_or(0.0)).max(0.0);
        trace.penalty_steps += 1;
        trace.events.push(TraceEvent::Penalty { iter, step, omega, violation });
        if omega * violation <= params.penalty_tol || step + 1 >= params.penalty_max_iters {
            return PenaltyRun { x, omega, violation };
        }
        omega *= params.penalty_growth;
    }
    unreachable!("penalty loop returns on its last step")
}

struct AlternateRun {
    x: Vec<f64>,
    sweeps: usize,
    converged: bool,
    stalled: bool,
}

fn alternate_loop(
    problem: &Problem,
    params: &SolverParams,
    eta: f64,
    omega: f64,
    start: &[f64],
    (iter, step): (usize, usize),
    trace: &mut OptimizationTrace,
) -> AlternateRun {
    let settings = params.dc_settings();
    let mut x = start.to_vec();
    let Some(mut value) = problem.penalized(&x, eta, omega) else {
        return AlternateRun { x, sweeps: 0, converged: false, stalled: true };
    };
    let mut stalled = false;
    for sweep in 0..params.alternate_max_iters {
        for block in [Block::Signal, Block::ArtificialNoise, Block::Joint] {
            let out = ccp(problem, block, eta, omega, &x, &settings);
            trace.dc_iters += out.iters;
            trace.pg_iters += out.pg_iters;
            if out.stalled {
                trace.line_search_stalls += 1;
                stalled = true;
            }
            x = out.x;
        }
        let next = problem.penalized(&x, eta, omega).expect("iterates stay feasible");
        let upsilon = next - value;
        value = next;
        trace.alternate_sweeps += 1;
        trace.events.push(TraceEvent::Alternate { iter, step, sweep, objective: value, upsilon });
        if upsilon.abs() / problem.bandwidth <= params.alternate_tol {
            return AlternateRun { x, sweeps: sweep + 1, converged: true, stalled };
        }
    }
    AlternateRun { x, sweeps: params.alternate_max_iters, converged: false, stalled }
}

struct Probe {
    x: Vec<f64>,
    feasible: bool,
}

const PROBE_GRID: usize = 400;

/// Scan budget-saturating equal splits for the largest secrecy inside the
/// relaxed set. With a negative eavesdropper coefficient the point where the
/// `C_E >= -t` bound meets the budget is checked exactly.
fn feasibility_probe(problem: &Problem) -> Probe {
    let k = problem.k;
    let p_max = problem.p_max;
    let split = |s: f64| {
        let mut x = vec![s / k as f64; k];
        x.push((p_max - s).max(AN_FLOOR * p_max));
        x
    };
    let mut candidates: Vec<Vec<f64>> = (1..PROBE_GRID).map(|i| split(p_max * i as f64 / PROBE_GRID as f64)).collect();
    let (r, c) = (problem.coeff, problem.ratio_c);
    if r < 0.0 && c < 0.0 {
        candidates.push(split(p_max * c.abs() / (c.abs() + r.abs())));
    }
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for x in candidates {
        let margin_ok = problem.ratio_margin(&x) >= 0.0 || r >= 0.0;
        let Some(sec) = problem.secrecy(&x).filter(|_| margin_ok) else {
            continue;
        };
        let power = problem.total_power(&x);
        let better = match &best {
            None => true,
            Some((bs, bp, _)) => sec > *bs || (sec == *bs && power < *bp),
        };
        if better {
            best = Some((sec, power, x));
        }
    }
    match best {
        Some((secrecy, _, x)) => {
            let feasible = meets_requirement(secrecy, problem.min_secrecy) && problem.in_relaxed_set(&x);
            Probe { x, feasible }
        }
        None => Probe { x: split(0.0), feasible: false },
    }
}

/// Equal split with 90% of the budget on the signals, then pushed into the
/// relaxed set.
fn initial_point(problem: &Problem, fallback: &[f64]) -> Vec<f64> {
    let k = problem.k;
    let p_max = problem.p_max;
    let s = 0.9 * p_max;
    let mut x = vec![s / k as f64; k];
    let mut an = 0.1 * p_max;
    if problem.coeff < 0.0 && problem.ratio_c < 0.0 {
        an = an.max(problem.coeff.abs() * s / problem.ratio_c.abs());
    }
    x.push(an);
    let total: f64 = x.iter().sum();
    if total > p_max {
        x.iter_mut().for_each(|v| *v *= p_max / total);
    }
    if problem.in_relaxed_set(&x) && problem.secrecy(&x).is_some() {
        x
    } else {
        fallback.to_vec()
    }
}

#[derive(Debug, Clone)]
pub struct PenaltyOutcome {
    pub allocation: PowerAllocation,
    /// Weight used in the last step.
    pub omega: f64,
    /// `max(C_0 - C_sec, 0)` after the last step.
    pub violation: f64,
}

fn checked_start(problem: &Problem, start: &PowerAllocation) -> Result<Vec<f64>> {
    if start.signal.len() != problem.k {
        return Err(Error::Dimension(format!("{} signal powers for K = {}", start.signal.len(), problem.k)));
    }
    let x = to_vec(start);
    if !problem.in_relaxed_set(&x) || problem.eaves(&x).is_none() {
        return Err(Error::InvalidParams("start point outside the relaxed feasible set".into()));
    }
    Ok(x)
}

/// Run the penalty loop for a fixed ratio parameter, starting at `omega_0`
/// from `params`.
pub fn penalty_step(
    dims: &ArrayDims,
    hw: &HardwareProfile,
    params: &SolverParams,
    eta: f64,
    start: &PowerAllocation,
    trace: &mut OptimizationTrace,
) -> Result<PenaltyOutcome> {
    let problem = Problem::new(dims, hw, params)?;
    let x = checked_start(&problem, start)?;
    let out = penalty_loop(&problem, params, eta, &x, 0, trace);
    Ok(PenaltyOutcome { allocation: from_vec(&out.x), omega: out.omega, violation: out.violation })
}

#[derive(Debug, Clone)]
pub struct AlternateOutcome {
    pub allocation: PowerAllocation,
    pub sweeps: usize,
    /// The objective change fell below tolerance before the sweep cap.
    pub converged: bool,
    /// Some line search ran out of backtracking steps.
    pub stalled: bool,
}

/// Alternate search for fixed penalty weight and ratio parameter.
pub fn alternate_search(
    dims: &ArrayDims,
    hw: &HardwareProfile,
    params: &SolverParams,
    omega: f64,
    eta: f64,
    start: &PowerAllocation,
    trace: &mut OptimizationTrace,
) -> Result<AlternateOutcome> {
    let problem = Problem::new(dims, hw, params)?;
    let x = checked_start(&problem, start)?;
    let out = alternate_loop(&problem, params, eta, omega, &x, (0, 0), trace);
    Ok(AlternateOutcome {
        allocation: from_vec(&out.x),
        sweeps: out.sweeps,
        converged: out.converged,
        stalled: out.stalled,
    })
}

#[derive(Debug, Clone)]
pub struct BlockOutcome {
    pub allocation: PowerAllocation,
    /// Penalized objective at the allocation.
    pub value: f64,
    pub iters: usize,
    pub stalled: bool,
}

/// Convex-concave procedure on a single block.
#[allow(clippy::too_many_arguments)]
pub fn dc_solve_block(
    dims: &ArrayDims,
    hw: &HardwareProfile,
    params: &SolverParams,
    block: Block,
    eta: f64,
    omega: f64,
    start: &PowerAllocation,
) -> Result<BlockOutcome> {
    let problem = Problem::new(dims, hw, params)?;
    let x = checked_start(&problem, start)?;
    let out = ccp(&problem, block, eta, omega, &x, &params.dc_settings());
    Ok(BlockOutcome { allocation: from_vec(&out.x), value: out.value, iters: out.iters, stalled: out.stalled })
}

/// Penalized objective `eta P_tot - W C_sec + omega (t + W C_E)` on the
/// relaxed set, using the unclamped secrecy; `None` outside it.
pub fn penalized_objective(
    alloc: &PowerAllocation,
    eta: f64,
    omega: f64,
    dims: &ArrayDims,
    hw: &HardwareProfile,
    params: &SolverParams,
) -> Result<Option<f64>> {
    let problem = Problem::new(dims, hw, params)?;
    Ok(problem.penalized(&to_vec(alloc), eta, omega))
}

/// Largest coordinate change between two allocations.
pub fn allocation_distance(a: &PowerAllocation, b: &PowerAllocation) -> f64 {
    max_abs_diff(&to_vec(a), &to_vec(b))
}
