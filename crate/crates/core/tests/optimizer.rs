mod common;

use common::*;
use seehp::channel::ArrayDims;
use seehp::metrics::{HardwareProfile, PowerAllocation};
use seehp::optimizer::{
    alternate_search, dc_solve_block, penalized_objective, penalty_step, solve, Block, OptimizationTrace, SolverParams,
    Status, TraceEvent,
};

fn assert_within(got: f64, want: f64, rel: f64, what: &str) {
    assert!((got - want).abs() <= rel * want.abs(), "{what}: got {got}, oracle {want}");
}

#[test]
fn toy_solve_matches_grid() {
    let (dims, hw) = (toy_dims(), toy_hw());
    let result = solve(&geometry(dims, true), &hw, &SolverParams::default(), None).unwrap();
    let (oracle, _, _) = grid_max_ee(&Model::new(&dims, &hw, 1.0), 200).unwrap();
    assert_eq!(result.status, Status::Converged);
    assert_within(result.eta, oracle, 0.02, "secure EE");
    let a = &result.allocation;
    assert!(Model::new(&dims, &hw, 1.0).relaxed(&a.signal, a.an));
}

#[test]
fn weak_eavesdropper_toy_is_feasible_and_bounded_by_grid() {
    // the optimizer works on the unclamped secrecy bound, so it cannot find
    // the clamped optimum that starves the overheard actuator
    let (dims, hw) = (weak_toy_dims(), HardwareProfile { min_secrecy: 3.0, p_max: 2.0, ..toy_hw() });
    let m = Model::new(&dims, &hw, 1.0);
    let result = solve(&geometry(dims, false), &hw, &SolverParams::default(), None).unwrap();
    let (oracle, p, _) = grid_max_ee(&m, 200).unwrap();
    assert_eq!(p[0], 0.0);
    assert_eq!(result.status, Status::Converged);
    let a = &result.allocation;
    assert!(m.feasible(&a.signal, a.an));
    assert!(result.eta <= oracle * (1.0 + 1e-3));
}

#[test]
fn binding_requirement_lands_on_boundary() {
    let dims = toy_dims();
    let hw = HardwareProfile { p_max: 5.0, min_secrecy: 5.0, ..toy_hw() };
    let result = solve(&geometry(dims, true), &hw, &SolverParams::default(), None).unwrap();
    let (oracle, _, _) = grid_max_ee(&Model::new(&dims, &hw, 1.0), 200).unwrap();
    assert_eq!(result.status, Status::Converged);
    assert_within(result.eta, oracle, 0.02, "secure EE");
    assert!((result.secrecy - 5.0).abs() < 1e-3, "secrecy {}", result.secrecy);
}

#[test]
fn unreachable_requirement_is_infeasible() {
    let dims = toy_dims();
    let hw = HardwareProfile { min_secrecy: 5.0, ..toy_hw() };
    assert!(grid_max_ee(&Model::new(&dims, &hw, 1.0), 200).is_none());
    let result = solve(&geometry(dims, true), &hw, &SolverParams::default(), None).unwrap();
    assert_eq!(result.status, Status::Infeasible);
}

#[test]
fn single_actuator_matches_golden_section() {
    // negligible circuit power besides P_C, a loose budget and no requirement
    let dims = ArrayDims::new(64, 2, 1, 2);
    let hw = HardwareProfile { p_rf_chain: 0.0, p_phase_shifter: 0.0, p_max: 100.0, min_secrecy: 0.0, ..toy_hw() };
    let m = Model::new(&dims, &hw, 1.0);
    assert!(m.coeff < 0.0);
    // with a negative coefficient both power and secrecy favor the smallest
    // AN power allowed by C_E >= -t, so the problem is one-dimensional in S
    let c = 2f64.powf(-m.t) - 1.0;
    let an_per_signal = m.coeff / c;
    let ee = |s: f64| m.ee(&[s], an_per_signal * s).unwrap();
    let s_star = golden_max(ee, 1e-9, m.p_max / (1.0 + an_per_signal), 200);
    let oracle = ee(s_star);
    assert!(oracle > m.bandwidth * m.t / m.fixed, "interior optimum");

    let result = solve(&geometry(dims, true), &hw, &SolverParams::default(), None).unwrap();
    assert_eq!(result.status, Status::Converged);
    assert_within(result.eta, oracle, 0.02, "secure EE");
    assert_within(result.allocation.signal[0], s_star, 0.05, "signal power");
}

#[test]
fn convex_block_matches_bisection() {
    // weak eavesdropper: C_E is convex in P_n, so the AN block has no
    // subtracted part and the procedure solves a convex problem
    let dims = ArrayDims::new(16, 6, 1, 1);
    let hw = toy_hw();
    let params = SolverParams::default();
    let m = Model::new(&dims, &hw, params.aux_t);
    assert!(m.coeff > 0.0);
    let (eta, omega, s) = (0.5, 1.0, 0.2);
    let start = PowerAllocation::new(vec![s], 0.3).unwrap();

    let out = dc_solve_block(&dims, &hw, &params, Block::ArtificialNoise, eta, omega, &start).unwrap();
    let deriv = |pn: f64| {
        eta / m.alpha - m.bandwidth * (omega + 1.0) * m.coeff * s / (std::f64::consts::LN_2 * pn * (pn + m.coeff * s))
    };
    let oracle = bisect_increasing(deriv, 1e-12, m.p_max - s, 200);
    assert!(oracle > 0.0 && oracle < m.p_max - s, "interior optimum");
    assert_eq!(out.allocation.signal, vec![s]);
    assert!((out.allocation.an - oracle).abs() <= 1e-4, "P_n {} vs {oracle}", out.allocation.an);

    let again = dc_solve_block(&dims, &hw, &params, Block::ArtificialNoise, eta, omega, &out.allocation).unwrap();
    assert_eq!(again.iters, 1);
}

#[test]
fn alternate_search_fixed_point_takes_one_sweep() {
    let (dims, hw, params) = (toy_dims(), toy_hw(), SolverParams::default());
    let start = PowerAllocation::equal_split(2, 0.1, 0.8).unwrap();
    let mut trace = OptimizationTrace::default();
    let first = alternate_search(&dims, &hw, &params, 1.0, 0.3, &start, &mut trace).unwrap();
    assert!(first.converged);
    let second = alternate_search(&dims, &hw, &params, 1.0, 0.3, &first.allocation, &mut trace).unwrap();
    assert_eq!(second.sweeps, 1);
    assert!(second.converged);
}

#[test]
fn single_actuator_alternate_matches_grid() {
    let dims = ArrayDims::new(8, 2, 1, 2);
    let (hw, params) = (toy_hw(), SolverParams::default());
    let (eta, omega) = (0.2, 1.0);
    let m = Model::new(&dims, &hw, params.aux_t);
    let oracle = grid_min_penalized(&m, 2000, eta, omega).unwrap();

    let start = PowerAllocation::new(vec![0.15], 0.8).unwrap();
    let mut trace = OptimizationTrace::default();
    let out = alternate_search(&dims, &hw, &params, omega, eta, &start, &mut trace).unwrap();
    let value = penalized_objective(&out.allocation, eta, omega, &dims, &hw, &params).unwrap().unwrap();
    assert!((value - oracle).abs() <= 0.02 * oracle.abs(), "alternate {value} vs grid {oracle}");
}

#[test]
fn inactive_penalty_stops_after_one_step() {
    let (dims, hw, params) = (toy_dims(), toy_hw(), SolverParams::default());
    let start = PowerAllocation::equal_split(2, 0.1, 0.8).unwrap();
    let mut trace = OptimizationTrace::default();
    let out = penalty_step(&dims, &hw, &params, 0.3, &start, &mut trace).unwrap();
    assert_eq!(trace.penalty_steps, 1);
    assert_eq!(out.violation, 0.0);
    assert_eq!(out.omega, params.penalty_init);
}

#[test]
fn capped_penalty_records_violation() {
    let dims = weak_toy_dims();
    let hw = HardwareProfile { min_secrecy: 3.0, p_max: 2.0, ..toy_hw() };
    let params = SolverParams { penalty_tol: 0.0, penalty_max_iters: 1, ..SolverParams::default() };
    let start = PowerAllocation::equal_split(2, 1.0, 0.5).unwrap();
    let mut trace = OptimizationTrace::default();
    let out = penalty_step(&dims, &hw, &params, 2.0, &start, &mut trace).unwrap();
    assert_eq!(trace.penalty_steps, 1);
    assert!(out.violation > 0.0, "expected a violated requirement");
    let recorded = trace.events.iter().find_map(|e| match e {
        TraceEvent::Penalty { violation, .. } => Some(*violation),
        _ => None,
    });
    assert_eq!(recorded, Some(out.violation));
}

#[test]
fn growing_penalty_approaches_constrained_optimum() {
    let dims = toy_dims();
    let hw = HardwareProfile { min_secrecy: 5.0, p_max: 5.0, ..toy_hw() };
    let params =
        SolverParams { penalty_tol: 0.0, penalty_max_iters: 4, penalty_growth: 10.0, ..SolverParams::default() };
    let m = Model::new(&dims, &hw, params.aux_t);
    let (best_ee, start_p, start_pn) = grid_max_ee(&m, 200).unwrap();
    let eta = 0.5 * best_ee;

    // constrained maximum of W C_sec - eta P_tot on the grid
    let mut oracle = f64::NEG_INFINITY;
    for_each_grid_point(2, m.p_max, 200, |p, pn| {
        if m.feasible(p, pn) {
            oracle = oracle.max(m.bandwidth * m.secrecy(p, pn).unwrap() - eta * m.power(p, pn));
        }
    });

    let start = PowerAllocation::new(start_p, start_pn).unwrap();
    let mut trace = OptimizationTrace::default();
    let out = penalty_step(&dims, &hw, &params, eta, &start, &mut trace).unwrap();
    let a = &out.allocation;
    let value = m.bandwidth * m.secrecy(&a.signal, a.an).unwrap() - eta * m.power(&a.signal, a.an);
    assert!((value - oracle).abs() <= 0.05 * oracle.abs(), "penalized {value} vs constrained {oracle}");
    assert!(out.violation < 1e-6, "violation {}", out.violation);
}
