//! Optimize the power split for the default scenario and a small toy one.

use seehp::channel::{ArrayDims, GeometrySpec, ScenarioGeometry};
use seehp::metrics::HardwareProfile;
use seehp::optimizer::{solve, SolverParams};

fn report(name: &str, geometry: &ScenarioGeometry, hw: &HardwareProfile) -> seehp::Result<()> {
    let result = solve(geometry, hw, &SolverParams::default(), None)?;
    let a = &result.allocation;
    println!("{name}: status {:?}", result.status);
    println!("  signal sum {:.4e} W, AN {:.4e} W", a.signal_sum(), a.an);
    println!("  secrecy {:.4} bit/s/Hz, secure EE {:.6e} bit/J", result.secrecy, result.eta);
    let t = &result.trace;
    println!(
        "  {} ratio iterations, {} penalty steps, {} sweeps, {} DC steps, {} gradient steps",
        t.dinkelbach_iters, t.penalty_steps, t.alternate_sweeps, t.dc_iters, t.pg_iters
    );
    println!("  eta sequence {:?}", t.eta_sequence());
    Ok(())
}

fn main() -> seehp::Result<()> {
    report("default", &ScenarioGeometry::default(), &HardwareProfile::default())?;

    let toy = ScenarioGeometry::new(GeometrySpec { dims: ArrayDims::new(16, 4, 2, 3), ..GeometrySpec::default() })?;
    let hw = HardwareProfile {
        bandwidth: 1.0,
        noise_power: 1.0,
        p_constant: 1.0,
        p_phase_shifter: 0.01,
        p_max: 1.0,
        min_secrecy: 1.0,
        ..HardwareProfile::default()
    };
    report("toy", &toy, &hw)?;
    report("toy, C_0 = 5, P_max = 5", &toy, &HardwareProfile { p_max: 5.0, min_secrecy: 5.0, ..hw.clone() })?;
    report("toy, C_0 = 5, P_max = 1", &toy, &HardwareProfile { min_secrecy: 5.0, ..hw })?;
    Ok(())
}
