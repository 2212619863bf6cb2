//! Run the four schemes on the default scenario side by side.

use seehp::baselines::{scheme_hardware, solve_scheme, Scheme};
use seehp::channel::ScenarioGeometry;
use seehp::metrics::{total_power, HardwareProfile};
use seehp::optimizer::SolverParams;

fn main() -> seehp::Result<()> {
    let geometry = ScenarioGeometry::default();
    let hw = HardwareProfile::default();
    let params = SolverParams::default();
    println!("{:<6} {:>14} {:>12} {:>10} {:>10}", "scheme", "EE (bit/J)", "C_sec", "P_tx (W)", "P_tot (W)");
    for scheme in Scheme::ALL {
        let spec = scheme.spec();
        let r = solve_scheme(&spec, &geometry, &hw, &params)?;
        let scheme_hw = scheme_hardware(&spec, &hw, &geometry);
        println!(
            "{:<6} {:>14.6e} {:>12.4} {:>10.4} {:>10.4}",
            scheme.name(),
            r.eta,
            r.secrecy,
            r.allocation.total(),
            total_power(&r.allocation, &scheme_hw, geometry.dims())
        );
    }
    Ok(())
}
