//! Compare per-draw SINRs with the closed forms the optimizer uses.

use seehp::channel::{assemble_channels, trial_seed, ArrayDims, GeometrySpec, ScenarioGeometry};
use seehp::metrics::{
    closed_actuator_capacity, closed_eaves_capacity, exact_actuator_sinr, exact_eaves_sinr_upper,
    secrecy_capacity_lower, secure_ee, snr_gain, total_power, HardwareProfile, PowerAllocation,
};
use seehp::precoding::{build_precoders, PowerNormalization};

fn main() -> seehp::Result<()> {
    // unit path loss, so only small-scale fading remains
    let spec = GeometrySpec { actuator_distances: vec![1.0], eaves_distance: 1.0, ..GeometrySpec::default() };
    let geometry = ScenarioGeometry::new(spec)?;
    let dims: ArrayDims = *geometry.dims();
    let hw = HardwareProfile::default();
    let alloc = PowerAllocation::equal_split(dims.k, 0.05, 0.2)?;

    let trials = 50;
    let (mut actuator, mut eaves) = (0.0, 0.0);
    for t in 0..trials {
        let seed = trial_seed(1, 0, t);
        let real = assemble_channels(&geometry, seed)?;
        let p = build_precoders(&real, &geometry, &alloc, seed, PowerNormalization::Statistical)?;
        actuator += exact_actuator_sinr(&real, &p, 0, hw.noise_power)?;
        eaves += exact_eaves_sinr_upper(&real, &p, 0)?;
    }
    let closed = snr_gain(hw.noise_power, dims.n_tx) * alloc.signal[0];
    println!("actuator SINR: mean exact {:.4e}, closed form {:.4e}", actuator / trials as f64, closed);
    println!("eavesdropper SINR bound, mean over draws: {:.4e}", eaves / trials as f64);

    println!("C_1 = {:.4} bit/s/Hz", closed_actuator_capacity(alloc.signal[0], &hw, dims.n_tx));
    println!("C_E = {:.4} bit/s/Hz", closed_eaves_capacity(&alloc, &dims, &hw)?);
    println!("C_sec = {:.4} bit/s/Hz", secrecy_capacity_lower(&alloc, &dims, &hw)?);
    println!("P_total = {:.4} W", total_power(&alloc, &hw, &dims));
    println!("secure EE = {:.4e} bit/J", secure_ee(&alloc, &dims, &hw)?);
    Ok(())
}
