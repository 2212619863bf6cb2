//! Build the RF, zero-forcing and artificial-noise precoders for one draw and
//! check what they cancel.

use seehp::channel::{assemble_channels, GeometrySpec, ScenarioGeometry};
use seehp::metrics::PowerAllocation;
use seehp::precoding::{build_precoders, equivalent_channels, PowerNormalization};
use seehp::CMatrix;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn main() -> seehp::Result<()> {
    // The statistical normalizer assumes unit-variance channels, so path loss
    // is switched off here.
    let spec = GeometrySpec { actuator_distances: vec![1.0], eaves_distance: 1.0, ..GeometrySpec::default() };
    let geometry = ScenarioGeometry::new(spec)?;
    let dims = *geometry.dims();
    let real = assemble_channels(&geometry, 3)?;
    let alloc = PowerAllocation::equal_split(dims.k, 0.1, 0.05)?;

    for normalization in [PowerNormalization::Statistical, PowerNormalization::Exact] {
        let p = build_precoders(&real, &geometry, &alloc, 3, normalization)?;
        let eq = equivalent_channels(&real, &p.f)?;
        let through = &eq.heq_h * &p.b_s;
        let diag = (0..dims.k).map(|i| through[(i, i)].norm()).fold(0.0, f64::max);
        let mut off = through.clone();
        off.fill_diagonal(num_complex::Complex64::new(0.0, 0.0));
        let radiated: f64 = (&p.f * &p.b_s).norm_squared();
        println!("{normalization:?}:");
        println!("  F is {}x{}, |F_ij| = {:.4}", p.f.nrows(), p.f.ncols(), p.f[(0, 0)].norm());
        println!("  largest off-diagonal / diagonal of H_eq^H B_s: {:.2e}", max_abs(&off) / diag);
        println!("  AN leakage max |H_eq^H B_n|: {:.2e}", max_abs(&(&eq.heq_h * &p.b_n)));
        println!("  radiated signal power {:.4} W for a budget of {:.4} W", radiated, alloc.signal_sum());
        println!("  radiated AN power {:.4} W", (&p.f * &p.b_n).norm_squared());
    }
    Ok(())
}
