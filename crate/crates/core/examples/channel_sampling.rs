//! Draw channels for the default scenario and look at their statistics.

use seehp::channel::{assemble_channels, path_loss, trial_seed, GeometrySpec, ScenarioGeometry};

fn main() -> seehp::Result<()> {
    let geometry = ScenarioGeometry::new(GeometrySpec { shadowing_enabled: true, ..GeometrySpec::default() })?;
    let dims = geometry.dims();
    println!("N_Tx = {}, N_RF = {}, K = {}, M = {}", dims.n_tx, dims.n_rf, dims.k, dims.m);
    println!("path loss at 50 m, exponent 4.6: {:.3e}", path_loss(50.0, 4.6, None)?);

    for trial in 0..3 {
        let seed = trial_seed(7, 0, trial);
        let real = assemble_channels(&geometry, seed)?;
        let col0 = real.h.column(0).norm_squared() / real.beta_actuators[0];
        println!(
            "trial {trial}: seed {seed:#018x}, beta_1 = {:.3e}, beta_E = {:.3e}, |g_1|^2 / N_Tx = {:.3}",
            real.beta_actuators[0],
            real.beta_eaves,
            col0 / dims.n_tx as f64
        );
    }

    let a = assemble_channels(&geometry, 11)?;
    let b = assemble_channels(&geometry, 11)?;
    println!("same seed reproduces the draw: {}", a.h == b.h && a.h_eaves == b.h_eaves);
    Ok(())
}
