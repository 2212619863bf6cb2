//! Sweep the transmit budget for two schemes and print the CSV.

use seehp::baselines::Scheme;
use seehp::harness::{parse_config_str, run_sweep, to_csv, SweptParameter};

fn main() -> seehp::Result<()> {
    let config = parse_config_str(
        "# smaller array, otherwise defaults\n\
         geometry.n_tx = 64\n\
         sweep.parameter = p_max\n\
         sweep.values = -20 dBW, -10 dBW, 0 dBW\n\
         sweep.trials = 10\n",
    )?;
    let mut spec = config.sweep.clone();
    spec.schemes = vec![Scheme::Seehp, Scheme::Seepa];
    assert_eq!(spec.parameter, SweptParameter::PMax);
    let result = run_sweep(&spec, &config.scenario)?;
    print!("{}", to_csv(&result));
    Ok(())
}
