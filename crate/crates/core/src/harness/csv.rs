use std::fs;
use std::io::Write;
use std::path::Path;

use crate::optimizer::TRACE_HEADER;
use crate::Result;

use super::sweep::SweepResult;

pub const CSV_HEADER: &str = "scheme,param,value,mean_ee_bits_per_joule,se_ee,mean_secrecy_bps_hz,se_secrecy,infeasible,iters_dinkelbach,iters_penalty,iters_alt";

/// CSV text for a sweep: the header, then one row per `(scheme, value)`.
pub fn to_csv(result: &SweepResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.scheme,
            result.parameter.label(),
            r.value,
            r.mean_ee,
            r.se_ee,
            r.mean_secrecy,
            r.se_secrecy,
            r.infeasible,
            r.iters_dinkelbach,
            r.iters_penalty,
            r.iters_alternate
        ));
    }
    out
}

pub fn emit_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_csv(result))?;
    Ok(())
}

/// Tab-separated solver trace of every point in the sweep.
pub fn emit_trace(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "{TRACE_HEADER}")?;
    for (label, trace) in &result.traces {
        file.write_all(trace.to_tsv(label).as_bytes())?;
    }
    Ok(())
}
