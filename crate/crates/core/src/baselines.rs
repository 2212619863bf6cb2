//! Comparison schemes as objective and power-model swaps on the same solver.
//!
//! | scheme | objective        | architecture |
//! |--------|------------------|--------------|
//! | SEEHP  | secure EE        | hybrid       |
//! | SEEPA  | secure EE        | full digital |
//! | SCM    | secrecy capacity | full digital |
//! | HYSCM  | secrecy capacity | hybrid       |

use std::fmt;
use std::str::FromStr;

use crate::channel::ScenarioGeometry;
use crate::metrics::{Architecture, HardwareProfile};
use crate::optimizer::{solve_with_objective, Objective, SolveResult, SolverParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Seehp,
    Seepa,
    Scm,
    Hyscm,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Seehp, Scheme::Seepa, Scheme::Scm, Scheme::Hyscm];

    pub fn spec(self) -> SchemeSpec {
        let (objective, architecture) = match self {
            Scheme::Seehp => (Objective::SecureEe, Architecture::Hybrid),
            Scheme::Seepa => (Objective::SecureEe, Architecture::FullDigital),
            Scheme::Scm => (Objective::SecrecyCapacity, Architecture::FullDigital),
            Scheme::Hyscm => (Objective::SecrecyCapacity, Architecture::Hybrid),
        };
        SchemeSpec { scheme: self, objective, architecture }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Seehp => "SEEHP",
            Scheme::Seepa => "SEEPA",
            Scheme::Scm => "SCM",
            Scheme::Hyscm => "HYSCM",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParams(format!("unknown scheme `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeSpec {
    pub scheme: Scheme,
    pub objective: Objective,
    pub architecture: Architecture,
}

/// One RF chain per antenna and no phase-shifter network.
pub fn full_digital_power_model(hw: &HardwareProfile, _geometry: &ScenarioGeometry) -> HardwareProfile {
    HardwareProfile { architecture: Architecture::FullDigital, p_phase_shifter: 0.0, ..hw.clone() }
}

pub fn scheme_hardware(spec: &SchemeSpec, hw: &HardwareProfile, geometry: &ScenarioGeometry) -> HardwareProfile {
    match spec.architecture {
        Architecture::Hybrid => HardwareProfile { architecture: Architecture::Hybrid, ..hw.clone() },
        Architecture::FullDigital => full_digital_power_model(hw, geometry),
    }
}

pub fn solve_scheme(
    spec: &SchemeSpec,
    geometry: &ScenarioGeometry,
    hw: &HardwareProfile,
    params: &SolverParams,
) -> Result<SolveResult> {
    let hw = scheme_hardware(spec, hw, geometry);
    solve_with_objective(geometry.dims(), &hw, params, None, spec.objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{total_power, PowerAllocation};

    #[test]
    fn mapping() {
        assert_eq!(Scheme::Seepa.spec().architecture, Architecture::FullDigital);
        assert_eq!(Scheme::Hyscm.spec().objective, Objective::SecrecyCapacity);
        assert_eq!("hyscm".parse::<Scheme>().unwrap(), Scheme::Hyscm);
        assert!("sarm".parse::<Scheme>().is_err());
    }

    #[test]
    fn full_digital_hardware_term() {
        let geometry = ScenarioGeometry::default();
        let fd = full_digital_power_model(&HardwareProfile::default(), &geometry);
        assert!((fd.static_power(geometry.dims()) - 18.3).abs() < 1e-9);
    }

    #[test]
    fn degenerate_profile_matches_hybrid() {
        let geometry = ScenarioGeometry::default();
        let hw =
            HardwareProfile { p_rf_chain: 0.0, p_phase_shifter: 0.0, p_constant: 1e-9, ..HardwareProfile::default() };
        let fd = full_digital_power_model(&hw, &geometry);
        let alloc = PowerAllocation::equal_split(40, 0.2, 0.1).unwrap();
        let dims = geometry.dims();
        assert_eq!(total_power(&alloc, &hw, dims), total_power(&alloc, &fd, dims));
    }
}
