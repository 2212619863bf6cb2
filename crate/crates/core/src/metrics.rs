//! Secrecy and power metrics.
//!
//! Two families live here. The exact per-realization SINRs take a channel
//! draw and a precoder set. The closed forms depend only on the power
//! allocation, the array dimensions and the hardware profile; the optimizer
//! works exclusively with them.
//!
//! Closed forms, with `a = pi (N_Tx - 1) / (4 sigma^2)` and `S = sum P_k`:
//!
//! ```text
//! C_k     = log2(1 + a P_k)
//! C_E     = log2(1 + M S / (K P_n (1 - M / (N_RF - K))))
//! C_sec   = [C_k* - C_E]^+ + sum_{l != k*} C_l
//! P_total = (S + P_n) / alpha + N_RF (P_RF + N_Tx P_PS) + P_C
//! eta     = W C_sec / P_total
//! ```
//!
//! When `M > N_RF - K` the eavesdropper term is negative; it is kept as is and
//! only the per-actuator secrecy is clamped.

use nalgebra::SVD;
use std::f64::consts::PI;

use crate::channel::{ArrayDims, ChannelRealization};
use crate::precoding::{equivalent_channels, PrecoderSet, NULL_SPACE_THRESHOLD};
use crate::{Error, Result};

/// Per-actuator signal powers and the artificial-noise power, in watts.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    pub signal: Vec<f64>,
    pub an: f64,
}

impl PowerAllocation {
    pub fn new(signal: Vec<f64>, an: f64) -> Result<Self> {
        if signal.iter().chain(std::iter::once(&an)).any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::Domain("powers must be finite and nonnegative".into()));
        }
        Ok(Self { signal, an })
    }

    /// `total` split evenly over `k` actuators.
    pub fn equal_split(k: usize, total: f64, an: f64) -> Result<Self> {
        Self::new(vec![total / k as f64; k], an)
    }

    pub fn signal_sum(&self) -> f64 {
        self.signal.iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.signal_sum() + self.an
    }
}

/// RF architecture behind the power model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Architecture {
    #[default]
    Hybrid,
    /// One RF chain per antenna.
    FullDigital,
}

/// Which closed form approximates the eavesdropper capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EavesFormula {
    /// Denominator `K P_n (1 - M / (N_RF - K))`.
    #[default]
    PerActuator,
    /// Denominator `P_n (1 - M / (N_RF - K))`, without the factor K.
    Aggregate,
}

/// Noise power in watts from a PSD in dBm/Hz and a bandwidth in Hz.
pub fn noise_power_from_psd(psd_dbm_per_hz: f64, bandwidth_hz: f64) -> f64 {
    10f64.powf(psd_dbm_per_hz / 10.0) * 1e-3 * bandwidth_hz
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardwareProfile {
    /// Power-amplifier efficiency, `0 < alpha <= 1`.
    pub amp_efficiency: f64,
    /// Watts per RF chain.
    pub p_rf_chain: f64,
    /// Watts per phase shifter.
    pub p_phase_shifter: f64,
    /// Static gateway consumption in watts.
    pub p_constant: f64,
    /// Hz.
    pub bandwidth: f64,
    /// Receiver noise power in watts.
    pub noise_power: f64,
    /// Transmit budget for signals plus artificial noise, watts.
    pub p_max: f64,
    /// Required secrecy capacity, bit/s/Hz.
    pub min_secrecy: f64,
    pub architecture: Architecture,
    pub eaves_formula: EavesFormula,
}

impl Default for HardwareProfile {
    fn default() -> Self {
        let bandwidth = 20e6;
        Self {
            amp_efficiency: 0.38,
            p_rf_chain: 0.03,
            p_phase_shifter: 1e-6,
            p_constant: 15.0,
            bandwidth,
            noise_power: noise_power_from_psd(-174.0, bandwidth),
            p_max: 10f64.powf(-0.5),
            min_secrecy: 3.0,
            architecture: Architecture::Hybrid,
            eaves_formula: EavesFormula::PerActuator,
        }
    }
}

impl HardwareProfile {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidHardware(what.into()));
        if !(self.amp_efficiency > 0.0 && self.amp_efficiency <= 1.0) {
            return bad("0 < alpha <= 1");
        }
        if !(self.p_rf_chain >= 0.0 && self.p_phase_shifter >= 0.0) {
            return bad("RF chain and phase shifter powers >= 0");
        }
        if !(self.p_constant > 0.0) {
            return bad("P_C > 0");
        }
        if !(self.bandwidth > 0.0 && self.noise_power > 0.0 && self.p_max > 0.0) {
            return bad("bandwidth, noise power and P_max > 0");
        }
        if !(self.min_secrecy >= 0.0) {
            return bad("minimum secrecy >= 0");
        }
        Ok(())
    }

    /// RF chains that draw power and enter the eavesdropper closed form.
    pub fn rf_chains(&self, dims: &ArrayDims) -> usize {
        match self.architecture {
            Architecture::Hybrid => dims.n_rf,
            Architecture::FullDigital => dims.n_tx,
        }
    }

    /// Circuit power `N_RF (P_RF + N_Tx P_PS) + P_C`.
    pub fn static_power(&self, dims: &ArrayDims) -> f64 {
        self.rf_chains(dims) as f64 * (self.p_rf_chain + dims.n_tx as f64 * self.p_phase_shifter) + self.p_constant
    }
}

/// SINR of actuator `k` evaluated on the realization, including residual
/// inter-user interference and artificial-noise leakage.
pub fn exact_actuator_sinr(
    realization: &ChannelRealization,
    precoders: &PrecoderSet,
    k: usize,
    noise_power: f64,
) -> Result<f64> {
    let eq = equivalent_channels(realization, &precoders.f)?;
    let row = eq.heq_h.row(k);
    let through_s = row * &precoders.b_s;
    let desired = through_s[k].norm_sqr();
    let interference: f64 = (0..through_s.len()).filter(|&i| i != k).map(|i| through_s[i].norm_sqr()).sum();
    let leakage = (row * &precoders.b_n).norm_squared();
    Ok(desired / (interference + leakage + noise_power))
}

/// Noiseless-eavesdropper SINR bound for the stream of actuator `k`:
/// `b^H H_eqE (H_eqE^H B_n B_n^H H_eqE)^+ H_eqE^H b`.
///
/// The inner Gram matrix is `M x M` with rank at most `N_RF - K`, so it is
/// singular whenever `M > N_RF - K`; a pseudo-inverse is used throughout.
pub fn exact_eaves_sinr_upper(realization: &ChannelRealization, precoders: &PrecoderSet, k: usize) -> Result<f64> {
    if precoders.b_n.iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::UndefinedBound);
    }
    let eq = equivalent_channels(realization, &precoders.f)?;
    let an_at_eve = &eq.heq_eaves_h * &precoders.b_n;
    let gram = &an_at_eve * an_at_eve.adjoint();
    let svd = SVD::try_new(gram, true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::DegenerateChannel("SVD did not converge".into()))?;
    let eps = NULL_SPACE_THRESHOLD * svd.singular_values.max();
    let pinv = svd.pseudo_inverse(eps).map_err(|e| Error::DegenerateChannel(e.into()))?;
    let y = &eq.heq_eaves_h * precoders.b_s.column(k);
    let value = (y.adjoint() * pinv * &y)[(0, 0)].re;
    Ok(value.max(0.0))
}

/// SNR gain `pi (N_Tx - 1) / (4 sigma^2)` of the closed-form actuator SINR.
pub fn snr_gain(noise_power: f64, n_tx: usize) -> f64 {
    PI * (n_tx as f64 - 1.0) / (4.0 * noise_power)
}

/// Closed-form capacity of one actuator.
pub fn closed_actuator_capacity(p_k: f64, hw: &HardwareProfile, n_tx: usize) -> f64 {
    (snr_gain(hw.noise_power, n_tx) * p_k).ln_1p() / std::f64::consts::LN_2
}

/// Coefficient `r` with `C_E = log2(1 + r S / P_n)`.
pub fn eaves_coefficient(dims: &ArrayDims, hw: &HardwareProfile) -> Result<f64> {
    let n_rf = hw.rf_chains(dims);
    let n_an = n_rf.checked_sub(dims.k).filter(|&n| n > 0).ok_or_else(|| {
        Error::InfeasibleApproximation(format!("no artificial-noise dimensions (N_RF = {n_rf}, K = {})", dims.k))
    })?;
    if n_an == dims.m {
        return Err(Error::InfeasibleApproximation(format!(
            "M = N_RF - K = {n_an} makes the eavesdropper bound singular"
        )));
    }
    let m = dims.m as f64;
    let shape = 1.0 - m / n_an as f64;
    Ok(match hw.eaves_formula {
        EavesFormula::PerActuator => m / (dims.k as f64 * shape),
        EavesFormula::Aggregate => m / shape,
    })
}

/// `log2(1 + r S / P_n)`, or `None` outside its domain.
pub(crate) fn eaves_capacity_with(coeff: f64, signal_sum: f64, an: f64) -> Option<f64> {
    if signal_sum == 0.0 {
        return Some(0.0);
    }
    if !(an > 0.0) {
        return None;
    }
    let arg = 1.0 + coeff * signal_sum / an;
    (arg > 0.0).then(|| arg.log2())
}

/// Closed-form upper bound on the eavesdropper capacity.
///
/// Fails when the logarithm's argument is not positive; the value may be
/// negative inside the domain.
pub fn closed_eaves_capacity(alloc: &PowerAllocation, dims: &ArrayDims, hw: &HardwareProfile) -> Result<f64> {
    let coeff = eaves_coefficient(dims, hw)?;
    eaves_capacity_with(coeff, alloc.signal_sum(), alloc.an).ok_or_else(|| {
        Error::InfeasibleApproximation(format!(
            "log argument {} <= 0 at S = {}, P_n = {}",
            1.0 + coeff * alloc.signal_sum() / alloc.an,
            alloc.signal_sum(),
            alloc.an
        ))
    })
}

/// Secrecy lower bound `[C_k* - C_E]^+ + sum_{l != k*} C_l`.
pub fn secrecy_capacity_lower(alloc: &PowerAllocation, dims: &ArrayDims, hw: &HardwareProfile) -> Result<f64> {
    let eaves = closed_eaves_capacity(alloc, dims, hw)?;
    Ok(secrecy_from_parts(alloc, dims, hw, eaves))
}

pub(crate) fn secrecy_from_parts(alloc: &PowerAllocation, dims: &ArrayDims, hw: &HardwareProfile, eaves: f64) -> f64 {
    alloc
        .signal
        .iter()
        .enumerate()
        .map(|(l, &p)| {
            let c = closed_actuator_capacity(p, hw, dims.n_tx);
            if l == dims.target {
                (c - eaves).max(0.0)
            } else {
                c
            }
        })
        .sum()
}

pub fn total_power(alloc: &PowerAllocation, hw: &HardwareProfile, dims: &ArrayDims) -> f64 {
    alloc.total() / hw.amp_efficiency + hw.static_power(dims)
}

/// Secure energy efficiency lower bound in bit/J.
pub fn secure_ee(alloc: &PowerAllocation, dims: &ArrayDims, hw: &HardwareProfile) -> Result<f64> {
    let secrecy = secrecy_capacity_lower(alloc, dims, hw)?;
    Ok(hw.bandwidth * secrecy / total_power(alloc, hw, dims))
}
