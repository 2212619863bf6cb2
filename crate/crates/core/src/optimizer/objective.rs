//! Scalar objectives over the closed-form metrics.
//!
//! Internally an allocation is a flat vector `x = [P_1, ..., P_K, P_n]`.

use std::f64::consts::LN_2;

use crate::channel::ArrayDims;
use crate::metrics::{
    eaves_capacity_with, eaves_coefficient, secrecy_capacity_lower, snr_gain, total_power, HardwareProfile,
    PowerAllocation,
};
use crate::Result;

use super::SolverParams;

/// Which variables a DC subproblem is free to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    /// Actuator powers with the artificial-noise power fixed.
    Signal,
    /// Artificial-noise power with the actuator powers fixed.
    ArtificialNoise,
    /// Both at once.
    Joint,
}

/// Everything the inner loops need, flattened to scalars.
#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub k: usize,
    pub target: usize,
    pub gain: f64,
    /// `r` in `C_E = log2(1 + r S / P_n)`.
    pub coeff: f64,
    pub bandwidth: f64,
    pub amp_efficiency: f64,
    pub static_power: f64,
    pub p_max: f64,
    pub min_secrecy: f64,
    pub t: f64,
    /// `2^-t - 1`; the constraint `C_E >= -t` reads `r S - c P_n >= 0`.
    pub ratio_c: f64,
}

const BUDGET_SLACK: f64 = 1e-10;
const RATIO_SLACK: f64 = 1e-9;
pub(crate) const AN_FLOOR: f64 = 1e-12;

impl Problem {
    pub fn new(dims: &ArrayDims, hw: &HardwareProfile, params: &SolverParams) -> Result<Self> {
        hw.validate()?;
        params.validate()?;
        Ok(Self {
            k: dims.k,
            target: dims.target,
            gain: snr_gain(hw.noise_power, dims.n_tx),
            coeff: eaves_coefficient(dims, hw)?,
            bandwidth: hw.bandwidth,
            amp_efficiency: hw.amp_efficiency,
            static_power: hw.static_power(dims),
            p_max: hw.p_max,
            min_secrecy: hw.min_secrecy,
            t: params.aux_t,
            ratio_c: 2f64.powf(-params.aux_t) - 1.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.k + 1
    }

    pub fn signal_sum(&self, x: &[f64]) -> f64 {
        x[..self.k].iter().sum()
    }

    pub fn an(&self, x: &[f64]) -> f64 {
        x[self.k]
    }

    pub fn capacity(&self, p: f64) -> f64 {
        (self.gain * p).ln_1p() / LN_2
    }

    pub fn sum_capacity(&self, x: &[f64]) -> f64 {
        x[..self.k].iter().map(|&p| self.capacity(p)).sum()
    }

    pub fn eaves(&self, x: &[f64]) -> Option<f64> {
        eaves_capacity_with(self.coeff, self.signal_sum(x), self.an(x))
    }

    /// Clamped secrecy lower bound.
    pub fn secrecy(&self, x: &[f64]) -> Option<f64> {
        let ce = self.eaves(x)?;
        let ck = self.capacity(x[self.target]);
        Some(self.sum_capacity(x) - ck + (ck - ce).max(0.0))
    }

    pub fn total_power(&self, x: &[f64]) -> f64 {
        x.iter().sum::<f64>() / self.amp_efficiency + self.static_power
    }

    pub fn ee(&self, x: &[f64]) -> Option<f64> {
        Some(self.bandwidth * self.secrecy(x)? / self.total_power(x))
    }

    /// `r S - c P_n`, nonnegative inside the relaxed feasible set.
    pub fn ratio_margin(&self, x: &[f64]) -> f64 {
        self.coeff * self.signal_sum(x) - self.ratio_c * self.an(x)
    }

    /// Membership in the relaxed feasible set: nonnegative powers, budget,
    /// `C_E >= -t` and `sum_l C_l >= C_0 - t`.
    pub fn in_relaxed_set(&self, x: &[f64]) -> bool {
        if x.iter().any(|&v| !(v >= 0.0)) {
            return false;
        }
        if x.iter().sum::<f64>() > self.p_max * (1.0 + BUDGET_SLACK) {
            return false;
        }
        let scale = self.p_max * (self.coeff.abs() + self.ratio_c.abs());
        if self.ratio_margin(x) < -RATIO_SLACK * scale {
            return false;
        }
        self.sum_capacity(x) >= self.min_secrecy - self.t
    }

    /// Penalized objective `eta P_tot - W (C_s - C_E) + omega (t + W C_E)`,
    /// `None` outside the relaxed set or the domain of `C_E`.
    pub fn penalized(&self, x: &[f64], eta: f64, omega: f64) -> Option<f64> {
        if !self.in_relaxed_set(x) {
            return None;
        }
        let ce = self.eaves(x)?;
        Some(self.common(x, eta, omega) + self.bandwidth * (omega + 1.0) * ce)
    }

    /// `eta P_tot - W C_s + omega t`, convex in every block.
    fn common(&self, x: &[f64], eta: f64, omega: f64) -> f64 {
        eta * self.total_power(x) - self.bandwidth * self.sum_capacity(x) + omega * self.t
    }

    fn common_grad(&self, x: &[f64], eta: f64) -> Vec<f64> {
        let mut g = vec![eta / self.amp_efficiency; self.dim()];
        for (gl, &p) in g.iter_mut().zip(&x[..self.k]) {
            *gl -= self.bandwidth * self.gain / (LN_2 * (1.0 + self.gain * p));
        }
        g
    }

    /// Whether `C_E` is concave in the block, so `-W (omega + 1) C_E` can be
    /// treated as the convex part to be linearized.
    pub fn eaves_concave_in(&self, block: Block) -> bool {
        match block {
            Block::Signal => true,
            Block::ArtificialNoise => self.coeff < 0.0,
            Block::Joint => false,
        }
    }

    /// Convex part `g` of the block split `Phi = g - h`, up to a constant.
    pub fn convex_part(&self, block: Block, x: &[f64], eta: f64, omega: f64) -> Option<f64> {
        if !self.in_relaxed_set(x) {
            return None;
        }
        let scale = self.bandwidth * (omega + 1.0);
        let base = self.common(x, eta, omega);
        match block {
            Block::Joint => {
                let pn = self.an(x);
                (pn > 0.0).then(|| base - scale * pn.log2())
            }
            b if self.eaves_concave_in(b) => {
                self.eaves(x)?;
                Some(base)
            }
            _ => Some(base + scale * self.eaves(x)?),
        }
    }

    pub fn convex_grad(&self, block: Block, x: &[f64], eta: f64, omega: f64) -> Vec<f64> {
        let mut g = self.common_grad(x, eta);
        let scale = self.bandwidth * (omega + 1.0);
        let pn = self.an(x);
        match block {
            Block::Joint => g[self.k] -= scale / (LN_2 * pn),
            b if self.eaves_concave_in(b) => {}
            _ => {
                let s = self.signal_sum(x);
                let r = self.coeff;
                if s > 0.0 {
                    let d = 1.0 / (LN_2 * (pn + r * s));
                    for gl in &mut g[..self.k] {
                        *gl += scale * r * d;
                    }
                    g[self.k] -= scale * r * s * d / pn;
                }
            }
        }
        mask(block, self.k, &mut g);
        g
    }

    /// Gradient of the convex function `h` subtracted in the block split.
    pub fn subtracted_grad(&self, block: Block, x: &[f64], omega: f64) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        let scale = self.bandwidth * (omega + 1.0);
        let s = self.signal_sum(x);
        let pn = self.an(x);
        let r = self.coeff;
        let d = 1.0 / (LN_2 * (pn + r * s));
        match block {
            Block::Joint => {
                for gl in &mut g[..self.k] {
                    *gl = -scale * r * d;
                }
                g[self.k] = -scale * d;
            }
            b if self.eaves_concave_in(b) => {
                // h = -scale * C_E
                if s > 0.0 {
                    for gl in &mut g[..self.k] {
                        *gl = -scale * r * d;
                    }
                    g[self.k] = scale * r * s * d / pn;
                }
            }
            _ => {}
        }
        mask(block, self.k, &mut g);
        g
    }
}

fn mask(block: Block, k: usize, g: &mut [f64]) {
    match block {
        Block::Signal => g[k] = 0.0,
        Block::ArtificialNoise => g[..k].iter_mut().for_each(|v| *v = 0.0),
        Block::Joint => {}
    }
}

pub(crate) fn to_vec(alloc: &PowerAllocation) -> Vec<f64> {
    let mut x = alloc.signal.clone();
    x.push(alloc.an);
    x
}

pub(crate) fn from_vec(x: &[f64]) -> PowerAllocation {
    let (an, signal) = x.split_last().expect("nonempty allocation vector");
    PowerAllocation { signal: signal.iter().map(|v| v.max(0.0)).collect(), an: an.max(0.0) }
}

/// `W C_sec - eta P_total`, the parametric objective of the ratio problem.
pub fn dinkelbach_objective(alloc: &PowerAllocation, eta: f64, dims: &ArrayDims, hw: &HardwareProfile) -> Result<f64> {
    let secrecy = secrecy_capacity_lower(alloc, dims, hw)?;
    Ok(hw.bandwidth * secrecy - eta * total_power(alloc, hw, dims))
}

/// Next ratio parameter: the secure EE at the current iterate.
pub fn eta_update(alloc: &PowerAllocation, dims: &ArrayDims, hw: &HardwareProfile) -> Result<f64> {
    crate::metrics::secure_ee(alloc, dims, hw)
}

/// Convex part of the penalized objective: `eta P_tot - W C_s + omega t`.
pub fn gamma1(alloc: &PowerAllocation, eta: f64, omega: f64, t: f64, dims: &ArrayDims, hw: &HardwareProfile) -> f64 {
    let sum_cap: f64 = alloc.signal.iter().map(|&p| crate::metrics::closed_actuator_capacity(p, hw, dims.n_tx)).sum();
    eta * total_power(alloc, hw, dims) - hw.bandwidth * sum_cap + omega * t
}

/// Subtracted part of the penalized objective: `-W (omega + 1) C_E`.
pub fn gamma2(alloc: &PowerAllocation, omega: f64, dims: &ArrayDims, hw: &HardwareProfile) -> Result<f64> {
    let ce = crate::metrics::closed_eaves_capacity(alloc, dims, hw)?;
    Ok(-hw.bandwidth * (omega + 1.0) * ce)
}
