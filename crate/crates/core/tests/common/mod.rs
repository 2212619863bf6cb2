//! Independent closed-form evaluators and brute-force oracles shared by the
//! integration tests. Nothing here calls the library's metric functions.

#![allow(dead_code)]

use std::f64::consts::PI;

use seehp::channel::{ArrayDims, GeometrySpec, ScenarioGeometry};
use seehp::metrics::HardwareProfile;

/// Two actuators, strong eavesdropper (`M = 3 > N_RF - K = 2`).
pub fn toy_dims() -> ArrayDims {
    ArrayDims::new(16, 4, 2, 3)
}

/// Two actuators, weak eavesdropper (`M = 1 < N_RF - K = 4`).
pub fn weak_toy_dims() -> ArrayDims {
    ArrayDims::new(16, 6, 2, 1)
}

pub fn toy_hw() -> HardwareProfile {
    HardwareProfile {
        bandwidth: 1.0,
        noise_power: 1.0,
        p_constant: 1.0,
        p_phase_shifter: 0.01,
        p_max: 1.0,
        min_secrecy: 1.0,
        ..HardwareProfile::default()
    }
}

pub fn geometry(dims: ArrayDims, strong: bool) -> ScenarioGeometry {
    ScenarioGeometry::new(GeometrySpec { dims, strong_eavesdropper: strong, ..GeometrySpec::default() })
        .expect("valid test geometry")
}

/// Hand-written closed forms for one scenario.
#[derive(Debug, Clone)]
pub struct Model {
    pub k: usize,
    pub gain: f64,
    pub coeff: f64,
    pub bandwidth: f64,
    pub alpha: f64,
    pub fixed: f64,
    pub p_max: f64,
    pub c0: f64,
    pub t: f64,
}

impl Model {
    pub fn new(dims: &ArrayDims, hw: &HardwareProfile, t: f64) -> Self {
        let n_e = (dims.n_rf - dims.k) as f64;
        let (m, k) = (dims.m as f64, dims.k as f64);
        Self {
            k: dims.k,
            gain: PI * (dims.n_tx as f64 - 1.0) / (4.0 * hw.noise_power),
            coeff: m / (k * (1.0 - m / n_e)),
            bandwidth: hw.bandwidth,
            alpha: hw.amp_efficiency,
            fixed: dims.n_rf as f64 * (hw.p_rf_chain + dims.n_tx as f64 * hw.p_phase_shifter) + hw.p_constant,
            p_max: hw.p_max,
            c0: hw.min_secrecy,
            t,
        }
    }

    pub fn cap(&self, p: f64) -> f64 {
        (1.0 + self.gain * p).log2()
    }

    /// Eavesdropper capacity, `None` outside its domain.
    pub fn eaves(&self, s: f64, pn: f64) -> Option<f64> {
        if pn <= 0.0 {
            return if s == 0.0 { Some(0.0) } else { None };
        }
        let arg = 1.0 + self.coeff * s / pn;
        (arg > 0.0).then(|| arg.log2())
    }

    pub fn secrecy(&self, p: &[f64], pn: f64) -> Option<f64> {
        let s: f64 = p.iter().sum();
        let ce = self.eaves(s, pn)?;
        let others: f64 = p[1..].iter().map(|&x| self.cap(x)).sum();
        Some(others + (self.cap(p[0]) - ce).max(0.0))
    }

    pub fn power(&self, p: &[f64], pn: f64) -> f64 {
        (p.iter().sum::<f64>() + pn) / self.alpha + self.fixed
    }

    pub fn ee(&self, p: &[f64], pn: f64) -> Option<f64> {
        Some(self.bandwidth * self.secrecy(p, pn)? / self.power(p, pn))
    }

    /// Penalized objective `eta P - W C_s + W (omega + 1) C_E + omega t`.
    pub fn penalized(&self, p: &[f64], pn: f64, eta: f64, omega: f64) -> Option<f64> {
        let s: f64 = p.iter().sum();
        let ce = self.eaves(s, pn)?;
        let cs: f64 = p.iter().map(|&x| self.cap(x)).sum();
        Some(eta * self.power(p, pn) - self.bandwidth * cs + self.bandwidth * (omega + 1.0) * ce + omega * self.t)
    }

    /// Budget, `C_E >= -t` and `sum C_l >= C_0 - t`.
    pub fn relaxed(&self, p: &[f64], pn: f64) -> bool {
        let s: f64 = p.iter().sum();
        if s + pn > self.p_max * (1.0 + 1e-12) {
            return false;
        }
        let Some(ce) = self.eaves(s, pn) else { return false };
        let cs: f64 = p.iter().map(|&x| self.cap(x)).sum();
        ce >= -self.t - 1e-9 && cs >= self.c0 - self.t
    }

    /// Relaxed set plus the secrecy requirement.
    pub fn feasible(&self, p: &[f64], pn: f64) -> bool {
        self.relaxed(p, pn) && self.secrecy(p, pn).is_some_and(|c| c >= self.c0)
    }
}

/// Visits every grid point `(P_1, ..., P_K, P_n)` with spacing `P_max / steps`
/// and total power within the budget.
pub fn for_each_grid_point(k: usize, p_max: f64, steps: usize, mut f: impl FnMut(&[f64], f64)) {
    let h = p_max / steps as f64;
    let mut idx = vec![0usize; k];
    loop {
        let used: usize = idx.iter().sum();
        if used <= steps {
            let p: Vec<f64> = idx.iter().map(|&i| i as f64 * h).collect();
            for j in 1..=(steps - used) {
                f(&p, j as f64 * h);
            }
        }
        // odometer increment
        let mut d = 0;
        loop {
            if d == k {
                return;
            }
            idx[d] += 1;
            if idx[d] <= steps {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Best feasible EE on the grid with its point.
pub fn grid_max_ee(model: &Model, steps: usize) -> Option<(f64, Vec<f64>, f64)> {
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    for_each_grid_point(model.k, model.p_max, steps, |p, pn| {
        if !model.feasible(p, pn) {
            return;
        }
        if let Some(ee) = model.ee(p, pn) {
            if best.as_ref().is_none_or(|b| ee > b.0) {
                best = Some((ee, p.to_vec(), pn));
            }
        }
    });
    best
}

/// Smallest penalized objective on the relaxed set of the grid.
pub fn grid_min_penalized(model: &Model, steps: usize, eta: f64, omega: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for_each_grid_point(model.k, model.p_max, steps, |p, pn| {
        if !model.relaxed(p, pn) {
            return;
        }
        if let Some(v) = model.penalized(p, pn, eta, omega) {
            if best.is_none_or(|b| v < b) {
                best = Some(v);
            }
        }
    });
    best
}

/// Maximizer of a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..iters {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}

/// Root of an increasing function on `[lo, hi]` by bisection, clamped to the
/// interval when there is no sign change.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    if f(lo) >= 0.0 {
        return lo;
    }
    if f(hi) <= 0.0 {
        return hi;
    }
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `tol = max(SE, 1e-6 |value|)`, the noise allowance for trend checks.
pub fn trend_tol(value: f64, se: f64) -> f64 {
    se.max(1e-6 * value.abs())
}
