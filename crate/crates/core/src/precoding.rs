//! Hybrid RF/baseband precoder construction.
//!
//! The RF stage is a constant-modulus phase-shifter network shared by the
//! data streams and the artificial noise. Its first K columns co-phase with
//! each actuator's channel; the remaining `N_RF - K` columns carry random
//! phases. The baseband stage zero-forces the equivalent channel for the data
//! streams and steers artificial noise into its right null space.

use nalgebra::{DMatrix, DVector, SVD};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use crate::channel::{stream_rng, ChannelRealization, ScenarioGeometry, STREAM_RF_PHASES};
use crate::metrics::PowerAllocation;
use crate::{CMatrix, Error, Result};

/// Relative singular-value threshold below which a direction counts as null.
pub const NULL_SPACE_THRESHOLD: f64 = 1e-10;

/// Largest condition number of the equivalent channel accepted by ZF.
pub const MAX_CONDITION_NUMBER: f64 = 1e10;

/// How the ZF columns are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerNormalization {
    /// `zeta_k = sqrt(pi P_k (N_Tx - 1) / 4)`, which meets `||F b_k||^2 = P_k`
    /// only on average over channel draws.
    #[default]
    Statistical,
    /// Each column is rescaled so `||F b_k||^2 = P_k` holds per realization.
    Exact,
}

/// Channels seen through the RF precoder.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentChannels {
    /// `H^H F`, `K x N_RF`.
    pub heq_h: CMatrix,
    /// `H_E^H F`, `M x N_RF`.
    pub heq_eaves_h: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    /// Shared RF precoder, `N_Tx x N_RF`.
    pub f: CMatrix,
    /// ZF signal precoder, `N_RF x K`.
    pub b_s: CMatrix,
    /// Artificial-noise precoder, `N_RF x (N_RF - K)`.
    pub b_n: CMatrix,
    /// Diagonal of `H_eq^H B_s`.
    pub zeta: Vec<f64>,
    pub normalization: PowerNormalization,
}

/// Builds the phase-only RF precoder.
///
/// Entry `(i, j)` of the first K columns is `exp(j * arg H[i, j]) / sqrt(N_Tx)`;
/// the other columns use phases drawn uniformly from `[0, 2 pi)`.
pub fn build_rf_precoder(realization: &ChannelRealization, geometry: &ScenarioGeometry, seed: u64) -> CMatrix {
    let dims = geometry.dims();
    let amp = 1.0 / (dims.n_tx as f64).sqrt();
    let mut rng = stream_rng(seed, STREAM_RF_PHASES);
    let mut f = CMatrix::zeros(dims.n_tx, dims.n_rf);
    for j in 0..dims.n_rf {
        for i in 0..dims.n_tx {
            let phase = if j < dims.k { realization.h[(i, j)].arg() } else { rng.random_range(0.0..2.0 * PI) };
            f[(i, j)] = Complex64::from_polar(amp, phase);
        }
    }
    f
}

pub fn equivalent_channels(realization: &ChannelRealization, f: &CMatrix) -> Result<EquivalentChannels> {
    let n_tx = f.nrows();
    if realization.h.nrows() != n_tx || realization.h_eaves.nrows() != n_tx {
        return Err(Error::Dimension(format!(
            "channels have {} / {} rows, RF precoder has {}",
            realization.h.nrows(),
            realization.h_eaves.nrows(),
            n_tx
        )));
    }
    Ok(EquivalentChannels { heq_h: realization.h.adjoint() * f, heq_eaves_h: realization.h_eaves.adjoint() * f })
}

/// ZF normalizer `sqrt(pi P_k (N_Tx - 1) / 4)`.
pub fn zf_normalizer(p_k: f64, n_tx: usize) -> f64 {
    (PI * p_k * (n_tx as f64 - 1.0) / 4.0).sqrt()
}

fn singular_values(m: &CMatrix) -> Result<DVector<f64>> {
    SVD::try_new(m.clone(), false, false, f64::EPSILON, 0)
        .map(|svd| svd.singular_values)
        .ok_or_else(|| Error::DegenerateChannel("SVD did not converge".into()))
}

/// Zero-forcing signal precoder `B_s = H_eq (H_eq^H H_eq)^-1 D`.
pub fn zf_baseband(eq: &EquivalentChannels, alloc: &PowerAllocation, n_tx: usize) -> Result<(CMatrix, Vec<f64>)> {
    let k = eq.heq_h.nrows();
    if alloc.signal.len() != k {
        return Err(Error::Dimension(format!("allocation has {} signal powers for {k} actuators", alloc.signal.len())));
    }
    let sv = singular_values(&eq.heq_h)?;
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > 0.0) || smax / smin > MAX_CONDITION_NUMBER {
        return Err(Error::DegenerateChannel(format!("equivalent channel condition number {:.3e}", smax / smin)));
    }

    let zeta: Vec<f64> = alloc.signal.iter().map(|&p| zf_normalizer(p, n_tx)).collect();
    let heq = eq.heq_h.adjoint();
    let gram = &eq.heq_h * &heq;
    let chol =
        gram.cholesky().ok_or_else(|| Error::DegenerateChannel("Gram matrix is not positive definite".into()))?;
    let d = DMatrix::from_diagonal(&DVector::from_iterator(k, zeta.iter().map(|&z| Complex64::new(z, 0.0))));
    let b_s = heq * chol.solve(&d);
    Ok((b_s, zeta))
}

/// Orthonormal basis of the right null space of `heq_h` (`N_RF x (N_RF - K)`).
pub fn null_space(heq_h: &CMatrix) -> Result<CMatrix> {
    let (k, n_rf) = heq_h.shape();
    if k >= n_rf {
        return Err(Error::Dimension(format!("{k} actuators leave no null space in {n_rf} RF chains")));
    }
    let mut square = CMatrix::zeros(n_rf, n_rf);
    square.rows_mut(0, k).copy_from(heq_h);
    let svd = SVD::try_new(square, false, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::DegenerateChannel("SVD did not converge".into()))?;
    let v = svd.v_t.expect("requested V").adjoint();
    let smax = svd.singular_values.max();
    let null: Vec<usize> = (0..n_rf).filter(|&i| svd.singular_values[i] < NULL_SPACE_THRESHOLD * smax).collect();
    if null.len() != n_rf - k {
        return Err(Error::DegenerateChannel(format!(
            "equivalent channel has rank {} instead of {k}",
            n_rf - null.len()
        )));
    }
    Ok(CMatrix::from_fn(n_rf, null.len(), |i, j| v[(i, null[j])]))
}

/// Artificial-noise precoder: null-space basis scaled so `||F B_n||_F^2 = p_n`.
pub fn an_baseband(eq: &EquivalentChannels, f: &CMatrix, p_n: f64) -> Result<CMatrix> {
    if !(p_n >= 0.0) {
        return Err(Error::Domain(format!("artificial-noise power must be >= 0, got {p_n}")));
    }
    let basis = null_space(&eq.heq_h)?;
    if p_n == 0.0 {
        return Ok(CMatrix::zeros(basis.nrows(), basis.ncols()));
    }
    let radiated = (f * &basis).norm_squared();
    Ok(basis * Complex64::new((p_n / radiated).sqrt(), 0.0))
}

/// Builds the complete precoder set for one realization and allocation.
pub fn build_precoders(
    realization: &ChannelRealization,
    geometry: &ScenarioGeometry,
    alloc: &PowerAllocation,
    seed: u64,
    normalization: PowerNormalization,
) -> Result<PrecoderSet> {
    let f = build_rf_precoder(realization, geometry, seed);
    let eq = equivalent_channels(realization, &f)?;
    let (mut b_s, mut zeta) = zf_baseband(&eq, alloc, geometry.dims().n_tx)?;
    if normalization == PowerNormalization::Exact {
        let radiated = &f * &b_s;
        for (k, &p) in alloc.signal.iter().enumerate() {
            let current = radiated.column(k).norm_squared();
            if current > 0.0 {
                let s = (p / current).sqrt();
                b_s.column_mut(k).scale_mut(s);
                zeta[k] *= s;
            }
        }
    }
    let b_n = an_baseband(&eq, &f, alloc.an)?;
    Ok(PrecoderSet { f, b_s, b_n, zeta, normalization })
}
