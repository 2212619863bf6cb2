//! Downlink channel model.
//!
//! Every link is i.i.d. quasi-static flat Rayleigh fading scaled by a
//! distance-based path loss `beta = kappa / l^chi`, where `kappa` is an
//! optional lognormal shadowing factor. The small-scale entries are
//! circularly-symmetric complex Gaussians with unit variance.
//!
//! All sampling is driven by an explicit `u64` seed. Independent random
//! quantities (small-scale fading, shadowing, RF phases) draw from separate
//! ChaCha streams of the same seed, so each can be reproduced on its own.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::{CMatrix, Error, Result};

pub(crate) const STREAM_SMALL_SCALE: u64 = 0;
pub(crate) const STREAM_SHADOWING: u64 = 1;
pub(crate) const STREAM_RF_PHASES: u64 = 2;

/// RNG for one named stream of a seed.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives the seed of one Monte Carlo trial from the root seed.
///
/// The mapping is a pure function of its arguments, so trials can be run in
/// any order or in parallel.
pub fn trial_seed(root_seed: u64, value_index: usize, trial_index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream(((value_index as u64) << 32) | (trial_index as u64 & 0xffff_ffff));
    rng.next_u64()
}

/// Antenna and user counts shared by the precoders and the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArrayDims {
    /// Transmit antennas at the gateway.
    pub n_tx: usize,
    /// RF chains at the gateway.
    pub n_rf: usize,
    /// Single-antenna actuators.
    pub k: usize,
    /// Eavesdropper antennas.
    pub m: usize,
    /// Index of the actuator the eavesdropper overhears.
    pub target: usize,
}

impl ArrayDims {
    pub fn new(n_tx: usize, n_rf: usize, k: usize, m: usize) -> Self {
        Self { n_tx, n_rf, k, m, target: 0 }
    }

    /// Number of artificial-noise streams, `N_RF - K`.
    pub fn n_an(&self) -> usize {
        self.n_rf.saturating_sub(self.k)
    }

    /// Checks `K < N_RF < N_Tx`, `M >= 1` and, when `strong_eavesdropper`
    /// is set, `M > N_RF - K`.
    pub fn validate(&self, strong_eavesdropper: bool) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidGeometry("K >= 1".into()));
        }
        if !(self.k < self.n_rf) {
            return Err(Error::InvalidGeometry("K < N_RF".into()));
        }
        if !(self.n_rf < self.n_tx) {
            return Err(Error::InvalidGeometry("N_RF < N_Tx".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidGeometry("M >= 1".into()));
        }
        if strong_eavesdropper && !(self.m > self.n_rf - self.k) {
            return Err(Error::InvalidGeometry("M > N_RF - K".into()));
        }
        if self.target >= self.k {
            return Err(Error::InvalidGeometry("target actuator index < K".into()));
        }
        Ok(())
    }
}

/// Unvalidated description of a scenario; see [`ScenarioGeometry::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySpec {
    pub dims: ArrayDims,
    /// Distance of each actuator in meters; a single entry is broadcast to all K.
    pub actuator_distances: Vec<f64>,
    pub eaves_distance: f64,
    pub path_loss_exponent: f64,
    /// Standard deviation of the zero-mean dB shadowing term.
    pub shadowing_std_db: f64,
    pub shadowing_enabled: bool,
    /// Draw one shadowing factor for every link instead of one per link.
    pub shared_shadowing: bool,
    /// Enforce the `M > N_RF - K` eavesdropper assumption.
    pub strong_eavesdropper: bool,
}

impl Default for GeometrySpec {
    fn default() -> Self {
        Self {
            dims: ArrayDims::new(110, 50, 40, 30),
            actuator_distances: vec![50.0],
            eaves_distance: 50.0,
            path_loss_exponent: 4.6,
            shadowing_std_db: 9.2,
            shadowing_enabled: false,
            shared_shadowing: false,
            strong_eavesdropper: true,
        }
    }
}

/// Validated scenario geometry. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGeometry {
    spec: GeometrySpec,
}

impl ScenarioGeometry {
    pub fn new(mut spec: GeometrySpec) -> Result<Self> {
        spec.dims.validate(spec.strong_eavesdropper)?;
        match spec.actuator_distances.len() {
            1 => spec.actuator_distances = vec![spec.actuator_distances[0]; spec.dims.k],
            n if n == spec.dims.k => {}
            n => {
                return Err(Error::InvalidGeometry(format!("actuator distance count ({n}) equals K ({})", spec.dims.k)))
            }
        }
        if spec.actuator_distances.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::InvalidGeometry("actuator distances > 0".into()));
        }
        if !(spec.eaves_distance > 0.0) || !spec.eaves_distance.is_finite() {
            return Err(Error::InvalidGeometry("eavesdropper distance > 0".into()));
        }
        if !(spec.path_loss_exponent > 0.0) {
            return Err(Error::InvalidGeometry("path loss exponent > 0".into()));
        }
        if !(spec.shadowing_std_db >= 0.0) {
            return Err(Error::InvalidGeometry("shadowing spread >= 0".into()));
        }
        Ok(Self { spec })
    }

    pub fn dims(&self) -> &ArrayDims {
        &self.spec.dims
    }

    pub fn spec(&self) -> &GeometrySpec {
        &self.spec
    }

    pub fn actuator_distances(&self) -> &[f64] {
        &self.spec.actuator_distances
    }

    pub fn eaves_distance(&self) -> f64 {
        self.spec.eaves_distance
    }

    pub fn path_loss_exponent(&self) -> f64 {
        self.spec.path_loss_exponent
    }
}

impl Default for ScenarioGeometry {
    fn default() -> Self {
        Self::new(GeometrySpec::default()).expect("default geometry is valid")
    }
}

/// One Monte Carlo draw of every downlink channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `N_Tx x K`; column k is `h_k = sqrt(beta_k) g_k`.
    pub h: CMatrix,
    /// `N_Tx x M`.
    pub h_eaves: CMatrix,
    pub beta_actuators: Vec<f64>,
    pub beta_eaves: f64,
}

fn complex_gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    })
}

/// Samples the unit-variance small-scale fading `(G, G_E)`.
pub fn sample_small_scale(geometry: &ScenarioGeometry, seed: u64) -> (CMatrix, CMatrix) {
    let dims = geometry.dims();
    let mut rng = stream_rng(seed, STREAM_SMALL_SCALE);
    let g = complex_gaussian_matrix(dims.n_tx, dims.k, &mut rng);
    let g_eaves = complex_gaussian_matrix(dims.n_tx, dims.m, &mut rng);
    (g, g_eaves)
}

/// Linear path-loss gain `kappa / l^chi`, with `kappa = 10^(shadow_db / 10)`.
pub fn path_loss(distance: f64, exponent: f64, shadow_db: Option<f64>) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::Domain(format!("distance must be positive, got {distance}")));
    }
    let kappa = shadow_db.map_or(1.0, |db| 10f64.powf(db / 10.0));
    Ok(kappa / distance.powf(exponent))
}

/// Samples all channels of one trial.
pub fn assemble_channels(geometry: &ScenarioGeometry, seed: u64) -> Result<ChannelRealization> {
    let dims = geometry.dims();
    let (mut h, mut h_eaves) = sample_small_scale(geometry, seed);

    let spec = geometry.spec();
    let shadows: Vec<Option<f64>> = if spec.shadowing_enabled {
        let mut rng = stream_rng(seed, STREAM_SHADOWING);
        let normal = Normal::new(0.0, spec.shadowing_std_db)
            .map_err(|e| Error::InvalidGeometry(format!("shadowing spread: {e}")))?;
        if spec.shared_shadowing {
            let s = normal.sample(&mut rng);
            vec![Some(s); dims.k + 1]
        } else {
            (0..=dims.k).map(|_| Some(normal.sample(&mut rng))).collect()
        }
    } else {
        vec![None; dims.k + 1]
    };

    let exponent = geometry.path_loss_exponent();
    let beta_actuators = geometry
        .actuator_distances()
        .iter()
        .zip(&shadows)
        .map(|(&d, &s)| path_loss(d, exponent, s))
        .collect::<Result<Vec<_>>>()?;
    let beta_eaves = path_loss(geometry.eaves_distance(), exponent, shadows[dims.k])?;

    for (k, &beta) in beta_actuators.iter().enumerate() {
        h.column_mut(k).scale_mut(beta.sqrt());
    }
    h_eaves.scale_mut(beta_eaves.sqrt());

    Ok(ChannelRealization { h, h_eaves, beta_actuators, beta_eaves })
}
