use num_complex::Complex64;
use proptest::prelude::*;
use seehp::channel::{assemble_channels, sample_small_scale, trial_seed, ArrayDims, GeometrySpec, ScenarioGeometry};
use seehp::metrics::{exact_actuator_sinr, PowerAllocation};
use seehp::precoding::{build_precoders, equivalent_channels, PowerNormalization};
use seehp::CMatrix;

fn unit_loss(dims: ArrayDims) -> ScenarioGeometry {
    ScenarioGeometry::new(GeometrySpec {
        dims,
        actuator_distances: vec![1.0],
        eaves_distance: 1.0,
        strong_eavesdropper: false,
        ..GeometrySpec::default()
    })
    .unwrap()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn small_scale_entries_have_unit_power() {
    let geometry = ScenarioGeometry::default();
    let (mut sum, mut n) = (0.0, 0usize);
    for t in 0..3 {
        let (h, h_e) = sample_small_scale(&geometry, trial_seed(7, 0, t));
        sum += h.iter().chain(h_e.iter()).map(|z| z.norm_sqr()).sum::<f64>();
        n += h.len() + h_e.len();
    }
    assert!(n >= 10_000);
    let mean = sum / n as f64;
    assert!((mean - 1.0).abs() < 0.02, "E|G|^2 = {mean}");
}

#[test]
fn column_gain_matches_antenna_count() {
    let geometry = ScenarioGeometry::default();
    let n_tx = geometry.dims().n_tx as f64;
    let draws = 1000;
    let mut sum = 0.0;
    for t in 0..draws {
        let real = assemble_channels(&geometry, trial_seed(3, 0, t)).unwrap();
        sum += real.h.column(0).norm_squared() / real.beta_actuators[0];
    }
    let mean = sum / draws as f64;
    assert!((mean / n_tx - 1.0).abs() < 0.03, "mean ||h||^2 / beta = {mean}");
}

#[test]
fn statistical_normalization_holds_on_average() {
    // few RF chains relative to antennas, where the average claim holds
    let geometry = unit_loss(ArrayDims::new(110, 4, 2, 3));
    let alloc = PowerAllocation::new(vec![0.05, 0.05], 0.1).unwrap();
    let draws = 1000;
    let mut radiated = 0.0;
    for t in 0..draws {
        let seed = trial_seed(11, 0, t);
        let real = assemble_channels(&geometry, seed).unwrap();
        let p = build_precoders(&real, &geometry, &alloc, seed, PowerNormalization::Statistical).unwrap();
        radiated += (&p.f * p.b_s.column(0)).norm_squared();
    }
    let ratio = radiated / draws as f64 / alloc.signal[0];
    assert!((ratio - 1.0).abs() < 0.1, "mean radiated / allocated = {ratio}");
}

fn dims_strategy() -> impl Strategy<Value = ArrayDims> {
    (8usize..40).prop_flat_map(|n_tx| {
        (Just(n_tx), 2usize..n_tx.min(12)).prop_flat_map(|(n_tx, n_rf)| {
            (Just(n_tx), Just(n_rf), 1usize..n_rf, 1usize..8)
                .prop_map(|(n_tx, n_rf, k, m)| ArrayDims::new(n_tx, n_rf, k, m))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn realization_is_reproducible(dims in dims_strategy(), seed in any::<u64>()) {
        let geometry = unit_loss(dims);
        let a = assemble_channels(&geometry, seed).unwrap();
        let b = assemble_channels(&geometry, seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn precoder_structure(
        dims in dims_strategy(),
        seed in any::<u64>(),
        total in 0.01f64..1.0,
        an in 0.01f64..1.0,
        exact in any::<bool>(),
    ) {
        let geometry = unit_loss(dims);
        let real = assemble_channels(&geometry, seed).unwrap();
        let alloc = PowerAllocation::equal_split(dims.k, total, an).unwrap();
        let mode = if exact { PowerNormalization::Exact } else { PowerNormalization::Statistical };
        let p = match build_precoders(&real, &geometry, &alloc, seed, mode) {
            Ok(p) => p,
            Err(seehp::Error::DegenerateChannel(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };

        let target = 1.0 / dims.n_tx as f64;
        for z in p.f.iter() {
            prop_assert!((z.norm_sqr() - target).abs() <= 1e-15);
        }

        let eq = equivalent_channels(&real, &p.f).unwrap();
        let through = &eq.heq_h * &p.b_s;
        let zmax = p.zeta.iter().cloned().fold(0.0, f64::max);
        let mut off = through.clone();
        for (i, &z) in p.zeta.iter().enumerate() {
            off[(i, i)] -= Complex64::new(z, 0.0);
        }
        prop_assert!(max_abs(&off) <= 1e-8 * zmax, "ZF residual {}", max_abs(&off));

        let leak = max_abs(&(&eq.heq_h * &p.b_n)) / (max_abs(&eq.heq_h) * max_abs(&p.b_n));
        prop_assert!(leak <= 1e-10, "AN leakage {leak}");

        let an_power = (&p.f * &p.b_n).norm_squared();
        prop_assert!((an_power - an).abs() <= 1e-9 * an);

        for k in 0..dims.k {
            let sinr = exact_actuator_sinr(&real, &p, k, 1.0).unwrap();
            let closed = p.zeta[k] * p.zeta[k];
            prop_assert!((sinr - closed).abs() <= 1e-8 * closed, "SINR {sinr} vs {closed}");
        }
    }
}
