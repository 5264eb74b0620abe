// Copyright 2026 The qexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Noise sampling and readout mitigation through the public API.

use qexp_core::analysis::total_variation;
use qexp_core::circuit::simulate_ideal;
use qexp_core::experiments::{build_bomb, build_eraser, build_hardy};
use qexp_core::mitigation::{build_confusion_matrix, mitigate, mitigate_distribution, ConfusionMatrix};
use qexp_core::noise::*;
use qexp_core::state::Distribution;

#[test]
fn noiseless_device_reproduces_ideal_sampling() {
    let c = build_hardy(1.0, 2.0).unwrap();
    let state = simulate_ideal(&c).unwrap();
    let dev = DeviceModel::noiseless(3);
    for seed in [0, 1, 99] {
        assert_eq!(
            simulate_noisy(&c, &dev, 500, RandomSeed(seed)).unwrap(),
            sample_counts(&state, 500, RandomSeed(seed)).unwrap()
        );
    }
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let c = build_eraser(false);
    let dev = preset("london").unwrap();
    let a = simulate_noisy(&c, &dev, 2000, RandomSeed(3)).unwrap();
    let b = simulate_noisy(&c, &dev, 2000, RandomSeed(3)).unwrap();
    let other = simulate_noisy(&c, &dev, 2000, RandomSeed(4)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, other);
}

#[test]
fn sampled_noise_converges_to_exact_distribution() {
    let c = build_eraser(true);
    let dev = preset("vigo-08-20").unwrap();
    let exact = noisy_distribution_exact(&c, &dev).unwrap();
    let sampled = simulate_noisy(&c, &dev, 200_000, RandomSeed(21)).unwrap().to_distribution();
    assert!(total_variation(&exact, &sampled).unwrap() < 0.01);
}

#[test]
fn readout_flip_corrupts_and_mitigation_recovers_exactly() {
    let ideal = simulate_ideal(&build_eraser(true)).unwrap().probabilities();
    let readout = vec![ReadoutError { p01: 0.04, p10: 0.07 }, ReadoutError::symmetric(0.03)];
    let noisy = apply_readout_noise(&ideal, &readout).unwrap();
    let m = ConfusionMatrix::from_readout(&readout).unwrap();
    let fixed = mitigate_distribution(&noisy, &m).unwrap();
    assert!(total_variation(&fixed, &ideal).unwrap() < 1e-10);
    assert!(total_variation(&noisy, &ideal).unwrap() > 0.03);
}

#[test]
fn calibrated_matrix_mitigates_sampled_counts() {
    let dev = DeviceModel::noiseless(2).with_uniform_readout(ReadoutError::symmetric(0.05));
    let counts = simulate_noisy(&build_bomb(false), &dev, 50_000, RandomSeed(8)).unwrap();
    let m = build_confusion_matrix(&dev, 2, 50_000, RandomSeed(9)).unwrap();
    let fixed = mitigate(&counts, &m).unwrap();
    let truth = Distribution::from_pairs(2, [("00", 1.0)]).unwrap();
    assert!(total_variation(&fixed, &truth).unwrap() < 0.01);
    assert!(fixed.as_slice().iter().all(|p| *p >= 0.0));
    assert!((fixed.total() - 1.0).abs() < 1e-9);
}

#[test]
fn device_document_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vigo.json");
    let dev = preset("vigo-09-20").unwrap();
    std::fs::write(&path, dev.to_json()).unwrap();
    let back = load_device(path.to_str().unwrap(), 1).unwrap();
    assert_eq!(back, dev);
}

fn mean_tv(circuit: &qexp_core::Circuit, device: &DeviceModel, ideal: &Distribution) -> f64 {
    let tvs: Vec<f64> = (0..10)
        .map(|s| {
            let counts = simulate_noisy(circuit, device, 8192, RandomSeed(100 + s)).unwrap();
            total_variation(&counts.to_distribution(), ideal).unwrap()
        })
        .collect();
    tvs.iter().sum::<f64>() / tvs.len() as f64
}

#[test]
fn doubling_rates_does_not_reduce_distance_exactly() {
    let dev = preset("vigo-08-20").unwrap();
    let doubled = dev.scaled(2.0).unwrap();
    for c in [build_bomb(true), build_bomb(false), build_eraser(true), build_eraser(false)] {
        let ideal = simulate_ideal(&c).unwrap().probabilities();
        let once = total_variation(&noisy_distribution_exact(&c, &dev).unwrap(), &ideal).unwrap();
        let twice = total_variation(&noisy_distribution_exact(&c, &doubled).unwrap(), &ideal).unwrap();
        assert!(twice >= once - 1e-12, "{}: {once} -> {twice}", c.name());
    }
}

#[test]
fn doubling_rates_sampled_probe() {
    let dev = preset("vigo-08-20").unwrap();
    let doubled = dev.scaled(2.0).unwrap();
    // bomb-present output is uniform and stays uniform under Pauli and
    // symmetric readout noise, so only shot noise separates the two
    let c = build_bomb(true);
    let ideal = simulate_ideal(&c).unwrap().probabilities();
    let (once, twice) = (mean_tv(&c, &dev, &ideal), mean_tv(&c, &doubled, &ideal));
    println!("bomb present: {once:.5} -> {twice:.5}");
    assert!((once - twice).abs() < 0.01);

    let c = build_bomb(false);
    let ideal = simulate_ideal(&c).unwrap().probabilities();
    let (once, twice) = (mean_tv(&c, &dev, &ideal), mean_tv(&c, &doubled, &ideal));
    assert!(twice > once, "{once} -> {twice}");
}
