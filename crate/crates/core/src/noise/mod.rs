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

//! Sampling, synthetic device noise and calibration records.

pub mod device;
pub mod sampling;

pub use device::{load_device, preset, preset_names, DeviceModel, ReadoutError, BOWTIE, T_SHAPE};
pub use sampling::{
    apply_readout_noise, noisy_distribution_exact, sample_counts, sample_distribution, shot_rng,
    simulate_noisy, NoiseChannel, RandomSeed, MAX_EXACT_TRAJECTORIES,
};
