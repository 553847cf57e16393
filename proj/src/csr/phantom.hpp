/*
 * csrecon: compressive-sensing reconstruction of microscopy z-stacks
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CSR_PHANTOM_HPP
#define CSR_PHANTOM_HPP

#include "csr/volume.hpp"

namespace csr {

enum class PhantomKind { GaussianBlobs, BandLimitedNoise };

PhantomKind phantom_kind_from_string(const std::string& name);
std::string to_string(PhantomKind kind);

struct Blob {
  double cx, cy, cz;   // center, voxel units
  double sx, sy, sz;   // per-axis standard deviations; sz >= 4
  double amplitude;    // peak intensity contribution
};

/// The blob parameters a GaussianBlobs phantom of this shape and seed is
/// built from. Deterministic; exposed so tests can bound the z-curvature of
/// the noiseless phantom analytically.
std::vector<Blob> phantom_blob_params(std::int64_t width, std::int64_t height,
                                      std::int64_t depth, std::uint64_t seed,
                                      double max_value);

/// Synthetic ground-truth volume generator.
///
/// GaussianBlobs: a sum of max(3, depth/20) anisotropic 3D Gaussians with
/// sigma_z >= 4 voxels, emulating an axially over-sampled stack of labeled
/// structures. BandLimitedNoise: white noise whose per-trace spectrum is
/// truncated to the lowest 10% of transform coefficients along z, then
/// smoothed spatially with a 3x3 binomial kernel; isolates the z-sparsity
/// assumption.
///
/// noise_snr_db adds zero-mean Gaussian noise at the given SNR (signal power
/// measured on the clean volume); pass a non-positive or non-finite value to
/// disable. Output is clipped to [0, max_value]. Deterministic given the
/// seed.
VolumeStack generate_phantom(std::int64_t width, std::int64_t height,
                             std::int64_t depth, PhantomKind kind,
                             std::uint64_t seed, double max_value,
                             double noise_snr_db);

}  // namespace csr

#endif
