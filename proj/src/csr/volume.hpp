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

#ifndef CSR_VOLUME_HPP
#define CSR_VOLUME_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace csr {

/// A single-channel volume of depth z-slices, each height x width pixels.
/// Intensities are stored as doubles in (z, y, x) row-major order; max_value
/// is the dynamic-range ceiling of the source data (255 for 8-bit, 65535 for
/// 16-bit, ...), carried explicitly because the metrics need the ceiling, not
/// the observed maximum. Instances are treated as immutable once filled and
/// can be shared freely across worker threads.
struct VolumeStack {
  std::int64_t depth = 0;
  std::int64_t height = 0;
  std::int64_t width = 0;
  double max_value = 255.0;
  std::vector<double> data;

  static VolumeStack zeros(std::int64_t depth, std::int64_t height,
                           std::int64_t width, double max_value) {
    VolumeStack s;
    s.depth = depth;
    s.height = height;
    s.width = width;
    s.max_value = max_value;
    s.data.assign(static_cast<std::size_t>(depth * height * width), 0.0);
    return s;
  }

  std::int64_t voxels() const { return depth * height * width; }

  std::int64_t index(std::int64_t z, std::int64_t y, std::int64_t x) const {
    return (z * height + y) * width + x;
  }

  double at(std::int64_t z, std::int64_t y, std::int64_t x) const {
    return data[static_cast<std::size_t>(index(z, y, x))];
  }

  double& at(std::int64_t z, std::int64_t y, std::int64_t x) {
    return data[static_cast<std::size_t>(index(z, y, x))];
  }

  /// Pointer to the start of slice z.
  const double* slice(std::int64_t z) const {
    return data.data() + z * height * width;
  }
  double* slice(std::int64_t z) { return data.data() + z * height * width; }
};

enum class MaskStrategy { RandomWithEndpoints, Stratified };

std::string to_string(MaskStrategy s);
MaskStrategy mask_strategy_from_string(const std::string& name);

/// The ordered set of retained z-indices out of n_slices. Both endpoints
/// (0 and n_slices-1) are always retained so the interpolation baselines
/// never extrapolate. Seed and strategy travel with the mask for provenance.
struct SamplingMask {
  std::int64_t n_slices = 0;
  std::vector<std::int64_t> kept;
  std::uint64_t seed = 0;
  MaskStrategy strategy = MaskStrategy::RandomWithEndpoints;
  double fraction = 0.0;

  std::int64_t kept_count() const {
    return static_cast<std::int64_t>(kept.size());
  }
};

/// One pixel's intensities along z at the mask's kept indices. `indices`
/// views the owning mask's kept list; the mask must outlive the trace.
struct PixelTrace {
  std::vector<double> values;
  std::span<const std::int64_t> indices;
  std::int64_t n_total = 0;
};

struct ValidationResult {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Diagnostic check of the VolumeStack invariants. Never throws; every
/// violated invariant is reported once, with the first offending voxel.
ValidationResult validate_stack(const VolumeStack& stack);

/// Sanity check of the SamplingMask invariants.
ValidationResult validate_mask(const SamplingMask& mask);

}  // namespace csr

#endif
