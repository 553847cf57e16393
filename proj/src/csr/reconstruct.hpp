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

#ifndef CSR_RECONSTRUCT_HPP
#define CSR_RECONSTRUCT_HPP

#include <string>

#include "csr/bpdn.hpp"
#include "csr/owlqn.hpp"
#include "csr/volume.hpp"

namespace csr {

enum class Method { CS, Linear, CubicSpline };

Method method_from_string(const std::string& name);
std::string to_string(Method method);

struct ReconstructParams {
  Method method = Method::CS;
  double c = kDefaultL1Weight;  // L1 weight on [0,1]-normalized intensities
  SolverOptions solver;         // l1_weight field is ignored; c above wins
  bool clamp_known = true;      // overwrite sampled slices with measured data
  int workers = 0;              // 0 = hardware concurrency
  std::int64_t progress_interval = 0;  // pixels between stderr updates; 0=off
};

struct RunStats {
  std::int64_t pixels = 0;
  std::int64_t solver_failures = 0;   // non-finite solves, fell back to spline
  std::int64_t non_converged = 0;     // finite result but tolerance not reached
  std::int64_t total_iterations = 0;  // summed over all CS pixel solves
  std::int64_t clipped_values = 0;    // outputs clipped into [0, max_value]
  double wall_ms = 0.0;
};

/// Runs the selected per-trace method over every (x, y) pixel of the
/// subsampled stack and assembles the full-depth volume. Pixels are
/// distributed over a worker pool with disjoint output writes, so the result
/// is bit-identical for any worker count. Intensities are normalized to
/// [0, 1] for the CS solve and rescaled after; with clamp_known the sampled
/// slices equal the input bit-exactly. Output is clipped to [0, max_value]
/// after clamping. Throws on shape/mask mismatch or when every pixel fails.
VolumeStack reconstruct_volume(const VolumeStack& sub,
                               const SamplingMask& mask,
                               const ReconstructParams& params,
                               RunStats* stats = nullptr);

}  // namespace csr

#endif
