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

#ifndef CSR_INTERPOLATE_HPP
#define CSR_INTERPOLATE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "csr/volume.hpp"

namespace csr {

/// Piecewise-linear interpolation of (index, value) pairs evaluated at all
/// n_total integer z-positions. Requires M >= 2 samples with both endpoints
/// present (indices[0] == 0, indices[M-1] == n_total-1), so the evaluation
/// never extrapolates. Exact at sampled indices.
std::vector<double> interpolate_linear(std::span<const double> values,
                                       std::span<const std::int64_t> indices,
                                       std::int64_t n_total);

/// Natural cubic spline (zero second derivative at both end knots) through
/// the M samples, evaluated at all n_total integer z-positions. Exact at the
/// knots; with M == 2 it degenerates to the linear interpolant.
std::vector<double> interpolate_cubic_spline(
    std::span<const double> values, std::span<const std::int64_t> indices,
    std::int64_t n_total);

inline std::vector<double> interpolate_linear(const PixelTrace& trace) {
  return interpolate_linear(trace.values, trace.indices, trace.n_total);
}

inline std::vector<double> interpolate_cubic_spline(const PixelTrace& trace) {
  return interpolate_cubic_spline(trace.values, trace.indices, trace.n_total);
}

}  // namespace csr

#endif
