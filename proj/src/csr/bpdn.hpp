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

#ifndef CSR_BPDN_HPP
#define CSR_BPDN_HPP

#include <memory>
#include <span>
#include <vector>

#include "csr/dct.hpp"
#include "csr/owlqn.hpp"
#include "csr/volume.hpp"

namespace csr {

/// Default L1 weight for basis-pursuit denoising of traces normalized to
/// [0, 1]. Corresponds to C = 4 on an 8-bit intensity scale; the objective
/// is scale-covariant, so the weight must shrink with the data when
/// intensities are divided by max_value.
inline constexpr double kDefaultL1Weight = 4.0 / 255.0;

/// One per-pixel basis-pursuit-denoising instance: recover the transform
/// coefficients x of a full-length z-profile from the M sampled intensities,
/// minimizing  sum_m (idct(x)[indices[m]] - b_m)^2 + c * ||x||_1.
/// The sampled-transform operator is shared: every pixel of a volume with the
/// same mask reuses one SampledDct.
struct BpdnProblem {
  std::vector<double> values;           // b_m at the kept indices
  std::shared_ptr<const SampledDct> op;
  std::int64_t n_total = 0;
  double c = 0.0;

  static BpdnProblem from_trace(const PixelTrace& trace, double c);
};

/// Value and gradient of the smooth data-fit term only (the L1 term is
/// handed to the solver as l1_weight):
///   value    = sum_m (idct(x)[indices[m]] - b_m)^2
///   gradient = 2 * adjoint(residual)
/// `grad` must have length n_total. Throws on length mismatch.
double smooth_value_and_gradient(std::span<const double> x,
                                 const BpdnProblem& problem,
                                 std::span<double> grad);

struct TraceReconstruction {
  std::vector<double> values;  // reconstructed intensities at all N slices
  bool converged = false;
  int iterations = 0;
  Termination termination = Termination::Tolerance;
};

/// Recovers a full-length z-profile from the sampled trace: minimizes the
/// objective above from x0 = 0 and returns the inverse transform of the
/// minimizer. Solver non-convergence is flagged in the result, never thrown.
TraceReconstruction reconstruct_trace(const PixelTrace& trace, double c,
                                      const SolverOptions& opts);

/// Same, with a caller-owned operator (the per-volume hot path). `values`
/// must have length op.rows().
TraceReconstruction reconstruct_trace(std::span<const double> values,
                                      std::shared_ptr<const SampledDct> op,
                                      double c, const SolverOptions& opts);

}  // namespace csr

#endif
