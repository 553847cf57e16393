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

#ifndef CSR_DCT_HPP
#define CSR_DCT_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace csr {

// Orthonormal 1D DCT-II / DCT-III pair:
//   X_k = c_k * sum_n x_n cos(pi (2n+1) k / (2N))
//   x_n = sum_k c_k X_k cos(pi (2n+1) k / (2N))
// with c_0 = sqrt(1/N) and c_k = sqrt(2/N) for k >= 1. Under this convention
// the transform matrix is orthogonal, so the inverse equals the transpose and
// Parseval's identity holds exactly.

/// Forward transform (DCT-II). Throws std::invalid_argument on empty input.
std::vector<double> dct_forward(std::span<const double> signal);

/// Inverse transform (DCT-III). Throws std::invalid_argument on empty input.
std::vector<double> idct(std::span<const double> coeffs);

/// Adjoint of "inverse-transform then sample at `indices`": zero-fills the
/// length-M residual into a length-n_total vector at the kept indices and
/// applies the forward transform. Throws on out-of-range indices.
std::vector<double> idct_sampled_adjoint(std::span<const double> residual,
                                         std::span<const std::int64_t> indices,
                                         std::int64_t n_total);

/// The M x N matrix of orthonormal inverse-DCT rows at the kept z-indices,
/// precomputed once per mask and shared read-only by every pixel solve of a
/// volume. apply() maps transform coefficients to intensities at the sampled
/// slices; apply_adjoint() maps a sampled-slice residual back to coefficient
/// space. Both cost O(M*N).
class SampledDct {
 public:
  SampledDct(std::span<const std::int64_t> indices, std::int64_t n_total);

  std::int64_t rows() const { return m_; }
  std::int64_t cols() const { return n_; }

  /// out[m] = sum_k B[m][k] coeffs[k]; out must have length rows().
  void apply(std::span<const double> coeffs, std::span<double> out) const;

  /// out[k] = sum_m B[m][k] residual[m]; out must have length cols().
  void apply_adjoint(std::span<const double> residual,
                     std::span<double> out) const;

 private:
  std::int64_t m_ = 0;
  std::int64_t n_ = 0;
  std::vector<double> rows_;  // row-major M x N
};

}  // namespace csr

#endif
