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

#include "csr/dct.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace csr {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Dense orthonormal DCT-II matrix for one length, row-major [k][n].
// Direct O(N^2) evaluation is fine at the depths this toolkit targets
// (hundreds of slices); the table is built once per length per thread.
struct DctPlan {
  std::int64_t n = 0;
  std::vector<double> rows;  // rows[k*n + i] = c_k cos(pi (2i+1) k / (2n))

  explicit DctPlan(std::int64_t n_in) : n(n_in) {
    rows.resize(static_cast<std::size_t>(n * n));
    const double c0 = std::sqrt(1.0 / static_cast<double>(n));
    const double ck = std::sqrt(2.0 / static_cast<double>(n));
    for (std::int64_t k = 0; k < n; ++k) {
      const double scale = (k == 0) ? c0 : ck;
      const double step = kPi * static_cast<double>(k) /
                          (2.0 * static_cast<double>(n));
      double* row = rows.data() + k * n;
      for (std::int64_t i = 0; i < n; ++i) {
        row[i] = scale * std::cos(step * static_cast<double>(2 * i + 1));
      }
    }
  }
};

const DctPlan& plan_for(std::int64_t n) {
  thread_local std::unordered_map<std::int64_t, std::unique_ptr<DctPlan>>
      cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<DctPlan>(n)).first;
  }
  return *it->second;
}

void require_nonempty(std::size_t size) {
  if (size == 0) throw std::invalid_argument("empty input");
}

}  // namespace

std::vector<double> dct_forward(std::span<const double> signal) {
  require_nonempty(signal.size());
  const std::int64_t n = static_cast<std::int64_t>(signal.size());
  const DctPlan& plan = plan_for(n);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    const double* row = plan.rows.data() + k * n;
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) acc += row[i] * signal[i];
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

std::vector<double> idct(std::span<const double> coeffs) {
  require_nonempty(coeffs.size());
  const std::int64_t n = static_cast<std::int64_t>(coeffs.size());
  const DctPlan& plan = plan_for(n);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  // x = B^T X, accumulated row by row for sequential access.
  for (std::int64_t k = 0; k < n; ++k) {
    const double xk = coeffs[static_cast<std::size_t>(k)];
    if (xk == 0.0) continue;
    const double* row = plan.rows.data() + k * n;
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] +=
        row[i] * xk;
  }
  return out;
}

std::vector<double> idct_sampled_adjoint(std::span<const double> residual,
                                         std::span<const std::int64_t> indices,
                                         std::int64_t n_total) {
  if (residual.size() != indices.size())
    throw std::invalid_argument("residual/indices length mismatch");
  std::vector<double> padded(static_cast<std::size_t>(n_total), 0.0);
  for (std::size_t m = 0; m < indices.size(); ++m) {
    const std::int64_t idx = indices[m];
    if (idx < 0 || idx >= n_total)
      throw std::out_of_range("sample index out of range");
    padded[static_cast<std::size_t>(idx)] = residual[m];
  }
  return dct_forward(padded);
}

SampledDct::SampledDct(std::span<const std::int64_t> indices,
                       std::int64_t n_total)
    : m_(static_cast<std::int64_t>(indices.size())), n_(n_total) {
  if (n_total < 1) throw std::invalid_argument("n_total must be >= 1");
  rows_.resize(static_cast<std::size_t>(m_ * n_));
  const double c0 = std::sqrt(1.0 / static_cast<double>(n_));
  const double ck = std::sqrt(2.0 / static_cast<double>(n_));
  for (std::int64_t m = 0; m < m_; ++m) {
    const std::int64_t idx = indices[static_cast<std::size_t>(m)];
    if (idx < 0 || idx >= n_total)
      throw std::out_of_range("sample index out of range");
    double* row = rows_.data() + m * n_;
    const double angle_scale =
        kPi * static_cast<double>(2 * idx + 1) / (2.0 * static_cast<double>(n_));
    for (std::int64_t k = 0; k < n_; ++k) {
      const double scale = (k == 0) ? c0 : ck;
      row[k] = scale * std::cos(angle_scale * static_cast<double>(k));
    }
  }
}

void SampledDct::apply(std::span<const double> coeffs,
                       std::span<double> out) const {
  for (std::int64_t m = 0; m < m_; ++m) {
    const double* row = rows_.data() + m * n_;
    double acc = 0.0;
    for (std::int64_t k = 0; k < n_; ++k) acc += row[k] * coeffs[
        static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(m)] = acc;
  }
}

void SampledDct::apply_adjoint(std::span<const double> residual,
                               std::span<double> out) const {
  for (std::int64_t k = 0; k < n_; ++k) out[static_cast<std::size_t>(k)] = 0.0;
  for (std::int64_t m = 0; m < m_; ++m) {
    const double rm = residual[static_cast<std::size_t>(m)];
    if (rm == 0.0) continue;
    const double* row = rows_.data() + m * n_;
    for (std::int64_t k = 0; k < n_; ++k) out[static_cast<std::size_t>(k)] +=
        row[k] * rm;
  }
}

}  // namespace csr
