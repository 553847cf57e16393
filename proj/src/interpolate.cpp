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

#include "csr/interpolate.hpp"

#include <stdexcept>

namespace csr {
namespace {

void check_samples(std::span<const double> values,
                   std::span<const std::int64_t> indices,
                   std::int64_t n_total) {
  if (values.size() != indices.size())
    throw std::invalid_argument("values/indices length mismatch");
  if (values.size() < 2) throw std::invalid_argument("need at least 2 samples");
  if (indices.front() != 0 || indices.back() != n_total - 1)
    throw std::invalid_argument("endpoints must be sampled");
  for (std::size_t i = 1; i < indices.size(); ++i)
    if (indices[i] <= indices[i - 1])
      throw std::invalid_argument("indices must be strictly increasing");
}

}  // namespace

std::vector<double> interpolate_linear(std::span<const double> values,
                                       std::span<const std::int64_t> indices,
                                       std::int64_t n_total) {
  check_samples(values, indices, n_total);
  std::vector<double> out(static_cast<std::size_t>(n_total));
  std::size_t seg = 0;  // current knot interval [indices[seg], indices[seg+1]]
  for (std::int64_t z = 0; z < n_total; ++z) {
    while (indices[seg + 1] < z) ++seg;
    const std::int64_t z0 = indices[seg];
    const std::int64_t z1 = indices[seg + 1];
    if (z == z0) {
      out[static_cast<std::size_t>(z)] = values[seg];
    } else if (z == z1) {
      out[static_cast<std::size_t>(z)] = values[seg + 1];
    } else {
      const double t = static_cast<double>(z - z0) /
                       static_cast<double>(z1 - z0);
      out[static_cast<std::size_t>(z)] =
          values[seg] + t * (values[seg + 1] - values[seg]);
    }
  }
  return out;
}

std::vector<double> interpolate_cubic_spline(
    std::span<const double> values, std::span<const std::int64_t> indices,
    std::int64_t n_total) {
  check_samples(values, indices, n_total);
  const std::size_t m = values.size();

  // Second derivatives at the knots, natural boundary (M_0 = M_{m-1} = 0).
  // Interior knots satisfy the standard tridiagonal system
  //   h_{i-1} M_{i-1} + 2(h_{i-1}+h_i) M_i + h_i M_{i+1} = 6 (d_i - d_{i-1})
  // with h_i = x_{i+1}-x_i and d_i = (y_{i+1}-y_i)/h_i; solved by the
  // Thomas algorithm.
  std::vector<double> second(m, 0.0);
  if (m > 2) {
    const std::size_t interior = m - 2;
    std::vector<double> diag(interior), rhs(interior);
    std::vector<double> h(m - 1), slope(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      h[i] = static_cast<double>(indices[i + 1] - indices[i]);
      slope[i] = (values[i + 1] - values[i]) / h[i];
    }
    for (std::size_t i = 0; i < interior; ++i) {
      diag[i] = 2.0 * (h[i] + h[i + 1]);
      rhs[i] = 6.0 * (slope[i + 1] - slope[i]);
    }
    // Forward elimination: sub/super diagonals are h[1..m-3].
    for (std::size_t i = 1; i < interior; ++i) {
      const double w = h[i] / diag[i - 1];
      diag[i] -= w * h[i];
      rhs[i] -= w * rhs[i - 1];
    }
    second[m - 2] = rhs[interior - 1] / diag[interior - 1];
    for (std::size_t i = interior - 1; i-- > 0;) {
      second[i + 1] = (rhs[i] - h[i + 1] * second[i + 2]) / diag[i];
    }
  }

  std::vector<double> out(static_cast<std::size_t>(n_total));
  std::size_t seg = 0;
  for (std::int64_t z = 0; z < n_total; ++z) {
    while (indices[seg + 1] < z) ++seg;
    const double x0 = static_cast<double>(indices[seg]);
    const double x1 = static_cast<double>(indices[seg + 1]);
    const double hseg = x1 - x0;
    if (z == indices[seg]) {
      out[static_cast<std::size_t>(z)] = values[seg];
      continue;
    }
    if (z == indices[seg + 1]) {
      out[static_cast<std::size_t>(z)] = values[seg + 1];
      continue;
    }
    const double a = (x1 - static_cast<double>(z)) / hseg;
    const double b = (static_cast<double>(z) - x0) / hseg;
    out[static_cast<std::size_t>(z)] =
        a * values[seg] + b * values[seg + 1] +
        ((a * a * a - a) * second[seg] + (b * b * b - b) * second[seg + 1]) *
            (hseg * hseg) / 6.0;
  }
  return out;
}

}  // namespace csr
