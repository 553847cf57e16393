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

#include "csr/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csr/dct.hpp"
#include "csr/rng.hpp"

namespace csr {
namespace {

void check_dims(std::int64_t width, std::int64_t height, std::int64_t depth,
                double max_value) {
  if (width < 2 || height < 2 || depth < 2)
    throw std::invalid_argument("phantom dimensions must be >= 2");
  if (!(max_value > 0.0))
    throw std::invalid_argument("max_value must be > 0");
}

void add_noise_and_clip(VolumeStack& stack, double noise_snr_db, Rng& rng) {
  if (std::isfinite(noise_snr_db) && noise_snr_db > 0.0) {
    double power = 0.0;
    for (const double v : stack.data) power += v * v;
    power /= static_cast<double>(stack.data.size());
    const double sigma =
        std::sqrt(power / std::pow(10.0, noise_snr_db / 10.0));
    for (double& v : stack.data) v += sigma * rng.normal();
  }
  for (double& v : stack.data) v = std::clamp(v, 0.0, stack.max_value);
}

VolumeStack blobs_phantom(std::int64_t width, std::int64_t height,
                          std::int64_t depth, std::uint64_t seed,
                          double max_value, double noise_snr_db) {
  const std::vector<Blob> blobs =
      phantom_blob_params(width, height, depth, seed, max_value);
  VolumeStack stack = VolumeStack::zeros(depth, height, width, max_value);

  const double background = 0.02 * max_value;
  for (double& v : stack.data) v = background;

  for (const Blob& blob : blobs) {
    // Evaluate only where the Gaussian is non-negligible (4 sigma box).
    const auto lo = [](double c, double s) {
      return std::max<std::int64_t>(
          0, static_cast<std::int64_t>(std::floor(c - 4.0 * s)));
    };
    const auto hi = [](double c, double s, std::int64_t dim) {
      return std::min<std::int64_t>(dim - 1, static_cast<std::int64_t>(
                                                 std::ceil(c + 4.0 * s)));
    };
    const std::int64_t z0 = lo(blob.cz, blob.sz);
    const std::int64_t z1 = hi(blob.cz, blob.sz, depth);
    const std::int64_t y0 = lo(blob.cy, blob.sy);
    const std::int64_t y1 = hi(blob.cy, blob.sy, height);
    const std::int64_t x0 = lo(blob.cx, blob.sx);
    const std::int64_t x1 = hi(blob.cx, blob.sx, width);
    for (std::int64_t z = z0; z <= z1; ++z) {
      const double dz = (static_cast<double>(z) - blob.cz) / blob.sz;
      const double fz = std::exp(-0.5 * dz * dz);
      for (std::int64_t y = y0; y <= y1; ++y) {
        const double dy = (static_cast<double>(y) - blob.cy) / blob.sy;
        const double fyz = fz * std::exp(-0.5 * dy * dy);
        for (std::int64_t x = x0; x <= x1; ++x) {
          const double dx = (static_cast<double>(x) - blob.cx) / blob.sx;
          stack.at(z, y, x) += blob.amplitude * fyz * std::exp(-0.5 * dx * dx);
        }
      }
    }
  }

  // Same stream as the blob draws, so the clean and noisy variants of one
  // seed share identical structure.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  add_noise_and_clip(stack, noise_snr_db, rng);
  return stack;
}

VolumeStack bandlimited_phantom(std::int64_t width, std::int64_t height,
                                std::int64_t depth, std::uint64_t seed,
                                double max_value, double noise_snr_db) {
  VolumeStack stack = VolumeStack::zeros(depth, height, width, max_value);
  Rng rng(seed);

  // Per-trace band-limited noise: white noise with its z-spectrum truncated
  // to the lowest 10% of coefficients (at least 2, so there is variation).
  const std::int64_t keep = std::max<std::int64_t>(
      2, static_cast<std::int64_t>(depth / 10));
  std::vector<double> coeffs(static_cast<std::size_t>(depth));
  for (std::int64_t y = 0; y < height; ++y) {
    for (std::int64_t x = 0; x < width; ++x) {
      for (std::int64_t k = 0; k < depth; ++k)
        coeffs[static_cast<std::size_t>(k)] = k < keep ? rng.normal() : 0.0;
      const std::vector<double> trace = idct(coeffs);
      for (std::int64_t z = 0; z < depth; ++z)
        stack.at(z, y, x) = trace[static_cast<std::size_t>(z)];
    }
  }

  // 3x3 binomial smoothing per slice (clamped borders); a spatial mix of
  // band-limited traces stays band-limited along z.
  VolumeStack smoothed = stack;
  static const double kKernel[3] = {0.25, 0.5, 0.25};
  for (std::int64_t z = 0; z < depth; ++z) {
    for (std::int64_t y = 0; y < height; ++y)
      for (std::int64_t x = 0; x < width; ++x) {
        double acc = 0.0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const std::int64_t yy =
                std::clamp<std::int64_t>(y + dy, 0, height - 1);
            const std::int64_t xx =
                std::clamp<std::int64_t>(x + dx, 0, width - 1);
            acc += kKernel[dy + 1] * kKernel[dx + 1] * stack.at(z, yy, xx);
          }
        smoothed.at(z, y, x) = acc;
      }
  }

  // Affine map into [0.1, 0.9] * max_value; the added DC stays in the kept
  // band.
  const auto [lo_it, hi_it] =
      std::minmax_element(smoothed.data.begin(), smoothed.data.end());
  const double lo = *lo_it, hi = *hi_it;
  const double span = hi > lo ? hi - lo : 1.0;
  for (double& v : smoothed.data)
    v = (0.1 + 0.8 * (v - lo) / span) * max_value;

  add_noise_and_clip(smoothed, noise_snr_db, rng);
  return smoothed;
}

}  // namespace

PhantomKind phantom_kind_from_string(const std::string& name) {
  if (name == "blobs" || name == "gaussian_blobs")
    return PhantomKind::GaussianBlobs;
  if (name == "bandlimited" || name == "band_limited_noise")
    return PhantomKind::BandLimitedNoise;
  throw std::invalid_argument("unknown phantom kind: " + name);
}

std::string to_string(PhantomKind kind) {
  return kind == PhantomKind::GaussianBlobs ? "gaussian_blobs"
                                            : "band_limited_noise";
}

std::vector<Blob> phantom_blob_params(std::int64_t width, std::int64_t height,
                                      std::int64_t depth, std::uint64_t seed,
                                      double max_value) {
  check_dims(width, height, depth, max_value);
  const std::int64_t count = std::max<std::int64_t>(3, depth / 20);
  Rng rng(seed);
  std::vector<Blob> blobs;
  blobs.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    Blob b;
    b.cx = rng.uniform(0.0, static_cast<double>(width - 1));
    b.cy = rng.uniform(0.0, static_cast<double>(height - 1));
    b.cz = rng.uniform(0.0, static_cast<double>(depth - 1));
    const double lateral_lo =
        std::max(2.0, static_cast<double>(std::min(width, height)) / 12.0);
    const double lateral_hi = std::max(
        lateral_lo + 1.0, static_cast<double>(std::min(width, height)) / 4.0);
    b.sx = rng.uniform(lateral_lo, lateral_hi);
    b.sy = rng.uniform(lateral_lo, lateral_hi);
    // Axial over-sampling: structures span many slices, so no blob can hide
    // inside the gaps of a realistic sampling mask and per-trace spectra
    // stay compressible.
    const double axial_lo = std::max(4.0, static_cast<double>(depth) / 12.0);
    const double axial_hi =
        std::max(axial_lo + 4.0, static_cast<double>(depth) / 3.75);
    b.sz = rng.uniform(axial_lo, axial_hi);
    b.amplitude = rng.uniform(0.25, 0.85) * max_value;
    blobs.push_back(b);
  }
  return blobs;
}

VolumeStack generate_phantom(std::int64_t width, std::int64_t height,
                             std::int64_t depth, PhantomKind kind,
                             std::uint64_t seed, double max_value,
                             double noise_snr_db) {
  check_dims(width, height, depth, max_value);
  if (kind == PhantomKind::GaussianBlobs)
    return blobs_phantom(width, height, depth, seed, max_value, noise_snr_db);
  return bandlimited_phantom(width, height, depth, seed, max_value,
                             noise_snr_db);
}

}  // namespace csr
