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

#include "csr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "csr/rng.hpp"

namespace csr {

SamplingMask generate_mask(std::int64_t n_slices, double fraction,
                           std::uint64_t seed, MaskStrategy strategy) {
  if (n_slices < 2) throw std::invalid_argument("n_slices must be >= 2");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("fraction must be in (0, 1]");
  const std::int64_t m =
      std::llround(fraction * static_cast<double>(n_slices));
  if (m < 2)
    throw std::invalid_argument("fraction keeps fewer than 2 slices");

  SamplingMask mask;
  mask.n_slices = n_slices;
  mask.seed = seed;
  mask.strategy = strategy;
  mask.fraction = fraction;
  mask.kept.reserve(static_cast<std::size_t>(m));
  mask.kept.push_back(0);

  const std::int64_t interior_lo = 1;
  const std::int64_t interior_hi = n_slices - 2;  // inclusive
  const std::int64_t draws = m - 2;
  Rng rng(seed);

  if (draws > 0 && strategy == MaskStrategy::RandomWithEndpoints) {
    // Partial Fisher-Yates over the interior indices.
    std::vector<std::int64_t> pool;
    pool.reserve(static_cast<std::size_t>(interior_hi - interior_lo + 1));
    for (std::int64_t i = interior_lo; i <= interior_hi; ++i)
      pool.push_back(i);
    for (std::int64_t i = 0; i < draws; ++i) {
      const std::int64_t j =
          rng.uniform_int(i, static_cast<std::int64_t>(pool.size()) - 1);
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(draws));
    std::sort(pool.begin(), pool.end());
    mask.kept.insert(mask.kept.end(), pool.begin(), pool.end());
  } else if (draws > 0) {
    // Stratified: one draw per equal-width bin of the interior.
    const std::int64_t span = interior_hi - interior_lo + 1;
    for (std::int64_t j = 0; j < draws; ++j) {
      const std::int64_t lo = interior_lo + (j * span) / draws;
      std::int64_t hi = interior_lo + ((j + 1) * span) / draws - 1;
      if (hi < lo) hi = lo;
      mask.kept.push_back(rng.uniform_int(lo, hi));
    }
  }

  mask.kept.push_back(n_slices - 1);
  return mask;
}

VolumeStack apply_mask(const VolumeStack& stack, const SamplingMask& mask) {
  if (mask.n_slices != stack.depth)
    throw std::invalid_argument("mask n_slices != stack depth");
  const ValidationResult mask_check = validate_mask(mask);
  if (!mask_check.ok)
    throw std::invalid_argument("invalid mask: " + mask_check.violations[0]);

  VolumeStack out;
  out.depth = mask.kept_count();
  out.height = stack.height;
  out.width = stack.width;
  out.max_value = stack.max_value;
  out.data.resize(static_cast<std::size_t>(out.voxels()));
  const std::size_t slice_bytes =
      static_cast<std::size_t>(stack.height * stack.width) * sizeof(double);
  for (std::int64_t j = 0; j < out.depth; ++j) {
    std::memcpy(out.slice(j), stack.slice(mask.kept[static_cast<std::size_t>(j)]),
                slice_bytes);
  }
  return out;
}

PixelTrace extract_trace(const VolumeStack& stack, const SamplingMask& mask,
                         std::int64_t y, std::int64_t x) {
  if (mask.n_slices != stack.depth)
    throw std::invalid_argument("mask n_slices != stack depth");
  PixelTrace trace;
  trace.n_total = mask.n_slices;
  trace.indices = std::span<const std::int64_t>(mask.kept);
  trace.values.reserve(mask.kept.size());
  for (const std::int64_t z : mask.kept)
    trace.values.push_back(stack.at(z, y, x));
  return trace;
}

}  // namespace csr
