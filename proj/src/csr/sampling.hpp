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

#ifndef CSR_SAMPLING_HPP
#define CSR_SAMPLING_HPP

#include "csr/volume.hpp"

namespace csr {

/// Draws the set of retained z-indices: M = round(fraction * n_slices)
/// indices with 0 and n_slices-1 always included. RandomWithEndpoints draws
/// the remaining M-2 uniformly without replacement from the interior;
/// Stratified partitions the interior into M-2 equal bins and draws one
/// index per bin. Deterministic given (seed, strategy); masks are
/// reproducible across platforms (see rng.hpp). Throws on fraction outside
/// (0, 1] or M < 2.
SamplingMask generate_mask(std::int64_t n_slices, double fraction,
                           std::uint64_t seed, MaskStrategy strategy);

/// Selects the mask's kept slices out of the stack, preserving order;
/// slice j of the output is slice kept[j] of the input, bit-exact.
/// Throws when mask.n_slices != stack.depth.
VolumeStack apply_mask(const VolumeStack& stack, const SamplingMask& mask);

/// Gathers one pixel's intensities at the kept z-indices.
PixelTrace extract_trace(const VolumeStack& stack, const SamplingMask& mask,
                         std::int64_t y, std::int64_t x);

}  // namespace csr

#endif
