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

#include "csr/volume.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace csr {

std::string to_string(MaskStrategy s) {
  switch (s) {
    case MaskStrategy::RandomWithEndpoints:
      return "random_with_endpoints";
    case MaskStrategy::Stratified:
      return "stratified";
  }
  return "unknown";
}

MaskStrategy mask_strategy_from_string(const std::string& name) {
  if (name == "random_with_endpoints" || name == "random")
    return MaskStrategy::RandomWithEndpoints;
  if (name == "stratified") return MaskStrategy::Stratified;
  throw std::invalid_argument("unknown mask strategy: " + name);
}

ValidationResult validate_stack(const VolumeStack& stack) {
  ValidationResult result;
  auto fail = [&](const std::string& msg) {
    result.ok = false;
    result.violations.push_back(msg);
  };

  if (stack.depth < 2) fail("depth >= 2 required");
  if (stack.height < 1 || stack.width < 1)
    fail("height and width must be >= 1");
  if (!(stack.max_value > 0.0) || !std::isfinite(stack.max_value))
    fail("max_value must be finite and > 0");

  const auto expected = static_cast<std::size_t>(
      stack.depth * stack.height * stack.width);
  if (stack.data.size() != expected) {
    std::ostringstream os;
    os << "data length " << stack.data.size() << " != depth*height*width "
       << expected;
    fail(os.str());
    return result;  // element checks would index garbage
  }

  bool reported_nonfinite = false;
  bool reported_range = false;
  for (std::int64_t z = 0; z < stack.depth && !(reported_nonfinite &&
                                                reported_range);
       ++z) {
    for (std::int64_t y = 0; y < stack.height; ++y) {
      for (std::int64_t x = 0; x < stack.width; ++x) {
        const double v = stack.at(z, y, x);
        if (!std::isfinite(v) && !reported_nonfinite) {
          std::ostringstream os;
          os << "non-finite value at (z=" << z << ",y=" << y << ",x=" << x
             << ")";
          fail(os.str());
          reported_nonfinite = true;
        } else if (std::isfinite(v) && (v < 0.0 || v > stack.max_value) &&
                   !reported_range) {
          std::ostringstream os;
          os << "value out of [0, max_value] range at (z=" << z << ",y=" << y
             << ",x=" << x << "): " << v;
          fail(os.str());
          reported_range = true;
        }
      }
    }
  }
  return result;
}

ValidationResult validate_mask(const SamplingMask& mask) {
  ValidationResult result;
  auto fail = [&](const std::string& msg) {
    result.ok = false;
    result.violations.push_back(msg);
  };

  const std::int64_t m = mask.kept_count();
  const std::int64_t n = mask.n_slices;
  if (m < 2) fail("mask must keep at least 2 slices");
  if (m > n) fail("mask keeps more slices than the stack has");
  for (std::size_t i = 0; i < mask.kept.size(); ++i) {
    if (mask.kept[i] < 0 || mask.kept[i] >= n) {
      fail("kept index out of [0, n_slices) range");
      break;
    }
    if (i > 0 && mask.kept[i] <= mask.kept[i - 1]) {
      fail("kept indices must be strictly increasing");
      break;
    }
  }
  if (m >= 2) {
    if (mask.kept.front() != 0) fail("first kept index must be 0");
    if (mask.kept.back() != n - 1)
      fail("last kept index must be n_slices - 1");
  }
  return result;
}

}  // namespace csr
