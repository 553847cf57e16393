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

#ifndef CSR_FORMAT_HPP
#define CSR_FORMAT_HPP

#include <charconv>
#include <cmath>
#include <string>

namespace csr {

/// Shortest round-trip decimal rendering; infinities serialize as the
/// literals "inf"/"-inf". Used by every text emitter (CSV, SVG, CLI) so
/// identical values always produce identical bytes.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Parses what format_double produces (and plain decimal/scientific text).
double parse_double(const std::string& text);

}  // namespace csr

#endif
