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

#ifndef CSR_STACK_IO_HPP
#define CSR_STACK_IO_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csr/volume.hpp"

namespace csr {

enum class StackFormat { MultiPageTiff, RawBinary };

/// Picks a format from the file extension: .tif/.tiff map to MultiPageTiff,
/// everything else to RawBinary.
StackFormat guess_stack_format(const std::string& path);

/// Reads a volume.
///
/// MultiPageTiff: grayscale 8- or 16-bit multi-page files, strip-based,
/// compression none or deflate, either byte order; pages become z-slices in
/// file order and max_value follows the bit depth unless overridden
/// (max_value_override > 0). Tiled, multi-channel, palette and float TIFFs
/// are rejected.
///
/// RawBinary: little-endian float64 in (z, y, x) order with a JSON sidecar
/// {"depth","height","width","max_value"} at path + ".json".
///
/// Throws std::runtime_error with a diagnostic on parse/size errors.
VolumeStack read_stack(const std::string& path, StackFormat format,
                       double max_value_override = 0.0);

/// Writes a volume. RawBinary round-trips bit-exactly. MultiPageTiff
/// quantizes to the stack's bit depth (8-bit when max_value <= 255, 16-bit
/// when <= 65535, error above); non-integer data triggers a one-line warning
/// on stderr since quantization is lossy.
void write_stack(const VolumeStack& stack, const std::string& path,
                 StackFormat format);

void write_mask_json(const SamplingMask& mask, const std::string& path);
SamplingMask read_mask_json(const std::string& path);

/// One benchmark run: the metrics of a single (method, fraction, repeat)
/// cell.
struct ReconstructionReport {
  std::string method;
  double fraction = 0.0;
  int repeat = 0;
  std::uint64_t seed = 0;
  double psnr3d_db = 0.0;
  double ssim3d = 0.0;
  std::int64_t runtime_ms = 0;
  std::int64_t solver_failures = 0;
};

/// CSV with header
/// method,fraction,repeat,seed,psnr3d_db,ssim3d,runtime_ms,solver_failures
/// rows ordered by (method, fraction, repeat). Infinite PSNR serializes as
/// the literal `inf`.
void write_metrics_csv(std::span<const ReconstructionReport> rows,
                       const std::string& path);
std::vector<ReconstructionReport> read_metrics_csv(const std::string& path);

}  // namespace csr

#endif
