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

#ifndef CSR_BENCH_HPP
#define CSR_BENCH_HPP

#include <cstdio>
#include <optional>

#include "csr/reconstruct.hpp"
#include "csr/stack_io.hpp"

namespace csr {

/// The default sweep brackets the 20% and 50% operating points.
inline const std::vector<double> kDefaultFractions = {
    0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.7, 0.9};

struct BenchConfig {
  std::vector<double> fractions = kDefaultFractions;
  int repeats = 20;
  std::vector<Method> methods = {Method::CS, Method::CubicSpline};
  std::uint64_t base_seed = 0;
  MaskStrategy strategy = MaskStrategy::RandomWithEndpoints;
  double c = kDefaultL1Weight;
  bool clamp_known = true;
  int workers = 0;
  SolverOptions solver;
  bool zero_runtime = false;  // write 0 in runtime_ms (byte-reproducible CSVs)
  bool verbose = false;       // per-cell progress on stderr
};

/// Runs the full sweep: for every (method, fraction, repeat) the stack is
/// masked (mask seed = base_seed + repeat, shared by all methods so the
/// comparison is fair), subsampled, reconstructed and scored against
/// `ground_truth` when given, otherwise against the input stack itself.
/// Per-pixel solver failures are recorded in the row, never aborting the
/// sweep.
std::vector<ReconstructionReport> run_benchmark(
    const VolumeStack& stack, const VolumeStack* ground_truth,
    const BenchConfig& config);

struct SweepPoint {
  std::string method;
  double fraction = 0.0;
  int repeats = 0;
  double psnr_mean = 0.0;
  double psnr_stderr = 0.0;
  double ssim_mean = 0.0;
  double ssim_stderr = 0.0;
};

/// Per (method, fraction) means with +/- 1 standard error, sorted by
/// (method, fraction).
std::vector<SweepPoint> summarize_rows(
    std::span<const ReconstructionReport> rows);

/// Two-panel line chart (PSNR3D and SSIM3D versus % of slices available,
/// one line per method, +/- 1 standard-error bars), hand-emitted SVG.
/// Deterministic: identical rows produce identical bytes.
std::string render_sweep_svg(std::span<const ReconstructionReport> rows);

/// Convenience driver: run the sweep, write the CSV, re-read it and render
/// the SVG from the file contents (so the CSV fully determines the SVG),
/// and print per-point means to `means_out` (one line per method/fraction).
/// Pass an empty svg_path to skip the chart. Returns the rows.
std::vector<ReconstructionReport> run_benchmark_to_files(
    const VolumeStack& stack, const VolumeStack* ground_truth,
    const BenchConfig& config, const std::string& csv_path,
    const std::string& svg_path, std::FILE* means_out);

}  // namespace csr

#endif
