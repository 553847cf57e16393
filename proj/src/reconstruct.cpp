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

#include "csr/reconstruct.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>
#include <vector>

#include "csr/interpolate.hpp"
#include "csr/sampling.hpp"

namespace csr {
namespace {

bool all_finite(const std::vector<double>& v) {
  for (const double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "cs") return Method::CS;
  if (name == "linear") return Method::Linear;
  if (name == "cubic" || name == "cubic_spline") return Method::CubicSpline;
  throw std::invalid_argument("unknown method: " + name);
}

std::string to_string(Method method) {
  switch (method) {
    case Method::CS: return "cs";
    case Method::Linear: return "linear";
    case Method::CubicSpline: return "cubic";
  }
  return "unknown";
}

VolumeStack reconstruct_volume(const VolumeStack& sub,
                               const SamplingMask& mask,
                               const ReconstructParams& params,
                               RunStats* stats) {
  const auto t_start = std::chrono::steady_clock::now();

  const ValidationResult mask_check = validate_mask(mask);
  if (!mask_check.ok)
    throw std::invalid_argument("invalid mask: " + mask_check.violations[0]);
  if (sub.depth != mask.kept_count())
    throw std::invalid_argument("subsampled depth != mask kept count");

  const std::int64_t n = mask.n_slices;
  const std::int64_t m = mask.kept_count();
  const std::int64_t height = sub.height;
  const std::int64_t width = sub.width;
  const std::int64_t pixels = height * width;
  const double max_value = sub.max_value;

  VolumeStack out = VolumeStack::zeros(n, height, width, max_value);

  const bool is_cs = params.method == Method::CS;
  const std::shared_ptr<const SampledDct> op =
      is_cs ? std::make_shared<const SampledDct>(mask.kept, n) : nullptr;

  std::atomic<std::int64_t> next_pixel{0};
  std::atomic<std::int64_t> done_pixels{0};
  std::atomic<std::int64_t> failures{0};
  std::atomic<std::int64_t> non_converged{0};
  std::atomic<std::int64_t> total_iterations{0};
  std::atomic<std::int64_t> clipped{0};

  const std::int64_t plane = height * width;

  auto worker = [&]() {
    std::vector<double> trace(static_cast<std::size_t>(m));
    constexpr std::int64_t kChunk = 32;
    for (;;) {
      const std::int64_t begin = next_pixel.fetch_add(kChunk);
      if (begin >= pixels) break;
      const std::int64_t end = std::min(begin + kChunk, pixels);
      for (std::int64_t p = begin; p < end; ++p) {
        // Gather the pixel's profile across the subsampled slices.
        for (std::int64_t j = 0; j < m; ++j)
          trace[static_cast<std::size_t>(j)] = sub.data[
              static_cast<std::size_t>(j * plane + p)];

        std::vector<double> profile;
        if (is_cs) {
          std::vector<double> normalized(trace);
          for (double& v : normalized) v /= max_value;
          bool ok = true;
          TraceReconstruction rec;
          try {
            rec = reconstruct_trace(normalized, op, params.c, params.solver);
            ok = all_finite(rec.values);
          } catch (const std::exception&) {
            ok = false;
          }
          if (ok) {
            profile = std::move(rec.values);
            for (double& v : profile) v *= max_value;
            total_iterations.fetch_add(rec.iterations,
                                       std::memory_order_relaxed);
            if (!rec.converged)
              non_converged.fetch_add(1, std::memory_order_relaxed);
          } else {
            // One bad trace must not kill the job; fall back per pixel.
            failures.fetch_add(1, std::memory_order_relaxed);
            profile = interpolate_cubic_spline(trace, mask.kept, n);
          }
        } else if (params.method == Method::Linear) {
          profile = interpolate_linear(trace, mask.kept, n);
        } else {
          profile = interpolate_cubic_spline(trace, mask.kept, n);
        }

        if (params.clamp_known) {
          for (std::int64_t j = 0; j < m; ++j)
            profile[static_cast<std::size_t>(mask.kept[
                static_cast<std::size_t>(j)])] =
                trace[static_cast<std::size_t>(j)];
        }

        std::int64_t clips = 0;
        for (std::int64_t z = 0; z < n; ++z) {
          double v = profile[static_cast<std::size_t>(z)];
          if (v < 0.0) {
            v = 0.0;
            ++clips;
          } else if (v > max_value) {
            v = max_value;
            ++clips;
          }
          out.data[static_cast<std::size_t>(z * plane + p)] = v;
        }
        if (clips) clipped.fetch_add(clips, std::memory_order_relaxed);

        const std::int64_t done =
            done_pixels.fetch_add(1, std::memory_order_relaxed) + 1;
        if (params.progress_interval > 0 &&
            (done % params.progress_interval == 0 || done == pixels)) {
          std::fprintf(stderr, "reconstruct[%s]: %lld/%lld pixels\n",
                       to_string(params.method).c_str(),
                       static_cast<long long>(done),
                       static_cast<long long>(pixels));
          std::fflush(stderr);
        }
      }
    }
  };

  int worker_count = params.workers;
  if (worker_count <= 0)
    worker_count = static_cast<int>(std::thread::hardware_concurrency());
  if (worker_count < 1) worker_count = 1;
  worker_count = static_cast<int>(
      std::min<std::int64_t>(worker_count, pixels));

  if (worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(worker_count));
    for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (failures.load() == pixels && is_cs)
    throw std::runtime_error("reconstruction failed for every pixel");

  if (stats) {
    stats->pixels = pixels;
    stats->solver_failures = failures.load();
    stats->non_converged = non_converged.load();
    stats->total_iterations = total_iterations.load();
    stats->clipped_values = clipped.load();
    stats->wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
  }
  return out;
}

}  // namespace csr
