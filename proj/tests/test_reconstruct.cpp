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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "csr/interpolate.hpp"
#include "csr/metrics.hpp"
#include "csr/phantom.hpp"
#include "csr/rng.hpp"
#include "csr/sampling.hpp"

using csr::apply_mask;
using csr::generate_mask;
using csr::generate_phantom;
using csr::MaskStrategy;
using csr::Method;
using csr::PhantomKind;
using csr::ReconstructParams;
using csr::reconstruct_volume;
using csr::RunStats;
using csr::SamplingMask;
using csr::VolumeStack;

namespace {

ReconstructParams cs_params() {
  ReconstructParams p;
  p.method = Method::CS;
  p.workers = 2;
  return p;
}

}  // namespace

TEST_CASE("identity mask reproduces the input for every method") {
  const VolumeStack stack =
      generate_phantom(6, 5, 12, PhantomKind::GaussianBlobs, 3, 255.0, 20.0);
  const SamplingMask mask =
      generate_mask(12, 1.0, 0, MaskStrategy::RandomWithEndpoints);
  const VolumeStack sub = apply_mask(stack, mask);

  for (const Method method :
       {Method::CS, Method::Linear, Method::CubicSpline}) {
    ReconstructParams p = cs_params();
    p.method = method;
    const VolumeStack out = reconstruct_volume(sub, mask, p);
    CHECK(out.data == stack.data);  // clamp-known keeps every measured slice
  }
}

TEST_CASE("single-pixel volume equals the per-trace operation") {
  const std::int64_t n = 32;
  VolumeStack stack = VolumeStack::zeros(n, 1, 1, 255.0);
  csr::Rng rng(8);
  for (double& v : stack.data) v = rng.uniform(10.0, 200.0);
  const SamplingMask mask =
      generate_mask(n, 0.5, 4, MaskStrategy::RandomWithEndpoints);
  const VolumeStack sub = apply_mask(stack, mask);

  std::vector<double> trace;
  for (std::int64_t j = 0; j < mask.kept_count(); ++j)
    trace.push_back(sub.data[static_cast<std::size_t>(j)]);

  SUBCASE("cubic") {
    ReconstructParams p = cs_params();
    p.method = Method::CubicSpline;
    p.clamp_known = false;
    const VolumeStack out = reconstruct_volume(sub, mask, p);
    const auto expected = csr::interpolate_cubic_spline(trace, mask.kept, n);
    for (std::int64_t z = 0; z < n; ++z) {
      const double want =
          std::clamp(expected[static_cast<std::size_t>(z)], 0.0, 255.0);
      CHECK(out.data[static_cast<std::size_t>(z)] == want);
    }
  }
  SUBCASE("cs matches the trace path after normalization") {
    ReconstructParams p = cs_params();
    p.clamp_known = false;
    const VolumeStack out = reconstruct_volume(sub, mask, p);

    std::vector<double> normalized(trace);
    for (double& v : normalized) v /= 255.0;
    csr::PixelTrace t;
    t.values = normalized;
    t.indices = mask.kept;
    t.n_total = n;
    const auto rec = csr::reconstruct_trace(t, p.c, p.solver);
    for (std::int64_t z = 0; z < n; ++z) {
      const double want = std::clamp(
          rec.values[static_cast<std::size_t>(z)] * 255.0, 0.0, 255.0);
      CHECK(out.data[static_cast<std::size_t>(z)] ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("results are bit-identical for any worker count") {
  const VolumeStack stack =
      generate_phantom(9, 7, 24, PhantomKind::GaussianBlobs, 11, 255.0, 25.0);
  const SamplingMask mask =
      generate_mask(24, 0.4, 2, MaskStrategy::RandomWithEndpoints);
  const VolumeStack sub = apply_mask(stack, mask);

  ReconstructParams p = cs_params();
  std::vector<VolumeStack> outs;
  for (const int workers : {1, 2, 5}) {
    p.workers = workers;
    outs.push_back(reconstruct_volume(sub, mask, p));
  }
  CHECK(outs[0].data == outs[1].data);
  CHECK(outs[0].data == outs[2].data);
}

TEST_CASE("cropped region equals the crop of the full reconstruction") {
  const VolumeStack stack =
      generate_phantom(8, 6, 20, PhantomKind::BandLimitedNoise, 21, 255.0, 0.0);
  const SamplingMask mask =
      generate_mask(20, 0.5, 9, MaskStrategy::RandomWithEndpoints);
  const VolumeStack sub = apply_mask(stack, mask);

  ReconstructParams p = cs_params();
  const VolumeStack full = reconstruct_volume(sub, mask, p);

  // Crop columns [2, 5) x rows [1, 4) out of the subsampled stack.
  VolumeStack cropped = VolumeStack::zeros(sub.depth, 3, 3, 255.0);
  for (std::int64_t z = 0; z < sub.depth; ++z)
    for (std::int64_t y = 0; y < 3; ++y)
      for (std::int64_t x = 0; x < 3; ++x)
        cropped.at(z, y, x) = sub.at(z, y + 1, x + 2);
  const VolumeStack part = reconstruct_volume(cropped, mask, p);

  for (std::int64_t z = 0; z < full.depth; ++z)
    for (std::int64_t y = 0; y < 3; ++y)
      for (std::int64_t x = 0; x < 3; ++x)
        CHECK(part.at(z, y, x) == full.at(z, y + 1, x + 2));
}

TEST_CASE("clamp-known keeps measured slices and clips the rest") {
  VolumeStack stack = VolumeStack::zeros(10, 3, 3, 100.0);
  csr::Rng rng(5);
  for (double& v : stack.data) v = rng.uniform(60.0, 100.0);
  const SamplingMask mask =
      generate_mask(10, 0.4, 3, MaskStrategy::RandomWithEndpoints);
  const VolumeStack sub = apply_mask(stack, mask);

  ReconstructParams p = cs_params();
  p.method = Method::CubicSpline;
  RunStats stats;
  const VolumeStack out = reconstruct_volume(sub, mask, p, &stats);

  for (std::int64_t j = 0; j < mask.kept_count(); ++j)
    for (std::int64_t y = 0; y < 3; ++y)
      for (std::int64_t x = 0; x < 3; ++x)
        CHECK(out.at(mask.kept[static_cast<std::size_t>(j)], y, x) ==
              sub.at(j, y, x));
  for (const double v : out.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 100.0);
  }
  CHECK(stats.pixels == 9);
  CHECK(stats.wall_ms >= 0.0);
}

TEST_CASE("a corrupt pixel falls back without poisoning its neighbors") {
  VolumeStack stack = VolumeStack::zeros(12, 2, 2, 255.0);
  csr::Rng rng(6);
  for (double& v : stack.data) v = rng.uniform(0.0, 255.0);
  const SamplingMask mask =
      generate_mask(12, 0.5, 1, MaskStrategy::RandomWithEndpoints);
  VolumeStack sub = apply_mask(stack, mask);
  sub.at(1, 0, 0) = std::numeric_limits<double>::quiet_NaN();

  RunStats stats;
  const VolumeStack out = reconstruct_volume(sub, mask, cs_params(), &stats);
  CHECK(stats.solver_failures == 1);
  // The other three pixels stay finite.
  for (std::int64_t z = 0; z < 12; ++z) {
    CHECK(std::isfinite(out.at(z, 0, 1)));
    CHECK(std::isfinite(out.at(z, 1, 0)));
    CHECK(std::isfinite(out.at(z, 1, 1)));
  }
}

TEST_CASE("shape mismatches are rejected") {
  const VolumeStack stack =
      generate_phantom(4, 4, 10, PhantomKind::GaussianBlobs, 2, 255.0, 0.0);
  const SamplingMask mask =
      generate_mask(10, 0.5, 0, MaskStrategy::RandomWithEndpoints);
  // Unsubsampled stack: depth != kept count.
  CHECK_THROWS_AS(reconstruct_volume(stack, mask, cs_params()),
                  std::invalid_argument);
}

TEST_CASE("CS beats cubic interpolation on a noisy compressible stack") {
  // End-to-end ordering check under the acquisition protocol the method
  // targets: a noisy over-sampled stack scored against the clean truth.
  // Interpolation replicates sample noise; the L1 fit suppresses it.
  const VolumeStack clean =
      generate_phantom(8, 8, 301, PhantomKind::GaussianBlobs, 77, 255.0, 0.0);
  const VolumeStack noisy =
      generate_phantom(8, 8, 301, PhantomKind::GaussianBlobs, 77, 255.0, 30.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SamplingMask mask =
        generate_mask(301, 0.2, seed, MaskStrategy::RandomWithEndpoints);
    const VolumeStack sub = apply_mask(noisy, mask);

    ReconstructParams p = cs_params();
    const VolumeStack cs = reconstruct_volume(sub, mask, p);
    p.method = Method::CubicSpline;
    const VolumeStack cubic = reconstruct_volume(sub, mask, p);

    const double cs_psnr = csr::psnr3d(cs, clean);
    const double cubic_psnr = csr::psnr3d(cubic, clean);
    CAPTURE(seed);
    CHECK(cs_psnr > cubic_psnr);
  }
}
