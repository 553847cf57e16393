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

#include "csr/bench.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "csr/metrics.hpp"
#include "csr/phantom.hpp"

using csr::BenchConfig;
using csr::generate_phantom;
using csr::Method;
using csr::PhantomKind;
using csr::VolumeStack;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

BenchConfig small_config() {
  BenchConfig config;
  config.fractions = {0.3, 0.6};
  config.repeats = 3;
  config.methods = {Method::CS, Method::CubicSpline};
  config.base_seed = 5;
  config.workers = 2;
  config.zero_runtime = true;
  return config;
}

}  // namespace

TEST_CASE("full fraction scores perfectly against itself") {
  const VolumeStack stack = generate_phantom(
      6, 6, 16, PhantomKind::GaussianBlobs, 3, 255.0, 25.0);
  BenchConfig config = small_config();
  config.fractions = {1.0};
  config.repeats = 2;
  const auto rows = csr::run_benchmark(stack, nullptr, config);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(std::isinf(row.psnr3d_db));
    CHECK(row.ssim3d == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row.solver_failures == 0);
  }
}

TEST_CASE("row layout covers the whole grid with shared masks per repeat") {
  const VolumeStack stack = generate_phantom(
      5, 5, 20, PhantomKind::BandLimitedNoise, 4, 255.0, 30.0);
  const BenchConfig config = small_config();
  const auto rows = csr::run_benchmark(stack, nullptr, config);
  REQUIRE(rows.size() == 2 * 2 * 3);
  for (const auto& row : rows) {
    CHECK((row.method == "cs" || row.method == "cubic"));
    CHECK((row.fraction == 0.3 || row.fraction == 0.6));
    CHECK(row.repeat < 3);
    CHECK(row.seed == config.base_seed + static_cast<std::uint64_t>(row.repeat));
    CHECK(std::isfinite(row.psnr3d_db));
  }
}

TEST_CASE("benchmark CSVs are byte-identical across runs") {
  const VolumeStack stack = generate_phantom(
      6, 6, 24, PhantomKind::GaussianBlobs, 8, 255.0, 25.0);
  const BenchConfig config = small_config();

  const std::string csv_a = temp_path("csr_bench_a.csv");
  const std::string csv_b = temp_path("csr_bench_b.csv");
  const std::string svg_a = temp_path("csr_bench_a.svg");
  const std::string svg_b = temp_path("csr_bench_b.svg");
  csr::run_benchmark_to_files(stack, nullptr, config, csv_a, svg_a, nullptr);
  csr::run_benchmark_to_files(stack, nullptr, config, csv_b, svg_b, nullptr);

  CHECK(slurp(csv_a) == slurp(csv_b));
  CHECK(slurp(svg_a) == slurp(svg_b));
}

TEST_CASE("the CSV fully determines the SVG") {
  const VolumeStack stack = generate_phantom(
      6, 6, 24, PhantomKind::GaussianBlobs, 9, 255.0, 25.0);
  const std::string csv = temp_path("csr_bench_c.csv");
  const std::string svg = temp_path("csr_bench_c.svg");
  csr::run_benchmark_to_files(stack, nullptr, small_config(), csv, svg,
                              nullptr);

  // Re-render from the CSV alone.
  const auto rows = csr::read_metrics_csv(csv);
  const std::string replot = csr::render_sweep_svg(rows);
  CHECK(slurp(svg) == replot);
  CHECK(replot.find("<svg") == 0);
  CHECK(replot.find("PSNR3D") != std::string::npos);
  CHECK(replot.find("% of slices available") != std::string::npos);
}

TEST_CASE("scoring against a separate ground truth is supported") {
  const VolumeStack clean = generate_phantom(
      6, 6, 24, PhantomKind::GaussianBlobs, 12, 255.0, 0.0);
  const VolumeStack noisy = generate_phantom(
      6, 6, 24, PhantomKind::GaussianBlobs, 12, 255.0, 25.0);
  BenchConfig config = small_config();
  config.fractions = {1.0};
  config.repeats = 1;
  config.methods = {Method::CubicSpline};
  const auto rows = csr::run_benchmark(noisy, &clean, config);
  REQUIRE(rows.size() == 1);
  // Identity reconstruction of the noisy stack scored against the clean one:
  // finite PSNR equal to the stacks' own distance.
  CHECK(std::isfinite(rows[0].psnr3d_db));
  CHECK(rows[0].psnr3d_db ==
        doctest::Approx(csr::psnr3d(noisy, clean)).epsilon(1e-12));
}

TEST_CASE("mean PSNR grows with the sampling fraction") {
  const VolumeStack stack = generate_phantom(
      8, 8, 32, PhantomKind::GaussianBlobs, 15, 255.0, 25.0);
  BenchConfig config = small_config();
  config.fractions = {0.2, 0.7};
  config.repeats = 4;
  config.methods = {Method::CubicSpline, Method::Linear};
  const auto points = csr::summarize_rows(
      csr::run_benchmark(stack, nullptr, config));
  REQUIRE(points.size() == 4);
  for (const std::string method : {"cubic", "linear"}) {
    double lo = 0.0, hi = 0.0;
    for (const auto& p : points) {
      if (p.method != method) continue;
      (p.fraction == 0.2 ? lo : hi) = p.psnr_mean;
    }
    CHECK(hi > lo);
  }
}

TEST_CASE("config validation") {
  const VolumeStack stack = generate_phantom(
      4, 4, 12, PhantomKind::GaussianBlobs, 2, 255.0, 25.0);
  BenchConfig config = small_config();
  config.fractions = {};
  CHECK_THROWS_AS(csr::run_benchmark(stack, nullptr, config),
                  std::invalid_argument);
  config = small_config();
  config.fractions = {1.5};
  CHECK_THROWS_AS(csr::run_benchmark(stack, nullptr, config),
                  std::invalid_argument);
  config = small_config();
  config.repeats = 0;
  CHECK_THROWS_AS(csr::run_benchmark(stack, nullptr, config),
                  std::invalid_argument);
}
