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

#include "csr/stack_io.hpp"

#include <doctest.h>
#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "csr/rng.hpp"
#include "csr/sampling.hpp"

using csr::read_stack;
using csr::ReconstructionReport;
using csr::Rng;
using csr::SamplingMask;
using csr::StackFormat;
using csr::VolumeStack;
using csr::write_stack;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

VolumeStack random_stack(std::int64_t d, std::int64_t h, std::int64_t w,
                         double maxv, std::uint64_t seed, bool integers) {
  VolumeStack s = VolumeStack::zeros(d, h, w, maxv);
  Rng rng(seed);
  for (double& v : s.data) {
    v = rng.uniform(0.0, maxv);
    if (integers) v = std::floor(v);
  }
  return s;
}

// Minimal hand-rolled TIFF for reader edge cases: one page, little-endian,
// with caller-chosen tag overrides.
struct TinyTiffBuilder {
  std::vector<unsigned char> bytes;

  void u16(std::uint16_t v) {
    bytes.push_back(v & 0xff);
    bytes.push_back(v >> 8);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xff);
  }
  void entry(std::uint16_t tag, std::uint16_t type, std::uint32_t count,
             std::uint32_t value) {
    u16(tag);
    u16(type);
    u32(count);
    if (type == 3 && count == 1) {
      u16(static_cast<std::uint16_t>(value));
      u16(0);
    } else {
      u32(value);
    }
  }
};

std::string write_tiny_tiff(const std::string& name,
                            const std::vector<unsigned char>& pixel_bytes,
                            std::uint16_t width, std::uint16_t height,
                            std::uint16_t samples_per_pixel,
                            std::uint16_t compression,
                            std::uint16_t predictor) {
  TinyTiffBuilder b;
  b.bytes.push_back('I');
  b.bytes.push_back('I');
  b.u16(42);
  const std::uint32_t data_off = 8;
  std::uint32_t ifd_off = data_off + static_cast<std::uint32_t>(pixel_bytes.size());
  if (ifd_off % 2) ++ifd_off;
  b.u32(ifd_off);
  b.bytes.insert(b.bytes.end(), pixel_bytes.begin(), pixel_bytes.end());
  while (b.bytes.size() < ifd_off) b.bytes.push_back(0);
  const std::uint16_t n_entries = predictor != 1 ? 11 : 10;
  b.u16(n_entries);
  b.entry(256, 4, 1, width);
  b.entry(257, 4, 1, height);
  b.entry(258, 3, 1, 8);
  b.entry(259, 3, 1, compression);
  b.entry(262, 3, 1, 1);
  b.entry(273, 4, 1, data_off);
  b.entry(277, 3, 1, samples_per_pixel);
  b.entry(278, 4, 1, height);
  b.entry(279, 4, 1, static_cast<std::uint32_t>(pixel_bytes.size()));
  b.entry(284, 3, 1, 1);
  if (predictor != 1) b.entry(317, 3, 1, predictor);
  b.u32(0);

  const std::string path = temp_path(name);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(b.bytes.data()),
            static_cast<std::streamsize>(b.bytes.size()));
  return path;
}

}  // namespace

TEST_CASE("raw volumes round-trip bit-exactly") {
  const VolumeStack s = random_stack(4, 5, 6, 1.0, 7, false);
  const std::string path = temp_path("csr_io_raw.f64");
  write_stack(s, path, StackFormat::RawBinary);
  const VolumeStack back = read_stack(path, StackFormat::RawBinary);
  CHECK(back.depth == 4);
  CHECK(back.height == 5);
  CHECK(back.width == 6);
  CHECK(back.max_value == 1.0);
  CHECK(back.data == s.data);
}

TEST_CASE("raw reader validates the sidecar and the payload size") {
  const VolumeStack s = random_stack(2, 3, 3, 255.0, 8, false);
  const std::string path = temp_path("csr_io_raw2.f64");
  write_stack(s, path, StackFormat::RawBinary);

  SUBCASE("missing sidecar") {
    std::filesystem::remove(path + ".json");
    CHECK_THROWS_WITH_AS(read_stack(path, StackFormat::RawBinary),
                         doctest::Contains("sidecar"), std::runtime_error);
  }
  SUBCASE("size mismatch") {
    std::ofstream extra(path, std::ios::binary | std::ios::app);
    extra.write("xtra", 4);
    extra.close();
    CHECK_THROWS_WITH_AS(read_stack(path, StackFormat::RawBinary),
                         doctest::Contains("size"), std::runtime_error);
  }
}

TEST_CASE("16-bit TIFF round-trips integer data exactly") {
  const VolumeStack s = random_stack(3, 7, 5, 65535.0, 9, true);
  const std::string path = temp_path("csr_io_16.tiff");
  write_stack(s, path, StackFormat::MultiPageTiff);
  const VolumeStack back = read_stack(path, StackFormat::MultiPageTiff);
  CHECK(back.max_value == 65535.0);
  CHECK(back.depth == 3);
  CHECK(back.data == s.data);
}

TEST_CASE("8-bit TIFF round-trips integer data exactly") {
  const VolumeStack s = random_stack(5, 4, 9, 255.0, 10, true);
  const std::string path = temp_path("csr_io_8.tif");
  write_stack(s, path, StackFormat::MultiPageTiff);
  const VolumeStack back = read_stack(path, StackFormat::MultiPageTiff);
  CHECK(back.max_value == 255.0);
  CHECK(back.data == s.data);
}

TEST_CASE("non-integer data to TIFF quantizes with a warning") {
  VolumeStack s = VolumeStack::zeros(2, 2, 2, 255.0);
  s.data = {0.2, 1.7, 2.5, 3.4, 100.0, 200.0, 254.9, 7.0};
  const std::string path = temp_path("csr_io_lossy.tif");
  write_stack(s, path, StackFormat::MultiPageTiff);
  const VolumeStack back = read_stack(path, StackFormat::MultiPageTiff);
  for (std::size_t i = 0; i < s.data.size(); ++i)
    CHECK(back.data[i] == std::rint(s.data[i]));
}

TEST_CASE("multi-channel TIFF is rejected") {
  const std::vector<unsigned char> rgb(2 * 2 * 3, 42);
  const std::string path = write_tiny_tiff("csr_io_rgb.tif", rgb, 2, 2, 3, 1, 1);
  CHECK_THROWS_WITH_AS(read_stack(path, StackFormat::MultiPageTiff),
                       doctest::Contains("multi-channel"), std::runtime_error);
}

TEST_CASE("unsupported compression is rejected") {
  const std::vector<unsigned char> data(4, 1);
  const std::string path =
      write_tiny_tiff("csr_io_lzw.tif", data, 2, 2, 1, 5 /*LZW*/, 1);
  CHECK_THROWS_WITH_AS(read_stack(path, StackFormat::MultiPageTiff),
                       doctest::Contains("compression"), std::runtime_error);
}

TEST_CASE("deflate strips decode, with and without predictor") {
  // 3x2 gradient image, 8-bit.
  const std::vector<unsigned char> raster{10, 20, 30, 40, 50, 60};

  SUBCASE("plain deflate") {
    std::vector<unsigned char> packed(64);
    uLongf len = packed.size();
    REQUIRE(compress(packed.data(), &len, raster.data(), raster.size()) == Z_OK);
    packed.resize(len);
    const std::string path =
        write_tiny_tiff("csr_io_deflate.tif", packed, 3, 2, 1, 8, 1);
    const VolumeStack back = read_stack(path, StackFormat::MultiPageTiff);
    REQUIRE(back.data.size() == 6);
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(back.data[i] == static_cast<double>(raster[i]));
  }
  SUBCASE("deflate with horizontal differencing") {
    std::vector<unsigned char> diffed = raster;
    for (std::size_t row = 0; row < 2; ++row)
      for (std::size_t x = 2; x >= 1; --x)
        diffed[row * 3 + x] = static_cast<unsigned char>(
            diffed[row * 3 + x] - diffed[row * 3 + x - 1]);
    std::vector<unsigned char> packed(64);
    uLongf len = packed.size();
    REQUIRE(compress(packed.data(), &len, diffed.data(), diffed.size()) == Z_OK);
    packed.resize(len);
    const std::string path =
        write_tiny_tiff("csr_io_pred.tif", packed, 3, 2, 1, 8, 2);
    const VolumeStack back = read_stack(path, StackFormat::MultiPageTiff);
    REQUIRE(back.data.size() == 6);
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(back.data[i] == static_cast<double>(raster[i]));
  }
}

TEST_CASE("writers produce files their readers accept across random shapes") {
  Rng rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const std::int64_t d = 2 + rng.uniform_int(0, 14);
    const std::int64_t h = 1 + rng.uniform_int(0, 15);
    const std::int64_t w = 1 + rng.uniform_int(0, 15);

    const VolumeStack raw = random_stack(d, h, w, 1000.0, 100 + trial, false);
    const std::string rpath = temp_path("csr_io_fuzz.f64");
    write_stack(raw, rpath, StackFormat::RawBinary);
    CHECK(read_stack(rpath, StackFormat::RawBinary).data == raw.data);

    const VolumeStack tif = random_stack(d, h, w, 255.0, 200 + trial, true);
    const std::string tpath = temp_path("csr_io_fuzz.tif");
    write_stack(tif, tpath, StackFormat::MultiPageTiff);
    CHECK(read_stack(tpath, StackFormat::MultiPageTiff).data == tif.data);
  }
}

TEST_CASE("mask JSON round-trips with the documented key order") {
  const SamplingMask mask =
      csr::generate_mask(64, 0.25, 17, csr::MaskStrategy::Stratified);
  const std::string path = temp_path("csr_io_mask.json");
  csr::write_mask_json(mask, path);

  const SamplingMask back = csr::read_mask_json(path);
  CHECK(back.n_slices == mask.n_slices);
  CHECK(back.kept == mask.kept);
  CHECK(back.seed == mask.seed);
  CHECK(back.strategy == mask.strategy);
  CHECK(back.fraction == mask.fraction);

  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const auto pos = [&](const char* key) { return text.find(key); };
  CHECK(pos("\"n_slices\"") < pos("\"kept\""));
  CHECK(pos("\"kept\"") < pos("\"seed\""));
  CHECK(pos("\"seed\"") < pos("\"strategy\""));
  CHECK(pos("\"strategy\"") < pos("\"fraction\""));
}

TEST_CASE("metrics CSV: header, ordering, inf sentinel, round trip") {
  const std::string path = temp_path("csr_io_metrics.csv");

  SUBCASE("empty list gives a header-only file") {
    csr::write_metrics_csv({}, path);
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "method,fraction,repeat,seed,psnr3d_db,ssim3d,runtime_ms,"
          "solver_failures");
    CHECK_FALSE(std::getline(in, line));
  }

  SUBCASE("rows round-trip and sort by (method, fraction, repeat)") {
    std::vector<ReconstructionReport> rows(3);
    rows[0] = {"cubic", 0.2, 0, 7, 31.25, 0.875, 12, 0};
    rows[1] = {"cs", 0.5, 1, 8, std::numeric_limits<double>::infinity(), 1.0,
               340, 2};
    rows[2] = {"cs", 0.2, 0, 7, 36.875, 0.9375, 4200, 0};
    csr::write_metrics_csv(rows, path);

    const auto back = csr::read_metrics_csv(path);
    REQUIRE(back.size() == 3);
    CHECK(back[0].method == "cs");
    CHECK(back[0].fraction == 0.2);
    CHECK(back[1].method == "cs");
    CHECK(back[1].fraction == 0.5);
    CHECK(std::isinf(back[1].psnr3d_db));
    CHECK(back[2].method == "cubic");
    CHECK(back[2].psnr3d_db == 31.25);
    CHECK(back[2].ssim3d == 0.875);
    CHECK(back[1].runtime_ms == 340);
    CHECK(back[1].solver_failures == 2);

    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find(",inf,") != std::string::npos);
  }
}
