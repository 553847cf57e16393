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

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "csr/format.hpp"

namespace csr {
namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error(msg);
}

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> buf(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(reinterpret_cast<char*>(buf.data()), size))
    fail("short read on " + path);
  return buf;
}

void write_file(const std::string& path, const unsigned char* data,
                std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) fail("write failed on " + path);
}

// ---------------------------------------------------------------------------
// Raw binary (little-endian float64 + JSON sidecar)

void put_u64le(unsigned char* out, std::uint64_t bits) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(bits >> (8 * i));
}

std::uint64_t get_u64le(const unsigned char* in) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return bits;
}

VolumeStack read_raw(const std::string& path, double max_value_override) {
  const std::string sidecar_path = path + ".json";
  std::ifstream side(sidecar_path);
  if (!side) fail("missing sidecar " + sidecar_path);
  nlohmann::json j;
  try {
    side >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("bad sidecar " + sidecar_path + ": " + e.what());
  }
  VolumeStack stack;
  try {
    stack.depth = j.at("depth").get<std::int64_t>();
    stack.height = j.at("height").get<std::int64_t>();
    stack.width = j.at("width").get<std::int64_t>();
    stack.max_value = j.at("max_value").get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail("bad sidecar " + sidecar_path + ": " + e.what());
  }
  if (stack.depth < 1 || stack.height < 1 || stack.width < 1)
    fail("bad sidecar dimensions in " + sidecar_path);
  if (max_value_override > 0.0) stack.max_value = max_value_override;

  const std::vector<unsigned char> buf = read_file(path);
  const std::size_t expected = static_cast<std::size_t>(stack.voxels()) * 8;
  if (buf.size() != expected) {
    std::ostringstream os;
    os << path << ": size " << buf.size() << " != expected " << expected
       << " (" << stack.depth << "x" << stack.height << "x" << stack.width
       << " float64)";
    fail(os.str());
  }
  stack.data.resize(static_cast<std::size_t>(stack.voxels()));
  for (std::size_t i = 0; i < stack.data.size(); ++i) {
    const std::uint64_t bits = get_u64le(buf.data() + i * 8);
    double v;
    std::memcpy(&v, &bits, 8);
    stack.data[i] = v;
  }
  return stack;
}

void write_raw(const VolumeStack& stack, const std::string& path) {
  nlohmann::ordered_json j;
  j["depth"] = stack.depth;
  j["height"] = stack.height;
  j["width"] = stack.width;
  j["max_value"] = stack.max_value;
  std::ofstream side(path + ".json", std::ios::trunc);
  if (!side) fail("cannot open " + path + ".json for writing");
  side << j.dump(2) << "\n";
  if (!side) fail("write failed on " + path + ".json");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail("cannot open " + path + " for writing");
  std::vector<unsigned char> row(static_cast<std::size_t>(stack.width) * 8);
  for (std::int64_t z = 0; z < stack.depth; ++z) {
    for (std::int64_t y = 0; y < stack.height; ++y) {
      const double* src = stack.data.data() + (z * stack.height + y) * stack.width;
      for (std::int64_t x = 0; x < stack.width; ++x) {
        std::uint64_t bits;
        std::memcpy(&bits, &src[x], 8);
        put_u64le(row.data() + static_cast<std::size_t>(x) * 8, bits);
      }
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size()));
    }
  }
  if (!out) fail("write failed on " + path);
}

// ---------------------------------------------------------------------------
// Multi-page TIFF (grayscale 8/16-bit, strips, compression none or deflate)

enum : std::uint16_t {
  kTagImageWidth = 256,
  kTagImageLength = 257,
  kTagBitsPerSample = 258,
  kTagCompression = 259,
  kTagPhotometric = 262,
  kTagStripOffsets = 273,
  kTagSamplesPerPixel = 277,
  kTagRowsPerStrip = 278,
  kTagStripByteCounts = 279,
  kTagPlanarConfig = 284,
  kTagPredictor = 317,
  kTagTileWidth = 322,
  kTagSampleFormat = 339,
};

struct TiffReader {
  const std::vector<unsigned char>& buf;
  bool big_endian = false;

  std::uint16_t u16(std::size_t off) const {
    if (off + 2 > buf.size()) fail("truncated TIFF");
    return big_endian
               ? static_cast<std::uint16_t>((buf[off] << 8) | buf[off + 1])
               : static_cast<std::uint16_t>(buf[off] | (buf[off + 1] << 8));
  }

  std::uint32_t u32(std::size_t off) const {
    if (off + 4 > buf.size()) fail("truncated TIFF");
    if (big_endian)
      return (static_cast<std::uint32_t>(buf[off]) << 24) |
             (static_cast<std::uint32_t>(buf[off + 1]) << 16) |
             (static_cast<std::uint32_t>(buf[off + 2]) << 8) |
             static_cast<std::uint32_t>(buf[off + 3]);
    return static_cast<std::uint32_t>(buf[off]) |
           (static_cast<std::uint32_t>(buf[off + 1]) << 8) |
           (static_cast<std::uint32_t>(buf[off + 2]) << 16) |
           (static_cast<std::uint32_t>(buf[off + 3]) << 24);
  }
};

struct TiffField {
  std::uint16_t type = 0;
  std::vector<std::uint64_t> values;

  std::uint64_t scalar(const char* what) const {
    if (values.size() != 1) fail(std::string("expected one value for ") + what);
    return values[0];
  }
};

std::size_t tiff_type_size(std::uint16_t type) {
  switch (type) {
    case 1: return 1;   // BYTE
    case 3: return 2;   // SHORT
    case 4: return 4;   // LONG
    default: return 0;  // anything else we skip
  }
}

std::vector<unsigned char> zlib_inflate(const unsigned char* src,
                                        std::size_t len,
                                        std::size_t expected) {
  std::vector<unsigned char> out(expected);
  uLongf out_len = static_cast<uLongf>(expected);
  const int rc = uncompress(out.data(), &out_len, src,
                            static_cast<uLong>(len));
  if (rc != Z_OK) fail("TIFF deflate strip failed to decompress");
  out.resize(out_len);
  return out;
}

VolumeStack read_tiff(const std::string& path, double max_value_override) {
  const std::vector<unsigned char> buf = read_file(path);
  if (buf.size() < 8) fail(path + ": not a TIFF file");
  TiffReader r{buf};
  if (buf[0] == 'I' && buf[1] == 'I') {
    r.big_endian = false;
  } else if (buf[0] == 'M' && buf[1] == 'M') {
    r.big_endian = true;
  } else {
    fail(path + ": not a TIFF file");
  }
  if (r.u16(2) != 42) fail(path + ": not a TIFF file");

  std::vector<std::vector<double>> pages;
  std::int64_t width = 0, height = 0;
  int bits = 0;

  std::size_t ifd_off = r.u32(4);
  while (ifd_off != 0) {
    const std::uint16_t entry_count = r.u16(ifd_off);
    std::map<std::uint16_t, TiffField> fields;
    for (std::uint16_t e = 0; e < entry_count; ++e) {
      const std::size_t off = ifd_off + 2 + static_cast<std::size_t>(e) * 12;
      const std::uint16_t tag = r.u16(off);
      TiffField field;
      field.type = r.u16(off + 2);
      const std::uint32_t count = r.u32(off + 4);
      const std::size_t elem = tiff_type_size(field.type);
      if (elem == 0) continue;  // unknown value type: tag is ignorable
      const std::size_t total = elem * count;
      const std::size_t value_off = total <= 4 ? off + 8 : r.u32(off + 8);
      field.values.reserve(count);
      for (std::uint32_t i = 0; i < count; ++i) {
        const std::size_t p = value_off + i * elem;
        if (elem == 1) {
          if (p >= buf.size()) fail("truncated TIFF");
          field.values.push_back(buf[p]);
        } else if (elem == 2) {
          field.values.push_back(r.u16(p));
        } else {
          field.values.push_back(r.u32(p));
        }
      }
      fields[tag] = std::move(field);
    }
    const std::size_t next_off =
        ifd_off + 2 + static_cast<std::size_t>(entry_count) * 12;
    ifd_off = r.u32(next_off);

    auto get = [&](std::uint16_t tag, std::uint64_t fallback,
                   bool required = false) -> std::uint64_t {
      const auto it = fields.find(tag);
      if (it == fields.end()) {
        if (required) fail(path + ": TIFF page missing required tag");
        return fallback;
      }
      return it->second.scalar("tag");
    };

    if (fields.count(kTagTileWidth)) fail(path + ": unsupported: tiled TIFF");

    const std::int64_t w = static_cast<std::int64_t>(get(kTagImageWidth, 0, true));
    const std::int64_t h = static_cast<std::int64_t>(get(kTagImageLength, 0, true));
    const std::uint64_t samples = get(kTagSamplesPerPixel, 1);
    if (samples != 1) fail(path + ": unsupported: multi-channel TIFF");
    const std::uint64_t photometric = get(kTagPhotometric, 1);
    if (photometric > 1)
      fail(path + ": unsupported: non-grayscale photometric interpretation");
    const auto bits_it = fields.find(kTagBitsPerSample);
    const std::uint64_t page_bits =
        bits_it == fields.end() ? 1 : bits_it->second.values.at(0);
    if (page_bits != 8 && page_bits != 16)
      fail(path + ": unsupported: only 8- and 16-bit grayscale TIFF");
    const std::uint64_t compression = get(kTagCompression, 1);
    if (compression != 1 && compression != 8 && compression != 32946)
      fail(path + ": unsupported: compression beyond none/deflate");
    const std::uint64_t planar = get(kTagPlanarConfig, 1);
    if (planar != 1) fail(path + ": unsupported: planar configuration");
    const std::uint64_t sample_format = get(kTagSampleFormat, 1);
    if (sample_format != 1)
      fail(path + ": unsupported: non-integer sample format");
    const std::uint64_t predictor = get(kTagPredictor, 1);
    if (predictor != 1 && predictor != 2)
      fail(path + ": unsupported: predictor");

    if (pages.empty()) {
      width = w;
      height = h;
      bits = static_cast<int>(page_bits);
    } else if (w != width || h != height ||
               static_cast<int>(page_bits) != bits) {
      fail(path + ": TIFF pages have inconsistent shape or bit depth");
    }

    const auto offsets_it = fields.find(kTagStripOffsets);
    const auto counts_it = fields.find(kTagStripByteCounts);
    if (offsets_it == fields.end() || counts_it == fields.end())
      fail(path + ": TIFF page missing strip layout");
    const auto& offsets = offsets_it->second.values;
    const auto& counts = counts_it->second.values;
    if (offsets.size() != counts.size())
      fail(path + ": TIFF strip offsets/counts mismatch");
    const std::int64_t rows_per_strip = static_cast<std::int64_t>(
        get(kTagRowsPerStrip, static_cast<std::uint64_t>(h)));

    const std::size_t bytes_per_sample = static_cast<std::size_t>(bits / 8);
    const std::size_t row_bytes = static_cast<std::size_t>(w) * bytes_per_sample;
    std::vector<unsigned char> raster;
    raster.reserve(static_cast<std::size_t>(h) * row_bytes);

    std::int64_t rows_done = 0;
    for (std::size_t s = 0; s < offsets.size(); ++s) {
      const std::int64_t rows_here =
          std::min<std::int64_t>(rows_per_strip, h - rows_done);
      const std::size_t decoded_bytes =
          static_cast<std::size_t>(rows_here) * row_bytes;
      const std::size_t soff = static_cast<std::size_t>(offsets[s]);
      const std::size_t slen = static_cast<std::size_t>(counts[s]);
      if (soff + slen > buf.size()) fail(path + ": TIFF strip out of bounds");
      std::vector<unsigned char> strip;
      if (compression == 1) {
        if (slen < decoded_bytes) fail(path + ": TIFF strip too short");
        strip.assign(buf.begin() + static_cast<std::ptrdiff_t>(soff),
                     buf.begin() + static_cast<std::ptrdiff_t>(soff + decoded_bytes));
      } else {
        strip = zlib_inflate(buf.data() + soff, slen, decoded_bytes);
        if (strip.size() != decoded_bytes)
          fail(path + ": TIFF strip decoded to wrong size");
      }
      if (predictor == 2) {
        // Undo horizontal differencing, sample-wise per row.
        for (std::int64_t row = 0; row < rows_here; ++row) {
          unsigned char* p = strip.data() + static_cast<std::size_t>(row) * row_bytes;
          if (bits == 8) {
            for (std::int64_t x = 1; x < w; ++x) p[x] = static_cast<unsigned char>(p[x] + p[x - 1]);
          } else {
            for (std::int64_t x = 1; x < w; ++x) {
              std::uint16_t prev, cur;
              if (r.big_endian) {
                prev = static_cast<std::uint16_t>((p[2 * (x - 1)] << 8) | p[2 * (x - 1) + 1]);
                cur = static_cast<std::uint16_t>((p[2 * x] << 8) | p[2 * x + 1]);
              } else {
                prev = static_cast<std::uint16_t>(p[2 * (x - 1)] | (p[2 * (x - 1) + 1] << 8));
                cur = static_cast<std::uint16_t>(p[2 * x] | (p[2 * x + 1] << 8));
              }
              cur = static_cast<std::uint16_t>(cur + prev);
              if (r.big_endian) {
                p[2 * x] = static_cast<unsigned char>(cur >> 8);
                p[2 * x + 1] = static_cast<unsigned char>(cur & 0xff);
              } else {
                p[2 * x] = static_cast<unsigned char>(cur & 0xff);
                p[2 * x + 1] = static_cast<unsigned char>(cur >> 8);
              }
            }
          }
        }
      }
      raster.insert(raster.end(), strip.begin(), strip.end());
      rows_done += rows_here;
    }
    if (rows_done != h) fail(path + ": TIFF strips cover wrong row count");

    std::vector<double> page(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    if (bits == 8) {
      for (std::size_t i = 0; i < page.size(); ++i) page[i] = raster[i];
    } else {
      for (std::size_t i = 0; i < page.size(); ++i) {
        const unsigned char lo = raster[2 * i];
        const unsigned char hi = raster[2 * i + 1];
        page[i] = r.big_endian
                      ? static_cast<double>((lo << 8) | hi)
                      : static_cast<double>(lo | (hi << 8));
      }
    }
    pages.push_back(std::move(page));
  }

  if (pages.empty()) fail(path + ": TIFF has no pages");

  VolumeStack stack;
  stack.depth = static_cast<std::int64_t>(pages.size());
  stack.height = height;
  stack.width = width;
  stack.max_value =
      max_value_override > 0.0 ? max_value_override : (bits == 8 ? 255.0 : 65535.0);
  stack.data.reserve(static_cast<std::size_t>(stack.voxels()));
  for (const auto& page : pages)
    stack.data.insert(stack.data.end(), page.begin(), page.end());
  return stack;
}

void append_u16le(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void append_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void append_entry(std::vector<unsigned char>& out, std::uint16_t tag,
                  std::uint16_t type, std::uint32_t count, std::uint32_t value) {
  append_u16le(out, tag);
  append_u16le(out, type);
  append_u32le(out, count);
  if (type == 3 && count == 1) {
    append_u16le(out, static_cast<std::uint16_t>(value));
    append_u16le(out, 0);
  } else {
    append_u32le(out, value);
  }
}

void write_tiff(const VolumeStack& stack, const std::string& path) {
  if (stack.max_value > 65535.0)
    fail("TIFF output supports max_value up to 65535");
  const int bits = stack.max_value <= 255.0 ? 8 : 16;
  const std::uint32_t level_cap = bits == 8 ? 255u : 65535u;

  bool lossy = false;
  for (const double v : stack.data) {
    if (v != std::rint(v)) {
      lossy = true;
      break;
    }
  }
  if (lossy)
    std::fprintf(stderr,
                 "warning: quantizing non-integer intensities to %d-bit TIFF "
                 "(lossy); use the raw format for exact round trips\n",
                 bits);

  const std::size_t bytes_per_sample = static_cast<std::size_t>(bits / 8);
  const std::size_t strip_bytes =
      static_cast<std::size_t>(stack.height * stack.width) * bytes_per_sample;
  const std::size_t pages = static_cast<std::size_t>(stack.depth);

  std::vector<unsigned char> out;
  out.reserve(8 + pages * (strip_bytes + 150));

  // Header; first IFD sits after all strip data (word-aligned).
  std::size_t data_start = 8;
  std::size_t ifds_start = data_start + pages * strip_bytes;
  if (ifds_start % 2 != 0) ++ifds_start;
  constexpr std::size_t kEntriesPerIfd = 11;
  constexpr std::size_t kIfdBytes = 2 + kEntriesPerIfd * 12 + 4;

  out.push_back('I');
  out.push_back('I');
  append_u16le(out, 42);
  append_u32le(out, static_cast<std::uint32_t>(ifds_start));

  for (std::int64_t z = 0; z < stack.depth; ++z) {
    const double* slice = stack.slice(z);
    for (std::int64_t i = 0; i < stack.height * stack.width; ++i) {
      const double q = std::rint(slice[i]);
      const std::uint32_t v = static_cast<std::uint32_t>(
          std::clamp(q, 0.0, static_cast<double>(level_cap)));
      out.push_back(static_cast<unsigned char>(v & 0xff));
      if (bits == 16) out.push_back(static_cast<unsigned char>(v >> 8));
    }
  }
  while (out.size() < ifds_start) out.push_back(0);

  for (std::size_t p = 0; p < pages; ++p) {
    append_u16le(out, kEntriesPerIfd);
    append_entry(out, kTagImageWidth, 4, 1, static_cast<std::uint32_t>(stack.width));
    append_entry(out, kTagImageLength, 4, 1, static_cast<std::uint32_t>(stack.height));
    append_entry(out, kTagBitsPerSample, 3, 1, static_cast<std::uint32_t>(bits));
    append_entry(out, kTagCompression, 3, 1, 1);
    append_entry(out, kTagPhotometric, 3, 1, 1);
    append_entry(out, kTagStripOffsets, 4, 1,
                 static_cast<std::uint32_t>(data_start + p * strip_bytes));
    append_entry(out, kTagSamplesPerPixel, 3, 1, 1);
    append_entry(out, kTagRowsPerStrip, 4, 1, static_cast<std::uint32_t>(stack.height));
    append_entry(out, kTagStripByteCounts, 4, 1, static_cast<std::uint32_t>(strip_bytes));
    append_entry(out, kTagPlanarConfig, 3, 1, 1);
    append_entry(out, kTagSampleFormat, 3, 1, 1);
    const std::size_t next =
        p + 1 < pages ? ifds_start + (p + 1) * kIfdBytes : 0;
    append_u32le(out, static_cast<std::uint32_t>(next));
  }

  write_file(path, out.data(), out.size());
}

}  // namespace

StackFormat guess_stack_format(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == "tif" || ext == "tiff") return StackFormat::MultiPageTiff;
  }
  return StackFormat::RawBinary;
}

VolumeStack read_stack(const std::string& path, StackFormat format,
                       double max_value_override) {
  return format == StackFormat::MultiPageTiff
             ? read_tiff(path, max_value_override)
             : read_raw(path, max_value_override);
}

void write_stack(const VolumeStack& stack, const std::string& path,
                 StackFormat format) {
  if (format == StackFormat::MultiPageTiff)
    write_tiff(stack, path);
  else
    write_raw(stack, path);
}

void write_mask_json(const SamplingMask& mask, const std::string& path) {
  nlohmann::ordered_json j;
  j["n_slices"] = mask.n_slices;
  j["kept"] = mask.kept;
  j["seed"] = mask.seed;
  j["strategy"] = to_string(mask.strategy);
  j["fraction"] = mask.fraction;
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) fail("write failed on " + path);
}

SamplingMask read_mask_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("bad mask file " + path + ": " + e.what());
  }
  SamplingMask mask;
  try {
    mask.n_slices = j.at("n_slices").get<std::int64_t>();
    mask.kept = j.at("kept").get<std::vector<std::int64_t>>();
    mask.seed = j.at("seed").get<std::uint64_t>();
    mask.strategy = mask_strategy_from_string(j.at("strategy").get<std::string>());
    mask.fraction = j.at("fraction").get<double>();
  } catch (const std::exception& e) {
    fail("bad mask file " + path + ": " + e.what());
  }
  const ValidationResult check = validate_mask(mask);
  if (!check.ok) fail("invalid mask in " + path + ": " + check.violations[0]);
  return mask;
}

void write_metrics_csv(std::span<const ReconstructionReport> rows,
                       const std::string& path) {
  std::vector<ReconstructionReport> sorted(rows.begin(), rows.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ReconstructionReport& a, const ReconstructionReport& b) {
                     if (a.method != b.method) return a.method < b.method;
                     if (a.fraction != b.fraction) return a.fraction < b.fraction;
                     return a.repeat < b.repeat;
                   });
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail("cannot open " + path + " for writing");
  out << "method,fraction,repeat,seed,psnr3d_db,ssim3d,runtime_ms,solver_failures\n";
  for (const auto& r : sorted) {
    out << r.method << ',' << format_double(r.fraction) << ',' << r.repeat
        << ',' << r.seed << ',' << format_double(r.psnr3d_db) << ','
        << format_double(r.ssim3d) << ',' << r.runtime_ms << ','
        << r.solver_failures << '\n';
  }
  if (!out) fail("write failed on " + path);
}

std::vector<ReconstructionReport> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(path + ": empty CSV");
  if (line != "method,fraction,repeat,seed,psnr3d_db,ssim3d,runtime_ms,solver_failures")
    fail(path + ": unexpected CSV header");
  std::vector<ReconstructionReport> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) fail(path + ": malformed CSV row: " + line);
    ReconstructionReport r;
    r.method = cells[0];
    r.fraction = parse_double(cells[1]);
    r.repeat = static_cast<int>(parse_double(cells[2]));
    r.seed = static_cast<std::uint64_t>(std::stoull(cells[3]));
    r.psnr3d_db = parse_double(cells[4]);
    r.ssim3d = parse_double(cells[5]);
    r.runtime_ms = static_cast<std::int64_t>(std::stoll(cells[6]));
    r.solver_failures = static_cast<std::int64_t>(std::stoll(cells[7]));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace csr
