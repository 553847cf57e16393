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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "csr/format.hpp"
#include "csr/metrics.hpp"
#include "csr/sampling.hpp"

namespace csr {
namespace {

void check_config(const BenchConfig& config) {
  if (config.fractions.empty())
    throw std::invalid_argument("benchmark needs at least one fraction");
  for (const double f : config.fractions)
    if (!(f > 0.0 && f <= 1.0))
      throw std::invalid_argument("fractions must be in (0, 1]");
  if (config.repeats < 1)
    throw std::invalid_argument("repeats must be >= 1");
  if (config.methods.empty())
    throw std::invalid_argument("benchmark needs at least one method");
}

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (const double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2 || !std::isfinite(mean)) return 0.0;
  double acc = 0.0;
  for (const double x : v) acc += (x - mean) * (x - mean);
  const double variance = acc / static_cast<double>(v.size() - 1);
  return std::sqrt(variance / static_cast<double>(v.size()));
}

}  // namespace

std::vector<ReconstructionReport> run_benchmark(
    const VolumeStack& stack, const VolumeStack* ground_truth,
    const BenchConfig& config) {
  check_config(config);
  const VolumeStack& reference = ground_truth ? *ground_truth : stack;
  if (ground_truth &&
      (ground_truth->depth != stack.depth ||
       ground_truth->height != stack.height ||
       ground_truth->width != stack.width))
    throw std::invalid_argument("ground truth shape differs from stack");

  std::vector<ReconstructionReport> rows;
  rows.reserve(config.methods.size() * config.fractions.size() *
               static_cast<std::size_t>(config.repeats));

  for (const Method method : config.methods) {
    for (const double fraction : config.fractions) {
      for (int repeat = 0; repeat < config.repeats; ++repeat) {
        const std::uint64_t seed =
            config.base_seed + static_cast<std::uint64_t>(repeat);
        ReconstructionReport row;
        row.method = to_string(method);
        row.fraction = fraction;
        row.repeat = repeat;
        row.seed = seed;
        try {
          const SamplingMask mask =
              generate_mask(stack.depth, fraction, seed, config.strategy);
          const VolumeStack sub = apply_mask(stack, mask);
          ReconstructParams params;
          params.method = method;
          params.c = config.c;
          params.solver = config.solver;
          params.clamp_known = config.clamp_known;
          params.workers = config.workers;
          RunStats stats;
          const VolumeStack recon = reconstruct_volume(sub, mask, params, &stats);
          row.psnr3d_db = psnr3d(recon, reference);
          row.ssim3d = ssim3d(recon, reference);
          row.runtime_ms = config.zero_runtime
                               ? 0
                               : static_cast<std::int64_t>(stats.wall_ms);
          row.solver_failures = stats.solver_failures;
        } catch (const std::exception& e) {
          // Record the cell as failed and keep sweeping.
          row.psnr3d_db = std::numeric_limits<double>::quiet_NaN();
          row.ssim3d = std::numeric_limits<double>::quiet_NaN();
          row.runtime_ms = 0;
          row.solver_failures = stack.height * stack.width;
          if (config.verbose)
            std::fprintf(stderr, "benchmark cell failed: %s\n", e.what());
        }
        if (config.verbose) {
          std::fprintf(stderr,
                       "benchmark: method=%s fraction=%s repeat=%d "
                       "psnr3d_db=%s ssim3d=%s\n",
                       row.method.c_str(), format_double(row.fraction).c_str(),
                       repeat, format_double(row.psnr3d_db).c_str(),
                       format_double(row.ssim3d).c_str());
          std::fflush(stderr);
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<SweepPoint> summarize_rows(
    std::span<const ReconstructionReport> rows) {
  std::map<std::pair<std::string, double>,
           std::pair<std::vector<double>, std::vector<double>>>
      groups;
  for (const auto& row : rows) {
    auto& bucket = groups[{row.method, row.fraction}];
    bucket.first.push_back(row.psnr3d_db);
    bucket.second.push_back(row.ssim3d);
  }
  std::vector<SweepPoint> points;
  points.reserve(groups.size());
  for (const auto& [key, values] : groups) {
    SweepPoint p;
    p.method = key.first;
    p.fraction = key.second;
    p.repeats = static_cast<int>(values.first.size());
    p.psnr_mean = mean_of(values.first);
    p.psnr_stderr = stderr_of(values.first, p.psnr_mean);
    p.ssim_mean = mean_of(values.second);
    p.ssim_stderr = stderr_of(values.second, p.ssim_mean);
    points.push_back(std::move(p));
  }
  return points;
}

namespace {

struct Panel {
  double x0, y0, x1, y1;  // plot rectangle in SVG coordinates
  double xlo, xhi;        // data domain
  double ylo, yhi;

  double sx(double x) const {
    return x0 + (x - xlo) / (xhi - xlo) * (x1 - x0);
  }
  double sy(double y) const {
    return y1 - (y - ylo) / (yhi - ylo) * (y1 - y0);
  }
};

std::string svg_num(double v) {
  // Fixed rounding keeps coordinates short and deterministic.
  return format_double(std::round(v * 100.0) / 100.0);
}

const char* method_color(const std::string& method) {
  if (method == "cs") return "#1f77b4";
  if (method == "cubic") return "#ff7f0e";
  if (method == "linear") return "#2ca02c";
  return "#7f7f7f";
}

void render_panel(std::ostringstream& out, const Panel& panel,
                  const std::vector<SweepPoint>& points, bool use_psnr,
                  const std::string& y_label,
                  const std::vector<std::string>& methods) {
  // Frame and ticks.
  out << "<rect x=\"" << svg_num(panel.x0) << "\" y=\"" << svg_num(panel.y0)
      << "\" width=\"" << svg_num(panel.x1 - panel.x0) << "\" height=\""
      << svg_num(panel.y1 - panel.y0)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = panel.xlo + (panel.xhi - panel.xlo) * t / 4.0;
    const double px = panel.sx(fx);
    out << "<line x1=\"" << svg_num(px) << "\" y1=\"" << svg_num(panel.y1)
        << "\" x2=\"" << svg_num(px) << "\" y2=\"" << svg_num(panel.y1 + 5)
        << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << svg_num(px) << "\" y=\"" << svg_num(panel.y1 + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">"
        << format_double(std::round(fx * 10.0) / 10.0) << "</text>\n";
    const double fy = panel.ylo + (panel.yhi - panel.ylo) * t / 4.0;
    const double py = panel.sy(fy);
    out << "<line x1=\"" << svg_num(panel.x0 - 5) << "\" y1=\"" << svg_num(py)
        << "\" x2=\"" << svg_num(panel.x0) << "\" y2=\"" << svg_num(py)
        << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << svg_num(panel.x0 - 8) << "\" y=\""
        << svg_num(py + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">"
        << format_double(std::round(fy * 100.0) / 100.0) << "</text>\n";
  }
  out << "<text x=\"" << svg_num((panel.x0 + panel.x1) / 2.0) << "\" y=\""
      << svg_num(panel.y1 + 36)
      << "\" font-size=\"12\" text-anchor=\"middle\">% of slices available"
      << "</text>\n";
  out << "<text x=\"" << svg_num(panel.x0 - 40) << "\" y=\""
      << svg_num((panel.y0 + panel.y1) / 2.0)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
      << svg_num(panel.x0 - 40) << " " << svg_num((panel.y0 + panel.y1) / 2.0)
      << ")\">" << y_label << "</text>\n";

  // One polyline + error bars per method.
  for (const std::string& method : methods) {
    const char* color = method_color(method);
    std::ostringstream polyline;
    for (const SweepPoint& p : points) {
      if (p.method != method) continue;
      const double value = use_psnr ? p.psnr_mean : p.ssim_mean;
      const double err = use_psnr ? p.psnr_stderr : p.ssim_stderr;
      const double px = panel.sx(p.fraction * 100.0);
      // Off-scale means (infinite PSNR at fraction 1.0) pin to the top edge.
      const double py = std::isfinite(value)
                            ? panel.sy(value)
                            : (value > 0 ? panel.y0 : panel.y1);
      polyline << svg_num(px) << "," << svg_num(py) << " ";
      if (std::isfinite(value) && err > 0.0) {
        const double ylo = panel.sy(value - err);
        const double yhi = panel.sy(value + err);
        out << "<line x1=\"" << svg_num(px) << "\" y1=\"" << svg_num(ylo)
            << "\" x2=\"" << svg_num(px) << "\" y2=\"" << svg_num(yhi)
            << "\" stroke=\"" << color << "\"/>\n";
        out << "<line x1=\"" << svg_num(px - 3) << "\" y1=\"" << svg_num(ylo)
            << "\" x2=\"" << svg_num(px + 3) << "\" y2=\"" << svg_num(ylo)
            << "\" stroke=\"" << color << "\"/>\n";
        out << "<line x1=\"" << svg_num(px - 3) << "\" y1=\"" << svg_num(yhi)
            << "\" x2=\"" << svg_num(px + 3) << "\" y2=\"" << svg_num(yhi)
            << "\" stroke=\"" << color << "\"/>\n";
      }
      out << "<circle cx=\"" << svg_num(px) << "\" cy=\"" << svg_num(py)
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    out << "<polyline points=\"" << polyline.str()
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
  }

  // Legend.
  double ly = panel.y0 + 14.0;
  for (const std::string& method : methods) {
    const char* color = method_color(method);
    out << "<line x1=\"" << svg_num(panel.x1 - 90) << "\" y1=\"" << svg_num(ly - 4)
        << "\" x2=\"" << svg_num(panel.x1 - 70) << "\" y2=\"" << svg_num(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << svg_num(panel.x1 - 65) << "\" y=\"" << svg_num(ly)
        << "\" font-size=\"11\">" << method << "</text>\n";
    ly += 14.0;
  }
}

}  // namespace

std::string render_sweep_svg(std::span<const ReconstructionReport> rows) {
  const std::vector<SweepPoint> points = summarize_rows(rows);
  if (points.empty()) throw std::invalid_argument("no rows to plot");

  std::vector<std::string> methods;
  for (const SweepPoint& p : points)
    if (std::find(methods.begin(), methods.end(), p.method) == methods.end())
      methods.push_back(p.method);
  std::sort(methods.begin(), methods.end());

  double xlo = 1e300, xhi = -1e300;
  double psnr_lo = 1e300, psnr_hi = -1e300;
  double ssim_lo = 1e300, ssim_hi = -1e300;
  for (const SweepPoint& p : points) {
    xlo = std::min(xlo, p.fraction * 100.0);
    xhi = std::max(xhi, p.fraction * 100.0);
    if (std::isfinite(p.psnr_mean)) {
      psnr_lo = std::min(psnr_lo, p.psnr_mean - p.psnr_stderr);
      psnr_hi = std::max(psnr_hi, p.psnr_mean + p.psnr_stderr);
    }
    if (std::isfinite(p.ssim_mean)) {
      ssim_lo = std::min(ssim_lo, p.ssim_mean - p.ssim_stderr);
      ssim_hi = std::max(ssim_hi, p.ssim_mean + p.ssim_stderr);
    }
  }
  if (xlo == xhi) {
    xlo -= 5.0;
    xhi += 5.0;
  }
  auto pad_domain = [](double& lo, double& hi, double fallback) {
    if (lo > hi) {  // no finite values at all
      lo = 0.0;
      hi = fallback;
    }
    double pad = (hi - lo) * 0.08;
    if (pad == 0.0) pad = fallback * 0.05 + 1e-6;
    lo -= pad;
    hi += pad;
  };
  pad_domain(psnr_lo, psnr_hi, 50.0);
  pad_domain(ssim_lo, ssim_hi, 1.0);

  Panel psnr_panel{70.0, 30.0, 430.0, 320.0, xlo, xhi, psnr_lo, psnr_hi};
  Panel ssim_panel{530.0, 30.0, 890.0, 320.0, xlo, xhi, ssim_lo, ssim_hi};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"920\" "
         "height=\"380\" viewBox=\"0 0 920 380\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"920\" height=\"380\" fill=\"white\"/>\n";
  render_panel(out, psnr_panel, points, true, "PSNR3D (dB)", methods);
  render_panel(out, ssim_panel, points, false, "SSIM3D", methods);
  out << "</svg>\n";
  return out.str();
}

std::vector<ReconstructionReport> run_benchmark_to_files(
    const VolumeStack& stack, const VolumeStack* ground_truth,
    const BenchConfig& config, const std::string& csv_path,
    const std::string& svg_path, std::FILE* means_out) {
  const std::vector<ReconstructionReport> rows =
      run_benchmark(stack, ground_truth, config);
  write_metrics_csv(rows, csv_path);

  // Plot from the file, not from memory: the CSV is the artifact of record
  // and must fully determine the chart.
  const std::vector<ReconstructionReport> reread = read_metrics_csv(csv_path);
  if (!svg_path.empty()) {
    const std::string svg = render_sweep_svg(reread);
    std::ofstream out(svg_path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + svg_path);
    out << svg;
    if (!out) throw std::runtime_error("write failed on " + svg_path);
  }

  if (means_out) {
    for (const SweepPoint& p : summarize_rows(reread)) {
      std::fprintf(means_out,
                   "method=%s fraction=%s mean_psnr3d_db=%s mean_ssim3d=%s\n",
                   p.method.c_str(), format_double(p.fraction).c_str(),
                   format_double(p.psnr_mean).c_str(),
                   format_double(p.ssim_mean).c_str());
    }
    std::fflush(means_out);
  }
  return rows;
}

}  // namespace csr
