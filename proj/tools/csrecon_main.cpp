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

// Command-line front end. Everything numerical happens behind the shared
// library's C API (csrecon.h); this file only parses flags, moves files and
// prints results.

#include <csrecon.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using ordered_json = nlohmann::ordered_json;

struct StackDeleter {
  void operator()(csr_stack* s) const { csr_stack_free(s); }
};
struct MaskDeleter {
  void operator()(csr_mask* m) const { csr_mask_free(m); }
};
using StackPtr = std::unique_ptr<csr_stack, StackDeleter>;
using MaskPtr = std::unique_ptr<csr_mask, MaskDeleter>;

// Data/processing failures exit 1 with the library's diagnostic.
int fail_data(const std::string& context) {
  std::fprintf(stderr, "csrecon: %s: %s\n", context.c_str(), csr_last_error());
  return 1;
}

void print_provenance(const std::string& command, const ordered_json& config) {
  ordered_json line;
  line["command"] = command;
  line["config"] = config;
  std::fprintf(stderr, "%s\n", line.dump().c_str());
}

// "inf", or a decimal that always carries a fractional part ("1.0", "36.88").
std::string metric_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  std::string s(buf);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos)
    s += ".0";
  return s;
}

StackPtr load_stack(const std::string& path, const std::string& format,
                    double max_value_override, int& status) {
  csr_stack* raw = nullptr;
  status = csr_stack_read(path.c_str(), format.c_str(), max_value_override,
                          &raw);
  return StackPtr(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressive-sensing reconstruction of microscopy z-stacks"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       []() { return std::string(csr_version()); });

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Base RNG seed (all subcommands honor it)")
      ->capture_default_str();

  // ---- phantom ----------------------------------------------------------
  auto* cmd_phantom = app.add_subcommand(
      "phantom", "Generate a synthetic ground-truth volume");
  cmd_phantom->fallthrough();
  struct {
    std::string out, kind = "blobs", format = "auto";
    std::int64_t width = 64, height = 64, depth = 301;
    double max_value = 255.0, snr_db = 30.0;
  } ph;
  cmd_phantom->add_option("--out", ph.out, "Output stack path")->required();
  cmd_phantom->add_option("--kind", ph.kind, "blobs | bandlimited")
      ->capture_default_str();
  cmd_phantom->add_option("--width", ph.width)->capture_default_str();
  cmd_phantom->add_option("--height", ph.height)->capture_default_str();
  cmd_phantom->add_option("--depth", ph.depth)->capture_default_str();
  cmd_phantom->add_option("--max-value", ph.max_value)->capture_default_str();
  cmd_phantom
      ->add_option("--snr-db", ph.snr_db,
                   "Additive noise SNR in dB; <= 0 disables noise")
      ->capture_default_str();
  cmd_phantom->add_option("--format", ph.format, "raw | tiff | auto")
      ->capture_default_str();

  // ---- mask -------------------------------------------------------------
  auto* cmd_mask =
      app.add_subcommand("mask", "Draw the set of retained z-indices");
  cmd_mask->fallthrough();
  struct {
    std::string out, strategy = "random";
    std::int64_t n_slices = 301;
    double fraction = 0.2;
  } mk;
  cmd_mask->add_option("--out", mk.out, "Output mask JSON path")->required();
  cmd_mask->add_option("--n-slices", mk.n_slices)->capture_default_str();
  cmd_mask->add_option("--fraction", mk.fraction, "Fraction of slices kept")
      ->capture_default_str();
  cmd_mask->add_option("--strategy", mk.strategy, "random | stratified")
      ->capture_default_str();

  // ---- subsample --------------------------------------------------------
  auto* cmd_subsample = app.add_subcommand(
      "subsample", "Keep only the mask's slices of a stack");
  cmd_subsample->fallthrough();
  struct {
    std::string in, mask, out, in_format = "auto", out_format = "auto";
    double max_value = 0.0;
  } ss;
  cmd_subsample->add_option("--in", ss.in, "Input stack")->required();
  cmd_subsample->add_option("--mask", ss.mask, "Mask JSON")->required();
  cmd_subsample->add_option("--out", ss.out, "Output stack")->required();
  cmd_subsample->add_option("--in-format", ss.in_format)
      ->capture_default_str();
  cmd_subsample->add_option("--out-format", ss.out_format)
      ->capture_default_str();
  cmd_subsample->add_option("--max-value", ss.max_value,
                            "Override the input dynamic-range ceiling");

  // ---- reconstruct ------------------------------------------------------
  auto* cmd_reconstruct = app.add_subcommand(
      "reconstruct", "Recover the full-depth volume from a subsampled stack");
  cmd_reconstruct->fallthrough();
  struct {
    std::string in, mask, out, method = "cs";
    std::string in_format = "auto", out_format = "auto";
    double c = 4.0 / 255.0, max_value = 0.0, tol = 1e-6;
    int workers = 0, max_iters = 500, memory = 10;
    bool no_clamp_known = false;
    std::int64_t progress = 0;
  } rc;
  cmd_reconstruct->add_option("--in", rc.in, "Subsampled stack")->required();
  cmd_reconstruct->add_option("--mask", rc.mask, "Mask JSON")->required();
  cmd_reconstruct->add_option("--out", rc.out, "Output stack")->required();
  cmd_reconstruct->add_option("--method", rc.method, "cs | linear | cubic")
      ->capture_default_str();
  cmd_reconstruct
      ->add_option("--c", rc.c, "L1 weight on [0,1]-normalized intensities")
      ->capture_default_str();
  cmd_reconstruct->add_flag("--no-clamp-known", rc.no_clamp_known,
                            "Do not overwrite sampled slices with the data");
  cmd_reconstruct
      ->add_option("--workers", rc.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd_reconstruct->add_option("--max-iters", rc.max_iters)
      ->capture_default_str();
  cmd_reconstruct->add_option("--tol", rc.tol)->capture_default_str();
  cmd_reconstruct->add_option("--memory", rc.memory)->capture_default_str();
  cmd_reconstruct->add_option("--progress", rc.progress,
                              "Print progress every N pixels (0 = off)");
  cmd_reconstruct->add_option("--in-format", rc.in_format)
      ->capture_default_str();
  cmd_reconstruct->add_option("--out-format", rc.out_format)
      ->capture_default_str();
  cmd_reconstruct->add_option("--max-value", rc.max_value,
                              "Override the input dynamic-range ceiling");

  // ---- evaluate ---------------------------------------------------------
  auto* cmd_evaluate = app.add_subcommand(
      "evaluate", "Score a reconstruction against a reference");
  cmd_evaluate->fallthrough();
  struct {
    std::string recon, reference;
    std::string recon_format = "auto", reference_format = "auto";
    double max_value = 0.0;
    bool box3d = false;
  } ev;
  cmd_evaluate->add_option("--recon", ev.recon, "Reconstructed stack")
      ->required();
  cmd_evaluate->add_option("--reference", ev.reference, "Reference stack")
      ->required();
  cmd_evaluate->add_flag("--ssim-box3d", ev.box3d,
                         "Also report the 7x7x7 uniform-window 3D SSIM");
  cmd_evaluate->add_option("--recon-format", ev.recon_format)
      ->capture_default_str();
  cmd_evaluate->add_option("--reference-format", ev.reference_format)
      ->capture_default_str();
  cmd_evaluate->add_option("--max-value", ev.max_value,
                           "Override both stacks' dynamic-range ceiling");

  // ---- benchmark --------------------------------------------------------
  auto* cmd_benchmark = app.add_subcommand(
      "benchmark", "Sweep (method, fraction, repeat) and emit CSV + SVG");
  cmd_benchmark->fallthrough();
  struct {
    std::string in, ground_truth, out_csv, out_svg;
    std::string methods = "cs,cubic", strategy = "random";
    std::string in_format = "auto";
    std::vector<double> fractions;
    int repeats = 20, workers = 0;
    double c = 4.0 / 255.0, max_value = 0.0;
    bool zero_runtime = false, no_clamp_known = false, quiet = false;
  } bm;
  cmd_benchmark->add_option("--in", bm.in, "Stack to subsample and score")
      ->required();
  cmd_benchmark->add_option("--ground-truth", bm.ground_truth,
                            "Score against this stack instead of --in");
  cmd_benchmark->add_option("--out-csv", bm.out_csv, "Metrics CSV path")
      ->required();
  cmd_benchmark->add_option("--out-svg", bm.out_svg, "Chart path (optional)");
  cmd_benchmark
      ->add_option("--fractions", bm.fractions,
                   "Fractions of slices to sweep (default: built-in sweep)")
      ->delimiter(',');
  cmd_benchmark->add_option("--repeats", bm.repeats)->capture_default_str();
  cmd_benchmark->add_option("--methods", bm.methods, "Comma-separated")
      ->capture_default_str();
  cmd_benchmark->add_option("--strategy", bm.strategy)->capture_default_str();
  cmd_benchmark->add_option("--c", bm.c)->capture_default_str();
  cmd_benchmark->add_flag("--no-clamp-known", bm.no_clamp_known);
  cmd_benchmark->add_option("--workers", bm.workers)->capture_default_str();
  cmd_benchmark->add_flag(
      "--zero-runtime", bm.zero_runtime,
      "Write runtime_ms = 0 so CSVs are byte-reproducible");
  cmd_benchmark->add_flag("--quiet", bm.quiet, "No per-cell progress");
  cmd_benchmark->add_option("--in-format", bm.in_format)
      ->capture_default_str();
  cmd_benchmark->add_option("--max-value", bm.max_value,
                            "Override the input dynamic-range ceiling");

  // ---- plot -------------------------------------------------------------
  auto* cmd_plot = app.add_subcommand(
      "plot", "Re-render the sweep chart from an existing metrics CSV");
  cmd_plot->fallthrough();
  struct {
    std::string csv, out_svg;
  } pl;
  cmd_plot->add_option("--csv", pl.csv, "Metrics CSV")->required();
  cmd_plot->add_option("--out-svg", pl.out_svg, "Chart path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors
  }

  if (cmd_phantom->parsed()) {
    print_provenance("phantom", {{"out", ph.out},
                                 {"kind", ph.kind},
                                 {"width", ph.width},
                                 {"height", ph.height},
                                 {"depth", ph.depth},
                                 {"max_value", ph.max_value},
                                 {"snr_db", ph.snr_db},
                                 {"seed", seed},
                                 {"format", ph.format}});
    StackPtr stack;
    {
      csr_stack* raw = nullptr;
      if (csr_phantom_generate(ph.width, ph.height, ph.depth, ph.kind.c_str(),
                               seed, ph.max_value, ph.snr_db, &raw) != CSR_OK)
        return fail_data("phantom");
      stack.reset(raw);
    }
    if (csr_stack_write(stack.get(), ph.out.c_str(), ph.format.c_str()) !=
        CSR_OK)
      return fail_data("phantom: writing " + ph.out);
    return 0;
  }

  if (cmd_mask->parsed()) {
    print_provenance("mask", {{"out", mk.out},
                              {"n_slices", mk.n_slices},
                              {"fraction", mk.fraction},
                              {"strategy", mk.strategy},
                              {"seed", seed}});
    MaskPtr mask;
    {
      csr_mask* raw = nullptr;
      if (csr_mask_generate(mk.n_slices, mk.fraction, seed,
                            mk.strategy.c_str(), &raw) != CSR_OK)
        return fail_data("mask");
      mask.reset(raw);
    }
    if (csr_mask_write(mask.get(), mk.out.c_str()) != CSR_OK)
      return fail_data("mask: writing " + mk.out);
    return 0;
  }

  if (cmd_subsample->parsed()) {
    print_provenance("subsample", {{"in", ss.in},
                                   {"mask", ss.mask},
                                   {"out", ss.out},
                                   {"seed", seed}});
    int status = 0;
    StackPtr stack = load_stack(ss.in, ss.in_format, ss.max_value, status);
    if (status != CSR_OK) return fail_data("subsample: reading " + ss.in);
    MaskPtr mask;
    {
      csr_mask* raw = nullptr;
      if (csr_mask_read(ss.mask.c_str(), &raw) != CSR_OK)
        return fail_data("subsample: reading " + ss.mask);
      mask.reset(raw);
    }
    StackPtr sub;
    {
      csr_stack* raw = nullptr;
      if (csr_apply_mask(stack.get(), mask.get(), &raw) != CSR_OK)
        return fail_data("subsample");
      sub.reset(raw);
    }
    if (csr_stack_write(sub.get(), ss.out.c_str(), ss.out_format.c_str()) !=
        CSR_OK)
      return fail_data("subsample: writing " + ss.out);
    return 0;
  }

  if (cmd_reconstruct->parsed()) {
    print_provenance("reconstruct", {{"in", rc.in},
                                     {"mask", rc.mask},
                                     {"out", rc.out},
                                     {"method", rc.method},
                                     {"c", rc.c},
                                     {"clamp_known", !rc.no_clamp_known},
                                     {"workers", rc.workers},
                                     {"max_iters", rc.max_iters},
                                     {"tol", rc.tol},
                                     {"memory", rc.memory},
                                     {"seed", seed}});
    int status = 0;
    StackPtr sub = load_stack(rc.in, rc.in_format, rc.max_value, status);
    if (status != CSR_OK) return fail_data("reconstruct: reading " + rc.in);
    MaskPtr mask;
    {
      csr_mask* raw = nullptr;
      if (csr_mask_read(rc.mask.c_str(), &raw) != CSR_OK)
        return fail_data("reconstruct: reading " + rc.mask);
      mask.reset(raw);
    }
    csr_reconstruct_params params;
    csr_reconstruct_params_init(&params);
    params.method = rc.method.c_str();
    params.c = rc.c;
    params.clamp_known = rc.no_clamp_known ? 0 : 1;
    params.workers = rc.workers;
    params.max_iters = rc.max_iters;
    params.tol = rc.tol;
    params.memory = rc.memory;
    params.progress_interval = rc.progress;

    StackPtr recon;
    csr_run_stats stats{};
    {
      csr_stack* raw = nullptr;
      if (csr_reconstruct(sub.get(), mask.get(), &params, &raw, &stats) !=
          CSR_OK)
        return fail_data("reconstruct");
      recon.reset(raw);
    }
    if (csr_stack_write(recon.get(), rc.out.c_str(),
                        rc.out_format.c_str()) != CSR_OK)
      return fail_data("reconstruct: writing " + rc.out);
    std::fprintf(stderr,
                 "reconstruct: %lld pixels, %lld solver fallbacks, "
                 "%lld clipped values, %.0f ms\n",
                 static_cast<long long>(stats.pixels),
                 static_cast<long long>(stats.solver_failures),
                 static_cast<long long>(stats.clipped_values), stats.wall_ms);
    return 0;
  }

  if (cmd_evaluate->parsed()) {
    print_provenance("evaluate", {{"recon", ev.recon},
                                  {"reference", ev.reference},
                                  {"seed", seed}});
    int status = 0;
    StackPtr recon =
        load_stack(ev.recon, ev.recon_format, ev.max_value, status);
    if (status != CSR_OK) return fail_data("evaluate: reading " + ev.recon);
    StackPtr reference =
        load_stack(ev.reference, ev.reference_format, ev.max_value, status);
    if (status != CSR_OK)
      return fail_data("evaluate: reading " + ev.reference);

    double psnr = 0.0, ssim = 0.0;
    if (csr_psnr3d(recon.get(), reference.get(), &psnr) != CSR_OK)
      return fail_data("evaluate: psnr3d");
    if (csr_ssim3d(recon.get(), reference.get(), &ssim) != CSR_OK)
      return fail_data("evaluate: ssim3d");
    std::printf("psnr3d_db=%s ssim3d=%s", metric_string(psnr).c_str(),
                metric_string(ssim).c_str());
    if (ev.box3d) {
      double box = 0.0;
      if (csr_ssim3d_box3d(recon.get(), reference.get(), &box) != CSR_OK)
        return fail_data("evaluate: ssim3d_box3d");
      std::printf(" ssim3d_box3d=%s", metric_string(box).c_str());
    }
    std::printf("\n");
    return 0;
  }

  if (cmd_benchmark->parsed()) {
    print_provenance("benchmark", {{"in", bm.in},
                                   {"ground_truth", bm.ground_truth},
                                   {"out_csv", bm.out_csv},
                                   {"out_svg", bm.out_svg},
                                   {"fractions", bm.fractions},
                                   {"repeats", bm.repeats},
                                   {"methods", bm.methods},
                                   {"strategy", bm.strategy},
                                   {"c", bm.c},
                                   {"clamp_known", !bm.no_clamp_known},
                                   {"workers", bm.workers},
                                   {"zero_runtime", bm.zero_runtime},
                                   {"seed", seed}});
    int status = 0;
    StackPtr stack = load_stack(bm.in, bm.in_format, bm.max_value, status);
    if (status != CSR_OK) return fail_data("benchmark: reading " + bm.in);
    StackPtr truth;
    if (!bm.ground_truth.empty()) {
      truth = load_stack(bm.ground_truth, "auto", bm.max_value, status);
      if (status != CSR_OK)
        return fail_data("benchmark: reading " + bm.ground_truth);
    }

    csr_benchmark_params params;
    csr_benchmark_params_init(&params);
    params.fractions = bm.fractions.empty() ? nullptr : bm.fractions.data();
    params.n_fractions = bm.fractions.size();
    params.repeats = bm.repeats;
    params.methods = bm.methods.c_str();
    params.seed = seed;
    params.strategy = bm.strategy.c_str();
    params.c = bm.c;
    params.clamp_known = bm.no_clamp_known ? 0 : 1;
    params.workers = bm.workers;
    params.zero_runtime = bm.zero_runtime ? 1 : 0;
    params.verbose = bm.quiet ? 0 : 1;

    if (csr_benchmark_run(stack.get(), truth.get(), &params,
                          bm.out_csv.c_str(),
                          bm.out_svg.empty() ? nullptr
                                             : bm.out_svg.c_str()) != CSR_OK)
      return fail_data("benchmark");
    return 0;
  }

  if (cmd_plot->parsed()) {
    print_provenance(
        "plot", {{"csv", pl.csv}, {"out_svg", pl.out_svg}, {"seed", seed}});
    if (csr_plot_csv(pl.csv.c_str(), pl.out_svg.c_str()) != CSR_OK)
      return fail_data("plot");
    return 0;
  }

  return 2;
}
