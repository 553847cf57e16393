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

#include "csrecon.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "csr/bench.hpp"
#include "csr/bpdn.hpp"
#include "csr/metrics.hpp"
#include "csr/phantom.hpp"
#include "csr/reconstruct.hpp"
#include "csr/sampling.hpp"
#include "csr/stack_io.hpp"
#include "csr/volume.hpp"

struct csr_stack {
  csr::VolumeStack impl;
};

struct csr_mask {
  csr::SamplingMask impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Maps C++ failures onto status codes; the handler body runs under a catch.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return CSR_ERR_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    set_error(e.what());
    return CSR_ERR_INVALID_ARGUMENT;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    return CSR_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return CSR_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return CSR_ERR_INTERNAL;
  }
}

int require(bool condition, const char* msg) {
  if (condition) return CSR_OK;
  set_error(msg);
  return CSR_ERR_INVALID_ARGUMENT;
}

csr::StackFormat parse_format(const char* format, const char* path) {
  const std::string f = format ? format : "auto";
  if (f == "tiff" || f == "tif") return csr::StackFormat::MultiPageTiff;
  if (f == "raw") return csr::StackFormat::RawBinary;
  if (f == "auto") return csr::guess_stack_format(path ? path : "");
  throw std::invalid_argument("unknown stack format: " + f);
}

std::vector<csr::Method> parse_methods(const char* csv) {
  std::vector<csr::Method> methods;
  std::stringstream ss(csv ? csv : "");
  std::string token;
  while (std::getline(ss, token, ','))
    if (!token.empty()) methods.push_back(csr::method_from_string(token));
  if (methods.empty()) throw std::invalid_argument("no methods given");
  return methods;
}

}  // namespace

extern "C" {

const char* csr_version(void) { return "0.1.0"; }

const char* csr_last_error(void) { return g_last_error.c_str(); }

int csr_stack_create(int64_t depth, int64_t height, int64_t width,
                     double max_value, const double* data, csr_stack** out) {
  if (int rc = require(out != nullptr, "out is null")) return rc;
  return guarded([&]() {
    if (depth < 1 || height < 1 || width < 1)
      throw std::invalid_argument("dimensions must be >= 1");
    if (!(max_value > 0.0))
      throw std::invalid_argument("max_value must be > 0");
    auto stack = std::make_unique<csr_stack>();
    stack->impl = csr::VolumeStack::zeros(depth, height, width, max_value);
    if (data)
      std::memcpy(stack->impl.data.data(), data,
                  stack->impl.data.size() * sizeof(double));
    *out = stack.release();
    return CSR_OK;
  });
}

void csr_stack_free(csr_stack* stack) { delete stack; }

int64_t csr_stack_depth(const csr_stack* stack) {
  return stack ? stack->impl.depth : 0;
}
int64_t csr_stack_height(const csr_stack* stack) {
  return stack ? stack->impl.height : 0;
}
int64_t csr_stack_width(const csr_stack* stack) {
  return stack ? stack->impl.width : 0;
}
double csr_stack_max_value(const csr_stack* stack) {
  return stack ? stack->impl.max_value : 0.0;
}
const double* csr_stack_data(const csr_stack* stack) {
  return stack ? stack->impl.data.data() : nullptr;
}

int csr_stack_validate(const csr_stack* stack) {
  if (int rc = require(stack != nullptr, "stack is null")) return rc;
  const csr::ValidationResult result = csr::validate_stack(stack->impl);
  if (result.ok) return CSR_OK;
  std::string joined;
  for (const auto& v : result.violations) {
    if (!joined.empty()) joined += "; ";
    joined += v;
  }
  set_error(joined);
  return CSR_ERR_VALIDATION;
}

int csr_stack_read(const char* path, const char* format,
                   double max_value_override, csr_stack** out) {
  if (int rc = require(path && out, "path/out is null")) return rc;
  return guarded([&]() {
    auto stack = std::make_unique<csr_stack>();
    stack->impl =
        csr::read_stack(path, parse_format(format, path), max_value_override);
    *out = stack.release();
    return CSR_OK;
  });
}

int csr_stack_write(const csr_stack* stack, const char* path,
                    const char* format) {
  if (int rc = require(stack && path, "stack/path is null")) return rc;
  return guarded([&]() {
    csr::write_stack(stack->impl, path, parse_format(format, path));
    return CSR_OK;
  });
}

int csr_phantom_generate(int64_t width, int64_t height, int64_t depth,
                         const char* kind, uint64_t seed, double max_value,
                         double noise_snr_db, csr_stack** out) {
  if (int rc = require(kind && out, "kind/out is null")) return rc;
  return guarded([&]() {
    auto stack = std::make_unique<csr_stack>();
    stack->impl = csr::generate_phantom(width, height, depth,
                                        csr::phantom_kind_from_string(kind),
                                        seed, max_value, noise_snr_db);
    *out = stack.release();
    return CSR_OK;
  });
}

int csr_mask_generate(int64_t n_slices, double fraction, uint64_t seed,
                      const char* strategy, csr_mask** out) {
  if (int rc = require(strategy && out, "strategy/out is null")) return rc;
  return guarded([&]() {
    auto mask = std::make_unique<csr_mask>();
    mask->impl = csr::generate_mask(
        n_slices, fraction, seed, csr::mask_strategy_from_string(strategy));
    *out = mask.release();
    return CSR_OK;
  });
}

void csr_mask_free(csr_mask* mask) { delete mask; }

int64_t csr_mask_n_slices(const csr_mask* mask) {
  return mask ? mask->impl.n_slices : 0;
}
int64_t csr_mask_kept_count(const csr_mask* mask) {
  return mask ? mask->impl.kept_count() : 0;
}
const int64_t* csr_mask_kept(const csr_mask* mask) {
  return mask ? mask->impl.kept.data() : nullptr;
}

int csr_mask_read(const char* path, csr_mask** out) {
  if (int rc = require(path && out, "path/out is null")) return rc;
  return guarded([&]() {
    auto mask = std::make_unique<csr_mask>();
    mask->impl = csr::read_mask_json(path);
    *out = mask.release();
    return CSR_OK;
  });
}

int csr_mask_write(const csr_mask* mask, const char* path) {
  if (int rc = require(mask && path, "mask/path is null")) return rc;
  return guarded([&]() {
    csr::write_mask_json(mask->impl, path);
    return CSR_OK;
  });
}

int csr_apply_mask(const csr_stack* stack, const csr_mask* mask,
                   csr_stack** out) {
  if (int rc = require(stack && mask && out, "stack/mask/out is null"))
    return rc;
  return guarded([&]() {
    auto sub = std::make_unique<csr_stack>();
    sub->impl = csr::apply_mask(stack->impl, mask->impl);
    *out = sub.release();
    return CSR_OK;
  });
}

void csr_reconstruct_params_init(csr_reconstruct_params* params) {
  if (!params) return;
  static const csr::ReconstructParams defaults;
  params->method = "cs";
  params->c = defaults.c;
  params->clamp_known = defaults.clamp_known ? 1 : 0;
  params->workers = defaults.workers;
  params->max_iters = defaults.solver.max_iters;
  params->tol = defaults.solver.tol;
  params->memory = defaults.solver.memory;
  params->progress_interval = defaults.progress_interval;
}

int csr_reconstruct(const csr_stack* sub, const csr_mask* mask,
                    const csr_reconstruct_params* params, csr_stack** out,
                    csr_run_stats* stats) {
  if (int rc = require(sub && mask && params && out,
                       "sub/mask/params/out is null"))
    return rc;
  return guarded([&]() {
    csr::ReconstructParams p;
    p.method = csr::method_from_string(params->method ? params->method : "cs");
    p.c = params->c;
    p.clamp_known = params->clamp_known != 0;
    p.workers = params->workers;
    p.solver.max_iters = params->max_iters;
    p.solver.tol = params->tol;
    p.solver.memory = params->memory;
    p.progress_interval = params->progress_interval;
    csr::RunStats run_stats;
    auto recon = std::make_unique<csr_stack>();
    recon->impl =
        csr::reconstruct_volume(sub->impl, mask->impl, p, &run_stats);
    if (stats) {
      stats->pixels = run_stats.pixels;
      stats->solver_failures = run_stats.solver_failures;
      stats->non_converged = run_stats.non_converged;
      stats->total_iterations = run_stats.total_iterations;
      stats->clipped_values = run_stats.clipped_values;
      stats->wall_ms = run_stats.wall_ms;
    }
    *out = recon.release();
    return CSR_OK;
  });
}

int csr_psnr3d(const csr_stack* recon, const csr_stack* reference,
               double* out) {
  if (int rc = require(recon && reference && out, "argument is null"))
    return rc;
  return guarded([&]() {
    *out = csr::psnr3d(recon->impl, reference->impl);
    return CSR_OK;
  });
}

int csr_ssim3d(const csr_stack* recon, const csr_stack* reference,
               double* out) {
  if (int rc = require(recon && reference && out, "argument is null"))
    return rc;
  return guarded([&]() {
    *out = csr::ssim3d(recon->impl, reference->impl);
    return CSR_OK;
  });
}

int csr_ssim3d_box3d(const csr_stack* recon, const csr_stack* reference,
                     double* out) {
  if (int rc = require(recon && reference && out, "argument is null"))
    return rc;
  return guarded([&]() {
    *out = csr::ssim3d_box3d(recon->impl, reference->impl);
    return CSR_OK;
  });
}

void csr_benchmark_params_init(csr_benchmark_params* params) {
  if (!params) return;
  params->fractions = nullptr;
  params->n_fractions = 0;
  params->repeats = 20;
  params->methods = "cs,cubic";
  params->seed = 0;
  params->strategy = "random";
  params->c = csr::kDefaultL1Weight;
  params->clamp_known = 1;
  params->workers = 0;
  params->zero_runtime = 0;
  params->verbose = 0;
}

int csr_benchmark_run(const csr_stack* stack, const csr_stack* ground_truth,
                      const csr_benchmark_params* params,
                      const char* csv_path, const char* svg_path) {
  if (int rc = require(stack && params && csv_path,
                       "stack/params/csv_path is null"))
    return rc;
  return guarded([&]() {
    csr::BenchConfig config;
    if (params->fractions && params->n_fractions > 0)
      config.fractions.assign(params->fractions,
                              params->fractions + params->n_fractions);
    config.repeats = params->repeats;
    config.methods = parse_methods(params->methods);
    config.base_seed = params->seed;
    config.strategy = csr::mask_strategy_from_string(
        params->strategy ? params->strategy : "random");
    config.c = params->c;
    config.clamp_known = params->clamp_known != 0;
    config.workers = params->workers;
    config.zero_runtime = params->zero_runtime != 0;
    config.verbose = params->verbose != 0;
    csr::run_benchmark_to_files(stack->impl,
                                ground_truth ? &ground_truth->impl : nullptr,
                                config, csv_path,
                                svg_path ? svg_path : "", stdout);
    return CSR_OK;
  });
}

int csr_plot_csv(const char* csv_path, const char* svg_path) {
  if (int rc = require(csv_path && svg_path, "csv_path/svg_path is null"))
    return rc;
  return guarded([&]() {
    const auto rows = csr::read_metrics_csv(csv_path);
    const std::string svg = csr::render_sweep_svg(rows);
    std::ofstream out(svg_path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error(std::string("cannot open ") + svg_path);
    out << svg;
    if (!out) throw std::runtime_error(std::string("write failed on ") + svg_path);
    return CSR_OK;
  });
}

}  // extern "C"
