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

/*
 * Public C API of the csrecon shared library.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Functions return CSR_OK (0) on success or a negative error code; the
 * message for the most recent failure on the calling thread is available
 * via csr_last_error(). Output handles are only written on success and the
 * caller owns them afterwards.
 */

#ifndef CSRECON_H
#define CSRECON_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CSR_API __declspec(dllexport)
#else
#define CSR_API __attribute__((visibility("default")))
#endif

typedef struct csr_stack csr_stack;
typedef struct csr_mask csr_mask;

enum csr_status {
  CSR_OK = 0,
  CSR_ERR_INVALID_ARGUMENT = -1,
  CSR_ERR_IO = -2,
  CSR_ERR_VALIDATION = -3,
  CSR_ERR_RECONSTRUCTION = -4,
  CSR_ERR_INTERNAL = -5
};

CSR_API const char* csr_version(void);

/* Message for the last error on this thread; empty string if none. */
CSR_API const char* csr_last_error(void);

/* ------------------------------------------------------------------ *
 * Volume stacks                                                       *
 * ------------------------------------------------------------------ */

/* Create a stack from caller data in (z, y, x) row-major order. `data` may
 * be NULL to create a zero-filled stack. */
CSR_API int csr_stack_create(int64_t depth, int64_t height, int64_t width,
                             double max_value, const double* data,
                             csr_stack** out);
CSR_API void csr_stack_free(csr_stack* stack);

CSR_API int64_t csr_stack_depth(const csr_stack* stack);
CSR_API int64_t csr_stack_height(const csr_stack* stack);
CSR_API int64_t csr_stack_width(const csr_stack* stack);
CSR_API double csr_stack_max_value(const csr_stack* stack);
/* Borrowed pointer to depth*height*width doubles; valid until the stack is
 * freed. */
CSR_API const double* csr_stack_data(const csr_stack* stack);

/* Check the stack invariants. Returns CSR_OK when valid; otherwise
 * CSR_ERR_VALIDATION with the first violation in csr_last_error(). */
CSR_API int csr_stack_validate(const csr_stack* stack);

/* format: "tiff", "raw", or "auto" (by file extension; .tif/.tiff vs raw).
 * max_value_override <= 0 keeps the format default. */
CSR_API int csr_stack_read(const char* path, const char* format,
                           double max_value_override, csr_stack** out);
CSR_API int csr_stack_write(const csr_stack* stack, const char* path,
                            const char* format);

/* Synthetic ground-truth volume. kind: "blobs" or "bandlimited".
 * noise_snr_db <= 0 disables the additive noise. */
CSR_API int csr_phantom_generate(int64_t width, int64_t height, int64_t depth,
                                 const char* kind, uint64_t seed,
                                 double max_value, double noise_snr_db,
                                 csr_stack** out);

/* ------------------------------------------------------------------ *
 * Sampling masks                                                      *
 * ------------------------------------------------------------------ */

/* strategy: "random" (uniform interior draws, endpoints always kept) or
 * "stratified". */
CSR_API int csr_mask_generate(int64_t n_slices, double fraction,
                              uint64_t seed, const char* strategy,
                              csr_mask** out);
CSR_API void csr_mask_free(csr_mask* mask);

CSR_API int64_t csr_mask_n_slices(const csr_mask* mask);
CSR_API int64_t csr_mask_kept_count(const csr_mask* mask);
/* Borrowed pointer to kept_count() strictly increasing z-indices. */
CSR_API const int64_t* csr_mask_kept(const csr_mask* mask);

CSR_API int csr_mask_read(const char* path, csr_mask** out);
CSR_API int csr_mask_write(const csr_mask* mask, const char* path);

/* Select the mask's kept slices out of the stack, bit-exact. */
CSR_API int csr_apply_mask(const csr_stack* stack, const csr_mask* mask,
                           csr_stack** out);

/* ------------------------------------------------------------------ *
 * Reconstruction                                                      *
 * ------------------------------------------------------------------ */

typedef struct csr_reconstruct_params {
  const char* method;     /* "cs", "linear" or "cubic" */
  double c;               /* L1 weight on [0,1]-normalized intensities */
  int clamp_known;        /* keep measured slices verbatim (default on) */
  int workers;            /* 0 = hardware concurrency */
  int max_iters;          /* solver iteration cap */
  double tol;             /* relative objective-decrease threshold */
  int memory;             /* quasi-Newton history size */
  int64_t progress_interval; /* pixels between stderr updates; 0 = silent */
} csr_reconstruct_params;

/* Fill with the library defaults (method "cs", c = 4/255, clamp on). */
CSR_API void csr_reconstruct_params_init(csr_reconstruct_params* params);

typedef struct csr_run_stats {
  int64_t pixels;
  int64_t solver_failures;
  int64_t non_converged;
  int64_t total_iterations;
  int64_t clipped_values;
  double wall_ms;
} csr_run_stats;

/* Reconstruct the full-depth volume from the subsampled stack. `stats` may
 * be NULL. */
CSR_API int csr_reconstruct(const csr_stack* sub, const csr_mask* mask,
                            const csr_reconstruct_params* params,
                            csr_stack** out, csr_run_stats* stats);

/* ------------------------------------------------------------------ *
 * Metrics                                                             *
 * ------------------------------------------------------------------ */

/* PSNR over all voxels, in dB; +infinity for identical volumes. */
CSR_API int csr_psnr3d(const csr_stack* recon, const csr_stack* reference,
                       double* out);
/* Mean per-slice 2D SSIM (11x11 Gaussian window, sigma 1.5). */
CSR_API int csr_ssim3d(const csr_stack* recon, const csr_stack* reference,
                       double* out);
/* Sensitivity variant: 3D SSIM with a uniform 7x7x7 window. */
CSR_API int csr_ssim3d_box3d(const csr_stack* recon,
                             const csr_stack* reference, double* out);

/* ------------------------------------------------------------------ *
 * Benchmark sweep                                                     *
 * ------------------------------------------------------------------ */

typedef struct csr_benchmark_params {
  const double* fractions;  /* NULL = default sweep */
  size_t n_fractions;
  int repeats;              /* default 20 */
  const char* methods;      /* comma-separated, e.g. "cs,cubic" */
  uint64_t seed;            /* mask seed base; repeat r uses seed + r */
  const char* strategy;     /* "random" or "stratified" */
  double c;
  int clamp_known;
  int workers;
  int zero_runtime;         /* write runtime_ms = 0 for byte-reproducible CSVs */
  int verbose;              /* per-cell progress on stderr */
} csr_benchmark_params;

CSR_API void csr_benchmark_params_init(csr_benchmark_params* params);

/* Run the sweep over (method, fraction, repeat): mask, subsample,
 * reconstruct, score against `ground_truth` (NULL = against `stack`).
 * Writes the CSV, renders the SVG chart from the written CSV (pass NULL to
 * skip), and prints per-point means to stdout. */
CSR_API int csr_benchmark_run(const csr_stack* stack,
                              const csr_stack* ground_truth,
                              const csr_benchmark_params* params,
                              const char* csv_path, const char* svg_path);

/* Re-render the sweep chart from an existing metrics CSV. Byte-identical
 * output for identical CSV input. */
CSR_API int csr_plot_csv(const char* csv_path, const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif /* CSRECON_H */
