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

#include "csr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace csr {
namespace {

void check_comparable(const VolumeStack& a, const VolumeStack& b) {
  if (a.depth != b.depth || a.height != b.height || a.width != b.width)
    throw std::invalid_argument("volume shapes differ");
  if (a.max_value != b.max_value)
    throw std::invalid_argument("volume max_value differs");
}

// Valid-mode separable blur: kernel k applied along x then y.
// in: h x w, out: (h-k+1) x (w-k+1) with k = kernel.size().
void blur_valid(const double* in, std::int64_t h, std::int64_t w,
                const std::vector<double>& kernel, std::vector<double>& tmp,
                std::vector<double>& out) {
  const std::int64_t k = static_cast<std::int64_t>(kernel.size());
  const std::int64_t wv = w - k + 1;
  const std::int64_t hv = h - k + 1;
  tmp.resize(static_cast<std::size_t>(h * wv));
  out.resize(static_cast<std::size_t>(hv * wv));
  for (std::int64_t y = 0; y < h; ++y) {
    const double* row = in + y * w;
    double* trow = tmp.data() + y * wv;
    for (std::int64_t x = 0; x < wv; ++x) {
      double acc = 0.0;
      for (std::int64_t i = 0; i < k; ++i) acc += kernel[static_cast<std::size_t>(i)] * row[x + i];
      trow[x] = acc;
    }
  }
  for (std::int64_t y = 0; y < hv; ++y) {
    double* orow = out.data() + y * wv;
    for (std::int64_t x = 0; x < wv; ++x) {
      double acc = 0.0;
      for (std::int64_t i = 0; i < k; ++i)
        acc += kernel[static_cast<std::size_t>(i)] * tmp[(y + i) * wv + x];
      orow[x] = acc;
    }
  }
}

std::vector<double> ssim_window_kernel(std::int64_t h, std::int64_t w) {
  const std::int64_t smallest = std::min(h, w);
  if (smallest >= 11) {
    // 11-tap Gaussian, sigma 1.5, normalized.
    std::vector<double> kernel(11);
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
      const double d = static_cast<double>(i - 5);
      kernel[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
      sum += kernel[static_cast<std::size_t>(i)];
    }
    for (double& v : kernel) v /= sum;
    return kernel;
  }
  // Largest odd uniform window that fits.
  std::int64_t k = smallest % 2 == 0 ? smallest - 1 : smallest;
  if (k < 1) k = 1;
  return std::vector<double>(static_cast<std::size_t>(k),
                             1.0 / static_cast<double>(k));
}

struct SsimTerms {
  double c1 = 0.0;
  double c2 = 0.0;
};

double ssim_from_moments(double mx, double my, double sxx, double syy,
                         double sxy, const SsimTerms& t) {
  const double vx = sxx - mx * mx;
  const double vy = syy - my * my;
  const double cov = sxy - mx * my;
  return ((2.0 * mx * my + t.c1) * (2.0 * cov + t.c2)) /
         ((mx * mx + my * my + t.c1) * (vx + vy + t.c2));
}

// 3D summed-area table with a one-voxel zero border.
class Sat3d {
 public:
  Sat3d(const double* a, const double* b, std::int64_t d, std::int64_t h,
        std::int64_t w, int which)
      : d_(d), h_(h), w_(w), s_((d + 1) * (h + 1) * (w + 1), 0.0) {
    for (std::int64_t z = 0; z < d; ++z)
      for (std::int64_t y = 0; y < h; ++y)
        for (std::int64_t x = 0; x < w; ++x) {
          const std::int64_t i = (z * h + y) * w + x;
          double v = 0.0;
          switch (which) {
            case 0: v = a[i]; break;
            case 1: v = b[i]; break;
            case 2: v = a[i] * a[i]; break;
            case 3: v = b[i] * b[i]; break;
            default: v = a[i] * b[i]; break;
          }
          at(z + 1, y + 1, x + 1) = v + at(z, y + 1, x + 1) +
                                    at(z + 1, y, x + 1) + at(z + 1, y + 1, x) -
                                    at(z, y, x + 1) - at(z, y + 1, x) -
                                    at(z + 1, y, x) + at(z, y, x);
        }
  }

  // Sum over [z0, z1) x [y0, y1) x [x0, x1).
  double window(std::int64_t z0, std::int64_t z1, std::int64_t y0,
                std::int64_t y1, std::int64_t x0, std::int64_t x1) const {
    return at(z1, y1, x1) - at(z0, y1, x1) - at(z1, y0, x1) - at(z1, y1, x0) +
           at(z0, y0, x1) + at(z0, y1, x0) + at(z1, y0, x0) - at(z0, y0, x0);
  }

 private:
  double& at(std::int64_t z, std::int64_t y, std::int64_t x) {
    return s_[static_cast<std::size_t>((z * (h_ + 1) + y) * (w_ + 1) + x)];
  }
  double at(std::int64_t z, std::int64_t y, std::int64_t x) const {
    return s_[static_cast<std::size_t>((z * (h_ + 1) + y) * (w_ + 1) + x)];
  }

  std::int64_t d_, h_, w_;
  std::vector<double> s_;
};

std::int64_t odd_fit(std::int64_t want, std::int64_t dim) {
  std::int64_t k = std::min(want, dim);
  if (k % 2 == 0) --k;
  return std::max<std::int64_t>(k, 1);
}

}  // namespace

double psnr3d(const VolumeStack& recon, const VolumeStack& reference) {
  check_comparable(recon, reference);
  // Kahan summation keeps the result independent of evaluation order.
  double sum = 0.0, comp = 0.0;
  const std::size_t total = recon.data.size();
  for (std::size_t i = 0; i < total; ++i) {
    const double d = recon.data[i] - reference.data[i];
    const double term = d * d - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  if (sum == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sum / static_cast<double>(total);
  return 10.0 * std::log10(recon.max_value * recon.max_value / mse);
}

double ssim3d(const VolumeStack& recon, const VolumeStack& reference) {
  check_comparable(recon, reference);
  const double maxv = recon.max_value;
  const SsimTerms terms{(0.01 * maxv) * (0.01 * maxv),
                        (0.03 * maxv) * (0.03 * maxv)};
  const std::vector<double> kernel =
      ssim_window_kernel(recon.height, recon.width);

  std::vector<double> tmp, mx, my, sxx, syy, sxy, prod;
  prod.resize(static_cast<std::size_t>(recon.height * recon.width));

  double slice_sum = 0.0;
  for (std::int64_t z = 0; z < recon.depth; ++z) {
    const double* a = recon.slice(z);
    const double* b = reference.slice(z);
    const std::int64_t hw = recon.height * recon.width;

    blur_valid(a, recon.height, recon.width, kernel, tmp, mx);
    blur_valid(b, recon.height, recon.width, kernel, tmp, my);
    for (std::int64_t i = 0; i < hw; ++i) prod[static_cast<std::size_t>(i)] = a[i] * a[i];
    blur_valid(prod.data(), recon.height, recon.width, kernel, tmp, sxx);
    for (std::int64_t i = 0; i < hw; ++i) prod[static_cast<std::size_t>(i)] = b[i] * b[i];
    blur_valid(prod.data(), recon.height, recon.width, kernel, tmp, syy);
    for (std::int64_t i = 0; i < hw; ++i) prod[static_cast<std::size_t>(i)] = a[i] * b[i];
    blur_valid(prod.data(), recon.height, recon.width, kernel, tmp, sxy);

    double acc = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i)
      acc += ssim_from_moments(mx[i], my[i], sxx[i], syy[i], sxy[i], terms);
    slice_sum += acc / static_cast<double>(mx.size());
  }
  return slice_sum / static_cast<double>(recon.depth);
}

double ssim3d_box3d(const VolumeStack& recon, const VolumeStack& reference) {
  check_comparable(recon, reference);
  const double maxv = recon.max_value;
  const SsimTerms terms{(0.01 * maxv) * (0.01 * maxv),
                        (0.03 * maxv) * (0.03 * maxv)};
  const std::int64_t kz = odd_fit(7, recon.depth);
  const std::int64_t ky = odd_fit(7, recon.height);
  const std::int64_t kx = odd_fit(7, recon.width);
  const double count = static_cast<double>(kz * ky * kx);

  const double* a = recon.data.data();
  const double* b = reference.data.data();
  const Sat3d sa(a, b, recon.depth, recon.height, recon.width, 0);
  const Sat3d sb(a, b, recon.depth, recon.height, recon.width, 1);
  const Sat3d saa(a, b, recon.depth, recon.height, recon.width, 2);
  const Sat3d sbb(a, b, recon.depth, recon.height, recon.width, 3);
  const Sat3d sab(a, b, recon.depth, recon.height, recon.width, 4);

  double acc = 0.0;
  std::int64_t positions = 0;
  for (std::int64_t z = 0; z + kz <= recon.depth; ++z)
    for (std::int64_t y = 0; y + ky <= recon.height; ++y)
      for (std::int64_t x = 0; x + kx <= recon.width; ++x) {
        const double mx = sa.window(z, z + kz, y, y + ky, x, x + kx) / count;
        const double my = sb.window(z, z + kz, y, y + ky, x, x + kx) / count;
        const double xx = saa.window(z, z + kz, y, y + ky, x, x + kx) / count;
        const double yy = sbb.window(z, z + kz, y, y + ky, x, x + kx) / count;
        const double xy = sab.window(z, z + kz, y, y + ky, x, x + kx) / count;
        acc += ssim_from_moments(mx, my, xx, yy, xy, terms);
        ++positions;
      }
  return acc / static_cast<double>(positions);
}

}  // namespace csr
