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

#ifndef CSR_METRICS_HPP
#define CSR_METRICS_HPP

#include "csr/volume.hpp"

namespace csr {

/// Peak signal-to-noise ratio over every voxel of the volume, in dB:
/// 10*log10(max_value^2 / MSE). Uses the dynamic-range ceiling carried by
/// the stacks, not the observed maximum. Returns +infinity when the volumes
/// are identical. MSE is accumulated with compensated summation so the value
/// is independent of traversal chunking. Throws on shape or max_value
/// mismatch.
double psnr3d(const VolumeStack& recon, const VolumeStack& reference);

/// Mean structural similarity over the volume: per-slice 2D SSIM with an
/// 11x11 Gaussian window (sigma = 1.5) and stabilizers C1 = (0.01*max)^2,
/// C2 = (0.03*max)^2, averaged over all slices. Slices smaller than the
/// window fall back to a uniform window of the largest odd size that fits.
/// Symmetric in its arguments. Throws on shape or max_value mismatch.
double ssim3d(const VolumeStack& recon, const VolumeStack& reference);

/// Sensitivity-check variant: true 3D SSIM with a uniform 7x7x7 window
/// (shrunk to the largest odd size that fits each axis).
double ssim3d_box3d(const VolumeStack& recon, const VolumeStack& reference);

}  // namespace csr

#endif
