// SPDX-License-Identifier: Apache-2.0
//
// rfsplat: radio-frequency rendering and inverse rendering over Gaussian primitives
// Copyright (C) 2026 rfsplat contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "rfsplat/scene.hpp"

#include <span>
#include <string>
#include <vector>

namespace rfsplat {

class Bvh;

/// exp(-1/2 (x - mu)^T Sigma^-1 (x - mu)).
double gaussian_density(const RFGaussian& g, const Vec3& x);

/// Silhouette area of the 1-sigma ellipsoid seen along `direction`:
/// pi sqrt(det Sigma) sqrt(n^T Sigma^-1 n). Throws NumericalError when the
/// covariance condition number exceeds 1e12.
double projected_cross_section(const RFGaussian& g, const Vec3& direction);

/// Rays from a single origin, one unit direction per pixel (row-major H x W).
struct CameraRayBundle {
    Vec3 origin = Vec3::Zero();
    int height = 0;
    int width = 0;
    std::vector<Vec3> directions;
    std::string intrinsics = "custom";

    /// Pinhole camera looking from `origin` toward `target`.
    static CameraRayBundle pinhole(const Vec3& origin, const Vec3& target, const Vec3& up, double fov_y_deg, int height, int width);

    const Vec3& direction(int row, int col) const { return directions[static_cast<std::size_t>(row) * width + col]; }
};

/// Row-major per-pixel blends: D = sum w d, N = sum w n, D_sq = sum w d^2 and
/// the accumulated weight sum w, with w_i = alpha_i T_i.
struct GeometryMaps {
    int height = 0;
    int width = 0;
    std::vector<double> depth;
    std::vector<Vec3> normal;
    std::vector<double> depth_sq;
    std::vector<double> weight;

    GeometryMaps() = default;
    GeometryMaps(int h, int w);

    std::size_t at(int row, int col) const { return static_cast<std::size_t>(row) * width + col; }
    std::size_t pixels() const { return static_cast<std::size_t>(height) * width; }
};

/// One front-to-back contribution along a pixel ray.
struct GeometrySample {
    double depth = 0.0;
    Vec3 normal = Vec3::UnitZ();
    double alpha = 0.0;
};

struct PixelBlend {
    double depth = 0.0;
    Vec3 normal = Vec3::Zero();
    double depth_sq = 0.0;
    double weight = 0.0;
};

/// Front-to-back alpha blending of samples already sorted by depth.
PixelBlend blend_geometry_samples(std::span<const GeometrySample> samples);

/// Traces every pixel ray through the BVH. Depth is the distance along the ray
/// to each Gaussian's closest-approach point; opacity is ray_gaussian_alpha.
GeometryMaps render_geometry_maps(const Scene& scene, const Bvh& bvh, const CameraRayBundle& rays);
GeometryMaps render_geometry_maps(const Scene& scene, const CameraRayBundle& rays);

/// Mean |N - N~| over pixels whose 4-neighbourhood carries weight, where N~ is
/// the pseudo-normal from central differences of the back-projected depth.
/// Requires the ray bundle the maps were rendered with.
double loss_depth_normal(const GeometryMaps& maps, const CameraRayBundle& rays);

/// Mean of max(D_sq - D^2, 0) over pixels with nonzero weight.
double loss_depth_uncertainty(const GeometryMaps& maps);

/// Mean |grad N| exp(-|grad C|) over interior pixels whose neighbourhood carries weight.
double loss_normal_smoothness(const GeometryMaps& maps, std::span<const double> reference_image);

struct GeometricLossWeights {
    double l1 = 0.0;
    double ssim = 0.0;
    double normal = 0.0;
    double uncertainty = 0.0;
    double smoothness = 0.0;
};

/// Photometric L1 and SSIM values are supplied by the caller.
struct GeometricLossParts {
    double l1 = 0.0;
    double ssim = 0.0;
    double normal = 0.0;
    double uncertainty = 0.0;
    double smoothness = 0.0;
};

double loss_geometric_total(const GeometricLossWeights& weights, const GeometricLossParts& parts);

} // namespace rfsplat
