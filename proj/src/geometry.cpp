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

#include "rfsplat/geometry.hpp"

#include "rfsplat/visibility.hpp"

#include <algorithm>

namespace rfsplat {

double gaussian_density(const RFGaussian& g, const Vec3& x)
{
    const Vec3 w = g.whitening() * (x - g.mu);
    return std::exp(-0.5 * w.squaredNorm());
}

double projected_cross_section(const RFGaussian& g, const Vec3& direction)
{
    const double smin = g.scale.minCoeff();
    const double smax = g.scale.maxCoeff();
    if (!(smin > 0.0) || (smax / smin) * (smax / smin) > 1e12)
        throw NumericalError("projected_cross_section: covariance is too ill-conditioned");
    // In the principal frame Sigma^-1 = diag(1/s^2), det Sigma = prod s^2.
    const Vec3 local = g.rotation.toRotationMatrix().transpose() * direction;
    const double quad = local.cwiseQuotient(g.scale).squaredNorm();
    return kPi * g.scale.prod() * std::sqrt(quad);
}

CameraRayBundle CameraRayBundle::pinhole(const Vec3& origin, const Vec3& target, const Vec3& up, double fov_y_deg, int height, int width)
{
    CameraRayBundle b;
    b.origin = origin;
    b.height = height;
    b.width = width;
    b.intrinsics = "pinhole fov_y=" + std::to_string(fov_y_deg);
    const Vec3 forward = (target - origin).normalized();
    const Vec3 right = forward.cross(up).normalized();
    const Vec3 down = forward.cross(right);
    const double tan_half = std::tan(0.5 * fov_y_deg * kPi / 180.0);
    const double aspect = static_cast<double>(width) / static_cast<double>(height);
    b.directions.reserve(static_cast<std::size_t>(height) * width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double u = ((c + 0.5) / width * 2.0 - 1.0) * tan_half * aspect;
            const double v = ((r + 0.5) / height * 2.0 - 1.0) * tan_half;
            b.directions.push_back((forward + u * right + v * down).normalized());
        }
    }
    return b;
}

GeometryMaps::GeometryMaps(int h, int w)
    : height(h), width(w), depth(pixels(), 0.0), normal(pixels(), Vec3::Zero()), depth_sq(pixels(), 0.0), weight(pixels(), 0.0)
{
}

PixelBlend blend_geometry_samples(std::span<const GeometrySample> samples)
{
    PixelBlend p;
    double transmittance = 1.0;
    for (const auto& s : samples) {
        const double w = s.alpha * transmittance;
        p.depth += w * s.depth;
        p.depth_sq += w * s.depth * s.depth;
        p.normal += w * s.normal;
        p.weight += w;
        transmittance *= 1.0 - s.alpha;
    }
    return p;
}

GeometryMaps render_geometry_maps(const Scene& scene, const Bvh& bvh, const CameraRayBundle& rays)
{
    GeometryMaps maps(rays.height, rays.width);
    const auto n = static_cast<std::int64_t>(maps.pixels());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        const RayHitChain chain = ray_chain(bvh, scene, rays.origin, rays.directions[i]);
        std::vector<GeometrySample> samples;
        samples.reserve(chain.size());
        for (const auto& h : chain) samples.push_back({h.t, scene[h.index].normal, h.alpha});
        const PixelBlend p = blend_geometry_samples(samples);
        maps.depth[i] = p.depth;
        maps.depth_sq[i] = p.depth_sq;
        maps.normal[i] = p.normal;
        maps.weight[i] = p.weight;
    }
    return maps;
}

GeometryMaps render_geometry_maps(const Scene& scene, const CameraRayBundle& rays)
{
    return render_geometry_maps(scene, Bvh::build(scene), rays);
}

namespace {

bool neighbourhood_valid(const GeometryMaps& m, int r, int c)
{
    if (r <= 0 || c <= 0 || r >= m.height - 1 || c >= m.width - 1) return false;
    return m.weight[m.at(r, c)] > 0.0 && m.weight[m.at(r - 1, c)] > 0.0 && m.weight[m.at(r + 1, c)] > 0.0 &&
           m.weight[m.at(r, c - 1)] > 0.0 && m.weight[m.at(r, c + 1)] > 0.0;
}

} // namespace

double loss_depth_normal(const GeometryMaps& maps, const CameraRayBundle& rays)
{
    if (rays.height != maps.height || rays.width != maps.width) throw ValidationError("loss_depth_normal: ray bundle does not match maps");
    // Expected depth D / weight gives the surface point along each ray.
    auto point = [&](int r, int c) {
        const std::size_t i = maps.at(r, c);
        return Vec3(rays.origin + (maps.depth[i] / maps.weight[i]) * rays.direction(r, c));
    };
    double total = 0.0;
    std::size_t count = 0;
    for (int r = 0; r < maps.height; ++r) {
        for (int c = 0; c < maps.width; ++c) {
            if (!neighbourhood_valid(maps, r, c)) continue;
            const Vec3 tu = point(r, c + 1) - point(r, c - 1);
            const Vec3 tv = point(r + 1, c) - point(r - 1, c);
            Vec3 pseudo = tu.cross(tv);
            const Vec3& n = maps.normal[maps.at(r, c)];
            if (pseudo.norm() == 0.0 || n.norm() == 0.0) continue;
            pseudo.normalize();
            if (pseudo.dot(rays.direction(r, c)) > 0.0) pseudo = -pseudo;
            total += (n.normalized() - pseudo).norm();
            ++count;
        }
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

double loss_depth_uncertainty(const GeometryMaps& maps)
{
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < maps.pixels(); ++i) {
        if (!(maps.weight[i] > 0.0)) continue;
        total += std::max(maps.depth_sq[i] - maps.depth[i] * maps.depth[i], 0.0);
        ++count;
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

double loss_normal_smoothness(const GeometryMaps& maps, std::span<const double> reference_image)
{
    if (reference_image.size() != maps.pixels()) throw ValidationError("loss_normal_smoothness: reference image does not match maps");
    double total = 0.0;
    std::size_t count = 0;
    for (int r = 0; r < maps.height; ++r) {
        for (int c = 0; c < maps.width; ++c) {
            if (!neighbourhood_valid(maps, r, c)) continue;
            const Vec3 gx = 0.5 * (maps.normal[maps.at(r, c + 1)] - maps.normal[maps.at(r, c - 1)]);
            const Vec3 gy = 0.5 * (maps.normal[maps.at(r + 1, c)] - maps.normal[maps.at(r - 1, c)]);
            const double cx = 0.5 * (reference_image[maps.at(r, c + 1)] - reference_image[maps.at(r, c - 1)]);
            const double cy = 0.5 * (reference_image[maps.at(r + 1, c)] - reference_image[maps.at(r - 1, c)]);
            const double grad_n = std::sqrt(gx.squaredNorm() + gy.squaredNorm());
            total += grad_n * std::exp(-std::hypot(cx, cy));
            ++count;
        }
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

double loss_geometric_total(const GeometricLossWeights& w, const GeometricLossParts& p)
{
    for (double x : {w.l1, w.ssim, w.normal, w.uncertainty, w.smoothness})
        if (!(x >= 0.0)) throw ValidationError("loss weights must be non-negative");
    return w.l1 * p.l1 + w.ssim * p.ssim + w.normal * p.normal + w.uncertainty * p.uncertainty + w.smoothness * p.smoothness;
}

} // namespace rfsplat
