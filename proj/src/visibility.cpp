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

#include "rfsplat/visibility.hpp"

#include "rfsplat/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace rfsplat {

ClosestApproach closest_approach(const Vec3& mu, const Mat3& whitening, const Vec3& origin, const Vec3& direction)
{
    const Vec3 o = whitening * (origin - mu);
    const Vec3 d = whitening * direction;
    const double dd = d.squaredNorm();
    const double t = -o.dot(d) / dd;
    return {t, (o + t * d).squaredNorm()};
}

RayAlpha ray_gaussian_alpha(const RFGaussian& g, const Vec3& origin, const Vec3& direction)
{
    const ClosestApproach ca = closest_approach(g.mu, g.whitening(), origin, direction);
    RayAlpha out;
    out.t = ca.t;
    if (ca.mahalanobis2 > kCullSigma * kCullSigma) return out;
    out.hit = true;
    out.density = std::exp(-0.5 * ca.mahalanobis2);
    out.alpha = capped_alpha(g.alpha, out.density);
    return out;
}

bool segment_hits_box(const Aabb& box, const Vec3& origin, const Vec3& inv_direction, const Vec3& direction, double tmin, double tmax)
{
    double lo = tmin;
    double hi = tmax;
    for (int k = 0; k < 3; ++k) {
        if (direction[k] == 0.0) {
            if (origin[k] < box.lo[k] || origin[k] > box.hi[k]) return false;
            continue;
        }
        double t0 = (box.lo[k] - origin[k]) * inv_direction[k];
        double t1 = (box.hi[k] - origin[k]) * inv_direction[k];
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        if (lo > hi) return false;
    }
    return true;
}

namespace {

std::uint32_t subtree_nodes(std::uint32_t n, std::uint32_t leaf)
{
    if (n <= leaf) return 1;
    const std::uint32_t left = n / 2;
    return 1 + subtree_nodes(left, leaf) + subtree_nodes(n - left, leaf);
}

struct Builder {
    std::vector<BvhNode>& nodes;
    std::vector<std::uint32_t>& order;
    const std::vector<Aabb>& boxes;
    const std::vector<Vec3>& centers;
    std::uint32_t leaf;

    // Node layout is a pure function of the primitive count, so subtrees can
    // be written concurrently without coordination.
    void build(std::uint32_t node, std::uint32_t begin, std::uint32_t end)
    {
        Aabb box;
        Aabb centroid_box;
        for (std::uint32_t i = begin; i < end; ++i) {
            box.grow(boxes[order[i]]);
            centroid_box.grow(centers[order[i]]);
        }
        BvhNode& n = nodes[node];
        n.box = box;
        const std::uint32_t count = end - begin;
        if (count <= leaf) {
            n.first = begin;
            n.count = count;
            return;
        }
        int axis = 0;
        centroid_box.extent().maxCoeff(&axis);
        const std::uint32_t mid = begin + count / 2;
        std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) {
                             if (centers[a][axis] != centers[b][axis]) return centers[a][axis] < centers[b][axis];
                             return a < b;
                         });
        const std::uint32_t left_node = node + 1;
        const std::uint32_t right_node = left_node + subtree_nodes(mid - begin, leaf);
        n.right = right_node;
        n.count = 0;
        if (count > 4096) {
#pragma omp task default(shared) firstprivate(left_node, begin, mid)
            build(left_node, begin, mid);
#pragma omp task default(shared) firstprivate(right_node, mid, end)
            build(right_node, mid, end);
#pragma omp taskwait
        } else {
            build(left_node, begin, mid);
            build(right_node, mid, end);
        }
    }
};

} // namespace

Bvh Bvh::build(const Scene& scene, BvhBuildOptions options)
{
    Bvh bvh;
    const auto n = static_cast<std::uint32_t>(scene.size());
    if (n == 0) return bvh;
    const std::uint32_t leaf = std::max<std::uint32_t>(1, options.max_leaf_size);
    bvh.boxes_.resize(n);
    bvh.centers_.resize(n);
    bvh.whitening_.resize(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const RFGaussian& g = scene[static_cast<std::size_t>(i)];
        bvh.boxes_[i] = three_sigma_box(g);
        bvh.centers_[i] = g.mu;
        bvh.whitening_[i] = g.whitening();
    }
    bvh.order_.resize(n);
    std::iota(bvh.order_.begin(), bvh.order_.end(), 0u);
    bvh.nodes_.resize(subtree_nodes(n, leaf));
    Builder builder{bvh.nodes_, bvh.order_, bvh.boxes_, bvh.centers_, leaf};
#pragma omp parallel
#pragma omp single
    builder.build(0, 0, n);
    return bvh;
}

std::vector<std::uint32_t> Bvh::box_candidates(const Vec3& origin, const Vec3& direction, double tmin, double tmax) const
{
    std::vector<std::uint32_t> out;
    for_each_candidate(origin, direction, tmin, tmax, [&](std::uint32_t i) { out.push_back(i); });
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool chain_order(const RayHit& a, const RayHit& b)
{
    if (a.t != b.t) return a.t < b.t;
    return a.index < b.index;
}

} // namespace

RayHitChain Bvh::trace(const Vec3& origin, const Vec3& direction, double tmin, double tmax) const
{
    RayHitChain chain;
    for_each_candidate(origin, direction, tmin, tmax, [&](std::uint32_t i) {
        const ClosestApproach ca = closest_approach(centers_[i], whitening_[i], origin, direction);
        if (ca.mahalanobis2 > kCullSigma * kCullSigma) return;
        if (!(ca.t > tmin && ca.t < tmax)) return;
        chain.push_back({i, ca.t, std::exp(-0.5 * ca.mahalanobis2), 0.0});
    });
    std::sort(chain.begin(), chain.end(), chain_order);
    return chain;
}

VisibilityResult visibility_chain(const Bvh& bvh, const Scene& scene, const Vec3& from, const Vec3& to,
                                  std::optional<std::uint32_t> exclude)
{
    const Vec3 span = to - from;
    const double length = span.norm();
    if (!(length > 0.0)) throw DegenerateGeometryError("visibility_chain: endpoints coincide");
    const Vec3 dir = span / length;
    const double eps = 1e-6 * length;

    VisibilityResult result;
    result.chain = bvh.trace(from, dir, eps, length - eps);
    if (exclude) std::erase_if(result.chain, [&](const RayHit& h) { return h.index == *exclude; });
    for (auto& h : result.chain) {
        h.alpha = capped_alpha(scene[h.index].alpha, h.density);
        result.visibility *= 1.0 - h.alpha;
    }
    return result;
}

RayHitChain ray_chain(const Bvh& bvh, const Scene& scene, const Vec3& origin, const Vec3& direction)
{
    RayHitChain chain = bvh.trace(origin, direction, 0.0, std::numeric_limits<double>::infinity());
    for (auto& h : chain) h.alpha = capped_alpha(scene[h.index].alpha, h.density);
    return chain;
}

IncidentSample incident_field(const Antenna& tx, const RFGaussian& g, double visibility, double frequency_hz, Complex s_tx)
{
    const Vec3 offset = g.mu - tx.position;
    const double d = offset.norm();
    if (d < 1e-6) throw DegenerateGeometryError("incident_field: transmitter coincides with a Gaussian center");
    const Vec3 dir = offset / d;
    const double area = projected_cross_section(g, dir);
    const double amplitude = std::sqrt(tx.power_watts * tx.power_gain(dir) * area / (4.0 * kPi * d * d));
    const double phase = -2.0 * kPi * d / wavelength_of(frequency_hz);
    IncidentSample s;
    s.direction = dir;
    s.field = {amplitude * visibility * s_tx * std::polar(1.0, phase)};
    s.solid_angle = 1.0;
    return s;
}

} // namespace rfsplat
