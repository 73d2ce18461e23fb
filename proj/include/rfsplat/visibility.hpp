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

// Ray tracing over Gaussian primitives: a median-split BVH over 3-sigma boxes,
// per-ray opacity contributions, transmittance along segments and the Friis
// incident field.

#include "rfsplat/bsdf.hpp"
#include "rfsplat/scene.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rfsplat {

/// Closest approach of a line to a Gaussian in the Mahalanobis metric.
struct ClosestApproach {
    double t = 0.0;            ///< ray parameter of the closest point
    double mahalanobis2 = 0.0; ///< squared Mahalanobis distance at that point
};

/// `whitening` is RFGaussian::whitening(); `direction` need not be unit.
ClosestApproach closest_approach(const Vec3& mu, const Mat3& whitening, const Vec3& origin, const Vec3& direction);

struct RayAlpha {
    double alpha = 0.0;   ///< min(g.alpha * density, 0.99), zero when culled
    double t = 0.0;       ///< distance along the ray to the closest point
    double density = 0.0; ///< Gaussian density at the closest point
    bool hit = false;     ///< false when the closest point is beyond 3 sigma
};

/// Opacity contribution of g to the ray (origin, unit direction).
RayAlpha ray_gaussian_alpha(const RFGaussian& g, const Vec3& origin, const Vec3& direction);

/// alpha * density capped at kAlphaCap.
inline double capped_alpha(double alpha, double density) { return std::min(alpha * density, kAlphaCap); }

struct RayHit {
    std::uint32_t index = 0;
    double t = 0.0;
    double density = 0.0;
    double alpha = 0.0;
};

/// Hits sorted by ascending distance; equal distances ordered by Gaussian index.
using RayHitChain = std::vector<RayHit>;

struct BvhNode {
    Aabb box;
    std::uint32_t first = 0;  ///< leaf: first slot in the primitive order
    std::uint32_t count = 0;  ///< leaf: primitive count; 0 for interior nodes
    std::uint32_t right = 0;  ///< interior: right child (left child is this + 1)
    bool leaf() const { return count > 0; }
};

struct BvhBuildOptions {
    std::uint32_t max_leaf_size = 4;
};

/// Bounding volume hierarchy over Gaussian 3-sigma boxes. Immutable after
/// build and safe to query from any number of threads.
class Bvh {
public:
    Bvh() = default;

    /// Median split along the longest centroid axis. An empty scene yields an
    /// empty hierarchy whose queries return nothing.
    static Bvh build(const Scene& scene, BvhBuildOptions options = {});

    bool empty() const { return nodes_.empty(); }
    std::size_t primitive_count() const { return order_.size(); }
    const std::vector<BvhNode>& nodes() const { return nodes_; }
    std::span<const std::uint32_t> primitive_order() const { return order_; }
    const Aabb& primitive_box(std::size_t i) const { return boxes_[i]; }

    /// Indices (ascending) whose 3-sigma box intersects the segment origin + t dir, t in [tmin, tmax].
    std::vector<std::uint32_t> box_candidates(const Vec3& origin, const Vec3& direction, double tmin, double tmax) const;

    /// Gaussians whose closest approach lies strictly inside (tmin, tmax) within
    /// 3 sigma. `alpha` of each hit is left at zero; see visibility_chain.
    RayHitChain trace(const Vec3& origin, const Vec3& direction, double tmin, double tmax) const;

    template <class Fn>
    void for_each_candidate(const Vec3& origin, const Vec3& direction, double tmin, double tmax, Fn&& fn) const;

private:
    std::vector<BvhNode> nodes_;
    std::vector<std::uint32_t> order_;
    std::vector<Aabb> boxes_;
    std::vector<Vec3> centers_;
    std::vector<Mat3> whitening_;
};

/// Slab test of a segment against a box; handles zero direction components.
bool segment_hits_box(const Aabb& box, const Vec3& origin, const Vec3& inv_direction, const Vec3& direction, double tmin, double tmax);

template <class Fn>
void Bvh::for_each_candidate(const Vec3& origin, const Vec3& direction, double tmin, double tmax, Fn&& fn) const
{
    if (nodes_.empty()) return;
    const Vec3 inv = direction.cwiseInverse();
    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const BvhNode& node = nodes_[stack[--top]];
        if (!segment_hits_box(node.box, origin, inv, direction, tmin, tmax)) continue;
        if (node.leaf()) {
            for (std::uint32_t k = 0; k < node.count; ++k) {
                const std::uint32_t prim = order_[node.first + k];
                if (segment_hits_box(boxes_[prim], origin, inv, direction, tmin, tmax)) fn(prim);
            }
        } else {
            const auto self = static_cast<std::uint32_t>(&node - nodes_.data());
            stack[top++] = node.right;
            stack[top++] = self + 1;
        }
    }
}

struct VisibilityResult {
    double visibility = 1.0; ///< product of (1 - alpha) over the occluders
    RayHitChain chain;       ///< occluders strictly between the endpoints
};

/// Transmittance of the segment from -> to. Occluders are hits whose closest
/// approach lies in (eps, L - eps) with eps = 1e-6 L; `exclude` (the
/// destination Gaussian) never occludes. Throws DegenerateGeometryError when from == to.
VisibilityResult visibility_chain(const Bvh& bvh, const Scene& scene, const Vec3& from, const Vec3& to,
                                  std::optional<std::uint32_t> exclude = std::nullopt);

/// Full chain along a ray (t in (0, inf)) with opacity filled from the scene.
RayHitChain ray_chain(const Bvh& bvh, const Scene& scene, const Vec3& origin, const Vec3& direction);

/// Incident field at g from a point transmitter with Friis spreading and phase:
/// sqrt(P G A / (4 pi d^2)) V s_tx exp(-j 2 pi d / lambda), solid angle 1.
/// Throws DegenerateGeometryError when the transmitter is within 1e-6 m of g.
IncidentSample incident_field(const Antenna& tx, const RFGaussian& g, double visibility, double frequency_hz, Complex s_tx);

} // namespace rfsplat
