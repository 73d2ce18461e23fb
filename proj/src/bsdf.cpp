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

#include "rfsplat/bsdf.hpp"

#include <algorithm>

namespace rfsplat {

Vec3 specular_direction(const Vec3& incident, const Vec3& normal)
{
    return incident - 2.0 * incident.dot(normal) * normal;
}

double lobe_base(const Vec3& outgoing, const Vec3& incident, const Vec3& normal)
{
    const double cos_psi = std::clamp(outgoing.dot(specular_direction(incident, normal)), -1.0, 1.0);
    return 0.5 * (1.0 + cos_psi);
}

double outgoing_elevation_factor(const Vec3& outgoing, const Vec3& normal)
{
    return std::sqrt(std::max(0.0, outgoing.dot(normal)));
}

double incidence_cosine(const Vec3& incident, const Vec3& normal)
{
    return std::max(0.0, -incident.dot(normal));
}

double scattering_pattern(const Vec3& outgoing, const Vec3& incident, const Vec3& normal, double roughness)
{
    const double elevation = outgoing_elevation_factor(outgoing, normal);
    if (elevation == 0.0) return 0.0;
    return elevation * std::pow(lobe_base(outgoing, incident, normal), roughness);
}

Complex local_scatter(const RFGaussian& g, std::span<const IncidentSample> incidents, const ScatterQuery& query)
{
    Complex total{0.0, 0.0};
    for (const auto& in : incidents) {
        if (query.frequency_index >= in.field.size())
            throw PreconditionError("local_scatter: incident field has no sample for the queried frequency");
        const double weight = scattering_pattern(query.outgoing, in.direction, g.normal, g.roughness) *
                              incidence_cosine(in.direction, g.normal) * in.solid_angle;
        total += weight * in.field[query.frequency_index];
    }
    return g.gamma() * total;
}

} // namespace rfsplat
