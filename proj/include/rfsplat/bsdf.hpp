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

// Local scattering on a single Gaussian: mirror direction, directive lobe and
// the per-Gaussian rendering sum that turns incident fields into s_out.

#include "rfsplat/scene.hpp"

#include <span>
#include <vector>

namespace rfsplat {

/// Incident field at a Gaussian. `direction` points from the source toward the Gaussian.
struct IncidentSample {
    Vec3 direction = -Vec3::UnitZ();
    std::vector<Complex> field; ///< one complex amplitude per frequency sample
    double solid_angle = 1.0;
};

/// `outgoing` points from the Gaussian toward the receiver.
struct ScatterQuery {
    Vec3 outgoing = Vec3::UnitZ();
    std::size_t frequency_index = 0;
};

/// Mirror of an arrival direction about the normal: w_i - 2 (w_i . n) n.
Vec3 specular_direction(const Vec3& incident, const Vec3& normal);

/// (1 + cos psi) / 2 where psi is the angle between `outgoing` and the mirror
/// direction of `incident`. The lobe is this value raised to the roughness.
double lobe_base(const Vec3& outgoing, const Vec3& incident, const Vec3& normal);

/// sqrt(max(0, w_o . n)): the outgoing-elevation factor of the pattern.
double outgoing_elevation_factor(const Vec3& outgoing, const Vec3& normal);

/// max(0, -w_i . n): foreshortening of front-side illumination.
double incidence_cosine(const Vec3& incident, const Vec3& normal);

/// Directive scattering pattern sqrt(cos theta_o) ((1 + cos psi) / 2)^R, R >= 1.
/// Back-hemisphere outgoing directions give zero.
double scattering_pattern(const Vec3& outgoing, const Vec3& incident, const Vec3& normal, double roughness);

/// s_out = sum_i Gamma F(w_o, w_i) s_in(w_i) max(0, -w_i . n) dw_i.
Complex local_scatter(const RFGaussian& g, std::span<const IncidentSample> incidents, const ScatterQuery& query);

} // namespace rfsplat
