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

#include "rfsplat/fov.hpp"

#include <algorithm>

namespace rfsplat {

void orthonormal_basis(const Vec3& w, Vec3& u, Vec3& v)
{
    const Vec3 helper = std::abs(w.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    u = helper.cross(w).normalized();
    v = w.cross(u);
    if (std::abs(w.z() - 1.0) < 1e-15) {
        u = Vec3::UnitX();
        v = Vec3::UnitY();
    }
}

FovGrid::FovGrid(PatternType pattern, double step_deg, const Vec3& axis) : pattern_(pattern), step_deg_(step_deg), w_(axis.normalized())
{
    if (!(step_deg > 0.0) || step_deg > 90.0) throw ValidationError("FoV step must lie in (0, 90] degrees");
    const double cells_e = elevation_span_deg() / step_deg;
    const double cells_a = 360.0 / step_deg;
    elevation_cells_ = static_cast<int>(std::lround(cells_e));
    azimuth_cells_ = static_cast<int>(std::lround(cells_a));
    if (std::abs(cells_e - elevation_cells_) > 1e-9 || std::abs(cells_a - azimuth_cells_) > 1e-9)
        throw ValidationError("FoV step must divide the angular spans evenly");
    orthonormal_basis(w_, u_, v_);
}

std::optional<std::size_t> FovGrid::cell_of(const Vec3& direction) const
{
    const double step = step_deg_ * kPi / 180.0;
    const double theta = std::acos(std::clamp(direction.dot(w_), -1.0, 1.0));
    auto e = static_cast<int>(std::floor(theta / step));
    if (e >= elevation_cells_) {
        // theta exactly at the edge of the span belongs to the last ring
        if (theta <= elevation_span_deg() * kPi / 180.0 + 1e-12) e = elevation_cells_ - 1;
        else return std::nullopt;
    }
    double phi = std::atan2(direction.dot(v_), direction.dot(u_));
    if (phi < 0.0) phi += 2.0 * kPi;
    auto a = static_cast<int>(std::floor(phi / step));
    if (a >= azimuth_cells_) a = azimuth_cells_ - 1;
    return static_cast<std::size_t>(e) * azimuth_cells_ + a;
}

FovCell FovGrid::cell(std::size_t index) const
{
    const double step = step_deg_ * kPi / 180.0;
    const auto e = static_cast<int>(index / azimuth_cells_);
    const auto a = static_cast<int>(index % azimuth_cells_);
    const double theta = (e + 0.5) * step;
    const double phi = (a + 0.5) * step;
    const Vec3 dir = std::sin(theta) * (std::cos(phi) * u_ + std::sin(phi) * v_) + std::cos(theta) * w_;
    return {dir.normalized(), std::sin(theta) * step * step};
}

std::vector<FovCell> FovGrid::cells() const
{
    std::vector<FovCell> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cell(i);
    return out;
}

FovGrid make_fov_grid(PatternType pattern, double step_deg, const Vec3& boresight)
{
    return FovGrid(pattern, step_deg, pattern == PatternType::Omni ? Vec3::UnitZ() : boresight);
}

FovGrid make_fov_grid(const Antenna& rx, double step_deg)
{
    return make_fov_grid(rx.pattern, step_deg, rx.boresight);
}

} // namespace rfsplat
