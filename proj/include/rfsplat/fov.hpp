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

#include <optional>
#include <vector>

namespace rfsplat {

struct FovCell {
    Vec3 direction;     ///< cell-center look direction (unit, world frame)
    double solid_angle; ///< sin(theta) dtheta dphi, steradians
};

/// Spherical receive grid in the antenna frame: polar angle theta measured
/// from `axis` (zenith for omni, boresight for horn) and azimuth phi in
/// [0, 360). Omni covers theta in [0, 180], horn covers [0, 90].
class FovGrid {
public:
    FovGrid() = default;
    FovGrid(PatternType pattern, double step_deg, const Vec3& axis);

    PatternType pattern() const { return pattern_; }
    double step_deg() const { return step_deg_; }
    int elevation_cells() const { return elevation_cells_; }
    int azimuth_cells() const { return azimuth_cells_; }
    std::size_t size() const { return static_cast<std::size_t>(elevation_cells_) * azimuth_cells_; }
    double elevation_span_deg() const { return pattern_ == PatternType::Omni ? 180.0 : 90.0; }
    const Vec3& axis() const { return w_; }

    /// Cell containing a look direction, or nothing when outside the field of view.
    std::optional<std::size_t> cell_of(const Vec3& direction) const;
    FovCell cell(std::size_t index) const;
    std::vector<FovCell> cells() const;

private:
    PatternType pattern_ = PatternType::Omni;
    double step_deg_ = 1.0;
    int elevation_cells_ = 0;
    int azimuth_cells_ = 0;
    Vec3 u_ = Vec3::UnitX();
    Vec3 v_ = Vec3::UnitY();
    Vec3 w_ = Vec3::UnitZ();
};

/// Omni: 180 x 360 cells about +z; horn: 90 x 360 cells about the boresight.
FovGrid make_fov_grid(PatternType pattern, double step_deg = 1.0, const Vec3& boresight = Vec3::UnitX());
FovGrid make_fov_grid(const Antenna& rx, double step_deg = 1.0);

/// Right-handed orthonormal (u, v) completing w.
void orthonormal_basis(const Vec3& w, Vec3& u, Vec3& v);

} // namespace rfsplat
