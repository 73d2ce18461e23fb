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

#include "rfsplat/fov.hpp"
#include "rfsplat/link_plan.hpp"
#include "rfsplat/visibility.hpp"

#include <optional>
#include <span>
#include <vector>

namespace rfsplat {

struct RenderOptions {
    /// Use the exact Rx -> Gaussian direction instead of the FoV cell center.
    bool exact_direction = false;
    double fov_step_deg = 1.0;
    /// Drop the receive-side spreading and phase from the blend (ablation).
    bool disable_path_loss = false;
    /// Apply spreading and phase over the preceding occluders of each ray
    /// instead of once over the contributor's own distance.
    bool literal_attenuation_index = false;
};

enum class LosDistanceLaw {
    Constant,        ///< c = c_dis
    InverseDistance, ///< c = c_dis / d_LoS
};

struct LosNlosParams {
    double v_vis = 1.0;          ///< used when geometric_visibility is false
    double s_tx_strength = 1.0;
    double c_dis = 1.0;
    LosDistanceLaw law = LosDistanceLaw::Constant;
    /// v_vis from the Tx -> Rx transmittance instead of the fixed value.
    bool geometric_visibility = true;

    void validate() const;
    double coefficient(double d_los) const;
};

/// S_LoS + s_nlos with S_LoS = v_vis S_Tx c exp(j 2 pi d / lambda), using params.v_vis.
Complex mix_los_nlos(const LosNlosParams& params, double d_los, double wavelength, Complex s_nlos);

/// S(w) = sum_l s_out(l) alpha_l T_l a(d_l) along the ray (rx, omega), where
/// a(d) = sqrt(1/(4 pi d^2)) exp(-j 2 pi d / lambda) and d_l is the distance
/// along the ray. `s_out` is indexed by Gaussian.
Complex blend_direction(const Scene& scene, const Bvh& bvh, const Vec3& rx_position, const Vec3& omega,
                        std::span<const Complex> s_out, double wavelength, const RenderOptions& options = {});

struct DirectionEntry {
    Vec3 direction;
    std::int64_t cell = -1;
    std::size_t gaussians = 0;
    std::vector<Complex> values; ///< S(w, f) per frequency sample
};

/// Per-direction signals in ascending cell order (exact mode: one entry per contributor).
struct DirectionalRender {
    std::vector<DirectionEntry> entries;
};

/// S(f) = sum_i C^R(w_i) S(w_i, f).
Complex integrate_receiver(const DirectionalRender& render, const Antenna& rx, std::size_t frequency_index);

/// Transmit-side quantities of every Gaussian for one transmitter.
struct TxIllumination {
    struct Entry {
        double distance = 0.0;
        Vec3 direction = Vec3::Zero(); ///< Tx -> Gaussian
        double amplitude = 0.0;        ///< sqrt(P G_T A / (4 pi d^2)) x incidence cosine
        std::uint32_t begin = 0, end = 0;
    };
    std::vector<Entry> entries;
    std::vector<Occluder> occluders;
};

TxIllumination build_tx_illumination(const Scene& scene, const Bvh& bvh, const Antenna& tx);

LinkPlan build_link_plan(const Scene& scene, const Bvh& bvh, const TxIllumination& illumination, const Antenna& tx,
                         const Antenna& rx, const std::optional<LosNlosParams>& los, const RenderOptions& options = {});

AttributeArrays<double> scene_attributes(const Scene& scene);

ComplexSignal render_received_signal(const Scene& scene, const Bvh& bvh, const Antenna& tx, const Antenna& rx,
                                     const FrequencyGrid& grid, const std::optional<LosNlosParams>& los = std::nullopt,
                                     const RenderOptions& options = {});

DirectionalRender render_directional(const Scene& scene, const Bvh& bvh, const Antenna& tx, const Antenna& rx,
                                     const FrequencyGrid& grid, const RenderOptions& options = {});

/// Co-located radar on a circle of radius `range` in the xy-plane, looking at the origin.
struct RcsConfig {
    double range = 5.0;
    std::vector<double> angles_deg;
    FrequencyGrid grid = FrequencyGrid::single(5.8e9);
    Antenna radar{}; ///< position and boresight are overwritten per angle
};

struct RcsSweep {
    std::vector<double> angles_deg;
    FrequencyGrid grid;
    std::vector<double> rssi_db; ///< angle-major: [angle * grid.size() + f]
    double at(std::size_t angle, std::size_t f) const { return rssi_db[angle * grid.size() + f]; }
};

/// Radar placement for an angle: range (cos phi, sin phi, 0), boresight toward the origin.
Antenna radar_at(const Antenna& radar, double range, double angle_deg);

RcsSweep render_rcs_sweep(const Scene& scene, const Bvh& bvh, const RcsConfig& config, const RenderOptions& options = {});

/// H x W receiver cells at a fixed height over an xy-rectangle; cell (r, c)
/// sits at the center of its sub-rectangle, rows along +y, columns along +x.
struct MapGrid {
    int height = 0;
    int width = 0;
    double z = 0.0;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    Vec3 cell_position(int row, int col) const;
    std::size_t cells() const { return static_cast<std::size_t>(height) * width; }
};

/// Grid covering the xy-extent of the scene bounds at height z.
MapGrid map_grid_over(const Scene& scene, int height, int width, double z);

struct RadioMap {
    MapGrid grid;
    double frequency_hz = 0.0;
    std::vector<double> rssi_db; ///< row-major
};

/// Renders every cell with `rx_template` moved to the cell position.
/// Throws ValidationError for cells outside the scene bounds and
/// DegenerateGeometryError for a cell co-located with the transmitter.
RadioMap render_radio_map(const Scene& scene, const Bvh& bvh, const Antenna& tx, const MapGrid& grid, double frequency_hz,
                          const std::optional<LosNlosParams>& los, const Antenna& rx_template = {}, const RenderOptions& options = {});

/// Attribute images over the receiver FoV (rows = elevation cells, columns =
/// azimuth cells), blended with the weights alpha_l T_l normalized per cell.
/// Phase is the argument of the weighted phasor sum. Cells without any
/// Gaussian hold NaN.
struct AttributeMaps {
    int height = 0;
    int width = 0;
    std::vector<double> gamma_mag;
    std::vector<double> gamma_phase;
    std::vector<double> roughness;
    std::vector<double> weight;
};

AttributeMaps export_attribute_maps(const Scene& scene, const Bvh& bvh, const Antenna& rx, double fov_step_deg = 1.0);

} // namespace rfsplat
