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

// Scene files, dataset files, binary grids and CSV tables. Schemas are
// documented in docs/formats.md.

#include "rfsplat/fam.hpp"
#include "rfsplat/inverse.hpp"
#include "rfsplat/renderer.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rfsplat::io {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

enum class AntennaRole { Tx, Rx };

struct NamedAntenna {
    std::string id;
    AntennaRole role = AntennaRole::Tx;
    Antenna antenna;
};

struct SceneDocument {
    std::string id = "scene";
    std::string units = "m";
    FrequencyGrid grid = FrequencyGrid::single(5.8e9);
    Scene scene;
    std::vector<NamedAntenna> antennas;
    std::optional<LosNlosParams> los;
    std::optional<double> map_height;

    const NamedAntenna* find_antenna(const std::string& id) const;
};

/// Throws ValidationError naming the offending field for unknown fields,
/// missing required fields or out-of-range values.
SceneDocument scene_from_json(const Json& j);
Json scene_to_json(const SceneDocument& doc);

SceneDocument parse_scene(const std::string& text);
std::string serialize_scene(const SceneDocument& doc);
SceneDocument load_scene(const std::string& path);
void save_scene(const std::string& path, const SceneDocument& doc);

ObservationSet dataset_from_json(const Json& j);
Json dataset_to_json(const ObservationSet& set);
ObservationSet load_dataset(const std::string& path);
void save_dataset(const std::string& path, const ObservationSet& set);

Json antenna_to_json(const Antenna& a);
/// `require_position` rejects objects without a position field.
Antenna antenna_from_json(const Json& j, const std::string& where, bool require_position = true);

/// Antenna object with `id` and `role` ("tx" or "rx") as stored in scene files.
NamedAntenna named_antenna_from_json(const Json& j, const std::string& where);
Json named_antenna_to_json(const NamedAntenna& a);

Json fit_report_to_json(const FitReport& report);
Json wideband_report_to_json(const WidebandReport& report, const AttributeBank& base, const FrequencyGrid& grid);
Json gradient_check_to_json(const GradientCheck& check);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// angle_deg,rssi_db (single frequency) or angle_deg,freq_hz,rssi_db.
std::string rcs_csv(const RcsSweep& sweep);
/// row,col,x_m,y_m,z_m,rssi_db in row-major order.
std::string map_csv(const RadioMap& map);
/// Row-major array of rows of RSSI values; the `cells_db` payload of the map API.
std::string map_cells_json(const RadioMap& map);
Json map_to_json(const RadioMap& map);

/// Writes <stem>.bin (float64 little-endian, row-major, channel-interleaved)
/// and <stem>.json (header with height, width, channels and `extra`).
void write_grid(const std::string& stem, int height, int width, int channels, std::span<const double> data, const Json& extra = Json::object());

struct Grid {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;
    Json header;
};

Grid read_grid(const std::string& stem);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace rfsplat::io
