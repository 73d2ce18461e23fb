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

// Request-level operations shared by the command line and the HTTP API, and
// the in-memory scene registry behind `rfsplat serve`.

#include "rfsplat/io.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <utility>

namespace httplib {
class Server;
}

namespace rfsplat::service {

using io::Json;

/// Largest map side accepted per API request. RCS sweeps and attribute
/// images are held to the same total (kMaxGridSide^2 samples).
inline constexpr int kMaxGridSide = 256;

/// "HxW" with positive integers.
std::pair<int, int> parse_grid(const std::string& text);

/// "x,y,z" with finite numbers.
Vec3 parse_position(const std::string& text);

/// "f0:f1:n" linear grid, or a single frequency.
FrequencyGrid parse_band(const std::string& text);

/// An antenna id from the document or an "x,y,z" position. A position takes
/// the first transmitter of the document as its template (isotropic default).
Antenna resolve_antenna(const io::SceneDocument& doc, const std::string& spec, io::AntennaRole role);

struct MapRequest {
    std::string tx;
    int height = 64;
    int width = 64;
    std::optional<double> frequency_hz; ///< default: first frequency of the document
};

/// Radio map over the xy-extent of the scene bounds at the document's
/// map_height (default: transmitter height). Receivers copy the first Rx
/// antenna of the document. Throws ValidationError for a transmitter outside
/// the bounds.
RadioMap compute_map(const io::SceneDocument& doc, const Bvh& bvh, const MapRequest& request);

/// Monostatic sweep over [0, 360) degrees at `step_deg`. The radar copies the
/// first Tx antenna of the document.
RcsSweep compute_rcs(const io::SceneDocument& doc, const Bvh& bvh, double range, const FrequencyGrid& grid, double step_deg);

Json rcs_to_json(const RcsSweep& sweep, double range);

/// One attribute image with NaN cells as null.
Json attribute_map_to_json(const AttributeMaps& maps, const std::string& kind, double fov_step_deg);

struct Response {
    int status = 200;
    std::string body;
};

using Query = std::map<std::string, std::string>;

/// Scene registry. Edits of one scene are exclusive, renders share it.
/// Every handler returns JSON; errors are {"error": message} with 404 for an
/// unknown scene, 409 for a stale revision and 422 for invalid input.
class Service {
public:
    /// POST /scene: registers (or replaces) the document; returns id and revision.
    Response load_scene(const std::string& body);
    /// GET /scene/{id}
    Response scene_summary(const std::string& id) const;
    /// POST /scene/{id}/antenna: adds or updates one antenna. Fields that are
    /// omitted keep their current values. An optional "revision" must match.
    Response update_antenna(const std::string& id, const std::string& body);
    /// GET /scene/{id}/map?tx=&grid=HxW&freq=
    Response map(const std::string& id, const Query& query) const;
    /// GET /scene/{id}/rcs?range=&freq=|band=&step=
    Response rcs(const std::string& id, const Query& query) const;
    /// GET /scene/{id}/attributes?kind=&rx=&step=
    Response attributes(const std::string& id, const Query& query) const;

    /// Loads every *.json scene file of a directory; returns the count.
    std::size_t load_directory(const std::string& dir);

    /// Registers the routes above on `server`.
    void install(httplib::Server& server);

private:
    struct Entry {
        mutable std::shared_mutex mutex;
        io::SceneDocument doc;
        Bvh bvh;
        std::uint64_t revision = 1;
    };

    std::shared_ptr<Entry> find(const std::string& id) const;

    mutable std::shared_mutex registry_;
    std::map<std::string, std::shared_ptr<Entry>> scenes_;
};

} // namespace rfsplat::service
