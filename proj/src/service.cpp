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

#include "rfsplat/service.hpp"

#include <httplib.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <mutex>

namespace rfsplat::service {

namespace {

double parse_number(const std::string& text, const std::string& what)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw ValidationError(what + ": expected a finite number, got '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

const io::NamedAntenna* first_with_role(const io::SceneDocument& doc, io::AntennaRole role)
{
    for (const auto& a : doc.antennas)
        if (a.role == role) return &a;
    return nullptr;
}

} // namespace

std::pair<int, int> parse_grid(const std::string& text)
{
    const auto parts = split(text, 'x');
    if (parts.size() != 2) throw ValidationError("grid: expected HxW, got '" + text + "'");
    int dims[2];
    for (int k = 0; k < 2; ++k) {
        const char* end = parts[k].data() + parts[k].size();
        const auto res = std::from_chars(parts[k].data(), end, dims[k]);
        if (parts[k].empty() || res.ec != std::errc() || res.ptr != end || dims[k] <= 0)
            throw ValidationError("grid: expected positive integers in HxW, got '" + text + "'");
    }
    return {dims[0], dims[1]};
}

Vec3 parse_position(const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw ValidationError("position: expected x,y,z, got '" + text + "'");
    return {parse_number(parts[0], "position"), parse_number(parts[1], "position"), parse_number(parts[2], "position")};
}

FrequencyGrid parse_band(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() == 1) return FrequencyGrid::single(parse_number(parts[0], "frequency"));
    if (parts.size() != 3) throw ValidationError("band: expected f0:f1:n, got '" + text + "'");
    const double n = parse_number(parts[2], "band count");
    if (n < 1 || n != std::floor(n)) throw ValidationError("band: count must be a positive integer");
    return FrequencyGrid::linear(parse_number(parts[0], "band start"), parse_number(parts[1], "band end"), static_cast<std::size_t>(n));
}

Antenna resolve_antenna(const io::SceneDocument& doc, const std::string& spec, io::AntennaRole role)
{
    if (const auto* named = doc.find_antenna(spec)) return named->antenna;
    if (spec.find(',') == std::string::npos) throw ValidationError("unknown antenna '" + spec + "'");
    Antenna a;
    if (const auto* tmpl = first_with_role(doc, role)) a = tmpl->antenna;
    a.position = parse_position(spec);
    return a;
}

RadioMap compute_map(const io::SceneDocument& doc, const Bvh& bvh, const MapRequest& request)
{
    if (request.height <= 0 || request.width <= 0) throw ValidationError("grid: dimensions must be positive");
    const Antenna tx = resolve_antenna(doc, request.tx, io::AntennaRole::Tx);
    if (!doc.scene.bounds().contains(tx.position)) throw ValidationError("transmitter lies outside the scene bounds");
    const double z = doc.map_height.value_or(tx.position.z());
    const MapGrid grid = map_grid_over(doc.scene, request.height, request.width, z);
    Antenna rx;
    if (const auto* r = first_with_role(doc, io::AntennaRole::Rx)) rx = r->antenna;
    const double f = request.frequency_hz.value_or(doc.grid[0]);
    if (!(f > 0.0)) throw ValidationError("frequency must be positive");
    return render_radio_map(doc.scene, bvh, tx, grid, f, doc.los, rx);
}

RcsSweep compute_rcs(const io::SceneDocument& doc, const Bvh& bvh, double range, const FrequencyGrid& grid, double step_deg)
{
    if (!(range > 0.0)) throw ValidationError("range must be positive");
    if (!(step_deg > 0.0) || step_deg > 360.0) throw ValidationError("step must be in (0, 360] degrees");
    RcsConfig config;
    config.range = range;
    config.grid = grid;
    if (const auto* t = first_with_role(doc, io::AntennaRole::Tx)) config.radar = t->antenna;
    const auto steps = static_cast<std::size_t>(std::ceil(360.0 / step_deg - 1e-9));
    for (std::size_t k = 0; k < steps; ++k) config.angles_deg.push_back(static_cast<double>(k) * step_deg);
    return render_rcs_sweep(doc.scene, bvh, config);
}

Json rcs_to_json(const RcsSweep& sweep, double range)
{
    Json rows = Json::array();
    for (std::size_t a = 0; a < sweep.angles_deg.size(); ++a) {
        Json row = Json::array();
        for (std::size_t f = 0; f < sweep.grid.size(); ++f) row.push_back(sweep.at(a, f));
        rows.push_back(std::move(row));
    }
    return {{"range_m", range}, {"angles_deg", sweep.angles_deg}, {"frequencies_hz", sweep.grid.samples()}, {"rssi_db", std::move(rows)}};
}

Json attribute_map_to_json(const AttributeMaps& maps, const std::string& kind, double fov_step_deg)
{
    const std::vector<double>* src = nullptr;
    if (kind == "gamma_mag") src = &maps.gamma_mag;
    else if (kind == "gamma_phase") src = &maps.gamma_phase;
    else if (kind == "roughness") src = &maps.roughness;
    else throw ValidationError("kind: expected gamma_mag, gamma_phase or roughness, got '" + kind + "'");
    Json rows = Json::array();
    for (int r = 0; r < maps.height; ++r) {
        Json row = Json::array();
        for (int c = 0; c < maps.width; ++c) {
            const double v = (*src)[static_cast<std::size_t>(r) * maps.width + c];
            row.push_back(std::isnan(v) ? Json(nullptr) : Json(v));
        }
        rows.push_back(std::move(row));
    }
    return {{"kind", kind}, {"height", maps.height}, {"width", maps.width}, {"fov_step_deg", fov_step_deg}, {"values", std::move(rows)}};
}

namespace {

Response error(int status, const std::string& message) { return {status, Json{{"error", message}}.dump()}; }

Response ok(const Json& j) { return {200, j.dump()}; }

// Runs a handler and maps library errors onto status codes.
template <class Fn>
Response guarded(Fn&& fn)
{
    try {
        return fn();
    } catch (const ValidationError& e) {
        return error(422, e.what());
    } catch (const DegenerateGeometryError& e) {
        return error(422, e.what());
    } catch (const PreconditionError& e) {
        return error(422, e.what());
    } catch (const Json::exception& e) {
        return error(422, std::string("malformed JSON: ") + e.what());
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

const std::string* param(const Query& q, const std::string& key)
{
    const auto it = q.find(key);
    return it == q.end() ? nullptr : &it->second;
}

} // namespace

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const
{
    std::shared_lock lock(registry_);
    const auto it = scenes_.find(id);
    return it == scenes_.end() ? nullptr : it->second;
}

Response Service::load_scene(const std::string& body)
{
    return guarded([&] {
        auto entry = std::make_shared<Entry>();
        entry->doc = io::parse_scene(body);
        entry->bvh = Bvh::build(entry->doc.scene);
        std::unique_lock lock(registry_);
        auto& slot = scenes_[entry->doc.id];
        if (slot) {
            std::unique_lock edit(slot->mutex);
            entry->revision = slot->revision + 1;
        }
        slot = entry;
        return ok({{"id", entry->doc.id}, {"revision", entry->revision}});
    });
}

Response Service::scene_summary(const std::string& id) const
{
    const auto entry = find(id);
    if (!entry) return error(404, "unknown scene '" + id + "'");
    std::shared_lock lock(entry->mutex);
    const auto& doc = entry->doc;
    Json ants = Json::array();
    for (const auto& a : doc.antennas) ants.push_back(io::named_antenna_to_json(a));
    const Aabb& b = doc.scene.bounds();
    return ok({{"id", doc.id},
               {"revision", entry->revision},
               {"gaussians", doc.scene.size()},
               {"frequencies_hz", doc.grid.samples()},
               {"bounds", {{"lo", {b.lo.x(), b.lo.y(), b.lo.z()}}, {"hi", {b.hi.x(), b.hi.y(), b.hi.z()}}}},
               {"antennas", std::move(ants)},
               {"max_grid_side", kMaxGridSide}});
}

Response Service::update_antenna(const std::string& id, const std::string& body)
{
    const auto entry = find(id);
    if (!entry) return error(404, "unknown scene '" + id + "'");
    return guarded([&] {
        Json j = Json::parse(body);
        if (!j.is_object()) throw ValidationError("antenna: expected an object");
        std::optional<std::uint64_t> expected;
        if (j.contains("revision")) {
            if (!j["revision"].is_number_unsigned()) throw ValidationError("revision: expected a non-negative integer");
            expected = j["revision"].get<std::uint64_t>();
            j.erase("revision");
        }
        if (!j.contains("id") || !j["id"].is_string()) throw ValidationError("id: missing required field");
        const std::string antenna_id = j["id"].get<std::string>();

        std::unique_lock lock(entry->mutex);
        if (expected && *expected != entry->revision)
            return error(409, "revision conflict: scene is at revision " + std::to_string(entry->revision));
        auto& list = entry->doc.antennas;
        auto it = std::find_if(list.begin(), list.end(), [&](const io::NamedAntenna& a) { return a.id == antenna_id; });
        Json merged = it == list.end() ? Json::object() : io::named_antenna_to_json(*it);
        for (auto& [key, value] : j.items()) merged[key] = value;
        io::NamedAntenna updated = io::named_antenna_from_json(merged, "antenna");
        if (it == list.end()) list.push_back(std::move(updated));
        else *it = std::move(updated);
        ++entry->revision;
        return ok({{"id", id}, {"antenna", antenna_id}, {"revision", entry->revision}});
    });
}

Response Service::map(const std::string& id, const Query& query) const
{
    const auto entry = find(id);
    if (!entry) return error(404, "unknown scene '" + id + "'");
    return guarded([&] {
        MapRequest req;
        const auto* tx = param(query, "tx");
        if (!tx) throw ValidationError("tx: missing required parameter");
        req.tx = *tx;
        if (const auto* g = param(query, "grid")) std::tie(req.height, req.width) = parse_grid(*g);
        if (req.height > kMaxGridSide || req.width > kMaxGridSide)
            throw ValidationError("grid: at most " + std::to_string(kMaxGridSide) + " cells per side");
        if (const auto* f = param(query, "freq")) req.frequency_hz = parse_number(*f, "freq");
        std::shared_lock lock(entry->mutex);
        const RadioMap m = compute_map(entry->doc, entry->bvh, req);
        Json j = io::map_to_json(m);
        j["revision"] = entry->revision;
        return ok(j);
    });
}

Response Service::rcs(const std::string& id, const Query& query) const
{
    const auto entry = find(id);
    if (!entry) return error(404, "unknown scene '" + id + "'");
    return guarded([&] {
        double range = 5.0, step = 1.0;
        if (const auto* r = param(query, "range")) range = parse_number(*r, "range");
        if (const auto* s = param(query, "step")) step = parse_number(*s, "step");
        std::shared_lock lock(entry->mutex);
        FrequencyGrid grid = FrequencyGrid::single(entry->doc.grid[0]);
        if (const auto* f = param(query, "freq")) grid = FrequencyGrid::single(parse_number(*f, "freq"));
        if (const auto* b = param(query, "band")) grid = parse_band(*b);
        if (!(step > 0.0) || static_cast<double>(grid.size()) * std::ceil(360.0 / step) > double(kMaxGridSide) * kMaxGridSide)
            throw ValidationError("rcs: sweep exceeds the per-request sample budget");
        Json j = rcs_to_json(compute_rcs(entry->doc, entry->bvh, range, grid, step), range);
        j["revision"] = entry->revision;
        return ok(j);
    });
}

Response Service::attributes(const std::string& id, const Query& query) const
{
    const auto entry = find(id);
    if (!entry) return error(404, "unknown scene '" + id + "'");
    return guarded([&] {
        const auto* kind = param(query, "kind");
        if (!kind) throw ValidationError("kind: missing required parameter");
        double step = 1.0;
        if (const auto* s = param(query, "step")) step = parse_number(*s, "step");
        if (!(step > 0.0) || std::ceil(360.0 / step) * std::ceil(180.0 / step) > double(kMaxGridSide) * kMaxGridSide)
            throw ValidationError("step: image exceeds the per-request cell budget");
        std::shared_lock lock(entry->mutex);
        const auto& doc = entry->doc;
        Antenna rx;
        if (const auto* r = param(query, "rx")) rx = resolve_antenna(doc, *r, io::AntennaRole::Rx);
        else if (const auto* a = first_with_role(doc, io::AntennaRole::Rx)) rx = a->antenna;
        else if (!doc.antennas.empty()) rx = doc.antennas.front().antenna;
        else throw ValidationError("rx: the scene has no antenna; pass rx=x,y,z");
        Json j = attribute_map_to_json(export_attribute_maps(doc.scene, entry->bvh, rx, step), *kind, step);
        j["revision"] = entry->revision;
        return ok(j);
    });
}

std::size_t Service::load_directory(const std::string& dir)
{
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::size_t loaded = 0;
    for (const auto& p : files) {
        const Response r = load_scene(io::read_file(p.string()));
        if (r.status != 200) throw ValidationError(p.string() + ": " + Json::parse(r.body).value("error", "invalid scene"));
        ++loaded;
    }
    return loaded;
}

void Service::install(httplib::Server& server)
{
    const auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    const auto query = [](const httplib::Request& req) {
        Query q;
        for (const auto& [k, v] : req.params) q[k] = v;
        return q;
    };
    server.Post("/scene", [this, reply](const httplib::Request& req, httplib::Response& res) { reply(res, load_scene(req.body)); });
    server.Get(R"(/scene/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, scene_summary(req.matches[1]));
    });
    server.Post(R"(/scene/([^/]+)/antenna)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, update_antenna(req.matches[1], req.body));
    });
    server.Get(R"(/scene/([^/]+)/map)", [this, reply, query](const httplib::Request& req, httplib::Response& res) {
        reply(res, map(req.matches[1], query(req)));
    });
    server.Get(R"(/scene/([^/]+)/rcs)", [this, reply, query](const httplib::Request& req, httplib::Response& res) {
        reply(res, rcs(req.matches[1], query(req)));
    });
    server.Get(R"(/scene/([^/]+)/attributes)", [this, reply, query](const httplib::Request& req, httplib::Response& res) {
        reply(res, attributes(req.matches[1], query(req)));
    });
}

} // namespace rfsplat::service
