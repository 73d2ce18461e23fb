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

#include "rfsplat/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace rfsplat::io {

namespace {

// Reads fields of one JSON object and rejects keys it was not asked about.
class Fields {
public:
    Fields(const Json& j, std::string where) : j_(j), where_(std::move(where))
    {
        if (!j_.is_object()) fail("", "expected an object");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        throw ValidationError(path(key) + ": " + what);
    }

    std::string path(const std::string& key) const
    {
        if (key.empty()) return where_.empty() ? "document" : where_;
        return where_.empty() ? key : where_ + "." + key;
    }

    bool has(const std::string& key)
    {
        seen_.push_back(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    const Json& get(const std::string& key)
    {
        if (!has(key)) fail(key, "missing required field");
        return j_.at(key);
    }

    double number(const std::string& key)
    {
        const Json& v = get(key);
        if (!v.is_number()) fail(key, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(key, "expected a finite number");
        return x;
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::string string(const std::string& key)
    {
        const Json& v = get(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    bool boolean_or(const std::string& key, bool fallback)
    {
        if (!has(key)) return fallback;
        const Json& v = j_.at(key);
        if (!v.is_boolean()) fail(key, "expected true or false");
        return v.get<bool>();
    }

    std::vector<double> numbers(const std::string& key, std::size_t size)
    {
        const Json& v = get(key);
        if (!v.is_array() || (size > 0 && v.size() != size)) fail(key, "expected an array of " + std::to_string(size) + " numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) fail(key, "expected numbers");
            out.push_back(x.get<double>());
            if (!std::isfinite(out.back())) fail(key, "expected finite numbers");
        }
        return out;
    }

    Vec3 vec3(const std::string& key)
    {
        const auto v = numbers(key, 3);
        return {v[0], v[1], v[2]};
    }

    void finish() const
    {
        for (const auto& [key, value] : j_.items())
            if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) throw ValidationError(path(key) + ": unknown field '" + key + "'");
    }

private:
    const Json& j_;
    std::string where_;
    std::vector<std::string> seen_;
};

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

void rethrow_as(const std::string& where, const std::exception& e) { throw ValidationError(where + ": " + e.what()); }

std::string law_name(LosDistanceLaw law) { return law == LosDistanceLaw::Constant ? "constant" : "inverse_distance"; }

LosDistanceLaw law_from(const std::string& s, const Fields& f)
{
    if (s == "constant") return LosDistanceLaw::Constant;
    if (s == "inverse_distance") return LosDistanceLaw::InverseDistance;
    f.fail("law", "expected 'constant' or 'inverse_distance'");
}

FrequencyGrid grid_from(Fields& f)
{
    const auto v = f.numbers("frequencies_hz", 0);
    try {
        return FrequencyGrid(v);
    } catch (const ValidationError& e) {
        f.fail("frequencies_hz", e.what());
    }
}

} // namespace

Json antenna_to_json(const Antenna& a)
{
    return Json{{"position", vec_json(a.position)},
                {"power_watts", a.power_watts},
                {"gain", a.gain},
                {"pattern", to_string(a.pattern)},
                {"boresight", vec_json(a.boresight)},
                {"pattern_exponent", a.pattern_exponent},
                {"waveform", Json::array({a.waveform.real(), a.waveform.imag()})}};
}

namespace {

Antenna antenna_fields(Fields& f, bool require_position)
{
    Antenna a;
    if (require_position || f.has("position")) a.position = f.vec3("position");
    a.power_watts = f.number_or("power_watts", a.power_watts);
    a.gain = f.number_or("gain", a.gain);
    if (f.has("pattern")) {
        try {
            a.pattern = pattern_from_string(f.string("pattern"));
        } catch (const ValidationError& e) {
            f.fail("pattern", e.what());
        }
    }
    if (f.has("boresight")) a.boresight = f.vec3("boresight");
    a.pattern_exponent = f.number_or("pattern_exponent", a.pattern_exponent);
    if (f.has("waveform")) {
        const auto w = f.numbers("waveform", 2);
        a.waveform = {w[0], w[1]};
    }
    return a;
}

} // namespace

Antenna antenna_from_json(const Json& j, const std::string& where, bool require_position)
{
    Fields f(j, where);
    Antenna a = antenna_fields(f, require_position);
    f.finish();
    try {
        a.validate();
    } catch (const ValidationError& e) {
        rethrow_as(where, e);
    }
    return a;
}

NamedAntenna named_antenna_from_json(const Json& j, const std::string& where)
{
    Fields f(j, where);
    NamedAntenna na;
    na.id = f.string("id");
    if (na.id.empty()) f.fail("id", "must not be empty");
    const std::string role = f.string("role");
    if (role == "tx") na.role = AntennaRole::Tx;
    else if (role == "rx") na.role = AntennaRole::Rx;
    else f.fail("role", "expected 'tx' or 'rx'");
    na.antenna = antenna_fields(f, true);
    f.finish();
    try {
        na.antenna.validate();
    } catch (const ValidationError& e) {
        rethrow_as(where, e);
    }
    return na;
}

Json named_antenna_to_json(const NamedAntenna& a)
{
    Json j = antenna_to_json(a.antenna);
    j["id"] = a.id;
    j["role"] = a.role == AntennaRole::Tx ? "tx" : "rx";
    return j;
}

const NamedAntenna* SceneDocument::find_antenna(const std::string& id) const
{
    for (const auto& a : antennas)
        if (a.id == id) return &a;
    return nullptr;
}

SceneDocument scene_from_json(const Json& j)
{
    Fields root(j, "");
    SceneDocument doc;
    const double version = root.number("version");
    if (version != kFormatVersion) root.fail("version", "unsupported version");
    doc.id = root.string("id");
    if (doc.id.empty()) root.fail("id", "must not be empty");
    doc.units = root.has("units") ? root.string("units") : "m";
    if (doc.units != "m") root.fail("units", "only meters ('m') are supported");
    doc.grid = grid_from(root);

    std::vector<RFGaussian> gs;
    const Json& arr = root.get("gaussians");
    if (!arr.is_array()) root.fail("gaussians", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Fields f(arr[i], "gaussians[" + std::to_string(i) + "]");
        RFGaussian g;
        g.mu = f.vec3("mu");
        g.scale = f.vec3("scale");
        const auto q = f.numbers("rotation", 4);
        g.rotation = Quat(q[0], q[1], q[2], q[3]);
        g.normal = f.vec3("normal");
        g.alpha = f.number("alpha");
        g.roughness = f.number("roughness");
        g.gamma_mag = f.number("gamma_mag");
        g.gamma_phase = f.number("gamma_phase");
        f.finish();
        gs.push_back(g);
    }
    if (root.has("bounds")) {
        Fields b(root.get("bounds"), "bounds");
        Aabb box{b.vec3("lo"), b.vec3("hi")};
        b.finish();
        doc.scene = Scene(std::move(gs), box);
    } else {
        doc.scene = Scene::with_auto_bounds(std::move(gs));
    }
    const ValidationReport report = validate_scene(doc.scene);
    if (!report.empty()) {
        const auto& issue = report.front();
        const std::string where = issue.index ? "gaussians[" + std::to_string(*issue.index) + "]." + issue.field : issue.field;
        throw ValidationError(where + ": " + issue.message);
    }

    if (root.has("antennas")) {
        const Json& list = root.get("antennas");
        if (!list.is_array()) root.fail("antennas", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = "antennas[" + std::to_string(i) + "]";
            NamedAntenna na = named_antenna_from_json(list[i], where);
            if (doc.find_antenna(na.id)) throw ValidationError(where + ".id: duplicate antenna id '" + na.id + "'");
            doc.antennas.push_back(na);
        }
    }
    if (root.has("los")) {
        Fields f(root.get("los"), "los");
        LosNlosParams p;
        p.v_vis = f.number_or("v_vis", p.v_vis);
        p.s_tx_strength = f.number_or("s_tx_strength", p.s_tx_strength);
        p.c_dis = f.number_or("c_dis", p.c_dis);
        if (f.has("law")) p.law = law_from(f.string("law"), f);
        p.geometric_visibility = f.boolean_or("geometric_visibility", p.geometric_visibility);
        f.finish();
        try {
            p.validate();
        } catch (const ValidationError& e) {
            rethrow_as("los", e);
        }
        doc.los = p;
    }
    if (root.has("map_height")) doc.map_height = root.number("map_height");
    root.finish();
    return doc;
}

Json scene_to_json(const SceneDocument& doc)
{
    Json j;
    j["version"] = kFormatVersion;
    j["id"] = doc.id;
    j["units"] = doc.units;
    j["frequencies_hz"] = doc.grid.samples();
    j["bounds"] = {{"lo", vec_json(doc.scene.bounds().lo)}, {"hi", vec_json(doc.scene.bounds().hi)}};
    Json gs = Json::array();
    for (const auto& g : doc.scene.gaussians()) {
        gs.push_back({{"mu", vec_json(g.mu)},
                      {"scale", vec_json(g.scale)},
                      {"rotation", Json::array({g.rotation.w(), g.rotation.x(), g.rotation.y(), g.rotation.z()})},
                      {"normal", vec_json(g.normal)},
                      {"alpha", g.alpha},
                      {"roughness", g.roughness},
                      {"gamma_mag", g.gamma_mag},
                      {"gamma_phase", g.gamma_phase}});
    }
    j["gaussians"] = std::move(gs);
    Json ants = Json::array();
    for (const auto& a : doc.antennas) ants.push_back(named_antenna_to_json(a));
    j["antennas"] = std::move(ants);
    if (doc.los)
        j["los"] = {{"v_vis", doc.los->v_vis},
                    {"s_tx_strength", doc.los->s_tx_strength},
                    {"c_dis", doc.los->c_dis},
                    {"law", law_name(doc.los->law)},
                    {"geometric_visibility", doc.los->geometric_visibility}};
    if (doc.map_height) j["map_height"] = *doc.map_height;
    return j;
}

namespace {

Json parse_json(const std::string& text, const std::string& what)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError(what + " is not valid JSON: " + e.what());
    }
}

} // namespace

SceneDocument parse_scene(const std::string& text) { return scene_from_json(parse_json(text, "scene file")); }

std::string serialize_scene(const SceneDocument& doc) { return scene_to_json(doc).dump(2) + "\n"; }

SceneDocument load_scene(const std::string& path) { return parse_scene(read_file(path)); }

void save_scene(const std::string& path, const SceneDocument& doc) { write_file(path, serialize_scene(doc)); }

ObservationSet dataset_from_json(const Json& j)
{
    Fields root(j, "");
    ObservationSet set;
    const double version = root.number("version");
    if (version != kFormatVersion) root.fail("version", "unsupported version");
    set.scene_id = root.string("scene_id");
    set.units = root.has("units") ? root.string("units") : "dB";
    set.grid = grid_from(root);
    const Json& txs = root.get("transmitters");
    if (!txs.is_array()) root.fail("transmitters", "expected an array");
    for (std::size_t i = 0; i < txs.size(); ++i) {
        const std::string where = "transmitters[" + std::to_string(i) + "]";
        Fields f(txs[i], where);
        const std::string id = f.string("id");
        if (std::find(set.tx_ids.begin(), set.tx_ids.end(), id) != set.tx_ids.end()) f.fail("id", "duplicate transmitter id");
        Antenna a = antenna_fields(f, true);
        f.finish();
        set.tx_ids.push_back(id);
        set.transmitters.push_back(a);
    }
    const Json& recs = root.get("records");
    if (!recs.is_array()) root.fail("records", "expected an array");
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const std::string where = "records[" + std::to_string(i) + "]";
        Fields f(recs[i], where);
        Observation o;
        const std::string tx = f.string("tx");
        const auto it = std::find(set.tx_ids.begin(), set.tx_ids.end(), tx);
        if (it == set.tx_ids.end()) f.fail("tx", "unknown transmitter '" + tx + "'");
        o.tx = static_cast<std::size_t>(it - set.tx_ids.begin());
        o.rx = antenna_from_json(f.get("rx"), where + ".rx");
        const double fi = f.number("freq_index");
        if (fi < 0 || fi != std::floor(fi) || fi >= static_cast<double>(set.grid.size())) f.fail("freq_index", "out of range");
        o.frequency_index = static_cast<std::size_t>(fi);
        if (f.has("rssi_db")) o.rssi_db = f.number("rssi_db");
        if (f.has("sample")) {
            const auto s = f.numbers("sample", 2);
            o.sample = Complex(s[0], s[1]);
        }
        try {
            o.split = split_from_string(f.has("split") ? f.string("split") : "train");
        } catch (const ValidationError& e) {
            f.fail("split", e.what());
        }
        f.finish();
        set.records.push_back(std::move(o));
    }
    root.finish();
    set.validate();
    return set;
}

Json dataset_to_json(const ObservationSet& set)
{
    Json j;
    j["version"] = kFormatVersion;
    j["scene_id"] = set.scene_id;
    j["units"] = set.units;
    j["frequencies_hz"] = set.grid.samples();
    Json txs = Json::array();
    for (std::size_t i = 0; i < set.transmitters.size(); ++i) {
        Json o = antenna_to_json(set.transmitters[i]);
        o["id"] = set.tx_ids[i];
        txs.push_back(std::move(o));
    }
    j["transmitters"] = std::move(txs);
    Json recs = Json::array();
    for (const auto& r : set.records) {
        Json o{{"tx", set.tx_ids.at(r.tx)}, {"rx", antenna_to_json(r.rx)}, {"freq_index", r.frequency_index}, {"split", to_string(r.split)}};
        if (r.rssi_db) o["rssi_db"] = *r.rssi_db;
        if (r.sample) o["sample"] = Json::array({r.sample->real(), r.sample->imag()});
        recs.push_back(std::move(o));
    }
    j["records"] = std::move(recs);
    return j;
}

ObservationSet load_dataset(const std::string& path) { return dataset_from_json(parse_json(read_file(path), "dataset file")); }

void save_dataset(const std::string& path, const ObservationSet& set) { write_file(path, dataset_to_json(set).dump(2) + "\n"); }

Json gradient_check_to_json(const GradientCheck& check)
{
    Json rows = Json::array();
    for (const auto& r : check.rows)
        rows.push_back({{"parameter", r.parameter}, {"analytic", r.analytic}, {"numeric", r.numeric}, {"error", r.error}, {"passed", r.passed}});
    return {{"passed", check.passed}, {"max_error", check.max_error}, {"rows", std::move(rows)}};
}

Json fit_report_to_json(const FitReport& report)
{
    Json attrs = Json::array();
    for (std::size_t i = 0; i < report.bank.gaussians(); ++i)
        attrs.push_back({{"alpha", report.bank.alpha(i)},
                         {"roughness", report.bank.roughness(i)},
                         {"gamma_mag", report.bank.gamma_mag(i)},
                         {"gamma_phase", report.bank.gamma_phase(i)}});
    Json j{{"converged", report.converged},
           {"status", report.status},
           {"iterations", report.iterations},
           {"initial_loss", report.initial_loss},
           {"final_loss", report.final_loss},
           {"loss_trace", report.loss_trace},
           {"attributes", std::move(attrs)}};
    if (report.gradient_check) j["gradient_check"] = gradient_check_to_json(*report.gradient_check);
    return j;
}

Json wideband_report_to_json(const WidebandReport& report, const AttributeBank& base, const FrequencyGrid& grid)
{
    Json per_f = Json::array();
    for (std::size_t f = 0; f < grid.size(); ++f) {
        const FamView v = fam_apply(report.net, base, grid[f]);
        per_f.push_back({{"frequency_hz", grid[f]},
                         {"gamma_mag", v.attributes.gamma_mag},
                         {"roughness", v.attributes.roughness},
                         {"gamma_phase", v.attributes.gamma_phase}});
    }
    return {{"converged", report.converged},
            {"iterations", report.iterations},
            {"initial_loss", report.initial_loss},
            {"final_loss", report.final_loss},
            {"loss_trace", report.loss_trace},
            {"output_norm", report.net.output_norm()},
            {"per_frequency", std::move(per_f)}};
}

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string rcs_csv(const RcsSweep& sweep)
{
    std::ostringstream out;
    const bool band = sweep.grid.size() > 1;
    out << (band ? "angle_deg,freq_hz,rssi_db\n" : "angle_deg,rssi_db\n");
    for (std::size_t a = 0; a < sweep.angles_deg.size(); ++a)
        for (std::size_t f = 0; f < sweep.grid.size(); ++f) {
            out << format_double(sweep.angles_deg[a]) << ',';
            if (band) out << format_double(sweep.grid[f]) << ',';
            out << format_double(sweep.at(a, f)) << '\n';
        }
    return out.str();
}

std::string map_csv(const RadioMap& map)
{
    std::ostringstream out;
    out << "row,col,x_m,y_m,z_m,rssi_db\n";
    for (int r = 0; r < map.grid.height; ++r)
        for (int c = 0; c < map.grid.width; ++c) {
            const Vec3 p = map.grid.cell_position(r, c);
            out << r << ',' << c << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(p.z()) << ','
                << format_double(map.rssi_db[static_cast<std::size_t>(r) * map.grid.width + c]) << '\n';
        }
    return out.str();
}

std::string map_cells_json(const RadioMap& map)
{
    Json rows = Json::array();
    for (int r = 0; r < map.grid.height; ++r) {
        Json row = Json::array();
        for (int c = 0; c < map.grid.width; ++c) row.push_back(map.rssi_db[static_cast<std::size_t>(r) * map.grid.width + c]);
        rows.push_back(std::move(row));
    }
    return rows.dump();
}

Json map_to_json(const RadioMap& map)
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (double v : map.rssi_db) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    const double mean = map.rssi_db.empty() ? 0.0 : sum / static_cast<double>(map.rssi_db.size());
    return {{"cells_db", Json::parse(map_cells_json(map))},
            {"height", map.grid.height},
            {"width", map.grid.width},
            {"frequency_hz", map.frequency_hz},
            {"bounds", {{"x", {map.grid.x0, map.grid.x1}}, {"y", {map.grid.y0, map.grid.y1}}, {"z", map.grid.z}}},
            {"stats", {{"min_db", lo}, {"max_db", hi}, {"mean_db", mean}}}};
}

void write_grid(const std::string& stem, int height, int width, int channels, std::span<const double> data, const Json& extra)
{
    static_assert(std::endian::native == std::endian::little, "grid files are written in host order");
    if (data.size() != static_cast<std::size_t>(height) * width * channels) throw ValidationError("write_grid: data size does not match the shape");
    std::string bytes(data.size() * sizeof(double), '\0');
    std::memcpy(bytes.data(), data.data(), bytes.size());
    write_file(stem + ".bin", bytes);
    Json header = extra;
    header["height"] = height;
    header["width"] = width;
    header["channels"] = channels;
    header["dtype"] = "float64-le";
    header["order"] = "row-major";
    write_file(stem + ".json", header.dump(2) + "\n");
}

Grid read_grid(const std::string& stem)
{
    Grid g;
    g.header = parse_json(read_file(stem + ".json"), "grid header");
    g.height = g.header.at("height").get<int>();
    g.width = g.header.at("width").get<int>();
    g.channels = g.header.at("channels").get<int>();
    const std::string bytes = read_file(stem + ".bin");
    const std::size_t n = static_cast<std::size_t>(g.height) * g.width * g.channels;
    if (bytes.size() != n * sizeof(double)) throw ValidationError("grid payload size does not match its header");
    g.data.resize(n);
    std::memcpy(g.data.data(), bytes.data(), bytes.size());
    return g;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ValidationError("failed writing '" + path + "'");
}

} // namespace rfsplat::io
