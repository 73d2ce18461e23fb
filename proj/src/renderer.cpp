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

#include "rfsplat/renderer.hpp"

#include "rfsplat/bsdf.hpp"
#include "rfsplat/geometry.hpp"

#include <algorithm>
#include <map>

namespace rfsplat {

void LosNlosParams::validate() const
{
    if (!(v_vis >= 0.0 && v_vis <= 1.0)) throw ValidationError("LoS v_vis must lie in [0, 1]");
    if (!(s_tx_strength >= 0.0) || !std::isfinite(s_tx_strength)) throw ValidationError("LoS s_tx_strength must be >= 0");
    if (!(c_dis >= 0.0) || !std::isfinite(c_dis)) throw ValidationError("LoS c_dis must be >= 0");
}

double LosNlosParams::coefficient(double d_los) const
{
    const double c = law == LosDistanceLaw::Constant ? c_dis : c_dis / d_los;
    return s_tx_strength * c;
}

Complex mix_los_nlos(const LosNlosParams& params, double d_los, double wavelength, Complex s_nlos)
{
    if (!(d_los > 0.0)) throw DegenerateGeometryError("mix_los_nlos: LoS distance must be positive");
    const double phase = 2.0 * kPi * d_los / wavelength;
    return params.v_vis * params.coefficient(d_los) * std::polar(1.0, phase) + s_nlos;
}

Complex blend_direction(const Scene& scene, const Bvh& bvh, const Vec3& rx_position, const Vec3& omega,
                        std::span<const Complex> s_out, double wavelength, const RenderOptions& options)
{
    if (s_out.size() != scene.size()) throw ValidationError("blend_direction: one s_out value per Gaussian is required");
    const RayHitChain chain = ray_chain(bvh, scene, rx_position, omega.normalized());
    Complex sum = 0.0;
    double transmittance = 1.0;
    Complex preceding = 1.0; // literal mode: attenuation over m < l
    for (const auto& h : chain) {
        Complex term = s_out[h.index] * h.alpha * transmittance;
        if (!options.disable_path_loss) {
            if (options.literal_attenuation_index) term *= preceding;
            else term *= spreading(h.t, wavelength);
        }
        sum += term;
        transmittance *= 1.0 - h.alpha;
        preceding *= spreading(h.t, wavelength);
    }
    return sum;
}

Complex integrate_receiver(const DirectionalRender& render, const Antenna& rx, std::size_t frequency_index)
{
    Complex s = 0.0;
    for (const auto& e : render.entries) {
        if (frequency_index >= e.values.size()) throw PreconditionError("integrate_receiver: frequency index out of range");
        s += rx.pattern_gain(e.direction) * e.values[frequency_index];
    }
    return s;
}

TxIllumination build_tx_illumination(const Scene& scene, const Bvh& bvh, const Antenna& tx)
{
    const std::size_t n = scene.size();
    TxIllumination out;
    out.entries.resize(n);
    std::vector<RayHitChain> chains(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const RFGaussian& g = scene[static_cast<std::size_t>(i)];
        auto& e = out.entries[i];
        const Vec3 offset = g.mu - tx.position;
        e.distance = offset.norm();
        if (e.distance < 1e-6) continue; // reported when a link uses it
        e.direction = offset / e.distance;
        const double cos_i = incidence_cosine(e.direction, g.normal);
        const double gain = tx.power_gain(e.direction);
        if (cos_i <= 0.0 || gain <= 0.0) continue;
        const double area = projected_cross_section(g, e.direction);
        e.amplitude = std::sqrt(tx.power_watts * gain * area / (4.0 * kPi * e.distance * e.distance)) * cos_i;
        chains[i] = visibility_chain(bvh, scene, tx.position, g.mu, static_cast<std::uint32_t>(i)).chain;
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto& e = out.entries[i];
        e.begin = static_cast<std::uint32_t>(out.occluders.size());
        for (const auto& h : chains[i]) out.occluders.push_back({h.index, h.density, h.t});
        e.end = static_cast<std::uint32_t>(out.occluders.size());
    }
    return out;
}

LinkPlan build_link_plan(const Scene& scene, const Bvh& bvh, const TxIllumination& illumination, const Antenna& tx,
                         const Antenna& rx, const std::optional<LosNlosParams>& los, const RenderOptions& options)
{
    if (illumination.entries.size() != scene.size()) throw PreconditionError("build_link_plan: illumination does not match the scene");
    LinkPlan plan;
    plan.waveform = tx.waveform;
    plan.receive_phase = !options.disable_path_loss;
    plan.literal_attenuation = options.literal_attenuation_index;
    std::optional<FovGrid> fov;
    if (!options.exact_direction) fov = make_fov_grid(rx, options.fov_step_deg);

    for (std::size_t l = 0; l < scene.size(); ++l) {
        const auto& e = illumination.entries[l];
        if (e.distance < 1e-6) throw DegenerateGeometryError("transmitter coincides with Gaussian " + std::to_string(l));
        if (e.amplitude == 0.0) continue;
        const RFGaussian& g = scene[l];
        const Vec3 offset = g.mu - rx.position;
        const double r = offset.norm();
        if (r < 1e-6) throw DegenerateGeometryError("receiver coincides with Gaussian " + std::to_string(l));
        Vec3 look = offset / r;
        std::int64_t cell = -1;
        if (fov) {
            const auto c = fov->cell_of(look);
            if (!c) continue;
            cell = static_cast<std::int64_t>(*c);
            look = fov->cell(*c).direction;
        }
        const Complex pattern = rx.pattern_gain(look);
        if (pattern == Complex(0.0)) continue;
        const Vec3 outgoing = -look;
        const double elevation = outgoing_elevation_factor(outgoing, g.normal);
        if (elevation == 0.0) continue;

        PathTerm t;
        t.gaussian = static_cast<std::uint32_t>(l);
        t.geometric = e.amplitude * elevation;
        if (!options.disable_path_loss && !options.literal_attenuation_index) t.geometric /= std::sqrt(4.0 * kPi) * r;
        t.rx_pattern = pattern;
        t.lobe_base = lobe_base(outgoing, e.direction, g.normal);
        t.own_density = 1.0; // the receive ray passes through the center
        t.tx_distance = e.distance;
        t.rx_distance = r;
        t.cell = cell;
        t.tx_begin = static_cast<std::uint32_t>(plan.occluders.size());
        plan.occluders.insert(plan.occluders.end(), illumination.occluders.begin() + e.begin, illumination.occluders.begin() + e.end);
        t.tx_end = static_cast<std::uint32_t>(plan.occluders.size());
        const VisibilityResult back = visibility_chain(bvh, scene, rx.position, g.mu, t.gaussian);
        t.rx_begin = t.tx_end;
        for (const auto& h : back.chain) plan.occluders.push_back({h.index, h.density, h.t});
        t.rx_end = static_cast<std::uint32_t>(plan.occluders.size());
        plan.terms.push_back(t);
    }

    if (los) {
        los->validate();
        const double d = (rx.position - tx.position).norm();
        if (d < 1e-6) throw DegenerateGeometryError("LoS: receiver coincides with transmitter");
        plan.has_los = true;
        plan.los_distance = d;
        plan.los_coefficient = los->coefficient(d);
        plan.los_geometric = los->geometric_visibility;
        plan.los_fixed_visibility = los->v_vis;
        plan.los_begin = static_cast<std::uint32_t>(plan.occluders.size());
        if (plan.los_geometric)
            for (const auto& h : visibility_chain(bvh, scene, tx.position, rx.position).chain)
                plan.occluders.push_back({h.index, h.density, h.t});
        plan.los_end = static_cast<std::uint32_t>(plan.occluders.size());
    }
    return plan;
}

AttributeArrays<double> scene_attributes(const Scene& scene)
{
    AttributeArrays<double> a;
    for (const auto& g : scene.gaussians()) {
        a.alpha.push_back(g.alpha);
        a.roughness.push_back(g.roughness);
        a.gamma_mag.push_back(g.gamma_mag);
        a.gamma_phase.push_back(g.gamma_phase);
    }
    return a;
}

ComplexSignal render_received_signal(const Scene& scene, const Bvh& bvh, const Antenna& tx, const Antenna& rx,
                                     const FrequencyGrid& grid, const std::optional<LosNlosParams>& los, const RenderOptions& options)
{
    tx.validate();
    rx.validate();
    if (grid.empty()) throw PreconditionError("render_received_signal: empty frequency grid");
    const TxIllumination illumination = build_tx_illumination(scene, bvh, tx);
    const LinkPlan plan = build_link_plan(scene, bvh, illumination, tx, rx, los, options);
    const AttributeArrays<double> attr = scene_attributes(scene);
    std::vector<Complex> values(grid.size());
    for (std::size_t f = 0; f < grid.size(); ++f) values[f] = evaluate_link(plan, attr, grid.wavelength(f));
    return ComplexSignal(grid, std::move(values));
}

DirectionalRender render_directional(const Scene& scene, const Bvh& bvh, const Antenna& tx, const Antenna& rx,
                                     const FrequencyGrid& grid, const RenderOptions& options)
{
    const TxIllumination illumination = build_tx_illumination(scene, bvh, tx);
    LinkPlan plan = build_link_plan(scene, bvh, illumination, tx, rx, std::nullopt, options);
    const AttributeArrays<double> attr = scene_attributes(scene);
    std::optional<FovGrid> fov;
    if (!options.exact_direction) fov = make_fov_grid(rx, options.fov_step_deg);

    DirectionalRender out;
    std::map<std::int64_t, std::size_t> slot;
    for (auto& t : plan.terms) {
        t.rx_pattern = 1.0;
        std::size_t k = out.entries.size();
        if (fov) {
            const auto [it, inserted] = slot.emplace(t.cell, k);
            k = it->second;
            if (inserted) out.entries.push_back({fov->cell(static_cast<std::size_t>(t.cell)).direction, t.cell, 0, std::vector<Complex>(grid.size())});
        } else {
            out.entries.push_back({(scene[t.gaussian].mu - rx.position).normalized(), -1, 0, std::vector<Complex>(grid.size())});
        }
        auto& e = out.entries[k];
        ++e.gaussians;
        for (std::size_t f = 0; f < grid.size(); ++f) e.values[f] += evaluate_term(plan, t, attr, grid.wavelength(f));
    }
    if (fov) std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) { return a.cell < b.cell; });
    return out;
}

Antenna radar_at(const Antenna& radar, double range, double angle_deg)
{
    const double phi = std::fmod(angle_deg, 360.0) * kPi / 180.0;
    Antenna a = radar;
    a.position = Vec3(range * std::cos(phi), range * std::sin(phi), 0.0);
    a.boresight = -a.position.normalized();
    return a;
}

RcsSweep render_rcs_sweep(const Scene& scene, const Bvh& bvh, const RcsConfig& config, const RenderOptions& options)
{
    if (!(config.range > 0.0) || !std::isfinite(config.range)) throw ValidationError("RCS range must be positive");
    if (config.grid.empty()) throw PreconditionError("RCS sweep: empty frequency grid");
    RcsSweep out;
    out.angles_deg = config.angles_deg;
    out.grid = config.grid;
    out.rssi_db.assign(config.angles_deg.size() * config.grid.size(), kDbFloor);
    const auto n = static_cast<std::int64_t>(config.angles_deg.size());
    const AttributeArrays<double> attr = scene_attributes(scene);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const Antenna radar = radar_at(config.radar, config.range, config.angles_deg[i]);
        const TxIllumination illumination = build_tx_illumination(scene, bvh, radar);
        const LinkPlan plan = build_link_plan(scene, bvh, illumination, radar, radar, std::nullopt, options);
        for (std::size_t f = 0; f < config.grid.size(); ++f)
            out.rssi_db[i * config.grid.size() + f] = power_db(evaluate_link(plan, attr, config.grid.wavelength(f)));
    }
    return out;
}

Vec3 MapGrid::cell_position(int row, int col) const
{
    const double x = x0 + (col + 0.5) * (x1 - x0) / width;
    const double y = y0 + (row + 0.5) * (y1 - y0) / height;
    return {x, y, z};
}

MapGrid map_grid_over(const Scene& scene, int height, int width, double z)
{
    const Aabb& b = scene.bounds();
    return MapGrid{height, width, z, b.lo.x(), b.hi.x(), b.lo.y(), b.hi.y()};
}

RadioMap render_radio_map(const Scene& scene, const Bvh& bvh, const Antenna& tx, const MapGrid& grid, double frequency_hz,
                          const std::optional<LosNlosParams>& los, const Antenna& rx_template, const RenderOptions& options)
{
    tx.validate();
    if (grid.height <= 0 || grid.width <= 0) throw ValidationError("radio map grid must be at least 1 x 1");
    if (!(frequency_hz > 0.0)) throw ValidationError("radio map frequency must be positive");
    for (int r = 0; r < grid.height; ++r)
        for (int c = 0; c < grid.width; ++c) {
            const Vec3 p = grid.cell_position(r, c);
            if (!scene.bounds().contains(p)) throw ValidationError("radio map cell lies outside the scene bounds");
            if ((p - tx.position).norm() < 1e-6) throw DegenerateGeometryError("radio map cell coincides with the transmitter");
        }
    RadioMap out;
    out.grid = grid;
    out.frequency_hz = frequency_hz;
    out.rssi_db.assign(grid.cells(), kDbFloor);
    const TxIllumination illumination = build_tx_illumination(scene, bvh, tx);
    const AttributeArrays<double> attr = scene_attributes(scene);
    const double lambda = wavelength_of(frequency_hz);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(grid.cells()); ++i) {
        Antenna rx = rx_template;
        rx.position = grid.cell_position(static_cast<int>(i / grid.width), static_cast<int>(i % grid.width));
        const LinkPlan plan = build_link_plan(scene, bvh, illumination, tx, rx, los, options);
        out.rssi_db[i] = power_db(evaluate_link(plan, attr, lambda));
    }
    return out;
}

AttributeMaps export_attribute_maps(const Scene& scene, const Bvh& bvh, const Antenna& rx, double fov_step_deg)
{
    const FovGrid fov = make_fov_grid(rx, fov_step_deg);
    AttributeMaps m;
    m.height = fov.elevation_cells();
    m.width = fov.azimuth_cells();
    const std::size_t n = fov.size();
    std::vector<double> mag(n, 0.0), rough(n, 0.0), weight(n, 0.0);
    std::vector<Complex> phasor(n, 0.0);
    for (std::size_t l = 0; l < scene.size(); ++l) {
        const RFGaussian& g = scene[l];
        const Vec3 offset = g.mu - rx.position;
        const double r = offset.norm();
        if (r < 1e-6) continue;
        const auto cell = fov.cell_of(offset / r);
        if (!cell) continue;
        const double t = visibility_chain(bvh, scene, rx.position, g.mu, static_cast<std::uint32_t>(l)).visibility;
        const double w = capped_alpha(g.alpha, 1.0) * t;
        if (!(w > 0.0)) continue;
        mag[*cell] += w * g.gamma_mag;
        rough[*cell] += w * g.roughness;
        phasor[*cell] += w * std::polar(1.0, g.gamma_phase);
        weight[*cell] += w;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.gamma_mag.assign(n, nan);
    m.gamma_phase.assign(n, nan);
    m.roughness.assign(n, nan);
    m.weight = weight;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weight[i] > 0.0)) continue;
        m.gamma_mag[i] = mag[i] / weight[i];
        m.roughness[i] = rough[i] / weight[i];
        m.gamma_phase[i] = std::arg(phasor[i]);
    }
    return m;
}

} // namespace rfsplat
