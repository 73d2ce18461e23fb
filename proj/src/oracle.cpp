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

#include "rfsplat/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <random>

namespace rfsplat::oracle {

std::vector<BruteHit> segment_hits(const Scene& scene, const Vec3& from, const Vec3& to, std::optional<std::uint32_t> exclude)
{
    const double length = (to - from).norm();
    if (!(length > 0.0)) throw DegenerateGeometryError("segment_hits: endpoints coincide");
    const Vec3 d = (to - from) / length;
    const double eps = 1e-6 * length;
    std::vector<BruteHit> hits;
    for (std::size_t i = 0; i < scene.size(); ++i) {
        if (exclude && *exclude == i) continue;
        const RFGaussian& g = scene[i];
        const Mat3 inv = g.covariance().inverse();
        const Vec3 o = from - g.mu;
        const double t = -(o.dot(inv * d)) / d.dot(inv * d);
        const Vec3 p = o + t * d;
        const double m2 = p.dot(inv * p);
        if (m2 > 9.0 || !(t > eps) || !(t < length - eps)) continue;
        hits.push_back({static_cast<std::uint32_t>(i), t, std::exp(-0.5 * m2)});
    }
    std::sort(hits.begin(), hits.end(), [](const BruteHit& a, const BruteHit& b) { return a.t < b.t || (a.t == b.t && a.index < b.index); });
    return hits;
}

double segment_visibility(const Scene& scene, const Vec3& from, const Vec3& to, std::optional<std::uint32_t> exclude)
{
    double v = 1.0;
    for (const auto& h : segment_hits(scene, from, to, exclude)) v *= 1.0 - std::min(scene[h.index].alpha * h.density, 0.99);
    return v;
}

namespace {

Complex free_space(double distance, double wavelength)
{
    return std::sqrt(1.0 / (4.0 * kPi * distance * distance)) * std::exp(Complex(0.0, -2.0 * kPi * distance / wavelength));
}

} // namespace

std::vector<Complex> brute_force_terms(const Scene& scene, const Antenna& tx, const Antenna& rx, double frequency_hz,
                                       const RenderOptions& options)
{
    if (scene.size() > kBruteForceLimit) throw PreconditionError("brute_force_render: scene exceeds the size cap");
    const double lambda = kSpeedOfLight / frequency_hz;
    std::vector<Complex> terms(scene.size(), 0.0);
    for (std::size_t l = 0; l < scene.size(); ++l) {
        const RFGaussian& g = scene[l];
        const auto self = static_cast<std::uint32_t>(l);
        const Vec3 to_g = g.mu - tx.position;
        const double d = to_g.norm();
        if (d < 1e-6) throw DegenerateGeometryError("brute_force_render: transmitter on a Gaussian");
        const Vec3 wi = to_g / d;
        const Mat3 cov = g.covariance();
        const double area = kPi * std::sqrt(cov.determinant()) * std::sqrt(wi.dot(cov.inverse() * wi));
        const double amp = std::sqrt(tx.power_watts * tx.power_gain(wi) * area / (4.0 * kPi * d * d));
        const double cos_i = std::max(0.0, -wi.dot(g.normal));
        if (amp == 0.0 || cos_i == 0.0) continue;
        const Complex s_in = amp * segment_visibility(scene, tx.position, g.mu, self) * tx.waveform *
                             std::exp(Complex(0.0, -2.0 * kPi * d / lambda));

        const Vec3 from_rx = g.mu - rx.position;
        const double r = from_rx.norm();
        if (r < 1e-6) throw DegenerateGeometryError("brute_force_render: receiver on a Gaussian");
        const Vec3 look = from_rx / r;
        const Vec3 wo = -look;
        const Vec3 mirror = wi - 2.0 * wi.dot(g.normal) * g.normal;
        const double cos_psi = std::clamp(wo.dot(mirror), -1.0, 1.0);
        const double pattern = std::sqrt(std::max(0.0, wo.dot(g.normal))) * std::pow(0.5 * (1.0 + cos_psi), g.roughness);
        const Complex s_out = std::polar(g.gamma_mag, g.gamma_phase) * pattern * cos_i * s_in;

        const auto back = segment_hits(scene, rx.position, g.mu, self);
        double transmittance = 1.0;
        Complex attenuation = 1.0;
        for (const auto& h : back) {
            transmittance *= 1.0 - std::min(scene[h.index].alpha * h.density, 0.99);
            attenuation *= free_space(h.t, lambda);
        }
        Complex blend = s_out * std::min(g.alpha, 0.99) * transmittance;
        if (!options.disable_path_loss) blend *= options.literal_attenuation_index ? attenuation : free_space(r, lambda);
        terms[l] = rx.pattern_gain(look) * blend;
    }
    return terms;
}

Complex brute_force_render(const Scene& scene, const Antenna& tx, const Antenna& rx, double frequency_hz,
                           const std::optional<LosNlosParams>& los, const RenderOptions& options)
{
    Complex s = 0.0;
    for (const Complex& c : brute_force_terms(scene, tx, rx, frequency_hz, options)) s += c;
    if (los) {
        const double d = (rx.position - tx.position).norm();
        if (d < 1e-6) throw DegenerateGeometryError("brute_force_render: LoS endpoints coincide");
        const double v = los->geometric_visibility ? segment_visibility(scene, tx.position, rx.position) : los->v_vis;
        const double c = los->law == LosDistanceLaw::Constant ? los->c_dis : los->c_dis / d;
        s += v * los->s_tx_strength * c * std::exp(Complex(0.0, 2.0 * kPi * d * frequency_hz / kSpeedOfLight));
    }
    return s;
}

double projected_ellipse_area(const Mat3& covariance, const Vec3& direction)
{
    const Vec3 n = direction.normalized();
    const Vec3 helper = std::abs(n.x()) < 0.6 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 u = n.cross(helper).normalized();
    const Vec3 v = n.cross(u);
    Eigen::Matrix<double, 2, 3> p;
    p.row(0) = u.transpose();
    p.row(1) = v.transpose();
    const Eigen::Matrix2d projected = p * covariance * p.transpose();
    return kPi * std::sqrt(projected.determinant());
}

CrossSectionEstimate monte_carlo_cross_section(const RFGaussian& g, const Vec3& direction, std::size_t samples, std::uint64_t seed)
{
    if (samples < 100000) throw PreconditionError("monte_carlo_cross_section: at least 1e5 samples are required");
    const Vec3 n = direction.normalized();
    const Mat3 cov = g.covariance();
    const Mat3 inv = cov.inverse();
    const Vec3 helper = std::abs(n.x()) < 0.6 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 a = n.cross(helper).normalized();
    const Vec3 b = n.cross(a);
    // Sample the rectangle circumscribing the silhouette: axes from the
    // projected covariance, so about pi/4 of the samples land inside.
    Eigen::Matrix<double, 2, 3> basis;
    basis.row(0) = a.transpose();
    basis.row(1) = b.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(basis * cov * basis.transpose());
    const Vec3 u = basis.transpose() * eig.eigenvectors().col(0);
    const Vec3 v = basis.transpose() * eig.eigenvectors().col(1);
    const double hu = std::sqrt(std::max(eig.eigenvalues()[0], 0.0)) * 1.0000001;
    const double hv = std::sqrt(std::max(eig.eigenvalues()[1], 0.0)) * 1.0000001;
    const double nn = n.dot(inv * n);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::size_t inside = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        const Vec3 o = unit(rng) * hu * u + unit(rng) * hv * v; // offset from the center
        const double on = o.dot(inv * n);
        if (o.dot(inv * o) - on * on / nn <= 1.0) ++inside;
    }
    const double box = 4.0 * hu * hv;
    const double p = static_cast<double>(inside) / static_cast<double>(samples);
    CrossSectionEstimate e;
    e.estimate = box * p;
    e.stderr_ = box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    e.analytic = projected_ellipse_area(cov, n);
    return e;
}

namespace {

RFGaussian disk(const Vec3& center, const Vec3& normal, double sigma_in, double sigma_n, const MaterialSpec& m)
{
    RFGaussian g;
    g.mu = center;
    g.normal = normal.normalized();
    g.rotation = Quat::FromTwoVectors(Vec3::UnitZ(), g.normal).normalized();
    g.scale = Vec3(sigma_in, sigma_in, sigma_n);
    g.alpha = m.alpha;
    g.roughness = m.roughness;
    g.gamma_mag = m.gamma_mag;
    g.gamma_phase = wrap_phase(m.gamma_phase);
    return g;
}

Scene plate(const SyntheticSceneSpec& spec, bool split)
{
    std::vector<RFGaussian> gs;
    const double sigma = spec.spacing / 3.5;
    for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t c = 0; c < spec.cols; ++c) {
            const double y = (static_cast<double>(c) - 0.5 * static_cast<double>(spec.cols - 1)) * spec.spacing;
            const double z = (static_cast<double>(r) - 0.5 * static_cast<double>(spec.rows - 1)) * spec.spacing;
            const MaterialSpec& m = split && 2 * c >= spec.cols ? spec.second : spec.material;
            gs.push_back(disk(Vec3(0.0, y, z), Vec3::UnitX(), sigma, 0.1 * sigma, m));
        }
    }
    return Scene::with_auto_bounds(std::move(gs), 0.1);
}

void wall(std::vector<RFGaussian>& gs, const Vec3& origin, const Vec3& a, const Vec3& b, int na, int nb, const Vec3& normal,
          const MaterialSpec& m)
{
    // Overlapping footprints keep the surface opaque between centers.
    const double step = a.norm() / na;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const Vec3 p = origin + (i + 0.5) / na * a + (j + 0.5) / nb * b;
            gs.push_back(disk(p, normal, 0.6 * step, 0.03, m));
        }
}

Scene classroom(const SyntheticSceneSpec& spec)
{
    const MaterialSpec walls{0.95, 3.0, 0.6, 2.0};
    const MaterialSpec floor{0.95, 2.0, 0.5, 1.5};
    const MaterialSpec desks{0.95, 6.0, 0.4, -0.5};
    const MaterialSpec pillar{0.95, 5.0, 0.7, 0.8};
    std::vector<RFGaussian> gs;
    const double w = 6.0, d = 4.0, h = 3.0;
    wall(gs, Vec3(0, 0, 0), Vec3(0, d, 0), Vec3(0, 0, h), 8, 6, Vec3::UnitX(), walls);
    wall(gs, Vec3(w, 0, 0), Vec3(0, d, 0), Vec3(0, 0, h), 8, 6, -Vec3::UnitX(), walls);
    wall(gs, Vec3(0, 0, 0), Vec3(w, 0, 0), Vec3(0, 0, h), 12, 6, Vec3::UnitY(), walls);
    wall(gs, Vec3(0, d, 0), Vec3(w, 0, 0), Vec3(0, 0, h), 12, 6, -Vec3::UnitY(), walls);
    wall(gs, Vec3(0, 0, 0), Vec3(w, 0, 0), Vec3(0, d, 0), 12, 8, Vec3::UnitZ(), floor);
    wall(gs, Vec3(0, 0, h), Vec3(w, 0, 0), Vec3(0, d, 0), 12, 8, -Vec3::UnitZ(), walls);
    for (double x : {1.5, 4.5})
        for (double y : {1.0, 3.0})
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 3; ++j) {
                    const Vec3 p(x - 0.45 + 0.3 * i, y - 0.27 + 0.27 * j, kClassroomDeskHeight);
                    gs.push_back(disk(p, Vec3::UnitZ(), 0.15, 0.02, desks));
                }
    for (int k = 0; k < 6; ++k) {
        const double z = 0.25 + 0.5 * k;
        for (const Vec3& n : {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0)})
            gs.push_back(disk(Vec3(3.0, 2.0, z) + 0.15 * n, n, 0.2, 0.05, pillar));
    }
    (void)spec;
    return Scene::with_auto_bounds(std::move(gs), 0.1);
}

} // namespace

Scene random_scene(std::size_t count, std::uint64_t seed, double extent)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-extent, extent);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<RFGaussian> gs;
    gs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        RFGaussian g;
        g.mu = Vec3(pos(rng), pos(rng), pos(rng));
        g.scale = Vec3(0.03 + 0.2 * unit(rng), 0.03 + 0.2 * unit(rng), 0.01 + 0.05 * unit(rng));
        g.rotation = Quat(normal(rng), normal(rng), normal(rng), normal(rng)).normalized();
        g.normal = Vec3(normal(rng), normal(rng), normal(rng)).normalized();
        g.alpha = 0.1 + 0.8 * unit(rng);
        g.roughness = 1.0 + 9.0 * unit(rng);
        g.gamma_mag = 0.1 + 0.8 * unit(rng);
        g.gamma_phase = wrap_phase(kPi * (2.0 * unit(rng) - 1.0));
        gs.push_back(g);
    }
    return Scene::with_auto_bounds(std::move(gs), 0.1);
}

Scene generate_scene(const SyntheticSceneSpec& spec)
{
    switch (spec.kind) {
    case SceneTemplate::Plate: return plate(spec, false);
    case SceneTemplate::TwoMaterialPlate: return plate(spec, true);
    case SceneTemplate::RandomCloud: return random_scene(spec.count, spec.seed, spec.cloud_extent);
    case SceneTemplate::Classroom: return classroom(spec);
    }
    throw ValidationError("unknown scene template");
}

std::vector<Vec3> classroom_tx_positions()
{
    std::vector<Vec3> out;
    for (double y : {0.6, 1.5, 2.5, 3.4})
        for (double x : {0.75, 1.65, 2.55, 3.45, 4.35, 5.25}) out.emplace_back(x, y, 2.5);
    return out;
}

namespace {

void add_records(ObservationSet& set, std::size_t tx, const Antenna& rx, const std::vector<Complex>& values, Split split,
                 bool complex_records)
{
    for (std::size_t f = 0; f < values.size(); ++f) {
        Observation o;
        o.tx = tx;
        o.rx = rx;
        o.frequency_index = f;
        o.split = split;
        if (complex_records) o.sample = values[f];
        else o.rssi_db = power_db(values[f]);
        set.records.push_back(std::move(o));
    }
}

std::vector<Complex> link_values(const Scene& scene, const Bvh& bvh, const TxIllumination& illumination, const Antenna& tx,
                                 const Antenna& rx, const ProtocolParams& p, const std::optional<LosNlosParams>& los)
{
    const LinkPlan plan = build_link_plan(scene, bvh, illumination, tx, rx, los, p.render);
    const AttributeArrays<double> attr = scene_attributes(scene);
    std::vector<Complex> v(p.grid.size());
    for (std::size_t f = 0; f < v.size(); ++f) v[f] = evaluate_link(plan, attr, p.grid.wavelength(f));
    return v;
}

} // namespace

ObservationSet generate_observations(const Scene& scene, Protocol protocol, const ProtocolParams& params, std::uint64_t seed,
                                     double noise_db)
{
    if (!(noise_db >= 0.0)) throw ValidationError("noise_db must be >= 0");
    ObservationSet set;
    set.scene_id = params.scene_id;
    set.grid = params.grid;
    const Bvh bvh = Bvh::build(scene);

    auto radar_records = [&](double range, const std::vector<double>& angles, Split split) {
        for (double a : angles) {
            const Antenna radar = radar_at(params.antenna, range, a);
            const std::size_t tx = set.transmitters.size();
            set.transmitters.push_back(radar);
            set.tx_ids.push_back("radar-" + std::to_string(tx));
            const TxIllumination ill = build_tx_illumination(scene, bvh, radar);
            add_records(set, tx, radar, link_values(scene, bvh, ill, radar, radar, params, std::nullopt), split, params.complex_records);
        }
    };

    switch (protocol) {
    case Protocol::MonostaticSweep:
        radar_records(params.range, params.angles_deg, Split::Train);
        break;
    case Protocol::DistanceSet: {
        const std::vector<double> angles = params.angles_deg.empty() ? std::vector<double>{0.0} : params.angles_deg;
        for (double d : params.train_distances) radar_records(d, angles, Split::Train);
        for (double d : params.test_distances) radar_records(d, angles, Split::Test);
        break;
    }
    case Protocol::LinkPairs:
        for (std::size_t t = 0; t < params.transmitters.size(); ++t) {
            const Antenna& tx = params.transmitters[t];
            set.transmitters.push_back(tx);
            set.tx_ids.push_back("tx-" + std::to_string(t));
            const TxIllumination ill = build_tx_illumination(scene, bvh, tx);
            for (const Antenna& rx : params.receivers)
                add_records(set, t, rx, link_values(scene, bvh, ill, tx, rx, params, params.los), Split::Train, params.complex_records);
        }
        break;
    case Protocol::RadioMapGrid: {
        std::mt19937_64 split_rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t t = 0; t < params.transmitters.size(); ++t) {
            const Antenna& tx = params.transmitters[t];
            set.transmitters.push_back(tx);
            set.tx_ids.push_back("tx-" + std::to_string(t));
            const TxIllumination ill = build_tx_illumination(scene, bvh, tx);
            std::vector<std::vector<Complex>> values(params.map.cells());
            std::vector<Antenna> rxs(params.map.cells(), params.antenna);
#pragma omp parallel for schedule(dynamic, 4)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(values.size()); ++i) {
                rxs[i].position = params.map.cell_position(static_cast<int>(i / params.map.width), static_cast<int>(i % params.map.width));
                values[i] = link_values(scene, bvh, ill, tx, rxs[i], params, params.los);
            }
            for (std::size_t i = 0; i < values.size(); ++i) {
                const Split split = unit(split_rng) < params.test_fraction ? Split::Test : Split::Train;
                add_records(set, t, rxs[i], values[i], split, params.complex_records);
            }
        }
        break;
    }
    }

    if (noise_db > 0.0) {
        std::mt19937_64 noise_rng(seed ^ 0x9e3779b97f4a7c15ULL);
        std::normal_distribution<double> noise(0.0, noise_db);
        for (auto& r : set.records) {
            const double n = noise(noise_rng);
            if (r.rssi_db) *r.rssi_db += n;
            else *r.sample *= std::pow(10.0, n / 20.0);
        }
    }
    set.validate();
    return set;
}

} // namespace rfsplat::oracle
