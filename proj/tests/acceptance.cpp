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

// Acceptance suite: one line per criterion, exit status 1 if any fails.
// Usage: rfsplat_acceptance [criterion ...]   (default: all)

#include "rfsplat/checks.hpp"
#include "rfsplat/fam.hpp"
#include "rfsplat/inverse.hpp"
#include "rfsplat/io.hpp"
#include "rfsplat/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>

using namespace rfsplat;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool passed = false;
    std::string detail;
};

template <class... Args>
std::string format(const char* fmt, Args... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

Antenna on_sphere(double distance, double az_deg, double el_deg)
{
    const double az = az_deg * kPi / 180.0, el = el_deg * kPi / 180.0;
    Antenna a;
    a.position = distance * Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    return a;
}

/// m transmitters at distance d and m receivers at 1.2 d, interleaved in
/// azimuth over [-60, 60] degrees and alternating in elevation.
void arcs(std::size_t m, double d, std::vector<Antenna>& txs, std::vector<Antenna>& rxs)
{
    const double span = 60.0;
    for (std::size_t k = 0; k < m; ++k) {
        txs.push_back(on_sphere(d, -span + 2 * span * k / (m - 1.0), k % 2 ? 15.0 : -15.0));
        rxs.push_back(on_sphere(1.2 * d, -span + 2 * span * (k + 0.5) / m, k % 2 ? -25.0 : 25.0));
    }
}

Outcome report_outcome(const oracle::CheckReport& r, const std::string& extra = "")
{
    return {r.passed, format("%zu rows, worst %.3e, %.1f s%s", r.rows.size(), r.worst, r.seconds, extra.c_str())};
}

Outcome gradients()
{
    const oracle::CheckReport r = oracle::gradient_suite(1, 20);
    const bool fast = r.seconds < 60.0;
    Outcome o = report_outcome(r, " (worst is error over its own limit)");
    o.passed = o.passed && fast;
    if (!fast) o.detail += ", over the 60 s budget";
    return o;
}

Outcome inverse_recovery()
{
    const auto t0 = Clock::now();
    oracle::SyntheticSceneSpec spec;
    spec.kind = oracle::SceneTemplate::TwoMaterialPlate;
    spec.rows = 10;
    spec.cols = 20;
    spec.spacing = 0.1;
    spec.material = {0.9, 3.0, 0.8, 0.5};
    spec.second = {0.9, 5.0, 0.3, -1.0};
    const Scene truth = oracle::generate_scene(spec);

    oracle::ProtocolParams p;
    p.grid = FrequencyGrid::linear(2e9, 10e9, 32);
    arcs(8, 1.5, p.transmitters, p.receivers);
    const ObservationSet data = oracle::generate_observations(truth, oracle::Protocol::LinkPairs, p, 1);
    const InverseProblem problem(truth, data);

    const AttributeBank gt = AttributeBank::from_scene(truth);
    AttributeBank init = gt;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (std::size_t i = 0; i < init.gaussians(); ++i)
        for (RawSlot k : {kRoughnessRaw, kGammaRaw, kPhaseRaw}) init.raw(i, k) += u(rng) * std::abs(init.raw(i, k));

    FitConfig config;
    config.iterations = 2000;
    config.trainable = {false, true, true, true};
    const FitReport rep = fit(problem, init, config);

    const std::vector<double> w = problem.contribution_weights(gt.arrays<double>());
    double eg = 0.0, er = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < gt.gaussians(); ++i) {
        if (w[i] <= 1e-3) continue;
        ++counted;
        eg = std::max(eg, std::abs(rep.bank.gamma_mag(i) - gt.gamma_mag(i)));
        er = std::max(er, std::abs(rep.bank.roughness(i) - gt.roughness(i)) / gt.roughness(i));
    }
    const double drop_db = 10.0 * std::log10(rep.initial_loss / rep.final_loss);
    const double secs = seconds_since(t0);
    const bool ok = data.records.size() == 64 * 32 && counted > 0 && eg <= 0.05 && er <= 0.10 && drop_db >= 30.0 && secs < 600.0;
    return {ok, format("%zu Gaussians scored, max |Gamma| err %.4f (<= 0.05), max R rel err %.4f (<= 0.10), loss drop %.1f dB (>= 30), %.0f s",
                       counted, eg, er, drop_db, secs)};
}

/// Width of the lobe around `peak` where power stays above peak - 3.0103 dB,
/// with linear interpolation between samples.
double half_power_width(const std::vector<double>& angles, const std::vector<double>& db, std::size_t peak)
{
    const double level = db[peak] - 10.0 * std::log10(2.0);
    const auto crossing = [&](int step) {
        std::size_t i = peak;
        while (true) {
            const std::size_t j = i + step;
            if (j >= angles.size()) return angles[i];
            if (db[j] < level) return angles[i] + (angles[j] - angles[i]) * (db[i] - level) / (db[i] - db[j]);
            i = j;
        }
    };
    return crossing(1) - crossing(-1);
}

Outcome specular_lobe()
{
    std::string detail;
    bool ok = true;
    double previous = 1e300;
    for (double r : {1.0, 5.0, 50.0}) {
        oracle::SyntheticSceneSpec spec;
        spec.rows = 5;
        spec.cols = 5;
        spec.spacing = 0.03;
        spec.material.roughness = r;
        const Scene plate = oracle::generate_scene(spec);
        RcsConfig config;
        config.range = 5.0;
        config.grid = FrequencyGrid::single(1e9);
        config.radar.pattern = PatternType::DirectionalHorn;
        for (int a = -60; a <= 60; ++a) config.angles_deg.push_back(a);
        const RcsSweep sweep = render_rcs_sweep(plate, Bvh::build(plate), config);
        std::size_t peak = 0;
        for (std::size_t i = 0; i < sweep.angles_deg.size(); ++i)
            if (sweep.rssi_db[i] > sweep.rssi_db[peak]) peak = i;
        const double width = half_power_width(sweep.angles_deg, sweep.rssi_db, peak);
        ok = ok && std::abs(sweep.angles_deg[peak]) <= 1.0 && width < previous;
        previous = width;
        detail += format("%sR=%g peak %+g deg width %.2f deg", detail.empty() ? "" : ", ", r, sweep.angles_deg[peak], width);
    }
    return {ok, detail + " (peak within 1 deg, widths strictly decreasing)"};
}

double monostatic_db(double d, const RenderOptions& options)
{
    RFGaussian g;
    g.scale = Vec3::Constant(0.02);
    g.alpha = 0.9;
    g.normal = Vec3::UnitX();
    g.gamma_mag = 0.8;
    const Scene scene = Scene::with_auto_bounds({g}, 0.1);
    Antenna radar;
    radar.position = Vec3(d, 0, 0);
    radar.pattern = PatternType::DirectionalHorn;
    radar.boresight = -Vec3::UnitX();
    return render_received_signal(scene, Bvh::build(scene), radar, radar, FrequencyGrid::single(5.8e9), std::nullopt, options).rssi_db(0);
}

Outcome distance_scaling()
{
    RenderOptions ablated;
    ablated.disable_path_loss = true;
    double worst = 0.0, ablated_best = 1e300;
    for (double d : {1.0, 2.0, 4.0}) {
        worst = std::max(worst, std::abs(monostatic_db(d, {}) - monostatic_db(2 * d, {}) - 12.04));
        ablated_best = std::min(ablated_best, std::abs(monostatic_db(d, ablated) - monostatic_db(2 * d, ablated) - 12.04));
    }
    const bool ok = worst <= 0.1 && ablated_best > 0.1;
    return {ok, format("max |drop - 12.04| %.4f dB (<= 0.1); path loss disabled: min |drop - 12.04| %.2f dB (must exceed 0.1)", worst,
                       ablated_best)};
}

Outcome cross_section() { return report_outcome(oracle::cross_section_suite(1, 100, 1000000)); }

Outcome bvh_equivalence() { return report_outcome(oracle::visibility_suite(1, 50, 1000, 500)); }

Outcome renderer_equivalence()
{
    const oracle::CheckReport blend = oracle::blend_suite(1, 50);
    const oracle::CheckReport plate = oracle::plate_binning_check();
    return {blend.passed && plate.passed, format("exact mode worst %.3e (< 1e-12) over %zu scenes; 1-deg FoV plate worst %.3e (< 0.03)",
                                                 blend.worst, blend.rows.size(), plate.worst)};
}

Outcome los_ablation()
{
    const auto t0 = Clock::now();
    oracle::SyntheticSceneSpec spec;
    spec.kind = oracle::SceneTemplate::Classroom;
    const Scene truth = oracle::generate_scene(spec);
    oracle::ProtocolParams p;
    p.grid = FrequencyGrid::single(5.8e9);
    p.map.height = 16;
    p.map.width = 24;
    p.map.z = oracle::kClassroomDeskHeight;
    p.map.x0 = 0.3;
    p.map.x1 = 5.7;
    p.map.y0 = 0.3;
    p.map.y1 = 3.7;
    const std::vector<Vec3> candidates = oracle::classroom_tx_positions();
    for (std::size_t t = 0; t < 2; ++t) {
        Antenna a;
        a.position = candidates[(t * 7) % candidates.size()];
        p.transmitters.push_back(a);
    }
    LosNlosParams mixed;
    mixed.law = LosDistanceLaw::InverseDistance;
    mixed.c_dis = 1.0;
    p.los = mixed;
    p.test_fraction = 0.25;
    const ObservationSet data = oracle::generate_observations(truth, oracle::Protocol::RadioMapGrid, p, 3);
    const ObservationSet train = data.subset(Split::Train);

    LosNlosParams ablated = mixed;
    ablated.geometric_visibility = false;
    ablated.v_vis = 1.0;
    ProblemOptions om, oa;
    om.los = mixed;
    oa.los = ablated;
    const InverseProblem fit_mixed(truth, train, om), fit_ablated(truth, train, oa);
    const InverseProblem eval_mixed(truth, data, om), eval_ablated(truth, data, oa);

    const AttributeBank init = jitter(AttributeBank::from_scene(truth), 0.3, 5);
    FitConfig config;
    config.iterations = 300;
    config.trainable = {false, true, true, true};
    const FitReport rm = fit(fit_mixed, init, config);
    const FitReport ra = fit(fit_ablated, init, config);
    const std::vector<AttributeArrays<double>> am{rm.bank.arrays<double>()}, aa{ra.bank.arrays<double>()};
    const double mae_mixed = eval_mixed.rssi_mae_db(am, Split::Test);
    const double mae_ablated = eval_ablated.rssi_mae_db(aa, Split::Test);
    const double gap = (mae_ablated - mae_mixed) / mae_mixed;
    return {gap >= 0.2, format("test MAE mixed %.3f dB, ablated %.3f dB, increase %.0f%% (>= 20%%), %.0f s", mae_mixed, mae_ablated,
                               100.0 * gap, seconds_since(t0))};
}

Outcome spatial_extrapolation()
{
    const auto t0 = Clock::now();
    oracle::SyntheticSceneSpec spec;
    spec.kind = oracle::SceneTemplate::TwoMaterialPlate;
    spec.rows = 6;
    spec.cols = 6;
    spec.spacing = 0.05;
    spec.material = {0.9, 3.0, 0.8, 0.5};
    spec.second = {0.9, 8.0, 0.4, -1.0};
    const Scene truth = oracle::generate_scene(spec);
    oracle::ProtocolParams p;
    p.grid = FrequencyGrid::linear(5e9, 6.5e9, 8);
    for (int a = -30; a <= 30; a += 5) p.angles_deg.push_back(a);
    const ObservationSet data = oracle::generate_observations(truth, oracle::Protocol::DistanceSet, p, 1);
    const InverseProblem train(truth, data.subset(Split::Train)), all(truth, data);

    FitConfig config;
    config.iterations = 2000;
    config.trainable = {false, true, true, true};
    const FitReport rep = fit(train, jitter(AttributeBank::from_scene(truth), 0.3, 5), config);
    const std::vector<AttributeArrays<double>> a{rep.bank.arrays<double>()};
    const double mae_train = all.rssi_mae_db(a, Split::Train), mae_test = all.rssi_mae_db(a, Split::Test);
    const bool ok = mae_test <= 2.0 * mae_train && mae_test <= 3.0;
    return {ok, format("train MAE %.4f dB, test (3 m) MAE %.4f dB (<= 2x train and <= 3 dB), %.0f s", mae_train, mae_test, seconds_since(t0))};
}

Outcome wideband()
{
    const auto t0 = Clock::now();
    oracle::SyntheticSceneSpec spec;
    spec.rows = 8;
    spec.cols = 8;
    spec.spacing = 0.1;
    spec.material = {0.9, 4.0, 0.4, 0.3};
    const Scene base = oracle::generate_scene(spec);
    const std::size_t nf = 10;
    const FrequencyGrid grid = FrequencyGrid::linear(2e9, 10e9, nf);
    const auto truth = [&](std::size_t f) { return 0.4 + 0.4 * static_cast<double>(f) / (nf - 1.0); };

    ObservationSet data;
    data.scene_id = "wideband";
    data.grid = grid;
    std::vector<Antenna> txs, rxs;
    arcs(12, 1.5, txs, rxs);
    for (std::size_t t = 0; t < txs.size(); ++t) {
        data.transmitters.push_back(txs[t]);
        data.tx_ids.push_back("tx-" + std::to_string(t));
    }
    for (std::size_t f = 0; f < nf; ++f) {
        std::vector<RFGaussian> gs(base.gaussians().begin(), base.gaussians().end());
        for (auto& g : gs) g.gamma_mag = truth(f);
        const Scene sf = base.with_gaussians(gs);
        const Bvh bvh = Bvh::build(sf);
        for (std::size_t t = 0; t < txs.size(); ++t)
            for (const Antenna& rx : rxs) {
                Observation o;
                o.tx = t;
                o.rx = rx;
                o.frequency_index = f;
                o.rssi_db = render_received_signal(sf, bvh, txs[t], rx, FrequencyGrid::single(grid[f])).rssi_db(0);
                data.records.push_back(o);
            }
    }

    const InverseProblem problem(base, data);
    const AttributeBank bank = AttributeBank::from_scene(base);
    const FamNetwork net(FamConfig{}, bank.gaussians(), grid[0], grid[nf - 1]);

    // A fresh network leaves every attribute bit-identical.
    const AttributeArrays<double> plain = bank.arrays<double>();
    bool identity = true;
    for (std::size_t f = 0; f < nf; ++f) {
        const FamView v = fam_apply(net, bank, grid[f]);
        identity = identity && v.attributes.alpha == plain.alpha && v.attributes.roughness == plain.roughness &&
                   v.attributes.gamma_mag == plain.gamma_mag && v.attributes.gamma_phase == plain.gamma_phase;
    }

    WidebandConfig config;
    config.iterations = 3000;
    const WidebandReport rep = fit_wideband(problem, bank, net, config);
    const std::vector<double> w = problem.contribution_weights(plain);
    double worst = 0.0;
    std::size_t counted = 0;
    for (std::size_t f = 0; f < nf; ++f) {
        const FamView v = fam_apply(rep.net, bank, grid[f]);
        for (std::size_t i = 0; i < bank.gaussians(); ++i) {
            if (w[i] <= 1e-3) continue;
            counted += f == 0 ? 1 : 0;
            worst = std::max(worst, std::abs(v.attributes.gamma_mag[i] - truth(f)));
        }
    }
    const bool ok = identity && counted > 0 && worst < 0.03;
    return {ok, format("zero-initialized identity %s; %zu Gaussians x %zu frequencies, max |Gamma| err %.4f (< 0.03), %.0f s",
                       identity ? "exact" : "BROKEN", counted, nf, worst, seconds_since(t0))};
}

Outcome determinism()
{
    const auto outputs = [] {
        std::string all;
        oracle::SyntheticSceneSpec spec;
        spec.kind = oracle::SceneTemplate::TwoMaterialPlate;
        spec.rows = 4;
        spec.cols = 6;
        spec.spacing = 0.1;
        const Scene scene = oracle::generate_scene(spec);
        const Bvh bvh = Bvh::build(scene);

        RcsConfig rc;
        rc.grid = FrequencyGrid::linear(2e9, 6e9, 3);
        for (int a = 0; a < 360; a += 3) rc.angles_deg.push_back(a);
        all += io::rcs_csv(render_rcs_sweep(scene, bvh, rc));

        Antenna tx;
        tx.position = Vec3(1.0, 0.3, 0.2);
        const MapGrid grid = map_grid_over(scene, 12, 9, 0.2);
        const RadioMap map = render_radio_map(scene, bvh, tx, grid, 5.8e9, LosNlosParams{});
        all += io::map_csv(map) + io::map_to_json(map).dump();

        oracle::ProtocolParams p;
        p.angles_deg = {-20, -10, 0, 10, 20};
        p.grid = FrequencyGrid::linear(5e9, 6e9, 3);
        const ObservationSet data = oracle::generate_observations(scene, oracle::Protocol::MonostaticSweep, p, 11, 0.5);
        all += io::dataset_to_json(data).dump();
        FitConfig fc;
        fc.iterations = 50;
        fc.seed = 9;
        fc.init_jitter = 0.2;
        all += io::fit_report_to_json(fit(InverseProblem(scene, data), AttributeBank::from_scene(scene), fc)).dump();
        return all;
    };
    const std::string first = outputs(), second = outputs();

    io::SceneDocument doc;
    doc.id = "round-trip";
    doc.scene = oracle::random_scene(200, 17, 1.0);
    doc.grid = FrequencyGrid::linear(1e9, 9e9, 7);
    Antenna horn;
    horn.position = Vec3(2.0, 0.1, -0.3);
    horn.pattern = PatternType::DirectionalHorn;
    horn.boresight = -horn.position.normalized();
    doc.antennas.push_back({"radar", io::AntennaRole::Tx, horn});
    doc.los = LosNlosParams{};
    const std::string path = (std::filesystem::temp_directory_path() / "rfsplat-acceptance-scene.json").string();
    io::save_scene(path, doc);
    const io::SceneDocument back = io::load_scene(path);
    bool lossless = back.scene.size() == doc.scene.size() && io::serialize_scene(back) == io::serialize_scene(doc);
    for (std::size_t i = 0; lossless && i < doc.scene.size(); ++i) {
        const RFGaussian &a = doc.scene[i], &b = back.scene[i];
        lossless = a.mu == b.mu && a.scale == b.scale && a.rotation.coeffs() == b.rotation.coeffs() && a.alpha == b.alpha &&
                   a.roughness == b.roughness && a.gamma_mag == b.gamma_mag && a.gamma_phase == b.gamma_phase && a.normal == b.normal;
    }
    std::filesystem::remove(path);
    const bool same = first == second;
    return {same && lossless, format("%zu bytes of CSV/JSON %s across runs; scene round trip of %zu Gaussians %s", first.size(),
                                     same ? "identical" : "DIFFER", doc.scene.size(), lossless ? "bit-exact" : "LOSSY")};
}

struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria = {
        {1, "gradient correctness", gradients},
        {2, "inverse recovery", inverse_recovery},
        {3, "specular lobe", specular_lobe},
        {4, "two-way free-space scaling", distance_scaling},
        {5, "cross-section oracle", cross_section},
        {6, "BVH equivalence", bvh_equivalence},
        {7, "renderer-oracle equivalence", renderer_equivalence},
        {8, "LoS/NLoS ablation direction", los_ablation},
        {9, "spatial extrapolation", spatial_extrapolation},
        {10, "wideband modulation", wideband},
        {11, "determinism and formats", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.number)) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += o.passed ? 0 : 1;
        std::printf("criterion %2d %s  %s: %s\n", c.number, o.passed ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
