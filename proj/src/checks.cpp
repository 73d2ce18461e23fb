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

#include "rfsplat/checks.hpp"

#include "rfsplat/geometry.hpp"
#include "rfsplat/inverse.hpp"
#include "rfsplat/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

namespace rfsplat::oracle {

void CheckReport::add(std::string label, double value, double limit)
{
    CheckRow row{std::move(label), value, limit, value < limit};
    worst = std::max(worst, value);
    passed = passed && row.passed;
    rows.push_back(std::move(row));
}

std::string CheckReport::table() const
{
    std::ostringstream out;
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-40s %12.4e  < %9.2e  %s\n", r.label.c_str(), r.value, r.limit, r.passed ? "pass" : "FAIL");
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "%s: %zu rows, worst %.4e, %.1f s, %s\n", name.c_str(), rows.size(), worst, seconds,
                  passed ? "PASS" : "FAIL");
    out << buf;
    return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec3 v;
    do v = Vec3(normal(rng), normal(rng), normal(rng));
    while (v.norm() < 1e-6);
    return v.normalized();
}

} // namespace

CheckReport gradient_suite(std::uint64_t seed, std::size_t scenes)
{
    CheckReport report;
    report.name = "gradients";
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size(10, 50);
    std::uniform_real_distribution<double> radius(2.5, 3.5);
    for (std::size_t s = 0; s < scenes; ++s) {
        const std::size_t count = size(rng);
        const Scene scene = random_scene(count, rng(), 1.0);

        ObservationSet set;
        set.scene_id = "gradient-check";
        set.grid = FrequencyGrid({2.4e9, 5.8e9});
        std::vector<Antenna> rxs(2);
        for (int k = 0; k < 2; ++k) {
            Antenna tx;
            tx.position = radius(rng) * random_unit(rng);
            if (s % 3 == 2) {
                tx.pattern = PatternType::DirectionalHorn;
                tx.boresight = -tx.position.normalized();
            }
            set.transmitters.push_back(tx);
            set.tx_ids.push_back("tx-" + std::to_string(k));
            rxs[k].position = radius(rng) * random_unit(rng);
        }

        ProblemOptions options;
        options.render.exact_direction = s % 2 == 0;
        if (s % 2 == 1) options.los = LosNlosParams{};

        // Targets from perturbed attributes so the residuals are not zero.
        const AttributeBank truth = AttributeBank::from_scene(scene);
        const AttributeBank target_bank = jitter(truth, 0.5, rng());
        const Scene target = target_bank.apply_to(scene);
        const Bvh bvh = Bvh::build(target);
        std::size_t record = 0;
        for (std::size_t t = 0; t < 2; ++t)
            for (const Antenna& rx : rxs) {
                const ComplexSignal sig = render_received_signal(target, bvh, set.transmitters[t], rx, set.grid, options.los, options.render);
                for (std::size_t f = 0; f < set.grid.size(); ++f, ++record) {
                    Observation o;
                    o.tx = t;
                    o.rx = rx;
                    o.frequency_index = f;
                    if (record % 2 == 0) o.rssi_db = sig.rssi_db(f);
                    else o.sample = sig.values[f];
                    set.records.push_back(o);
                }
            }

        const InverseProblem problem(scene, set, options);
        const GradientCheck check = check_gradients(problem, truth);
        std::size_t failed = 0;
        for (const auto& row : check.rows) failed += row.passed ? 0 : 1;
        char label[96];
        std::snprintf(label, sizeof label, "scene %zu (%zu gaussians, %zu records, %zu failed)", s, count, set.records.size(), failed);
        // Rows use mixed relative/absolute limits; report the error relative to its own limit.
        double scaled = 0.0;
        for (const auto& row : check.rows) {
            const double mag = std::max(std::abs(row.analytic), std::abs(row.numeric));
            scaled = std::max(scaled, mag < 1e-12 ? row.error / 1e-10 : row.error / 1e-4);
        }
        report.add(label, scaled, 1.0);
    }
    report.seconds = seconds_since(t0);
    return report;
}

CheckReport blend_suite(std::uint64_t seed, std::size_t scenes)
{
    CheckReport report;
    report.name = "blend";
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size(1, 200);
    std::uniform_real_distribution<double> radius(2.0, 4.0);
    std::uniform_real_distribution<double> freq(1e9, 10e9);
    for (std::size_t s = 0; s < scenes; ++s) {
        const std::size_t count = size(rng);
        const Scene scene = random_scene(count, rng(), 1.0);
        const Bvh bvh = Bvh::build(scene);
        Antenna tx, rx;
        tx.position = radius(rng) * random_unit(rng);
        rx.position = radius(rng) * random_unit(rng);
        if (s % 2 == 1) {
            tx.pattern = PatternType::DirectionalHorn;
            tx.boresight = -tx.position.normalized();
            rx.pattern = PatternType::DirectionalHorn;
            rx.boresight = -rx.position.normalized();
        }
        const double f = freq(rng);
        std::optional<LosNlosParams> los;
        if (s % 3 == 0) los = LosNlosParams{};
        RenderOptions exact;
        exact.exact_direction = true;

        const Complex main = render_received_signal(scene, bvh, tx, rx, FrequencyGrid::single(f), los, exact).values[0];
        const Complex brute = brute_force_render(scene, tx, rx, f, los, exact);
        double scale = std::abs(brute);
        for (const Complex& c : brute_force_terms(scene, tx, rx, f, exact)) scale += std::abs(c);
        const double err = scale > 0.0 ? std::abs(main - brute) / scale : std::abs(main - brute);
        char label[96];
        std::snprintf(label, sizeof label, "scene %zu (%zu gaussians, %.2f GHz%s)", s, count, f * 1e-9, los ? ", LoS" : "");
        report.add(label, err, 1e-12);
    }
    report.seconds = seconds_since(t0);
    return report;
}

CheckReport plate_binning_check()
{
    CheckReport report;
    report.name = "plate-binning";
    const auto t0 = Clock::now();
    SyntheticSceneSpec spec;
    spec.rows = 10;
    spec.cols = 10;
    spec.spacing = 0.05;
    const Scene plate = generate_scene(spec);
    const Bvh bvh = Bvh::build(plate);
    Antenna radar;
    radar.position = Vec3(3.0, 0.0, 0.0);
    radar.pattern = PatternType::DirectionalHorn;
    radar.boresight = -Vec3::UnitX();
    for (double f : {1e9, 2.4e9, 5.8e9}) {
        const Complex binned = render_received_signal(plate, bvh, radar, radar, FrequencyGrid::single(f)).values[0];
        const Complex brute = brute_force_render(plate, radar, radar, f);
        char label[96];
        std::snprintf(label, sizeof label, "plate 10x10 monostatic %.1f GHz", f * 1e-9);
        report.add(label, std::abs(std::abs(binned) - std::abs(brute)) / std::abs(brute), 0.03);
    }
    report.seconds = seconds_since(t0);
    return report;
}

CheckReport cross_section_suite(std::uint64_t seed, std::size_t cases, std::size_t samples)
{
    CheckReport report;
    report.name = "cross-section";
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed);
    const Scene pool = random_scene(cases, rng(), 1.0);
    double worst_exact = 0.0, worst_mc = 0.0;
    for (std::size_t k = 0; k < cases; ++k) {
        const RFGaussian& g = pool[k];
        const Vec3 n = random_unit(rng);
        const double formula = projected_cross_section(g, n);
        const CrossSectionEstimate mc = monte_carlo_cross_section(g, n, samples, rng());
        const double exact = std::abs(formula - mc.analytic) / mc.analytic;
        const double sampled = std::abs(formula - mc.estimate) / mc.estimate;
        worst_exact = std::max(worst_exact, exact);
        worst_mc = std::max(worst_mc, sampled);
        char label[96];
        std::snprintf(label, sizeof label, "case %zu vs Monte Carlo (stderr %.2e)", k, mc.stderr_ / mc.estimate);
        report.add(label, sampled, 0.01);
        std::snprintf(label, sizeof label, "case %zu vs projected ellipse", k);
        report.add(label, exact, 1e-9);
    }
    report.seconds = seconds_since(t0);
    return report;
}

CheckReport visibility_suite(std::uint64_t seed, std::size_t scenes, std::size_t segments, std::size_t max_gaussians)
{
    CheckReport report;
    report.name = "visibility";
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size(1, max_gaussians);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    for (std::size_t s = 0; s < scenes; ++s) {
        // The last scene always uses the full size.
        const std::size_t count = s + 1 == scenes ? max_gaussians : size(rng);
        const Scene scene = random_scene(count, rng(), 1.0);
        const Bvh bvh = Bvh::build(scene);
        std::size_t mismatched = 0, hits = 0;
        double worst = 0.0;
        for (std::size_t k = 0; k < segments; ++k) {
            const Vec3 a(coord(rng), coord(rng), coord(rng));
            const Vec3 b(coord(rng), coord(rng), coord(rng));
            if ((b - a).norm() < 1e-9) continue;
            const VisibilityResult fast = visibility_chain(bvh, scene, a, b);
            const std::vector<BruteHit> slow = segment_hits(scene, a, b);
            bool same = fast.chain.size() == slow.size();
            for (std::size_t i = 0; same && i < slow.size(); ++i) same = fast.chain[i].index == slow[i].index;
            mismatched += same ? 0 : 1;
            hits += slow.size();
            worst = std::max(worst, std::abs(fast.visibility - segment_visibility(scene, a, b)));
        }
        char label[96];
        std::snprintf(label, sizeof label, "scene %zu (%zu gaussians, %zu hits, %zu chain mismatches)", s, count, hits, mismatched);
        // A chain mismatch fails the row regardless of the product.
        report.add(label, mismatched ? 1.0 : worst, 1e-12);
    }
    report.seconds = seconds_since(t0);
    return report;
}

} // namespace rfsplat::oracle
