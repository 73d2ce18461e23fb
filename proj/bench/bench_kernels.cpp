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

// OpenMP kernels at one thread and at the full thread count, and the BVH /
// FoV paths against the serial oracles they are tested against.
// Argument: thread count (0 = omp_get_max_threads()).

#include "rfsplat/geometry.hpp"
#include "rfsplat/inverse.hpp"
#include "rfsplat/oracle.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

using namespace rfsplat;

namespace {

void set_threads(const benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    omp_set_num_threads(n > 0 ? n : omp_get_max_threads());
}

const Scene& classroom()
{
    static const Scene s = [] {
        oracle::SyntheticSceneSpec spec;
        spec.kind = oracle::SceneTemplate::Classroom;
        return oracle::generate_scene(spec);
    }();
    return s;
}

const Scene& plate()
{
    static const Scene s = [] {
        oracle::SyntheticSceneSpec spec;
        spec.kind = oracle::SceneTemplate::TwoMaterialPlate;
        spec.rows = 10;
        spec.cols = 20;
        spec.spacing = 0.1;
        return oracle::generate_scene(spec);
    }();
    return s;
}

const Scene& cloud()
{
    static const Scene s = oracle::random_scene(500, 3, 1.0);
    return s;
}

void BM_RadioMap(benchmark::State& state)
{
    set_threads(state);
    const Scene& scene = classroom();
    const Bvh bvh = Bvh::build(scene);
    Antenna tx;
    tx.position = oracle::classroom_tx_positions()[0];
    const MapGrid grid = map_grid_over(scene, 32, 32, oracle::kClassroomDeskHeight);
    for (auto _ : state) benchmark::DoNotOptimize(render_radio_map(scene, bvh, tx, grid, 5.8e9, LosNlosParams{}));
}

void BM_RcsSweep(benchmark::State& state)
{
    set_threads(state);
    const Bvh bvh = Bvh::build(plate());
    RcsConfig config;
    config.radar.pattern = PatternType::DirectionalHorn;
    for (int a = 0; a < 360; a += 4) config.angles_deg.push_back(a);
    for (auto _ : state) benchmark::DoNotOptimize(render_rcs_sweep(plate(), bvh, config));
}

void BM_GeometryMaps(benchmark::State& state)
{
    set_threads(state);
    const Bvh bvh = Bvh::build(cloud());
    const CameraRayBundle rays = CameraRayBundle::pinhole(Vec3(4, 0, 0), Vec3::Zero(), Vec3::UnitZ(), 40.0, 128, 128);
    for (auto _ : state) benchmark::DoNotOptimize(render_geometry_maps(cloud(), bvh, rays));
}

void BM_BvhBuild(benchmark::State& state)
{
    set_threads(state);
    for (auto _ : state) benchmark::DoNotOptimize(Bvh::build(classroom()));
}

void BM_LossGradient(benchmark::State& state)
{
    set_threads(state);
    oracle::ProtocolParams p;
    p.grid = FrequencyGrid::linear(2e9, 10e9, 8);
    for (int k = 0; k < 8; ++k) {
        Antenna a;
        a.position = Vec3(1.5, -1.0 + 0.25 * k, 0.2);
        p.transmitters.push_back(a);
        a.position = Vec3(1.8, 1.0 - 0.25 * k, -0.3);
        p.receivers.push_back(a);
    }
    const ObservationSet data = oracle::generate_observations(plate(), oracle::Protocol::LinkPairs, p, 1);
    const InverseProblem problem(plate(), data);
    const std::vector<AttributeArrays<double>> attrs{AttributeBank::from_scene(plate()).arrays<double>()};
    std::vector<std::vector<double>> grad;
    for (auto _ : state) benchmark::DoNotOptimize(problem.evaluate(attrs, &grad));
}

std::vector<std::pair<Vec3, Vec3>> segments(std::size_t count)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    std::vector<std::pair<Vec3, Vec3>> out;
    for (std::size_t k = 0; k < count; ++k)
        out.emplace_back(Vec3(coord(rng), coord(rng), coord(rng)), Vec3(coord(rng), coord(rng), coord(rng)));
    return out;
}

void BM_VisibilityBvh(benchmark::State& state)
{
    const Bvh bvh = Bvh::build(cloud());
    const auto segs = segments(200);
    for (auto _ : state)
        for (const auto& [a, b] : segs) benchmark::DoNotOptimize(visibility_chain(bvh, cloud(), a, b));
}

void BM_VisibilityBruteForce(benchmark::State& state)
{
    const auto segs = segments(200);
    for (auto _ : state)
        for (const auto& [a, b] : segs) benchmark::DoNotOptimize(oracle::segment_hits(cloud(), a, b));
}

Antenna radar()
{
    Antenna a;
    a.position = Vec3(3, 0.4, 0.2);
    a.pattern = PatternType::DirectionalHorn;
    a.boresight = -a.position.normalized();
    return a;
}

void BM_RenderFov(benchmark::State& state)
{
    set_threads(state);
    const Bvh bvh = Bvh::build(plate());
    for (auto _ : state) benchmark::DoNotOptimize(render_received_signal(plate(), bvh, radar(), radar(), FrequencyGrid::single(5.8e9)));
}

void BM_RenderBruteForce(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_force_render(plate(), radar(), radar(), 5.8e9));
}

} // namespace

BENCHMARK(BM_RadioMap)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RcsSweep)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeometryMaps)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BvhBuild)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LossGradient)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderFov)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderBruteForce)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VisibilityBvh)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VisibilityBruteForce)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
