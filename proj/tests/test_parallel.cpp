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

// Every OpenMP kernel gives bit-identical results at one thread and at four.

#include "rfsplat/geometry.hpp"
#include "rfsplat/inverse.hpp"
#include "rfsplat/oracle.hpp"
#include "support.hpp"

#include <omp.h>

using namespace rfsplat;

namespace {

template <class Fn>
auto at_threads(int n, Fn&& fn)
{
    const int saved = omp_get_max_threads();
    omp_set_num_threads(n);
    auto out = fn();
    omp_set_num_threads(saved);
    return out;
}

Scene two_material()
{
    oracle::SyntheticSceneSpec spec;
    spec.kind = oracle::SceneTemplate::TwoMaterialPlate;
    spec.rows = 6;
    spec.cols = 8;
    spec.spacing = 0.1;
    return oracle::generate_scene(spec);
}

} // namespace

TEST_CASE("radio map")
{
    oracle::SyntheticSceneSpec spec;
    spec.kind = oracle::SceneTemplate::Classroom;
    const Scene scene = oracle::generate_scene(spec);
    Antenna tx;
    tx.position = oracle::classroom_tx_positions()[5];
    const auto run = [&] {
        const Bvh bvh = Bvh::build(scene);
        return render_radio_map(scene, bvh, tx, map_grid_over(scene, 6, 9, oracle::kClassroomDeskHeight), 5.8e9, LosNlosParams{}).rssi_db;
    };
    CHECK(at_threads(1, run) == at_threads(4, run));
}

TEST_CASE("rcs sweep")
{
    const Scene scene = two_material();
    RcsConfig config;
    config.grid = FrequencyGrid::linear(2e9, 6e9, 3);
    for (int a = 0; a < 360; a += 7) config.angles_deg.push_back(a);
    const auto run = [&] { return render_rcs_sweep(scene, Bvh::build(scene), config).rssi_db; };
    CHECK(at_threads(1, run) == at_threads(4, run));
}

TEST_CASE("geometry maps")
{
    const Scene scene = oracle::random_scene(120, 4, 1.0);
    const CameraRayBundle rays = CameraRayBundle::pinhole(Vec3(4, 0.3, 0.2), Vec3::Zero(), Vec3::UnitZ(), 45.0, 24, 32);
    const auto run = [&] {
        const GeometryMaps m = render_geometry_maps(scene, rays);
        std::vector<double> flat;
        for (std::size_t i = 0; i < m.pixels(); ++i) {
            flat.insert(flat.end(), {m.depth[i], m.depth_sq[i], m.weight[i], m.normal[i].x(), m.normal[i].y(), m.normal[i].z()});
        }
        return flat;
    };
    CHECK(at_threads(1, run) == at_threads(4, run));
}

TEST_CASE("loss and gradient")
{
    const Scene scene = two_material();
    oracle::ProtocolParams p;
    p.grid = FrequencyGrid::linear(2e9, 10e9, 5);
    for (int k = 0; k < 5; ++k) {
        Antenna a;
        a.position = Vec3(1.5, -1.0 + 0.5 * k, 0.3);
        p.transmitters.push_back(a);
        a.position = Vec3(1.8, 1.0 - 0.5 * k, -0.2);
        p.receivers.push_back(a);
    }
    p.los = LosNlosParams{};
    const ObservationSet data = oracle::generate_observations(scene, oracle::Protocol::LinkPairs, p, 2);
    const AttributeBank bank = jitter(AttributeBank::from_scene(scene), 0.4, 8);
    const auto run = [&] {
        ProblemOptions options;
        options.los = p.los;
        const InverseProblem problem(scene, data, options);
        std::vector<double> out = problem.gradient(bank);
        out.push_back(problem.loss(bank));
        return out;
    };
    CHECK(at_threads(1, run) == at_threads(4, run));
}

TEST_CASE("fit")
{
    const Scene scene = two_material();
    oracle::ProtocolParams p;
    p.angles_deg = {-30, -15, 0, 15, 30};
    p.grid = FrequencyGrid::linear(5e9, 6e9, 3);
    const ObservationSet data = oracle::generate_observations(scene, oracle::Protocol::MonostaticSweep, p, 1);
    FitConfig config;
    config.iterations = 30;
    config.init_jitter = 0.3;
    config.seed = 4;
    const auto run = [&] { return fit(InverseProblem(scene, data), AttributeBank::from_scene(scene), config).loss_trace; };
    CHECK(at_threads(1, run) == at_threads(4, run));
}
