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

#include "rfsplat/scene.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <random>
#include <set>

using namespace rfsplat;
using rfsplat::testing::near;

namespace {

std::vector<RFGaussian> three_valid()
{
    std::vector<RFGaussian> gs(3);
    for (int i = 0; i < 3; ++i) gs[i].mu = Vec3(i, 0, 0);
    return gs;
}

Quat random_rotation(std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Quat q(n(rng), n(rng), n(rng), n(rng));
    q.normalize();
    return q;
}

} // namespace

TEST_CASE("covariance of identity scale and rotation is the identity")
{
    CHECK(near(covariance_from(Vec3(1, 1, 1), Quat::Identity()), Mat3::Identity(), 0.0));
}

TEST_CASE("axis-aligned covariance is diag(scale^2)")
{
    Mat3 expected = Vec3(4, 1, 1).asDiagonal();
    CHECK(near(covariance_from(Vec3(2, 1, 1), Quat::Identity()), expected, 1e-15));
}

TEST_CASE("rotating an isotropic covariance leaves it unchanged")
{
    const Quat rz(Eigen::AngleAxisd(kPi / 2, Vec3::UnitZ()));
    CHECK(near(covariance_from(Vec3(1, 1, 1), rz), Mat3::Identity(), 1e-12));
}

TEST_CASE("covariance rejects non-positive scale")
{
    CHECK_THROWS_AS(covariance_from(Vec3(1, 0, 1), Quat::Identity()), ValidationError);
    CHECK_THROWS_AS(covariance_from(Vec3(-1, 1, 1), Quat::Identity()), ValidationError);
}

TEST_CASE("covariance is symmetric with eigenvalues scale^2")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> s(0.01, 3.0);
    for (int k = 0; k < 200; ++k) {
        const Vec3 scale(s(rng), s(rng), s(rng));
        const Mat3 c = covariance_from(scale, random_rotation(rng));
        CHECK(near(c, c.transpose(), 0.0));
        Eigen::SelfAdjointEigenSolver<Mat3> eig(c);
        Vec3 want = scale.cwiseProduct(scale);
        std::sort(want.data(), want.data() + 3);
        CHECK(near(eig.eigenvalues(), want, 1e-10));
    }
}

TEST_CASE("covariance is rotation equivariant")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> s(0.05, 2.0);
    for (int k = 0; k < 200; ++k) {
        const Vec3 scale(s(rng), s(rng), s(rng));
        const Quat q1 = random_rotation(rng), q2 = random_rotation(rng);
        const Mat3 r2 = q2.toRotationMatrix();
        CHECK(near(covariance_from(scale, q2 * q1), r2 * covariance_from(scale, q1) * r2.transpose(), 1e-10));
    }
}

TEST_CASE("valid three-Gaussian scene has an empty report")
{
    const Scene scene = Scene::with_auto_bounds(three_valid(), 0.1);
    CHECK(validate_scene(scene).empty());
}

TEST_CASE("alpha out of range is reported with its index")
{
    auto gs = three_valid();
    gs[2].alpha = 1.5;
    const ValidationReport report = validate_scene(Scene::with_auto_bounds(gs, 0.1));
    REQUIRE(report.size() == 1);
    CHECK(report[0].index == std::optional<std::size_t>(2));
    CHECK(report[0].field == "alpha");
}

TEST_CASE("roughness below one is reported")
{
    auto gs = three_valid();
    gs[0].roughness = 0.5;
    const ValidationReport report = validate_scene(Scene::with_auto_bounds(gs, 0.1));
    REQUIRE(report.size() == 1);
    CHECK(report[0].index == std::optional<std::size_t>(0));
    CHECK(report[0].field == "roughness");
}

TEST_CASE("validation lists every violation")
{
    auto gs = three_valid();
    gs[0].gamma_mag = 1.2;
    gs[1].normal = Vec3(0, 0, 2);
    gs[2].scale.x() = 0.0;
    const ValidationReport report = validate_scene(Scene::with_auto_bounds(three_valid(), 0.1).with_gaussians(gs));
    CHECK(report.size() >= 3);
    std::set<std::size_t> indices;
    for (const auto& issue : report)
        if (issue.index) indices.insert(*issue.index);
    CHECK(indices == std::set<std::size_t>{0, 1, 2});
}

TEST_CASE("Gaussian outside the bounds is reported")
{
    auto gs = three_valid();
    for (auto& g : gs) g.scale = Vec3::Constant(0.1);
    const Scene scene(gs, Aabb{Vec3(-0.5, -1, -1), Vec3(1.5, 1, 1)});
    const ValidationReport report = validate_scene(scene);
    REQUIRE(!report.empty());
    CHECK(report[0].index == std::optional<std::size_t>(2));
}

TEST_CASE("frozen geometry rejects geometry edits but accepts RF edits")
{
    const Scene scene = Scene::with_auto_bounds(three_valid(), 0.1).frozen();
    CHECK(scene.geometry_frozen());
    CHECK_THROWS_AS(scene.with_geometry(0, Vec3(0, 1, 0), Vec3::Ones(), Quat::Identity(), Vec3::UnitZ()), ValidationError);
    const Scene edited = scene.with_rf_attributes(1, 0.3, 4.0, 0.2, 3 * kPi);
    CHECK(edited[1].alpha == 0.3);
    CHECK(near(edited[1].gamma_phase, kPi, 1e-12));
    CHECK(scene[1].alpha == 0.5);
    auto moved = three_valid();
    moved[0].mu.y() = 0.2;
    CHECK_THROWS_AS(scene.with_gaussians(moved), ValidationError);
}

TEST_CASE("frequency grids")
{
    const FrequencyGrid g = FrequencyGrid::linear(2e9, 10e9, 5);
    REQUIRE(g.size() == 5);
    CHECK(g[0] == 2e9);
    CHECK(g[4] == 10e9);
    CHECK(near(g[1], 4e9, 1e-3));
    CHECK_THROWS_AS(FrequencyGrid(std::vector<double>{}), ValidationError);
    CHECK_THROWS_AS(FrequencyGrid({2e9, 1e9}), ValidationError);
    CHECK_THROWS_AS(FrequencyGrid({-1.0}), ValidationError);
}

TEST_CASE("observation set validation")
{
    ObservationSet set;
    set.scene_id = "s";
    set.grid = FrequencyGrid::single(1e9);
    set.transmitters.push_back(Antenna{});
    set.tx_ids.push_back("tx");
    Observation o;
    o.rx.position = Vec3(1, 0, 0);
    o.rssi_db = -40.0;
    set.records.push_back(o);
    CHECK_NOTHROW(set.validate());

    ObservationSet bad_freq = set;
    bad_freq.records[0].frequency_index = 1;
    CHECK_THROWS_AS(bad_freq.validate(), ValidationError);

    ObservationSet bad_rssi = set;
    bad_rssi.records[0].rssi_db = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(bad_rssi.validate(), ValidationError);

    ObservationSet missing = set;
    missing.records[0].rssi_db.reset();
    CHECK_THROWS_AS(missing.validate(), ValidationError);

    ObservationSet bad_tx = set;
    bad_tx.records[0].tx = 3;
    CHECK_THROWS_AS(bad_tx.validate(), ValidationError);
}

TEST_CASE("antenna patterns")
{
    Antenna horn;
    horn.pattern = PatternType::DirectionalHorn;
    horn.gain = 4.0;
    horn.boresight = Vec3::UnitX();
    CHECK(near(horn.pattern_gain(Vec3::UnitX()), Complex(2.0, 0.0), 1e-15));
    CHECK(horn.pattern_gain(-Vec3::UnitX()) == Complex(0.0));
    const Vec3 off = Vec3(1, 1, 0).normalized();
    CHECK(near(horn.power_gain(off), 4.0 * 0.25, 1e-12));
    Antenna omni;
    CHECK(omni.power_gain(Vec3(0, 0, -1)) == 1.0);
    horn.boresight = Vec3(2, 0, 0);
    CHECK_THROWS_AS(horn.validate(), ValidationError);
}
