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

#include "rfsplat/geometry.hpp"
#include "rfsplat/oracle.hpp"
#include "rfsplat/visibility.hpp"
#include "support.hpp"

#include <random>

using namespace rfsplat;
using rfsplat::testing::frequency_for;
using rfsplat::testing::isotropic;
using rfsplat::testing::near;

namespace {

Vec3 random_point(std::mt19937_64& rng, double half = 1.5)
{
    std::uniform_real_distribution<double> u(-half, half);
    return Vec3(u(rng), u(rng), u(rng));
}

Scene line_of(std::vector<RFGaussian> gs) { return Scene::with_auto_bounds(std::move(gs), 0.5); }

} // namespace

TEST_CASE("ray through the center takes the full opacity")
{
    const RFGaussian g = isotropic(Vec3(3, 0, 0), 0.2, 0.8);
    const RayAlpha a = ray_gaussian_alpha(g, Vec3::Zero(), Vec3::UnitX());
    CHECK(a.hit);
    CHECK(near(a.alpha, 0.8, 1e-15));
    CHECK(near(a.t, 3.0, 1e-12));
}

TEST_CASE("ray at Mahalanobis distance one and four")
{
    RFGaussian g = isotropic(Vec3(3, 0, 0), 0.2, 0.8);
    g.scale = Vec3(0.2, 0.5, 0.1);
    const RayAlpha one = ray_gaussian_alpha(g, Vec3(0, 0.5, 0), Vec3::UnitX());
    CHECK(near(one.alpha, 0.8 * std::exp(-0.5), 1e-14));
    CHECK(near(one.alpha, 0.48522, 1e-5));
    const RayAlpha four = ray_gaussian_alpha(g, Vec3(0, 0, 0.4), Vec3::UnitX());
    CHECK(!four.hit);
    CHECK(four.alpha == 0.0);
}

TEST_CASE("opacity contribution is capped")
{
    const RayAlpha a = ray_gaussian_alpha(isotropic(Vec3(1, 0, 0), 0.1, 1.0), Vec3::Zero(), Vec3::UnitX());
    CHECK(a.alpha == kAlphaCap);
}

TEST_CASE("closest approach of a rotated Gaussian")
{
    RFGaussian g;
    g.mu = Vec3(2, 1, 0);
    g.scale = Vec3(0.3, 0.1, 0.2);
    g.rotation = Quat(Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()));
    const Vec3 o(0, 0, 0), d = Vec3(1, 0.4, 0.1).normalized();
    const ClosestApproach c = closest_approach(g.mu, g.whitening(), o, d);
    const Mat3 inv = g.covariance().inverse();
    auto m2 = [&](double t) {
        const Vec3 x = o + t * d - g.mu;
        return x.dot(inv * x);
    };
    CHECK(near(c.mahalanobis2, m2(c.t), 1e-10));
    CHECK(m2(c.t - 1e-4) > c.mahalanobis2);
    CHECK(m2(c.t + 1e-4) > c.mahalanobis2);
}

TEST_CASE("bvh of one Gaussian")
{
    const Scene scene = line_of({isotropic(Vec3::Zero(), 0.2)});
    const Bvh bvh = Bvh::build(scene);
    REQUIRE(bvh.nodes().size() == 1);
    CHECK(bvh.nodes()[0].leaf());
    CHECK(bvh.box_candidates(Vec3(-2, 0.5, 0.1), Vec3::UnitX(), 0, 10) == std::vector<std::uint32_t>{0});
    CHECK(bvh.box_candidates(Vec3(-2, 0.7, 0.1), Vec3::UnitX(), 0, 10).empty());
    CHECK(ray_chain(bvh, scene, Vec3(-2, 5, 0), Vec3::UnitX()).empty());
}

TEST_CASE("empty scene gives an empty hierarchy")
{
    const Scene scene;
    const Bvh bvh = Bvh::build(scene);
    CHECK(bvh.empty());
    CHECK(bvh.trace(Vec3::Zero(), Vec3::UnitX(), 0, 1).empty());
    CHECK(visibility_chain(bvh, scene, Vec3::Zero(), Vec3::UnitX()).visibility == 1.0);
}

TEST_CASE("bvh candidates equal brute-force box tests")
{
    const Scene scene = oracle::random_scene(500, 41, 1.0);
    const Bvh bvh = Bvh::build(scene);
    std::mt19937_64 rng(42);
    for (int k = 0; k < 1000; ++k) {
        const Vec3 a = random_point(rng), b = random_point(rng);
        const Vec3 d = (b - a).normalized();
        const double len = (b - a).norm();
        std::vector<std::uint32_t> brute;
        for (std::uint32_t i = 0; i < scene.size(); ++i)
            if (segment_hits_box(three_sigma_box(scene[i]), a, d.cwiseInverse(), d, 0.0, len)) brute.push_back(i);
        CHECK(bvh.box_candidates(a, d, 0.0, len) == brute);
    }
}

TEST_CASE("axis-parallel segments against boxes")
{
    const Aabb box{Vec3(-1, -1, -1), Vec3(1, 1, 1)};
    const Vec3 d = Vec3::UnitX();
    CHECK(segment_hits_box(box, Vec3(-3, 0, 0), d.cwiseInverse(), d, 0, 10));
    CHECK(!segment_hits_box(box, Vec3(-3, 2, 0), d.cwiseInverse(), d, 0, 10));
    CHECK(!segment_hits_box(box, Vec3(-3, 0, 0), d.cwiseInverse(), d, 0, 1));
}

TEST_CASE("visibility examples")
{
    const Vec3 from(-2, 0, 0), to(2, 0, 0);
    {
        const Scene scene = line_of({isotropic(Vec3(0, 3, 0), 0.1, 1.0)});
        CHECK(visibility_chain(Bvh::build(scene), scene, from, to).visibility == 1.0);
    }
    {
        const Scene scene = line_of({isotropic(Vec3::Zero(), 0.1, 1.0)});
        CHECK(near(visibility_chain(Bvh::build(scene), scene, from, to).visibility, 0.01, 1e-15));
    }
    {
        const Scene scene = line_of({isotropic(Vec3(-0.5, 0, 0), 0.1, 0.3), isotropic(Vec3(0.5, 0, 0), 0.1, 0.5)});
        const VisibilityResult v = visibility_chain(Bvh::build(scene), scene, from, to);
        CHECK(near(v.visibility, 0.35, 1e-15));
        REQUIRE(v.chain.size() == 2);
        CHECK(v.chain[0].index == 0);
        CHECK(v.chain[1].index == 1);
    }
}

TEST_CASE("destination and endpoints never occlude")
{
    const Scene scene = line_of({isotropic(Vec3(2, 0, 0), 0.1, 1.0), isotropic(Vec3(-2, 0, 0), 0.1, 1.0)});
    const Bvh bvh = Bvh::build(scene);
    CHECK(visibility_chain(bvh, scene, Vec3(-2, 0, 0), Vec3(2, 0, 0)).visibility == 1.0);
    const Scene middle = line_of({isotropic(Vec3::Zero(), 0.1, 1.0)});
    CHECK(visibility_chain(Bvh::build(middle), middle, Vec3(-2, 0, 0), Vec3::Zero(), 0u).visibility == 1.0);
    CHECK_THROWS_AS(visibility_chain(bvh, scene, Vec3::Zero(), Vec3::Zero()), DegenerateGeometryError);
}

TEST_CASE("equal distances are ordered by index")
{
    const Scene scene = line_of({isotropic(Vec3::Zero(), 0.1, 0.4), isotropic(Vec3::Zero(), 0.2, 0.4), isotropic(Vec3::Zero(), 0.3, 0.4)});
    const RayHitChain chain = ray_chain(Bvh::build(scene), scene, Vec3(-2, 0, 0), Vec3::UnitX());
    REQUIRE(chain.size() == 3);
    for (std::uint32_t i = 0; i < 3; ++i) CHECK(chain[i].index == i);
}

TEST_CASE("bvh visibility equals the exhaustive oracle")
{
    std::mt19937_64 rng(43);
    for (std::size_t count : {1u, 7u, 64u, 500u}) {
        const Scene scene = oracle::random_scene(count, rng(), 1.0);
        const Bvh bvh = Bvh::build(scene);
        for (int k = 0; k < 300; ++k) {
            const Vec3 a = random_point(rng), b = random_point(rng);
            const VisibilityResult fast = visibility_chain(bvh, scene, a, b);
            const auto slow = oracle::segment_hits(scene, a, b);
            REQUIRE(fast.chain.size() == slow.size());
            for (std::size_t i = 0; i < slow.size(); ++i) CHECK(fast.chain[i].index == slow[i].index);
            CHECK(near(fast.visibility, oracle::segment_visibility(scene, a, b), 1e-12));
        }
    }
}

TEST_CASE("visibility is reciprocal")
{
    const Scene scene = oracle::random_scene(300, 44, 1.0);
    const Bvh bvh = Bvh::build(scene);
    std::mt19937_64 rng(45);
    for (int k = 0; k < 500; ++k) {
        const Vec3 a = random_point(rng), b = random_point(rng);
        CHECK(near(visibility_chain(bvh, scene, a, b).visibility, visibility_chain(bvh, scene, b, a).visibility, 1e-12));
    }
}

TEST_CASE("adding a Gaussian never increases visibility")
{
    std::mt19937_64 rng(46);
    Scene scene = oracle::random_scene(50, 47, 1.0);
    const Scene extra = oracle::random_scene(50, 48, 1.0);
    std::vector<std::pair<Vec3, Vec3>> segments;
    for (int k = 0; k < 200; ++k) segments.emplace_back(random_point(rng), random_point(rng));
    std::vector<double> before;
    for (const auto& [a, b] : segments) before.push_back(visibility_chain(Bvh::build(scene), scene, a, b).visibility);
    std::vector<RFGaussian> gs(scene.gaussians().begin(), scene.gaussians().end());
    for (const RFGaussian& g : extra.gaussians()) {
        gs.push_back(g);
        Aabb bounds = scene.bounds();
        bounds.grow(three_sigma_box(g));
        scene = Scene(gs, bounds);
        const Bvh bvh = Bvh::build(scene);
        for (std::size_t k = 0; k < segments.size(); ++k) {
            const double v = visibility_chain(bvh, scene, segments[k].first, segments[k].second).visibility;
            CHECK(v <= before[k]);
            before[k] = v;
        }
    }
}

TEST_CASE("incident field examples")
{
    Antenna tx;
    const RFGaussian g = isotropic(Vec3(1, 0, 0), 2.0);
    REQUIRE(near(projected_cross_section(g, Vec3::UnitX()), 4 * kPi, 1e-12));
    const double f = frequency_for(1.0);
    CHECK(incident_field(tx, g, 0.0, f, 1.0).field[0] == Complex(0.0));
    const IncidentSample s = incident_field(tx, g, 1.0, f, 1.0);
    CHECK(near(s.field[0], Complex(1.0, 0.0), 1e-12));
    CHECK(near(s.direction, Vec3::UnitX(), 0.0));
    CHECK(s.solid_angle == 1.0);
    const RFGaussian far = isotropic(Vec3(2, 0, 0), 2.0);
    CHECK(near(incident_field(tx, far, 1.0, f, 1.0).field[0], Complex(0.5, 0.0), 1e-12));
    CHECK_THROWS_AS(incident_field(tx, isotropic(Vec3(1e-7, 0, 0), 1.0), 1.0, f, 1.0), DegenerateGeometryError);
}

TEST_CASE("incident power falls 6.021 dB per doubling and phase tracks distance")
{
    Antenna tx;
    tx.position = Vec3(0.1, -0.2, 0.3);
    const double f = 5.8e9;
    const double lambda = wavelength_of(f);
    const Vec3 dir = Vec3(1, 2, -0.5).normalized();
    for (double d = 0.5; d < 40.0; d *= 2.0) {
        const Complex near_field = incident_field(tx, isotropic(tx.position + d * dir, 0.05), 1.0, f, 1.0).field[0];
        const Complex far_field = incident_field(tx, isotropic(tx.position + 2 * d * dir, 0.05), 1.0, f, 1.0).field[0];
        CHECK(near(power_db(near_field) - power_db(far_field), 20.0 * std::log10(2.0), 1e-9));
        CHECK(near(std::remainder(std::arg(far_field) - std::arg(near_field) + 2 * kPi * d / lambda, 2 * kPi), 0.0, 1e-6));
    }
    CHECK(near(20.0 * std::log10(2.0), 6.021, 1e-3));
}

TEST_CASE("incident field carries the waveform and the transmit pattern")
{
    Antenna horn;
    horn.pattern = PatternType::DirectionalHorn;
    horn.boresight = Vec3::UnitX();
    horn.gain = 4.0;
    const RFGaussian g = isotropic(Vec3(1, 0, 0), 2.0);
    const double f = frequency_for(1.0);
    CHECK(near(incident_field(horn, g, 1.0, f, Complex(0, 3)).field[0], Complex(0, 6), 1e-12));
    CHECK(incident_field(horn, isotropic(Vec3(-1, 0, 0), 2.0), 1.0, f, 1.0).field[0] == Complex(0.0));
}
