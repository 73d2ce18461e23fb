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
using rfsplat::testing::isotropic;
using rfsplat::testing::near;

namespace {

RFGaussian diag411()
{
    RFGaussian g;
    g.scale = Vec3(2, 1, 1);
    return g;
}

GeometryMaps flat_maps(int h, int w)
{
    GeometryMaps m(h, w);
    for (std::size_t i = 0; i < m.pixels(); ++i) {
        m.weight[i] = 1.0;
        m.depth[i] = 1.0;
        m.depth_sq[i] = 1.0;
        m.normal[i] = Vec3::UnitZ();
    }
    return m;
}

Scene facing_plate(const Vec3& normal)
{
    oracle::SyntheticSceneSpec spec;
    spec.rows = 20;
    spec.cols = 20;
    spec.spacing = 0.05;
    const Scene plate = oracle::generate_scene(spec);
    std::vector<RFGaussian> gs(plate.gaussians().begin(), plate.gaussians().end());
    for (auto& g : gs) g.normal = normal;
    return plate.with_gaussians(gs);
}

CameraRayBundle plate_camera() { return CameraRayBundle::pinhole(Vec3(2, 0, 0), Vec3::Zero(), Vec3::UnitZ(), 16.0, 24, 24); }

} // namespace

TEST_CASE("density is one at the mean")
{
    const RFGaussian g = isotropic(Vec3(0.3, -1, 2), 0.7);
    CHECK(gaussian_density(g, g.mu) == 1.0);
}

TEST_CASE("density at Mahalanobis distance one is exp(-1/2)")
{
    CHECK(near(gaussian_density(isotropic(Vec3::Zero(), 1.0), Vec3(1, 0, 0)), std::exp(-0.5), 1e-15));
    CHECK(near(gaussian_density(diag411(), Vec3(2, 0, 0)), std::exp(-0.5), 1e-15));
    CHECK(near(std::exp(-0.5), 0.60653, 1e-5));
}

TEST_CASE("cross-section of a sphere is the disc area")
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double r : {0.1, 1.0, 3.0}) {
        for (int k = 0; k < 20; ++k) {
            const Vec3 dir = Vec3(n(rng), n(rng), n(rng)).normalized();
            CHECK(near(projected_cross_section(isotropic(Vec3::Zero(), r), dir), kPi * r * r, 1e-12 * r * r));
        }
    }
}

TEST_CASE("cross-section of diag(4,1,1)")
{
    CHECK(near(projected_cross_section(diag411(), Vec3::UnitX()), kPi, 1e-12));
    CHECK(near(projected_cross_section(diag411(), Vec3::UnitY()), 2 * kPi, 1e-12));
    CHECK(near(projected_cross_section(diag411(), -Vec3::UnitY()), 2 * kPi, 1e-12));
}

TEST_CASE("cross-section matches the projected ellipse and is sign invariant")
{
    const Scene pool = oracle::random_scene(100, 21, 1.0);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    for (const RFGaussian& g : pool.gaussians()) {
        const Vec3 dir = Vec3(n(rng), n(rng), n(rng)).normalized();
        const double a = projected_cross_section(g, dir);
        CHECK(near(a, oracle::projected_ellipse_area(g.covariance(), dir), 1e-9 * a));
        CHECK(near(a, projected_cross_section(g, -dir), 1e-12 * a));
    }
}

TEST_CASE("cross-section is continuous in the direction")
{
    const Scene pool = oracle::random_scene(50, 22, 1.0);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n(0.0, 1.0);
    for (const RFGaussian& g : pool.gaussians()) {
        const Vec3 dir = Vec3(n(rng), n(rng), n(rng)).normalized();
        const Vec3 bumped = (dir + 1e-6 * Vec3(n(rng), n(rng), n(rng)).normalized()).normalized();
        const double a = projected_cross_section(g, dir);
        CHECK(std::abs(projected_cross_section(g, bumped) - a) / a < 1e-4);
    }
}

TEST_CASE("ill-conditioned covariance is a numerical error")
{
    RFGaussian g;
    g.scale = Vec3(1.0, 1.0, 1e-7);
    CHECK_THROWS_AS(projected_cross_section(g, Vec3::UnitZ()), NumericalError);
}

TEST_CASE("blending a single opaque sample")
{
    const GeometrySample s{2.0, Vec3::UnitY(), 1.0};
    const PixelBlend p = blend_geometry_samples(std::span(&s, 1));
    CHECK(p.depth == 2.0);
    CHECK(p.depth_sq == 4.0);
    CHECK(near(p.normal, Vec3::UnitY(), 0.0));
    CHECK(p.weight == 1.0);
}

TEST_CASE("blending two samples")
{
    const std::vector<GeometrySample> s{{1.0, Vec3::UnitZ(), 0.5}, {3.0, Vec3::UnitZ(), 1.0}};
    const PixelBlend p = blend_geometry_samples(s);
    CHECK(p.depth == 2.0);
    CHECK(p.depth_sq == 5.0);
    CHECK(p.weight == 1.0);
    GeometryMaps m(1, 1);
    m.depth[0] = p.depth;
    m.depth_sq[0] = p.depth_sq;
    m.weight[0] = p.weight;
    CHECK(loss_depth_uncertainty(m) == 1.0);
}

TEST_CASE("empty scene renders all-zero maps")
{
    const Scene empty;
    const CameraRayBundle rays = plate_camera();
    const GeometryMaps m = render_geometry_maps(empty, rays);
    for (std::size_t i = 0; i < m.pixels(); ++i) {
        CHECK(m.weight[i] == 0.0);
        CHECK(m.depth[i] == 0.0);
        CHECK(m.depth_sq[i] == 0.0);
        CHECK(m.normal[i] == Vec3::Zero());
    }
    CHECK(loss_depth_uncertainty(m) == 0.0);
    CHECK(loss_depth_normal(m, rays) == 0.0);
}

TEST_CASE("single Gaussian on the ray has no depth uncertainty")
{
    RFGaussian g = isotropic(Vec3(0, 0, 0), 0.1, 1.0);
    g.normal = Vec3::UnitX();
    const Scene scene = Scene::with_auto_bounds({g}, 0.1);
    CameraRayBundle rays;
    rays.origin = Vec3(2, 0, 0);
    rays.height = rays.width = 1;
    rays.directions = {-Vec3::UnitX()};
    const GeometryMaps m = render_geometry_maps(scene, rays);
    CHECK(near(m.depth[0], 2.0 * 0.99, 1e-12));
    CHECK(near(m.depth_sq[0], 4.0 * 0.99, 1e-12));
    CHECK(near(m.normal[0], 0.99 * Vec3::UnitX(), 1e-12));
    CHECK(loss_depth_uncertainty(m) == doctest::Approx(0.99 * 4.0 - std::pow(0.99 * 2.0, 2)).epsilon(1e-12));
}

TEST_CASE("D_sq >= D^2 on rendered maps")
{
    const Scene scene = oracle::random_scene(200, 31, 1.0);
    const CameraRayBundle rays = CameraRayBundle::pinhole(Vec3(4, 0.5, 0.3), Vec3::Zero(), Vec3::UnitZ(), 40.0, 32, 32);
    const GeometryMaps m = render_geometry_maps(scene, rays);
    std::size_t covered = 0;
    for (std::size_t i = 0; i < m.pixels(); ++i) {
        if (!(m.weight[i] > 0.0)) continue;
        ++covered;
        CHECK(m.weight[i] <= 1.0 + 1e-12);
        CHECK(m.depth_sq[i] >= m.depth[i] * m.depth[i] - 1e-12);
    }
    CHECK(covered > 0);
}

TEST_CASE("BVH and brute-force geometry maps agree")
{
    const Scene scene = oracle::random_scene(150, 32, 1.0);
    const CameraRayBundle rays = CameraRayBundle::pinhole(Vec3(0.2, 4, 0.1), Vec3::Zero(), Vec3::UnitZ(), 40.0, 16, 16);
    const GeometryMaps a = render_geometry_maps(scene, Bvh::build(scene), rays);
    const GeometryMaps b = render_geometry_maps(scene, rays);
    for (std::size_t i = 0; i < a.pixels(); ++i) {
        CHECK(near(a.depth[i], b.depth[i], 1e-12));
        CHECK(near(a.weight[i], b.weight[i], 1e-12));
    }
}

TEST_CASE("depth-normal loss of a fronto-parallel plate is near zero")
{
    const Scene plate = facing_plate(Vec3::UnitX());
    const CameraRayBundle rays = plate_camera();
    const GeometryMaps m = render_geometry_maps(plate, rays);
    CHECK(loss_depth_normal(m, rays) < 1e-3);
}

TEST_CASE("depth-normal loss of in-plane normals is sqrt(2)")
{
    const Scene plate = facing_plate(Vec3::UnitY());
    const CameraRayBundle rays = plate_camera();
    const GeometryMaps m = render_geometry_maps(plate, rays);
    CHECK(near(loss_depth_normal(m, rays), std::sqrt(2.0), 1e-3));
}

TEST_CASE("depth-normal loss excludes pixels without a gradient neighbourhood")
{
    GeometryMaps m(3, 3);
    m.weight[m.at(1, 1)] = 1.0;
    m.depth[m.at(1, 1)] = 1.0;
    m.normal[m.at(1, 1)] = Vec3::UnitZ();
    const CameraRayBundle rays = CameraRayBundle::pinhole(Vec3::Zero(), Vec3(0, 0, -1), Vec3::UnitY(), 30.0, 3, 3);
    CHECK(loss_depth_normal(m, rays) == 0.0);
}

TEST_CASE("normal smoothness")
{
    const std::vector<double> flat(25, 0.0);
    CHECK(loss_normal_smoothness(flat_maps(5, 5), flat) == 0.0);

    GeometryMaps step = flat_maps(5, 5);
    std::vector<double> edge(25, 0.0);
    for (int r = 0; r < 5; ++r)
        for (int c = 2; c < 5; ++c) {
            step.normal[step.at(r, c)] = Vec3::UnitX();
            edge[step.at(r, c)] = 3.0;
        }
    const double on_flat = loss_normal_smoothness(step, flat);
    const double on_edge = loss_normal_smoothness(step, edge);
    CHECK(on_flat > 0.0);
    CHECK(near(on_edge / on_flat, std::exp(-1.5), 1e-12));
    CHECK_THROWS_AS(loss_normal_smoothness(step, std::vector<double>(24, 0.0)), ValidationError);
}

TEST_CASE("geometric loss total")
{
    const GeometricLossParts ones{1, 1, 1, 1, 1};
    CHECK(loss_geometric_total({}, ones) == 0.0);
    GeometricLossWeights n_only;
    n_only.normal = 1.0;
    CHECK(loss_geometric_total(n_only, {0, 0, 0.3, 0, 0}) == doctest::Approx(0.3));
    CHECK(loss_geometric_total({1, 0.2, 0.1, 0.05, 0.05}, ones) == doctest::Approx(1.4).epsilon(1e-14));
}
