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

#pragma once

// Reference implementations that share no tracing, visibility or blending
// code with the main renderer, plus synthetic scenes and observation sets.
// Everything here is quadratic or sampling based and meant for tests.

#include "rfsplat/renderer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rfsplat::oracle {

inline constexpr std::size_t kBruteForceLimit = 2000;

struct BruteHit {
    std::uint32_t index = 0;
    double t = 0.0;
    double density = 0.0;
};

/// All Gaussians within 3 sigma of the open segment (eps, L - eps), eps = 1e-6 L,
/// by exhaustive search with an explicit inverse covariance.
std::vector<BruteHit> segment_hits(const Scene& scene, const Vec3& from, const Vec3& to, std::optional<std::uint32_t> exclude = std::nullopt);

/// Product of (1 - min(alpha rho, 0.99)) over segment_hits.
double segment_visibility(const Scene& scene, const Vec3& from, const Vec3& to, std::optional<std::uint32_t> exclude = std::nullopt);

/// Exact-direction received signal by a per-Gaussian loop. Refuses scenes
/// above kBruteForceLimit Gaussians with PreconditionError.
Complex brute_force_render(const Scene& scene, const Antenna& tx, const Antenna& rx, double frequency_hz,
                           const std::optional<LosNlosParams>& los = std::nullopt, const RenderOptions& options = {});

/// Per-Gaussian contributions of brute_force_render (without LoS).
std::vector<Complex> brute_force_terms(const Scene& scene, const Antenna& tx, const Antenna& rx, double frequency_hz,
                                       const RenderOptions& options = {});

struct CrossSectionEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double analytic = 0.0; ///< pi sqrt(det(P Sigma P^T)) over the plane orthogonal to n
};

/// pi sqrt(det(P Sigma P^T)) with P an orthonormal basis of the plane orthogonal to n.
double projected_ellipse_area(const Mat3& covariance, const Vec3& direction);

/// Area of the 1-sigma silhouette estimated by casting `samples` lines along
/// `direction` through the rectangle circumscribing the silhouette. Requires
/// samples >= 1e5.
CrossSectionEstimate monte_carlo_cross_section(const RFGaussian& g, const Vec3& direction, std::size_t samples, std::uint64_t seed);

enum class SceneTemplate { Plate, TwoMaterialPlate, RandomCloud, Classroom };

struct MaterialSpec {
    double alpha = 0.9;
    double roughness = 4.0;
    double gamma_mag = 0.7;
    double gamma_phase = 0.0;
};

struct SyntheticSceneSpec {
    SceneTemplate kind = SceneTemplate::Plate;
    std::size_t rows = 10;       ///< plate rows (along z)
    std::size_t cols = 10;       ///< plate columns (along y)
    double spacing = 0.05;       ///< plate center spacing, meters
    std::size_t count = 100;     ///< RandomCloud size
    double cloud_extent = 1.0;   ///< RandomCloud half-width
    MaterialSpec material{};     ///< Plate, and the left half of TwoMaterialPlate
    MaterialSpec second{0.9, 10.0, 0.3, -1.0};
    std::uint64_t seed = 0;
};

/// Deterministic in the spec. Plates lie in the x = 0 plane facing +x,
/// centered at the origin, with in-plane sigma = spacing / 3.5 and normal
/// sigma a tenth of that. The classroom is a 6 x 4 x 3 m box with desks and
/// a pillar.
Scene generate_scene(const SyntheticSceneSpec& spec);

/// Desk-top height of the classroom template.
inline constexpr double kClassroomDeskHeight = 0.75;

/// The 24 candidate transmitter positions of the classroom template.
std::vector<Vec3> classroom_tx_positions();

enum class Protocol { MonostaticSweep, RadioMapGrid, DistanceSet, LinkPairs };

struct ProtocolParams {
    std::string scene_id = "synthetic";
    FrequencyGrid grid = FrequencyGrid::single(5.8e9);
    Antenna antenna{};                   ///< radar / Rx template
    // MonostaticSweep
    double range = 3.0;
    std::vector<double> angles_deg;
    // RadioMapGrid
    std::vector<Antenna> transmitters;
    MapGrid map{};
    double test_fraction = 0.0;          ///< RadioMapGrid: share of cells tagged test
    // LinkPairs: every transmitter against every receiver
    std::vector<Antenna> receivers;
    // DistanceSet
    std::vector<double> train_distances{2.0, 2.5, 4.0, 4.5, 5.0};
    std::vector<double> test_distances{3.0};
    /// Use complex records instead of RSSI.
    bool complex_records = false;
    std::optional<LosNlosParams> los;
    RenderOptions render{};
};

/// Forward-rendered records with optional additive Gaussian noise (dB) drawn
/// from a generator seeded by `seed`. MonostaticSweep and DistanceSet place
/// co-located radars at the given angles in the xy-plane; DistanceSet repeats
/// the angles at every distance and tags them by split. LinkPairs renders
/// every (transmitter, receiver) pair, all tagged train.
ObservationSet generate_observations(const Scene& scene, Protocol protocol, const ProtocolParams& params, std::uint64_t seed,
                                     double noise_db = 0.0);

/// Random valid scene of `count` Gaussians inside [-extent, extent]^3.
Scene random_scene(std::size_t count, std::uint64_t seed, double extent = 1.0);

} // namespace rfsplat::oracle
