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

// Seeded property suites comparing the main code paths with the oracles.
// Shared by `rfsplat oracle` and the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

namespace rfsplat::oracle {

struct CheckRow {
    std::string label;
    double value = 0.0;
    double limit = 0.0;
    bool passed = false;
};

struct CheckReport {
    std::string name;
    std::vector<CheckRow> rows;
    double worst = 0.0;
    bool passed = true;
    double seconds = 0.0;

    void add(std::string label, double value, double limit);
    /// One line per row plus a summary line.
    std::string table() const;
};

/// Analytic raw-parameter gradients against extended-precision central
/// differences on random scenes (10..50 Gaussians, 8 records each, mixed
/// RSSI and complex records, LoS on every other scene).
CheckReport gradient_suite(std::uint64_t seed, std::size_t scenes = 20);

/// Exact-direction renderer against brute_force_render on random scenes
/// (relative to the sum of term magnitudes), limit 1e-12.
CheckReport blend_suite(std::uint64_t seed, std::size_t scenes = 50);

/// 1-degree FoV renderer against brute_force_render on a 10 x 10 plate,
/// relative amplitude difference, limit 3%.
CheckReport plate_binning_check();

/// Cross-section formula against the projected-ellipse area (limit 1e-9) and
/// a Monte-Carlo silhouette estimate (limit 1%) for random (Sigma, n).
CheckReport cross_section_suite(std::uint64_t seed, std::size_t cases = 100, std::size_t samples = 1000000);

/// BVH visibility chains against exhaustive search: index sequences must be
/// identical and the visibility product within 1e-12.
CheckReport visibility_suite(std::uint64_t seed, std::size_t scenes = 50, std::size_t segments = 1000,
                             std::size_t max_gaussians = 500);

} // namespace rfsplat::oracle
