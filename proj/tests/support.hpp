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

// Small helpers shared by the unit tests.

#include "rfsplat/core.hpp"
#include "rfsplat/scene.hpp"

#include <doctest.h>

#include <cmath>

namespace rfsplat::testing {

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
inline bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }
inline bool near(const Vec3& a, const Vec3& b, double tol) { return (a - b).norm() <= tol; }
inline bool near(const Mat3& a, const Mat3& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

inline RFGaussian isotropic(const Vec3& mu, double sigma, double alpha = 0.5)
{
    RFGaussian g;
    g.mu = mu;
    g.scale = Vec3::Constant(sigma);
    g.alpha = alpha;
    return g;
}

/// Frequency whose wavelength is exactly `lambda` meters.
inline double frequency_for(double lambda) { return kSpeedOfLight / lambda; }

} // namespace rfsplat::testing
