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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rfsplat {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

/// Opacity contributions along a ray never exceed this value.
inline constexpr double kAlphaCap = 0.99;

/// Mahalanobis radius beyond which a Gaussian does not interact with a ray.
inline constexpr double kCullSigma = 3.0;

/// Power floor used when a signal is exactly zero.
inline constexpr double kDbFloor = -300.0;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented range or shape constraint.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computation hit an ill-conditioned or non-finite state.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its precondition (empty inputs, size caps).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Two points that must be distinct coincide (e.g. antenna on top of a Gaussian).
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

/// Wrap an angle to (-pi, pi].
inline double wrap_phase(double phase)
{
    double wrapped = std::remainder(phase, 2.0 * kPi);
    if (wrapped <= -kPi) wrapped += 2.0 * kPi;
    return wrapped;
}

/// 10*log10(|s|^2), floored at kDbFloor.
inline double power_db(Complex s)
{
    const double p = std::norm(s);
    if (!(p > 0.0)) return kDbFloor;
    return std::max(kDbFloor, 10.0 * std::log10(p));
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double wavelength_of(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

} // namespace rfsplat
