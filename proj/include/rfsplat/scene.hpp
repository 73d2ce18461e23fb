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

#include "rfsplat/core.hpp"

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rfsplat {

/// Builds Sigma = R diag(scale^2) R^T. Throws ValidationError for non-positive
/// scale or a rotation whose norm is not within 1e-9 of one.
Mat3 covariance_from(const Vec3& scale, const Quat& rotation);

/// One scene primitive. Geometry (mu, scale, rotation, normal) is fixed during
/// RF fitting; the remaining fields are the learnable RF attributes.
struct RFGaussian {
    Vec3 mu = Vec3::Zero();
    Vec3 scale = Vec3::Ones();      ///< per-axis standard deviation, meters
    Quat rotation = Quat::Identity();
    Vec3 normal = Vec3::UnitZ();
    double alpha = 0.5;             ///< opacity in [0, 1]
    double roughness = 2.0;         ///< lobe exponent, >= 1
    double gamma_mag = 0.5;         ///< |reflection coefficient| in [0, 1]
    double gamma_phase = 0.0;       ///< arg(reflection coefficient), (-pi, pi]

    Mat3 covariance() const { return covariance_from(scale, rotation); }
    Complex gamma() const { return std::polar(gamma_mag, gamma_phase); }
    double max_scale() const { return scale.maxCoeff(); }

    /// Maps world offsets to the whitened frame where Sigma becomes identity:
    /// W = diag(1/scale) R^T.
    Mat3 whitening() const;
};

struct Aabb {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

    bool empty() const { return (lo.array() > hi.array()).any(); }
    bool contains(const Vec3& p) const { return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all(); }
    void grow(const Vec3& p)
    {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    void grow(const Aabb& b)
    {
        lo = lo.cwiseMin(b.lo);
        hi = hi.cwiseMax(b.hi);
    }
    Aabb padded(double pad) const { return {lo.array() - pad, hi.array() + pad}; }
    Vec3 center() const { return 0.5 * (lo + hi); }
    Vec3 extent() const { return hi - lo; }
    bool operator==(const Aabb&) const = default;
};

/// Axis-aligned box enclosing the 3-sigma ellipsoid of g.
Aabb three_sigma_box(const RFGaussian& g);

/// Immutable collection of Gaussians. Copies share storage; edits return a new
/// Scene. When geometry is frozen, geometric edits are rejected.
class Scene {
public:
    Scene() = default;
    Scene(std::vector<RFGaussian> gaussians, Aabb bounds, bool geometry_frozen = false);

    /// Bounds computed as the union of 3-sigma boxes plus `margin`.
    static Scene with_auto_bounds(std::vector<RFGaussian> gaussians, double margin = 0.0, bool geometry_frozen = false);

    std::span<const RFGaussian> gaussians() const { return *gaussians_; }
    const RFGaussian& operator[](std::size_t i) const { return (*gaussians_)[i]; }
    std::size_t size() const { return gaussians_->size(); }
    bool empty() const { return gaussians_->empty(); }
    const Aabb& bounds() const { return bounds_; }
    bool geometry_frozen() const { return frozen_; }

    Scene frozen() const;

    /// New scene with the RF attributes of Gaussian i replaced (phase is wrapped).
    Scene with_rf_attributes(std::size_t i, double alpha, double roughness, double gamma_mag, double gamma_phase) const;

    /// New scene with the geometry of Gaussian i replaced. Throws ValidationError when frozen.
    Scene with_geometry(std::size_t i, const Vec3& mu, const Vec3& scale, const Quat& rotation, const Vec3& normal) const;

    /// New scene with all Gaussians replaced by `gaussians` after checking that
    /// only RF attributes differ when the geometry is frozen.
    Scene with_gaussians(std::vector<RFGaussian> gaussians) const;

private:
    std::shared_ptr<const std::vector<RFGaussian>> gaussians_ = std::make_shared<const std::vector<RFGaussian>>();
    Aabb bounds_;
    bool frozen_ = false;
};

struct ValidationIssue {
    std::optional<std::size_t> index; ///< Gaussian index, empty for scene-level issues
    std::string field;
    std::string message;
};

using ValidationReport = std::vector<ValidationIssue>;

/// Lists every violated invariant; an empty report means the scene is valid.
ValidationReport validate_scene(const Scene& scene);

enum class PatternType { Omni, DirectionalHorn };

std::string to_string(PatternType p);
PatternType pattern_from_string(const std::string& s);

/// Transmit or receive antenna. The directional pattern is the amplitude
/// cosine-power law max(0, w.b)^q about the boresight b.
struct Antenna {
    Vec3 position = Vec3::Zero();
    double power_watts = 1.0;
    double gain = 1.0;
    PatternType pattern = PatternType::Omni;
    Vec3 boresight = Vec3::UnitX();
    double pattern_exponent = 2.0;
    Complex waveform{1.0, 0.0}; ///< transmitted complex amplitude (Tx only)

    /// Receive pattern C^R for a look direction (unit vector from the antenna outward).
    Complex pattern_gain(const Vec3& direction) const;
    /// Power gain toward a direction, used on the transmit side.
    double power_gain(const Vec3& direction) const;

    void validate() const;
};

/// Strictly ascending, nonempty list of positive frequencies (Hz).
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> samples);

    static FrequencyGrid single(double frequency_hz) { return FrequencyGrid({frequency_hz}); }
    static FrequencyGrid linear(double first_hz, double last_hz, std::size_t count);

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    double operator[](std::size_t i) const { return samples_[i]; }
    double wavelength(std::size_t i) const { return wavelength_of(samples_[i]); }
    const std::vector<double>& samples() const { return samples_; }
    bool operator==(const FrequencyGrid&) const = default;

private:
    std::vector<double> samples_;
};

struct ComplexSignal {
    FrequencyGrid grid;
    std::vector<Complex> values;

    ComplexSignal() = default;
    ComplexSignal(FrequencyGrid g, std::vector<Complex> v);

    std::size_t size() const { return values.size(); }
    double rssi_db(std::size_t i) const { return power_db(values[i]); }
};

enum class Split { Train, Test };

std::string to_string(Split s);
Split split_from_string(const std::string& s);

struct Observation {
    std::size_t tx = 0;           ///< index into ObservationSet::transmitters
    Antenna rx;
    std::size_t frequency_index = 0;
    std::optional<double> rssi_db;
    std::optional<Complex> sample; ///< complex record instead of RSSI
    Split split = Split::Train;
};

/// Measured (or synthesized) records that drive inverse rendering.
struct ObservationSet {
    std::string scene_id;
    std::string units = "dB";
    FrequencyGrid grid;
    std::vector<std::string> tx_ids;
    std::vector<Antenna> transmitters;
    std::vector<Observation> records;

    /// Throws ValidationError on invalid indices, missing or non-finite values.
    void validate() const;
    ObservationSet subset(Split split) const;
};

} // namespace rfsplat
