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

#include <algorithm>
#include <Eigen/Eigenvalues>

namespace rfsplat {

namespace {

constexpr double kUnitTolerance = 1e-9;

bool is_finite(const Vec3& v) { return v.allFinite(); }

} // namespace

Mat3 covariance_from(const Vec3& scale, const Quat& rotation)
{
    if (!is_finite(scale) || (scale.array() <= 0.0).any())
        throw ValidationError("covariance_from: scale must be strictly positive");
    if (std::abs(rotation.norm() - 1.0) > kUnitTolerance)
        throw ValidationError("covariance_from: rotation quaternion is not unit norm");
    const Mat3 r = rotation.toRotationMatrix();
    Mat3 sigma = r * scale.cwiseAbs2().asDiagonal() * r.transpose();
    // exact symmetry
    sigma = 0.5 * (sigma + sigma.transpose()).eval();
    return sigma;
}

Mat3 RFGaussian::whitening() const
{
    return scale.cwiseInverse().asDiagonal() * rotation.toRotationMatrix().transpose();
}

Aabb three_sigma_box(const RFGaussian& g)
{
    const Mat3 r = g.rotation.toRotationMatrix();
    // half extent along world axis k: 3 * sqrt(Sigma_kk)
    Vec3 half;
    for (int k = 0; k < 3; ++k) {
        double var = 0.0;
        for (int a = 0; a < 3; ++a) var += r(k, a) * r(k, a) * g.scale[a] * g.scale[a];
        half[k] = kCullSigma * std::sqrt(var);
    }
    return {g.mu - half, g.mu + half};
}

Scene::Scene(std::vector<RFGaussian> gaussians, Aabb bounds, bool geometry_frozen)
    : bounds_(bounds), frozen_(geometry_frozen)
{
    for (auto& g : gaussians) g.gamma_phase = wrap_phase(g.gamma_phase);
    gaussians_ = std::make_shared<const std::vector<RFGaussian>>(std::move(gaussians));
}

Scene Scene::with_auto_bounds(std::vector<RFGaussian> gaussians, double margin, bool geometry_frozen)
{
    Aabb box;
    for (const auto& g : gaussians) box.grow(three_sigma_box(g));
    if (gaussians.empty()) box = Aabb{Vec3::Zero(), Vec3::Zero()};
    return Scene(std::move(gaussians), box.padded(margin), geometry_frozen);
}

Scene Scene::frozen() const
{
    Scene s = *this;
    s.frozen_ = true;
    return s;
}

Scene Scene::with_rf_attributes(std::size_t i, double alpha, double roughness, double gamma_mag, double gamma_phase) const
{
    if (i >= size()) throw ValidationError("with_rf_attributes: index out of range");
    auto copy = *gaussians_;
    copy[i].alpha = alpha;
    copy[i].roughness = roughness;
    copy[i].gamma_mag = gamma_mag;
    copy[i].gamma_phase = wrap_phase(gamma_phase);
    Scene s = *this;
    s.gaussians_ = std::make_shared<const std::vector<RFGaussian>>(std::move(copy));
    return s;
}

Scene Scene::with_geometry(std::size_t i, const Vec3& mu, const Vec3& scale, const Quat& rotation, const Vec3& normal) const
{
    if (frozen_) throw ValidationError("scene geometry is frozen: cannot modify mu/scale/rotation/normal of Gaussian " + std::to_string(i));
    if (i >= size()) throw ValidationError("with_geometry: index out of range");
    auto copy = *gaussians_;
    copy[i].mu = mu;
    copy[i].scale = scale;
    copy[i].rotation = rotation;
    copy[i].normal = normal;
    Scene s = *this;
    s.gaussians_ = std::make_shared<const std::vector<RFGaussian>>(std::move(copy));
    return s;
}

Scene Scene::with_gaussians(std::vector<RFGaussian> gaussians) const
{
    if (frozen_) {
        if (gaussians.size() != size()) throw ValidationError("scene geometry is frozen: Gaussian count cannot change");
        for (std::size_t i = 0; i < gaussians.size(); ++i) {
            const auto& a = gaussians[i];
            const auto& b = (*gaussians_)[i];
            if (a.mu != b.mu || a.scale != b.scale || a.rotation.coeffs() != b.rotation.coeffs() || a.normal != b.normal)
                throw ValidationError("scene geometry is frozen: cannot modify mu/scale/rotation/normal of Gaussian " + std::to_string(i));
        }
    }
    return Scene(std::move(gaussians), bounds_, frozen_);
}

ValidationReport validate_scene(const Scene& scene)
{
    ValidationReport report;
    auto issue = [&](std::optional<std::size_t> idx, std::string field, std::string msg) {
        report.push_back({idx, std::move(field), std::move(msg)});
    };
    if (scene.bounds().empty() && !scene.empty()) issue(std::nullopt, "bounds", "bounds are empty");

    for (std::size_t i = 0; i < scene.size(); ++i) {
        const RFGaussian& g = scene[i];
        if (!is_finite(g.mu)) issue(i, "mu", "position is not finite");
        if (!is_finite(g.scale) || (g.scale.array() <= 0.0).any()) issue(i, "scale", "scale components must be strictly positive");
        if (!g.rotation.coeffs().allFinite() || std::abs(g.rotation.norm() - 1.0) > kUnitTolerance)
            issue(i, "rotation", "quaternion norm must be within 1e-9 of 1");
        if (!is_finite(g.normal) || std::abs(g.normal.norm() - 1.0) > kUnitTolerance)
            issue(i, "normal", "normal must be a unit vector (within 1e-9)");
        if (!(g.alpha >= 0.0 && g.alpha <= 1.0)) issue(i, "alpha", "alpha must lie in [0, 1]");
        if (!(g.roughness >= 1.0) || !std::isfinite(g.roughness)) issue(i, "roughness", "roughness R must satisfy R >= 1");
        if (!(g.gamma_mag >= 0.0 && g.gamma_mag <= 1.0)) issue(i, "gamma_mag", "|Gamma| must lie in [0, 1]");
        if (!std::isfinite(g.gamma_phase)) issue(i, "gamma_phase", "phase is not finite");

        const bool geometry_ok = is_finite(g.scale) && (g.scale.array() > 0.0).all() && std::abs(g.rotation.norm() - 1.0) <= kUnitTolerance;
        if (geometry_ok) {
            Eigen::SelfAdjointEigenSolver<Mat3> eig(g.covariance());
            if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0)
                issue(i, "scale", "covariance is not positive definite");
            if (is_finite(g.mu) && !scene.bounds().padded(kCullSigma * g.max_scale()).contains(g.mu))
                issue(i, "mu", "center lies outside scene bounds");
        }
    }
    return report;
}

std::string to_string(PatternType p)
{
    return p == PatternType::Omni ? "omni" : "horn";
}

PatternType pattern_from_string(const std::string& s)
{
    if (s == "omni") return PatternType::Omni;
    if (s == "horn" || s == "directional") return PatternType::DirectionalHorn;
    throw ValidationError("unknown antenna pattern '" + s + "'");
}

Complex Antenna::pattern_gain(const Vec3& direction) const
{
    const double amplitude = std::sqrt(gain);
    if (pattern == PatternType::Omni) return amplitude;
    const double c = direction.dot(boresight);
    if (c <= 0.0) return 0.0;
    return amplitude * std::pow(c, pattern_exponent);
}

double Antenna::power_gain(const Vec3& direction) const
{
    if (pattern == PatternType::Omni) return gain;
    const double c = direction.dot(boresight);
    if (c <= 0.0) return 0.0;
    return gain * std::pow(c, 2.0 * pattern_exponent);
}

void Antenna::validate() const
{
    if (!position.allFinite()) throw ValidationError("antenna position is not finite");
    if (!(power_watts > 0.0) || !std::isfinite(power_watts)) throw ValidationError("antenna power must be > 0");
    if (!(gain > 0.0) || !std::isfinite(gain)) throw ValidationError("antenna gain must be > 0");
    if (pattern == PatternType::DirectionalHorn && std::abs(boresight.norm() - 1.0) > kUnitTolerance)
        throw ValidationError("horn boresight must be a unit vector");
    if (!(pattern_exponent >= 0.0)) throw ValidationError("pattern exponent must be >= 0");
}

FrequencyGrid::FrequencyGrid(std::vector<double> samples) : samples_(std::move(samples))
{
    if (samples_.empty()) throw ValidationError("frequency grid is empty");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!(samples_[i] > 0.0) || !std::isfinite(samples_[i])) throw ValidationError("frequencies must be positive and finite");
        if (i > 0 && !(samples_[i] > samples_[i - 1])) throw ValidationError("frequency grid must be strictly ascending");
    }
}

FrequencyGrid FrequencyGrid::linear(double first_hz, double last_hz, std::size_t count)
{
    if (count == 0) throw ValidationError("frequency grid is empty");
    if (count == 1) return single(first_hz);
    std::vector<double> s(count);
    for (std::size_t i = 0; i < count; ++i)
        s[i] = first_hz + (last_hz - first_hz) * static_cast<double>(i) / static_cast<double>(count - 1);
    return FrequencyGrid(std::move(s));
}

ComplexSignal::ComplexSignal(FrequencyGrid g, std::vector<Complex> v) : grid(std::move(g)), values(std::move(v))
{
    if (values.size() != grid.size()) throw ValidationError("signal length does not match frequency grid");
    for (const auto& x : values)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw NumericalError("signal contains non-finite values");
}

std::string to_string(Split s) { return s == Split::Train ? "train" : "test"; }

Split split_from_string(const std::string& s)
{
    if (s == "train") return Split::Train;
    if (s == "test") return Split::Test;
    throw ValidationError("split tag must be 'train' or 'test', got '" + s + "'");
}

void ObservationSet::validate() const
{
    if (grid.empty()) throw ValidationError("observation set has no frequency grid");
    if (tx_ids.size() != transmitters.size()) throw ValidationError("transmitter ids and antennas differ in count");
    for (const auto& t : transmitters) t.validate();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const std::string where = "record " + std::to_string(i) + ": ";
        if (r.tx >= transmitters.size()) throw ValidationError(where + "unknown transmitter");
        if (r.frequency_index >= grid.size()) throw ValidationError(where + "frequency index out of range");
        if (r.rssi_db.has_value() == r.sample.has_value()) throw ValidationError(where + "exactly one of rssi_db or sample is required");
        if (r.rssi_db && !std::isfinite(*r.rssi_db)) throw ValidationError(where + "rssi_db is not finite");
        if (r.sample && !(std::isfinite(r.sample->real()) && std::isfinite(r.sample->imag())))
            throw ValidationError(where + "sample is not finite");
        r.rx.validate();
    }
}

ObservationSet ObservationSet::subset(Split split) const
{
    ObservationSet out = *this;
    out.records.clear();
    for (const auto& r : records)
        if (r.split == split) out.records.push_back(r);
    return out;
}

} // namespace rfsplat
