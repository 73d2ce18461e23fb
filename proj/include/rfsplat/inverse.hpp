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

#include "rfsplat/renderer.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rfsplat {

inline double sigmoid(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }
inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }
inline double softplus_inverse(double y) { return y > 30.0 ? y : std::log(std::expm1(y)); }

template <class T>
T sigmoid_t(T x) { return x >= 0 ? T(1) / (T(1) + std::exp(-x)) : std::exp(x) / (T(1) + std::exp(x)); }
template <class T>
T softplus_t(T x) { return x > T(30) ? x : std::log1p(std::exp(x)); }

/// Raw parameter slots per Gaussian.
enum RawSlot : std::size_t { kAlphaRaw = 0, kRoughnessRaw = 1, kGammaRaw = 2, kPhaseRaw = 3, kRawPerGaussian = 4 };

std::string to_string(RawSlot slot);

/// Unconstrained per-Gaussian parameters, laid out [a, r, g, p] per Gaussian:
/// alpha = sigmoid(a), R = 1 + softplus(r), |Gamma| = sigmoid(g), phase = wrap(p).
class AttributeBank {
public:
    AttributeBank() = default;
    explicit AttributeBank(std::size_t gaussians);

    /// Preimages of the scene's attributes. Values on the closed range ends are
    /// pulled inside by 1e-9 so the preimage stays finite.
    static AttributeBank from_scene(const Scene& scene);
    /// alpha = 0.5, R = 2, |Gamma| = 0.5, phase = 0.
    static AttributeBank initial(std::size_t gaussians);

    std::size_t gaussians() const { return raw_.size() / kRawPerGaussian; }
    std::size_t parameters() const { return raw_.size(); }
    std::vector<double>& raw() { return raw_; }
    const std::vector<double>& raw() const { return raw_; }
    double& raw(std::size_t gaussian, RawSlot slot) { return raw_[gaussian * kRawPerGaussian + slot]; }
    double raw(std::size_t gaussian, RawSlot slot) const { return raw_[gaussian * kRawPerGaussian + slot]; }

    double alpha(std::size_t i) const { return sigmoid(raw(i, kAlphaRaw)); }
    double roughness(std::size_t i) const { return 1.0 + softplus(raw(i, kRoughnessRaw)); }
    double gamma_mag(std::size_t i) const { return sigmoid(raw(i, kGammaRaw)); }
    double gamma_phase(std::size_t i) const { return wrap_phase(raw(i, kPhaseRaw)); }

    template <class T>
    AttributeArrays<T> arrays() const;

    /// Scene with these attributes; geometry untouched.
    Scene apply_to(const Scene& scene) const;

    bool operator==(const AttributeBank&) const = default;

private:
    std::vector<double> raw_;
};

template <class T>
AttributeArrays<T> AttributeBank::arrays() const
{
    AttributeArrays<T> a;
    const std::size_t n = gaussians();
    a.alpha.resize(n);
    a.roughness.resize(n);
    a.gamma_mag.resize(n);
    a.gamma_phase.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.alpha[i] = sigmoid_t<T>(T(raw(i, kAlphaRaw)));
        a.roughness[i] = T(1) + softplus_t<T>(T(raw(i, kRoughnessRaw)));
        a.gamma_mag[i] = sigmoid_t<T>(T(raw(i, kGammaRaw)));
        a.gamma_phase[i] = T(raw(i, kPhaseRaw));
    }
    return a;
}

/// (|S|^2 - 10^(rssi/10))^2 for an RSSI record, |S - z|^2 for a complex record.
/// Throws ValidationError when the units tag is not "dB" or the grids differ.
double rf_loss(const ComplexSignal& predicted, const ObservationSet& observations, std::size_t record);
/// Sum over all records; `predicted[k]` is the signal at record k's frequency.
double rf_loss(std::span<const Complex> predicted, const ObservationSet& observations);

struct ProblemOptions {
    RenderOptions render;
    std::optional<LosNlosParams> los;
    /// Divide the loss by the squared mean observed linear power so that the
    /// optimizer step size is independent of the absolute signal level.
    bool normalize = true;
};

/// Observations bound to frozen geometry: one link plan per distinct (Tx, Rx)
/// pair, built once. Attribute evaluation and gradients reuse the plans.
class InverseProblem {
public:
    InverseProblem(const Scene& scene, const ObservationSet& observations, ProblemOptions options = {});

    const Scene& scene() const { return scene_; }
    const ObservationSet& observations() const { return observations_; }
    std::size_t records() const { return observations_.records.size(); }
    double loss_scale() const { return scale_; }
    const LinkPlan& plan_of(std::size_t record) const { return plans_[record_plan_[record]]; }
    std::size_t plan_count() const { return plans_.size(); }

    /// Predicted complex signal per record for attributes shared over frequency
    /// (`attrs.size() == 1`) or one set per frequency sample.
    std::vector<Complex> predict(std::span<const AttributeArrays<double>> attrs) const;

    /// Normalized loss. When `gradient` is non-null it receives one vector of
    /// 4n partials per attribute set, laid out [alpha, R, |Gamma|, phase] per
    /// Gaussian, with respect to the constrained values.
    double evaluate(std::span<const AttributeArrays<double>> attrs, std::vector<std::vector<double>>* gradient = nullptr) const;

    /// Normalized loss in any scalar precision (finite-difference oracle).
    template <class T>
    T loss_in(const AttributeArrays<T>& attrs) const;

    double loss(const AttributeBank& bank) const;
    /// Gradient with respect to the raw parameters.
    std::vector<double> gradient(const AttributeBank& bank, double* loss = nullptr) const;

    /// Mean |predicted - observed| in dB over the RSSI records, optionally
    /// restricted to one split. NaN when no record qualifies.
    double rssi_mae_db(std::span<const AttributeArrays<double>> attrs, std::optional<Split> split = std::nullopt) const;

    /// Per-Gaussian share of sum |c_l| over all records and frequencies.
    std::vector<double> contribution_weights(const AttributeArrays<double>& attrs) const;

private:
    Scene scene_;
    ObservationSet observations_;
    ProblemOptions options_;
    std::vector<LinkPlan> plans_;
    std::vector<std::size_t> record_plan_;
    std::vector<double> target_power_;
    double scale_ = 1.0;
};

template <class T>
T InverseProblem::loss_in(const AttributeArrays<T>& attrs) const
{
    T total = 0;
    for (std::size_t k = 0; k < records(); ++k) {
        const auto& rec = observations_.records[k];
        const T lambda = T(kSpeedOfLight) / T(observations_.grid[rec.frequency_index]);
        const std::complex<T> s = evaluate_link(plans_[record_plan_[k]], attrs, lambda);
        if (rec.sample) {
            const std::complex<T> z(T(rec.sample->real()), T(rec.sample->imag()));
            total += std::norm(s - z) / T(scale_);
        } else {
            const T r = (std::norm(s) - T(target_power_[k])) / T(scale_);
            total += r * r;
        }
    }
    return total;
}

enum class Optimizer { Adam, MonotoneLineSearch };

struct FitConfig {
    Optimizer optimizer = Optimizer::Adam;
    std::size_t iterations = 2000;
    double lr_start = 0.01;
    double lr_end = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;
    /// Uniform relative jitter applied to the raw initial parameters (0 = none).
    double init_jitter = 0.0;
    /// Which raw slots are optimized; the others keep their initial values.
    std::array<bool, kRawPerGaussian> trainable{true, true, true, true};
    /// Stop once the normalized loss falls below this value.
    double loss_tolerance = 1e-14;
};

struct GradientCheckRow {
    std::size_t parameter = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double error = 0.0; ///< relative, or absolute for near-zero partials
    bool passed = false;
};

struct GradientCheck {
    std::vector<GradientCheckRow> rows;
    double max_error = 0.0;
    bool passed = true;
};

struct FitReport {
    std::vector<double> loss_trace; ///< loss before each step; last entry is the final loss
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::string status = "ok";
    AttributeBank bank; ///< best iterate
    std::optional<GradientCheck> gradient_check;
};

/// Central differences in extended precision with h = 1e-4 max(1, |theta|).
/// Partials with |analytic| and |numeric| below 1e-12 are compared absolutely
/// with tolerance 1e-10; the others relatively with tolerance 1e-4.
GradientCheck check_gradients(const InverseProblem& problem, const AttributeBank& bank);

/// Uniform jitter of every raw parameter by up to +-`fraction` of its magnitude.
AttributeBank jitter(const AttributeBank& bank, double fraction, std::uint64_t seed);

/// Minimizes the loss from `init`. Throws PreconditionError without records.
/// Returns the best iterate; a NaN loss aborts with status "diverged".
FitReport fit(const InverseProblem& problem, const AttributeBank& init, const FitConfig& config = {});

} // namespace rfsplat
