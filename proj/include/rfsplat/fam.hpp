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

// Frequency-aware attribute modulation: an MLP maps (frequency features,
// per-Gaussian embedding) to raw-space deltas of roughness, |Gamma| and phase.

#include "rfsplat/inverse.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <vector>

namespace rfsplat {

struct FamConfig {
    std::size_t layers = 3;     ///< hidden layers
    std::size_t hidden = 64;    ///< units per hidden layer
    std::size_t embedding = 8;  ///< per-Gaussian embedding size
    std::size_t harmonics = 4;  ///< sin/cos pairs of the normalized frequency
    std::uint64_t seed = 0;

    /// 6 x 256 network for large scenes.
    static FamConfig large() { return {6, 256, 8, 4, 0}; }
};

class FamNetwork {
public:
    FamNetwork() = default;
    /// Frequencies in [band_lo, band_hi] map to normalized values in [-1, 1].
    /// The output layer starts at zero, so the deformation is the identity.
    FamNetwork(const FamConfig& config, std::size_t gaussians, double band_lo_hz, double band_hi_hz);

    const FamConfig& config() const { return config_; }
    std::size_t gaussians() const { return static_cast<std::size_t>(embedding_.cols()); }
    std::size_t input_size() const { return 1 + 2 * config_.harmonics + config_.embedding; }
    double band_lo() const { return band_lo_; }
    double band_hi() const { return band_hi_; }

    double normalized_frequency(double frequency_hz) const;
    bool extrapolates(double frequency_hz) const;

    /// Deltas (dR, d|Gamma|, dphase) for every Gaussian, one column each.
    Eigen::MatrixXd forward(double frequency_hz) const;

    /// Accumulates d loss / d parameters into `grad` (same layout as parameters())
    /// given d loss / d output columns.
    void backward(double frequency_hz, const Eigen::MatrixXd& output_grad, std::vector<double>& grad) const;

    std::vector<double> parameters() const;
    void set_parameters(const std::vector<double>& values);
    std::size_t parameter_count() const;

    /// Frobenius norm of the output layer (weights and bias).
    double output_norm() const;

private:
    Eigen::MatrixXd inputs(double frequency_hz) const;

    FamConfig config_;
    double band_lo_ = 0.0;
    double band_hi_ = 1.0;
    std::vector<Eigen::MatrixXd> weights_;
    std::vector<Eigen::VectorXd> biases_;
    Eigen::MatrixXd embedding_; ///< embedding x gaussians
};

struct FamView {
    AttributeArrays<double> attributes;
    bool extrapolated = false;
};

/// R' = 1 + softplus(r + dR), |Gamma|' = sigmoid(g + dg), phase' = p + dp;
/// alpha is not deformed.
FamView fam_apply(const FamNetwork& net, const AttributeBank& bank, double frequency_hz);

struct WidebandConfig {
    std::size_t iterations = 1500;
    double lr_start = 0.01;
    double lr_end = 0.001;
    double loss_tolerance = 1e-14;
};

struct WidebandReport {
    std::vector<double> loss_trace;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    FamNetwork net; ///< best iterate
};

/// Trains only the network; `base` stays fixed. Throws PreconditionError for
/// an empty observation set.
WidebandReport fit_wideband(const InverseProblem& problem, const AttributeBank& base, const FamNetwork& init,
                            const WidebandConfig& config = {});

} // namespace rfsplat
