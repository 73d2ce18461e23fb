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

#include "rfsplat/fam.hpp"

#include <random>

namespace rfsplat {

FamNetwork::FamNetwork(const FamConfig& config, std::size_t gaussians, double band_lo_hz, double band_hi_hz)
    : config_(config), band_lo_(band_lo_hz), band_hi_(band_hi_hz)
{
    if (config.layers == 0 || config.hidden == 0) throw ValidationError("FAM network needs at least one hidden layer");
    if (!(band_lo_hz > 0.0) || !(band_hi_hz >= band_lo_hz)) throw ValidationError("FAM band must satisfy 0 < lo <= hi");
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t in = input_size();
    for (std::size_t k = 0; k < config.layers; ++k) {
        Eigen::MatrixXd w(config.hidden, in);
        const double s = 1.0 / std::sqrt(static_cast<double>(in));
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = s * normal(rng);
        weights_.push_back(std::move(w));
        biases_.push_back(Eigen::VectorXd::Zero(config.hidden));
        in = config.hidden;
    }
    weights_.push_back(Eigen::MatrixXd::Zero(3, in));
    biases_.push_back(Eigen::VectorXd::Zero(3));
    embedding_.resize(config.embedding, gaussians);
    for (Eigen::Index j = 0; j < embedding_.cols(); ++j)
        for (Eigen::Index i = 0; i < embedding_.rows(); ++i) embedding_(i, j) = normal(rng);
}

double FamNetwork::normalized_frequency(double frequency_hz) const
{
    if (band_hi_ == band_lo_) return (frequency_hz - band_lo_) / band_lo_;
    return 2.0 * (frequency_hz - band_lo_) / (band_hi_ - band_lo_) - 1.0;
}

bool FamNetwork::extrapolates(double frequency_hz) const { return std::abs(normalized_frequency(frequency_hz)) > 1.0 + 1e-12; }

Eigen::MatrixXd FamNetwork::inputs(double frequency_hz) const
{
    const double x = normalized_frequency(frequency_hz);
    const auto n = embedding_.cols();
    Eigen::MatrixXd in(input_size(), n);
    in.row(0).setConstant(x);
    for (std::size_t h = 0; h < config_.harmonics; ++h) {
        const double w = kPi * static_cast<double>(h + 1) * 0.5;
        in.row(1 + 2 * h).setConstant(std::sin(w * x));
        in.row(2 + 2 * h).setConstant(std::cos(w * x));
    }
    in.bottomRows(config_.embedding) = embedding_;
    return in;
}

Eigen::MatrixXd FamNetwork::forward(double frequency_hz) const
{
    Eigen::MatrixXd a = inputs(frequency_hz);
    for (std::size_t k = 0; k + 1 < weights_.size(); ++k) a = ((weights_[k] * a).colwise() + biases_[k]).array().tanh().matrix();
    return (weights_.back() * a).colwise() + biases_.back();
}

void FamNetwork::backward(double frequency_hz, const Eigen::MatrixXd& output_grad, std::vector<double>& grad) const
{
    if (grad.size() != parameter_count()) grad.assign(parameter_count(), 0.0);
    std::vector<Eigen::MatrixXd> acts{inputs(frequency_hz)};
    for (std::size_t k = 0; k + 1 < weights_.size(); ++k)
        acts.push_back(((weights_[k] * acts.back()).colwise() + biases_[k]).array().tanh().matrix());

    // Offsets of each layer's parameters in the flat layout.
    std::vector<std::size_t> offset;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        offset.push_back(pos);
        pos += weights_[k].size() + biases_[k].size();
    }
    const std::size_t embedding_offset = pos;

    Eigen::MatrixXd delta = output_grad;
    for (std::size_t k = weights_.size(); k-- > 0;) {
        const Eigen::MatrixXd gw = delta * acts[k].transpose();
        const Eigen::VectorXd gb = delta.rowwise().sum();
        double* out = grad.data() + offset[k];
        for (Eigen::Index i = 0; i < gw.size(); ++i) out[i] += gw.data()[i];
        for (Eigen::Index i = 0; i < gb.size(); ++i) out[gw.size() + i] += gb[i];
        Eigen::MatrixXd back = weights_[k].transpose() * delta;
        if (k > 0) delta = (back.array() * (1.0 - acts[k].array().square())).matrix();
        else {
            const Eigen::MatrixXd ge = back.bottomRows(config_.embedding);
            for (Eigen::Index i = 0; i < ge.size(); ++i) grad[embedding_offset + i] += ge.data()[i];
        }
    }
}

std::size_t FamNetwork::parameter_count() const
{
    std::size_t n = embedding_.size();
    for (std::size_t k = 0; k < weights_.size(); ++k) n += weights_[k].size() + biases_[k].size();
    return n;
}

std::vector<double> FamNetwork::parameters() const
{
    std::vector<double> p;
    p.reserve(parameter_count());
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        p.insert(p.end(), weights_[k].data(), weights_[k].data() + weights_[k].size());
        p.insert(p.end(), biases_[k].data(), biases_[k].data() + biases_[k].size());
    }
    p.insert(p.end(), embedding_.data(), embedding_.data() + embedding_.size());
    return p;
}

void FamNetwork::set_parameters(const std::vector<double>& values)
{
    if (values.size() != parameter_count()) throw ValidationError("FAM parameter vector has the wrong size");
    const double* p = values.data();
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        std::copy(p, p + weights_[k].size(), weights_[k].data());
        p += weights_[k].size();
        std::copy(p, p + biases_[k].size(), biases_[k].data());
        p += biases_[k].size();
    }
    std::copy(p, p + embedding_.size(), embedding_.data());
}

double FamNetwork::output_norm() const
{
    return std::sqrt(weights_.back().squaredNorm() + biases_.back().squaredNorm());
}

FamView fam_apply(const FamNetwork& net, const AttributeBank& bank, double frequency_hz)
{
    if (net.gaussians() != bank.gaussians()) throw ValidationError("FAM network and attribute bank sizes differ");
    const Eigen::MatrixXd d = net.forward(frequency_hz);
    FamView v;
    v.extrapolated = net.extrapolates(frequency_hz);
    v.attributes = bank.arrays<double>();
    for (std::size_t i = 0; i < bank.gaussians(); ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        v.attributes.roughness[i] = 1.0 + softplus(bank.raw(i, kRoughnessRaw) + d(0, c));
        v.attributes.gamma_mag[i] = sigmoid(bank.raw(i, kGammaRaw) + d(1, c));
        v.attributes.gamma_phase[i] = bank.raw(i, kPhaseRaw) + d(2, c);
    }
    return v;
}

WidebandReport fit_wideband(const InverseProblem& problem, const AttributeBank& base, const FamNetwork& init, const WidebandConfig& config)
{
    if (problem.records() == 0) throw PreconditionError("fit_wideband: no observations");
    const FrequencyGrid& grid = problem.observations().grid;
    WidebandReport report;
    FamNetwork net = init;
    report.net = net;
    std::vector<double> params = net.parameters();
    const std::size_t np = params.size();
    std::vector<double> m(np, 0.0), v(np, 0.0);
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = base.gaussians();

    std::size_t it = 0;
    for (;; ++it) {
        net.set_parameters(params);
        std::vector<AttributeArrays<double>> attrs;
        attrs.reserve(grid.size());
        for (std::size_t f = 0; f < grid.size(); ++f) attrs.push_back(fam_apply(net, base, grid[f]).attributes);
        std::vector<std::vector<double>> g;
        const double loss = problem.evaluate(attrs, &g);
        report.loss_trace.push_back(loss);
        if (loss < best) {
            best = loss;
            report.net = net;
        }
        if (loss <= config.loss_tolerance || it >= config.iterations) break;

        std::vector<double> grad(np, 0.0);
        for (std::size_t f = 0; f < grid.size(); ++f) {
            Eigen::MatrixXd dout(3, static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) {
                const auto c = static_cast<Eigen::Index>(i);
                const double* gi = g[f].data() + i * kRawPerGaussian;
                const double gm = attrs[f].gamma_mag[i];
                dout(0, c) = gi[kRoughnessRaw] * (attrs[f].roughness[i] - 1.0 > 30.0 ? 1.0 : -std::expm1(1.0 - attrs[f].roughness[i]));
                dout(1, c) = gi[kGammaRaw] * gm * (1.0 - gm);
                dout(2, c) = gi[kPhaseRaw];
            }
            net.backward(grid[f], dout, grad);
        }
        const double t = config.iterations > 1 ? static_cast<double>(it) / static_cast<double>(config.iterations - 1) : 0.0;
        const double lr = config.lr_end + 0.5 * (config.lr_start - config.lr_end) * (1.0 + std::cos(kPi * t));
        const double b1t = 1.0 - std::pow(0.9, static_cast<double>(it + 1));
        const double b2t = 1.0 - std::pow(0.999, static_cast<double>(it + 1));
        for (std::size_t i = 0; i < np; ++i) {
            m[i] = 0.9 * m[i] + 0.1 * grad[i];
            v[i] = 0.999 * v[i] + 0.001 * grad[i] * grad[i];
            params[i] -= lr * (m[i] / b1t) / (std::sqrt(v[i] / b2t) + 1e-8);
        }
    }
    report.iterations = it;
    report.initial_loss = report.loss_trace.front();
    report.final_loss = best;
    report.converged = best <= config.loss_tolerance || best <= 1e-3 * report.initial_loss;
    return report;
}

} // namespace rfsplat
