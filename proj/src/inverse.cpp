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

#include "rfsplat/inverse.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <random>

namespace rfsplat {

std::string to_string(RawSlot slot)
{
    switch (slot) {
    case kAlphaRaw: return "alpha";
    case kRoughnessRaw: return "roughness";
    case kGammaRaw: return "gamma_mag";
    case kPhaseRaw: return "gamma_phase";
    default: return "unknown";
    }
}

AttributeBank::AttributeBank(std::size_t gaussians) : raw_(gaussians * kRawPerGaussian, 0.0) {}

AttributeBank AttributeBank::initial(std::size_t gaussians)
{
    AttributeBank b(gaussians);
    for (std::size_t i = 0; i < gaussians; ++i) {
        b.raw(i, kAlphaRaw) = 0.0;
        b.raw(i, kRoughnessRaw) = softplus_inverse(1.0);
        b.raw(i, kGammaRaw) = 0.0;
        b.raw(i, kPhaseRaw) = 0.0;
    }
    return b;
}

AttributeBank AttributeBank::from_scene(const Scene& scene)
{
    constexpr double kInset = 1e-9;
    AttributeBank b(scene.size());
    for (std::size_t i = 0; i < scene.size(); ++i) {
        const RFGaussian& g = scene[i];
        b.raw(i, kAlphaRaw) = logit(std::clamp(g.alpha, kInset, 1.0 - kInset));
        b.raw(i, kRoughnessRaw) = softplus_inverse(std::max(g.roughness - 1.0, kInset));
        b.raw(i, kGammaRaw) = logit(std::clamp(g.gamma_mag, kInset, 1.0 - kInset));
        b.raw(i, kPhaseRaw) = wrap_phase(g.gamma_phase);
    }
    return b;
}

Scene AttributeBank::apply_to(const Scene& scene) const
{
    if (scene.size() != gaussians()) throw ValidationError("attribute bank size does not match the scene");
    std::vector<RFGaussian> gs(scene.gaussians().begin(), scene.gaussians().end());
    for (std::size_t i = 0; i < gs.size(); ++i) {
        gs[i].alpha = alpha(i);
        gs[i].roughness = roughness(i);
        gs[i].gamma_mag = gamma_mag(i);
        gs[i].gamma_phase = gamma_phase(i);
    }
    return scene.with_gaussians(std::move(gs));
}

namespace {

void check_units(const ObservationSet& observations)
{
    if (observations.units != "dB") throw ValidationError("observation units must be \"dB\", got \"" + observations.units + "\"");
}

double record_loss(Complex s, const Observation& rec)
{
    if (rec.sample) return std::norm(s - *rec.sample);
    const double r = std::norm(s) - db_to_linear(*rec.rssi_db);
    return r * r;
}

} // namespace

double rf_loss(const ComplexSignal& predicted, const ObservationSet& observations, std::size_t record)
{
    check_units(observations);
    if (!(predicted.grid == observations.grid)) throw ValidationError("rf_loss: frequency grids differ");
    if (record >= observations.records.size()) throw ValidationError("rf_loss: record index out of range");
    const Observation& rec = observations.records[record];
    return record_loss(predicted.values.at(rec.frequency_index), rec);
}

double rf_loss(std::span<const Complex> predicted, const ObservationSet& observations)
{
    check_units(observations);
    if (predicted.size() != observations.records.size()) throw ValidationError("rf_loss: one prediction per record is required");
    double total = 0.0;
    for (std::size_t k = 0; k < predicted.size(); ++k) total += record_loss(predicted[k], observations.records[k]);
    return total;
}

namespace {

std::string link_key(std::size_t tx, const Antenna& rx)
{
    // Bitwise key: records share a plan only for identical receivers.
    std::string key(reinterpret_cast<const char*>(&tx), sizeof tx);
    auto put = [&](double v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
    for (int k = 0; k < 3; ++k) put(rx.position[k]);
    for (int k = 0; k < 3; ++k) put(rx.boresight[k]);
    put(rx.gain);
    put(rx.pattern_exponent);
    key.push_back(static_cast<char>(rx.pattern));
    return key;
}

} // namespace

InverseProblem::InverseProblem(const Scene& scene, const ObservationSet& observations, ProblemOptions options)
    : scene_(scene.frozen()), observations_(observations), options_(std::move(options))
{
    check_units(observations_);
    observations_.validate();
    const Bvh bvh = Bvh::build(scene_);

    std::map<std::string, std::size_t> index;
    std::vector<std::pair<std::size_t, const Antenna*>> links;
    record_plan_.resize(records());
    for (std::size_t k = 0; k < records(); ++k) {
        const auto& rec = observations_.records[k];
        const auto [it, inserted] = index.emplace(link_key(rec.tx, rec.rx), links.size());
        if (inserted) links.emplace_back(rec.tx, &rec.rx);
        record_plan_[k] = it->second;
    }

    std::vector<std::optional<TxIllumination>> illumination(observations_.transmitters.size());
    for (const auto& [tx, rx] : links)
        if (!illumination[tx]) illumination[tx] = build_tx_illumination(scene_, bvh, observations_.transmitters[tx]);

    plans_.resize(links.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(links.size()); ++i) {
        const auto& [tx, rx] = links[i];
        plans_[i] = build_link_plan(scene_, bvh, *illumination[tx], observations_.transmitters[tx], *rx, options_.los, options_.render);
    }

    target_power_.resize(records());
    double mean = 0.0;
    for (std::size_t k = 0; k < records(); ++k) {
        const auto& rec = observations_.records[k];
        target_power_[k] = rec.sample ? std::norm(*rec.sample) : db_to_linear(*rec.rssi_db);
        mean += target_power_[k];
    }
    if (records() > 0) mean /= static_cast<double>(records());
    scale_ = options_.normalize && mean > 0.0 ? mean : 1.0;
}

std::vector<Complex> InverseProblem::predict(std::span<const AttributeArrays<double>> attrs) const
{
    if (attrs.empty()) throw PreconditionError("predict: no attribute set");
    std::vector<Complex> out(records());
    for (std::size_t k = 0; k < records(); ++k) {
        const auto& rec = observations_.records[k];
        const auto& a = attrs.size() == 1 ? attrs[0] : attrs[rec.frequency_index];
        out[k] = evaluate_link(plan_of(k), a, observations_.grid.wavelength(rec.frequency_index));
    }
    return out;
}

double InverseProblem::rssi_mae_db(std::span<const AttributeArrays<double>> attrs, std::optional<Split> split) const
{
    const std::vector<Complex> pred = predict(attrs);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < records(); ++k) {
        const auto& rec = observations_.records[k];
        if (!rec.rssi_db || (split && rec.split != *split)) continue;
        sum += std::abs(power_db(pred[k]) - *rec.rssi_db);
        ++n;
    }
    return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

namespace {

inline double project(Complex adj, Complex ds) { return adj.real() * ds.real() + adj.imag() * ds.imag(); }

void occluder_partials(std::span<const Occluder> occ, const std::vector<double>& alpha, Complex adj, Complex value, double* g)
{
    for (const auto& o : occ) {
        const double a = alpha[o.index] * o.density;
        if (a >= kAlphaCap) continue;
        g[o.index * kRawPerGaussian + kAlphaRaw] += project(adj, value * (-o.density / (1.0 - a)));
    }
}

// Reverse sweep of one path term; `g` holds partials wrt the constrained
// attributes in the bank layout.
void term_partials(const LinkPlan& plan, const PathTerm& t, const AttributeArrays<double>& attr, double lambda, Complex adj, double* g)
{
    const std::uint32_t l = t.gaussian;
    const double raw_alpha = attr.alpha[l] * t.own_density;
    const double own = std::min(raw_alpha, kAlphaCap);
    const double lobe = std::pow(t.lobe_base, attr.roughness[l]);
    const double v = transmittance(plan.tx_occluders(t), attr.alpha);
    const double tr = transmittance(plan.rx_occluders(t), attr.alpha);
    double path = t.tx_distance;
    if (plan.receive_phase && !plan.literal_attenuation) path += t.rx_distance;
    Complex u = std::polar(1.0, attr.gamma_phase[l] - 2.0 * kPi * path / lambda) * t.rx_pattern * plan.waveform;
    if (plan.literal_attenuation && plan.receive_phase)
        for (const auto& o : plan.rx_occluders(t)) u *= spreading(o.distance, lambda);
    const double common = t.geometric * v * tr;
    const Complex c = common * attr.gamma_mag[l] * lobe * own * u;

    double* gl = g + static_cast<std::size_t>(l) * kRawPerGaussian;
    gl[kGammaRaw] += project(adj, common * lobe * own * u);
    if (t.lobe_base > 0.0) gl[kRoughnessRaw] += project(adj, c * std::log(t.lobe_base));
    gl[kPhaseRaw] += project(adj, Complex(0.0, 1.0) * c);
    if (raw_alpha < kAlphaCap) gl[kAlphaRaw] += project(adj, common * attr.gamma_mag[l] * lobe * t.own_density * u);
    occluder_partials(plan.tx_occluders(t), attr.alpha, adj, c, g);
    occluder_partials(plan.rx_occluders(t), attr.alpha, adj, c, g);
}

constexpr std::size_t kReductionBlocks = 64;

} // namespace

double InverseProblem::evaluate(std::span<const AttributeArrays<double>> attrs, std::vector<std::vector<double>>* gradient) const
{
    if (attrs.empty()) throw PreconditionError("evaluate: no attribute set");
    const std::size_t sets = attrs.size();
    if (sets != 1 && sets != observations_.grid.size()) throw PreconditionError("evaluate: one attribute set per frequency is required");
    const std::size_t n = scene_.size() * kRawPerGaussian;
    const std::size_t blocks = std::max<std::size_t>(1, std::min(kReductionBlocks, records()));

    // Fixed block partition and in-order reduction keep the sum independent of
    // the thread count.
    std::vector<double> block_loss(blocks, 0.0);
    std::vector<std::vector<double>> block_grad(gradient ? blocks : 0);
#pragma omp parallel for schedule(static, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::size_t lo = records() * b / blocks;
        const std::size_t hi = records() * (b + 1) / blocks;
        if (gradient) block_grad[b].assign(n * sets, 0.0);
        double total = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            const auto& rec = observations_.records[k];
            const std::size_t set = sets == 1 ? 0 : rec.frequency_index;
            const auto& a = attrs[set];
            const double lambda = observations_.grid.wavelength(rec.frequency_index);
            const LinkPlan& plan = plan_of(k);
            const Complex s = evaluate_link(plan, a, lambda);
            Complex adj;
            if (rec.sample) {
                total += std::norm(s - *rec.sample) / scale_;
                adj = 2.0 * (s - *rec.sample) / scale_;
            } else {
                const double r = (std::norm(s) - target_power_[k]) / scale_;
                total += r * r;
                adj = 4.0 * r * s / scale_;
            }
            if (!gradient) continue;
            double* g = block_grad[b].data() + set * n;
            for (const auto& t : plan.terms) term_partials(plan, t, a, lambda, adj, g);
            if (plan.has_los && plan.los_geometric) {
                const Complex los = evaluate_los(plan, a, lambda);
                occluder_partials(plan.los_occluders(), a.alpha, adj, los, g);
            }
        }
        block_loss[b] = total;
    }
    double loss = 0.0;
    for (double v : block_loss) loss += v;
    if (gradient) {
        gradient->assign(sets, std::vector<double>(n, 0.0));
        for (const auto& bg : block_grad)
            for (std::size_t s = 0; s < sets; ++s)
                for (std::size_t i = 0; i < n; ++i) (*gradient)[s][i] += bg[s * n + i];
        for (std::size_t s = 0; s < sets; ++s)
            for (std::size_t i = 0; i < n; ++i)
                if (!std::isfinite((*gradient)[s][i]))
                    throw NumericalError("non-finite gradient for Gaussian " + std::to_string(i / kRawPerGaussian) + ", term " +
                                         to_string(static_cast<RawSlot>(i % kRawPerGaussian)));
    }
    if (!std::isfinite(loss)) throw NumericalError("non-finite loss");
    return loss;
}

double InverseProblem::loss(const AttributeBank& bank) const
{
    const AttributeArrays<double> a = bank.arrays<double>();
    return evaluate(std::span(&a, 1));
}

std::vector<double> InverseProblem::gradient(const AttributeBank& bank, double* loss) const
{
    if (bank.gaussians() != scene_.size()) throw ValidationError("attribute bank size does not match the scene");
    const AttributeArrays<double> a = bank.arrays<double>();
    std::vector<std::vector<double>> g;
    const double l = evaluate(std::span(&a, 1), &g);
    if (loss) *loss = l;
    std::vector<double> out = std::move(g[0]);
    for (std::size_t i = 0; i < bank.gaussians(); ++i) {
        double* gi = out.data() + i * kRawPerGaussian;
        gi[kAlphaRaw] *= a.alpha[i] * (1.0 - a.alpha[i]);
        gi[kRoughnessRaw] *= sigmoid(bank.raw(i, kRoughnessRaw));
        gi[kGammaRaw] *= a.gamma_mag[i] * (1.0 - a.gamma_mag[i]);
    }
    return out;
}

std::vector<double> InverseProblem::contribution_weights(const AttributeArrays<double>& attrs) const
{
    std::vector<double> w(scene_.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < records(); ++k) {
        const auto& rec = observations_.records[k];
        const LinkPlan& plan = plan_of(k);
        const double lambda = observations_.grid.wavelength(rec.frequency_index);
        for (const auto& t : plan.terms) {
            const double m = std::abs(evaluate_term(plan, t, attrs, lambda));
            w[t.gaussian] += m;
            total += m;
        }
    }
    if (total > 0.0)
        for (double& x : w) x /= total;
    return w;
}

GradientCheck check_gradients(const InverseProblem& problem, const AttributeBank& bank)
{
    GradientCheck out;
    const std::vector<double> analytic = problem.gradient(bank);
    AttributeBank probe = bank;
    for (std::size_t i = 0; i < bank.parameters(); ++i) {
        const double theta = bank.raw()[i];
        const double h = 1e-4 * std::max(1.0, std::abs(theta));
        probe.raw()[i] = theta + h;
        const long double up = problem.loss_in(probe.arrays<long double>());
        const double theta_up = probe.raw()[i];
        probe.raw()[i] = theta - h;
        const long double down = problem.loss_in(probe.arrays<long double>());
        const double theta_down = probe.raw()[i];
        probe.raw()[i] = theta;
        const double numeric = static_cast<double>((up - down) / (static_cast<long double>(theta_up) - theta_down));

        GradientCheckRow row;
        row.parameter = i;
        row.analytic = analytic[i];
        row.numeric = numeric;
        const double mag = std::max(std::abs(row.analytic), std::abs(row.numeric));
        if (mag < 1e-12) {
            row.error = std::abs(row.analytic - row.numeric);
            row.passed = row.error < 1e-10;
        } else {
            row.error = std::abs(row.analytic - row.numeric) / mag;
            row.passed = row.error < 1e-4;
        }
        out.max_error = std::max(out.max_error, row.error);
        out.passed = out.passed && row.passed;
        out.rows.push_back(row);
    }
    return out;
}

AttributeBank jitter(const AttributeBank& bank, double fraction, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-fraction, fraction);
    AttributeBank out = bank;
    for (double& x : out.raw()) x += u(rng) * std::abs(x);
    return out;
}

namespace {

double cosine_rate(const FitConfig& c, std::size_t step)
{
    const double t = c.iterations > 1 ? static_cast<double>(step) / static_cast<double>(c.iterations - 1) : 0.0;
    return c.lr_end + 0.5 * (c.lr_start - c.lr_end) * (1.0 + std::cos(kPi * t));
}

void mask(std::vector<double>& g, const FitConfig& c)
{
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!c.trainable[i % kRawPerGaussian]) g[i] = 0.0;
}

} // namespace

FitReport fit(const InverseProblem& problem, const AttributeBank& init, const FitConfig& config)
{
    if (problem.records() == 0) throw PreconditionError("fit: no observations");
    if (init.gaussians() != problem.scene().size()) throw ValidationError("fit: attribute bank size does not match the scene");
    FitReport report;
    AttributeBank bank = config.init_jitter > 0.0 ? jitter(init, config.init_jitter, config.seed) : init;
    report.bank = bank;

    const std::size_t n = bank.parameters();
    std::vector<double> m(n, 0.0), v(n, 0.0);
    double best = std::numeric_limits<double>::infinity();
    double step = config.lr_start;
    std::size_t it = 0;
    for (;; ++it) {
        double loss = 0.0;
        std::vector<double> g;
        try {
            g = problem.gradient(bank, &loss);
        } catch (const NumericalError& e) {
            report.status = std::string("diverged: ") + e.what();
            break;
        }
        report.loss_trace.push_back(loss);
        if (loss < best) {
            best = loss;
            report.bank = bank;
        }
        if (loss <= config.loss_tolerance || it >= config.iterations) break;
        mask(g, config);

        if (config.optimizer == Optimizer::Adam) {
            const double lr = cosine_rate(config, it);
            const double b1t = 1.0 - std::pow(config.beta1, static_cast<double>(it + 1));
            const double b2t = 1.0 - std::pow(config.beta2, static_cast<double>(it + 1));
            for (std::size_t i = 0; i < n; ++i) {
                m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
                v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
                bank.raw()[i] -= lr * (m[i] / b1t) / (std::sqrt(v[i] / b2t) + config.epsilon);
            }
        } else {
            // Backtracking (Armijo) line search along the negative gradient.
            double g2 = 0.0;
            for (double x : g) g2 += x * x;
            if (g2 == 0.0) break;
            bool accepted = false;
            for (int tries = 0; tries < 60 && !accepted; ++tries) {
                AttributeBank trial = bank;
                for (std::size_t i = 0; i < n; ++i) trial.raw()[i] -= step * g[i];
                double trial_loss = std::numeric_limits<double>::infinity();
                try {
                    trial_loss = problem.loss(trial);
                } catch (const NumericalError&) {
                }
                if (trial_loss <= loss - 1e-4 * step * g2) {
                    bank = std::move(trial);
                    accepted = true;
                    step *= 2.0;
                } else {
                    step *= 0.5;
                }
            }
            if (!accepted) break;
        }
    }
    report.iterations = it;
    report.initial_loss = report.loss_trace.empty() ? 0.0 : report.loss_trace.front();
    report.final_loss = best;
    report.converged = report.status == "ok" && (best <= config.loss_tolerance || best <= 1e-3 * report.initial_loss);
    return report;
}

} // namespace rfsplat
