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

// A link plan freezes everything about one Tx -> Gaussians -> Rx link that
// depends only on geometry: distances, directions, Friis amplitudes, pattern
// samples and the occluder lists (with their densities) of every path. RF
// attributes and frequency are applied at evaluation time, which makes
// re-rendering during inverse fitting cheap and keeps the render graph
// explicit for the analytic gradient pass.

#include "rfsplat/core.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace rfsplat {

struct Occluder {
    std::uint32_t index = 0; ///< occluding Gaussian
    double density = 0.0;    ///< Gaussian density at the closest-approach point
    double distance = 0.0;   ///< distance from the segment start
};

struct PathTerm {
    std::uint32_t gaussian = 0;
    /// Friis amplitude x incidence cosine x outgoing elevation factor x receive
    /// spreading (when enabled). Excludes the receive pattern.
    double geometric = 0.0;
    Complex rx_pattern{1.0, 0.0};
    double lobe_base = 0.0;     ///< (1 + cos psi) / 2
    double own_density = 1.0;   ///< density of the contributor on its receive ray
    double tx_distance = 0.0;
    double rx_distance = 0.0;
    std::uint32_t tx_begin = 0, tx_end = 0; ///< transmit-side occluders
    std::uint32_t rx_begin = 0, rx_end = 0; ///< receive-side occluders
    std::int64_t cell = -1;                 ///< FoV cell, -1 in exact-direction mode
};

struct LinkPlan {
    std::vector<PathTerm> terms;
    std::vector<Occluder> occluders;
    Complex waveform{1.0, 0.0};
    bool receive_phase = true;          ///< false when path-loss terms are ablated
    bool literal_attenuation = false;   ///< attenuation taken over the preceding occluders

    bool has_los = false;
    double los_distance = 0.0;
    double los_coefficient = 0.0;       ///< S_Tx * c_dis (after the distance law)
    bool los_geometric = true;          ///< v_vis from the occluders below, else los_fixed_visibility
    double los_fixed_visibility = 1.0;
    std::uint32_t los_begin = 0, los_end = 0;

    std::span<const Occluder> tx_occluders(const PathTerm& t) const { return {occluders.data() + t.tx_begin, t.tx_end - t.tx_begin}; }
    std::span<const Occluder> rx_occluders(const PathTerm& t) const { return {occluders.data() + t.rx_begin, t.rx_end - t.rx_begin}; }
    std::span<const Occluder> los_occluders() const { return {occluders.data() + los_begin, los_end - los_begin}; }
};

/// Constrained per-Gaussian RF attributes in a chosen precision.
template <class T>
struct AttributeArrays {
    std::vector<T> alpha;
    std::vector<T> roughness;
    std::vector<T> gamma_mag;
    std::vector<T> gamma_phase;

    std::size_t size() const { return alpha.size(); }
};

template <class T>
T transmittance(std::span<const Occluder> occluders, const std::vector<T>& alpha)
{
    T v = 1;
    for (const auto& o : occluders) v *= T(1) - std::min(alpha[o.index] * T(o.density), T(kAlphaCap));
    return v;
}

/// Complex attenuation sqrt(1/(4 pi d^2)) exp(-j 2 pi d / lambda).
template <class T>
std::complex<T> spreading(T distance, T wavelength)
{
    const T pi = std::numbers::pi_v<T>;
    return std::polar(T(1) / (std::sqrt(T(4) * pi) * distance), -T(2) * pi * distance / wavelength);
}

/// Contribution of one path term at the given wavelength.
template <class T>
std::complex<T> evaluate_term(const LinkPlan& plan, const PathTerm& term, const AttributeArrays<T>& attr, T wavelength)
{
    const T pi = std::numbers::pi_v<T>;
    const std::uint32_t l = term.gaussian;
    const T own_alpha = std::min(attr.alpha[l] * T(term.own_density), T(kAlphaCap));
    const T lobe = std::pow(T(term.lobe_base), attr.roughness[l]);
    const T visibility = transmittance(plan.tx_occluders(term), attr.alpha);
    const T transmit = transmittance(plan.rx_occluders(term), attr.alpha);
    T path = T(term.tx_distance);
    if (plan.receive_phase && !plan.literal_attenuation) path += T(term.rx_distance);
    std::complex<T> c = std::polar(T(term.geometric) * attr.gamma_mag[l] * lobe * own_alpha * visibility * transmit,
                                   attr.gamma_phase[l] - T(2) * pi * path / wavelength);
    c *= std::complex<T>(T(term.rx_pattern.real()), T(term.rx_pattern.imag()));
    c *= std::complex<T>(T(plan.waveform.real()), T(plan.waveform.imag()));
    if (plan.literal_attenuation && plan.receive_phase)
        for (const auto& o : plan.rx_occluders(term)) c *= spreading(T(o.distance), wavelength);
    return c;
}

/// LoS component v_vis S_Tx c exp(+j 2 pi d / lambda); zero when disabled.
template <class T>
std::complex<T> evaluate_los(const LinkPlan& plan, const AttributeArrays<T>& attr, T wavelength)
{
    if (!plan.has_los) return {};
    const T pi = std::numbers::pi_v<T>;
    const T v = plan.los_geometric ? transmittance(plan.los_occluders(), attr.alpha) : T(plan.los_fixed_visibility);
    return std::polar(v * T(plan.los_coefficient), T(2) * pi * T(plan.los_distance) / wavelength);
}

/// Received complex signal S(f) = sum of path terms + LoS, in index order.
template <class T>
std::complex<T> evaluate_link(const LinkPlan& plan, const AttributeArrays<T>& attr, T wavelength)
{
    std::complex<T> s{};
    for (const auto& term : plan.terms) s += evaluate_term(plan, term, attr, wavelength);
    return s + evaluate_los(plan, attr, wavelength);
}

} // namespace rfsplat
