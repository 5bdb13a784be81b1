// SPDX-License-Identifier: Apache-2.0
//
// chanstat - stationarity analysis of time-variant wireless channels
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
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "chanstat/ctf.hpp"
#include "chanstat/errors.hpp"
#include "chanstat/parallel.hpp"

namespace chanstat {

inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s

/// One propagation path: either the direct TX-RX line of sight or a single
/// bounce off a fixed point scatterer, with a complex path gain.
struct PropagationPath {
    enum class Kind { line_of_sight, single_bounce };

    Kind kind = Kind::line_of_sight;
    Eigen::Vector3d scatterer = Eigen::Vector3d::Zero(); // used by single_bounce only
    std::complex<double> gain{1.0, 0.0};
};

/// Rotary-arm measurement geometry: the TX sits on an arm of given radius and
/// sweeps from alpha_start to alpha_end at constant tangential speed while the
/// RX stays fixed. Angles are measured from the vertical (+y) axis, so the TX
/// position at angle a is center + radius*(sin a, cos a, 0) and positive
/// angular rate moves it toward +x.
struct Scenario {
    double arm_radius_m = 1.0;
    Eigen::Vector3d arm_center_m = Eigen::Vector3d::Zero();
    double alpha_start_deg = -40.0;
    double alpha_end_deg = 40.0;
    double velocity_mps = 100.0 / 3.6;
    Eigen::Vector3d rx_position_m{0.0, 8.0, 0.0};
    double carrier_freq_hz = 25.5e9;
    double bandwidth_hz = 100e6;
    int num_subcarriers = 100;
    int num_snapshots = 500;
    bool inverse_distance_amplitude = false; // free-space 1/d decay; off keeps |H| scale-exact
    std::vector<PropagationPath> paths;

    double omega_deg_per_s() const {
        return velocity_mps / arm_radius_m * (180.0 / std::numbers::pi);
    }
    double sweep_duration_s() const {
        return (alpha_end_deg - alpha_start_deg) / omega_deg_per_s();
    }
    double sample_time_s() const { return sweep_duration_s() / num_snapshots; }
    double subcarrier_spacing_hz() const { return bandwidth_hz / num_subcarriers; }

    void validate() const {
        if (!(arm_radius_m > 0.0))
            throw ConfigError("arm radius must be positive");
        if (!(velocity_mps > 0.0))
            throw ConfigError("velocity must be positive");
        if (!(alpha_end_deg > alpha_start_deg))
            throw ConfigError("alpha_end must exceed alpha_start");
        if (num_snapshots < 2)
            throw ConfigError("scenario needs at least 2 snapshots");
        if (num_subcarriers < 1)
            throw ConfigError("scenario needs at least 1 subcarrier");
        if (!(bandwidth_hz > 0.0) || !(carrier_freq_hz > 0.0))
            throw ConfigError("carrier frequency and bandwidth must be positive");
        if (paths.empty())
            throw ConfigError("scenario needs at least one propagation path");
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const auto &p = paths[i];
            if (!std::isfinite(p.gain.real()) || !std::isfinite(p.gain.imag()))
                throw ConfigError("path " + format_int(i + 1) + " has a non-finite gain");
            if (p.kind == PropagationPath::Kind::single_bounce) {
                const Eigen::Vector3d rel = p.scatterer - arm_center_m;
                const double in_plane = std::hypot(rel.x(), rel.y());
                const double to_circle = std::hypot(in_plane - arm_radius_m, rel.z());
                if (to_circle < 1e-6)
                    throw ConfigError("path " + format_int(i + 1) +
                                      " scatterer lies on the TX trajectory");
                if ((p.scatterer - rx_position_m).norm() < 1e-6)
                    throw ConfigError("path " + format_int(i + 1) +
                                      " scatterer coincides with the RX position");
            }
        }
    }
};

/// TX position at sweep time t (seconds from the start of the sweep).
inline Eigen::Vector3d tx_position(const Scenario &scn, double t) {
    const double duration = scn.sweep_duration_s();
    if (t < 0.0 || t > duration * (1.0 + 1e-12))
        throw ConfigError("time " + format_real(t) + " s outside the sweep 0.." +
                          format_real(duration) + " s");
    const double alpha_deg = scn.alpha_start_deg + scn.omega_deg_per_s() * t;
    const double a = alpha_deg * std::numbers::pi / 180.0;
    return scn.arm_center_m +
           scn.arm_radius_m * Eigen::Vector3d(std::sin(a), std::cos(a), 0.0);
}

namespace detail {

struct PathGeometry {
    double delay_s = 0.0;
    double amplitude = 1.0;
};

inline PathGeometry path_geometry(const Scenario &scn, const PropagationPath &path,
                                  const Eigen::Vector3d &tx) {
    PathGeometry g;
    double dist = 0.0;
    if (path.kind == PropagationPath::Kind::line_of_sight) {
        dist = (scn.rx_position_m - tx).norm();
    } else {
        dist = (path.scatterer - tx).norm() + (scn.rx_position_m - path.scatterer).norm();
    }
    g.delay_s = dist / kSpeedOfLight;
    if (scn.inverse_distance_amplitude)
        g.amplitude = 1.0 / dist;
    return g;
}

} // namespace detail

/// Synthesizes the channel matrix of a scenario. Snapshot s (0-based) is taken
/// with the TX frozen at sweep time s*T_s, and
///   H[s,q] = sum_p gain_p * amp_p * exp(-j*2*pi*(f_c + q*f_s)*tau_p(s)),
/// with tau_p the exact geometric path delay. Doppler arises implicitly from
/// the TX motion between snapshots. H depends on the TX positions and the
/// frequency grid only, so two scenarios that sample the same arc at the same
/// snapshot count produce identical samples whatever their velocity; only the
/// T_s metadata differs.
inline ChannelTransferFunction synth_ctf(const Scenario &scn) {
    scn.validate();
    const int s_total = scn.num_snapshots;
    const int q_total = scn.num_subcarriers;
    const double t_s = scn.sample_time_s();
    const double f_s = scn.subcarrier_spacing_hz();

    ChannelTransferFunction ctf;
    ctf.samples.resize(s_total, q_total);
    ctf.sample_time = t_s;
    ctf.sample_freq = f_s;
    ctf.carrier_freq = scn.carrier_freq_hz;

    parallel_for(static_cast<std::size_t>(s_total), [&](std::size_t s) {
        const Eigen::Vector3d tx = tx_position(scn, static_cast<double>(s) * t_s);
        std::vector<detail::PathGeometry> geo;
        geo.reserve(scn.paths.size());
        for (const auto &p : scn.paths)
            geo.push_back(detail::path_geometry(scn, p, tx));
        for (int q = 0; q < q_total; ++q) {
            const double freq = scn.carrier_freq_hz + static_cast<double>(q) * f_s;
            std::complex<double> h{0.0, 0.0};
            for (std::size_t p = 0; p < scn.paths.size(); ++p) {
                const double phase = -2.0 * std::numbers::pi * freq * geo[p].delay_s;
                h += scn.paths[p].gain * std::polar(geo[p].amplitude, phase);
            }
            ctf.samples(static_cast<Eigen::Index>(s), q) = h;
        }
    });
    return ctf;
}

/// One tap of a WSSUS delay profile.
struct DelayTap {
    double delay_s = 0.0;
    double power = 1.0;
};

/// Stationary-by-construction reference channel: per tap, a Clarke/Jakes
/// sum-of-sinusoids process
///   h_l(t) = sqrt(P_l/K) * sum_k exp(j*(2*pi*f_d*cos(theta_k)*t + phi_k)),
/// assembled as H[s,q] = sum_l h_l(s*T_s) * exp(-j*2*pi*q*f_s*tau_l) with
/// 0-based s and q. The angles theta and phases phi are drawn from a
/// mt19937_64 seeded with `seed` (theta then phi per sinusoid, taps in
/// order), doubles built from the top 53 bits, so any implementation of the
/// recipe reproduces the output bit for bit.
inline ChannelTransferFunction jakes_wssus_ctf(double f_d_max, int num_sinusoids,
                                               std::uint64_t seed, int s_total, int q_total,
                                               double sample_time, double sample_freq,
                                               const std::vector<DelayTap> &profile,
                                               double carrier_freq = 0.0) {
    if (num_sinusoids < 8)
        throw ConfigError("sum-of-sinusoids model needs at least 8 sinusoids");
    if (s_total < 1 || q_total < 1)
        throw ConfigError("channel dimensions must be positive");
    if (!(sample_time > 0.0) || !(sample_freq > 0.0))
        throw ConfigError("sampling steps must be positive");
    if (!(f_d_max >= 0.0))
        throw ConfigError("maximum Doppler must be >= 0");
    if (profile.empty())
        throw ConfigError("delay profile must have at least one tap");
    double power_sum = 0.0;
    for (const auto &tap : profile) {
        if (!(tap.power > 0.0) || !std::isfinite(tap.delay_s) || tap.delay_s < 0.0)
            throw ConfigError("delay profile taps need positive power and nonnegative delay");
        power_sum += tap.power;
    }
    if (std::abs(power_sum - 1.0) > 1e-9)
        throw ConfigError("delay profile powers must sum to 1, got " + format_real(power_sum));

    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    const std::size_t taps = profile.size();
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::vector<double>> rate(taps), phase(taps);
    for (std::size_t l = 0; l < taps; ++l) {
        rate[l].resize(num_sinusoids);
        phase[l].resize(num_sinusoids);
        for (int k = 0; k < num_sinusoids; ++k) {
            const double theta = two_pi * uniform01();
            phase[l][k] = two_pi * uniform01();
            rate[l][k] = two_pi * f_d_max * std::cos(theta);
        }
    }

    // Per-tap time series, then the frequency response per subcarrier.
    Eigen::MatrixXcd taps_time(s_total, static_cast<Eigen::Index>(taps));
    for (std::size_t l = 0; l < taps; ++l) {
        const double scale = std::sqrt(profile[l].power / num_sinusoids);
        for (int s = 0; s < s_total; ++s) {
            const double t = static_cast<double>(s) * sample_time;
            std::complex<double> acc{0.0, 0.0};
            for (int k = 0; k < num_sinusoids; ++k)
                acc += std::polar(1.0, rate[l][k] * t + phase[l][k]);
            taps_time(s, static_cast<Eigen::Index>(l)) = scale * acc;
        }
    }

    Eigen::MatrixXcd steering(static_cast<Eigen::Index>(taps), q_total);
    for (std::size_t l = 0; l < taps; ++l)
        for (int q = 0; q < q_total; ++q)
            steering(static_cast<Eigen::Index>(l), q) =
                std::polar(1.0, -two_pi * static_cast<double>(q) * sample_freq * profile[l].delay_s);

    // Explicit tap-order accumulation: the summation order is part of the
    // reproducibility contract, so no BLAS-style reassociation here.
    ChannelTransferFunction ctf;
    ctf.samples.setZero(s_total, q_total);
    for (int s = 0; s < s_total; ++s)
        for (int q = 0; q < q_total; ++q) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t l = 0; l < taps; ++l)
                acc += taps_time(s, static_cast<Eigen::Index>(l)) *
                       steering(static_cast<Eigen::Index>(l), q);
            ctf.samples(s, q) = acc;
        }
    ctf.sample_time = sample_time;
    ctf.sample_freq = sample_freq;
    ctf.carrier_freq = carrier_freq;
    return ctf;
}

} // namespace chanstat
