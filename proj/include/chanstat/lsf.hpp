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

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <vector>

#include "chanstat/ctf.hpp"
#include "chanstat/dpss.hpp"
#include "chanstat/parallel.hpp"

namespace chanstat {

/// Local scattering function estimate over one region: nonnegative power,
/// rows = Doppler bins in natural DFT order (row 0 = DC), columns = delay
/// bins (column 0 = zero delay). Reports apply the fftshift reordering; see
/// shifted_doppler_row / doppler_bin_hz.
struct Lsf {
    Eigen::MatrixXd values; // N x M, >= 0
};

/// The per-region scattering functions of a whole channel, in region order,
/// together with the resolved analysis configuration and the time step they
/// were computed at.
struct LsfSequence {
    std::vector<Lsf> lsfs;
    AnalysisConfig config;    // lctf_freq_len resolved to the value actually used
    double sample_time = 0.0; // T_s of the source channel

    int count() const { return static_cast<int>(lsfs.size()); }
};

/// Cached unitary DFT factors for the Doppler-delay transform
/// S = F_N X F_M^H: a forward DFT down the time axis and an inverse DFT
/// across the frequency axis, both scaled 1/sqrt(len) so the transform
/// preserves the Frobenius norm exactly.
class DopplerDelayPlan {
public:
    DopplerDelayPlan(Eigen::Index n, Eigen::Index m)
        : forward_time_(dft_matrix(n, -1)), inverse_freq_(dft_matrix(m, +1)) {}

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd &x) const {
        if (x.rows() != forward_time_.rows() || x.cols() != inverse_freq_.rows())
            throw ConfigError("matrix shape does not match the transform plan");
        return forward_time_ * x * inverse_freq_;
    }

    Eigen::Index time_len() const { return forward_time_.rows(); }
    Eigen::Index freq_len() const { return inverse_freq_.rows(); }

private:
    // Entry (a,b) = exp(sign * 2*pi*i * (a*b mod l) / l) / sqrt(l). Reducing
    // the index product modulo l keeps the phase argument small and accurate.
    static Eigen::MatrixXcd dft_matrix(Eigen::Index l, int sign) {
        if (l < 1)
            throw ConfigError("transform length must be >= 1");
        Eigen::MatrixXcd f(l, l);
        const double scale = 1.0 / std::sqrt(static_cast<double>(l));
        for (Eigen::Index a = 0; a < l; ++a)
            for (Eigen::Index b = 0; b < l; ++b) {
                const long long mod = (static_cast<long long>(a) * b) % l;
                const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(mod) /
                                     static_cast<double>(l);
                f(a, b) = std::polar(scale, angle);
            }
        return f;
    }

    Eigen::MatrixXcd forward_time_;
    Eigen::MatrixXcd inverse_freq_;
};

/// Hadamard product of a local region with a real window.
inline Eigen::MatrixXcd windowed_transfer(const Eigen::MatrixXcd &lctf,
                                          const Eigen::MatrixXd &window) {
    if (lctf.rows() != window.rows() || lctf.cols() != window.cols())
        throw ConfigError("window shape " + format_int(window.rows()) + "x" + format_int(window.cols()) +
                          " does not match region shape " + format_int(lctf.rows()) + "x" +
                          format_int(lctf.cols()));
    return lctf.cwiseProduct(window.cast<std::complex<double>>());
}

/// Unitary Doppler-delay transform of one windowed region.
inline Eigen::MatrixXcd doppler_delay_transform(const Eigen::MatrixXcd &windowed) {
    return DopplerDelayPlan(windowed.rows(), windowed.cols()).apply(windowed);
}

namespace detail {

inline Lsf estimate_lsf_with_plan(const Eigen::MatrixXcd &lctf, const TaperSet &tapers_time,
                                  const TaperSet &tapers_freq, const DopplerDelayPlan &plan) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(lctf.rows(), lctf.cols());
    for (const auto &u : tapers_time.tapers)
        for (const auto &v : tapers_freq.tapers) {
            const Eigen::MatrixXcd windowed = windowed_transfer(lctf, make_tf_window(u, v));
            acc += plan.apply(windowed).cwiseAbs2();
        }
    acc *= 1.0 / (static_cast<double>(tapers_time.tapers.size()) *
                  static_cast<double>(tapers_freq.tapers.size()));
    return Lsf{std::move(acc)};
}

} // namespace detail

/// Multitaper scattering function of one region: the mean over all I*J taper
/// pairs of |F_N (lctf . G_w) F_M^H|^2, with uniform weights.
inline Lsf estimate_lsf(const Eigen::MatrixXcd &lctf, const TaperSet &tapers_time,
                        const TaperSet &tapers_freq) {
    if (tapers_time.length != lctf.rows())
        throw ConfigError("time taper length " + format_int(tapers_time.length) +
                          " does not match region rows " + format_int(lctf.rows()));
    if (tapers_freq.length != lctf.cols())
        throw ConfigError("frequency taper length " + format_int(tapers_freq.length) +
                          " does not match region columns " + format_int(lctf.cols()));
    const DopplerDelayPlan plan(lctf.rows(), lctf.cols());
    return detail::estimate_lsf_with_plan(lctf, tapers_time, tapers_freq, plan);
}

/// Runs the estimator over every region of the channel in index order.
/// Tapers and transform factors are built once; regions are processed in
/// parallel and assembled deterministically.
inline LsfSequence estimate_lsf_sequence(const ChannelTransferFunction &ctf,
                                         const AnalysisConfig &cfg) {
    ctf.validate();
    cfg.validate(ctf.num_snapshots(), ctf.num_subcarriers());

    AnalysisConfig resolved = cfg;
    resolved.lctf_freq_len = cfg.resolved_freq_len(ctf.num_subcarriers());

    const int n = resolved.lctf_time_len;
    const int m = resolved.lctf_freq_len;
    const int k_total = num_lctf(ctf.num_snapshots(), n, resolved.time_hop);

    const TaperSet tapers_time =
        generate_dpss(n, resolved.taper_time.half_bandwidth_bins, resolved.taper_time.count);
    const TaperSet tapers_freq =
        generate_dpss(m, resolved.taper_freq.half_bandwidth_bins, resolved.taper_freq.count);
    const DopplerDelayPlan plan(n, m);

    LsfSequence seq;
    seq.lsfs.resize(k_total);
    seq.config = resolved;
    seq.sample_time = ctf.sample_time;

    parallel_for(static_cast<std::size_t>(k_total), [&](std::size_t k) {
        const Eigen::MatrixXcd lctf = extract_lctf(ctf, static_cast<int>(k), resolved);
        seq.lsfs[k] = detail::estimate_lsf_with_plan(lctf, tapers_time, tapers_freq, plan);
    });
    return seq;
}

/// Natural-order Doppler row p mapped to its fftshift position (0-based), so
/// negative Doppler comes first and DC sits at floor(N/2).
inline int shifted_doppler_row(int p, int n) { return (p + n / 2) % n; }

/// Doppler frequency of 1-based shifted row index p: (p - 1 - floor(N/2))/(N*T_s).
inline double doppler_bin_hz(int p_shifted_1based, int n, double sample_time) {
    return (p_shifted_1based - 1 - n / 2) / (n * sample_time);
}

/// Delay of 1-based column index r: (r - 1)/(M*f_s).
inline double delay_bin_s(int r_1based, int m, double sample_freq) {
    return (r_1based - 1) / (m * sample_freq);
}

} // namespace chanstat
