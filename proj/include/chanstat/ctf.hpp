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
#include <string>

#include "chanstat/errors.hpp"
#include "chanstat/numfmt.hpp"

namespace chanstat {

/// Sampled time-variant channel transfer function: S time snapshots (rows) by
/// Q subcarriers (columns) of complex gain, with the sampling grid attached.
/// Immutable by convention once filled in; analysis stages never modify it.
struct ChannelTransferFunction {
    Eigen::MatrixXcd samples; // S x Q
    double sample_time = 0.0; // T_s, seconds per snapshot
    double sample_freq = 0.0; // f_s, Hz per subcarrier
    double carrier_freq = 0.0; // f_c, Hz; metadata only, unused by the estimator

    Eigen::Index num_snapshots() const { return samples.rows(); }
    Eigen::Index num_subcarriers() const { return samples.cols(); }

    void validate() const {
        if (samples.rows() < 1 || samples.cols() < 1)
            throw ConfigError("channel needs at least one snapshot and one subcarrier");
        if (!(sample_time > 0.0))
            throw ConfigError("sample_time must be positive, got " + format_real(sample_time));
        if (!(sample_freq > 0.0))
            throw ConfigError("sample_freq must be positive, got " + format_real(sample_freq));
        if (!samples.allFinite())
            throw ConfigError("channel samples contain NaN or Inf");
    }
};

/// One DPSS taper family: half-bandwidth in DFT bins and how many tapers.
struct TaperConfig {
    double half_bandwidth_bins = 1.0; // W
    int count = 1;                    // number of tapers drawn from the family
};

/// Analysis parameters: local region size (N x M), hop between regions,
/// taper families for both axes, and the collinearity cutoff.
struct AnalysisConfig {
    int lctf_time_len = 25; // N, snapshots per local region
    int lctf_freq_len = 0;  // M, subcarriers per region; 0 selects the full band
    int time_hop = 2;       // snapshots between consecutive regions
    TaperConfig taper_time{2.0, 2};
    TaperConfig taper_freq{1.0, 1};
    double cutoff = 0.9;

    /// M actually used against a channel with q subcarriers.
    int resolved_freq_len(Eigen::Index q) const {
        return lctf_freq_len == 0 ? static_cast<int>(q) : lctf_freq_len;
    }

    /// Checks every invariant against a channel of shape s x q.
    void validate(Eigen::Index s, Eigen::Index q) const {
        if (lctf_time_len < 1 || lctf_time_len > s)
            throw ConfigError("LCTF time length N=" + format_int(lctf_time_len) +
                              " must satisfy 1 <= N <= S=" + format_int(s));
        const int m = resolved_freq_len(q);
        if (m < 1 || m > q)
            throw ConfigError("LCTF frequency length M=" + format_int(m) +
                              " must satisfy 1 <= M <= Q=" + format_int(q));
        if (time_hop < 1)
            throw ConfigError("time hop must be >= 1, got " + format_int(time_hop));
        const int max_time_tapers = static_cast<int>(std::floor(2.0 * taper_time.half_bandwidth_bins));
        if (taper_time.count < 1 || taper_time.count > max_time_tapers)
            throw ConfigError("time taper count I=" + format_int(taper_time.count) +
                              " must satisfy 1 <= I <= floor(2*W_t)=" + format_int(max_time_tapers));
        const int max_freq_tapers =
            std::max(static_cast<int>(std::floor(2.0 * taper_freq.half_bandwidth_bins)), 1);
        if (taper_freq.count < 1 || taper_freq.count > max_freq_tapers)
            throw ConfigError("frequency taper count J=" + format_int(taper_freq.count) +
                              " must satisfy 1 <= J <= max(floor(2*W_f),1)=" + format_int(max_freq_tapers));
        if (!(cutoff > 0.0) || !(cutoff < 1.0))
            throw ConfigError("collinearity cutoff must lie in (0,1), got " + format_real(cutoff));
    }
};

/// Number of local regions that fit: K_t = floor((S - N)/hop) + 1.
inline int num_lctf(Eigen::Index s, int n, int hop) {
    if (n < 1)
        throw ConfigError("LCTF time length must be >= 1");
    if (static_cast<Eigen::Index>(n) > s)
        throw ConfigError("LCTF time length N=" + format_int(n) +
                          " exceeds snapshot count S=" + format_int(s));
    if (hop < 1)
        throw ConfigError("time hop must be >= 1");
    return static_cast<int>((s - n) / hop) + 1;
}

/// Local region k (0-based): rows k*hop .. k*hop+N-1, columns 0..M-1 of the
/// channel matrix. Plain copy, no scaling. File formats and CLI output label
/// regions with the 1-based index k_t = k + 1.
inline Eigen::MatrixXcd extract_lctf(const ChannelTransferFunction &ctf, int k,
                                     const AnalysisConfig &cfg) {
    const Eigen::Index s = ctf.num_snapshots();
    const Eigen::Index q = ctf.num_subcarriers();
    const int k_total = num_lctf(s, cfg.lctf_time_len, cfg.time_hop);
    if (k < 0 || k >= k_total)
        throw ConfigError("LCTF index k_t=" + format_int(k + 1) + " outside 1.." + format_int(k_total));
    const int m = cfg.resolved_freq_len(q);
    if (m > q)
        throw ConfigError("LCTF frequency length M=" + format_int(m) +
                          " exceeds subcarrier count Q=" + format_int(q));
    return ctf.samples.block(static_cast<Eigen::Index>(k) * cfg.time_hop, 0, cfg.lctf_time_len, m);
}

} // namespace chanstat
