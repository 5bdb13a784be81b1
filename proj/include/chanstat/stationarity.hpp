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
#include <vector>

#include "chanstat/lsf.hpp"
#include "chanstat/parallel.hpp"
#include "chanstat/synth.hpp"

namespace chanstat {

/// Pairwise collinearity of every scattering function in a sequence, with the
/// axis metadata needed to convert index distances into durations.
struct CollinearityMatrix {
    Eigen::MatrixXd values;   // K x K, symmetric, entries in [0,1], unit diagonal
    int lctf_time_len = 0;    // N
    int time_hop = 0;         // hop between regions, in snapshots
    double sample_time = 0.0; // T_s

    int count() const { return static_cast<int>(values.rows()); }
};

namespace detail {

inline double collinearity_from_parts(double dot, double norm_a, double norm_b) {
    double g = dot / (norm_a * norm_b);
    // Cauchy-Schwarz bounds the true value to [0,1]; trim float dust only.
    if (g > 1.0 && g <= 1.0 + 1e-12)
        g = 1.0;
    if (g < 0.0 && g >= -1e-12)
        g = 0.0;
    return g;
}

} // namespace detail

/// Collinearity of two scattering functions: their Frobenius inner product
/// over the product of Frobenius norms. 1 means identical shape, 0 disjoint
/// support. Throws DegenerateError if either operand is all zero.
inline double collinearity(const Lsf &a, const Lsf &b) {
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
        throw ConfigError("collinearity operands must have identical shape");
    const double norm_a = a.values.norm();
    const double norm_b = b.values.norm();
    if (norm_a == 0.0 || norm_b == 0.0)
        throw DegenerateError("all-zero scattering function operand");
    const double dot = a.values.cwiseProduct(b.values).sum();
    return detail::collinearity_from_parts(dot, norm_a, norm_b);
}

/// Full dual-time comparison: gamma[a,b] for every region pair, each unordered
/// pair evaluated once and mirrored. Throws DegenerateError naming the first
/// all-zero region (1-based, matching CLI/file indexing).
inline CollinearityMatrix collinearity_matrix(const LsfSequence &seq) {
    const int k_total = seq.count();
    if (k_total < 1)
        throw ConfigError("empty scattering function sequence");

    std::vector<double> norms(k_total);
    for (int k = 0; k < k_total; ++k) {
        norms[k] = seq.lsfs[k].values.norm();
        if (norms[k] == 0.0)
            throw DegenerateError("all-zero scattering function at k_t=" + format_int(k + 1));
    }

    CollinearityMatrix coll;
    coll.values.resize(k_total, k_total);
    coll.lctf_time_len = seq.config.lctf_time_len;
    coll.time_hop = seq.config.time_hop;
    coll.sample_time = seq.sample_time;

    parallel_for(static_cast<std::size_t>(k_total), [&](std::size_t a) {
        for (int b = static_cast<int>(a); b < k_total; ++b) {
            const double dot =
                seq.lsfs[a].values.cwiseProduct(seq.lsfs[b].values).sum();
            const double g = detail::collinearity_from_parts(dot, norms[a], norms[b]);
            coll.values(static_cast<Eigen::Index>(a), b) = g;
            coll.values(b, static_cast<Eigen::Index>(a)) = g;
        }
    });
    return coll;
}

/// Stationarity of one region: the longest contiguous run of comparisons that
/// stay above the cutoff, the resulting duration, and whether the run was cut
/// short by the end of the record (so the true value may be larger).
struct StationarityEntry {
    int run_length = 0;          // d_max: hops covered beyond the region itself
    double t_stat_seconds = 0.0; // (N + d_max*hop + [two-sided backward hops]) * T_s
    bool censored = false;
};

struct StationarityResult {
    std::vector<StationarityEntry> entries;
    double cutoff = 0.9;
    bool two_sided = false;
};

/// Stationarity time of region k (0-based): walk forward while
/// gamma[k, k+d] > cutoff without interruption; d_max hops of the run give
/// (N + d_max*hop)*T_s. With two_sided the run also extends backward and both
/// directions contribute hops.
inline StationarityEntry stationarity_time(const CollinearityMatrix &coll, int k, double cutoff,
                                           bool two_sided = false) {
    const int k_total = coll.count();
    if (k < 0 || k >= k_total)
        throw ConfigError("region index k_t=" + format_int(k + 1) + " outside 1.." +
                          format_int(k_total));

    int forward = 0;
    while (k + forward + 1 < k_total && coll.values(k, k + forward + 1) > cutoff)
        ++forward;
    int backward = 0;
    if (two_sided)
        while (k - backward - 1 >= 0 && coll.values(k, k - backward - 1) > cutoff)
            ++backward;

    StationarityEntry entry;
    entry.run_length = forward + backward;
    entry.t_stat_seconds =
        (coll.lctf_time_len + static_cast<double>(entry.run_length) * coll.time_hop) *
        coll.sample_time;
    entry.censored = (k + forward == k_total - 1) || (two_sided && k - backward == 0);
    return entry;
}

/// Stationarity times for every region.
inline StationarityResult stationarity_times(const CollinearityMatrix &coll, double cutoff,
                                             bool two_sided = false) {
    StationarityResult result;
    result.cutoff = cutoff;
    result.two_sided = two_sided;
    result.entries.resize(coll.count());
    for (int k = 0; k < coll.count(); ++k)
        result.entries[k] = stationarity_time(coll, k, cutoff, two_sided);
    return result;
}

/// Arc angle (degrees) at the center of region k (0-based) for a rotary-arm
/// scenario: alpha_start + omega * t_center with t_center = (k*hop + N/2)*T_s.
/// The half-window offset places the angle at the middle of the region.
inline double index_to_angle(int k, const Scenario &scn, const AnalysisConfig &cfg) {
    if (!(scn.velocity_mps > 0.0) || !(scn.arm_radius_m > 0.0))
        throw ConfigError("angle mapping undefined without angular velocity");
    const double t_s = scn.sample_time_s();
    const double t_center =
        (static_cast<double>(k) * cfg.time_hop + cfg.lctf_time_len / 2.0) * t_s;
    return scn.alpha_start_deg + scn.omega_deg_per_s() * t_center;
}

} // namespace chanstat
