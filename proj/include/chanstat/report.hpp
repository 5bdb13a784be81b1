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

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chanstat/dpss.hpp"
#include "chanstat/lsf.hpp"
#include "chanstat/stationarity.hpp"
#include "chanstat/version.hpp"

namespace chanstat {

// CSV/JSON result emitters. All reals are written with 17 significant digits
// and '.' decimal separator; region indices are 1-based.

/// Taper dump: one row per taper, "index,lambda,<length values>".
inline std::string dpss_csv(const TaperSet &set) {
    std::string out = "index,lambda";
    for (int i = 0; i < set.length; ++i)
        out += ",x" + format_int(i);
    out += "\n";
    for (int i = 0; i < set.count(); ++i) {
        out += format_int(i + 1) + "," + format_real(set.concentrations[i]);
        for (Eigen::Index j = 0; j < set.tapers[i].size(); ++j)
            out += "," + format_real(set.tapers[i][j]);
        out += "\n";
    }
    return out;
}

/// Collinearity matrix: a header row labeling the columns (region indices, or
/// arc angles when supplied) followed by the K_t x K_t values.
inline std::string collinearity_csv(const CollinearityMatrix &coll,
                                    const std::optional<std::vector<double>> &angles_deg) {
    const int k_total = coll.count();
    std::string out;
    for (int k = 0; k < k_total; ++k) {
        if (k)
            out += ",";
        out += angles_deg ? format_real((*angles_deg)[k]) : format_int(k + 1);
    }
    out += "\n";
    for (int a = 0; a < k_total; ++a) {
        for (int b = 0; b < k_total; ++b) {
            if (b)
                out += ",";
            out += format_real(coll.values(a, b));
        }
        out += "\n";
    }
    return out;
}

/// Per-region stationarity rows: k_t, optional angle, forward run length,
/// stationarity time and the right-censoring flag.
inline std::string stationarity_csv(const StationarityResult &result,
                                    const std::optional<std::vector<double>> &angles_deg) {
    std::string out = angles_deg ? "k_t,angle_deg,run_length,t_stat_seconds,censored\n"
                                 : "k_t,run_length,t_stat_seconds,censored\n";
    for (std::size_t k = 0; k < result.entries.size(); ++k) {
        const auto &e = result.entries[k];
        out += format_int(k + 1);
        if (angles_deg)
            out += "," + format_real((*angles_deg)[k]);
        out += "," + format_int(e.run_length);
        out += "," + format_real(e.t_stat_seconds);
        out += e.censored ? ",1\n" : ",0\n";
    }
    return out;
}

/// One scattering function tile, fftshifted: rows ordered negative to positive
/// Doppler with a doppler_hz label column; delays run left to right.
inline std::string lsf_tile_csv(const Lsf &lsf, double sample_time, double sample_freq) {
    const int n = static_cast<int>(lsf.values.rows());
    const int m = static_cast<int>(lsf.values.cols());
    std::string out = "doppler_hz";
    for (int r = 1; r <= m; ++r)
        out += ",delay_" + format_real(delay_bin_s(r, m, sample_freq));
    out += "\n";
    for (int shifted = 1; shifted <= n; ++shifted) {
        // invert the shift: natural row whose fftshift position is `shifted`
        const int natural = ((shifted - 1 - n / 2) % n + n) % n;
        out += format_real(doppler_bin_hz(shifted, n, sample_time));
        for (int r = 0; r < m; ++r)
            out += "," + format_real(lsf.values(natural, r));
        out += "\n";
    }
    return out;
}

struct SummaryStats {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

inline SummaryStats summary_stats(std::vector<double> values) {
    SummaryStats s;
    if (values.empty())
        return s;
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    const std::size_t n = values.size();
    s.median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return s;
}

inline nlohmann::ordered_json stats_json(const SummaryStats &s) {
    return {{"min", s.min}, {"median", s.median}, {"max", s.max}};
}

/// Aggregate stationarity summary. t_stat_s holds the observed values;
/// t_stat_capped_s counts right-censored regions at the covered record
/// duration, which upper-bounds what the record can show.
inline nlohmann::ordered_json summary_json(const StationarityResult &result,
                                           const CollinearityMatrix &coll) {
    const int k_total = coll.count();
    const double covered_s =
        (coll.lctf_time_len + static_cast<double>(k_total - 1) * coll.time_hop) *
        coll.sample_time;

    std::vector<double> t_stat, t_capped, runs;
    int censored = 0;
    for (const auto &e : result.entries) {
        t_stat.push_back(e.t_stat_seconds);
        t_capped.push_back(e.censored ? covered_s : e.t_stat_seconds);
        runs.push_back(static_cast<double>(e.run_length));
        censored += e.censored ? 1 : 0;
    }

    nlohmann::ordered_json j;
    j["tool"] = "chanstat";
    j["version"] = kVersion;
    j["k_t_count"] = k_total;
    j["cutoff"] = result.cutoff;
    j["two_sided"] = result.two_sided;
    j["lctf_duration_s"] = coll.lctf_time_len * coll.sample_time;
    j["covered_duration_s"] = covered_s;
    j["censored_count"] = censored;
    j["run_length"] = stats_json(summary_stats(runs));
    j["t_stat_s"] = stats_json(summary_stats(t_stat));
    j["t_stat_capped_s"] = stats_json(summary_stats(t_capped));
    return j;
}

} // namespace chanstat
