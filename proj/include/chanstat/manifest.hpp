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

#include <ctime>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chanstat/ctf.hpp"
#include "chanstat/digest.hpp"
#include "chanstat/version.hpp"

namespace chanstat {

/// Every result set ships with a manifest recording the tool version, the
/// command, the resolved configuration, and a SHA-256 digest of each input so
/// results can be tied back to their exact source bytes.

struct ManifestInput {
    std::string path;
    std::uint64_t bytes = 0;
    std::string sha256;
};

inline ManifestInput manifest_input(const std::filesystem::path &path) {
    ManifestInput input;
    input.path = path.string();
    input.bytes = static_cast<std::uint64_t>(std::filesystem::file_size(path));
    input.sha256 = sha256_file(path);
    return input;
}

inline std::string utc_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

inline nlohmann::ordered_json analysis_config_json(const AnalysisConfig &cfg) {
    nlohmann::ordered_json j;
    j["n"] = cfg.lctf_time_len;
    j["m"] = cfg.lctf_freq_len;
    j["hop"] = cfg.time_hop;
    j["wt"] = cfg.taper_time.half_bandwidth_bins;
    j["tapers_t"] = cfg.taper_time.count;
    j["wf"] = cfg.taper_freq.half_bandwidth_bins;
    j["tapers_f"] = cfg.taper_freq.count;
    j["cutoff"] = cfg.cutoff;
    return j;
}

/// Assembles the manifest document. The timestamp is optional so byte-exact
/// reruns can be compared (--no-timestamp).
inline nlohmann::ordered_json make_manifest(const std::string &command,
                                            const nlohmann::ordered_json &config,
                                            const std::vector<ManifestInput> &inputs,
                                            const std::vector<std::string> &outputs,
                                            const std::optional<std::string> &timestamp) {
    nlohmann::ordered_json j;
    j["tool"] = "chanstat";
    j["version"] = kVersion;
    j["command"] = command;
    if (timestamp)
        j["timestamp_utc"] = *timestamp;
    j["config"] = config;
    j["inputs"] = nlohmann::ordered_json::array();
    for (const auto &in : inputs)
        j["inputs"].push_back({{"path", in.path}, {"bytes", in.bytes}, {"sha256", in.sha256}});
    j["outputs"] = outputs;
    return j;
}

} // namespace chanstat
