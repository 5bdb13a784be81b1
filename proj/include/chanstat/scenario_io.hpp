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

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chanstat/errors.hpp"
#include "chanstat/numfmt.hpp"
#include "chanstat/synth.hpp"

namespace chanstat {

// Scenario description files are plain text: [section] headers followed by
// key = value lines, '#' starts a comment. Sections: [arm], [rx], [rf], and
// one [path] per propagation path. docs/FORMATS.md lists every key.

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] inline void scenario_fail(std::string_view source, int line, const std::string &msg) {
    throw FormatError(std::string(source) + ":" + format_int(line) + ": " + msg);
}

inline double require_real(std::string_view source, int line, std::string_view value) {
    auto v = parse_real(value);
    if (!v)
        scenario_fail(source, line, "expected a number, got '" + std::string(value) + "'");
    return *v;
}

inline long long require_int(std::string_view source, int line, std::string_view value) {
    auto v = parse_int(value);
    if (!v)
        scenario_fail(source, line, "expected an integer, got '" + std::string(value) + "'");
    return *v;
}

inline std::vector<double> require_reals(std::string_view source, int line,
                                         std::string_view value, std::size_t arity) {
    std::vector<double> out;
    std::istringstream iss{std::string(value)};
    std::string tok;
    while (iss >> tok)
        out.push_back(require_real(source, line, tok));
    if (out.size() != arity)
        scenario_fail(source, line, "expected " + format_int(arity) + " numbers, got " +
                                        format_int(out.size()));
    return out;
}

} // namespace detail

/// Parses a scenario description. `source` names the input in error messages;
/// parse errors carry 1-based line numbers.
inline Scenario parse_scenario(std::istream &in, std::string_view source = "<scenario>") {
    using detail::scenario_fail;

    Scenario scn;
    scn.paths.clear();
    enum class Section { none, arm, rx, rf, path };
    Section section = Section::none;
    PropagationPath current_path;
    bool path_open = false;
    bool seen_arm = false, seen_rx = false, seen_rf = false;

    auto flush_path = [&]() {
        if (path_open)
            scn.paths.push_back(current_path);
        current_path = PropagationPath{};
        path_open = false;
    };

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view sv{raw};
        if (const auto hash = sv.find('#'); hash != std::string_view::npos)
            sv = sv.substr(0, hash);
        sv = detail::trim(sv);
        if (sv.empty())
            continue;

        if (sv.front() == '[') {
            if (sv.back() != ']')
                scenario_fail(source, line, "unterminated section header");
            const std::string_view name = sv.substr(1, sv.size() - 2);
            if (name == "arm") {
                section = Section::arm;
                seen_arm = true;
            } else if (name == "rx") {
                section = Section::rx;
                seen_rx = true;
            } else if (name == "rf") {
                section = Section::rf;
                seen_rf = true;
            } else if (name == "path") {
                flush_path();
                section = Section::path;
                path_open = true;
            } else {
                scenario_fail(source, line, "unknown section [" + std::string(name) + "]");
            }
            continue;
        }

        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            scenario_fail(source, line, "expected 'key = value'");
        const std::string key{detail::trim(sv.substr(0, eq))};
        const std::string_view value = detail::trim(sv.substr(eq + 1));
        if (key.empty() || value.empty())
            scenario_fail(source, line, "expected 'key = value'");

        switch (section) {
        case Section::none:
            scenario_fail(source, line, "key outside of any section");
        case Section::arm:
            if (key == "radius_m")
                scn.arm_radius_m = detail::require_real(source, line, value);
            else if (key == "center_m") {
                const auto v = detail::require_reals(source, line, value, 3);
                scn.arm_center_m = Eigen::Vector3d(v[0], v[1], v[2]);
            } else if (key == "alpha_start_deg")
                scn.alpha_start_deg = detail::require_real(source, line, value);
            else if (key == "alpha_end_deg")
                scn.alpha_end_deg = detail::require_real(source, line, value);
            else if (key == "velocity_mps")
                scn.velocity_mps = detail::require_real(source, line, value);
            else
                scenario_fail(source, line, "unknown key '" + key + "' in [arm]");
            break;
        case Section::rx:
            if (key == "position_m") {
                const auto v = detail::require_reals(source, line, value, 3);
                scn.rx_position_m = Eigen::Vector3d(v[0], v[1], v[2]);
            } else
                scenario_fail(source, line, "unknown key '" + key + "' in [rx]");
            break;
        case Section::rf:
            if (key == "carrier_hz")
                scn.carrier_freq_hz = detail::require_real(source, line, value);
            else if (key == "bandwidth_hz")
                scn.bandwidth_hz = detail::require_real(source, line, value);
            else if (key == "subcarriers")
                scn.num_subcarriers = static_cast<int>(detail::require_int(source, line, value));
            else if (key == "snapshots")
                scn.num_snapshots = static_cast<int>(detail::require_int(source, line, value));
            else if (key == "amplitude") {
                if (value == "constant")
                    scn.inverse_distance_amplitude = false;
                else if (value == "inverse-distance")
                    scn.inverse_distance_amplitude = true;
                else
                    scenario_fail(source, line,
                                  "amplitude must be 'constant' or 'inverse-distance'");
            } else
                scenario_fail(source, line, "unknown key '" + key + "' in [rf]");
            break;
        case Section::path:
            if (key == "kind") {
                if (value == "los")
                    current_path.kind = PropagationPath::Kind::line_of_sight;
                else if (value == "bounce")
                    current_path.kind = PropagationPath::Kind::single_bounce;
                else
                    scenario_fail(source, line, "path kind must be 'los' or 'bounce'");
            } else if (key == "scatterer_m") {
                const auto v = detail::require_reals(source, line, value, 3);
                current_path.scatterer = Eigen::Vector3d(v[0], v[1], v[2]);
            } else if (key == "gain") {
                const auto v = detail::require_reals(source, line, value, 2);
                current_path.gain = {v[0], v[1]};
            } else
                scenario_fail(source, line, "unknown key '" + key + "' in [path]");
            break;
        }
    }
    flush_path();

    if (!seen_arm || !seen_rx || !seen_rf)
        throw FormatError(std::string(source) + ": scenario needs [arm], [rx] and [rf] sections");
    scn.validate();
    return scn;
}

inline Scenario parse_scenario_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError(path + ": cannot open scenario file");
    return parse_scenario(in, path);
}

/// Serializes a scenario in the same text format parse_scenario reads.
inline std::string write_scenario(const Scenario &scn) {
    std::ostringstream out;
    auto vec = [](const Eigen::Vector3d &v) {
        return format_real(v.x()) + " " + format_real(v.y()) + " " + format_real(v.z());
    };
    out << "[arm]\n";
    out << "radius_m = " << format_real(scn.arm_radius_m) << "\n";
    out << "center_m = " << vec(scn.arm_center_m) << "\n";
    out << "alpha_start_deg = " << format_real(scn.alpha_start_deg) << "\n";
    out << "alpha_end_deg = " << format_real(scn.alpha_end_deg) << "\n";
    out << "velocity_mps = " << format_real(scn.velocity_mps) << "\n";
    out << "\n[rx]\n";
    out << "position_m = " << vec(scn.rx_position_m) << "\n";
    out << "\n[rf]\n";
    out << "carrier_hz = " << format_real(scn.carrier_freq_hz) << "\n";
    out << "bandwidth_hz = " << format_real(scn.bandwidth_hz) << "\n";
    out << "subcarriers = " << format_int(scn.num_subcarriers) << "\n";
    out << "snapshots = " << format_int(scn.num_snapshots) << "\n";
    out << "amplitude = " << (scn.inverse_distance_amplitude ? "inverse-distance" : "constant")
        << "\n";
    for (const auto &p : scn.paths) {
        out << "\n[path]\n";
        if (p.kind == PropagationPath::Kind::line_of_sight) {
            out << "kind = los\n";
        } else {
            out << "kind = bounce\n";
            out << "scatterer_m = " << vec(p.scatterer) << "\n";
        }
        out << "gain = " << format_real(p.gain.real()) << " " << format_real(p.gain.imag())
            << "\n";
    }
    return out.str();
}

} // namespace chanstat
