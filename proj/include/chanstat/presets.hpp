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

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chanstat/errors.hpp"
#include "chanstat/synth.hpp"

namespace chanstat {

/// Parameters of a seeded Jakes/Clarke WSSUS reference channel.
struct JakesSpec {
    double f_d_max_hz = 200.0;
    int num_sinusoids = 32;
    std::uint64_t seed = 77;
    int num_snapshots = 500;
    int num_subcarriers = 64;
    double sample_time_s = 1e-4;
    double sample_freq_hz = 100e6 / 64;
    std::vector<DelayTap> profile;
    double carrier_freq_hz = 2.55e9;
};

using Preset = std::variant<Scenario, JakesSpec>;

/// Demo environment: a LOS path plus five fixed single-bounce scatterers
/// spread around the lab, chosen so the path Doppler trajectories cross and
/// produce visible stationarity structure over the sweep.
inline std::vector<PropagationPath> demo_paths() {
    using Kind = PropagationPath::Kind;
    std::vector<PropagationPath> paths;
    paths.push_back({Kind::line_of_sight, Eigen::Vector3d::Zero(), {1.0, 0.0}});
    paths.push_back({Kind::single_bounce, {4.0, 4.0, 0.0}, {0.70, 0.00}});
    paths.push_back({Kind::single_bounce, {-5.0, 6.0, 0.0}, {0.60, 0.15}});
    paths.push_back({Kind::single_bounce, {2.0, 10.0, 0.0}, {0.50, -0.10}});
    paths.push_back({Kind::single_bounce, {-3.0, 2.0, 0.0}, {0.55, 0.20}});
    paths.push_back({Kind::single_bounce, {6.0, 9.0, 0.5}, {0.40, 0.00}});
    return paths;
}

/// Rotary-arm scene shared by the paper presets: 1 m arm sweeping -40..+40
/// degrees, RX fixed 8 m away, 100 MHz bandwidth, 500 snapshots, demo paths.
inline Scenario rotary_arm_scene(double carrier_hz, double velocity_mps, int subcarriers) {
    Scenario scn;
    scn.arm_radius_m = 1.0;
    scn.arm_center_m = Eigen::Vector3d::Zero();
    scn.alpha_start_deg = -40.0;
    scn.alpha_end_deg = 40.0;
    scn.velocity_mps = velocity_mps;
    scn.rx_position_m = Eigen::Vector3d(0.0, 8.0, 0.0);
    scn.carrier_freq_hz = carrier_hz;
    scn.bandwidth_hz = 100e6;
    scn.num_subcarriers = subcarriers;
    scn.num_snapshots = 500;
    scn.paths = demo_paths();
    return scn;
}

inline std::vector<std::string> preset_names() {
    return {"paper-25g5-v100", "paper-25g5-v40", "paper-2g55-v100", "jakes-wssus"};
}

/// Named parameter sets. The three rotary-arm presets pair the carrier with
/// the subcarrier spacing used at that velocity (1 MHz at 100 km/h, 400 kHz
/// at 40 km/h) so each keeps 500 snapshots across the sweep; jakes-wssus is
/// the stationary reference channel.
inline Preset preset(std::string_view name) {
    if (name == "paper-25g5-v100")
        return rotary_arm_scene(25.5e9, 100.0 / 3.6, 100);
    if (name == "paper-25g5-v40")
        return rotary_arm_scene(25.5e9, 40.0 / 3.6, 250);
    if (name == "paper-2g55-v100")
        return rotary_arm_scene(2.55e9, 100.0 / 3.6, 100);
    if (name == "jakes-wssus") {
        JakesSpec spec;
        spec.profile = {{0.0, 0.35}, {5e-8, 0.25}, {1.2e-7, 0.20}, {2.5e-7, 0.12}, {4e-7, 0.08}};
        return spec;
    }
    throw ConfigError("unknown preset '" + std::string(name) +
                      "'; available: paper-25g5-v100, paper-25g5-v40, paper-2g55-v100, jakes-wssus");
}

/// Synthesizes whichever channel a preset describes.
inline ChannelTransferFunction synth_preset(const Preset &p) {
    if (std::holds_alternative<Scenario>(p))
        return synth_ctf(std::get<Scenario>(p));
    const auto &j = std::get<JakesSpec>(p);
    return jakes_wssus_ctf(j.f_d_max_hz, j.num_sinusoids, j.seed, j.num_snapshots,
                           j.num_subcarriers, j.sample_time_s, j.sample_freq_hz, j.profile,
                           j.carrier_freq_hz);
}

} // namespace chanstat
