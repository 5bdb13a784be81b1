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

// Command-line front end. Subcommands: synth, dpss, lsf, collinearity,
// stationarity, pipeline. Exit codes: 0 ok, 2 config error, 3 format error,
// 4 numerical degeneracy.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chanstat/chanstat.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct GlobalOpts {
    bool no_timestamp = false;
    bool errors_json = false;
};

struct AnalysisOpts {
    int n = 25;
    int m = 0; // 0 = full band
    int hop = 2;
    double wt = 2.0;
    int tapers_t = 2;
    double wf = 1.0;
    int tapers_f = 1;
    double cutoff = 0.9;

    chanstat::AnalysisConfig to_config() const {
        chanstat::AnalysisConfig cfg;
        cfg.lctf_time_len = n;
        cfg.lctf_freq_len = m;
        cfg.time_hop = hop;
        cfg.taper_time = {wt, tapers_t};
        cfg.taper_freq = {wf, tapers_f};
        cfg.cutoff = cutoff;
        return cfg;
    }
};

void add_analysis_flags(CLI::App *cmd, AnalysisOpts &opts) {
    cmd->add_option("--n", opts.n, "LCTF time length N in snapshots");
    cmd->add_option("--m", opts.m, "LCTF frequency length M in subcarriers (0 = full band)");
    cmd->add_option("--hop", opts.hop, "hop between consecutive LCTFs in snapshots");
    cmd->add_option("--wt", opts.wt, "time-taper half-bandwidth W_t in DFT bins");
    cmd->add_option("--tapers-t", opts.tapers_t, "number of time tapers I");
    cmd->add_option("--wf", opts.wf, "frequency-taper half-bandwidth W_f in DFT bins");
    cmd->add_option("--tapers-f", opts.tapers_f, "number of frequency tapers J");
    cmd->add_option("--cutoff", opts.cutoff, "collinearity cutoff in (0,1)");
}

std::optional<std::string> timestamp_or_none(const GlobalOpts &g) {
    if (g.no_timestamp)
        return std::nullopt;
    return chanstat::utc_timestamp_now();
}

void write_manifest_next_to(const fs::path &result_dir_or_file, const std::string &command,
                            const ordered_json &config,
                            const std::vector<chanstat::ManifestInput> &inputs,
                            const std::vector<std::string> &outputs, const GlobalOpts &g,
                            bool is_dir) {
    const ordered_json manifest =
        chanstat::make_manifest(command, config, inputs, outputs, timestamp_or_none(g));
    const fs::path path = is_dir ? result_dir_or_file / "manifest.json"
                                 : fs::path(result_dir_or_file.string() + ".manifest.json");
    chanstat::write_file_atomic(path, manifest.dump(2) + "\n");
}

// Source of a channel: a preset name, a scenario file, or an existing CTF
// container. Returns the channel plus the geometry when one is available.
struct ChannelSource {
    chanstat::ChannelTransferFunction ctf;
    std::optional<chanstat::Scenario> scenario;
    std::vector<chanstat::ManifestInput> inputs;
    ordered_json source_desc;
};

ChannelSource load_channel(const std::string &preset_name, const std::string &scenario_path,
                           const std::string &ctf_path) {
    const int given = (!preset_name.empty()) + (!scenario_path.empty()) + (!ctf_path.empty());
    if (given != 1)
        throw chanstat::ConfigError("exactly one of --preset, --scenario or --in is required");

    ChannelSource src;
    if (!preset_name.empty()) {
        const chanstat::Preset p = chanstat::preset(preset_name);
        src.ctf = chanstat::synth_preset(p);
        if (std::holds_alternative<chanstat::Scenario>(p))
            src.scenario = std::get<chanstat::Scenario>(p);
        src.source_desc = {{"preset", preset_name}};
    } else if (!scenario_path.empty()) {
        src.scenario = chanstat::parse_scenario_file(scenario_path);
        src.ctf = chanstat::synth_ctf(*src.scenario);
        src.inputs.push_back(chanstat::manifest_input(scenario_path));
        src.source_desc = {{"scenario", scenario_path}};
    } else {
        src.ctf = chanstat::read_ctf(ctf_path);
        src.inputs.push_back(chanstat::manifest_input(ctf_path));
        src.source_desc = {{"ctf", ctf_path}};
    }
    return src;
}

std::optional<std::vector<double>> angles_for(const std::optional<chanstat::Scenario> &scn,
                                              const chanstat::AnalysisConfig &cfg, int k_total,
                                              bool want_angles) {
    if (!want_angles)
        return std::nullopt;
    if (!scn)
        throw chanstat::ConfigError("--angles needs a scenario or geometric preset");
    std::vector<double> angles(k_total);
    for (int k = 0; k < k_total; ++k)
        angles[k] = chanstat::index_to_angle(k, *scn, cfg);
    return angles;
}

int run_synth(const std::string &preset_name, const std::string &scenario_path,
              const std::string &out_path, const GlobalOpts &g) {
    if (preset_name.empty() == scenario_path.empty())
        throw chanstat::ConfigError("synth needs exactly one of --preset or --scenario");
    ChannelSource src = load_channel(preset_name, scenario_path, "");
    chanstat::write_ctf(src.ctf, out_path);

    ordered_json config;
    config["source"] = src.source_desc;
    config["S"] = src.ctf.num_snapshots();
    config["Q"] = src.ctf.num_subcarriers();
    config["T_s"] = src.ctf.sample_time;
    config["f_s"] = src.ctf.sample_freq;
    config["f_c"] = src.ctf.carrier_freq;
    write_manifest_next_to(out_path, "synth", config, src.inputs, {fs::path(out_path).filename()},
                           g, false);
    return 0;
}

int run_dpss(int length, double w, int count, const std::string &out_path, const GlobalOpts &g) {
    const chanstat::TaperSet set = chanstat::generate_dpss(length, w, count);
    const std::string csv = chanstat::dpss_csv(set);
    if (out_path.empty()) {
        std::cout << csv;
        return 0;
    }
    chanstat::write_file_atomic(out_path, csv);
    ordered_json config = {{"length", length}, {"w", w}, {"count", count}};
    write_manifest_next_to(out_path, "dpss", config, {}, {fs::path(out_path).filename()}, g,
                           false);
    return 0;
}

int run_lsf(const std::string &in_path, const AnalysisOpts &opts, const std::string &out_path,
            const std::string &csv_dir, const GlobalOpts &g) {
    const chanstat::ChannelTransferFunction ctf = chanstat::read_ctf(in_path);
    const chanstat::LsfSequence seq = chanstat::estimate_lsf_sequence(ctf, opts.to_config());
    chanstat::write_lsf_sequence(seq, out_path);

    std::vector<std::string> outputs{fs::path(out_path).filename()};
    if (!csv_dir.empty()) {
        fs::create_directories(csv_dir);
        for (int k = 0; k < seq.count(); ++k) {
            char name[32];
            std::snprintf(name, sizeof(name), "tile_%04d.csv", k + 1);
            chanstat::write_file_atomic(fs::path(csv_dir) / name,
                                        chanstat::lsf_tile_csv(seq.lsfs[k], seq.sample_time,
                                                               ctf.sample_freq));
        }
        outputs.push_back(csv_dir + "/tile_*.csv");
    }
    write_manifest_next_to(out_path, "lsf", chanstat::analysis_config_json(seq.config),
                           {chanstat::manifest_input(in_path)}, outputs, g, false);
    return 0;
}

int run_collinearity(const std::string &in_path, const std::string &out_path,
                     const std::string &scenario_path, bool want_angles, const GlobalOpts &g) {
    const chanstat::LsfSequence seq = chanstat::read_lsf_sequence(in_path);
    const chanstat::CollinearityMatrix coll = chanstat::collinearity_matrix(seq);

    std::optional<chanstat::Scenario> scn;
    std::vector<chanstat::ManifestInput> inputs{chanstat::manifest_input(in_path)};
    if (!scenario_path.empty()) {
        scn = chanstat::parse_scenario_file(scenario_path);
        inputs.push_back(chanstat::manifest_input(scenario_path));
    }
    const auto angles = angles_for(scn, seq.config, coll.count(), want_angles);
    chanstat::write_file_atomic(out_path, chanstat::collinearity_csv(coll, angles));
    write_manifest_next_to(out_path, "collinearity", chanstat::analysis_config_json(seq.config),
                           inputs, {fs::path(out_path).filename()}, g, false);
    return 0;
}

// Shared by `stationarity` and the tail of `pipeline`.
void emit_stationarity_reports(const fs::path &out_dir,
                               const chanstat::CollinearityMatrix &coll, double cutoff,
                               bool two_sided,
                               const std::optional<std::vector<double>> &angles) {
    const chanstat::StationarityResult result =
        chanstat::stationarity_times(coll, cutoff, two_sided);
    fs::create_directories(out_dir);
    chanstat::write_file_atomic(out_dir / "collinearity.csv",
                                chanstat::collinearity_csv(coll, angles));
    chanstat::write_file_atomic(out_dir / "stationarity.csv",
                                chanstat::stationarity_csv(result, angles));
    chanstat::write_file_atomic(out_dir / "summary.json",
                                chanstat::summary_json(result, coll).dump(2) + "\n");
}

int run_stationarity(const std::string &in_path, const std::string &out_dir, double cutoff_arg,
                     bool cutoff_given, bool two_sided, const std::string &scenario_path,
                     bool want_angles, const GlobalOpts &g) {
    const chanstat::LsfSequence seq = chanstat::read_lsf_sequence(in_path);
    const double cutoff = cutoff_given ? cutoff_arg : seq.config.cutoff;
    if (!(cutoff > 0.0) || !(cutoff < 1.0))
        throw chanstat::ConfigError("collinearity cutoff must lie in (0,1)");

    const chanstat::CollinearityMatrix coll = chanstat::collinearity_matrix(seq);
    std::optional<chanstat::Scenario> scn;
    std::vector<chanstat::ManifestInput> inputs{chanstat::manifest_input(in_path)};
    if (!scenario_path.empty()) {
        scn = chanstat::parse_scenario_file(scenario_path);
        inputs.push_back(chanstat::manifest_input(scenario_path));
    }
    const auto angles = angles_for(scn, seq.config, coll.count(), want_angles);
    emit_stationarity_reports(out_dir, coll, cutoff, two_sided, angles);

    ordered_json config = chanstat::analysis_config_json(seq.config);
    config["cutoff"] = cutoff;
    config["two_sided"] = two_sided;
    write_manifest_next_to(out_dir, "stationarity", config, inputs,
                           {"collinearity.csv", "stationarity.csv", "summary.json"}, g, true);
    return 0;
}

int run_pipeline(const std::string &preset_name, const std::string &scenario_path,
                 const std::string &ctf_path, const AnalysisOpts &opts,
                 const std::string &out_dir, bool two_sided, bool want_angles,
                 const GlobalOpts &g) {
    ChannelSource src = load_channel(preset_name, scenario_path, ctf_path);
    fs::create_directories(out_dir);

    std::vector<std::string> outputs;
    if (ctf_path.empty()) { // synthesized here: keep the channel next to the results
        chanstat::write_ctf(src.ctf, fs::path(out_dir) / "channel.ctf");
        outputs.push_back("channel.ctf");
    }

    const chanstat::LsfSequence seq = chanstat::estimate_lsf_sequence(src.ctf, opts.to_config());
    chanstat::write_lsf_sequence(seq, fs::path(out_dir) / "lsf_sequence.lsf");
    outputs.push_back("lsf_sequence.lsf");

    const chanstat::CollinearityMatrix coll = chanstat::collinearity_matrix(seq);
    const auto angles = angles_for(src.scenario, seq.config, coll.count(), want_angles);
    emit_stationarity_reports(out_dir, coll, seq.config.cutoff, two_sided, angles);
    outputs.insert(outputs.end(), {"collinearity.csv", "stationarity.csv", "summary.json"});

    ordered_json config = chanstat::analysis_config_json(seq.config);
    config["source"] = src.source_desc;
    config["two_sided"] = two_sided;
    write_manifest_next_to(out_dir, "pipeline", config, src.inputs, outputs, g, true);
    return 0;
}

int fail(const GlobalOpts &g, const std::string &kind, const std::string &message, int code) {
    if (g.errors_json) {
        ordered_json j;
        j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
        std::cerr << j.dump() << "\n";
    } else {
        std::cerr << "chanstat: " << kind << " error: " << message << "\n";
    }
    return code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"stationarity analysis of time-variant wireless channels"};
    app.set_version_flag("--version", chanstat::kVersion);
    app.require_subcommand(1);
    app.fallthrough(); // global flags may appear after the subcommand

    GlobalOpts g;
    app.add_flag("--no-timestamp", g.no_timestamp,
                 "omit timestamps from manifests (byte-reproducible output)");
    app.add_flag("--errors-json", g.errors_json, "report errors as JSON on stderr");

    // synth
    auto *synth = app.add_subcommand("synth", "synthesize a channel and write a CTF container");
    std::string synth_preset_name, synth_scenario, synth_out;
    synth->add_option("--preset", synth_preset_name, "named parameter set");
    synth->add_option("--scenario", synth_scenario, "scenario description file");
    synth->add_option("-o,--out", synth_out, "output CTF path")->required();

    // dpss
    auto *dpss = app.add_subcommand("dpss", "dump Slepian tapers and concentrations as CSV");
    int dpss_length = 25, dpss_count = 2;
    double dpss_w = 2.0;
    std::string dpss_out;
    dpss->add_option("--length", dpss_length, "taper length")->required();
    dpss->add_option("--w", dpss_w, "half-bandwidth in DFT bins")->required();
    dpss->add_option("--count", dpss_count, "number of tapers")->required();
    dpss->add_option("-o,--out", dpss_out, "output CSV path (default: stdout)");

    // lsf
    auto *lsf = app.add_subcommand("lsf", "estimate the scattering function sequence");
    std::string lsf_in, lsf_out, lsf_csv_dir;
    AnalysisOpts lsf_opts;
    lsf->add_option("--in", lsf_in, "input CTF container")->required();
    lsf->add_option("-o,--out", lsf_out, "output LSF container")->required();
    lsf->add_option("--csv-dir", lsf_csv_dir, "also write one CSV per tile into this directory");
    add_analysis_flags(lsf, lsf_opts);

    // collinearity
    auto *coll = app.add_subcommand("collinearity", "dual-time collinearity matrix as CSV");
    std::string coll_in, coll_out, coll_scenario;
    bool coll_angles = false;
    coll->add_option("--in", coll_in, "input LSF container")->required();
    coll->add_option("-o,--out", coll_out, "output CSV path")->required();
    coll->add_option("--scenario", coll_scenario, "scenario file for angle labels");
    coll->add_flag("--angles", coll_angles, "label columns with arc angles");

    // stationarity
    auto *stat = app.add_subcommand("stationarity", "stationarity time per region");
    std::string stat_in, stat_out_dir, stat_scenario;
    double stat_cutoff = 0.9;
    bool stat_two_sided = false, stat_angles = false;
    stat->add_option("--in", stat_in, "input LSF container")->required();
    stat->add_option("--out-dir", stat_out_dir, "output directory")->required();
    auto *stat_cutoff_opt =
        stat->add_option("--cutoff", stat_cutoff, "override the cutoff stored in the container");
    stat->add_flag("--two-sided", stat_two_sided, "extend runs backward as well as forward");
    stat->add_option("--scenario", stat_scenario, "scenario file for angle columns");
    stat->add_flag("--angles", stat_angles, "attach arc angles to the reports");

    // pipeline
    auto *pipe = app.add_subcommand("pipeline", "synth/ingest -> lsf -> collinearity -> stationarity");
    std::string pipe_preset, pipe_scenario, pipe_in, pipe_out_dir;
    AnalysisOpts pipe_opts;
    bool pipe_two_sided = false, pipe_angles = false;
    pipe->add_option("--preset", pipe_preset, "named parameter set");
    pipe->add_option("--scenario", pipe_scenario, "scenario description file");
    pipe->add_option("--in", pipe_in, "existing CTF container");
    pipe->add_option("--out-dir", pipe_out_dir, "output directory")->required();
    pipe->add_flag("--two-sided", pipe_two_sided, "extend runs backward as well as forward");
    pipe->add_flag("--angles", pipe_angles, "attach arc angles to the reports");
    add_analysis_flags(pipe, pipe_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(synth))
            return run_synth(synth_preset_name, synth_scenario, synth_out, g);
        if (app.got_subcommand(dpss))
            return run_dpss(dpss_length, dpss_w, dpss_count, dpss_out, g);
        if (app.got_subcommand(lsf))
            return run_lsf(lsf_in, lsf_opts, lsf_out, lsf_csv_dir, g);
        if (app.got_subcommand(coll))
            return run_collinearity(coll_in, coll_out, coll_scenario, coll_angles, g);
        if (app.got_subcommand(stat))
            return run_stationarity(stat_in, stat_out_dir, stat_cutoff,
                                    stat_cutoff_opt->count() > 0, stat_two_sided, stat_scenario,
                                    stat_angles, g);
        if (app.got_subcommand(pipe))
            return run_pipeline(pipe_preset, pipe_scenario, pipe_in, pipe_opts, pipe_out_dir,
                                pipe_two_sided, pipe_angles, g);
    } catch (const chanstat::ConfigError &e) {
        return fail(g, "config", e.what(), 2);
    } catch (const chanstat::FormatError &e) {
        return fail(g, "format", e.what(), 3);
    } catch (const chanstat::DegenerateError &e) {
        return fail(g, "degenerate", e.what(), 4);
    } catch (const std::exception &e) {
        return fail(g, "internal", e.what(), 1);
    }
    return 0;
}
