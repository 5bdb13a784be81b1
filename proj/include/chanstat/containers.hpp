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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>

#include "chanstat/ctf.hpp"
#include "chanstat/errors.hpp"
#include "chanstat/lsf.hpp"
#include "chanstat/numfmt.hpp"

namespace chanstat {

// Binary containers share one layout: a text header (magic line, key=value
// lines, a line reading "end") followed by a little-endian payload.
// CTF1 carries S*Q complex128 samples time-major; LSF1 carries K_t*N*M
// float64 values tile-major. docs/FORMATS.md has the full description.

namespace detail {

inline std::uint64_t to_le_bits(double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof(bits));
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap64(bits);
    return bits;
}

inline double from_le_bits(std::uint64_t bits) {
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap64(bits);
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

inline std::uint32_t to_le_bits32(float v) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, &v, sizeof(bits));
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap32(bits);
    return bits;
}

inline float from_le_bits32(std::uint32_t bits) {
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap32(bits);
    float v = 0.0f;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

inline void append_le_double(std::string &out, double v) {
    const std::uint64_t bits = to_le_bits(v);
    char raw[8];
    std::memcpy(raw, &bits, 8);
    out.append(raw, 8);
}

inline double read_le_double(const char *p) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, p, 8);
    return from_le_bits(bits);
}

inline float read_le_float(const char *p) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, p, 4);
    return from_le_bits32(bits);
}

struct ContainerHeader {
    std::map<std::string, std::string> keys;
    std::size_t payload_offset = 0;
};

inline ContainerHeader parse_container_header(const std::string &blob, std::string_view magic,
                                              const std::string &source) {
    ContainerHeader header;
    std::size_t pos = 0;
    bool first = true;
    bool terminated = false;
    while (pos < blob.size()) {
        const std::size_t eol = blob.find('\n', pos);
        if (eol == std::string::npos)
            break;
        const std::string_view line{blob.data() + pos, eol - pos};
        pos = eol + 1;
        if (first) {
            if (line != magic)
                throw FormatError(source + ": bad magic at offset 0: expected '" +
                                  std::string(magic) + "', got '" + std::string(line) + "'");
            first = false;
            continue;
        }
        if (line == "end") {
            terminated = true;
            break;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw FormatError(source + ": malformed header line '" + std::string(line) + "'");
        header.keys.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
    }
    if (first)
        throw FormatError(source + ": empty or truncated header (missing magic line)");
    if (!terminated)
        throw FormatError(source + ": header not terminated by an 'end' line");
    header.payload_offset = pos;
    return header;
}

inline const std::string &require_key(const ContainerHeader &h, const std::string &key,
                                      const std::string &source) {
    const auto it = h.keys.find(key);
    if (it == h.keys.end())
        throw FormatError(source + ": missing required header key '" + key + "'");
    return it->second;
}

inline double require_real_key(const ContainerHeader &h, const std::string &key,
                               const std::string &source) {
    const auto v = parse_real(require_key(h, key, source));
    if (!v)
        throw FormatError(source + ": header key '" + key + "' is not a number");
    return *v;
}

inline long long require_int_key(const ContainerHeader &h, const std::string &key,
                                 const std::string &source) {
    const auto v = parse_int(require_key(h, key, source));
    if (!v)
        throw FormatError(source + ": header key '" + key + "' is not an integer");
    return *v;
}

inline void require_fixed_key(const ContainerHeader &h, const std::string &key,
                              std::string_view expected, const std::string &source) {
    const std::string &got = require_key(h, key, source);
    if (got != expected)
        throw FormatError(source + ": unsupported " + key + " '" + got + "' (expected '" +
                          std::string(expected) + "')");
}

inline void check_payload_size(std::size_t actual, std::size_t expected, std::size_t offset,
                               const std::string &source) {
    if (actual < expected)
        throw FormatError(source + ": truncated payload: expected " + format_int(expected) +
                          " bytes at offset " + format_int(offset) + ", got " +
                          format_int(actual));
    if (actual > expected)
        throw FormatError(source + ": unexpected trailing data: expected " +
                          format_int(expected) + " payload bytes at offset " +
                          format_int(offset) + ", got " + format_int(actual));
}

inline std::string read_file_bytes(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError(path.string() + ": cannot open file");
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return blob;
}

} // namespace detail

/// Writes bytes to the destination atomically: a sibling temp file is filled
/// first and renamed over the target.
inline void write_file_atomic(const std::filesystem::path &path, const std::string &bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw FormatError(tmp.string() + ": cannot open for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw FormatError(tmp.string() + ": write failed");
    }
    std::filesystem::rename(tmp, path);
}

/// Serializes a channel as a CTF1 container (always complex128).
inline std::string encode_ctf(const ChannelTransferFunction &ctf) {
    ctf.validate();
    const Eigen::Index s_total = ctf.num_snapshots();
    const Eigen::Index q_total = ctf.num_subcarriers();

    std::string out;
    out.reserve(256 + static_cast<std::size_t>(s_total) * q_total * 16);
    out += "CTF1\n";
    out += "S=" + format_int(s_total) + "\n";
    out += "Q=" + format_int(q_total) + "\n";
    out += "T_s=" + format_real(ctf.sample_time) + "\n";
    out += "f_s=" + format_real(ctf.sample_freq) + "\n";
    out += "f_c=" + format_real(ctf.carrier_freq) + "\n";
    out += "encoding=complex128\n";
    out += "byte_order=little-endian\n";
    out += "layout=time-major\n";
    out += "end\n";
    for (Eigen::Index s = 0; s < s_total; ++s)
        for (Eigen::Index q = 0; q < q_total; ++q) {
            detail::append_le_double(out, ctf.samples(s, q).real());
            detail::append_le_double(out, ctf.samples(s, q).imag());
        }
    return out;
}

inline void write_ctf(const ChannelTransferFunction &ctf, const std::filesystem::path &path) {
    write_file_atomic(path, encode_ctf(ctf));
}

/// Parses a CTF1 container. complex64 payloads are up-converted to double.
inline ChannelTransferFunction decode_ctf(const std::string &blob, const std::string &source) {
    const auto header = detail::parse_container_header(blob, "CTF1", source);
    const long long s_total = detail::require_int_key(header, "S", source);
    const long long q_total = detail::require_int_key(header, "Q", source);
    if (s_total < 1 || q_total < 1)
        throw FormatError(source + ": S and Q must be >= 1");

    ChannelTransferFunction ctf;
    ctf.sample_time = detail::require_real_key(header, "T_s", source);
    ctf.sample_freq = detail::require_real_key(header, "f_s", source);
    ctf.carrier_freq = detail::require_real_key(header, "f_c", source);
    detail::require_fixed_key(header, "byte_order", "little-endian", source);
    detail::require_fixed_key(header, "layout", "time-major", source);
    const std::string &encoding = detail::require_key(header, "encoding", source);
    std::size_t item_bytes = 0;
    if (encoding == "complex128")
        item_bytes = 16;
    else if (encoding == "complex64")
        item_bytes = 8;
    else
        throw FormatError(source + ": unsupported encoding '" + encoding + "'");

    const std::size_t count = static_cast<std::size_t>(s_total) * static_cast<std::size_t>(q_total);
    detail::check_payload_size(blob.size() - header.payload_offset, count * item_bytes,
                               header.payload_offset, source);

    ctf.samples.resize(s_total, q_total);
    const char *p = blob.data() + header.payload_offset;
    for (long long s = 0; s < s_total; ++s)
        for (long long q = 0; q < q_total; ++q) {
            double re, im;
            if (item_bytes == 16) {
                re = detail::read_le_double(p);
                im = detail::read_le_double(p + 8);
            } else {
                re = static_cast<double>(detail::read_le_float(p));
                im = static_cast<double>(detail::read_le_float(p + 4));
            }
            ctf.samples(s, q) = {re, im};
            p += item_bytes;
        }
    try {
        ctf.validate();
    } catch (const ConfigError &e) {
        throw FormatError(source + ": " + e.what());
    }
    return ctf;
}

inline ChannelTransferFunction read_ctf(const std::filesystem::path &path) {
    return decode_ctf(detail::read_file_bytes(path), path.string());
}

/// Serializes a scattering function sequence as an LSF1 container.
inline std::string encode_lsf_sequence(const LsfSequence &seq) {
    if (seq.lsfs.empty())
        throw ConfigError("cannot encode an empty scattering function sequence");
    const Eigen::Index n = seq.lsfs.front().values.rows();
    const Eigen::Index m = seq.lsfs.front().values.cols();

    std::string out;
    out.reserve(256 + seq.lsfs.size() * static_cast<std::size_t>(n) * m * 8);
    out += "LSF1\n";
    out += "K_t=" + format_int(seq.lsfs.size()) + "\n";
    out += "N=" + format_int(n) + "\n";
    out += "M=" + format_int(m) + "\n";
    out += "T_s=" + format_real(seq.sample_time) + "\n";
    out += "hop=" + format_int(seq.config.time_hop) + "\n";
    out += "wt=" + format_real(seq.config.taper_time.half_bandwidth_bins) + "\n";
    out += "tapers_t=" + format_int(seq.config.taper_time.count) + "\n";
    out += "wf=" + format_real(seq.config.taper_freq.half_bandwidth_bins) + "\n";
    out += "tapers_f=" + format_int(seq.config.taper_freq.count) + "\n";
    out += "cutoff=" + format_real(seq.config.cutoff) + "\n";
    out += "encoding=float64\n";
    out += "byte_order=little-endian\n";
    out += "layout=tile-major\n";
    out += "end\n";
    for (const auto &lsf : seq.lsfs) {
        if (lsf.values.rows() != n || lsf.values.cols() != m)
            throw ConfigError("inconsistent scattering function shapes in sequence");
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index r = 0; r < m; ++r)
                detail::append_le_double(out, lsf.values(p, r));
    }
    return out;
}

inline void write_lsf_sequence(const LsfSequence &seq, const std::filesystem::path &path) {
    write_file_atomic(path, encode_lsf_sequence(seq));
}

inline LsfSequence decode_lsf_sequence(const std::string &blob, const std::string &source) {
    const auto header = detail::parse_container_header(blob, "LSF1", source);
    const long long k_total = detail::require_int_key(header, "K_t", source);
    const long long n = detail::require_int_key(header, "N", source);
    const long long m = detail::require_int_key(header, "M", source);
    if (k_total < 1 || n < 1 || m < 1)
        throw FormatError(source + ": K_t, N and M must be >= 1");
    detail::require_fixed_key(header, "encoding", "float64", source);
    detail::require_fixed_key(header, "byte_order", "little-endian", source);
    detail::require_fixed_key(header, "layout", "tile-major", source);

    LsfSequence seq;
    seq.sample_time = detail::require_real_key(header, "T_s", source);
    seq.config.lctf_time_len = static_cast<int>(n);
    seq.config.lctf_freq_len = static_cast<int>(m);
    seq.config.time_hop = static_cast<int>(detail::require_int_key(header, "hop", source));
    seq.config.taper_time.half_bandwidth_bins = detail::require_real_key(header, "wt", source);
    seq.config.taper_time.count =
        static_cast<int>(detail::require_int_key(header, "tapers_t", source));
    seq.config.taper_freq.half_bandwidth_bins = detail::require_real_key(header, "wf", source);
    seq.config.taper_freq.count =
        static_cast<int>(detail::require_int_key(header, "tapers_f", source));
    seq.config.cutoff = detail::require_real_key(header, "cutoff", source);

    const std::size_t count = static_cast<std::size_t>(k_total) * static_cast<std::size_t>(n) *
                              static_cast<std::size_t>(m);
    detail::check_payload_size(blob.size() - header.payload_offset, count * 8,
                               header.payload_offset, source);

    seq.lsfs.resize(static_cast<std::size_t>(k_total));
    const char *p = blob.data() + header.payload_offset;
    for (long long k = 0; k < k_total; ++k) {
        Eigen::MatrixXd values(n, m);
        for (long long row = 0; row < n; ++row)
            for (long long col = 0; col < m; ++col) {
                const double v = detail::read_le_double(p);
                p += 8;
                if (!(v >= 0.0) || !std::isfinite(v))
                    throw FormatError(source + ": negative or non-finite value in tile k_t=" +
                                      format_int(k + 1));
                values(row, col) = v;
            }
        seq.lsfs[static_cast<std::size_t>(k)].values = std::move(values);
    }
    return seq;
}

inline LsfSequence read_lsf_sequence(const std::filesystem::path &path) {
    return decode_lsf_sequence(detail::read_file_bytes(path), path.string());
}

} // namespace chanstat
