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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "chanstat/errors.hpp"
#include "chanstat/numfmt.hpp"

namespace chanstat {

/// Discrete prolate spheroidal sequences of one length/half-bandwidth, most
/// concentrated first. Tapers are unit-norm and pairwise orthogonal; each
/// concentration is the fraction of the taper's spectral energy inside the
/// normalized band |f| <= W/length, always in (0,1) and strictly descending.
struct TaperSet {
    int length = 0;
    double half_bandwidth_bins = 0.0; // W
    std::vector<Eigen::VectorXd> tapers;
    std::vector<double> concentrations;

    int count() const { return static_cast<int>(tapers.size()); }
};

namespace detail {

inline void check_dpss_args(int length, double w, int count) {
    if (length < 1)
        throw ConfigError("taper length must be >= 1, got " + format_int(length));
    if (!(w > 0.0) || !(w < length / 2.0))
        throw ConfigError("half-bandwidth W=" + format_real(w) +
                          " must satisfy 0 < W < length/2 with length=" + format_int(length));
    const int shannon = std::max(static_cast<int>(std::floor(2.0 * w)), 1);
    if (count < 1 || count > shannon)
        throw ConfigError("taper count " + format_int(count) +
                          " outside 1..max(floor(2W),1)=" + format_int(shannon));
}

/// Concentration kernel entry for lag d: sin(2*pi*(W/L)*d)/(pi*d), 2W/L at d=0.
inline double concentration_kernel(double w_norm, long d) {
    if (d == 0)
        return 2.0 * w_norm;
    const double x = static_cast<double>(d);
    return std::sin(2.0 * std::numbers::pi * w_norm * x) / (std::numbers::pi * x);
}

/// Rayleigh quotient u' A u of the concentration kernel, evaluated via the
/// lag autocorrelation of u so the dense kernel is never materialized.
inline double taper_concentration(const Eigen::VectorXd &u, double w) {
    const Eigen::Index l = u.size();
    const double w_norm = w / static_cast<double>(l);
    double acc = concentration_kernel(w_norm, 0) * u.squaredNorm();
    for (Eigen::Index d = 1; d < l; ++d) {
        const double r = u.head(l - d).dot(u.tail(l - d));
        acc += 2.0 * concentration_kernel(w_norm, d) * r;
    }
    // The kernel's spectrum lies strictly inside (0,1); trim roundoff dust.
    return std::min(acc, std::nextafter(1.0, 0.0));
}

/// Deterministic sign: the first element that is significant relative to the
/// peak is made positive. A relative threshold keeps the choice stable across
/// eigensolvers whose edge values differ only by noise.
inline void canonicalize_sign(Eigen::VectorXd &v) {
    const double threshold = 1e-8 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > threshold) {
            if (v[i] < 0.0)
                v = -v;
            return;
        }
    }
}

inline void sort_by_concentration(TaperSet &set) {
    std::vector<int> order(set.tapers.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return set.concentrations[a] > set.concentrations[b]; });
    std::vector<Eigen::VectorXd> tapers;
    std::vector<double> conc;
    tapers.reserve(order.size());
    conc.reserve(order.size());
    for (int idx : order) {
        tapers.push_back(std::move(set.tapers[idx]));
        conc.push_back(set.concentrations[idx]);
    }
    set.tapers = std::move(tapers);
    set.concentrations = std::move(conc);
}

} // namespace detail

/// Generates the `count` most concentrated Slepian tapers of the given length
/// and half-bandwidth (in DFT bins, so the normalized band edge is W/length).
///
/// Uses the symmetric tridiagonal operator that commutes with the
/// concentration kernel: diagonal ((L-1-2k)/2)^2 * cos(2*pi*W/L), off-diagonal
/// k*(L-k)/2. Its top eigenvectors are the tapers; the concentrations are then
/// read back as quadratic forms against the kernel itself, which keeps them
/// directly comparable with the dense reference route.
inline TaperSet generate_dpss(int length, double half_bandwidth_bins, int count) {
    detail::check_dpss_args(length, half_bandwidth_bins, count);

    TaperSet out;
    out.length = length;
    out.half_bandwidth_bins = half_bandwidth_bins;

    if (length == 1) {
        out.tapers.emplace_back(Eigen::VectorXd::Ones(1));
        out.concentrations.push_back(2.0 * half_bandwidth_bins);
        return out;
    }

    const double cos_term = std::cos(2.0 * std::numbers::pi * half_bandwidth_bins / length);
    Eigen::VectorXd diag(length), sub(length - 1);
    for (int k = 0; k < length; ++k) {
        const double half_offset = (length - 1 - 2.0 * k) / 2.0;
        diag[k] = half_offset * half_offset * cos_term;
    }
    for (int k = 1; k < length; ++k)
        sub[k - 1] = k * (length - k) / 2.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("tridiagonal eigendecomposition did not converge");

    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd taper = solver.eigenvectors().col(length - 1 - i);
        detail::canonicalize_sign(taper);
        out.concentrations.push_back(detail::taper_concentration(taper, half_bandwidth_bins));
        out.tapers.push_back(std::move(taper));
    }
    detail::sort_by_concentration(out);
    return out;
}

/// Reference route: dense eigendecomposition of the L x L concentration kernel
/// sin(2*pi*(W/L)*(m-n))/(pi*(m-n)). Slow and capped at length 512; used to
/// cross-check generate_dpss, never on the estimation path.
inline TaperSet dpss_dense(int length, double half_bandwidth_bins, int count) {
    detail::check_dpss_args(length, half_bandwidth_bins, count);
    if (length > 512)
        throw ConfigError("dense DPSS reference limited to length <= 512, got " + format_int(length));

    TaperSet out;
    out.length = length;
    out.half_bandwidth_bins = half_bandwidth_bins;

    const double w_norm = half_bandwidth_bins / length;
    Eigen::MatrixXd kernel(length, length);
    for (int m = 0; m < length; ++m)
        for (int n = 0; n <= m; ++n) {
            const double v = detail::concentration_kernel(w_norm, m - n);
            kernel(m, n) = v;
            kernel(n, m) = v;
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense kernel eigendecomposition did not converge");

    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd taper = solver.eigenvectors().col(length - 1 - i);
        detail::canonicalize_sign(taper);
        out.concentrations.push_back(solver.eigenvalues()(length - 1 - i));
        out.tapers.push_back(std::move(taper));
    }
    return out;
}

/// Separable 2D window G[s,q] = u[s] * v[q]. Both factors must be unit-norm,
/// which makes the Frobenius norm of G exactly one.
inline Eigen::MatrixXd make_tf_window(const Eigen::VectorXd &u, const Eigen::VectorXd &v) {
    if (std::abs(u.norm() - 1.0) > 1e-6 || std::abs(v.norm() - 1.0) > 1e-6)
        throw ConfigError("window factors must be unit-norm vectors");
    return u * v.transpose();
}

} // namespace chanstat
