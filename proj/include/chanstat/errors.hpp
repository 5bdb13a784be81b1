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

#include <stdexcept>
#include <string>

namespace chanstat {

// Error taxonomy mirrors the CLI exit codes: config=2, format=3, degenerate=4.

/// Invalid parameters, dimensions or option combinations.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or truncated files (containers, scenario descriptions).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerically degenerate input, e.g. an all-zero scattering function tile.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace chanstat
