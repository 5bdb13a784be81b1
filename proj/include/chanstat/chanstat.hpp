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

// Umbrella header: the full analysis pipeline from channel synthesis to
// stationarity reports.

#include "chanstat/containers.hpp"
#include "chanstat/ctf.hpp"
#include "chanstat/digest.hpp"
#include "chanstat/dpss.hpp"
#include "chanstat/errors.hpp"
#include "chanstat/lsf.hpp"
#include "chanstat/manifest.hpp"
#include "chanstat/presets.hpp"
#include "chanstat/report.hpp"
#include "chanstat/scenario_io.hpp"
#include "chanstat/stationarity.hpp"
#include "chanstat/synth.hpp"
#include "chanstat/version.hpp"
