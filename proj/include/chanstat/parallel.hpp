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

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chanstat {

/// Worker cap: CHANSTAT_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
inline unsigned max_workers() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0)
        n = 1;
    if (const char *env = std::getenv("CHANSTAT_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            n = static_cast<unsigned>(v > 1024 ? 1024 : v);
    }
    return n;
}

/// Runs fn(0..count-1) across worker threads. Each index is processed exactly
/// once; callers must write to disjoint slots so the assembled result does not
/// depend on scheduling. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, Fn &&fn) {
    const std::size_t workers = std::min<std::size_t>(max_workers(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto run = [&]() {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < count;)
                fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error)
                error = std::current_exception();
            next.store(count); // drain remaining work
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(run);
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace chanstat
