// Copyright 2026 The Cobit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cobit {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is split into
/// contiguous chunks; the first exception thrown by any task is rethrown.
template <typename Fn>
void parallel_for(size_t n, int jobs, Fn &&fn) {
    size_t workers = std::clamp<size_t>(static_cast<size_t>(std::max(jobs, 1)), 1, std::max<size_t>(n, 1));
    if (workers == 1) {
        for (size_t i = 0; i < n; i++) {
            fn(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    size_t chunk = (n + workers - 1) / workers;
    for (size_t w = 0; w < workers; w++) {
        size_t begin = w * chunk;
        size_t end = std::min(n, begin + chunk);
        threads.emplace_back([&, begin, end] {
            try {
                for (size_t i = begin; i < end; i++) {
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace cobit
