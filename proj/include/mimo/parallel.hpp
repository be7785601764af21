// SPDX-License-Identifier: Apache-2.0
//
// mimo-manifold: array-independent MIMO channel models via manifold decomposition
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

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace mimo
{

namespace detail
{
inline std::atomic<std::size_t> &thread_override()
{
    static std::atomic<std::size_t> value{0};
    return value;
}
} // namespace detail

// Worker cap. 0 restores the default: MIMO_MANIFOLD_THREADS, else hardware concurrency.
inline void set_thread_count(std::size_t n) { detail::thread_override() = n; }

inline std::size_t thread_count()
{
    if (const auto n = detail::thread_override().load(); n > 0)
        return n;
    if (const char *env = std::getenv("MIMO_MANIFOLD_THREADS"))
    {
        try
        {
            const long v = std::stol(env);
            if (v > 0)
                return static_cast<std::size_t>(v);
        }
        catch (const std::exception &)
        {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Calls body(i) for i in [0, n). Each index is handled exactly once; callers write
// results into index-addressed slots, so output never depends on the worker count.
template <class Body>
void parallel_for(std::size_t n, Body &&body)
{
    const std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }

    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w)
    {
        pool.emplace_back([&, w] {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            try
            {
                for (std::size_t i = lo; i < hi; ++i)
                    body(i);
            }
            catch (...)
            {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool)
        t.join();
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

// Sums f(i) over [0, n) with a fixed block layout and block-ordered combination,
// so the floating-point result is the same for every worker count.
template <class T, class F>
T deterministic_sum(std::size_t n, const T &zero, F &&f)
{
    constexpr std::size_t kBlocks = 64;
    const std::size_t per_block = (n + kBlocks - 1) / kBlocks;
    std::vector<T> partial(kBlocks, zero);
    parallel_for(kBlocks, [&](std::size_t b) {
        const std::size_t hi = std::min(n, (b + 1) * per_block);
        for (std::size_t i = b * per_block; i < hi; ++i)
            partial[b] += f(i);
    });
    T total = zero;
    for (const auto &p : partial)
        total += p;
    return total;
}

} // namespace mimo
