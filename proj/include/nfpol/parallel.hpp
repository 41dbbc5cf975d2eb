// SPDX-License-Identifier: Apache-2.0
//
// nfpol - near-field polarized focusing simulator
// Copyright (C) 2026 nfpol contributors
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
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nfpol
{
    inline unsigned resolve_thread_count(unsigned requested)
    {
        if (requested > 0)
            return requested;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1;
    }

    // Calls body(i) for every i in [0, count). Work is handed out in chunks to a pool of
    // threads; bodies must only write to slots owned by their index, so the result never
    // depends on the number of threads or on scheduling. The first exception thrown by
    // any body is rethrown on the calling thread.
    template <typename Body>
    void parallel_for(std::size_t count, unsigned threads, Body &&body, std::size_t chunk = 1)
    {
        const unsigned n_threads =
            static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(threads), std::max<std::size_t>(1, count / std::max<std::size_t>(chunk, 1))));
        if (n_threads <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }

        chunk = std::max<std::size_t>(chunk, 1);
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;

        auto worker = [&]()
        {
            try
            {
                for (;;)
                {
                    const std::size_t begin = next.fetch_add(chunk);
                    if (begin >= count)
                        return;
                    const std::size_t end = std::min(count, begin + chunk);
                    for (std::size_t i = begin; i < end; ++i)
                        body(i);
                }
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(count);
            }
        };

        std::vector<std::jthread> pool;
        pool.reserve(n_threads - 1);
        for (unsigned t = 1; t < n_threads; ++t)
            pool.emplace_back(worker);
        worker();
        pool.clear();

        if (error)
            std::rethrow_exception(error);
    }
}
