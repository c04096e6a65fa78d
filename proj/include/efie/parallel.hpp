// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace efie {

/// Runs f(i) for i in [0, n). Work items must write to disjoint outputs;
/// callers reduce results afterwards in index order, which keeps output
/// independent of the thread count.
template <typename F>
void parallel_for(std::size_t n, bool parallel, F &&f)
{
   const std::size_t nthreads =
      parallel ? std::min<std::size_t>(n, std::max(2u, std::thread::hardware_concurrency())) : 1;
   if (nthreads <= 1)
   {
      for (std::size_t i = 0; i < n; ++i) { f(i); }
      return;
   }
   std::atomic<std::size_t> next{0};
   std::exception_ptr error;
   std::mutex error_mutex;
   {
      std::vector<std::jthread> pool;
      pool.reserve(nthreads);
      for (std::size_t t = 0; t < nthreads; ++t)
      {
         pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
               try
               {
                  f(i);
               }
               catch (...)
               {
                  std::lock_guard lock(error_mutex);
                  if (!error) { error = std::current_exception(); }
               }
            }
         });
      }
   }
   if (error) { std::rethrow_exception(error); }
}

} // namespace efie
