#pragma once

#include <atomic>
#include <functional>
#include <string>

#include "paraforge/backend.hpp"
#include "paraforge/cache.hpp"
#include "paraforge/synthesis.hpp"

namespace paraforge::detail_batch {

// Cache lookup, bounded transport retries with exponential backoff,
// cache write-back. Shared by the synthesis and judge batch drivers.
std::string generate_with_cache(GenerationBackend& backend, GenerationCache& cache,
                                const std::string& cache_key, const std::string& system_text,
                                const std::string& user_text, const BackendParams& params,
                                const BatchOptions& options, std::atomic<int>& backend_calls);

// Runs `work(i)` for i in [0, task_count) over at most `parallelism`
// threads.
void run_pool(int parallelism, std::size_t task_count, const std::function<void(std::size_t)>& work);

}  // namespace paraforge::detail_batch
