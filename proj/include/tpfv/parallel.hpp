#pragma once

#include <exception>
#include <thread>
#include <vector>

namespace tpfv {

/*--- Chunked index-range parallelism. Results must be written to disjoint
      per-index slots; the chunking never influences values, so any worker
      count produces identical output. With threads <= 1 the body runs
      inline, which is the fast path for the bundled single-core runs. ---*/

template <typename Body>
void parallel_for(int n, int threads, Body&& body) {
    if (threads <= 1 || n < 2 * threads) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const int begin = static_cast<int>(static_cast<long long>(n) * t / threads);
        const int end = static_cast<int>(static_cast<long long>(n) * (t + 1) / threads);
        pool.emplace_back([&body, &errors, t, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace tpfv
