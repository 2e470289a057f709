#pragma once

#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace curvstab {

/// Malformed arguments: bad dimensions, out-of-range orders, unparsable input.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Evaluation requested outside a patch domain or off the grid.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Division by a vanishing quantity the caller must handle (e.g. |A| = 0).
struct division_by_zero : std::domain_error {
    using std::domain_error::domain_error;
};

/// Solver breakdown, degenerate metric, non-finite intermediate values.
struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation requires analytic derivatives the oracle cannot supply.
struct unsupported_precision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Worker count for data-parallel loops; capped by CURVSTAB_THREADS.
inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("CURVSTAB_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return hw;
}

/// Static partition of [0, count) over workers. Each index is visited exactly
/// once and writes must target disjoint slots, so the result is independent of
/// scheduling. Falls back to a serial loop for small counts.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned workers = worker_count();
    if (workers <= 1 || count < 256) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail
}  // namespace curvstab
