#pragma once

#include <cstdint>
#include <atomic>
#include <stdexcept>
#include <string>

namespace tpfv {

/*--- Failure taxonomy. Everything thrown by the library derives from
      SolverError so drivers can map failures onto process exit codes. ---*/

enum class ErrorCode {
    domain_error,        // argument outside the physical domain (rho <= 0, ...)
    non_hyperbolic,      // p + pi <= 0, sound speed undefined
    invariant_violation, // alpha sum broken, inconsistent inputs
    degenerate_wave,     // HLLC wave fan collapsed (S_K == S*)
    hugoniot_limit,      // compression ratio at the stiffened-gas Hugoniot pole
    relaxation_failure,  // pressure relaxation found no admissible root
    positivity,          // internal energy below the stiffened-gas floor
    mesh_error,          // degenerate geometry
    config_error,        // bad run configuration
    io_error,            // filesystem problem
    solver_abort         // inadmissible state produced during time stepping
};

class SolverError : public std::runtime_error {
public:
    SolverError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/*--- Event counters. These never change results; they record how often the
      guarded fallback paths fired during a run. Atomics keep the counts
      race-free under threaded sweeps; the sums do not depend on the worker
      count. ---*/

struct RunStats {
    std::atomic<std::uint64_t> alpha_clamps{0};        // volume fraction pushed back into [eps, 1-eps]
    std::atomic<std::uint64_t> first_order_fallbacks{0}; // per-variable reconstruction fallbacks
    std::atomic<std::uint64_t> collinear_stencils{0};   // gradient stencil too degenerate, used zero
    std::atomic<std::uint64_t> sstar_fallbacks{0};      // contact speed from degenerate denominator
    std::atomic<std::uint64_t> sonic_rarefactions{0};   // faces where a rarefaction straddles the interface
    std::atomic<std::uint64_t> relax_calls{0};
    std::atomic<std::uint64_t> relax_iterations{0};
    std::atomic<std::uint64_t> relax_max_iterations{0}; // worst single-cell iteration count

    void note_relax(std::uint64_t iters) {
        relax_calls.fetch_add(1, std::memory_order_relaxed);
        relax_iterations.fetch_add(iters, std::memory_order_relaxed);
        std::uint64_t prev = relax_max_iterations.load(std::memory_order_relaxed);
        while (prev < iters &&
               !relax_max_iterations.compare_exchange_weak(prev, iters, std::memory_order_relaxed)) {
        }
    }

    void reset() {
        alpha_clamps = 0;
        first_order_fallbacks = 0;
        collinear_stencils = 0;
        sstar_fallbacks = 0;
        sonic_rarefactions = 0;
        relax_calls = 0;
        relax_iterations = 0;
        relax_max_iterations = 0;
    }
};

} // namespace tpfv
