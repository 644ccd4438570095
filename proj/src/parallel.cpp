#include "progind/parallel.hpp"

#include <exception>

#include <omp.h>

namespace progind {

std::vector<OptimizedCandidate> optimize_batch_serial(const std::vector<Proposal>& proposals,
                                                      const ObservationTrace& trace, const VariableIndex& index,
                                                      const ErrorSpec& spec, const OptimizerConfig& config) {
    std::vector<OptimizedCandidate> out;
    out.reserve(proposals.size());
    for (const auto& p : proposals) out.push_back(optimize(p.program, p.params, trace, index, spec, config));
    return out;
}

std::vector<OptimizedCandidate> optimize_batch_parallel(const std::vector<Proposal>& proposals,
                                                        const ObservationTrace& trace, const VariableIndex& index,
                                                        const ErrorSpec& spec, const OptimizerConfig& config,
                                                        int workers) {
    std::vector<OptimizedCandidate> out(proposals.size());
    std::exception_ptr failure;
    const auto n = static_cast<long>(proposals.size());
    workers = workers > 0 ? workers : 1;

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long i = 0; i < n; ++i) {
        try {
            const auto& p = proposals[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(i)] = optimize(p.program, p.params, trace, index, spec, config);
        } catch (...) {
#pragma omp critical(progind_batch_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

int default_worker_count() { return omp_get_max_threads(); }

} // namespace progind
