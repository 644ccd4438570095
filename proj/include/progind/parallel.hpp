#ifndef PROGIND_PARALLEL_HPP
#define PROGIND_PARALLEL_HPP

#include <vector>

#include "progind/optimizer.hpp"

namespace progind {

/// A program waiting to be optimised.
struct Proposal {
    Program program;
    ParamValues params;
};

/// Reference implementation: optimises proposals one after another.
std::vector<OptimizedCandidate> optimize_batch_serial(const std::vector<Proposal>& proposals,
                                                      const ObservationTrace& trace, const VariableIndex& index,
                                                      const ErrorSpec& spec, const OptimizerConfig& config);

/// OpenMP version. Output order matches input order and every element is
/// identical to the serial result, whatever the worker count.
std::vector<OptimizedCandidate> optimize_batch_parallel(const std::vector<Proposal>& proposals,
                                                        const ObservationTrace& trace, const VariableIndex& index,
                                                        const ErrorSpec& spec, const OptimizerConfig& config,
                                                        int workers);

int default_worker_count();

} // namespace progind

#endif
