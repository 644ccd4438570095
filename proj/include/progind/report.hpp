#ifndef PROGIND_REPORT_HPP
#define PROGIND_REPORT_HPP

#include <cstdint>
#include <string>

#include "progind/search.hpp"

namespace progind {

/// Every tunable of an induction run, as read from a config file and flags.
struct RunConfig {
    double e_max = 0.01;
    double learning_rate = 0.2;
    double epsilon = 1e-8;
    int max_opt_iters = 1000;
    double tol = 1e-9;
    int max_iterations = 1000;
    ComplexityWeights weights;
    int top_k = 3;
    std::uint64_t seed = 0;
    int workers = 1;
    double init_variance = 0.1;

    void validate() const;
    SearchConfig search() const;
    ErrorSpec error_spec() const;
};

/// Reads a JSON object whose keys are the RunConfig field names; absent keys
/// keep their current value. "weights" is a [depth, params, vars] array.
void merge_run_config_json(RunConfig& cfg, const std::string& json_text);
RunConfig load_run_config_file(const std::string& path, RunConfig base = {});

std::string run_config_json(const RunConfig& cfg);

/// Text report: header, a [programs] section, a [config] echo and a [json]
/// section with the same content in machine-readable form.
std::string format_report(const SolutionSet& solutions, const RunConfig& cfg, const std::string& trace_path);

/// The [programs] section of a report, which is deterministic for a fixed
/// trace, config and seed.
std::string program_section(const std::string& report);

} // namespace progind

#endif
