#ifndef PROGIND_TRACE_HPP
#define PROGIND_TRACE_HPP

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "progind/ast.hpp"
#include "progind/schema.hpp"

namespace progind {

struct TraceStep {
    int t = 0;
    std::map<std::string, Vec> vars;
    std::string action;
    Vec theta;

    bool operator==(const TraceStep&) const = default;
};

/// Validated state-action trace with 1-based timesteps. Variable values are
/// stored column-wise so the interpreter can read them by index.
class ObservationTrace {
public:
    ObservationTrace() = default;

    /// Throws Error on schema violations.
    ObservationTrace(TraceSchema schema, std::vector<TraceStep> steps);

    const TraceSchema& schema() const { return schema_; }
    const std::vector<TraceStep>& steps() const { return steps_; }
    int length() const { return static_cast<int>(steps_.size()); }

    /// Variable names in schema (lexicographic) order; ids index into this.
    const std::vector<std::string>& variable_names() const { return var_names_; }
    int variable_id(const std::string& name) const;
    int variable_dim(int id) const { return var_dims_[static_cast<std::size_t>(id)]; }

    std::span<const double> value(int var_id, int t) const;
    const std::string& action(int t) const { return step(t).action; }
    std::span<const double> theta(int t) const;
    const TraceStep& step(int t) const;

    bool operator==(const ObservationTrace& o) const {
        return schema_ == o.schema_ && steps_ == o.steps_;
    }

private:
    TraceSchema schema_;
    std::vector<TraceStep> steps_;
    std::vector<std::string> var_names_;
    std::vector<int> var_dims_;
    std::vector<std::vector<double>> columns_;  // per variable, T * dim values
};

struct MemoryState {
    int t = 0;
    std::map<std::string, Vec> vars;
    ParamValues params;
};

ObservationTrace load_trace(std::istream& in);
ObservationTrace load_trace_file(const std::string& path);
void save_trace(const ObservationTrace& trace, std::ostream& out);
void save_trace_file(const ObservationTrace& trace, const std::string& path);

/// Memory as seen by the program at step `t` (1-based).
MemoryState memory_at(const ObservationTrace& trace, int t, const ParamValues& params);

} // namespace progind

#endif
